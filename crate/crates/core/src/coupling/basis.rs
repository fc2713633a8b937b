use std::collections::BTreeMap;

use crate::error::{domain, Result};
use crate::exact::HalfInt;
use crate::repn::{check_projection, check_spin};

/// Product basis `|s₁ m₁⟩|s₂ m₂⟩`.
///
/// Index `k₁·(2s₂+1) + k₂`, where `m₁ = s₁ − k₁` and `m₂ = s₂ − k₂`, so both
/// particles run from their top state down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UncoupledBasis {
    s1: HalfInt,
    s2: HalfInt,
}

impl UncoupledBasis {
    pub fn new(s1: HalfInt, s2: HalfInt) -> Result<Self> {
        check_spin(s1)?;
        check_spin(s2)?;
        Ok(UncoupledBasis { s1, s2 })
    }

    pub fn s1(&self) -> HalfInt {
        self.s1
    }

    pub fn s2(&self) -> HalfInt {
        self.s2
    }

    pub fn dim(&self) -> usize {
        self.s1.multiplicity() * self.s2.multiplicity()
    }

    pub fn index(&self, m1: HalfInt, m2: HalfInt) -> Result<usize> {
        check_projection(self.s1, m1)?;
        check_projection(self.s2, m2)?;
        let k1 = ((self.s1 - m1).twice() / 2) as usize;
        let k2 = ((self.s2 - m2).twice() / 2) as usize;
        Ok(k1 * self.s2.multiplicity() + k2)
    }

    /// `(m₁, m₂)` of basis index `k`.
    pub fn ket(&self, k: usize) -> (HalfInt, HalfInt) {
        let n2 = self.s2.multiplicity();
        let (k1, k2) = (k / n2, k % n2);
        (self.s1 - HalfInt::from_int(k1 as i64), self.s2 - HalfInt::from_int(k2 as i64))
    }

    pub fn kets(&self) -> impl Iterator<Item = (HalfInt, HalfInt)> + '_ {
        (0..self.dim()).map(|k| self.ket(k))
    }
}

/// Coupled basis `|s m⟩`: blocks by `s` descending, `m` descending within a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoupledBasis {
    s1: HalfInt,
    s2: HalfInt,
}

impl CoupledBasis {
    pub fn new(s1: HalfInt, s2: HalfInt) -> Result<Self> {
        check_spin(s1)?;
        check_spin(s2)?;
        Ok(CoupledBasis { s1, s2 })
    }

    pub fn s1(&self) -> HalfInt {
        self.s1
    }

    pub fn s2(&self) -> HalfInt {
        self.s2
    }

    pub fn dim(&self) -> usize {
        self.s1.multiplicity() * self.s2.multiplicity()
    }

    /// `(s, m)` labels in enumeration order.
    pub fn labels(&self) -> Vec<(HalfInt, HalfInt)> {
        decompose(self.s1, self.s2).into_iter().flat_map(|s| s.descending().map(move |m| (s, m))).collect()
    }

    pub fn index(&self, s: HalfInt, m: HalfInt) -> Result<usize> {
        check_coupled_spin(self.s1, self.s2, s)?;
        check_projection(s, m)?;
        // Blocks above s hold Σ (2s'+1) states.
        let top = self.s1 + self.s2;
        let before: i64 =
            top.descending().take_while(|&t| t > s).filter(|t| !t.is_negative()).map(|t| t.twice() + 1).sum();
        Ok(before as usize + ((s - m).twice() / 2) as usize)
    }
}

/// Validates that `s` occurs in `s₁ ⊗ s₂`.
pub(crate) fn check_coupled_spin(s1: HalfInt, s2: HalfInt, s: HalfInt) -> Result<()> {
    check_spin(s1)?;
    check_spin(s2)?;
    if !s.same_parity(s1 + s2) {
        return Err(domain(format!("s = {s} has the wrong parity for {s1} ⊗ {s2}")));
    }
    if s < (s1 - s2).abs() || s > s1 + s2 {
        return Err(domain(format!("s = {s} outside [{}, {}] for {s1} ⊗ {s2}", (s1 - s2).abs(), s1 + s2)));
    }
    Ok(())
}

/// Number of product kets with `m₁ + m₂ = m`.
///
/// `2·min(s₁,s₂) + 1` on the plateau `|m| ≤ |s₁ − s₂|`, then one fewer per unit
/// of `|m|`, reaching zero beyond `s₁ + s₂`.
pub fn degeneracy(s1: HalfInt, s2: HalfInt, m: HalfInt) -> Result<u64> {
    check_spin(s1)?;
    check_spin(s2)?;
    let top = s1 + s2;
    if !m.same_parity(top) {
        return Err(domain(format!("m = {m} has the wrong parity for {s1} ⊗ {s2}")));
    }
    if m.abs() > top {
        return Ok(0);
    }
    let plateau = s1.min(s2).twice() + 1;
    let edge = (top - m.abs()).twice() / 2 + 1;
    Ok(plateau.min(edge) as u64)
}

/// Irreducible content of `s₁ ⊗ s₂`: `s₁+s₂, s₁+s₂−1, …, |s₁−s₂|`.
pub fn decompose(s1: HalfInt, s2: HalfInt) -> Vec<HalfInt> {
    let low = (s1 - s2).abs();
    (s1 + s2).descending().take_while(|&s| s >= low).collect()
}

/// Irreducible content of an iterated tensor product, with multiplicities,
/// ordered by `s` descending.
pub fn decompose_many(spins: &[HalfInt]) -> Result<Vec<(HalfInt, u64)>> {
    let (first, rest) = spins.split_first().ok_or_else(|| domain("no spins to couple"))?;
    for &s in spins {
        check_spin(s)?;
    }
    let mut content: BTreeMap<HalfInt, u64> = BTreeMap::from([(*first, 1)]);
    for &next in rest {
        let mut coupled = BTreeMap::new();
        for (&s, &mult) in &content {
            for t in decompose(s, next) {
                *coupled.entry(t).or_insert(0) += mult;
            }
        }
        content = coupled;
    }
    Ok(content.into_iter().rev().collect())
}
