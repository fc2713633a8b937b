use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exact::{HalfInt, SqrtRational};
use crate::repn::{check_projection, ladder_factor, Ladder};

use super::{check_coupled_spin, decompose, UncoupledBasis};

/// One coefficient `⟨s₁m₁; s₂m₂|s m⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgTerm {
    pub m1: HalfInt,
    pub m2: HalfInt,
    pub coeff: SqrtRational,
}

/// A coupled state `|s m⟩` expanded in product kets, nonzero terms only,
/// ordered by `m₁` descending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoupledState {
    pub m: HalfInt,
    pub terms: Vec<CgTerm>,
}

impl CoupledState {
    /// `Σ coeff²`.
    pub fn norm_squared(&self) -> BigRational {
        self.terms.iter().map(|t| t.coeff.square()).sum()
    }

    pub fn coefficient(&self, m1: HalfInt) -> SqrtRational {
        self.terms.iter().find(|t| t.m1 == m1).map_or_else(SqrtRational::zero, |t| t.coeff.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgBlock {
    pub s: HalfInt,
    pub states: Vec<CoupledState>,
}

/// All Clebsch–Gordan coefficients of `s₁ ⊗ s₂`: one block per `s` from
/// `s₁+s₂` down to `|s₁−s₂|`, each holding the states `m = s … −s`.
///
/// Deserialization checks the layout, the `m₁ + m₂ = m` support, nonzero
/// terms and unit norms. It does not check the sign convention, so tables in
/// either closed-form convention can be read back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CgTableJson")]
pub struct CgTable {
    s1: HalfInt,
    s2: HalfInt,
    blocks: Vec<CgBlock>,
}

#[derive(Deserialize)]
struct CgTableJson {
    s1: HalfInt,
    s2: HalfInt,
    blocks: Vec<CgBlock>,
}

impl TryFrom<CgTableJson> for CgTable {
    type Error = Error;

    fn try_from(raw: CgTableJson) -> Result<Self> {
        CgTable::from_blocks(raw.s1, raw.s2, raw.blocks)
    }
}

impl CgTable {
    pub(crate) fn from_blocks(s1: HalfInt, s2: HalfInt, blocks: Vec<CgBlock>) -> Result<Self> {
        let spins = decompose(s1, s2);
        check_coupled_spin(s1, s2, s1 + s2)?;
        if blocks.iter().map(|b| b.s).ne(spins.iter().copied()) {
            return Err(domain(format!("blocks of {s1} ⊗ {s2} must run over {spins:?}")));
        }
        for block in &blocks {
            if block.states.iter().map(|st| st.m).ne(block.s.descending()) {
                return Err(domain(format!("block s = {} must list m from s down to -s", block.s)));
            }
            for state in &block.states {
                let mut prev: Option<HalfInt> = None;
                for t in &state.terms {
                    check_projection(s1, t.m1)?;
                    check_projection(s2, t.m2)?;
                    if t.m1 + t.m2 != state.m || t.coeff.is_zero() || prev.is_some_and(|p| p <= t.m1) {
                        return Err(domain(format!(
                            "bad term ({}, {}) in |{} {}⟩",
                            t.m1, t.m2, block.s, state.m
                        )));
                    }
                    prev = Some(t.m1);
                }
                if state.norm_squared() != BigRational::from_integer(1.into()) {
                    return Err(Error::NotNormalized(format!("|{} {}⟩", block.s, state.m)));
                }
            }
        }
        Ok(CgTable { s1, s2, blocks })
    }

    pub fn s1(&self) -> HalfInt {
        self.s1
    }

    pub fn s2(&self) -> HalfInt {
        self.s2
    }

    pub fn blocks(&self) -> &[CgBlock] {
        &self.blocks
    }

    pub fn block(&self, s: HalfInt) -> Option<&CgBlock> {
        self.blocks.iter().find(|b| b.s == s)
    }

    pub fn state(&self, s: HalfInt, m: HalfInt) -> Option<&CoupledState> {
        self.block(s)?.states.iter().find(|st| st.m == m)
    }

    /// Iterates `(s, state)` in coupled-basis order.
    pub fn states(&self) -> impl Iterator<Item = (HalfInt, &CoupledState)> {
        self.blocks.iter().flat_map(|b| b.states.iter().map(move |st| (b.s, st)))
    }

    /// `⟨s₁m₁; s₂m₂|s m⟩`; zero when `m₁ + m₂ ≠ m`.
    pub fn coefficient(&self, s: HalfInt, m: HalfInt, m1: HalfInt, m2: HalfInt) -> Result<SqrtRational> {
        check_quantum_numbers(self.s1, self.s2, s, m, m1, m2)?;
        if m1 + m2 != m {
            return Ok(SqrtRational::zero());
        }
        let state = self.state(s, m).ok_or_else(|| Error::Internal(format!("table lacks |{s} {m}⟩")))?;
        Ok(state.coefficient(m1))
    }

    /// The state `|s m⟩` as a dense vector over the product basis.
    pub fn uncoupled_vector(&self, s: HalfInt, m: HalfInt) -> Result<Vec<SqrtRational>> {
        check_coupled_spin(self.s1, self.s2, s)?;
        check_projection(s, m)?;
        let basis = UncoupledBasis::new(self.s1, self.s2)?;
        let mut out = vec![SqrtRational::zero(); basis.dim()];
        let state = self.state(s, m).ok_or_else(|| Error::Internal(format!("table lacks |{s} {m}⟩")))?;
        for t in &state.terms {
            out[basis.index(t.m1, t.m2)?] = t.coeff.clone();
        }
        Ok(out)
    }

    pub fn nonzero_count(&self) -> usize {
        self.states().map(|(_, st)| st.terms.len()).sum()
    }

    /// CSV with header `s1,s2,s,m,m1,m2,sign,num,den,radicand`, one row per
    /// nonzero coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s1,s2,s,m,m1,m2,sign,num,den,radicand\n");
        for (s, state) in self.states() {
            for t in &state.terms {
                let c = &t.coeff;
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    self.s1,
                    self.s2,
                    s,
                    state.m,
                    t.m1,
                    t.m2,
                    c.sign(),
                    c.coeff().numer(),
                    c.coeff().denom(),
                    c.radicand()
                );
            }
        }
        out
    }
}

fn check_quantum_numbers(
    s1: HalfInt,
    s2: HalfInt,
    s: HalfInt,
    m: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
) -> Result<()> {
    check_coupled_spin(s1, s2, s)?;
    check_projection(s, m)?;
    check_projection(s1, m1)?;
    check_projection(s2, m2)
}

fn internal(e: Error) -> Error {
    match e {
        Error::IncommensurateAdd { left, right } => {
            Error::Internal(format!("incommensurate radicands {left} and {right} during ladder descent"))
        }
        other => other,
    }
}

/// The top state `|s s⟩` of `s₁ ⊗ s₂`: the unit vector of weight `s` killed by
/// the total `S₊`, with the highest-`m₁` coefficient positive.
///
/// `S₊` annihilation couples neighbouring kets only, giving
/// `c(m₁+1) = −c(m₁)·b₊⁽¹⁾(m₁)/b₊⁽²⁾(s−m₁−1)`, so each coefficient is a single
/// radical.
pub fn highest_weight_state(s1: HalfInt, s2: HalfInt, s: HalfInt) -> Result<CoupledState> {
    check_coupled_spin(s1, s2, s)?;
    let lo = (-s1).max(s - s2);
    let mut m1s = vec![lo];
    let mut coeffs = vec![SqrtRational::one()];
    let mut m1 = lo;
    while m1 < s1 {
        let up = ladder_factor(s1, m1, Ladder::Plus)?;
        let down = ladder_factor(s2, s - m1 - HalfInt::ONE, Ladder::Plus)?;
        let next = -(&coeffs[coeffs.len() - 1] * &up).checked_div(&down)?;
        m1 = m1 + HalfInt::ONE;
        m1s.push(m1);
        coeffs.push(next);
    }

    let norm: BigRational = coeffs.iter().map(SqrtRational::square).sum();
    let mut scale = SqrtRational::sqrt(&norm)?.recip()?;
    if coeffs[coeffs.len() - 1].is_negative() {
        scale = -scale;
    }
    let terms = m1s
        .into_iter()
        .zip(coeffs)
        .rev()
        .map(|(m1, c)| CgTerm { m1, m2: s - m1, coeff: &c * &scale })
        .collect();
    Ok(CoupledState { m: s, terms })
}

/// Applies the total `S₋` to `|s m⟩` and divides by `b₋(m)`, giving `|s m−1⟩`.
fn lower(s1: HalfInt, s2: HalfInt, s: HalfInt, state: &CoupledState) -> Result<CoupledState> {
    let mut acc: BTreeMap<HalfInt, SqrtRational> = BTreeMap::new();
    let mut add = |m1: HalfInt, value: SqrtRational| -> Result<()> {
        let slot = acc.entry(m1).or_default();
        *slot = slot.checked_add(&value).map_err(internal)?;
        Ok(())
    };
    for t in &state.terms {
        if t.m1 > -s1 {
            add(t.m1 - HalfInt::ONE, &t.coeff * &ladder_factor(s1, t.m1, Ladder::Minus)?)?;
        }
        if t.m2 > -s2 {
            add(t.m1, &t.coeff * &ladder_factor(s2, t.m2, Ladder::Minus)?)?;
        }
    }
    let divisor = ladder_factor(s, state.m, Ladder::Minus)?;
    let m = state.m - HalfInt::ONE;
    let terms = acc
        .into_iter()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(m1, c)| Ok(CgTerm { m1, m2: m - m1, coeff: c.checked_div(&divisor)? }))
        .collect::<Result<_>>()?;
    Ok(CoupledState { m, terms })
}

/// The multiplet `|s m⟩`, `m = s … −s`, by descending from the top state.
pub fn cg_block(s1: HalfInt, s2: HalfInt, s: HalfInt) -> Result<CgBlock> {
    let mut states = vec![highest_weight_state(s1, s2, s)?];
    while states[states.len() - 1].m > -s {
        let next = lower(s1, s2, s, &states[states.len() - 1])?;
        states.push(next);
    }
    Ok(CgBlock { s, states })
}

/// The full table of `s₁ ⊗ s₂`.
pub fn cg_table(s1: HalfInt, s2: HalfInt) -> Result<CgTable> {
    check_coupled_spin(s1, s2, s1 + s2)?;
    let blocks = decompose(s1, s2).into_iter().map(|s| cg_block(s1, s2, s)).collect::<Result<_>>()?;
    Ok(CgTable { s1, s2, blocks })
}

/// A single coefficient `⟨s₁m₁; s₂m₂|s m⟩`, building only the `s` multiplet.
pub fn cg(
    s1: HalfInt,
    s2: HalfInt,
    s: HalfInt,
    m: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
) -> Result<SqrtRational> {
    check_quantum_numbers(s1, s2, s, m, m1, m2)?;
    if m1 + m2 != m {
        return Ok(SqrtRational::zero());
    }
    let block = cg_block(s1, s2, s)?;
    let state = block
        .states
        .iter()
        .find(|st| st.m == m)
        .ok_or_else(|| Error::Internal(format!("multiplet lacks |{s} {m}⟩")))?;
    Ok(state.coefficient(m1))
}
