//! Exact two-particle states, single-particle `S₃` measurement and
//! entanglement.
//!
//! Outcome probabilities are squared amplitudes. Sampling draws one double in
//! `[0, 1)` per shot from a ChaCha8 stream seeded with the caller's 64-bit seed.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coupling::{CgTable, CoupledBasis, UncoupledBasis};
use crate::error::{domain, Error, Result};
use crate::exact::{HalfInt, SqrtRational, SqrtSum};
use crate::repn::check_projection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Coupled,
    Uncoupled,
}

/// Which particle an `S₃` measurement acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Particle {
    First,
    Second,
}

impl Particle {
    /// `1` or `2`.
    pub fn from_index(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Particle::First),
            2 => Ok(Particle::Second),
            _ => Err(domain(format!("particle must be 1 or 2, got {n}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Particle::First => 1,
            Particle::Second => 2,
        }
    }
}

/// A basis ket label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ket {
    /// `|s m⟩`
    Coupled { s: HalfInt, m: HalfInt },
    /// `|s₁ m₁⟩|s₂ m₂⟩`
    Uncoupled { m1: HalfInt, m2: HalfInt },
}

impl fmt::Display for Ket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ket::Coupled { s, m } => write!(f, "|{s} {m}⟩"),
            Ket::Uncoupled { m1, m2 } => write!(f, "|{m1}⟩|{m2}⟩"),
        }
    }
}

/// A normalized real state of `s₁ ⊗ s₂`, with amplitudes indexed by the
/// coupled or uncoupled basis enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StateJson")]
pub struct StateVector {
    basis: BasisKind,
    s1: HalfInt,
    s2: HalfInt,
    amplitudes: Vec<SqrtRational>,
}

#[derive(Deserialize)]
struct StateJson {
    basis: BasisKind,
    s1: HalfInt,
    s2: HalfInt,
    amplitudes: Vec<SqrtRational>,
}

impl TryFrom<StateJson> for StateVector {
    type Error = Error;

    fn try_from(raw: StateJson) -> Result<Self> {
        StateVector::new(raw.basis, raw.s1, raw.s2, raw.amplitudes)
    }
}

impl StateVector {
    pub fn new(basis: BasisKind, s1: HalfInt, s2: HalfInt, amplitudes: Vec<SqrtRational>) -> Result<Self> {
        let dim = UncoupledBasis::new(s1, s2)?.dim();
        if amplitudes.len() != dim {
            return Err(domain(format!(
                "{s1} ⊗ {s2} has dimension {dim}, got {} amplitudes",
                amplitudes.len()
            )));
        }
        let norm: BigRational = amplitudes.iter().map(SqrtRational::square).sum();
        if !norm.is_one() {
            return Err(Error::NotNormalized(format!("squared norm is {norm}")));
        }
        Ok(StateVector { basis, s1, s2, amplitudes })
    }

    /// `|s m⟩`.
    pub fn coupled(s1: HalfInt, s2: HalfInt, s: HalfInt, m: HalfInt) -> Result<Self> {
        let basis = CoupledBasis::new(s1, s2)?;
        let mut amplitudes = vec![SqrtRational::zero(); basis.dim()];
        amplitudes[basis.index(s, m)?] = SqrtRational::one();
        Ok(StateVector { basis: BasisKind::Coupled, s1, s2, amplitudes })
    }

    /// `|s₁ m₁⟩|s₂ m₂⟩`.
    pub fn uncoupled(s1: HalfInt, s2: HalfInt, m1: HalfInt, m2: HalfInt) -> Result<Self> {
        let basis = UncoupledBasis::new(s1, s2)?;
        let mut amplitudes = vec![SqrtRational::zero(); basis.dim()];
        amplitudes[basis.index(m1, m2)?] = SqrtRational::one();
        Ok(StateVector { basis: BasisKind::Uncoupled, s1, s2, amplitudes })
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn s1(&self) -> HalfInt {
        self.s1
    }

    pub fn s2(&self) -> HalfInt {
        self.s2
    }

    pub fn amplitudes(&self) -> &[SqrtRational] {
        &self.amplitudes
    }

    /// Label of basis index `k`.
    pub fn ket(&self, k: usize) -> Ket {
        match self.basis {
            BasisKind::Coupled => {
                let (s, m) = coupled_basis(self.s1, self.s2).labels()[k];
                Ket::Coupled { s, m }
            }
            BasisKind::Uncoupled => {
                let (m1, m2) = uncoupled_basis(self.s1, self.s2).ket(k);
                Ket::Uncoupled { m1, m2 }
            }
        }
    }

    /// Nonzero components in basis order.
    pub fn components(&self) -> Vec<(Ket, &SqrtRational)> {
        let labels: Vec<Ket> = match self.basis {
            BasisKind::Coupled => coupled_basis(self.s1, self.s2)
                .labels()
                .into_iter()
                .map(|(s, m)| Ket::Coupled { s, m })
                .collect(),
            BasisKind::Uncoupled => {
                uncoupled_basis(self.s1, self.s2).kets().map(|(m1, m2)| Ket::Uncoupled { m1, m2 }).collect()
            }
        };
        labels.into_iter().zip(&self.amplitudes).filter(|(_, a)| !a.is_zero()).collect()
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (ket, a)) in self.components().into_iter().enumerate() {
            match (i, a.is_negative()) {
                (0, _) => write!(f, "{a} {ket}")?,
                (_, true) => write!(f, " - {} {ket}", a.abs())?,
                (_, false) => write!(f, " + {a} {ket}")?,
            }
        }
        Ok(())
    }
}

// Spins inside a StateVector were validated at construction.
fn coupled_basis(s1: HalfInt, s2: HalfInt) -> CoupledBasis {
    CoupledBasis::new(s1, s2).expect("validated spins")
}

fn uncoupled_basis(s1: HalfInt, s2: HalfInt) -> UncoupledBasis {
    UncoupledBasis::new(s1, s2).expect("validated spins")
}

fn check_table(v: &StateVector, t: &CgTable) -> Result<()> {
    if (v.s1, v.s2) != (t.s1(), t.s2()) {
        return Err(domain(format!(
            "state of {} ⊗ {} used with the table of {} ⊗ {}",
            v.s1,
            v.s2,
            t.s1(),
            t.s2()
        )));
    }
    Ok(())
}

fn collapse_sums(sums: Vec<SqrtSum>) -> Result<Vec<SqrtRational>> {
    sums.iter().map(SqrtSum::to_sqrt_rational).collect()
}

/// Rewrites a coupled state in the product basis.
///
/// Fails with [`Error::NotSingleRadical`] if some resulting amplitude is a sum
/// of distinct radicals; this never happens for a single coupled basis state.
pub fn to_uncoupled(v: &StateVector, t: &CgTable) -> Result<StateVector> {
    check_table(v, t)?;
    if v.basis != BasisKind::Coupled {
        return Err(domain("to_uncoupled expects a coupled state"));
    }
    let basis = uncoupled_basis(v.s1, v.s2);
    let mut sums = vec![SqrtSum::zero(); basis.dim()];
    for ((_, state), a) in t.states().zip(&v.amplitudes) {
        if a.is_zero() {
            continue;
        }
        for term in &state.terms {
            let k = basis.index(term.m1, term.m2)?;
            sums[k] = &sums[k] + &SqrtSum::from(&(a * &term.coeff));
        }
    }
    Ok(StateVector { basis: BasisKind::Uncoupled, s1: v.s1, s2: v.s2, amplitudes: collapse_sums(sums)? })
}

/// Rewrites a product-basis state in the coupled basis.
pub fn to_coupled(v: &StateVector, t: &CgTable) -> Result<StateVector> {
    check_table(v, t)?;
    if v.basis != BasisKind::Uncoupled {
        return Err(domain("to_coupled expects an uncoupled state"));
    }
    let basis = uncoupled_basis(v.s1, v.s2);
    let sums = t
        .states()
        .map(|(_, state)| {
            let mut acc = SqrtSum::zero();
            for term in &state.terms {
                let a = &v.amplitudes[basis.index(term.m1, term.m2)?];
                if !a.is_zero() {
                    acc = &acc + &SqrtSum::from(&(a * &term.coeff));
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StateVector { basis: BasisKind::Coupled, s1: v.s1, s2: v.s2, amplitudes: collapse_sums(sums)? })
}

fn uncoupled_amplitudes(v: &StateVector, t: &CgTable) -> Result<Vec<SqrtRational>> {
    check_table(v, t)?;
    match v.basis {
        BasisKind::Uncoupled => Ok(v.amplitudes.clone()),
        BasisKind::Coupled => Ok(to_uncoupled(v, t)?.amplitudes),
    }
}

fn measured_m(basis: &UncoupledBasis, k: usize, particle: Particle) -> HalfInt {
    let (m1, m2) = basis.ket(k);
    match particle {
        Particle::First => m1,
        Particle::Second => m2,
    }
}

/// Exact outcome distribution of `S₃` on one particle: nonzero probabilities
/// only, ordered by `m` descending. The probabilities sum to exactly 1.
pub fn measure_probabilities(
    v: &StateVector,
    particle: Particle,
    t: &CgTable,
) -> Result<Vec<(HalfInt, BigRational)>> {
    let amps = uncoupled_amplitudes(v, t)?;
    let basis = uncoupled_basis(v.s1, v.s2);
    let mut probs: BTreeMap<HalfInt, BigRational> = BTreeMap::new();
    for (k, a) in amps.iter().enumerate() {
        if !a.is_zero() {
            *probs.entry(measured_m(&basis, k, particle)).or_insert_with(BigRational::zero) += a.square();
        }
    }
    Ok(probs.into_iter().rev().collect())
}

/// Projects onto outcome `m` of the measured particle and renormalizes. The
/// result is in the product basis and keeps the sign it comes out with.
pub fn collapse(v: &StateVector, particle: Particle, m: HalfInt, t: &CgTable) -> Result<StateVector> {
    let spin = match particle {
        Particle::First => v.s1,
        Particle::Second => v.s2,
    };
    check_projection(spin, m)?;
    let amps = uncoupled_amplitudes(v, t)?;
    let basis = uncoupled_basis(v.s1, v.s2);
    let kept: Vec<SqrtRational> = amps
        .into_iter()
        .enumerate()
        .map(|(k, a)| if measured_m(&basis, k, particle) == m { a } else { SqrtRational::zero() })
        .collect();
    let p: BigRational = kept.iter().map(SqrtRational::square).sum();
    if p.is_zero() {
        return Err(Error::ImpossibleOutcome { m });
    }
    let inv = SqrtRational::sqrt(&p)?.recip()?;
    let amplitudes = kept.iter().map(|a| a * &inv).collect();
    StateVector::new(BasisKind::Uncoupled, v.s1, v.s2, amplitudes)
}

fn draw(probs: &[(HalfInt, BigRational)], u: f64) -> Result<HalfInt> {
    let mut cumulative = 0.0;
    for (m, p) in probs {
        cumulative += SqrtRational::from_rational(p).to_f64()?;
        if u < cumulative {
            return Ok(*m);
        }
    }
    // Rounding can leave the float total just below 1.
    probs.last().map(|(m, _)| *m).ok_or_else(|| Error::Internal("empty outcome distribution".into()))
}

/// One seeded measurement: the outcome and the collapsed state. The same seed
/// always gives the same outcome.
pub fn sample(v: &StateVector, particle: Particle, t: &CgTable, seed: u64) -> Result<(HalfInt, StateVector)> {
    let probs = measure_probabilities(v, particle, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = draw(&probs, rng.random())?;
    Ok((m, collapse(v, particle, m, t)?))
}

/// `shots` independent outcomes drawn from one seeded stream.
pub fn sample_shots(
    v: &StateVector,
    particle: Particle,
    t: &CgTable,
    seed: u64,
    shots: usize,
) -> Result<Vec<HalfInt>> {
    let probs = measure_probabilities(v, particle, t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots).map(|_| draw(&probs, rng.random())).collect()
}

/// Product-basis amplitudes as a `(2s₁+1) × (2s₂+1)` matrix; row `k₁`, column `k₂`.
pub fn coefficient_matrix(v: &StateVector, t: &CgTable) -> Result<Vec<Vec<SqrtRational>>> {
    let amps = uncoupled_amplitudes(v, t)?;
    let cols = v.s2.multiplicity();
    Ok(amps.chunks(cols).map(<[SqrtRational]>::to_vec).collect())
}

/// Whether the state is not a single product `|a⟩|b⟩`, i.e. its coefficient
/// matrix has rank above one.
///
/// With a nonzero pivot `c[p][q]`, the matrix has rank one exactly when
/// `c[i][j]·c[p][q] = c[i][q]·c[p][j]` for all `i, j`.
pub fn is_entangled(v: &StateVector, t: &CgTable) -> Result<bool> {
    let c = coefficient_matrix(v, t)?;
    let Some((p, q)) =
        c.iter().enumerate().find_map(|(i, row)| row.iter().position(|x| !x.is_zero()).map(|j| (i, j)))
    else {
        return Err(Error::Internal("zero state".into()));
    };
    for row in &c {
        for (j, x) in row.iter().enumerate() {
            if x * &c[p][q] != &row[q] * &c[p][j] {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
