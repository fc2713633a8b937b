//! The aggregated verification suite: exact checks of representations, Clebsch–Gordan
//! tables and states, plus floating-point checks of the exponential layer.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::{BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::{
    casimir_expanded, cg_table, closed_form_table, degeneracy, total_operator, CgTable, CgTerm, Convention,
    CoupledBasis, TotalKind, UncoupledBasis,
};
use crate::error::Result;
use crate::exact::{HalfInt, SqrtSum};
use crate::liealg::{
    commutator, in_su_group, linearly_independent, matexp, su_basis, u1_irrep, u_basis, ComplexMatrix,
    DEFAULT_TOL,
};
use crate::repn::{build_rep, rep_to_float, verify_rep, SpinOperator};
use crate::states::{
    collapse, is_entangled, measure_probabilities, to_coupled, to_uncoupled, Particle, StateVector,
};

/// One named pass/fail result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None }
    }

    /// A check whose evaluation may fail; an error counts as a failure.
    fn eval(name: impl Into<String>, f: impl FnOnce() -> Result<bool>) -> Self {
        match f() {
            Ok(passed) => Check::new(name, passed),
            Err(e) => Check { name: name.into(), passed: false, detail: Some(e.to_string()) },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Largest spin used for representations and for each factor of a pair.
    pub max_spin: HalfInt,
    /// Tolerance of the floating-point checks.
    pub tol: f64,
    /// Seed for the random Lie-algebra elements.
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_spin: HalfInt::from_int(4), tol: DEFAULT_TOL, seed: 2024 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub max_spin: HalfInt,
    pub tol: f64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every suite; independent spins and pairs are checked in parallel.
pub fn run_all(opts: &VerifyOptions) -> VerifyReport {
    let spins = spins_up_to(opts.max_spin);
    let pairs: Vec<(HalfInt, HalfInt)> =
        spins.iter().flat_map(|&a| spins.iter().map(move |&b| (a, b))).collect();

    let mut checks: Vec<Check> = spins.par_iter().flat_map_iter(|&s| rep_checks(s)).collect();
    checks.extend(pairs.par_iter().flat_map_iter(|&(a, b)| coupling_checks(a, b)).collect::<Vec<_>>());
    checks.extend(spins.par_iter().flat_map_iter(|&s| closed_form_checks(s)).collect::<Vec<_>>());
    checks.extend(pairs.par_iter().flat_map_iter(|&(a, b)| state_checks(a, b)).collect::<Vec<_>>());
    checks.extend(float_checks(opts));
    VerifyReport { max_spin: opts.max_spin, tol: opts.tol, checks }
}

/// `0, 1/2, 1, …, max`.
fn spins_up_to(max: HalfInt) -> Vec<HalfInt> {
    (0..=max.twice()).map(HalfInt::from_twice).collect()
}

pub fn rep_checks(s: HalfInt) -> Vec<Check> {
    match build_rep(s) {
        Ok(rep) => verify_rep(&rep)
            .checks
            .into_iter()
            .map(|c| Check { name: format!("rep {s}: {}", c.name), ..c })
            .collect(),
        Err(e) => vec![Check { name: format!("rep {s}: build"), passed: false, detail: Some(e.to_string()) }],
    }
}

fn one() -> BigRational {
    BigRational::one()
}

fn dense(t: &CgTable, s: HalfInt, m: HalfInt) -> Result<Vec<SqrtSum>> {
    Ok(t.uncoupled_vector(s, m)?.iter().map(SqrtSum::from).collect())
}

fn dot(a: &[SqrtSum], b: &[SqrtSum]) -> SqrtSum {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scaled(v: &[SqrtSum], q: BigRational) -> Vec<SqrtSum> {
    v.iter().map(|x| x.scale_rational(&q)).collect()
}

/// Exact invariants of the table and total operators of `s₁ ⊗ s₂`.
pub fn coupling_checks(s1: HalfInt, s2: HalfInt) -> Vec<Check> {
    let tag = |what: &str| format!("cg {s1} x {s2}: {what}");
    let table = match cg_table(s1, s2) {
        Ok(t) => t,
        Err(e) => return vec![Check { name: tag("build"), passed: false, detail: Some(e.to_string()) }],
    };
    let t = &table;
    let mut out = Vec::new();

    out.push(Check::eval(tag("dimension"), || {
        let sum: usize = t.blocks().iter().map(|b| b.s.multiplicity()).sum();
        Ok(sum == UncoupledBasis::new(s1, s2)?.dim() && t.blocks().len() == s1.min(s2).twice() as usize + 1)
    }));
    out.push(Check::new(
        tag("support m1 + m2 = m"),
        t.states().all(|(_, st)| st.terms.iter().all(|x| x.m1 + x.m2 == st.m)),
    ));
    out.push(Check::new(tag("unit norms"), t.states().all(|(_, st)| st.norm_squared() == one())));
    out.push(Check::new(
        tag("highest m1 positive"),
        t.states().all(|(_, st)| st.terms.first().is_some_and(|x| x.coeff.is_positive())),
    ));
    out.push(Check::eval(tag("degeneracy"), || {
        for m in (s1 + s2).descending() {
            let n = t.states().filter(|(_, st)| st.m == m).count() as u64;
            if n != degeneracy(s1, s2, m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    out.push(Check::eval(tag("S+ kills top states, S- kills bottom states"), || {
        let sp = total_operator(s1, s2, TotalKind::SPlus)?;
        let sm = total_operator(s1, s2, TotalKind::SMinus)?;
        for b in t.blocks() {
            let top = sp.apply(&dense(t, b.s, b.s)?)?;
            let bottom = sm.apply(&dense(t, b.s, -b.s)?)?;
            if !top.iter().chain(&bottom).all(SqrtSum::is_zero) {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    out.push(Check::eval(tag("S3 and S^2 eigenvectors"), || {
        let s3 = total_operator(s1, s2, TotalKind::S3)?;
        let sq = total_operator(s1, s2, TotalKind::SSquared)?;
        for (s, st) in t.states() {
            let v = dense(t, s, st.m)?;
            let q = s.to_rational();
            if s3.apply(&v)? != scaled(&v, st.m.to_rational())
                || sq.apply(&v)? != scaled(&v, &q * (&q + one()))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }));
    out.push(Check::eval(tag("orthonormal within m sectors"), || {
        for m in (s1 + s2).descending() {
            let sector: Vec<Vec<SqrtSum>> =
                t.states().filter(|(_, st)| st.m == m).map(|(s, _)| dense(t, s, m)).collect::<Result<_>>()?;
            for (i, a) in sector.iter().enumerate() {
                for (j, b) in sector.iter().enumerate() {
                    let expected = if i == j { SqrtSum::one() } else { SqrtSum::zero() };
                    if dot(a, b) != expected {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }));
    out.push(Check::eval(tag("S^2 assemblies agree"), || {
        Ok(total_operator(s1, s2, TotalKind::SSquared)?.matrix() == &casimir_expanded(s1, s2)?)
    }));
    out.push(Check::eval(tag("total commutators"), || {
        let s3 = total_operator(s1, s2, TotalKind::S3)?.into_matrix();
        let sp = total_operator(s1, s2, TotalKind::SPlus)?.into_matrix();
        let sm = total_operator(s1, s2, TotalKind::SMinus)?.into_matrix();
        Ok(s3.commutator(&sp)? == sp
            && s3.commutator(&sm)? == -&sm
            && sp.commutator(&sm)? == s3.scale(&SqrtSum::from_integer(2)))
    }));
    out
}

/// The `s ⊗ ½` closed form against the ladder table, in both conventions.
pub fn closed_form_checks(s1: HalfInt) -> Vec<Check> {
    let half = HalfInt::HALF;
    vec![
        Check::eval(format!("closed form {s1} x 1/2: standard convention"), || {
            Ok(closed_form_table(s1, Convention::Standard)? == cg_table(s1, half)?)
        }),
        Check::eval(format!("closed form {s1} x 1/2: direct convention"), || {
            let direct = closed_form_table(s1, Convention::Direct)?;
            let ladder = cg_table(s1, half)?;
            let agree = direct.states().zip(ladder.states()).all(|((s, p), (_, l))| {
                let flip = s < s1;
                p.terms.len() == l.terms.len()
                    && p.terms.iter().zip(&l.terms).all(|(x, y): (&CgTerm, &CgTerm)| {
                        x.m1 == y.m1 && x.coeff == if flip { -&y.coeff } else { y.coeff.clone() }
                    })
            });
            Ok(agree)
        }),
    ]
}

/// Exact basis-change, measurement and entanglement invariants on every
/// basis state of `s₁ ⊗ s₂`.
pub fn state_checks(s1: HalfInt, s2: HalfInt) -> Vec<Check> {
    let tag = |what: &str| format!("states {s1} x {s2}: {what}");
    let table = match cg_table(s1, s2) {
        Ok(t) => t,
        Err(e) => return vec![Check { name: tag("build"), passed: false, detail: Some(e.to_string()) }],
    };
    let t = &table;
    let coupled = || -> Result<Vec<StateVector>> {
        CoupledBasis::new(s1, s2)?
            .labels()
            .into_iter()
            .map(|(s, m)| StateVector::coupled(s1, s2, s, m))
            .collect()
    };
    vec![
        Check::eval(tag("basis round trips"), || {
            for v in coupled()? {
                if to_coupled(&to_uncoupled(&v, t)?, t)? != v {
                    return Ok(false);
                }
            }
            for (m1, m2) in UncoupledBasis::new(s1, s2)?.kets() {
                let v = StateVector::uncoupled(s1, s2, m1, m2)?;
                if to_uncoupled(&to_coupled(&v, t)?, t)? != v {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        Check::eval(tag("probabilities sum to 1, collapse is stable and unentangled"), || {
            for v in coupled()? {
                for particle in [Particle::First, Particle::Second] {
                    let probs = measure_probabilities(&v, particle, t)?;
                    if probs.iter().map(|(_, p)| p).sum::<BigRational>() != one() {
                        return Ok(false);
                    }
                    for (m, _) in probs {
                        let post = collapse(&v, particle, m, t)?;
                        if measure_probabilities(&post, particle, t)? != vec![(m, one())]
                            || is_entangled(&post, t)?
                        {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }),
        Check::eval(tag("product states unentangled"), || {
            for (m1, m2) in UncoupledBasis::new(s1, s2)?.kets() {
                if is_entangled(&StateVector::uncoupled(s1, s2, m1, m2)?, t)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
        Check::eval(tag("coupled states entangled iff several terms"), || {
            for (s, st) in t.states() {
                let v = StateVector::coupled(s1, s2, s, st.m)?;
                if is_entangled(&v, t)? != (st.terms.len() > 1) {
                    return Ok(false);
                }
            }
            Ok(true)
        }),
    ]
}

fn i_times(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Floating-point checks of the exponential layer and `U(1)`.
pub fn float_checks(opts: &VerifyOptions) -> Vec<Check> {
    let tol = opts.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::new();

    out.push(Check::eval("liealg: bases are independent with the right sizes", || {
        for n in 1..=4 {
            let u = u_basis(n)?;
            let su = su_basis(n)?;
            if u.len() != n * n || su.len() != n * n - 1 || !linearly_independent(&u, tol) {
                return Ok(false);
            }
            if n > 1 && !linearly_independent(&su, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }));

    let samples: Vec<(usize, Vec<f64>)> = [2usize, 3]
        .iter()
        .flat_map(|&n| (0..100).map(move |_| n).collect::<Vec<_>>())
        .map(|n| (n, (0..n * n - 1).map(|_| rng.random_range(-1.0..1.0)).collect()))
        .collect();
    out.push(Check::eval("liealg: exp maps su(n) into SU(n)", || {
        for (n, coeffs) in &samples {
            let basis = su_basis(*n)?;
            let x = basis
                .iter()
                .zip(coeffs)
                .fold(ComplexMatrix::zeros(*n, *n), |acc, (b, c)| &acc + &b.scale_real(*c));
            if !in_su_group(&matexp(&x)?, tol) {
                return Ok(false);
            }
        }
        Ok(true)
    }));

    let spins = spins_up_to(opts.max_spin);
    let axes: Vec<[f64; 3]> = (0..spins.len() * 10)
        .map(|_| {
            let a = [(); 3].map(|_| rng.random_range(-1.0..1.0f64));
            let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let len = rng.random_range(0.0..3.0);
            a.map(|x| x / norm * len)
        })
        .collect();
    for (i, &s) in spins.iter().enumerate() {
        out.push(Check::eval(format!("liealg {s}: exp of the X span lies in SU(2s+1)"), || {
            let rep = build_rep(s)?;
            let xs = [SpinOperator::X1, SpinOperator::X2, SpinOperator::X3]
                .map(|op| rep_to_float(&rep, op))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            for a in &axes[i * 10..(i + 1) * 10] {
                let x = xs
                    .iter()
                    .zip(a)
                    .fold(ComplexMatrix::zeros(rep.dim(), rep.dim()), |acc, (m, c)| &acc + &m.scale_real(*c));
                if !in_su_group(&matexp(&x)?, tol) {
                    return Ok(false);
                }
            }
            Ok(true)
        }));
        out.push(Check::eval(
            format!("liealg {s}: exp(2 pi i S3) = (-1)^(2s) I, exp(4 pi i S3) = I"),
            || {
                let s3 = rep_to_float(&build_rep(s)?, SpinOperator::S3)?;
                let n = s3.rows();
                let sign = if s.is_integer() { 1.0 } else { -1.0 };
                let once = matexp(&s3.scale(i_times(2.0 * PI)))?;
                let twice = matexp(&s3.scale(i_times(4.0 * PI)))?;
                Ok(once.max_abs_diff(&ComplexMatrix::identity(n).scale_real(sign)) <= tol
                    && twice.max_abs_diff(&ComplexMatrix::identity(n)) <= tol)
            },
        ));
        out.push(Check::eval(format!("liealg {s}: [S1,S2] = i S3 and cyclic"), || {
            let rep = build_rep(s)?;
            let ops = [SpinOperator::S1, SpinOperator::S2, SpinOperator::S3]
                .map(|op| rep_to_float(&rep, op))
                .into_iter()
                .collect::<Result<Vec<_>>>()?;
            for j in 0..3 {
                let (a, b, c) = (&ops[j], &ops[(j + 1) % 3], &ops[(j + 2) % 3]);
                if commutator(a, b)?.max_abs_diff(&c.scale(i_times(1.0))) > tol {
                    return Ok(false);
                }
            }
            Ok(true)
        }));
    }

    let angles: Vec<(f64, f64)> = (0..100)
        .map(|_| (rng.random_range(-2.0 * PI..2.0 * PI), rng.random_range(-2.0 * PI..2.0 * PI)))
        .collect();
    out.push(Check::new(
        "liealg: U(1) irreps are homomorphisms with phi(2 pi) = 1",
        (-3..=3).all(|n| {
            let phi = u1_irrep(n);
            (phi.apply(2.0 * PI) - 1.0).norm() <= tol
                && angles.iter().all(|&(a, b)| (phi.apply(a + b) - phi.apply(a) * phi.apply(b)).norm() <= tol)
        }),
    ));
    out
}
