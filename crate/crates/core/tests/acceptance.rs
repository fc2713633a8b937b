//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use num::{BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinrep_core::coupling::{
    cg_closed_form_half, cg_table, decompose, degeneracy, CgTable, Convention, UncoupledBasis,
};
use spinrep_core::exact::{ExactMatrix, HalfInt, SqrtRational, SqrtSum};
use spinrep_core::liealg::{in_su_group, matexp, u1_irrep, ComplexMatrix};
use spinrep_core::repn::{build_rep, rep_to_float, SpinOperator};
use spinrep_core::states::{
    collapse, is_entangled, measure_probabilities, sample, sample_shots, Particle, StateVector,
};

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn sqrt_q(n: i64, d: i64) -> SqrtRational {
    SqrtRational::sqrt(&q(n, d)).unwrap()
}

/// `s(s+1) − m(m+dir)` evaluated directly in rationals.
fn ladder_square(s: HalfInt, m: HalfInt, dir: i64) -> BigRational {
    let (s, m) = (s.to_rational(), m.to_rational());
    &s * (&s + BigRational::one()) - &m * (&m + BigRational::from_integer(dir.into()))
}

fn ladder(s: HalfInt, m: HalfInt, dir: i64) -> SqrtSum {
    SqrtSum::from(&SqrtRational::sqrt(&ladder_square(s, m, dir)).unwrap())
}

type Ket = (HalfInt, HalfInt);
type Vector = BTreeMap<Ket, SqrtSum>;

fn add_into(v: &mut Vector, k: Ket, x: SqrtSum) {
    let slot = v.entry(k).or_insert_with(SqrtSum::zero);
    *slot = &*slot + &x;
    if slot.is_zero() {
        v.remove(&k);
    }
}

/// Total `S±` applied ket by ket, with factors from [`ladder_square`].
fn raise_or_lower(s1: HalfInt, s2: HalfInt, v: &Vector, dir: i64) -> Vector {
    let step = HalfInt::from_int(dir);
    let mut out = Vector::new();
    for (&(m1, m2), c) in v {
        if (m1 + step).abs() <= s1 {
            add_into(&mut out, (m1 + step, m2), c * &ladder(s1, m1, dir));
        }
        if (m2 + step).abs() <= s2 {
            add_into(&mut out, (m1, m2 + step), c * &ladder(s2, m2, dir));
        }
    }
    out
}

fn s3(v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (&(m1, m2), c) in v {
        add_into(&mut out, (m1, m2), c.scale_rational(&(m1 + m2).to_rational()));
    }
    out
}

/// `S² = S₋S₊ + S₃² + S₃`.
fn casimir(s1: HalfInt, s2: HalfInt, v: &Vector) -> Vector {
    let mut out = raise_or_lower(s1, s2, &raise_or_lower(s1, s2, v, 1), -1);
    for part in [s3(&s3(v)), s3(v)] {
        for (k, x) in part {
            add_into(&mut out, k, x);
        }
    }
    out
}

fn scaled(v: &Vector, r: &BigRational) -> Vector {
    v.iter().filter(|_| !r.is_zero()).map(|(k, x)| (*k, x.scale_rational(r))).collect()
}

fn vector(t: &CgTable, s: HalfInt, m: HalfInt) -> Vector {
    t.state(s, m).unwrap().terms.iter().map(|term| ((term.m1, term.m2), SqrtSum::from(&term.coeff))).collect()
}

fn dot(a: &Vector, b: &Vector) -> SqrtSum {
    a.iter().filter_map(|(k, x)| b.get(k).map(|y| x * y)).sum()
}

// ---------------------------------------------------------------------------

fn criterion_1() -> bool {
    let t = cg_table(h(1), h(1)).unwrap();
    let (up, down) = (h(1), h(-1));
    let r = sqrt_q(1, 2);
    let expect = |s: i64, m: i64, kets: &[(HalfInt, HalfInt, SqrtRational)]| {
        let state = t.state(h(s), h(m)).unwrap();
        state.terms.len() == kets.len()
            && kets.iter().all(|(m1, m2, c)| t.coefficient(h(s), h(m), *m1, *m2).unwrap() == *c)
    };
    expect(2, 2, &[(up, up, SqrtRational::one())])
        && expect(2, 0, &[(up, down, r.clone()), (down, up, r.clone())])
        && expect(2, -2, &[(down, down, SqrtRational::one())])
        && expect(0, 0, &[(up, down, r.clone()), (down, up, -r)])
        && t.blocks().len() == 2
}

fn criterion_2() -> bool {
    (0..=20).all(|twice| {
        let s = h(twice);
        let rep = build_rep(s).unwrap();
        let n = rep.dim();
        let (s3, sp, sm) = (rep.s3(), rep.s_plus(), rep.s_minus());
        let two = SqrtSum::from_integer(2);
        let cas = SqrtSum::from_rational(ladder_square(s, HalfInt::ZERO, 0));
        let casimir = &(&(&sp * &sm) - &s3) + &(&s3 * &s3);
        let factors = (0..n).all(|k| {
            let m = s - HalfInt::from_int(k as i64);
            let expected = SqrtSum::from(&SqrtRational::sqrt(&ladder_square(s, m, 1)).unwrap());
            let col: Vec<(usize, SqrtSum)> =
                (0..n).map(|r| (r, sp.get(r, k))).filter(|(_, x)| !x.is_zero()).collect();
            if k == 0 {
                col.is_empty() && expected.is_zero()
            } else {
                col == vec![(k - 1, expected)]
            }
        });
        n == twice as usize + 1
            && s3.commutator(&sp).unwrap() == sp
            && s3.commutator(&sm).unwrap() == -&sm
            && sp.commutator(&sm).unwrap() == s3.scale(&two)
            && casimir == ExactMatrix::scalar(n, &cas)
            && s3.trace().is_zero()
            && factors
    })
}

fn criterion_3() -> bool {
    (0..=12).all(|a| {
        (0..=12).all(|b| {
            let (s1, s2) = (h(a), h(b));
            let spins = decompose(s1, s2);
            let total: usize = spins.iter().map(|s| s.multiplicity()).sum();
            let per_m = (s1 + s2).descending().all(|m| {
                let blocks = spins.iter().filter(|&&s| s >= m.abs()).count() as u64;
                let pairs = s1.descending().filter(|&m1| (m - m1).abs() <= s2).count() as u64;
                let formula = degeneracy(s1, s2, m).unwrap();
                let plateau = (a.min(b) + 1) as u64;
                let expected = if m.abs() <= (s1 - s2).abs() {
                    plateau
                } else {
                    plateau - ((m.abs() - (s1 - s2).abs()).twice() / 2) as u64
                };
                blocks == pairs && pairs == formula && formula == expected
            });
            total == s1.multiplicity() * s2.multiplicity() && per_m
        })
    })
}

fn criterion_4() -> bool {
    (0..=8).all(|a| {
        (0..=8).all(|b| {
            let (s1, s2) = (h(a), h(b));
            let t = cg_table(s1, s2).unwrap();
            let one = SqrtSum::one();
            let shape = t.states().all(|(_, st)| {
                st.norm_squared() == BigRational::one()
                    && st.terms.iter().all(|x| x.m1 + x.m2 == st.m && !x.coeff.is_zero())
                    && st.terms.first().is_some_and(|x| x.coeff.is_positive())
                    && st.terms.windows(2).all(|w| w[0].m1 > w[1].m1)
            });
            let operators = t.states().all(|(s, st)| {
                let v = vector(&t, s, st.m);
                let cas = ladder_square(s, HalfInt::ZERO, 0);
                (st.m != s || raise_or_lower(s1, s2, &v, 1).is_empty())
                    && s3(&v) == scaled(&v, &st.m.to_rational())
                    && casimir(s1, s2, &v) == scaled(&v, &cas)
            });
            let orthonormal = (s1 + s2).descending().all(|m| {
                let sector: Vec<Vector> =
                    t.states().filter(|(_, st)| st.m == m).map(|(s, _)| vector(&t, s, m)).collect();
                sector.iter().enumerate().all(|(i, x)| {
                    sector.iter().enumerate().all(|(j, y)| {
                        let d = dot(x, y);
                        if i == j {
                            d == one
                        } else {
                            d.is_zero()
                        }
                    })
                })
            });
            shape && operators && orthonormal
        })
    })
}

fn criterion_5() -> bool {
    (0..=20).all(|a| {
        let s1 = h(a);
        let t = cg_table(s1, HalfInt::HALF).unwrap();
        let agree = t.states().all(|(s, st)| {
            let standard = cg_closed_form_half(s1, s, st.m, Convention::Standard).unwrap();
            let direct = cg_closed_form_half(s1, s, st.m, Convention::Direct).unwrap();
            let upper = s > s1;
            standard.iter().zip(&direct).all(|(x, y)| {
                let entry = |m1: HalfInt, m2: HalfInt| {
                    if m1.abs() <= s1 {
                        t.coefficient(s, st.m, m1, m2).unwrap()
                    } else {
                        SqrtRational::zero()
                    }
                };
                let e = entry(x.m1, x.m2);
                (x.m1, x.m2) == (y.m1, y.m2) && x.coeff == e && y.coeff == if upper { e.clone() } else { -&e }
            })
        });
        agree
    })
}

fn criterion_6(rng: &mut ChaCha8Rng) -> bool {
    let spins_ok = (0..=8).all(|twice| {
        let rep = build_rep(h(twice)).unwrap();
        let n = rep.dim();
        let xs =
            [SpinOperator::X1, SpinOperator::X2, SpinOperator::X3].map(|op| rep_to_float(&rep, op).unwrap());
        let group = (0..100).all(|_| {
            let a: [f64; 3] = [(); 3].map(|_| rng.random_range(-3.0..3.0));
            let x = &(&xs[0].scale_real(a[0]) + &xs[1].scale_real(a[1])) + &xs[2].scale_real(a[2]);
            in_su_group(&matexp(&x).unwrap(), 1e-9)
        });
        let s3 = rep_to_float(&rep, SpinOperator::S3).unwrap();
        let sign = if twice % 2 == 0 { 1.0 } else { -1.0 };
        let turn = matexp(&s3.scale(Complex64::new(0.0, 2.0 * PI))).unwrap();
        let double = matexp(&s3.scale(Complex64::new(0.0, 4.0 * PI))).unwrap();
        group
            && turn.max_abs_diff(&ComplexMatrix::identity(n).scale_real(sign)) <= 1e-10
            && double.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-10
    });
    let s3 = rep_to_float(&build_rep(h(1)).unwrap(), SpinOperator::S3).unwrap();
    let half_ok = [0.0, PI / 4.0, PI / 2.0, PI].iter().all(|&theta| {
        let e = matexp(&s3.scale(Complex64::new(0.0, 2.0 * theta))).unwrap();
        let expected =
            ComplexMatrix::diagonal(&[Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta)]);
        e.max_abs_diff(&expected) <= 1e-13
    });
    spins_ok && half_ok
}

fn criterion_7() -> bool {
    let (a, b) = (h(1), h(1));
    let t = cg_table(a, b).unwrap();
    let half = q(1, 2);
    let triplet0 = StateVector::coupled(a, b, h(2), h(0)).unwrap();
    let singlet = StateVector::coupled(a, b, h(0), h(0)).unwrap();

    let probs = measure_probabilities(&triplet0, Particle::First, &t).unwrap()
        == vec![(h(1), half.clone()), (h(-1), half.clone())];
    // Finding particle 1 up leaves particle 2 down, and vice versa.
    let partner = [(h(1), h(-1)), (h(-1), h(1))].iter().all(|&(m1, m2)| {
        let post = collapse(&triplet0, Particle::First, m1, &t).unwrap();
        post == StateVector::uncoupled(a, b, m1, m2).unwrap()
            && measure_probabilities(&post, Particle::Second, &t).unwrap() == vec![(m2, BigRational::one())]
    });
    let entangled = [(h(2), h(2)), (h(2), h(0)), (h(2), h(-2)), (h(0), h(0))].iter().all(|&(s, m)| {
        let v = StateVector::coupled(a, b, s, m).unwrap();
        is_entangled(&v, &t).unwrap() == (m == h(0))
    });
    let products = UncoupledBasis::new(a, b)
        .unwrap()
        .kets()
        .all(|(m1, m2)| !is_entangled(&StateVector::uncoupled(a, b, m1, m2).unwrap(), &t).unwrap());
    let singlet_ok = measure_probabilities(&singlet, Particle::Second, &t).unwrap()
        == vec![(h(1), half.clone()), (h(-1), half)];

    let shots = sample_shots(&triplet0, Particle::First, &t, 20_240_601, 10_000).unwrap();
    let freq = shots.iter().filter(|&&m| m == h(1)).count() as f64 / 10_000.0;
    let seeded = sample(&triplet0, Particle::First, &t, 42).unwrap()
        == sample(&triplet0, Particle::First, &t, 42).unwrap();

    probs && partner && entangled && products && singlet_ok && (freq - 0.5).abs() <= 0.015 && seeded
}

fn criterion_8(rng: &mut ChaCha8Rng) -> bool {
    let pairs: Vec<(f64, f64)> =
        (0..100).map(|_| (rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0))).collect();
    (-3..=3).all(|n| {
        let phi = u1_irrep(n);
        (phi.apply(2.0 * PI) - 1.0).norm() <= 1e-12
            && pairs.iter().all(|&(x, y)| {
                (phi.apply(x + y) - phi.apply(x) * phi.apply(y)).norm() <= 1e-12
                    && (phi.apply(x + 2.0 * PI) - phi.apply(x)).norm() <= 1e-12
            })
    })
}

type Criterion<'a> = (&'a str, Duration, Box<dyn FnMut() -> bool>);

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rng2 = ChaCha8Rng::seed_from_u64(0x1);
    let criteria: Vec<Criterion> = vec![
        ("1/2 x 1/2 table reproduces the textbook states", Duration::from_millis(1), Box::new(criterion_1)),
        ("representation structure for s <= 10", Duration::from_secs(5), Box::new(criterion_2)),
        ("dimension and degeneracy counts for s1, s2 <= 6", Duration::from_secs(1), Box::new(criterion_3)),
        ("CG invariants for s1, s2 <= 4", Duration::from_secs(30), Box::new(criterion_4)),
        (
            "s2 = 1/2 closed form in both conventions, s1 <= 10",
            Duration::from_secs(10),
            Box::new(criterion_5),
        ),
        (
            "exponential and group layer, s <= 4",
            Duration::from_secs(5),
            Box::new(move || criterion_6(&mut rng)),
        ),
        ("measurement, collapse, entanglement and sampling", Duration::from_secs(2), Box::new(criterion_7)),
        ("U(1) irreps", Duration::from_secs(1), Box::new(move || criterion_8(&mut rng2))),
    ];

    let mut all = true;
    for (i, (name, budget, mut run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let ok = run();
        let elapsed = start.elapsed();
        let pass = ok && elapsed < budget;
        all &= pass;
        let note = if ok { "" } else { " (check failed)" };
        let late = if elapsed < budget { "" } else { " (over budget)" };
        println!(
            "{} criterion {}: {name} [{:.3?} / {:?}]{note}{late}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed,
            budget
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
