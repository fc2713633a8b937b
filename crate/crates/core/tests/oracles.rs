//! Cross-checks against independent formulas and randomized properties.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::{BigRational, One};
use proptest::prelude::*;

use spinrep_core::coupling::{cg, cg_table, CoupledBasis, UncoupledBasis};
use spinrep_core::exact::{HalfInt, SqrtRational};
use spinrep_core::liealg::{in_su_group, matexp, su_basis, ComplexMatrix};
use spinrep_core::repn::{build_rep, ladder_factor, rep_to_float, Ladder, SpinOperator};
use spinrep_core::states::{
    collapse, is_entangled, measure_probabilities, to_coupled, BasisKind, Particle, StateVector,
};

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn factorial(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Racah's single-sum formula, in floating point. Arguments are twice the
/// quantum numbers.
fn racah(j1: i64, j2: i64, j: i64, m1: i64, m2: i64, m: i64) -> f64 {
    if m1 + m2 != m {
        return 0.0;
    }
    let f = |twice: i64| factorial(twice / 2);
    let pre = ((j + 1) as f64 * f(j + j1 - j2) * f(j - j1 + j2) * f(j1 + j2 - j) / f(j1 + j2 + j + 2)).sqrt()
        * (f(j + m) * f(j - m) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2)).sqrt();
    let mut sum = 0.0;
    for k in 0..=(j1 + j2 - j) / 2 {
        let args = [
            k * 2,
            j1 + j2 - j - 2 * k,
            j1 - m1 - 2 * k,
            j2 + m2 - 2 * k,
            j - j2 + m1 + 2 * k,
            j - j1 - m2 + 2 * k,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let denom: f64 = args.iter().map(|&a| f(a)).product();
        sum += if k % 2 == 0 { 1.0 } else { -1.0 } / denom;
    }
    pre * sum
}

#[test]
fn table_matches_racah_formula() {
    for a in 0..=6 {
        for b in 0..=6 {
            let t = cg_table(h(a), h(b)).unwrap();
            for (s, st) in t.states() {
                for m1 in h(a).descending() {
                    let m2 = st.m - m1;
                    if m2.abs() > h(b) {
                        continue;
                    }
                    let exact = t.coefficient(s, st.m, m1, m2).unwrap().to_f64().unwrap();
                    let oracle = racah(a, b, s.twice(), m1.twice(), m2.twice(), st.m.twice());
                    assert!(
                        (exact - oracle).abs() < 1e-12,
                        "{a}/2 x {b}/2 |{s} {}⟩ m1={m1}: {exact} vs {oracle}",
                        st.m
                    );
                }
            }
        }
    }
}

#[test]
fn exchange_symmetry() {
    // ⟨s₂m₂; s₁m₁|s m⟩ = (−1)^(s₁+s₂−s) ⟨s₁m₁; s₂m₂|s m⟩
    for a in 0..=5 {
        for b in 0..=5 {
            let (t12, t21) = (cg_table(h(a), h(b)).unwrap(), cg_table(h(b), h(a)).unwrap());
            for (s, st) in t12.states() {
                let odd = ((h(a) + h(b) - s).twice() / 2) % 2 == 1;
                for term in &st.terms {
                    let swapped = t21.coefficient(s, st.m, term.m2, term.m1).unwrap();
                    let expected = if odd { -&term.coeff } else { term.coeff.clone() };
                    assert_eq!(swapped, expected);
                }
            }
        }
    }
}

#[test]
fn spin_one_pairs() {
    let r = |n: i64, d: i64| SqrtRational::sqrt(&BigRational::new(n.into(), d.into())).unwrap();
    // |1 0⟩ of 1 ⊗ 1 is (|1,−1⟩ − |−1,1⟩)/√2 and |0 0⟩ is (|1,−1⟩ − |0,0⟩ + |−1,1⟩)/√3.
    assert_eq!(cg(h(2), h(2), h(2), h(0), h(2), h(-2)).unwrap(), r(1, 2));
    assert_eq!(cg(h(2), h(2), h(2), h(0), h(0), h(0)).unwrap(), SqrtRational::zero());
    assert_eq!(cg(h(2), h(2), h(0), h(0), h(0), h(0)).unwrap(), -r(1, 3));
    assert_eq!(cg(h(2), h(2), h(4), h(0), h(0), h(0)).unwrap(), r(2, 3));
}

#[test]
fn ladder_symmetry() {
    for twice in 0..=20 {
        let s = h(twice);
        for m in s.descending() {
            assert_eq!(
                ladder_factor(s, m, Ladder::Minus).unwrap(),
                ladder_factor(s, -m, Ladder::Plus).unwrap()
            );
        }
    }
}

#[test]
fn double_cover() {
    for twice in 0..=8 {
        let s3 = rep_to_float(&build_rep(h(twice)).unwrap(), SpinOperator::S3).unwrap();
        let n = s3.rows();
        let sign = if twice % 2 == 0 { 1.0 } else { -1.0 };
        let once = matexp(&s3.scale(Complex64::new(0.0, 2.0 * PI))).unwrap();
        assert!(once.max_abs_diff(&ComplexMatrix::identity(n).scale_real(sign)) < 1e-10);
    }
    // e^{2iθS₃} for s = 1/2 at θ = π/2 is diag(i, −i).
    let s3 = rep_to_float(&build_rep(h(1)).unwrap(), SpinOperator::S3).unwrap();
    let e = matexp(&s3.scale(Complex64::new(0.0, PI))).unwrap();
    let expected = ComplexMatrix::diagonal(&[Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)]);
    assert!(e.max_abs_diff(&expected) < 1e-13);
}

fn random_matrix(n: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
    let rows = (0..n)
        .map(|r| (0..n).map(|c| Complex64::new(entries[r * n + c].0, entries[r * n + c].1)).collect())
        .collect();
    ComplexMatrix::from_rows(rows).unwrap()
}

proptest! {
    #[test]
    fn exp_of_su_is_special_unitary(
        n in 2usize..=3,
        coeffs in prop::collection::vec(-2.0f64..2.0, 8),
    ) {
        let basis = su_basis(n).unwrap();
        let x = basis
            .iter()
            .zip(&coeffs)
            .fold(ComplexMatrix::zeros(n, n), |acc, (b, c)| &acc + &b.scale_real(*c));
        prop_assert!(in_su_group(&matexp(&x).unwrap(), 1e-9));
    }

    #[test]
    fn exp_inverse(
        n in 1usize..=5,
        entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 25),
    ) {
        let mut a = random_matrix(n, &entries);
        let norm = a.norm_one();
        if norm > 5.0 {
            a = a.scale_real(5.0 / norm);
        }
        let product = &matexp(&a).unwrap() * &matexp(&a.scale_real(-1.0)).unwrap();
        prop_assert!(product.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-11);
    }

    #[test]
    fn exp_of_diagonal(d in prop::collection::vec((-2.0f64..2.0, -6.0f64..6.0), 1..6)) {
        let diag: Vec<Complex64> = d.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let e = matexp(&ComplexMatrix::diagonal(&diag)).unwrap();
        let expected = ComplexMatrix::diagonal(&diag.iter().map(|z| z.exp()).collect::<Vec<_>>());
        prop_assert!(e.max_abs_diff(&expected) < 1e-13 * expected.max_abs().max(1.0));
    }

    #[test]
    fn exponential_consistency(twice in 0i64..=8, a in prop::array::uniform3(-1.7f64..1.7)) {
        let rep = build_rep(h(twice)).unwrap();
        let x = [SpinOperator::X1, SpinOperator::X2, SpinOperator::X3]
            .iter()
            .zip(a)
            .fold(ComplexMatrix::zeros(rep.dim(), rep.dim()), |acc, (op, c)| {
                &acc + &rep_to_float(&rep, *op).unwrap().scale_real(c)
            });
        prop_assert!(in_su_group(&matexp(&x).unwrap(), 1e-9));
    }

    /// Random product-basis states whose amplitudes are ±√(w_k / Σw).
    #[test]
    fn measurement_invariants(
        a in 0i64..=4,
        b in 0i64..=4,
        weights in prop::collection::vec((0u32..4, any::<bool>()), 25),
        particle in 1u8..=2,
    ) {
        let (s1, s2) = (h(a), h(b));
        let dim = UncoupledBasis::new(s1, s2).unwrap().dim();
        let w: Vec<(u32, bool)> = weights.into_iter().take(dim).collect();
        let total: u32 = w.iter().map(|(x, _)| x).sum();
        prop_assume!(total > 0);
        let amplitudes: Vec<SqrtRational> = w
            .iter()
            .map(|&(x, neg)| {
                SqrtRational::signed_sqrt(if neg { -1 } else { 1 }, &BigRational::new(x.into(), total.into())).unwrap()
            })
            .collect();
        let v = StateVector::new(BasisKind::Uncoupled, s1, s2, amplitudes).unwrap();
        let t = cg_table(s1, s2).unwrap();
        let particle = Particle::from_index(particle).unwrap();

        let probs = measure_probabilities(&v, particle, &t).unwrap();
        prop_assert_eq!(probs.iter().map(|(_, p)| p).sum::<BigRational>(), BigRational::one());
        for (m, _) in probs {
            let post = collapse(&v, particle, m, &t).unwrap();
            prop_assert!(!is_entangled(&post, &t).unwrap());
            prop_assert_eq!(measure_probabilities(&post, particle, &t).unwrap(), vec![(m, BigRational::one())]);
        }
        // Back to coupled and out again when every amplitude stays a single radical.
        if let Ok(c) = to_coupled(&v, &t) {
            prop_assert_eq!(spinrep_core::states::to_uncoupled(&c, &t).unwrap(), v);
        }
    }
}

#[test]
fn coupled_basis_states_are_entangled_iff_multi_term() {
    for a in 0..=4 {
        for b in 0..=4 {
            let t = cg_table(h(a), h(b)).unwrap();
            for (s, m) in CoupledBasis::new(h(a), h(b)).unwrap().labels() {
                let v = StateVector::coupled(h(a), h(b), s, m).unwrap();
                let terms = t.state(s, m).unwrap().terms.len();
                assert_eq!(is_entangled(&v, &t).unwrap(), terms > 1);
            }
        }
    }
}
