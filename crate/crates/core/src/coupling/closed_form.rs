use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exact::{HalfInt, SqrtRational};
use crate::repn::{check_projection, check_spin};

use super::{CgBlock, CgTable, CgTerm, CoupledState};

/// Sign convention for the `s₂ = ½` closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// The formula taken literally: `A` positive in both multiplets.
    Direct,
    /// Highest-`m₁` coefficient positive; the `s = s₁ − ½` multiplet is
    /// negated relative to `Direct`.
    Standard,
}

/// Coefficients of `|s m⟩` in `s₁ ⊗ ½` for `s = s₁ ± ½`:
///
/// `A = √((s₁ ± m + ½)/(2s₁+1))` on `|s₁ m−½⟩|↑⟩` and
/// `B = ±√((s₁ ∓ m + ½)/(2s₁+1))` on `|s₁ m+½⟩|↓⟩`.
///
/// Returns `[A-term, B-term]`. At `m = ±s` one of the kets lies outside the
/// spin-`s₁` multiplet and its coefficient is zero.
pub fn cg_closed_form_half(
    s1: HalfInt,
    s: HalfInt,
    m: HalfInt,
    convention: Convention,
) -> Result<[CgTerm; 2]> {
    check_spin(s1)?;
    let upper = if s == s1 + HalfInt::HALF {
        true
    } else if s == s1 - HalfInt::HALF && !s.is_negative() {
        false
    } else {
        return Err(domain(format!("s = {s} is not s1 ± 1/2 for s1 = {s1}")));
    };
    check_projection(s, m)?;

    // In units of halves: (s₁ ± m + ½)/(2s₁+1) = (S₁ ± M + 1)/(2(S₁+1)).
    let (big_s1, big_m) = (s1.twice(), m.twice());
    let den = BigInt::from(2 * (big_s1 + 1));
    let (a_num, b_num) = if upper {
        (big_s1 + big_m + 1, big_s1 - big_m + 1)
    } else {
        (big_s1 - big_m + 1, big_s1 + big_m + 1)
    };
    let a = SqrtRational::sqrt(&BigRational::new(a_num.into(), den.clone()))?;
    let b = SqrtRational::signed_sqrt(if upper { 1 } else { -1 }, &BigRational::new(b_num.into(), den))?;
    let (a, b) = match (convention, upper) {
        (Convention::Standard, false) => (-a, -b),
        _ => (a, b),
    };
    Ok([
        CgTerm { m1: m - HalfInt::HALF, m2: HalfInt::HALF, coeff: a },
        CgTerm { m1: m + HalfInt::HALF, m2: -HalfInt::HALF, coeff: b },
    ])
}

/// The table of `s₁ ⊗ ½` assembled from the closed form.
pub fn closed_form_table(s1: HalfInt, convention: Convention) -> Result<CgTable> {
    check_spin(s1)?;
    let mut spins = vec![s1 + HalfInt::HALF];
    if s1 > HalfInt::ZERO {
        spins.push(s1 - HalfInt::HALF);
    }
    let blocks = spins
        .into_iter()
        .map(|s| {
            let states = s
                .descending()
                .map(|m| {
                    let [a, b] = cg_closed_form_half(s1, s, m, convention)?;
                    // B sits on the higher m₁.
                    let terms = [b, a].into_iter().filter(|t| !t.coeff.is_zero()).collect();
                    Ok(CoupledState { m, terms })
                })
                .collect::<Result<_>>()?;
            Ok(CgBlock { s, states })
        })
        .collect::<Result<_>>()?;
    CgTable::from_blocks(s1, HalfInt::HALF, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::cg_table;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn spin_half_examples() {
        let r = SqrtRational::sqrt(&BigRational::new(1.into(), 2.into())).unwrap();
        let [a, b] = cg_closed_form_half(h(1), h(2), h(0), Convention::Direct).unwrap();
        assert_eq!((a.coeff, b.coeff), (r.clone(), r.clone()));

        // Direct: +A on |↓⟩|↑⟩, B negative on |↑⟩|↓⟩.
        let [a, b] = cg_closed_form_half(h(1), h(0), h(0), Convention::Direct).unwrap();
        assert_eq!((a.m1, a.m2, a.coeff), (h(-1), h(1), r.clone()));
        assert_eq!((b.m1, b.m2, b.coeff), (h(1), h(-1), -r.clone()));

        let [a, b] = cg_closed_form_half(h(1), h(0), h(0), Convention::Standard).unwrap();
        assert_eq!((a.m1, a.coeff), (h(-1), -r.clone()));
        assert_eq!((b.m1, b.coeff), (h(1), r));
    }

    #[test]
    fn rejects_other_spins() {
        assert!(cg_closed_form_half(h(2), h(5), h(1), Convention::Direct).is_err());
        assert!(cg_closed_form_half(h(2), h(1), h(3), Convention::Direct).is_err());
        assert!(cg_closed_form_half(h(0), h(-1), h(-1), Convention::Direct).is_err());
    }

    #[test]
    fn agrees_with_ladder() {
        for a in 0..=8 {
            let ladder = cg_table(h(a), h(1)).unwrap();
            assert_eq!(closed_form_table(h(a), Convention::Standard).unwrap(), ladder);
            let direct = closed_form_table(h(a), Convention::Direct).unwrap();
            for ((s, p), (_, l)) in direct.states().zip(ladder.states()) {
                let expected: Vec<_> = if s > h(a) {
                    l.terms.clone()
                } else {
                    l.terms.iter().map(|t| CgTerm { coeff: -&t.coeff, ..t.clone() }).collect()
                };
                assert_eq!(p.terms, expected);
            }
        }
    }
}
