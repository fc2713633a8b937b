use num::{BigUint, Integer, One, Zero};

/// Splits `n` into `(root, core)` with `root² · core = n` and `core` square-free.
///
/// Trial division; prime factors are divided out as they are found, so the
/// search bound shrinks with the unfactored remainder.
///
/// # Panics
///
/// Panics when `n` is zero.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    assert!(!n.is_zero(), "squarefree_decompose requires n ≥ 1");
    let mut rest = n.clone();
    let mut root = BigUint::one();
    let mut core = BigUint::one();

    let mut strip = |p: &BigUint, rest: &mut BigUint| {
        let mut count = 0u32;
        loop {
            let (q, r) = rest.div_rem(p);
            if !r.is_zero() {
                break;
            }
            *rest = q;
            count += 1;
        }
        for _ in 0..count / 2 {
            root *= p;
        }
        if count % 2 == 1 {
            core *= p;
        }
    };

    strip(&BigUint::from(2u32), &mut rest);
    let mut p = BigUint::from(3u32);
    while &p * &p <= rest {
        strip(&p, &mut rest);
        p += 2u32;
    }
    // Whatever remains is 1 or a prime.
    core *= rest;
    (root, core)
}
