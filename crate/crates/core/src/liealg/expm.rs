use super::ComplexMatrix;
use crate::error::{domain, Result};

/// Scaled matrices have 1-norm at most this before the series is summed.
const SCALED_NORM_LIMIT: f64 = 0.5;
/// The series stops once a term's 1-norm drops below this.
const TERM_CUTOFF: f64 = 1e-16;
const MAX_TERMS: usize = 64;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// `A` is scaled by `2^-j` so that `‖A/2^j‖₁ ≤ 1/2`, the series for the scaled
/// matrix is summed until the next term is negligible, and the result is
/// squared `j` times.
pub fn matexp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(domain(format!("matexp of a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let norm = a.norm_one();
    if !norm.is_finite() {
        return Err(domain("matexp of a matrix with non-finite entries"));
    }

    let mut squarings = 0u32;
    let mut scaled_norm = norm;
    while scaled_norm > SCALED_NORM_LIMIT {
        scaled_norm /= 2.0;
        squarings += 1;
    }
    let scaled = a.scale_real(0.5f64.powi(squarings as i32));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = &sum + &term;
        if term.norm_one() < TERM_CUTOFF {
            break;
        }
    }

    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}
