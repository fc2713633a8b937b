use num::complex::Complex64;

use super::ComplexMatrix;
use crate::error::{domain, Result};

/// Default tolerance for the membership predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(domain(format!(
            "commutator needs square matrices of equal size, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    (a * b).checked_sub(&(b * a))
}

/// `X ∈ u(n)`: `‖X + X†‖_max ≤ tol`.
pub fn in_u_algebra(x: &ComplexMatrix, tol: f64) -> bool {
    x.is_square() && (x + &x.adjoint()).max_abs() <= tol
}

/// `X ∈ su(n)`: skew-Hermitian and traceless.
pub fn in_su_algebra(x: &ComplexMatrix, tol: f64) -> bool {
    in_u_algebra(x, tol) && x.trace().norm() <= tol
}

/// `U ∈ U(n)`: `‖U†U − I‖_max ≤ tol`.
pub fn in_u_group(u: &ComplexMatrix, tol: f64) -> bool {
    u.is_square() && (&(&u.adjoint() * u) - &ComplexMatrix::identity(u.rows())).max_abs() <= tol
}

/// `U ∈ SU(n)`: unitary with `|det U − 1| ≤ tol`.
pub fn in_su_group(u: &ComplexMatrix, tol: f64) -> bool {
    in_u_group(u, tol) && u.determinant().is_ok_and(|d| (d - ONE).norm() <= tol)
}

fn unit(n: usize, r: usize, c: usize, value: Complex64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    m[(r, c)] = value;
    m
}

/// Off-diagonal skew-Hermitian generators `E_jk − E_kj` and `i(E_jk + E_kj)`.
fn off_diagonal_generators(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1));
    for j in 0..n {
        for k in j + 1..n {
            out.push(&unit(n, j, k, ONE) - &unit(n, k, j, ONE));
            out.push(&unit(n, j, k, I) + &unit(n, k, j, I));
        }
    }
    out
}

/// A real basis of `u(n)`: `n²` skew-Hermitian matrices.
pub fn u_basis(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n == 0 {
        return Err(domain("u(n) needs n ≥ 1"));
    }
    let mut out = off_diagonal_generators(n);
    out.extend((0..n).map(|j| unit(n, j, j, I)));
    Ok(out)
}

/// A real basis of `su(n)`: `n² − 1` traceless skew-Hermitian matrices.
pub fn su_basis(n: usize) -> Result<Vec<ComplexMatrix>> {
    if n == 0 {
        return Err(domain("su(n) needs n ≥ 1"));
    }
    let mut out = off_diagonal_generators(n);
    out.extend((0..n - 1).map(|j| &unit(n, j, j, I) - &unit(n, j + 1, j + 1, I)));
    Ok(out)
}

/// Rank of the real Gram matrix `G_ab = Re tr(A†B)` of the given matrices.
///
/// Gaussian elimination with partial pivoting; a pivot counts when it exceeds
/// `tol` times the largest diagonal entry (or `tol` itself, if that is larger).
pub fn gram_rank(mats: &[ComplexMatrix], tol: f64) -> usize {
    let k = mats.len();
    let mut g = vec![vec![0.0f64; k]; k];
    for a in 0..k {
        for b in a..k {
            let v: f64 =
                mats[a].as_slice().iter().zip(mats[b].as_slice()).map(|(x, y)| (x.conj() * y).re).sum();
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    let scale = (0..k).map(|a| g[a][a]).fold(1.0f64, f64::max);
    let threshold = tol * scale;

    let mut rank = 0;
    for col in 0..k {
        let Some(pivot) = (rank..k).max_by(|&a, &b| g[a][col].abs().total_cmp(&g[b][col].abs())) else {
            break;
        };
        if g[pivot][col].abs() <= threshold {
            continue;
        }
        g.swap(rank, pivot);
        let (top, below) = g.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below.iter_mut() {
            let factor = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
        }
        rank += 1;
    }
    rank
}

/// True when the matrices are linearly independent over the reals.
pub fn linearly_independent(mats: &[ComplexMatrix], tol: f64) -> bool {
    gram_rank(mats, tol) == mats.len()
}

fn check_index(j: usize) -> Result<()> {
    if (1..=3).contains(&j) {
        Ok(())
    } else {
        Err(domain(format!("generator index must be 1, 2 or 3, got {j}")))
    }
}

fn two_by_two(entries: [[Complex64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_rows(entries.iter().map(|r| r.to_vec()).collect()).expect("2x2 literal")
}

/// The `su(2)` generators `X₁ = ½[[0,−i],[−i,0]]`, `X₂ = ½[[0,−1],[1,0]]`,
/// `X₃ = ½[[−i,0],[0,i]]`.
pub fn generator_x(j: usize) -> Result<ComplexMatrix> {
    check_index(j)?;
    let h = 0.5;
    let m = match j {
        1 => two_by_two([[ZERO, -I * h], [-I * h, ZERO]]),
        2 => two_by_two([[ZERO, -ONE * h], [ONE * h, ZERO]]),
        _ => two_by_two([[-I * h, ZERO], [ZERO, I * h]]),
    };
    Ok(m)
}

/// Pauli matrix `σ_j = 2i·X_j`.
pub fn pauli(j: usize) -> Result<ComplexMatrix> {
    Ok(generator_x(j)?.scale(I * 2.0))
}

/// Spin-½ operator `S_j = i·X_j = σ_j / 2`.
pub fn spin_float(j: usize) -> Result<ComplexMatrix> {
    Ok(generator_x(j)?.scale(I))
}

/// The irreducible representation `θ ↦ e^{inθ}` of `U(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct U1Irrep {
    pub n: i64,
}

impl U1Irrep {
    pub fn apply(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.n as f64 * theta)
    }
}

pub fn u1_irrep(n: i64) -> U1Irrep {
    U1Irrep { n }
}
