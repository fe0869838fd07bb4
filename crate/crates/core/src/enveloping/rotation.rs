use nalgebra::DMatrix;
use num::Zero;
use rand::Rng;

use crate::rational::{qi, Q};

/// `exp(A)` for a real matrix by scaling and squaring with a Taylor core.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.abs().row_sum().max();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / 2f64.powi(squarings as i32);
    let mut sum = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &scaled / k as f64;
        sum += &term;
        if term.abs().max() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Matrix of `X_ij = E_ij - E_ji` on `C^n`.
pub fn x_matrix(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    m
}

/// `exp(Σ_{i<j} c_ij X_ij)` with random coefficients `c_ij` drawn from the
/// eighths in `[-1, 1]`.
pub fn random_rotation<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let c = rng.random_range(-8i32..=8) as f64 / 8.0;
            a += x_matrix(n, i, j) * c;
        }
    }
    expm(&a)
}

/// Exact matrix `g` with `g e_p = sign_p e_{perm[p]}`.
pub fn signed_permutation(perm: &[usize], signs: &[i32]) -> Vec<Vec<Q>> {
    let n = perm.len();
    let mut g = vec![vec![Q::zero(); n]; n];
    for p in 0..n {
        g[perm[p]][p] = qi(signs[p] as i64);
    }
    g
}

/// A fixed family of signed permutations generating the hyperoctahedral group:
/// each adjacent transposition with the first moved coordinate negated, and a
/// single sign flip.
pub fn signed_permutation_generators(n: usize) -> Vec<Vec<Vec<Q>>> {
    let mut out = Vec::new();
    for t in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(t, t + 1);
        let mut signs = vec![1; n];
        signs[t] = -1;
        out.push(signed_permutation(&perm, &signs));
    }
    let mut signs = vec![1; n];
    signs[0] = -1;
    out.push(signed_permutation(&(0..n).collect::<Vec<_>>(), &signs));
    out
}
