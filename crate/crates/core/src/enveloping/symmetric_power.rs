use std::collections::HashMap;

use num::Zero;

use super::{Operator, RepSpace};
use crate::error::{Error, Result};
use crate::linalg::nullspace;
use crate::rational::{qi, Q};

/// Homogeneous polynomials of degree `m` in `x_1..x_n`, with `o(n)` acting on
/// the variables as on `C^n`.
#[derive(Clone, Debug)]
pub struct SymmetricPower {
    n: usize,
    m: u32,
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

/// Exponent vectors of total degree `m` in `n` variables, lexicographically descending.
pub(crate) fn exponent_vectors(n: usize, m: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in exponent_vectors(n - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl SymmetricPower {
    pub fn new(n: usize, m: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("symmetric power needs n >= 1"));
        }
        let basis = exponent_vectors(n, m);
        let index = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(SymmetricPower { n, m, basis, index })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Basis of the harmonic subspace, the kernel of the Laplacian into degree `m - 2`.
    pub fn harmonic_basis(&self) -> Vec<Vec<Q>> {
        if self.m < 2 {
            return (0..self.basis.len())
                .map(|i| (0..self.basis.len()).map(|j| qi((i == j) as i64)).collect())
                .collect();
        }
        let lower = SymmetricPower::new(self.n, self.m - 2).expect("n >= 1");
        let mut rows = vec![vec![Q::zero(); self.basis.len()]; lower.basis.len()];
        for (col, e) in self.basis.iter().enumerate() {
            for p in 0..self.n {
                if e[p] >= 2 {
                    let mut img = e.clone();
                    img[p] -= 2;
                    rows[lower.index[&img]][col] += qi((e[p] * (e[p] - 1)) as i64);
                }
            }
        }
        nullspace(&rows, self.basis.len())
    }
}

impl RepSpace for SymmetricPower {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn basis_label(&self, idx: usize) -> String {
        let parts: Vec<String> = self.basis[idx]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(p, &e)| if e == 1 { format!("x{}", p + 1) } else { format!("x{}^{e}", p + 1) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    // X_ij x_p = x_i if p = j, -x_j if p = i, extended as a derivation
    fn x_raw(&self, i: usize, j: usize) -> Operator {
        let mut op = Operator::zero(self.basis.len());
        for (col, e) in self.basis.iter().enumerate() {
            if e[j] > 0 {
                let mut img = e.clone();
                img[j] -= 1;
                img[i] += 1;
                op.add_entry(self.index[&img], col, qi(e[j] as i64));
            }
            if e[i] > 0 {
                let mut img = e.clone();
                img[i] -= 1;
                img[j] += 1;
                op.add_entry(self.index[&img], col, qi(-(e[i] as i64)));
            }
        }
        op
    }
}
