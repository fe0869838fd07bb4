use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use nalgebra::DMatrix;
use num::{One, Zero};

use super::{Operator, RepSpace};
use crate::error::{Error, Result};
use crate::linalg::determinant;
use crate::rational::{qi, Q};

/// Sorts `idx` and returns the permutation sign, or `None` on a repeated index.
pub fn sort_with_sign(mut idx: Vec<usize>) -> Option<(Vec<usize>, i32)> {
    let mut sign = 1;
    for a in 0..idx.len() {
        for b in 0..idx.len() - 1 - a {
            if idx[b] > idx[b + 1] {
                idx.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((idx, sign))
    }
}

/// Element of `∧^k C^n` keyed by sorted index sets.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExteriorVector {
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Q>,
}

impl ExteriorVector {
    pub fn zero(degree: usize) -> Self {
        ExteriorVector { degree, coeffs: BTreeMap::new() }
    }

    /// `e_{i_1} ∧ ... ∧ e_{i_k}` in any order; zero on a repeated index.
    pub fn wedge(indices: &[usize]) -> Self {
        let mut v = Self::zero(indices.len());
        if let Some((sorted, sign)) = sort_with_sign(indices.to_vec()) {
            v.add_term(sorted, qi(sign as i64));
        }
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn add_term(&mut self, set: Vec<usize>, c: Q) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&set) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.coeffs.remove(&set);
        } else {
            self.coeffs.insert(set, sum);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, v) in &self.coeffs {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, Q> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The representation `∧^k C^n` of `o(n)`, basis in lexicographic order of
/// index sets. Indices are 0-based.
#[derive(Clone, Debug)]
pub struct ExteriorPower {
    n: usize,
    k: usize,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl ExteriorPower {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::invalid(format!("no exterior power ∧^{k} C^{n}")));
        }
        let basis: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let index = basis.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(ExteriorPower { n, k, basis, index })
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn index_of(&self, set: &[usize]) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn to_coords(&self, v: &ExteriorVector) -> Result<Vec<Q>> {
        if v.degree() != self.k {
            return Err(Error::invalid(format!("vector of degree {} in ∧^{}", v.degree(), self.k)));
        }
        let mut out = vec![Q::zero(); self.basis.len()];
        for (s, c) in v.coeffs() {
            let i = self
                .index_of(s)
                .ok_or_else(|| Error::invalid(format!("index set {s:?} out of range for n={}", self.n)))?;
            out[i] = c.clone();
        }
        Ok(out)
    }

    pub fn from_coords(&self, coords: &[Q]) -> ExteriorVector {
        let mut v = ExteriorVector::zero(self.k);
        for (s, c) in self.basis.iter().zip(coords) {
            v.add_term(s.clone(), c.clone());
        }
        v
    }

    /// `⋆ e_S = sgn(S, S^c) e_{S^c}` on `∧^k C^{2k}`.
    pub fn hodge_star(&self) -> Result<Operator> {
        if 2 * self.k != self.n {
            return Err(Error::invalid("the Hodge star is an endomorphism only when n = 2k"));
        }
        let mut op = Operator::zero(self.basis.len());
        for (j, s) in self.basis.iter().enumerate() {
            let comp: Vec<usize> = (0..self.n).filter(|p| !s.contains(p)).collect();
            let mut joined = s.clone();
            joined.extend(&comp);
            let (_, sign) = sort_with_sign(joined).expect("disjoint");
            op.add_entry(self.index[&comp], j, qi(sign as i64));
        }
        Ok(op)
    }
}

impl RepSpace for ExteriorPower {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn basis_label(&self, idx: usize) -> String {
        self.basis[idx].iter().map(|p| format!("e{}", p + 1)).join("^")
    }

    fn x_raw(&self, i: usize, j: usize) -> Operator {
        let mut op = Operator::zero(self.basis.len());
        for (col, s) in self.basis.iter().enumerate() {
            for (slot, &p) in s.iter().enumerate() {
                let (target, c) = if p == j {
                    (i, 1)
                } else if p == i {
                    (j, -1)
                } else {
                    continue;
                };
                let mut img = s.clone();
                img[slot] = target;
                if let Some((sorted, sign)) = sort_with_sign(img) {
                    op.add_entry(self.index[&sorted], col, qi((c * sign) as i64));
                }
            }
        }
        op
    }

    fn group_action_exact(&self, g: &[Vec<Q>]) -> Option<Operator> {
        let mut op = Operator::zero(self.basis.len());
        for (col, t) in self.basis.iter().enumerate() {
            for (row, s) in self.basis.iter().enumerate() {
                let minor: Vec<Vec<Q>> = s.iter().map(|&a| t.iter().map(|&b| g[a][b].clone()).collect()).collect();
                let det = if self.k == 0 { Q::one() } else { determinant(&minor) };
                op.add_entry(row, col, det);
            }
        }
        Some(op)
    }

    fn group_action_f64(&self, g: &DMatrix<f64>) -> Option<DMatrix<f64>> {
        let dim = self.basis.len();
        let mut out = DMatrix::zeros(dim, dim);
        for (col, t) in self.basis.iter().enumerate() {
            for (row, s) in self.basis.iter().enumerate() {
                let minor = DMatrix::from_fn(self.k, self.k, |a, b| g[(s[a], t[b])]);
                out[(row, col)] = if self.k == 0 { 1.0 } else { minor.determinant() };
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorting_sign() {
        assert_eq!(sort_with_sign(vec![2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(vec![1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(vec![1, 1]), None);
        assert!(ExteriorVector::wedge(&[0, 0]).is_zero());
    }

    #[test]
    fn x_action_examples() {
        let c2 = ExteriorPower::new(2, 1).unwrap();
        let x12 = c2.x_operator(0, 1).unwrap();
        let e1 = c2.to_coords(&ExteriorVector::wedge(&[0])).unwrap();
        let e2 = c2.to_coords(&ExteriorVector::wedge(&[1])).unwrap();
        assert_eq!(x12.apply(&e1), e2.iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(x12.apply(&e2), e1);

        let w = ExteriorPower::new(3, 2).unwrap();
        let x12 = w.x_operator(0, 1).unwrap();
        let v = w.to_coords(&ExteriorVector::wedge(&[0, 2])).unwrap();
        let expect = w.to_coords(&ExteriorVector::wedge(&[1, 2]).scale(&qi(-1))).unwrap();
        assert_eq!(x12.apply(&v), expect);
        assert!(w.x_operator(1, 1).is_err());
        assert!(w.x_operator(0, 3).is_err());
    }

    #[test]
    fn hodge_star_squares_to_sign() {
        for k in 1..=3 {
            let w = ExteriorPower::new(2 * k, k).unwrap();
            let star = w.hodge_star().unwrap();
            let sign = if k % 2 == 1 { -1 } else { 1 };
            assert_eq!(star.compose(&star), Operator::scalar(w.dim(), qi(sign)));
        }
        assert!(ExteriorPower::new(5, 2).unwrap().hodge_star().is_err());
    }

    #[test]
    fn compound_matrix_is_homomorphism() {
        let w = ExteriorPower::new(4, 2).unwrap();
        let swap: Vec<Vec<Q>> = (0..4)
            .map(|a| (0..4).map(|b| qi(((a == 0 && b == 1) || (a == 1 && b == 0) || (a == b && a > 1)) as i64)).collect())
            .collect();
        let g = w.group_action_exact(&swap).unwrap();
        assert_eq!(g.compose(&g), Operator::identity(w.dim()));
    }
}
