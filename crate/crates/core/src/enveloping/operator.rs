use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, to_f64, Q};

/// Square sparse matrix with exact entries, stored by column: `cols[j]` is the
/// image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    dim: usize,
    cols: Vec<BTreeMap<usize, Q>>,
}

impl Operator {
    pub fn zero(dim: usize) -> Self {
        Operator { dim, cols: vec![BTreeMap::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Q::one())
    }

    pub fn scalar(dim: usize, c: Q) -> Self {
        let mut op = Self::zero(dim);
        for j in 0..dim {
            op.add_entry(j, j, c.clone());
        }
        op
    }

    pub fn from_columns(dim: usize, cols: Vec<BTreeMap<usize, Q>>) -> Result<Self> {
        if cols.len() != dim || cols.iter().any(|c| c.keys().any(|&i| i >= dim)) {
            return Err(Error::invalid("column data does not match operator dimension"));
        }
        let mut op = Self::zero(dim);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col {
                op.add_entry(i, j, v);
            }
        }
        Ok(op)
    }

    pub fn from_dense(rows: &[Vec<Q>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("dense matrix is not square"));
        }
        let mut op = Self::zero(dim);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                op.add_entry(i, j, v.clone());
            }
        }
        Ok(op)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_entry(&mut self, row: usize, col: usize, v: Q) {
        if v.is_zero() {
            return;
        }
        let slot = &mut self.cols[col];
        let sum = match slot.get(&row) {
            Some(old) => old + &v,
            None => v,
        };
        if sum.is_zero() {
            slot.remove(&row);
        } else {
            slot.insert(row, sum);
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Q {
        self.cols[col].get(&row).cloned().unwrap_or_else(Q::zero)
    }

    pub fn column(&self, col: usize) -> &BTreeMap<usize, Q> {
        &self.cols[col]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in &self.cols[j] {
                out[*i] += a * x;
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Operator) -> Operator {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        let mut out = Operator::zero(self.dim);
        for (j, col) in other.cols.iter().enumerate() {
            for (k, b) in col {
                for (i, a) in &self.cols[*k] {
                    out.add_entry(*i, j, a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Operator) -> Operator {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Operator) {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        for (j, col) in other.cols.iter().enumerate() {
            for (i, v) in col {
                self.add_entry(*i, j, v.clone());
            }
        }
    }

    pub fn sub(&self, other: &Operator) -> Operator {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Operator {
        if c.is_zero() {
            return Operator::zero(self.dim);
        }
        Operator {
            dim: self.dim,
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(i, v)| (*i, v * c)).collect())
                .collect(),
        }
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        self.compose(other).sub(&other.compose(self))
    }

    /// `Some(c)` when the operator is `c` times the identity.
    pub fn as_scalar(&self) -> Option<Q> {
        let c = self.entry(0, 0);
        (*self == Operator::scalar(self.dim, c.clone())).then_some(c)
    }

    pub fn max_abs(&self) -> f64 {
        self.cols
            .iter()
            .flat_map(|c| c.values())
            .map(|v| to_f64(&v.abs()))
            .fold(0.0, f64::max)
    }

    pub fn to_dense_f64(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = to_f64(v);
            }
        }
        m
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            rows: self.dim,
            cols: self.dim,
            entries: (0..self.dim)
                .map(|i| (0..self.dim).map(|j| fmt_q(&self.entry(i, j))).collect())
                .collect(),
        }
    }
}

/// Dense exact matrix in JSON: `{rows, cols, entries: [["p/q", ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixRecord {
    pub fn to_operator(&self) -> Result<Operator> {
        if self.rows != self.cols || self.entries.len() != self.rows {
            return Err(Error::invalid("matrix record is not square"));
        }
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Operator::from_dense(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn m(rows: &[&[i64]]) -> Operator {
        Operator::from_dense(&rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn compose_matches_matrix_product() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.compose(&b), m(&[&[2, 1], &[1, 0]]));
        assert_eq!(a.apply(&[qi(1), qi(1)]), vec![qi(3), qi(1)]);
        assert!(!a.commutator(&b).is_zero());
        assert_eq!(Operator::scalar(3, q(1, 2)).as_scalar(), Some(q(1, 2)));
        assert_eq!(a.as_scalar(), None);
    }

    #[test]
    fn record_round_trip() {
        let a = m(&[&[1, -2], &[0, 3]]).scale(&q(1, 3));
        let rec = a.to_record();
        assert_eq!(rec.entries[0][1], "-2/3");
        assert_eq!(rec.to_operator().unwrap(), a);
        assert_eq!(a.sub(&a), Operator::zero(2));
    }
}
