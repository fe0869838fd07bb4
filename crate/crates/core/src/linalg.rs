//! Exact Gaussian elimination over the rationals.

use num::{One, Signed, Zero};

use crate::rational::Q;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Q>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == rows.len() {
            break;
        }
        let Some(p) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = Q::one() / &rows[row][col];
        for v in rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[row].clone();
        for (i, other) in rows.iter_mut().enumerate() {
            if i == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (o, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *o -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Basis of `{x : A x = 0}` where `A` has `ncols` columns.
pub fn nullspace(rows: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

pub fn determinant(rows: &[Vec<Q>]) -> Q {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        let pivot_row = m[col].clone();
        for other in m.iter_mut().skip(col + 1) {
            if other[col].is_zero() {
                continue;
            }
            let f = &other[col] / &pivot_row[col];
            for (o, pv) in other.iter_mut().zip(&pivot_row) {
                *o -= &f * pv;
            }
        }
    }
    det
}

/// Largest absolute entry, as f64.
pub fn max_abs(v: &[Q]) -> f64 {
    v.iter().map(|x| crate::rational::to_f64(&x.abs())).fold(0.0, f64::max)
}
