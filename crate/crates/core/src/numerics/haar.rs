use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::GrassmannSignature;

/// Samples per independent generator stream.
pub const BLOCK: usize = 4096;

/// Generator for block `block` of the run seeded with `seed`. Blocks are
/// independent ChaCha streams, so results do not depend on how blocks are
/// scheduled across workers.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// An `n × i` matrix with orthonormal columns spanning a point of `Gr_i(R^n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceFrame {
    mat: DMatrix<f64>,
    seed: Option<u64>,
}

impl SubspaceFrame {
    /// Orthonormalizes the columns of `m`.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        if m.ncols() == 0 || m.ncols() > m.nrows() {
            return Err(Error::invalid(format!("cannot frame a {}x{} matrix", m.nrows(), m.ncols())));
        }
        let qr = m.clone().qr();
        if qr.r().diagonal().iter().any(|d| d.abs() < 1e-12) {
            return Err(Error::NumericalDegeneracy("frame columns are linearly dependent".into()));
        }
        Ok(SubspaceFrame { mat: qr.q(), seed: None })
    }

    /// `span(e_1, ..., e_i)`.
    pub fn base_point(n: usize, i: usize) -> Self {
        SubspaceFrame {
            mat: DMatrix::from_fn(n, i, |a, b| if a == b { 1.0 } else { 0.0 }),
            seed: None,
        }
    }

    pub fn random<R: rand::Rng>(n: usize, i: usize, rng: &mut R) -> Self {
        loop {
            let g = DMatrix::from_fn(n, i, |_, _| StandardNormal.sample(rng));
            if let Ok(f) = Self::from_matrix(g) {
                return f;
            }
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn dim(&self) -> usize {
        self.mat.ncols()
    }

    /// Orthogonal projection `F Fᵀ`.
    pub fn projection(&self) -> DMatrix<f64> {
        &self.mat * self.mat.transpose()
    }

    /// `g F` for an orthogonal `g`.
    pub fn rotate(&self, g: &DMatrix<f64>) -> Self {
        SubspaceFrame { mat: g * &self.mat, seed: self.seed }
    }

    /// Orthonormal frame of the orthogonal complement.
    pub fn complement(&self) -> Self {
        SubspaceFrame { mat: complement_frame(&self.mat), seed: self.seed }
    }

    pub fn orthonormality_error(&self) -> f64 {
        let i = self.dim();
        (self.mat.transpose() * &self.mat - DMatrix::<f64>::identity(i, i)).abs().max()
    }
}

/// Orthonormal basis of the orthogonal complement of the column span of the
/// orthonormal matrix `f`, by Gram-Schmidt on the coordinate vectors taken
/// in order of decreasing residual.
pub(crate) fn complement_frame(f: &DMatrix<f64>) -> DMatrix<f64> {
    let n = f.nrows();
    let k = n - f.ncols();
    let mut basis = f.clone();
    let mut out = DMatrix::zeros(n, k);
    for c in 0..k {
        let mut best = DVector::zeros(n);
        let mut best_norm = -1.0;
        for e in 0..n {
            let mut v = DVector::zeros(n);
            v[e] = 1.0;
            for _ in 0..2 {
                let coef = basis.transpose() * &v;
                v -= &basis * coef;
            }
            let nv = v.norm();
            if nv > best_norm {
                best_norm = nv;
                best = v;
            }
        }
        best /= best_norm;
        out.column_mut(c).copy_from(&best);
        let cols = basis.ncols();
        basis = basis.insert_column(cols, 0.0);
        let last = basis.ncols() - 1;
        basis.column_mut(last).copy_from(&best);
    }
    out
}

/// Haar-distributed orthogonal `k × k` matrix.
pub fn haar_orthogonal<R: rand::Rng>(k: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(k, k, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..k {
        if r[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    q
}

/// `count` independent Haar-distributed points of `Gr_i(R^n)`.
pub fn sample_uniform(sig: &GrassmannSignature, count: usize, seed: u64) -> Result<Vec<SubspaceFrame>> {
    if count == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let blocks = count.div_ceil(BLOCK);
    let out: Vec<Vec<SubspaceFrame>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(seed, b as u64);
            let len = BLOCK.min(count - b * BLOCK);
            (0..len).map(|_| SubspaceFrame::random(sig.n(), sig.i(), &mut rng).with_seed(seed)).collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// `|cos(E, F)| = |det(EᵀF)|`.
pub fn cosine(e: &SubspaceFrame, f: &SubspaceFrame) -> Result<f64> {
    if e.n() != f.n() || e.dim() != f.dim() {
        return Err(Error::invalid(format!(
            "cosine needs frames of equal shape, got {}x{} and {}x{}",
            e.n(),
            e.dim(),
            f.n(),
            f.dim()
        )));
    }
    Ok((e.matrix().transpose() * f.matrix()).determinant().abs())
}
