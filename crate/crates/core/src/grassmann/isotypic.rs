use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{env_operator_matrix, EnvOperator, ProjectionPolyRep};
use crate::enveloping::{vd_operator, Operator, RepSpace};
use crate::error::{Error, Result};
use crate::numerics::{block_rng, haar_orthogonal, sample_uniform, SubspaceFrame};
use crate::rational::{fmt_q, to_f64, Q};
use crate::spectral::{dhat_eigenvalue, GrassmannSignature, HighestWeight};
use crate::symmetric::{elementary, RhoVector};

/// Singular values of the stacked `[B_d - λ_d]` below this (times the scale)
/// count as null directions.
const NULL_TOL: f64 = 1e-6;

/// `H_m` inside the sampled polynomial space.
#[derive(Clone, Debug)]
pub struct IsotypicComponent {
    pub m: HighestWeight,
    /// `e_d((m+ρ)²)` for `d = 1..r`.
    pub fingerprint: Vec<Q>,
    /// One column of monomial coefficients per basis function; the evaluation
    /// vectors of the columns on the sample frames are orthonormal.
    pub coeffs: DMatrix<f64>,
}

impl IsotypicComponent {
    pub fn dim(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn to_record(&self) -> ComponentRecord {
        ComponentRecord {
            m: self.m.parts().to_vec(),
            dim: self.dim(),
            fingerprint: self.fingerprint.iter().map(fmt_q).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub m: Vec<u32>,
    pub dim: usize,
    pub fingerprint: Vec<String>,
}

/// Zonal function of a component, normalized to 1 at the base point when it
/// does not vanish there.
#[derive(Clone, Debug)]
pub struct SphericalVector {
    pub coeffs: DVector<f64>,
    pub residual: f64,
    pub base_value: f64,
}

#[derive(Clone, Debug)]
pub struct IsotypicDecomposition {
    sig: GrassmannSignature,
    rep: ProjectionPolyRep,
    frames: Vec<SubspaceFrame>,
    eval: DMatrix<f64>,
    vd: Vec<Operator>,
    rank: usize,
    components: Vec<IsotypicComponent>,
}

/// Thin SVD with singular values in decreasing order.
///
/// nalgebra's SVD loses accuracy on some of the rank-deficient evaluation
/// matrices met here, so this goes through faer and checks the
/// reconstruction.
fn sorted_svd(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let (rows, cols) = m.shape();
    let fm = faer::Mat::<f64>::from_fn(rows, cols, |a, b| m[(a, b)]);
    let svd = fm.thin_svd().map_err(|e| Error::NumericalDegeneracy(format!("SVD failed: {e:?}")))?;
    let k = rows.min(cols);
    let sd = svd.S().column_vector();
    let s: Vec<f64> = (0..k).map(|j| sd[j]).collect();
    let (fu, fv) = (svd.U(), svd.V());
    let u = DMatrix::from_fn(rows, k, |a, b| fu[(a, b)]);
    let v = DMatrix::from_fn(cols, k, |a, b| fv[(a, b)]);
    let scale = max_abs(m.iter()).max(f64::MIN_POSITIVE);
    let recon = max_abs((&u * DMatrix::from_diagonal(&DVector::from_vec(s.clone())) * v.transpose() - m).iter()) / scale;
    if recon > 1e-10 {
        return Err(Error::NumericalDegeneracy(format!("SVD reconstruction error {recon:.3e}")));
    }
    Ok((s, u, v))
}

fn max_abs<'a>(m: impl IntoIterator<Item = &'a f64>) -> f64 {
    m.into_iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// Splits the polynomials of degree `<= max_degree`, restricted to `Gr_i(R^n)`,
/// into isotypic components labelled by their `E_d` eigenvalues.
pub fn build_isotypic(
    sig: &GrassmannSignature,
    max_degree: u32,
    sample_count: usize,
    seed: u64,
    tol: f64,
) -> Result<IsotypicDecomposition> {
    let rep = ProjectionPolyRep::new(sig.n(), max_degree)?;
    let nmono = rep.dim();
    if sample_count < 4 * nmono {
        return Err(Error::invalid(format!(
            "need at least {} samples (4 per monomial), got {sample_count}",
            4 * nmono
        )));
    }
    let frames = sample_uniform(sig, sample_count, seed)?;
    let eval = rep.eval_matrix(&frames);

    let (s, u, v) = sorted_svd(&eval)?;
    let smax = s[0];
    let rank = s.iter().filter(|&&x| x > tol * smax).count();
    if let Some(&bad) = s.iter().find(|&&x| x > 1e-2 * tol * smax && x <= 1e2 * tol * smax) {
        return Err(Error::NumericalDegeneracy(format!(
            "singular value {bad:.3e} lies too close to the rank cutoff {:.3e}",
            tol * smax
        )));
    }
    let uk = u.columns(0, rank).into_owned();
    // lift maps coordinates in the orthonormal evaluation basis to coefficients
    let lift = DMatrix::from_fn(nmono, rank, |a, b| v[(a, b)] / s[b]);

    let r = sig.r();
    let vd: Vec<Operator> = (0..=r).map(|d| vd_operator(d, &rep)).collect::<Result<_>>()?;
    let ed: Vec<DMatrix<f64>> = (1..=r)
        .map(|d| env_operator_matrix(sig, &EnvOperator::Ed(d), &rep).map(|op| op.to_dense_f64()))
        .collect::<Result<_>>()?;
    let b: Vec<DMatrix<f64>> = ed.iter().map(|a| uk.transpose() * &eval * a * &lift).collect();

    let rho = RhoVector::new(sig);
    let mut components = Vec::new();
    let mut found = 0;
    for m in HighestWeight::enumerate(r, 2 * max_degree) {
        let z2: Vec<Q> = rho.shifted(&m).iter().map(|z| z * z).collect();
        let fingerprint: Vec<Q> = (1..=r).map(|d| elementary(d, &z2)).collect();
        let lambdas: Vec<f64> = fingerprint.iter().map(to_f64).collect();
        let scale = lambdas.iter().fold(1.0f64, |acc, l| acc.max(l.abs()));
        let mut stacked = DMatrix::zeros(r * rank, rank);
        for (d, (bd, l)) in b.iter().zip(&lambdas).enumerate() {
            let shifted = bd - DMatrix::<f64>::identity(rank, rank) * *l;
            stacked.view_mut((d * rank, 0), (rank, rank)).copy_from(&shifted);
        }
        let (sv, _, vv) = sorted_svd(&stacked)?;
        let null: Vec<usize> = (0..rank).filter(|&k| sv[k] < NULL_TOL * scale).collect();
        if null.is_empty() {
            continue;
        }
        let w = DMatrix::from_fn(rank, null.len(), |a, c| vv[(a, null[c])]);
        found += null.len();
        components.push(IsotypicComponent { m, fingerprint, coeffs: &lift * w });
    }
    if found != rank {
        return Err(Error::falsified(
            "ed-eigen",
            format!(
                "n={}, i={}, degree<={max_degree}: components account for {found} of {rank} dimensions",
                sig.n(),
                sig.i()
            ),
        ));
    }
    Ok(IsotypicDecomposition { sig: *sig, rep, frames, eval, vd, rank, components })
}

impl IsotypicDecomposition {
    pub fn signature(&self) -> &GrassmannSignature {
        &self.sig
    }

    pub fn rep(&self) -> &ProjectionPolyRep {
        &self.rep
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn frames(&self) -> &[SubspaceFrame] {
        &self.frames
    }

    pub fn components(&self) -> &[IsotypicComponent] {
        &self.components
    }

    pub fn component(&self, m: &HighestWeight) -> Option<&IsotypicComponent> {
        self.components.iter().find(|c| &c.m == m)
    }

    /// Exact `V_d` on the ambient polynomial space, `d <= r`.
    pub fn vd(&self, d: usize) -> Option<&Operator> {
        self.vd.get(d)
    }

    /// `max |M(Af) - λ Mf| / max |Mf|` over the component basis, with `M` the
    /// evaluation on the sample frames.
    pub fn residual(&self, op: &DMatrix<f64>, comp: &IsotypicComponent, eigen: f64) -> f64 {
        let me = &self.eval * &comp.coeffs;
        let ma = &self.eval * (op * &comp.coeffs);
        max_abs(&(ma - &me * eigen)) / max_abs(&me)
    }

    /// Largest `V_d` residual over components with `m` in `Λ_{d,r}`.
    pub fn check_vanishing(&self, d: usize, tol: f64) -> Result<f64> {
        let op = self
            .vd(d)
            .ok_or_else(|| Error::invalid(format!("V_{d} not built (r={})", self.sig.r())))?
            .to_dense_f64();
        let mut worst: f64 = 0.0;
        for c in self.components.iter().filter(|c| c.m.in_lambda(d)) {
            let res = self.residual(&op, c, 0.0);
            if res > tol {
                return Err(Error::falsified("vanishing", format!("V_{d} on H_{} leaves residual {res:.3e}", c.m)));
            }
            worst = worst.max(res);
        }
        Ok(worst)
    }

    /// Largest `E_d` residual against `e_d((m+ρ)²)` over all components and `d`.
    pub fn check_ed(&self, tol: f64) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for d in 1..=self.sig.r() {
            let op = env_operator_matrix(&self.sig, &EnvOperator::Ed(d), &self.rep)?.to_dense_f64();
            for c in &self.components {
                let res = self.residual(&op, c, to_f64(&c.fingerprint[d - 1]));
                if res > tol {
                    return Err(Error::falsified("ed-eigen", format!("E_{d} on H_{} leaves residual {res:.3e}", c.m)));
                }
                worst = worst.max(res);
            }
        }
        Ok(worst)
    }

    /// Largest `D̂_ν` residual against the exact eigenvalue.
    pub fn check_dhat(&self, nu: &Q, tol: f64) -> Result<f64> {
        let op = env_operator_matrix(&self.sig, &EnvOperator::Dhat(nu.clone()), &self.rep)?.to_dense_f64();
        let mut worst: f64 = 0.0;
        for c in &self.components {
            let eig = to_f64(&dhat_eigenvalue(&self.sig, nu, &c.m)?);
            let scale = eig.abs().max(1.0);
            let res = self.residual(&op, c, eig) / scale;
            if res > tol {
                return Err(Error::falsified(
                    "ed-eigen",
                    format!("D̂_ν (ν={}) on H_{} leaves residual {res:.3e}", fmt_q(nu), c.m),
                ));
            }
            worst = worst.max(res);
        }
        Ok(worst)
    }

    /// Evaluates coefficient vector `coeffs` at a frame.
    pub fn eval_coeffs(&self, coeffs: &DVector<f64>, frame: &SubspaceFrame) -> f64 {
        let vals = self.rep.monomial_values(&frame.projection());
        vals.iter().zip(coeffs.iter()).map(|(a, b)| a * b).sum()
    }

    fn stabilizer_sample(&self, rng: &mut rand_chacha::ChaCha8Rng) -> DMatrix<f64> {
        let n = self.sig.n();
        let i = self.sig.i();
        let a = haar_orthogonal(i, rng);
        let b = haar_orthogonal(n - i, rng);
        let mut k = DMatrix::zeros(n, n);
        k.view_mut((0, 0), (i, i)).copy_from(&a);
        k.view_mut((i, i), (n - i, n - i)).copy_from(&b);
        k
    }

    /// Evaluation of `f(kᵀ P k)` on the sample frames.
    fn rotated_eval(&self, k: &DMatrix<f64>) -> DMatrix<f64> {
        let kt = k.transpose();
        let rotated: Vec<SubspaceFrame> = self.frames.par_iter().map(|f| f.rotate(&kt)).collect();
        self.rep.eval_matrix(&rotated)
    }

    /// The vector of `comp` fixed by the stabilizer `O(i) × O(n-i)` of the base
    /// point `span(e_1..e_i)`.
    pub fn spherical_vector(&self, comp: &IsotypicComponent, seed: u64) -> Result<SphericalVector> {
        const TRIALS: usize = 4;
        let dim = comp.dim();
        if dim == 0 {
            return Err(Error::invalid("empty component"));
        }
        let mut rng = block_rng(seed, 0);
        let me = &self.eval * &comp.coeffs;
        let mut stacked = DMatrix::zeros(TRIALS * dim, dim);
        for t in 0..TRIALS {
            let k = self.stabilizer_sample(&mut rng);
            let rk = me.transpose() * self.rotated_eval(&k) * &comp.coeffs - DMatrix::<f64>::identity(dim, dim);
            stacked.view_mut((t * dim, 0), (dim, dim)).copy_from(&rk);
        }
        let (sv, _, vv) = sorted_svd(&stacked)?;
        let fixed: Vec<usize> = (0..dim).filter(|&c| sv[c] < NULL_TOL).collect();
        if fixed.len() != 1 {
            return Err(Error::falsified(
                "spherical",
                format!("H_{} has {} stabilizer-fixed directions, expected 1", comp.m, fixed.len()),
            ));
        }
        let w = vv.column(fixed[0]).into_owned();
        let mut coeffs = &comp.coeffs * w;
        let base = SubspaceFrame::base_point(self.sig.n(), self.sig.i());
        let mut base_value = self.eval_coeffs(&coeffs, &base);
        if base_value.abs() > 1e-6 {
            coeffs /= base_value;
            base_value = 1.0;
        }
        let mv = &self.eval * &coeffs;
        let k = self.stabilizer_sample(&mut rng);
        let residual = max_abs(&(self.rotated_eval(&k) * &coeffs - &mv)) / max_abs(&mv);
        if residual > 1e-8 {
            return Err(Error::falsified(
                "spherical",
                format!("H_{}: stabilizer residual {residual:.3e} on a fresh sample", comp.m),
            ));
        }
        Ok(SphericalVector { coeffs, residual, base_value })
    }
}
