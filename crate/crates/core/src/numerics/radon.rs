use nalgebra::{DMatrix, DVector};
use num::Zero;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::haar::{SubspaceFrame, BLOCK};
use super::mc::{monte_carlo, TransformEstimate};
use super::quadrature::{cosine_transform_sphere, eval_poly, gegenbauer, gegenbauer_at_zero, radon_sphere};
use crate::error::{Error, Result};
use crate::grassmann::{apply_env_operator, EnvOperator, ProjectionPolynomial};
use crate::numerics::{block_rng, cosine};
use crate::rational::{q, to_f64};
use crate::spectral::GrassmannSignature;
use crate::symmetric::MultiPoly;

/// Frame of `F` extended by `k` Haar-random orthonormal directions of `F^⊥`.
fn extend_frame<R: Rng>(f: &DMatrix<f64>, k: usize, rng: &mut R) -> DMatrix<f64> {
    let n = f.nrows();
    let j = f.ncols();
    let mut out = DMatrix::zeros(n, j + k);
    out.view_mut((0, 0), (n, j)).copy_from(f);
    for c in j..j + k {
        loop {
            let mut z = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
            for _ in 0..2 {
                for p in 0..c {
                    let col = out.column(p).into_owned();
                    z -= &col * col.dot(&z);
                }
            }
            let nz = z.norm();
            if nz > 1e-8 {
                out.column_mut(c).copy_from(&(z / nz));
                break;
            }
        }
    }
    out
}

/// Haar-random `i`-dimensional subspace of the span of `f`'s columns.
fn sub_frame<R: Rng>(f: &DMatrix<f64>, i: usize, rng: &mut R) -> DMatrix<f64> {
    let inner = SubspaceFrame::random(f.ncols(), i, rng);
    f * inner.matrix()
}

/// One sample of the incidence set of `point ∈ Gr_j` inside `Gr_i`.
fn incident<R: Rng>(point: &SubspaceFrame, i: usize, rng: &mut R) -> SubspaceFrame {
    let j = point.dim();
    let mat = if i < j {
        sub_frame(point.matrix(), i, rng)
    } else {
        extend_frame(point.matrix(), i - j, rng)
    };
    SubspaceFrame::from_matrix(mat).expect("orthonormal")
}

/// `(R_ji f)(F^j)`: average of `f` over `Gr_i(F)` when `i < j`, over
/// `{E ⊃ F}` when `i > j`.
pub fn radon_grassmann(
    n: usize,
    i: usize,
    j: usize,
    f: &(dyn Fn(&SubspaceFrame) -> f64 + Sync),
    point: &SubspaceFrame,
    samples: usize,
    seed: u64,
) -> Result<TransformEstimate> {
    if i == j || i == 0 || i >= n {
        return Err(Error::invalid(format!("Radon transform needs i != j and 1 <= i < n, got i={i}, j={j}")));
    }
    if point.n() != n || point.dim() != j {
        return Err(Error::invalid("point does not lie in Gr_j(R^n)"));
    }
    let acc = monte_carlo(samples, seed, 1, |rng, out| {
        out[0] = f(&incident(point, i, rng));
    })?;
    Ok(TransformEstimate::from_acc(&acc, 0, seed))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadonCase {
    /// `D̂_{-1/2} ∘ T_1` against the great-sphere transform on `S^{n-1}`.
    SphereSMinus1 { n: usize },
    /// `α = -1` on `Gr_2(R^5)`: composite of line/plane Radon transforms against
    /// `T_1 ∘ D̂_{-1/2}`.
    ComposSmall,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub ratio: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadonReport {
    pub ratios: Vec<RatioPoint>,
    /// `(max - min) / |mean|` of the pointwise ratios.
    pub spread: f64,
    /// `(m, measured μ_m/μ_0, P_m(0))` where available.
    pub per_degree: Vec<(usize, f64, f64)>,
    pub tolerance: f64,
}

fn spread(r: &[f64]) -> f64 {
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    let (lo, hi) = r.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    (hi - lo) / mean.abs()
}

/// Zonal polynomial `P_m(<x, e_1>)` on `Gr_1(R^n)` written in `p_11 = x_1²`.
fn zonal_poly(n: usize, m: usize) -> Result<ProjectionPolynomial> {
    let g = gegenbauer(n, m)?;
    let mut poly = MultiPoly::zero();
    for (k, c) in g.iter().enumerate().step_by(2) {
        poly = &poly + &MultiPoly::monomial(vec![(k / 2) as u32], c.clone());
    }
    ProjectionPolynomial::new(n, poly)
}

fn line_frame(x: &DVector<f64>) -> SubspaceFrame {
    SubspaceFrame::from_matrix(DMatrix::from_column_slice(x.len(), 1, x.as_slice())).expect("nonzero")
}

pub fn verify_radon_factorization(case: &RadonCase, samples: usize, seed: u64) -> Result<RadonReport> {
    match case {
        RadonCase::SphereSMinus1 { n } => sphere_case(*n, seed),
        RadonCase::ComposSmall => compos_case(samples, seed),
    }
}

fn sphere_case(n: usize, seed: u64) -> Result<RadonReport> {
    const TOL: f64 = 0.02;
    const ORDER: usize = 16;
    if n < 3 {
        return Err(Error::invalid("sphere case needs n >= 3"));
    }
    let sig = GrassmannSignature::new(n, 1)?;
    let dhat = EnvOperator::Dhat(q(-1, 2));
    let degrees = [0usize, 2, 4];
    let zonals: Vec<ProjectionPolynomial> = degrees.iter().map(|&m| zonal_poly(n, m)).collect::<Result<_>>()?;
    let images: Vec<ProjectionPolynomial> = zonals.iter().map(|z| apply_env_operator(&sig, &dhat, z)).collect::<Result<_>>()?;
    let as_fn = |p: &ProjectionPolynomial| {
        let p = p.clone();
        move |y: &DVector<f64>| p.eval(&line_frame(y))
    };

    // per-degree eigenvalues of D̂_{-1/2} T_1 at the pole, where every zonal is 1
    let mut pole = DVector::zeros(n);
    pole[0] = 1.0;
    let mut mu = Vec::new();
    for img in &images {
        mu.push(cosine_transform_sphere(&as_fn(img), &pole, 1.0, ORDER)?);
    }
    let mut per_degree = Vec::new();
    for (k, &m) in degrees.iter().enumerate() {
        let expect = to_f64(&gegenbauer_at_zero(n, m)?);
        let got = mu[k] / mu[0];
        if (got - expect).abs() > 1e-3 {
            return Err(Error::falsified("radon-sphere", format!("n={n}, m={m}: ratio {got} vs P_m(0) = {expect}")));
        }
        per_degree.push((m, got, expect));
    }

    // pointwise proportionality for a mix of degrees
    let weights = [1.0, 0.8, 0.6];
    let mix = |y: &DVector<f64>| -> f64 {
        let t = y[0] / y.norm();
        degrees.iter().zip(&weights).map(|(&m, w)| w * eval_poly(&gegenbauer(n, m).expect("n >= 3"), t)).sum()
    };
    let mix_image = |y: &DVector<f64>| -> f64 {
        let fr = line_frame(y);
        images.iter().zip(&weights).map(|(p, w)| w * p.eval(&fr)).sum()
    };
    let mut rng = block_rng(seed, 0);
    let mut ratios = Vec::new();
    for _ in 0..6 {
        let x = SubspaceFrame::random(n, 1, &mut rng).matrix().column(0).into_owned();
        let lhs = cosine_transform_sphere(&mix_image, &x, 1.0, ORDER)?;
        let rhs = radon_sphere(&mix, &x, ORDER)?;
        ratios.push(RatioPoint { ratio: lhs / rhs, stderr: 0.0 });
    }
    let s = spread(&ratios.iter().map(|r| r.ratio).collect::<Vec<_>>());
    if s > TOL {
        return Err(Error::falsified("radon-sphere", format!("n={n}: ratio spread {s:.3e} exceeds {TOL}")));
    }
    Ok(RadonReport { ratios, spread: s, per_degree, tolerance: TOL })
}

/// Test function for the composition case: constant, `H_(2,0)`, `H_(2,2)` and
/// degree-two parts all present.
pub fn compos_test_function() -> ProjectionPolynomial {
    let n = 5;
    let p = |a, b| ProjectionPolynomial::entry(n, a, b).poly().clone();
    let plucker = &(&p(0, 0) * &p(1, 1)) - &p(0, 1).pow(2);
    let poly = &(&(&MultiPoly::constant(q(1, 1)) + &(&p(0, 0) - &p(2, 2)).scale(&q(3, 2)))
        + &plucker.scale(&q(4, 1)))
        + &(&p(0, 3) * &p(1, 4)).scale(&q(2, 1));
    ProjectionPolynomial::new(n, poly).expect("n=5 variables")
}

fn compos_case(samples: usize, seed: u64) -> Result<RadonReport> {
    const TOL: f64 = 0.05;
    const POINTS: usize = 5;
    let n = 5;
    let sig = GrassmannSignature::new(n, 2)?;
    let f = compos_test_function();
    let df = apply_env_operator(&sig, &EnvOperator::Dhat(q(-1, 2)), &f)?;
    let mut rng = block_rng(seed, u64::MAX);
    let points: Vec<SubspaceFrame> = (0..POINTS).map(|_| SubspaceFrame::random(n, 2, &mut rng)).collect();
    let comps: Vec<DMatrix<f64>> = points.iter().map(|p| p.complement().matrix().clone()).collect();
    let acc = monte_carlo(samples.max(BLOCK), seed, 2 * POINTS, |rng, out| {
        let fr = SubspaceFrame::random(n, 2, rng);
        let dfv = df.eval(&fr);
        for (p, (pt, g)) in points.iter().zip(&comps).enumerate() {
            // a line in E'^⊥, then a plane through it
            let line = sub_frame(g, 1, rng);
            let plane = SubspaceFrame::from_matrix(extend_frame(&line, 1, rng)).expect("orthonormal");
            out[2 * p] = f.eval(&plane);
            out[2 * p + 1] = cosine(pt, &fr).expect("same shape") * dfv;
        }
    })?;
    let ratios: Vec<RatioPoint> = (0..POINTS)
        .map(|p| {
            let (ratio, stderr) = acc.ratio(2 * p, 2 * p + 1);
            RatioPoint { ratio, stderr }
        })
        .collect();
    let s = spread(&ratios.iter().map(|r| r.ratio).collect::<Vec<_>>());
    if !s.is_finite() || s > TOL {
        return Err(Error::falsified("radon-compos", format!("ratio spread {s:.3e} exceeds {TOL}")));
    }
    Ok(RadonReport { ratios, spread: s, per_degree: Vec::new(), tolerance: TOL })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_radon_is_one() {
        let p = SubspaceFrame::base_point(4, 2);
        for i in [1, 3] {
            let e = radon_grassmann(4, i, 2, &|_| 1.0, &p, 1000, 3).unwrap();
            assert_eq!(e.value, 1.0);
            assert_eq!(e.stderr, 0.0);
        }
        assert!(radon_grassmann(4, 2, 2, &|_| 1.0, &p, 10, 3).is_err());
    }

    #[test]
    fn incidence_samples_are_incident() {
        let mut rng = block_rng(4, 0);
        let p = SubspaceFrame::random(5, 2, &mut rng);
        let proj = p.projection();
        for i in [1usize, 3, 4] {
            let e = incident(&p, i, &mut rng);
            assert!(e.orthonormality_error() < 1e-12);
            let pe = e.projection();
            let err = if i < 2 { (&proj * e.matrix() - e.matrix()).abs().max() } else { (&pe * p.matrix() - p.matrix()).abs().max() };
            assert!(err < 1e-12, "i={i}");
        }
    }

    #[test]
    fn plane_radon_matches_great_circle() {
        // lines inside a plane F of R^3 = great circle orthogonal to F's normal
        let g = gegenbauer(3, 2).unwrap();
        let f = |fr: &SubspaceFrame| eval_poly(&g, fr.matrix()[(0, 0)]);
        let mut rng = block_rng(10, 0);
        let plane = SubspaceFrame::random(3, 2, &mut rng);
        let normal = plane.complement().matrix().column(0).into_owned();
        let est = radon_grassmann(3, 1, 2, &f, &plane, 200_000, 2).unwrap();
        let exact = radon_sphere(&|y: &DVector<f64>| eval_poly(&g, y[0]), &normal, 8).unwrap();
        assert!((est.value - exact).abs() < 3.0 * est.stderr, "{est:?} vs {exact}");
    }

    #[test]
    fn sphere_factorization() {
        for n in [3usize, 4, 5] {
            let rep = verify_radon_factorization(&RadonCase::SphereSMinus1 { n }, 0, 1).unwrap();
            assert!(rep.spread < 1e-9, "n={n}: {}", rep.spread);
            assert_eq!(rep.per_degree.len(), 3);
        }
    }
}
