use serde::{Deserialize, Serialize};

use super::haar::SubspaceFrame;
use super::mc::{monte_carlo, TransformEstimate};
use crate::error::{Error, Result};
use crate::grassmann::{apply_env_operator, EnvOperator, IsotypicDecomposition, ProjectionPolynomial, SphericalVector};
use crate::numerics::cosine;
use crate::rational::{fmt_q, to_f64, Q};
use crate::spectral::{cprime, dhat_prefactor, GrassmannSignature, HighestWeight};

/// Significance threshold, in standard errors, for the null-hypothesis tests.
pub const Z_LIMIT: f64 = 3.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionPoint {
    /// `T_ν f / T_{ν+1}(D̂_ν f)` at this point.
    pub ratio: f64,
    pub ratio_stderr: f64,
    /// Standardized difference from the constant-function ratio.
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionReport {
    pub nu: String,
    /// `T_ν 1 / T_{ν+1}(D̂_ν 1)`, the common value every point should share.
    pub reference: f64,
    pub reference_stderr: f64,
    pub points: Vec<RecursionPoint>,
    pub samples: usize,
    pub pass: bool,
}

/// Checks `T_ν f ∝ T_{ν+1}(D̂_ν f)` with one proportionality constant, fixed by
/// `f = 1`, using common random numbers for both sides.
pub fn recursion_check(
    sig: &GrassmannSignature,
    nu: &Q,
    f: &(dyn Fn(&SubspaceFrame) -> f64 + Sync),
    dhat_f: &(dyn Fn(&SubspaceFrame) -> f64 + Sync),
    eval_points: &[SubspaceFrame],
    samples: usize,
    seed: u64,
) -> Result<RecursionReport> {
    let nu_f = to_f64(nu);
    if nu_f <= -0.5 {
        return Err(Error::Domain(format!("recursion check needs ν > -1/2, got {}", fmt_q(nu))));
    }
    if eval_points.is_empty() {
        return Err(Error::invalid("no evaluation points"));
    }
    for p in eval_points {
        if p.n() != sig.n() || p.dim() != sig.i() {
            return Err(Error::invalid("evaluation point does not lie in the Grassmannian"));
        }
    }
    let pre = to_f64(&dhat_prefactor(sig, nu));
    let np = eval_points.len();
    let (n, i) = (sig.n(), sig.i());
    let acc = monte_carlo(samples, seed, 2 * np + 2, |rng, out| {
        let fr = SubspaceFrame::random(n, i, rng);
        let fv = f(&fr);
        let dv = dhat_f(&fr);
        let (mut c0, mut c1) = (0.0, 0.0);
        for (p, pt) in eval_points.iter().enumerate() {
            let c = cosine(pt, &fr).expect("shapes checked");
            let w = c.powf(2.0 * nu_f);
            let w1 = w * c * c;
            out[2 * p] = w * fv;
            out[2 * p + 1] = w1 * dv;
            c0 += w;
            c1 += w1;
        }
        out[2 * np] = c0 / np as f64;
        out[2 * np + 1] = pre * c1 / np as f64;
    })?;
    let (a0, b0) = (2 * np, 2 * np + 1);
    let (reference, reference_stderr) = acc.ratio(a0, b0);
    let mut points = Vec::with_capacity(np);
    let mut pass = true;
    for p in 0..np {
        let (ap, bp) = (2 * p, 2 * p + 1);
        let (ma, mb, m0a, m0b) = (acc.mean(ap), acc.mean(bp), acc.mean(a0), acc.mean(b0));
        let stat = ma * m0b - m0a * mb;
        let mut g = vec![0.0; acc.width()];
        g[ap] = m0b;
        g[b0] = ma;
        g[a0] = -mb;
        g[bp] = -m0a;
        let se = acc.stderr_linear(&g);
        let z = if se > 0.0 { stat / se } else if stat == 0.0 { 0.0 } else { f64::INFINITY };
        pass &= z.abs() <= Z_LIMIT;
        let (ratio, ratio_stderr) = acc.ratio(ap, bp);
        points.push(RecursionPoint { ratio, ratio_stderr, z });
    }
    Ok(RecursionReport { nu: fmt_q(nu), reference, reference_stderr, points, samples: acc.count(), pass })
}

/// [`recursion_check`] for a polynomial `f`, with `D̂_ν f` computed exactly.
pub fn verify_recursion_functional(
    sig: &GrassmannSignature,
    nu: &Q,
    f: &ProjectionPolynomial,
    eval_points: &[SubspaceFrame],
    samples: usize,
    seed: u64,
) -> Result<RecursionReport> {
    let df = apply_env_operator(sig, &EnvOperator::Dhat(nu.clone()), f)?;
    recursion_check(sig, nu, &|fr| f.eval(fr), &|fr| df.eval(fr), eval_points, samples, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRatio {
    pub m: Vec<u32>,
    pub estimate: TransformEstimate,
    pub prediction: f64,
    pub z: f64,
}

/// Monte-Carlo `T_ν v(E_0) / T_ν 1(E_0)` for the spherical vector `v` of a
/// component, normalized by `v(E_0) = 1`, against `c'(ν; m)`.
pub fn component_cosine_ratio(
    dec: &IsotypicDecomposition,
    m: &HighestWeight,
    sv: &SphericalVector,
    nu: &Q,
    samples: usize,
    seed: u64,
) -> Result<ComponentRatio> {
    let sig = dec.signature();
    if (sv.base_value - 1.0).abs() > 1e-9 {
        return Err(Error::NumericalDegeneracy(format!("spherical vector of H_{m} vanishes at the base point")));
    }
    let prediction = cprime(sig, m)?
        .eval(nu)
        .map(|v| to_f64(&v))
        .ok_or_else(|| Error::Domain(format!("c' has a pole at ν = {}", fmt_q(nu))))?;
    let nu_f = to_f64(nu);
    let base = SubspaceFrame::base_point(sig.n(), sig.i());
    let (n, i) = (sig.n(), sig.i());
    let acc = monte_carlo(samples, seed, 2, |rng, out| {
        let fr = SubspaceFrame::random(n, i, rng);
        let w = cosine(&base, &fr).expect("same shape").powf(2.0 * nu_f);
        out[0] = w * dec.eval_coeffs(&sv.coeffs, &fr);
        out[1] = w;
    })?;
    let (value, stderr) = acc.ratio(0, 1);
    let z = (value - prediction) / stderr;
    Ok(ComponentRatio {
        m: m.parts().to_vec(),
        estimate: TransformEstimate { value, stderr, samples: acc.count(), seed },
        prediction,
        z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::block_rng;
    use crate::rational::q;
    use crate::symmetric::MultiPoly;

    fn points(n: usize, i: usize, k: usize, seed: u64) -> Vec<SubspaceFrame> {
        let mut rng = block_rng(seed, 0);
        (0..k).map(|_| SubspaceFrame::random(n, i, &mut rng)).collect()
    }

    fn test_poly(n: usize) -> ProjectionPolynomial {
        let p = |a, b| ProjectionPolynomial::entry(n, a, b).poly().clone();
        let poly = &(&p(0, 0).scale(&q(3, 1)) + &(&p(0, 1) * &p(1, 1)).scale(&q(5, 1))) + &MultiPoly::constant(q(1, 2));
        ProjectionPolynomial::new(n, poly).unwrap()
    }

    #[test]
    fn recursion_holds_and_wrong_nu_fails() {
        let sig = GrassmannSignature::new(4, 2).unwrap();
        let f = test_poly(4);
        let pts = points(4, 2, 4, 5);
        let nu = q(1, 2);
        let rep = verify_recursion_functional(&sig, &nu, &f, &pts, 200_000, 11).unwrap();
        assert!(rep.pass, "{rep:?}");

        // D̂ at the wrong parameter must be detected
        let df = apply_env_operator(&sig, &EnvOperator::Dhat(q(3, 2)), &f).unwrap();
        let bad = recursion_check(&sig, &nu, &|fr| f.eval(fr), &|fr| df.eval(fr), &pts, 200_000, 11).unwrap();
        assert!(!bad.pass, "{bad:?}");
    }

    #[test]
    fn constant_function_is_exact() {
        let sig = GrassmannSignature::new(3, 1).unwrap();
        let f = ProjectionPolynomial::constant(3, q(1, 1));
        let rep = verify_recursion_functional(&sig, &q(1, 1), &f, &points(3, 1, 2, 1), 5000, 2).unwrap();
        assert!(rep.pass);
        for p in &rep.points {
            assert!((p.ratio - rep.reference).abs() < 1e-12 * rep.reference.abs().max(1.0) + 3.0 * p.ratio_stderr);
        }
    }

    #[test]
    fn rejects_bad_nu() {
        let sig = GrassmannSignature::new(3, 1).unwrap();
        let f = ProjectionPolynomial::constant(3, q(1, 1));
        assert!(verify_recursion_functional(&sig, &q(-1, 2), &f, &points(3, 1, 1, 1), 100, 2).is_err());
    }
}
