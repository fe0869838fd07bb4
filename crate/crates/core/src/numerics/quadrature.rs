use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num::{One, Zero};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::rational::{q, qi, to_f64, Q};
use super::haar::complement_frame;

/// Gauss rule for `∫_0^1 u^a (1-u)^b g(u) du`, exact for polynomial `g` of
/// degree `< 2 * order`. Returns `(nodes, weights)`.
pub fn gauss_jacobi(a: f64, b: f64, order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if a <= -1.0 || b <= -1.0 {
        return Err(Error::Domain(format!("Jacobi weight u^{a}(1-u)^{b} is not integrable")));
    }
    if order == 0 {
        return Err(Error::invalid("quadrature order must be positive"));
    }
    // Jacobi weight (1-x)^al (1+x)^be on [-1, 1] with x = 2u - 1
    let (al, be) = (b, a);
    let s = al + be;
    let mut diag = vec![0.0; order];
    let mut off = vec![0.0; order.saturating_sub(1)];
    diag[0] = (be - al) / (s + 2.0);
    for k in 1..order {
        let kf = k as f64;
        let t = 2.0 * kf + s;
        diag[k] = (be * be - al * al) / (t * (t + 2.0));
    }
    for k in 1..order {
        let kf = k as f64;
        let t = 2.0 * kf + s;
        let b2 = if k == 1 {
            4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s))
        } else {
            4.0 * kf * (kf + al) * (kf + be) * (kf + s) / (t * t * (t + 1.0) * (t - 1.0))
        };
        off[k - 1] = b2.sqrt();
    }
    let jac = DMatrix::from_fn(order, order, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::try_new(jac, f64::EPSILON * 1e-3, 100_000)
        .ok_or_else(|| Error::NumericalDegeneracy("Jacobi matrix eigenproblem did not converge".into()))?;
    let mu0 = (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|k| ((eig.eigenvalues[k] + 1.0) / 2.0, mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs.into_iter().unzip())
}

/// Coefficients (in powers of `t`) of the Gegenbauer polynomial of degree `m`
/// for `S^{n-1}`, normalized to 1 at `t = 1`.
pub fn gegenbauer(n: usize, m: usize) -> Result<Vec<Q>> {
    if n < 3 {
        return Err(Error::invalid("Gegenbauer normalization needs n >= 3"));
    }
    let lam = q(n as i64 - 2, 2);
    let mut prev = vec![Q::one()];
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = vec![Q::zero(), &lam * qi(2)];
    for k in 1..m {
        let kq = qi(k as i64);
        let mut next = vec![Q::zero(); k + 2];
        for (p, c) in cur.iter().enumerate() {
            next[p + 1] += c * qi(2) * (&kq + &lam);
        }
        for (p, c) in prev.iter().enumerate() {
            next[p] -= c * (&kq + qi(2) * &lam - Q::one());
        }
        for c in next.iter_mut() {
            *c /= &kq + Q::one();
        }
        prev = cur;
        cur = next;
    }
    let at_one: Q = cur.iter().cloned().sum();
    Ok(cur.into_iter().map(|c| c / &at_one).collect())
}

pub fn eval_poly(coeffs: &[Q], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
}

/// `P_m(0)` for the normalized Gegenbauer polynomial, exactly.
pub fn gegenbauer_at_zero(n: usize, m: usize) -> Result<Q> {
    Ok(gegenbauer(n, m)?[0].clone())
}

fn even_check(m: usize) -> Result<()> {
    if m % 2 == 1 {
        return Err(Error::invalid(format!("only even degrees occur on projective space, got m={m}")));
    }
    Ok(())
}

/// Eigenvalue of `T_α` on degree-`m` harmonics of `S^{n-1}` (uniform
/// probability measure), by Gauss-Jacobi quadrature in `u = t²`.
pub fn funk_hecke_eigenvalue(n: usize, alpha: f64, m: usize) -> Result<f64> {
    even_check(m)?;
    if alpha <= -1.0 {
        return Err(Error::Domain(format!("alpha={alpha} <= -1 is not integrable; use funk_hecke_ratio_continued")));
    }
    let g = gegenbauer(n, m)?;
    let a = (alpha - 1.0) / 2.0;
    let b = (n as f64 - 3.0) / 2.0;
    let (nodes, weights) = gauss_jacobi(a, b, m / 2 + 8)?;
    let integral: f64 = nodes.iter().zip(&weights).map(|(u, w)| w * eval_poly(&g, u.sqrt())).sum();
    // ∫ w over [-1,1] in the same substitution is B(1/2, (n-1)/2)
    let norm = (ln_gamma(0.5) + ln_gamma(b + 1.0) - ln_gamma(b + 1.5)).exp();
    Ok(integral / norm)
}

/// `λ_m(α) / λ_0(α)` from exact moment ratios
/// `∫u^{a+k}(1-u)^b / ∫u^a(1-u)^b = (a+1)_k / (a+b+2)_k`, which continue
/// analytically below `α = -1`. At `α = -1` this is `P_m(0)`.
pub fn funk_hecke_ratio_continued(n: usize, alpha: &Q, m: usize) -> Result<Q> {
    even_check(m)?;
    let g = gegenbauer(n, m)?;
    let a = (alpha - Q::one()) / qi(2);
    let b = q(n as i64 - 3, 2);
    let mut total = Q::zero();
    let mut num = Q::one();
    let mut den = Q::one();
    for k in 0..=m / 2 {
        if k > 0 {
            num *= &a + qi(k as i64);
            den *= &a + &b + qi(k as i64 + 1);
            if den.is_zero() {
                return Err(Error::Domain(format!("moment ratio has a pole at alpha={alpha}")));
            }
        }
        total += &g[2 * k] * &num / &den;
    }
    Ok(total)
}

/// Average of `f` over the unit sphere of the span of the orthonormal
/// columns of `basis`, by a tensor rule: trapezoid on circles, Gauss-Gegenbauer
/// in the polar coordinate otherwise. Exact for polynomials of degree `< order`.
pub fn sphere_average(basis: &DMatrix<f64>, f: &dyn Fn(&DVector<f64>) -> f64, order: usize) -> Result<f64> {
    let k = basis.ncols();
    match k {
        0 => Err(Error::invalid("empty sphere")),
        1 => {
            let e = basis.column(0).into_owned();
            Ok((f(&e) + f(&-e)) / 2.0)
        }
        2 => {
            let pts = order.max(3);
            let mut s = 0.0;
            for t in 0..pts {
                let th = 2.0 * std::f64::consts::PI * t as f64 / pts as f64;
                let x = basis.column(0) * th.cos() + basis.column(1) * th.sin();
                s += f(&x);
            }
            Ok(s / pts as f64)
        }
        _ => {
            // x = t e + sqrt(1-t²) y with y on the sphere of the remaining
            // columns; density (1-t²)^{(k-3)/2}, t = 2u - 1
            let e = basis.column(0).into_owned();
            let rest = basis.columns(1, k - 1).into_owned();
            let c = (k as f64 - 3.0) / 2.0;
            let (nodes, weights) = gauss_jacobi(c, c, order.div_ceil(2) + 1)?;
            let total: f64 = weights.iter().sum();
            let mut s = 0.0;
            for (u, w) in nodes.iter().zip(&weights) {
                let t = 2.0 * u - 1.0;
                let rad = (1.0 - t * t).max(0.0).sqrt();
                let inner = |y: &DVector<f64>| f(&(&e * t + y * rad));
                s += w * sphere_average(&rest, &inner, order)?;
            }
            Ok(s / total)
        }
    }
}

fn complement_basis(x: &DVector<f64>) -> DMatrix<f64> {
    let u = x / x.norm();
    complement_frame(&DMatrix::from_column_slice(x.len(), 1, u.as_slice()))
}

/// Average of `f` over the great sphere orthogonal to `point`.
pub fn radon_sphere(f: &dyn Fn(&DVector<f64>) -> f64, point: &DVector<f64>, quad_order: usize) -> Result<f64> {
    if point.len() < 3 {
        return Err(Error::invalid("radon_sphere needs n >= 3"));
    }
    sphere_average(&complement_basis(point), f, quad_order)
}

/// `∫_{S^{n-1}} |<x,y>|^α f(y) dy` (probability measure) by quadrature in
/// `u = <x,y>²` and sphere averages over the slices.
pub fn cosine_transform_sphere(f: &dyn Fn(&DVector<f64>) -> f64, x: &DVector<f64>, alpha: f64, quad_order: usize) -> Result<f64> {
    let n = x.len();
    if n < 3 {
        return Err(Error::invalid("cosine_transform_sphere needs n >= 3"));
    }
    let x = x / x.norm();
    let comp = complement_basis(&x);
    let a = (alpha - 1.0) / 2.0;
    let b = (n as f64 - 3.0) / 2.0;
    let (nodes, weights) = gauss_jacobi(a, b, quad_order.div_ceil(2) + 1)?;
    let mut s = 0.0;
    for (u, w) in nodes.iter().zip(&weights) {
        let t = u.sqrt();
        let rad = (1.0 - u).max(0.0).sqrt();
        let even = |y: &DVector<f64>| (f(&(&x * t + y * rad)) + f(&(&x * -t + y * rad))) / 2.0;
        s += w * sphere_average(&comp, &even, quad_order)?;
    }
    let norm = (ln_gamma(0.5) + ln_gamma(b + 1.0) - ln_gamma(b + 1.5)).exp();
    Ok(s / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{cprime, GrassmannSignature, HighestWeight};

    #[test]
    fn gauss_jacobi_moments() {
        // ∫_0^1 u^a (1-u)^b u^k du = B(a+k+1, b+1)
        for (a, b) in [(0.0, 0.0), (-0.25, 0.5), (0.5, 1.5), (-0.75, 0.0)] {
            let (x, w) = gauss_jacobi(a, b, 6).unwrap();
            for k in 0..10 {
                let exact = (ln_gamma(a + k as f64 + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + k as f64 + 2.0)).exp();
                let got: f64 = x.iter().zip(&w).map(|(u, wi)| wi * u.powi(k)).sum();
                assert!((got - exact).abs() < 1e-13, "a={a} b={b} k={k}: {got} vs {exact}");
            }
        }
        assert!(gauss_jacobi(-1.0, 0.0, 3).is_err());
    }

    #[test]
    fn gegenbauer_is_legendre_for_n3() {
        assert_eq!(gegenbauer(3, 2).unwrap(), vec![q(-1, 2), qi(0), q(3, 2)]);
        assert_eq!(gegenbauer_at_zero(3, 4).unwrap(), q(3, 8));
        assert_eq!(gegenbauer_at_zero(3, 6).unwrap(), q(-5, 16));
        assert!(gegenbauer(2, 2).is_err());
    }

    #[test]
    fn funk_hecke_examples() {
        let r = funk_hecke_eigenvalue(3, 1.0, 2).unwrap() / funk_hecke_eigenvalue(3, 1.0, 0).unwrap();
        assert!((r - 0.25).abs() < 1e-12);
        assert!((funk_hecke_eigenvalue(3, 1.0, 0).unwrap() - 0.5).abs() < 1e-12);
        assert!(funk_hecke_eigenvalue(5, 2.0, 0).unwrap() > 0.0);
        assert!(funk_hecke_eigenvalue(3, -1.0, 2).is_err());
        assert!(funk_hecke_eigenvalue(3, 1.0, 3).is_err());
        assert_eq!(funk_hecke_ratio_continued(3, &qi(-1), 2).unwrap(), q(-1, 2));
    }

    #[test]
    fn continued_ratio_matches_quadrature_and_cprime() {
        for n in 3..=6 {
            let sig = GrassmannSignature::new(n, 1).unwrap();
            for alpha in [q(1, 2), qi(1), qi(2)] {
                let af = to_f64(&alpha);
                let l0 = funk_hecke_eigenvalue(n, af, 0).unwrap();
                for m in (0..=8).step_by(2) {
                    let quad = funk_hecke_eigenvalue(n, af, m).unwrap() / l0;
                    let exact = funk_hecke_ratio_continued(n, &alpha, m).unwrap();
                    assert!((quad - to_f64(&exact)).abs() < 1e-12);
                    let w = HighestWeight::new(vec![m as u32]).unwrap();
                    let c = cprime(&sig, &w).unwrap().eval(&(&alpha / qi(2))).unwrap();
                    assert_eq!(c, exact, "n={n} alpha={alpha} m={m}");
                }
            }
        }
    }

    #[test]
    fn sphere_radon_of_zonals() {
        let pole = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        assert!((radon_sphere(&|_| 1.0, &pole, 8).unwrap() - 1.0).abs() < 1e-14);
        for m in [2usize, 4] {
            let g = gegenbauer(3, m).unwrap();
            let f = |y: &DVector<f64>| eval_poly(&g, y[0]);
            let r = radon_sphere(&f, &pole, 12).unwrap();
            assert!((r - to_f64(&gegenbauer_at_zero(3, m).unwrap())).abs() < 1e-12);
        }
        // n = 5 goes through the Gegenbauer recursion
        let g = gegenbauer(5, 4).unwrap();
        let f = |y: &DVector<f64>| eval_poly(&g, y[0]);
        let pole5 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let r = radon_sphere(&f, &pole5, 12).unwrap();
        assert!((r - to_f64(&gegenbauer_at_zero(5, 4).unwrap())).abs() < 1e-12);
    }

    #[test]
    fn cosine_transform_quadrature_matches_funk_hecke() {
        for n in [3usize, 4, 5] {
            let g = gegenbauer(n, 4).unwrap();
            let f = |y: &DVector<f64>| eval_poly(&g, y[1]);
            let mut x = DVector::zeros(n);
            x[0] = 0.6;
            x[1] = 0.8;
            let got = cosine_transform_sphere(&f, &x, 1.0, 16).unwrap();
            let expect = funk_hecke_eigenvalue(n, 1.0, 4).unwrap() * eval_poly(&g, 0.8);
            assert!((got - expect).abs() < 1e-10, "n={n}: {got} vs {expect}");
        }
    }
}
