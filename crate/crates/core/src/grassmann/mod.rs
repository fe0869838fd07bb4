//! Polynomial functions on `Gr_i(R^n)` written in the entries of the
//! orthogonal projection `P = F Fᵀ`, the `o(n)` action on them, and their
//! decomposition into isotypic components.
//!
//! Since `P` is symmetric, polynomials use the `n(n+1)/2` variables `p_ab`,
//! `a <= b`. The Lie algebra acts by the derivation
//! `P ↦ PX - XP`, the differential of `(g·f)(P) = f(gᵀ P g)`, which makes
//! `f ↦ X·f` a representation: `[X_ij·, X_jk·] = X_ik·`.

mod isotypic;

pub use isotypic::{build_isotypic, ComponentRecord, IsotypicComponent, IsotypicDecomposition, SphericalVector};

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::{One, Zero};

use crate::enveloping::{exponent_vectors, vd_operator, Operator, RepSpace};
use crate::error::{Error, Result};
use crate::numerics::SubspaceFrame;
use crate::rational::{qi, Q};
use crate::spectral::GrassmannSignature;
use crate::symmetric::{a_matrix, dhat_coefficients, MultiPoly, PolyRecord, RhoVector};

/// Limits on the polynomial model.
pub const MAX_N: usize = 6;
pub const MAX_DEGREE: u32 = 3;

pub fn pair_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Index of `p_ab` (`p_ab = p_ba`).
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * n - a * (a + 1) / 2 + b
}

pub fn pair_of(n: usize, v: usize) -> (usize, usize) {
    let mut a = 0;
    let mut start = 0;
    while start + (n - a) <= v {
        start += n - a;
        a += 1;
    }
    (a, a + v - start)
}

/// `p_11, p_12, ...` with 1-based labels.
pub fn variable_names(n: usize) -> Vec<String> {
    (0..pair_count(n))
        .map(|v| {
            let (a, b) = pair_of(n, v);
            format!("p{}{}", a + 1, b + 1)
        })
        .collect()
}

/// Values of the variables `p_ab` at a projection matrix.
pub fn p_values(p: &DMatrix<f64>) -> Vec<f64> {
    let n = p.nrows();
    (0..pair_count(n)).map(|v| {
        let (a, b) = pair_of(n, v);
        p[(a, b)]
    })
    .collect()
}

/// `D_ij(p_ab) = (PX - XP)_ab` for `X = X_ij`, as a list of `(variable, coefficient)`.
fn derivation_image(n: usize, i: usize, j: usize, v: usize) -> Vec<(usize, i64)> {
    let (a, b) = pair_of(n, v);
    let mut out: Vec<(usize, i64)> = Vec::new();
    let mut push = |x: usize, y: usize, c: i64| {
        let w = pair_index(n, x, y);
        match out.iter_mut().find(|(u, _)| *u == w) {
            Some(slot) => slot.1 += c,
            None => out.push((w, c)),
        }
    };
    if b == j {
        push(a, i, 1);
    }
    if b == i {
        push(a, j, -1);
    }
    if a == i {
        push(j, b, -1);
    }
    if a == j {
        push(i, b, 1);
    }
    out.retain(|(_, c)| *c != 0);
    out
}

/// Exact polynomial in the projection entries of a point of `Gr(R^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionPolynomial {
    n: usize,
    poly: MultiPoly,
}

impl ProjectionPolynomial {
    pub fn new(n: usize, poly: MultiPoly) -> Result<Self> {
        if poly.arity() > pair_count(n) {
            return Err(Error::invalid(format!("polynomial uses more than the {} projection variables of n={n}", pair_count(n))));
        }
        Ok(ProjectionPolynomial { n, poly })
    }

    pub fn constant(n: usize, c: Q) -> Self {
        ProjectionPolynomial { n, poly: MultiPoly::constant(c) }
    }

    /// The coordinate function `P_ab`.
    pub fn entry(n: usize, a: usize, b: usize) -> Self {
        ProjectionPolynomial { n, poly: MultiPoly::var(pair_index(n, a, b)) }
    }

    pub fn trace(n: usize) -> Self {
        let mut poly = MultiPoly::zero();
        for a in 0..n {
            poly += MultiPoly::var(pair_index(n, a, a));
        }
        ProjectionPolynomial { n, poly }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree().unwrap_or(0)
    }

    pub fn eval_projection(&self, p: &DMatrix<f64>) -> f64 {
        self.poly.eval_f64(&p_values(p))
    }

    pub fn eval(&self, frame: &SubspaceFrame) -> f64 {
        self.eval_projection(&frame.projection())
    }

    pub fn to_record(&self) -> Result<PolyRecord> {
        let names = variable_names(self.n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.poly.to_record(&refs)
    }
}

/// `X_ij · f`, 0-based indices.
pub fn xij_derive(i: usize, j: usize, f: &ProjectionPolynomial) -> Result<ProjectionPolynomial> {
    let n = f.n;
    if i == j {
        return Err(Error::invalid(format!("X_ij needs i != j, got i = j = {i}")));
    }
    if i >= n || j >= n {
        return Err(Error::invalid(format!("index ({i},{j}) out of range for n={n}")));
    }
    let mut out = MultiPoly::zero();
    for v in 0..f.poly.arity() {
        let partial = f.poly.derivative(v);
        if partial.is_zero() {
            continue;
        }
        let mut image = MultiPoly::zero();
        for (w, c) in derivation_image(n, i, j, v) {
            image += MultiPoly::var(w).scale(&qi(c));
        }
        out += &partial * &image;
    }
    Ok(ProjectionPolynomial { n, poly: out })
}

/// The space of polynomials of degree `<= max_degree` in the `p_ab`, which is
/// stable under the derivations and so a representation of `o(n)`.
#[derive(Clone, Debug)]
pub struct ProjectionPolyRep {
    n: usize,
    max_degree: u32,
    monomials: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl ProjectionPolyRep {
    pub fn new(n: usize, max_degree: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid("the projection model needs n >= 2"));
        }
        if n > MAX_N || max_degree > MAX_DEGREE {
            return Err(Error::Resource(format!(
                "projection model limited to n <= {MAX_N}, degree <= {MAX_DEGREE}; got n={n}, degree={max_degree}"
            )));
        }
        let vars = pair_count(n);
        let monomials: Vec<Vec<u32>> = (0..=max_degree).flat_map(|d| exponent_vectors(vars, d)).collect();
        let index = monomials.iter().cloned().enumerate().map(|(k, e)| (e, k)).collect();
        Ok(ProjectionPolyRep { n, max_degree, monomials, index })
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }

    pub fn to_coords(&self, f: &ProjectionPolynomial) -> Result<Vec<Q>> {
        if f.n != self.n || f.degree() > self.max_degree {
            return Err(Error::invalid("polynomial does not lie in this representation space"));
        }
        let vars = pair_count(self.n);
        let mut out = vec![Q::zero(); self.monomials.len()];
        for (m, c) in f.poly.terms() {
            let mut e = m.exps().to_vec();
            e.resize(vars, 0);
            out[self.index[&e]] = c.clone();
        }
        Ok(out)
    }

    pub fn from_coords(&self, coords: &[Q]) -> ProjectionPolynomial {
        let mut poly = MultiPoly::zero();
        for (e, c) in self.monomials.iter().zip(coords) {
            if !c.is_zero() {
                poly += MultiPoly::monomial(e.clone(), c.clone());
            }
        }
        ProjectionPolynomial { n: self.n, poly }
    }

    /// Values of every basis monomial at the projection `p`.
    pub fn monomial_values(&self, p: &DMatrix<f64>) -> Vec<f64> {
        let vals = p_values(p);
        let d = self.max_degree as usize;
        let powers: Vec<Vec<f64>> = vals
            .iter()
            .map(|&x| {
                let mut row = vec![1.0; d + 1];
                for k in 1..=d {
                    row[k] = row[k - 1] * x;
                }
                row
            })
            .collect();
        self.monomials
            .iter()
            .map(|e| e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(v, &k)| powers[v][k as usize]).product())
            .collect()
    }

    /// Evaluation matrix: one row per frame, one column per monomial.
    pub fn eval_matrix(&self, frames: &[SubspaceFrame]) -> DMatrix<f64> {
        let rows: Vec<Vec<f64>> = frames.iter().map(|f| self.monomial_values(&f.projection())).collect();
        DMatrix::from_fn(rows.len(), self.monomials.len(), |s, k| rows[s][k])
    }
}

impl RepSpace for ProjectionPolyRep {
    fn ambient_dim(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.monomials.len()
    }

    fn basis_label(&self, idx: usize) -> String {
        let names = variable_names(self.n);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        MultiPoly::monomial(self.monomials[idx].clone(), Q::one()).display_with(&refs)
    }

    fn x_raw(&self, i: usize, j: usize) -> Operator {
        let vars = pair_count(self.n);
        let images: Vec<Vec<(usize, i64)>> = (0..vars).map(|v| derivation_image(self.n, i, j, v)).collect();
        let mut op = Operator::zero(self.monomials.len());
        for (col, e) in self.monomials.iter().enumerate() {
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                for &(w, c) in &images[v] {
                    let mut img = e.clone();
                    img[v] -= 1;
                    img[w] += 1;
                    op.add_entry(self.index[&img], col, qi(c * k as i64));
                }
            }
        }
        op
    }
}

/// Invariant operators that can be applied to projection polynomials.
#[derive(Clone, Debug, PartialEq)]
pub enum EnvOperator {
    Vd(usize),
    /// `E_d = Σ_k a_kd(ρ²) V_k`.
    Ed(usize),
    /// `D̂_ν = (-1/4)^r Σ_k c_k(ν) V_k`.
    Dhat(Q),
    /// `Σ coef · X_{i1 j1} X_{i2 j2} ...`, rightmost factor applied first.
    Words(Vec<(Q, Vec<(usize, usize)>)>),
}

/// Matrix of `op` on `rep`, built from the `V_k`.
pub fn env_operator_matrix(sig: &GrassmannSignature, op: &EnvOperator, rep: &ProjectionPolyRep) -> Result<Operator> {
    if sig.n() != rep.n {
        return Err(Error::invalid("signature and representation have different n"));
    }
    let r = sig.r();
    match op {
        EnvOperator::Vd(d) => vd_operator(*d, rep),
        EnvOperator::Ed(d) => {
            if *d > r {
                return Err(Error::invalid(format!("E_d needs d <= r={r}")));
            }
            let a = a_matrix(&RhoVector::new(sig).squares());
            let mut out = Operator::zero(rep.dim());
            for k in 0..=*d {
                out.add_assign(&vd_operator(k, rep)?.scale(&a[k][*d]));
            }
            Ok(out)
        }
        EnvOperator::Dhat(nu) => {
            let scale = num::pow(Q::new((-1).into(), 4.into()), r);
            let mut out = Operator::zero(rep.dim());
            for (k, c) in dhat_coefficients(sig).iter().enumerate() {
                let ck = c.eval(std::slice::from_ref(nu));
                out.add_assign(&vd_operator(k, rep)?.scale(&(ck * &scale)));
            }
            Ok(out)
        }
        EnvOperator::Words(words) => {
            let mut out = Operator::zero(rep.dim());
            for (coef, word) in words {
                let mut term = Operator::identity(rep.dim());
                for &(i, j) in word {
                    term = term.compose(&rep.x_operator(i, j)?);
                }
                out.add_assign(&term.scale(coef));
            }
            Ok(out)
        }
    }
}

/// Applies an invariant operator to `f` exactly.
pub fn apply_env_operator(sig: &GrassmannSignature, op: &EnvOperator, f: &ProjectionPolynomial) -> Result<ProjectionPolynomial> {
    if let EnvOperator::Words(words) = op {
        let mut out = ProjectionPolynomial::constant(f.n, Q::zero());
        for (coef, word) in words {
            let mut g = f.clone();
            for &(i, j) in word.iter().rev() {
                g = xij_derive(i, j, &g)?;
            }
            out.poly += g.poly.scale(coef);
        }
        return Ok(out);
    }
    let rep = ProjectionPolyRep::new(f.n, f.degree())?;
    let m = env_operator_matrix(sig, op, &rep)?;
    Ok(rep.from_coords(&m.apply(&rep.to_coords(f)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enveloping::{expm, x_matrix};
    use crate::numerics::sample_uniform;
    use crate::rational::q;

    fn sig(n: usize, i: usize) -> GrassmannSignature {
        GrassmannSignature::new(n, i).unwrap()
    }

    fn p(n: usize, a: usize, b: usize) -> ProjectionPolynomial {
        ProjectionPolynomial::entry(n, a, b)
    }

    #[test]
    fn pair_indexing_round_trips() {
        for n in 2..=6 {
            for v in 0..pair_count(n) {
                let (a, b) = pair_of(n, v);
                assert!(a <= b && b < n);
                assert_eq!(pair_index(n, a, b), v);
                assert_eq!(pair_index(n, b, a), v);
            }
        }
        assert_eq!(variable_names(2), vec!["p11", "p12", "p22"]);
    }

    #[test]
    fn trace_is_invariant() {
        for (i, j) in [(0, 1), (2, 0), (1, 3)] {
            assert_eq!(xij_derive(i, j, &ProjectionPolynomial::trace(4)).unwrap().poly().num_terms(), 0);
        }
        assert!(xij_derive(1, 1, &p(3, 0, 0)).is_err());
    }

    #[test]
    fn single_entry_derivative() {
        // PX - XP at (1,1) for X = X_12 is -(P_21 + P_12)
        let d = xij_derive(0, 1, &p(2, 0, 0)).unwrap();
        assert_eq!(d.poly(), &MultiPoly::var(pair_index(2, 0, 1)).scale(&qi(-2)));
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let n = 4;
        let f = ProjectionPolynomial::new(
            n,
            &(&p(n, 0, 1).poly * &p(n, 1, 0).poly) + &p(n, 2, 3).poly.scale(&q(1, 3)),
        )
        .unwrap();
        let frames = sample_uniform(&sig(n, 2), 5, 21).unwrap();
        for (i, j) in [(0, 1), (1, 3)] {
            let df = xij_derive(i, j, &f).unwrap();
            let x = x_matrix(n, i, j);
            for fr in &frames {
                let pm = fr.projection();
                let h = 1e-4;
                let at = |t: f64| f.eval_projection(&(expm(&(&x * -t)) * &pm * expm(&(&x * t))));
                let fd = (at(h) - at(-h)) / (2.0 * h);
                assert!((fd - df.eval(fr)).abs() < 1e-8, "({i},{j}) fd {fd} exact {}", df.eval(fr));
            }
        }
    }

    fn pseudo_random_poly(n: usize, seed: i64) -> ProjectionPolynomial {
        let vars = pair_count(n);
        let mut poly = MultiPoly::zero();
        for v in 0..vars {
            poly += MultiPoly::var(v).scale(&q((seed * 7 + v as i64 * 3) % 5 - 2, 3));
            for w in v..vars {
                let c = (seed + v as i64 * 11 + w as i64 * 5) % 7 - 3;
                poly += (&MultiPoly::var(v) * &MultiPoly::var(w)).scale(&qi(c));
            }
        }
        ProjectionPolynomial::new(n, poly).unwrap()
    }

    #[test]
    fn bracket_relation() {
        let n = 4;
        for seed in 0..3 {
            let f = pseudo_random_poly(n, seed);
            for (i, j, k) in [(0, 1, 2), (2, 1, 3), (3, 0, 1)] {
                let a = xij_derive(i, j, &xij_derive(j, k, &f).unwrap()).unwrap();
                let b = xij_derive(j, k, &xij_derive(i, j, &f).unwrap()).unwrap();
                let lhs = &a.poly - &b.poly;
                assert_eq!(lhs, xij_derive(i, k, &f).unwrap().poly, "({i},{j},{k})");
            }
        }
    }

    #[test]
    fn rep_matrix_matches_derivation() {
        let n = 3;
        let rep = ProjectionPolyRep::new(n, 2).unwrap();
        let f = pseudo_random_poly(n, 5);
        for (i, j) in [(0, 1), (2, 0)] {
            let via_matrix = rep.from_coords(&rep.x_operator(i, j).unwrap().apply(&rep.to_coords(&f).unwrap()));
            assert_eq!(via_matrix, xij_derive(i, j, &f).unwrap());
        }
        assert!(matches!(ProjectionPolyRep::new(7, 2), Err(Error::Resource(_))));
    }

    #[test]
    fn env_operators() {
        let s = sig(3, 1);
        let f = p(3, 0, 0);
        assert_eq!(apply_env_operator(&s, &EnvOperator::Vd(0), &f).unwrap(), f);
        // V_1 = -Σ X_ij²; compare with the explicit word sum
        let words = EnvOperator::Words(
            [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| (qi(-1), vec![(i, j), (i, j)])).collect(),
        );
        assert_eq!(
            apply_env_operator(&s, &EnvOperator::Vd(1), &f).unwrap(),
            apply_env_operator(&s, &words, &f).unwrap()
        );
    }

    #[test]
    fn casimir_on_sphere_entry() {
        // P_11 - tr(P)/3 is a degree-2 harmonic on S², constants are killed
        let s = sig(3, 1);
        let f = p(3, 0, 0);
        let v1f = apply_env_operator(&s, &EnvOperator::Vd(1), &f).unwrap();
        let frames = sample_uniform(&s, 20, 4).unwrap();
        for fr in &frames {
            let expect = 6.0 * (f.eval(fr) - 1.0 / 3.0);
            assert!((v1f.eval(fr) - expect).abs() < 1e-12);
        }
    }
}
