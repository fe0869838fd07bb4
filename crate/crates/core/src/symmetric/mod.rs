//! Exact symmetric-function identities: elementary and complete symmetric
//! polynomials, the mutually inverse matrices `a`, `b`, Harish-Chandra images
//! of the invariants `V_d`, and the coefficient identity for `D̂_ν`.

mod poly;

pub use poly::{Monomial, MultiPoly, PolyRecord, TermRecord};

use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{half, qi, Q};
use crate::spectral::{GrassmannSignature, HighestWeight};

/// Minimal commutative ring interface used by the generic symmetric functions.
pub trait Ring:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// `e_k(xs)`.
pub fn elementary<T: Ring>(k: usize, xs: &[T]) -> T {
    if k > xs.len() {
        return T::zero();
    }
    // table[j] = e_j of the prefix processed so far
    let mut table = vec![T::zero(); k + 1];
    table[0] = T::one();
    for x in xs {
        for j in (1..=k).rev() {
            table[j] = table[j].clone() + x.clone() * table[j - 1].clone();
        }
    }
    table[k].clone()
}

/// `h_k(xs)`.
pub fn complete<T: Ring>(k: usize, xs: &[T]) -> T {
    if k == 0 {
        return T::one();
    }
    let mut table = vec![T::zero(); k + 1];
    table[0] = T::one();
    for x in xs {
        for j in 1..=k {
            table[j] = table[j].clone() + x.clone() * table[j - 1].clone();
        }
    }
    table[k].clone()
}

/// `e_k` in the polynomial variables with the given indices.
pub fn elem_sym(k: usize, vars: &[usize]) -> MultiPoly {
    let xs: Vec<_> = vars.iter().map(|&v| MultiPoly::var(v)).collect();
    elementary(k, &xs)
}

/// `h_k` in the polynomial variables with the given indices.
pub fn comp_sym(k: usize, vars: &[usize]) -> MultiPoly {
    let xs: Vec<_> = vars.iter().map(|&v| MultiPoly::var(v)).collect();
    complete(k, &xs)
}

/// `ρ_j = n/2 - j` for `j = 1..r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoVector(Vec<Q>);

impl RhoVector {
    pub fn new(sig: &GrassmannSignature) -> Self {
        let hn = sig.half_n();
        RhoVector((1..=sig.r()).map(|j| &hn - qi(j as i64)).collect())
    }

    pub fn values(&self) -> &[Q] {
        &self.0
    }

    pub fn squares(&self) -> Vec<Q> {
        self.0.iter().map(|p| p * p).collect()
    }

    /// `m + ρ`.
    pub fn shifted(&self, m: &HighestWeight) -> Vec<Q> {
        self.0
            .iter()
            .enumerate()
            .map(|(j, p)| p + qi(m.parts().get(j).copied().unwrap_or(0) as i64))
            .collect()
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

/// `a_ij = e_{j-i}(x_{i+1},...,x_r)` for `0 <= i <= j <= r`.
pub fn a_matrix<T: Ring>(xs: &[T]) -> Matrix<T> {
    let r = xs.len();
    (0..=r)
        .map(|i| {
            (0..=r)
                .map(|j| if j < i { T::zero() } else { elementary(j - i, &xs[i..]) })
                .collect()
        })
        .collect()
}

/// `b_ij = (-1)^{j-i} h_{j-i}(x_max(j,1),...,x_r)` for `0 <= i <= j <= r`.
pub fn b_matrix<T: Ring>(xs: &[T]) -> Matrix<T> {
    let r = xs.len();
    (0..=r)
        .map(|i| {
            (0..=r)
                .map(|j| {
                    if j < i {
                        return T::zero();
                    }
                    let h = complete(j - i, &xs[j.max(1) - 1..]);
                    if (j - i) % 2 == 1 {
                        -h
                    } else {
                        h
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    let m = b.first().map_or(0, |row| row.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(T::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone())
                })
                .collect()
        })
        .collect()
}

/// Symbolic `A`, `B` in variables `x_1..x_r` (indices `0..r`).
pub fn ab_matrices(r: usize) -> Result<(Matrix<MultiPoly>, Matrix<MultiPoly>)> {
    if r == 0 {
        return Err(Error::invalid("ab_matrices needs r >= 1"));
    }
    let xs: Vec<_> = (0..r).map(MultiPoly::var).collect();
    Ok((a_matrix(&xs), b_matrix(&xs)))
}

fn is_identity(m: &Matrix<MultiPoly>) -> Option<(usize, usize)> {
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let ok = if i == j { v.is_one() } else { v.is_zero() };
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}

/// Checks `A·B = B·A = I` exactly.
pub fn verify_ab_inverse(r: usize) -> Result<()> {
    let (a, b) = ab_matrices(r)?;
    for (label, prod) in [("A*B", mat_mul(&a, &b)), ("B*A", mat_mul(&b, &a))] {
        if let Some((i, j)) = is_identity(&prod) {
            return Err(Error::falsified(
                "ab-inverse",
                format!("r={r}: ({label})[{i}][{j}] = {}", prod[i][j]),
            ));
        }
    }
    Ok(())
}

/// Checks `Σ_{j=i}^k (-1)^{k-j} h_{k-j}(x_k..x_r) e_{j-i}(x_{i+1}..x_r) = δ_ik`
/// term by term, without going through the matrices.
pub fn verify_sym_lemma(r: usize) -> Result<()> {
    let vars: Vec<usize> = (0..r).collect();
    for i in 0..=r {
        for k in 0..=r {
            let mut acc = MultiPoly::zero();
            for j in i..=k {
                let h = comp_sym(k - j, &vars[k.max(1) - 1..]);
                let e = elem_sym(j - i, &vars[i..]);
                let t = &h * &e;
                acc = if (k - j) % 2 == 1 { &acc - &t } else { &acc + &t };
            }
            let expected = if i == k { MultiPoly::one() } else { MultiPoly::zero() };
            if acc != expected {
                return Err(Error::falsified("sym-lemma", format!("r={r}, i={i}, k={k}: got {acc}")));
            }
        }
    }
    Ok(())
}

fn check_d(sig: &GrassmannSignature, d: usize) -> Result<()> {
    if d > sig.r() {
        return Err(Error::invalid(format!("d={d} exceeds r={}", sig.r())));
    }
    Ok(())
}

fn z_squares(r: usize) -> Vec<MultiPoly> {
    (0..r).map(|j| MultiPoly::var(j).pow(2)).collect()
}

/// `γ(V_d)` as a polynomial in `z_1..z_r` (variable indices `0..r`).
/// `d = 0` gives the constant 1.
pub fn gamma_vd(sig: &GrassmannSignature, d: usize) -> Result<MultiPoly> {
    check_d(sig, d)?;
    let rho2: Vec<MultiPoly> = RhoVector::new(sig)
        .squares()
        .into_iter()
        .map(MultiPoly::constant)
        .collect();
    let b = b_matrix(&rho2);
    let z2 = z_squares(sig.r());
    let mut out = MultiPoly::zero();
    for k in 0..=d {
        out += &b[k][d] * &elementary(k, &z2);
    }
    Ok(out)
}

/// `γ(E_d) = Σ_k a_kd(ρ²) γ(V_k)`.
pub fn gamma_ed(sig: &GrassmannSignature, d: usize) -> Result<MultiPoly> {
    check_d(sig, d)?;
    let a = a_matrix(&RhoVector::new(sig).squares());
    let mut out = MultiPoly::zero();
    for k in 0..=d {
        out += gamma_vd(sig, k)?.scale(&a[k][d]);
    }
    Ok(out)
}

/// Checks `Σ_k a_kd(ρ²) γ(V_k) = e_d(z²)` as a polynomial identity.
pub fn ed_check(sig: &GrassmannSignature, d: usize) -> Result<()> {
    let lhs = gamma_ed(sig, d)?;
    let rhs = elementary(d, &z_squares(sig.r()));
    if lhs != rhs {
        return Err(Error::falsified(
            "ed-eigen",
            format!("n={}, r={}, d={d}: difference {}", sig.n(), sig.r(), &lhs - &rhs),
        ));
    }
    Ok(())
}

/// Every `m` with `m_1 <= cutoff` that has fewer than `d` nonzero parts must
/// give `γ(V_d)(m+ρ) = 0`. Returns the number of weights checked.
pub fn verify_vanishing(sig: &GrassmannSignature, d: usize, cutoff: u32) -> Result<usize> {
    if d == 0 {
        return Err(Error::invalid("vanishing needs d >= 1"));
    }
    let g = gamma_vd(sig, d)?;
    let mut checked = 0;
    for m in HighestWeight::enumerate(sig.r(), cutoff) {
        if !m.in_lambda(d) {
            continue;
        }
        let v = hc_eigenvalue(&g, sig, &m)?;
        if !v.is_zero() {
            return Err(Error::falsified(
                "vanishing",
                format!("n={}, r={}, d={d}, m={m}: value {v}", sig.n(), sig.r()),
            ));
        }
        checked += 1;
    }
    Ok(checked)
}

/// `c_k(ν) = Π_{j=k+1}^r (j+2ν+1)(j-2ν-n-1)` for `k = 0..r`, in the single
/// variable ν (index 0).
pub fn dhat_coefficients(sig: &GrassmannSignature) -> Vec<MultiPoly> {
    let nu2 = MultiPoly::var(0).scale(&qi(2));
    let n = qi(sig.n() as i64);
    (0..=sig.r())
        .map(|k| {
            (k + 1..=sig.r()).fold(MultiPoly::one(), |acc, j| {
                let j = qi(j as i64);
                let left = &nu2 + &MultiPoly::constant(&j + Q::one());
                let right = &MultiPoly::constant(&j - &n - Q::one()) - &nu2;
                &(&acc * &left) * &right
            })
        })
        .collect()
}

/// The three sides of the `D̂_ν` coefficient identity, as polynomials in
/// `(ν, z_1..z_r)` with ν at index 0.
#[derive(Clone, Debug)]
pub struct DhatIdentity {
    pub from_invariants: MultiPoly,
    pub from_lambda: MultiPoly,
    pub from_eigenvalue: MultiPoly,
}

pub fn dhat_identity_sides(sig: &GrassmannSignature) -> Result<DhatIdentity> {
    let r = sig.r();
    let scale = num::pow(Q::new((-1).into(), 4.into()), r);
    let nu = MultiPoly::var(0);
    let z: Vec<MultiPoly> = (1..=r).map(MultiPoly::var).collect();

    let mut sum = MultiPoly::zero();
    for (k, c) in dhat_coefficients(sig).iter().enumerate() {
        sum += c * &gamma_vd(sig, k)?.shift_vars(1);
    }
    let from_invariants = sum.scale(&scale);

    // λ = -(2ν + n/2 + 1)²
    let base = &nu.scale(&qi(2)) + &MultiPoly::constant(sig.half_n() + Q::one());
    let lambda = -base.pow(2);
    let from_lambda = z
        .iter()
        .fold(MultiPoly::one(), |acc, zj| &acc * &(&zj.pow(2) + &lambda))
        .scale(&scale);

    // m_j = z_j - n/2 + j
    let mut from_eigenvalue = MultiPoly::one();
    for (idx, zj) in z.iter().enumerate() {
        let j = qi(idx as i64 + 1);
        let mj = zj + &MultiPoly::constant(&j - sig.half_n());
        let half_mj = mj.scale(&half());
        let first = &(&nu + &MultiPoly::constant((&j + Q::one()) * half())) - &half_mj;
        let second = &(&nu + &MultiPoly::constant(sig.half_n() - (&j - Q::one()) * half())) + &half_mj;
        from_eigenvalue = &(&from_eigenvalue * &first) * &second;
    }
    Ok(DhatIdentity {
        from_invariants,
        from_lambda,
        from_eigenvalue,
    })
}

/// Checks `(-1/4)^r Σ c_k γ(V_k) = (-1/4)^r Π(z_j² + λ)` and that both equal
/// the factored `D̂_ν` eigenvalue after `z_j = m_j + n/2 - j`.
pub fn verify_dhat_identity(sig: &GrassmannSignature) -> Result<()> {
    let sides = dhat_identity_sides(sig)?;
    let tag = format!("n={}, r={}", sig.n(), sig.r());
    if sides.from_invariants != sides.from_lambda {
        return Err(Error::falsified(
            "dhat-identity",
            format!("{tag}: invariant side minus λ side = {}", &sides.from_invariants - &sides.from_lambda),
        ));
    }
    if sides.from_lambda != sides.from_eigenvalue {
        return Err(Error::falsified(
            "dhat-identity",
            format!("{tag}: λ side minus eigenvalue side = {}", &sides.from_lambda - &sides.from_eigenvalue),
        ));
    }
    Ok(())
}

/// Evaluates a polynomial in `z_1..z_r` at `z = m + ρ`.
pub fn hc_eigenvalue(poly: &MultiPoly, sig: &GrassmannSignature, m: &HighestWeight) -> Result<Q> {
    m.check_for(sig)?;
    if poly.arity() > sig.r() {
        return Err(Error::invalid(format!(
            "polynomial uses {} variables, expected at most r={}",
            poly.arity(),
            sig.r()
        )));
    }
    Ok(poly.eval(&RhoVector::new(sig).shifted(m)))
}

/// Coefficient of `t^d` in `Π_{l=d}^r (1 + t ρ_l²)^{-1} Π_{l=1}^r (1 + t z_l²)`,
/// an independent route to `γ(V_d)` via truncated power series in `t`.
pub fn vd_candidate(sig: &GrassmannSignature, d: usize) -> Result<MultiPoly> {
    check_d(sig, d)?;
    let rho2 = RhoVector::new(sig).squares();
    // series[k] = coefficient of t^k
    let mut series = vec![MultiPoly::zero(); d + 1];
    series[0] = MultiPoly::one();
    for zsq in z_squares(sig.r()) {
        for k in (1..=d).rev() {
            let bump = &zsq * &series[k - 1];
            series[k] += bump;
        }
    }
    for rho_sq in rho2.iter().skip(d.max(1) - 1) {
        // multiply by Σ (-ρ²)^k t^k
        let mut next = vec![MultiPoly::zero(); d + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            for i in 0..=k {
                let c = num::pow(-rho_sq.clone(), k - i);
                *slot += series[i].scale(&c);
            }
        }
        series = next;
    }
    Ok(series.swap_remove(d))
}

/// `γ(V_d)` is unchanged by every sign flip and adjacent transposition of `z`.
pub fn is_signed_symmetric(poly: &MultiPoly, r: usize) -> bool {
    let vars: Vec<MultiPoly> = (0..r).map(MultiPoly::var).collect();
    for i in 0..r {
        let mut flip = vars.clone();
        flip[i] = -&vars[i];
        if poly.substitute(&flip) != *poly {
            return false;
        }
        if i + 1 < r {
            let mut swap = vars.clone();
            swap.swap(i, i + 1);
            if poly.substitute(&swap) != *poly {
                return false;
            }
        }
    }
    true
}

/// Variable names `z1..zr`.
pub fn z_names(r: usize) -> Vec<String> {
    (1..=r).map(|j| format!("z{j}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn sig(n: usize, i: usize) -> GrassmannSignature {
        GrassmannSignature::new(n, i).unwrap()
    }

    fn hw(parts: &[u32]) -> HighestWeight {
        HighestWeight::new(parts.to_vec()).unwrap()
    }

    fn z(j: usize) -> MultiPoly {
        MultiPoly::var(j)
    }

    #[test]
    fn textbook_symmetric_functions() {
        assert!(elem_sym(0, &[0, 1]).is_one());
        assert!(comp_sym(0, &[]).is_one());
        let e2 = &(&(&z(0) * &z(1)) + &(&z(0) * &z(2))) + &(&z(1) * &z(2));
        assert_eq!(elem_sym(2, &[0, 1, 2]), e2);
        let h2 = &(&z(0).pow(2) + &(&z(0) * &z(1))) + &z(1).pow(2);
        assert_eq!(comp_sym(2, &[0, 1]), h2);
        assert!(elem_sym(3, &[0, 1]).is_zero());
        assert_eq!(complete(3, &[qi(2)]), qi(8));
    }

    #[test]
    fn ab_small_cases() {
        let (a, b) = ab_matrices(1).unwrap();
        assert_eq!(a[0][1], z(0));
        assert_eq!(b[0][1], -z(0));
        assert!(a[1][0].is_zero() && b[1][1].is_one());
        let (a, b) = ab_matrices(2).unwrap();
        let prod = mat_mul(&a, &b);
        assert!(prod[0][1].is_zero());
        assert!(ab_matrices(0).is_err());
    }

    #[test]
    fn ab_inverse_and_lemma() {
        for r in 1..=6 {
            verify_ab_inverse(r).unwrap();
            verify_sym_lemma(r).unwrap();
        }
    }

    #[test]
    fn rho_vector() {
        let rho = RhoVector::new(&sig(7, 3));
        assert_eq!(rho.values(), &[q(5, 2), q(3, 2), q(1, 2)]);
        assert_eq!(rho.shifted(&hw(&[2, 0, 0])), vec![q(9, 2), q(3, 2), q(1, 2)]);
    }

    #[test]
    fn gamma_rank_one_is_laplacian() {
        for n in 3..9 {
            let g = gamma_vd(&sig(n, 1), 1).unwrap();
            let rho1 = Q::from_integer((n as i64).into()) / qi(2) - qi(1);
            assert_eq!(g, &z(0).pow(2) - &MultiPoly::constant(&rho1 * &rho1));
            for m in [0u32, 2, 4, 6] {
                let w = hw(&[m]);
                let v = hc_eigenvalue(&g, &sig(n, 1), &w).unwrap();
                assert_eq!(v, qi((m * (m + n as u32 - 2)) as i64));
            }
        }
    }

    #[test]
    fn gamma_n4_top() {
        let g = gamma_vd(&sig(4, 2), 2).unwrap();
        assert_eq!(g, &z(0).pow(2) * &z(1).pow(2));
        assert!(gamma_vd(&sig(4, 2), 3).is_err());
    }

    #[test]
    fn gamma_symmetry_and_degree() {
        for (n, r) in [(4, 2), (5, 2), (6, 3), (8, 4)] {
            for d in 1..=r {
                let g = gamma_vd(&sig(n, r), d).unwrap();
                assert!(is_signed_symmetric(&g, r));
                assert_eq!(g.degree(), Some(2 * d as u32));
            }
        }
        assert!(!is_signed_symmetric(&(&z(0) + &z(1).pow(2)), 2));
        assert!(!is_signed_symmetric(&(&z(0).pow(2) + &z(1).pow(4)), 2));
    }

    #[test]
    fn vanishing_enumeration() {
        for (n, r) in [(2, 1), (4, 2), (5, 2), (6, 3), (7, 3), (8, 4)] {
            for d in 1..=r {
                let checked = verify_vanishing(&sig(n, r), d, 10).unwrap();
                assert!(checked > 0);
            }
        }
    }

    #[test]
    fn ed_identity() {
        ed_check(&sig(3, 1), 1).unwrap();
        assert_eq!(gamma_ed(&sig(3, 1), 1).unwrap(), z(0).pow(2));
        ed_check(&sig(5, 2), 1).unwrap();
        ed_check(&sig(6, 3), 3).unwrap();
        for (n, r) in [(4, 2), (7, 3), (8, 4)] {
            for d in 0..=r {
                ed_check(&sig(n, r), d).unwrap();
            }
        }
    }

    #[test]
    fn ed_eigenvalue_at_weight() {
        // m = (2,2), ρ = (1,0) so m + ρ = (3,2)
        let e2 = gamma_ed(&sig(4, 2), 2).unwrap();
        assert_eq!(hc_eigenvalue(&e2, &sig(4, 2), &hw(&[2, 2])).unwrap(), qi(36));
    }

    #[test]
    fn dhat_coefficient_values() {
        let nu = z(0);
        let cs = dhat_coefficients(&sig(3, 1));
        assert!(cs[1].is_one());
        let two_nu = nu.scale(&qi(2));
        let expect = -(&(&two_nu + &MultiPoly::constant(qi(2))) * &(&two_nu + &MultiPoly::constant(qi(3))));
        assert_eq!(cs[0], expect);
        let cs = dhat_coefficients(&sig(5, 2));
        let expect = -(&(&two_nu + &MultiPoly::constant(qi(3))) * &(&two_nu + &MultiPoly::constant(qi(4))));
        assert_eq!(cs[1], expect);
        for (k, c) in dhat_coefficients(&sig(9, 4)).iter().enumerate() {
            assert_eq!(c.degree(), Some(2 * (4 - k) as u32));
        }
    }

    #[test]
    fn dhat_identity_all_small() {
        for n in 2..=10 {
            for i in 1..n {
                let s = &sig(n, i);
                if s.r() <= 4 && s.i() == s.r() {
                    verify_dhat_identity(s).unwrap();
                }
            }
        }
    }

    #[test]
    fn dhat_identity_rank_one_value() {
        // m = 2 on the sphere n = 3: z = 5/2, value ν(ν + 5/2)
        let sides = dhat_identity_sides(&sig(3, 1)).unwrap();
        let at = sides.from_invariants.substitute(&[z(0), MultiPoly::constant(q(5, 2))]);
        let expect = &z(0) * &(&z(0) + &MultiPoly::constant(q(5, 2)));
        assert_eq!(at, expect);
        for nu in [q(1, 2), qi(-3), q(7, 3)] {
            let v = sides.from_invariants.eval(&[nu.clone(), q(5, 2)]);
            assert_eq!(v, crate::spectral::dhat_eigenvalue(&sig(3, 1), &nu, &hw(&[2])).unwrap());
        }
    }

    #[test]
    fn typo_variant_fails() {
        // replacing (j-1)/2 by (j+1)/2 in the second factor breaks the identity
        let s = &sig(5, 2);
        let sides = dhat_identity_sides(s).unwrap();
        let nu = z(0);
        let mut alt = MultiPoly::one();
        for idx in 0..2 {
            let j = qi(idx + 1);
            let mj = &z(idx as usize + 1) + &MultiPoly::constant(&j - s.half_n());
            let half_mj = mj.scale(&half());
            let first = &(&nu + &MultiPoly::constant((&j + Q::one()) * half())) - &half_mj;
            let second = &(&nu + &MultiPoly::constant(s.half_n() - (&j + Q::one()) * half())) + &half_mj;
            alt = &(&alt * &first) * &second;
        }
        assert_ne!(alt, sides.from_lambda);
    }

    #[test]
    fn candidate_matches_gamma() {
        for (n, r) in [(3, 1), (4, 2), (5, 2), (6, 3), (7, 3), (8, 4)] {
            let s = &sig(n, r);
            for d in 1..=r {
                let g = gamma_vd(s, d).unwrap();
                let c = vd_candidate(s, d).unwrap();
                assert!(g.proportionality(&c).is_some(), "n={n} r={r} d={d}");
            }
            let top = vd_candidate(s, r).unwrap();
            let rho_r = RhoVector::new(s).values()[r - 1].clone();
            let prod = (0..r).fold(MultiPoly::one(), |acc, j| {
                &acc * &(&z(j).pow(2) - &MultiPoly::constant(&rho_r * &rho_r))
            });
            assert_eq!(top, prod);
        }
    }

    #[test]
    fn hc_eigenvalue_rejects_bad_input() {
        let g = gamma_vd(&sig(4, 2), 2).unwrap();
        assert!(hc_eigenvalue(&g, &sig(3, 1), &HighestWeight::zero(1)).is_err());
        assert!(hc_eigenvalue(&MultiPoly::one(), &sig(3, 1), &hw(&[2, 2])).is_err());
    }
}
