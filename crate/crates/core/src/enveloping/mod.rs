//! Pfaffian elements of `U(o(n))` and the invariants
//! `V_d = (-1)^d Σ_{|I|=2d} Pf(X_I)²` realized as exact operators on concrete
//! representations.
//!
//! Indices are 0-based throughout: `X_ij` with `i, j < n`.

mod exterior;
mod operator;
mod rotation;
mod symmetric_power;

pub use exterior::{sort_with_sign, ExteriorPower, ExteriorVector};
pub use operator::{MatrixRecord, Operator};
pub use rotation::{expm, random_rotation, signed_permutation, signed_permutation_generators, x_matrix};
pub use symmetric_power::SymmetricPower;
pub(crate) use symmetric_power::exponent_vectors;

use std::collections::HashMap;

use itertools::Itertools;
use nalgebra::DMatrix;
use num::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// Largest `d` and `n` accepted by the `V_d` assembly.
pub const MAX_D: usize = 4;
pub const MAX_N: usize = 8;

/// A finite-dimensional representation of `o(n)` with a chosen basis.
pub trait RepSpace: Sync {
    fn ambient_dim(&self) -> usize;
    fn dim(&self) -> usize;
    fn basis_label(&self, idx: usize) -> String;

    /// Matrix of `X_ij` for validated `i != j`.
    fn x_raw(&self, i: usize, j: usize) -> Operator;

    /// `X_ij = E_ij - E_ji`.
    fn x_operator(&self, i: usize, j: usize) -> Result<Operator> {
        let n = self.ambient_dim();
        if i == j {
            return Err(Error::invalid(format!("X_ij needs i != j, got i = j = {i}")));
        }
        if i >= n || j >= n {
            return Err(Error::invalid(format!("index ({i},{j}) out of range for n={n}")));
        }
        Ok(self.x_raw(i, j))
    }

    /// The group element `g ∈ O(n)` acting on the space, when supported.
    fn group_action_exact(&self, _g: &[Vec<Q>]) -> Option<Operator> {
        None
    }

    fn group_action_f64(&self, _g: &DMatrix<f64>) -> Option<DMatrix<f64>> {
        None
    }
}

/// `X_ij v`.
pub fn act_x<R: RepSpace + ?Sized>(rep: &R, i: usize, j: usize, v: &[Q]) -> Result<Vec<Q>> {
    if v.len() != rep.dim() {
        return Err(Error::invalid(format!("vector of length {} in a space of dimension {}", v.len(), rep.dim())));
    }
    Ok(rep.x_operator(i, j)?.apply(v))
}

/// Perfect matchings of an index set as ordered pairs `(a, b)` with `a < b`,
/// each with the sign of the permutation listing the pairs in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingExpansion {
    pub index_set: Vec<usize>,
    pub terms: Vec<(Vec<(usize, usize)>, i32)>,
}

pub fn matchings(index_set: &[usize]) -> Result<MatchingExpansion> {
    if index_set.len() % 2 == 1 {
        return Err(Error::invalid(format!("Pfaffian of an odd index set {index_set:?}")));
    }
    if index_set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!("index set {index_set:?} must be strictly increasing")));
    }
    fn rec(rest: &[usize]) -> Vec<(Vec<(usize, usize)>, i32)> {
        if rest.is_empty() {
            return vec![(Vec::new(), 1)];
        }
        let first = rest[0];
        let mut out = Vec::new();
        for p in 1..rest.len() {
            // moving rest[p] next to rest[0] costs p - 1 transpositions
            let sign = if p % 2 == 1 { 1 } else { -1 };
            let remaining: Vec<usize> = rest[1..].iter().enumerate().filter(|(t, _)| *t + 1 != p).map(|(_, &x)| x).collect();
            for (mut pairs, s) in rec(&remaining) {
                pairs.insert(0, (first, rest[p]));
                out.push((pairs, sign * s));
            }
        }
        out
    }
    Ok(MatchingExpansion {
        index_set: index_set.to_vec(),
        terms: rec(index_set),
    })
}

/// Scalar Pfaffian of a skew matrix through the same matching expansion.
pub fn pfaffian_scalar(m: &[Vec<Q>]) -> Result<Q> {
    let idx: Vec<usize> = (0..m.len()).collect();
    let exp = matchings(&idx)?;
    Ok(exp
        .terms
        .iter()
        .map(|(pairs, s)| pairs.iter().fold(qi(*s as i64), |acc, &(a, b)| acc * &m[a][b]))
        .sum())
}

struct XTable(HashMap<(usize, usize), Operator>);

impl XTable {
    fn new<R: RepSpace + ?Sized>(rep: &R) -> Self {
        let n = rep.ambient_dim();
        let mut map = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                map.insert((i, j), rep.x_raw(i, j));
            }
        }
        XTable(map)
    }

    fn get(&self, i: usize, j: usize) -> &Operator {
        &self.0[&(i, j)]
    }
}

fn pfaffian_from_table(table: &XTable, dim: usize, index_set: &[usize], reversed: bool) -> Result<Operator> {
    let exp = matchings(index_set)?;
    let mut out = Operator::zero(dim);
    for (pairs, sign) in &exp.terms {
        let mut term = Operator::identity(dim);
        let ordered: Vec<&(usize, usize)> = if reversed { pairs.iter().rev().collect() } else { pairs.iter().collect() };
        for &&(a, b) in &ordered {
            term = term.compose(table.get(a, b));
        }
        out.add_assign(&term.scale(&qi(*sign as i64)));
    }
    Ok(out)
}

fn check_index_set<R: RepSpace + ?Sized>(rep: &R, index_set: &[usize]) -> Result<()> {
    if let Some(&bad) = index_set.iter().find(|&&p| p >= rep.ambient_dim()) {
        return Err(Error::invalid(format!("index {bad} out of range for n={}", rep.ambient_dim())));
    }
    Ok(())
}

/// `Pf(X_I)` as an operator on `rep`.
pub fn pfaffian_operator<R: RepSpace + ?Sized>(index_set: &[usize], rep: &R) -> Result<Operator> {
    check_index_set(rep, index_set)?;
    pfaffian_from_table(&XTable::new(rep), rep.dim(), index_set, false)
}

/// Builds `Pf(X_I)` with the factors of every summand in both orders and
/// checks the two operators agree.
pub fn verify_pf_order_independence<R: RepSpace + ?Sized>(index_set: &[usize], rep: &R) -> Result<()> {
    check_index_set(rep, index_set)?;
    let table = XTable::new(rep);
    let fwd = pfaffian_from_table(&table, rep.dim(), index_set, false)?;
    let rev = pfaffian_from_table(&table, rep.dim(), index_set, true)?;
    if fwd != rev {
        return Err(Error::falsified(
            "pfaffian",
            format!("factor order changes Pf(X_I) for I={index_set:?}"),
        ));
    }
    Ok(())
}

fn check_cost(d: usize, n: usize) -> Result<()> {
    if d > MAX_D || n > MAX_N {
        return Err(Error::Resource(format!(
            "V_d assembly is limited to d <= {MAX_D}, n <= {MAX_N}; got d={d}, n={n}"
        )));
    }
    Ok(())
}

/// `V_d = (-1)^d Σ_{|I|=2d} Pf(X_I)²`; `V_0` is the identity.
pub fn vd_operator<R: RepSpace + ?Sized>(d: usize, rep: &R) -> Result<Operator> {
    let n = rep.ambient_dim();
    if 2 * d > n {
        return Err(Error::invalid(format!("V_d needs 2d <= n, got d={d}, n={n}")));
    }
    check_cost(d, n)?;
    let dim = rep.dim();
    if d == 0 {
        return Ok(Operator::identity(dim));
    }
    let table = XTable::new(rep);
    let sets: Vec<Vec<usize>> = (0..n).combinations(2 * d).collect();
    let squares: Vec<Operator> = sets
        .par_iter()
        .map(|set| {
            let pf = pfaffian_from_table(&table, dim, set, false)?;
            Ok(pf.compose(&pf))
        })
        .collect::<Result<_>>()?;
    let mut sum = Operator::zero(dim);
    for sq in &squares {
        sum.add_assign(sq);
    }
    Ok(if d % 2 == 1 { sum.scale(&-Q::one()) } else { sum })
}

fn factorial(d: usize) -> i64 {
    (1..=d as i64).product()
}

/// `Pf(X) e_1∧...∧e_d = (-1)^{d + d(d-1)/2} d! e_{d+1}∧...∧e_{2d}` on `∧^d C^{2d}`.
pub fn verify_pf_highest(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("verify_pf_highest needs d >= 1"));
    }
    check_cost(d, 2 * d)?;
    let w = ExteriorPower::new(2 * d, d)?;
    let pf = pfaffian_operator(&(0..2 * d).collect::<Vec<_>>(), &w)?;
    let low = w.to_coords(&ExteriorVector::wedge(&(0..d).collect::<Vec<_>>()))?;
    let sign = if (d + d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let expect = w.to_coords(&ExteriorVector::wedge(&(d..2 * d).collect::<Vec<_>>()).scale(&qi(sign * factorial(d))))?;
    let got = pf.apply(&low);
    if got != expect {
        return Err(Error::falsified(
            "pfaffian",
            format!("d={d}: Pf(X) e_1^...^e_d = {}", w.from_coords(&got).coeffs().iter().map(|(s, c)| format!("{c}*{s:?}")).join(" + ")),
        ));
    }
    Ok(())
}

/// `V_d = (d!)²` on `∧^d C^{2d}`; returns the scalar.
pub fn verify_vd_top(d: usize) -> Result<Q> {
    check_cost(d, 2 * d)?;
    let w = ExteriorPower::new(2 * d, d)?;
    let v = vd_operator(d, &w)?;
    let expect = qi(factorial(d) * factorial(d));
    match v.as_scalar() {
        Some(c) if c == expect => Ok(c),
        other => Err(Error::falsified(
            "pfaffian",
            format!("d={d}: V_d on ∧^d C^2d is {other:?}, expected the scalar {expect}"),
        )),
    }
}

/// `Pf(X) ∘ ⋆ = ⋆ ∘ Pf(X)` on `∧^d C^{2d}`.
pub fn verify_hodge_commutation(d: usize) -> Result<()> {
    check_cost(d, 2 * d)?;
    let w = ExteriorPower::new(2 * d, d)?;
    let pf = pfaffian_operator(&(0..2 * d).collect::<Vec<_>>(), &w)?;
    let star = w.hodge_star()?;
    if !pf.commutator(&star).is_zero() {
        return Err(Error::falsified("pfaffian", format!("d={d}: Pf(X) does not commute with the Hodge star")));
    }
    Ok(())
}

/// All `V_d`, `0 <= d <= n/2`, commute on `rep`.
pub fn verify_vd_commute<R: RepSpace + ?Sized>(rep: &R) -> Result<()> {
    let ops: Vec<Operator> = (0..=rep.ambient_dim() / 2).map(|d| vd_operator(d, rep)).collect::<Result<_>>()?;
    for (a, b) in (0..ops.len()).tuple_combinations() {
        if !ops[a].commutator(&ops[b]).is_zero() {
            return Err(Error::falsified("pfaffian", format!("[V_{a}, V_{b}] != 0")));
        }
    }
    Ok(())
}

/// `V_1` acts on harmonic polynomials of degree `m` in `n` variables by
/// `m(m+n-2)`. Returns the harmonic dimension.
pub fn verify_casimir_harmonics(n: usize, m: u32) -> Result<usize> {
    let sp = SymmetricPower::new(n, m)?;
    let v1 = vd_operator(1, &sp)?;
    let expect = qi((m as i64) * (m as i64 + n as i64 - 2));
    let harmonics = sp.harmonic_basis();
    for h in &harmonics {
        let img = v1.apply(h);
        if img.iter().zip(h).any(|(a, b)| *a != &expect * b) {
            return Err(Error::falsified("pfaffian", format!("V_1 on degree-{m} harmonics in n={n} is not {expect}")));
        }
    }
    Ok(harmonics.len())
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub exact_checked: usize,
    pub rotations_checked: usize,
    pub max_commutator: f64,
}

/// `[V_d, π(g)] = 0` exactly for signed-permutation generators and up to
/// `1e-10` (max-norm) for `trials` seeded random rotations.
pub fn verify_invariance<R: RepSpace + ?Sized>(d: usize, rep: &R, trials: usize, seed: u64) -> Result<InvarianceReport> {
    const TOL: f64 = 1e-10;
    let n = rep.ambient_dim();
    let v = vd_operator(d, rep)?;
    let unsupported = || Error::invalid("representation has no group action");
    let gens = signed_permutation_generators(n);
    for (idx, g) in gens.iter().enumerate() {
        let pg = rep.group_action_exact(g).ok_or_else(unsupported)?;
        if !v.commutator(&pg).is_zero() {
            return Err(Error::falsified("pfaffian", format!("V_{d} fails to commute with signed permutation #{idx}")));
        }
    }
    let vf = v.to_dense_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let g = random_rotation(n, &mut rng);
        let pg = rep.group_action_f64(&g).ok_or_else(unsupported)?;
        let c = (&vf * &pg - &pg * &vf).abs().max();
        worst = worst.max(c);
        if c > TOL {
            return Err(Error::falsified("pfaffian", format!("V_{d} commutator {c:.3e} with rotation #{t} exceeds {TOL:e}")));
        }
    }
    Ok(InvarianceReport {
        exact_checked: gens.len(),
        rotations_checked: trials,
        max_commutator: worst,
    })
}
