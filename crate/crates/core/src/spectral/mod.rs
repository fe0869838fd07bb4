//! Exact spectral calculus of the normalized alpha-cosine transform.
//!
//! On `Gr_i(R^n)` with rank `r = min(i, n-i)` the `2nu`-cosine transform acts on
//! the isotypic component `H_m` by a scalar. With the meromorphic normalizer
//! divided out, that scalar is the rational function
//!
//! ```text
//! c'(nu; m) = prod_j (nu + (j+1)/2 - m_j/2)_{m_j/2} / (nu + n/2 - (j-1)/2)_{m_j/2}
//! ```
//!
//! Everything here is exact: roots are stored as rationals and Laurent
//! coefficients are computed without floating point.

mod chain;
mod factored;
mod support;

pub use chain::{chain_factorization, verify_chain, Chain, ChainCase};
pub use factored::{pochhammer_in_nu, FactorRecord, FactoredRational, FactoredRecord, LaurentLeading};
pub use support::{support_stratum, SupportStratum};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{floor_i64, fmt_q, is_half_integer, is_integer, q, qi, Q};

/// Ambient dimension `n` and subspace dimension `i` of a Grassmannian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrassmannSignature {
    n: usize,
    i: usize,
}

impl GrassmannSignature {
    pub fn new(n: usize, i: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("ambient dimension n={n} must be at least 2")));
        }
        if i == 0 || i >= n {
            return Err(Error::invalid(format!("subspace dimension i={i} must satisfy 1 <= i <= n-1 = {}", n - 1)));
        }
        Ok(GrassmannSignature { n, i })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn r(&self) -> usize {
        self.i.min(self.n - self.i)
    }

    /// `n/2` as an exact rational.
    pub fn half_n(&self) -> Q {
        q(self.n as i64, 2)
    }

    /// The signature of `Gr_r(R^n)`, which carries the same spectrum.
    pub fn reduced(&self) -> Self {
        GrassmannSignature { n: self.n, i: self.r() }
    }

    /// Every distinct `(n, r)` with `2 <= n <= max_n`, represented by `i = r`.
    pub fn all_up_to(max_n: usize) -> Vec<Self> {
        (2..=max_n)
            .flat_map(|n| (1..=n / 2).map(move |r| GrassmannSignature { n, i: r }))
            .collect()
    }
}

/// Highest weight `m_1 >= ... >= m_r >= 0`, all parts even, labelling the
/// isotypic component `H_m` of functions on a rank-`r` Grassmannian.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HighestWeight {
    parts: Vec<u32>,
}

impl HighestWeight {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("highest weight must have at least one part"));
        }
        if parts.iter().any(|p| p % 2 != 0) {
            return Err(Error::invalid(format!("highest weight {parts:?} has an odd part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!("highest weight {parts:?} is not non-increasing")));
        }
        Ok(HighestWeight { parts })
    }

    pub fn zero(r: usize) -> Self {
        HighestWeight { parts: vec![0; r] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> u32 {
        self.parts[0]
    }

    /// Membership in `Lambda_{d,r}`: parts `d..r` (1-based) vanish.
    pub fn in_lambda(&self, d: usize) -> bool {
        d >= 1 && self.parts.iter().skip(d - 1).all(|&p| p == 0)
    }

    /// All weights of length `r` with `m_1 <= cutoff`, in lexicographic order.
    pub fn enumerate(r: usize, cutoff: u32) -> Vec<HighestWeight> {
        fn rec(r: usize, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<HighestWeight>) {
            if prefix.len() == r {
                out.push(HighestWeight { parts: prefix.clone() });
                return;
            }
            let mut v = 0;
            while v <= cap {
                prefix.push(v);
                rec(r, v, prefix, out);
                prefix.pop();
                v += 2;
            }
        }
        let mut out = Vec::new();
        rec(r, cutoff - cutoff % 2, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    pub fn check_for(&self, sig: &GrassmannSignature) -> Result<()> {
        if self.parts.len() != sig.r() {
            return Err(Error::invalid(format!(
                "weight {:?} has length {} but the signature (n={}, i={}) has rank {}",
                self.parts,
                self.parts.len(),
                sig.n(),
                sig.i(),
                sig.r()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Normalized eigenvalue `c'(nu; m)` of the `2nu`-cosine transform on `H_m`.
pub fn cprime(sig: &GrassmannSignature, m: &HighestWeight) -> Result<FactoredRational> {
    m.check_for(sig)?;
    let half_n = sig.half_n();
    let mut out = FactoredRational::one();
    for (idx, &mj) in m.parts().iter().enumerate() {
        let j = (idx + 1) as i64;
        let k = mj / 2;
        let num_shift = q(j + 1, 2) - q(mj as i64, 2);
        let den_shift = &half_n - q(j - 1, 2);
        out = &out * &pochhammer_in_nu(&num_shift, k);
        out = &out / &pochhammer_in_nu(&den_shift, k);
    }
    Ok(out)
}

/// Eigenvalue of the ratio operator, `c'(nu; m) / c'(nu + 1; m)`, in closed form.
pub fn d_ratio(sig: &GrassmannSignature, m: &HighestWeight) -> Result<FactoredRational> {
    m.check_for(sig)?;
    let half_n = sig.half_n();
    let mut out = FactoredRational::one();
    for (idx, &mj) in m.parts().iter().enumerate() {
        let j = (idx + 1) as i64;
        let mh = q(mj as i64, 2);
        let a = q(j + 1, 2);
        let b = &half_n - q(j - 1, 2);
        out = &out * &FactoredRational::nu_plus(&(&a - &mh));
        out = &out * &FactoredRational::nu_plus(&(&b + &mh));
        out = &out / &FactoredRational::nu_plus(&a);
        out = &out / &FactoredRational::nu_plus(&b);
    }
    Ok(out)
}

/// The pole-clearing prefactor `prod_j (nu + (j+1)/2)(nu + n/2 - (j-1)/2)` that
/// turns the ratio operator into the polynomial operator `D^_nu`.
pub fn dhat_prefactor(sig: &GrassmannSignature, nu: &Q) -> Q {
    let half_n = sig.half_n();
    (1..=sig.r() as i64)
        .map(|j| (nu + q(j + 1, 2)) * (nu + &half_n - q(j - 1, 2)))
        .fold(Q::one(), |acc, f| acc * f)
}

/// Scalar by which `D^_nu` acts on `H_m`.
pub fn dhat_eigenvalue(sig: &GrassmannSignature, nu: &Q, m: &HighestWeight) -> Result<Q> {
    m.check_for(sig)?;
    let half_n = sig.half_n();
    let mut acc = Q::one();
    for (idx, &mj) in m.parts().iter().enumerate() {
        let j = (idx + 1) as i64;
        let mh = q(mj as i64, 2);
        acc *= (nu + q(j + 1, 2) - &mh) * (nu + &half_n - q(j - 1, 2) + &mh);
    }
    Ok(acc)
}

/// Closed-form order of the pole of the normalized transform at `nu = l`.
pub fn tprime_pole_order(sig: &GrassmannSignature, l: &Q) -> u32 {
    if !is_half_integer(l) {
        return 0;
    }
    let r = sig.r() as i64;
    let half_n = sig.half_n();
    let top = -&half_n + q(r - 1, 2);
    if l > &top {
        return 0;
    }
    if l <= &-half_n.clone() {
        let shifted = l + &half_n;
        return if is_integer(&shifted) {
            ((r + 1) / 2) as u32
        } else {
            (r / 2) as u32
        };
    }
    // -n/2 < l <= -n/2 + (r-1)/2
    let v = q(r - 1 - sig.n() as i64, 2) - l;
    (floor_i64(&v) + 1) as u32
}

/// Brute-force pole order: the largest pole order of `c'(.; m)` at `l` over all
/// weights with `m_1 <= cutoff`.
pub fn tprime_pole_order_oracle(sig: &GrassmannSignature, l: &Q, cutoff: u32) -> Result<u32> {
    let sig = sig.reduced();
    let mut best = 0;
    for m in HighestWeight::enumerate(sig.r(), cutoff) {
        best = best.max(cprime(&sig, &m)?.pole_order_at(l));
    }
    Ok(best)
}

/// Eigenvalue of `S_{2l}` on `H_m`: the coefficient of `(nu - l)^{-mu(l)}` in
/// the Laurent expansion of `c'(nu; m)`, where `mu(l)` is the operator's pole
/// order.
pub fn s_eigenvalue(sig: &GrassmannSignature, l: &Q, m: &HighestWeight) -> Result<Q> {
    let c = cprime(sig, m)?;
    let mu = tprime_pole_order(sig, l) as i32;
    let lead = c.laurent_leading(l);
    if lead.order < -mu {
        return Err(Error::Internal(format!(
            "weight {m} has a pole of order {} at nu={} exceeding the operator order {mu} (n={}, r={})",
            -lead.order,
            fmt_q(l),
            sig.n(),
            sig.r()
        )));
    }
    if lead.order == -mu {
        Ok(lead.coefficient)
    } else {
        Ok(Q::zero())
    }
}

/// Whether `l` lies outside the window `[-(r+1)/2, -1]` of half-integers where
/// the step relation is not claimed.
pub fn step_admissible(sig: &GrassmannSignature, l: &Q) -> bool {
    if !is_half_integer(l) {
        return true;
    }
    let lo = -q(sig.r() as i64 + 1, 2);
    !(l >= &lo && l <= &-Q::one())
}

/// One row of a step-relation table.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRow {
    pub m: HighestWeight,
    pub s_l: Q,
    pub dhat: Q,
    pub s_next: Q,
    /// `s_l / (dhat * s_next)` when the denominator is nonzero.
    pub ratio: Option<Q>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepRelation {
    /// `S_{2l} = c * D^_l o S_{2l+2}` holds on every enumerated weight.
    Constant(Q),
    /// `l` is in the excluded window; the per-weight table is returned as is.
    Report(Vec<StepRow>),
}

pub fn step_table(sig: &GrassmannSignature, l: &Q, cutoff: u32) -> Result<Vec<StepRow>> {
    let sig = sig.reduced();
    let next = l + Q::one();
    HighestWeight::enumerate(sig.r(), cutoff)
        .into_iter()
        .map(|m| {
            let s_l = s_eigenvalue(&sig, l, &m)?;
            let dhat = dhat_eigenvalue(&sig, l, &m)?;
            let s_next = s_eigenvalue(&sig, &next, &m)?;
            let den = &dhat * &s_next;
            let ratio = if den.is_zero() { None } else { Some(&s_l / &den) };
            Ok(StepRow { m, s_l, dhat, s_next, ratio })
        })
        .collect()
}

/// Checks `S_{2l} = c_l * D^_l o S_{2l+2}` eigenvalue by eigenvalue.
pub fn verify_step_relation(sig: &GrassmannSignature, l: &Q, cutoff: u32) -> Result<StepRelation> {
    if cutoff < 2 {
        return Err(Error::invalid("step-relation cutoff must be at least 2"));
    }
    let rows = step_table(sig, l, cutoff)?;
    if !step_admissible(sig, l) {
        return Ok(StepRelation::Report(rows));
    }
    let identity = "step relation S_{2l} = c_l D^_l S_{2l+2}";
    let c = rows
        .iter()
        .find_map(|r| r.ratio.clone())
        .ok_or_else(|| Error::falsified(identity, format!("no weight determines c_l at l={}", fmt_q(l))))?;
    for row in &rows {
        let lhs = &row.s_l;
        let rhs = &c * &row.dhat * &row.s_next;
        if *lhs != rhs {
            return Err(Error::falsified(
                identity,
                format!(
                    "n={}, r={}, l={}, m={}: S eigenvalue {} but c_l*dhat*S_next = {}",
                    sig.n(),
                    sig.r(),
                    fmt_q(l),
                    row.m,
                    fmt_q(lhs),
                    fmt_q(&rhs)
                ),
            ));
        }
    }
    Ok(StepRelation::Constant(c))
}

/// Helper for half-integer ranges used by the verification suites.
pub fn half_integers_between(lo: i64, hi: i64) -> Vec<Q> {
    crate::rational::half_integer_grid(&qi(lo), &qi(hi))
}

/// JSON record for one spectral entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub n: usize,
    pub i: usize,
    pub r: usize,
    pub m: Vec<u32>,
    pub factors: Vec<FactorRecord>,
    pub unit: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub at: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s_eigenvalue: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pole_order: Option<u32>,
}

/// Spectrum table over all weights with `m_1 <= cutoff`; with `at`, each row
/// also carries the eigenvalue of `S_{2 at}` and the weight's pole order there.
pub fn spectrum(sig: &GrassmannSignature, cutoff: u32, at: Option<&Q>) -> Result<Vec<SpectrumRecord>> {
    let reduced = sig.reduced();
    HighestWeight::enumerate(sig.r(), cutoff)
        .into_iter()
        .map(|m| {
            let c = cprime(&reduced, &m)?;
            let rec = c.to_record();
            let (s, pole) = match at {
                Some(l) => (Some(fmt_q(&s_eigenvalue(&reduced, l, &m)?)), Some(c.pole_order_at(l))),
                None => (None, None),
            };
            Ok(SpectrumRecord {
                n: sig.n(),
                i: sig.i(),
                r: sig.r(),
                m: m.parts().to_vec(),
                factors: rec.factors,
                unit: rec.unit,
                at: at.map(fmt_q),
                s_eigenvalue: s,
                pole_order: pole,
            })
        })
        .collect()
}
