use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, Q};

/// Exponent vector with trailing zeros trimmed, so that a polynomial does not
/// need to know how many variables its ring has.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        Monomial((0..len).map(|v| self.exp(v) + other.exp(v)).collect())
    }
}

/// Graded lexicographic order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            (0..len)
                .map(|v| self.exp(v).cmp(&other.exp(v)))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients. Variables are
/// addressed by index; names only matter for display and serialization.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl MultiPoly {
    pub fn constant(c: Q) -> Self {
        let mut p = MultiPoly::default();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(idx: usize) -> Self {
        let mut exps = vec![0; idx + 1];
        exps[idx] = 1;
        let mut p = MultiPoly::default();
        p.add_term(Monomial::new(exps), Q::one());
        p
    }

    pub fn monomial(exps: Vec<u32>, coef: Q) -> Self {
        let mut p = MultiPoly::default();
        p.add_term(Monomial::new(exps), coef);
        p
    }

    pub fn add_term(&mut self, mono: Monomial, coef: Q) {
        if coef.is_zero() {
            return;
        }
        let sum = match self.terms.get(&mono) {
            Some(c) => c + &coef,
            None => coef,
        };
        if sum.is_zero() {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms
            .get(&Monomial::new(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in one variable.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    /// Number of variable slots used (one past the highest variable index).
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|m| m.exps().len()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let x = point.get(v).cloned().unwrap_or_else(Q::zero);
                    t *= num::pow(x, e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exps()
                    .iter()
                    .enumerate()
                    .fold(crate::rational::to_f64(c), |t, (v, &e)| t * point.get(v).copied().unwrap_or(0.0).powi(e as i32))
            })
            .sum()
    }

    /// Substitutes variable `v` by `images[v]`; variables beyond `images` are
    /// left in place.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        let mut cache: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one()]; images.len()];
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone());
            let mut rest = Vec::new();
            for (v, &e) in m.exps().iter().enumerate() {
                if v < images.len() {
                    while cache[v].len() <= e as usize {
                        let next = cache[v].last().expect("seeded") * &images[v];
                        cache[v].push(next);
                    }
                    t = &t * &cache[v][e as usize];
                    rest.push(0);
                } else {
                    rest.push(e);
                }
            }
            if rest.iter().any(|&e| e > 0) {
                t = &t * &MultiPoly::monomial(rest, Q::one());
            }
            out += t;
        }
        out
    }

    /// Partial derivative in one variable.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), c * Q::from_integer(e.into()));
        }
        out
    }

    /// Renames variable `v` to `v + offset`.
    pub fn shift_vars(&self, offset: usize) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = vec![0; offset];
                    e.extend_from_slice(m.exps());
                    (Monomial::new(e), c.clone())
                })
                .collect(),
        }
    }

    /// Returns `c` with `self = c * other`, if such a constant exists.
    pub fn proportionality(&self, other: &MultiPoly) -> Option<Q> {
        if other.is_zero() {
            return if self.is_zero() { Some(Q::zero()) } else { None };
        }
        let (m, v) = other.terms.iter().next_back().expect("nonzero");
        let c = self.terms.get(m).cloned().unwrap_or_else(Q::zero) / v;
        if *self == other.scale(&c) {
            Some(c)
        } else {
            None
        }
    }

    pub fn to_record(&self, vars: &[&str]) -> Result<PolyRecord> {
        let arity = self.arity();
        if arity > vars.len() {
            return Err(Error::invalid(format!(
                "polynomial uses {arity} variables but only {} names were given",
                vars.len()
            )));
        }
        Ok(PolyRecord {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| {
                    let mut exps = m.exps().to_vec();
                    exps.resize(vars.len(), 0);
                    TermRecord { exps, coef: fmt_q(c) }
                })
                .collect(),
        })
    }

    pub fn display_with(&self, vars: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (v, &e) in m.exps().iter().enumerate() {
                let name = vars.get(v).map(|s| s.to_string()).unwrap_or_else(|| format!("x{}", v + 1));
                match e {
                    0 => {}
                    1 => factors.push(name),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let body = factors.join("*");
            let term = if body.is_empty() {
                fmt_q(c)
            } else if c.is_one() {
                body
            } else if *c == -Q::one() {
                format!("-{body}")
            } else {
                format!("{}*{body}", fmt_q(c))
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(Q::one())
    }
}

impl AddAssign for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl<'a> AddAssign<&'a MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &'a MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        self += rhs;
        self
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -self.clone()
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

/// Canonical JSON form: `{vars: [...], terms: [{exps: [...], coef: "p/q"}]}`,
/// terms in descending graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub vars: Vec<String>,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exps: Vec<u32>,
    pub coef: String,
}

impl PolyRecord {
    pub fn to_poly(&self) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero();
        for t in &self.terms {
            if t.exps.len() != self.vars.len() {
                return Err(Error::invalid("term exponent length differs from variable list"));
            }
            p.add_term(Monomial::new(t.exps.clone()), parse_q(&t.coef)?);
        }
        Ok(p)
    }
}
