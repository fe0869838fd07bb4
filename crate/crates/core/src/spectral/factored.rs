use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, qi, Q};

/// A rational function of one variable `nu`, kept fully factored:
/// `unit * prod (nu - root)^mult`.
///
/// Positive multiplicities are zeros, negative ones are poles. A zero
/// multiplicity is never stored, and the zero function is represented by a
/// zero unit with no factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredRational {
    unit: Q,
    factors: BTreeMap<Q, i32>,
}

/// Laurent data of a [`FactoredRational`] at a point: the function equals
/// `(nu - at)^order * (coefficient + O(nu - at))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentLeading {
    pub order: i32,
    pub coefficient: Q,
}

impl FactoredRational {
    pub fn constant(c: Q) -> Self {
        FactoredRational {
            unit: c,
            factors: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn zero() -> Self {
        Self::constant(Q::zero())
    }

    /// The linear factor `nu - root`.
    pub fn linear(root: Q) -> Self {
        let mut f = Self::one();
        f.push_factor(root, 1);
        f
    }

    /// The linear factor `nu + shift`.
    pub fn nu_plus(shift: &Q) -> Self {
        Self::linear(-shift.clone())
    }

    pub fn unit(&self) -> &Q {
        &self.unit
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Q, i32)> {
        self.factors.iter().map(|(r, m)| (r, *m))
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    pub fn multiplicity_at(&self, root: &Q) -> i32 {
        self.factors.get(root).copied().unwrap_or(0)
    }

    pub fn zeros(&self) -> impl Iterator<Item = (&Q, i32)> {
        self.factors().filter(|(_, m)| *m > 0)
    }

    pub fn poles(&self) -> impl Iterator<Item = (&Q, i32)> {
        self.factors().filter(|(_, m)| *m < 0).map(|(r, m)| (r, -m))
    }

    fn push_factor(&mut self, root: Q, mult: i32) {
        if mult == 0 || self.is_zero() {
            return;
        }
        let total = self.factors.get(&root).copied().unwrap_or(0) + mult;
        if total == 0 {
            self.factors.remove(&root);
        } else {
            self.factors.insert(root, total);
        }
    }

    /// Substitutes `nu -> nu + delta`.
    pub fn shift(&self, delta: &Q) -> Self {
        // (nu + delta - root) = (nu - (root - delta))
        FactoredRational {
            unit: self.unit.clone(),
            factors: self
                .factors
                .iter()
                .map(|(r, m)| (r - delta, *m))
                .collect(),
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(FactoredRational {
            unit: Q::one() / &self.unit,
            factors: self.factors.iter().map(|(r, m)| (r.clone(), -m)).collect(),
        })
    }

    pub fn pow(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one();
        }
        let base = if k < 0 {
            self.recip().expect("negative power of the zero function")
        } else {
            self.clone()
        };
        let e = k.unsigned_abs();
        FactoredRational {
            unit: num::pow(base.unit.clone(), e as usize),
            factors: base
                .factors
                .iter()
                .map(|(r, m)| (r.clone(), m * e as i32))
                .collect(),
        }
    }

    /// Exact value at `x`, or `None` if `x` is a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        let mut acc = self.unit.clone();
        for (r, m) in &self.factors {
            let base = x - r;
            if base.is_zero() {
                if *m < 0 {
                    return None;
                }
                return Some(Q::zero());
            }
            let p = num::pow(base, m.unsigned_abs() as usize);
            if *m < 0 {
                acc /= p;
            } else {
                acc *= p;
            }
        }
        Some(acc)
    }

    /// Leading Laurent term at `at`. The zero function reports order 0 with
    /// coefficient 0.
    pub fn laurent_leading(&self, at: &Q) -> LaurentLeading {
        if self.is_zero() {
            return LaurentLeading {
                order: 0,
                coefficient: Q::zero(),
            };
        }
        let order = self.multiplicity_at(at);
        let mut coefficient = self.unit.clone();
        for (r, m) in &self.factors {
            if r == at {
                continue;
            }
            let base = at - r;
            let p = num::pow(base, m.unsigned_abs() as usize);
            if *m < 0 {
                coefficient /= p;
            } else {
                coefficient *= p;
            }
        }
        LaurentLeading { order, coefficient }
    }

    /// Order of the pole at `at` (0 when regular or a zero).
    pub fn pole_order_at(&self, at: &Q) -> u32 {
        (-self.multiplicity_at(at)).max(0) as u32
    }

    pub fn to_record(&self) -> FactoredRecord {
        FactoredRecord {
            unit: fmt_q(&self.unit),
            factors: self
                .factors
                .iter()
                .map(|(r, m)| FactorRecord {
                    root: fmt_q(r),
                    mult: *m,
                })
                .collect(),
        }
    }
}

impl Mul for &FactoredRational {
    type Output = FactoredRational;

    fn mul(self, rhs: &FactoredRational) -> FactoredRational {
        if self.is_zero() || rhs.is_zero() {
            return FactoredRational::zero();
        }
        let mut out = self.clone();
        out.unit *= &rhs.unit;
        for (r, m) in &rhs.factors {
            out.push_factor(r.clone(), *m);
        }
        out
    }
}

impl Mul for FactoredRational {
    type Output = FactoredRational;
    fn mul(self, rhs: FactoredRational) -> FactoredRational {
        &self * &rhs
    }
}

impl Div for &FactoredRational {
    type Output = FactoredRational;

    fn div(self, rhs: &FactoredRational) -> FactoredRational {
        let inv = rhs.recip().expect("division by the zero function");
        self * &inv
    }
}

impl Div for FactoredRational {
    type Output = FactoredRational;
    fn div(self, rhs: FactoredRational) -> FactoredRational {
        &self / &rhs
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut num = Vec::new();
        let mut den = Vec::new();
        for (r, m) in &self.factors {
            let lin = if r.is_zero() {
                "nu".to_string()
            } else if r > &Q::zero() {
                format!("(nu - {})", fmt_q(r))
            } else {
                format!("(nu + {})", fmt_q(&-r.clone()))
            };
            let term = if m.abs() == 1 {
                lin
            } else {
                format!("{}^{}", lin, m.abs())
            };
            if *m > 0 {
                num.push(term)
            } else {
                den.push(term)
            }
        }
        let unit = if self.unit == Q::one() && !num.is_empty() {
            String::new()
        } else if self.unit == -Q::one() && !num.is_empty() {
            "-".to_string()
        } else {
            fmt_q(&self.unit)
        };
        let top = if num.is_empty() {
            if unit.is_empty() { "1".into() } else { unit }
        } else {
            format!("{}{}", if unit.is_empty() || unit == "-" { unit } else { format!("{unit}*") }, num.join(""))
        };
        if den.is_empty() {
            write!(f, "{top}")
        } else {
            write!(f, "{top} / ({})", den.join(""))
        }
    }
}

/// JSON form of a factored rational: `{unit: "p/q", factors: [{root, mult}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredRecord {
    pub unit: String,
    pub factors: Vec<FactorRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub root: String,
    pub mult: i32,
}

impl FactoredRecord {
    pub fn to_factored(&self) -> crate::Result<FactoredRational> {
        let unit = crate::rational::parse_q(&self.unit)?;
        let mut out = FactoredRational::constant(unit);
        for f in &self.factors {
            out.push_factor(crate::rational::parse_q(&f.root)?, f.mult);
        }
        Ok(out)
    }
}

/// Pochhammer symbol `(nu + shift)_k` as a factored rational in `nu`.
pub fn pochhammer_in_nu(shift: &Q, k: u32) -> FactoredRational {
    let mut out = FactoredRational::one();
    for t in 0..k {
        out.push_factor(-(shift + qi(t as i64)), 1);
    }
    out
}
