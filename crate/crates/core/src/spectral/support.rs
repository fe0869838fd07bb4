use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{is_integer, Q};
use num::ToPrimitive;

/// Support of the distributional kernel of `S_alpha`, as the closure of the
/// orbit of pairs `(E, F)` with `dim(E cap F) = l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stratum", content = "k", rename_all = "snake_case")]
pub enum SupportStratum {
    /// Closure of the open orbit (`l = 0`).
    Maximal,
    /// Pairs meeting in dimension at least `k`, `1 <= k <= r - 1`.
    CorankGe(usize),
    /// `l = r`.
    Minimal,
    /// `l = r - 1`.
    NextToMinimal,
}

impl SupportStratum {
    /// The intersection dimension `l` whose orbit closure is the support.
    pub fn orbit_index(&self, r: usize) -> usize {
        match self {
            SupportStratum::Maximal => 0,
            SupportStratum::CorankGe(k) => *k,
            SupportStratum::Minimal => r,
            SupportStratum::NextToMinimal => r - 1,
        }
    }
}

pub fn support_stratum(r: usize, alpha: &Q) -> Result<SupportStratum> {
    if r == 0 {
        return Err(Error::invalid("rank must be at least 1"));
    }
    if !is_integer(alpha) || alpha >= &Q::from_integer(0.into()) {
        return Ok(SupportStratum::Maximal);
    }
    let k = (-alpha.to_integer())
        .to_usize()
        .ok_or_else(|| Error::invalid("alpha out of range"))?;
    Ok(if k < r {
        SupportStratum::CorankGe(k)
    } else if (k - r) % 2 == 0 {
        SupportStratum::Minimal
    } else {
        SupportStratum::NextToMinimal
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn documented_cases() {
        assert_eq!(support_stratum(3, &qi(1)).unwrap(), SupportStratum::Maximal);
        assert_eq!(support_stratum(3, &qi(-2)).unwrap(), SupportStratum::CorankGe(2));
        assert_eq!(support_stratum(2, &qi(-3)).unwrap(), SupportStratum::NextToMinimal);
        assert_eq!(support_stratum(2, &q(-5, 2)).unwrap(), SupportStratum::Maximal);
        assert_eq!(support_stratum(2, &qi(0)).unwrap(), SupportStratum::Maximal);
        assert_eq!(support_stratum(4, &qi(-8)).unwrap(), SupportStratum::Minimal);
        assert!(support_stratum(0, &qi(1)).is_err());
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&SupportStratum::CorankGe(2)).unwrap();
        assert_eq!(s, r#"{"stratum":"corank_ge","k":2}"#);
    }
}
