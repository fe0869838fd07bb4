use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{dhat_eigenvalue, s_eigenvalue, GrassmannSignature, HighestWeight};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, half, is_integer, qi, Q};

/// How a chain of `D^` steps terminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainCase {
    /// Target already has `alpha > -1`; the transform is a convergent integral.
    Integral,
    /// Stepped up to a convergent base `alpha > -1`.
    ViaIntegral,
    /// Ends at `alpha = -r`, the Radon transform onto the complementary Grassmannian.
    Radon,
    /// Ends at `alpha = -(r+1)`, for which no integral-geometric model is known.
    NextToMinimal,
    /// Target is one of `-2, ..., -(r-1)`: a composition of two Radon transforms.
    RadonComposition,
}

/// `S_target = const * D^_{p_0} o D^_{p_1} o ... o S_base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub target: Q,
    pub base: Q,
    pub dhat_params: Vec<Q>,
    pub case: ChainCase,
}

/// Reduces `S_alpha` to a base transform by repeated step relations.
///
/// Steps `alpha -> alpha + 2` are taken while `alpha <= -1` and `alpha` is not
/// an integer in `[-(r+1), -2]`.
pub fn chain_factorization(sig: &GrassmannSignature, target: &Q) -> Result<Chain> {
    let r = sig.r() as i64;
    let in_window = |a: &Q| is_integer(a) && a >= &qi(-(r + 1)) && a <= &qi(-2);
    if in_window(target) && *target == qi(-(r + 1)) {
        return Err(Error::Domain(format!(
            "alpha = -(r+1) = {} has no known reduction to a Radon-type or integral transform",
            fmt_q(target)
        )));
    }
    let minus_one = -Q::one();
    let mut alpha = target.clone();
    let mut params = Vec::new();
    while alpha <= minus_one && !in_window(&alpha) {
        params.push(&alpha * half());
        alpha += qi(2);
    }
    let case = if params.is_empty() && alpha > minus_one {
        ChainCase::Integral
    } else if alpha > minus_one {
        ChainCase::ViaIntegral
    } else if alpha == qi(-r) {
        ChainCase::Radon
    } else if alpha == qi(-(r + 1)) {
        ChainCase::NextToMinimal
    } else {
        ChainCase::RadonComposition
    };
    Ok(Chain {
        target: target.clone(),
        base: alpha,
        dhat_params: params,
        case,
    })
}

/// Checks at eigenvalue level that composing the chain reproduces the target
/// transform up to one overall constant, which is returned.
pub fn verify_chain(sig: &GrassmannSignature, chain: &Chain, cutoff: u32) -> Result<Q> {
    let sig = sig.reduced();
    let identity = "chain factorization";
    let target_l = &chain.target * half();
    let base_l = &chain.base * half();
    let mut constant: Option<Q> = None;
    for m in HighestWeight::enumerate(sig.r(), cutoff) {
        let lhs = s_eigenvalue(&sig, &target_l, &m)?;
        let mut rhs = s_eigenvalue(&sig, &base_l, &m)?;
        for p in &chain.dhat_params {
            rhs *= dhat_eigenvalue(&sig, p, &m)?;
        }
        match &constant {
            None if !rhs.is_zero() => constant = Some(&lhs / &rhs),
            None => {
                if !lhs.is_zero() {
                    return Err(Error::falsified(identity, format!("m={m}: target nonzero but chain vanishes")));
                }
            }
            Some(c) => {
                if lhs != c * &rhs {
                    return Err(Error::falsified(
                        identity,
                        format!("m={m}: {} != {} * {}", fmt_q(&lhs), fmt_q(c), fmt_q(&rhs)),
                    ));
                }
            }
        }
    }
    constant.ok_or_else(|| Error::falsified(identity, "chain vanishes on every enumerated weight"))
}
