//! Acceptance run: every criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use alphacos_core::enveloping::{verify_invariance, verify_pf_highest, verify_vd_top, ExteriorPower, RepSpace};
use alphacos_core::grassmann::{build_isotypic, ProjectionPolyRep};
use alphacos_core::numerics::{
    component_cosine_ratio, funk_hecke_eigenvalue, verify_radon_factorization, verify_recursion_functional,
    RadonCase, SubspaceFrame, block_rng,
};
use alphacos_core::rational::{fmt_q, q, qi, to_f64};
use alphacos_core::spectral::{
    cprime, d_ratio, half_integers_between, s_eigenvalue, step_admissible, support_stratum, tprime_pole_order,
    tprime_pole_order_oracle, verify_step_relation, StepRelation, SupportStratum,
};
use alphacos_core::suites::recursion_test_function;
use alphacos_core::symmetric::{dhat_coefficients, verify_ab_inverse, verify_dhat_identity, verify_sym_lemma};
use alphacos_core::{GrassmannSignature, HighestWeight, Q};
use itertools::Itertools;
use num::{One, Zero};

type Outcome = Result<String, String>;

fn sig(n: usize, i: usize) -> GrassmannSignature {
    GrassmannSignature::new(n, i).unwrap()
}

fn hw(p: &[u32]) -> HighestWeight {
    HighestWeight::new(p.to_vec()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------- oracles

/// `e_k` by summing over subsets.
fn e_brute(k: usize, xs: &[Q]) -> Q {
    (0..xs.len()).combinations(k).map(|c| c.iter().fold(Q::one(), |acc, &i| acc * &xs[i])).sum()
}

/// `h_k` by summing over multisets.
fn h_brute(k: usize, xs: &[Q]) -> Q {
    (0..xs.len())
        .combinations_with_replacement(k)
        .map(|c| c.iter().fold(Q::one(), |acc, &i| acc * &xs[i]))
        .sum()
}

fn poch(x: &Q, k: u32) -> Q {
    (0..k).fold(Q::one(), |acc, t| acc * (x + qi(t as i64)))
}

/// `c'(ν; m)` straight from the product formula.
fn cprime_direct(n: usize, nu: &Q, m: &[u32]) -> Option<Q> {
    let half_n = q(n as i64, 2);
    let mut acc = Q::one();
    for (idx, &mj) in m.iter().enumerate() {
        let j = idx as i64 + 1;
        let k = mj / 2;
        let num = poch(&(nu + q(j + 1, 2) - q(mj as i64, 2)), k);
        let den = poch(&(nu + &half_n - q(j - 1, 2)), k);
        if den.is_zero() {
            return None;
        }
        acc *= num / den;
    }
    Some(acc)
}

/// Legendre `P_m(0) = (-1)^{m/2} (m-1)!! / m!!` for even `m`.
fn legendre_at_zero(m: u32) -> Q {
    let mut v = Q::one();
    let mut k = 1;
    while k < m {
        v *= q(k as i64, (k + 1) as i64);
        k += 2;
    }
    if (m / 2) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Weyl dimension of the `O(n)`-module with highest weight `m` (padded to
/// rank `floor(n/2)`), doubled when it splits into two `SO(n)`-modules.
fn weyl_dim(n: usize, m: &[u32]) -> usize {
    let k = n / 2;
    let odd = n % 2 == 1;
    let rho: Vec<f64> = (1..=k).map(|i| (k - i) as f64 + if odd { 0.5 } else { 0.0 }).collect();
    let l: Vec<f64> = (0..k).map(|i| m.get(i).copied().unwrap_or(0) as f64 + rho[i]).collect();
    let mut d = 1.0;
    for i in 0..k {
        for j in i + 1..k {
            d *= (l[i] * l[i] - l[j] * l[j]) / (rho[i] * rho[i] - rho[j] * rho[j]);
        }
        if odd {
            d *= l[i] / rho[i];
        }
    }
    let split = !odd && m.get(k - 1).copied().unwrap_or(0) != 0;
    d.round() as usize * if split { 2 } else { 1 }
}

// -------------------------------------------------------------- criteria

fn c1_dhat_identity() -> Outcome {
    let mut count = 0;
    let probes = [q(1, 3), q(-5, 2), q(7, 4)];
    for n in 2..=10 {
        for r in 1..=(n / 2).min(4) {
            let s = sig(n, r);
            verify_dhat_identity(&s).map_err(err)?;
            // coefficients c_k = Π_{j>k} (j+2ν+1)(j-2ν-n-1)
            let coeffs = dhat_coefficients(&s);
            for nu in &probes {
                for (k, c) in coeffs.iter().enumerate() {
                    let expect = (k + 1..=r).fold(Q::one(), |acc, j| {
                        let j = qi(j as i64);
                        acc * (&j + qi(2) * nu + qi(1)) * (&j - qi(2) * nu - qi(n as i64 + 1))
                    });
                    let got = c.eval(&[nu.clone()]);
                    ensure(got == expect, || format!("n={n} r={r} k={k} nu={}: {} vs {}", fmt_q(nu), fmt_q(&got), fmt_q(&expect)))?;
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} signatures (n <= 10, r <= 4)"))
}

fn c2_ab_sym() -> Outcome {
    let mut rng = block_rng(2, 0);
    use rand::Rng;
    for r in 1..=6usize {
        verify_ab_inverse(r).map_err(err)?;
        verify_sym_lemma(r).map_err(err)?;
        // a(x) b(x) = 1 at a random rational point, from the definitions
        let xs: Vec<Q> = (0..r).map(|_| q(rng.random_range(-9..=9), rng.random_range(1..=5))).collect();
        let a = |i: usize, j: usize| if j < i { Q::zero() } else { e_brute(j - i, &xs[i..]) };
        let b = |i: usize, j: usize| {
            if j < i {
                Q::zero()
            } else {
                let h = h_brute(j - i, &xs[j.max(1) - 1..]);
                if (j - i) % 2 == 1 { -h } else { h }
            }
        };
        for i in 0..=r {
            for j in 0..=r {
                let v: Q = (0..=r).map(|k| a(i, k) * b(k, j)).sum();
                let expect = if i == j { Q::one() } else { Q::zero() };
                ensure(v == expect, || format!("r={r}: (ab)_{i}{j} = {}", fmt_q(&v)))?;
            }
        }
    }
    Ok("r = 1..6".into())
}

fn c3_eigen_recursion() -> Outcome {
    let probes = [q(1, 3), q(-2, 7), q(5, 4), q(11, 6)];
    let mut count = 0;
    for n in 2..=8 {
        for r in 1..=n / 2 {
            let s = sig(n, r);
            for m in HighestWeight::enumerate(r, 12) {
                let c = cprime(&s, &m).map_err(err)?;
                let lhs = &d_ratio(&s, &m).map_err(err)? * &c.shift(&qi(1));
                for nu in &probes {
                    let direct = cprime_direct(n, nu, m.parts());
                    ensure(lhs.eval(nu) == c.eval(nu), || format!("n={n} m={m}: factored forms differ at {}", fmt_q(nu)))?;
                    ensure(c.eval(nu) == direct, || format!("n={n} m={m}: c' differs from product formula at {}", fmt_q(nu)))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} (signature, weight) pairs"))
}

fn c4_pole_orders() -> Outcome {
    let mut count = 0;
    for n in 2..=8 {
        for i in 1..n {
            let s = sig(n, i);
            for l in half_integers_between(-(n as i64), 2) {
                let closed = tprime_pole_order(&s, &l);
                for cutoff in [12, 16] {
                    let oracle = tprime_pole_order_oracle(&s, &l, cutoff).map_err(err)?;
                    ensure(oracle == closed, || format!("n={n} i={i} l={}: {closed} vs oracle {oracle} @ {cutoff}", fmt_q(&l)))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} (signature, l) pairs"))
}

fn c5_step_relations() -> Outcome {
    let (mut constants, mut reports) = (0, 0);
    for n in 2..=8 {
        for r in 1..=n / 2 {
            let s = sig(n, r);
            for l in half_integers_between(-(n as i64), 3) {
                match verify_step_relation(&s, &l, 12).map_err(err)? {
                    StepRelation::Constant(_) => {
                        ensure(step_admissible(&s, &l), || format!("n={n} r={r} l={}: window value asserted", fmt_q(&l)))?;
                        constants += 1;
                    }
                    StepRelation::Report(rows) => {
                        ensure(!step_admissible(&s, &l) && !rows.is_empty(), || format!("n={n} r={r} l={}", fmt_q(&l)))?;
                        reports += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{constants} constants, {reports} window reports"))
}

fn c6_pfaffian() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 1..=4usize {
        verify_pf_highest(d).map_err(err)?;
        let v = verify_vd_top(d).map_err(err)?;
        let fact: i64 = (1..=d as i64).product();
        ensure(v == qi(fact * fact), || format!("d={d}: V_d = {}", fmt_q(&v)))?;
        let rep = ExteriorPower::new(2 * d, d).map_err(err)?;
        let inv = verify_invariance(d, &rep, 20, 40 + d as u64).map_err(err)?;
        ensure(inv.rotations_checked == 20 && inv.max_commutator < 1e-10, || format!("d={d}: {inv:?}"))?;
        worst = worst.max(inv.max_commutator);
    }
    Ok(format!("d = 1..4, max commutator {worst:.1e}"))
}

fn c7_polynomial_model() -> Outcome {
    let mut parts = Vec::new();
    for (n, i) in [(3, 1), (4, 1), (4, 2), (5, 2)] {
        let s = sig(n, i);
        let rep = ProjectionPolyRep::new(n, 2).map_err(err)?;
        let dec = build_isotypic(&s, 2, 4 * rep.dim(), 7, 1e-9).map_err(err)?;
        let mut res = dec.check_ed(1e-8).map_err(err)?;
        for d in 1..=s.r() {
            res = res.max(dec.check_vanishing(d, 1e-8).map_err(err)?);
        }
        ensure(res < 1e-8, || format!("n={n} i={i}: residual {res:.2e}"))?;
        let mut total = 0;
        for c in dec.components() {
            let expect = weyl_dim(n, c.m.parts());
            ensure(c.dim() == expect, || format!("n={n} i={i} m={}: dim {} vs {expect}", c.m, c.dim()))?;
            total += c.dim();
        }
        ensure(total == dec.rank(), || format!("n={n} i={i}: components {total} of {}", dec.rank()))?;
        let listed = match (n, i) {
            (3, 1) => vec![(vec![0], 1), (vec![2], 5)],
            (4, 1) => vec![(vec![0], 1), (vec![2], 9)],
            (4, 2) => vec![(vec![0, 0], 1), (vec![2, 0], 9), (vec![2, 2], 10)],
            _ => vec![(vec![0, 0], 1), (vec![2, 0], 14)],
        };
        for (m, dim) in listed {
            let c = dec.component(&hw(&m)).ok_or_else(|| format!("n={n} i={i}: H_{m:?} missing"))?;
            ensure(c.dim() == dim, || format!("n={n} i={i}: H_{m:?} dim {}", c.dim()))?;
        }
        parts.push(format!("Gr{i}(R{n}) res {res:.0e}"));
    }
    Ok(parts.join(", "))
}

fn c8_funk_hecke() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 3..=6usize {
        let s = sig(n, 1);
        for alpha in [q(1, 2), qi(1), qi(2)] {
            let a = to_f64(&alpha);
            let base = funk_hecke_eigenvalue(n, a, 0).map_err(err)?;
            for m in (2..=8u32).step_by(2) {
                let quad = funk_hecke_eigenvalue(n, a, m as usize).map_err(err)? / base;
                let exact = cprime(&s, &hw(&[m])).map_err(err)?.eval(&(&alpha / qi(2))).unwrap();
                let e = to_f64(&exact);
                let errv = if exact.is_zero() { quad.abs() } else { (quad - e).abs() / e.abs() };
                ensure(errv <= 1e-6, || format!("n={n} alpha={a} m={m}: {quad} vs {e}"))?;
                worst = worst.max(errv);
            }
        }
    }
    let s3 = sig(3, 1);
    for m in (0..=12u32).step_by(2) {
        let v = s_eigenvalue(&s3, &q(-1, 2), &hw(&[m])).map_err(err)?;
        ensure(v == legendre_at_zero(m), || format!("m={m}: S eigenvalue {} vs P_m(0) {}", fmt_q(&v), fmt_q(&legendre_at_zero(m))))?;
    }
    Ok(format!("max error {worst:.1e}; S_-1 on S^2 = P_m(0) for m <= 12"))
}

fn c9_mc_rank_two() -> Outcome {
    let s = sig(4, 2);
    let rep = ProjectionPolyRep::new(4, 2).map_err(err)?;
    let dec = build_isotypic(&s, 2, 4 * rep.dim(), 7, 1e-9).map_err(err)?;
    let nu = q(1, 2);
    let mut parts = Vec::new();
    for m in [[2u32, 0], [2, 2]] {
        let w = hw(&m);
        let comp = dec.component(&w).ok_or("component missing")?;
        let sv = dec.spherical_vector(comp, 3).map_err(err)?;
        let a = component_cosine_ratio(&dec, &w, &sv, &nu, 1_000_000, 42).map_err(err)?;
        let b = component_cosine_ratio(&dec, &w, &sv, &nu, 1_000_000, 42).map_err(err)?;
        ensure(a == b, || "not seed-reproducible".into())?;
        let exact = to_f64(&cprime_direct(4, &nu, &m).unwrap());
        let rel = (a.estimate.value - exact).abs() / exact;
        ensure(rel < 3e-2, || format!("m={m:?}: {} vs {exact} (rel {rel:.2e})", a.estimate.value))?;
        parts.push(format!("{w}: {:.4}±{:.4} vs {exact}", a.estimate.value, a.estimate.stderr));
    }
    Ok(parts.join(", "))
}

fn c10_recursion_functional() -> Outcome {
    let nu = q(1, 2);
    let mut parts = Vec::new();
    for (n, i) in [(3, 1), (4, 2)] {
        let s = sig(n, i);
        let mut rng = block_rng(10, 0);
        let points: Vec<SubspaceFrame> = (0..4).map(|_| SubspaceFrame::random(n, i, &mut rng)).collect();
        let rep = verify_recursion_functional(&s, &nu, &recursion_test_function(n), &points, 200_000, 17).map_err(err)?;
        let zmax = rep.points.iter().map(|p| p.z.abs()).fold(0.0, f64::max);
        ensure(rep.pass && zmax <= 3.0, || format!("n={n}: max |z| = {zmax:.2}"))?;
        parts.push(format!("Gr{i}(R{n}) max |z| {zmax:.2}"));
    }
    Ok(parts.join(", "))
}

fn c11_radon() -> Outcome {
    let rep = verify_radon_factorization(&RadonCase::SphereSMinus1 { n: 3 }, 0, 11).map_err(err)?;
    ensure(rep.spread < 0.02, || format!("sphere spread {}", rep.spread))?;
    for &(m, got, _) in &rep.per_degree {
        let expect = to_f64(&legendre_at_zero(m as u32));
        ensure((got - expect).abs() <= 1e-3, || format!("m={m}: {got} vs {expect}"))?;
    }
    let compos = verify_radon_factorization(&RadonCase::ComposSmall, 200_000, 11).map_err(err)?;
    ensure(compos.spread < 0.05, || format!("compos spread {}", compos.spread))?;
    Ok(format!("sphere spread {:.1e}, composition spread {:.2}%", rep.spread, 100.0 * compos.spread))
}

fn c12_support() -> Outcome {
    // orbit index l for alpha = -1, -2, ..., -(r+4), read off the case list
    let table: [(usize, &[usize]); 5] = [
        (1, &[1, 0, 1, 0, 1]),
        (2, &[1, 2, 1, 2, 1, 2]),
        (3, &[1, 2, 3, 2, 3, 2, 3]),
        (4, &[1, 2, 3, 4, 3, 4, 3, 4]),
        (5, &[1, 2, 3, 4, 5, 4, 5, 4, 5]),
    ];
    let mut count = 0;
    for (r, ls) in table {
        for alpha in [qi(1), q(1, 2)] {
            ensure(support_stratum(r, &alpha).map_err(err)? == SupportStratum::Maximal, || format!("r={r} alpha={}", fmt_q(&alpha)))?;
            count += 1;
        }
        for (k, &l) in ls.iter().enumerate() {
            let alpha = qi(-(k as i64 + 1));
            let got = support_stratum(r, &alpha).map_err(err)?;
            let case_ok = match got {
                SupportStratum::CorankGe(_) => k + 1 < r,
                SupportStratum::Minimal => k + 1 >= r && (k + 1 - r) % 2 == 0,
                SupportStratum::NextToMinimal => k + 1 >= r && (k + 1 - r) % 2 == 1,
                SupportStratum::Maximal => false,
            };
            ensure(case_ok && got.orbit_index(r) == l, || format!("r={r} alpha={}: {got:?}, expected l={l}", fmt_q(&alpha)))?;
            count += 1;
        }
    }
    Ok(format!("{count} table entries"))
}

fn c13_middle_identity() -> Outcome {
    let s = sig(4, 2);
    let mut signs = Vec::new();
    for m in HighestWeight::enumerate(2, 12) {
        let v = s_eigenvalue(&s, &qi(-1), &m).map_err(err)?;
        ensure(v == qi(1) || v == qi(-1), || format!("m={m}: {}", fmt_q(&v)))?;
        signs.push(format!("{m}{}", if v == qi(1) { "+" } else { "-" }));
    }
    Ok(format!("{} weights, signs {}", signs.len(), signs.join(" ")))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 13] = [
        (1, "D-hat polynomial identity", Duration::from_secs(5), c1_dhat_identity),
        (2, "a/b inverse and symmetric lemma", Duration::from_secs(1), c2_ab_sym),
        (3, "eigenvalue recursion", Duration::from_secs(2), c3_eigen_recursion),
        (4, "pole multiplicities", Duration::from_secs(10), c4_pole_orders),
        (5, "step relations", Duration::from_secs(10), c5_step_relations),
        (6, "Pfaffian suite", Duration::from_secs(30), c6_pfaffian),
        (7, "vanishing and E_d in the polynomial model", Duration::from_secs(60), c7_polynomial_model),
        (8, "Funk-Hecke cross-validation", Duration::from_secs(10), c8_funk_hecke),
        (9, "Monte-Carlo eigenvalues at rank two", Duration::from_secs(300), c9_mc_rank_two),
        (10, "recursion functional check", Duration::from_secs(300), c10_recursion_functional),
        (11, "sphere Radon and Radon composition", Duration::from_secs(600), c11_radon),
        (12, "support classification", Duration::from_secs(1), c12_support),
        (13, "identity at the middle", Duration::from_secs(1), c13_middle_identity),
    ];
    let mut failed = 0;
    for (num, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took {took:.1?}, limit {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!("criterion {num:>2} {}: {name} [{took:.2?}] {detail}", if ok { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of 13 criteria passed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
