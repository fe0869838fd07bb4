//! `alphacos`: exact spectra, operator checks and numerical verification
//! suites for the alpha-cosine transform on real Grassmannians.

mod output;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alphacos_core::enveloping::RepSpace;
use alphacos_core::grassmann::{build_isotypic, variable_names, ProjectionPolyRep, ProjectionPolynomial};
use alphacos_core::numerics::{block_rng, mc_cosine_transform, SubspaceFrame};
use alphacos_core::rational::{fmt_q, parse_q, to_f64};
use alphacos_core::spectral::{
    chain_factorization, half_integers_between, spectrum, tprime_pole_order, tprime_pole_order_oracle, verify_chain,
};
use alphacos_core::suites::{
    funk_hecke_table, recursion_test_function, run_suite, run_suites, Suite, SuiteConfig, SuiteRecord,
    DEFAULT_CUTOFF, DEFAULT_FUNK_HECKE_SAMPLES, DEFAULT_SEED, QUADRATURE_TOL, RESIDUAL_TOL, SCHEMA_VERSION,
};
use alphacos_core::symmetric::{dhat_coefficients, gamma_ed, gamma_vd, verify_dhat_identity, z_names, PolyRecord};
use alphacos_core::{Error, GrassmannSignature, Q};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use output::{opt, Format, Output};

const OUT_DIR_ENV: &str = "ALPHACOS_OUT_DIR";

const TOLERANCES: &str = "\
Default tolerances and cutoffs:
  weight cutoff (m_1 <=)             12
  pole-order oracle cutoffs          12 and 16
  quadrature eigenvalue ratios       1e-6 relative (absolute where the exact ratio is 0)
  polynomial-model residuals         1e-8 relative
  rotation commutators               1e-10 over 20 seeded rotations
  Monte-Carlo checks                 3 standard errors
  great-sphere ratio spread          2%
  Radon composition ratio spread     5% (slow suite, needs --slow)

Exit codes: 0 pass, 1 falsified, 2 usage, 3 I/O.";

#[derive(Parser, Debug)]
#[command(name = "alphacos", version, about, after_help = TOLERANCES)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel sections; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SigArgs {
    /// Ambient dimension.
    #[arg(long)]
    n: usize,
    /// Subspace dimension.
    #[arg(long)]
    i: usize,
}

impl SigArgs {
    fn sig(&self) -> Result<GrassmannSignature, Error> {
        GrassmannSignature::new(self.n, self.i)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factored eigenvalues c'(nu; m) over all weights up to the cutoff.
    Spectrum {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: u32,
        /// Also report the eigenvalue of S at this nu (as p/q) and the pole order there.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Pole orders of the normalized transform at half-integers, closed form
    /// against the brute-force maximum over weights.
    Poles {
        #[command(flatten)]
        sig: SigArgs,
        /// Lower end of the nu range (default -n).
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<i64>,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        hi: i64,
        #[arg(long, default_value_t = 16)]
        cutoff: u32,
    },
    /// Reduction of S_alpha to an integral or Radon-type base transform.
    Chain {
        #[command(flatten)]
        sig: SigArgs,
        /// Target alpha as p/q.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: u32,
    },
    /// Coefficients c_k(nu) of the polynomial operator D^_nu, and its identity check.
    DnuCoeffs {
        #[command(flatten)]
        sig: SigArgs,
    },
    /// Harish-Chandra images of V_d and E_d in the shifted variables z.
    HcPoly {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long)]
        d: usize,
    },
    /// Pfaffian and V_d checks on exterior powers (d = 1..4).
    PfaffianCheck {
        /// Restrict to one d.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Isotypic components of the degree <= 2 projection polynomials.
    Eigenspaces {
        #[command(flatten)]
        sig: SigArgs,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = RESIDUAL_TOL)]
        tol: f64,
    },
    /// Monte-Carlo alpha-cosine transform of a projection polynomial.
    McTransform {
        #[command(flatten)]
        sig: SigArgs,
        /// Exponent alpha > -1 (decimal or p/q).
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Number of random evaluation points (the base point is always included).
        #[arg(long, default_value_t = 2)]
        points: usize,
        /// Polynomial in the projection entries as a JSON record
        /// `{vars:[...], terms:[{exps:[...], coef:"p/q"}]}`; a fixed test
        /// polynomial is used when absent.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Run named verification suites.
    Verify {
        /// Suites to run (repeatable); default is every fast suite.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Include slow nested Monte-Carlo suites in the default selection.
        #[arg(long)]
        slow: bool,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        /// Override the suite's residual or quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Write CSV and JSON artifacts to the output directory.
    Report {
        #[arg(long, env = OUT_DIR_ENV, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_FUNK_HECKE_SAMPLES)]
        samples: usize,
        #[arg(long)]
        slow: bool,
    },
}

enum Failure {
    Core(Error),
    Io(io::Error),
    /// Some checks failed; the output is still printed.
    Checks(Output),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Falsified { .. } | Error::NumericalDegeneracy(_) | Error::Internal(_) => 1,
        Error::InvalidInput(_) | Error::Domain(_) | Error::Resource(_) => 2,
    }
}

fn parse_rational(s: &str) -> Result<Q, Error> {
    parse_q(s)
}

fn records_output(records: &[SuiteRecord]) -> Output {
    let mut out = Output::new(
        json!({ "schema_version": SCHEMA_VERSION, "records": records }),
        &["suite", "case", "estimate", "stderr", "prediction", "pass", "seed", "detail"],
    );
    for r in records {
        out.row(vec![
            r.suite.clone(),
            r.case.clone(),
            opt(&r.estimate),
            r.stderr.map(|s| format!("{s:.3e}")).unwrap_or_default(),
            opt(&r.prediction),
            if r.pass { "pass" } else { "FAIL" }.to_string(),
            opt(&r.seed),
            opt(&r.detail),
        ]);
    }
    out
}

/// `(nu - root)` written with the sign folded in.
fn linear_factor(root: &str) -> String {
    match root.strip_prefix('-') {
        Some(pos) => format!("(nu+{pos})"),
        None if root == "0" => "nu".to_string(),
        None => format!("(nu-{root})"),
    }
}

fn cmd_spectrum(sig: &SigArgs, cutoff: u32, at: Option<&str>) -> Result<Output, Failure> {
    let s = sig.sig()?;
    let at = at.map(parse_rational).transpose()?;
    let recs = spectrum(&s, cutoff, at.as_ref())?;
    let mut out = Output::new(serde_json::to_value(&recs).expect("serializable"), &["m", "factors", "unit", "s_eigenvalue", "pole_order"]);
    for r in &recs {
        let factors: Vec<String> = r.factors.iter().map(|f| format!("{}^{}", linear_factor(&f.root), f.mult)).collect();
        out.row(vec![
            format!("{:?}", r.m),
            factors.join(" "),
            r.unit.clone(),
            opt(&r.s_eigenvalue),
            opt(&r.pole_order),
        ]);
    }
    Ok(out)
}

fn cmd_poles(sig: &SigArgs, lo: Option<i64>, hi: i64, cutoff: u32) -> Result<Output, Failure> {
    let s = sig.sig()?;
    let lo = lo.unwrap_or(-(s.n() as i64));
    if lo > hi {
        return Err(Error::invalid("--lo must not exceed --hi").into());
    }
    let mut rows = Vec::new();
    let mut out = Output::new(json!(null), &["nu", "closed_form", "oracle", "agree"]);
    let mut ok = true;
    for l in half_integers_between(lo, hi) {
        let closed = tprime_pole_order(&s, &l);
        let oracle = tprime_pole_order_oracle(&s, &l, cutoff)?;
        ok &= closed == oracle;
        rows.push(json!({ "nu": fmt_q(&l), "closed_form": closed, "oracle": oracle }));
        out.row(vec![fmt_q(&l), closed.to_string(), oracle.to_string(), (closed == oracle).to_string()]);
    }
    out.json = json!({ "n": s.n(), "i": s.i(), "r": s.r(), "cutoff": cutoff, "poles": rows });
    if ok {
        Ok(out)
    } else {
        Err(Failure::Checks(out))
    }
}

fn cmd_chain(sig: &SigArgs, alpha: &str, cutoff: u32) -> Result<Output, Failure> {
    let s = sig.sig()?;
    let target = parse_rational(alpha)?;
    let chain = chain_factorization(&s, &target)?;
    let constant = verify_chain(&s, &chain, cutoff)?;
    let params: Vec<String> = chain.dhat_params.iter().map(fmt_q).collect();
    let json = json!({
        "n": s.n(), "i": s.i(), "r": s.r(),
        "target": fmt_q(&chain.target),
        "base": fmt_q(&chain.base),
        "dhat_params": params,
        "case": chain.case,
        "constant": fmt_q(&constant),
    });
    let mut out = Output::new(json, &["target", "base", "dhat_params", "case", "constant"]);
    out.row(vec![
        fmt_q(&chain.target),
        fmt_q(&chain.base),
        params.join(" "),
        serde_json::to_value(chain.case).expect("serializable").as_str().unwrap_or_default().to_string(),
        fmt_q(&constant),
    ]);
    Ok(out)
}

fn cmd_dnu_coeffs(sig: &SigArgs) -> Result<Output, Failure> {
    let s = sig.sig()?;
    let coeffs = dhat_coefficients(&s);
    verify_dhat_identity(&s)?;
    let mut recs: Vec<PolyRecord> = Vec::new();
    let mut out = Output::new(json!(null), &["k", "c_k(nu)"]);
    for (k, c) in coeffs.iter().enumerate() {
        recs.push(c.to_record(&["nu"])?);
        out.row(vec![k.to_string(), c.display_with(&["nu"])]);
    }
    out.json = json!({ "n": s.n(), "i": s.i(), "r": s.r(), "coefficients": recs, "identity": "verified" });
    Ok(out)
}

fn cmd_hc_poly(sig: &SigArgs, d: usize) -> Result<Output, Failure> {
    let s = sig.sig()?;
    let names = z_names(s.r());
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let vd = gamma_vd(&s, d)?;
    let ed = gamma_ed(&s, d)?;
    let mut out = Output::new(
        json!({ "n": s.n(), "i": s.i(), "r": s.r(), "d": d, "v_d": vd.to_record(&vars)?, "e_d": ed.to_record(&vars)? }),
        &["operator", "polynomial"],
    );
    out.row(vec![format!("V_{d}"), vd.display_with(&vars)]);
    out.row(vec![format!("E_{d}"), ed.display_with(&vars)]);
    Ok(out)
}

fn checks(records: Vec<SuiteRecord>) -> Result<Output, Failure> {
    let pass = records.iter().all(|r| r.pass);
    let out = records_output(&records);
    if pass {
        Ok(out)
    } else {
        Err(Failure::Checks(out))
    }
}

fn cmd_pfaffian(d: Option<usize>, seed: u64) -> Result<Output, Failure> {
    if let Some(d) = d {
        if !(1..=4).contains(&d) {
            return Err(Error::Resource(format!("d = {d} is outside the supported range 1..4")).into());
        }
    }
    let cfg = SuiteConfig { seed, ..Default::default() };
    let mut recs = run_suite(Suite::Pfaffian, &cfg)?;
    if let Some(d) = d {
        let tag = format!("d={d}");
        recs.retain(|r| r.case.ends_with(&tag));
    }
    checks(recs)
}

fn cmd_eigenspaces(sig: &SigArgs, seed: u64, tol: f64) -> Result<Output, Failure> {
    let s = sig.sig()?;
    let rep = ProjectionPolyRep::new(s.n(), 2)?;
    let dec = build_isotypic(&s, 2, 4 * rep.dim(), seed, 1e-9)?;
    let ed = dec.check_ed(tol)?;
    let mut vanish = Vec::new();
    for d in 1..=s.r() {
        vanish.push(dec.check_vanishing(d, tol)?);
    }
    let comps: Vec<_> = dec.components().iter().map(|c| c.to_record()).collect();
    let mut out = Output::new(
        json!({
            "n": s.n(), "i": s.i(), "r": s.r(), "seed": seed, "rank": dec.rank(),
            "components": comps, "ed_residual": ed, "vanishing_residuals": vanish,
        }),
        &["m", "dim", "fingerprint"],
    );
    for c in &comps {
        out.row(vec![format!("{:?}", c.m), c.dim.to_string(), c.fingerprint.join(" ")]);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_mc_transform(
    sig: &SigArgs,
    alpha: &str,
    samples: usize,
    seed: u64,
    points: usize,
    poly: Option<&str>,
) -> Result<Output, Failure> {
    let s = sig.sig()?;
    let alpha = to_f64(&parse_rational(alpha)?);
    let f = match poly {
        None => recursion_test_function(s.n()),
        Some(text) => {
            let rec: PolyRecord =
                serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad polynomial JSON: {e}")))?;
            let expected = variable_names(s.n());
            if rec.vars != expected {
                return Err(Error::invalid(format!("polynomial variables must be {}", expected.join(","))).into());
            }
            ProjectionPolynomial::new(s.n(), rec.to_poly()?)?
        }
    };
    let mut rng = block_rng(seed, u64::MAX);
    let mut eval = vec![SubspaceFrame::base_point(s.n(), s.i())];
    eval.extend((0..points).map(|_| SubspaceFrame::random(s.n(), s.i(), &mut rng)));
    let est = mc_cosine_transform(&s, alpha, &|fr| f.eval(fr), &eval, samples, seed)?;
    let mut out = Output::new(
        json!({ "n": s.n(), "i": s.i(), "alpha": alpha, "function": f.to_record()?, "estimates": est }),
        &["point", "value", "stderr", "samples", "seed"],
    );
    for (k, e) in est.iter().enumerate() {
        out.row(vec![k.to_string(), format!("{:.8e}", e.value), format!("{:.3e}", e.stderr), e.samples.to_string(), e.seed.to_string()]);
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    names: &[String],
    slow: bool,
    n: Option<usize>,
    i: Option<usize>,
    cutoff: u32,
    seed: u64,
    samples: Option<usize>,
    tol: Option<f64>,
) -> Result<Output, Failure> {
    let sig = match (n, i) {
        (Some(n), Some(i)) => Some(GrassmannSignature::new(n, i)?),
        (None, None) => None,
        _ => return Err(Error::invalid("--n and --i must be given together").into()),
    };
    let suites: Vec<Suite> = if names.is_empty() {
        Suite::defaults(slow)
    } else {
        let picked = names.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>, _>>()?;
        if let Some(s) = picked.iter().find(|s| s.is_slow() && !slow) {
            return Err(Error::invalid(format!("suite '{s}' is slow; pass --slow to run it")).into());
        }
        picked
    };
    let cfg = SuiteConfig { sig, cutoff, seed, samples, tol };
    checks(run_suites(&suites, &cfg)?)
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> io::Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, bytes)?;
    Ok(path)
}

fn cmd_report(out_dir: &Path, seed: u64, samples: usize, slow: bool) -> Result<Output, Failure> {
    fs::create_dir_all(out_dir)?;
    let alphas: Vec<Q> = ["1/2", "1", "2"].iter().map(|a| parse_q(a)).collect::<Result<_, _>>()?;
    let rows = funk_hecke_table(3, &alphas, 8, samples, seed)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).map_err(|e| io::Error::other(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    let csv_path = write_file(out_dir, "funk_hecke_n3.csv", &bytes)?;

    let cfg = SuiteConfig { seed, ..Default::default() };
    let records = run_suites(&Suite::defaults(slow), &cfg)?;
    let pass = records.iter().all(|r| r.pass);
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "tolerances": { "quadrature": QUADRATURE_TOL, "residual": RESIDUAL_TOL, "mc_z": alphacos_core::numerics::Z_LIMIT },
        "records": records,
    });
    let json_path = write_file(out_dir, "suites.json", serde_json::to_string_pretty(&doc).expect("serializable").as_bytes())?;
    let mut out = Output::new(
        json!({ "files": [csv_path.display().to_string(), json_path.display().to_string()], "pass": pass }),
        &["file"],
    );
    out.row(vec![csv_path.display().to_string()]);
    out.row(vec![json_path.display().to_string()]);
    if pass {
        Ok(out)
    } else {
        Err(Failure::Checks(out))
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Spectrum { sig, cutoff, at } => cmd_spectrum(sig, *cutoff, at.as_deref()),
        Command::Poles { sig, lo, hi, cutoff } => cmd_poles(sig, *lo, *hi, *cutoff),
        Command::Chain { sig, alpha, cutoff } => cmd_chain(sig, alpha, *cutoff),
        Command::DnuCoeffs { sig } => cmd_dnu_coeffs(sig),
        Command::HcPoly { sig, d } => cmd_hc_poly(sig, *d),
        Command::PfaffianCheck { d, seed } => cmd_pfaffian(*d, *seed),
        Command::Eigenspaces { sig, seed, tol } => cmd_eigenspaces(sig, *seed, *tol),
        Command::McTransform { sig, alpha, samples, seed, points, poly } => {
            cmd_mc_transform(sig, alpha, *samples, *seed, *points, poly.as_deref())
        }
        Command::Verify { suites, slow, n, i, cutoff, seed, samples, tol } => {
            cmd_verify(suites, *slow, *n, *i, *cutoff, *seed, *samples, *tol)
        }
        Command::Report { out_dir, seed, samples, slow } => cmd_report(out_dir, *seed, *samples, *slow),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.json { Format::Json } else { cli.format };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let (out, code) = match run(&cli) {
        Ok(out) => (Some(out), 0),
        Err(Failure::Checks(out)) => (Some(out), 1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            if let Error::Falsified { identity, detail } = &e {
                let doc = json!({ "falsified": identity, "counterexample": detail });
                let _ = writeln!(lock, "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            (None, exit_code(&e))
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            (None, 3)
        }
    };
    if let Some(out) = out {
        if let Err(e) = out.write(format, &mut lock) {
            if e.kind() != io::ErrorKind::BrokenPipe {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
        }
    }
    ExitCode::from(code)
}
