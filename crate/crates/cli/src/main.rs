//! `pvlab`: batch runs of the Bernstein, principal-value and
//! symmetric-function checks with versioned JSON reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex;
use serde::Serialize;
use serde_json::{json, Value};

use pvlab::quad::{EpsGrid, QuadOpts};
use pvlab::regularize::{
    boundary_decay_check, compare_t_s, fiber_expansion, finite_part, formal_action_check, laurent_coeffs,
    merext_eval, pv_limit, MerextOpts, PvOpts,
};
use pvlab::report::{Outcome, Report};
use pvlab::symbolic::{GaussRat, Poly, Rat};
use pvlab::symfun::{self, SmoothLocus, SymContext, XCase};
use pvlab::testform::{named_form, TestForm};
use pvlab::weyl::catalog::{catalog_from_json, CatalogJson};
use pvlab::weyl::{catalog, lookup, BernsteinDatum, DiffOperator};
use pvlab::Error;

#[derive(Parser, Debug)]
#[command(name = "pvlab", version, about = "Principal values, meromorphic extensions and their certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Catalog entry (`z`, `z^2`, `z^3`, `z^4`, `z1*z2`, `z1^2+z2^2`).
    #[arg(long = "f", global = true, default_value = "z")]
    f: String,
    /// Exponent α, exact: `3/10`, `0.3`, `1/2+1/4i`.
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long = "N", global = true, default_value_t = 0)]
    n: i64,
    #[arg(long = "q", global = true, default_value_t = 0)]
    q: u32,
    /// Number of functional-equation iterations; defaults per command.
    #[arg(long = "M", global = true)]
    m: Option<u32>,
    #[arg(long, global = true, default_value_t = 0.5)]
    eps0: f64,
    #[arg(long, global = true, default_value_t = 0.75)]
    eps_ratio: f64,
    #[arg(long, global = true, default_value_t = 24)]
    eps_count: usize,
    /// Acceptance tolerance of the check; defaults per command.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Named bump: radial, radial-poly, offset, poly, flat.
    #[arg(long, global = true, default_value = "radial")]
    form: String,
    /// JSON report path (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// CSV path for the ε-sweep of `pv` and `finite-part`.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Omit the timestamp so identical configurations give identical reports.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Exact certificates for `P f^{λ+1} = b f^λ` and its iterates.
    VerifyBernstein {
        #[arg(long)]
        all: bool,
        /// Catalog JSON replacing the built-in catalog.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// Principal value by extrapolated cutoff sweep.
    Pv,
    /// Continued pairing at λ = α.
    Merext,
    /// Laurent coefficients of the continued pairing around α.
    Laurent {
        #[arg(long, default_value_t = 0.1)]
        radius: f64,
        #[arg(long, default_value_t = 32)]
        nodes: usize,
    },
    /// Principal value against the continued pairing.
    Compare,
    /// Finite part for real α < 0.
    FinitePart,
    /// Fiber-integral expansion for `f = z^k` against its symbolic oracle.
    FiberFit {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Decay of `∮_{|z|=ε} z^{−N} ξ`.
    BoundaryDecay {
        #[arg(long, default_value_t = 256)]
        nodes: usize,
    },
    /// Both pairings of `V(T_{α,N}) = (α−N) V(f) T_{α,N+1}`.
    FormalAction {
        /// `dz` or `zdz`.
        #[arg(long, default_value = "dz")]
        field: String,
    },
    /// Symmetric-function certificates.
    Symfun {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// all, pushforward, newton, discriminant, trace-annihilation,
        /// footnote-identity, commutator, x-annihilation, conjugate,
        /// numeric-pairing, delta-constant.
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        #[arg(long, default_value_t = 2_000_000)]
        samples: usize,
    },
}

#[derive(Serialize)]
struct RunConfig {
    command: Command,
    #[serde(flatten)]
    common: Common,
    /// α as the exact rational it was parsed to.
    alpha_exact: Option<String>,
}

struct Run {
    outcome: Outcome,
    result: Value,
    csv: Option<String>,
}

impl Run {
    fn verdict(pass: bool, result: Value) -> Self {
        Run { outcome: if pass { Outcome::Pass } else { Outcome::CheckFailed }, result, csv: None }
    }
}

fn outcome_of(e: &Error) -> Outcome {
    match e {
        Error::NonConvergent(_) | Error::IllConditioned(_) | Error::BudgetExceeded { .. } | Error::PoleOnCircle(_) => {
            Outcome::NonConvergent
        }
        _ => Outcome::ConfigError,
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

struct Ctx {
    common: Common,
    alpha: GaussRat,
}

impl Ctx {
    fn alpha(&self) -> Complex<f64> {
        self.alpha.to_complex()
    }

    fn datum(&self) -> pvlab::Result<BernsteinDatum> {
        lookup(&self.common.f)
    }

    fn form_for(&self, d: &BernsteinDatum) -> pvlab::Result<TestForm> {
        let names = d.ring.names()[..d.dim()].to_vec();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        named_form(&self.common.form, &names)
    }

    fn pv_opts(&self) -> pvlab::Result<PvOpts> {
        let grid = EpsGrid::new(self.common.eps0, self.common.eps_ratio, self.common.eps_count)?;
        Ok(PvOpts { grid, ..PvOpts::default() })
    }

    fn merext_opts(&self) -> MerextOpts {
        MerextOpts { m: self.common.m, ..MerextOpts::default() }
    }

    fn tol(&self, default: f64) -> f64 {
        self.common.tol.unwrap_or(default)
    }
}

fn factored(d: &BernsteinDatum, m: u32) -> String {
    let mut parts = Vec::new();
    for j in 0..m {
        for (r, mult) in &d.b_roots {
            let c = -(r - Rat::from_integer(j.into()));
            let lin = if c < Rat::from_integer(0.into()) {
                format!("(λ-{})", -c)
            } else {
                format!("(λ+{c})")
            };
            parts.push(if *mult > 1 { format!("{lin}^{mult}") } else { lin });
        }
    }
    parts.join("")
}

fn verify_bernstein(ctx: &Ctx, all: bool, catalog_path: Option<&PathBuf>) -> pvlab::Result<Run> {
    let entries = match catalog_path {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            let c: CatalogJson = serde_json::from_str(&text)?;
            catalog_from_json(&c)?
        }
        None => catalog(),
    };
    let selected: Vec<BernsteinDatum> = if all {
        entries
    } else {
        let key: String = ctx.common.f.chars().filter(|c| !c.is_whitespace()).collect();
        let found: Vec<_> = entries.into_iter().filter(|d| d.name == key).collect();
        if found.is_empty() {
            return Err(Error::InvalidArgument(format!("`{}` is not in the Bernstein catalog", ctx.common.f)));
        }
        found
    };
    let max_m = ctx.common.m.unwrap_or(if all { 5 } else { 1 });
    let mut pass = true;
    let mut out = Vec::new();
    for d in &selected {
        let mut certs = vec![d.verify()?, d.check_roots()];
        for m in 2..=max_m {
            certs.push(d.verify_iterated(m)?);
        }
        for c in &certs {
            if !c.passed {
                pass = false;
                eprintln!("FAILED {}: residual {}", c.name, c.residual);
            }
        }
        out.push(json!({
            "f": d.name,
            "b": factored(d, 1),
            "B_M": { "M": max_m, "factored": factored(d, max_m) },
            "certificates": certs,
        }));
    }
    Ok(Run::verdict(pass, json!({ "entries": out })))
}

fn vector_field(d: &BernsteinDatum, name: &str) -> pvlab::Result<DiffOperator> {
    if d.dim() != 1 {
        return Err(Error::InvalidArgument("formal-action runs on one-variable entries".into()));
    }
    let dz = DiffOperator::partial(&d.ring, 0)?;
    match name {
        "dz" => Ok(dz),
        "zdz" => Ok(dz.left_mul(&Poly::var(&d.ring, 0))),
        other => Err(Error::InvalidArgument(format!("unknown vector field `{other}` (dz, zdz)"))),
    }
}

fn symfun_run(ctx: &Ctx, k: usize, check: &str, m_max: usize, samples: usize) -> pvlab::Result<Run> {
    let sc = SymContext::new(k)?;
    let mut certs = Vec::new();
    let mut extra = serde_json::Map::new();
    let want = |name: &str| check == "all" || check == name;
    let known = [
        "all",
        "pushforward",
        "newton",
        "discriminant",
        "trace-annihilation",
        "footnote-identity",
        "commutator",
        "x-annihilation",
        "conjugate",
        "numeric-pairing",
        "delta-constant",
    ];
    if !known.contains(&check) {
        return Err(Error::InvalidArgument(format!("unknown check `{check}` ({})", known.join(", "))));
    }
    if want("pushforward") {
        for f in symfun::Field::all() {
            certs.push(symfun::pushforward_field_check(&sc, f)?);
        }
    }
    if want("newton") {
        certs.push(symfun::newton_check(&sc, m_max)?);
    }
    if want("discriminant") {
        certs.push(symfun::discriminant_check(&sc)?);
    }
    if want("trace-annihilation") {
        certs.push(symfun::trace_annihilation_check(&sc, m_max)?);
    }
    if want("footnote-identity") {
        certs.push(symfun::factorization_identity(&sc, m_max)?);
    }
    if want("commutator") {
        certs.push(symfun::commutator_report(&sc));
    }
    let smooth = ["x-annihilation", "conjugate", "numeric-pairing"];
    if k != 2 && smooth.contains(&check) {
        return Err(Error::InvalidArgument(format!("`{check}` is implemented for k = 2")));
    }
    if k == 2 && (want("x-annihilation") || want("conjugate")) {
        let sl = SmoothLocus::new()?;
        if want("x-annihilation") {
            for case in XCase::all() {
                certs.extend(symfun::xdist_annihilation_check(&sl, case)?);
            }
        }
        if want("conjugate") {
            certs.extend(symfun::conjugate_generator_checks(&sl)?);
        }
    }
    let mut pass = certs.iter().all(|c| c.passed());
    if k == 2 && want("numeric-pairing") {
        let opts = symfun::PairingOpts { samples, seed: ctx.common.seed, ..Default::default() };
        let xi = named_form("offset", &["s1", "s2"])?;
        let lam = if ctx.alpha.re < Rat::from_integer(0.into()) { GaussRat::int(0) } else { ctx.alpha.clone() };
        let mut rows = Vec::new();
        let tol = ctx.tol(0.05);
        let ops = [
            ("U_0 - lam", sc.u(symfun::Field::Zero).sub(&sc.lambda_op())),
            ("T^2", sc.t_m(2)),
            ("U_0 (control)", sc.u(symfun::Field::Zero)),
        ];
        for (name, q) in ops {
            let r = symfun::numeric_pairing_check(&sc, &q, &lam, &xi, &opts)?;
            let annihilator = !name.contains("control");
            if annihilator && r.relative > tol {
                pass = false;
            }
            rows.push(json!({ "operator": name, "annihilator": annihilator, "residual": r }));
        }
        extra.insert("numeric_pairing".into(), json!({ "lambda": lam.to_string(), "tol": tol, "rows": rows }));
    }
    if want("delta-constant") {
        let mut rows = Vec::new();
        let tol = ctx.tol(1e-4);
        for name in ["radial", "offset", "poly"] {
            let r = symfun::delta_constant(&named_form(name, &["z"])?, name, &QuadOpts::default())?;
            let ok = r.c.re.abs() <= tol * std::f64::consts::TAU
                && (r.c.norm() - std::f64::consts::TAU).abs() <= tol * std::f64::consts::TAU;
            pass &= ok;
            rows.push(json!({ "passed": ok, "value": r }));
        }
        extra.insert("delta_constant".into(), json!(rows));
    }
    for c in certs.iter().filter(|c| !c.passed()) {
        eprintln!("FAILED {}: residual {}", c.check, c.residual);
    }
    let mut result = json!({ "k": k, "certificates": certs });
    result.as_object_mut().expect("object").extend(extra);
    Ok(Run::verdict(pass, result))
}

fn dispatch(ctx: &Ctx, command: &Command) -> pvlab::Result<Run> {
    let alpha = ctx.alpha();
    let (n, q) = (ctx.common.n, ctx.common.q);
    match command {
        Command::VerifyBernstein { all, catalog } => verify_bernstein(ctx, *all, catalog.as_ref()),
        Command::Pv => {
            let d = ctx.datum()?;
            let r = pv_limit(&d.f, alpha, n, q, &ctx.form_for(&d)?, &ctx.pv_opts()?)?;
            let result = json!({
                "value": r.value, "tail_slope": r.tail_slope, "fit": r.fit, "sweep_points": r.sweep.len(),
            });
            Ok(Run { outcome: Outcome::Pass, result, csv: Some(r.sweep.to_csv()) })
        }
        Command::Merext => {
            let d = ctx.datum()?;
            let r = merext_eval(&d, alpha, n, q, &ctx.form_for(&d)?, &ctx.merext_opts())?;
            Ok(Run::verdict(true, to_value(&r)))
        }
        Command::Laurent { radius, nodes } => {
            let d = ctx.datum()?;
            let r = laurent_coeffs(&d, alpha, n, &ctx.form_for(&d)?, *radius, *nodes, &ctx.merext_opts())?;
            let tol = ctx.tol(1e-6);
            let pass = r.beyond_cap() <= tol * r.scale();
            Ok(Run::verdict(pass, json!({ "laurent": r, "beyond_cap": r.beyond_cap(), "tol": tol })))
        }
        Command::Compare => {
            let d = ctx.datum()?;
            let r = compare_t_s(&d, alpha, n, q, &ctx.form_for(&d)?, &ctx.pv_opts()?, &ctx.merext_opts())?;
            let tol = ctx.tol(if d.dim() == 1 { 1e-4 } else { 1e-3 });
            Ok(Run::verdict(r.rel_discrepancy <= tol, json!({ "comparison": r, "tol": tol })))
        }
        Command::FinitePart => {
            if alpha.im != 0.0 {
                return Err(Error::InvalidArgument("finite parts take real α".into()));
            }
            let d = ctx.datum()?;
            let r = finite_part(&d.f, alpha.re, n, q, &ctx.form_for(&d)?, &ctx.pv_opts()?)?;
            let csv = r.uncorrected.to_csv();
            let result = json!({
                "value": r.value,
                "divergence_exponent": r.divergence_exponent,
                "corrected_slope": r.corrected_slope,
                "counterterms": r.counterterms,
                "fit": r.fit,
            });
            Ok(Run { outcome: Outcome::Pass, result, csv: Some(csv) })
        }
        Command::FiberFit { k, order } => {
            let form = named_form(&ctx.common.form, &["z"])?;
            let r = fiber_expansion(*k, &form, *order)?;
            let tol = ctx.tol(1e-6);
            let structural = r.fitted.structural_ok(tol);
            let pass = r.max_diff <= tol && structural;
            Ok(Run::verdict(pass, json!({ "fit": r, "structural_ok": structural, "tol": tol })))
        }
        Command::BoundaryDecay { nodes } => {
            let form = named_form(&ctx.common.form, &["z"])?;
            let eps = ctx.pv_opts()?.grid.points();
            let r = boundary_decay_check(n, &form, &eps, *nodes)?;
            let pass = r.slope > 0.0 || r.identically_zero || r.noise_limited();
            Ok(Run::verdict(pass, json!({ "decay": r, "noise_limited": r.noise_limited() })))
        }
        Command::FormalAction { field } => {
            let d = ctx.datum()?;
            let v = vector_field(&d, field)?;
            let r = formal_action_check(&d, alpha, n, &v, &ctx.form_for(&d)?, &ctx.pv_opts()?)?;
            let tol = ctx.tol(1e-3);
            Ok(Run::verdict(r.rel_discrepancy <= tol, json!({ "action": r, "tol": tol })))
        }
        Command::Symfun { k, check, m_max, samples } => symfun_run(ctx, *k, check, *m_max, *samples),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let parsed = GaussRat::parse(&cli.common.alpha);
    let config = RunConfig {
        command: cli.command.clone(),
        common: cli.common.clone(),
        alpha_exact: parsed.as_ref().ok().map(|a| a.to_string()),
    };
    let run = match parsed {
        Ok(alpha) => {
            let ctx = Ctx { common: cli.common.clone(), alpha };
            dispatch(&ctx, &cli.command)
        }
        Err(e) => Err(e),
    };
    let run = run.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        Run { outcome: outcome_of(&e), result: json!({ "error": e.to_string() }), csv: None }
    });
    let outcome = run.outcome;
    let report = Report::new(config, outcome, run.result, cli.common.deterministic);
    let text = match report.to_json() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let written = match &cli.common.out {
        Some(p) => std::fs::write(p, text + "\n"),
        None => {
            println!("{text}");
            Ok(())
        }
    };
    let csv_written = match (&cli.common.csv, &run.csv) {
        (Some(p), Some(c)) => std::fs::write(p, c),
        _ => Ok(()),
    };
    if let Err(e) = written.and(csv_written) {
        eprintln!("error: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(outcome.exit_code() as u8)
}
