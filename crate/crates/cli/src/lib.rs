//! Argument parsing and dispatch for the `loopalg` binary.
//!
//! Exit codes: 0 success, 1 validation or classification failure,
//! 2 oracle failure, 64 usage, parse or I/O error.

use std::io::Write;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use loopalg::bundled;
use loopalg::demos::{demo_hysteresis, demo_lorentz, demo_table1};
use loopalg::exact::rational::{self, Rational};
use loopalg::exact::signature;
use loopalg::format::{algebra_to_file, load_any, InputFile, LoadError};
use loopalg::kepler::{
    run_cross_check, run_identity_suite, KeplerParams, Observable, OracleError, OracleReport,
    SuiteConfig,
};
use loopalg::lie::{
    center_dim, classify3, contract, derived_subalgebra_dim, is_classic_iw, killing_form, validate,
    ContractionWeights, LieAlgebra, LieError,
};
use loopalg::loop_alg::{
    check_selection, factor_algebra, LoopSpec, TowerSelection, DEFAULT_MAX_LEVEL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_ORACLE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const MAX_LEVEL_VAR: &str = "LOOPALG_MAX_LEVEL";

const AFTER_HELP: &str = "\
Values of eps stand for -2mE. Only the sign branch of eps matters for
classification: every eps > 0 gives the same label, as does every eps < 0.

Files named h2.json, l1.json or l2.json that do not exist on disk resolve
to the bundled loop specs.

Environment: LOOPALG_MAX_LEVEL sets the level window for loop-spec Jacobi
checks (default 8).

Exit codes: 0 ok, 1 validation/classification failure, 2 oracle failure,
64 usage or parse error.";

#[derive(Debug, Parser)]
#[command(name = "loopalg", version, about = "Loop algebras, factor algebras and contractions", after_help = AFTER_HELP)]
pub struct Cli {
    /// Output format; verify-kepler and demo-hysteresis default to json
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a Lie algebra or loop spec file and check Jacobi
    Validate { file: String },
    /// Classify a 3-dimensional algebra, or a factor algebra of a loop spec
    Classify {
        file: String,
        /// Value substituted for eps
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
        /// Tower levels, for loop specs (default all 0)
        #[arg(long)]
        levels: Option<String>,
    },
    /// Contract an algebra with weights n_a, e.g. 0,0,1/2
    Contract {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
    },
    /// Factor algebra of the selected towers of a loop spec
    Quotient {
        file: String,
        #[arg(long)]
        levels: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eps: Option<String>,
    },
    /// Check that the selected towers close under the bracket
    SelectionCheck {
        file: String,
        #[arg(long)]
        levels: String,
    },
    /// Finite-difference check of the bracket identities of the Kepler observables
    VerifyKepler(KeplerArgs),
    /// Classification of the three bundled specs at eps = +1, 0, -1
    DemoTable1,
    /// Contraction of so(3,1) to e(3)
    DemoLorentz,
    /// Labels along the two orders of the limits eps -> 0 and beta -> 0
    DemoHysteresis,
}

#[derive(Debug, Args)]
pub struct KeplerArgs {
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Loop spec to realize instead of the built-in identity list
    #[arg(long)]
    pub spec: Option<String>,
    /// Observables bound to the spec generators, e.g. M2,S,N1
    #[arg(long, requires = "spec")]
    pub bind: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
    Oracle(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
            CliError::Oracle(_) => EXIT_ORACLE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) | CliError::Oracle(m) => m,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Parse { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<loopalg::loop_alg::LoopError> for CliError {
    fn from(e: loopalg::loop_alg::LoopError) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<loopalg::demos::DemoError> for CliError {
    fn from(e: loopalg::demos::DemoError) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("write failed: {e}"))
    }
}

type Res = Result<(), CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Res {
    let json = |default_json: bool| match cli.format {
        Some(Format::Json) => true,
        Some(Format::Table) => false,
        None => default_json,
    };
    match &cli.command {
        Command::Validate { file } => cmd_validate(file, json(false), out),
        Command::Classify { file, eps, levels } => {
            cmd_classify(file, eps.as_deref(), levels.as_deref(), json(false), out)
        }
        Command::Contract { file, weights } => cmd_contract(file, weights, json(false), out),
        Command::Quotient { file, levels, eps } => {
            cmd_quotient(file, levels.as_deref(), eps.as_deref(), json(false), out)
        }
        Command::SelectionCheck { file, levels } => cmd_selection(file, levels, json(false), out),
        Command::VerifyKepler(args) => cmd_kepler(args, json(true), out),
        Command::DemoTable1 => cmd_table1(json(false), out),
        Command::DemoLorentz => cmd_lorentz(json(false), out),
        Command::DemoHysteresis => cmd_hysteresis(json(true), out),
    }
}

pub fn max_level() -> Result<u32, CliError> {
    match std::env::var(MAX_LEVEL_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{MAX_LEVEL_VAR} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_MAX_LEVEL),
    }
}

/// File contents, falling back to a bundled spec of the same name.
pub fn read_input(file: &str) -> Result<String, CliError> {
    match std::fs::read_to_string(file) {
        Ok(s) => Ok(s),
        Err(e) => {
            let base = Path::new(file)
                .file_name()
                .and_then(|s| s.to_str())
                .unwrap_or(file);
            if !Path::new(file).exists() {
                if let Some(src) = bundled::source(base) {
                    return Ok(src.to_string());
                }
            }
            Err(CliError::Usage(format!("cannot read {file}: {e}")))
        }
    }
}

fn load(file: &str) -> Result<InputFile, CliError> {
    let src = read_input(file)?;
    load_any(&src, max_level()?).map_err(|e| match e {
        LoadError::Parse { .. } => CliError::Usage(format!("{file}: {e}")),
        other => CliError::Failure(format!("{file}: {other}")),
    })
}

fn load_spec(file: &str) -> Result<LoopSpec, CliError> {
    match load(file)? {
        InputFile::Loop(s) => Ok(s),
        InputFile::Algebra(_) => Err(CliError::Usage(format!("{file} is not a loop spec"))),
    }
}

fn parse_eps(s: &str) -> Result<Rational, CliError> {
    rational::parse(s).map_err(|e| CliError::Usage(format!("--eps: {e}")))
}

fn parse_levels(s: Option<&str>, spec: &LoopSpec) -> Result<TowerSelection, CliError> {
    match s {
        Some(s) => TowerSelection::parse(s).map_err(|e| CliError::Usage(format!("--levels: {e}"))),
        None => Ok(spec
            .selection()
            .cloned()
            .unwrap_or_else(|| TowerSelection::zeros(spec.len()))),
    }
}

fn print_json(out: &mut dyn Write, v: &impl serde::Serialize) -> Res {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("serializable")
    )?;
    Ok(())
}

fn cmd_validate(file: &str, json: bool, out: &mut dyn Write) -> Res {
    let (kind, dim) = match load(file)? {
        InputFile::Algebra(a) => {
            validate(&a)?;
            ("algebra", a.dim())
        }
        InputFile::Loop(s) => ("loop spec", s.len()),
    };
    if json {
        print_json(
            out,
            &json!({"valid": true, "kind": kind, "generators": dim}),
        )
    } else {
        writeln!(out, "valid {kind} with {dim} generators")?;
        Ok(())
    }
}

fn classification_json(alg: &LieAlgebra) -> Result<serde_json::Value, CliError> {
    let label = classify3(alg)?;
    let killing = signature(&killing_form(alg)?).map_err(LieError::from)?;
    Ok(json!({
        "label": label,
        "derived_dim": derived_subalgebra_dim(alg)?,
        "center_dim": center_dim(alg)?,
        "killing_signature": killing,
    }))
}

fn emit_classification(alg: &LieAlgebra, json: bool, out: &mut dyn Write) -> Res {
    let v = classification_json(alg)?;
    if json {
        print_json(out, &v)
    } else {
        let k = &v["killing_signature"];
        writeln!(out, "{}", v["label"].as_str().unwrap_or("other"))?;
        writeln!(
            out,
            "derived dim {}, center dim {}, Killing signature ({},{},{})",
            v["derived_dim"], v["center_dim"], k["positives"], k["negatives"], k["zeros"]
        )?;
        Ok(())
    }
}

fn cmd_classify(
    file: &str,
    eps: Option<&str>,
    levels: Option<&str>,
    json: bool,
    out: &mut dyn Write,
) -> Res {
    let alg = match load(file)? {
        InputFile::Algebra(a) => a,
        InputFile::Loop(spec) => factor_algebra(&spec, &parse_levels(levels, &spec)?)?,
    };
    let alg = match eps {
        Some(e) => alg.evaluate_at(&parse_eps(e)?)?,
        None if !alg.is_eps_free() => {
            return Err(CliError::Usage(
                "constants depend on eps; pass --eps".into(),
            ))
        }
        None => alg,
    };
    emit_classification(&alg, json, out)
}

fn cmd_contract(file: &str, weights: &str, json: bool, out: &mut dyn Write) -> Res {
    let alg = match load(file)? {
        InputFile::Algebra(a) => a,
        InputFile::Loop(_) => {
            return Err(CliError::Usage(format!("{file} is not a Lie algebra file")))
        }
    };
    let w = ContractionWeights::parse(weights)
        .map_err(|e| CliError::Usage(format!("--weights: {e}")))?;
    let c = contract(&alg, &w)?;
    if json {
        print_json(
            out,
            &json!({"weights": w.to_string(), "is_classic_iw": is_classic_iw(&w), "algebra": algebra_to_file(&c)}),
        )
    } else {
        writeln!(out, "weights {w}, classic IW: {}", is_classic_iw(&w))?;
        write!(out, "{c}")?;
        Ok(())
    }
}

fn cmd_quotient(
    file: &str,
    levels: Option<&str>,
    eps: Option<&str>,
    json: bool,
    out: &mut dyn Write,
) -> Res {
    let spec = load_spec(file)?;
    let sel = parse_levels(levels, &spec)?;
    let alg = factor_algebra(&spec, &sel)?;
    let evaluated = match eps {
        Some(e) => Some(alg.evaluate_at(&parse_eps(e)?)?),
        None => None,
    };
    if json {
        let mut v = json!({"levels": sel.levels(), "algebra": algebra_to_file(&alg)});
        if let (Some(e), Some(ev)) = (eps, &evaluated) {
            v["eps"] = json!(e);
            v["evaluated"] = serde_json::to_value(algebra_to_file(ev)).expect("serializable");
            v["classification"] = classification_json(ev)?;
        }
        print_json(out, &v)
    } else {
        writeln!(out, "levels {sel}")?;
        write!(out, "{alg}")?;
        if let (Some(e), Some(ev)) = (eps, &evaluated) {
            writeln!(out, "at eps = {e}:")?;
            write!(out, "{ev}")?;
            emit_classification(ev, false, out)?;
        }
        Ok(())
    }
}

fn cmd_selection(file: &str, levels: &str, json: bool, out: &mut dyn Write) -> Res {
    let spec = load_spec(file)?;
    let sel = parse_levels(Some(levels), &spec)?;
    check_selection(&spec, &sel)?;
    if json {
        print_json(out, &json!({"levels": sel.levels(), "closed": true}))
    } else {
        writeln!(out, "closed: {sel}")?;
        Ok(())
    }
}

fn emit_oracle(report: &OracleReport, json: bool, out: &mut dyn Write) -> Res {
    if json {
        print_json(out, report)?;
    } else {
        for r in &report.identities {
            writeln!(
                out,
                "{} {:<28} max_rel_residual {:.3e}",
                if r.pass { "PASS" } else { "FAIL" },
                r.name,
                r.max_rel_residual
            )?;
        }
        if let Some(rc) = &report.radial_coefficient {
            writeln!(
                out,
                "radial coefficient: m*alpha {:.3e}, m*beta {:.3e}, resolved {}",
                rc.m_alpha_max_rel_residual,
                rc.m_beta_max_rel_residual,
                rc.resolved.map_or("none".to_string(), |c| c.to_string())
            )?;
        }
    }
    match &report.first_failure {
        None => Ok(()),
        Some(f) => Err(CliError::Oracle(
            OracleError::IdentityFailed {
                name: f.name.clone(),
                point: f.point,
                residual: f.residual,
            }
            .to_string(),
        )),
    }
}

fn cmd_kepler(a: &KeplerArgs, json: bool, out: &mut dyn Write) -> Res {
    let usage = |e: OracleError| CliError::Usage(e.to_string());
    let p = KeplerParams::new(a.m, a.alpha, a.beta).map_err(usage)?;
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    let cfg = SuiteConfig {
        samples: a.samples,
        seed: a.seed,
        tol: a.tol,
        ..SuiteConfig::default()
    };
    let report = match &a.spec {
        None => run_identity_suite(&p, &cfg).map_err(usage)?,
        Some(file) => {
            let spec = load_spec(file)?;
            let names: Vec<String> = match &a.bind {
                Some(b) => b.split(',').map(|s| s.trim().to_string()).collect(),
                None => spec.generators().iter().map(|g| g.name.clone()).collect(),
            };
            let binding = names
                .iter()
                .map(|n| {
                    Observable::from_name(n)
                        .ok_or_else(|| CliError::Usage(format!("unknown observable {n:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            run_cross_check(&spec, &binding, &p, &cfg).map_err(usage)?
        }
    };
    emit_oracle(&report, json, out)
}

fn cmd_table1(json: bool, out: &mut dyn Write) -> Res {
    let t = demo_table1()?;
    if json {
        print_json(out, &t)?;
    } else {
        write!(out, "{}", t.to_table())?;
    }
    if !t.matches_expected() {
        return Err(CliError::Failure(
            "classification grid differs from the expected one".into(),
        ));
    }
    Ok(())
}

fn cmd_lorentz(json: bool, out: &mut dyn Write) -> Res {
    let r = demo_lorentz()?;
    if json {
        print_json(out, &r)?;
    } else {
        writeln!(out, "so(3,1) contracted with weights {}", r.weights)?;
        for (name, ok) in [
            ("matches e(3)", r.matches_e3),
            ("[B_i, B_j] = 0", r.boosts_commute),
            ("classic IW weights", r.is_classic_iw),
            (
                "zero weights leave so(3,1) unchanged",
                r.unweighted_is_identity,
            ),
            (
                "weights (1,0,0,0,0,0) undefined",
                r.rotation_weight_undefined,
            ),
            ("rotations close", r.weight_zero_span_closed),
            (
                "boosts form an abelian ideal",
                r.positive_span_abelian_ideal,
            ),
        ] {
            writeln!(out, "{} {name}", if ok { "ok  " } else { "FAIL" })?;
        }
    }
    if !r.pass {
        return Err(CliError::Failure("Lorentz contraction check failed".into()));
    }
    Ok(())
}

fn cmd_hysteresis(json: bool, out: &mut dyn Write) -> Res {
    let r = demo_hysteresis()?;
    if json {
        print_json(out, &r)?;
    } else {
        for (name, path) in [("A", &r.path_a), ("B", &r.path_b)] {
            writeln!(out, "path {name}")?;
            for p in path {
                writeln!(
                    out,
                    "  eps={:<6} beta={:<6} {:<3} {}",
                    p.eps, p.beta, p.family, p.label
                )?;
            }
        }
        writeln!(out, "origin: {} (A) vs {} (B)", r.origin_a, r.origin_b)?;
    }
    if !r.labels_differ {
        return Err(CliError::Failure("origin labels coincide".into()));
    }
    Ok(())
}
