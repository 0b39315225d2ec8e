//! Command-line front end.
//!
//! `run` executes a circuit file, `sweep` tabulates added noise over a
//! parameter range, `verify` compares the closed form against Monte Carlo,
//! and `paper` prints the headline numbers. Exit codes: 0 success, 1 usage,
//! diagnostics or failed verification, 2 I/O.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::dsl::{self, CompiledCircuit, DslError, ExecutionReport, Overrides};
use crate::engine::ModeSpec;
use crate::montecarlo::{estimate_added_noise, McConfig, RNG_ALGORITHM};
use crate::protocols::{
    added_noise_classical, added_noise_qnd, added_noise_squeezed, classical_noise_bound,
    gain_from_conditional_variance, is_quantum_regime, qnd_conditional_variance, victor_verify,
    ClassicalTeleporter, PhaseMode, ProtocolParams, SqueezedTeleporter, Teleporter,
};

/// Agreement band for `verify`, in standard errors.
pub const VERIFY_SIGMAS: f64 = 3.0;

/// Coefficients smaller than this print as zero.
pub const COEFFICIENT_SNAP: f64 = 1e-12;

/// Below this many trials `verify` warns that the comparison is underpowered.
pub const MIN_RECOMMENDED_TRIALS: u64 = 100;

#[derive(Debug, Parser)]
#[command(
    name = "cvteleport",
    version,
    about = "Continuous-variable teleportation simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute a .cvc circuit file and report its metrics.
    Run(RunArgs),
    /// Tabulate added noise over a parameter range.
    Sweep(SweepArgs),
    /// Compare the closed-form added noise with a Monte Carlo estimate.
    Verify(VerifyArgs),
    /// Print the headline numbers with their provenance.
    Paper(OutputArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub file: PathBuf,
    /// Override a `param`, e.g. `--set g=2` or `--set g=1/sqrt(3)`.
    #[arg(long = "set", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    pub set: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// qnd, qnd-vc, classical, squeezed, or a .cvc file.
    #[arg(long)]
    pub protocol: String,
    #[arg(long)]
    pub param: String,
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[arg(long)]
    pub steps: usize,
    /// Space the points geometrically.
    #[arg(long)]
    pub log: bool,
    #[arg(long = "set", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    pub set: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// qnd, qnd-vc, classical, squeezed, or a .cvc file.
    #[arg(long)]
    pub protocol: String,
    #[arg(long = "set", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    pub set: Vec<String>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, env = "CVTELEPORT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Diagnostics(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 2,
            _ => 1,
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let result = dispatch(cli.command, stderr).and_then(|(rendered, pass)| {
        match &rendered.out {
            Some(path) => write_file(path, &rendered.text)?,
            None => stdout
                .write_all(rendered.text.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
        }
        if pass {
            Ok(())
        } else {
            Err(CliError::VerificationFailed)
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Rendered report and where it goes.
struct Rendered {
    text: String,
    out: Option<PathBuf>,
}

/// The report is written even when verification fails.
fn dispatch(cmd: Command, stderr: &mut dyn Write) -> Result<(Rendered, bool), CliError> {
    match cmd {
        Command::Run(a) => Ok((cmd_run(&a)?, true)),
        Command::Sweep(a) => Ok((cmd_sweep(&a)?, true)),
        Command::Paper(a) => Ok((cmd_paper(&a)?, true)),
        Command::Verify(a) => cmd_verify(&a, stderr),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------- numbers

/// `%.12g`: twelve significant digits, trailing zeros dropped.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-5..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to the precision used in reports.
fn round12(v: f64) -> f64 {
    format_number(v).parse().unwrap_or(v)
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(round12(v)).map_or(Value::Null, Value::Number)
}

fn snap(v: f64) -> f64 {
    if v.abs() < COEFFICIENT_SNAP {
        0.0
    } else {
        v
    }
}

fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

/// Evaluates a plain number or a constant expression such as `1/sqrt(3)`.
pub fn eval_number(text: &str) -> Result<f64, CliError> {
    if let Ok(v) = text.trim().parse::<f64>() {
        return Ok(v);
    }
    let bad = |why: String| CliError::Usage(format!("cannot evaluate `{text}`: {why}"));
    let program = dsl::parse(&format!("param value = {text}")).map_err(|e| bad(e.to_string()))?;
    let report = dsl::execute(&program, &Overrides::new()).map_err(|e| bad(e.to_string()))?;
    Ok(report.params["value"])
}

fn parse_sets(sets: &[String]) -> Result<Overrides, CliError> {
    let mut out = Overrides::new();
    for s in sets {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects NAME=VALUE, got `{s}`")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(CliError::Usage(format!(
                "--set expects NAME=VALUE, got `{s}`"
            )));
        }
        if out.insert(k.to_string(), eval_number(v)?).is_some() {
            return Err(CliError::Usage(format!("`{k}` is set twice")));
        }
    }
    Ok(out)
}

// -------------------------------------------------------------- protocols

/// A protocol chosen on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Selector {
    Qnd,
    /// QND protocol parameterised by its conditional variance.
    QndVc,
    Classical,
    Squeezed,
    File(PathBuf),
}

impl Selector {
    pub fn parse(s: &str) -> Self {
        match s {
            "qnd" => Selector::Qnd,
            "qnd-vc" | "qnd_vc" | "qnd_from_vc" => Selector::QndVc,
            "classical" => Selector::Classical,
            "squeezed" => Selector::Squeezed,
            path => Selector::File(PathBuf::from(path)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Selector::Qnd => "qnd".into(),
            Selector::QndVc => "qnd-vc".into(),
            Selector::Classical => "classical".into(),
            Selector::Squeezed => "squeezed".into(),
            Selector::File(p) => p.display().to_string(),
        }
    }

    fn defaults(&self) -> &'static [(&'static str, f64)] {
        match self {
            Selector::Qnd => &[("g", 1.0), ("V_a", 1.0), ("V_b", 1.0)],
            Selector::QndVc => &[("V_c", 0.5), ("V_a", 1.0), ("V_b", 1.0)],
            Selector::Classical => &[("V_v", 1.0), ("V_w", 1.0)],
            Selector::Squeezed => &[("V1", 0.5), ("V2", 0.5)],
            Selector::File(_) => &[],
        }
    }
}

/// A protocol with its parameters resolved.
enum Prepared {
    Qnd(ProtocolParams),
    Classical(ClassicalTeleporter),
    Squeezed(SqueezedTeleporter),
    Circuit(Box<CompiledCircuit>),
}

struct Resolved {
    params: BTreeMap<String, f64>,
    prepared: Prepared,
    n_add: f64,
    v_c: Option<f64>,
}

impl Resolved {
    fn teleporter(&self) -> &(dyn Teleporter + Sync) {
        match &self.prepared {
            Prepared::Qnd(p) => p,
            Prepared::Classical(c) => c,
            Prepared::Squeezed(s) => s,
            Prepared::Circuit(c) => c.as_ref(),
        }
    }

    fn input(&self) -> ModeSpec {
        match &self.prepared {
            Prepared::Qnd(p) => p.input,
            Prepared::Circuit(c) => *c.input_spec(),
            _ => ModeSpec::vacuum(),
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Builtin parameters merged with overrides. `V` on the squeezed protocol
/// sets both variances.
fn builtin_params(
    sel: &Selector,
    overrides: &Overrides,
) -> Result<BTreeMap<String, f64>, CliError> {
    let mut params: BTreeMap<String, f64> = sel
        .defaults()
        .iter()
        .map(|(k, v)| (k.to_string(), *v))
        .collect();
    for (k, v) in overrides {
        if *sel == Selector::Squeezed && k == "V" {
            params.insert("V1".into(), *v);
            params.insert("V2".into(), *v);
        } else if params.contains_key(k) {
            params.insert(k.clone(), *v);
        } else {
            let known: Vec<&str> = sel.defaults().iter().map(|(k, _)| *k).collect();
            return Err(CliError::Usage(format!(
                "protocol {} has no parameter `{k}` (known: {})",
                sel.name(),
                known.join(", ")
            )));
        }
    }
    Ok(params)
}

fn resolve(
    sel: &Selector,
    source: Option<&str>,
    overrides: &Overrides,
) -> Result<Resolved, CliError> {
    if let Selector::File(path) = sel {
        let src = source.expect("circuit source loaded");
        let program = dsl::parse(src).map_err(|e| diagnostics(path, &e.into()))?;
        let report = dsl::execute(&program, overrides).map_err(|e| diagnostics(path, &e))?;
        let n_add = report.n_add.ok_or_else(|| {
            CliError::Usage(format!(
                "{}: the circuit does not report n_add",
                path.display()
            ))
        })?;
        let circuit = CompiledCircuit::new(program, overrides.clone())
            .map_err(|e| diagnostics(path, &e))?
            .with_name(sel.name());
        return Ok(Resolved {
            params: report.params,
            prepared: Prepared::Circuit(Box::new(circuit)),
            n_add,
            v_c: report.v_c,
        });
    }
    let params = builtin_params(sel, overrides)?;
    let p = |k: &str| params[k];
    let (prepared, n_add, v_c) = match sel {
        Selector::Qnd | Selector::QndVc => {
            let (g, v_c) = if *sel == Selector::Qnd {
                (p("g"), qnd_conditional_variance(p("g")))
            } else {
                (
                    gain_from_conditional_variance(p("V_c")).map_err(invalid)?,
                    p("V_c"),
                )
            };
            let n_add = added_noise_qnd(g, p("V_a"), p("V_b")).map_err(invalid)?;
            let a = ModeSpec::squeezed_x(p("V_a")).map_err(invalid)?;
            let b = ModeSpec::squeezed_y(p("V_b")).map_err(invalid)?;
            let proto = ProtocolParams::matched(g)
                .map_err(invalid)?
                .with_ancillas(a, b);
            (Prepared::Qnd(proto), n_add, Some(v_c))
        }
        Selector::Classical => {
            let thermal = |v: f64| ModeSpec::new(0.0, 0.0, v, v, 0.0).map_err(invalid);
            let c = ClassicalTeleporter {
                v: thermal(p("V_v"))?,
                w: thermal(p("V_w"))?,
            };
            let n_add = added_noise_classical(&c.v, &c.w);
            (Prepared::Classical(c), n_add, None)
        }
        Selector::Squeezed => {
            let n_add = added_noise_squeezed(p("V1"), p("V2")).map_err(invalid)?;
            let s = SqueezedTeleporter::new(p("V1"), p("V2")).map_err(invalid)?;
            (Prepared::Squeezed(s), n_add, None)
        }
        Selector::File(_) => unreachable!(),
    };
    Ok(Resolved {
        params,
        prepared,
        n_add,
        v_c,
    })
}

fn diagnostics(path: &Path, e: &DslError) -> CliError {
    let lines: Vec<String> = e
        .to_string()
        .lines()
        .map(|l| format!("{}:{l}", path.display()))
        .collect();
    CliError::Diagnostics(lines.join("\n"))
}

fn load_source(sel: &Selector) -> Result<Option<String>, CliError> {
    match sel {
        Selector::File(path) => read_file(path).map(Some),
        _ => Ok(None),
    }
}

// ---------------------------------------------------------------- run

fn cmd_run(a: &RunArgs) -> Result<Rendered, CliError> {
    let src = read_file(&a.file)?;
    let overrides = parse_sets(&a.set)?;
    let program = dsl::parse(&src).map_err(|e| diagnostics(&a.file, &e.into()))?;
    let report = dsl::execute(&program, &overrides).map_err(|e| diagnostics(&a.file, &e))?;
    let name = a.file.display().to_string();
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&run_json(&name, &report)),
        Format::Csv => run_csv(&name, &report),
    };
    Ok(Rendered {
        text,
        out: a.output.out.clone(),
    })
}

/// JSON report for one executed circuit.
pub fn run_json(protocol: &str, report: &ExecutionReport) -> Value {
    let params: Map<String, Value> = report
        .params
        .iter()
        .map(|(k, v)| (k.clone(), num(*v)))
        .collect();
    let reports: Vec<Value> = report
        .metrics
        .iter()
        .map(|m| json!({ "line": m.line, "metric": m.metric, "target": m.target, "value": num(m.value) }))
        .collect();
    json!({
        "protocol": protocol,
        "params": params,
        "metrics": {
            "n_add": opt_num(report.n_add),
            "v_c": opt_num(report.v_c),
            "mean_error_x": opt_num(report.mean_error_x),
            "mean_error_y": opt_num(report.mean_error_y),
        },
        "reports": reports,
        "coefficients": coefficients_json(report),
        "provenance": "derived",
    })
}

fn coefficients_json(report: &ExecutionReport) -> Vec<Value> {
    report
        .coefficients
        .iter()
        .map(|c| json!({ "mode": c.label, "cx": num(snap(c.cx)), "cy": num(snap(c.cy)) }))
        .collect()
}

fn run_csv(protocol: &str, report: &ExecutionReport) -> String {
    let mut rows = vec![
        "kind,name,value".to_string(),
        format!("protocol,{protocol},"),
    ];
    for (k, v) in &report.params {
        rows.push(format!("param,{k},{}", format_number(*v)));
    }
    let opt = |v: Option<f64>| v.map(format_number).unwrap_or_default();
    rows.push(format!("metric,n_add,{}", opt(report.n_add)));
    rows.push(format!("metric,v_c,{}", opt(report.v_c)));
    rows.push(format!("metric,mean_error_x,{}", opt(report.mean_error_x)));
    rows.push(format!("metric,mean_error_y,{}", opt(report.mean_error_y)));
    for m in &report.metrics {
        rows.push(format!(
            "report,{}:{}:{},{}",
            m.line,
            m.metric,
            m.target,
            format_number(m.value)
        ));
    }
    for c in &report.coefficients {
        rows.push(format!(
            "coefficient,{}.x,{}",
            c.label,
            format_number(snap(c.cx))
        ));
        rows.push(format!(
            "coefficient,{}.y,{}",
            c.label,
            format_number(snap(c.cy))
        ));
    }
    rows.push("provenance,derived,".into());
    lines(rows)
}

fn lines(rows: Vec<String>) -> String {
    let mut s = rows.join("\n");
    s.push('\n');
    s
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

// -------------------------------------------------------------- sweep

/// One sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param_value: f64,
    pub n_add_analytic: f64,
    pub v_c: Option<f64>,
    pub quantum_regime: bool,
}

/// Sample points of a sweep; the last point is exactly `to`.
pub fn sweep_points(from: f64, to: f64, steps: usize, log: bool) -> Result<Vec<f64>, CliError> {
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "--steps must be at least 2, got {steps}"
        )));
    }
    if !(from.is_finite() && to.is_finite() && from < to) {
        return Err(CliError::Usage(format!(
            "--from must be below --to, got {from} and {to}"
        )));
    }
    if log && from <= 0.0 {
        return Err(CliError::Usage(format!(
            "--log needs a positive --from, got {from}"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                to
            } else if log {
                from * (to / from).powf(i as f64 / last)
            } else {
                from + (to - from) * (i as f64 / last)
            }
        })
        .collect())
}

/// Evaluates a builtin or circuit protocol at each point of `param`.
pub fn sweep_rows(
    sel: &Selector,
    source: Option<&str>,
    param: &str,
    points: &[f64],
    fixed: &Overrides,
) -> Result<Vec<SweepRow>, CliError> {
    if fixed.contains_key(param) {
        return Err(CliError::Usage(format!(
            "`{param}` is both swept and fixed"
        )));
    }
    points
        .par_iter()
        .map(|&x| {
            let mut o = fixed.clone();
            o.insert(param.to_string(), x);
            let r = resolve(sel, source, &o)?;
            Ok(SweepRow {
                param_value: x,
                n_add_analytic: r.n_add,
                v_c: r.v_c,
                quantum_regime: is_quantum_regime(r.n_add),
            })
        })
        .collect()
}

fn cmd_sweep(a: &SweepArgs) -> Result<Rendered, CliError> {
    let sel = Selector::parse(&a.protocol);
    let source = load_source(&sel)?;
    let fixed = parse_sets(&a.set)?;
    let points = sweep_points(eval_number(&a.from)?, eval_number(&a.to)?, a.steps, a.log)?;
    let rows = sweep_rows(&sel, source.as_deref(), &a.param, &points, &fixed)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&rows),
        Format::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "param_value": num(r.param_value),
                        "n_add_analytic": num(r.n_add_analytic),
                        "v_c": opt_num(r.v_c),
                        "quantum_regime": r.quantum_regime,
                    })
                })
                .collect();
            pretty(&json!({
                "protocol": sel.name(),
                "param": a.param,
                "scale": if a.log { "log" } else { "linear" },
                "rows": body,
            }))
        }
    };
    Ok(Rendered {
        text,
        out: a.output.out.clone(),
    })
}

/// CSV with columns `param_value,n_add_analytic,v_c,quantum_regime`. `v_c`
/// is empty for protocols without a QND pair.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = vec!["param_value,n_add_analytic,v_c,quantum_regime".to_string()];
    out.extend(rows.iter().map(|r| {
        format!(
            "{},{},{},{}",
            format_number(r.param_value),
            format_number(r.n_add_analytic),
            r.v_c.map(format_number).unwrap_or_default(),
            r.quantum_regime
        )
    }));
    lines(out)
}

// ------------------------------------------------------------- verify

fn cmd_verify(a: &VerifyArgs, stderr: &mut dyn Write) -> Result<(Rendered, bool), CliError> {
    let sel = Selector::parse(&a.protocol);
    let source = load_source(&sel)?;
    let overrides = parse_sets(&a.set)?;
    let r = resolve(&sel, source.as_deref(), &overrides)?;
    if a.trials < MIN_RECOMMENDED_TRIALS {
        let _ = writeln!(
            stderr,
            "warning: {} trials is underpowered (at least {MIN_RECOMMENDED_TRIALS} recommended); running anyway",
            a.trials
        );
    }
    let input = r.input();
    let engine = victor_verify(r.teleporter(), &input, &PhaseMode::Averaged).map_err(invalid)?;
    let est = estimate_added_noise(r.teleporter(), &input, &McConfig::new(a.trials, a.seed))
        .map_err(invalid)?;
    let pass = est.agrees_with(r.n_add, VERIFY_SIGMAS);
    let params: Map<String, Value> = r.params.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
    let z = est.z_score(r.n_add);
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "protocol": sel.name(),
            "params": params,
            "analytic_n_add": num(r.n_add),
            "engine_n_add": num(engine),
            "mc": {
                "n_add": num(est.n_add_hat),
                "std_error": num(est.std_error),
                "trials": est.trials_used,
                "seed": a.seed,
                "rng": RNG_ALGORITHM,
            },
            "z_score": num(z),
            "sigmas": VERIFY_SIGMAS,
            "pass": pass,
        })),
        Format::Csv => lines(vec![
            "protocol,analytic_n_add,engine_n_add,mc_n_add,std_error,trials,seed,z_score,pass"
                .into(),
            format!(
                "{},{},{},{},{},{},{},{},{}",
                sel.name(),
                format_number(r.n_add),
                format_number(engine),
                format_number(est.n_add_hat),
                format_number(est.std_error),
                est.trials_used,
                a.seed,
                format_number(z),
                pass
            ),
        ]),
    };
    Ok((
        Rendered {
            text,
            out: a.output.out.clone(),
        },
        pass,
    ))
}

// -------------------------------------------------------------- paper

/// One line of the headline table.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadlineRow {
    pub quantity: &'static str,
    pub value: f64,
    /// `published` for values stated in the source, `derived` for values
    /// computed here from published inputs.
    pub provenance: &'static str,
}

pub fn headline_rows() -> Vec<HeadlineRow> {
    let from_vc = |v: f64| {
        let g = gain_from_conditional_variance(v).expect("valid conditional variance");
        added_noise_qnd(g, 1.0, 1.0).expect("valid gain")
    };
    vec![
        HeadlineRow {
            quantity: "classical_floor_n_add",
            value: classical_noise_bound(),
            provenance: "published",
        },
        HeadlineRow {
            quantity: "threshold_gain_g",
            value: 1.0 / 3f64.sqrt(),
            provenance: "published",
        },
        HeadlineRow {
            quantity: "threshold_v_c",
            value: qnd_conditional_variance(1.0 / 3f64.sqrt()),
            provenance: "published",
        },
        HeadlineRow {
            quantity: "n_add_at_v_c_0.45",
            value: from_vc(0.45),
            provenance: "derived",
        },
        HeadlineRow {
            quantity: "n_add_at_v_c_0.65",
            value: from_vc(0.65),
            provenance: "derived",
        },
        HeadlineRow {
            quantity: "n_add_at_v_c_0.70",
            value: from_vc(0.70),
            provenance: "derived",
        },
    ]
}

fn cmd_paper(a: &OutputArgs) -> Result<Rendered, CliError> {
    let rows = headline_rows();
    let text = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = vec!["quantity,value,provenance".to_string()];
            out.extend(
                rows.iter()
                    .map(|r| format!("{},{},{}", r.quantity, format_number(r.value), r.provenance)),
            );
            lines(out)
        }
        Format::Json => {
            let body: Vec<Value> = rows
                .iter()
                .map(|r| json!({ "quantity": r.quantity, "value": num(r.value), "provenance": r.provenance }))
                .collect();
            pretty(&json!({ "rows": body }))
        }
    };
    Ok(Rendered {
        text,
        out: a.out.clone(),
    })
}
