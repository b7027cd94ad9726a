//! The `bellkron` command line.
//!
//! ```text
//! bellkron moments --mean '[0,0]' --cov '[[2,0.5],[0.5,1]]' --order 4 --symmetrize --scalar 2,2
//! bellkron compose --f exp --g mgf.json --at 0 --order 4
//! bellkron bell --n 4 --k 2
//! bellkron verify --suite all --seed 42
//! ```
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 a size/arity cap was exceeded, 4 `f` and `g` have incompatible
//! dimensions.
//!
//! Settings resolve in this order, later winning: built-in defaults, the
//! `--config` JSON file, the `BELLKRON_SIZE_CAP` environment variable, and
//! the `--format` flag.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bell_poly::bell_multivariate;
use crate::error::Error;
use crate::faa_di_bruno::{apply_differential, faa_symmetrized, faa_total_derivative};
use crate::jet::composite_digits;
use crate::limits;
use crate::matrix::DenseMatrix;
use crate::matrix_calculus::{exp_scalar_jet, poly_jet, FdSteps, PolyFn};
use crate::normal_moments::{raw_moment_vector, scalar_moment, symmetrized_moment_vector, GaussianSpec};
use crate::partitions::{bell_coefficient, enumerate_bell_indices};
use crate::suites::{run_suite, Suite, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_CAP_EXCEEDED: i32 = 3;
pub const EXIT_DIMENSION_MISMATCH: i32 = 4;

/// Environment variable overriding [`RunConfig::size_cap`].
pub const SIZE_CAP_ENV: &str = "BELLKRON_SIZE_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Pretty,
}

/// Settings shared by every subcommand; the optional `--config` file holds
/// any subset of these fields as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub size_cap: usize,
    pub dense_cap: usize,
    pub sym_arity_cap: usize,
    pub fd_step_first: f64,
    pub fd_step_higher: f64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let steps = FdSteps::default();
        Self {
            size_cap: limits::DEFAULT_SIZE_CAP,
            dense_cap: limits::DEFAULT_DENSE_CAP,
            sym_arity_cap: limits::DEFAULT_SYM_ARITY_CAP,
            fd_step_first: steps.first,
            fd_step_higher: steps.higher,
            output_format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> crate::Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> crate::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.size_cap == 0 || self.dense_cap == 0 || self.sym_arity_cap == 0 {
            return Err(Error::invalid("config: caps must be positive"));
        }
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.fd_step_first) || !positive(self.fd_step_higher) {
            return Err(Error::invalid("config: finite-difference steps must be positive"));
        }
        Ok(())
    }

    pub fn fd_steps(&self) -> FdSteps {
        FdSteps {
            first: self.fd_step_first,
            higher: self.fd_step_higher,
        }
    }

    /// Installs the caps process-wide.
    pub fn apply(&self) {
        limits::set_size_cap(self.size_cap);
        limits::set_dense_cap(self.dense_cap);
        limits::set_sym_arity_cap(self.sym_arity_cap);
    }
}

#[derive(Debug, Parser)]
#[command(name = "bellkron", version, about = "Higher-order chain rules with Kronecker Bell polynomials")]
pub struct Cli {
    /// JSON file with any of the RunConfig fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moment vectors of a multivariate normal distribution.
    Moments(MomentsArgs),
    /// n-th derivative of a composite f(g(x)).
    Compose(ComposeArgs),
    /// Terms of a partial Bell polynomial, optionally evaluated.
    Bell(BellArgs),
    /// Seeded property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// Mean vector: a JSON array or a file containing one.
    #[arg(long)]
    pub mean: String,
    /// Covariance matrix: a JSON array of rows or a file containing one.
    #[arg(long)]
    pub cov: String,
    /// Moment order. Defaults to the total exponent of --scalar.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub symmetrize: bool,
    /// Comma-separated exponents, e.g. 2,2 for E[X1² X2²].
    #[arg(long, value_delimiter = ',')]
    pub scalar: Option<Vec<u32>>,
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    /// Outer function: `exp` or a PolyFn (JSON text or file).
    #[arg(long = "f")]
    pub f: String,
    /// Inner function: a PolyFn (JSON text or file).
    #[arg(long = "g")]
    pub g: String,
    /// Evaluation point: a JSON array, or a number used for every coordinate.
    #[arg(long)]
    pub at: String,
    #[arg(long)]
    pub order: usize,
    #[arg(long)]
    pub symmetrize: bool,
    /// Also apply the derivative to dx^{⊗n} (JSON array).
    #[arg(long)]
    pub dx: Option<String>,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Inner function to evaluate the polynomial with (requires --at).
    #[arg(long = "g", requires = "at")]
    pub g: Option<String>,
    #[arg(long, requires = "g")]
    pub at: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl clap::builder::ValueParserFactory for Suite {
    type Parser = clap::builder::ValueParser;

    fn value_parser() -> Self::Parser {
        clap::builder::ValueParser::new(|s: &str| s.parse::<Suite>().map_err(|e| e.to_string()))
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_cap() {
                EXIT_CAP_EXCEEDED
            } else {
                EXIT_INVALID_INPUT
            },
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Output of a successful command: the text to print and the exit code.
struct Report {
    text: String,
    code: i32,
}

/// Runs the CLI with explicit arguments and output streams; returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID_INPUT,
            };
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.text.as_bytes());
            report.code
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Ok(raw) = std::env::var(SIZE_CAP_ENV) {
        config.size_cap = raw
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&v| v > 0)
            .ok_or_else(|| Failure::invalid(format!("{SIZE_CAP_ENV} must be a positive integer, got {raw:?}")))?;
    }
    if let Some(format) = cli.format {
        config.output_format = format;
    }
    config.validate()?;
    Ok(config)
}

fn execute(cli: &Cli) -> CliResult<Report> {
    let config = resolve_config(cli)?;
    config.apply();
    let format = config.output_format;
    match &cli.command {
        Command::Moments(args) => cmd_moments(args, format),
        Command::Compose(args) => cmd_compose(args, format),
        Command::Bell(args) => cmd_bell(args, format),
        Command::Verify(args) => cmd_verify(args, format, config.fd_steps()),
    }
}

/// Parses `arg` as JSON, or failing that reads it as a file path.
fn json_arg(what: &str, arg: &str) -> CliResult<Value> {
    if let Ok(v) = serde_json::from_str::<Value>(arg) {
        return Ok(v);
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| Failure::invalid(format!("{what}: {arg:?} is neither JSON nor a readable file ({e})")))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{what}: invalid JSON in {arg}: {e}")))
}

fn typed_arg<T: serde::de::DeserializeOwned>(what: &str, arg: &str) -> CliResult<T> {
    serde_json::from_value(json_arg(what, arg)?).map_err(|e| Failure::invalid(format!("{what}: {e}")))
}

fn poly_arg(what: &str, arg: &str) -> CliResult<PolyFn> {
    let value = json_arg(what, arg)?;
    PolyFn::from_json(&value.to_string()).map_err(|e| Failure::invalid(format!("{what}: {e}")))
}

fn point_arg(what: &str, arg: &str, dim: usize) -> CliResult<Vec<f64>> {
    let point = match json_arg(what, arg)? {
        Value::Number(n) => vec![n.as_f64().unwrap_or(f64::NAN); dim],
        other => serde_json::from_value(other).map_err(|e| Failure::invalid(format!("{what}: {e}")))?,
    };
    if point.len() != dim {
        return Err(Failure::invalid(format!(
            "{what} has length {}, expected {dim}",
            point.len()
        )));
    }
    if point.iter().any(|v: &f64| !v.is_finite()) {
        return Err(Failure::invalid(format!("{what} must be finite")));
    }
    Ok(point)
}

fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// One-based digits of a composite index, comma separated.
fn digit_label(index: usize, base: usize, len: usize) -> String {
    composite_digits(index, base, len)
        .iter()
        .map(|d| (d + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_moments(args: &MomentsArgs, format: OutputFormat) -> CliResult<Report> {
    let mean: Vec<f64> = typed_arg("--mean", &args.mean)?;
    let cov: Vec<Vec<f64>> = typed_arg("--cov", &args.cov)?;
    let spec = GaussianSpec::from_rows(mean, &cov)?;
    let dim = spec.dim();

    if let Some(exponents) = &args.scalar {
        let total: usize = exponents.iter().map(|&e| e as usize).sum();
        if let Some(order) = args.order {
            if order != total {
                return Err(Failure::invalid(format!(
                    "--scalar exponents sum to {total}, but --order is {order}"
                )));
            }
        }
        let value = scalar_moment(&spec, exponents)?;
        let label = exponents.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let text = match format {
            OutputFormat::Json => render_json(&json!({
                "command": "moments",
                "dim": dim,
                "order": total,
                "symmetrized": true,
                "exponents": exponents,
                "value": value,
            })),
            OutputFormat::Csv => format!("exponents,value\n\"{label}\",{value}\n"),
            OutputFormat::Pretty => format!("E[X^({label})] = {value}\n"),
        };
        return Ok(Report { text, code: EXIT_OK });
    }

    let order = args
        .order
        .ok_or_else(|| Failure::invalid("--order is required unless --scalar is given"))?;
    let m = if args.symmetrize {
        symmetrized_moment_vector(&spec, order)?
    } else {
        raw_moment_vector(&spec, order)?
    };
    let text = match format {
        OutputFormat::Json => render_json(&json!({
            "command": "moments",
            "dim": dim,
            "order": order,
            "symmetrized": m.is_symmetrized(),
            "data": m.data(),
        })),
        OutputFormat::Csv => {
            let mut s = String::from("index,value\n");
            for (i, v) in m.data().iter().enumerate() {
                let _ = writeln!(s, "\"{}\",{v}", digit_label(i, dim, order));
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = format!(
                "moment vector: dim {dim}, order {order}, {}\n",
                if m.is_symmetrized() { "symmetrized" } else { "raw" }
            );
            for (i, v) in m.data().iter().enumerate() {
                let _ = writeln!(s, "  ({})  {v}", digit_label(i, dim, order));
            }
            s
        }
    };
    Ok(Report { text, code: EXIT_OK })
}

fn matrix_rows_csv(s: &mut String, kind: &str, m: &DenseMatrix, base: usize, order: usize) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let _ = writeln!(s, "{kind},{},\"{}\",{}", r + 1, digit_label(c, base, order), m[(r, c)]);
        }
    }
}

fn matrix_pretty(s: &mut String, m: &DenseMatrix) {
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  [{}]", cells.join(", "));
    }
}

fn cmd_compose(args: &ComposeArgs, format: OutputFormat) -> CliResult<Report> {
    let g = poly_arg("--g", &args.g)?;
    let f = if args.f == "exp" {
        None
    } else {
        Some(poly_arg("--f", &args.f)?)
    };
    let f_inputs = f.as_ref().map_or(1, PolyFn::n_x);
    if f_inputs != g.n_y() {
        return Err(Failure {
            code: EXIT_DIMENSION_MISMATCH,
            message: format!("f takes {f_inputs} inputs but g produces {} outputs", g.n_y()),
        });
    }
    if args.order == 0 {
        return Err(Failure::invalid("--order must be at least 1"));
    }
    let at = point_arg("--at", &args.at, g.n_x())?;
    let g_jet = poly_jet(&g, &at, args.order)?;
    let f_jet = match &f {
        None => exp_scalar_jet(g_jet.value()[0], args.order)?,
        Some(f) => poly_jet(f, g_jet.value(), args.order)?,
    };
    let d = if args.symmetrize {
        faa_symmetrized(args.order, &f_jet, &g_jet)?
    } else {
        faa_total_derivative(args.order, &f_jet, &g_jet)?
    };
    let differential = match &args.dx {
        Some(dx) => Some(apply_differential(&d, &point_arg("--dx", dx, g.n_x())?)?),
        None => None,
    };
    let m = d.matrix();
    let text = match format {
        OutputFormat::Json => {
            let mut v = json!({
                "command": "compose",
                "order": d.order(),
                "n_f": d.n_f(),
                "n_x": d.n_x(),
                "symmetrized": d.is_symmetrized(),
                "shape": [m.rows(), m.cols()],
                "matrix": m.to_rows(),
            });
            if let Some(diff) = &differential {
                v["differential"] = json!(diff);
            }
            render_json(&v)
        }
        OutputFormat::Csv => {
            let mut s = String::from("kind,row,index,value\n");
            matrix_rows_csv(&mut s, "matrix", m, d.n_x(), d.order());
            if let Some(diff) = &differential {
                for (r, v) in diff.iter().enumerate() {
                    let _ = writeln!(s, "differential,{},\"\",{v}", r + 1);
                }
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = format!(
                "order-{} derivative of f∘g, {}x{}{}\n",
                d.order(),
                m.rows(),
                m.cols(),
                if d.is_symmetrized() { ", symmetrized" } else { "" }
            );
            matrix_pretty(&mut s, m);
            if let Some(diff) = &differential {
                let cells: Vec<String> = diff.iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "differential: [{}]", cells.join(", "));
            }
            s
        }
    };
    Ok(Report { text, code: EXIT_OK })
}

fn factor_name(order: usize) -> String {
    if order == 1 {
        "g_x".into()
    } else {
        format!("g_{{x^{order}}}")
    }
}

fn cmd_bell(args: &BellArgs, format: OutputFormat) -> CliResult<Report> {
    let (n, k) = (args.n, args.k);
    if n == 0 || k == 0 || k > n {
        return Err(Failure::invalid(format!(
            "B_{{{n},{k}}} is the zero polynomial (it has no terms unless 1 <= k <= n)"
        )));
    }
    let terms = enumerate_bell_indices(n, k)?;
    let evaluated = match (&args.g, &args.at) {
        (Some(g), Some(at)) => {
            let g = poly_arg("--g", g)?;
            let at = point_arg("--at", at, g.n_x())?;
            let jet = poly_jet(&g, &at, n - k + 1)?;
            Some((bell_multivariate(n, k, &jet)?, g.n_x()))
        }
        _ => None,
    };
    let text = match format {
        OutputFormat::Json => {
            let list: Vec<Value> = terms
                .iter()
                .map(|t| {
                    json!({
                        "j": t.j(),
                        "coefficient": bell_coefficient(t).to_string(),
                        "factor_orders": t.factor_orders(),
                    })
                })
                .collect();
            let mut v = json!({ "command": "bell", "n": n, "k": k, "terms": list });
            if let Some((m, _)) = &evaluated {
                v["shape"] = json!([m.rows(), m.cols()]);
                v["matrix"] = json!(m.to_rows());
            }
            render_json(&v)
        }
        OutputFormat::Csv => {
            let mut s = String::from("j,coefficient,factor_orders\n");
            for t in &terms {
                let j: Vec<String> = t.j().iter().map(ToString::to_string).collect();
                let orders: Vec<String> = t.factor_orders().iter().map(ToString::to_string).collect();
                let _ = writeln!(s, "\"{}\",{},\"{}\"", j.join(","), bell_coefficient(t), orders.join(","));
            }
            if let Some((m, n_x)) = &evaluated {
                s.push_str("\nkind,row,index,value\n");
                matrix_rows_csv(&mut s, "matrix", m, *n_x, n);
            }
            s
        }
        OutputFormat::Pretty => {
            let body: Vec<String> = terms
                .iter()
                .map(|t| {
                    let chain: Vec<String> = t.factor_orders().into_iter().map(factor_name).collect();
                    format!("{} ({})", bell_coefficient(t), chain.join(" ⊗ "))
                })
                .collect();
            let mut s = format!("B_{{{n},{k}}} = {}\n", body.join(" + "));
            for t in &terms {
                let _ = writeln!(s, "  j = {t}  coefficient {}", bell_coefficient(t));
            }
            if let Some((m, _)) = &evaluated {
                let _ = writeln!(s, "value, {}x{}:", m.rows(), m.cols());
                matrix_pretty(&mut s, m);
            }
            s
        }
    };
    Ok(Report { text, code: EXIT_OK })
}

fn cmd_verify(args: &VerifyArgs, format: OutputFormat, fd_steps: FdSteps) -> CliResult<Report> {
    let report = run_suite(
        args.suite,
        SuiteOptions {
            seed: args.seed,
            fd_steps,
        },
    )?;
    let text = match format {
        OutputFormat::Json => {
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            v["command"] = json!("verify");
            render_json(&v)
        }
        OutputFormat::Csv => {
            let mut s = String::from("suite,check,passed,residual,tolerance,instances\n");
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    c.suite, c.name, c.passed, c.residual, c.tolerance, c.instances
                );
            }
            s
        }
        OutputFormat::Pretty => {
            let mut s = format!("suite {} (seed {})\n", report.suite, report.seed);
            for c in &report.checks {
                let _ = writeln!(
                    s,
                    "  {} {}/{}: residual {:e} (tolerance {:e}, {} instances)",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.suite,
                    c.name,
                    c.residual,
                    c.tolerance,
                    c.instances
                );
            }
            let _ = writeln!(s, "{}", if report.passed { "all checks passed" } else { "some checks FAILED" });
            s
        }
    };
    Ok(Report {
        text,
        code: if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("bellkron").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_defaults_and_validation() {
        let c = RunConfig::from_json("{}").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.size_cap, 10_000_000);
        assert_eq!(c.fd_steps(), FdSteps::default());
        let c = RunConfig::from_json(r#"{"output_format": "csv", "dense_cap": 64}"#).unwrap();
        assert_eq!((c.output_format, c.dense_cap), (OutputFormat::Csv, 64));
        assert!(RunConfig::from_json(r#"{"size_cap": 0}"#).is_err());
        assert!(RunConfig::from_json(r#"{"fd_step_first": -1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"unknown": 1}"#).is_err());
    }

    #[test]
    fn scalar_moment_query() {
        let (code, out, _) = run_args(&[
            "moments", "--mean", "[0,0]", "--cov", "[[2,0.5],[0.5,1]]", "--order", "4", "--symmetrize",
            "--scalar", "2,2", "--format", "json",
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], json!(2.5));
    }

    #[test]
    fn bell_term_listing() {
        let (code, out, _) = run_args(&["bell", "--n", "4", "--k", "2"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"][0]["j"], json!([1, 0, 1]));
        assert_eq!(v["terms"][0]["coefficient"], json!("4"));
        assert_eq!(v["terms"][1]["j"], json!([0, 2, 0]));
        assert_eq!(v["terms"][1]["coefficient"], json!("3"));
        let (code, _, err) = run_args(&["bell", "--n", "2", "--k", "3"]);
        assert_eq!(code, EXIT_INVALID_INPUT);
        assert!(err.contains("zero polynomial"));
    }

    #[test]
    fn pretty_bell() {
        let (code, out, _) = run_args(&["bell", "--n", "3", "--k", "2", "--format", "pretty"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("B_{3,2} = 3 (g_x ⊗ g_{x^2})"), "{out}");
    }

    #[test]
    fn parse_errors_exit_two() {
        assert_eq!(run_args(&["moments"]).0, EXIT_INVALID_INPUT);
        assert_eq!(run_args(&["verify", "--suite", "bogus"]).0, EXIT_INVALID_INPUT);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn digit_labels_are_one_based() {
        assert_eq!(digit_label(6, 2, 4), "1,2,2,1");
        assert_eq!(digit_label(0, 3, 2), "1,1");
    }
}
