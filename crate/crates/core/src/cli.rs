//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on a computation error, 2 on a usage error.
//! Every failure prints exactly one line to the error stream.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, BoundKind, BoundReport};
use crate::error::{Error, Result};
use crate::harness::{
    asymptotic_range, default_exponent_grid, fit_rate, read_sweep_csv, select_exponent, sweep,
    write_fits_csv, write_sweep_csv, Field, FitResult, RateModel, SweepConfig,
};
use crate::rules::{scaling_factor, RuleKind};
use crate::weights::{StripDomain, WeightSpec};

#[derive(Debug, Parser)]
#[command(
    name = "hardy-quad",
    version,
    about = "Quadrature rules on the real line and worst-case error bounds in weighted Hardy spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the nodes and weights of a rule.
    Nodes(NodesArgs),
    /// Evaluate one bound.
    Bound(BoundArgs),
    /// Sweep rule sizes and tabulate bounds and empirical errors.
    Sweep(SweepArgs),
    /// Fit a decay rate to a column of a sweep CSV.
    Fit(FitArgs),
    /// Check a weight specification (and optionally a scaling constant) against a strip.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Trap,
    Gl,
    Cc,
    Gh,
}

impl From<RuleArg> for RuleKind {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Trap => RuleKind::Trapezoidal,
            RuleArg::Gl => RuleKind::GaussLegendreScaled,
            RuleArg::Cc => RuleKind::ClenshawCurtisScaled,
            RuleArg::Gh => RuleKind::GaussHermite,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Strip half-width d.
    #[arg(long = "d", default_value_t = 1.0)]
    d: f64,
    /// Weight, e.g. `se:beta=1,rho=2` or `de:beta1=1,beta2=1,gamma=1`.
    #[arg(long, default_value = "se:beta=1,rho=1")]
    weight: WeightSpec,
    /// Output path, `-` for standard output.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SizeArgs {
    /// Node count (gl, cc, gh).
    #[arg(long)]
    n: Option<usize>,
    /// Half size of the trapezoidal rule, n = 2m + 1.
    #[arg(long)]
    m: Option<usize>,
    /// Scaling constant for gl and cc.
    #[arg(long = "L")]
    l: Option<f64>,
}

#[derive(Debug, Args)]
struct NodesArgs {
    #[arg(long, value_enum)]
    rule: RuleArg,
    #[command(flatten)]
    size: SizeArgs,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// prop22, thm31, thm32, cor41, cor42, cor43, sugihara, tail, bernstein or traprate.
    #[arg(long)]
    kind: BoundKind,
    #[arg(long, value_enum)]
    rule: Option<RuleArg>,
    #[command(flatten)]
    size: SizeArgs,
    /// Truncation half-width for tail and bernstein; derived from n and L when absent.
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long = "rel-tol", default_value_t = 1e-10)]
    rel_tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    rule: RuleArg,
    /// Comma-separated node counts (gl, cc, gh).
    #[arg(long = "n-list", value_delimiter = ',')]
    n_list: Vec<usize>,
    /// Comma-separated trapezoidal half sizes.
    #[arg(long = "m-list", value_delimiter = ',')]
    m_list: Vec<usize>,
    /// Scaling constant for gl and cc.
    #[arg(long = "L")]
    l: Option<f64>,
    #[arg(long = "rel-tol", default_value_t = 1e-10)]
    rel_tol: f64,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Sweep CSV to read.
    #[arg(long)]
    input: PathBuf,
    /// Column to fit, e.g. `log_prop22` or `err_gauss`.
    #[arg(long, default_value = "log_prop22")]
    field: Field,
    /// `sqrt_n`, `sqrt_2n_plus_1`, `n_over_log_n`, `pow_se:rho=R`, `power:p=P` or `best_power`.
    #[arg(long)]
    model: String,
    /// Keep the two smallest sizes instead of discarding them.
    #[arg(long = "keep-all")]
    keep_all: bool,
    #[arg(long, default_value = "-")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long = "d", default_value_t = 1.0)]
    d: f64,
    #[arg(long)]
    weight: WeightSpec,
    /// Scaling constant to check against the DE condition gamma*L >= 1.
    #[arg(long = "L")]
    l: Option<f64>,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn open_out<'a>(path: &PathBuf, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(stdout))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn write_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn domain(d: f64) -> std::result::Result<StripDomain, Failure> {
    StripDomain::new(d).map_err(|e| usage(e.to_string()))
}

fn rule_size(kind: RuleKind, size: &SizeArgs) -> std::result::Result<usize, Failure> {
    match kind {
        RuleKind::Trapezoidal => size.m.ok_or_else(|| usage("--rule trap needs --m")),
        _ => size.n.ok_or_else(|| usage(format!("--rule {kind} needs --n"))),
    }
}

#[derive(Serialize)]
struct RuleJson<'a> {
    kind: &'a str,
    nodes: &'a [f64],
    weights: &'a [f64],
    xi_min: f64,
}

fn cmd_nodes(a: NodesArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let kind = RuleKind::from(a.rule);
    let dom = domain(a.common.d)?;
    let size = rule_size(kind, &a.size)?;
    let rule = crate::harness::build_rule(kind, &dom, &a.common.weight, size, a.size.l)?;
    let mut out = open_out(&a.common.out, stdout)?;
    match a.format {
        Format::Csv => rule.write_csv(&mut out)?,
        Format::Json => write_json(
            &RuleJson {
                kind: kind.tag(),
                nodes: rule.nodes(),
                weights: rule.weights(),
                xi_min: rule.meta().xi_min,
            },
            &mut out,
        )?,
    }
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn cmd_bound(a: BoundArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let dom = domain(a.common.d)?;
    let w = a.common.weight;
    let rule_kind = a.rule.map(RuleKind::from);
    let need_rule = || rule_kind.ok_or_else(|| usage(format!("--kind {} needs --rule", a.kind)));
    let need_n = || a.size.n.ok_or_else(|| usage(format!("--kind {} needs --n", a.kind)));
    let need_m = || a.size.m.ok_or_else(|| usage(format!("--kind {} needs --m", a.kind)));
    let total_n = || match (a.size.n, a.size.m) {
        (Some(n), _) => Ok(n),
        (None, Some(m)) => Ok(2 * m + 1),
        _ => Err(usage(format!("--kind {} needs --n or --m", a.kind))),
    };
    let truncation = || -> std::result::Result<f64, Failure> {
        match a.t {
            Some(t) => Ok(t),
            None => {
                let l = a.size.l.ok_or_else(|| usage(format!("--kind {} needs --T or --L", a.kind)))?;
                Ok(scaling_factor(&w, need_n()?, l)?)
            }
        }
    };
    let report: BoundReport = match a.kind {
        BoundKind::Prop22 | BoundKind::Thm31 | BoundKind::Thm32 => {
            let kind = need_rule()?;
            let size = rule_size(kind, &a.size)?;
            let rule = crate::harness::build_rule(kind, &dom, &w, size, a.size.l)?;
            match a.kind {
                BoundKind::Prop22 => bounds::lower_bound_prop22(rule.nodes(), &dom, &w, a.rel_tol)?,
                BoundKind::Thm31 => bounds::lower_bound_thm31(rule.nodes(), &dom, &w)?,
                _ => bounds::lower_bound_thm32(rule.nodes(), &dom, &w)?,
            }
        }
        BoundKind::Cor41 => bounds::lower_bound_cor41(&dom, &w, need_m()?)?,
        BoundKind::Cor42 => {
            let l = a.size.l.ok_or_else(|| usage("--kind cor42 needs --L"))?;
            bounds::lower_bound_cor42(&dom, &w, need_n()?, l, need_rule()?)?
        }
        BoundKind::Cor43 => bounds::lower_bound_cor43(&dom, &w, need_n()?)?,
        BoundKind::SugiharaUniversal => bounds::universal_lower_sugihara(&dom, &w, total_n()?)?,
        BoundKind::UpperTail => bounds::upper_bound_tail(&dom, &w, truncation()?)?,
        BoundKind::UpperBernsteinRate => {
            bounds::upper_bound_bernstein_rate(&dom, truncation()?, need_n()?, need_rule()?)?
        }
        BoundKind::UpperTrapRate => bounds::upper_bound_trap_rate(&dom, &w, total_n()?)?,
    };
    let mut out = open_out(&a.common.out, stdout)?;
    write_json(&report, &mut out)?;
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn cmd_sweep(a: SweepArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let kind = RuleKind::from(a.rule);
    let sizes = match kind {
        RuleKind::Trapezoidal if !a.m_list.is_empty() => a.m_list,
        RuleKind::Trapezoidal => return Err(usage("--rule trap needs --m-list")),
        _ if !a.n_list.is_empty() => a.n_list,
        _ => return Err(usage(format!("--rule {kind} needs --n-list"))),
    };
    if sizes.windows(2).any(|p| p[0] >= p[1]) {
        return Err(usage("size list must be strictly increasing"));
    }
    let cfg = SweepConfig {
        rule: kind,
        weight: a.common.weight,
        domain: domain(a.common.d)?,
        sizes,
        l: a.l,
        rel_tol: a.rel_tol,
    };
    let records = sweep(&cfg)?;
    let mut out = open_out(&a.common.out, stdout)?;
    match a.format {
        Format::Csv => write_sweep_csv(&records, &mut out)?,
        Format::Json => {
            let rows: Vec<serde_json::Value> = records
                .iter()
                .map(|r| {
                    let enc = |v: f64| {
                        if v == f64::NEG_INFINITY {
                            serde_json::Value::from("-inf")
                        } else {
                            serde_json::Value::from(v)
                        }
                    };
                    serde_json::json!({
                        "n": r.n,
                        "rule": r.rule.tag(),
                        "weight": r.weight_tag,
                        "log_prop22": enc(r.log_prop22),
                        "log_thm31": enc(r.log_thm31),
                        "log_thm32": enc(r.log_thm32),
                        "log_special": r.log_specialized.map(enc),
                        "log_upper": r.log_upper_rate.map(enc),
                        "errors": r.empirical_log_errors.iter()
                            .map(|(k, v)| (k.clone(), enc(*v)))
                            .collect::<serde_json::Map<_, _>>(),
                    })
                })
                .collect();
            write_json(&rows, &mut out)?
        }
    }
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn cmd_fit(a: FitArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let records = read_sweep_csv(File::open(&a.input).map_err(Error::from)?)?;
    let used = if a.keep_all { &records[..] } else { asymptotic_range(&records) };
    let fit: FitResult = if a.model == "best_power" {
        select_exponent(used, &a.field, &default_exponent_grid())?
    } else {
        let model: RateModel = a.model.parse().map_err(|e: Error| usage(e.to_string()))?;
        fit_rate(used, &a.field, model)?
    };
    let mut out = open_out(&a.out, stdout)?;
    match a.format {
        Format::Json => write_json(&fit, &mut out)?,
        Format::Csv => write_fits_csv(&[fit], &mut out)?,
    }
    out.flush().map_err(Error::from)?;
    Ok(())
}

fn cmd_validate(a: ValidateArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let dom = domain(a.d)?;
    a.weight.validate(&dom)?;
    if let Some(l) = a.l {
        scaling_factor(&a.weight, 2, l)?;
    }
    writeln!(stdout, "ok {} d={}", a.weight, a.d).map_err(Error::from)?;
    Ok(())
}

/// Parses `args` (program name first) and runs the chosen subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("usage error");
            let _ = writeln!(stderr, "{line}");
            return 2;
        }
    };
    let result = match cli.command {
        Command::Nodes(a) => cmd_nodes(a, stdout),
        Command::Bound(a) => cmd_bound(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Fit(a) => cmd_fit(a, stdout),
        Command::Validate(a) => cmd_validate(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(stderr, "{e}");
            1
        }
    }
}
