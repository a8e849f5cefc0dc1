//! Thin CLI over the library: eval / coeffs / scan / table.
//!
//! Exit codes: 0 ok, 2 invalid parameters or usage, 3 higher-order pole
//! collision, 4 precision exhausted. Data goes to stdout (or --out);
//! diagnostics and the version banner go to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wright::job::{self, JobConfig, Method, OutputFormat, ParamSource};
use wright::WrightError;

#[derive(Parser)]
#[command(name = "wright", version, about = "Wright function evaluation and exponential asymptotics", disable_version_flag = false)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate pΨq at z = r·e^{iπ·theta_pi}
    Eval(EvalArgs),
    /// Exact expansion coefficients c_1..c_J and A0
    Coeffs(CoeffsArgs),
    /// Stokes-multiplier θ sweep, CSV/JSON
    Scan(ScanArgs),
    /// Reproduce a bundled table (1-4)
    Table(TableArgs),
}

/// Parameter-source flags shared by eval/coeffs/scan. Exactly one source:
/// a config file, a preset, or inline lists.
#[derive(Args)]
struct SourceArgs {
    /// comma-separated upper α list, entries as p/q or decimals
    #[arg(long)]
    alpha: Option<String>,
    /// comma-separated upper a list (or the ml preset's a)
    #[arg(long)]
    a: Option<String>,
    /// comma-separated lower β list
    #[arg(long)]
    beta: Option<String>,
    /// comma-separated lower b list (or the ml preset's b)
    #[arg(long)]
    b: Option<String>,
    /// preset family: f1 | f2 | f3 | ml
    #[arg(long)]
    preset: Option<String>,
    /// Mittag-Leffler shorthand: --ml a,b
    #[arg(long)]
    ml: Option<String>,
    /// flat key=value job file replacing all other flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    r: Option<String>,
    /// arg z in units of π
    #[arg(long = "theta-pi")]
    theta_pi: Option<String>,
    #[arg(long)]
    digits: Option<usize>,
    /// direct | asym | auto
    #[arg(long, default_value = "auto")]
    method: String,
    /// plain | json
    #[arg(long, default_value = "plain")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoeffsArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long = "J")]
    j: Option<usize>,
    /// plain | json
    #[arg(long, default_value = "plain")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    r: Option<String>,
    /// comma-separated grid of arg z in units of π
    #[arg(long = "theta-pi")]
    theta_pi: Option<String>,
    #[arg(long)]
    digits: Option<usize>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// table number 1-4
    #[arg(long)]
    n: u32,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_source(s: &SourceArgs) -> Result<Option<ParamSource>, WrightError> {
    let inline_given = s.alpha.is_some() || s.beta.is_some();
    let sources = [s.preset.is_some(), s.ml.is_some(), inline_given]
        .iter()
        .filter(|&&x| x)
        .count();
    if sources > 1 {
        return Err(WrightError::InvalidParams(
            "choose one parameter source: --preset, --ml, or --alpha/--a/--beta/--b".into(),
        ));
    }
    if let Some(ml) = &s.ml {
        let (a, b) = ml.split_once(',').ok_or_else(|| {
            WrightError::InvalidParams("--ml wants a,b".into())
        })?;
        return Ok(Some(ParamSource::Preset {
            name: "ml".into(),
            a: Some(job::parse_value(a)?),
            b: Some(job::parse_value(b)?),
        }));
    }
    if let Some(name) = &s.preset {
        return Ok(Some(ParamSource::Preset {
            name: name.clone(),
            a: s.a.as_deref().map(job::parse_value).transpose()?,
            b: s.b.as_deref().map(job::parse_value).transpose()?,
        }));
    }
    if inline_given || s.a.is_some() || s.b.is_some() {
        let list = |v: &Option<String>| -> Result<Vec<_>, WrightError> {
            match v {
                Some(text) => text.split(',').map(job::parse_value).collect(),
                None => Ok(Vec::new()),
            }
        };
        return Ok(Some(ParamSource::Inline {
            alpha: list(&s.alpha)?,
            a: list(&s.a)?,
            beta: list(&s.beta)?,
            b: list(&s.b)?,
        }));
    }
    Ok(None)
}

/// Loads a full job from --config, rejecting any competing inline flags.
fn from_config(
    path: &PathBuf,
    sub: job::Subcommand,
    others_given: bool,
) -> Result<JobConfig, WrightError> {
    if others_given {
        return Err(WrightError::InvalidParams(
            "--config replaces inline parameter flags; give one or the other".into(),
        ));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| WrightError::InvalidParams(format!("cannot read {:?}: {}", path, e)))?;
    let cfg = JobConfig::from_flat(&text)?;
    if cfg.subcommand != sub {
        return Err(WrightError::InvalidParams(format!(
            "config is for subcommand {:?}, invoked as {:?}",
            cfg.subcommand, sub
        )));
    }
    Ok(cfg)
}

fn build_job(cmd: &Cmd) -> Result<(JobConfig, Option<PathBuf>), WrightError> {
    match cmd {
        Cmd::Eval(a) => {
            if let Some(path) = &a.source.config {
                let given = a.source.preset.is_some()
                    || a.source.ml.is_some()
                    || a.source.alpha.is_some()
                    || a.r.is_some()
                    || a.theta_pi.is_some();
                return Ok((from_config(path, job::Subcommand::Eval, given)?, a.out.clone()));
            }
            let mut cfg = JobConfig::new(job::Subcommand::Eval);
            cfg.source = parse_source(&a.source)?;
            cfg.r = a.r.as_deref().map(job::parse_value).transpose()?;
            if let Some(t) = &a.theta_pi {
                cfg.theta_pi = t.split(',').map(job::parse_value).collect::<Result<_, _>>()?;
            }
            cfg.digits = a.digits;
            cfg.method = match a.method.as_str() {
                "direct" => Method::Direct,
                "asym" => Method::Asym,
                "auto" => Method::Auto,
                m => {
                    return Err(WrightError::InvalidParams(format!(
                        "unknown method {:?}",
                        m
                    )))
                }
            };
            cfg.format = parse_format(&a.format)?;
            Ok((cfg, a.out.clone()))
        }
        Cmd::Coeffs(a) => {
            if let Some(path) = &a.source.config {
                let given =
                    a.source.preset.is_some() || a.source.ml.is_some() || a.source.alpha.is_some();
                return Ok((
                    from_config(path, job::Subcommand::Coeffs, given)?,
                    a.out.clone(),
                ));
            }
            let mut cfg = JobConfig::new(job::Subcommand::Coeffs);
            cfg.source = parse_source(&a.source)?;
            cfg.j_max = a.j;
            cfg.format = parse_format(&a.format)?;
            Ok((cfg, a.out.clone()))
        }
        Cmd::Scan(a) => {
            if let Some(path) = &a.source.config {
                let given = a.source.preset.is_some()
                    || a.source.ml.is_some()
                    || a.source.alpha.is_some()
                    || a.r.is_some()
                    || a.theta_pi.is_some();
                return Ok((from_config(path, job::Subcommand::Scan, given)?, a.out.clone()));
            }
            let mut cfg = JobConfig::new(job::Subcommand::Scan);
            cfg.source = parse_source(&a.source)?;
            cfg.r = a.r.as_deref().map(job::parse_value).transpose()?;
            if let Some(t) = &a.theta_pi {
                cfg.theta_pi = t.split(',').map(job::parse_value).collect::<Result<_, _>>()?;
            }
            cfg.digits = a.digits;
            cfg.format = parse_format(&a.format)?;
            Ok((cfg, a.out.clone()))
        }
        Cmd::Table(a) => {
            let mut cfg = JobConfig::new(job::Subcommand::Table);
            cfg.table_n = Some(a.n);
            cfg.format = parse_format(&a.format)?;
            Ok((cfg, a.out.clone()))
        }
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, WrightError> {
    match s {
        "plain" => Ok(OutputFormat::Plain),
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err(WrightError::InvalidParams(format!("unknown format {:?}", s))),
    }
}

fn exit_code_for(e: &WrightError) -> u8 {
    match e {
        WrightError::HigherOrderPole { .. } => 3,
        WrightError::PrecisionExhausted { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("wright {}", env!("CARGO_PKG_VERSION"));
    let (cfg, out_path) = match build_job(&cli.cmd) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(exit_code_for(&e));
        }
    };
    match job::run(&cfg) {
        Ok(payload) => {
            if let Some(path) = out_path {
                if let Err(e) = std::fs::write(&path, payload) {
                    eprintln!("error: cannot write {:?}: {}", path, e);
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", payload);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
