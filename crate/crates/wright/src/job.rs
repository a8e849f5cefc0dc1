//! CLI job model: one normalized invocation, round-trippable through a flat
//! key=value config format, plus the execution turning a job into its
//! stdout payload.
//!
//! The config format is deliberately primitive (one `key=value` per line,
//! lists comma-separated, `#` comments) so any script can write it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeffs::solve_coefficients;
use crate::error::{Result, WrightError};
use crate::expansions::{asymptotic_eval, classify_sector, SectorConfig, TruncationSpec};
use crate::hp::{HPReal, RayPoint};
use crate::params::{derive_constants, ParamValue, WrightParams};
use crate::presets;
use crate::series::wright_eval;
use crate::stokes::{run_scan, scan_csv, sig10, Family, ScanConfig, StokesScanRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Eval,
    Coeffs,
    Scan,
    Table,
}

impl Subcommand {
    fn as_str(self) -> &'static str {
        match self {
            Subcommand::Eval => "eval",
            Subcommand::Coeffs => "coeffs",
            Subcommand::Scan => "scan",
            Subcommand::Table => "table",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "eval" => Ok(Subcommand::Eval),
            "coeffs" => Ok(Subcommand::Coeffs),
            "scan" => Ok(Subcommand::Scan),
            "table" => Ok(Subcommand::Table),
            _ => Err(WrightError::InvalidParams(format!(
                "unknown subcommand {:?}",
                s
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Asym,
    Auto,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Asym => "asym",
            Method::Auto => "auto",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "asym" => Ok(Method::Asym),
            "auto" => Ok(Method::Auto),
            _ => Err(WrightError::InvalidParams(format!("unknown method {:?}", s))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Plain,
    Csv,
    Json,
}

impl OutputFormat {
    fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Plain => "plain",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(OutputFormat::Plain),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(WrightError::InvalidParams(format!("unknown format {:?}", s))),
        }
    }
}

/// Where the Wright parameters come from: a named preset (`f1`, `f2`, `f3`,
/// `ml` with its a, b) or explicit parameter lists.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamSource {
    Preset {
        name: String,
        a: Option<ParamValue>,
        b: Option<ParamValue>,
    },
    Inline {
        alpha: Vec<ParamValue>,
        a: Vec<ParamValue>,
        beta: Vec<ParamValue>,
        b: Vec<ParamValue>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub subcommand: Subcommand,
    pub source: Option<ParamSource>,
    pub r: Option<ParamValue>,
    /// arg z grid in units of π
    pub theta_pi: Vec<ParamValue>,
    pub digits: Option<usize>,
    pub method: Method,
    pub j_max: Option<usize>,
    pub table_n: Option<u32>,
    pub format: OutputFormat,
}

impl JobConfig {
    pub fn new(subcommand: Subcommand) -> Self {
        JobConfig {
            subcommand,
            source: None,
            r: None,
            theta_pi: Vec::new(),
            digits: None,
            method: Method::Auto,
            j_max: None,
            table_n: None,
            format: OutputFormat::Plain,
        }
    }
}

/// Parses `p/q`, an integer, or a terminating decimal, always to an exact
/// rational so shell input never loses exactness.
pub fn parse_value(s: &str) -> Result<ParamValue> {
    let s = s.trim();
    let bad = || WrightError::InvalidParams(format!("cannot parse number {:?}", s));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(ParamValue::Exact(BigRational::new(p, q)));
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits: String = format!(
        "{}{}",
        if int_part == "-" || int_part == "+" || int_part.is_empty() {
            format!("{}0", int_part)
        } else {
            int_part.to_string()
        },
        frac_part
    );
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    if !frac_part.is_empty() && !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(ParamValue::Exact(BigRational::new(num, den)))
}

fn format_value(v: &ParamValue) -> String {
    match v {
        ParamValue::Exact(r) => {
            if r.denom().is_one() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        ParamValue::Approx(x) => format!("{:?}", x.to_f64()),
    }
}

fn format_list(vs: &[ParamValue]) -> String {
    vs.iter().map(format_value).collect::<Vec<_>>().join(",")
}

fn parse_list(s: &str) -> Result<Vec<ParamValue>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_value).collect()
}

impl JobConfig {
    /// Flat key=value rendering; `from_flat` inverts it exactly.
    pub fn to_flat(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        kv("subcommand", self.subcommand.as_str().to_string());
        match &self.source {
            Some(ParamSource::Preset { name, a, b }) => {
                kv("preset", name.clone());
                if let Some(a) = a {
                    kv("a", format_value(a));
                }
                if let Some(b) = b {
                    kv("b", format_value(b));
                }
            }
            Some(ParamSource::Inline { alpha, a, beta, b }) => {
                kv("alpha", format_list(alpha));
                kv("a", format_list(a));
                kv("beta", format_list(beta));
                kv("b", format_list(b));
            }
            None => {}
        }
        if let Some(r) = &self.r {
            kv("r", format_value(r));
        }
        if !self.theta_pi.is_empty() {
            kv("theta_pi", format_list(&self.theta_pi));
        }
        if let Some(d) = self.digits {
            kv("digits", d.to_string());
        }
        kv("method", self.method.as_str().to_string());
        if let Some(j) = self.j_max {
            kv("J", j.to_string());
        }
        if let Some(n) = self.table_n {
            kv("table", n.to_string());
        }
        kv("format", self.format.as_str().to_string());
        out
    }

    pub fn from_flat(text: &str) -> Result<JobConfig> {
        let mut sub = None;
        let mut preset: Option<String> = None;
        let mut alpha = None;
        let mut a_list: Option<Vec<ParamValue>> = None;
        let mut beta = None;
        let mut b_list: Option<Vec<ParamValue>> = None;
        let mut cfg = JobConfig::new(Subcommand::Eval);
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                WrightError::InvalidParams(format!("config line {}: missing '='", ln + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "subcommand" => sub = Some(Subcommand::parse(v)?),
                "preset" => preset = Some(v.to_string()),
                "alpha" => alpha = Some(parse_list(v)?),
                "a" => a_list = Some(parse_list(v)?),
                "beta" => beta = Some(parse_list(v)?),
                "b" => b_list = Some(parse_list(v)?),
                "r" => cfg.r = Some(parse_value(v)?),
                "theta_pi" => cfg.theta_pi = parse_list(v)?,
                "digits" => {
                    cfg.digits = Some(v.parse().map_err(|_| {
                        WrightError::InvalidParams(format!("bad digits {:?}", v))
                    })?)
                }
                "method" => cfg.method = Method::parse(v)?,
                "J" => {
                    cfg.j_max = Some(v.parse().map_err(|_| {
                        WrightError::InvalidParams(format!("bad J {:?}", v))
                    })?)
                }
                "table" => {
                    cfg.table_n = Some(v.parse().map_err(|_| {
                        WrightError::InvalidParams(format!("bad table number {:?}", v))
                    })?)
                }
                "format" => cfg.format = OutputFormat::parse(v)?,
                _ => {
                    return Err(WrightError::InvalidParams(format!(
                        "unknown config key {:?}",
                        k
                    )))
                }
            }
        }
        cfg.subcommand =
            sub.ok_or_else(|| WrightError::InvalidParams("config missing subcommand".into()))?;
        cfg.source = match (preset, alpha, beta) {
            (Some(name), None, None) => Some(ParamSource::Preset {
                name,
                a: a_list.and_then(|mut v| if v.len() == 1 { v.pop() } else { None }),
                b: b_list.and_then(|mut v| if v.len() == 1 { v.pop() } else { None }),
            }),
            (None, Some(alpha), beta) => Some(ParamSource::Inline {
                alpha,
                a: a_list.unwrap_or_default(),
                beta: beta.unwrap_or_default(),
                b: b_list.unwrap_or_default(),
            }),
            (None, None, Some(beta)) => Some(ParamSource::Inline {
                alpha: Vec::new(),
                a: a_list.unwrap_or_default(),
                beta,
                b: b_list.unwrap_or_default(),
            }),
            (None, None, None) => None,
            _ => {
                return Err(WrightError::InvalidParams(
                    "config mixes preset and inline parameters".into(),
                ))
            }
        };
        Ok(cfg)
    }
}

fn resolve_params(source: &ParamSource) -> Result<WrightParams> {
    match source {
        ParamSource::Preset { name, a, b } => match name.as_str() {
            "f1" => Family::F1.params(),
            "f2" => Family::F2.params(),
            "f3" => Family::F3.params(),
            "ml" => {
                let a = a.clone().ok_or_else(|| {
                    WrightError::InvalidParams("preset ml needs a".into())
                })?;
                let b = b.clone().ok_or_else(|| {
                    WrightError::InvalidParams("preset ml needs b".into())
                })?;
                crate::series::mittag_leffler_params(a, b)
            }
            _ => Err(WrightError::InvalidParams(format!(
                "unknown preset {:?}",
                name
            ))),
        },
        ParamSource::Inline { alpha, a, beta, b } => {
            if alpha.len() != a.len() {
                return Err(WrightError::InvalidParams(format!(
                    "alpha list has {} entries but a list has {}",
                    alpha.len(),
                    a.len()
                )));
            }
            if beta.len() != b.len() {
                return Err(WrightError::InvalidParams(format!(
                    "beta list has {} entries but b list has {}",
                    beta.len(),
                    b.len()
                )));
            }
            WrightParams::new(
                alpha.iter().cloned().zip(a.iter().cloned()).collect(),
                beta.iter().cloned().zip(b.iter().cloned()).collect(),
            )
        }
    }
}

/// Fixed-point rendering with `frac_digits` digits after the point; falls
/// back to scientific when the exponent is unwieldy.
fn positional(x: &HPReal, frac_digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let e10 = x.log10_abs_approx().floor() as i64;
    if e10 > 40 || e10 < -(frac_digits as i64) {
        return x.to_decimal_string(frac_digits.max(10));
    }
    let sig = (e10 + 1 + frac_digits as i64).max(1) as usize;
    let s = x.to_decimal_string(sig);
    // "d.dddde<exp>" -> positional
    let (mant, exp) = s.split_once('e').unwrap_or((s.as_str(), "0"));
    let exp: i64 = exp.parse().unwrap_or(0);
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1; // digits before the decimal point
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.push_str(&digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

fn run_eval(cfg: &JobConfig) -> Result<String> {
    let source = cfg
        .source
        .as_ref()
        .ok_or_else(|| WrightError::InvalidParams("eval needs parameters".into()))?;
    let params = resolve_params(source)?;
    let r = cfg
        .r
        .as_ref()
        .ok_or_else(|| WrightError::InvalidParams("eval needs --r".into()))?;
    if cfg.theta_pi.len() != 1 {
        return Err(WrightError::InvalidParams(
            "eval needs exactly one --theta-pi value".into(),
        ));
    }
    let digits = cfg.digits.unwrap_or(30);
    let d = digits + 10;
    let theta = &HPReal::pi(d) * &cfg.theta_pi[0].to_hp(d);
    let z = RayPoint::new(r.to_hp(d), theta);
    if !z.r.is_positive() {
        return Err(WrightError::InvalidParams("need r > 0".into()));
    }

    let dc = derive_constants(&params, 50)?;
    let method = match cfg.method {
        Method::Auto => {
            let k = dc.kappa.to_f64();
            let abs_z = if dc.kappa_zero || k <= 0.0 {
                0.0
            } else {
                k * (dc.h.to_f64() * z.r.to_f64()).powf(1.0 / k)
            };
            if abs_z >= 15.0 {
                Method::Asym
            } else {
                Method::Direct
            }
        }
        m => m,
    };

    let mut plan_line = None;
    let rep = match method {
        Method::Direct => wright_eval(&params, &z, digits)?,
        _ => {
            let sector = SectorConfig::default();
            let plan = classify_sector(&dc.kappa, &z.theta, &sector)?;
            plan_line = Some((format!("{}", plan), plan.on_stokes_line));
            asymptotic_eval(&params, &z, &TruncationSpec::default(), &sector)?
        }
    };

    match cfg.format {
        OutputFormat::Json => {
            let mut obj = serde_json::Map::new();
            obj.insert("re".into(), positional(&rep.value.re, digits).into());
            obj.insert("im".into(), positional(&rep.value.im, digits).into());
            obj.insert("est".into(), sig10(&rep.est_truncation_error).into());
            obj.insert("terms".into(), rep.terms_used.into());
            obj.insert("method".into(), method.as_str().into());
            if let Some((plan, on_line)) = &plan_line {
                obj.insert("plan".into(), plan.clone().into());
                obj.insert("on_stokes_line".into(), (*on_line).into());
            }
            Ok(format!("{}\n", serde_json::Value::Object(obj)))
        }
        _ => {
            let mut out = String::new();
            out.push_str(&positional(&rep.value.re, digits));
            out.push('\n');
            out.push_str(&positional(&rep.value.im, digits));
            out.push('\n');
            out.push_str(&format!("est {}\n", sig10(&rep.est_truncation_error)));
            out.push_str(&format!("terms {}\n", rep.terms_used));
            out.push_str(&format!("method {}\n", method.as_str()));
            if let Some((plan, on_line)) = &plan_line {
                out.push_str(&format!("plan {}\n", plan));
                if *on_line {
                    out.push_str("on_stokes_line true\n");
                }
            }
            Ok(out)
        }
    }
}

fn run_coeffs(cfg: &JobConfig) -> Result<String> {
    let j = cfg.j_max.unwrap_or(10);
    if j > crate::coeffs::MAX_COEFFS {
        return Err(WrightError::InvalidParams(format!(
            "J = {} exceeds the coefficient cap {}",
            j,
            crate::coeffs::MAX_COEFFS
        )));
    }
    let source = cfg
        .source
        .as_ref()
        .ok_or_else(|| WrightError::InvalidParams("coeffs needs parameters".into()))?;
    let params = resolve_params(source)?;
    let set = solve_coefficients(&params, j)?;
    let c_str = |i: usize| -> String {
        match &set.c_exact {
            Some(v) => {
                let r = &v[i];
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            None => set.c_real[i].to_decimal_string(30),
        }
    };
    match cfg.format {
        OutputFormat::Json => {
            let cs: Vec<serde_json::Value> = (1..=j).map(|i| c_str(i).into()).collect();
            let obj = serde_json::json!({
                "c": cs,
                "A0": set.a0.to_decimal_string(30),
            });
            Ok(format!("{}\n", obj))
        }
        _ => {
            let mut out = String::new();
            for i in 1..=j {
                out.push_str(&format!("{} {}\n", i, c_str(i)));
            }
            out.push_str(&format!("A0 {}\n", set.a0.to_decimal_string(30)));
            Ok(out)
        }
    }
}

fn scan_json(rows: &[StokesScanRow]) -> String {
    let arr: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "theta_over_pi": sig10(&r.theta_over_pi),
                "residual_abs": sig10(&r.residual_abs),
                "reference_abs": sig10(&r.reference_abs),
                "S_re": sig10(&r.s_re),
                "S_im": sig10(&r.s_im),
                "flags": r.flags,
            })
        })
        .collect();
    format!("{}\n", serde_json::Value::Array(arr))
}

fn preset_scan_config(name: &str) -> Result<ScanConfig> {
    match name {
        "f1" => Ok(presets::table2_config()),
        "f2" => Ok(presets::table3_config()),
        "f3" => Ok(presets::table4_config()),
        "ml" => Ok(presets::ml_smoothing_config()),
        _ => Err(WrightError::InvalidParams(format!(
            "unknown scan preset {:?}",
            name
        ))),
    }
}

fn run_scan_cmd(cfg: &JobConfig) -> Result<String> {
    let source = cfg
        .source
        .as_ref()
        .ok_or_else(|| WrightError::InvalidParams("scan needs a preset or parameters".into()))?;
    let mut scan = match source {
        ParamSource::Preset { name, .. } => preset_scan_config(name)?,
        ParamSource::Inline { .. } => {
            let params = resolve_params(source)?;
            let digits = cfg.digits.unwrap_or(40);
            ScanConfig {
                family: Family::Custom(params),
                modulus: HPReal::from_u64(1, digits),
                theta_grid: Vec::new(),
                target_digits: digits,
                reference: crate::stokes::ReferenceKind::LeadingExp { n: 0 },
                subtract: vec![crate::stokes::Subtraction::alg_opt(-1, 60)],
            }
        }
    };
    if let Some(d) = cfg.digits {
        scan.target_digits = d;
    }
    if let Some(r) = &cfg.r {
        scan.modulus = r.to_hp(scan.target_digits);
    }
    if !cfg.theta_pi.is_empty() {
        let pi = HPReal::pi(scan.target_digits);
        scan.theta_grid = cfg
            .theta_pi
            .iter()
            .map(|t| &pi * &t.to_hp(scan.target_digits))
            .collect();
    }
    if scan.theta_grid.is_empty() {
        return Err(WrightError::InvalidParams("scan needs a theta grid".into()));
    }
    let rows = run_scan(&scan)?;
    match cfg.format {
        OutputFormat::Json => Ok(scan_json(&rows)),
        _ => Ok(scan_csv(&rows)),
    }
}

fn run_table(cfg: &JobConfig) -> Result<String> {
    let n = cfg
        .table_n
        .ok_or_else(|| WrightError::InvalidParams("table needs --n".into()))?;
    match n {
        1 => {
            let set = solve_coefficients(&Family::F1.params()?, 10)?;
            let cs = set
                .c_exact
                .as_ref()
                .ok_or_else(|| WrightError::InvalidParams("table 1 needs exact mode".into()))?;
            let mut out = String::from("j,c_j\n");
            for (i, c) in cs.iter().enumerate().skip(1) {
                out.push_str(&format!("{},{}/{}\n", i, c.numer(), c.denom()));
            }
            Ok(out)
        }
        2 | 3 | 4 => {
            let scan = match n {
                2 => presets::table2_config(),
                3 => presets::table3_config(),
                _ => presets::table4_config(),
            };
            let rows = run_scan(&scan)?;
            match cfg.format {
                OutputFormat::Json => Ok(scan_json(&rows)),
                _ => Ok(scan_csv(&rows)),
            }
        }
        _ => Err(WrightError::InvalidParams(format!(
            "no table {} (valid: 1-4)",
            n
        ))),
    }
}

/// Executes a job and returns what should go to stdout.
pub fn run(cfg: &JobConfig) -> Result<String> {
    match cfg.subcommand {
        Subcommand::Eval => run_eval(cfg),
        Subcommand::Coeffs => run_coeffs(cfg),
        Subcommand::Scan => run_scan_cmd(cfg),
        Subcommand::Table => run_table(cfg),
    }
}
