//! Command-line front end: sample built-in test functions or ingest CSV
//! data, run refinement and analysis pipelines, and emit CSV curves and
//! JSON reports.
//!
//! Every option can also come from a JSON config file (`--config`);
//! flags override file values, file values override the documented
//! defaults. Identical configuration, including the seed, produces
//! byte-identical outputs.

use crate::analysis;
use crate::error::{Error, Result};
use crate::grid::{BoundaryPolicy, SampledCurve};
use crate::samplers::Builtin;
use crate::schemes::{refine_to_level, SchemeKind};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "subdiv", version, about = "Subdivision curve refinement and analysis")]
pub struct Cli {
    /// JSON config file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refine input data and write the curve as CSV `x,value`.
    Refine(RefineArgs),
    /// Per-level Hoelder-exponent estimates, written as JSON.
    Regularity(RegularityArgs),
    /// Grid-refinement error study for a built-in sampler, written as JSON.
    Order(OrderArgs),
    /// Overshoot and far-field error on discontinuous data, JSON plus
    /// two comparison curves.
    Gibbs(GibbsArgs),
    /// Perturbation amplification across levels, written as JSON.
    Stability(StabilityArgs),
    /// Refine the same input with two schemes and write the aligned
    /// curves as CSV.
    Compare(CompareArgs),
}

#[derive(Debug, Args, Default)]
pub struct RefineArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    /// Sampling interval `A,B` for built-in functions.
    #[arg(long, value_parser = parse_interval)]
    pub domain: Option<(f64, f64)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct RegularityArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    /// Difference order: 1, 2 or `both`.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub jmin: Option<u32>,
    #[arg(long)]
    pub jmax: Option<u32>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct OrderArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub builtin: Option<String>,
    /// Comma-separated spacings, e.g. `0.03125,0.015625`.
    #[arg(long, value_delimiter = ',')]
    pub h_list: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_interval)]
    pub domain: Option<(f64, f64)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct GibbsArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long, value_parser = parse_interval)]
    pub domain: Option<(f64, f64)>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Prefix for the two comparison-curve CSV files.
    #[arg(long)]
    pub curves_out: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct StabilityArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_parser = parse_interval)]
    pub domain: Option<(f64, f64)>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub trials: Option<u32>,
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Default)]
pub struct CompareArgs {
    #[arg(long)]
    pub scheme_a: Option<String>,
    #[arg(long)]
    pub scheme_b: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub builtin: Option<String>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_parser = parse_interval)]
    pub domain: Option<(f64, f64)>,
    #[arg(long)]
    pub levels: Option<u32>,
    #[arg(long)]
    pub boundary: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_interval(s: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `A,B`, got `{s}`"));
    }
    let a = parts[0].trim().parse::<f64>().map_err(|e| e.to_string())?;
    let b = parts[1].trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok((a, b))
}

/// Optional values loaded from a `--config` JSON file. Field names match
/// the flag names with `-` replaced by `_`.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub scheme: Option<String>,
    pub scheme_a: Option<String>,
    pub scheme_b: Option<String>,
    pub levels: Option<u32>,
    pub boundary: Option<String>,
    pub input: Option<PathBuf>,
    pub builtin: Option<String>,
    pub h: Option<f64>,
    pub domain: Option<(f64, f64)>,
    pub out: Option<PathBuf>,
    pub curves_out: Option<String>,
    pub k: Option<String>,
    pub jmin: Option<u32>,
    pub jmax: Option<u32>,
    pub h_list: Option<Vec<f64>>,
    pub eps: Option<f64>,
    pub trials: Option<u32>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

fn scheme_of(flag: &Option<String>, file: &Option<String>, default: SchemeKind) -> Result<SchemeKind> {
    match flag.as_ref().or(file.as_ref()) {
        Some(s) => s.parse(),
        None => Ok(default),
    }
}

fn boundary_of(flag: &Option<String>, file: &Option<String>) -> Result<BoundaryPolicy> {
    match flag.as_ref().or(file.as_ref()) {
        Some(s) => s.parse(),
        None => Ok(BoundaryPolicy::Shrink),
    }
}

fn out_of(flag: &Option<PathBuf>, file: &Option<PathBuf>) -> Result<PathBuf> {
    flag.clone()
        .or_else(|| file.clone())
        .ok_or_else(|| Error::Config("missing --out".into()))
}

/// Read a level-0 curve from flags: `--input FILE` wins over `--builtin`.
fn ingest(
    input: Option<&Path>,
    builtin: Option<&str>,
    h: f64,
    domain: Option<(f64, f64)>,
) -> Result<SampledCurve> {
    if let Some(path) = input {
        return ingest_csv(path, h);
    }
    let Some(name) = builtin else {
        return Err(Error::Config("need --input or --builtin".into()));
    };
    let b = parse_builtin(name)?;
    let domain = domain.unwrap_or_else(|| b.default_domain());
    b.sample(h, domain)
}

// An unknown builtin name is a data-source problem, not a configuration
// problem, so it shares the parse-error exit code with malformed CSV.
fn parse_builtin(name: &str) -> Result<Builtin> {
    Builtin::parse(name).map_err(|_| Error::Parse {
        line: 0,
        msg: format!("unknown builtin `{name}`"),
    })
}

/// CSV with a `value` or `index,value` header.
pub fn ingest_csv(path: &Path, h: f64) -> Result<SampledCurve> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let indexed = match header.trim() {
        "value" => false,
        "index,value" => true,
        other => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `value` or `index,value`, got `{other}`"),
            })
        }
    };
    let mut values = Vec::new();
    let mut origin: Option<i64> = None;
    let mut expected_index: i64 = 0;
    for (i, raw) in lines {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let value_str = if indexed {
            let (idx, val) = line.split_once(',').ok_or_else(|| Error::Parse {
                line: line_no,
                msg: "expected `index,value`".into(),
            })?;
            let idx: i64 = idx.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad index `{idx}`"),
            })?;
            match origin {
                None => {
                    origin = Some(idx);
                    expected_index = idx;
                }
                Some(_) if idx != expected_index => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("non-consecutive index {idx}, expected {expected_index}"),
                    })
                }
                Some(_) => {}
            }
            expected_index += 1;
            val
        } else {
            line
        };
        let v: f64 = value_str.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("bad value `{value_str}`"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("non-finite value `{value_str}`"),
            });
        }
        values.push(v);
    }
    SampledCurve::new(values, h, origin.unwrap_or(0))
}

/// 17-significant-digit float form, exact under round-trip.
fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn curve_csv(curve: &SampledCurve, value_header: &str) -> String {
    let mut s = String::with_capacity(curve.len() * 48);
    let _ = writeln!(s, "x,{value_header}");
    for (k, v) in curve.values().iter().enumerate() {
        let _ = writeln!(s, "{},{}", fmt_float(curve.abscissa(k)), fmt_float(*v));
    }
    s
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Write all outputs, or none: files already written are removed if a
/// later one fails.
fn write_outputs(outputs: &[(PathBuf, String)]) -> Result<()> {
    let mut written: Vec<&PathBuf> = Vec::new();
    for (path, content) in outputs {
        if let Err(e) = std::fs::write(path, content) {
            for p in written {
                let _ = std::fs::remove_file(p);
            }
            return Err(e.into());
        }
        written.push(path);
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    let file = FileConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Refine(a) => run_refine(a, &file),
        Command::Regularity(a) => run_regularity(a, &file),
        Command::Order(a) => run_order(a, &file),
        Command::Gibbs(a) => run_gibbs(a, &file),
        Command::Stability(a) => run_stability(a, &file),
        Command::Compare(a) => run_compare(a, &file),
    }
}

fn run_refine(a: RefineArgs, file: &FileConfig) -> Result<()> {
    let scheme = scheme_of(&a.scheme, &file.scheme, SchemeKind::Ppha)?;
    let levels = a.levels.or(file.levels).unwrap_or(4);
    let boundary = boundary_of(&a.boundary, &file.boundary)?;
    let h = a.h.or(file.h).unwrap_or(1.0 / 32.0);
    let out = out_of(&a.out, &file.out)?;
    let curve = ingest(
        a.input.as_deref().or(file.input.as_deref()),
        a.builtin.as_deref().or(file.builtin.as_deref()),
        h,
        a.domain.or(file.domain),
    )?;
    let refined = refine_to_level(&curve, scheme, boundary, levels)?;
    write_outputs(&[(out, curve_csv(&refined, "value"))])
}

fn run_regularity(a: RegularityArgs, file: &FileConfig) -> Result<()> {
    let scheme = scheme_of(&a.scheme, &file.scheme, SchemeKind::Ppha)?;
    let jmin = a.jmin.or(file.jmin).unwrap_or(5);
    let jmax = a.jmax.or(file.jmax).unwrap_or(10);
    let k = a.k.as_ref().or(file.k.as_ref()).map(String::as_str).unwrap_or("both");
    let out = out_of(&a.out, &file.out)?;
    let builtin_name = a
        .builtin
        .as_deref()
        .or(file.builtin.as_deref())
        .unwrap_or("delta");
    let builtin = parse_builtin(builtin_name)?;
    let f0 = match builtin {
        Builtin::Delta { width: 0 } => {
            // Default protocol window: wide enough that the impulse
            // response stays interior through jmax + 1 Shrink steps.
            crate::samplers::delta_curve(3 << (jmax + 2))?
        }
        ref b => b.sample(1.0 / 32.0, b.default_domain())?,
    };
    let mut report = analysis::regularity_report(&f0, scheme, jmin, jmax, builtin_name)?;
    match k {
        "both" => {}
        "1" => report.beta2.iter_mut().for_each(|v| *v = None),
        "2" => report.beta1.iter_mut().for_each(|v| *v = None),
        other => return Err(Error::Config(format!("--k must be 1, 2 or both, got `{other}`"))),
    }
    write_outputs(&[(out, to_json(&report)?)])
}

fn run_order(a: OrderArgs, file: &FileConfig) -> Result<()> {
    let scheme = scheme_of(&a.scheme, &file.scheme, SchemeKind::Ppha)?;
    let out = out_of(&a.out, &file.out)?;
    let builtin = parse_builtin(
        a.builtin
            .as_deref()
            .or(file.builtin.as_deref())
            .ok_or_else(|| Error::Config("order needs --builtin".into()))?,
    )?;
    let spacings = a
        .h_list
        .or_else(|| file.h_list.clone())
        .unwrap_or_else(|| vec![1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0]);
    let domain = a.domain.or(file.domain).unwrap_or_else(|| builtin.default_domain());
    let report = analysis::approximation_order(&builtin, domain, scheme, &spacings)?;
    write_outputs(&[(out, to_json(&report)?)])
}

fn run_gibbs(a: GibbsArgs, file: &FileConfig) -> Result<()> {
    let scheme = scheme_of(&a.scheme, &file.scheme, SchemeKind::Ppha)?;
    let h = a.h.or(file.h).unwrap_or(1.0 / 64.0);
    let levels = a.levels.or(file.levels).unwrap_or(6);
    let out = out_of(&a.out, &file.out)?;
    let builtin = parse_builtin(
        a.builtin
            .as_deref()
            .or(file.builtin.as_deref())
            .unwrap_or("step"),
    )?;
    let domain = a.domain.or(file.domain).unwrap_or_else(|| builtin.default_domain());
    let (report, curves) = analysis::gibbs_report(&builtin, domain, h, scheme, levels)?;
    let mut outputs = vec![(out, to_json(&report)?)];
    if let Some(prefix) = a.curves_out.as_deref().or(file.curves_out.as_deref()) {
        for (kind, curve) in &curves {
            outputs.push((
                PathBuf::from(format!("{prefix}_{}.csv", kind.name())),
                curve_csv(curve, "value"),
            ));
        }
    }
    write_outputs(&outputs)
}

fn run_stability(a: StabilityArgs, file: &FileConfig) -> Result<()> {
    let scheme = scheme_of(&a.scheme, &file.scheme, SchemeKind::Ppha)?;
    let h = a.h.or(file.h).unwrap_or(1.0 / 32.0);
    let eps = a.eps.or(file.eps).unwrap_or(1e-3);
    let trials = a.trials.or(file.trials).unwrap_or(10);
    let levels = a.levels.or(file.levels).unwrap_or(10);
    let seed = a.seed.or(file.seed).unwrap_or(0);
    let out = out_of(&a.out, &file.out)?;
    let curve = ingest(
        a.input.as_deref().or(file.input.as_deref()),
        a.builtin.as_deref().or(file.builtin.as_deref()),
        h,
        a.domain.or(file.domain),
    )?;
    let report = analysis::stability_probe(curve.values(), eps, scheme, levels, trials, seed)?;
    write_outputs(&[(out, to_json(&report)?)])
}

fn run_compare(a: CompareArgs, file: &FileConfig) -> Result<()> {
    let scheme_a = scheme_of(&a.scheme_a, &file.scheme_a, SchemeKind::Ppha)?;
    let scheme_b = scheme_of(&a.scheme_b, &file.scheme_b, SchemeKind::LinearShifted4pt)?;
    let levels = a.levels.or(file.levels).unwrap_or(4);
    let boundary = boundary_of(&a.boundary, &file.boundary)?;
    let h = a.h.or(file.h).unwrap_or(1.0 / 32.0);
    let out = out_of(&a.out, &file.out)?;
    let curve = ingest(
        a.input.as_deref().or(file.input.as_deref()),
        a.builtin.as_deref().or(file.builtin.as_deref()),
        h,
        a.domain.or(file.domain),
    )?;
    let ca = refine_to_level(&curve, scheme_a, boundary, levels)?;
    let cb = refine_to_level(&curve, scheme_b, boundary, levels)?;

    // Join on the integer level index so only shared abscissae appear.
    let lo = ca.origin().max(cb.origin());
    let hi = (ca.origin() + ca.len() as i64).min(cb.origin() + cb.len() as i64);
    let mut s = String::new();
    let _ = writeln!(s, "x,{},{}", scheme_a.name(), scheme_b.name());
    for n in lo..hi {
        let ka = (n - ca.origin()) as usize;
        let kb = (n - cb.origin()) as usize;
        let _ = writeln!(
            s,
            "{},{},{}",
            fmt_float(ca.abscissa(ka)),
            fmt_float(ca.values()[ka]),
            fmt_float(cb.values()[kb])
        );
    }
    write_outputs(&[(out, s)])
}
