//! Command-line front end: field generation, dyadic analysis, flux series,
//! verification suites and the divergent trilinear sequence.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage, format or input error.

mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::besov::{besov_norm, dyadic_coefficients, tail_sup_of, BesovParams};
use crate::bilinear::{divergence_growth, GrowthSeries};
use crate::constructions::{
    enstrophy_nonlocal_field, eyink_energy_field, eyink_helicity_field, random_spectrum_field, EnvelopeVariant,
    ParaproductBase,
};
use crate::error::{Error, Result};
use crate::flux::{bound_series, flux_series, FluxKind};
use crate::io::{load_field, save_field};
use crate::littlewood_paley::{lambda, make_chi_profile, make_filter_bank};
use crate::spectral::{Field, Grid};

pub use verify::{Check, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lpflux",
    version,
    about = "Littlewood-Paley flux analysis of periodic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one of the explicit example fields to an LPF1 file.
    Generate(GenerateArgs),
    /// Dyadic coefficients, a Besov norm and a tail supremum of a field.
    Analyze(AnalyzeArgs),
    /// Flux series with the matching locality bound.
    Flux(FluxArgs),
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Trilinear growth along the divergent sequence.
    Bilinear(BilinearArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Example {
    EyinkEnergy,
    EyinkHelicity,
    EnstrophyNonlocal,
    Paraproduct,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Envelope {
    Torus,
    Localized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SequenceComponent {
    U,
    V,
    W,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    example: Example,
    /// Grid size, one value for a cube or one per axis.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Lattice denominator: the period is `2 pi L`.
    #[arg(long = "L", default_value_t = 1)]
    l: u32,
    #[arg(long, default_value_t = 1)]
    q_lo: i32,
    #[arg(long, default_value_t = 3)]
    q_hi: i32,
    #[arg(long, value_enum, default_value_t = Envelope::Torus)]
    envelope: Envelope,
    /// Envelope width for the nonlocal enstrophy flow; absent means the torus variant.
    #[arg(long)]
    delta: Option<f64>,
    /// Which member of the divergent sequence to write.
    #[arg(long, value_enum, default_value_t = SequenceComponent::V)]
    component: SequenceComponent,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Energy,
    Helicity,
    Enstrophy,
    Shell,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Normalize {
    Volume,
    None,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Besov exponents `s,p,r`; `inf` is accepted for `r`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_negative_numbers = true)]
    besov: Option<Vec<f64>>,
    /// Dyadic coefficient exponents `s,p`.
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        default_value = "0.3333333333333333,3"
    )]
    dyadic: Vec<f64>,
    /// Report `sup_{q > Q}` of the dyadic coefficients.
    #[arg(long, allow_negative_numbers = true)]
    tail: Option<i32>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FluxArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Inclusive range `A..B` of `Q` (of `Q1` for shell fluxes).
    #[arg(long)]
    q_range: Option<String>,
    #[arg(long)]
    q0: Option<i32>,
    #[arg(long)]
    q1: Option<i32>,
    #[arg(long, value_enum, default_value_t = Normalize::None)]
    normalize: Normalize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BilinearArgs {
    #[arg(long, default_value_t = 6)]
    n_max: i32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => generate(&a).map(|_| EXIT_OK),
        Command::Analyze(a) => analyze(&a).map(|_| EXIT_OK),
        Command::Flux(a) => flux(&a).map(|_| EXIT_OK),
        Command::Verify(a) => verify_cmd(&a),
        Command::Bilinear(a) => bilinear(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn make_grid(n: &[usize], l: u32, default_dim: usize) -> Result<Grid> {
    match n {
        [m] => Grid::new(default_dim, &vec![*m; default_dim], l),
        _ => Grid::new(n.len(), n, l),
    }
}

fn generate(a: &GenerateArgs) -> Result<()> {
    let default_dim = if a.example == Example::EnstrophyNonlocal { 2 } else { 3 };
    let grid = make_grid(&a.n, a.l, default_dim)?;
    let envelope = match a.envelope {
        Envelope::Torus => EnvelopeVariant::Torus,
        Envelope::Localized => EnvelopeVariant::Localized,
    };
    let field = match a.example {
        Example::EyinkEnergy => eyink_energy_field(grid, a.q_lo, a.q_hi, envelope)?,
        Example::EyinkHelicity => eyink_helicity_field(grid, a.q_lo, a.q_hi, envelope)?,
        Example::EnstrophyNonlocal => enstrophy_nonlocal_field(grid, a.q_hi, a.delta)?,
        Example::Paraproduct => {
            let base = ParaproductBase::new(grid, a.seed)?;
            let mut v = Field::zeros(grid, 3);
            let mut w = Field::zeros(grid, 3);
            for q in 1..=a.q_hi {
                let (vq, wq) = base.terms(q)?;
                v = v.add(&vq)?;
                w = w.add(&wq)?;
            }
            match a.component {
                SequenceComponent::U => base.u,
                SequenceComponent::V => v,
                SequenceComponent::W => w,
            }
        }
        Example::Random => {
            if a.q_lo < 0 || a.q_hi < a.q_lo {
                return Err(Error::Parameter(format!(
                    "need 0 <= q-lo <= q-hi, got {}..{}",
                    a.q_lo, a.q_hi
                )));
            }
            let profile: Vec<f64> = (0..=a.q_hi).map(|q| if q >= a.q_lo { 1.0 } else { 0.0 }).collect();
            random_spectrum_field(grid, &profile, a.seed)?
        }
    };
    save_field(&field, &a.out)
}

#[derive(Serialize)]
struct DyadicRow {
    q: i32,
    lambda_q: f64,
    coeff: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    s: f64,
    p: f64,
    dyadic: Vec<DyadicRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    besov: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tail_sup: Option<f64>,
}

fn analyze(a: &AnalyzeArgs) -> Result<()> {
    let u = load_field(&a.input)?;
    let bank = make_filter_bank(*u.grid(), make_chi_profile())?;
    let [s, p] = a.dyadic[..] else {
        return Err(Error::Parameter("--dyadic takes exactly s,p".into()));
    };
    let d = dyadic_coefficients(&u, s, p, &bank)?;
    let besov = match &a.besov {
        None => None,
        Some(v) => {
            let [s, p, r] = v[..] else {
                return Err(Error::Parameter("--besov takes exactly s,p,r".into()));
            };
            Some(besov_norm(&u, BesovParams::new(s, p, r)?, &bank)?)
        }
    };
    let tail_sup = match a.tail {
        None => None,
        Some(q) => {
            crate::error::check_index("Q", q, -1, bank.q_max())?;
            Some(tail_sup_of(&d, q))
        }
    };
    let rows: Vec<DyadicRow> = d
        .iter()
        .map(|(q, coeff)| DyadicRow {
            q,
            lambda_q: lambda(q),
            coeff,
        })
        .collect();
    match a.format {
        Format::Json => emit(
            a.out.as_ref(),
            &to_json(&AnalyzeReport {
                s,
                p,
                dyadic: rows,
                besov,
                tail_sup,
            })?,
        ),
        Format::Csv => {
            let mut text = String::from("q,lambda_q,coeff\n");
            for r in &rows {
                text += &format!("{},{},{}\n", r.q, format_number(r.lambda_q), format_number(r.coeff));
            }
            emit(a.out.as_ref(), &text)?;
            if let Some(b) = besov {
                eprintln!("besov,{}", format_number(b));
            }
            if let Some(t) = tail_sup {
                eprintln!("tail_sup,{}", format_number(t));
            }
            Ok(())
        }
    }
}

fn parse_range(s: &str) -> Result<(i32, i32)> {
    let bad = || Error::Parameter(format!("--q-range expects A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if b < a {
        return Err(bad());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct FluxRow {
    #[serde(rename = "Q")]
    q: i32,
    flux: f64,
    bound: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct FluxReport {
    kind: FluxKind,
    normalized: bool,
    rows: Vec<FluxRow>,
}

fn flux(a: &FluxArgs) -> Result<()> {
    let u = load_field(&a.input)?;
    let bank = make_filter_bank(*u.grid(), make_chi_profile())?;
    let kind = match a.kind {
        Kind::Energy => FluxKind::Energy,
        Kind::Helicity => FluxKind::Helicity,
        Kind::Enstrophy => FluxKind::Enstrophy,
        Kind::Shell => FluxKind::Shell {
            q0: a.q0.ok_or_else(|| Error::Parameter("--kind shell needs --q0".into()))?,
        },
    };
    let (lo, hi) = match (&a.q_range, a.q1) {
        (Some(r), _) => parse_range(r)?,
        (None, Some(q1)) => (q1, q1),
        (None, None) => (kind_floor(kind), bank.q_max() - 1),
    };
    let fluxes = flux_series(&u, kind, lo..=hi, &bank)?;
    let bounds = bound_series(&u, kind, lo..=hi, &bank)?;
    let (fluxes, bounds) = match a.normalize {
        Normalize::Volume => {
            let v = u.grid().volume();
            (fluxes.normalized(v), bounds.normalized(v))
        }
        Normalize::None => (fluxes, bounds),
    };
    let rows: Vec<FluxRow> = fluxes
        .qs
        .iter()
        .zip(fluxes.values.iter().zip(&bounds.values))
        .map(|(&q, (&f, &b))| FluxRow {
            q,
            flux: f,
            bound: b,
            ratio: if f == 0.0 && b == 0.0 { 0.0 } else { f / b },
        })
        .collect();
    let text = match a.format {
        Format::Json => to_json(&FluxReport {
            kind,
            normalized: a.normalize == Normalize::Volume,
            rows,
        })?,
        Format::Csv => {
            let mut t = String::from("Q,flux,bound,ratio\n");
            for r in &rows {
                t += &format!(
                    "{},{},{},{}\n",
                    r.q,
                    format_number(r.flux),
                    format_number(r.bound),
                    format_number(r.ratio)
                );
            }
            t
        }
    };
    emit(a.out.as_ref(), &text)
}

fn kind_floor(kind: FluxKind) -> i32 {
    match kind {
        FluxKind::Shell { q0 } => q0,
        _ => 0,
    }
}

fn finish(checks: &[Check], report: Option<&PathBuf>, extra: Option<serde_json::Value>) -> Result<i32> {
    let mut doc = serde_json::json!({ "checks": checks });
    if let Some(x) = extra {
        doc["data"] = x;
    }
    let text = to_json(&doc)?;
    match report {
        Some(path) => fs::write(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    for c in &failed {
        eprintln!("check failed: {}", c.name);
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_CHECK })
}

fn verify_cmd(a: &VerifyArgs) -> Result<i32> {
    let checks = verify::run_suite(a.suite, a.seed)?;
    finish(&checks, a.report.as_ref(), None)
}

/// Smallest axis-1 size that resolves the sequence up to `n_max` on `L = 8`.
fn growth_grid(n_max: i32) -> Result<Grid> {
    if !(1..=12).contains(&n_max) {
        return Err(Error::Parameter(format!("--n-max = {n_max} must lie in 1..=12")));
    }
    Grid::new(3, &[32 << n_max, 16, 16], 8)
}

/// Strict growth for `n >= 2` and increments within 15% of `A/n` for `n >= 3`.
pub fn growth_checks(series: &GrowthSeries) -> Vec<Check> {
    let mut checks = Vec::new();
    for w in series.points.windows(2) {
        let (prev, cur) = (w[0], w[1]);
        let inc = cur.value - prev.value;
        if cur.n >= 2 {
            checks.push(Check::at_least(format!("growth_strict_n{}", cur.n), inc, 0.0, 0.0).strict());
        }
        if cur.n >= 3 {
            let expected = series.a / cur.n as f64;
            checks.push(Check::close(
                format!("growth_increment_n{}", cur.n),
                inc,
                expected,
                0.15,
            ));
        }
    }
    checks
}

fn bilinear(a: &BilinearArgs) -> Result<i32> {
    let grid = growth_grid(a.n_max)?;
    let series = divergence_growth(grid, a.n_max, a.seed)?;
    let checks = growth_checks(&series);
    let extra = serde_json::json!({
        "grid": grid.sizes(),
        "lattice_denominator": grid.lattice_denominator(),
        "series": series,
    });
    finish(&checks, a.report.as_ref(), Some(extra))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_numbers() {
        assert_eq!(parse_range("2..5").unwrap(), (2, 5));
        assert_eq!(parse_range("2..=5").unwrap(), (2, 5));
        assert!(parse_range("5..2").is_err());
        assert!(parse_range("x").is_err());
        let s = format_number(0.1);
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        assert_eq!(s, "1.0000000000000001e-1");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["lpflux", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["lpflux", "flux", "--kind", "energy"]), EXIT_USAGE);
        assert_eq!(run(["lpflux", "--help"]), EXIT_OK);
    }
}
