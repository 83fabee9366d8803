//! Command-line front end. `run` returns the process exit code:
//! 0 success, 1 usage, 2 resource cap, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::closed_form::{
    closed_form_spectrum, julia_preimages, julia_spectral_image, SpectrumMulti,
};
use crate::error::Error;
use crate::level_ops::{hecke_operator, markov_operator, parse_rational};
use crate::limits;
use crate::numeric_spectra::{
    cdf_g, cdf_gtilde, compare_spectra, density_g, density_gtilde, empiric_histogram, ks_distance,
    ks_distance_histogram, moment_check, numeric_spectrum, DiscreteMeasure, Histogram,
};
use crate::report::{fmt15, ComparisonReport, Method, SpectrumReport};
use crate::schreier::{action_graph, labeled_isomorphic, substitution_graph, to_csv, to_dot};
use crate::tree_groups::{GroupPreset, TreeWord};
use crate::verify::{run_verify, VerifyConfig, ORACLE_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fractal-spectra",
    version,
    about = "Spectra and Schreier graphs of self-similar groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    ClosedForm,
    Numeric,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Action,
    Subst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum of the level-n Hecke operator.
    Spectrum {
        #[arg(long)]
        group: String,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "closed-form")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the exact matrix as CSV of "p/q" entries.
        #[arg(long)]
        dump_matrix: Option<PathBuf>,
    },
    /// Schreier graph of the level-n action.
    Graph {
        #[arg(long)]
        group: String,
        #[arg(long)]
        level: usize,
        #[arg(long, value_enum, default_value = "action")]
        construction: Construction,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cross-check the two constructions.
        #[arg(long)]
        verify: bool,
    },
    /// Eigenvalue histogram, limiting density and Kesten measure.
    Measure {
        #[arg(long)]
        group: String,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        /// Spectral measure of the random walk at the basepoint instead.
        #[arg(long)]
        kesten: bool,
        #[arg(long, default_value_t = 12)]
        moments: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Corrupt one matrix entry; the run must then fail.
        #[arg(long)]
        selftest_negative: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Nested-radical preimages of 0 under z² − λ.
    Julia {
        /// Rational, e.g. `6` or `45/16`.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        depth: usize,
        /// Also map preimages of the group's seeds into its spectrum.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ResourceLimit { .. } => EXIT_RESOURCE,
            Error::Internal(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type CliResult<T = i32> = std::result::Result<T, Failure>;

/// Largest level accepted for a preset; the dimension cap from the
/// environment takes precedence when set.
pub fn level_cap(group: GroupPreset, numeric: bool) -> usize {
    if let Some(dim) = limits::env_max_dim() {
        let d = group.alphabet_size();
        let mut n = 0;
        while d.checked_pow(n as u32 + 1).is_some_and(|v| v <= dim) {
            n += 1;
        }
        return n;
    }
    match (group.is_binary(), numeric) {
        (true, false) => 10,
        (true, true) => 7,
        (false, false) => 8,
        (false, true) => 5,
    }
}

fn check_level(group: GroupPreset, level: usize, numeric: bool) -> CliResult<()> {
    let cap = level_cap(group, numeric);
    if level > cap {
        return Err(Failure {
            code: EXIT_RESOURCE,
            message: format!(
                "level {level} exceeds the cap {cap} for {group} (set {} to raise it)",
                limits::MAX_DIM_ENV
            ),
        });
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| usage(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn spectrum_text(report: &SpectrumReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => Ok(report.to_csv()),
        Format::Dot => Err(usage("dot format applies to graphs only")),
    }
}

#[derive(Serialize)]
struct BothReport {
    closed_form: SpectrumReport,
    numeric: SpectrumReport,
    comparison: ComparisonReport,
}

fn cmd_spectrum(
    group: GroupPreset,
    level: usize,
    method: MethodArg,
    format: Format,
    out: &Option<PathBuf>,
    dump: &Option<PathBuf>,
) -> CliResult {
    check_level(group, level, method != MethodArg::ClosedForm)?;
    if let Some(path) = dump {
        check_level(group, level, true)?;
        let m = hecke_operator(group, level)?;
        fs::write(path, m.to_csv())
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
    }
    match method {
        MethodArg::ClosedForm => {
            let s = closed_form_spectrum(group, level)?;
            emit(
                out,
                &spectrum_text(
                    &SpectrumReport::new(group, level, &s, Method::ClosedForm),
                    format,
                )?,
            )?;
            Ok(EXIT_OK)
        }
        MethodArg::Numeric => {
            let e = numeric_spectrum(group, level)?;
            let report = SpectrumReport::new(group, level, &e.clustered(), Method::Numeric);
            emit(out, &spectrum_text(&report, format)?)?;
            Ok(EXIT_OK)
        }
        MethodArg::Both => {
            let closed = closed_form_spectrum(group, level)?;
            let e = numeric_spectrum(group, level)?;
            let c = compare_spectra(&closed, &e, ORACLE_TOLERANCE)?;
            let report = BothReport {
                closed_form: SpectrumReport::new(group, level, &closed, Method::ClosedForm),
                numeric: SpectrumReport::new(group, level, &e.clustered(), Method::Numeric),
                comparison: ComparisonReport {
                    group: group.tag().into(),
                    level,
                    dim: c.dim,
                    max_deviation: fmt15(c.max_deviation),
                    tolerance: fmt15(c.tolerance),
                    pass: c.pass,
                },
            };
            if format != Format::Json {
                return Err(usage("--method both writes JSON only"));
            }
            emit(out, &to_json(&report)?)?;
            eprintln!(
                "max deviation {} ({})",
                report.comparison.max_deviation,
                if c.pass { "pass" } else { "FAIL" }
            );
            Ok(if c.pass { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

fn cmd_graph(
    group: GroupPreset,
    level: usize,
    construction: Construction,
    format: Format,
    out: &Option<PathBuf>,
    verify: bool,
) -> CliResult {
    check_level(group, level, false)?;
    let g = match construction {
        Construction::Action => action_graph(group, level)?,
        Construction::Subst => substitution_graph(group, level)?,
    };
    let text = match format {
        Format::Dot => to_dot(&g),
        Format::Csv => to_csv(&g),
        Format::Json => return Err(usage("graphs are written as dot or csv")),
    };
    emit(out, &text)?;
    if verify {
        let other = match construction {
            Construction::Action => substitution_graph(group, level)?,
            Construction::Subst => action_graph(group, level)?,
        };
        let iso = labeled_isomorphic(&g, &other);
        eprintln!("action and substitution graphs isomorphic: {iso}");
        if !iso {
            return Ok(EXIT_VERIFY);
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct HistogramRow {
    bin_left: String,
    bin_right: String,
    mass: String,
    /// Mass the limiting density gives the bin.
    #[serde(skip_serializing_if = "Option::is_none")]
    density_mass: Option<String>,
}

#[derive(Serialize)]
struct DensitySample {
    x: String,
    density: String,
}

#[derive(Serialize)]
struct MeasureReport {
    group: String,
    level: usize,
    bins: usize,
    histogram: Vec<HistogramRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    density: Vec<DensitySample>,
    /// Distance at the bin edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    ks_distance_histogram: Option<String>,
    /// Distance for the normalised eigenvalue counting measure.
    #[serde(skip_serializing_if = "Option::is_none")]
    ks_distance_spectrum: Option<String>,
}

#[derive(Serialize)]
struct KestenReport {
    group: String,
    level: usize,
    basepoint: String,
    atoms: Vec<(String, String)>,
    moments: Vec<(u32, String, String)>,
    max_deviation: String,
    pass: bool,
}

type DensityFns = (fn(f64) -> crate::error::Result<f64>, fn(f64) -> f64);

fn density_for(group: GroupPreset) -> Option<DensityFns> {
    match group {
        GroupPreset::G => Some((density_g, cdf_g)),
        GroupPreset::Gtilde => Some((density_gtilde, cdf_gtilde)),
        _ => None,
    }
}

fn histogram_rows(h: &Histogram, cdf: Option<fn(f64) -> f64>) -> Vec<HistogramRow> {
    h.masses
        .iter()
        .enumerate()
        .map(|(i, &m)| HistogramRow {
            bin_left: fmt15(h.edges[i]),
            bin_right: fmt15(h.edges[i + 1]),
            mass: fmt15(m),
            density_mass: cdf.map(|f| fmt15(f(h.edges[i + 1]) - f(h.edges[i]))),
        })
        .collect()
}

fn cmd_measure(
    group: GroupPreset,
    level: usize,
    bins: usize,
    kesten: bool,
    moments: u32,
    format: Format,
    out: &Option<PathBuf>,
) -> CliResult {
    if format == Format::Dot {
        return Err(usage("measures are written as csv or json"));
    }
    if kesten {
        check_level(group, level, true)?;
        let m = markov_operator(group, level)?;
        let base = TreeWord::constant(group.ray_letter(), level);
        let r = moment_check(&m, base.index(group.alphabet_size()), moments)?;
        let measure =
            crate::numeric_spectra::kesten_measure(&m, base.index(group.alphabet_size()))?;
        let pass = r.max_deviation <= ORACLE_TOLERANCE;
        eprintln!(
            "moment deviation {} over {moments} moments",
            fmt15(r.max_deviation)
        );
        let text = match format {
            Format::Csv => {
                let mut s = String::from("location,mass\n");
                for (x, w) in &measure.atoms {
                    s.push_str(&format!("{},{}\n", fmt15(*x), fmt15(*w)));
                }
                s
            }
            _ => to_json(&KestenReport {
                group: group.tag().into(),
                level,
                basepoint: base.to_string(),
                atoms: measure
                    .atoms
                    .iter()
                    .map(|(x, w)| (fmt15(*x), fmt15(*w)))
                    .collect(),
                moments: r
                    .moments
                    .iter()
                    .map(|&(n, a, b)| (n, fmt15(a), fmt15(b)))
                    .collect(),
                max_deviation: fmt15(r.max_deviation),
                pass,
            })?,
        };
        emit(out, &text)?;
        return Ok(if pass { EXIT_OK } else { EXIT_VERIFY });
    }

    check_level(group, level, false)?;
    let s: SpectrumMulti = closed_form_spectrum(group, level)?;
    let h = empiric_histogram(&s, bins)?;
    let dens = density_for(group);
    let ks_h = dens.map(|(_, cdf)| ks_distance_histogram(&h, cdf));
    let ks_s = dens.map(|(_, cdf)| ks_distance(&DiscreteMeasure::from_spectrum(&s), cdf));
    if let (Some(a), Some(b)) = (ks_h, ks_s) {
        eprintln!("ks distance: histogram {} spectrum {}", fmt15(a), fmt15(b));
    }
    let rows = histogram_rows(&h, dens.map(|d| d.1));
    let text = match format {
        Format::Csv => {
            let mut t = String::from(if dens.is_some() {
                "bin_left,bin_right,mass,density_mass\n"
            } else {
                "bin_left,bin_right,mass\n"
            });
            for r in &rows {
                t.push_str(&format!("{},{},{}", r.bin_left, r.bin_right, r.mass));
                if let Some(d) = &r.density_mass {
                    t.push_str(&format!(",{d}"));
                }
                t.push('\n');
            }
            t
        }
        _ => {
            let density = match dens {
                Some((f, _)) => (0..bins)
                    .filter_map(|i| {
                        let x = 0.5 * (h.edges[i] + h.edges[i + 1]);
                        f(x).ok().map(|y| DensitySample {
                            x: fmt15(x),
                            density: fmt15(y),
                        })
                    })
                    .collect(),
                None => Vec::new(),
            };
            to_json(&MeasureReport {
                group: group.tag().into(),
                level,
                bins,
                histogram: rows,
                density,
                ks_distance_histogram: ks_h.map(fmt15),
                ks_distance_spectrum: ks_s.map(fmt15),
            })?
        }
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_verify(
    seed: u64,
    points: usize,
    selftest_negative: bool,
    out: &Option<PathBuf>,
) -> CliResult {
    let cfg = VerifyConfig {
        seed,
        points,
        selftest_negative,
        ..VerifyConfig::default()
    };
    let summary = run_verify(&cfg);
    emit(out, &to_json(&summary)?)?;
    for name in &summary.failed {
        eprintln!("FAILED: {name}");
    }
    eprintln!("{} passed, {} failed", summary.passed, summary.failed.len());
    Ok(if summary.all_pass {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

#[derive(Serialize)]
struct JuliaReport {
    lambda: String,
    depth: usize,
    values: Vec<String>,
    /// `1 + v` for every value `v` (the set is symmetric, so this is `1 ± v`).
    shifted: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spectral_image: Option<Vec<String>>,
}

fn cmd_julia(
    lambda: &str,
    depth: usize,
    group: Option<GroupPreset>,
    out: &Option<PathBuf>,
) -> CliResult {
    let l = parse_rational(lambda)?;
    let lf = l.to_f64().unwrap_or(f64::NAN);
    let values = julia_preimages(lf, depth)?;
    let spectral_image = match group {
        Some(g) if !g.is_binary() => Some(julia_spectral_image(g, depth)?),
        Some(g) => return Err(usage(format!("{g} has no Julia-set description"))),
        None => None,
    };
    let report = JuliaReport {
        lambda: l.to_string(),
        depth,
        shifted: values.iter().map(|v| fmt15(1.0 + v)).collect(),
        values: values.iter().map(|&v| fmt15(v)).collect(),
        group: group.map(|g| g.tag().to_string()),
        spectral_image: spectral_image.map(|v| v.into_iter().map(fmt15).collect()),
    };
    emit(out, &to_json(&report)?)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Spectrum {
            group,
            level,
            method,
            format,
            out,
            dump_matrix,
        } => cmd_spectrum(group.parse()?, level, method, format, &out, &dump_matrix),
        Command::Graph {
            group,
            level,
            construction,
            format,
            out,
            verify,
        } => cmd_graph(group.parse()?, level, construction, format, &out, verify),
        Command::Measure {
            group,
            level,
            bins,
            kesten,
            moments,
            format,
            out,
        } => cmd_measure(group.parse()?, level, bins, kesten, moments, format, &out),
        Command::Verify {
            seed,
            points,
            selftest_negative,
            out,
        } => cmd_verify(seed, points, selftest_negative, &out),
        Command::Julia {
            lambda,
            depth,
            group,
            out,
        } => {
            let group = group.map(|g| g.parse::<GroupPreset>()).transpose()?;
            cmd_julia(&lambda, depth, group, &out)
        }
    }
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps() {
        assert_eq!(level_cap(GroupPreset::G, false), 10);
        assert_eq!(level_cap(GroupPreset::Gamma, true), 5);
        assert!(check_level(GroupPreset::Gamma, 6, true).is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(
            run([
                "fractal-spectra",
                "spectrum",
                "--group",
                "nope",
                "--level",
                "1"
            ]),
            EXIT_USAGE
        );
        assert_eq!(run(["fractal-spectra", "frobnicate"]), EXIT_USAGE);
        assert_eq!(
            run([
                "fractal-spectra",
                "spectrum",
                "--group",
                "g",
                "--level",
                "11"
            ]),
            EXIT_RESOURCE
        );
        assert_eq!(
            run(["fractal-spectra", "julia", "--lambda=-1", "--depth", "2"]),
            EXIT_USAGE
        );
    }
}
