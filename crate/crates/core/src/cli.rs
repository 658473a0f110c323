//! The `manivol` command line.

use std::ffi::OsString;
use std::io::Write;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::closed_forms::{normalization_clashes, vol_complex_flag, weinstein_integer, Family, Field, ManifoldId};
use crate::exact::ExactVolume;
use crate::haar::{sample_batch, GroupSample, HaarGroup};
use crate::integrate::{integrate_mc, integrate_tensor, IntegrationResult, Method};
use crate::states::{enumerate_spectral_types, orbit_label, orbit_volume, partitions};
use crate::verify::verification_target;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

const DEFAULT_MC_SAMPLES: u64 = 1_000_000;
const DEFAULT_QUAD_TOL: f64 = 1e-8;
const DEFAULT_MC_SIGMAS: f64 = 3.0;

#[derive(Parser, Debug)]
#[command(
    name = "manivol",
    version,
    about = "Exact volumes of compact manifolds and their numerical verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Quad,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Spheres,
    Projective,
    Groups,
    Flags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact volume of a manifold, e.g. `volume su 3` or `volume flag 2 1 1`.
    Volume {
        /// sphere ball rp cp hp op su u pu so o spin sp g2 f4 flag rflag
        family: String,
        /// Dimension parameter, or the partition for flag manifolds.
        params: Vec<u32>,
        /// Scale for g2 and f4, as p/q.
        #[arg(long)]
        xi: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Integrate a chart density numerically and compare with the exact volume.
    Verify {
        /// su2-euler su2-embedding so3-euler su2-maurer-cartan so3-maurer-cartan
        /// su3-maurer-cartan (su3) sphere-N qubit-states
        chart: String,
        /// Default: quad up to 5 parameters, mc above.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Gauss-Legendre order per axis.
        #[arg(long, default_value_t = 32)]
        order: usize,
        /// Monte Carlo sample count.
        #[arg(long)]
        samples: Option<u64>,
        /// Monte Carlo master seed (required with --method mc).
        #[arg(long)]
        seed: Option<u64>,
        /// Independent Monte Carlo streams.
        #[arg(long, default_value_t = 64)]
        chunks: u64,
        /// Relative tolerance for quad (default 1e-8); number of standard
        /// errors for mc (default 3).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Weinstein integer of a projective space.
    Weinstein {
        /// rp cp hp op
        family: String,
        n: u32,
    },
    /// Haar-random group elements.
    Sample {
        /// su2 so3 su3
        group: String,
        #[arg(long)]
        count: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        chunks: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Tables of volumes.
    Table {
        #[arg(value_enum)]
        table: TableKind,
        /// Largest dimension parameter listed.
        #[arg(long)]
        max: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Spectral types of n-level density matrices and their orbits.
    Orbits {
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Isomorphic groups whose volumes differ by normalization.
    Clashes {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Verification,
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `argv` (including the program name), writes results to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Verification) => EXIT_VERIFY_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\n{}", Cli::command().render_usage());
            EXIT_USAGE
        }
    };
    let _ = out.flush();
    result
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Volume { family, params, xi, format } => volume(out, &family, params, xi, format),
        Command::Verify { chart, method, order, samples, seed, chunks, tol, format } => {
            let opts = VerifyOptions { method, order, samples, seed, chunks, tol };
            verify(out, &chart, &opts, format)
        }
        Command::Weinstein { family, n } => weinstein(out, &family, n),
        Command::Sample { group, count, seed, chunks, format } => sample(out, &group, count, seed, chunks, format),
        Command::Table { table, max, format } => self::table(out, table, max, format),
        Command::Orbits { n, format } => orbits(out, n, format),
        Command::Clashes { format } => clashes(out, format),
    }
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> Outcome {
    writeln!(out, "{text}").map_err(|e| usage(format!("write failed: {e}")))
}

fn emit_json(out: &mut dyn Write, value: &Value) -> Outcome {
    emit(out, serde_json::to_string_pretty(value).expect("JSON values serialize"))
}

/// Four decimals in the comfortable range, scientific notation outside it.
pub fn format_approx(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if (1e-3..1e6).contains(&a) {
        format!("{x:.4}")
    } else {
        format!("{x:.6e}")
    }
}

/// `exact ≈ approx`.
pub fn render_volume(v: &ExactVolume) -> String {
    format!("{v} ≈ {}", format_approx(v.approx()))
}

fn volume_json(name: &str, v: &ExactVolume) -> Value {
    let mut record = v.to_json();
    let map = record.as_object_mut().expect("ExactVolume JSON is an object");
    map.insert("manifold".into(), Value::from(name));
    map.insert("exact".into(), Value::from(v.to_string()));
    record
}

fn parse_family(key: &str) -> Result<Family, Failure> {
    Family::from_key(key).ok_or_else(|| usage(format!("unknown manifold family '{key}'")))
}

fn volume(out: &mut dyn Write, family: &str, params: Vec<u32>, xi: Option<String>, format: Format) -> Outcome {
    let family = parse_family(family)?;
    let mut id = ManifoldId::new(family, params).map_err(|e| usage(e.to_string()))?;
    if let Some(xi) = xi {
        if !matches!(family, Family::G2 | Family::F4) {
            return Err(usage("--xi applies only to g2 and f4"));
        }
        let value: BigRational = xi.parse().map_err(|_| usage(format!("--xi '{xi}' is not a fraction p/q")))?;
        id = id.with_xi(value).map_err(|e| usage(e.to_string()))?;
    }
    let v = id.volume().map_err(|e| usage(e.to_string()))?;
    match format {
        Format::Text => emit(out, render_volume(&v)),
        Format::Json => emit_json(out, &volume_json(&id.to_string(), &v)),
    }
}

fn weinstein(out: &mut dyn Write, family: &str, n: u32) -> Outcome {
    let family = parse_family(family)?;
    let id = ManifoldId::new(family, vec![n]).map_err(|e| usage(e.to_string()))?;
    if id.projective_field().is_none() {
        return Err(usage("weinstein takes rp, cp, hp or op"));
    }
    let i = weinstein_integer(&id).map_err(|e| usage(e.to_string()))?;
    emit(out, i)
}

struct VerifyOptions {
    method: Option<MethodArg>,
    order: usize,
    samples: Option<u64>,
    seed: Option<u64>,
    chunks: u64,
    tol: Option<f64>,
}

fn verify(out: &mut dyn Write, name: &str, opts: &VerifyOptions, format: Format) -> Outcome {
    let target = verification_target(name).map_err(|e| usage(e.to_string()))?;
    let method = opts.method.unwrap_or(if target.chart.dim() <= crate::integrate::MAX_TENSOR_DIM {
        MethodArg::Quad
    } else {
        MethodArg::Mc
    });
    let result: IntegrationResult = match method {
        MethodArg::Quad => integrate_tensor(&target.chart, opts.order).map_err(|e| usage(e.to_string()))?,
        MethodArg::Mc => {
            let seed = opts.seed.ok_or_else(|| usage("--seed is required for Monte Carlo"))?;
            let samples = opts.samples.unwrap_or(DEFAULT_MC_SAMPLES);
            integrate_mc(&target.chart, samples, seed, opts.chunks).map_err(|e| usage(e.to_string()))?
        }
    };
    let exact = target.exact.approx();
    let deviation = (result.estimate - exact).abs();
    let (tol, pass) = match result.method {
        Method::GaussTensor => {
            let tol = opts.tol.unwrap_or(DEFAULT_QUAD_TOL);
            (tol, deviation <= tol * exact.abs())
        }
        Method::MonteCarlo => {
            let tol = opts.tol.unwrap_or(DEFAULT_MC_SIGMAS);
            (tol, deviation <= tol * result.std_error)
        }
    };
    match format {
        Format::Text => {
            let how = match result.method {
                Method::GaussTensor => format!("Gauss-Legendre order {}", opts.order),
                Method::MonteCarlo => "Monte Carlo".to_string(),
            };
            emit(out, format!("chart      {}", target.chart.label()))?;
            emit(out, format!("exact      {}", render_volume(&target.exact)))?;
            emit(out, format!("estimate   {:?} ± {:?}", result.estimate, result.std_error))?;
            emit(out, format!("method     {how}, {} evaluations", result.evaluations))?;
            let band = match result.method {
                Method::GaussTensor => format!("relative error {:.3e} (tolerance {tol:e})", deviation / exact.abs()),
                Method::MonteCarlo => {
                    let sigmas = if result.std_error > 0.0 { deviation / result.std_error } else { f64::INFINITY };
                    format!("deviation {sigmas:.3} standard errors (tolerance {tol})")
                }
            };
            emit(out, format!("check      {band}"))?;
            emit(out, if pass { "PASS" } else { "FAIL" })?;
        }
        Format::Json => {
            let mut record = volume_json(target.chart.label(), &target.exact);
            let map = record.as_object_mut().expect("object");
            map.insert("chart".into(), Value::from(name));
            map.insert(
                "method".into(),
                Value::from(match result.method {
                    Method::GaussTensor => "quad",
                    Method::MonteCarlo => "mc",
                }),
            );
            map.insert("estimate".into(), json!(result.estimate));
            map.insert("std_error".into(), json!(result.std_error));
            map.insert("evaluations".into(), json!(result.evaluations));
            map.insert("tolerance".into(), json!(tol));
            map.insert("pass".into(), json!(pass));
            emit_json(out, &record)?;
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn matrix_rows(s: &GroupSample) -> Vec<Vec<[f64; 2]>> {
    let m = &s.matrix;
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn sample(out: &mut dyn Write, group: &str, count: u64, seed: u64, chunks: u64, format: Format) -> Outcome {
    let group: HaarGroup = group.parse().map_err(|e: crate::haar::HaarError| usage(e.to_string()))?;
    if chunks == 0 {
        return Err(usage("--chunks must be positive"));
    }
    let batch = sample_batch(group, count, seed, chunks);
    match format {
        Format::Json => {
            let samples: Vec<Value> = batch
                .samples
                .iter()
                .map(|s| json!({ "parameters": s.parameters, "matrix": matrix_rows(s) }))
                .collect();
            emit_json(
                out,
                &json!({
                    "group": group.key(),
                    "count": count,
                    "seed": seed,
                    "proposals": batch.proposals,
                    "acceptance_rate": batch.acceptance_rate(),
                    "samples": samples,
                }),
            )
        }
        Format::Text => {
            emit(
                out,
                format!(
                    "# {} samples: {count}, seed {seed}, acceptance rate {:.4}",
                    group.key(),
                    batch.acceptance_rate()
                ),
            )?;
            for (k, s) in batch.samples.iter().enumerate() {
                let params: Vec<String> = s.parameters.iter().map(|p| format!("{p:.6}")).collect();
                emit(out, format!("sample {k} angles [{}]", params.join(", ")))?;
                for row in matrix_rows(s) {
                    let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:+.6}{im:+.6}i")).collect();
                    emit(out, format!("  {}", cells.join("  ")))?;
                }
            }
            Ok(())
        }
    }
}

fn table_rows(kind: TableKind, max: Option<u32>) -> Result<Vec<(String, ExactVolume)>, Failure> {
    let mut rows = Vec::new();
    let mut push = |id: ManifoldId| -> Result<(), Failure> {
        let v = id.volume().map_err(|e| usage(e.to_string()))?;
        rows.push((id.to_string(), v));
        Ok(())
    };
    let id = |family: Family, params: Vec<u32>| ManifoldId::new(family, params).map_err(|e| usage(e.to_string()));
    match kind {
        TableKind::Spheres => {
            // `--max N` lists N spheres, S^0 … S^{N−1}
            for d in 0..max.unwrap_or(6) {
                push(id(Family::Sphere, vec![d])?)?;
            }
        }
        TableKind::Projective => {
            let max = max.unwrap_or(4);
            for field in [Field::R, Field::C, Field::H] {
                for n in 1..=max {
                    push(ManifoldId::projective(field, n).map_err(|e| usage(e.to_string()))?)?;
                }
            }
            for n in 1..=max.min(2) {
                push(ManifoldId::projective(Field::O, n).map_err(|e| usage(e.to_string()))?)?;
            }
        }
        TableKind::Groups => {
            let max = max.unwrap_or(5);
            for family in [Family::SU, Family::U, Family::SO] {
                for n in 2..=max {
                    push(id(family, vec![n])?)?;
                }
            }
            for n in 1..=max {
                push(id(Family::Sp, vec![n])?)?;
            }
            push(id(Family::G2, vec![])?)?;
            push(id(Family::F4, vec![])?)?;
        }
        TableKind::Flags => {
            for n in 2..=max.unwrap_or(4) {
                for p in partitions(n).into_iter().filter(|p| p.len() >= 2) {
                    let v = vol_complex_flag(&p).map_err(|e| usage(e.to_string()))?;
                    rows.push((orbit_label(&p), v));
                }
            }
        }
    }
    Ok(rows)
}

fn table(out: &mut dyn Write, kind: TableKind, max: Option<u32>, format: Format) -> Outcome {
    let rows = table_rows(kind, max)?;
    match format {
        Format::Json => emit_json(out, &Value::Array(rows.iter().map(|(n, v)| volume_json(n, v)).collect())),
        Format::Text => {
            let width = rows.iter().map(|(n, _)| n.chars().count()).max().unwrap_or(0);
            for (name, v) in &rows {
                let pad = width - name.chars().count();
                emit(out, format!("{name}{}  {}", " ".repeat(pad), render_volume(v)))?;
            }
            Ok(())
        }
    }
}

fn orbits(out: &mut dyn Write, n: u32, format: Format) -> Outcome {
    let types = enumerate_spectral_types(n).map_err(|e| usage(e.to_string()))?;
    let mut records = Vec::new();
    for t in &types {
        let vol = orbit_volume(n, &t.partition).map_err(|e| usage(e.to_string()))?;
        records.push((t, vol));
    }
    match format {
        Format::Json => {
            let values: Vec<Value> = records
                .iter()
                .map(|(t, vol)| {
                    json!({
                        "partition": t.partition,
                        "partition_label": t.partition_label(),
                        "orbit": t.orbit_label,
                        "dimension": t.orbit_dim,
                        "is_point": vol.is_point,
                        "volume": vol.volume.to_json(),
                    })
                })
                .collect();
            emit_json(out, &Value::Array(values))
        }
        Format::Text => {
            for (t, vol) in &records {
                let volume = if vol.is_point { "point".to_string() } else { render_volume(&vol.volume) };
                emit(
                    out,
                    format!("{:<12} {:<24} {:>4}  {volume}", t.partition_label(), t.orbit_label, t.orbit_dim),
                )?;
            }
            Ok(())
        }
    }
}

fn clashes(out: &mut dyn Write, format: Format) -> Outcome {
    let list = normalization_clashes().map_err(|e| usage(e.to_string()))?;
    let mut values = Vec::new();
    for c in &list {
        let ratio = c.ratio().map_err(|e| usage(e.to_string()))?;
        match format {
            Format::Text => emit(
                out,
                format!(
                    "{} = {}   {} = {}   ratio {}",
                    c.name_a, c.value_a, c.name_b, c.value_b, render_volume(&ratio)
                ),
            )?,
            Format::Json => values.push(json!({
                "a": volume_json(&c.name_a, &c.value_a),
                "b": volume_json(&c.name_b, &c.value_b),
                "ratio": ratio.to_json(),
            })),
        }
    }
    if format == Format::Json {
        emit_json(out, &Value::Array(values))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("manivol").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn approx_formatting() {
        assert_eq!(format_approx(530.04158), "530.0416");
        assert_eq!(format_approx(0.0), "0");
        assert_eq!(format_approx(1.0e-5), "1.000000e-5");
    }

    #[test]
    fn volume_and_errors() {
        assert_eq!(run_capture(&["volume", "su", "3"]), (0, "√3·π^5 ≈ 530.0416\n".into(), String::new()));
        let (code, _, err) = run_capture(&["volume", "xx", "3"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unknown manifold family") && err.contains("Usage"));
        let (code, _, _) = run_capture(&["volume", "su", "3", "--xi", "2"]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }
}
