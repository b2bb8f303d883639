use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use reinhardt::disks::{divergence_scan, scan_csv, DiskOptions, SuspensionData};
use reinhardt::intmat::{classify_spectrum_with, group_spec_verdict, GroupVerdict, SearchParams, SpectrumClass};
use reinhardt::lattice::{complete_to_slnz, factorization_holds, quotient_action};
use reinhardt::logdomain::{
    find_r_orbit_point, ray_closure_check, OrbitOptions, OrbitPointReport, RayReport, RegionSpec, DEFAULT_K_CAP,
};
use reinhardt::steinness::{classify_bundle, classify_domain, width_threshold, BundleSpec, DomainSpec, Verdict};
use reinhardt::{ConvexRegion64, Error, IntMatrix, IntVector};

const SCHEMA_MATRIX: &str = include_str!("../../../schemas/matrix.schema.json");
const SCHEMA_GROUP: &str = include_str!("../../../schemas/group.schema.json");
const SCHEMA_DOMAIN: &str = include_str!("../../../schemas/domain.schema.json");
const SCHEMA_BUNDLE: &str = include_str!("../../../schemas/bundle.schema.json");
const SCHEMA_VECTOR: &str = include_str!("../../../schemas/vector.schema.json");
const SCHEMA_QUOTIENT: &str = include_str!("../../../schemas/quotient.schema.json");
const SCHEMA_REGION: &str = include_str!("../../../schemas/region.schema.json");
const SCHEMA_DISKS: &str = include_str!("../../../schemas/disks.schema.json");
const SCHEMA_THRESHOLD: &str = include_str!("../../../schemas/threshold.schema.json");

#[derive(Parser)]
#[command(name = "reinhardt", version, about = "Serre-class and Steinness verdicts for Reinhardt domains and their flat bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON input: a file path, inline JSON, or `-` for stdin (the default).
    #[arg(long, global = true)]
    input: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 8)]
    max_word_len: usize,
    #[arg(long, global = true, default_value_t = 10_000)]
    closure_cap: usize,
    /// Cap for orbit-hull truncation escalation.
    #[arg(long = "K", global = true, default_value_t = DEFAULT_K_CAP)]
    k: usize,
    /// Initial quadrature grid size.
    #[arg(long = "N", global = true, default_value_t = 1024)]
    n: usize,
    /// Comma-separated radii, strictly decreasing towards 1.
    #[arg(long, global = true, default_value = "1.5,1.1,1.01,1.001")]
    schedule: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Eigenvalue width for `classify-matrix`; containment margin for `disks`.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral case of a GL_2(Z) or GL_3(Z) matrix.
    ClassifyMatrix,
    /// Unit-circle verdict for a finitely generated matrix group.
    ClassifyGroup,
    /// Serre-class verdict for a domain.
    ClassifyDomain,
    /// Steinness verdict for a flat bundle.
    ClassifyBundle,
    /// SL_n(Z) matrix with the given unimodular first column.
    CompleteBasis,
    /// Action of a matrix on Z^n / <v> for a fixed vector v.
    Quotient,
    /// Build a region and query points, rays and real orbits.
    Region {
        /// Standard coordinates of a point to test, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Eigen-coordinates of a seed point for the real-orbit construction.
        #[arg(long, allow_hyphen_values = true)]
        orbit_point: Option<String>,
        /// Eigen-coordinates of a positive-cone point for the ray check.
        #[arg(long, allow_hyphen_values = true)]
        ray: Option<String>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Analytic-disk divergence scan as CSV.
    Disks {
        /// Interior samples per radius.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// The width threshold 2π²/log ρ.
    Threshold {
        #[arg(long)]
        rho: Option<f64>,
    },
}

/// Failure with an exit code and, for malformed input, the expected schema.
struct Failure {
    code: u8,
    message: String,
    schema: Option<&'static str>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VerificationFailed { .. } | Error::NoConvergence { .. } => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string(), schema: None }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into(), schema: None }
}

type Outcome = std::result::Result<(String, u8), Failure>;

fn read_input(common: &Common) -> std::result::Result<String, Failure> {
    match common.input.as_deref() {
        None | Some("-") => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|e| fail(format!("reading stdin: {e}")))?;
            Ok(s)
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => Ok(s.to_string()),
        Some(path) => fs::read_to_string(path).map_err(|e| fail(format!("reading {path}: {e}"))),
    }
}

fn parse<T: for<'de> Deserialize<'de>>(common: &Common, schema: &'static str) -> std::result::Result<T, Failure> {
    let text = read_input(common)?;
    serde_json::from_str(&text).map_err(|e| Failure { code: 1, message: format!("invalid input: {e}"), schema: Some(schema) })
}

fn parse_list(s: &str) -> std::result::Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| fail(format!("bad number {x:?} in {s:?}"))))
        .collect()
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable output");
    s.push('\n');
    s
}

fn params(c: &Common) -> SearchParams {
    SearchParams { max_word_len: c.max_word_len, closure_cap: c.closure_cap }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Bare(IntMatrix),
    Wrapped { matrix: IntMatrix },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupInput {
    Bare(Vec<IntMatrix>),
    Wrapped { generators: Vec<IntMatrix> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorInput {
    Bare(IntVector),
    Wrapped { vector: IntVector },
}

#[derive(Serialize, Deserialize)]
struct QuotientInput {
    matrix: IntMatrix,
    vector: IntVector,
}

#[derive(Serialize, Deserialize)]
struct QuotientOutput {
    matrix: IntMatrix,
    vector: IntVector,
    basis: IntMatrix,
    quotient: IntMatrix,
    factorization_holds: bool,
}

#[derive(Serialize, Deserialize)]
struct PointQuery {
    point: Vec<f64>,
    clearance: f64,
    contains: bool,
}

#[derive(Serialize, Deserialize)]
struct RegionOutput {
    region: RegionSpec,
    kind: String,
    dim: usize,
    degenerate: bool,
    contains_affine_line: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    caveat: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    query: Option<PointQuery>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbit_point: Option<OrbitPointReport<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ray: Option<RayReport>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DisksInput {
    region: RegionSpec,
    /// Eigen-coordinates of the seed point; all ones by default.
    #[serde(default)]
    q: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ThresholdOutput {
    rho: f64,
    width_threshold: f64,
}

fn verdict_code(v: &Verdict) -> u8 {
    if v.tag.is_definitive() {
        0
    } else {
        2
    }
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.command {
        Command::ClassifyMatrix => {
            let m = match parse::<MatrixInput>(c, SCHEMA_MATRIX)? {
                MatrixInput::Bare(m) | MatrixInput::Wrapped { matrix: m } => m,
            };
            let class: SpectrumClass = classify_spectrum_with(&m, c.tol.unwrap_or(1e-12))?;
            Ok((json(&class), 0))
        }
        Command::ClassifyGroup => {
            let gens = match parse::<GroupInput>(c, SCHEMA_GROUP)? {
                GroupInput::Bare(g) | GroupInput::Wrapped { generators: g } => g,
            };
            let v = group_spec_verdict(&gens, &params(c))?;
            let code = if matches!(v, GroupVerdict::Inconclusive { .. }) { 2 } else { 0 };
            Ok((json(&v), code))
        }
        Command::ClassifyDomain => {
            let d: DomainSpec = parse(c, SCHEMA_DOMAIN)?;
            let v = classify_domain(&d, &params(c))?;
            Ok((json(&v), verdict_code(&v)))
        }
        Command::ClassifyBundle => {
            let b: BundleSpec = parse(c, SCHEMA_BUNDLE)?;
            let v = classify_bundle(&b, &params(c))?;
            Ok((json(&v), verdict_code(&v)))
        }
        Command::CompleteBasis => {
            let v = match parse::<VectorInput>(c, SCHEMA_VECTOR)? {
                VectorInput::Bare(v) | VectorInput::Wrapped { vector: v } => v,
            };
            Ok((json(&complete_to_slnz(&v)?), 0))
        }
        Command::Quotient => {
            let q: QuotientInput = parse(c, SCHEMA_QUOTIENT)?;
            let quotient = quotient_action(&q.matrix, &q.vector)?;
            let out = QuotientOutput {
                basis: complete_to_slnz(&q.vector)?,
                factorization_holds: factorization_holds(&q.matrix, &quotient),
                quotient,
                matrix: q.matrix,
                vector: q.vector,
            };
            Ok((json(&out), 0))
        }
        Command::Region { point, orbit_point, ray, samples } => {
            let spec: RegionSpec = parse(c, SCHEMA_REGION)?;
            let mut region: ConvexRegion64 = spec.build()?;
            let query = match point {
                Some(p) => {
                    let x = parse_list(p)?;
                    let clearance = region.clearance(&x)?;
                    Some(PointQuery { point: x, clearance, contains: clearance > 0.0 })
                }
                None => None,
            };
            let orbit_point = match orbit_point {
                Some(q) => {
                    let opts = OrbitOptions { samples: *samples, k_cap: c.k, ..OrbitOptions::default() };
                    let rep = find_r_orbit_point(&region, &parse_list(q)?, &opts)?;
                    region = rep.region.clone();
                    Some(rep)
                }
                None => None,
            };
            let ray = match ray {
                Some(p) => {
                    let (rep, grown) = ray_closure_check(&region, &parse_list(p)?, *samples, 1.0, c.k)?;
                    region = grown;
                    Some(rep)
                }
                None => None,
            };
            let code = if ray.as_ref().is_some_and(|r| !r.passed) { 2 } else { 0 };
            let out = RegionOutput {
                region: region.spec(),
                kind: region.kind().to_string(),
                dim: region.dim(),
                degenerate: region.is_degenerate(),
                contains_affine_line: region.contains_affine_line(),
                caveat: region.affine_line_caveat().map(str::to_string),
                query,
                orbit_point,
                ray,
            };
            Ok((json(&out), code))
        }
        Command::Disks { samples } => {
            let input: DisksInput = parse(c, SCHEMA_DISKS)?;
            let region: ConvexRegion64 = input.region.build()?;
            let q = input.q.unwrap_or_else(|| vec![1.0; region.dim()]);
            let s = SuspensionData::from_region(&region, &q, &OrbitOptions { k_cap: c.k, ..OrbitOptions::default() })?;
            let schedule = parse_list(&c.schedule)?;
            let opts = DiskOptions {
                n: c.n,
                samples: *samples,
                seed: c.seed,
                margin: c.tol.unwrap_or(reinhardt::disks::DEFAULT_MARGIN),
                k_cap: c.k,
            };
            let rows = divergence_scan(&s, &schedule, &opts)?;
            let clean = rows.iter().all(|r| r.containment.violations + r.containment.boundary_violations == 0);
            Ok((scan_csv(&rows), if clean { 0 } else { 2 }))
        }
        Command::Threshold { rho } => {
            let rho = match rho {
                Some(r) => *r,
                None => {
                    #[derive(Deserialize)]
                    struct Rho {
                        rho: f64,
                    }
                    parse::<Rho>(c, SCHEMA_THRESHOLD)?.rho
                }
            };
            Ok((json(&ThresholdOutput { rho, width_threshold: width_threshold(rho)? }), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            let written = match &cli.common.output {
                Some(path) => fs::write(path, &text).map_err(|e| format!("writing {}: {e}", path.display())),
                None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if let Some(schema) = f.schema {
                eprintln!("expected input schema:\n{schema}");
            }
            ExitCode::from(f.code)
        }
    }
}
