use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ainfty_core::ainfty_persistence::{kappa_barcode, KappaError};
use ainfty_core::filtration_builders::{cech_filtration, infer, lower_star, rips_filtration, BuildError, PointCloud};
use ainfty_core::metrics::{bottleneck, PersistenceDiagram};
use ainfty_core::reduction::{barcode, Barcode, Extended};
use ainfty_core::transfer::TransferError;
use ainfty_core::{ComplexError, Exact, FilteredComplex, PrimeField, Simplex};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_TOP_N: u8 = 4;

#[derive(Parser)]
#[command(name = "ainfty", version, about = "Persistent homology and A-infinity kernel barcodes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Filtration {
    File,
    Rips,
    Cech,
    Lowerstar,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Bottleneck,
    Hausdorff,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Filtered complex text, point-cloud CSV, or (lowerstar) a complex whose
    /// values are ignored.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Filtration::File)]
    filtration: Filtration,
    /// Top simplex dimension for rips and cech (default: degree + 1).
    #[arg(long)]
    max_dim: Option<usize>,
    /// Largest filtration value for rips and cech.
    #[arg(long)]
    max_r: Option<String>,
    /// Read the point cloud as a distance matrix.
    #[arg(long)]
    distance_matrix: bool,
    /// Vertex values for lowerstar, one `vertex value` pair per line.
    #[arg(long)]
    function: Option<PathBuf>,
    /// Prime characteristic of the coefficient field.
    #[arg(long, env = "AINFTY_FIELD", default_value_t = 2)]
    field: u64,
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Also write a static SVG plot of the barcode.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write the run manifest as JSON.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Barcode of homology in one degree.
    Barcode {
        #[command(flatten)]
        input: InputArgs,
        /// Homology degree.
        #[arg(long, short = 'p', default_value_t = 0)]
        degree: usize,
        /// Reduced homology (drops one essential class in degree 0).
        #[arg(long)]
        reduced: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Barcode of the kernel of the n-th transferred operation on reduced homology.
    Ainfty {
        #[command(flatten)]
        input: InputArgs,
        /// Arity of the operation.
        #[arg(long)]
        n: usize,
        /// Homology degree.
        #[arg(long, short = 'p')]
        degree: usize,
        /// Highest operation transferred (at least n).
        #[arg(long)]
        n_max: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distance between two barcodes or two point clouds.
    Distance {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Metric::Bottleneck)]
        metric: Metric,
    },
    /// Count kernel bars containing [epsilon, 3 epsilon] for a point cloud.
    Infer {
        cloud: PathBuf,
        /// Arity of the operation.
        #[arg(long)]
        n: usize,
        /// Homology degree.
        #[arg(long, short = 'p')]
        degree: usize,
        #[arg(long)]
        epsilon: String,
        #[arg(long)]
        distance_matrix: bool,
        #[arg(long, env = "AINFTY_FIELD", default_value_t = 2)]
        field: u64,
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Check that an input parses into a valid filtration.
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    fn validation(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            message: message.into(),
        }
    }
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    input_sha256: String,
    field: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    degrees: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    filtration: Option<Filtration>,
    matching_seed: u64,
    tool_version: &'static str,
    notes: Vec<String>,
}

const INFINITE_NOTE: &str = "an infinite death means the class survives to the final grade of the input";

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<(String, Vec<u8>), Failure> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))?;
    Ok((text, bytes))
}

fn hash(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p);
    }
    hex::encode(h.finalize())
}

fn prime_field(p: u64) -> Result<PrimeField, Failure> {
    PrimeField::new(p).map_err(|e| Failure::parse(e.to_string()))
}

fn parse_exact(s: &str, what: &str) -> Result<Exact, Failure> {
    s.parse().map_err(|e| Failure::parse(format!("{what}: {e}")))
}

/// Line number of the first line listing `s`, for error locations.
fn line_of(text: &str, s: &Simplex) -> Option<usize> {
    text.lines().position(|line| {
        let body = line.split('#').next().unwrap_or("");
        let vs: Option<Vec<u32>> = body.split_whitespace().skip(1).map(|t| t.parse().ok()).collect();
        vs.and_then(|v| Simplex::new(v).ok()).as_ref() == Some(s)
    })
    .map(|i| i + 1)
}

fn complex_failure(e: ComplexError, text: &str) -> Failure {
    let at = |s: &Simplex| line_of(text, s).map_or(String::new(), |l| format!("line {l}: "));
    match &e {
        ComplexError::Parse { .. } => Failure::parse(e.to_string()),
        ComplexError::NonMonotone { simplex, .. } | ComplexError::NotClosed { simplex, .. } => {
            Failure::validation(format!("{}{e}", at(simplex)))
        }
        ComplexError::Duplicate(s) => Failure::validation(format!("{}{e}", at(s))),
    }
}

fn build_failure(e: BuildError) -> Failure {
    match e {
        BuildError::Parse { .. } | BuildError::InvalidEpsilon | BuildError::NotEuclidean => Failure::parse(e.to_string()),
        BuildError::Kappa(k) => kappa_failure(k),
        other => Failure::validation(other.to_string()),
    }
}

fn kappa_failure(e: KappaError) -> Failure {
    match e {
        KappaError::TopNViolation { .. } => Failure {
            code: EXIT_TOP_N,
            message: e.to_string(),
        },
        KappaError::Transfer(TransferError::UnsupportedSigns { .. }) | KappaError::InvalidArity(_) => {
            Failure::parse(e.to_string())
        }
        KappaError::UnreliableDegree { .. } => Failure::parse(format!("{e}; raise --max-dim")),
        other => Failure::validation(other.to_string()),
    }
}

fn read_function(path: &Path) -> Result<(BTreeMap<u32, Exact>, Vec<u8>), Failure> {
    let (text, bytes) = read_text(path)?;
    let mut f = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty());
        let (Some(v), Some(x), None) = (it.next(), it.next(), it.next()) else {
            return Err(Failure::parse(format!("{}: line {}: expected `vertex value`", path.display(), i + 1)));
        };
        let v: u32 = v.parse().map_err(|e| Failure::parse(format!("line {}: {e}", i + 1)))?;
        f.insert(v, parse_exact(x, &format!("line {}", i + 1))?);
    }
    Ok((f, bytes))
}

/// Loads the filtration and the hash of everything read.
fn load(args: &InputArgs, degree: usize) -> Result<(FilteredComplex, String), Failure> {
    let (text, bytes) = read_text(&args.input)?;
    match args.filtration {
        Filtration::File => {
            let k = FilteredComplex::parse_text(&text).map_err(|e| complex_failure(e, &text))?;
            Ok((k, hash(&[&bytes])))
        }
        Filtration::Lowerstar => {
            let path = args.function.as_ref().ok_or_else(|| Failure::parse("lowerstar needs --function"))?;
            let (f, fbytes) = read_function(path)?;
            let shape = FilteredComplex::parse_text(&text).map_err(|e| complex_failure(e, &text))?;
            let k = lower_star(shape.simplices(), &f).map_err(build_failure)?;
            Ok((k, hash(&[&bytes, &fbytes])))
        }
        Filtration::Rips | Filtration::Cech => {
            let cloud = PointCloud::from_csv(&text, args.distance_matrix).map_err(build_failure)?;
            let max_dim = args.max_dim.unwrap_or(degree + 1);
            let max_r = args.max_r.as_deref().map(|r| parse_exact(r, "--max-r")).transpose()?;
            let k = if args.filtration == Filtration::Rips {
                rips_filtration(&cloud, max_dim, max_r.as_ref())
            } else {
                cech_filtration(&cloud, max_dim, max_r.as_ref()).map_err(build_failure)?
            };
            Ok((k.with_skeleton_cap(max_dim), hash(&[&bytes])))
        }
    }
}

fn print_json(value: &impl Serialize) {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    // A closed pipe downstream is not an error for this tool.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn emit(b: &Barcode, output: &OutputArgs, manifest: &RunManifest) -> Result<(), Failure> {
    print_json(b);
    if let Some(path) = &output.svg {
        write_file(path, &svg(b))?;
    }
    if let Some(path) = &output.manifest {
        write_file(path, &serde_json::to_string_pretty(manifest).expect("serializable"))?;
    }
    Ok(())
}

/// Static plot: one horizontal bar per interval over the filtration axis,
/// with ticks at every finite endpoint.
fn svg(b: &Barcode) -> String {
    let (width, left, right, row, top) = (640.0, 40.0, 20.0, 14.0, 20.0);
    let ends = b.endpoints();
    let lo = ends.first().map_or(0.0, Exact::to_f64);
    let mut hi = ends.last().map_or(1.0, Exact::to_f64);
    if hi <= lo {
        hi = lo + 1.0;
    }
    let span = hi - lo;
    let axis_end = width - right;
    let x = |v: f64| left + (v - lo) / (span * 1.1) * (axis_end - left);
    let height = top + row * b.len() as f64 + 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(out, r#"<text x="{left}" y="12">H{} over F{}</text>"#, b.degree, b.field);
    for (i, iv) in b.intervals.iter().enumerate() {
        let y = top + row * i as f64 + row / 2.0;
        let start = x(iv.birth.to_f64());
        let end = match &iv.death {
            Extended::Finite(d) => x(d.to_f64()),
            _ => axis_end,
        };
        let _ = writeln!(
            out,
            r#"<line x1="{start:.2}" y1="{y:.2}" x2="{end:.2}" y2="{y:.2}" stroke="black" stroke-width="4"><title>{iv}</title></line>"#
        );
    }
    let axis_y = top + row * b.len() as f64 + 10.0;
    let _ = writeln!(out, r#"<line x1="{left}" y1="{axis_y}" x2="{axis_end}" y2="{axis_y}" stroke="gray"/>"#);
    for v in &ends {
        let tx = x(v.to_f64());
        let _ = writeln!(
            out,
            r#"<line x1="{tx:.2}" y1="{axis_y}" x2="{tx:.2}" y2="{:.2}" stroke="gray"/><text x="{tx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            axis_y + 4.0,
            axis_y + 16.0,
            v.to_decimal(3)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[derive(Serialize)]
struct DistanceOutput {
    metric: &'static str,
    value: String,
    decimal: String,
}

#[derive(Serialize)]
struct InferOutput {
    count: usize,
    window: (Exact, Exact),
    top_n_verified: bool,
    barcode: Barcode,
    manifest: RunManifest,
}

fn degree_check(k: &FilteredComplex, p: usize) -> Result<(), Failure> {
    if k.is_reliable_degree(p) {
        Ok(())
    } else {
        Err(Failure::parse(format!("degree {p} is not computable below dimension {}; raise --max-dim", p + 1)))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Barcode {
            input,
            degree,
            reduced,
            output,
        } => {
            let field = prime_field(input.field)?;
            let (k, digest) = load(&input, degree)?;
            degree_check(&k, degree)?;
            let b = barcode(&k, field, degree, reduced);
            let manifest = RunManifest {
                command: "barcode".into(),
                input_sha256: digest,
                field: input.field,
                n: None,
                degrees: vec![degree],
                filtration: Some(input.filtration),
                matching_seed: 0,
                tool_version: env!("CARGO_PKG_VERSION"),
                notes: vec![INFINITE_NOTE.into()],
            };
            emit(&b, &output, &manifest)
        }
        Command::Ainfty {
            input,
            n,
            degree,
            n_max,
            output,
        } => {
            let n_max = n_max.unwrap_or(n);
            if n_max < n {
                return Err(Failure::parse(format!("--n-max {n_max} is below --n {n}")));
            }
            let field = prime_field(input.field)?;
            let (k, digest) = load(&input, degree)?;
            let b = kappa_barcode(&k, field, n, degree).map_err(kappa_failure)?;
            let manifest = RunManifest {
                command: "ainfty".into(),
                input_sha256: digest,
                field: input.field,
                n: Some(n),
                degrees: vec![degree],
                filtration: Some(input.filtration),
                matching_seed: 0,
                tool_version: env!("CARGO_PKG_VERSION"),
                notes: vec![INFINITE_NOTE.into(), format!("operations transferred up to arity {n_max}")],
            };
            emit(&b, &output, &manifest)
        }
        Command::Distance { first, second, metric } => {
            let (a, _) = read_text(&first)?;
            let (b, _) = read_text(&second)?;
            let (name, value) = match metric {
                Metric::Bottleneck => {
                    let parse = |s: &str, p: &Path| {
                        PersistenceDiagram::from_json(s).map_err(|e| Failure::parse(format!("{}: {e}", p.display())))
                    };
                    ("bottleneck", bottleneck(&parse(&a, &first)?, &parse(&b, &second)?))
                }
                Metric::Hausdorff => {
                    let pa = PointCloud::from_csv(&a, false).map_err(build_failure)?;
                    let pb = PointCloud::from_csv(&b, false).map_err(build_failure)?;
                    ("hausdorff", Extended::Finite(pa.hausdorff(&pb).map_err(build_failure)?))
                }
            };
            let decimal = match &value {
                Extended::Finite(x) => x.to_decimal(10),
                other => other.to_string(),
            };
            print_json(&DistanceOutput {
                metric: name,
                value: value.to_string(),
                decimal,
            });
            Ok(())
        }
        Command::Infer {
            cloud,
            n,
            degree,
            epsilon,
            distance_matrix,
            field,
            manifest,
        } => {
            let f = prime_field(field)?;
            let (text, bytes) = read_text(&cloud)?;
            let points = PointCloud::from_csv(&text, distance_matrix).map_err(build_failure)?;
            let eps = parse_exact(&epsilon, "--epsilon")?;
            let result = infer(&points, n, degree, &eps, f).map_err(build_failure)?;
            let run_manifest = RunManifest {
                command: "infer".into(),
                input_sha256: hash(&[&bytes]),
                field,
                n: Some(n),
                degrees: vec![degree],
                filtration: Some(if distance_matrix { Filtration::Rips } else { Filtration::Cech }),
                matching_seed: 0,
                tool_version: env!("CARGO_PKG_VERSION"),
                notes: vec![
                    format!("filtration truncated at 3 epsilon = {} and dimension {}", result.window.1, degree + 1),
                    "counted intervals [a, b) satisfy a <= epsilon and b > 3 epsilon".into(),
                ],
            };
            if let Some(path) = &manifest {
                write_file(path, &serde_json::to_string_pretty(&run_manifest).expect("serializable"))?;
            }
            print_json(&InferOutput {
                count: result.count,
                window: result.window,
                top_n_verified: result.top_n_verified,
                barcode: result.barcode,
                manifest: run_manifest,
            });
            Ok(())
        }
        Command::Validate { input } => {
            let (k, _) = load(&input, 0)?;
            let grades = k.grades().len();
            let dim = k.max_dim().map_or("none".to_string(), |d| d.to_string());
            println!("ok: {} simplices, dimension {dim}, {grades} grades", k.len());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
