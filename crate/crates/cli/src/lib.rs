//! Command-line front end for `grasspack`.
//!
//! [`run`] takes the full argument vector and returns the exit code with
//! everything that would be printed, so it can be driven from tests as
//! well as from `main`.

pub mod frame_file;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use grasspack::certify;
use grasspack::construct::{self, DifferenceSet};
use grasspack::metrics;
use grasspack::optimize::{self, Criterion, PackConfig};
use grasspack::{bounds, Field, DEFAULT_TOL};
use serde_json::json;

pub use report::fmt_sig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad arguments or input files.
    Invalid(String),
    /// The numerics broke down.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) => m,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for CliError {}

impl From<grasspack::Error> for CliError {
    fn from(e: grasspack::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    #[value(name = "R", alias = "r")]
    Real,
    #[value(name = "C", alias = "c")]
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Chordal,
    Spectral,
}

#[derive(Debug, Parser)]
#[command(name = "grasspack", version, about = "Subspace packings: bounds, distances, certificates, constructions, search")]
struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every packing bound for (n, d, c).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        c: usize,
        #[arg(long, value_enum, default_value = "R")]
        field: FieldArg,
    },
    /// Certify tight / equi-chordal / equi-isoclinic structure of a frame file.
    Certify {
        frame: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Principal angles and distances between subspaces i and j (1-based).
    Angles {
        frame: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Build a known packing and write it as a frame file.
    Construct {
        /// Output path; the frame goes to standard output when omitted.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Search numerically for a packing.
    Pack {
        #[arg(long, value_enum)]
        field: FieldArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "chordal")]
        criterion: CriterionArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        smoothing: Option<f64>,
        /// Where to write the best frame.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum ConstructKind {
    /// Regular simplex of n unit vectors in R^(n-1).
    Simplex {
        #[arg(long)]
        n: usize,
    },
    /// The 2d vectors ±e_j in R^d.
    Orthoplex {
        #[arg(long)]
        d: usize,
    },
    /// Harmonic frame from an index set in Z_N.
    Harmonic {
        #[arg(long)]
        modulus: usize,
        /// Comma-separated residues, e.g. 1,2,4.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        set: Vec<usize>,
    },
    /// Tensor each vector of a line frame with the c×c identity.
    Tensor {
        etf: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INVALID,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(&cli) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message()),
        },
    }
}

fn json_line<T: serde::Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("report serializes");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    let json_out = cli.format == Format::Json;
    match &cli.command {
        Command::Bounds { n, d, c, field } => {
            let r = bounds::bound_report(*n, *d, *c, (*field).into())?;
            Ok(if json_out {
                json_line(&r)
            } else {
                report::bounds(&r)
            })
        }
        Command::Certify { frame, tol } => {
            let f = frame_file::read(frame, *tol)?;
            let cert = certify::certify(&f, *tol)?;
            Ok(if json_out {
                json_line(&cert)
            } else {
                report::certificate(&f, &cert)
            })
        }
        Command::Angles { frame, i, j, tol } => {
            let f = frame_file::read(frame, *tol)?;
            for (name, idx) in [("--i", i), ("--j", j)] {
                if *idx == 0 || *idx > f.n() {
                    return Err(CliError::Invalid(format!(
                        "{name} = {idx} out of range 1..={}",
                        f.n()
                    )));
                }
            }
            let (a, b) = (f.basis(i - 1), f.basis(j - 1));
            let angles = metrics::principal_angles(a, b)?;
            let pair = report::PairReport {
                i: *i,
                j: *j,
                principal_angles: angles.thetas,
                chordal_distance_sq: metrics::chordal_distance_sq(a, b)?,
                spectral_distance_sq: metrics::spectral_distance_sq(a, b)?,
                geodesic_distance: metrics::geodesic_distance(a, b)?,
            };
            Ok(if json_out {
                json_line(&pair)
            } else {
                report::pair(&pair)
            })
        }
        Command::Construct { out, kind } => {
            let (name, f) = match kind {
                ConstructKind::Simplex { n } => ("simplex", construct::regular_simplex(*n)?),
                ConstructKind::Orthoplex { d } => ("orthoplex", construct::orthoplex(*d)?),
                ConstructKind::Harmonic { modulus, set } => {
                    let ds = DifferenceSet::new(*modulus, set)?;
                    ("harmonic", construct::harmonic_etf(&ds)?)
                }
                ConstructKind::Tensor { etf, c, tol } => {
                    let base = frame_file::read(etf, *tol)?;
                    ("tensor", construct::tensor_eitff(&base, *c)?)
                }
            };
            match out {
                None => Ok(frame_file::to_string(&f)),
                Some(path) => {
                    frame_file::write(path, &f)?;
                    let summary = json!({
                        "construction": name,
                        "path": path.display().to_string(),
                        "field": f.field(),
                        "d": f.d(),
                        "c": f.c(),
                        "n": f.n(),
                    });
                    Ok(if json_out {
                        json_line(&summary)
                    } else {
                        format!(
                            "wrote {name} frame (field {}, d = {}, c = {}, n = {}) to {}\n",
                            f.field(),
                            f.d(),
                            f.c(),
                            f.n(),
                            path.display()
                        )
                    })
                }
            }
        }
        Command::Pack {
            field,
            d,
            c,
            n,
            criterion,
            seed,
            restarts,
            iters,
            step,
            smoothing,
            out,
        } => {
            let defaults = PackConfig::default();
            let cfg = PackConfig {
                criterion: match criterion {
                    CriterionArg::Chordal => Criterion::ChordalOverlap,
                    CriterionArg::Spectral => Criterion::SpectralOverlap,
                },
                iterations: iters.unwrap_or(defaults.iterations),
                restarts: restarts.unwrap_or(defaults.restarts),
                step: step.unwrap_or(defaults.step),
                smoothing: smoothing.unwrap_or(defaults.smoothing),
                seed: *seed,
                ..defaults
            };
            let result = optimize::pack((*field).into(), *d, *c, *n, &cfg)?;
            if let Some(path) = out {
                frame_file::write(path, &result.frame)?;
            }
            Ok(if json_out {
                json_line(&report::pack_json(&result, &cfg))
            } else {
                report::pack(&result, &cfg, out.as_deref())
            })
        }
    }
}
