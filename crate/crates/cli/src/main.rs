//! `flagcode`: build the flag code of PG(n,q), emit its generator matrix and
//! weight spectrum, encode and classify matrices, and run the verification
//! suite. Output is machine-readable and deterministic.

use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use flagcode::analysis::{self, CodewordClass};
use flagcode::code::{self, SpectrumMode};
use flagcode::verify::{self, Check, VerifyConfig};
use flagcode::{Field, FlagSystem, Matrix, Variant};

#[derive(Parser)]
#[command(name = "flagcode", version, about = "Codes from the point-hyperplane geometry of PG(n,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form parameters N, k, d, second weight and maximum weight.
    Params {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Parameters of the code of all point-hyperplane pairs instead.
        #[arg(long)]
        segre: bool,
    },
    /// Generator matrix; column i is flag i of `dump-flags`.
    Genmat {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, value_enum, default_value = "lambda1")]
        variant: VariantArg,
        /// Also write the flag order to this file.
        #[arg(long, value_name = "FILE")]
        dump_flags: Option<PathBuf>,
    },
    /// Weight spectrum: formula list, exhaustive census or seeded sample.
    Spectrum {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "formula")]
        mode: ModeArg,
        #[arg(long, default_value_t = verify::SAMPLE_SIZE)]
        samples: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "SEGRE_THREADS")]
        threads: Option<usize>,
    },
    /// Codeword of the matrix in FILE, as CSV.
    Encode {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
    },
    /// Weight and geometric type of the codeword of the matrix in FILE.
    Classify {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
    },
    /// Run verification checks; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Comma-separated subset of minimality,weights,identities,automorphism,classification.
        #[arg(long, value_delimiter = ',', default_value = "minimality,weights,identities,automorphism,classification")]
        checks: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, env = "SEGRE_THREADS")]
        threads: Option<usize>,
    },
    /// One line per flag: `index point | hyperplane`.
    DumpFlags {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "lambda1")]
        variant: VariantArg,
    },
}

#[derive(Args)]
struct SpaceArgs {
    /// Field order; prime powers are factored.
    #[arg(long, conflicts_with_all = ["p", "e"], required_unless_present = "p")]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, requires = "p", default_value_t = 1)]
    e: u32,
    /// Projective dimension.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
}

impl SpaceArgs {
    fn resolve(&self) -> Result<(Field, usize), Failure> {
        let field = match (self.q, self.p) {
            (Some(q), _) => Field::from_order(q),
            (None, Some(p)) => Field::new(p, self.e),
            (None, None) => unreachable!("clap requires --q or --p"),
        }
        .map_err(usage)?;
        Ok((field, self.n as usize))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Lambda,
    Lambda1,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Lambda => Variant::Lambda,
            VariantArg::Lambda1 => Variant::Lambda1,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Formula,
    Exhaustive,
    Sampled,
}

impl From<ModeArg> for SpectrumMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Formula => SpectrumMode::Formula,
            ModeArg::Exhaustive => SpectrumMode::Exhaustive,
            ModeArg::Sampled => SpectrumMode::Sampled,
        }
    }
}

/// Why a command did not succeed, mapped to the exit status.
enum Failure {
    /// Bad input, exceeded caps, missing seed: exit 2.
    Usage(String),
    /// A verification check failed: exit 1.
    Verification,
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct ParamsOut {
    N: u64,
    k: u64,
    d: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    w_second: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    w_max: Option<u64>,
}

#[derive(Serialize)]
struct MatrixOut<'a> {
    rows: usize,
    cols: usize,
    entries: Vec<&'a [u32]>,
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    mode: SpectrumMode,
    /// Nonzero weights only; the zero word shows up in `counts`.
    weights: Vec<u64>,
    counts: &'a std::collections::BTreeMap<u64, u64>,
    profiles: &'a std::collections::BTreeMap<String, u64>,
}

#[derive(Serialize)]
struct ClassifyOut {
    weight: usize,
    #[serde(flatten)]
    class: CodewordClass,
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("output types serialize");
    s.push('\n');
    s
}

fn csv_rows(m: &Matrix) -> String {
    let mut s = String::new();
    for r in 0..m.rows() {
        let line: Vec<String> = m.row(r).iter().map(u32::to_string).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

fn read_matrix(path: &PathBuf) -> Result<Matrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let m = Matrix::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if !m.is_square() || m.rows() < 2 {
        return Err(usage(format!("{}: expected a square matrix of order at least 2", path.display())));
    }
    Ok(m)
}

fn system_for(m: &Matrix) -> Result<FlagSystem, Failure> {
    FlagSystem::build(m.rows() - 1, m.field(), Variant::Lambda1).map_err(usage)
}

fn run(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Params { space, format, segre } => {
            let (field, n) = space.resolve()?;
            let out = if segre {
                let s = code::segre_code_params(n, &field);
                ParamsOut { N: s.length, k: s.k, d: s.d, w_second: None, w_max: None }
            } else {
                let s = code::params(n, &field);
                ParamsOut { N: s.length, k: s.k, d: s.d, w_second: Some(s.w_second), w_max: Some(s.w_max) }
            };
            Ok(match format {
                Format::Json => json(&out),
                Format::Csv => {
                    let mut head = vec!["N", "k", "d"];
                    let mut vals = vec![out.N, out.k, out.d];
                    if let (Some(w2), Some(wm)) = (out.w_second, out.w_max) {
                        head.extend(["w_second", "w_max"]);
                        vals.extend([w2, wm]);
                    }
                    let vals: Vec<String> = vals.iter().map(u64::to_string).collect();
                    format!("{}\n{}\n", head.join(","), vals.join(","))
                }
            })
        }
        Command::Genmat { space, format, variant, dump_flags } => {
            let (field, n) = space.resolve()?;
            let sys = FlagSystem::build(n, &field, variant.into()).map_err(usage)?;
            let g = code::generator_matrix(&sys).map_err(usage)?;
            if let Some(path) = dump_flags {
                fs::write(&path, sys.dump()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            Ok(match format {
                Format::Csv => csv_rows(&g),
                Format::Json => json(&MatrixOut {
                    rows: g.rows(),
                    cols: g.cols(),
                    entries: (0..g.rows()).map(|r| g.row(r)).collect(),
                }),
            })
        }
        Command::Spectrum { space, mode, samples, seed, threads } => {
            let (field, n) = space.resolve()?;
            let report = code::spectrum(n, &field, mode.into(), samples, seed, threads).map_err(usage)?;
            Ok(json(&SpectrumOut {
                mode: report.mode,
                weights: report.nonzero_weights(),
                counts: &report.counts,
                profiles: &report.profiles,
            }))
        }
        Command::Encode { matrix } => {
            let m = read_matrix(&matrix)?;
            let sys = system_for(&m)?;
            let word = code::encode(&m, &sys).map_err(usage)?;
            let vals: Vec<String> = word.values.iter().map(u32::to_string).collect();
            Ok(format!("{}\n", vals.join(",")))
        }
        Command::Classify { matrix } => {
            let m = read_matrix(&matrix)?;
            let sys = system_for(&m)?;
            let class = analysis::classify(&m, sys.n(), m.field()).map_err(usage)?;
            Ok(json(&ClassifyOut { weight: sys.weight_of(&m), class }))
        }
        Command::Verify { space, checks, seed, threads } => {
            let (field, n) = space.resolve()?;
            let checks = checks
                .iter()
                .map(|c| c.trim().parse::<Check>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            let report = verify::run(&VerifyConfig { field, n, checks, seed, threads }).map_err(usage)?;
            let out = json(&report);
            if report.passed() {
                Ok(out)
            } else {
                // the report still goes to stdout
                print!("{out}");
                Err(Failure::Verification)
            }
        }
        Command::DumpFlags { space, variant } => {
            let (field, n) = space.resolve()?;
            let sys = FlagSystem::build(n, &field, variant.into()).map_err(usage)?;
            Ok(sys.dump())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
