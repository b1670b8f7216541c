//! Command-line driver for the invariant pipeline.
//!
//! Subcommands generate unknot tables, run the pipeline and emit every
//! derived table, verify the product form against the direct series,
//! run the symmetry suite, and write product representations. All
//! output is deterministic: the same input and flags produce
//! byte-identical files and reports.
//!
//! Exit codes: 0 success, 1 input or I/O error, 2 usage error,
//! 3 integrality failure, 4 roundtrip mismatch, 5 symmetry failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lmov_core::pipeline::{
    check_integrality, compute_checkn, compute_p, extract_fhat, extract_n, free_energy,
    n_to_small, reformulate_z, run_pipeline, PConvention, PipelineError, WTable,
};
use lmov_core::product::{build_product, roundtrip_verify, run_symmetries, unknot_table};
use lmov_core::qseries::ExpandMode;
use lmov_core::tablefile::{
    read_w_table, write_checkn_table, write_f_table, write_fhat_table, write_n_table,
    write_p_table, write_product, write_smalln_table, write_w_table, write_z_table,
};

const EXIT_INTEGRALITY: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_SYMMETRY: u8 = 5;

#[derive(Parser)]
#[command(name = "lmov", version, about = "Exact pipeline for colored link invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the colored unknot invariant table.
    GenUnknot {
        /// Total color degree of the table.
        #[arg(long, env = "LMOV_DEGREE", default_value_t = 3)]
        degree: u32,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the pipeline and emit every derived table.
    Pipeline {
        /// Input invariant table.
        #[arg(long = "in")]
        input: PathBuf,
        /// Truncate the input to this total color degree.
        #[arg(long, env = "LMOV_DEGREE")]
        degree: Option<u32>,
        /// Weight classes by brackets instead of inverse brackets.
        #[arg(long = "literal-Tinv")]
        literal_tinv: bool,
        /// Directory receiving the emitted tables.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Compare the product-form expansion against the direct series.
    Verify {
        /// Input invariant table.
        #[arg(long = "in")]
        input: PathBuf,
        /// Truncate the input to this total color degree.
        #[arg(long, env = "LMOV_DEGREE")]
        degree: Option<u32>,
        /// Expansion order in q.
        #[arg(long, env = "LMOV_QORDER", default_value_t = 12)]
        q_order: usize,
        /// Expansion branch: q (ascending) or qinv (descending).
        #[arg(long, default_value = "q", value_parser = parse_mode)]
        mode: ExpandMode,
    },
    /// Run the symmetry suite on an invariant table.
    Symmetries {
        /// Input invariant table.
        #[arg(long = "in")]
        input: PathBuf,
        /// Expansion order in q for the series checks.
        #[arg(long, env = "LMOV_QORDER", default_value_t = 12)]
        q_order: usize,
    },
    /// Write the product representation extracted from a table.
    Product {
        /// Input invariant table.
        #[arg(long = "in")]
        input: PathBuf,
        /// Truncate the input to this total color degree.
        #[arg(long, env = "LMOV_DEGREE")]
        degree: Option<u32>,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_mode(text: &str) -> Result<ExpandMode, String> {
    match text {
        "q" => Ok(ExpandMode::Q),
        "qinv" => Ok(ExpandMode::QInverse),
        other => Err(format!("unknown mode `{other}`, expected q or qinv")),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn load_table(path: &Path, degree: Option<u32>) -> Result<WTable, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let (w, _) = read_w_table(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    match degree {
        Some(d) if d > w.degree() => Err(format!(
            "table `{}` stops at degree {}, cannot extend to {d}",
            path.display(),
            w.degree()
        )),
        Some(d) => Ok(w.truncate_to(d)),
        None => Ok(w),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::GenUnknot { degree, out } => {
            write_file(&out, &write_w_table(&unknot_table(degree), "unknot"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pipeline {
            input,
            degree,
            literal_tinv,
            out_dir,
        } => {
            let w = load_table(&input, degree)?;
            let convention = if literal_tinv {
                PConvention::BracketWeights
            } else {
                PConvention::InverseBracketWeights
            };
            let stem = input
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("table")
                .to_string();
            let emit = |suffix: &str, text: String| -> Result<(), String> {
                write_file(&out_dir.join(format!("{stem}.{suffix}.tbl")), &text)
            };
            let z = reformulate_z(&w);
            let f = free_energy(&z).map_err(|e| e.to_string())?;
            let fhat = extract_fhat(&f);
            let p = compute_p(&fhat, convention);
            emit("z", write_z_table(&z))?;
            emit("f", write_f_table(&f))?;
            emit("fhat", write_fhat_table(&fhat))?;
            emit("p", write_p_table(&p))?;
            let report = check_integrality(&p, convention);
            print!("{report}");
            if !report.is_pass() {
                return Ok(ExitCode::from(EXIT_INTEGRALITY));
            }
            let n = extract_n(&p, convention).map_err(|e| e.to_string())?;
            let small_n = n_to_small(&n);
            let check_n = compute_checkn(&small_n);
            emit("n", write_n_table(&n))?;
            emit("smalln", write_smalln_table(&small_n))?;
            emit("checkn", write_checkn_table(&check_n))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            input,
            degree,
            q_order,
            mode,
        } => {
            let w = load_table(&input, degree)?;
            match run_pipeline(&w, PConvention::InverseBracketWeights) {
                Ok(pl) => {
                    let report = roundtrip_verify(&pl, q_order, mode).map_err(|e| e.to_string())?;
                    print!("{report}");
                    if report.is_pass() {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        Ok(ExitCode::from(EXIT_MISMATCH))
                    }
                }
                Err(PipelineError::IntegralityFailed(report)) => {
                    print!("{report}");
                    Ok(ExitCode::from(EXIT_INTEGRALITY))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Symmetries { input, q_order } => {
            let w = load_table(&input, None)?;
            let report = run_symmetries(&w, q_order).map_err(|e| e.to_string())?;
            print!("{report}");
            if report.is_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_SYMMETRY))
            }
        }
        Command::Product {
            input,
            degree,
            out,
        } => {
            let w = load_table(&input, degree)?;
            match run_pipeline(&w, PConvention::InverseBracketWeights) {
                Ok(pl) => {
                    let rep = build_product(&pl.check_n, pl.check_n.degree())
                        .map_err(|e| e.to_string())?;
                    write_file(&out, &write_product(&rep))?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(PipelineError::IntegralityFailed(report)) => {
                    print!("{report}");
                    Ok(ExitCode::from(EXIT_INTEGRALITY))
                }
                Err(e) => Err(e.to_string()),
            }
        }
    }
}
