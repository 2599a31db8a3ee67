use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nilcent::algebra::{Field, FieldSpec, PrimeField, Rationals};
use nilcent::centralizer::ElementJson;
use nilcent::enumerator::{enumerate_cases, CaseId, Enumeration, FieldMode};
use nilcent::oracle::{cross_check_with, OracleMode, ScanOptions};
use nilcent::witness::{build, complex_demo, special_u_candidates};
use nilcent::{Error, Partition};
use serde_json::json;

/// Nilpotent orbits meeting the nilpotent centralizer of a Jordan type (n,n) matrix.
#[derive(Debug, Parser)]
#[command(name = "nilcent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List every Jordan type met by N(B), with the rows producing it.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Q, Fp:<prime>, or C64 for an algebraically closed field of characteristic 0.
        #[arg(long)]
        field: FieldSpec,
        /// Restrict to these rows, e.g. P1,P3.
        #[arg(long, value_delimiter = ',')]
        cases: Option<Vec<CaseId>>,
        /// Only the rows valid over every field (P1 to P7).
        #[arg(long)]
        guaranteed_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build and verify an element of N(B) with the given Jordan type.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: FieldSpec,
        /// "5,3,3,3" or "(5,3^3)".
        #[arg(long)]
        partition: Partition,
    },
    /// Jordan type of an element given as JSON.
    Jordan {
        #[arg(long)]
        field: FieldSpec,
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare the classification with a search over a prime field.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field: FieldSpec,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "NILCENT_THREADS")]
        threads: Option<usize>,
        /// Largest search space accepted in exhaustive mode.
        #[arg(long, default_value_t = nilcent::oracle::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Non-zero u with h_j(u) = 0 and h_k(u) != 0 for the other k < alpha.
    SpecialU {
        #[arg(long)]
        j: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        field: FieldSpec,
    },
    /// Print the classification table, each partition under its first row.
    Table {
        #[arg(long)]
        n: usize,
        /// Compare against table_n<N>.txt in this directory.
        #[arg(long, env = "NILCENT_GOLDEN_DIR")]
        golden_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

/// Failure with its exit code: 1 for a mismatch, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::WitnessNotFound { .. } => Failure::mismatch(e.to_string()),
            _ => Failure::input(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn emit(text: &str) {
    // A closed pipe downstream (`| head`) is not an error worth a panic.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json(value: &impl serde::Serialize) {
    emit(&format!("{}\n", serde_json::to_string_pretty(value).expect("serializable")));
}

fn enumeration_mode(field: FieldSpec, guaranteed_only: bool) -> FieldMode {
    if guaranteed_only {
        return FieldMode::GuaranteedOnly;
    }
    match field {
        FieldSpec::Rationals => FieldMode::Rationals,
        FieldSpec::PrimeField(p) => FieldMode::Finite(p),
        FieldSpec::ComplexFloat64 => FieldMode::ClosedChar0,
    }
}

fn run_enumerate(n: usize, field: FieldSpec, cases: Option<Vec<CaseId>>, guaranteed_only: bool, as_json: bool) -> CmdResult {
    let cases = cases.unwrap_or_else(|| CaseId::ALL.to_vec());
    let e = enumerate_cases(n, enumeration_mode(field, guaranteed_only), &cases)?;
    if as_json {
        print_json(&e.classes);
        return Ok(());
    }
    for class in &e.classes {
        let rows: Vec<String> = class.provenance.iter().map(|c| c.to_string()).collect();
        let tag = if class.field_dependent { "  [field dependent]" } else { "" };
        emit(&format!("{}  {}{tag}\n", class.partition, rows.join(" ")));
    }
    emit(&format!("{} classes\n", e.classes.len()));
    Ok(())
}

fn run_witness_in<F: Field>(n: usize, field: F, partition: &Partition) -> CmdResult {
    let mode = enumeration_mode(field.spec(), false);
    let e = enumerate_cases(n, mode, &CaseId::ALL)?;
    let class = e.get(partition).ok_or_else(|| {
        Failure::mismatch(format!("{partition} is not among the Jordan types of N(B) for n={n}"))
    })?;
    let w = build(n, class, field)?;
    print_json(&w.to_json());
    Ok(())
}

fn run_witness(n: usize, field: FieldSpec, partition: &Partition) -> CmdResult {
    match field {
        FieldSpec::Rationals => run_witness_in(n, Rationals, partition),
        FieldSpec::PrimeField(p) => run_witness_in(n, PrimeField::new(p)?, partition),
        FieldSpec::ComplexFloat64 => Err(Failure::input("witness needs an exact field (Q or Fp:<prime>)")),
    }
}

fn run_jordan_in<F: Field>(doc: &ElementJson, field: F, as_json: bool) -> CmdResult {
    let e = doc.to_element(field)?;
    let ty = e.jordan_type()?;
    let profile = e.rank_profile()?;
    if as_json {
        print_json(&json!({ "partition": ty, "rank_profile": profile }));
    } else {
        emit(&format!("{ty}\n"));
    }
    Ok(())
}

fn run_jordan(field: FieldSpec, path: &PathBuf, as_json: bool) -> CmdResult {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let doc: ElementJson = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("bad element document {}: {e}", path.display())))?;
    match field {
        FieldSpec::Rationals => run_jordan_in(&doc, Rationals, as_json),
        FieldSpec::PrimeField(p) => run_jordan_in(&doc, PrimeField::new(p)?, as_json),
        FieldSpec::ComplexFloat64 => Err(Failure::input("jordan needs an exact field (Q or Fp:<prime>)")),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_verify(n: usize, field: FieldSpec, mode: Mode, samples: u64, seed: u64, threads: Option<usize>, budget: u64) -> CmdResult {
    let FieldSpec::PrimeField(p) = field else {
        return Err(Failure::input("verify searches a prime field; use --field Fp:<prime>"));
    };
    if threads == Some(0) {
        return Err(Failure::input("--threads must be positive"));
    }
    let mode = match mode {
        Mode::Exhaustive => OracleMode::Exhaustive,
        Mode::Sample => OracleMode::Sampled { count: samples, seed },
    };
    let report = cross_check_with(n, p, mode, ScanOptions { budget, threads })?;
    print_json(&report);
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::mismatch(format!(
            "extras {:?}, missing guaranteed {:?}",
            report.extras.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            report.missing_guaranteed.iter().map(|p| p.to_string()).collect::<Vec<_>>()
        )))
    }
}

fn run_special_u_in<F: Field>(j: usize, alpha: usize, field: F) -> CmdResult {
    let found = special_u_candidates(j, alpha, field)?;
    let fmt: Vec<String> = found.iter().map(|u| field.format_elem(u)).collect();
    print_json(&json!({
        "j": j,
        "alpha": alpha,
        "field": field.spec(),
        "u": fmt.first(),
        "candidates": fmt,
    }));
    Ok(())
}

fn run_special_u(j: usize, alpha: usize, field: FieldSpec) -> CmdResult {
    match field {
        FieldSpec::Rationals => run_special_u_in(j, alpha, Rationals),
        FieldSpec::PrimeField(p) => run_special_u_in(j, alpha, PrimeField::new(p)?),
        FieldSpec::ComplexFloat64 => {
            print_json(&complex_demo(j, alpha)?);
            Ok(())
        }
    }
}

fn run_table(n: usize, golden_dir: Option<PathBuf>) -> CmdResult {
    let e: Enumeration = enumerate_cases(n, FieldMode::ClosedChar0, &CaseId::ALL)?;
    let table = e.render_table();
    emit(&table);
    let Some(dir) = golden_dir else {
        return Ok(());
    };
    let path = dir.join(format!("table_n{n}.txt"));
    let golden = fs::read_to_string(&path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    if golden == table {
        return Ok(());
    }
    let diff: Vec<String> = table
        .lines()
        .zip(golden.lines())
        .filter(|(a, b)| a != b)
        .map(|(a, b)| format!("  got:    {a}\n  golden: {b}"))
        .collect();
    Err(Failure::mismatch(format!("table differs from {}:\n{}", path.display(), diff.join("\n"))))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Enumerate { n, field, cases, guaranteed_only, json } => {
            run_enumerate(n, field, cases, guaranteed_only, json)
        }
        Command::Witness { n, field, partition } => run_witness(n, field, &partition),
        Command::Jordan { field, element, json } => run_jordan(field, &element, json),
        Command::Verify { n, field, mode, samples, seed, threads, budget } => {
            run_verify(n, field, mode, samples, seed, threads, budget)
        }
        Command::SpecialU { j, alpha, field } => run_special_u(j, alpha, field),
        Command::Table { n, golden_dir } => run_table(n, golden_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
