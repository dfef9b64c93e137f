//! `lwb`: run workbench checks and bundled demo suites.
//!
//! Exit codes: 0 pass, 1 some failure, 2 inconclusive only, 3 usage or load error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lwb_core::demo;
use lwb_core::report::{Outcome, Report};
use lwb_core::workbench::{load, BoundsOverride};

#[derive(Parser)]
#[command(name = "lwb", version, about = "Logic workbench: translations, algebraization and representation checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named check from a workbench file.
    Check {
        file: PathBuf,
        check: String,
        #[arg(long)]
        nvars: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        premises: Option<usize>,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Exit 0 when the only non-passing verdicts are inconclusive.
        #[arg(long)]
        allow_inconclusive: bool,
    },
    /// Run a bundled suite: acceptance, negative-controls or list.
    Demo {
        suite: String,
        #[arg(long)]
        json: bool,
    },
    /// Load and validate a workbench file.
    Validate { file: PathBuf },
}

const USAGE: u8 = 3;

fn emit(report: &Report, json: bool) {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{report}");
    }
}

fn exit_for(report: &Report, allow_inconclusive: bool) -> ExitCode {
    ExitCode::from(match report.outcome() {
        Outcome::Pass => 0,
        Outcome::Fail => 1,
        Outcome::Inconclusive if allow_inconclusive => 0,
        Outcome::Inconclusive => 2,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Check {
            file,
            check,
            nvars,
            depth,
            premises,
            json,
            allow_inconclusive,
        } => {
            let overrides = BoundsOverride { nvars, depth, premises };
            match load(&file).and_then(|wb| wb.run(&check, overrides)) {
                Ok(r) => {
                    emit(&r, json);
                    exit_for(&r, allow_inconclusive)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(USAGE)
                }
            }
        }
        Command::Demo { suite, json } => match demo::demo(&suite) {
            Ok(r) => {
                emit(&r, json);
                exit_for(&r, false)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(USAGE)
            }
        },
        Command::Validate { file } => match load(&file) {
            Ok(wb) => {
                println!(
                    "{}: {} signature(s), {} logic(s), {} morphism(s), {} quasivariet(ies), {} catalog(s), {} pair(s), {} witness(es)",
                    file.display(),
                    wb.signatures.len(),
                    wb.logics.len(),
                    wb.morphisms.len(),
                    wb.quasivarieties.len(),
                    wb.catalogs.len(),
                    wb.pairs.len(),
                    wb.witnesses.len()
                );
                for c in wb.check_names() {
                    println!("check {c}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(USAGE)
            }
        },
    }
}
