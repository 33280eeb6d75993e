mod demo_text;
mod descriptor;
mod failure;
mod scheme_json;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ceqss_core::ceqss::{bounds_report, CeQssScheme};
use clap::{Parser, Subcommand};
use serde::Serialize;

use descriptor::SchemeDescriptor;
use failure::{Failure, EXIT_VERIFY};
use scheme_json::SchemeJson;
use verify::Suites;

const DEFAULT_SEED: u64 = 20240917;

#[derive(Parser)]
#[command(name = "ceqss", version, about = "Communication-efficient quantum secret sharing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the scheme and print it as JSON.
    Build { descriptor: PathBuf },
    /// Check conditions and bounds, plus the selected suites.
    Verify {
        descriptor: PathBuf,
        /// Classify every party set with the rank test.
        #[arg(long)]
        access: bool,
        /// Cross-check the rank test against entropies of the encoded state.
        #[arg(long)]
        simulate: bool,
        /// Cross-check the layer-1 thresholds against brute force.
        #[arg(long)]
        tau: bool,
    },
    /// Same as `verify --access`.
    Access { descriptor: PathBuf },
    /// Same as `verify --tau`.
    Tau { descriptor: PathBuf },
    /// Same as `verify --simulate`.
    Simulate { descriptor: PathBuf },
    /// Costs against their lower bounds.
    Bounds { descriptor: PathBuf },
    /// The three-party F_5 example with recovery tables.
    Demo {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Serialize)]
struct BoundsOutput {
    descriptor_hash: String,
    costs: verify::Costs,
    bounds: ceqss_core::ceqss::BoundsReport,
}

fn emit(text: &str) {
    // A closed pipe (e.g. `| head`) is not an error.
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn print_json<T: Serialize>(v: &T) {
    emit(&(serde_json::to_string_pretty(v).expect("output serializes") + "\n"));
}

fn verify_cmd(path: &Path, suites: Suites) -> Result<ExitCode, Failure> {
    let resolved = SchemeDescriptor::load(path)?.resolve()?;
    let report = verify::run(&resolved, suites)?;
    print_json(&report);
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY as u8)
    })
}

fn execute(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Build { descriptor } => {
            let r = SchemeDescriptor::load(&descriptor)?.resolve()?;
            let scheme = CeQssScheme::build(&r.codes, r.t, r.d, r.z)?;
            print_json(&SchemeJson::new(&scheme, r.hash));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            descriptor,
            access,
            simulate,
            tau,
        } => verify_cmd(&descriptor, Suites { access, simulate, tau }),
        Command::Access { descriptor } => verify_cmd(&descriptor, Suites { access: true, ..Default::default() }),
        Command::Tau { descriptor } => verify_cmd(&descriptor, Suites { tau: true, ..Default::default() }),
        Command::Simulate { descriptor } => {
            verify_cmd(&descriptor, Suites { simulate: true, ..Default::default() })
        }
        Command::Bounds { descriptor } => {
            let r = SchemeDescriptor::load(&descriptor)?.resolve()?;
            let scheme = CeQssScheme::build(&r.codes, r.t, r.d, r.z)?;
            let bounds = bounds_report(scheme.params());
            let ok = bounds.storage.satisfied && bounds.cc_t.satisfied && bounds.cc_d.satisfied;
            print_json(&BoundsOutput {
                descriptor_hash: r.hash,
                costs: verify::costs(&scheme),
                bounds,
            });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY as u8) })
        }
        Command::Demo { seed, json } => {
            let run = demo_text::run(seed)?;
            if json {
                print_json(&run);
            } else {
                emit(&demo_text::render(&run));
            }
            let golden = run.golden.iter().all(|g| g.matches);
            Ok(if golden && run.report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY as u8)
            })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            print_json(&f.object);
            ExitCode::from(f.exit as u8)
        }
    }
}
