//! `ctsmin`: validate, convert and minimise conditional transition systems.

mod report;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ctsmin_core::equivalence::{lattice_bisim_fixpoint, naive_with_rounds};
use ctsmin_core::minimise::{minimise_chain, minimise_fixpoint_kernel};
use ctsmin_core::models::{check_upgrade_preserving, coalgebra_encode, cts_to_lats, project, ViolationKind};
use ctsmin_core::{parse_model, serialise_model, Cts, Model};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "ctsmin", version, about = "Conditional transition systems: bisimulation and minimisation")]
struct Cli {
    /// Replace edge labels by their downward closure instead of rejecting them.
    #[arg(long, global = true)]
    close: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a model file.
    Validate { file: PathBuf },
    /// Print the model in the other presentation.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Print the transition system obtained by fixing one condition.
    Project {
        file: PathBuf,
        #[arg(long)]
        condition: String,
    },
    /// Greatest conditional bisimulation as JSON.
    Bisim {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = BisimAlgo::Fixpoint)]
        algo: BisimAlgo,
    },
    /// Decide whether two states are bisimilar under a condition.
    Check {
        file: PathBuf,
        x: String,
        y: String,
        #[arg(long)]
        condition: String,
    },
    /// Run the final chain and print the stages and the quotient as JSON.
    Minimise {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MinimiseAlgo::Chain)]
        algo: MinimiseAlgo,
        /// Also write the quotient in Graphviz format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check that the encoded coalgebra preserves upgrades.
    FiltersCheck { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Cts,
    Lats,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BisimAlgo {
    Fixpoint,
    Naive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MinimiseAlgo {
    Chain,
    FixpointKernel,
}

enum Failure {
    Usage(String),
    Invalid(String),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn load(path: &Path, close: bool) -> Result<Model, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_model(&text, close).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialise"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let close = cli.close;
    match cli.command {
        Command::Validate { file } => match load(&file, close) {
            Ok(model) => {
                let m = model.to_cts();
                println!(
                    "valid {}: {} states, {} actions, {} conditions, {} transitions",
                    match model {
                        Model::Cts(_) => "cts",
                        Model::Lats(_) => "lats",
                    },
                    m.num_states(),
                    m.num_actions(),
                    m.num_conditions(),
                    m.edges().len()
                );
                Ok(0)
            }
            Err(Failure::Invalid(msg)) => {
                eprintln!("{msg}");
                Ok(EXIT_NEGATIVE)
            }
            Err(other) => Err(other),
        },
        Command::Convert { file, to } => {
            let model = load(&file, close)?;
            let out = match to {
                Target::Cts => Model::Cts(model.to_cts()),
                Target::Lats => Model::Lats(model.to_lats()),
            };
            print!("{}", serialise_model(&out));
            Ok(0)
        }
        Command::Project { file, condition } => {
            let m = load(&file, close)?.to_cts();
            let lts = project(&m, &condition).map_err(usage)?;
            for (x, a, y) in lts.edge_names() {
                println!("{x} {a} {y}");
            }
            Ok(0)
        }
        Command::Bisim { file, algo } => {
            let m = load(&file, close)?.to_cts();
            let (name, iterations, relation) = match algo {
                BisimAlgo::Fixpoint => {
                    let fix = lattice_bisim_fixpoint(&cts_to_lats(&m));
                    ("fixpoint", fix.iterations, fix.relation)
                }
                BisimAlgo::Naive => {
                    let (family, rounds) = naive_with_rounds(&m);
                    ("naive", rounds, family.to_lattice_relation(m.conditions()))
                }
            };
            print_json(&report::relation_report(name, iterations, m.states(), m.conditions(), &relation));
            Ok(0)
        }
        Command::Check { file, x, y, condition } => {
            let m = load(&file, close)?.to_cts();
            let (x, y) = (m.state(&x).map_err(usage)?, m.state(&y).map_err(usage)?);
            let phi = m.condition(&condition).map_err(usage)?;
            let fix = lattice_bisim_fixpoint(&cts_to_lats(&m));
            if fix.relation.get(x, y).contains(phi) {
                println!("related");
                Ok(0)
            } else {
                println!("not-related");
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Minimise { file, algo, dot } => {
            let m = load(&file, close)?.to_cts();
            let c = coalgebra_encode(&m);
            let result = match algo {
                MinimiseAlgo::Chain => minimise_chain(&c).map_err(|e| Failure::Invalid(e.to_string()))?,
                MinimiseAlgo::FixpointKernel => minimise_fixpoint_kernel(&m),
            };
            if let Some(path) = dot {
                fs::write(&path, result.quotient.to_dot())
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            print_json(&report::chain_report(&c, m.states(), &result));
            Ok(0)
        }
        Command::FiltersCheck { file } => {
            let m: Cts = load(&file, close)?.to_cts();
            let c = coalgebra_encode(&m);
            match check_upgrade_preserving(&c) {
                Ok(()) => {
                    println!("upgrade-preserving");
                    Ok(0)
                }
                Err(v) => {
                    let kind = match v.kind {
                        ViolationKind::Restriction => "restriction",
                        ViolationKind::Incomparable => "incomparable",
                    };
                    println!(
                        "violation ({kind}): state {} action {} ambient {} filter {}",
                        m.states().name(v.state),
                        m.actions().name(v.action),
                        m.conditions().name(v.ambient),
                        m.conditions().name(v.filter)
                    );
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
