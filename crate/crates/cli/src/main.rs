mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "soliton", version, about = "Periodic A(1)_n soliton cellular automaton")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A path given inline or as a file with one word per line.
#[derive(Args, Clone)]
pub struct PathInput {
    /// Rank: letters range over 1..=n+1.
    #[arg(long)]
    pub n: usize,
    /// Path word, e.g. 321113211222111223331111.
    #[arg(long, required_unless_present = "path_file", conflicts_with = "path_file")]
    pub path: Option<String>,
    /// File holding the path word on its first non-empty line.
    #[arg(long)]
    pub path_file: Option<std::path::PathBuf>,
}

/// A soliton content such as ((33222),(41)) with its system size.
#[derive(Args, Clone)]
pub struct ContentInput {
    #[arg(long)]
    pub content: String,
    #[arg(long = "L")]
    pub length: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print rows t = 0..steps of T^t(p).
    Evolve {
        #[command(flatten)]
        input: PathInput,
        /// Evolution "T[r,l]"; l may be "inf".
        #[arg(long, default_value = "T[1,1]")]
        op: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Rigged configuration JSON of a highest path.
    Kkr {
        #[command(flatten)]
        input: PathInput,
    },
    /// Highest path of a rigged configuration JSON file ("-" for stdin).
    KkrInv { input: String },
    /// JSON report: content, energies, vacancies, F, gamma, periods, counts, angle and torus.
    Analyze {
        #[command(flatten)]
        input: PathInput,
    },
    /// Dynamical period of T[r,l] on p from the closed formula.
    Period {
        #[command(flatten)]
        input: PathInput,
        #[arg(long)]
        op: String,
        /// Also measure the period by running the automaton.
        #[arg(long)]
        simulate: bool,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// Number of states with the given content.
    Count {
        #[command(flatten)]
        content: ContentInput,
        /// Also count by enumerating every word.
        #[arg(long)]
        brute: bool,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// Orbit decomposition of a level set.
    Decompose {
        #[command(flatten)]
        content: ContentInput,
        /// Also split the enumerated level set into orbits.
        #[arg(long)]
        brute: bool,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// Path from the tropical theta function of a rigged configuration JSON file.
    ThetaPath {
        input: String,
        /// Time shift "r,l,t" applied to the angle variable first; repeatable.
        #[arg(long = "shift", value_name = "R,L,T")]
        shifts: Vec<String>,
    },
    /// Exact time averages of carrier occupancies.
    Averages {
        #[command(flatten)]
        input: PathInput,
        /// Color of the occupancy; all colors 2..=n+1 when absent.
        #[arg(long)]
        a: Option<usize>,
        /// Carrier capacity or "inf"; all levels when absent.
        #[arg(long)]
        level: Option<String>,
    },
    /// String centers, eigenvalue phases and N' of a path.
    Bethe {
        #[command(flatten)]
        input: PathInput,
    },
    /// Run named verification cases or the level-set suite for one (n, L).
    Verify {
        /// Named case; repeatable. All cases when neither --case nor --n/--L is given.
        #[arg(long = "case")]
        cases: Vec<String>,
        #[arg(long, requires = "length")]
        n: Option<usize>,
        #[arg(long = "L", requires = "n")]
        length: Option<usize>,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        /// Seed for sampled arguments of randomized checks.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Emit the reports as JSON.
        #[arg(long)]
        json: bool,
        /// List the known cases and exit.
        #[arg(long)]
        list: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Evolve { input, op, steps } => commands::evolve(&input, &op, steps),
        Command::Kkr { input } => commands::kkr(&input),
        Command::KkrInv { input } => commands::kkr_inv(&input),
        Command::Analyze { input } => commands::analyze(&input),
        Command::Period { input, op, simulate, budget } => commands::period(&input, &op, simulate, budget),
        Command::Count { content, brute, budget } => commands::count(&content, brute, budget),
        Command::Decompose { content, brute, budget } => commands::decompose(&content, brute, budget),
        Command::ThetaPath { input, shifts } => commands::theta_path(&input, &shifts),
        Command::Averages { input, a, level } => commands::averages(&input, a, level.as_deref()),
        Command::Bethe { input } => commands::bethe(&input),
        Command::Verify { cases, n, length, budget, seed, json, list } => {
            if list {
                soliton_core::verify::CASES.iter().for_each(|c| println!("{}", c));
                return Ok(true);
            }
            commands::verify(&cases, n.zip(length), budget, seed, json)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            match e.downcast_ref::<soliton_core::Error>() {
                Some(core) => eprintln!("error: {}: {}", core.code(), core),
                None => eprintln!("error: {:#}", e),
            }
            ExitCode::from(2)
        }
    }
}
