use clap::{Args, Parser, Subcommand};
use karb::cli::{self, Flags};
use karb::instance::Instance;
use karb::oracle::OracleBounds;
use karb::Error;
use std::path::PathBuf;
use std::process::ExitCode;

/// Minimum transversals of optimal k-arborescence families.
#[derive(Parser)]
#[command(name = "karb", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProblemArgs {
    /// Instance file.
    instance: PathBuf,
    /// Block minimum-cost arborescences rooted at the root node.
    #[arg(long)]
    rooted: bool,
    /// Root node (overrides the file).
    #[arg(long)]
    root: Option<usize>,
    /// Block the laminar-tight rooted arborescences given by `L` records.
    #[arg(long)]
    l_tight: bool,
    /// Number of arborescences (overrides the file).
    #[arg(long)]
    k: Option<usize>,
    /// Largest member size for the exact pair search.
    #[arg(long)]
    max_pair_set: Option<usize>,
}

#[derive(Args)]
struct OracleArgs {
    /// Largest arborescence size the oracle enumerates.
    #[arg(long, default_value_t = 12)]
    oracle_max_arb_arcs: usize,
    /// Largest digraph the oracle enumerates.
    #[arg(long, default_value_t = 18)]
    oracle_max_arcs: usize,
}

impl OracleArgs {
    fn bounds(&self) -> OracleBounds {
        OracleBounds { max_arb_arcs: self.oracle_max_arb_arcs, max_arcs: self.oracle_max_arcs }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a minimum transversal.
    Solve {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Include the LP solution and dual structure.
        #[arg(long)]
        dump_dual: bool,
        /// Include wall-clock timings (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Check whether an arc set is a (minimum) transversal.
    Verify {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Candidate arc ids, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        arcs: String,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Brute-force report: optima, minimum transversal, root vectors.
    Oracle {
        #[command(flatten)]
        problem: ProblemArgs,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Pipelines against the oracle and invariant checks on random instances.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Oracle arborescence bound; random suites reach 14 arcs.
        #[arg(long, default_value_t = 14)]
        oracle_max_arb_arcs: usize,
        #[arg(long, default_value_t = 18)]
        oracle_max_arcs: usize,
    },
}

fn load(p: &ProblemArgs, dump_dual: bool, timings: bool) -> karb::Result<(cli::Resolved, Flags)> {
    let flags = Flags {
        rooted: p.rooted,
        root: p.root,
        l_tight: p.l_tight,
        k: p.k,
        max_pair_set: p.max_pair_set,
        dump_dual,
        timings,
    };
    Ok((cli::resolve(Instance::from_file(&p.instance)?, &flags)?, flags))
}

fn run(cli: &Cli) -> karb::Result<serde_json::Value> {
    match &cli.command {
        Command::Solve { problem, dump_dual, timings } => {
            let (r, flags) = load(problem, *dump_dual, *timings)?;
            cli::cmd_solve(&r, &flags)
        }
        Command::Verify { problem, arcs, oracle } => {
            let (r, _) = load(problem, false, false)?;
            cli::cmd_verify(&r, &cli::parse_arc_list(arcs)?, oracle.bounds())
        }
        Command::Oracle { problem, oracle } => {
            let (r, _) = load(problem, false, false)?;
            cli::cmd_oracle(&r, oracle.bounds())
        }
        Command::Selftest { seed, count, oracle_max_arb_arcs, oracle_max_arcs } => cli::cmd_selftest(
            *seed,
            *count,
            OracleBounds { max_arb_arcs: *oracle_max_arb_arcs, max_arcs: *oracle_max_arcs },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("karb: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|v| {
        let text = cli::render(&v);
        match &cli.json_out {
            Some(path) => std::fs::write(path, text).map_err(Error::from)?,
            None => print!("{text}"),
        }
        Ok(v)
    });
    match result {
        Ok(v) if v.get("ok") == Some(&serde_json::Value::Bool(false)) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("karb: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
