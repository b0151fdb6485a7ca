use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use er_cli::commands::{
    cmd_estimate, cmd_exact, cmd_gen, cmd_oracle_commute, cmd_oracle_tree, cmd_perturb, cmd_verify,
    CmdResult, EstimateArgs, ExactArgs, GenArgs, OracleArgs, PerturbArgs, VerifyArgs,
};

/// Effective resistances on undirected graphs: exact spectral computation,
/// sublinear local estimation, eigenvalue perturbation bounds, randomized
/// oracles, and hard-instance generators.
#[derive(Parser)]
#[command(name = "er", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact spectral computations on a graph file
    Exact {
        file: PathBuf,
        /// Source vertex (with t: print R(s,t))
        s: Option<usize>,
        /// Target vertex
        t: Option<usize>,
        /// Total effective resistance by both routes
        #[arg(long)]
        total: bool,
        /// Sum of effective resistances over edges (equals n-1)
        #[arg(long)]
        edge_sum: bool,
        /// Two-sided degree bounds on every edge
        #[arg(long)]
        bounds: bool,
    },
    /// Sublinear local estimate of R(s,t) on a degree-2-except-terminals graph
    Estimate {
        file: PathBuf,
        s: usize,
        t: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        /// Additive error target (default epsilon / min degree)
        #[arg(long)]
        delta: Option<f64>,
        /// RNG seed (falls back to ER_SEED, then 0)
        #[arg(long)]
        seed: Option<u64>,
        /// Independent seeded runs to aggregate
        #[arg(long, default_value_t = 1)]
        runs: u64,
        /// Replace the schedule constant a (testing hook)
        #[arg(long)]
        a_override: Option<u64>,
        /// Emit per-run round traces as JSON lines
        #[arg(long)]
        trace_json: bool,
    },
    /// Generate an instance family into a graph file
    Gen {
        /// dumbbell | dumbbell-mod | large-degree | ring | path |
        /// pendant-expander | parallel-paths | regular-expander
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Connected path lengths for parallel-paths, comma separated
        #[arg(long)]
        lengths: Option<String>,
        /// Dead-end path lengths from s, comma separated
        #[arg(long)]
        dangling: Option<String>,
        /// Dead-end path lengths from t, comma separated
        #[arg(long)]
        t_stubs: Option<String>,
        /// Spectral-gap target for regular-expander (default near-Ramanujan)
        #[arg(long)]
        lambda2_target: Option<f64>,
        /// For large-degree: write the base graph instead of the modified one
        #[arg(long)]
        base: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Row-removal eigenvalue bounds with measured slack
    Perturb {
        /// Graph file (use with --edges)
        file: Option<PathBuf>,
        /// Edges to remove, e.g. 0-1,4-7
        #[arg(long)]
        edges: Option<String>,
        /// Dense matrix file (use with --rows)
        #[arg(long)]
        matrix: Option<PathBuf>,
        /// Row indices to remove, e.g. 0,3
        #[arg(long)]
        rows: Option<String>,
        /// Remove edges one at a time, recomputing leverage scores
        #[arg(long)]
        sequential: bool,
    },
    /// Identity cross-checks on a file, or a fixed verification battery
    Verify {
        file: Option<PathBuf>,
        /// Named battery: small
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Randomized validation oracles
    Oracle {
        #[command(subcommand)]
        mode: OracleMode,
    },
}

#[derive(Subcommand)]
enum OracleMode {
    /// Mean commute time of random walks u -> v -> u versus 2mR
    Commute {
        file: PathBuf,
        u: usize,
        v: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Uniform-spanning-tree inclusion frequency of an edge versus R
    Tree {
        file: PathBuf,
        u: usize,
        v: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn resolve_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| std::env::var("ER_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Exact {
            file,
            s,
            t,
            total,
            edge_sum,
            bounds,
        } => cmd_exact(ExactArgs {
            file: &file,
            s,
            t,
            total,
            edge_sum,
            bounds,
        }),
        Command::Estimate {
            file,
            s,
            t,
            epsilon,
            delta,
            seed,
            runs,
            a_override,
            trace_json,
        } => cmd_estimate(EstimateArgs {
            file: &file,
            s,
            t,
            epsilon,
            delta,
            seed: resolve_seed(seed),
            runs,
            a_override,
            trace_json,
        }),
        Command::Gen {
            family,
            n,
            d,
            l,
            lengths,
            dangling,
            t_stubs,
            lambda2_target,
            base,
            seed,
            out,
        } => cmd_gen(GenArgs {
            family: &family,
            n,
            d,
            l,
            lengths: lengths.as_deref(),
            dangling: dangling.as_deref(),
            t_stubs: t_stubs.as_deref(),
            lambda2_target,
            variant_base: base,
            seed: resolve_seed(seed),
            out: &out,
        }),
        Command::Perturb {
            file,
            edges,
            matrix,
            rows,
            sequential,
        } => cmd_perturb(PerturbArgs {
            file: file.as_deref(),
            edges: edges.as_deref(),
            matrix: matrix.as_deref(),
            rows: rows.as_deref(),
            sequential,
        }),
        Command::Verify { file, suite, seed } => cmd_verify(VerifyArgs {
            file: file.as_deref(),
            suite: suite.as_deref(),
            seed: resolve_seed(seed),
        }),
        Command::Oracle { mode } => match mode {
            OracleMode::Commute {
                file,
                u,
                v,
                trials,
                seed,
            } => cmd_oracle_commute(OracleArgs {
                file: &file,
                u,
                v,
                trials,
                seed: resolve_seed(seed),
            }),
            OracleMode::Tree {
                file,
                u,
                v,
                trials,
                seed,
            } => cmd_oracle_tree(OracleArgs {
                file: &file,
                u,
                v,
                trials,
                seed: resolve_seed(seed),
            }),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((report, pass)) => {
            print!("{}", report.render());
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
