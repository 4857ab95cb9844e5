mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use config::RunConfig;

/// Finite cubical and simplicial sets and discrete homotopy of graphs.
///
/// Exit status: 0 on success or a positive verdict, 1 on a negative
/// verdict, 2 on bad input, 3 when a search budget ran out.
#[derive(Parser, Debug)]
#[command(name = "ntype", version)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// JSON file with defaults for n, trunc_dim, support_bound, slack,
    /// cell_budget, max_steps and seed.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the skeleton/coskeleton identities on standard inclusions.
    VerifyIdentities {
        /// cubical, simplicial or both.
        #[arg(long, default_value = "both")]
        site: String,
        #[arg(long)]
        n: Option<usize>,
        /// Largest dimension tested (default n + 3).
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Check the right lifting property of a map against a generating set.
    CheckRlp {
        /// J, Jn, Jn-prime or In-prime.
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        map: PathBuf,
        /// Dimension bound for the infinite sets (default trunc_dim).
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long)]
        trunc_dim: Option<usize>,
    },
    /// The n-coskeleton of a presheaf.
    Cosk {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        /// Truncation of the output (default that of the input).
        #[arg(long)]
        out_dim: Option<usize>,
    },
    /// The n-skeleton of a presheaf.
    Sk {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Triangulate a cubical set.
    Triangulate {
        #[arg(long)]
        input: PathBuf,
    },
    /// The geometric product of two cubical sets.
    GeometricProduct {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        /// Truncation of the product (default the larger input truncation).
        #[arg(long)]
        trunc_dim: Option<usize>,
    },
    /// Connected components of a graph.
    Pi0 {
        #[arg(long)]
        graph: PathBuf,
    },
    /// The box product of two graphs.
    BoxProduct {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// The pullback of two graph maps with a common target.
    Pullback {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
    },
    /// A presentation of the discrete fundamental group.
    A1 {
        #[arg(long)]
        graph: PathBuf,
        /// Base vertex label (default the first vertex).
        #[arg(long)]
        base: Option<String>,
    },
    /// Bounded search for a homotopy rel endpoints between two paths.
    PathsHomotopic {
        #[arg(long)]
        graph: PathBuf,
        /// Comma-separated vertex labels.
        #[arg(long)]
        p1: String,
        #[arg(long)]
        p2: String,
        /// Window length the homotopy may use.
        #[arg(long)]
        support: Option<usize>,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Bounded check that the nerve of a graph map is an n-fibration.
    CheckGraphFibration {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        support: Option<usize>,
        #[arg(long)]
        slack: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare the fundamental groupoid of a pullback with the pullback of
    /// fundamental groupoids.
    PsiCheck {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        slack: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Cube counts of a nerve fragment.
    NerveStats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        support: Option<usize>,
        #[arg(long)]
        cell_budget: Option<u64>,
    },
    /// Run the invariant suite.
    Selftest {
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

pub struct Report {
    pub human: String,
    pub json: Value,
    pub verdict: Verdict,
}

fn exit_code_of(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<ntype::Error>() {
        Some(ntype::Error::BudgetExceeded(_)) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.config {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
    .and_then(|cfg| commands::run(&cli.command, &cfg));
    match result {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable report"));
            } else {
                print!("{}", report.human);
            }
            ExitCode::from(match report.verdict {
                Verdict::Yes => 0,
                Verdict::No => 1,
                Verdict::Inconclusive => 3,
            })
        }
        Err(e) => {
            let code = exit_code_of(&e);
            if cli.json {
                let kind = if code == 3 { "budget" } else { "input" };
                println!("{}", serde_json::json!({"error": format!("{e:#}"), "kind": kind}));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
