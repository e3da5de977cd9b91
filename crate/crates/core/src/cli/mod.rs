//! The `venuevec` command line: one subcommand per pipeline stage.
//!
//! Every flag may also be supplied through `--config FILE`, a flat
//! `key = value` file whose keys are long flag names; flags given on the
//! command line win. Usage errors exit with status 2, data errors with 1.

mod commands;
mod config;
mod output;
mod repl;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand};

pub use config::{inject_config, parse_config};
pub use output::{Cell, Format, Table};
pub use repl::run_repl;

#[derive(Debug, Parser)]
#[command(name = "venuevec", version, about = "Periodical embeddings from citation trails")]
pub struct Cli {
    /// Flat `key = value` file supplying values for flags not given here.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads. Training and walking are byte-reproducible only with 1.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Output format for tables printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Citation edges, `citing\tcited` per line.
    #[arg(long, value_name = "FILE")]
    pub edges: PathBuf,
    /// Paper venues, `paper\tperiodical` per line.
    #[arg(long, value_name = "FILE")]
    pub papers: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct OptionalGraphArgs {
    /// Citation edges; enables the cv, jac and PageRank baselines.
    #[arg(long, value_name = "FILE", requires = "papers")]
    pub edges: Option<PathBuf>,
    #[arg(long, value_name = "FILE", requires = "edges")]
    pub papers: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScorerArgs {
    /// Trained embedding (the p2v scorer).
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub graph: OptionalGraphArgs,
    /// Scorers to evaluate; defaults to every scorer whose inputs are given.
    #[arg(long, value_delimiter = ',', value_parser = ["p2v", "cv", "jac"])]
    pub scorers: Vec<String>,
    /// Leave self-citations out of the Jaccard totals.
    #[arg(long)]
    pub jac_exclude_diagonal: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    /// Trail file, one whitespace-separated periodical trail per line.
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Also write the output (context) vectors here.
    #[arg(long, value_name = "FILE")]
    pub out_context: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[arg(long, default_value_t = 100)]
    pub dim: usize,
    #[arg(long, default_value_t = 5)]
    pub negatives: usize,
    #[arg(long, default_value_t = 50)]
    pub min_count: u64,
    #[arg(long, default_value_t = 5)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    pub initial_lr: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub final_lr: f64,
    /// Frequent-periodical subsampling threshold (off when absent).
    #[arg(long)]
    pub subsample: Option<f64>,
    /// Use the full window for every center instead of a random shrink.
    #[arg(long)]
    pub fixed_window: bool,
    #[arg(long, default_value_t = 0.75)]
    pub noise_exponent: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a planted-partition citation network with labels and authors.
    Synth {
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 4)]
        disciplines: usize,
        #[arg(long, default_value_t = 1000)]
        papers_per_discipline: usize,
        #[arg(long, default_value_t = 10)]
        periodicals_per_discipline: usize,
        #[arg(long, default_value_t = 1)]
        sub_disciplines: usize,
        #[arg(long, default_value_t = 0.8)]
        within_probability: f64,
        #[arg(long, default_value_t = 0.2)]
        cross_probability: f64,
        #[arg(long, default_value_t = 5)]
        citations_per_paper: usize,
        #[arg(long, default_value_t = 0.0)]
        sub_discipline_affinity: f64,
        #[arg(long, default_value_t = 0.0)]
        self_venue_probability: f64,
        #[arg(long, default_value_t = 0.0)]
        cross_partner_share: f64,
        /// Fixed same-discipline citation targets per periodical (0 = whole discipline).
        #[arg(long, default_value_t = 0)]
        specialty: usize,
    },
    /// Validate the raw inputs and write the periodical id map and a summary.
    Ingest {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
    },
    /// Sample citation trails and write them as periodical trails.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        /// Number of trails.
        #[arg(long)]
        n: usize,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
    /// Train periodical vectors on a trail file.
    Train(TrainArgs),
    /// Most similar periodicals to one periodical.
    QuerySimilar {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        /// Periodical metadata for display names.
        #[arg(long, value_name = "FILE")]
        periodicals: Option<PathBuf>,
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 10)]
        top_n: usize,
    },
    /// Periodicals closest to `c − a + b`.
    QueryAnalogy {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        periodicals: Option<PathBuf>,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 10)]
        top_n: usize,
    },
    /// Project periodicals onto an axis defined by two sets of periodicals.
    Axis {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        positive: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        negative: Vec<String>,
        /// Only report these periodicals (default: all, by descending score).
        #[arg(long, value_delimiter = ',')]
        ids: Vec<String>,
    },
    /// Discipline-level spectrum along an axis between sets of disciplines.
    Spectrum {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        periodicals: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        positive: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        negative: Vec<String>,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// Build the periodical citation matrix and PageRank scores.
    Baseline {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
    },
    /// Similarity distributions of random, cross, discipline and
    /// sub-discipline pairs.
    EvalPairs {
        #[command(flatten)]
        scorers: ScorerArgs,
        #[arg(long, value_name = "FILE")]
        periodicals: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// Cross-validated kNN discipline prediction.
    EvalKnn {
        #[command(flatten)]
        scorers: ScorerArgs,
        #[arg(long, value_name = "FILE")]
        periodicals: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// k-means clusters of the embedding compared with catalog disciplines.
    EvalCluster {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        periodicals: PathBuf,
        /// Number of clusters (default: number of disciplines).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 10)]
        restarts: usize,
        #[arg(long, default_value_t = crate::evaluation::DEFAULT_ECS_ALPHA)]
        alpha: f64,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// Rank correlation with expert reference rankings.
    EvalRank {
        #[command(flatten)]
        scorers: ScorerArgs,
        #[arg(long, value_name = "FILE")]
        rankings: PathBuf,
        /// Enables the discipline + PageRank baseline (needs the graph too).
        #[arg(long, value_name = "FILE")]
        periodicals: Option<PathBuf>,
        #[arg(long, default_value_t = 0.2)]
        agreement_threshold: f64,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// Venue prediction from cited periodicals.
    EvalVenue {
        #[command(flatten)]
        scorers: ScorerArgs,
        #[arg(long, default_value_t = 10_000)]
        sample: usize,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// Iterated analogy graph between two poles.
    AnalogyGraph {
        #[command(flatten)]
        scorers: ScorerArgs,
        #[arg(long)]
        pole_a: String,
        #[arg(long)]
        pole_b: String,
        /// Periodical the expansion starts from.
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = crate::analogy::DEFAULT_MAX_DEPTH)]
        depth: usize,
        /// Restrict targets to the start periodical's discipline.
        #[arg(long, requires = "periodicals")]
        same_discipline: bool,
        #[arg(long, value_name = "FILE")]
        periodicals: Option<PathBuf>,
        /// Also write the graph as JSON.
        #[arg(long, value_name = "FILE")]
        out_json: Option<PathBuf>,
    },
    /// Author-overlap validation over analogy graphs between disciplines.
    AnalogySuite {
        #[command(flatten)]
        scorers: ScorerArgs,
        #[arg(long, value_name = "FILE")]
        periodicals: PathBuf,
        /// `paper_id\tauthor_id` rows.
        #[arg(long, value_name = "FILE")]
        authorship: PathBuf,
        /// Discipline pair; every pair of disciplines when omitted.
        #[arg(long, requires = "d2")]
        d1: Option<String>,
        #[arg(long, requires = "d1")]
        d2: Option<String>,
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[arg(long, default_value_t = crate::analogy::DEFAULT_MAX_DEPTH)]
        depth: usize,
        #[arg(long)]
        same_discipline: bool,
        /// Exclude only edges on 2-cycles instead of all cyclic edges.
        #[arg(long)]
        two_cycles_only: bool,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// Stability of an axis when built from random subsets of its poles.
    AxisStability {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        periodicals: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        positive: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        negative: Vec<String>,
        /// Periodicals drawn from each pole.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        repeats: usize,
        #[arg(long, value_name = "DIR")]
        results_dir: Option<PathBuf>,
    },
    /// Interactive queries: `similar ID N`, `analogy A B C N`,
    /// `project ID AXIS`, `quit`.
    Repl {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        periodicals: Option<PathBuf>,
        /// Named axes, `name\tpositive_ids\tnegative_ids` per line with
        /// comma-separated ids.
        #[arg(long, value_name = "FILE")]
        axes: Option<PathBuf>,
    },
}

/// Parses `argv`, runs the command, and returns the process exit status.
pub fn run(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = match inject_config(&Cli::command(), argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if cli.workers == 0 {
        let _ = writeln!(err, "error: --workers must be at least 1");
        return 2;
    }
    // Ignore failure: the global pool may already exist (e.g. in tests).
    let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global();
    match commands::execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args().collect(), &mut stdout.lock(), &mut stderr.lock())
}
