//! `scem`: train and evaluate small-corpus word embeddings.
//!
//! Six subcommands cover the pipeline end to end: `clean` normalizes raw
//! text into the one-document-per-line working format, `train` fits a
//! single embedding and writes the binary artifact, `eval` scores an
//! artifact against a category or word-pair fixture, `sweep` runs the
//! corpus-size x dimension grid, `dreams` runs the escape/chase
//! rank-distance experiment, and `neighbors` dumps a ranked neighbor list.
//!
//! Every option can come from the command line or from a `--config` JSON
//! file; flags win field by field. Artifacts land in `--output-dir` and
//! each one carries provenance: JSON reports embed it, CSVs lead with `#`
//! comment lines, and formats that cannot hold metadata (cleaned text,
//! binary embeddings) get a `.meta.json` sidecar.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use scem_core::evalsuite::ModelConfig;

#[derive(Parser, Debug)]
#[command(
    name = "scem",
    version,
    about = "Word embeddings for small corpora: LSA, SGNS, and their evaluation",
    after_help = "Flags override --config values, which override built-in defaults.\nSee docs/scem.md for the config schema and artifact formats."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalFlags {
    /// Base seed for every derived random stream [default: 42]
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for experiment grids [default: all cores]
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Single-threaded, bitwise-reproducible runs
    #[arg(long, global = true)]
    deterministic: bool,

    /// Directory receiving every artifact, created if absent [default: .]
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    /// JSON file supplying defaults for global flags and per-command options
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

/// Global settings after merging flags, config file, and defaults.
#[derive(Debug, Clone)]
pub struct Global {
    pub seed: u64,
    pub jobs: usize,
    pub deterministic: bool,
    pub output_dir: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize a raw corpus into one-document-per-line text
    Clean(CleanOpts),
    /// Train one embedding and write the binary artifact
    Train(TrainOpts),
    /// Score an embedding against a categorization or word-pair fixture
    Eval(EvalOpts),
    /// Corpus-size x dimension grid scored by category silhouette
    Sweep(SweepOpts),
    /// Escape/chase rank-distance experiment over dream series
    Dreams(DreamsOpts),
    /// Nearest neighbors of one word as a ranked CSV
    Neighbors(NeighborsOpts),
}

/// Mirrors the command-line surface as a JSON document. Every key is
/// optional; section names match the subcommands.
#[derive(Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    jobs: Option<usize>,
    deterministic: Option<bool>,
    output_dir: Option<PathBuf>,
    clean: CleanOpts,
    train: TrainOpts,
    eval: EvalOpts,
    sweep: SweepOpts,
    dreams: DreamsOpts,
    neighbors: NeighborsOpts,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormatKind {
    /// One document per line of a single text file
    Line,
    /// One document per file inside a directory
    Dir,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Lsa,
    Sgns,
    /// Seeded Gaussian vectors, the no-learning baseline
    Random,
}

impl ModelKind {
    fn to_config(self, window: usize, negatives: usize) -> ModelConfig {
        match self {
            ModelKind::Lsa => ModelConfig::lsa_default(),
            ModelKind::Sgns => ModelConfig::sgns_default(window, negatives),
            ModelKind::Random => ModelConfig::Random,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    /// Category TSV scored by mean silhouette
    Categories,
    /// Word-pair CSV scored by Spearman correlation
    Wordsim,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CleanOpts {
    /// Raw corpus: a text file (line format) or a directory (dir format)
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Input layout [default: line]
    #[arg(long, value_enum)]
    pub format: Option<FormatKind>,

    /// Stopword list: "english", "none", or a path with one word per line
    #[arg(long)]
    pub stopwords: Option<String>,

    /// Output file name, relative to --output-dir [default: cleaned.txt]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainOpts {
    /// Cleaned corpus, one document per line
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Stopword list applied while loading [default: english]
    #[arg(long)]
    pub stopwords: Option<String>,

    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,

    /// Requested dimensionality; LSA clamps it to the corpus rank bound
    #[arg(long)]
    pub dim: Option<usize>,

    /// LSA: extra sketch columns beyond dim [default: 10]
    #[arg(long)]
    pub oversampling: Option<usize>,

    /// LSA: power iterations sharpening the sketch [default: 2]
    #[arg(long)]
    pub power_iterations: Option<usize>,

    /// LSA: keep bare left singular vectors instead of scaling by sigma
    #[arg(long)]
    pub no_scale: bool,

    /// SGNS: maximum context offset [default: 5]
    #[arg(long)]
    pub window: Option<usize>,

    /// SGNS: noise samples per positive pair [default: 5]
    #[arg(long)]
    pub negatives: Option<usize>,

    /// SGNS: passes over the corpus
    #[arg(long)]
    pub epochs: Option<usize>,

    /// SGNS: starting learning rate
    #[arg(long)]
    pub lr_initial: Option<f64>,

    /// SGNS: final learning rate
    #[arg(long)]
    pub lr_final: Option<f64>,

    /// SGNS: frequent-word subsampling threshold, <= 0 disables
    #[arg(long)]
    pub subsample_t: Option<f64>,

    /// Output file name, relative to --output-dir [default: embedding.bin]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalOpts {
    /// Binary embedding written by `scem train`
    #[arg(long)]
    pub embedding: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub test: Option<TestKind>,

    /// Category TSV or word-pair CSV, depending on --test
    #[arg(long)]
    pub fixture: Option<PathBuf>,

    /// Report name, relative to --output-dir [default: eval_<test>.json]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOpts {
    /// Cleaned corpus, one document per line
    #[arg(long)]
    pub corpus: Option<PathBuf>,

    /// Category TSV scoring every cell
    #[arg(long)]
    pub categories: Option<PathBuf>,

    /// Stopword list applied while loading [default: english]
    #[arg(long)]
    pub stopwords: Option<String>,

    /// Nested corpus sizes from the full corpus down to --min-docs [default: 4]
    #[arg(long)]
    pub levels: Option<usize>,

    /// Document count of the smallest level [default: 100]
    #[arg(long)]
    pub min_docs: Option<usize>,

    /// Dimensions to try at every level [default: 7,15,25,50,100,200,400]
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,

    /// Models to compare [default: lsa,sgns]
    #[arg(long, value_delimiter = ',', value_enum)]
    pub models: Option<Vec<ModelKind>>,

    /// SGNS window inside the grid [default: 5]
    #[arg(long)]
    pub window: Option<usize>,

    /// SGNS negatives inside the grid [default: 5]
    #[arg(long)]
    pub negatives: Option<usize>,

    /// Independently seeded runs per cell [default: 1]
    #[arg(long)]
    pub repetitions: Option<usize>,

    /// Artifact prefix: <prefix>.json, <prefix>_cells.csv, <prefix>_summary.csv
    #[arg(long)]
    pub prefix: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DreamsOpts {
    /// Directory of per-series text files, one report per line
    #[arg(long)]
    pub series: Option<PathBuf>,

    /// CSV mapping each series to its documented dream fraction in [0, 1]
    #[arg(long)]
    pub ground_truth: Option<PathBuf>,

    /// Stopword list applied while loading [default: english]
    #[arg(long)]
    pub stopwords: Option<String>,

    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,

    /// Embedding dimensionality [default: 200]
    #[arg(long)]
    pub dim: Option<usize>,

    /// SGNS window [default: 15]
    #[arg(long)]
    pub window: Option<usize>,

    /// SGNS negatives [default: 10]
    #[arg(long)]
    pub negatives: Option<usize>,

    /// Independently seeded repetitions of the whole experiment [default: 10]
    #[arg(long)]
    pub repetitions: Option<usize>,

    /// Series with fewer target occurrences are excluded [default: 5]
    #[arg(long)]
    pub min_target_count: Option<usize>,

    /// Word whose neighborhood is probed [default: run]
    #[arg(long)]
    pub target: Option<String>,

    /// Comma-separated probe forms [default: the eight escape/chase forms]
    #[arg(long, value_delimiter = ',')]
    pub probe_forms: Option<Vec<String>>,

    /// Train one embedding on all series pooled instead of one per series
    #[arg(long)]
    pub whole_corpus: bool,

    /// Artifact prefix: <prefix>.json, <prefix>_points.csv, <prefix>_fits.csv
    #[arg(long)]
    pub prefix: Option<String>,
}

#[derive(Args, Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NeighborsOpts {
    /// Binary embedding written by `scem train`
    #[arg(long)]
    pub embedding: Option<PathBuf>,

    /// Query word
    #[arg(long)]
    pub word: Option<String>,

    /// Neighbors to list [default: 25]
    #[arg(long)]
    pub k: Option<usize>,

    /// Hide words seen fewer than this many times in training [default: 0]
    #[arg(long)]
    pub min_count: Option<u64>,

    /// Output file name, relative to --output-dir [default: neighbors_<word>.csv]
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Field-wise merge: a flag that was given wins, otherwise the config file
/// value (if any) fills in. Bare boolean switches combine with `||` since
/// the command line cannot express an explicit `false`.
macro_rules! fallback {
    ($ty:ty { $($opt:ident),* $(,)? } switches { $($flag:ident),* $(,)? }) => {
        impl $ty {
            fn with_fallback(mut self, file: Self) -> Self {
                $( if self.$opt.is_none() { self.$opt = file.$opt; } )*
                $( self.$flag = self.$flag || file.$flag; )*
                self
            }
        }
    };
}

fallback!(CleanOpts { input, format, stopwords, output } switches {});
fallback!(TrainOpts {
    input, stopwords, model, dim, oversampling, power_iterations,
    window, negatives, epochs, lr_initial, lr_final, subsample_t, output,
} switches { no_scale });
fallback!(EvalOpts { embedding, test, fixture, output } switches {});
fallback!(SweepOpts {
    corpus, categories, stopwords, levels, min_docs, dims, models,
    window, negatives, repetitions, prefix,
} switches {});
fallback!(DreamsOpts {
    series, ground_truth, stopwords, model, dim, window, negatives,
    repetitions, min_target_count, target, probe_forms, prefix,
} switches { whole_corpus });
fallback!(NeighborsOpts { embedding, word, k, min_count, output } switches {});

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    let file: FileConfig = match &cli.global.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("config {}: {e}", path.display()))?;
            serde_json::from_str(&text)
                .map_err(|e| format!("config {}: {e}", path.display()))?
        }
        None => FileConfig::default(),
    };

    let global = Global {
        seed: cli.global.seed.or(file.seed).unwrap_or(42),
        jobs: cli.global.jobs.or(file.jobs).unwrap_or_else(|| {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        }),
        deterministic: cli.global.deterministic || file.deterministic.unwrap_or(false),
        output_dir: cli
            .global
            .output_dir
            .or(file.output_dir)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    std::fs::create_dir_all(&global.output_dir)
        .map_err(|e| format!("output dir {}: {e}", global.output_dir.display()))?;

    // Experiment grids fan out through the global rayon pool; size it once.
    // Deterministic mode forces one thread so every schedule is fixed.
    let threads = if global.deterministic { 1 } else { global.jobs };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .ok();

    match cli.command {
        Command::Clean(o) => commands::clean(&global, o.with_fallback(file.clean)),
        Command::Train(o) => commands::train(&global, o.with_fallback(file.train)),
        Command::Eval(o) => commands::eval(&global, o.with_fallback(file.eval)),
        Command::Sweep(o) => commands::sweep(&global, o.with_fallback(file.sweep)),
        Command::Dreams(o) => commands::dreams(&global, o.with_fallback(file.dreams)),
        Command::Neighbors(o) => commands::neighbors(&global, o.with_fallback(file.neighbors)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
