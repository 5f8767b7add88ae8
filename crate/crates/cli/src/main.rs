//! `diachrony` command line.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 data error.

mod commands;
mod config;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use diachrony::{ErrorKind, Result};

use config::FileConfig;

#[derive(Parser)]
#[command(name = "diachrony", version, about = "Topic trajectories over diachronic corpora")]
struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Filter, reduce and vectorize a raw corpus.
    Ingest(IngestArgs),
    /// Train a topic model on an ingested corpus.
    Train(TrainArgs),
    /// Print or export the top words of every topic.
    Topics(TopicsArgs),
    /// Per-slot topic trajectories as CSV and SVG.
    Trajectories(TrajectoriesArgs),
    /// Per-slot corpus sizes as CSV and SVG.
    Histogram(HistogramArgs),
    /// Align the topics of two models through a bilingual lexicon.
    Align(AlignArgs),
}

#[derive(Args)]
pub struct IngestArgs {
    /// JSONL file or directory of .txt files.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// `jsonl` or `plaintext-dir`; guessed from the path when omitted.
    #[arg(long)]
    pub format: Option<String>,
    /// Tab-separated `doc_id, surface, lemma, pos` rows.
    #[arg(long)]
    pub annotations: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Directory of extra language profiles (`*.json`).
    #[arg(long)]
    pub profiles: Option<PathBuf>,
    /// Expected corpus language; documents detected as another language are dropped.
    #[arg(long)]
    pub lang: Option<String>,
    /// Keep a document unless another language wins by at least this score gap.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Keep only nouns, adjectives and verbs (needs --annotations).
    #[arg(long)]
    pub pos_filter: bool,
    /// Minimum document frequency [default: 5].
    #[arg(long)]
    pub min_df: Option<u32>,
    /// Maximum document-frequency ratio [default: 0.5].
    #[arg(long)]
    pub max_df: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct TrainArgs {
    /// Bag-of-words file written by `ingest`.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Number of topics [default: 100].
    #[arg(long)]
    pub topics: Option<usize>,
    /// [default: 100]
    #[arg(long)]
    pub passes: Option<u32>,
    /// [default: 50 / topics]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// [default: 0.01]
    #[arg(long)]
    pub beta: Option<f64>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// [default: 1]
    #[arg(long, env = "DIACHRONY_THREADS")]
    pub threads: Option<usize>,
    /// Words per topic in topics.json [default: 30].
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct TopicsArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// [default: 30]
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Directory for topics.json; print only when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SlotArgs {
    /// [default: 25]
    #[arg(long)]
    pub slot_width: Option<i32>,
    /// Merge base slots into one, e.g. `1600:1674`. Repeatable.
    #[arg(long = "merge", value_name = "START:END")]
    pub merges: Vec<String>,
    /// First year of the first slot [default: earliest year rounded down to the slot width].
    #[arg(long)]
    pub min_year: Option<i32>,
    /// [default: latest year]
    #[arg(long)]
    pub max_year: Option<i32>,
    /// Fixed upper end of the y axis.
    #[arg(long)]
    pub y_max: Option<f64>,
}

#[derive(Args)]
pub struct TrajectoriesArgs {
    /// Model file. Repeat to overlay several corpora.
    #[arg(long = "model")]
    pub models: Vec<PathBuf>,
    /// Bag-of-words file the matching model was trained on. One per model.
    #[arg(long = "corpus")]
    pub corpora: Vec<PathBuf>,
    /// Series label per model [default: model language].
    #[arg(long = "label")]
    pub labels: Vec<String>,
    /// `all`, a list like `3,5`, or per-model tuples like `12/40` [default: all].
    #[arg(long)]
    pub topics: Option<String>,
    #[command(flatten)]
    pub slots: SlotArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct HistogramArgs {
    /// Bag-of-words file. Repeat for one series per corpus.
    #[arg(long = "corpus")]
    pub corpora: Vec<PathBuf>,
    #[arg(long = "label")]
    pub labels: Vec<String>,
    /// Plot log10 of the counts; empty slots become gaps.
    #[arg(long)]
    pub log: bool,
    #[command(flatten)]
    pub slots: SlotArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct AlignArgs {
    /// Source model, then target model.
    #[arg(long = "model")]
    pub models: Vec<PathBuf>,
    /// Tab-separated `source_lemma, target_lemma` rows.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// [default: 30]
    #[arg(long)]
    pub top_k: Option<usize>,
    /// `greedy` or `optimal` [default: optimal].
    #[arg(long)]
    pub method: Option<String>,
    /// [default: 0]
    #[arg(long)]
    pub min_score: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    match cli.command {
        Command::Ingest(a) => commands::ingest::run(a, &cfg),
        Command::Train(a) => commands::train::run(a, &cfg),
        Command::Topics(a) => commands::topics::run(a, &cfg),
        Command::Trajectories(a) => commands::trajectories::run(a, &cfg),
        Command::Histogram(a) => commands::histogram::run(a, &cfg),
        Command::Align(a) => commands::align::run(a, &cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format(|buf, record| {
            let level = match record.level() {
                log::Level::Error => "error",
                log::Level::Warn => "warning",
                log::Level::Info => "info",
                log::Level::Debug => "debug",
                log::Level::Trace => "trace",
            };
            writeln!(buf, "{level}: {}", record.args())
        })
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Config => 1,
                ErrorKind::Io => 2,
                ErrorKind::Data => 3,
            })
        }
    }
}
