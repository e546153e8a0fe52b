use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "sparselex", version, about = "Eager BM25 lexical search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an index from a JSON Lines corpus.
    Index(IndexArgs),
    /// Run queries against an index.
    Search(SearchArgs),
    /// Measure queries per second against the naive dense scorer.
    Bench(BenchArgs),
    /// Compute NDCG@k of a TREC run against qrels.
    Eval(EvalArgs),
    /// Write a synthetic corpus, queries and qrels.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct IndexArgs {
    /// Corpus file, one {"_id", "text", "title"?} object per line.
    #[arg(long)]
    corpus: PathBuf,
    /// Output index directory.
    #[arg(long)]
    index: PathBuf,
    #[command(flatten)]
    bm25: Bm25Args,
    #[command(flatten)]
    tokenizer: TokenizerArgs,
}

#[derive(Debug, Args)]
struct Bm25Args {
    /// robertson, atire, lucene, bm25l, bm25plus or tfldp.
    #[arg(long, default_value = "lucene")]
    variant: sparselex::Variant,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    k1: f64,
    #[arg(long, default_value_t = 0.75, allow_negative_numbers = true)]
    b: f64,
    /// Defaults to 0.5 for bm25l and tfldp, 1.0 for bm25plus.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
}

#[derive(Debug, Args)]
struct TokenizerArgs {
    /// Keep stopwords.
    #[arg(long)]
    no_stopwords: bool,
    /// Disable Snowball stemming.
    #[arg(long)]
    no_stemmer: bool,
    /// Stopword file overriding the bundled English list.
    #[arg(long, env = "SPARSELEX_STOPWORDS", hide_env_values = true)]
    stopwords_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    index: PathBuf,
    /// Query file, one {"_id", "text"} object per line.
    #[arg(long, conflicts_with = "query", required_unless_present = "query")]
    queries: Option<PathBuf>,
    /// A single query; prints a table instead of a run.
    #[arg(long)]
    query: Option<String>,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Sort results by score. `--ordered=false` keeps selection order.
    #[arg(long, default_value_t = true, action = ArgAction::Set,
          num_args = 0..=1, default_missing_value = "true")]
    ordered: bool,
    /// Write the TREC run here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "sparselex")]
    run_name: String,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    queries: PathBuf,
    /// The corpus the index was built from; feeds the naive scorer.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, default_value_t = 3)]
    repetitions: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    qrels: PathBuf,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Directory receiving corpus.jsonl, queries.jsonl and qrels.tsv.
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    docs: usize,
    #[arg(long, default_value_t = 50_000)]
    vocab: usize,
    #[arg(long, default_value_t = 100)]
    avg_len: usize,
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, default_value_t = 1.0)]
    zipf: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Index(args) => commands::index(args),
        Command::Search(args) => commands::search(args),
        Command::Bench(args) => commands::bench(args),
        Command::Eval(args) => commands::eval(args),
        Command::Synth(args) => commands::synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
