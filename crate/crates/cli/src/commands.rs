use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::time::Instant;

use anyhow::{bail, Context, Result};

use sparselex::bench::{run_bench, BenchConfig, NaiveScorer};
use sparselex::eval::{ndcg_at_k, read_qrels, read_run};
use sparselex::formats::{read_documents, write_documents, write_run};
use sparselex::synth::{generate, SynthConfig};
use sparselex::tokenizer::parse_stopwords;
use sparselex::{
    build_index, load_index, retrieve, retrieve_batch, save_index, Bm25Params, StemmerKind,
    TokenizerConfig,
};

use crate::{BenchArgs, EvalArgs, IndexArgs, SearchArgs, SynthArgs};

pub fn index(args: IndexArgs) -> Result<()> {
    let bm25 = &args.bm25;
    let mut params = Bm25Params::new(bm25.variant).with_k1(bm25.k1).with_b(bm25.b);
    if let Some(delta) = bm25.delta {
        params = params.with_delta(delta);
    }
    params.validate()?;

    let tok = &args.tokenizer;
    let mut config = TokenizerConfig::default();
    if tok.no_stopwords {
        config.stopwords.clear();
    } else if let Some(path) = &tok.stopwords_file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading stopwords from {}", path.display()))?;
        config.stopwords = parse_stopwords(&text);
    }
    if tok.no_stemmer {
        config.stemmer = StemmerKind::None;
    }

    let start = Instant::now();
    let docs = read_documents(&args.corpus)?;
    let index = build_index(
        docs.iter().map(|d| (d.id.as_str(), d.full_text())),
        params,
        config,
    )
    .with_context(|| format!("indexing {}", args.corpus.display()))?;
    save_index(&index, &args.index)?;
    let elapsed = start.elapsed();

    println!("documents\t{}", index.num_docs());
    println!("vocabulary\t{}", index.vocab().len());
    println!("nonzeros\t{}", index.matrix().nnz());
    println!("build_seconds\t{:.3}", elapsed.as_secs_f64());
    Ok(())
}

pub fn search(args: SearchArgs) -> Result<()> {
    if args.k == 0 {
        bail!("--k must be at least 1");
    }
    let index = load_index(&args.index)
        .with_context(|| format!("loading index from {}", args.index.display()))?;
    if args.k > index.num_docs() {
        eprintln!(
            "warning: k={} exceeds the corpus size; returning all {} documents",
            args.k,
            index.num_docs()
        );
    }

    if let Some(text) = &args.query {
        let result = retrieve(&index, text, args.k, args.ordered)?;
        if let Some(path) = &args.output {
            let mut out = create(path)?;
            write_run(&mut out, "0", &result, &args.run_name)?;
            out.flush()?;
        }
        println!("{:>5}  {:>12}  doc", "rank", "score");
        for (rank, (doc, score)) in result.external_ids.iter().zip(&result.scores).enumerate() {
            println!("{:>5}  {:>12.6}  {doc}", rank + 1, score);
        }
        return Ok(());
    }

    let path = args.queries.as_ref().expect("clap requires --queries or --query");
    let queries = read_documents(path)?;
    let texts: Vec<String> = queries.iter().map(|q| q.full_text()).collect();
    let results = retrieve_batch(&index, &texts, args.k, args.ordered, args.workers)?;

    let mut out: Box<dyn Write> = match &args.output {
        Some(path) => Box::new(create(path)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for (query, result) in queries.iter().zip(&results) {
        write_run(&mut out, &query.id, result, &args.run_name)?;
    }
    out.flush()?;
    Ok(())
}

pub fn bench(args: BenchArgs) -> Result<()> {
    let index = load_index(&args.index)
        .with_context(|| format!("loading index from {}", args.index.display()))?;
    let corpus = read_documents(&args.corpus)?;
    let texts: Vec<String> = corpus.iter().map(|d| d.full_text()).collect();
    let naive = NaiveScorer::new(&index, texts.iter().map(String::as_str))?;
    let queries: Vec<String> = read_documents(&args.queries)?
        .iter()
        .map(|q| q.full_text())
        .collect();
    let config = BenchConfig {
        k: args.k,
        repetitions: args.repetitions,
        workers: args.workers,
        ordered: true,
    };
    let report = run_bench(&index, &naive, &queries, config)?;
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.output {
        fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("{json}");
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<()> {
    let run = read_run(&args.run)?;
    let qrels = read_qrels(&args.qrels)?;
    let report = ndcg_at_k(&run, &qrels, args.k)?;
    if report.skipped_unjudged > 0 {
        eprintln!(
            "warning: {} run queries have no judgments and were skipped",
            report.skipped_unjudged
        );
    }
    if report.excluded_no_relevant > 0 {
        eprintln!(
            "warning: {} queries have no relevant documents and were excluded",
            report.excluded_no_relevant
        );
    }
    let mut out = BufWriter::new(io::stdout().lock());
    writeln!(out, "query_id\tndcg@{}", report.k)?;
    for (qid, score) in &report.per_query {
        writeln!(out, "{qid}\t{score:.6}")?;
    }
    writeln!(out, "all\t{:.6}", report.mean)?;
    out.flush()?;
    Ok(())
}

pub fn synth(args: SynthArgs) -> Result<()> {
    let config = SynthConfig {
        num_docs: args.docs,
        vocab_size: args.vocab,
        avg_doc_len: args.avg_len,
        num_queries: args.queries,
        zipf_exponent: args.zipf,
        seed: args.seed,
        ..Default::default()
    };
    let corpus = generate(&config)?;
    fs::create_dir_all(&args.output)
        .with_context(|| format!("creating {}", args.output.display()))?;
    write_documents(args.output.join("corpus.jsonl"), &corpus.docs)?;
    write_documents(args.output.join("queries.jsonl"), &corpus.queries)?;
    let qrels = args.output.join("qrels.tsv");
    fs::write(&qrels, corpus.qrels_tsv()).with_context(|| format!("writing {}", qrels.display()))?;
    println!(
        "wrote {} documents and {} queries to {}",
        corpus.docs.len(),
        corpus.queries.len(),
        args.output.display()
    );
    Ok(())
}

fn create(path: &std::path::Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}
