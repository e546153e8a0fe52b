//! Throughput measurement: indexed retrieval against a naive dense scorer.

use std::collections::HashMap;
use std::hint::black_box;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::SearchIndex;
use crate::retrieval::{retrieve_batch, retrieve_batch_queries, retrieve_with, Query};
use crate::scoring::{tf_component, Bm25Params};

/// Scores every document against every query token at query time from raw
/// per-document term counts, then fully sorts. This is the lazy baseline
/// the eager index is measured against.
#[derive(Debug)]
pub struct NaiveScorer {
    params: Bm25Params,
    avg_len: f64,
    doc_lengths: Vec<u32>,
    doc_terms: Vec<HashMap<u32, u32>>,
    idf: Vec<f64>,
}

impl NaiveScorer {
    /// Tokenizes `texts` (the corpus the index was built from, in order)
    /// with the index's tokenizer and vocabulary.
    pub fn new<'a>(index: &SearchIndex, texts: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let tokenizer = index.tokenizer();
        let vocab = index.vocab();
        let mut doc_terms = Vec::with_capacity(index.num_docs());
        let mut doc_lengths = Vec::with_capacity(index.num_docs());
        for text in texts {
            let mut terms = HashMap::new();
            let ids = tokenizer.tokenize_query(text, vocab);
            for &t in &ids {
                *terms.entry(t).or_insert(0) += 1;
            }
            doc_lengths.push(ids.len() as u32);
            doc_terms.push(terms);
        }
        if doc_lengths != index.stats().doc_lengths {
            return Err(Error::Structural(
                "corpus does not match the index it is compared against".into(),
            ));
        }
        let params = *index.params();
        let num_docs = index.stats().num_docs;
        let idf = vocab
            .doc_frequencies()
            .iter()
            .map(|&df| crate::scoring::idf(params.variant, df, num_docs))
            .collect::<Result<_>>()?;
        Ok(Self {
            params,
            avg_len: index.stats().avg_len,
            doc_lengths,
            doc_terms,
            idf,
        })
    }

    pub fn score(&self, query: &Query) -> Result<Vec<f64>> {
        let mut scores = vec![0.0; self.doc_terms.len()];
        for &t in &query.token_ids {
            let idf = self.idf[t as usize];
            for (d, terms) in self.doc_terms.iter().enumerate() {
                let tf = terms.get(&t).copied().unwrap_or(0);
                scores[d] += idf * tf_component(&self.params, tf, self.doc_lengths[d], self.avg_len)?;
            }
        }
        Ok(scores)
    }

    /// Full argsort, descending, ties by index.
    pub fn retrieve(&self, query: &Query, k: usize) -> Result<Vec<u32>> {
        let scores = self.score(query)?;
        let mut order: Vec<u32> = (0..scores.len() as u32).collect();
        order.sort_by(|&a, &b| {
            scores[b as usize]
                .total_cmp(&scores[a as usize])
                .then(a.cmp(&b))
        });
        order.truncate(k);
        Ok(order)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    pub k: usize,
    pub repetitions: usize,
    pub workers: usize,
    pub ordered: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            k: 10,
            repetitions: 3,
            workers: 1,
            ordered: true,
        }
    }
}

/// Queries per second for each path, median over repetitions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub num_queries: usize,
    pub num_docs: usize,
    pub k: usize,
    pub repetitions: usize,
    pub workers: usize,
    pub aggregate: String,
    /// Pre-tokenized queries, one thread.
    pub qps_retrieve: f64,
    /// Tokenization plus retrieval, one thread.
    pub qps_end_to_end: f64,
    pub qps_retrieve_parallel: f64,
    pub qps_end_to_end_parallel: f64,
    /// Naive dense scorer on pre-tokenized queries, one thread.
    pub qps_naive: f64,
    /// `qps_retrieve / qps_naive`
    pub speedup: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn qps<F: FnMut() -> Result<()>>(n: usize, mut f: F) -> Result<f64> {
    let start = Instant::now();
    f()?;
    let secs = start.elapsed().as_secs_f64().max(1e-9);
    Ok(n as f64 / secs)
}

pub fn run_bench(
    index: &SearchIndex,
    naive: &NaiveScorer,
    queries: &[String],
    config: BenchConfig,
) -> Result<BenchReport> {
    if config.repetitions == 0 || config.workers == 0 || config.k == 0 {
        return Err(Error::InvalidParams(
            "k, repetitions and workers must be at least 1".into(),
        ));
    }
    let n = queries.len();
    let parsed: Vec<Query> = queries.iter().map(|q| Query::parse(index, q)).collect();
    let BenchConfig {
        k,
        ordered,
        workers,
        ..
    } = config;

    let mut samples: [Vec<f64>; 5] = Default::default();
    for _ in 0..config.repetitions {
        samples[0].push(qps(n, || {
            let mut scratch = Vec::new();
            for q in &parsed {
                black_box(retrieve_with(index, q, k, ordered, &mut scratch)?);
            }
            Ok(())
        })?);
        samples[1].push(qps(n, || {
            let mut scratch = Vec::new();
            for text in queries {
                let q = Query::parse(index, text);
                black_box(retrieve_with(index, &q, k, ordered, &mut scratch)?);
            }
            Ok(())
        })?);
        samples[2].push(qps(n, || {
            black_box(retrieve_batch_queries(index, &parsed, k, ordered, workers)?);
            Ok(())
        })?);
        samples[3].push(qps(n, || {
            black_box(retrieve_batch(index, queries, k, ordered, workers)?);
            Ok(())
        })?);
        samples[4].push(qps(n, || {
            for q in &parsed {
                black_box(naive.retrieve(q, k)?);
            }
            Ok(())
        })?);
    }
    let [retrieve, end_to_end, retrieve_par, end_to_end_par, naive_qps] = samples.map(median);
    Ok(BenchReport {
        num_queries: n,
        num_docs: index.num_docs(),
        k,
        repetitions: config.repetitions,
        workers,
        aggregate: format!("median of {} repetitions", config.repetitions),
        qps_retrieve: retrieve,
        qps_end_to_end: end_to_end,
        qps_retrieve_parallel: retrieve_par,
        qps_end_to_end_parallel: end_to_end_par,
        qps_naive: naive_qps,
        speedup: retrieve / naive_qps,
    })
}
