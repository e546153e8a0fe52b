//! Query scoring by slice-and-sum over the score matrix, plus top-k
//! selection and parallel batch retrieval.
//!
//! For a query `q_1..q_n` the exact score of document `D` is
//! `sum_i shifted(q_i, D) + sum_i theta(q_i)`. The first sum touches only
//! the matrix rows of the query tokens; the second is one scalar per query.

mod topk;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::SearchIndex;

pub use topk::{top_k, TopK};

/// A tokenized query. Out-of-vocabulary tokens are already dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Query {
    pub token_ids: Vec<u32>,
    pub raw_text: String,
}

impl Query {
    pub fn parse(index: &SearchIndex, text: &str) -> Self {
        Self {
            token_ids: index.tokenizer().tokenize_query(text, index.vocab()),
            raw_text: text.to_owned(),
        }
    }

    /// Builds a query from raw ids, rejecting ids outside the vocabulary.
    pub fn from_ids(index: &SearchIndex, token_ids: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = token_ids.iter().find(|&&t| t as usize >= index.vocab().len()) {
            return Err(Error::Contract(format!(
                "token id {bad} outside vocabulary of {}",
                index.vocab().len()
            )));
        }
        Ok(Self {
            token_ids,
            raw_text: String::new(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct QueryResult {
    pub doc_indices: Vec<u32>,
    pub external_ids: Vec<String>,
    pub scores: Vec<f64>,
}

/// Sum of the non-occurrence scores of the query tokens, repeats included.
pub fn query_constant(index: &SearchIndex, query: &Query) -> f64 {
    let theta = index.theta();
    query
        .token_ids
        .iter()
        .map(|&t| f64::from(theta[t as usize]))
        .sum()
}

/// Accumulates the shifted scores of every query token into `acc`, which
/// is resized to `|C|` and zeroed first.
fn accumulate(index: &SearchIndex, query: &Query, acc: &mut Vec<f64>) {
    acc.clear();
    acc.resize(index.num_docs(), 0.0);
    for &t in &query.token_ids {
        index.matrix().accumulate_row(t, acc);
    }
}

/// Per-document sums of shifted scores, without the query constant. Ranks
/// documents identically to [`score_query`].
pub fn shifted_scores(index: &SearchIndex, query: &Query) -> Vec<f64> {
    let mut acc = Vec::new();
    accumulate(index, query, &mut acc);
    acc
}

/// Exact scores of every document for `query`.
pub fn score_query(index: &SearchIndex, query: &Query) -> Vec<f64> {
    let mut acc = shifted_scores(index, query);
    let constant = query_constant(index, query);
    if constant != 0.0 {
        acc.iter_mut().for_each(|s| *s += constant);
    }
    acc
}

/// Scores and selects with a caller-owned accumulator. The query constant
/// cannot change the selection, so it is added only to the `k` winners.
pub fn retrieve_with(
    index: &SearchIndex,
    query: &Query,
    k: usize,
    ordered: bool,
    scratch: &mut Vec<f64>,
) -> Result<QueryResult> {
    accumulate(index, query, scratch);
    let TopK { indices, mut scores } = top_k(scratch, k, ordered)?;
    let constant = query_constant(index, query);
    scores.iter_mut().for_each(|s| *s += constant);
    let ids = index.doc_external_ids();
    Ok(QueryResult {
        external_ids: indices.iter().map(|&d| ids[d as usize].clone()).collect(),
        doc_indices: indices,
        scores,
    })
}

pub fn retrieve_query(
    index: &SearchIndex,
    query: &Query,
    k: usize,
    ordered: bool,
) -> Result<QueryResult> {
    retrieve_with(index, query, k, ordered, &mut Vec::new())
}

/// Tokenizes with the index's own tokenizer and vocabulary, then retrieves.
pub fn retrieve(index: &SearchIndex, text: &str, k: usize, ordered: bool) -> Result<QueryResult> {
    retrieve_query(index, &Query::parse(index, text), k, ordered)
}

/// Retrieves tokenized queries on a pool of `workers` threads. Output order
/// matches input order and does not depend on the worker count.
pub fn retrieve_batch_queries(
    index: &SearchIndex,
    queries: &[Query],
    k: usize,
    ordered: bool,
    workers: usize,
) -> Result<Vec<QueryResult>> {
    run_pool(workers, || {
        queries
            .par_iter()
            .map_init(Vec::new, |scratch, q| retrieve_with(index, q, k, ordered, scratch))
            .collect()
    })
}

/// Tokenizes and retrieves raw query strings on a pool of `workers` threads.
pub fn retrieve_batch<S: AsRef<str> + Sync>(
    index: &SearchIndex,
    queries: &[S],
    k: usize,
    ordered: bool,
    workers: usize,
) -> Result<Vec<QueryResult>> {
    run_pool(workers, || {
        queries
            .par_iter()
            .map_init(Vec::new, |scratch, text| {
                let query = Query::parse(index, text.as_ref());
                retrieve_with(index, &query, k, ordered, scratch)
            })
            .collect()
    })
}

fn run_pool<T: Send>(workers: usize, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::Contract("workers must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Contract(format!("cannot start worker pool: {e}")))?;
    pool.install(job)
}
