//! Eager index-time scoring.
//!
//! Every `(token, document)` occurrence is scored at build time and stored
//! shifted by the token's non-occurrence score, `S(t, D) - S_theta(t)`.
//! Tokens that do not occur in a document have no entry, so the matrix stays
//! sparse even for variants that score absent tokens non-zero.

mod matrix;
mod persist;

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scoring::{Bm25Params, CorpusStats, Scorer};
use crate::tokenizer::{count_terms, Tokenizer, TokenizerConfig, Vocabulary, VocabularyBuilder};

pub use matrix::ScoreMatrix;
pub use persist::{load_index, save_index, FORMAT_VERSION, INDEX_FILES};

/// Immutable searchable index. Safe to share across threads.
#[derive(Debug)]
pub struct SearchIndex {
    matrix: ScoreMatrix,
    vocab: Vocabulary,
    stats: CorpusStats,
    params: Bm25Params,
    theta: Vec<f32>,
    doc_external_ids: Vec<String>,
    tokenizer: Tokenizer,
}

impl PartialEq for SearchIndex {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
            && self.vocab == other.vocab
            && self.stats == other.stats
            && self.params == other.params
            && self.theta == other.theta
            && self.doc_external_ids == other.doc_external_ids
            && self.tokenizer.config() == other.tokenizer.config()
    }
}

impl SearchIndex {
    pub(crate) fn from_parts(
        matrix: ScoreMatrix,
        vocab: Vocabulary,
        stats: CorpusStats,
        params: Bm25Params,
        theta: Vec<f32>,
        doc_external_ids: Vec<String>,
        tokenizer_config: TokenizerConfig,
    ) -> Result<Self> {
        let index = Self {
            matrix,
            vocab,
            stats,
            params,
            theta,
            doc_external_ids,
            tokenizer: Tokenizer::new(tokenizer_config),
        };
        index.validate()?;
        Ok(index)
    }

    /// Checks the cross-field invariants that tie matrix, vocabulary and
    /// corpus metadata together.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.matrix.validate()?;
        let (rows, cols) = self.matrix.shape();
        if rows != self.vocab.len() {
            return Err(Error::Structural(format!(
                "matrix has {rows} rows but the vocabulary has {} tokens",
                self.vocab.len()
            )));
        }
        if self.theta.len() != rows {
            return Err(Error::Structural(format!(
                "{} non-occurrence scores for {rows} tokens",
                self.theta.len()
            )));
        }
        let num_docs = self.stats.num_docs as usize;
        if cols != num_docs
            || self.stats.doc_lengths.len() != num_docs
            || self.doc_external_ids.len() != num_docs
        {
            return Err(Error::Structural(format!(
                "document count mismatch: matrix {cols}, stats {}, lengths {}, ids {}",
                num_docs,
                self.stats.doc_lengths.len(),
                self.doc_external_ids.len()
            )));
        }
        for (t, &df) in self.vocab.doc_frequencies().iter().enumerate() {
            if df == 0 || df > self.stats.num_docs {
                return Err(Error::Structural(format!(
                    "token {t} has document frequency {df}"
                )));
            }
            if self.matrix.row_len(t as u32) != df as usize {
                return Err(Error::Structural(format!(
                    "token {t} has {} entries but document frequency {df}",
                    self.matrix.row_len(t as u32)
                )));
            }
        }
        if !self.params.variant.is_shifted() && self.theta.iter().any(|&s| s != 0.0) {
            return Err(Error::Structural(format!(
                "non-zero non-occurrence score for sparse variant {}",
                self.params.variant
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ScoreMatrix {
        &self.matrix
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn params(&self) -> &Bm25Params {
        &self.params
    }

    /// Non-occurrence score per token id.
    pub fn theta(&self) -> &[f32] {
        &self.theta
    }

    pub fn doc_external_ids(&self) -> &[String] {
        &self.doc_external_ids
    }

    pub fn tokenizer(&self) -> &Tokenizer {
        &self.tokenizer
    }

    pub fn tokenizer_config(&self) -> &TokenizerConfig {
        self.tokenizer.config()
    }

    pub fn num_docs(&self) -> usize {
        self.stats.num_docs as usize
    }
}

/// Builds an index from `(external id, text)` pairs.
///
/// Pass one tokenizes and collects document frequencies and lengths. Pass
/// two scores every occurrence in parallel into a document-major buffer and
/// then scatters it into the token-major matrix. Both buffers are allocated
/// at their exact final sizes.
pub fn build_index<I, S, T>(
    corpus: I,
    params: Bm25Params,
    tokenizer_config: TokenizerConfig,
) -> Result<SearchIndex>
where
    I: IntoIterator<Item = (S, T)>,
    S: Into<String>,
    T: AsRef<str>,
{
    params.validate()?;
    let tokenizer = Tokenizer::new(tokenizer_config);

    let mut builder = VocabularyBuilder::new();
    let mut seen = HashSet::new();
    let mut external_ids = Vec::new();
    let mut doc_lengths = Vec::new();
    let mut terms: Vec<(u32, u32)> = Vec::new();
    let mut offsets = vec![0usize];

    for (id, text) in corpus {
        let id = id.into();
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        let doc = count_terms(&tokenizer.tokenize(text.as_ref(), &mut builder));
        builder.count_document(&doc);
        terms.extend_from_slice(&doc.term_counts);
        offsets.push(terms.len());
        doc_lengths.push(doc.length);
        external_ids.push(id);
    }

    let stats = CorpusStats::from_lengths(doc_lengths)?;
    let vocab = builder.finish();
    let scorer = Scorer::new(params, &stats)?;

    let idf = vocab
        .doc_frequencies()
        .iter()
        .map(|&df| scorer.idf(df))
        .collect::<Result<Vec<f64>>>()?;
    let theta = vocab
        .doc_frequencies()
        .iter()
        .map(|&df| scorer.nonoccurrence(df))
        .collect::<Result<Vec<f64>>>()?;

    let mut shifted = vec![0f32; terms.len()];
    {
        let mut per_doc = Vec::with_capacity(stats.doc_lengths.len());
        let mut rest = shifted.as_mut_slice();
        for w in offsets.windows(2) {
            let (head, tail) = rest.split_at_mut(w[1] - w[0]);
            per_doc.push(head);
            rest = tail;
        }
        per_doc
            .into_par_iter()
            .enumerate()
            .try_for_each(|(d, out)| -> Result<()> {
                let len = stats.doc_lengths[d];
                for (slot, &(t, tf)) in out.iter_mut().zip(&terms[offsets[d]..offsets[d + 1]]) {
                    let t = t as usize;
                    *slot = (idf[t] * scorer.tf_component(tf, len)? - theta[t]) as f32;
                }
                Ok(())
            })?;
    }

    let mut indptr = Vec::with_capacity(vocab.len() + 1);
    indptr.push(0u64);
    for &df in vocab.doc_frequencies() {
        indptr.push(indptr.last().unwrap() + u64::from(df));
    }
    let mut cursor: Vec<u64> = indptr[..vocab.len()].to_vec();
    let mut doc_ids = vec![0u32; terms.len()];
    let mut values = vec![0f32; terms.len()];
    for d in 0..stats.doc_lengths.len() {
        for i in offsets[d]..offsets[d + 1] {
            let t = terms[i].0 as usize;
            let pos = cursor[t] as usize;
            doc_ids[pos] = d as u32;
            values[pos] = shifted[i];
            cursor[t] += 1;
        }
    }
    drop(shifted);

    let matrix = ScoreMatrix::from_parts(indptr, doc_ids, values, stats.num_docs)?;
    let theta = theta.into_iter().map(|s| s as f32).collect();
    let config = tokenizer.config().clone();
    SearchIndex::from_parts(matrix, vocab, stats, params, theta, external_ids, config)
}
