//! Deterministic synthetic corpora with Zipf-distributed vocabularies.
//!
//! Queries are sampled from the tokens of a target document, which is
//! recorded as the query's single relevant document.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Zipf};

use crate::error::{Error, Result};
use crate::formats::Document;

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub num_docs: usize,
    pub vocab_size: usize,
    /// Document lengths are uniform on `[avg/2, 3*avg/2]`.
    pub avg_doc_len: usize,
    pub num_queries: usize,
    /// Query lengths are uniform on this inclusive range.
    pub query_len: (usize, usize),
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            num_docs: 100_000,
            vocab_size: 50_000,
            avg_doc_len: 100,
            num_queries: 100,
            query_len: (2, 5),
            zipf_exponent: 1.0,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthCorpus {
    pub docs: Vec<Document>,
    pub queries: Vec<Document>,
    /// `(query id, doc id, grade)`
    pub qrels: Vec<(String, String, u32)>,
}

/// Surface form of synthetic word `rank`; survives tokenization unchanged.
pub fn word(rank: u64) -> String {
    format!("w{rank}")
}

pub fn generate(config: &SynthConfig) -> Result<SynthCorpus> {
    if config.num_docs == 0 || config.vocab_size == 0 || config.avg_doc_len == 0 {
        return Err(Error::InvalidParams(
            "documents, vocabulary and length must be positive".into(),
        ));
    }
    let (qmin, qmax) = config.query_len;
    if qmin == 0 || qmin > qmax {
        return Err(Error::InvalidParams(format!("bad query length range {qmin}..={qmax}")));
    }
    let zipf = Zipf::new(config.vocab_size as f64, config.zipf_exponent)
        .map_err(|e| Error::InvalidParams(format!("zipf: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let lo = (config.avg_doc_len / 2).max(1);
    let hi = config.avg_doc_len + config.avg_doc_len / 2;

    let mut ranks: Vec<Vec<u64>> = Vec::with_capacity(config.num_docs);
    let mut docs = Vec::with_capacity(config.num_docs);
    for d in 0..config.num_docs {
        let len = rng.random_range(lo..=hi);
        let doc: Vec<u64> = (0..len).map(|_| zipf.sample(&mut rng) as u64).collect();
        let text = doc.iter().map(|&r| word(r)).collect::<Vec<_>>().join(" ");
        docs.push(Document::new(format!("doc{d}"), text));
        ranks.push(doc);
    }

    let mut queries = Vec::with_capacity(config.num_queries);
    let mut qrels = Vec::with_capacity(config.num_queries);
    for q in 0..config.num_queries {
        let target = rng.random_range(0..config.num_docs);
        let source = &ranks[target];
        let len = rng.random_range(qmin..=qmax);
        let text = (0..len)
            .map(|_| word(source[rng.random_range(0..source.len())]))
            .collect::<Vec<_>>()
            .join(" ");
        let qid = format!("q{q}");
        qrels.push((qid.clone(), docs[target].id.clone(), 1));
        queries.push(Document::new(qid, text));
    }
    Ok(SynthCorpus {
        docs,
        queries,
        qrels,
    })
}

impl SynthCorpus {
    pub fn qrels_tsv(&self) -> String {
        let mut out = String::from("query-id\tcorpus-id\tscore\n");
        for (q, d, g) in &self.qrels {
            out.push_str(&format!("{q}\t{d}\t{g}\n"));
        }
        out
    }
}
