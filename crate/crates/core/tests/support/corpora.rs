//! Random corpora over synthetic words `t0, t1, ...`, which every tokenizer
//! configuration without stemming keeps verbatim.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparselex::{build_index, Bm25Params, SearchIndex, TokenizerConfig, Variant};

pub struct RandomCorpus {
    pub docs: Vec<Vec<String>>,
    pub queries: Vec<Vec<String>>,
}

impl RandomCorpus {
    pub fn texts(&self) -> Vec<String> {
        self.docs.iter().map(|d| d.join(" ")).collect()
    }

    pub fn index(&self, params: Bm25Params) -> SearchIndex {
        build_index(
            self.texts()
                .into_iter()
                .enumerate()
                .map(|(i, t)| (format!("doc{i}"), t)),
            params,
            TokenizerConfig::plain(),
        )
        .expect("random corpus indexes")
    }
}

pub fn word(i: usize) -> String {
    format!("t{i}")
}

/// Skewed draw so that document frequencies span a wide range.
fn draw(rng: &mut ChaCha8Rng, vocab: usize) -> usize {
    let u: f64 = rng.random();
    ((u * u * u) * vocab as f64) as usize
}

/// `docs` in `10..=200`, vocabulary `<= 300`, lengths `1..=50`. Queries
/// may repeat tokens and include words that occur nowhere.
pub fn random_corpus(seed: u64, num_queries: usize) -> RandomCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let num_docs = rng.random_range(10..=200);
    let vocab = rng.random_range(5..=300);
    let docs = (0..num_docs)
        .map(|_| {
            let len = rng.random_range(1..=50);
            (0..len).map(|_| word(draw(&mut rng, vocab))).collect()
        })
        .collect();
    let queries = (0..num_queries)
        .map(|_| {
            let len = rng.random_range(1..=6);
            (0..len)
                .map(|_| {
                    if rng.random_bool(0.1) {
                        word(vocab + rng.random_range(0..50))
                    } else {
                        word(draw(&mut rng, vocab))
                    }
                })
                .collect()
        })
        .collect();
    RandomCorpus { docs, queries }
}

/// Random valid parameters for `variant`.
pub fn random_params(seed: u64, variant: Variant) -> Bm25Params {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let delta = match variant {
        Variant::Tfldp => rng.random_range(0.4..1.5),
        _ => rng.random_range(0.0..1.5),
    };
    Bm25Params {
        variant,
        k1: rng.random_range(0.5..2.0),
        b: rng.random_range(0.0..=1.0),
        delta,
    }
}
