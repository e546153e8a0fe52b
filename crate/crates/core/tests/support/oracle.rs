//! Dense reference scorer. Computes B(Q, D) for every document directly
//! from term counts, document frequencies and lengths. Shares nothing with
//! the library's scoring or index code beyond the variant selector.

use std::collections::HashMap;

use sparselex::{Bm25Params, Variant};

pub struct DenseOracle {
    docs: Vec<HashMap<String, u32>>,
    lens: Vec<f64>,
    df: HashMap<String, u32>,
    n: f64,
    avg: f64,
    params: Bm25Params,
}

impl DenseOracle {
    /// `docs` are already-analyzed token strings.
    pub fn new(docs: &[Vec<String>], params: Bm25Params) -> Self {
        let mut counts = Vec::with_capacity(docs.len());
        let mut df: HashMap<String, u32> = HashMap::new();
        for doc in docs {
            let mut tf: HashMap<String, u32> = HashMap::new();
            for token in doc {
                *tf.entry(token.clone()).or_default() += 1;
            }
            for token in tf.keys() {
                *df.entry(token.clone()).or_default() += 1;
            }
            counts.push(tf);
        }
        let lens: Vec<f64> = docs.iter().map(|d| d.len() as f64).collect();
        let avg = lens.iter().sum::<f64>() / lens.len() as f64;
        Self {
            docs: counts,
            lens,
            df,
            n: docs.len() as f64,
            avg,
            params,
        }
    }

    pub fn num_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.df.contains_key(token)
    }

    pub fn df(&self, token: &str) -> u32 {
        self.df.get(token).copied().unwrap_or(0)
    }

    pub fn tf(&self, token: &str, doc: usize) -> u32 {
        self.docs[doc].get(token).copied().unwrap_or(0)
    }

    fn idf(&self, token: &str) -> f64 {
        let n = self.n;
        let df = self.df[token] as f64;
        match self.params.variant {
            Variant::Robertson => ((n - df + 0.5) / (df + 0.5)).ln(),
            Variant::Atire => (n / df).ln(),
            Variant::Lucene => ((n - df + 0.5) / (df + 0.5) + 1.0).ln(),
            Variant::Bm25l => ((n + 1.0) / (df + 0.5)).ln(),
            Variant::Bm25plus | Variant::Tfldp => ((n + 1.0) / df).ln(),
        }
    }

    /// S(t, D) for an in-vocabulary token.
    pub fn term_score(&self, token: &str, doc: usize) -> f64 {
        let Bm25Params { k1, b, delta, .. } = self.params;
        let tf = self.tf(token, doc) as f64;
        let len_ratio = self.lens[doc] / self.avg;
        let tf_part = match self.params.variant {
            Variant::Robertson | Variant::Atire => {
                if tf == 0.0 {
                    0.0
                } else {
                    tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len_ratio))
                }
            }
            Variant::Lucene => {
                if tf == 0.0 {
                    0.0
                } else {
                    tf / (tf + k1 * (1.0 - b + b * len_ratio))
                }
            }
            Variant::Bm25l | Variant::Bm25plus | Variant::Tfldp => {
                let c = if tf == 0.0 { 0.0 } else { tf / (1.0 - b + b * len_ratio) };
                match self.params.variant {
                    Variant::Bm25l => (k1 + 1.0) * (c + delta) / (k1 + c + delta),
                    Variant::Bm25plus => (k1 + 1.0) * c / (k1 + c) + delta,
                    _ => 1.0 + (1.0 + (c + delta).ln()).ln(),
                }
            }
        };
        self.idf(token) * tf_part
    }

    /// B(Q, D) for every document; tokens absent from the corpus are dropped.
    pub fn scores(&self, query: &[String]) -> Vec<f64> {
        (0..self.docs.len())
            .map(|d| {
                query
                    .iter()
                    .filter(|t| self.contains(t))
                    .map(|t| self.term_score(t, d))
                    .sum()
            })
            .collect()
    }

    /// Σ |S(q_i, D)|, the magnitude a relative tolerance is measured against.
    pub fn magnitudes(&self, query: &[String]) -> Vec<f64> {
        (0..self.docs.len())
            .map(|d| {
                query
                    .iter()
                    .filter(|t| self.contains(t))
                    .map(|t| self.term_score(t, d).abs())
                    .sum()
            })
            .collect()
    }
}

/// Document order by descending score, ties by ascending index.
pub fn argsort_desc(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
    order
}
