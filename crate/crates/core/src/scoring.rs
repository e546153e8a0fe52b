//! BM25 scoring for six variants.
//!
//! Every variant factors as `idf(df, N) * tf_component(tf, |D|)`. Let
//! `norm = 1 - b + b * |D| / L_avg` and `c = tf / norm`:
//!
//! | variant   | idf                              | tf component                          |
//! |-----------|----------------------------------|---------------------------------------|
//! | robertson | ln((N - df + 0.5) / (df + 0.5))  | (k1 + 1) tf / (tf + k1 norm)          |
//! | atire     | ln(N / df)                       | (k1 + 1) tf / (tf + k1 norm)          |
//! | lucene    | ln(1 + (N - df + 0.5)/(df + 0.5))| tf / (tf + k1 norm)                   |
//! | bm25l     | ln((N + 1) / (df + 0.5))         | (k1 + 1)(c + δ) / (k1 + c + δ)        |
//! | bm25plus  | ln((N + 1) / df)                 | (k1 + 1) c / (k1 + c) + δ             |
//! | tfldp     | ln((N + 1) / df)                 | 1 + ln(1 + ln(c + δ))                 |
//!
//! The first three vanish when `tf = 0`. The last three do not; their value
//! at `tf = 0` is the non-occurrence score, which does not depend on `|D|`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Robertson,
    Atire,
    #[default]
    Lucene,
    Bm25l,
    Bm25plus,
    Tfldp,
}

impl Variant {
    pub const ALL: [Variant; 6] = [
        Variant::Robertson,
        Variant::Atire,
        Variant::Lucene,
        Variant::Bm25l,
        Variant::Bm25plus,
        Variant::Tfldp,
    ];

    /// Whether a token that does not occur in a document still scores
    /// non-zero against it.
    pub fn is_shifted(self) -> bool {
        matches!(self, Variant::Bm25l | Variant::Bm25plus | Variant::Tfldp)
    }

    pub fn default_delta(self) -> f64 {
        match self {
            Variant::Bm25l | Variant::Tfldp => 0.5,
            Variant::Bm25plus => 1.0,
            Variant::Robertson | Variant::Atire | Variant::Lucene => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Robertson => "robertson",
            Variant::Atire => "atire",
            Variant::Lucene => "lucene",
            Variant::Bm25l => "bm25l",
            Variant::Bm25plus => "bm25plus",
            Variant::Tfldp => "tfldp",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParams(format!("unknown BM25 variant {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub variant: Variant,
    pub k1: f64,
    pub b: f64,
    pub delta: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self::new(Variant::Lucene)
    }
}

impl Bm25Params {
    /// `k1 = 1.5`, `b = 0.75` and the variant's default δ.
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            k1: 1.5,
            b: 0.75,
            delta: variant.default_delta(),
        }
    }

    /// `k1 = 1.2`, `b = 0.75`.
    pub fn k1_1_2(variant: Variant) -> Self {
        Self {
            k1: 1.2,
            ..Self::new(variant)
        }
    }

    /// `k1 = 0.9`, `b = 0.4`, the BEIR baseline setting.
    pub fn beir(variant: Variant) -> Self {
        Self {
            k1: 0.9,
            b: 0.4,
            ..Self::new(variant)
        }
    }

    pub fn with_k1(mut self, k1: f64) -> Self {
        self.k1 = k1;
        self
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b = b;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k1.is_finite() && self.k1 > 0.0) {
            return Err(Error::InvalidParams(format!("k1 must be positive, got {}", self.k1)));
        }
        if !(0.0..=1.0).contains(&self.b) {
            return Err(Error::InvalidParams(format!("b must lie in [0, 1], got {}", self.b)));
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return Err(Error::InvalidParams(format!(
                "delta must be non-negative, got {}",
                self.delta
            )));
        }
        // ln(1 + ln(δ)) must exist for the non-occurrence score.
        if self.variant == Variant::Tfldp && self.delta <= (-1.0f64).exp() {
            return Err(Error::InvalidParams(format!(
                "tfldp needs delta > 1/e, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Corpus-level statistics used for length normalization and IDF.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusStats {
    pub num_docs: u32,
    pub avg_len: f64,
    pub doc_lengths: Vec<u32>,
}

impl CorpusStats {
    pub fn from_lengths(doc_lengths: Vec<u32>) -> Result<Self> {
        if doc_lengths.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let total: u64 = doc_lengths.iter().map(|&l| u64::from(l)).sum();
        if total == 0 {
            return Err(Error::DegenerateCorpus);
        }
        let num_docs = u32::try_from(doc_lengths.len())
            .map_err(|_| Error::InvalidParams("more than u32::MAX documents".into()))?;
        Ok(Self {
            num_docs,
            avg_len: total as f64 / doc_lengths.len() as f64,
            doc_lengths,
        })
    }
}

pub fn idf(variant: Variant, df: u32, num_docs: u32) -> Result<f64> {
    if df == 0 || df > num_docs {
        return Err(Error::Contract(format!(
            "document frequency {df} outside 1..={num_docs}"
        )));
    }
    let n = f64::from(num_docs);
    let df = f64::from(df);
    Ok(match variant {
        Variant::Lucene => (1.0 + (n - df + 0.5) / (df + 0.5)).ln(),
        Variant::Robertson => ((n - df + 0.5) / (df + 0.5)).ln(),
        Variant::Atire => (n / df).ln(),
        Variant::Bm25l => ((n + 1.0) / (df + 0.5)).ln(),
        Variant::Bm25plus | Variant::Tfldp => ((n + 1.0) / df).ln(),
    })
}

pub fn tf_component(params: &Bm25Params, tf: u32, doc_len: u32, avg_len: f64) -> Result<f64> {
    if avg_len.is_nan() || avg_len <= 0.0 {
        return Err(Error::Contract(format!("average length must be positive, got {avg_len}")));
    }
    let Bm25Params { k1, b, delta, .. } = *params;
    let tf = f64::from(tf);
    let norm = 1.0 - b + b * f64::from(doc_len) / avg_len;
    // A token absent from the document contributes c = 0 regardless of the
    // length term, which also avoids 0/0 when b = 1 and |D| = 0.
    let c = if tf == 0.0 { 0.0 } else { tf / norm };
    Ok(match params.variant {
        Variant::Lucene => {
            if tf == 0.0 {
                0.0
            } else {
                tf / (tf + k1 * norm)
            }
        }
        Variant::Robertson | Variant::Atire => {
            if tf == 0.0 {
                0.0
            } else {
                (k1 + 1.0) * tf / (tf + k1 * norm)
            }
        }
        Variant::Bm25l => (k1 + 1.0) * (c + delta) / (k1 + c + delta),
        Variant::Bm25plus => (k1 + 1.0) * c / (k1 + c) + delta,
        Variant::Tfldp => {
            let inner = 1.0 + (c + delta).ln();
            if inner.is_nan() || inner <= 0.0 {
                return Err(Error::Contract(format!(
                    "tfldp undefined for c + delta = {}",
                    c + delta
                )));
            }
            1.0 + inner.ln()
        }
    })
}

/// Scores a `(term, document)` pair from raw statistics.
pub fn score(
    params: &Bm25Params,
    tf: u32,
    df: u32,
    doc_len: u32,
    num_docs: u32,
    avg_len: f64,
) -> Result<f64> {
    Ok(idf(params.variant, df, num_docs)? * tf_component(params, tf, doc_len, avg_len)?)
}

/// Score of a token against a document that does not contain it.
pub fn nonoccurrence_score(params: &Bm25Params, df: u32, num_docs: u32) -> Result<f64> {
    let idf = idf(params.variant, df, num_docs)?;
    if !params.variant.is_shifted() {
        return Ok(0.0);
    }
    // The length term is irrelevant at tf = 0; any positive average works.
    Ok(idf * tf_component(params, 0, 0, 1.0)?)
}

/// Scoring bound to one corpus: validated parameters plus `N` and `L_avg`.
#[derive(Clone, Copy, Debug)]
pub struct Scorer {
    params: Bm25Params,
    num_docs: u32,
    avg_len: f64,
}

impl Scorer {
    pub fn new(params: Bm25Params, stats: &CorpusStats) -> Result<Self> {
        params.validate()?;
        if stats.avg_len.is_nan() || stats.avg_len <= 0.0 {
            return Err(Error::DegenerateCorpus);
        }
        Ok(Self {
            params,
            num_docs: stats.num_docs,
            avg_len: stats.avg_len,
        })
    }

    pub fn params(&self) -> &Bm25Params {
        &self.params
    }

    pub fn idf(&self, df: u32) -> Result<f64> {
        idf(self.params.variant, df, self.num_docs)
    }

    pub fn tf_component(&self, tf: u32, doc_len: u32) -> Result<f64> {
        tf_component(&self.params, tf, doc_len, self.avg_len)
    }

    pub fn score(&self, tf: u32, df: u32, doc_len: u32) -> Result<f64> {
        Ok(self.idf(df)? * self.tf_component(tf, doc_len)?)
    }

    pub fn nonoccurrence(&self, df: u32) -> Result<f64> {
        nonoccurrence_score(&self.params, df, self.num_docs)
    }
}
