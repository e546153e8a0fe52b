//! NDCG@k over TREC runs and qrels.
//!
//! Gain is `2^rel - 1` and the discount `log2(rank + 1)` with ranks from 1.
//! Run queries without judgments are skipped, and queries whose judgments
//! contain no relevant document are excluded from the mean.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Relevance grades per query id, then per document id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Qrels(pub BTreeMap<String, HashMap<String, u32>>);

/// Ranked document ids per query id, best first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Run(pub BTreeMap<String, Vec<String>>);

impl Qrels {
    pub fn insert(&mut self, qid: impl Into<String>, doc: impl Into<String>, grade: u32) {
        self.0.entry(qid.into()).or_default().insert(doc.into(), grade);
    }
}

impl Run {
    pub fn insert(&mut self, qid: impl Into<String>, ranked: Vec<String>) {
        self.0.insert(qid.into(), ranked);
    }
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Parses `qid<TAB>docid<TAB>relevance` lines. A leading header line is
/// recognized by a non-numeric relevance column. Four-column TREC qrels
/// (`qid iter docid rel`) are accepted too.
pub fn parse_qrels(text: &str, path: &Path) -> Result<Qrels> {
    let mut qrels = Qrels::default();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let (qid, doc, grade) = match fields.as_slice() {
            [q, d, g] => (*q, *d, *g),
            [q, _, d, g] => (*q, *d, *g),
            _ => return Err(parse_error(path, i + 1, "expected qid, docid and relevance")),
        };
        let is_header = std::mem::take(&mut first);
        let grade: i64 = match grade.parse() {
            Ok(g) => g,
            Err(_) if is_header => continue,
            Err(_) => return Err(parse_error(path, i + 1, format!("bad relevance {grade:?}"))),
        };
        let grade = u32::try_from(grade)
            .map_err(|_| parse_error(path, i + 1, format!("negative relevance {grade}")))?;
        qrels.insert(qid, doc, grade);
    }
    Ok(qrels)
}

pub fn read_qrels(path: impl AsRef<Path>) -> Result<Qrels> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_qrels(&text, path)
}

/// Parses TREC run lines `qid Q0 docid rank score run_name`, ordering each
/// query's documents by rank. Repeated documents keep their best rank.
pub fn parse_run(text: &str, path: &Path) -> Result<Run> {
    let mut ranked: BTreeMap<String, Vec<(u64, usize, String)>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [qid, _, doc, rank, score, _] = fields.as_slice() else {
            return Err(parse_error(path, i + 1, "expected six whitespace-separated fields"));
        };
        let rank: u64 = rank
            .parse()
            .map_err(|_| parse_error(path, i + 1, format!("bad rank {rank:?}")))?;
        score
            .parse::<f64>()
            .map_err(|_| parse_error(path, i + 1, format!("bad score {score:?}")))?;
        ranked
            .entry(qid.to_string())
            .or_default()
            .push((rank, i, doc.to_string()));
    }
    let mut run = Run::default();
    for (qid, mut docs) in ranked {
        docs.sort();
        let mut seen = HashSet::new();
        let docs = docs
            .into_iter()
            .filter_map(|(_, _, d)| seen.insert(d.clone()).then_some(d))
            .collect();
        run.insert(qid, docs);
    }
    Ok(run)
}

pub fn read_run(path: impl AsRef<Path>) -> Result<Run> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_run(&text, path)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NdcgReport {
    pub k: usize,
    /// NDCG@k for every scored query.
    pub per_query: BTreeMap<String, f64>,
    /// Mean over `per_query`; 0 when it is empty.
    pub mean: f64,
    /// Run queries absent from the qrels.
    pub skipped_unjudged: usize,
    /// Judged run queries without any relevant document.
    pub excluded_no_relevant: usize,
}

fn gain(grade: u32) -> f64 {
    2f64.powi(grade as i32) - 1.0
}

fn discount(position: usize) -> f64 {
    // position is 0-based; rank = position + 1
    ((position + 2) as f64).log2()
}

/// NDCG@k of one ranked list against one query's judgments, or `None`
/// when nothing is relevant.
pub fn ndcg_query(ranked: &[String], judgments: &HashMap<String, u32>, k: usize) -> Option<f64> {
    let mut ideal: Vec<u32> = judgments.values().copied().filter(|&g| g > 0).collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg: f64 = ideal
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, &g)| gain(g) / discount(i))
        .sum();
    if idcg == 0.0 {
        return None;
    }
    let dcg: f64 = ranked
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, d)| gain(judgments.get(d).copied().unwrap_or(0)) / discount(i))
        .sum();
    Some(dcg / idcg)
}

pub fn ndcg_at_k(run: &Run, qrels: &Qrels, k: usize) -> Result<NdcgReport> {
    if k == 0 {
        return Err(Error::Contract("k must be at least 1".into()));
    }
    let mut per_query = BTreeMap::new();
    let mut skipped_unjudged = 0;
    let mut excluded_no_relevant = 0;
    for (qid, ranked) in &run.0 {
        let Some(judgments) = qrels.0.get(qid) else {
            skipped_unjudged += 1;
            continue;
        };
        match ndcg_query(ranked, judgments, k) {
            Some(score) => {
                per_query.insert(qid.clone(), score);
            }
            None => excluded_no_relevant += 1,
        }
    }
    if skipped_unjudged == run.0.len() {
        return Err(Error::NoOverlap);
    }
    let mean = if per_query.is_empty() {
        0.0
    } else {
        per_query.values().sum::<f64>() / per_query.len() as f64
    };
    Ok(NdcgReport {
        k,
        per_query,
        mean,
        skipped_unjudged,
        excluded_no_relevant,
    })
}
