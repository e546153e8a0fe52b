use std::cmp::Ordering;

use crate::error::{Error, Result};

/// The `k` best entries of a score vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TopK {
    pub indices: Vec<u32>,
    pub scores: Vec<f64>,
}

// Higher score first, then lower index. Adding +0.0 folds -0.0 into +0.0 so
// the two zeros tie under `total_cmp`.
#[inline]
fn rank_order(scores: &[f64], a: u32, b: u32) -> Ordering {
    let sa = scores[a as usize] + 0.0;
    let sb = scores[b as usize] + 0.0;
    sb.total_cmp(&sa).then(a.cmp(&b))
}

/// Selects the `k` highest scores with introselect (average and worst-case
/// linear). With `ordered`, the selection is then sorted descending with
/// ties broken by ascending index. `k >= scores.len()` returns everything.
pub fn top_k(scores: &[f64], k: usize, ordered: bool) -> Result<TopK> {
    if k == 0 {
        return Err(Error::Contract("k must be at least 1".into()));
    }
    let n = scores.len();
    let mut indices: Vec<u32> = (0..n as u32).collect();
    if k < n {
        indices.select_nth_unstable_by(k - 1, |&a, &b| rank_order(scores, a, b));
        indices.truncate(k);
    }
    if ordered {
        indices.sort_unstable_by(|&a, &b| rank_order(scores, a, b));
    }
    let scores = indices.iter().map(|&i| scores[i as usize]).collect();
    Ok(TopK { indices, scores })
}
