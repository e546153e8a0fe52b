use crate::error::{Error, Result};

/// Token-major compressed sparse matrix of shape `|V| x |C|`.
///
/// Row `t` occupies `indptr[t]..indptr[t + 1]` in `doc_ids` and `values`,
/// with document ids strictly increasing inside a row.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    indptr: Vec<u64>,
    doc_ids: Vec<u32>,
    values: Vec<f32>,
    num_docs: u32,
}

impl ScoreMatrix {
    pub fn from_parts(
        indptr: Vec<u64>,
        doc_ids: Vec<u32>,
        values: Vec<f32>,
        num_docs: u32,
    ) -> Result<Self> {
        let matrix = Self {
            indptr,
            doc_ids,
            values,
            num_docs,
        };
        matrix.validate()?;
        Ok(matrix)
    }

    pub fn validate(&self) -> Result<()> {
        let Some((&first, _)) = self.indptr.split_first() else {
            return Err(Error::Structural("indptr is empty".into()));
        };
        if first != 0 {
            return Err(Error::CorruptMatrix(format!("indptr[0] = {first}, expected 0")));
        }
        let nnz = *self.indptr.last().expect("non-empty") as usize;
        if nnz != self.values.len() || nnz != self.doc_ids.len() {
            return Err(Error::CorruptMatrix(format!(
                "indptr ends at {nnz} but there are {} doc ids and {} values",
                self.doc_ids.len(),
                self.values.len()
            )));
        }
        for (t, w) in self.indptr.windows(2).enumerate() {
            if w[0] > w[1] {
                return Err(Error::CorruptMatrix(format!("indptr decreases at token {t}")));
            }
            let row = &self.doc_ids[w[0] as usize..w[1] as usize];
            if row.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::CorruptMatrix(format!(
                    "document ids of token {t} are not strictly increasing"
                )));
            }
            if let Some(&last) = row.last() {
                if last >= self.num_docs {
                    return Err(Error::CorruptMatrix(format!(
                        "token {t} references document {last} of {}",
                        self.num_docs
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(|V|, |C|)`
    pub fn shape(&self) -> (usize, usize) {
        (self.indptr.len() - 1, self.num_docs as usize)
    }

    pub fn num_tokens(&self) -> usize {
        self.indptr.len() - 1
    }

    pub fn num_docs(&self) -> u32 {
        self.num_docs
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_len(&self, token: u32) -> usize {
        let t = token as usize;
        (self.indptr[t + 1] - self.indptr[t]) as usize
    }

    pub fn row(&self, token: u32) -> (&[u32], &[f32]) {
        let t = token as usize;
        let range = self.indptr[t] as usize..self.indptr[t + 1] as usize;
        (&self.doc_ids[range.clone()], &self.values[range])
    }

    /// Adds row `token` into a dense per-document accumulator.
    #[inline]
    pub fn accumulate_row(&self, token: u32, acc: &mut [f64]) {
        let (docs, values) = self.row(token);
        for (&d, &v) in docs.iter().zip(values) {
            acc[d as usize] += f64::from(v);
        }
    }

    pub fn indptr(&self) -> &[u64] {
        &self.indptr
    }

    pub fn doc_ids(&self) -> &[u32] {
        &self.doc_ids
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }
}
