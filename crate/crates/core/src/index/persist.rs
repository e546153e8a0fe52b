//! On-disk index layout. All binary arrays are little-endian.
//!
//! ```text
//! meta.json    format version, BM25 parameters, corpus and tokenizer metadata
//! vocab.json   {token: id}
//! df.bin       u32[|V|]
//! theta.bin    f32[|V|]
//! indptr.bin   u64[|V| + 1]
//! docids.bin   u32[nnz]
//! values.bin   f32[nnz]
//! doclens.bin  u32[|C|]
//! docs.json    [external id, ...]
//! ```

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::{ScoreMatrix, SearchIndex};
use crate::error::{Error, Result};
use crate::scoring::{Bm25Params, CorpusStats, Variant};
use crate::tokenizer::{StemmerKind, TokenizerConfig, Vocabulary};

pub const FORMAT_VERSION: u32 = 1;

pub const INDEX_FILES: [&str; 9] = [
    "meta.json",
    "vocab.json",
    "df.bin",
    "theta.bin",
    "indptr.bin",
    "docids.bin",
    "values.bin",
    "doclens.bin",
    "docs.json",
];

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    format_version: u32,
    variant: Variant,
    k1: f64,
    b: f64,
    delta: f64,
    num_docs: u32,
    avg_len: f64,
    num_tokens: u64,
    num_nonzeros: u64,
    tokenizer: TokenizerMeta,
}

#[derive(Debug, Serialize, Deserialize)]
struct TokenizerMeta {
    lowercase: bool,
    stopwords_hash: String,
    stemmer: StemmerKind,
    stopwords: Vec<String>,
}

/// Serializes `{token: id}` in id order.
struct VocabJson<'a>(&'a [String]);

impl Serialize for VocabJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (id, token) in self.0.iter().enumerate() {
            map.serialize_entry(token, &id)?;
        }
        map.end()
    }
}

pub fn save_index(index: &SearchIndex, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let config = index.tokenizer_config();
    let params = index.params();
    let meta = Meta {
        format_version: FORMAT_VERSION,
        variant: params.variant,
        k1: params.k1,
        b: params.b,
        delta: params.delta,
        num_docs: index.stats().num_docs,
        avg_len: index.stats().avg_len,
        num_tokens: index.vocab().len() as u64,
        num_nonzeros: index.matrix().nnz() as u64,
        tokenizer: TokenizerMeta {
            lowercase: config.lowercase,
            stopwords_hash: config.stopwords_hash(),
            stemmer: config.stemmer,
            stopwords: config.stopwords.iter().cloned().collect(),
        },
    };

    write_json(&dir.join("meta.json"), &meta)?;
    write_json(&dir.join("vocab.json"), &VocabJson(index.vocab().tokens()))?;
    write_json(&dir.join("docs.json"), &index.doc_external_ids())?;

    let matrix = index.matrix();
    write_array(&dir.join("df.bin"), index.vocab().doc_frequencies(), u32::to_le_bytes)?;
    write_array(&dir.join("theta.bin"), index.theta(), f32::to_le_bytes)?;
    write_array(&dir.join("indptr.bin"), matrix.indptr(), u64::to_le_bytes)?;
    write_array(&dir.join("docids.bin"), matrix.doc_ids(), u32::to_le_bytes)?;
    write_array(&dir.join("values.bin"), matrix.values(), f32::to_le_bytes)?;
    write_array(&dir.join("doclens.bin"), &index.stats().doc_lengths, u32::to_le_bytes)?;
    Ok(())
}

pub fn load_index(dir: impl AsRef<Path>) -> Result<SearchIndex> {
    let dir = dir.as_ref();
    let meta: Meta = read_json(&dir.join("meta.json"))?;
    if meta.format_version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: meta.format_version,
            expected: FORMAT_VERSION,
        });
    }

    let config = TokenizerConfig {
        lowercase: meta.tokenizer.lowercase,
        stopwords: meta.tokenizer.stopwords.into_iter().collect(),
        stemmer: meta.tokenizer.stemmer,
    };
    if config.stopwords_hash() != meta.tokenizer.stopwords_hash {
        return Err(Error::Structural("stopword list does not match its hash".into()));
    }

    let vocab_map: HashMap<String, u32> = read_json(&dir.join("vocab.json"))?;
    let mut tokens = vec![None; vocab_map.len()];
    for (token, id) in vocab_map {
        match tokens.get_mut(id as usize) {
            Some(slot @ None) => *slot = Some(token),
            _ => {
                return Err(Error::Structural(format!(
                    "vocabulary ids are not contiguous (token {token:?} has id {id})"
                )))
            }
        }
    }
    let tokens: Vec<String> = tokens.into_iter().map(Option::unwrap).collect();
    let df = read_array(&dir.join("df.bin"), u32::from_le_bytes, Error::Structural)?;
    let vocab = Vocabulary::from_parts(tokens, df)?;

    let theta = read_array(&dir.join("theta.bin"), f32::from_le_bytes, Error::Structural)?;
    let indptr = read_array(&dir.join("indptr.bin"), u64::from_le_bytes, Error::CorruptMatrix)?;
    if indptr.len() != vocab.len() + 1 {
        return Err(Error::Structural(format!(
            "indptr has {} entries for {} tokens",
            indptr.len(),
            vocab.len()
        )));
    }
    let doc_ids = read_array(&dir.join("docids.bin"), u32::from_le_bytes, Error::CorruptMatrix)?;
    let values = read_array(&dir.join("values.bin"), f32::from_le_bytes, Error::CorruptMatrix)?;
    let doc_lengths = read_array(&dir.join("doclens.bin"), u32::from_le_bytes, Error::Structural)?;
    let external_ids: Vec<String> = read_json(&dir.join("docs.json"))?;

    if meta.num_nonzeros != values.len() as u64 {
        return Err(Error::CorruptMatrix(format!(
            "meta.json records {} nonzeros, values.bin holds {}",
            meta.num_nonzeros,
            values.len()
        )));
    }
    if meta.num_tokens != vocab.len() as u64 {
        return Err(Error::Structural(format!(
            "meta.json records {} tokens, vocabulary holds {}",
            meta.num_tokens,
            vocab.len()
        )));
    }

    let mut stats = CorpusStats::from_lengths(doc_lengths)?;
    if stats.num_docs != meta.num_docs {
        return Err(Error::Structural(format!(
            "meta.json records {} documents, doclens.bin holds {}",
            meta.num_docs, stats.num_docs
        )));
    }
    if (stats.avg_len - meta.avg_len).abs() > 1e-9 * meta.avg_len {
        return Err(Error::Structural(format!(
            "average length {} disagrees with document lengths ({})",
            meta.avg_len, stats.avg_len
        )));
    }
    stats.avg_len = meta.avg_len;

    let matrix = ScoreMatrix::from_parts(indptr, doc_ids, values, meta.num_docs)?;
    let params = Bm25Params {
        variant: meta.variant,
        k1: meta.k1,
        b: meta.b,
        delta: meta.delta,
    };
    SearchIndex::from_parts(matrix, vocab, stats, params, theta, external_ids, config)
}

fn open_error(path: &Path, e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::NotFound {
        Error::MissingFile(path.to_path_buf())
    } else {
        Error::io(path, e)
    }
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let bytes = serde_json::to_vec(value).expect("index metadata serializes");
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let bytes = fs::read(path).map_err(|e| open_error(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })
}

fn write_array<T: Copy, const N: usize>(
    path: &Path,
    items: &[T],
    encode: fn(T) -> [u8; N],
) -> Result<()> {
    let mut bytes = Vec::with_capacity(items.len() * N);
    for &item in items {
        bytes.extend_from_slice(&encode(item));
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn read_array<T, const N: usize>(
    path: &Path,
    decode: fn([u8; N]) -> T,
    corrupt: fn(String) -> Error,
) -> Result<Vec<T>> {
    let bytes = fs::read(path).map_err(|e| open_error(path, e))?;
    if bytes.len() % N != 0 {
        return Err(corrupt(format!(
            "{} is {} bytes, not a multiple of {N}",
            path.display(),
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(N)
        .map(|chunk| decode(chunk.try_into().expect("exact chunk")))
        .collect())
}
