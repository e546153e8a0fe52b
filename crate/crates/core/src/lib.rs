//! Lexical search with BM25 scores computed eagerly at index time.
//!
//! Building an index scores every `(token, document)` occurrence once and
//! stores the result in a token-major sparse matrix. A query is then a sum
//! of the matrix rows of its tokens followed by top-k selection. Variants
//! that score absent tokens non-zero (BM25L, BM25+, TF_l∘δ∘p) are stored
//! shifted by a per-token constant, which is added back per query.
//!
//! ```
//! use sparselex::{build_index, retrieve, Bm25Params, TokenizerConfig, Variant};
//!
//! let corpus = [("a", "a cat sat on the mat"), ("b", "dogs chase cats")];
//! let index = build_index(corpus, Bm25Params::new(Variant::Lucene), TokenizerConfig::default())?;
//! let hits = retrieve(&index, "cat", 2, true)?;
//! assert_eq!(hits.external_ids[0], "a");
//! # Ok::<(), sparselex::Error>(())
//! ```

pub mod bench;
pub mod error;
pub mod eval;
pub mod formats;
pub mod index;
pub mod retrieval;
pub mod scoring;
pub mod synth;
pub mod tokenizer;

pub use error::{Error, Result};
pub use index::{build_index, load_index, save_index, ScoreMatrix, SearchIndex};
pub use retrieval::{
    retrieve, retrieve_batch, retrieve_query, score_query, top_k, Query, QueryResult,
};
pub use scoring::{Bm25Params, CorpusStats, Variant};
pub use tokenizer::{StemmerKind, Tokenizer, TokenizerConfig, Vocabulary};
