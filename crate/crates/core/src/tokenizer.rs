//! Text analysis: regex word splitting, lowercasing, stopword removal,
//! optional Snowball stemming and vocabulary lookup.
//!
//! The pipeline order is fixed: split, lowercase, stopword filter, stem,
//! id lookup. Stopwords are matched against the lowercased surface form
//! before stemming.

use std::collections::{BTreeSet, HashMap};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Bundled English stopword list, one lowercase token per line.
pub const ENGLISH_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

// Runs of two or more word characters between word boundaries. Both `\w`
// and `\b` are Unicode-aware.
static WORD_PATTERN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?u)\b\w\w+\b").expect("static pattern"));

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StemmerKind {
    None,
    #[default]
    SnowballEnglish,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub lowercase: bool,
    pub stopwords: BTreeSet<String>,
    pub stemmer: StemmerKind,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            lowercase: true,
            stopwords: english_stopwords(),
            stemmer: StemmerKind::SnowballEnglish,
        }
    }
}

impl TokenizerConfig {
    /// Lowercasing only: no stopwords, no stemming.
    pub fn plain() -> Self {
        Self {
            lowercase: true,
            stopwords: BTreeSet::new(),
            stemmer: StemmerKind::None,
        }
    }

    pub fn with_stopwords(mut self, stopwords: BTreeSet<String>) -> Self {
        self.stopwords = stopwords;
        self
    }

    pub fn with_stemmer(mut self, stemmer: StemmerKind) -> Self {
        self.stemmer = stemmer;
        self
    }

    /// Hex SHA-256 over the sorted stopword list joined by newlines.
    pub fn stopwords_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (i, word) in self.stopwords.iter().enumerate() {
            if i > 0 {
                hasher.update(b"\n");
            }
            hasher.update(word.as_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

/// Parses a stopword file: one token per line, blank lines ignored.
pub fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn english_stopwords() -> BTreeSet<String> {
    parse_stopwords(ENGLISH_STOPWORDS)
}

/// Raw regex matches in document order, without any normalization.
pub fn split_words(text: &str) -> impl Iterator<Item = &str> {
    WORD_PATTERN.find_iter(text).map(|m| m.as_str())
}

/// Splits `text` into lowercased words of at least two word characters.
pub fn split_text(text: &str) -> Vec<String> {
    split_words(text).map(str::to_lowercase).collect()
}

/// Narrow stemming interface so the rest of the pipeline is stemmer-agnostic.
pub trait Stem: Send + Sync {
    fn stem(&self, word: &str) -> String;
}

pub struct SnowballEnglish(rust_stemmers::Stemmer);

impl SnowballEnglish {
    pub fn new() -> Self {
        Self(rust_stemmers::Stemmer::create(rust_stemmers::Algorithm::English))
    }
}

impl Default for SnowballEnglish {
    fn default() -> Self {
        Self::new()
    }
}

impl Stem for SnowballEnglish {
    fn stem(&self, word: &str) -> String {
        self.0.stem(word).into_owned()
    }
}

/// Bidirectional token/id map with per-token document frequency.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    token_to_id: HashMap<String, u32>,
    id_to_token: Vec<String>,
    doc_frequency: Vec<u32>,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from tokens listed in id order.
    pub fn from_parts(tokens: Vec<String>, doc_frequency: Vec<u32>) -> Result<Self> {
        if tokens.len() != doc_frequency.len() {
            return Err(Error::Structural(format!(
                "{} vocabulary tokens but {} document frequencies",
                tokens.len(),
                doc_frequency.len()
            )));
        }
        let mut token_to_id = HashMap::with_capacity(tokens.len());
        for (id, token) in tokens.iter().enumerate() {
            if token_to_id.insert(token.clone(), id as u32).is_some() {
                return Err(Error::Structural(format!("token {token:?} appears twice")));
            }
        }
        Ok(Self {
            token_to_id,
            id_to_token: tokens,
            doc_frequency,
        })
    }

    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_token.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<u32> {
        self.token_to_id.get(token).copied()
    }

    pub fn token(&self, id: u32) -> Option<&str> {
        self.id_to_token.get(id as usize).map(String::as_str)
    }

    /// Tokens in id order.
    pub fn tokens(&self) -> &[String] {
        &self.id_to_token
    }

    pub fn doc_frequency(&self, id: u32) -> u32 {
        self.doc_frequency[id as usize]
    }

    pub fn doc_frequencies(&self) -> &[u32] {
        &self.doc_frequency
    }

    fn intern(&mut self, token: String) -> u32 {
        if let Some(&id) = self.token_to_id.get(&token) {
            return id;
        }
        let id = self.id_to_token.len() as u32;
        self.token_to_id.insert(token.clone(), id);
        self.id_to_token.push(token);
        self.doc_frequency.push(0);
        id
    }
}

/// Mutable vocabulary used while indexing.
///
/// Every surface word is normalized once; later occurrences hit the cache.
#[derive(Debug, Default)]
pub struct VocabularyBuilder {
    vocab: Vocabulary,
    surface: HashMap<String, Option<u32>>,
}

impl VocabularyBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    /// Adds one to the document frequency of every distinct token in `doc`.
    pub fn count_document(&mut self, doc: &TokenizedDocument) {
        for &(id, _) in &doc.term_counts {
            self.vocab.doc_frequency[id as usize] += 1;
        }
    }

    pub fn finish(self) -> Vocabulary {
        self.vocab
    }
}

pub struct Tokenizer {
    config: TokenizerConfig,
    stemmer: Option<Box<dyn Stem>>,
}

impl std::fmt::Debug for Tokenizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tokenizer")
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl Tokenizer {
    pub fn new(config: TokenizerConfig) -> Self {
        let stemmer: Option<Box<dyn Stem>> = match config.stemmer {
            StemmerKind::None => None,
            StemmerKind::SnowballEnglish => Some(Box::new(SnowballEnglish::new())),
        };
        Self { config, stemmer }
    }

    pub fn config(&self) -> &TokenizerConfig {
        &self.config
    }

    /// Lowercase, stopword-filter and stem one surface word.
    fn normalize(&self, word: &str) -> Option<String> {
        let lowered = word.to_lowercase();
        if self.config.stopwords.contains(&lowered) {
            return None;
        }
        let token = if self.config.lowercase {
            lowered
        } else {
            word.to_owned()
        };
        Some(match &self.stemmer {
            Some(stemmer) => stemmer.stem(&token),
            None => token,
        })
    }

    /// Runs the string half of the pipeline and returns normalized tokens.
    pub fn analyze(&self, text: &str) -> Vec<String> {
        split_words(text)
            .filter_map(|word| self.normalize(word))
            .collect()
    }

    /// Build-time tokenization: unseen tokens receive fresh ids.
    pub fn tokenize(&self, text: &str, builder: &mut VocabularyBuilder) -> Vec<u32> {
        let mut ids = Vec::new();
        for word in split_words(text) {
            let id = match builder.surface.get(word) {
                Some(&cached) => cached,
                None => {
                    let id = self.normalize(word).map(|t| builder.vocab.intern(t));
                    builder.surface.insert(word.to_owned(), id);
                    id
                }
            };
            ids.extend(id);
        }
        ids
    }

    /// Query-time tokenization against a frozen vocabulary. Tokens absent
    /// from the vocabulary are dropped.
    pub fn tokenize_query(&self, text: &str, vocab: &Vocabulary) -> Vec<u32> {
        split_words(text)
            .filter_map(|word| self.normalize(word))
            .filter_map(|token| vocab.get(&token))
            .collect()
    }
}

/// Bag-of-words view of one document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenizedDocument {
    /// `(token id, count)` pairs sorted by token id.
    pub term_counts: Vec<(u32, u32)>,
    pub length: u32,
}

impl TokenizedDocument {
    pub fn count(&self, id: u32) -> u32 {
        self.term_counts
            .binary_search_by_key(&id, |&(t, _)| t)
            .map_or(0, |i| self.term_counts[i].1)
    }

    pub fn distinct(&self) -> usize {
        self.term_counts.len()
    }
}

pub fn count_terms(ids: &[u32]) -> TokenizedDocument {
    let mut sorted = ids.to_vec();
    sorted.sort_unstable();
    let mut term_counts: Vec<(u32, u32)> = Vec::new();
    for id in sorted {
        match term_counts.last_mut() {
            Some((last, count)) if *last == id => *count += 1,
            _ => term_counts.push((id, 1)),
        }
    }
    TokenizedDocument {
        term_counts,
        length: ids.len() as u32,
    }
}
