//! Corpus/query JSON Lines input and TREC run output.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::retrieval::QueryResult;

/// One corpus document or query. A present `title` is prepended to `text`
/// with a single space when read through [`Document::full_text`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    #[serde(rename = "_id")]
    pub id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
            title: None,
        }
    }

    pub fn full_text(&self) -> String {
        match &self.title {
            Some(title) => format!("{title} {}", self.text),
            None => self.text.clone(),
        }
    }
}

/// Parses JSON Lines from a reader. Blank lines are skipped; errors carry
/// the 1-based line number.
pub fn parse_documents(reader: impl BufRead, path: &Path) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc = serde_json::from_str(&line).map_err(|e| {
            // serde reports its position within the single-line buffer
            let text = e.to_string();
            let message = match text.rfind(" at line ") {
                Some(at) => format!("{} at column {}", &text[..at], e.column()),
                None => text,
            };
            Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            }
        })?;
        docs.push(doc);
    }
    Ok(docs)
}

pub fn read_documents(path: impl AsRef<Path>) -> Result<Vec<Document>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_documents(BufReader::new(file), path)
}

pub fn write_documents(path: impl AsRef<Path>, docs: &[Document]) -> Result<()> {
    let path = path.as_ref();
    let mut out = io::BufWriter::new(File::create(path).map_err(|e| Error::io(path, e))?);
    for doc in docs {
        serde_json::to_writer(&mut out, doc).expect("documents serialize");
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Writes `qid Q0 docid rank score run_name` lines, ranks starting at 1.
pub fn write_run(
    out: &mut impl Write,
    qid: &str,
    result: &QueryResult,
    run_name: &str,
) -> io::Result<()> {
    for (rank, (doc, score)) in result.external_ids.iter().zip(&result.scores).enumerate() {
        // +0.0 prints -0.0 as 0
        writeln!(out, "{qid} Q0 {doc} {} {} {run_name}", rank + 1, score + 0.0)?;
    }
    Ok(())
}
