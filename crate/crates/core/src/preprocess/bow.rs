//! Sparse bag-of-words corpus and its on-disk form.
//!
//! The file is JSON Lines. Line 1 is a header object:
//!
//! ```text
//! {"format":"diachrony-bow","version":1,"lang":"de","vocab_size":V,
//!  "vocab":[...],"doc_freq":[...],"doc_ids":[...],"excluded_ids":[...]}
//! ```
//!
//! followed by one row per document, in `doc_ids` order:
//!
//! ```text
//! {"id":"g1","year":1779,"counts":[[0,2],[5,1]]}
//! ```
//!
//! Token ids within a row are strictly increasing and every count is at least 1.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Document, Vocabulary};
use crate::{Error, Result};

pub const BOW_VERSION: u32 = 1;
const BOW_FORMAT: &str = "diachrony-bow";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowCorpus {
    /// Per document `(token_id, count)` pairs with strictly increasing ids.
    pub docs: Vec<Vec<(u32, u32)>>,
    pub doc_ids: Vec<String>,
    pub years: Vec<Option<i32>>,
    pub vocab_size: usize,
}

impl BowCorpus {
    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.docs
            .iter()
            .flat_map(|d| d.iter().map(|(_, c)| u64::from(*c)))
            .sum()
    }

    /// Checks the canonical-form invariants.
    pub fn validate(&self) -> Result<()> {
        if self.doc_ids.len() != self.docs.len() || self.years.len() != self.docs.len() {
            return Err(Error::data("bag-of-words corpus has mismatched column lengths"));
        }
        for (id, row) in self.doc_ids.iter().zip(&self.docs) {
            let mut prev: Option<u32> = None;
            for &(token, count) in row {
                if count == 0 || token as usize >= self.vocab_size || prev.is_some_and(|p| p >= token) {
                    return Err(Error::data(format!(
                        "document `{id}` is not in canonical sparse form"
                    )));
                }
                prev = Some(token);
            }
        }
        Ok(())
    }

    /// Selects a subset of documents by position, preserving order.
    pub fn subset(&self, indices: &[usize]) -> BowCorpus {
        BowCorpus {
            docs: indices.iter().map(|&i| self.docs[i].clone()).collect(),
            doc_ids: indices.iter().map(|&i| self.doc_ids[i].clone()).collect(),
            years: indices.iter().map(|&i| self.years[i]).collect(),
            vocab_size: self.vocab_size,
        }
    }
}

/// Counts in-vocabulary lemmas per document. Documents left empty are
/// excluded and reported.
pub fn to_bow(docs: &[Document], vocab: &Vocabulary) -> (BowCorpus, Vec<String>) {
    let mut corpus = BowCorpus {
        docs: Vec::with_capacity(docs.len()),
        doc_ids: Vec::with_capacity(docs.len()),
        years: Vec::with_capacity(docs.len()),
        vocab_size: vocab.len(),
    };
    let mut excluded = Vec::new();
    for doc in docs {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for id in doc.lemmas.iter().filter_map(|l| vocab.id(l)) {
            *counts.entry(id).or_insert(0) += 1;
        }
        if counts.is_empty() {
            excluded.push(doc.id.clone());
            continue;
        }
        corpus.docs.push(counts.into_iter().collect());
        corpus.doc_ids.push(doc.id.clone());
        corpus.years.push(doc.year);
    }
    (corpus, excluded)
}

/// A corpus together with the vocabulary and provenance it was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct BowFile {
    pub lang: Option<String>,
    pub vocab: Vocabulary,
    pub corpus: BowCorpus,
    pub excluded_ids: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    lang: Option<String>,
    vocab_size: usize,
    vocab: Vec<String>,
    doc_freq: Vec<u32>,
    doc_ids: Vec<String>,
    excluded_ids: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    id: String,
    year: Option<i32>,
    counts: Vec<(u32, u32)>,
}

pub fn save_bow(file: &BowFile, path: &Path) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut out = BufWriter::new(fs::File::create(path).map_err(io)?);
    let header = Header {
        format: BOW_FORMAT.into(),
        version: BOW_VERSION,
        lang: file.lang.clone(),
        vocab_size: file.vocab.len(),
        vocab: file.vocab.tokens().to_vec(),
        doc_freq: file.vocab.doc_freq().to_vec(),
        doc_ids: file.corpus.doc_ids.clone(),
        excluded_ids: file.excluded_ids.clone(),
    };
    let json = |e: serde_json::Error| Error::data(e.to_string());
    serde_json::to_writer(&mut out, &header).map_err(json)?;
    out.write_all(b"\n").map_err(io)?;
    for ((id, year), counts) in file
        .corpus
        .doc_ids
        .iter()
        .zip(&file.corpus.years)
        .zip(&file.corpus.docs)
    {
        let row = Row {
            id: id.clone(),
            year: *year,
            counts: counts.clone(),
        };
        serde_json::to_writer(&mut out, &row).map_err(json)?;
        out.write_all(b"\n").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn load_bow(path: &Path) -> Result<BowFile> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let first = match lines.next() {
        Some(line) => line.map_err(|e| Error::io(path, e))?,
        None => return Err(parse_err(1, "empty file".into())),
    };
    let header: Header = serde_json::from_str(&first).map_err(|e| parse_err(1, e.to_string()))?;
    if header.format != BOW_FORMAT {
        return Err(parse_err(1, format!("not a bag-of-words file (format `{}`)", header.format)));
    }
    if header.version != BOW_VERSION {
        return Err(parse_err(
            1,
            format!(
                "unsupported bag-of-words version {} (expected {BOW_VERSION})",
                header.version
            ),
        ));
    }
    if header.vocab_size != header.vocab.len() {
        return Err(parse_err(1, "vocab_size does not match vocabulary".into()));
    }
    let vocab = Vocabulary::from_parts(header.vocab, header.doc_freq)?;

    let mut corpus = BowCorpus {
        docs: Vec::with_capacity(header.doc_ids.len()),
        doc_ids: Vec::with_capacity(header.doc_ids.len()),
        years: Vec::with_capacity(header.doc_ids.len()),
        vocab_size: vocab.len(),
    };
    for (index, line) in lines.enumerate() {
        let line_no = index + 2;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Row = serde_json::from_str(&line).map_err(|e| parse_err(line_no, e.to_string()))?;
        corpus.docs.push(row.counts);
        corpus.doc_ids.push(row.id);
        corpus.years.push(row.year);
    }
    if corpus.doc_ids != header.doc_ids {
        return Err(Error::data(format!(
            "{}: document rows do not match the header's doc_ids",
            path.display()
        )));
    }
    corpus.validate()?;
    Ok(BowFile {
        lang: header.lang,
        vocab,
        corpus,
        excluded_ids: header.excluded_ids,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::build_vocabulary;

    fn doc(id: &str, lemmas: &[&str]) -> Document {
        Document {
            id: id.into(),
            lemmas: lemmas.iter().map(|s| s.to_string()).collect(),
            year: Some(1850),
            lang: "en".into(),
        }
    }

    #[test]
    fn counts_multiplicity() {
        let docs = vec![doc("a", &["sea", "sea", "storm"])];
        let vocab = Vocabulary::from_parts(vec!["sea".into(), "storm".into()], vec![1, 1]).unwrap();
        let (bow, excluded) = to_bow(&docs, &vocab);
        assert_eq!(bow.docs, vec![vec![(0, 2), (1, 1)]]);
        assert!(excluded.is_empty());
    }

    #[test]
    fn oov_only_document_excluded() {
        let docs = vec![doc("a", &["sea"]), doc("b", &["ship"])];
        let vocab = Vocabulary::from_parts(vec!["sea".into()], vec![1]).unwrap();
        let (bow, excluded) = to_bow(&docs, &vocab);
        assert_eq!(bow.doc_ids, ["a"]);
        assert_eq!(excluded, ["b"]);
    }

    #[test]
    fn total_tokens_of_small_fixture() {
        let docs = vec![doc("1", &["a", "b"]), doc("2", &["a", "c"]), doc("3", &["a", "b"])];
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        let (bow, _) = to_bow(&docs, &vocab);
        assert_eq!(bow.total_tokens(), 6);
        bow.validate().unwrap();
    }

    #[test]
    fn file_round_trip() {
        let docs = vec![doc("1", &["a", "b", "b"]), doc("2", &["a", "c"])];
        let vocab = build_vocabulary(&docs, 1, 1.0).unwrap();
        let (corpus, _) = to_bow(&docs, &vocab);
        let file = BowFile {
            lang: Some("en".into()),
            vocab,
            corpus,
            excluded_ids: vec!["3".into()],
        };
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("bow.jsonl");
        save_bow(&file, &path).unwrap();
        assert_eq!(load_bow(&path).unwrap(), file);
    }

    #[test]
    fn rejects_non_canonical_rows() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("bow.jsonl");
        fs::write(
            &path,
            "{\"format\":\"diachrony-bow\",\"version\":1,\"lang\":null,\"vocab_size\":2,\"vocab\":[\"a\",\"b\"],\"doc_freq\":[1,1],\"doc_ids\":[\"x\"],\"excluded_ids\":[]}\n{\"id\":\"x\",\"year\":null,\"counts\":[[1,1],[0,1]]}\n",
        )
        .unwrap();
        assert!(load_bow(&path).is_err());
    }
}
