use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{Error, Result};

pub const MIN_YEAR: i32 = 1000;
pub const MAX_YEAR: i32 = 2100;

/// One poem with its metadata, as read from disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
    pub year: Option<i32>,
    pub author: Option<String>,
    #[serde(rename = "lang")]
    pub declared_lang: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    PlaintextDir,
}

impl FromStr for CorpusFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "plaintext-dir" | "dir" => Ok(CorpusFormat::PlaintextDir),
            other => Err(Error::config(format!(
                "unknown corpus format `{other}` (expected jsonl or plaintext-dir)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadedCorpus {
    pub docs: Vec<RawDocument>,
    /// Records that could not be turned into a document.
    pub skipped: usize,
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<LoadedCorpus> {
    let loaded = match format {
        CorpusFormat::Jsonl => load_jsonl(path)?,
        CorpusFormat::PlaintextDir => load_plaintext_dir(path)?,
    };
    let mut seen = HashSet::new();
    for doc in &loaded.docs {
        if !seen.insert(doc.id.as_str()) {
            return Err(Error::data(format!(
                "{}: duplicate document id `{}`",
                path.display(),
                doc.id
            )));
        }
    }
    log::info!(
        "{}: loaded {} documents, skipped {} records",
        path.display(),
        loaded.docs.len(),
        loaded.skipped
    );
    Ok(loaded)
}

/// Writes documents in the canonical JSONL form read by [`load_corpus`].
pub fn write_jsonl<W: Write>(docs: &[RawDocument], mut out: W) -> std::io::Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut out, doc)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn parse_year(value: &Value, origin: &str) -> Option<i32> {
    let year = match value {
        Value::Null => return None,
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.trim().parse::<i64>().ok(),
        _ => None,
    };
    match year {
        Some(y) if (i64::from(MIN_YEAR)..=i64::from(MAX_YEAR)).contains(&y) => Some(y as i32),
        _ => {
            warn!("{origin}: unparseable or out-of-range year {value}, treating as absent");
            None
        }
    }
}

fn optional_string(value: Option<&Value>) -> Option<String> {
    match value {
        Some(Value::String(s)) if !s.trim().is_empty() => Some(s.clone()),
        _ => None,
    }
}

fn load_jsonl(path: &Path) -> Result<LoadedCorpus> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut corpus = LoadedCorpus::default();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let origin = format!("{}:{line_no}", path.display());
        let record: Value = match serde_json::from_str(&line) {
            Ok(v) => v,
            Err(e) => {
                warn!("{origin}: skipping malformed record: {e}");
                corpus.skipped += 1;
                continue;
            }
        };
        let Some(obj) = record.as_object() else {
            warn!("{origin}: skipping record that is not a JSON object");
            corpus.skipped += 1;
            continue;
        };
        let id = obj.get("id").and_then(Value::as_str).unwrap_or_default();
        let text = obj.get("text").and_then(Value::as_str).unwrap_or_default();
        if id.is_empty() || text.trim().is_empty() {
            warn!("{origin}: skipping record without id or text");
            corpus.skipped += 1;
            continue;
        }
        corpus.docs.push(RawDocument {
            id: id.to_string(),
            text: text.to_string(),
            year: obj.get("year").and_then(|v| parse_year(v, &origin)),
            author: optional_string(obj.get("author")),
            declared_lang: optional_string(obj.get("lang")),
        });
    }
    Ok(corpus)
}

#[derive(Debug, Deserialize)]
struct MetadataRow {
    file: String,
    id: Option<String>,
    year: Option<String>,
    author: Option<String>,
    lang: Option<String>,
}

fn non_empty(s: Option<String>) -> Option<String> {
    s.filter(|s| !s.trim().is_empty())
}

fn load_plaintext_dir(dir: &Path) -> Result<LoadedCorpus> {
    let meta_path = dir.join("metadata.csv");
    let mut reader = csv::Reader::from_path(&meta_path).map_err(|e| csv_error(&meta_path, e))?;
    let mut metadata: BTreeMap<String, (usize, MetadataRow)> = BTreeMap::new();
    for (index, row) in reader.deserialize::<MetadataRow>().enumerate() {
        // header is line 1
        let line = index + 2;
        let row = row.map_err(|e| csv_error(&meta_path, e))?;
        metadata.insert(row.file.clone(), (line, row));
    }

    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    files.sort();

    let mut corpus = LoadedCorpus::default();
    for file in files {
        let name = file
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
        if text.trim().is_empty() {
            warn!("{}: skipping empty text file", file.display());
            corpus.skipped += 1;
            metadata.remove(&name);
            continue;
        }
        let stem = file
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let doc = match metadata.remove(&name) {
            Some((line, row)) => {
                let origin = format!("{}:{line}", meta_path.display());
                let year = non_empty(row.year).and_then(|y| parse_year(&Value::String(y), &origin));
                RawDocument {
                    id: non_empty(row.id).unwrap_or(stem),
                    text,
                    year,
                    author: non_empty(row.author),
                    declared_lang: non_empty(row.lang),
                }
            }
            None => {
                warn!("{}: no metadata row, using file stem as id", file.display());
                RawDocument {
                    id: stem,
                    text,
                    year: None,
                    author: None,
                    declared_lang: None,
                }
            }
        };
        corpus.docs.push(doc);
    }
    for (file, (line, _)) in metadata {
        warn!(
            "{}:{line}: metadata row for missing file `{file}`",
            meta_path.display()
        );
        corpus.skipped += 1;
    }
    Ok(corpus)
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line() as usize).unwrap_or(0);
    match err.into_kind() {
        csv::ErrorKind::Io(source) => Error::io(path, source),
        other => Error::Parse {
            path: path.to_path_buf(),
            line,
            message: format!("{other:?}"),
        },
    }
}
