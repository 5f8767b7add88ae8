use std::collections::HashMap;
use std::fs;
use std::path::Path;

use log::warn;

use super::{AnnotatedToken, Upos};
use crate::{Error, Result};

/// Reads a tagger sidecar: `doc_id<TAB>surface<TAB>lemma<TAB>upos`, one token
/// per row, rows of one document contiguous. A leading `doc_id` header row is
/// accepted.
pub fn load_annotations(path: &Path) -> Result<HashMap<String, Vec<AnnotatedToken>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut docs: HashMap<String, Vec<AnnotatedToken>> = HashMap::new();
    let mut current: Option<String> = None;
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        if line.trim().is_empty() || (line_no == 1 && line.starts_with("doc_id\t")) {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: line_no,
            message,
        };
        let cols: Vec<&str> = line.split('\t').collect();
        let [doc_id, surface, lemma, tag] = cols[..] else {
            return Err(parse_err(format!("expected 4 columns, found {}", cols.len())));
        };
        if doc_id.is_empty() || surface.is_empty() {
            return Err(parse_err("empty doc_id or surface".into()));
        }
        if current.as_deref() != Some(doc_id) {
            if docs.contains_key(doc_id) {
                return Err(parse_err(format!("rows for document `{doc_id}` are not contiguous")));
            }
            current = Some(doc_id.to_string());
        }
        let upos = Upos::from_tag(tag).unwrap_or_else(|| {
            warn!("{}:{line_no}: unknown POS tag `{tag}`, using OTHER", path.display());
            Upos::Other
        });
        docs.entry(doc_id.to_string())
            .or_default()
            .push(AnnotatedToken::new(surface, lemma, upos));
    }
    Ok(docs)
}
