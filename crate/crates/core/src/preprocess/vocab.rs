use std::collections::{BTreeMap, HashMap, HashSet};

use super::Document;
use crate::{Error, Result};

/// Dense token ids sorted by descending document frequency, ties broken
/// lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    token_to_id: HashMap<String, u32>,
    id_to_token: Vec<String>,
    doc_freq: Vec<u32>,
}

impl Vocabulary {
    /// Rebuilds a vocabulary from its id-ordered tokens and document frequencies.
    pub fn from_parts(id_to_token: Vec<String>, doc_freq: Vec<u32>) -> Result<Self> {
        if id_to_token.len() != doc_freq.len() {
            return Err(Error::data(format!(
                "vocabulary has {} tokens but {} document frequencies",
                id_to_token.len(),
                doc_freq.len()
            )));
        }
        let mut token_to_id = HashMap::with_capacity(id_to_token.len());
        for (id, token) in id_to_token.iter().enumerate() {
            if token.is_empty() || token_to_id.insert(token.clone(), id as u32).is_some() {
                return Err(Error::data(format!("invalid or duplicate vocabulary token `{token}`")));
            }
        }
        if let Some(i) = doc_freq.iter().position(|df| *df == 0) {
            return Err(Error::data(format!("token `{}` has document frequency 0", id_to_token[i])));
        }
        Ok(Vocabulary {
            token_to_id,
            id_to_token,
            doc_freq,
        })
    }

    pub fn len(&self) -> usize {
        self.id_to_token.len()
    }

    pub fn is_empty(&self) -> bool {
        self.id_to_token.is_empty()
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.token_to_id.get(token).copied()
    }

    pub fn token(&self, id: u32) -> &str {
        &self.id_to_token[id as usize]
    }

    pub fn tokens(&self) -> &[String] {
        &self.id_to_token
    }

    pub fn doc_freq(&self) -> &[u32] {
        &self.doc_freq
    }
}

pub fn build_vocabulary(docs: &[Document], min_df: u32, max_df_ratio: f64) -> Result<Vocabulary> {
    if min_df < 1 {
        return Err(Error::config("min_df must be at least 1"));
    }
    if !(max_df_ratio > 0.0 && max_df_ratio <= 1.0) {
        return Err(Error::config(format!(
            "max_df_ratio must be in (0, 1], got {max_df_ratio}"
        )));
    }
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for doc in docs {
        let unique: HashSet<&str> = doc.lemmas.iter().map(String::as_str).collect();
        for lemma in unique {
            *df.entry(lemma).or_insert(0) += 1;
        }
    }
    let cap = max_df_ratio * docs.len() as f64;
    let mut entries: Vec<(&str, u32)> = df
        .into_iter()
        .filter(|(_, n)| *n >= min_df && f64::from(*n) <= cap)
        .collect();
    if entries.is_empty() {
        return Err(Error::config(format!(
            "vocabulary is empty after pruning (min_df={min_df}, max_df_ratio={max_df_ratio}, {} documents)",
            docs.len()
        )));
    }
    // BTreeMap iteration is lexicographic, so a stable sort keeps that as the tie-break
    entries.sort_by(|a, b| b.1.cmp(&a.1));
    let (tokens, freqs): (Vec<String>, Vec<u32>) =
        entries.into_iter().map(|(t, n)| (t.to_string(), n)).unzip();
    Vocabulary::from_parts(tokens, freqs)
}
