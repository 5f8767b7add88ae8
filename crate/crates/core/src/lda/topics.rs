use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::LdaModel;
use crate::{Error, Result};

/// The most likely words of one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSummary {
    pub topic_id: usize,
    /// `(lemma, probability)` by decreasing probability, ties lexicographic.
    pub top_words: Vec<(String, f64)>,
    pub label: Option<String>,
}

impl TopicSummary {
    pub fn probability(&self, lemma: &str) -> Option<f64> {
        self.top_words
            .iter()
            .find(|(w, _)| w == lemma)
            .map(|(_, p)| *p)
    }
}

pub fn top_words(model: &LdaModel, vocab: &[String], topic_id: usize, k: usize) -> Result<TopicSummary> {
    let topics = model.num_topics();
    let v = model.vocab_size();
    if topic_id >= topics {
        return Err(Error::config(format!(
            "topic {topic_id} out of range (model has topics 0..{})",
            topics - 1
        )));
    }
    if k < 1 || k > v {
        return Err(Error::config(format!("top-word depth must be in 1..={v}, got {k}")));
    }
    if vocab.len() != v {
        return Err(Error::data(format!(
            "vocabulary has {} entries, model expects {v}",
            vocab.len()
        )));
    }
    // phi is monotone in the raw count within a topic, so rank on integers
    let mut ranked: Vec<usize> = (0..v).collect();
    ranked.sort_by(|&a, &b| {
        model
            .topic_word_count(topic_id, b)
            .cmp(&model.topic_word_count(topic_id, a))
            .then_with(|| vocab[a].cmp(&vocab[b]))
    });
    let beta = model.hyper().beta;
    let denom = f64::from(model.topic_totals()[topic_id]) + v as f64 * beta;
    let top_words = ranked
        .into_iter()
        .take(k)
        .map(|w| {
            let p = (f64::from(model.topic_word_count(topic_id, w)) + beta) / denom;
            (vocab[w].clone(), p)
        })
        .collect();
    Ok(TopicSummary {
        topic_id,
        top_words,
        label: None,
    })
}

/// JSON export of topic summaries for human inspection.
pub fn save_topic_summaries(summaries: &[TopicSummary], path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(summaries).map_err(|e| Error::data(e.to_string()))?;
    fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}
