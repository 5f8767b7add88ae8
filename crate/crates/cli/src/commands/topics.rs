use std::path::Path;

use diachrony::lda::{load_model, save_topic_summaries, top_words, SavedModel, TopicSummary};
use diachrony::{Error, Result};

use super::{out_dir, DEFAULT_TOP_K};
use crate::config::{require_file, FileConfig};
use crate::TopicsArgs;

pub fn load(path: &Path) -> Result<SavedModel> {
    require_file(path, "model file")?;
    load_model(path)
}

/// Summaries of every topic, with the depth capped at the vocabulary size.
pub fn summaries(saved: &SavedModel, k: usize) -> Result<Vec<TopicSummary>> {
    if k < 1 {
        return Err(Error::config("--top-k must be >= 1"));
    }
    let k = k.min(saved.vocab.len());
    (0..saved.model.num_topics())
        .map(|t| top_words(&saved.model, &saved.vocab, t, k))
        .collect()
}

pub fn run(args: TopicsArgs, cfg: &FileConfig) -> Result<()> {
    let path = args
        .model
        .or_else(|| cfg.models().into_iter().next())
        .ok_or_else(|| Error::config("topics needs --model"))?;
    let saved = load(&path)?;
    let top_k = args.top_k.or(cfg.top_k).unwrap_or(DEFAULT_TOP_K);
    let summaries = summaries(&saved, top_k)?;
    for s in &summaries {
        let words: Vec<&str> = s.top_words.iter().map(|(w, _)| w.as_str()).collect();
        println!("{:>4}  {}", s.topic_id, words.join(" "));
    }
    if args.out.is_some() || cfg.out.is_some() {
        let out = out_dir(args.out, cfg)?;
        save_topic_summaries(&summaries, &out.join("topics.json"))?;
    }
    Ok(())
}
