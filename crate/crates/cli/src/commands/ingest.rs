use std::collections::HashMap;
use std::fs;
use std::path::Path;

use diachrony::ingest::{bundled_profiles, filter_foreign, load_corpus, load_profile, CorpusFormat, LanguageProfile};
use diachrony::preprocess::{
    build_vocabulary, load_annotations, reduce_document, save_bow, to_bow, AnnotatedToken, BowFile, StopList,
};
use diachrony::{Error, Result};
use serde::Serialize;

use super::{out_dir, to_json, write};
use crate::config::{require_file, FileConfig};
use crate::IngestArgs;

#[derive(Serialize)]
struct IngestReport {
    lang: String,
    docs_in: usize,
    skipped_records: usize,
    dropped_foreign: usize,
    dropped_ids: Vec<String>,
    kept_unidentified: usize,
    empty_doc_ids: Vec<String>,
    docs_out: usize,
    vocab_size: usize,
    tokens: u64,
}

/// Bundled profiles, replaced or extended by `*.json` files in `dir`.
fn profiles(dir: Option<&Path>) -> Result<Vec<LanguageProfile>> {
    let mut profiles = bundled_profiles();
    let Some(dir) = dir else { return Ok(profiles) };
    if !dir.is_dir() {
        return Err(Error::config(format!("profile directory {} does not exist", dir.display())));
    }
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for path in paths {
        let profile = load_profile(&path)?;
        profiles.retain(|p| p.lang != profile.lang);
        profiles.push(profile);
    }
    Ok(profiles)
}

pub fn run(args: IngestArgs, cfg: &FileConfig) -> Result<()> {
    let corpus_path = args
        .corpus
        .or_else(|| cfg.corpora().into_iter().next())
        .ok_or_else(|| Error::config("ingest needs --corpus"))?;
    if !corpus_path.exists() {
        return Err(Error::config(format!("corpus {} does not exist", corpus_path.display())));
    }
    let lang = args
        .lang
        .or_else(|| cfg.lang.clone())
        .ok_or_else(|| Error::config("ingest needs --lang"))?;
    let format = match args.format.or_else(|| cfg.format.clone()) {
        Some(f) => f.parse::<CorpusFormat>()?,
        None if corpus_path.is_dir() => CorpusFormat::PlaintextDir,
        None => CorpusFormat::Jsonl,
    };
    let annotations_path = args.annotations.or_else(|| cfg.annotations.clone());
    let stopwords_path = args.stopwords.or_else(|| cfg.stopwords.clone());
    let profiles_dir = args.profiles.or_else(|| cfg.profiles.clone());
    if let Some(p) = &annotations_path {
        require_file(p, "annotation file")?;
    }
    if let Some(p) = &stopwords_path {
        require_file(p, "stopword file")?;
    }
    let pos_filter = args.pos_filter || cfg.pos_filter.unwrap_or(false);
    if pos_filter && annotations_path.is_none() {
        return Err(Error::config("--pos-filter needs --annotations"));
    }
    let margin = args.margin.or(cfg.margin).unwrap_or(0.0);
    let min_df = args.min_df.or(cfg.min_df).unwrap_or(5);
    let max_df = args.max_df.or(cfg.max_df).unwrap_or(0.5);
    let out = out_dir(args.out, cfg)?;

    let loaded = load_corpus(&corpus_path, format)?;
    let docs_in = loaded.docs.len();
    let profiles = profiles(profiles_dir.as_deref())?;
    let filtered = filter_foreign(loaded.docs, &lang, &profiles, margin)?;
    for doc in &filtered.dropped {
        log::info!("{}: dropped as foreign-language", doc.id);
    }

    let stops = match &stopwords_path {
        Some(p) => StopList::load(p)?,
        None => StopList::default(),
    };
    let annotations: HashMap<String, Vec<AnnotatedToken>> = match &annotations_path {
        Some(p) => load_annotations(p)?,
        None => HashMap::new(),
    };
    let docs: Vec<_> = filtered
        .kept
        .iter()
        .map(|raw| {
            let tokens = annotations.get(&raw.id).map(Vec::as_slice);
            if annotations_path.is_some() && tokens.is_none() {
                log::warn!("{}: no annotations, falling back to plain tokens", raw.id);
            }
            let mut doc = reduce_document(raw, tokens, &stops, pos_filter && tokens.is_some());
            doc.lang = lang.clone();
            doc
        })
        .collect();
    let vocab = build_vocabulary(&docs, min_df, max_df)?;
    let (corpus, excluded) = to_bow(&docs, &vocab);
    if corpus.is_empty() {
        return Err(Error::data("no documents left after preprocessing"));
    }

    let report = IngestReport {
        lang: lang.clone(),
        docs_in,
        skipped_records: loaded.skipped,
        dropped_foreign: filtered.dropped.len(),
        dropped_ids: filtered.dropped.iter().map(|d| d.id.clone()).collect(),
        kept_unidentified: filtered.indeterminate,
        empty_doc_ids: excluded.clone(),
        docs_out: corpus.len(),
        vocab_size: vocab.len(),
        tokens: corpus.total_tokens(),
    };
    let file = BowFile {
        lang: Some(lang),
        vocab,
        corpus,
        excluded_ids: excluded,
    };
    save_bow(&file, &out.join("bow.jsonl"))?;
    write(&out.join("ingest_report.json"), to_json(&report)?)?;
    println!(
        "{} documents in, {} dropped as foreign, {} empty, {} written; vocabulary {}",
        report.docs_in, report.dropped_foreign, report.empty_doc_ids.len(), report.docs_out, report.vocab_size
    );
    Ok(())
}
