use std::fmt::Write as _;

use diachrony::align::{align_topics, alignment_report, AlignMethod, AlignmentRow, Lexicon};
use diachrony::lda::SavedModel;
use diachrony::{Error, Result};

use super::{out_dir, to_json, write, DEFAULT_TOP_K};
use crate::commands::topics::{load, summaries};
use crate::config::{pick_list, require_file, FileConfig};
use crate::AlignArgs;

fn check_lang(side: &str, lexicon: Option<&str>, model: &SavedModel) -> Result<()> {
    match (lexicon, model.lang.as_deref()) {
        (Some(l), Some(m)) if l != m => Err(Error::config(format!(
            "lexicon {side} language is {l} but the {side} model is {m}"
        ))),
        _ => Ok(()),
    }
}

fn table(rows: &[AlignmentRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>6} {:>6} {:>7}  translated words", "source", "target", "score");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>6} {:>6} {:>7.4}  {}",
            r.source_topic,
            r.target_topic,
            r.score,
            r.translated_words.join(" ")
        );
    }
    out
}

pub fn run(args: AlignArgs, cfg: &FileConfig) -> Result<()> {
    let models = pick_list(&args.models, cfg.models());
    if models.len() != 2 {
        return Err(Error::config(format!(
            "align needs exactly two --model files (source, target), got {}",
            models.len()
        )));
    }
    let lexicon_path = args
        .lexicon
        .or_else(|| cfg.lexicon.clone())
        .ok_or_else(|| Error::config("align needs --lexicon"))?;
    require_file(&lexicon_path, "lexicon")?;
    let method: AlignMethod = args
        .method
        .or_else(|| cfg.method.clone())
        .unwrap_or_else(|| "optimal".into())
        .parse()?;
    let top_k = args.top_k.or(cfg.top_k).unwrap_or(DEFAULT_TOP_K);
    let min_score = args.min_score.or(cfg.min_score).unwrap_or(0.0);
    let source = load(&models[0])?;
    let target = load(&models[1])?;
    let lexicon = Lexicon::load(&lexicon_path)?;
    check_lang("source", lexicon.source_lang.as_deref(), &source)?;
    check_lang("target", lexicon.target_lang.as_deref(), &target)?;
    if lexicon.is_empty() {
        log::warn!("lexicon {} has no entries; no topics can align", lexicon_path.display());
    }
    let out = out_dir(args.out, cfg)?;

    let a = summaries(&source, top_k)?;
    let b = summaries(&target, top_k)?;
    let alignment = align_topics(&a, &b, &lexicon, top_k, method, min_score)?;
    let report = alignment_report(&alignment, &a, &b, &lexicon, top_k);
    write(&out.join("alignment.json"), to_json(&report)?)?;
    let text = table(&report);
    write(&out.join("alignment.txt"), &text)?;
    print!("{text}");
    Ok(())
}
