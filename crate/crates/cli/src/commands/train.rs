use diachrony::lda::{save_model, save_topic_summaries, top_words, train, LdaHyperparams, SavedModel};
use diachrony::preprocess::load_bow;
use diachrony::{Error, Result};

use super::{out_dir, DEFAULT_TOP_K};
use crate::config::{require_file, FileConfig, TopicsValue};
use crate::TrainArgs;

pub fn run(args: TrainArgs, cfg: &FileConfig) -> Result<()> {
    let corpus_path = args
        .corpus
        .or_else(|| cfg.corpora().into_iter().next())
        .ok_or_else(|| Error::config("train needs --corpus (a bag-of-words file from ingest)"))?;
    require_file(&corpus_path, "corpus")?;
    let topics = match (args.topics, &cfg.topics) {
        (Some(k), _) => k,
        (None, Some(TopicsValue::Count(k))) => *k,
        (None, Some(TopicsValue::Selection(s))) => {
            return Err(Error::config(format!("`topics` must be a number for train, got {s:?}")))
        }
        (None, None) => 100,
    };
    let mut hyper = LdaHyperparams::new(topics)
        .with_passes(args.passes.or(cfg.passes).unwrap_or(100))
        .with_seed(args.seed.or(cfg.seed).unwrap_or(0));
    if let Some(alpha) = args.alpha.or(cfg.alpha) {
        hyper = hyper.with_alpha(alpha);
    }
    if let Some(beta) = args.beta.or(cfg.beta) {
        hyper = hyper.with_beta(beta);
    }
    hyper.validate()?;
    let threads = args.threads.or(cfg.threads).unwrap_or(1);
    let top_k = args.top_k.or(cfg.top_k).unwrap_or(DEFAULT_TOP_K);
    let out = out_dir(args.out, cfg)?;

    let bow = load_bow(&corpus_path)?;
    log::info!(
        "training K={} for {} passes on {} documents ({} tokens)",
        hyper.topics,
        hyper.passes,
        bow.corpus.len(),
        bow.corpus.total_tokens()
    );
    let model = train(&bow.corpus, hyper, threads)?;
    let vocab = bow.vocab.tokens().to_vec();
    let k = top_k.min(vocab.len());
    let summaries = (0..model.num_topics())
        .map(|t| top_words(&model, &vocab, t, k))
        .collect::<Result<Vec<_>>>()?;
    let saved = SavedModel {
        model,
        lang: bow.lang,
        vocab,
    };
    save_model(&saved, &out.join("model.lda"))?;
    save_topic_summaries(&summaries, &out.join("topics.json"))?;
    println!(
        "trained {} topics over {} documents in {} passes",
        saved.model.num_topics(),
        saved.model.num_docs(),
        saved.model.sweeps()
    );
    Ok(())
}
