use rand::Rng as _;

use crate::preprocess::BowCorpus;
use crate::rng::{doc_stream, Purpose};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LdaHyperparams {
    pub topics: usize,
    /// Symmetric Dirichlet prior on document-topic mixtures.
    pub alpha: f64,
    /// Symmetric Dirichlet prior on topic-word distributions.
    pub beta: f64,
    pub passes: u32,
    pub seed: u64,
}

impl LdaHyperparams {
    /// `alpha = 50 / K`, `beta = 0.01`, 100 passes, seed 0.
    pub fn new(topics: usize) -> Self {
        LdaHyperparams {
            topics,
            alpha: 50.0 / topics.max(1) as f64,
            beta: 0.01,
            passes: 100,
            seed: 0,
        }
    }

    pub fn with_passes(mut self, passes: u32) -> Self {
        self.passes = passes;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.topics < 1 || self.topics > u32::MAX as usize {
            return Err(Error::config(format!("topic count must be >= 1, got {}", self.topics)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::config(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::config(format!("beta must be > 0, got {}", self.beta)));
        }
        if self.passes < 1 {
            return Err(Error::config("passes must be >= 1"));
        }
        Ok(())
    }
}

/// Sampler state: per-token topic assignments and the count matrices they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub(crate) hyper: LdaHyperparams,
    pub(crate) vocab_size: usize,
    pub(crate) doc_ids: Vec<String>,
    pub(crate) words: Vec<Vec<u32>>,
    pub(crate) assignments: Vec<Vec<u32>>,
    /// Word-major: entry `w * K + k`.
    pub(crate) word_topic: Vec<u32>,
    pub(crate) topic_totals: Vec<u32>,
    /// Document-major: entry `d * K + k`.
    pub(crate) doc_topic: Vec<u32>,
    pub(crate) doc_len: Vec<u32>,
    pub(crate) sweeps: u32,
}

pub fn init_model(corpus: &BowCorpus, hyper: LdaHyperparams) -> Result<LdaModel> {
    // passes is only checked by train; a fresh state may be swept by hand
    LdaHyperparams { passes: 1, ..hyper }.validate()?;
    if corpus.is_empty() {
        return Err(Error::data("cannot train on an empty corpus"));
    }
    if corpus.vocab_size == 0 {
        return Err(Error::data("cannot train with an empty vocabulary"));
    }
    corpus.validate()?;
    let k = hyper.topics;
    let total = corpus.total_tokens();
    if k as u64 > total {
        log::warn!("{k} topics for only {total} tokens; most topics will stay empty");
    }

    let mut model = LdaModel {
        hyper,
        vocab_size: corpus.vocab_size,
        doc_ids: corpus.doc_ids.clone(),
        words: Vec::with_capacity(corpus.len()),
        assignments: Vec::with_capacity(corpus.len()),
        word_topic: vec![0; corpus.vocab_size * k],
        topic_totals: vec![0; k],
        doc_topic: vec![0; corpus.len() * k],
        doc_len: Vec::with_capacity(corpus.len()),
        sweeps: 0,
    };
    for (d, (row, id)) in corpus.docs.iter().zip(&corpus.doc_ids).enumerate() {
        let words: Vec<u32> = row
            .iter()
            .flat_map(|&(w, c)| std::iter::repeat_n(w, c as usize))
            .collect();
        let mut rng = doc_stream(hyper.seed, Purpose::Init, id);
        let z: Vec<u32> = words
            .iter()
            .map(|_| rng.random_range(0..k as u32))
            .collect();
        for (&w, &t) in words.iter().zip(&z) {
            model.word_topic[w as usize * k + t as usize] += 1;
            model.topic_totals[t as usize] += 1;
            model.doc_topic[d * k + t as usize] += 1;
        }
        model.doc_len.push(words.len() as u32);
        model.words.push(words);
        model.assignments.push(z);
    }
    Ok(model)
}

impl LdaModel {
    pub fn hyper(&self) -> &LdaHyperparams {
        &self.hyper
    }

    pub fn num_topics(&self) -> usize {
        self.hyper.topics
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Completed Gibbs sweeps.
    pub fn sweeps(&self) -> u32 {
        self.sweeps
    }

    pub fn total_tokens(&self) -> u64 {
        self.doc_len.iter().map(|&n| u64::from(n)).sum()
    }

    pub fn assignments(&self, doc: usize) -> &[u32] {
        &self.assignments[doc]
    }

    pub fn words(&self, doc: usize) -> &[u32] {
        &self.words[doc]
    }

    /// Topic-word count `n_kw[topic, word]`.
    pub fn topic_word_count(&self, topic: usize, word: usize) -> u32 {
        self.word_topic[word * self.hyper.topics + topic]
    }

    pub fn topic_totals(&self) -> &[u32] {
        &self.topic_totals
    }

    pub fn doc_topic_counts(&self, doc: usize) -> &[u32] {
        let k = self.hyper.topics;
        &self.doc_topic[doc * k..(doc + 1) * k]
    }

    pub fn doc_len(&self, doc: usize) -> u32 {
        self.doc_len[doc]
    }

    /// Topic-word distributions, `K x V`: `(n_kw + beta) / (n_k + V beta)`.
    pub fn phi(&self) -> Vec<Vec<f64>> {
        let (k, v) = (self.hyper.topics, self.vocab_size);
        let beta = self.hyper.beta;
        let vbeta = v as f64 * beta;
        (0..k)
            .map(|t| {
                let denom = f64::from(self.topic_totals[t]) + vbeta;
                (0..v)
                    .map(|w| (f64::from(self.word_topic[w * k + t]) + beta) / denom)
                    .collect()
            })
            .collect()
    }

    /// Topic mixture of one training document: `(n_dk + alpha) / (n_d + K alpha)`.
    pub fn theta_row(&self, doc: usize) -> Vec<f64> {
        let k = self.hyper.topics;
        let alpha = self.hyper.alpha;
        let denom = f64::from(self.doc_len[doc]) + k as f64 * alpha;
        self.doc_topic_counts(doc)
            .iter()
            .map(|&n| (f64::from(n) + alpha) / denom)
            .collect()
    }

    /// Document-topic distributions, `D x K`.
    pub fn theta(&self) -> Vec<Vec<f64>> {
        (0..self.num_docs()).map(|d| self.theta_row(d)).collect()
    }

    /// Recomputes every count matrix from the assignments and compares.
    pub fn check_consistency(&self) -> std::result::Result<(), String> {
        let k = self.hyper.topics;
        let d = self.num_docs();
        if self.words.len() != d || self.assignments.len() != d || self.doc_len.len() != d {
            return Err("per-document arrays differ in length".into());
        }
        let mut word_topic = vec![0u32; self.vocab_size * k];
        let mut topic_totals = vec![0u32; k];
        let mut doc_topic = vec![0u32; d * k];
        for doc in 0..d {
            let (words, z) = (&self.words[doc], &self.assignments[doc]);
            if words.len() != z.len() || words.len() != self.doc_len[doc] as usize {
                return Err(format!("document {doc}: token and assignment counts differ"));
            }
            for (&w, &t) in words.iter().zip(z) {
                if t as usize >= k || w as usize >= self.vocab_size {
                    return Err(format!("document {doc}: word {w} / topic {t} out of range"));
                }
                word_topic[w as usize * k + t as usize] += 1;
                topic_totals[t as usize] += 1;
                doc_topic[doc * k + t as usize] += 1;
            }
        }
        if word_topic != self.word_topic {
            return Err("topic-word counts disagree with assignments".into());
        }
        if topic_totals != self.topic_totals {
            return Err("topic totals disagree with assignments".into());
        }
        if doc_topic != self.doc_topic {
            return Err("document-topic counts disagree with assignments".into());
        }
        let sum: u64 = self.topic_totals.iter().map(|&n| u64::from(n)).sum();
        if sum != self.total_tokens() {
            return Err(format!("topic totals sum to {sum}, corpus has {}", self.total_tokens()));
        }
        Ok(())
    }
}
