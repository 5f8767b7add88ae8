//! Fold-in inference for documents outside the training set, and held-out
//! perplexity.

use rand::Rng as _;

use super::LdaModel;
use crate::preprocess::BowCorpus;
use crate::rng::{doc_stream, Purpose, Rng};
use crate::{Error, Result};

/// Word-major copy of the topic-word distributions: entry `w * K + k`.
fn phi_word_major(model: &LdaModel) -> Vec<f64> {
    let k = model.num_topics();
    let phi = model.phi();
    let mut out = vec![0.0; model.vocab_size() * k];
    for (t, row) in phi.iter().enumerate() {
        for (w, p) in row.iter().enumerate() {
            out[w * k + t] = *p;
        }
    }
    out
}

fn fold_in(
    model: &LdaModel,
    phi: &[f64],
    doc: &[(u32, u32)],
    iterations: u32,
    rng: &mut Rng,
) -> Vec<f64> {
    let k = model.num_topics();
    let alpha = model.hyper().alpha;
    let words: Vec<usize> = doc
        .iter()
        .filter(|(w, _)| (*w as usize) < model.vocab_size())
        .flat_map(|&(w, c)| std::iter::repeat_n(w as usize, c as usize))
        .collect();
    if words.is_empty() {
        log::warn!("fold-in on a document without known words; returning uniform mixture");
        return vec![1.0 / k as f64; k];
    }

    let mut counts = vec![0u32; k];
    let mut z: Vec<usize> = words
        .iter()
        .map(|_| rng.random_range(0..k))
        .collect();
    for &t in &z {
        counts[t] += 1;
    }
    let mut cumulative = vec![0.0; k];
    let mut average = vec![0.0; k];
    let burn_in = iterations / 2;
    let denom = words.len() as f64 + k as f64 * alpha;
    for iteration in 0..iterations {
        for (&w, zi) in words.iter().zip(z.iter_mut()) {
            counts[*zi] -= 1;
            let row = &phi[w * k..(w + 1) * k];
            let mut total = 0.0;
            for t in 0..k {
                total += row[t] * (f64::from(counts[t]) + alpha);
                cumulative[t] = total;
            }
            let u = rng.random::<f64>() * total;
            let new = cumulative.partition_point(|&c| c <= u).min(k - 1);
            counts[new] += 1;
            *zi = new;
        }
        if iteration >= burn_in {
            for (a, &n) in average.iter_mut().zip(&counts) {
                *a += (f64::from(n) + alpha) / denom;
            }
        }
    }
    let kept = f64::from(iterations - burn_in);
    average.iter_mut().for_each(|a| *a /= kept);
    average
}

/// Topic mixture of a new document with the topic-word counts held fixed.
///
/// Runs `iterations` Gibbs sweeps over the document's tokens and averages
/// the mixture over the second half of them.
pub fn infer_theta(model: &LdaModel, doc: &[(u32, u32)], iterations: u32, seed: u64) -> Result<Vec<f64>> {
    if iterations < 1 {
        return Err(Error::config("fold-in needs at least one iteration"));
    }
    let phi = phi_word_major(model);
    let mut rng = doc_stream(seed, Purpose::FoldIn, "");
    Ok(fold_in(model, &phi, doc, iterations, &mut rng))
}

/// `exp(-sum log p(w) / N)` over every held-out token, with each document's
/// mixture obtained by fold-in.
pub fn perplexity(model: &LdaModel, heldout: &BowCorpus, iterations: u32, seed: u64) -> Result<f64> {
    if heldout.is_empty() {
        return Err(Error::data("perplexity needs at least one held-out document"));
    }
    if iterations < 1 {
        return Err(Error::config("fold-in needs at least one iteration"));
    }
    let k = model.num_topics();
    let v = model.vocab_size();
    let flat = phi_word_major(model);
    let mut log_likelihood = 0.0;
    let mut tokens = 0u64;
    let mut skipped = 0u64;
    for (doc, id) in heldout.docs.iter().zip(&heldout.doc_ids) {
        let mut rng = doc_stream(seed, Purpose::FoldIn, id);
        let theta = fold_in(model, &flat, doc, iterations, &mut rng);
        for &(w, c) in doc {
            if w as usize >= v {
                skipped += u64::from(c);
                continue;
            }
            let row = &flat[w as usize * k..(w as usize + 1) * k];
            let p: f64 = theta.iter().zip(row).map(|(a, b)| a * b).sum();
            log_likelihood += f64::from(c) * p.ln();
            tokens += u64::from(c);
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} held-out tokens outside the model vocabulary were not scored");
    }
    if tokens == 0 {
        return Err(Error::data("held-out corpus has no scorable tokens"));
    }
    Ok((-log_likelihood / tokens as f64).exp())
}
