use std::thread;

use rand::Rng as _;

use super::model::{init_model, LdaHyperparams, LdaModel};
use crate::preprocess::BowCorpus;
use crate::rng::{doc_stream, Purpose};
use crate::{Error, Result};

/// Shared sampling constants for one sweep.
struct Params {
    topics: usize,
    alpha: f64,
    beta: f64,
    vbeta: f64,
    seed: u64,
    sweep: u32,
}

impl Params {
    fn of(model: &LdaModel) -> Self {
        let hyper = model.hyper;
        Params {
            topics: hyper.topics,
            alpha: hyper.alpha,
            beta: hyper.beta,
            vbeta: model.vocab_size as f64 * hyper.beta,
            seed: hyper.seed,
            sweep: model.sweeps,
        }
    }
}

/// Resamples every token of the given documents in order, updating
/// `word_topic` and `topic_totals` as it goes.
#[allow(clippy::too_many_arguments)]
fn sweep_docs(
    params: &Params,
    doc_ids: &[String],
    words: &[Vec<u32>],
    assignments: &mut [Vec<u32>],
    doc_topic: &mut [u32],
    word_topic: &mut [u32],
    topic_totals: &mut [u32],
) {
    let k = params.topics;
    let mut cumulative = vec![0.0_f64; k];
    let mut inv_denom: Vec<f64> = topic_totals
        .iter()
        .map(|&n| 1.0 / (f64::from(n) + params.vbeta))
        .collect();

    for (d, id) in doc_ids.iter().enumerate() {
        let mut rng = doc_stream(params.seed, Purpose::Sweep(params.sweep), id);
        let doc_counts = &mut doc_topic[d * k..(d + 1) * k];
        for (&w, z) in words[d].iter().zip(assignments[d].iter_mut()) {
            let old = *z as usize;
            let row = &mut word_topic[w as usize * k..(w as usize + 1) * k];
            row[old] -= 1;
            doc_counts[old] -= 1;
            topic_totals[old] -= 1;
            inv_denom[old] = 1.0 / (f64::from(topic_totals[old]) + params.vbeta);

            let mut total = 0.0;
            for t in 0..k {
                total += (f64::from(row[t]) + params.beta)
                    * inv_denom[t]
                    * (f64::from(doc_counts[t]) + params.alpha);
                cumulative[t] = total;
            }
            let u = rng.random::<f64>() * total;
            let new = cumulative.partition_point(|&c| c <= u).min(k - 1);

            row[new] += 1;
            doc_counts[new] += 1;
            topic_totals[new] += 1;
            inv_denom[new] = 1.0 / (f64::from(topic_totals[new]) + params.vbeta);
            *z = new as u32;
        }
    }
}

/// One sequential collapsed Gibbs sweep over every token, in document order.
pub fn gibbs_sweep(model: &mut LdaModel) {
    let params = Params::of(model);
    sweep_docs(
        &params,
        &model.doc_ids,
        &model.words,
        &mut model.assignments,
        &mut model.doc_topic,
        &mut model.word_topic,
        &mut model.topic_totals,
    );
    model.sweeps += 1;
}

/// One approximate sweep with `shards` contiguous document shards run in
/// parallel. Each shard reads the topic-word counts as they were at the start
/// of the sweep; deltas are merged afterwards, so counts stay exact.
pub fn gibbs_sweep_sharded(model: &mut LdaModel, shards: usize) {
    let d = model.num_docs();
    let shards = shards.clamp(1, d.max(1));
    if shards == 1 {
        gibbs_sweep(model);
        return;
    }
    let params = Params::of(model);
    let k = params.topics;
    let per_shard = d.div_ceil(shards);
    let snapshot_wt = model.word_topic.clone();
    let snapshot_tt = model.topic_totals.clone();

    let locals: Vec<(Vec<u32>, Vec<u32>)> = thread::scope(|scope| {
        let handles: Vec<_> = model
            .doc_ids
            .chunks(per_shard)
            .zip(model.words.chunks(per_shard))
            .zip(model.assignments.chunks_mut(per_shard))
            .zip(model.doc_topic.chunks_mut(per_shard * k))
            .map(|(((ids, words), z), doc_topic)| {
                let params = &params;
                let mut wt = snapshot_wt.clone();
                let mut tt = snapshot_tt.clone();
                scope.spawn(move || {
                    sweep_docs(params, ids, words, z, doc_topic, &mut wt, &mut tt);
                    (wt, tt)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler shard panicked"))
            .collect()
    });

    merge_deltas(&mut model.word_topic, &snapshot_wt, locals.iter().map(|l| &l.0));
    merge_deltas(&mut model.topic_totals, &snapshot_tt, locals.iter().map(|l| &l.1));
    model.sweeps += 1;
}

fn merge_deltas<'a>(global: &mut [u32], snapshot: &[u32], locals: impl Iterator<Item = &'a Vec<u32>>) {
    let mut acc: Vec<i64> = snapshot.iter().map(|&n| i64::from(n)).collect();
    for local in locals {
        for ((a, &l), &s) in acc.iter_mut().zip(local).zip(snapshot) {
            *a += i64::from(l) - i64::from(s);
        }
    }
    for (g, a) in global.iter_mut().zip(acc) {
        *g = u32::try_from(a).expect("merged count is a valid token count");
    }
}

/// Initializes and runs `hyper.passes` sweeps. `threads == 1` is the exact
/// sequential sampler; more threads use the sharded approximation.
pub fn train(corpus: &BowCorpus, hyper: LdaHyperparams, threads: usize) -> Result<LdaModel> {
    hyper.validate()?;
    if threads < 1 {
        return Err(Error::config("threads must be >= 1"));
    }
    let mut model = init_model(corpus, hyper)?;
    for pass in 0..hyper.passes {
        if threads == 1 {
            gibbs_sweep(&mut model);
        } else {
            gibbs_sweep_sharded(&mut model, threads);
        }
        debug_assert_eq!(model.check_consistency(), Ok(()));
        if (pass + 1) % 10 == 0 {
            log::debug!("completed pass {}/{}", pass + 1, hyper.passes);
        }
    }
    Ok(model)
}
