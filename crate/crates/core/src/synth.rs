//! Synthetic corpora drawn from the LDA generative process with known
//! topic-word and document-topic distributions.

use rand::Rng as _;
use rand_distr::{Distribution, Gamma};

use crate::preprocess::BowCorpus;
use crate::rng::{doc_stream, Purpose, Rng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedParams {
    pub vocab_size: usize,
    pub topics: usize,
    pub docs: usize,
    pub min_len: u32,
    pub max_len: u32,
    /// Dirichlet concentration for document mixtures.
    pub alpha: f64,
    /// Probability mass each topic spreads uniformly over the whole vocabulary.
    pub leak: f64,
    pub seed: u64,
}

impl Default for PlantedParams {
    /// 200 words, 5 topics on 40-word blocks, 500 documents of 80 to 120 tokens.
    fn default() -> Self {
        PlantedParams {
            vocab_size: 200,
            topics: 5,
            docs: 500,
            min_len: 80,
            max_len: 120,
            alpha: 0.1,
            leak: 0.05,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedCorpus {
    pub corpus: BowCorpus,
    /// `K x V`.
    pub phi: Vec<Vec<f64>>,
    /// `D x K`, the mixtures the documents were drawn from.
    pub theta: Vec<Vec<f64>>,
    /// `w000`, `w001`, ...
    pub vocab: Vec<String>,
}

fn dirichlet(rng: &mut Rng, concentration: f64, dim: usize) -> Vec<f64> {
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    loop {
        let draw: Vec<f64> = (0..dim).map(|_| gamma.sample(rng)).collect();
        let sum: f64 = draw.iter().sum();
        if sum > 0.0 {
            return draw.into_iter().map(|x| x / sum).collect();
        }
    }
}

fn sample_index(rng: &mut Rng, weights: &[f64]) -> usize {
    let u = rng.random::<f64>() * weights.iter().sum::<f64>();
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Topic `k` puts `1 - leak` of its mass on block `k` of `V / K` consecutive
/// words, with Dirichlet(1) weights inside the block.
pub fn planted_corpus(params: &PlantedParams) -> Result<PlantedCorpus> {
    let PlantedParams {
        vocab_size: v,
        topics: k,
        docs,
        min_len,
        max_len,
        alpha,
        leak,
        seed,
    } = *params;
    if k == 0 || v < k {
        return Err(Error::config(format!("need 1 <= topics <= vocabulary size, got K={k}, V={v}")));
    }
    if min_len == 0 || min_len > max_len {
        return Err(Error::config(format!("bad document length range {min_len}..={max_len}")));
    }
    if !(alpha > 0.0) || !(0.0..=1.0).contains(&leak) {
        return Err(Error::config("alpha must be > 0 and leak within [0, 1]"));
    }

    let mut rng = doc_stream(seed, Purpose::Synthetic, "phi");
    let block = v / k;
    let phi: Vec<Vec<f64>> = (0..k)
        .map(|t| {
            let weights = dirichlet(&mut rng, 1.0, block);
            let mut row = vec![leak / v as f64; v];
            for (i, w) in weights.iter().enumerate() {
                row[t * block + i] += (1.0 - leak) * w;
            }
            row
        })
        .collect();

    let mut rows = Vec::with_capacity(docs);
    let mut theta = Vec::with_capacity(docs);
    let mut doc_ids = Vec::with_capacity(docs);
    for d in 0..docs {
        let id = format!("doc{d:04}");
        let mut rng = doc_stream(seed, Purpose::Synthetic, &id);
        let mixture = dirichlet(&mut rng, alpha, k);
        let len = rng.random_range(min_len..=max_len);
        let mut counts = vec![0u32; v];
        for _ in 0..len {
            let z = sample_index(&mut rng, &mixture);
            counts[sample_index(&mut rng, &phi[z])] += 1;
        }
        rows.push(
            counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(w, &c)| (w as u32, c))
                .collect(),
        );
        theta.push(mixture);
        doc_ids.push(id);
    }

    Ok(PlantedCorpus {
        corpus: BowCorpus {
            docs: rows,
            doc_ids,
            years: vec![None; docs],
            vocab_size: v,
        },
        phi,
        theta,
        vocab: (0..v).map(|w| format!("w{w:03}")).collect(),
    })
}
