//! The sequential sampler against the exact collapsed posterior of a corpus
//! small enough to enumerate.

use std::collections::HashMap;

use diachrony::lda::{gibbs_sweep, init_model, LdaHyperparams};
use diachrony::preprocess::BowCorpus;

/// `Gamma(a + n) / Gamma(a)`.
fn rising(a: f64, n: u32) -> f64 {
    (0..n).map(|i| a + f64::from(i)).product()
}

/// Unnormalized `p(z | w)` with theta and phi integrated out.
fn joint(words: &[Vec<u32>], z: &[Vec<u32>], k: usize, v: usize, alpha: f64, beta: f64) -> f64 {
    let mut p = 1.0;
    let mut n_kw = vec![vec![0u32; v]; k];
    for (doc_words, doc_z) in words.iter().zip(z) {
        let mut n_dk = vec![0u32; k];
        for (&w, &t) in doc_words.iter().zip(doc_z) {
            n_dk[t as usize] += 1;
            n_kw[t as usize][w as usize] += 1;
        }
        for &n in &n_dk {
            p *= rising(alpha, n);
        }
        p /= rising(k as f64 * alpha, doc_words.len() as u32);
    }
    for row in &n_kw {
        for &n in row {
            p *= rising(beta, n);
        }
        p /= rising(v as f64 * beta, row.iter().sum());
    }
    p
}

#[test]
fn long_run_frequencies_match_exact_posterior() {
    let corpus = BowCorpus {
        docs: vec![vec![(0, 2), (1, 1)], vec![(1, 1), (2, 2)]],
        doc_ids: vec!["x".into(), "y".into()],
        years: vec![None, None],
        vocab_size: 3,
    };
    let (k, v, alpha, beta) = (2usize, 3usize, 0.5, 0.3);
    let hyper = LdaHyperparams::new(k).with_alpha(alpha).with_beta(beta).with_seed(17);
    let mut model = init_model(&corpus, hyper).unwrap();
    let words: Vec<Vec<u32>> = (0..2).map(|d| model.words(d).to_vec()).collect();
    let tokens: usize = words.iter().map(Vec::len).sum();

    let mut exact = HashMap::new();
    let mut norm = 0.0;
    for code in 0u32..(1 << tokens) {
        let mut bits = (0..tokens).map(|i| (code >> i) & 1);
        let z: Vec<Vec<u32>> = words.iter().map(|d| d.iter().map(|_| bits.next().unwrap()).collect()).collect();
        let p = joint(&words, &z, k, v, alpha, beta);
        norm += p;
        exact.insert(z, p);
    }

    let sweeps = 400_000u32;
    for _ in 0..1000 {
        gibbs_sweep(&mut model);
    }
    let mut seen: HashMap<Vec<Vec<u32>>, u32> = HashMap::new();
    for _ in 0..sweeps {
        gibbs_sweep(&mut model);
        let z: Vec<Vec<u32>> = (0..2).map(|d| model.assignments(d).to_vec()).collect();
        *seen.entry(z).or_default() += 1;
    }
    let tv: f64 = exact
        .iter()
        .map(|(z, p)| (p / norm - f64::from(seen.get(z).copied().unwrap_or(0)) / f64::from(sweeps)).abs())
        .sum::<f64>()
        / 2.0;
    println!("total variation distance {tv:.5}");
    assert!(tv < 0.01, "total variation {tv}");
}
