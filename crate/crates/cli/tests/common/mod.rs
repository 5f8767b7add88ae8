#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use diachrony::preprocess::{save_bow, BowCorpus, BowFile, Vocabulary};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn cli<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_diachrony"))
        .args(args)
        .env_remove("DIACHRONY_THREADS")
        .output()
        .expect("binary runs")
}

pub fn describe(out: &Output) -> String {
    format!(
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

/// Writes a corpus with token names `vocab` as a bag-of-words file.
pub fn write_bow(path: &Path, corpus: &BowCorpus, vocab: &[String], lang: &str) {
    let mut df = vec![0u32; vocab.len()];
    for doc in &corpus.docs {
        for &(w, _) in doc {
            df[w as usize] += 1;
        }
    }
    let df = df.into_iter().map(|d| d.max(1)).collect();
    let file = BowFile {
        lang: Some(lang.into()),
        vocab: Vocabulary::from_parts(vocab.to_vec(), df).unwrap(),
        corpus: corpus.clone(),
        excluded_ids: vec![],
    };
    save_bow(&file, path).unwrap();
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
