//! Cross-corpus topic alignment through a bilingual lexicon.
//!
//! A source topic's top words are translated and looked up among the target
//! topic's top words. The resulting score matrix is turned into a one-to-one
//! matching, which is meant as a ranked list of candidates for a human reader.

mod assignment;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::thread;

use serde::{Deserialize, Serialize};

pub use assignment::{greedy_assignment, max_weight_assignment};

use crate::lda::TopicSummary;
use crate::{Error, Result};

/// Directed translation table from source lemmas to target lemmas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub source_lang: Option<String>,
    pub target_lang: Option<String>,
    entries: BTreeMap<String, BTreeSet<String>>,
}

impl Lexicon {
    pub fn new(source_lang: Option<String>, target_lang: Option<String>) -> Self {
        Lexicon {
            source_lang,
            target_lang,
            entries: BTreeMap::new(),
        }
    }

    /// Maps every given lemma to itself.
    pub fn identity<I, S>(lang: Option<String>, lemmas: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lex = Lexicon::new(lang.clone(), lang);
        for lemma in lemmas {
            lex.insert(lemma.as_ref(), lemma.as_ref());
        }
        lex
    }

    /// Lemmas are lowercased on insertion.
    pub fn insert(&mut self, source: &str, target: &str) {
        self.entries
            .entry(source.to_lowercase())
            .or_default()
            .insert(target.to_lowercase());
    }

    pub fn translations(&self, source: &str) -> Option<&BTreeSet<String>> {
        self.entries.get(source)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Reads `source<TAB>target` rows. Blank lines and `#` comments are
    /// skipped; a comment of the form `# source=de target=en` sets the
    /// languages.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lex = Lexicon::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    match field.split_once('=') {
                        Some(("source", lang)) => lex.source_lang = Some(lang.to_string()),
                        Some(("target", lang)) => lex.target_lang = Some(lang.to_string()),
                        _ => {}
                    }
                }
                continue;
            }
            let parse_error = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
            match cols.as_slice() {
                [source, target] if !source.is_empty() && !target.is_empty() => lex.insert(source, target),
                [_, _] => return Err(parse_error("empty lemma".into())),
                _ => {
                    return Err(parse_error(format!(
                        "expected 2 tab-separated columns, found {}",
                        cols.len()
                    )))
                }
            }
        }
        Ok(lex)
    }
}

/// `sum_w p_a(w) * max_{t in lex(w)} p_b(t)` over the top `k` words of each
/// topic, divided by `sum_w p_a(w)`. Translations outside `b`'s top `k`
/// count as zero.
pub fn weighted_overlap(a: &TopicSummary, b: &TopicSummary, lex: &Lexicon, k: usize) -> f64 {
    let (numerator, mass) = overlap_parts(a, b, lex, k);
    if mass > 0.0 {
        numerator / mass
    } else {
        0.0
    }
}

fn overlap_parts(a: &TopicSummary, b: &TopicSummary, lex: &Lexicon, k: usize) -> (f64, f64) {
    let target: BTreeMap<&str, f64> = b
        .top_words
        .iter()
        .take(k)
        .map(|(w, p)| (w.as_str(), *p))
        .collect();
    let mut numerator = 0.0;
    let mut mass = 0.0;
    for (w, p) in a.top_words.iter().take(k) {
        mass += p;
        let best = lex
            .translations(w)
            .into_iter()
            .flatten()
            .filter_map(|t| target.get(t.as_str()).copied())
            .fold(0.0, f64::max);
        numerator += p * best;
    }
    (numerator, mass)
}

/// Lexicon overlap rescaled to `[0, 1]` so that a topic compared with
/// itself under the identity lexicon scores exactly 1:
/// `sum_w p_a(w) * m_b(w) / sqrt(sum p_a^2 * sum p_b^2)` over the top `k`
/// words, where `m_b(w)` is the best translated probability in `b`.
pub fn topic_similarity(a: &TopicSummary, b: &TopicSummary, lex: &Lexicon, k: usize) -> f64 {
    let (numerator, _) = overlap_parts(a, b, lex, k);
    let norm = |s: &TopicSummary| s.top_words.iter().take(k).map(|(_, p)| p * p).sum::<f64>();
    let denom = (norm(a) * norm(b)).sqrt();
    if denom > 0.0 {
        (numerator / denom).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignMethod {
    Greedy,
    Optimal,
}

impl FromStr for AlignMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(AlignMethod::Greedy),
            "optimal" => Ok(AlignMethod::Optimal),
            other => Err(Error::config(format!(
                "unknown alignment method {other:?} (expected greedy or optimal)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignedPair {
    pub source_topic: usize,
    pub target_topic: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicAlignment {
    /// By descending score, ties by source then target topic.
    pub pairs: Vec<AlignedPair>,
    pub method: AlignMethod,
}

impl TopicAlignment {
    /// Sum of pair scores, added in source-topic order.
    pub fn total_score(&self) -> f64 {
        let mut pairs = self.pairs.clone();
        pairs.sort_by_key(|p| p.source_topic);
        pairs.iter().map(|p| p.score).sum()
    }
}

/// Matches rows to columns of `scores`. Scores below `min_score` are treated
/// as zero by the optimal matcher. Pairs below `min_score` or with no
/// overlap at all are never reported.
pub fn align_scores(scores: &[Vec<f64>], method: AlignMethod, min_score: f64) -> TopicAlignment {
    let matched = match method {
        AlignMethod::Greedy => greedy_assignment(scores),
        AlignMethod::Optimal => {
            let floored: Vec<Vec<f64>> = scores
                .iter()
                .map(|row| row.iter().map(|&s| if s < min_score { 0.0 } else { s }).collect())
                .collect();
            max_weight_assignment(&floored)
        }
    };
    let mut pairs: Vec<AlignedPair> = matched
        .into_iter()
        .map(|(r, c)| AlignedPair {
            source_topic: r,
            target_topic: c,
            score: scores[r][c],
        })
        .filter(|p| p.score >= min_score && p.score > 0.0)
        .collect();
    pairs.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then((a.source_topic, a.target_topic).cmp(&(b.source_topic, b.target_topic)))
    });
    TopicAlignment { pairs, method }
}

/// `scores[i][j] = topic_similarity(a[i], b[j])`, rows computed in parallel.
pub fn score_matrix(a: &[TopicSummary], b: &[TopicSummary], lex: &Lexicon, k: usize) -> Vec<Vec<f64>> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(a.len().max(1));
    let chunk = a.len().div_ceil(workers).max(1);
    thread::scope(|scope| {
        let handles: Vec<_> = a
            .chunks(chunk)
            .map(|rows| {
                scope.spawn(move || {
                    rows.iter()
                        .map(|ta| b.iter().map(|tb| topic_similarity(ta, tb, lex, k)).collect::<Vec<f64>>())
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("scoring thread panicked"))
            .collect()
    })
}

/// Topic ids in the result are positions in `a` and `b`.
pub fn align_topics(
    a: &[TopicSummary],
    b: &[TopicSummary],
    lex: &Lexicon,
    k: usize,
    method: AlignMethod,
    min_score: f64,
) -> Result<TopicAlignment> {
    if k < 1 {
        return Err(Error::config("top-word depth must be >= 1"));
    }
    if !(0.0..=1.0).contains(&min_score) {
        return Err(Error::config(format!("min score must be within [0, 1], got {min_score}")));
    }
    Ok(align_scores(&score_matrix(a, b, lex, k), method, min_score))
}

/// One row of the alignment report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentRow {
    pub source_topic: usize,
    pub target_topic: usize,
    pub score: f64,
    pub source_top_words: Vec<String>,
    /// Best-matching translation of each source word found in the target topic.
    pub translated_words: Vec<String>,
    pub target_top_words: Vec<String>,
}

pub fn alignment_report(
    alignment: &TopicAlignment,
    a: &[TopicSummary],
    b: &[TopicSummary],
    lex: &Lexicon,
    k: usize,
) -> Vec<AlignmentRow> {
    let words = |s: &TopicSummary| s.top_words.iter().take(k).map(|(w, _)| w.clone()).collect::<Vec<_>>();
    alignment
        .pairs
        .iter()
        .map(|p| {
            let (ta, tb) = (&a[p.source_topic], &b[p.target_topic]);
            let target: BTreeMap<&str, f64> = tb.top_words.iter().take(k).map(|(w, q)| (w.as_str(), *q)).collect();
            let mut translated: Vec<String> = Vec::new();
            for (w, _) in ta.top_words.iter().take(k) {
                let best = lex
                    .translations(w)
                    .into_iter()
                    .flatten()
                    .filter_map(|t| target.get(t.as_str()).map(|q| (t, *q)))
                    .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(x.0)));
                if let Some((t, _)) = best {
                    if !translated.contains(t) {
                        translated.push(t.clone());
                    }
                }
            }
            AlignmentRow {
                source_topic: p.source_topic,
                target_topic: p.target_topic,
                score: p.score,
                source_top_words: words(ta),
                translated_words: translated,
                target_top_words: words(tb),
            }
        })
        .collect()
}
