//! Character n-gram language identification.
//!
//! Each profile stores smoothed log relative frequencies of character
//! 1-, 2- and 3-grams. A text is scored under every profile by summing the
//! log frequencies of its n-grams; the best-scoring profile wins.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use super::RawDocument;
use crate::{Error, Result};

pub const PROFILE_VERSION: u32 = 1;
pub const MAX_ORDER: usize = 3;
/// Minimum concatenated sample length per language when training.
pub const MIN_SAMPLE_CHARS: usize = 2_000;
/// Texts with fewer non-whitespace characters are not classified.
pub const MIN_DETECT_CHARS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageProfile {
    pub lang: String,
    pub ngram_logfreq: BTreeMap<String, f64>,
    pub fallback_logfreq: f64,
}

impl LanguageProfile {
    fn logfreq(&self, gram: &str) -> f64 {
        self.ngram_logfreq
            .get(gram)
            .copied()
            .unwrap_or(self.fallback_logfreq)
    }

    fn validate(&self) -> Result<()> {
        if self.ngram_logfreq.is_empty() {
            return Err(Error::data(format!("profile `{}` is empty", self.lang)));
        }
        let min = self
            .ngram_logfreq
            .values()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let bad = self
            .ngram_logfreq
            .values()
            .any(|v| !v.is_finite() || *v > 0.0);
        if bad || !self.fallback_logfreq.is_finite() || self.fallback_logfreq >= min {
            return Err(Error::data(format!(
                "profile `{}` has invalid log frequencies",
                self.lang
            )));
        }
        Ok(())
    }
}

/// Lowercases, maps every non-letter run to one space and trims.
fn normalize(text: &str) -> Vec<char> {
    let mut out = Vec::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars().flat_map(char::to_lowercase) {
        if c.is_alphabetic() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

fn for_each_gram(chars: &[char], mut f: impl FnMut(usize, String)) {
    for n in 1..=MAX_ORDER {
        for window in chars.windows(n) {
            if window.iter().all(|c| *c == ' ') {
                continue;
            }
            f(n, window.iter().collect());
        }
    }
}

pub fn train_profiles(samples: &[(String, String)]) -> Result<Vec<LanguageProfile>> {
    train_profiles_with_min(samples, MIN_SAMPLE_CHARS)
}

/// Same as [`train_profiles`] with an explicit minimum sample length.
pub fn train_profiles_with_min(
    samples: &[(String, String)],
    min_chars: usize,
) -> Result<Vec<LanguageProfile>> {
    if samples.is_empty() {
        return Err(Error::config("no language samples given"));
    }
    let mut by_lang: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (lang, text) in samples {
        by_lang.entry(lang.as_str()).or_default().push(text.as_str());
    }

    let mut profiles = Vec::with_capacity(by_lang.len());
    for (lang, texts) in by_lang {
        let total_chars: usize = texts.iter().map(|t| t.chars().count()).sum();
        if total_chars < min_chars {
            return Err(Error::config(format!(
                "language `{lang}` has only {total_chars} characters of sample text (need {min_chars})"
            )));
        }
        let mut counts: [HashMap<String, u64>; MAX_ORDER] = Default::default();
        for text in texts {
            for_each_gram(&normalize(text), |n, gram| {
                *counts[n - 1].entry(gram).or_insert(0) += 1;
            });
        }

        let mut grams = BTreeMap::new();
        let mut fallback = 0.0_f64;
        for order in &counts {
            if order.is_empty() {
                continue;
            }
            let total: u64 = order.values().sum();
            let denom = (total + order.len() as u64) as f64;
            for (gram, count) in order {
                grams.insert(gram.clone(), ((*count + 1) as f64 / denom).ln());
            }
            fallback = fallback.min((1.0 / denom).ln());
        }
        let profile = LanguageProfile {
            lang: lang.to_string(),
            ngram_logfreq: grams,
            fallback_logfreq: fallback,
        };
        profile.validate()?;
        profiles.push(profile);
    }
    Ok(profiles)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Detection {
    Detected {
        lang: String,
        /// Log likelihood per character of the winning language.
        score: f64,
        /// Per-character scores for every profile, in profile order.
        scores: Vec<(String, f64)>,
    },
    Indeterminate,
}

impl Detection {
    pub fn lang(&self) -> Option<&str> {
        match self {
            Detection::Detected { lang, .. } => Some(lang),
            Detection::Indeterminate => None,
        }
    }

    fn score_of(&self, lang: &str) -> Option<f64> {
        match self {
            Detection::Detected { scores, .. } => {
                scores.iter().find(|(l, _)| l == lang).map(|(_, s)| *s)
            }
            Detection::Indeterminate => None,
        }
    }
}

pub fn detect_language(text: &str, profiles: &[LanguageProfile]) -> Result<Detection> {
    if profiles.len() < 2 {
        return Err(Error::config(format!(
            "language detection needs at least 2 profiles, got {}",
            profiles.len()
        )));
    }
    if text.chars().filter(|c| !c.is_whitespace()).count() < MIN_DETECT_CHARS {
        return Ok(Detection::Indeterminate);
    }
    let chars = normalize(text);
    if chars.is_empty() {
        return Ok(Detection::Indeterminate);
    }
    let mut grams: Vec<String> = Vec::new();
    for_each_gram(&chars, |_, g| grams.push(g));

    let per_char = chars.len() as f64;
    let scores: Vec<(String, f64)> = profiles
        .iter()
        .map(|p| {
            let total: f64 = grams.iter().map(|g| p.logfreq(g)).sum();
            (p.lang.clone(), total / per_char)
        })
        .collect();
    // strict comparison keeps the first profile on exact ties; lexicographic
    // order is applied explicitly so the result does not depend on input order
    let (lang, score) = scores
        .iter()
        .fold(None::<&(String, f64)>, |best, cur| match best {
            None => Some(cur),
            Some(b) if cur.1 > b.1 || (cur.1 == b.1 && cur.0 < b.0) => Some(cur),
            Some(b) => Some(b),
        })
        .map(|(l, s)| (l.clone(), *s))
        .expect("at least two profiles");
    Ok(Detection::Detected {
        lang,
        score,
        scores,
    })
}

#[derive(Debug, Clone, Default)]
pub struct FilterOutcome {
    pub kept: Vec<RawDocument>,
    pub dropped: Vec<RawDocument>,
    /// Kept documents that were too short to classify.
    pub indeterminate: usize,
}

/// Partitions documents into those written in `expected` and the rest.
///
/// A document is kept when it is detected as `expected`, when the score gap
/// between the winner and `expected` is below `margin`, or when it is too
/// short to classify.
pub fn filter_foreign(
    docs: Vec<RawDocument>,
    expected: &str,
    profiles: &[LanguageProfile],
    margin: f64,
) -> Result<FilterOutcome> {
    if !(margin >= 0.0) {
        return Err(Error::config(format!("margin must be >= 0, got {margin}")));
    }
    if !profiles.iter().any(|p| p.lang == expected) {
        return Err(Error::config(format!(
            "no language profile for expected language `{expected}`"
        )));
    }
    let mut outcome = FilterOutcome::default();
    for doc in docs {
        let detection = detect_language(&doc.text, profiles)?;
        let keep = match &detection {
            Detection::Indeterminate => {
                warn!("{}: too short to identify language, keeping", doc.id);
                outcome.indeterminate += 1;
                true
            }
            Detection::Detected { lang, score, .. } => {
                let gap = score - detection.score_of(expected).unwrap_or(f64::NEG_INFINITY);
                lang == expected || gap < margin
            }
        };
        if keep {
            outcome.kept.push(doc);
        } else {
            outcome.dropped.push(doc);
        }
    }
    Ok(outcome)
}

#[derive(Serialize, Deserialize)]
struct ProfileFile {
    version: u32,
    lang: String,
    n: usize,
    grams: BTreeMap<String, f64>,
    fallback: f64,
}

pub fn save_profile(profile: &LanguageProfile, path: &Path) -> Result<()> {
    let file = ProfileFile {
        version: PROFILE_VERSION,
        lang: profile.lang.clone(),
        n: MAX_ORDER,
        grams: profile.ngram_logfreq.clone(),
        fallback: profile.fallback_logfreq,
    };
    let json = serde_json::to_string_pretty(&file).map_err(|e| Error::data(e.to_string()))?;
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn load_profile(path: &Path) -> Result<LanguageProfile> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: ProfileFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    if file.version != PROFILE_VERSION {
        return Err(Error::data(format!(
            "{}: profile version {} is not supported (expected {PROFILE_VERSION})",
            path.display(),
            file.version
        )));
    }
    let profile = LanguageProfile {
        lang: file.lang,
        ngram_logfreq: file.grams,
        fallback_logfreq: file.fallback,
    };
    profile.validate()?;
    Ok(profile)
}

const BUNDLED: [(&str, &str); 4] = [
    ("cs", include_str!("../../data/langid/cs.txt")),
    ("de", include_str!("../../data/langid/de.txt")),
    ("en", include_str!("../../data/langid/en.txt")),
    ("ru", include_str!("../../data/langid/ru.txt")),
];

/// Training text shipped with the crate for Czech, German, English and Russian.
pub fn bundled_samples() -> Vec<(String, String)> {
    BUNDLED
        .iter()
        .map(|(l, t)| (l.to_string(), t.to_string()))
        .collect()
}

pub fn bundled_profiles() -> Vec<LanguageProfile> {
    train_profiles(&bundled_samples()).expect("bundled samples are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, text: &str) -> RawDocument {
        RawDocument {
            id: id.into(),
            text: text.into(),
            year: None,
            author: None,
            declared_lang: None,
        }
    }

    #[test]
    fn bundled_profiles_cover_four_languages() {
        let profiles = bundled_profiles();
        let langs: Vec<_> = profiles.iter().map(|p| p.lang.as_str()).collect();
        assert_eq!(langs, ["cs", "de", "en", "ru"]);
        for p in &profiles {
            assert!(!p.ngram_logfreq.is_empty());
            p.validate().unwrap();
        }
    }

    #[test]
    fn single_dominant_trigram() {
        let profiles =
            train_profiles_with_min(&[("xx".into(), "aaaa".into())], 1).unwrap();
        let p = &profiles[0];
        let max = p.ngram_logfreq.values().copied().fold(f64::MIN, f64::max);
        assert_eq!(p.ngram_logfreq["aaa"], max);
        assert!(p.fallback_logfreq < *p.ngram_logfreq.values().min_by(|a, b| a.total_cmp(b)).unwrap());
    }

    #[test]
    fn empty_or_short_samples_are_rejected() {
        assert!(train_profiles(&[]).is_err());
        let err = train_profiles(&[("de".into(), "zu kurz".into())]).unwrap_err();
        assert!(err.to_string().contains("`de`"));
    }

    #[test]
    fn detects_reference_lines() {
        let profiles = bundled_profiles();
        let de = detect_language(
            "Der Mond ist aufgegangen, die goldnen Sternlein prangen",
            &profiles,
        )
        .unwrap();
        assert_eq!(de.lang(), Some("de"));
        let ru = detect_language("Шёпот, робкое дыханье, трели соловья", &profiles).unwrap();
        assert_eq!(ru.lang(), Some("ru"));
    }

    #[test]
    fn short_text_is_indeterminate() {
        let profiles = bundled_profiles();
        assert_eq!(
            detect_language("Mond.", &profiles).unwrap(),
            Detection::Indeterminate
        );
    }

    #[test]
    fn needs_two_profiles() {
        let profiles = bundled_profiles();
        assert!(detect_language("irgendein langer deutscher Text hier", &profiles[..1]).is_err());
    }

    #[test]
    fn exclusive_ngrams_pick_their_language() {
        // Greek letters occur in no bundled profile except the one trained here.
        let mut samples = bundled_samples();
        samples.push(("el".into(), "αβγδ εζηθ ικλμ νξοπ ρστυ φχψω ".repeat(80)));
        let profiles = train_profiles(&samples).unwrap();
        let d = detect_language("αβγ δεζ ηθι κλμ νξο πρσ τυφ χψω", &profiles).unwrap();
        assert_eq!(d.lang(), Some("el"));
    }

    #[test]
    fn filter_keeps_short_and_expected() {
        let profiles = bundled_profiles();
        let docs = vec![
            doc("a", "Die Wälder sind still im Winter, und der Schnee liegt auf den Zweigen."),
            doc("b", "The woods are quiet in winter, and the snow lies on the branches."),
            doc("c", "kurz"),
        ];
        let out = filter_foreign(docs, "de", &profiles, 0.0).unwrap();
        let kept: Vec<_> = out.kept.iter().map(|d| d.id.as_str()).collect();
        assert_eq!(kept, ["a", "c"]);
        assert_eq!(out.dropped[0].id, "b");
        assert_eq!(out.indeterminate, 1);

        let empty = filter_foreign(vec![], "de", &profiles, 0.0).unwrap();
        assert!(empty.kept.is_empty() && empty.dropped.is_empty());
    }

    #[test]
    fn large_margin_keeps_everything() {
        let profiles = bundled_profiles();
        let docs = vec![doc(
            "b",
            "The woods are quiet in winter, and the snow lies on the branches.",
        )];
        let out = filter_foreign(docs, "de", &profiles, 100.0).unwrap();
        assert_eq!(out.kept.len(), 1);
        assert!(filter_foreign(vec![], "de", &profiles, -1.0).is_err());
        assert!(filter_foreign(vec![], "fr", &profiles, 0.0).is_err());
    }

    #[test]
    fn profile_file_round_trip_and_version_check() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("de.json");
        let profile = bundled_profiles().remove(1);
        save_profile(&profile, &path).unwrap();
        assert_eq!(load_profile(&path).unwrap(), profile);

        let text = fs::read_to_string(&path).unwrap().replacen("\"version\": 1", "\"version\": 9", 1);
        fs::write(&path, text).unwrap();
        let err = load_profile(&path).unwrap_err();
        assert!(err.to_string().contains("version 9"));
    }
}
