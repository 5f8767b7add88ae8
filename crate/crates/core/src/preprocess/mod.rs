//! From raw poems to lemma lists and a bag-of-words corpus.

mod annotations;
mod bow;
mod vocab;

use std::collections::HashSet;
use std::fs;
use std::path::Path;

pub use annotations::load_annotations;
pub use bow::{load_bow, save_bow, to_bow, BowCorpus, BowFile, BOW_VERSION};
pub use vocab::{build_vocabulary, Vocabulary};

use crate::ingest::RawDocument;
use crate::{Error, Result};

/// Coarse part of speech. Everything except nouns, adjectives and verbs is `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Upos {
    Noun,
    Adj,
    Verb,
    Other,
}

impl Upos {
    /// Maps a tag from a coarse, UD, STTS, Penn or positional (PDT) tagset.
    /// Returns `None` for tags no mapping recognizes.
    pub fn from_tag(tag: &str) -> Option<Upos> {
        let upos = match tag {
            "NOUN" | "NN" | "NNS" => Upos::Noun,
            "ADJ" | "ADJA" | "ADJD" | "JJ" | "JJR" | "JJS" => Upos::Adj,
            "VERB" | "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" => Upos::Verb,
            "OTHER" | "PROPN" | "AUX" | "ADV" | "ADP" | "DET" | "PRON" | "CCONJ" | "SCONJ"
            | "PART" | "NUM" | "INTJ" | "PUNCT" | "SYM" | "NE" | "NNP" | "NNPS" => Upos::Other,
            t if t.starts_with("VV") => Upos::Verb,
            t if t.starts_with("VA") || t.starts_with("VM") => Upos::Other,
            t if t.chars().count() == 15 => match t.chars().next() {
                Some('N') => Upos::Noun,
                Some('A') => Upos::Adj,
                Some('V') => Upos::Verb,
                _ => Upos::Other,
            },
            _ => return None,
        };
        Some(upos)
    }

    pub fn is_content(self) -> bool {
        matches!(self, Upos::Noun | Upos::Adj | Upos::Verb)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedToken {
    pub surface: String,
    pub lemma: String,
    pub upos: Upos,
}

impl AnnotatedToken {
    /// Builds a token, falling back to the lowercased surface when the tagger
    /// gave no usable lemma.
    pub fn new(surface: &str, lemma: &str, upos: Upos) -> Self {
        let lemma = match lemma.trim() {
            "" | "_" | "<unknown>" => surface.to_lowercase(),
            l => l.to_string(),
        };
        AnnotatedToken {
            surface: surface.to_string(),
            lemma,
            upos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub lemmas: Vec<String>,
    pub year: Option<i32>,
    pub lang: String,
}

impl Document {
    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList {
    entries: HashSet<String>,
}

impl StopList {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopList {
            entries: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
        }
    }

    /// Reads one lemma per line; `#` starts a comment.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut entries = HashSet::new();
        for (index, line) in text.lines().enumerate() {
            let word = line.split('#').next().unwrap_or_default().trim();
            if word.is_empty() {
                continue;
            }
            if word.chars().any(char::is_whitespace) {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: index + 1,
                    message: format!("stopword `{word}` contains whitespace"),
                });
            }
            entries.insert(word.to_lowercase());
        }
        Ok(StopList { entries })
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.entries.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Splits on anything that is not a letter or digit, lowercases, and drops
/// tokens shorter than two characters or containing digits.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2 && !t.chars().any(char::is_numeric))
        .map(str::to_lowercase)
        .collect()
}

fn has_letter(s: &str) -> bool {
    s.chars().any(char::is_alphabetic)
}

pub fn reduce_document(
    raw: &RawDocument,
    annotations: Option<&[AnnotatedToken]>,
    stops: &StopList,
    pos_filter: bool,
) -> Document {
    let candidates: Vec<String> = match annotations {
        Some(tokens) => tokens
            .iter()
            .filter(|t| !pos_filter || t.upos.is_content())
            .map(|t| t.lemma.to_lowercase())
            .filter(|l| has_letter(l))
            .collect(),
        None => tokenize(&raw.text),
    };
    let lemmas = candidates
        .into_iter()
        .filter(|l| !stops.contains(l))
        .collect::<Vec<_>>();
    if lemmas.is_empty() {
        log::warn!("{}: no lemmas left after reduction", raw.id);
    }
    Document {
        id: raw.id.clone(),
        lemmas,
        year: raw.year,
        lang: raw.declared_lang.clone().unwrap_or_else(|| "und".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn raw(text: &str) -> RawDocument {
        RawDocument {
            id: "d".into(),
            text: text.into(),
            year: Some(1800),
            author: None,
            declared_lang: Some("de".into()),
        }
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("Der Mond ist aufgegangen."),
            ["der", "mond", "ist", "aufgegangen"]
        );
        assert_eq!(tokenize("O'er the sea — 1850!"), ["er", "the", "sea"]);
        assert_eq!(
            tokenize("Люблю грозу в начале мая"),
            ["люблю", "грозу", "начале", "мая"]
        );
        assert!(tokenize("").is_empty());
        assert!(tokenize("a1b2 x9").is_empty());
    }

    #[test]
    fn pos_filter_keeps_content_words() {
        let ann = vec![
            AnnotatedToken::new("Mond", "mond", Upos::Noun),
            AnnotatedToken::new("ist", "sein", Upos::Other),
            AnnotatedToken::new("aufgegangen", "aufgegangen", Upos::Verb),
        ];
        let doc = reduce_document(&raw(""), Some(&ann), &StopList::default(), true);
        assert_eq!(doc.lemmas, ["mond", "aufgegangen"]);
        let all = reduce_document(&raw(""), Some(&ann), &StopList::default(), false);
        assert_eq!(all.lemmas, ["mond", "sein", "aufgegangen"]);
    }

    #[test]
    fn stopwords_preserve_multiplicity() {
        let doc = reduce_document(&raw("the sea the sea"), None, &StopList::new(["the"]), true);
        assert_eq!(doc.lemmas, ["sea", "sea"]);
    }

    #[test]
    fn all_stopwords_gives_empty_document() {
        let doc = reduce_document(&raw("the the"), None, &StopList::new(["the"]), false);
        assert!(doc.is_empty());
        assert_eq!(doc.id, "d");
    }

    #[test]
    fn lemma_falls_back_to_surface() {
        assert_eq!(AnnotatedToken::new("Sterne", "<unknown>", Upos::Noun).lemma, "sterne");
        assert_eq!(AnnotatedToken::new("Sterne", "", Upos::Noun).lemma, "sterne");
    }

    #[test]
    fn upos_tagsets() {
        assert_eq!(Upos::from_tag("NN"), Some(Upos::Noun));
        assert_eq!(Upos::from_tag("ADJA"), Some(Upos::Adj));
        assert_eq!(Upos::from_tag("VVFIN"), Some(Upos::Verb));
        assert_eq!(Upos::from_tag("VAFIN"), Some(Upos::Other));
        assert_eq!(Upos::from_tag("VBZ"), Some(Upos::Verb));
        assert_eq!(Upos::from_tag("NNFS1-----A----"), Some(Upos::Noun));
        assert_eq!(Upos::from_tag("X"), None);
    }

    #[test]
    fn stoplist_file_with_comments() {
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("stop.txt");
        fs::write(&path, "# header\nDer\ndie  # article\n\n").unwrap();
        let stops = StopList::load(&path).unwrap();
        assert_eq!(stops.len(), 2);
        assert!(stops.contains("der") && stops.contains("die"));

        fs::write(&path, "zwei worte\n").unwrap();
        assert!(StopList::load(&path).is_err());
        assert!(StopList::load(&tmp.path().join("missing")).is_err());
    }

    proptest! {
        #[test]
        fn unfiltered_reduction_equals_tokenize(text in "\\PC{0,80}") {
            let doc = reduce_document(&raw(&text), None, &StopList::default(), false);
            prop_assert_eq!(doc.lemmas, tokenize(&text));
        }

        #[test]
        fn tokens_are_lowercase_letters(text in "\\PC{0,80}") {
            for t in tokenize(&text) {
                prop_assert!(t.chars().count() >= 2);
                prop_assert!(has_letter(&t));
                prop_assert_eq!(t.to_lowercase(), t.clone());
            }
        }
    }
}
