//! Corpus loading and foreign-language filtering.

mod corpus;
mod langid;

pub use corpus::{load_corpus, write_jsonl, CorpusFormat, LoadedCorpus, RawDocument};
pub use langid::{
    bundled_profiles, bundled_samples, detect_language, filter_foreign, load_profile, save_profile,
    train_profiles, train_profiles_with_min, Detection, FilterOutcome, LanguageProfile,
    MIN_DETECT_CHARS, MIN_SAMPLE_CHARS, PROFILE_VERSION,
};
