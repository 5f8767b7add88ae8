//! Optional TOML run configuration. Keys mirror the long flag names with
//! underscores (`min_df`, `slot_width`, ...). Relative paths are resolved
//! against the directory holding the file. Command-line flags always win.

use std::fs;
use std::path::{Path, PathBuf};

use diachrony::{Error, Result};
use serde::Deserialize;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TopicsValue {
    Count(usize),
    Selection(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(PathBuf),
    Many(Vec<PathBuf>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<PathBuf> {
        match self {
            OneOrMany::One(p) => vec![p],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<OneOrMany>,
    pub format: Option<String>,
    pub annotations: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub profiles: Option<PathBuf>,
    pub lang: Option<String>,
    pub margin: Option<f64>,
    pub pos_filter: Option<bool>,
    pub min_df: Option<u32>,
    pub max_df: Option<f64>,
    pub topics: Option<TopicsValue>,
    pub passes: Option<u32>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub model: Option<OneOrMany>,
    pub label: Option<Vec<String>>,
    pub slot_width: Option<i32>,
    pub merge: Option<Vec<String>>,
    pub min_year: Option<i32>,
    pub max_year: Option<i32>,
    pub log: Option<bool>,
    pub y_max: Option<f64>,
    pub lexicon: Option<PathBuf>,
    pub top_k: Option<usize>,
    pub method: Option<String>,
    pub min_score: Option<f64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        if !path.is_file() {
            return Err(Error::config(format!("config file {} does not exist", path.display())));
        }
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| Error::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            &mut cfg.annotations,
            &mut cfg.stopwords,
            &mut cfg.profiles,
            &mut cfg.lexicon,
            &mut cfg.out,
        ]
        .into_iter()
        .flatten()
        {
            resolve(p);
        }
        for many in [&mut cfg.corpus, &mut cfg.model].into_iter().flatten() {
            match many {
                OneOrMany::One(p) => resolve(p),
                OneOrMany::Many(v) => v.iter_mut().for_each(resolve),
            }
        }
        Ok(cfg)
    }

    pub fn corpora(&self) -> Vec<PathBuf> {
        self.corpus.clone().map(OneOrMany::into_vec).unwrap_or_default()
    }

    pub fn models(&self) -> Vec<PathBuf> {
        self.model.clone().map(OneOrMany::into_vec).unwrap_or_default()
    }
}

/// Flag values if any were given, else the config values.
pub fn pick_list<T: Clone>(flags: &[T], config: Vec<T>) -> Vec<T> {
    if flags.is_empty() {
        config
    } else {
        flags.to_vec()
    }
}

pub fn require_file(path: &Path, what: &str) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::config(format!("{what} {} does not exist", path.display())))
    }
}

pub fn parse_merge(spec: &str) -> Result<(i32, i32)> {
    let bad = || Error::config(format!("bad merge range {spec:?} (expected START:END)"));
    let (a, b) = spec.split_once(':').ok_or_else(bad)?;
    let start = a.trim().parse().map_err(|_| bad())?;
    let end = b.trim().parse().map_err(|_| bad())?;
    if start > end {
        return Err(bad());
    }
    Ok((start, end))
}
