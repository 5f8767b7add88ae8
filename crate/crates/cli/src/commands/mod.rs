pub mod align;
pub mod histogram;
pub mod ingest;
pub mod topics;
pub mod train;
pub mod trajectories;

use std::fs;
use std::path::{Path, PathBuf};

use diachrony::diachrony::{make_slots, SlotScheme};
use diachrony::{Error, Result};

use crate::config::{parse_merge, pick_list, FileConfig};
use crate::SlotArgs;

pub const DEFAULT_TOP_K: usize = 30;
pub const DEFAULT_SLOT_WIDTH: i32 = 25;

/// Output directory from the flag, the config or `.`, created if missing.
pub fn out_dir(flag: Option<PathBuf>, cfg: &FileConfig) -> Result<PathBuf> {
    let dir = flag.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

pub fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::data(e.to_string()))
}

/// Labels for `n` series: given labels first, then the fallbacks, made unique
/// by suffixing the series index.
pub fn series_labels(given: &[String], fallback: Vec<String>) -> Result<Vec<String>> {
    if !given.is_empty() && given.len() != fallback.len() {
        return Err(Error::config(format!(
            "{} labels for {} series",
            given.len(),
            fallback.len()
        )));
    }
    let mut labels = if given.is_empty() { fallback } else { given.to_vec() };
    let snapshot = labels.clone();
    for (i, label) in labels.iter_mut().enumerate() {
        if snapshot.iter().filter(|l| *l == label).count() > 1 {
            *label = format!("{label}-{i}");
        }
    }
    Ok(labels)
}

/// Slot scheme from flags and config; year bounds default to the data.
pub fn slot_scheme(args: &SlotArgs, cfg: &FileConfig, years: impl Iterator<Item = i32>) -> Result<SlotScheme> {
    let width = args.slot_width.or(cfg.slot_width).unwrap_or(DEFAULT_SLOT_WIDTH);
    if width < 1 {
        return Err(Error::config(format!("slot width must be >= 1, got {width}")));
    }
    let merges = pick_list(&args.merges, cfg.merge.clone().unwrap_or_default())
        .iter()
        .map(|m| parse_merge(m))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi) = years.fold((None, None), |(lo, hi): (Option<i32>, Option<i32>), y| {
        (Some(lo.map_or(y, |l| l.min(y))), Some(hi.map_or(y, |h| h.max(y))))
    });
    let min_year = match args.min_year.or(cfg.min_year) {
        Some(y) => y,
        None => lo
            .map(|y| y.div_euclid(width) * width)
            .ok_or_else(|| Error::data("no dated documents; pass --min-year and --max-year"))?,
    };
    let max_year = match args.max_year.or(cfg.max_year) {
        Some(y) => y,
        None => hi
            .map(|y| y.max(min_year))
            .ok_or_else(|| Error::data("no dated documents; pass --min-year and --max-year"))?,
    };
    make_slots(min_year, max_year, width, &merges)
}

pub fn y_max(args: &SlotArgs, cfg: &FileConfig) -> Option<f64> {
    args.y_max.or(cfg.y_max)
}
