//! Time slots, per-slot topic trajectories and corpus-size histograms.
//!
//! A topic's value in a slot is the arithmetic mean of `p(topic | d)` over
//! the documents `d` dated inside that slot. Slots without documents carry
//! no value at all rather than zero.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::preprocess::Document;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    /// Inclusive.
    pub start: i32,
    /// Inclusive.
    pub end: i32,
    pub label: String,
}

impl Slot {
    pub fn new(start: i32, end: i32) -> Self {
        Slot {
            start,
            end,
            label: format!("{start}\u{2013}{end}"),
        }
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start..=self.end).contains(&year)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotScheme {
    slots: Vec<Slot>,
    width: i32,
}

impl SlotScheme {
    /// Builds a scheme from explicit slots, which must be sorted and
    /// non-overlapping. Gaps between slots are allowed.
    pub fn from_slots(slots: Vec<Slot>, width: i32) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::config("a slot scheme needs at least one slot"));
        }
        for slot in &slots {
            if slot.start > slot.end {
                return Err(Error::config(format!("slot {} ends before it starts", slot.label)));
            }
        }
        for pair in slots.windows(2) {
            if pair[1].start <= pair[0].end {
                return Err(Error::config(format!(
                    "slots {} and {} overlap or are out of order",
                    pair[0].label, pair[1].label
                )));
            }
        }
        Ok(SlotScheme { slots, width })
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.slots.iter().map(|s| s.label.clone()).collect()
    }

    /// Index of the slot containing `year`, if any.
    pub fn slot_of(&self, year: i32) -> Option<usize> {
        let i = self.slots.partition_point(|s| s.end < year);
        (i < self.slots.len() && self.slots[i].contains(year)).then_some(i)
    }
}

/// Fixed-width slots from `min_year`, with each merge range replacing the
/// base slots it covers. Merge ranges must start and end on base slot
/// boundaries.
pub fn make_slots(min_year: i32, max_year: i32, width: i32, merges: &[(i32, i32)]) -> Result<SlotScheme> {
    if min_year > max_year {
        return Err(Error::config(format!("min year {min_year} is after max year {max_year}")));
    }
    if width < 1 {
        return Err(Error::config(format!("slot width must be >= 1, got {width}")));
    }
    let count = (max_year - min_year) / width + 1;
    let base: Vec<Slot> = (0..count)
        .map(|i| Slot::new(min_year + i * width, min_year + (i + 1) * width - 1))
        .collect();

    let mut merges = merges.to_vec();
    merges.sort_unstable();
    for pair in merges.windows(2) {
        if pair[1].0 <= pair[0].1 {
            return Err(Error::config(format!(
                "merge ranges {}:{} and {}:{} overlap",
                pair[0].0, pair[0].1, pair[1].0, pair[1].1
            )));
        }
    }
    let mut merged_into: Vec<Option<usize>> = vec![None; base.len()];
    for (m, &(start, end)) in merges.iter().enumerate() {
        let first = base.iter().position(|s| s.start == start);
        let last = base.iter().position(|s| s.end == end);
        match (first, last) {
            (Some(first), Some(last)) if first <= last => {
                merged_into[first..=last].iter_mut().for_each(|slot| *slot = Some(m));
            }
            _ => {
                return Err(Error::config(format!(
                    "merge range {start}:{end} is not a union of {width}-year slots starting at {min_year}"
                )))
            }
        }
    }

    let mut slots = Vec::new();
    let mut i = 0;
    while i < base.len() {
        match merged_into[i] {
            Some(m) => {
                let (start, end) = merges[m];
                slots.push(Slot::new(start, end));
                while i < base.len() && merged_into[i] == Some(m) {
                    i += 1;
                }
            }
            None => {
                slots.push(base[i].clone());
                i += 1;
            }
        }
    }
    SlotScheme::from_slots(slots, width)
}

pub fn assign_slot(doc: &Document, scheme: &SlotScheme) -> Option<usize> {
    doc.year.and_then(|y| scheme.slot_of(y))
}

/// Slot index per document; `None` for undated or out-of-range documents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotAssignment {
    pub per_doc: Vec<Option<usize>>,
    pub excluded: usize,
}

pub fn assign_years(years: &[Option<i32>], scheme: &SlotScheme) -> SlotAssignment {
    let per_doc: Vec<Option<usize>> = years
        .iter()
        .map(|y| y.and_then(|y| scheme.slot_of(y)))
        .collect();
    let excluded = per_doc.iter().filter(|s| s.is_none()).count();
    SlotAssignment { per_doc, excluded }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub slot_start: i32,
    pub slot_end: i32,
    pub slot_label: String,
    /// `None` when the slot holds no documents.
    pub mean_probability: Option<f64>,
    pub doc_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySeries {
    pub topic_id: usize,
    pub corpus_label: String,
    pub points: Vec<TrajectoryPoint>,
}

/// Per-slot mean of `theta[d][topic]` over the documents assigned to each slot.
pub fn trajectories(
    theta: &[Vec<f64>],
    assignment: &SlotAssignment,
    scheme: &SlotScheme,
    topics: &[usize],
    corpus_label: &str,
) -> Result<Vec<TrajectorySeries>> {
    if theta.len() != assignment.per_doc.len() {
        return Err(Error::data(format!(
            "{} topic mixtures for {} slot assignments",
            theta.len(),
            assignment.per_doc.len()
        )));
    }
    let k = theta.first().map_or(0, Vec::len);
    if let Some(&bad) = topics.iter().find(|&&t| t >= k) {
        return Err(Error::config(format!(
            "topic {bad} out of range (valid topics 0..{})",
            k.saturating_sub(1)
        )));
    }
    let n = scheme.len();
    let mut counts = vec![0usize; n];
    let mut sums = vec![vec![0.0f64; n]; topics.len()];
    for (row, slot) in theta.iter().zip(&assignment.per_doc) {
        let Some(s) = *slot else { continue };
        counts[s] += 1;
        for (acc, &t) in sums.iter_mut().zip(topics) {
            acc[s] += row[t];
        }
    }
    Ok(topics
        .iter()
        .zip(sums)
        .map(|(&topic_id, sums)| TrajectorySeries {
            topic_id,
            corpus_label: corpus_label.to_string(),
            points: scheme
                .slots()
                .iter()
                .zip(sums)
                .zip(&counts)
                .map(|((slot, sum), &count)| TrajectoryPoint {
                    slot_start: slot.start,
                    slot_end: slot.end,
                    slot_label: slot.label.clone(),
                    mean_probability: (count > 0).then(|| sum / count as f64),
                    doc_count: count,
                })
                .collect(),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub counts: Vec<usize>,
    pub excluded: usize,
}

impl Histogram {
    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.excluded
    }
}

pub fn corpus_histogram(assignment: &SlotAssignment, scheme: &SlotScheme) -> Histogram {
    let mut counts = vec![0usize; scheme.len()];
    for s in assignment.per_doc.iter().flatten() {
        counts[*s] += 1;
    }
    Histogram {
        counts,
        excluded: assignment.excluded,
    }
}

const TRAJECTORY_HEADER: [&str; 6] = [
    "corpus",
    "topic",
    "slot_start",
    "slot_end",
    "mean_probability",
    "doc_count",
];

/// Writes `corpus,topic,slot_start,slot_end,mean_probability,doc_count`.
/// Means use the shortest decimal form that parses back to the same `f64`;
/// empty slots leave the field empty.
pub fn write_trajectories_csv<W: Write>(series: &[TrajectorySeries], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let err = |e: csv::Error| Error::data(format!("writing trajectory CSV: {e}"));
    w.write_record(TRAJECTORY_HEADER).map_err(err)?;
    for s in series {
        for p in &s.points {
            w.write_record([
                s.corpus_label.clone(),
                s.topic_id.to_string(),
                p.slot_start.to_string(),
                p.slot_end.to_string(),
                p.mean_probability.map(|m| m.to_string()).unwrap_or_default(),
                p.doc_count.to_string(),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::data(format!("writing trajectory CSV: {e}")))
}

#[derive(Deserialize)]
struct TrajectoryRow {
    corpus: String,
    topic: usize,
    slot_start: i32,
    slot_end: i32,
    mean_probability: Option<f64>,
    doc_count: usize,
}

/// Parses the output of [`write_trajectories_csv`], regrouping rows into
/// series in order of first appearance.
pub fn read_trajectories_csv<R: Read>(input: R) -> Result<Vec<TrajectorySeries>> {
    let mut reader = csv::Reader::from_reader(input);
    let mut series: Vec<TrajectorySeries> = Vec::new();
    for row in reader.deserialize::<TrajectoryRow>() {
        let row = row.map_err(|e| Error::data(format!("reading trajectory CSV: {e}")))?;
        let point = TrajectoryPoint {
            slot_start: row.slot_start,
            slot_end: row.slot_end,
            slot_label: Slot::new(row.slot_start, row.slot_end).label,
            mean_probability: row.mean_probability,
            doc_count: row.doc_count,
        };
        match series
            .iter_mut()
            .find(|s| s.corpus_label == row.corpus && s.topic_id == row.topic)
        {
            Some(s) => s.points.push(point),
            None => series.push(TrajectorySeries {
                topic_id: row.topic,
                corpus_label: row.corpus,
                points: vec![point],
            }),
        }
    }
    Ok(series)
}

/// Writes `corpus,slot_start,slot_end,doc_count`, one row per slot.
pub fn write_histogram_csv<W: Write>(
    rows: &[(String, &SlotScheme, &Histogram)],
    out: W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let err = |e: csv::Error| Error::data(format!("writing histogram CSV: {e}"));
    w.write_record(["corpus", "slot_start", "slot_end", "doc_count"]).map_err(err)?;
    for (label, scheme, hist) in rows {
        for (slot, count) in scheme.slots().iter().zip(&hist.counts) {
            w.write_record([
                label.clone(),
                slot.start.to_string(),
                slot.end.to_string(),
                count.to_string(),
            ])
            .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::data(format!("writing histogram CSV: {e}")))
}
