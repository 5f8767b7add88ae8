use std::fs::File;
use std::io::BufWriter;

use diachrony::chart::{render_svg, ChartSeries, ChartSpec};
use diachrony::diachrony::{assign_years, trajectories, write_trajectories_csv, SlotAssignment, TrajectorySeries};
use diachrony::lda::{top_words, SavedModel};
use diachrony::preprocess::{load_bow, BowFile};
use diachrony::{Error, Result};

use super::{out_dir, series_labels, slot_scheme, write, y_max};
use crate::commands::topics::load;
use crate::config::{pick_list, require_file, FileConfig, TopicsValue};
use crate::TrajectoriesArgs;

/// One topic id per model for every chart to draw.
pub fn parse_selection(spec: &str, topic_counts: &[usize]) -> Result<Vec<Vec<usize>>> {
    let n = topic_counts.len();
    let common = topic_counts.iter().copied().min().unwrap_or(0);
    if spec.trim() == "all" {
        return Ok((0..common).map(|t| vec![t; n]).collect());
    }
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let ids = item
            .split('/')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::config(format!("bad topic id {s:?} in {spec:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let ids = match ids.len() {
            1 => vec![ids[0]; n],
            len if len == n => ids,
            len => {
                return Err(Error::config(format!(
                    "topic tuple {item:?} has {len} ids for {n} models"
                )))
            }
        };
        for (i, (&t, &k)) in ids.iter().zip(topic_counts).enumerate() {
            if t >= k {
                return Err(Error::config(format!(
                    "topic {t} out of range for model {} (valid topics 0..={})",
                    i + 1,
                    k - 1
                )));
            }
        }
        out.push(ids);
    }
    if out.is_empty() {
        return Err(Error::config("empty topic selection"));
    }
    Ok(out)
}

fn check_pairing(saved: &SavedModel, bow: &BowFile, index: usize) -> Result<()> {
    if saved.model.doc_ids() != bow.corpus.doc_ids.as_slice() {
        return Err(Error::data(format!(
            "model {} was not trained on corpus {} (document ids differ)",
            index + 1,
            index + 1
        )));
    }
    Ok(())
}

pub fn run(args: TrajectoriesArgs, cfg: &FileConfig) -> Result<()> {
    let models = pick_list(&args.models, cfg.models());
    let corpora = pick_list(&args.corpora, cfg.corpora());
    if models.is_empty() {
        return Err(Error::config("trajectories needs at least one --model"));
    }
    if models.len() != corpora.len() {
        return Err(Error::config(format!(
            "{} models but {} corpora; pass one --corpus per --model",
            models.len(),
            corpora.len()
        )));
    }
    for c in &corpora {
        require_file(c, "corpus")?;
    }
    let selection = args.topics.clone().or_else(|| match &cfg.topics {
        Some(TopicsValue::Selection(s)) => Some(s.clone()),
        Some(TopicsValue::Count(k)) => Some(k.to_string()),
        None => None,
    });
    let saved: Vec<SavedModel> = models.iter().map(|m| load(m)).collect::<Result<_>>()?;
    let bows: Vec<BowFile> = corpora.iter().map(|c| load_bow(c)).collect::<Result<_>>()?;
    for (i, (s, b)) in saved.iter().zip(&bows).enumerate() {
        check_pairing(s, b, i)?;
    }
    let counts: Vec<usize> = saved.iter().map(|s| s.model.num_topics()).collect();
    let tuples = parse_selection(selection.as_deref().unwrap_or("all"), &counts)?;
    let labels = series_labels(
        &pick_list(&args.labels, cfg.label.clone().unwrap_or_default()),
        saved
            .iter()
            .enumerate()
            .map(|(i, s)| s.lang.clone().unwrap_or_else(|| format!("corpus{}", i + 1)))
            .collect(),
    )?;
    let scheme = slot_scheme(
        &args.slots,
        cfg,
        bows.iter().flat_map(|b| b.corpus.years.iter().flatten().copied()),
    )?;
    let assignments: Vec<SlotAssignment> = bows.iter().map(|b| assign_years(&b.corpus.years, &scheme)).collect();
    for (label, a) in labels.iter().zip(&assignments) {
        if a.excluded > 0 {
            log::warn!("{label}: {} documents undated or outside the slots", a.excluded);
        }
    }
    let thetas: Vec<Vec<Vec<f64>>> = saved.iter().map(|s| s.model.theta()).collect();
    let out = out_dir(args.out, cfg)?;

    let mut csv_series: Vec<TrajectorySeries> = Vec::new();
    for tuple in &tuples {
        let mut chart_series = Vec::new();
        for (i, &topic) in tuple.iter().enumerate() {
            let series = trajectories(&thetas[i], &assignments[i], &scheme, &[topic], &labels[i])?
                .pop()
                .expect("one series per topic");
            chart_series.push(ChartSeries {
                label: labels[i].clone(),
                color: i,
                values: series.points.iter().map(|p| p.mean_probability).collect(),
            });
            if !csv_series.iter().any(|s| s.corpus_label == series.corpus_label && s.topic_id == topic) {
                csv_series.push(series);
            }
        }
        let title = if tuple.len() == 1 {
            let summary = top_words(&saved[0].model, &saved[0].vocab, tuple[0], 3.min(saved[0].vocab.len()))?;
            let words: Vec<&str> = summary.top_words.iter().map(|(w, _)| w.as_str()).collect();
            format!("Topic {}: {}", tuple[0], words.join(", "))
        } else {
            let ids: Vec<String> = tuple.iter().map(usize::to_string).collect();
            format!("Topics {}", ids.join(" / "))
        };
        let spec = ChartSpec {
            title,
            y_label: "mean p(topic | document)".into(),
            x_labels: scheme.labels(),
            series: chart_series,
            y_max: y_max(&args.slots, cfg),
        };
        let name: Vec<String> = tuple.iter().map(usize::to_string).collect();
        write(&out.join(format!("topic_{}.svg", name.join("_"))), render_svg(&spec)?)?;
    }
    let csv_path = out.join("trajectories.csv");
    let file = File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    write_trajectories_csv(&csv_series, BufWriter::new(file))?;
    println!(
        "{} charts over {} slots written to {}",
        tuples.len(),
        scheme.len(),
        out.display()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selections() {
        assert_eq!(parse_selection("all", &[3]).unwrap(), [[0], [1], [2]]);
        assert_eq!(parse_selection("2, 0", &[3]).unwrap(), [[2], [0]]);
        assert_eq!(parse_selection("4/1", &[5, 2]).unwrap(), [[4, 1]]);
        assert_eq!(parse_selection("1", &[5, 2]).unwrap(), [[1, 1]]);
        assert!(parse_selection("3", &[3]).is_err());
        assert!(parse_selection("1/2/3", &[5, 5]).is_err());
        assert!(parse_selection("x", &[5]).is_err());
    }
}
