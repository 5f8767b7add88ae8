use std::fs::File;
use std::io::BufWriter;

use diachrony::chart::{histogram_values, render_svg, ChartSeries, ChartSpec};
use diachrony::diachrony::{assign_years, corpus_histogram, write_histogram_csv, Histogram};
use diachrony::preprocess::{load_bow, BowFile};
use diachrony::{Error, Result};

use super::{out_dir, series_labels, slot_scheme, write, y_max};
use crate::config::{pick_list, require_file, FileConfig};
use crate::HistogramArgs;

pub fn run(args: HistogramArgs, cfg: &FileConfig) -> Result<()> {
    let corpora = pick_list(&args.corpora, cfg.corpora());
    if corpora.is_empty() {
        return Err(Error::config("histogram needs at least one --corpus"));
    }
    for c in &corpora {
        require_file(c, "corpus")?;
    }
    let bows: Vec<BowFile> = corpora.iter().map(|c| load_bow(c)).collect::<Result<_>>()?;
    let labels = series_labels(
        &pick_list(&args.labels, cfg.label.clone().unwrap_or_default()),
        bows.iter()
            .enumerate()
            .map(|(i, b)| b.lang.clone().unwrap_or_else(|| format!("corpus{}", i + 1)))
            .collect(),
    )?;
    let log_scale = args.log || cfg.log.unwrap_or(false);
    let scheme = slot_scheme(
        &args.slots,
        cfg,
        bows.iter().flat_map(|b| b.corpus.years.iter().flatten().copied()),
    )?;
    let histograms: Vec<Histogram> = bows
        .iter()
        .map(|b| corpus_histogram(&assign_years(&b.corpus.years, &scheme), &scheme))
        .collect();
    for (label, h) in labels.iter().zip(&histograms) {
        if h.excluded > 0 {
            log::warn!("{label}: {} documents undated or outside the slots", h.excluded);
        }
    }
    let out = out_dir(args.out, cfg)?;

    let spec = ChartSpec {
        title: "Corpus size over time".into(),
        y_label: if log_scale { "log10(documents)" } else { "documents" }.into(),
        x_labels: scheme.labels(),
        series: labels
            .iter()
            .zip(&histograms)
            .enumerate()
            .map(|(i, (label, h))| ChartSeries {
                label: label.clone(),
                color: i,
                values: histogram_values(&h.counts, log_scale),
            })
            .collect(),
        y_max: y_max(&args.slots, cfg),
    };
    write(&out.join("histogram.svg"), render_svg(&spec)?)?;
    let rows: Vec<_> = labels
        .iter()
        .zip(&histograms)
        .map(|(l, h)| (l.clone(), &scheme, h))
        .collect();
    let csv_path = out.join("histogram.csv");
    let file = File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    write_histogram_csv(&rows, BufWriter::new(file))?;
    println!("{} slots written to {}", scheme.len(), out.display());
    Ok(())
}
