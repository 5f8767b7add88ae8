//! Standalone SVG line charts.
//!
//! Geometry is fixed: an 800 x 480 canvas with the plot area inset by
//! [`MARGIN_LEFT`], [`MARGIN_RIGHT`], [`MARGIN_TOP`] and [`MARGIN_BOTTOM`].
//! Slot `i` of `n` sits at the horizontal centre of the `i`-th of `n` equal
//! columns. The y axis always starts at 0.
//!
//! Each series is one `<g class="series">` element holding one
//! `<polyline class="segment">` per run of consecutive non-null points and
//! one `<circle>` per non-null point. A null value breaks the line.

use std::fmt::Write as _;

use crate::{Error, Result};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 480.0;
pub const MARGIN_LEFT: f64 = 70.0;
pub const MARGIN_RIGHT: f64 = 150.0;
pub const MARGIN_TOP: f64 = 40.0;
pub const MARGIN_BOTTOM: f64 = 90.0;
pub const Y_TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSeries {
    pub label: String,
    pub color: usize,
    pub values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartSpec {
    pub title: String,
    pub y_label: String,
    pub x_labels: Vec<String>,
    pub series: Vec<ChartSeries>,
    /// Upper end of the y axis; `None` picks a round number above the data.
    pub y_max: Option<f64>,
}

impl ChartSpec {
    pub fn validate(&self) -> Result<()> {
        if self.x_labels.is_empty() {
            return Err(Error::config("a chart needs at least one x position"));
        }
        for s in &self.series {
            if s.values.len() != self.x_labels.len() {
                return Err(Error::data(format!(
                    "series {:?} has {} points for {} slots",
                    s.label,
                    s.values.len(),
                    self.x_labels.len()
                )));
            }
            if let Some(v) = s.values.iter().flatten().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::data(format!("series {:?} has invalid value {v}", s.label)));
            }
        }
        if let Some(max) = self.y_max {
            if !(max > 0.0 && max.is_finite()) {
                return Err(Error::config(format!("y max must be > 0, got {max}")));
            }
            if let Some(v) = self.data_max().filter(|&v| v > max) {
                return Err(Error::config(format!("y max {max} is below the largest value {v}")));
            }
        }
        Ok(())
    }

    fn data_max(&self) -> Option<f64> {
        self.series
            .iter()
            .flat_map(|s| s.values.iter().flatten().copied())
            .reduce(f64::max)
    }

    pub fn y_top(&self) -> f64 {
        self.y_max
            .unwrap_or_else(|| nice_ceiling(self.data_max().unwrap_or(0.0)))
    }

    /// Pixel x of slot `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        let plot = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + plot * (i as f64 + 0.5) / self.x_labels.len() as f64
    }

    /// Pixel y of a data value.
    pub fn y_at(&self, value: f64) -> f64 {
        let plot = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        MARGIN_TOP + plot * (1.0 - value / self.y_top())
    }
}

/// Smallest of 1, 2, 2.5 or 5 times a power of ten that is >= `max`.
fn nice_ceiling(max: f64) -> f64 {
    if max <= 0.0 {
        return 1.0;
    }
    let magnitude = 10f64.powf(max.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|&c| c >= max)
        .unwrap_or(10.0 * magnitude)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn render_svg(spec: &ChartSpec) -> Result<String> {
    spec.validate()?;
    let top = spec.y_top();
    let (left, right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (upper, lower) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    let mut svg = String::new();
    // writes into a String are infallible
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text class="title" x="{:.2}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        (left + right) / 2.0,
        escape(&spec.title)
    );

    let _ = writeln!(svg, r#"<g class="axes" stroke="black" fill="none">"#);
    let _ = writeln!(svg, r#"<line x1="{left}" y1="{lower}" x2="{right}" y2="{lower}"/>"#);
    let _ = writeln!(svg, r#"<line x1="{left}" y1="{upper}" x2="{left}" y2="{lower}"/>"#);
    let _ = writeln!(svg, "</g>");

    let _ = writeln!(svg, r#"<g class="y-ticks">"#);
    for i in 0..=Y_TICKS {
        let value = top * i as f64 / Y_TICKS as f64;
        let y = spec.y_at(value);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{right}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            left,
            left - 6.0,
            y + 4.0,
            tick_label(value)
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(
        svg,
        r#"<text class="y-label" transform="translate(18 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        (upper + lower) / 2.0,
        escape(&spec.y_label)
    );

    let _ = writeln!(svg, r#"<g class="x-ticks">"#);
    for (i, label) in spec.x_labels.iter().enumerate() {
        let x = spec.x_at(i);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="end" transform="rotate(-45 {x:.2} {:.2})">{}</text>"#,
            lower + 16.0,
            lower + 16.0,
            escape(label)
        );
    }
    let _ = writeln!(svg, "</g>");

    for (n, s) in spec.series.iter().enumerate() {
        let color = PALETTE[s.color % PALETTE.len()];
        let _ = writeln!(
            svg,
            r#"<g class="series" data-label="{}" stroke="{color}" fill="{color}">"#,
            escape(&s.label)
        );
        let mut run: Vec<String> = Vec::new();
        let flush = |run: &mut Vec<String>, svg: &mut String| {
            if !run.is_empty() {
                let _ = writeln!(
                    svg,
                    r#"<polyline class="segment" fill="none" stroke-width="2" points="{}"/>"#,
                    run.join(" ")
                );
                run.clear();
            }
        };
        for (i, v) in s.values.iter().enumerate() {
            match v {
                Some(v) => run.push(format!("{:.2},{:.2}", spec.x_at(i), spec.y_at(*v))),
                None => flush(&mut run, &mut svg),
            }
        }
        flush(&mut run, &mut svg);
        for (i, v) in s.values.iter().enumerate() {
            if let Some(v) = v {
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#,
                    spec.x_at(i),
                    spec.y_at(*v)
                );
            }
        }
        let legend_y = upper + 18.0 * n as f64;
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{legend_y:.2}" x2="{:.2}" y2="{legend_y:.2}" stroke-width="2"/><text x="{:.2}" y="{:.2}" stroke="none" fill="black">{}</text>"#,
            right + 12.0,
            right + 32.0,
            right + 38.0,
            legend_y + 4.0,
            escape(&s.label)
        );
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Histogram heights: raw counts, or `log10` with empty slots as gaps.
pub fn histogram_values(counts: &[usize], log_scale: bool) -> Vec<Option<f64>> {
    counts
        .iter()
        .map(|&c| match (log_scale, c) {
            (true, 0) => None,
            (true, c) => Some((c as f64).log10()),
            (false, c) => Some(c as f64),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(values: Vec<Vec<Option<f64>>>) -> ChartSpec {
        let n = values[0].len();
        ChartSpec {
            title: "Topic <3> & co".into(),
            y_label: "mean p(topic | doc)".into(),
            x_labels: (0..n).map(|i| format!("slot{i}")).collect(),
            series: values
                .into_iter()
                .enumerate()
                .map(|(i, v)| ChartSeries {
                    label: format!("s{i}"),
                    color: i,
                    values: v,
                })
                .collect(),
            y_max: None,
        }
    }

    #[test]
    fn one_group_per_series_and_gaps_split_lines() {
        let svg = render_svg(&spec(vec![
            vec![Some(0.1), None, Some(0.3)],
            vec![Some(0.2), Some(0.2), Some(0.2)],
        ]))
        .unwrap();
        assert_eq!(svg.matches(r#"<g class="series""#).count(), 2);
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 5);
        assert!(svg.contains("Topic &lt;3&gt; &amp; co"));
    }

    #[test]
    fn decreasing_values_increase_pixel_y() {
        let s = spec(vec![vec![Some(0.8), Some(0.5), Some(0.2)]]);
        let ys: Vec<f64> = [0.8, 0.5, 0.2].iter().map(|&v| s.y_at(v)).collect();
        assert!(ys[0] < ys[1] && ys[1] < ys[2]);
        assert_eq!(s.y_at(0.0), HEIGHT - MARGIN_BOTTOM);
        assert_eq!(s.y_at(s.y_top()), MARGIN_TOP);
    }

    #[test]
    fn single_slot_is_centered() {
        let s = spec(vec![vec![Some(0.4)]]);
        assert_eq!(s.x_at(0), MARGIN_LEFT + (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / 2.0);
    }

    #[test]
    fn y_range() {
        assert_eq!(nice_ceiling(0.37), 0.5);
        assert_eq!(nice_ceiling(3.0), 5.0);
        assert_eq!(nice_ceiling(1.0), 1.0);
        assert_eq!(nice_ceiling(0.0), 1.0);
        let mut s = spec(vec![vec![Some(0.4)]]);
        s.y_max = Some(0.3);
        assert!(render_svg(&s).is_err());
        s.y_max = Some(0.8);
        assert_eq!(s.y_top(), 0.8);
    }

    #[test]
    fn mismatched_series_rejected() {
        let mut s = spec(vec![vec![Some(0.4), Some(0.1)]]);
        s.series[0].values.pop();
        assert!(render_svg(&s).is_err());
    }

    #[test]
    fn log_histogram() {
        assert_eq!(
            histogram_values(&[10, 100, 1000], true),
            [Some(1.0), Some(2.0), Some(3.0)]
        );
        assert_eq!(histogram_values(&[0, 10], true), [None, Some(1.0)]);
        assert_eq!(histogram_values(&[0, 10], false), [Some(0.0), Some(10.0)]);
    }
}
