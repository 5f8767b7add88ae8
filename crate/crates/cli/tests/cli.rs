mod common;

use std::fs;
use std::path::{Path, PathBuf};

use diachrony::lda::load_model;
use diachrony::preprocess::BowCorpus;

use common::{cli, describe, fixture, write_bow};

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Documents that each use only words `a*` or only words `b*`.
fn two_theme_corpus(slots: &[(i32, usize, usize)]) -> (BowCorpus, Vec<String>) {
    let vocab: Vec<String> = ["a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"].map(String::from).to_vec();
    let mut docs = Vec::new();
    let mut years = Vec::new();
    for &(year, a_docs, b_docs) in slots {
        for i in 0..a_docs + b_docs {
            let base = if i < a_docs { 0 } else { 4 };
            docs.push((0..4).map(|w| (base + w, 2 + (i as u32 + w) % 3)).collect());
            years.push(Some(year));
        }
    }
    let n = docs.len();
    let corpus = BowCorpus {
        docs,
        doc_ids: (0..n).map(|i| format!("d{i:03}")).collect(),
        years,
        vocab_size: vocab.len(),
    };
    (corpus, vocab)
}

fn train_small(dir: &Path, corpus: &BowCorpus, vocab: &[String], lang: &str) -> (PathBuf, PathBuf) {
    let bow = dir.join(format!("{lang}.jsonl"));
    write_bow(&bow, corpus, vocab, lang);
    let out = dir.join(format!("model-{lang}"));
    let o = cli([
        "train", "--corpus", s(&bow), "--topics", "2", "--alpha", "0.1", "--passes", "100", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", describe(&o));
    (out.join("model.lda"), bow)
}

/// `(x, y)` pairs of every polyline, grouped by series.
fn polylines(svg: &str) -> Vec<Vec<Vec<(f64, f64)>>> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    doc.descendants()
        .filter(|n| n.has_tag_name("g") && n.attribute("class") == Some("series"))
        .map(|g| {
            g.children()
                .filter(|n| n.has_tag_name("polyline"))
                .map(|p| {
                    p.attribute("points")
                        .unwrap()
                        .split(' ')
                        .map(|xy| {
                            let (x, y) = xy.split_once(',').unwrap();
                            (x.parse().unwrap(), y.parse().unwrap())
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn circles(svg: &str) -> Vec<f64> {
    let doc = roxmltree::Document::parse(svg).unwrap();
    doc.descendants()
        .filter(|n| n.has_tag_name("circle"))
        .map(|c| c.attribute("cy").unwrap().parse().unwrap())
        .collect()
}

fn ingest_args<'a>(out: &'a str, corpus: &'a str, stop: &'a str) -> Vec<&'a str> {
    vec![
        "ingest", "--corpus", corpus, "--lang", "de", "--stopwords", stop, "--min-df", "2", "--max-df", "0.9", "--out", out,
    ]
}

#[test]
fn ingest_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, stop) = (fixture("mixed_de.jsonl"), fixture("stopwords_de.txt"));
    let mut outputs = Vec::new();
    for run in ["one", "two"] {
        let out = dir.path().join(run);
        let o = cli(ingest_args(s(&out), s(&corpus), s(&stop)));
        assert!(o.status.success(), "{}", describe(&o));
        outputs.push((fs::read(out.join("bow.jsonl")).unwrap(), fs::read(out.join("ingest_report.json")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let report: serde_json::Value = serde_json::from_slice(&outputs[0].1).unwrap();
    assert_eq!(report["docs_in"], 12);
    assert_eq!(report["dropped_foreign"], 2);
    assert_eq!(report["docs_out"], 10);
}

#[test]
fn ingest_plaintext_directory_with_annotations() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = cli([
        "ingest", "--corpus", s(&fixture("plaintext_dir")), "--lang", "de", "--annotations",
        s(&fixture("annotations_de.tsv")), "--pos-filter", "--min-df", "1", "--max-df", "1.0", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", describe(&o));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("ingest_report.json")).unwrap()).unwrap();
    assert_eq!(report["docs_in"], 10);
    assert_eq!(report["dropped_foreign"], 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixture("mixed_de.jsonl");

    let missing = dir.path().join("no-such-stopwords.txt");
    let o = cli(ingest_args(s(dir.path()), s(&corpus), s(&missing)));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no-such-stopwords.txt"));

    assert_eq!(cli(["train", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(cli(["--help"]).status.code(), Some(0));

    // output directory path is an existing file
    let file = dir.path().join("file");
    fs::write(&file, "x").unwrap();
    let o = cli(ingest_args(s(&file), s(&corpus), s(&fixture("stopwords_de.txt"))));
    assert_eq!(o.status.code(), Some(2), "{}", describe(&o));

    let junk = dir.path().join("junk.lda");
    fs::write(&junk, b"not a model").unwrap();
    let o = cli(["topics", "--model", s(&junk)]);
    assert_eq!(o.status.code(), Some(3), "{}", describe(&o));
}

#[test]
fn default_training_records_standard_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ing");
    let o = cli(ingest_args(s(&out), s(&fixture("mixed_de.jsonl")), s(&fixture("stopwords_de.txt"))));
    assert!(o.status.success(), "{}", describe(&o));
    let o = cli(["train", "--corpus", s(&out.join("bow.jsonl")), "--out", s(&out)]);
    assert!(o.status.success(), "{}", describe(&o));
    let saved = load_model(&out.join("model.lda")).unwrap();
    assert_eq!(saved.model.num_topics(), 100);
    assert_eq!(saved.model.hyper().passes, 100);
    assert_eq!(saved.model.hyper().alpha, 0.5);
    assert_eq!(saved.lang.as_deref(), Some("de"));
    let topics: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(out.join("topics.json")).unwrap()).unwrap();
    assert_eq!(topics.len(), 100);
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ing");
    let o = cli(ingest_args(s(&out), s(&fixture("mixed_de.jsonl")), s(&fixture("stopwords_de.txt"))));
    assert!(o.status.success(), "{}", describe(&o));
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "corpus = \"ing/bow.jsonl\"\ntopics = 4\npasses = 3\nseed = 9\nout = \"trained\"\n").unwrap();
    let o = cli(["--config", s(&cfg), "train", "--passes", "5"]);
    assert!(o.status.success(), "{}", describe(&o));
    let saved = load_model(&dir.path().join("trained/model.lda")).unwrap();
    assert_eq!(saved.model.num_topics(), 4);
    assert_eq!(saved.model.hyper().passes, 5);
    assert_eq!(saved.model.hyper().seed, 9);
}

#[test]
fn threads_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, vocab) = two_theme_corpus(&[(1800, 10, 10)]);
    let bow = dir.path().join("c.jsonl");
    write_bow(&bow, &corpus, &vocab, "xx");
    let run = |threads: &str, out: &str| {
        std::process::Command::new(env!("CARGO_BIN_EXE_diachrony"))
            .args(["train", "--corpus", s(&bow), "--topics", "2", "--passes", "10", "--out"])
            .arg(dir.path().join(out))
            .env("DIACHRONY_THREADS", threads)
            .output()
            .unwrap()
    };
    assert!(run("3", "env").status.success());
    assert_eq!(run("0", "zero").status.code(), Some(1));
}

#[test]
fn decreasing_topic_draws_a_descending_line() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, vocab) = two_theme_corpus(&[(1800, 16, 4), (1830, 10, 10), (1860, 4, 16)]);
    let (model, bow) = train_small(dir.path(), &corpus, &vocab, "xx");
    let out = dir.path().join("traj");
    let o = cli(["trajectories", "--model", s(&model), "--corpus", s(&bow), "--out", s(&out)]);
    assert!(o.status.success(), "{}", describe(&o));
    let mut descending = 0;
    for t in 0..2 {
        let lines = polylines(&fs::read_to_string(out.join(format!("topic_{t}.svg"))).unwrap());
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].len(), 1, "one unbroken segment");
        let ys: Vec<f64> = lines[0][0].iter().map(|p| p.1).collect();
        assert_eq!(ys.len(), 3);
        // larger pixel y means a smaller value
        if ys.windows(2).all(|w| w[1] > w[0]) {
            descending += 1;
        }
    }
    assert_eq!(descending, 1);
}

#[test]
fn empty_slot_breaks_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, vocab) = two_theme_corpus(&[(1800, 3, 3), (1860, 3, 3)]);
    let (model, bow) = train_small(dir.path(), &corpus, &vocab, "xx");
    let out = dir.path().join("traj");
    let o = cli(["trajectories", "--model", s(&model), "--corpus", s(&bow), "--topics", "0", "--out", s(&out)]);
    assert!(o.status.success(), "{}", describe(&o));
    let lines = polylines(&fs::read_to_string(out.join("topic_0.svg")).unwrap());
    assert_eq!(lines[0].len(), 2, "two segments around the gap");
    let csv = fs::read_to_string(out.join("trajectories.csv")).unwrap();
    assert!(csv.contains("xx,0,1825,1849,,0\n"), "{csv}");
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn single_slot_overlay_of_two_corpora() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, vocab) = two_theme_corpus(&[(1801, 5, 5)]);
    let (model, bow) = train_small(dir.path(), &corpus, &vocab, "xx");
    let out = dir.path().join("traj");
    let o = cli([
        "trajectories", "--model", s(&model), "--corpus", s(&bow), "--model", s(&model), "--corpus", s(&bow),
        "--label", "first", "--label", "second", "--topics", "1", "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", describe(&o));
    let svg = fs::read_to_string(out.join("topic_1_1.svg")).unwrap();
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 2);
    assert!(lines.iter().all(|series| series.len() == 1 && series[0].len() == 1));
    let csv = fs::read_to_string(out.join("trajectories.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("first,1,1800,1824,") && rows[1].starts_with("second,1,1800,1824,"));
}

#[test]
fn unknown_topic_lists_valid_range() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, vocab) = two_theme_corpus(&[(1801, 2, 2)]);
    let (model, bow) = train_small(dir.path(), &corpus, &vocab, "xx");
    let o = cli(["trajectories", "--model", s(&model), "--corpus", s(&bow), "--topics", "7", "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0..=1"), "{}", describe(&o));
}

#[test]
fn log_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, vocab) = two_theme_corpus(&[(1800, 5, 5), (1825, 50, 50), (1875, 500, 500)]);
    let bow = dir.path().join("h.jsonl");
    write_bow(&bow, &corpus, &vocab, "xx");
    let out = dir.path().join("hist");
    let o = cli(["histogram", "--corpus", s(&bow), "--log", "--out", s(&out)]);
    assert!(o.status.success(), "{}", describe(&o));
    let csv = fs::read_to_string(out.join("histogram.csv")).unwrap();
    assert_eq!(
        csv,
        "corpus,slot_start,slot_end,doc_count\nxx,1800,1824,10\nxx,1825,1849,100\nxx,1850,1874,0\nxx,1875,1899,1000\n"
    );
    let svg = fs::read_to_string(out.join("histogram.svg")).unwrap();
    let lines = polylines(&svg);
    assert_eq!(lines[0].len(), 2, "the empty slot is a gap");
    let cy = circles(&svg);
    assert_eq!(cy.len(), 3);
    // log10 counts 1, 2, 3 are evenly spaced
    assert!(((cy[0] - cy[1]) - (cy[1] - cy[2])).abs() < 0.02, "{cy:?}");
}

#[test]
fn align_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, vocab) = two_theme_corpus(&[(1801, 6, 6)]);
    let (model, _) = train_small(dir.path(), &corpus, &vocab, "de");

    let empty = dir.path().join("empty.tsv");
    fs::write(&empty, "# source=de target=de\n").unwrap();
    let out = dir.path().join("al");
    let o = cli(["align", "--model", s(&model), "--model", s(&model), "--lexicon", s(&empty), "--out", s(&out)]);
    assert!(o.status.success(), "{}", describe(&o));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(fs::read_to_string(out.join("alignment.json")).unwrap().trim(), "[]");

    let o = cli(["align", "--model", s(&model), "--model", s(&model), "--lexicon", s(&fixture("lexicon_de_en.tsv"))]);
    assert_eq!(o.status.code(), Some(1), "{}", describe(&o));

    let o = cli(["align", "--model", s(&model), "--lexicon", s(&empty)]);
    assert_eq!(o.status.code(), Some(1));

    let identity = dir.path().join("id.tsv");
    fs::write(&identity, vocab.iter().map(|w| format!("{w}\t{w}\n")).collect::<String>()).unwrap();
    let o = cli([
        "align", "--model", s(&model), "--model", s(&model), "--lexicon", s(&identity), "--method", "greedy", "--top-k", "4",
        "--out", s(&out),
    ]);
    assert!(o.status.success(), "{}", describe(&o));
    let rows: Vec<serde_json::Value> = serde_json::from_str(&fs::read_to_string(out.join("alignment.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r["source_topic"], r["target_topic"]);
        assert_eq!(r["score"], 1.0);
        assert_eq!(r["source_top_words"], r["translated_words"]);
    }
}
