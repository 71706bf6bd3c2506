use std::path::PathBuf;

use senti_core::corpus::{load_corpus, CorpusFormat};
use senti_core::lexicon::Lexicon;
use senti_core::pipeline::{analyze_corpus, prepare_tokens, Lexicons, PrepConfig, RunConfig};
use senti_core::report::{
    self, load_analysis_dir, load_series, read_extrema_csv, read_summary, write_analysis, RunMeta,
};
use senti_core::smoother::Grid;
use senti_core::synth;
use senti_core::textprep::write_tokens_csv;

fn data(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(rel)
}

fn config(out: PathBuf) -> RunConfig {
    RunConfig::new(
        data("demo/corpus.jsonl"),
        data("fixtures/nrc_fixture.tsv"),
        data("fixtures/bing_positive.txt"),
        data("fixtures/bing_negative.txt"),
        out,
    )
}

fn lexicons() -> Lexicons {
    Lexicons {
        nrc: Lexicon::parse_nrc(synth::FIXTURE_NRC, "nrc").unwrap().0,
        bing: Lexicon::parse_bing(
            synth::FIXTURE_BING_POSITIVE,
            synth::FIXTURE_BING_NEGATIVE,
            "bing",
        )
        .unwrap(),
    }
}

#[test]
fn generator_reproduces_committed_corpus_and_tokens() {
    let corpus = synth::generate(synth::DEFAULT_RECORDS, synth::DEFAULT_SEED);
    let mut jsonl = Vec::new();
    corpus.write_jsonl(&mut jsonl).unwrap();
    assert!(jsonl == std::fs::read(data("demo/corpus.jsonl")).unwrap());

    let loaded = load_corpus(data("demo/corpus.jsonl"), CorpusFormat::Jsonl).unwrap();
    let tokens = prepare_tokens(&loaded, &PrepConfig::default()).unwrap();
    let mut csv = Vec::new();
    write_tokens_csv(&tokens, &mut csv).unwrap();
    assert!(csv == std::fs::read(data("demo/tokens.csv")).unwrap());
}

#[test]
fn smoothed_csv_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for grid in [Grid::Points(80), Grid::AllX] {
        let mut cfg = config(dir.path().to_path_buf());
        cfg.smooth.grid = grid;
        let corpus = load_corpus(&cfg.input, cfg.format).unwrap();
        let analysis = analyze_corpus(corpus, &lexicons(), &cfg).unwrap();
        let meta = RunMeta::new("senti", "test", &cfg, &analysis).unwrap();
        write_analysis(dir.path(), &analysis, &meta).unwrap();

        let summary = read_summary(&dir.path().join(report::SUMMARY_FILE)).unwrap();
        let series = load_series(&dir.path().join(report::SMOOTHED_FILE), &summary).unwrap();
        assert_eq!(series, analysis.series);
        assert_eq!(summary.sequences, analysis.summaries);
        assert_eq!(summary.agreement, analysis.agreement);
        assert_eq!(
            read_extrema_csv(&dir.path().join(report::EXTREMA_FILE)).unwrap(),
            analysis.extrema
        );

        let saved = load_analysis_dir(dir.path()).unwrap();
        assert_eq!(saved.flags.unwrap(), analysis.flags);
        let metrics = saved.metrics.unwrap();
        assert_eq!(metrics.len(), 1000);
        assert!(metrics
            .iter()
            .zip(&analysis.metrics)
            .all(|(a, b)| a.bing_score == b.bing_score as f64));
    }
}

#[test]
fn summaries_match_a_streaming_computation() {
    let cfg = config(PathBuf::from("unused"));
    let corpus = load_corpus(&cfg.input, cfg.format).unwrap();
    let analysis = analyze_corpus(corpus, &lexicons(), &cfg).unwrap();
    for s in &analysis.summaries {
        let slice = &analysis.slices[s.sequence - 1];
        // Welford's update, one value at a time.
        let (mut n, mut mean, mut m2) = (0.0f64, 0.0f64, 0.0f64);
        for m in &analysis.metrics[slice.range()] {
            let v = s.metric.value(m);
            n += 1.0;
            let delta = v - mean;
            mean += delta / n;
            m2 += delta * (v - mean);
        }
        assert_eq!(s.n, n as usize);
        assert!((s.mean - mean).abs() < 1e-12, "{} {}", s.mean, mean);
        assert!(
            (s.variance - m2 / n).abs() < 1e-12,
            "{} {}",
            s.variance,
            m2 / n
        );
        assert!(s.amplitude >= 0.0);
    }
}

#[test]
fn run_meta_checksums_track_inputs() {
    let cfg = config(PathBuf::from("unused"));
    let corpus = load_corpus(&cfg.input, cfg.format).unwrap();
    let analysis = analyze_corpus(corpus, &lexicons(), &cfg).unwrap();
    let meta = RunMeta::new("senti", "test", &cfg, &analysis).unwrap();
    let bytes = std::fs::read(&cfg.nrc).unwrap();
    assert_eq!(meta.checksums["nrc"], report::sha256_hex(&bytes));
    assert!(meta.sentiment_totals.all_categories >= meta.sentiment_totals.polarity_only);
    let json = serde_json::to_string(&meta).unwrap();
    let back: RunMeta = serde_json::from_str(&json).unwrap();
    assert_eq!(back.config.smooth, cfg.smooth);
    assert_eq!(back.config.prep, cfg.prep);
}
