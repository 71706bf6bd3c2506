//! Shared inputs for the benchmarks.

use senti_core::lexicon::Lexicon;
use senti_core::pipeline::Lexicons;
use senti_core::smoother::SeriesPoint;
use senti_core::{synth, Corpus};

pub fn demo_corpus(records: usize) -> Corpus {
    synth::generate(records, synth::DEFAULT_SEED)
}

pub fn fixture_lexicons() -> Lexicons {
    Lexicons {
        nrc: Lexicon::parse_nrc(synth::FIXTURE_NRC, "nrc")
            .expect("fixture parses")
            .0,
        bing: Lexicon::parse_bing(
            synth::FIXTURE_BING_POSITIVE,
            synth::FIXTURE_BING_NEGATIVE,
            "bing",
        )
        .expect("fixture parses"),
    }
}

/// A smooth wave with deterministic integer-valued jitter, like a count series.
pub fn wave_series(n: usize) -> Vec<SeriesPoint> {
    (0..n)
        .map(|i| {
            let x = i as f64 + 1.0;
            let jitter = ((i * 7919) % 5) as f64 - 2.0;
            SeriesPoint::new(x, 2.0 + (x / 40.0).sin() + jitter)
        })
        .collect()
}
