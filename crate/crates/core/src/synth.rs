//! Deterministic synthetic short-text corpus for demos and tests.
//!
//! Record `i` of `n` sits at relative time `t = i / (n - 1)`. Its text is
//! built as follows:
//!
//! * 1% of records are empty.
//! * Otherwise it has 4 to 18 words, drawn independently:
//!   * stop word with probability 0.25 (some written as contractions),
//!   * sentiment word with probability
//!     `0.12 + 0.05 sin(6πt) + 0.06 exp(-((t - 0.5) / 0.05)²)`,
//!     negative with probability `0.35 + 0.3 t`, else positive,
//!   * otherwise a topic word (which includes the doubly tagged `vote`).
//! * Each word is capitalized with probability 0.15, upper-cased with 0.03
//!   and hashtagged with 0.04.
//! * A record opens with an @-mention with probability 0.10, ends with a URL
//!   with probability 0.08 and ends with `!`, `?` or `.` at random.
//!
//! Timestamps spread the records evenly over 2021-01-06 UTC.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::Corpus;

pub const FIXTURE_NRC: &str = include_str!("../data/fixtures/nrc_fixture.tsv");
pub const FIXTURE_BING_POSITIVE: &str = include_str!("../data/fixtures/bing_positive.txt");
pub const FIXTURE_BING_NEGATIVE: &str = include_str!("../data/fixtures/bing_negative.txt");

pub const DEFAULT_RECORDS: usize = 1000;
pub const DEFAULT_SEED: u64 = 2021;

const STOP: &[&str] = &[
    "the", "and", "is", "to", "of", "a", "in", "we", "this", "it", "they", "are", "for", "on",
    "our", "isn't", "don't", "can't", "won't",
];

const POSITIVE: &[&str] = &[
    "love",
    "happy",
    "hope",
    "win",
    "congratulations",
    "justice",
    "peaceful",
    "proud",
    "freedom",
    "safe",
    "pray",
    "truth",
    "great",
    "good",
    "best",
    "brave",
    "beautiful",
    "thank",
    "strong",
    "police",
];

const NEGATIVE: &[&str] = &[
    "fight",
    "riot",
    "violence",
    "shame",
    "terrible",
    "hate",
    "chaos",
    "protest",
    "disgrace",
    "sad",
    "mob",
    "attack",
    "treason",
    "lie",
    "guilty",
    "shock",
    "bad",
    "worst",
    "evil",
    "dangerous",
    "angry",
    "fraud",
    "corrupt",
    "storm",
];

const TOPIC: &[&str] = &[
    "capitol",
    "georgia",
    "senate",
    "today",
    "people",
    "states",
    "america",
    "washington",
    "building",
    "news",
    "covid",
    "pandemic",
    "mask",
    "rally",
    "president",
    "congress",
    "count",
    "certify",
    "watch",
    "live",
    "crowd",
    "street",
    "morning",
    "tonight",
    "country",
    "nation",
    "50",
    "2021",
    "results",
    "ossoff",
    "warnock",
    "video",
    "inside",
    "outside",
    "going",
    "vote",
    "election",
    "healthcare",
    "jobs",
];

const HANDLES: &[&str] = &[
    "@newsdesk",
    "@capitolwatch",
    "@GaVotes",
    "@daily_wire",
    "@reporter42",
];

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &[&'a str]) -> &'a str {
    pool[rng.random_range(0..pool.len())]
}

fn sentiment_rate(t: f64) -> f64 {
    0.12 + 0.05 * (6.0 * std::f64::consts::PI * t).sin()
        + 0.06 * (-((t - 0.5) / 0.05).powi(2)).exp()
}

fn decorate(rng: &mut ChaCha8Rng, word: &str) -> String {
    let mut w = word.to_string();
    let roll: f64 = rng.random();
    if roll < 0.03 {
        w = w.to_uppercase();
    } else if roll < 0.18 {
        let mut chars = w.chars();
        if let Some(first) = chars.next() {
            w = first.to_uppercase().chain(chars).collect();
        }
    }
    if rng.random::<f64>() < 0.04 {
        w.insert(0, '#');
    }
    w
}

fn record_text(rng: &mut ChaCha8Rng, t: f64) -> String {
    if rng.random::<f64>() < 0.01 {
        return String::new();
    }
    let len = rng.random_range(4..=18);
    let p_sentiment = sentiment_rate(t);
    let p_negative = 0.35 + 0.3 * t;
    let mut words = Vec::with_capacity(len + 2);
    if rng.random::<f64>() < 0.10 {
        words.push(pick(rng, HANDLES).to_string());
    }
    for _ in 0..len {
        let roll: f64 = rng.random();
        let word = if roll < 0.25 {
            pick(rng, STOP)
        } else if roll < 0.25 + p_sentiment {
            if rng.random::<f64>() < p_negative {
                pick(rng, NEGATIVE)
            } else {
                pick(rng, POSITIVE)
            }
        } else {
            pick(rng, TOPIC)
        };
        words.push(decorate(rng, word));
    }
    let mut text = words.join(" ");
    text.push_str(["!", "?", ".", "", "!!"][rng.random_range(0..5)]);
    if rng.random::<f64>() < 0.08 {
        text.push_str(&format!(" https://t.co/{:08x}", rng.random::<u32>()));
    }
    text
}

fn timestamp(i: usize, n: usize) -> String {
    let secs = i * 86_400 / n;
    format!(
        "2021-01-06T{:02}:{:02}:{:02}Z",
        secs / 3600,
        secs % 3600 / 60,
        secs % 60
    )
}

/// Generates `n` records from `seed`. The same arguments always produce the
/// same corpus.
pub fn generate(n: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let denom = n.saturating_sub(1).max(1) as f64;
    let rows: Vec<(String, Option<String>)> = (0..n)
        .map(|i| {
            (
                record_text(&mut rng, i as f64 / denom),
                Some(timestamp(i, n)),
            )
        })
        .collect();
    Corpus::from_rows(rows, format!("synth:{n}:{seed}"))
}
