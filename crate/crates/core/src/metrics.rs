//! Per-record emotion counts, sentiment counts and signed polarity scores.

use std::fmt;
use std::io::Write;
use std::ops::Index;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::lexicon::{Category, Lexicon};
use crate::textprep::Token;

/// Counts for all ten categories, zero-filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CategoryCounts([u32; 10]);

impl CategoryCounts {
    pub fn increment(&mut self, c: Category) {
        self.0[c.index()] += 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Category, u32)> + '_ {
        Category::ALL.into_iter().map(|c| (c, self.0[c.index()]))
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Index<Category> for CategoryCounts {
    type Output = u32;

    fn index(&self, c: Category) -> &u32 {
        &self.0[c.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingPolicy {
    /// positive + negative
    #[default]
    PolarityOnly,
    /// Sum over all ten categories; one token may count several times.
    AllCategories,
}

impl FromStr for CountingPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "polarity_only" => Ok(CountingPolicy::PolarityOnly),
            "all_categories" => Ok(CountingPolicy::AllCategories),
            other => Err(format!("unknown counting policy `{other}`")),
        }
    }
}

/// Tallies every NRC category of every token.
pub fn emotion_counts<'a, I>(tokens: I, nrc: &Lexicon) -> CategoryCounts
where
    I: IntoIterator<Item = &'a Token>,
{
    let mut counts = CategoryCounts::default();
    for t in tokens {
        for c in nrc.lookup(&t.word).iter() {
            counts.increment(c);
        }
    }
    counts
}

pub fn sentiment_count(counts: &CategoryCounts, policy: CountingPolicy) -> u32 {
    match policy {
        CountingPolicy::PolarityOnly => counts[Category::Positive] + counts[Category::Negative],
        CountingPolicy::AllCategories => counts.total(),
    }
}

/// +1 per positive word, -1 per negative word. A word tagged with both
/// polarities contributes nothing.
pub fn polarity_score<'a, I>(tokens: I, lexicon: &Lexicon) -> i64
where
    I: IntoIterator<Item = &'a Token>,
{
    tokens
        .into_iter()
        .map(|t| polarity_of(lexicon, &t.word))
        .sum()
}

fn polarity_of(lexicon: &Lexicon, word: &str) -> i64 {
    let cats = lexicon.lookup(word);
    i64::from(cats.contains(Category::Positive)) - i64::from(cats.contains(Category::Negative))
}

fn has_polarity(lexicon: &Lexicon, word: &str) -> bool {
    let cats = lexicon.lookup(word);
    cats.contains(Category::Positive) || cats.contains(Category::Negative)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordMetrics {
    pub record_id: u32,
    pub nrc_counts: CategoryCounts,
    pub sentiment_count: u32,
    pub nrc_score: i64,
    pub bing_score: i64,
    /// Tokens remaining after filtering.
    pub token_count: u32,
    /// Tokens carrying an NRC polarity.
    pub nrc_matches: u32,
    /// Tokens found in the Bing lexicon.
    pub bing_matches: u32,
}

impl RecordMetrics {
    pub fn empty(record_id: u32) -> Self {
        RecordMetrics {
            record_id,
            nrc_counts: CategoryCounts::default(),
            sentiment_count: 0,
            nrc_score: 0,
            bing_score: 0,
            token_count: 0,
            nrc_matches: 0,
            bing_matches: 0,
        }
    }

    /// Metrics for a single record's tokens.
    pub fn compute(
        record_id: u32,
        tokens: &[&Token],
        nrc: &Lexicon,
        bing: &Lexicon,
        policy: CountingPolicy,
    ) -> Self {
        let nrc_counts = emotion_counts(tokens.iter().copied(), nrc);
        RecordMetrics {
            record_id,
            sentiment_count: sentiment_count(&nrc_counts, policy),
            nrc_counts,
            nrc_score: polarity_score(tokens.iter().copied(), nrc),
            bing_score: polarity_score(tokens.iter().copied(), bing),
            token_count: tokens.len() as u32,
            nrc_matches: tokens.iter().filter(|t| has_polarity(nrc, &t.word)).count() as u32,
            bing_matches: tokens
                .iter()
                .filter(|t| has_polarity(bing, &t.word))
                .count() as u32,
        }
    }
}

/// One `RecordMetrics` per corpus record, in corpus order. Records without
/// tokens get all-zero metrics. Tokens may arrive in any order.
pub fn score_corpus(
    corpus: &Corpus,
    tokens: &[Token],
    nrc: &Lexicon,
    bing: &Lexicon,
    policy: CountingPolicy,
) -> Vec<RecordMetrics> {
    let mut grouped: Vec<Vec<&Token>> = vec![Vec::new(); corpus.len()];
    for t in tokens {
        match (t.record_id as usize)
            .checked_sub(1)
            .and_then(|i| grouped.get_mut(i))
        {
            Some(group) => group.push(t),
            None => log::warn!("token for unknown record {} ignored", t.record_id),
        }
    }
    corpus
        .records()
        .iter()
        .zip(&grouped)
        .map(|(r, group)| RecordMetrics::compute(r.id, group, nrc, bing, policy))
        .collect()
}

/// The per-record quantities that get smoothed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    SentimentCount,
    NrcScore,
    BingScore,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::SentimentCount, Metric::NrcScore, Metric::BingScore];

    pub fn name(self) -> &'static str {
        match self {
            Metric::SentimentCount => "sentiment_count",
            Metric::NrcScore => "nrc_score",
            Metric::BingScore => "bing_score",
        }
    }

    /// Counts are non-negative, so their reported fit is clamped at zero.
    pub fn is_count(self) -> bool {
        matches!(self, Metric::SentimentCount)
    }

    pub fn value(self, m: &RecordMetrics) -> f64 {
        match self {
            Metric::SentimentCount => f64::from(m.sentiment_count),
            Metric::NrcScore => m.nrc_score as f64,
            Metric::BingScore => m.bing_score as f64,
        }
    }

    /// Whether the record had any lexicon match relevant to this metric.
    pub fn matched(self, m: &RecordMetrics) -> bool {
        match self {
            Metric::SentimentCount => m.sentiment_count > 0,
            Metric::NrcScore => m.nrc_matches > 0,
            Metric::BingScore => m.bing_matches > 0,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

pub const METRICS_HEADER: [&str; 14] = [
    "record_id",
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "sadness",
    "surprise",
    "trust",
    "negative",
    "positive",
    "sentiment_count",
    "nrc_score",
    "bing_score",
];

pub fn write_metrics_csv<W: Write>(metrics: &[RecordMetrics], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(METRICS_HEADER)?;
    for m in metrics {
        let mut row = Vec::with_capacity(METRICS_HEADER.len());
        row.push(m.record_id.to_string());
        row.extend(m.nrc_counts.iter().map(|(_, n)| n.to_string()));
        row.push(m.sentiment_count.to_string());
        row.push(m.nrc_score.to_string());
        row.push(m.bing_score.to_string());
        w.write_record(&row)?;
    }
    w.flush()
}
