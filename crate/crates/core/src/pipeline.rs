//! End-to-end run: load, tokenize, score, split, smooth and read out.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{load_corpus, Corpus, CorpusError, CorpusFormat, SequenceSlice};
use crate::insight::{
    find_extrema, flag_records, lexicon_agreement, reported_fit, series_points, summarize_sequence,
    AgreementReport, BandRule, Extremum, InsightError, RecordFlag, SequenceSummary,
};
use crate::lexicon::{load_bing, load_nrc, Lexicon, LexiconError};
use crate::metrics::{score_corpus, CountingPolicy, Metric, RecordMetrics};
use crate::smoother::{smooth_series, SmoothError, SmoothParams, SmoothedSeries};
use crate::textprep::{
    drop_duplicate_tokens, remove_stopwords, tokenize_all, DedupeScope, StopList, Token,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("cannot read stop-word file {path}: {source}")]
    StopWords {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("smoothing {metric} in sequence {sequence} failed: {source}")]
    Smoothing {
        sequence: usize,
        metric: Metric,
        #[source]
        source: SmoothError,
    },
    #[error(transparent)]
    Insight(#[from] InsightError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "path")]
pub enum StopWords {
    #[default]
    Bundled,
    None,
    File(PathBuf),
}

/// Token filtering options shared by `tokenize` and `analyze`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PrepConfig {
    pub stopwords: StopWords,
    pub custom_words: Vec<String>,
    pub dedupe: Option<DedupeScope>,
}

impl PrepConfig {
    pub fn stop_list(&self) -> Result<StopList, PipelineError> {
        match &self.stopwords {
            StopWords::Bundled => Ok(StopList::bundled()),
            StopWords::None => Ok(StopList::empty()),
            StopWords::File(path) => {
                StopList::from_file(path).map_err(|source| PipelineError::StopWords {
                    path: path.display().to_string(),
                    source,
                })
            }
        }
    }

    pub fn custom_set(&self) -> HashSet<String> {
        StopList::inline(&self.custom_words)
            .words()
            .map(str::to_string)
            .collect()
    }
}

/// Tokenizes and filters a corpus.
pub fn prepare_tokens(corpus: &Corpus, prep: &PrepConfig) -> Result<Vec<Token>, PipelineError> {
    let tokens = tokenize_all(corpus.records());
    let tokens = remove_stopwords(tokens, &prep.stop_list()?, &prep.custom_set());
    Ok(match prep.dedupe {
        Some(scope) => drop_duplicate_tokens(tokens, scope),
        None => tokens,
    })
}

/// Everything that determines an analysis run. Serialized verbatim into
/// `run_meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: CorpusFormat,
    pub nrc: PathBuf,
    pub bing_positive: PathBuf,
    pub bing_negative: PathBuf,
    pub sequences: usize,
    pub labels: Option<Vec<String>>,
    pub smooth: SmoothParams,
    pub policy: CountingPolicy,
    pub prep: PrepConfig,
    pub skip_unmatched: bool,
    pub zeros_as_agree: bool,
    pub k_sigma: Option<f64>,
    #[serde(skip)]
    pub out: PathBuf,
}

impl RunConfig {
    /// Defaults for everything but the file locations.
    pub fn new(
        input: impl Into<PathBuf>,
        nrc: impl Into<PathBuf>,
        bing_positive: impl Into<PathBuf>,
        bing_negative: impl Into<PathBuf>,
        out: impl Into<PathBuf>,
    ) -> Self {
        let input = input.into();
        RunConfig {
            format: CorpusFormat::from_path(&input),
            input,
            nrc: nrc.into(),
            bing_positive: bing_positive.into(),
            bing_negative: bing_negative.into(),
            sequences: 3,
            labels: None,
            smooth: SmoothParams::default(),
            policy: CountingPolicy::default(),
            prep: PrepConfig::default(),
            skip_unmatched: false,
            zeros_as_agree: false,
            k_sigma: None,
            out: out.into(),
        }
    }

    pub fn band_rule(&self) -> BandRule {
        self.k_sigma.map_or(BandRule::Confidence, BandRule::KSigma)
    }
}

/// A smoothed metric within one sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub sequence: usize,
    pub metric: Metric,
    pub series: SmoothedSeries,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub corpus: Corpus,
    pub tokens: Vec<Token>,
    pub metrics: Vec<RecordMetrics>,
    pub slices: Vec<SequenceSlice>,
    pub series: Vec<SeriesResult>,
    pub summaries: Vec<SequenceSummary>,
    pub flags: Vec<RecordFlag>,
    pub extrema: Vec<(Metric, Extremum)>,
    pub agreement: AgreementReport,
}

pub struct Lexicons {
    pub nrc: Lexicon,
    pub bing: Lexicon,
}

impl Lexicons {
    pub fn load(config: &RunConfig) -> Result<Self, PipelineError> {
        Ok(Lexicons {
            nrc: load_nrc(&config.nrc)?,
            bing: load_bing(&config.bing_positive, &config.bing_negative)?,
        })
    }
}

/// Runs the full analysis from the files named in `config`.
pub fn run_analysis(config: &RunConfig) -> Result<Analysis, PipelineError> {
    let corpus = load_corpus(&config.input, config.format)?;
    let lexicons = Lexicons::load(config)?;
    analyze_corpus(corpus, &lexicons, config)
}

/// Runs the analysis on an already loaded corpus.
pub fn analyze_corpus(
    corpus: Corpus,
    lexicons: &Lexicons,
    config: &RunConfig,
) -> Result<Analysis, PipelineError> {
    let slices = corpus.split(config.sequences, config.labels.as_deref())?;
    let tokens = prepare_tokens(&corpus, &config.prep)?;
    let metrics = score_corpus(
        &corpus,
        &tokens,
        &lexicons.nrc,
        &lexicons.bing,
        config.policy,
    );

    let mut series = Vec::new();
    let mut summaries = Vec::new();
    let mut flags = Vec::new();
    let mut extrema = Vec::new();
    for slice in &slices {
        for metric in Metric::ALL {
            // Counts are never filtered; the flag only affects score smoothing.
            let skip = config.skip_unmatched && !metric.is_count();
            let points = series_points(slice, &metrics, metric, skip);
            let smoothed = smooth_series(&points, &config.smooth).map_err(|source| {
                PipelineError::Smoothing {
                    sequence: slice.index,
                    metric,
                    source,
                }
            })?;
            let values: Vec<f64> = points.iter().map(|p| p.y).collect();
            summaries.push(summarize_sequence(slice, metric, &values, &smoothed)?);
            flags.extend(flag_records(
                slice,
                &metrics,
                &smoothed,
                metric,
                config.band_rule(),
            ));
            let fit = reported_fit(&smoothed, metric);
            extrema.extend(
                find_extrema(slice.index, &smoothed.eval_x, &fit)
                    .into_iter()
                    .map(|e| (metric, e)),
            );
            series.push(SeriesResult {
                sequence: slice.index,
                metric,
                series: smoothed,
            });
        }
    }
    let agreement = lexicon_agreement(&metrics, config.zeros_as_agree);

    Ok(Analysis {
        corpus,
        tokens,
        metrics,
        slices,
        series,
        summaries,
        flags,
        extrema,
        agreement,
    })
}

/// Resolves a path relative to `base` unless it is absolute.
pub fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
