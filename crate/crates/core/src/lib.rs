//! Lexicon-based sentiment analysis of short-text corpora with local
//! regression smoothing over corpus position.

pub mod corpus;
pub mod insight;
pub mod lexicon;
pub mod metrics;
pub mod pipeline;
pub mod plot;
pub mod report;
pub mod smoother;
pub mod synth;
pub mod textprep;

pub use corpus::{Corpus, CorpusFormat, SequenceSlice, TextRecord};
pub use insight::{AgreementReport, Extremum, FlagStatus, RecordFlag, SequenceSummary};
pub use lexicon::{Category, Lexicon, LexiconKind};
pub use metrics::{CountingPolicy, Metric, RecordMetrics};
pub use pipeline::{Analysis, PipelineError, RunConfig};
pub use smoother::{Grid, SeriesPoint, SmoothParams, SmoothedSeries};
pub use textprep::{DedupeScope, StopList, Token};
