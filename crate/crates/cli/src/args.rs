use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::LevelFilter;
use senti_core::pipeline::{PrepConfig, StopWords};
use senti_core::{CorpusFormat, CountingPolicy, DedupeScope, Grid};

#[derive(Debug, Parser)]
#[command(
    name = "senti",
    version,
    about = "Lexicon-based sentiment analysis with local regression smoothing"
)]
pub struct Cli {
    /// Increase log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn verbosity(&self) -> LevelFilter {
        match self.verbose {
            0 => LevelFilter::Warn,
            1 => LevelFilter::Info,
            _ => LevelFilter::Debug,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the filtered tidy tokens of a corpus as tokens.csv.
    Tokenize(TokenizeArgs),
    /// Score, split and smooth a corpus and write all analysis artifacts.
    Analyze(AnalyzeArgs),
    /// Render report.svg from an analysis directory.
    Plot(PlotArgs),
    /// Generate the synthetic demo corpus and fixture lexicons.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DedupeArg {
    PerRecord,
    Global,
}

impl From<DedupeArg> for DedupeScope {
    fn from(d: DedupeArg) -> Self {
        match d {
            DedupeArg::PerRecord => DedupeScope::PerRecord,
            DedupeArg::Global => DedupeScope::Global,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Corpus file (JSONL or CSV).
    #[arg(long)]
    pub input: PathBuf,

    /// Corpus format; inferred from the file extension when omitted.
    #[arg(long)]
    pub format: Option<CorpusFormat>,
}

impl InputArgs {
    pub fn format(&self) -> CorpusFormat {
        self.format
            .unwrap_or_else(|| CorpusFormat::from_path(&self.input))
    }
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    /// Stop-word file replacing the bundled list.
    #[arg(long, conflicts_with = "no_stopwords")]
    pub stopwords: Option<PathBuf>,

    /// Keep stop words.
    #[arg(long)]
    pub no_stopwords: bool,

    /// Extra words to drop, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub custom_words: Vec<String>,

    /// Drop repeated words within each record, or across the whole corpus.
    #[arg(long, num_args = 0..=1, default_missing_value = "per-record")]
    pub dedupe: Option<DedupeArg>,
}

impl PrepArgs {
    pub fn config(&self) -> PrepConfig {
        let stopwords = match (&self.stopwords, self.no_stopwords) {
            (Some(path), _) => StopWords::File(path.clone()),
            (None, true) => StopWords::None,
            (None, false) => StopWords::Bundled,
        };
        PrepConfig {
            stopwords,
            custom_words: self.custom_words.clone(),
            dedupe: self.dedupe.map(Into::into),
        }
    }
}

#[derive(Debug, Args)]
pub struct TokenizeArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub prep: PrepArgs,

    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub prep: PrepArgs,

    /// NRC emotion lexicon (word, category, flag; tab separated).
    #[arg(long)]
    pub nrc: PathBuf,

    /// Bing positive word list.
    #[arg(long)]
    pub bing_pos: PathBuf,

    /// Bing negative word list.
    #[arg(long)]
    pub bing_neg: PathBuf,

    /// Number of contiguous sequences.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub sequences: u32,

    /// Sequence labels, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub labels: Option<Vec<String>>,

    /// Fraction of points in each local window.
    #[arg(long, default_value_t = 0.75)]
    pub span: f64,

    /// Local polynomial degree (0, 1 or 2).
    #[arg(long, default_value_t = 2)]
    pub degree: usize,

    /// Confidence level of the band.
    #[arg(long, default_value_t = 0.95)]
    pub ci: f64,

    /// Evaluation grid: a point count or `all` for every record position.
    #[arg(long, default_value = "80")]
    pub grid: Grid,

    /// Which NRC categories count towards the sentiment count.
    #[arg(long, default_value = "polarity-only")]
    pub policy: CountingPolicy,

    /// Smooth scores only over records with a lexicon match.
    #[arg(long)]
    pub skip_unmatched: bool,

    /// Count zero scores as a sign when comparing the two lexicons.
    #[arg(long)]
    pub zeros_as_agree: bool,

    /// Flag against fit ± k·sqrt(conditional variance) instead of the band.
    #[arg(long)]
    pub k_sigma: Option<f64>,

    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Analysis directory holding smoothed.csv and summary.json.
    #[arg(long)]
    pub input: PathBuf,

    /// Output directory; defaults to the analysis directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Number of records.
    #[arg(long, default_value_t = senti_core::synth::DEFAULT_RECORDS)]
    pub records: usize,

    /// Random seed.
    #[arg(long, default_value_t = senti_core::synth::DEFAULT_SEED)]
    pub seed: u64,

    /// Corpus file format.
    #[arg(long, default_value = "jsonl")]
    pub format: CorpusFormat,

    /// Output directory.
    #[arg(long, default_value = "demo")]
    pub out: PathBuf,
}
