use std::fs;
use std::path::Path;

use log::info;
use senti_core::corpus::{load_corpus, CorpusError};
use senti_core::pipeline::{prepare_tokens, run_analysis, PipelineError, RunConfig};
use senti_core::plot::render_svg;
use senti_core::report::{
    self, load_analysis_dir, write_analysis, write_atomic, write_with, ReportError, RunMeta,
};
use senti_core::smoother::SmoothParams;
use senti_core::synth;
use senti_core::textprep::write_tokens_csv;
use senti_core::CorpusFormat;
use thiserror::Error;

use crate::args::{AnalyzeArgs, PlotArgs, SynthArgs, TokenizeArgs};

/// Failures grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Lexicon(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Lexicon(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Lexicon(_) => CliError::Lexicon(e.to_string()),
            PipelineError::Smoothing { .. } | PipelineError::Insight(_) => {
                CliError::Numerical(e.to_string())
            }
            PipelineError::Corpus(_) | PipelineError::StopWords { .. } => {
                CliError::Input(e.to_string())
            }
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))
}

pub fn tokenize(args: &TokenizeArgs) -> Result<(), CliError> {
    let corpus = load_corpus(&args.input.input, args.input.format())?;
    let tokens = prepare_tokens(&corpus, &args.prep.config())?;
    create_dir(&args.out)?;
    let path = args.out.join(report::TOKENS_FILE);
    write_with(&path, |b| write_tokens_csv(&tokens, b))?;
    info!(
        "{} records, {} tokens -> {}",
        corpus.len(),
        tokens.len(),
        path.display()
    );
    Ok(())
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let smooth = SmoothParams {
        span: args.span,
        degree: args.degree,
        ci_level: args.ci,
        grid: args.grid,
    };
    smooth
        .validate()
        .map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(k) = args.k_sigma {
        if !(k.is_finite() && k > 0.0) {
            return Err(CliError::Input(format!(
                "--k-sigma must be positive, got {k}"
            )));
        }
    }
    let config = RunConfig {
        input: args.input.input.clone(),
        format: args.input.format(),
        nrc: args.nrc.clone(),
        bing_positive: args.bing_pos.clone(),
        bing_negative: args.bing_neg.clone(),
        sequences: args.sequences as usize,
        labels: args.labels.clone(),
        smooth,
        policy: args.policy,
        prep: args.prep.config(),
        skip_unmatched: args.skip_unmatched,
        zeros_as_agree: args.zeros_as_agree,
        k_sigma: args.k_sigma,
        out: args.out.clone(),
    };
    let analysis = run_analysis(&config)?;
    let meta = RunMeta::new("senti", env!("CARGO_PKG_VERSION"), &config, &analysis)?;
    write_analysis(&config.out, &analysis, &meta)?;
    info!(
        "{} records in {} sequences, {} tokens -> {}",
        analysis.corpus.len(),
        analysis.slices.len(),
        analysis.tokens.len(),
        config.out.display()
    );
    Ok(())
}

pub fn plot(args: &PlotArgs) -> Result<(), CliError> {
    let saved = load_analysis_dir(&args.input)?;
    let out = args.out.as_deref().unwrap_or(&args.input);
    create_dir(out)?;
    let path = out.join(report::REPORT_FILE);
    write_atomic(&path, render_svg(&saved).as_bytes())?;
    info!("wrote {}", path.display());
    Ok(())
}

pub fn synth(args: &SynthArgs) -> Result<(), CliError> {
    if args.records == 0 {
        return Err(CliError::Input("--records must be at least 1".to_string()));
    }
    let corpus = synth::generate(args.records, args.seed);
    create_dir(&args.out)?;
    let path = args.out.join(format!("corpus.{}", args.format));
    write_with(&path, |b| match args.format {
        CorpusFormat::Jsonl => corpus.write_jsonl(b),
        CorpusFormat::Csv => corpus.write_csv(b),
    })?;
    for (file, text) in [
        ("nrc.tsv", synth::FIXTURE_NRC),
        ("bing_positive.txt", synth::FIXTURE_BING_POSITIVE),
        ("bing_negative.txt", synth::FIXTURE_BING_NEGATIVE),
    ] {
        write_atomic(&args.out.join(file), text.as_bytes())?;
    }
    info!("{} records -> {}", corpus.len(), path.display());
    Ok(())
}
