//! On-disk artifacts of an analysis run and their readers.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::SequenceSlice;
use crate::insight::{
    AgreementReport, Extremum, ExtremumKind, FlagStatus, RecordFlag, SequenceSummary,
};
use crate::metrics::{sentiment_count, write_metrics_csv, CountingPolicy, Metric, METRICS_HEADER};
use crate::pipeline::{Analysis, RunConfig, SeriesResult};
use crate::smoother::{SmoothParams, SmoothedSeries};
use crate::textprep::write_tokens_csv;

pub const TOKENS_FILE: &str = "tokens.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const SMOOTHED_FILE: &str = "smoothed.csv";
pub const FLAGS_FILE: &str = "flags.csv";
pub const EXTREMA_FILE: &str = "extrema.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const RUN_META_FILE: &str = "run_meta.json";
pub const REPORT_FILE: &str = "report.svg";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {message}")]
    Inconsistent { path: String, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> ReportError + '_ {
    move |source| ReportError::Csv {
        path: path.display().to_string(),
        source,
    }
}

fn json_err(path: &Path) -> impl FnOnce(serde_json::Error) -> ReportError + '_ {
    move |source| ReportError::Json {
        path: path.display().to_string(),
        source,
    }
}

/// Writes `bytes` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err(path))
}

/// Renders into a buffer and writes it atomically.
pub fn write_with<F>(path: &Path, render: F) -> Result<(), ReportError>
where
    F: FnOnce(&mut Vec<u8>) -> io::Result<()>,
{
    let mut buf = Vec::new();
    render(&mut buf).map_err(io_err(path))?;
    write_atomic(path, &buf)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn sha256_file(path: &Path) -> Result<String, ReportError> {
    Ok(sha256_hex(&fs::read(path).map_err(io_err(path))?))
}

/// One row of `smoothed.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothedRow {
    pub metric: Metric,
    pub sequence: usize,
    pub x: f64,
    pub fit: f64,
    pub fit_clamped: f64,
    pub se: f64,
    pub lower: f64,
    pub upper: f64,
    pub cond_var: f64,
}

pub fn smoothed_rows(series: &[SeriesResult]) -> Vec<SmoothedRow> {
    let mut rows = Vec::new();
    for r in series {
        let s = &r.series;
        for (i, fit_clamped) in s.clamped_fit().into_iter().enumerate() {
            rows.push(SmoothedRow {
                metric: r.metric,
                sequence: r.sequence,
                x: s.eval_x[i],
                fit: s.fit[i],
                fit_clamped,
                se: s.se[i],
                lower: s.lower[i],
                upper: s.upper[i],
                cond_var: s.cond_var[i],
            });
        }
    }
    rows
}

fn write_rows<W: Write, T: Serialize>(rows: &[T], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, ReportError> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_err(path))?;
    reader
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(csv_err(path))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct FlagRow {
    record_id: u32,
    metric: Metric,
    value: f64,
    fit: f64,
    lower: f64,
    upper: f64,
    status: FlagStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ExtremumRow {
    metric: Metric,
    sequence: usize,
    x: f64,
    fit: f64,
    kind: ExtremumKind,
}

pub fn write_flags_csv<W: Write>(flags: &[RecordFlag], out: W) -> io::Result<()> {
    let rows: Vec<FlagRow> = flags
        .iter()
        .map(|f| FlagRow {
            record_id: f.record_id,
            metric: f.metric,
            value: f.value,
            fit: f.fit,
            lower: f.lower,
            upper: f.upper,
            status: f.status,
        })
        .collect();
    if rows.is_empty() {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "record_id",
            "metric",
            "value",
            "fit",
            "lower",
            "upper",
            "status",
        ])?;
        return w.flush();
    }
    write_rows(&rows, out)
}

pub fn read_flags_csv(path: &Path) -> Result<Vec<RecordFlag>, ReportError> {
    Ok(read_rows::<FlagRow>(path)?
        .into_iter()
        .map(|r| RecordFlag {
            record_id: r.record_id,
            metric: r.metric,
            value: r.value,
            fit: r.fit,
            lower: r.lower,
            upper: r.upper,
            status: r.status,
        })
        .collect())
}

pub fn write_extrema_csv<W: Write>(extrema: &[(Metric, Extremum)], out: W) -> io::Result<()> {
    let rows: Vec<ExtremumRow> = extrema
        .iter()
        .map(|(metric, e)| ExtremumRow {
            metric: *metric,
            sequence: e.sequence,
            x: e.x,
            fit: e.fit,
            kind: e.kind,
        })
        .collect();
    if rows.is_empty() {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["metric", "sequence", "x", "fit", "kind"])?;
        return w.flush();
    }
    write_rows(&rows, out)
}

pub fn read_extrema_csv(path: &Path) -> Result<Vec<(Metric, Extremum)>, ReportError> {
    Ok(read_rows::<ExtremumRow>(path)?
        .into_iter()
        .map(|r| {
            (
                r.metric,
                Extremum {
                    sequence: r.sequence,
                    x: r.x,
                    fit: r.fit,
                    kind: r.kind,
                },
            )
        })
        .collect())
}

pub fn write_smoothed_csv<W: Write>(series: &[SeriesResult], out: W) -> io::Result<()> {
    write_rows(&smoothed_rows(series), out)
}

pub fn read_smoothed_csv(path: &Path) -> Result<Vec<SmoothedRow>, ReportError> {
    read_rows(path)
}

/// Scalar statistics of a smoothed series that `smoothed.csv` does not carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesStats {
    pub metric: Metric,
    pub sequence: usize,
    pub n: usize,
    pub params: SmoothParams,
    pub df: f64,
    pub sigma2: f64,
    pub seq_mean: f64,
    pub seq_var: f64,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub slices: Vec<SequenceSlice>,
    pub sequences: Vec<SequenceSummary>,
    pub series: Vec<SeriesStats>,
    pub agreement: AgreementReport,
}

impl Summary {
    pub fn from_analysis(analysis: &Analysis) -> Self {
        let series = analysis
            .series
            .iter()
            .zip(&analysis.summaries)
            .map(|(r, s)| SeriesStats {
                metric: r.metric,
                sequence: r.sequence,
                n: s.n,
                params: r.series.params,
                df: r.series.df,
                sigma2: r.series.sigma2,
                seq_mean: r.series.seq_mean,
                seq_var: r.series.seq_var,
            })
            .collect();
        Summary {
            slices: analysis.slices.clone(),
            sequences: analysis.summaries.clone(),
            series,
            agreement: analysis.agreement.clone(),
        }
    }

    pub fn summary_for(&self, sequence: usize, metric: Metric) -> Option<&SequenceSummary> {
        self.sequences
            .iter()
            .find(|s| s.sequence == sequence && s.metric == metric)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentimentTotals {
    pub polarity_only: u64,
    pub all_categories: u64,
}

/// Contents of `run_meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub records: usize,
    pub tokens: usize,
    pub sentiment_totals: SentimentTotals,
    /// SHA-256 of every input file, keyed by role.
    pub checksums: BTreeMap<String, String>,
}

impl RunMeta {
    pub fn new(
        tool: &str,
        version: &str,
        config: &RunConfig,
        analysis: &Analysis,
    ) -> Result<Self, ReportError> {
        let total = |policy| {
            analysis
                .metrics
                .iter()
                .map(|m| u64::from(sentiment_count(&m.nrc_counts, policy)))
                .sum()
        };
        let mut checksums = BTreeMap::new();
        for (role, path) in [
            ("input", &config.input),
            ("nrc", &config.nrc),
            ("bing_positive", &config.bing_positive),
            ("bing_negative", &config.bing_negative),
        ] {
            checksums.insert(role.to_string(), sha256_file(path)?);
        }
        if let crate::pipeline::StopWords::File(path) = &config.prep.stopwords {
            checksums.insert("stopwords".to_string(), sha256_file(path)?);
        }
        Ok(RunMeta {
            tool: tool.to_string(),
            version: version.to_string(),
            config: config.clone(),
            records: analysis.corpus.len(),
            tokens: analysis.tokens.len(),
            sentiment_totals: SentimentTotals {
                polarity_only: total(CountingPolicy::PolarityOnly),
                all_categories: total(CountingPolicy::AllCategories),
            },
            checksums,
        })
    }
}

fn json_bytes<T: Serialize>(value: &T, path: &Path) -> Result<Vec<u8>, ReportError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(json_err(path))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes every analysis artifact into `dir`, creating it if needed.
pub fn write_analysis(dir: &Path, analysis: &Analysis, meta: &RunMeta) -> Result<(), ReportError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_with(&dir.join(TOKENS_FILE), |b| {
        write_tokens_csv(&analysis.tokens, b)
    })?;
    write_with(&dir.join(METRICS_FILE), |b| {
        write_metrics_csv(&analysis.metrics, b)
    })?;
    write_with(&dir.join(SMOOTHED_FILE), |b| {
        write_smoothed_csv(&analysis.series, b)
    })?;
    write_with(&dir.join(FLAGS_FILE), |b| {
        write_flags_csv(&analysis.flags, b)
    })?;
    write_with(&dir.join(EXTREMA_FILE), |b| {
        write_extrema_csv(&analysis.extrema, b)
    })?;
    let summary_path = dir.join(SUMMARY_FILE);
    write_atomic(
        &summary_path,
        &json_bytes(&Summary::from_analysis(analysis), &summary_path)?,
    )?;
    let meta_path = dir.join(RUN_META_FILE);
    write_atomic(&meta_path, &json_bytes(meta, &meta_path)?)
}

pub fn read_summary(path: &Path) -> Result<Summary, ReportError> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    serde_json::from_slice(&bytes).map_err(json_err(path))
}

/// Rebuilds the smoothed series of a run from `smoothed.csv` and the series
/// statistics in `summary.json`, in file order.
pub fn load_series(smoothed: &Path, summary: &Summary) -> Result<Vec<SeriesResult>, ReportError> {
    let rows = read_smoothed_csv(smoothed)?;
    let mut out: Vec<SeriesResult> = Vec::new();
    for row in rows {
        let same = out
            .last()
            .is_some_and(|r| r.metric == row.metric && r.sequence == row.sequence);
        if !same {
            let stats = summary
                .series
                .iter()
                .find(|s| s.metric == row.metric && s.sequence == row.sequence)
                .ok_or_else(|| ReportError::Inconsistent {
                    path: smoothed.display().to_string(),
                    message: format!(
                        "no statistics for {} in sequence {}",
                        row.metric, row.sequence
                    ),
                })?;
            out.push(SeriesResult {
                sequence: row.sequence,
                metric: row.metric,
                series: SmoothedSeries {
                    eval_x: Vec::new(),
                    fit: Vec::new(),
                    se: Vec::new(),
                    lower: Vec::new(),
                    upper: Vec::new(),
                    cond_var: Vec::new(),
                    params: stats.params,
                    seq_mean: stats.seq_mean,
                    seq_var: stats.seq_var,
                    df: stats.df,
                    sigma2: stats.sigma2,
                },
            });
        }
        let s = &mut out.last_mut().expect("pushed above").series;
        s.eval_x.push(row.x);
        s.fit.push(row.fit);
        s.se.push(row.se);
        s.lower.push(row.lower);
        s.upper.push(row.upper);
        s.cond_var.push(row.cond_var);
    }
    Ok(out)
}

/// Per-record metric values read back from `metrics.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricValues {
    pub record_id: u32,
    pub sentiment_count: f64,
    pub nrc_score: f64,
    pub bing_score: f64,
}

impl MetricValues {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::SentimentCount => self.sentiment_count,
            Metric::NrcScore => self.nrc_score,
            Metric::BingScore => self.bing_score,
        }
    }
}

pub fn read_metrics_csv(path: &Path) -> Result<Vec<MetricValues>, ReportError> {
    let mut reader = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let header = reader.headers().map_err(csv_err(path))?.clone();
    if header.iter().ne(METRICS_HEADER) {
        return Err(ReportError::Inconsistent {
            path: path.display().to_string(),
            message: "unexpected header".to_string(),
        });
    }
    let bad = |row: usize| ReportError::Inconsistent {
        path: path.display().to_string(),
        message: format!("malformed value in row {row}"),
    };
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let num = |col: usize| {
            rec.get(col)
                .and_then(|v| v.parse::<f64>().ok())
                .ok_or_else(|| bad(i + 2))
        };
        out.push(MetricValues {
            record_id: rec
                .get(0)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad(i + 2))?,
            sentiment_count: num(11)?,
            nrc_score: num(12)?,
            bing_score: num(13)?,
        });
    }
    Ok(out)
}

/// Everything the plot command reads from an analysis directory.
#[derive(Debug, Clone)]
pub struct SavedAnalysis {
    pub summary: Summary,
    pub series: Vec<SeriesResult>,
    pub metrics: Option<Vec<MetricValues>>,
    pub flags: Option<Vec<RecordFlag>>,
}

/// Loads an analysis directory. `smoothed.csv` and `summary.json` are
/// required; metrics and flags are used when present.
pub fn load_analysis_dir(dir: &Path) -> Result<SavedAnalysis, ReportError> {
    let summary = read_summary(&dir.join(SUMMARY_FILE))?;
    let series = load_series(&dir.join(SMOOTHED_FILE), &summary)?;
    let optional = |name: &str| -> Option<PathBuf> { Some(dir.join(name)).filter(|p| p.is_file()) };
    let metrics = optional(METRICS_FILE)
        .map(|p| read_metrics_csv(&p))
        .transpose()?;
    let flags = optional(FLAGS_FILE)
        .map(|p| read_flags_csv(&p))
        .transpose()?;
    Ok(SavedAnalysis {
        summary,
        series,
        metrics,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn atomic_write_replaces_and_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(fs::read(&path).unwrap(), b"two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn empty_flags_keep_header() {
        let mut buf = Vec::new();
        write_flags_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "record_id,metric,value,fit,lower,upper,status\n"
        );
    }

    #[test]
    fn flags_round_trip() {
        let flags = vec![RecordFlag {
            record_id: 4,
            metric: Metric::NrcScore,
            value: -1.0,
            fit: 0.1,
            lower: -0.25,
            upper: 0.45,
            status: FlagStatus::Below,
        }];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(FLAGS_FILE);
        write_with(&path, |b| write_flags_csv(&flags, b)).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "record_id,metric,value,fit,lower,upper,status\n4,nrc_score,-1.0,0.1,-0.25,0.45,below\n");
        assert_eq!(read_flags_csv(&path).unwrap(), flags);
    }
}
