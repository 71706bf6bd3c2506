//! Corpus loading and even temporal segmentation.
//!
//! Record order is file row order. Ids are 1-based ordinals assigned at load
//! time and never change afterwards; timestamps are carried through but are
//! never used for ordering.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed row {row}: {message}")]
    MalformedRow {
        path: String,
        row: usize,
        message: String,
    },
    #[error("{path}: missing required column `{column}`")]
    MissingColumn { path: String, column: &'static str },
    #[error("{0}: zero records")]
    ZeroRecords(String),
    #[error("sequence count {k} out of range 1..={n}")]
    SequenceCount { k: usize, n: usize },
    #[error("expected {expected} sequence labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("unknown corpus format `{0}` (expected jsonl or csv)")]
    UnknownFormat(String),
}

/// One corpus entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TextRecord {
    pub id: u32,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// Guesses the format from a file extension, defaulting to JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "ndjson" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(CorpusError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorpusFormat::Jsonl => "jsonl",
            CorpusFormat::Csv => "csv",
        })
    }
}

/// An ordered, immutable collection of records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    records: Vec<TextRecord>,
    source_path: String,
}

#[derive(Deserialize)]
struct JsonRow {
    text: String,
    #[serde(default)]
    timestamp: Option<String>,
}

impl Corpus {
    /// Builds a corpus from texts in order, assigning ids 1..=n.
    pub fn from_texts<I, S>(texts: I, source_path: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let rows = texts.into_iter().map(|t| (t.into(), None));
        Self::from_rows(rows, source_path)
    }

    pub(crate) fn from_rows<I>(rows: I, source_path: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = (String, Option<String>)>,
    {
        let records = rows
            .into_iter()
            .enumerate()
            .map(|(i, (text, timestamp))| TextRecord {
                id: (i + 1) as u32,
                text,
                timestamp,
            })
            .collect();
        Corpus {
            records,
            source_path: source_path.into(),
        }
    }

    pub fn records(&self) -> &[TextRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    /// Looks up a record by its 1-based id.
    pub fn get(&self, id: u32) -> Option<&TextRecord> {
        (id as usize)
            .checked_sub(1)
            .and_then(|i| self.records.get(i))
    }

    /// Splits this corpus into `k` contiguous, evenly sized sequences.
    pub fn split(
        &self,
        k: usize,
        labels: Option<&[String]>,
    ) -> Result<Vec<SequenceSlice>, CorpusError> {
        split_sequences(self.len(), k, labels)
    }

    /// Writes one JSON object per record, in order.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            text: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            timestamp: Option<&'a str>,
        }
        for r in &self.records {
            let row = Row {
                text: &r.text,
                timestamp: r.timestamp.as_deref(),
            };
            serde_json::to_writer(&mut out, &row)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Writes a `text,timestamp` CSV with RFC-4180 quoting.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["text", "timestamp"])?;
        for r in &self.records {
            w.write_record([r.text.as_str(), r.timestamp.as_deref().unwrap_or("")])?;
        }
        w.flush()
    }
}

/// Loads a corpus from `path` in the declared format.
pub fn load_corpus(path: impl AsRef<Path>, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CorpusError::Io {
        path: name.clone(),
        source,
    })?;
    parse_corpus(&bytes, format, &name)
}

/// Parses corpus bytes. `source` is used for provenance and error messages.
pub fn parse_corpus(
    bytes: &[u8],
    format: CorpusFormat,
    source: &str,
) -> Result<Corpus, CorpusError> {
    if bytes.iter().all(u8::is_ascii_whitespace) {
        return Err(CorpusError::ZeroRecords(source.to_string()));
    }
    let rows = match format {
        CorpusFormat::Jsonl => parse_jsonl(bytes, source)?,
        CorpusFormat::Csv => parse_csv(bytes, source)?,
    };
    if rows.is_empty() {
        return Err(CorpusError::ZeroRecords(source.to_string()));
    }
    Ok(Corpus::from_rows(rows, source))
}

fn parse_jsonl(bytes: &[u8], source: &str) -> Result<Vec<(String, Option<String>)>, CorpusError> {
    let malformed = |row: usize, message: String| CorpusError::MalformedRow {
        path: source.to_string(),
        row,
        message,
    };
    let mut rows = Vec::new();
    for (i, line) in bytes.split(|&b| b == b'\n').enumerate() {
        let row = i + 1;
        let line =
            std::str::from_utf8(line).map_err(|e| malformed(row, format!("invalid UTF-8: {e}")))?;
        let line = line.trim();
        // Blank lines carry no record.
        if line.is_empty() {
            continue;
        }
        let parsed: JsonRow =
            serde_json::from_str(line).map_err(|e| malformed(row, e.to_string()))?;
        rows.push((parsed.text, parsed.timestamp));
    }
    Ok(rows)
}

fn parse_csv(bytes: &[u8], source: &str) -> Result<Vec<(String, Option<String>)>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    let headers = reader.headers().map_err(|e| CorpusError::MalformedRow {
        path: source.to_string(),
        row: 1,
        message: e.to_string(),
    })?;
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let text_col = column("text").ok_or_else(|| CorpusError::MissingColumn {
        path: source.to_string(),
        column: "text",
    })?;
    let ts_col = column("timestamp");

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // Row 1 is the header.
        let row = i + 2;
        let record = record.map_err(|e| CorpusError::MalformedRow {
            path: source.to_string(),
            row,
            message: e.to_string(),
        })?;
        let text = record
            .get(text_col)
            .ok_or_else(|| CorpusError::MalformedRow {
                path: source.to_string(),
                row,
                message: "missing `text` field".to_string(),
            })?;
        let timestamp = ts_col
            .and_then(|c| record.get(c))
            .filter(|s| !s.is_empty())
            .map(str::to_string);
        rows.push((text.to_string(), timestamp));
    }
    Ok(rows)
}

/// A contiguous run of records forming one temporal phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSlice {
    pub index: usize,
    pub start_id: u32,
    pub end_id: u32,
    pub label: String,
}

impl SequenceSlice {
    pub fn len(&self) -> usize {
        (self.end_id - self.start_id + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, id: u32) -> bool {
        (self.start_id..=self.end_id).contains(&id)
    }

    /// Zero-based index range into the corpus record list.
    pub fn range(&self) -> std::ops::Range<usize> {
        (self.start_id - 1) as usize..self.end_id as usize
    }
}

/// Splits `n` records into `k` contiguous slices whose sizes differ by at most
/// one. With `r = n mod k`, the first `r` slices carry the extra record.
///
/// Labels default to `"1"`, `"2"`, ... when not given.
pub fn split_sequences(
    n: usize,
    k: usize,
    labels: Option<&[String]>,
) -> Result<Vec<SequenceSlice>, CorpusError> {
    if k == 0 || k > n {
        return Err(CorpusError::SequenceCount { k, n });
    }
    if let Some(labels) = labels {
        if labels.len() != k {
            return Err(CorpusError::LabelCount {
                expected: k,
                got: labels.len(),
            });
        }
    }
    let base = n / k;
    let extra = n % k;
    let mut start = 1usize;
    let slices = (0..k)
        .map(|i| {
            let size = base + usize::from(i < extra);
            let slice = SequenceSlice {
                index: i + 1,
                start_id: start as u32,
                end_id: (start + size - 1) as u32,
                label: labels.map_or_else(|| (i + 1).to_string(), |l| l[i].clone()),
            };
            start += size;
            slice
        })
        .collect();
    Ok(slices)
}
