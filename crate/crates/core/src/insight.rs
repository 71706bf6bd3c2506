//! Analytic read-outs of smoothed series: per-sequence summaries, band
//! membership of individual records, slope extrema and agreement between the
//! two lexicons.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::SequenceSlice;
use crate::metrics::{Metric, RecordMetrics};
use crate::smoother::{SeriesPoint, SmoothedSeries};

#[derive(Debug, Error, PartialEq)]
pub enum InsightError {
    #[error("sequence {0} has no values")]
    EmptySlice(usize),
}

/// Series points for `metric` over the records of `slice`. The record id is
/// the conditioning position. With `skip_unmatched`, records without a
/// relevant lexicon match are left out.
pub fn series_points(
    slice: &SequenceSlice,
    metrics: &[RecordMetrics],
    metric: Metric,
    skip_unmatched: bool,
) -> Vec<SeriesPoint> {
    metrics[slice.range()]
        .iter()
        .filter(|m| !skip_unmatched || metric.matched(m))
        .map(|m| SeriesPoint::new(f64::from(m.record_id), metric.value(m)))
        .collect()
}

/// The fit as reported for `metric`: count fits are clamped at zero.
pub fn reported_fit(series: &SmoothedSeries, metric: Metric) -> Vec<f64> {
    if metric.is_count() {
        series.clamped_fit()
    } else {
        series.fit.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceSummary {
    pub sequence: usize,
    pub label: String,
    pub metric: Metric,
    pub n: usize,
    pub mean: f64,
    pub variance: f64,
    pub fit_min: f64,
    pub fit_max: f64,
    pub amplitude: f64,
}

/// Plain mean and population variance of `values` next to the range of the
/// reported fit.
pub fn summarize_sequence(
    slice: &SequenceSlice,
    metric: Metric,
    values: &[f64],
    series: &SmoothedSeries,
) -> Result<SequenceSummary, InsightError> {
    if values.is_empty() {
        return Err(InsightError::EmptySlice(slice.index));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let fit = reported_fit(series, metric);
    let fit_min = fit.iter().copied().fold(f64::INFINITY, f64::min);
    let fit_max = fit.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(SequenceSummary {
        sequence: slice.index,
        label: slice.label.clone(),
        metric,
        n: values.len(),
        mean,
        variance,
        fit_min,
        fit_max,
        amplitude: fit_max - fit_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagStatus {
    WithinBand,
    Above,
    Below,
}

impl FlagStatus {
    pub fn name(self) -> &'static str {
        match self {
            FlagStatus::WithinBand => "within_band",
            FlagStatus::Above => "above",
            FlagStatus::Below => "below",
        }
    }

    pub fn classify(value: f64, lower: f64, upper: f64) -> Self {
        if value > upper {
            FlagStatus::Above
        } else if value < lower {
            FlagStatus::Below
        } else {
            FlagStatus::WithinBand
        }
    }
}

/// Which interval a record is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandRule {
    /// The pointwise confidence band of the fit.
    #[default]
    Confidence,
    /// `fit ± k · sqrt(cond_var)`.
    KSigma(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordFlag {
    pub record_id: u32,
    pub metric: Metric,
    pub value: f64,
    pub fit: f64,
    pub lower: f64,
    pub upper: f64,
    pub status: FlagStatus,
}

/// One flag per record of `slice` that lies inside the fitted range.
pub fn flag_records(
    slice: &SequenceSlice,
    metrics: &[RecordMetrics],
    series: &SmoothedSeries,
    metric: Metric,
    rule: BandRule,
) -> Vec<RecordFlag> {
    metrics[slice.range()]
        .iter()
        .filter_map(|m| {
            let x = f64::from(m.record_id);
            let (fit, lower, upper) = match rule {
                BandRule::Confidence => series.band_at(x).ok()?,
                BandRule::KSigma(k) => {
                    let fit = crate::smoother::conditional_mean_at(series, x).ok()?;
                    let half = k * series.cond_var_at(x).ok()?.sqrt();
                    (fit, fit - half, fit + half)
                }
            };
            let value = metric.value(m);
            Some(RecordFlag {
                record_id: m.record_id,
                metric,
                value,
                fit,
                lower,
                upper,
                status: FlagStatus::classify(value, lower, upper),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

impl ExtremumKind {
    pub fn name(self) -> &'static str {
        match self {
            ExtremumKind::Maximum => "maximum",
            ExtremumKind::Minimum => "minimum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub sequence: usize,
    pub x: f64,
    pub fit: f64,
    pub kind: ExtremumKind,
}

/// Interior strict local extrema of `fit`. A plateau counts once, at its
/// first point; runs touching either end are ignored.
pub fn find_extrema(sequence: usize, xs: &[f64], fit: &[f64]) -> Vec<Extremum> {
    let n = fit.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut i = fit.iter().position(|&f| f != fit[0]).unwrap_or(n);
    while i < n {
        let mut j = i;
        while j + 1 < n && fit[j + 1] == fit[i] {
            j += 1;
        }
        if j == n - 1 {
            break;
        }
        let (left, here, right) = (fit[i - 1], fit[i], fit[j + 1]);
        let kind = if here > left && here > right {
            Some(ExtremumKind::Maximum)
        } else if here < left && here < right {
            Some(ExtremumKind::Minimum)
        } else {
            None
        };
        if let Some(kind) = kind {
            out.push(Extremum {
                sequence,
                x: xs[i],
                fit: here,
                kind,
            });
        }
        i = j + 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    /// Share of compared records whose two scores have the same sign; `None`
    /// when no record qualifies.
    pub agreement: Option<f64>,
    pub compared: usize,
    pub agreeing: usize,
    pub nrc_zero: usize,
    pub bing_zero: usize,
    pub zeros_as_agree: bool,
}

/// Sign agreement between NRC and Bing scores. By default only records where
/// both scores are nonzero are compared; with `zeros_as_agree` every record
/// is compared and zero counts as its own sign.
pub fn lexicon_agreement(metrics: &[RecordMetrics], zeros_as_agree: bool) -> AgreementReport {
    let mut compared = 0;
    let mut agreeing = 0;
    for m in metrics {
        let (a, b) = (m.nrc_score.signum(), m.bing_score.signum());
        if !zeros_as_agree && (a == 0 || b == 0) {
            continue;
        }
        compared += 1;
        agreeing += usize::from(a == b);
    }
    AgreementReport {
        agreement: (compared > 0).then(|| agreeing as f64 / compared as f64),
        compared,
        agreeing,
        nrc_zero: metrics.iter().filter(|m| m.nrc_score == 0).count(),
        bing_zero: metrics.iter().filter(|m| m.bing_score == 0).count(),
        zeros_as_agree,
    }
}
