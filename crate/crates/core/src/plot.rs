//! Static multi-panel SVG report: one row per sequence, one column per metric.
//!
//! Each panel holds the shaded confidence band, the raw record values, a
//! horizontal line at the plain sequence mean and the fitted curve. Output is
//! plain markup with fixed number formatting, so identical inputs give
//! identical bytes.

use std::collections::HashMap;
use std::fmt::Write;

use crate::insight::FlagStatus;
use crate::metrics::Metric;
use crate::report::SavedAnalysis;

const PANEL_W: f64 = 360.0;
const PANEL_H: f64 = 220.0;
const MARGIN_L: f64 = 52.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 30.0;
const HEADER_H: f64 = 36.0;

const STYLE: &str = "\
text{font-family:sans-serif;font-size:11px;fill:#333}\
.title{font-size:12px;font-weight:bold}\
.heading{font-size:15px;font-weight:bold}\
.frame{fill:none;stroke:#999;stroke-width:1}\
.band{fill:#bbb;fill-opacity:0.5;stroke:none}\
.obs{fill:#1f4e79;fill-opacity:0.35}\
.obs.above{fill:#c0392b;fill-opacity:0.9}\
.obs.below{fill:#d68910;fill-opacity:0.9}\
.mean{stroke:#2e7d32;stroke-width:1;stroke-dasharray:4 3}\
.fit{fill:none;stroke:#1565c0;stroke-width:1.8}";

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(c),
        }
    }
    out
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Maps data coordinates into a panel's plotting area.
struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        let span = self.x_max - self.x_min;
        if span > 0.0 {
            self.left + (x - self.x_min) / span * self.width
        } else {
            self.left + self.width / 2.0
        }
    }

    fn py(&self, y: f64) -> f64 {
        let span = self.y_max - self.y_min;
        self.top + self.height - (y - self.y_min) / span * self.height
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (-1.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 1.0, hi + 1.0);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

/// Renders the report. Raw points are drawn when per-record metrics are
/// available; flagged records are coloured by status.
pub fn render_svg(analysis: &SavedAnalysis) -> String {
    let slices = &analysis.summary.slices;
    let cols = Metric::ALL.len();
    let width = PANEL_W * cols as f64;
    let height = HEADER_H + PANEL_H * slices.len() as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(svg, "<style>{STYLE}</style>");
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text class="heading" x="12" y="22">Smoothed sentiment by sequence</text>"#
    );

    let statuses: HashMap<(u32, Metric), FlagStatus> = analysis
        .flags
        .iter()
        .flatten()
        .map(|f| ((f.record_id, f.metric), f.status))
        .collect();

    for (row, slice) in slices.iter().enumerate() {
        for (col, metric) in Metric::ALL.into_iter().enumerate() {
            let Some(result) = analysis
                .series
                .iter()
                .find(|r| r.sequence == slice.index && r.metric == metric)
            else {
                continue;
            };
            let s = &result.series;
            let fit = if metric.is_count() {
                s.clamped_fit()
            } else {
                s.fit.clone()
            };
            let mean = analysis
                .summary
                .summary_for(slice.index, metric)
                .map_or(s.seq_mean, |m| m.mean);
            let observed: Vec<(u32, f64)> = analysis
                .metrics
                .iter()
                .flatten()
                .filter(|m| slice.contains(m.record_id))
                .map(|m| (m.record_id, m.get(metric)))
                .collect();
            let status = |id: u32| statuses.get(&(id, metric)).copied();

            let (y_min, y_max) = padded_range(
                s.lower
                    .iter()
                    .chain(&s.upper)
                    .chain(&fit)
                    .copied()
                    .chain(observed.iter().map(|o| o.1))
                    .chain(std::iter::once(mean)),
            );
            let x_min = f64::from(slice.start_id).min(s.eval_x[0]);
            let x_max = f64::from(slice.end_id).max(s.eval_x[s.len() - 1]);
            let ox = PANEL_W * col as f64;
            let oy = HEADER_H + PANEL_H * row as f64;
            let frame = Frame {
                left: ox + MARGIN_L,
                top: oy + MARGIN_T,
                width: PANEL_W - MARGIN_L - MARGIN_R,
                height: PANEL_H - MARGIN_T - MARGIN_B,
                x_min,
                x_max,
                y_min,
                y_max,
            };

            let _ = writeln!(
                svg,
                r#"<g class="panel" data-sequence="{}" data-metric="{}">"#,
                slice.index,
                metric.name()
            );
            let _ = writeln!(
                svg,
                r#"<text class="title" x="{}" y="{}">Sequence {}: {}</text>"#,
                num(frame.left),
                num(oy + 18.0),
                escape(&slice.label),
                metric.name()
            );
            let _ = writeln!(
                svg,
                r#"<rect class="frame" x="{}" y="{}" width="{}" height="{}"/>"#,
                num(frame.left),
                num(frame.top),
                num(frame.width),
                num(frame.height)
            );

            let mut band = String::new();
            for (x, y) in s
                .eval_x
                .iter()
                .zip(&s.upper)
                .chain(s.eval_x.iter().zip(&s.lower).rev())
            {
                if !band.is_empty() {
                    band.push(' ');
                }
                let _ = write!(band, "{},{}", num(frame.px(*x)), num(frame.py(*y)));
            }
            let _ = writeln!(svg, r#"<polygon class="band" points="{band}"/>"#);

            for (id, value) in &observed {
                let class = match status(*id) {
                    Some(FlagStatus::Above) => "obs above",
                    Some(FlagStatus::Below) => "obs below",
                    _ => "obs",
                };
                let _ = writeln!(
                    svg,
                    r#"<circle class="{class}" cx="{}" cy="{}" r="1.6"/>"#,
                    num(frame.px(f64::from(*id))),
                    num(frame.py(*value))
                );
            }

            let _ = writeln!(
                svg,
                r#"<line class="mean" x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#,
                num(frame.left),
                num(frame.left + frame.width),
                y = num(frame.py(mean))
            );

            let mut d = String::new();
            for (i, (x, y)) in s.eval_x.iter().zip(&fit).enumerate() {
                let _ = write!(
                    d,
                    "{}{},{}",
                    if i == 0 { "M" } else { " L" },
                    num(frame.px(*x)),
                    num(frame.py(*y))
                );
            }
            let _ = writeln!(svg, r#"<path class="fit" d="{d}"/>"#);

            for v in [y_min, (y_min + y_max) / 2.0, y_max] {
                let _ = writeln!(
                    svg,
                    r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
                    num(frame.left - 4.0),
                    num(frame.py(v) + 4.0),
                    tick_label(v)
                );
            }
            for (v, anchor) in [(x_min, "start"), (x_max, "end")] {
                let _ = writeln!(
                    svg,
                    r#"<text x="{}" y="{}" text-anchor="{anchor}">{}</text>"#,
                    num(frame.px(v)),
                    num(frame.top + frame.height + 14.0),
                    tick_label(v)
                );
            }
            let _ = writeln!(svg, "</g>");
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_markup() {
        assert_eq!(escape(r#"<a & "b">"#), "&lt;a &amp; &quot;b&quot;&gt;");
    }

    #[test]
    fn formatting_is_fixed() {
        assert_eq!(num(-0.001), "0.00");
        assert_eq!(num(12.345), "12.35");
        assert_eq!(tick_label(1.5), "1.5");
        assert_eq!(tick_label(-0.0001), "0");
        assert_eq!(tick_label(3.0), "3");
    }

    #[test]
    fn flat_range_is_widened() {
        assert_eq!(padded_range([2.0, 2.0].into_iter()), (1.0, 3.0));
        assert_eq!(padded_range(std::iter::empty()), (-1.0, 1.0));
    }
}
