//! Brute-force reference computations, written independently of the library.
//!
//! The local fit solves the weighted normal equations in closed form by
//! cofactor expansion; windows come from a full sort by distance.

use std::collections::BTreeMap;

pub fn window_len(span: f64, n: usize) -> usize {
    ((span * n as f64 - 1e-9).ceil() as usize).clamp(1, n)
}

/// Indices of the `k` points nearest to `x0`, ties broken by lower index.
pub fn window(xs: &[f64], x0: f64, k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| {
        (xs[a] - x0)
            .abs()
            .partial_cmp(&(xs[b] - x0).abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    idx.truncate(k);
    idx
}

fn weights(xs: &[f64], x0: f64, idx: &[usize]) -> Vec<f64> {
    let h = idx.iter().map(|&i| (xs[i] - x0).abs()).fold(0.0, f64::max);
    idx.iter()
        .map(|&i| {
            if h == 0.0 {
                return 1.0;
            }
            let r = (xs[i] - x0).abs() / h;
            if r >= 1.0 {
                0.0
            } else {
                let c = 1.0 - r * r * r;
                c * c * c
            }
        })
        .collect()
}

fn det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unreachable!("degree at most 2"),
    }
}

fn minor(m: &[Vec<f64>], row: usize, col: usize) -> Vec<Vec<f64>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, v)| {
            v.iter()
                .enumerate()
                .filter(|(c, _)| *c != col)
                .map(|(_, x)| *x)
                .collect()
        })
        .collect()
}

/// First row of the inverse of a symmetric matrix via cofactors.
fn inverse_first_row(m: &[Vec<f64>]) -> Vec<f64> {
    let d = det(m);
    let p = m.len();
    if p == 1 {
        return vec![1.0 / d];
    }
    (0..p)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            // (M^-1)[0][j] = C[j][0] / det
            sign * det(&minor(m, j, 0)) / d
        })
        .collect()
}

/// Equivalent-kernel weights of the local fit at `x0`, one per data point.
/// `None` when fewer than `degree + 1` distinct positions carry weight.
pub fn kernel(xs: &[f64], x0: f64, span: f64, degree: usize) -> Option<Vec<f64>> {
    let idx = window(xs, x0, window_len(span, xs.len()));
    let w = weights(xs, x0, &idx);
    let mut live: Vec<f64> = idx
        .iter()
        .zip(&w)
        .filter(|(_, &w)| w > 0.0)
        .map(|(&i, _)| xs[i])
        .collect();
    live.sort_by(|a, b| a.partial_cmp(b).unwrap());
    live.dedup();
    if live.len() <= degree {
        return None;
    }
    let lo = idx.iter().map(|&i| xs[i]).fold(f64::INFINITY, f64::min);
    let hi = idx.iter().map(|&i| xs[i]).fold(f64::NEG_INFINITY, f64::max);
    let scale = if hi > lo { (hi - lo) / 2.0 } else { 1.0 };
    let p = degree + 1;
    let basis = |x: f64| -> Vec<f64> {
        let u = (x - x0) / scale;
        (0..p).map(|j| u.powi(j as i32)).collect()
    };
    let mut m = vec![vec![0.0; p]; p];
    for (&i, &wi) in idx.iter().zip(&w) {
        let b = basis(xs[i]);
        for r in 0..p {
            for c in 0..p {
                m[r][c] += wi * b[r] * b[c];
            }
        }
    }
    let row = inverse_first_row(&m);
    let mut l = vec![0.0; xs.len()];
    for (&i, &wi) in idx.iter().zip(&w) {
        let b = basis(xs[i]);
        l[i] = wi * row.iter().zip(&b).map(|(a, v)| a * v).sum::<f64>();
    }
    Some(l)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fits at every data position, `None` if any of them is singular.
pub fn data_fits(xs: &[f64], ys: &[f64], span: f64, degree: usize) -> Option<Vec<f64>> {
    xs.iter()
        .map(|&x| kernel(xs, x, span, degree).map(|l| dot(&l, ys)))
        .collect()
}

pub fn residual_df(n: usize, span: f64, degree: usize) -> f64 {
    (n as f64 - 1.25 * (degree + 1) as f64 / span).max(1.0)
}

/// Residual sum of squares over the residual degrees of freedom.
pub fn sigma2(ys: &[f64], fits: &[f64], span: f64, degree: usize) -> f64 {
    let rss: f64 = ys.iter().zip(fits).map(|(y, f)| (y - f).powi(2)).sum();
    rss / residual_df(ys.len(), span, degree)
}

pub fn se(xs: &[f64], sigma2: f64, span: f64, degree: usize, x0: f64) -> Option<f64> {
    let l = kernel(xs, x0, span, degree)?;
    Some((sigma2 * dot(&l, &l)).sqrt())
}

/// Tricube-weighted mean of squared residuals over the window at `x0`.
pub fn cond_var(xs: &[f64], ys: &[f64], fits: &[f64], span: f64, x0: f64) -> f64 {
    let idx = window(xs, x0, window_len(span, xs.len()));
    let w = weights(xs, x0, &idx);
    let num: f64 = idx
        .iter()
        .zip(&w)
        .map(|(&i, wi)| wi * (ys[i] - fits[i]).powi(2))
        .sum();
    num / w.iter().sum::<f64>()
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// A parsed lexicon: word to set of category names.
pub type WordTags = BTreeMap<String, Vec<String>>;

pub fn nrc_tags(text: &str) -> WordTags {
    let mut tags = WordTags::new();
    for line in text.lines() {
        let fields: Vec<&str> = line.trim_end_matches('\r').split('\t').collect();
        if fields.len() == 3 && fields[2] == "1" {
            tags.entry(fields[0].to_string())
                .or_default()
                .push(fields[1].to_string());
        }
    }
    tags
}

pub fn word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(';'))
        .map(str::to_string)
        .collect()
}

/// One pass over `record_id,position,word` rows producing the metrics table,
/// including rows of zeros for records without tokens.
pub fn tally_metrics(
    tokens_csv: &str,
    records: u32,
    nrc: &WordTags,
    positive: &[String],
    negative: &[String],
) -> String {
    const CATS: [&str; 10] = [
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
    ];
    let mut rows: Vec<([i64; 10], i64)> = vec![([0; 10], 0); records as usize + 1];
    for line in tokens_csv.lines().skip(1) {
        let mut parts = line.splitn(3, ',');
        let id: usize = parts.next().unwrap().parse().unwrap();
        let word = parts.nth(1).unwrap();
        if let Some(cats) = nrc.get(word) {
            for c in cats {
                let j = CATS.iter().position(|k| k == c).unwrap();
                rows[id].0[j] += 1;
            }
        }
        if positive.iter().any(|p| p == word) {
            rows[id].1 += 1;
        }
        if negative.iter().any(|n| n == word) {
            rows[id].1 -= 1;
        }
    }
    let mut out = String::from("record_id,");
    out.push_str(&CATS.join(","));
    out.push_str(",sentiment_count,nrc_score,bing_score\n");
    for (id, (counts, bing)) in rows.iter().enumerate().skip(1) {
        let (neg, pos) = (counts[8], counts[9]);
        let cells: Vec<String> = counts.iter().map(i64::to_string).collect();
        out.push_str(&format!(
            "{id},{},{},{},{}\n",
            cells.join(","),
            pos + neg,
            pos - neg,
            bing
        ));
    }
    out
}
