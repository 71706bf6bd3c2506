//! Local weighted polynomial regression of a per-record metric on record
//! position, with pointwise standard errors, confidence bands and a local
//! conditional-variance estimate.
//!
//! For an evaluation point `x0` the `ceil(span · n)` nearest points form the
//! window. Each gets the tricube weight of its distance divided by the largest
//! distance in the window, and a weighted least-squares polynomial of the
//! requested degree is fitted; its value at `x0` is the conditional mean.
//! The estimate is linear in the responses, `fit = Σ l_i y_i`, so its standard
//! error is `σ̂ · sqrt(Σ l_i²)`. `σ̂²` is a single residual variance for the
//! whole series, `Σ r_i² / df` with `df = max(n - 1.25 (degree + 1) / span, 1)`.

mod kernel;
mod solve;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use kernel::EquivalentKernel;
pub use kernel::{tricube_weight, window_size};

#[derive(Debug, Error, PartialEq)]
pub enum SmoothError {
    #[error("invalid smoothing parameters: {0}")]
    InvalidParams(String),
    #[error("need at least {need} points to smooth, got {n}")]
    TooFewPoints { n: usize, need: usize },
    #[error("singular local fit at x0 = {x0}")]
    Singular { x0: f64 },
    #[error("series x values must be finite and sorted ascending (violated at index {index})")]
    Unsorted { index: usize },
    #[error("non-finite y value at index {index}")]
    NonFinite { index: usize },
    #[error("x = {x} outside evaluated range [{min}, {max}]")]
    OutOfRange { x: f64, min: f64, max: f64 },
}

/// One observation: `x` is the conditioning position, `y` the metric value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub x: f64,
    pub y: f64,
}

impl SeriesPoint {
    pub fn new(x: f64, y: f64) -> Self {
        SeriesPoint { x, y }
    }
}

/// Where the smoothed curve is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Grid {
    /// Evenly spaced points from the smallest to the largest x.
    Points(usize),
    /// Every distinct data x.
    AllX,
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Points(m) => write!(f, "{m}"),
            Grid::AllX => f.write_str("all"),
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" | "all-x" => Ok(Grid::AllX),
            _ => s
                .parse::<usize>()
                .map(Grid::Points)
                .map_err(|_| format!("grid must be a point count or `all`, got `{s}`")),
        }
    }
}

impl From<Grid> for String {
    fn from(g: Grid) -> String {
        g.to_string()
    }
}

impl TryFrom<String> for Grid {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothParams {
    pub span: f64,
    pub degree: usize,
    pub ci_level: f64,
    pub grid: Grid,
}

impl Default for SmoothParams {
    fn default() -> Self {
        SmoothParams {
            span: 0.75,
            degree: 2,
            ci_level: 0.95,
            grid: Grid::Points(80),
        }
    }
}

impl SmoothParams {
    pub fn validate(&self) -> Result<(), SmoothError> {
        let bad = |m: String| Err(SmoothError::InvalidParams(m));
        if !(self.span > 0.0 && self.span <= 1.0) {
            return bad(format!("span must lie in (0, 1], got {}", self.span));
        }
        if self.degree > 2 {
            return bad(format!("degree must be 0, 1 or 2, got {}", self.degree));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return bad(format!(
                "confidence level must lie in (0, 1), got {}",
                self.ci_level
            ));
        }
        if let Grid::Points(m) = self.grid {
            if m < 2 {
                return bad(format!("grid needs at least 2 points, got {m}"));
            }
        }
        Ok(())
    }

    /// Residual degrees of freedom for a series of `n` points.
    pub fn residual_df(&self, n: usize) -> f64 {
        (n as f64 - 1.25 * (self.degree as f64 + 1.0) / self.span).max(1.0)
    }
}

/// The smoothed conditional mean of one series and everything derived from it.
/// All per-point vectors share the length of `eval_x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothedSeries {
    pub eval_x: Vec<f64>,
    pub fit: Vec<f64>,
    pub se: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub cond_var: Vec<f64>,
    pub params: SmoothParams,
    pub seq_mean: f64,
    pub seq_var: f64,
    pub df: f64,
    pub sigma2: f64,
}

/// A single local estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFit {
    pub fit: f64,
    pub se: f64,
}

/// Validated, split-out series shared by the fitting routines.
struct Prepared {
    xs: Vec<f64>,
    ys: Vec<f64>,
    k: usize,
    params: SmoothParams,
}

impl Prepared {
    fn new(points: &[SeriesPoint], params: &SmoothParams) -> Result<Self, SmoothError> {
        params.validate()?;
        let need = params.degree + 2;
        if points.len() < need {
            return Err(SmoothError::TooFewPoints {
                n: points.len(),
                need,
            });
        }
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || (i > 0 && p.x < points[i - 1].x) {
                return Err(SmoothError::Unsorted { index: i });
            }
            if !p.y.is_finite() {
                return Err(SmoothError::NonFinite { index: i });
            }
        }
        let n = points.len();
        let k = window_size(params.span, n);
        if k < params.degree + 1 {
            return Err(SmoothError::InvalidParams(format!(
                "window of {k} points cannot support degree {}",
                params.degree
            )));
        }
        Ok(Prepared {
            xs: points.iter().map(|p| p.x).collect(),
            ys: points.iter().map(|p| p.y).collect(),
            k,
            params: *params,
        })
    }

    fn kernel(&self, x0: f64) -> Result<EquivalentKernel, SmoothError> {
        EquivalentKernel::build(&self.xs, x0, self.k, self.params.degree)
            .ok_or(SmoothError::Singular { x0 })
    }

    /// Global residual variance from fits at every data x.
    fn residual_variance(&self) -> Result<f64, SmoothError> {
        let fits = first_error(
            self.xs
                .par_iter()
                .map(|&x| Ok(self.kernel(x)?.apply(&self.ys)))
                .collect(),
        )?;
        let rss: f64 = self
            .ys
            .iter()
            .zip(&fits)
            .map(|(y, f)| (y - f) * (y - f))
            .sum();
        Ok(rss / self.params.residual_df(self.xs.len()))
    }

    fn grid(&self) -> Vec<f64> {
        let (min, max) = (self.xs[0], self.xs[self.xs.len() - 1]);
        match self.params.grid {
            _ if min == max => vec![min],
            Grid::Points(m) => {
                let step = (max - min) / (m - 1) as f64;
                let mut g: Vec<f64> = (0..m).map(|j| min + step * j as f64).collect();
                g[m - 1] = max;
                g
            }
            Grid::AllX => {
                let mut g = self.xs.clone();
                g.dedup();
                g
            }
        }
    }
}

/// Collects in order and reports the first error by position, so failures are
/// deterministic under parallel evaluation.
fn first_error<T>(results: Vec<Result<T, SmoothError>>) -> Result<Vec<T>, SmoothError> {
    results.into_iter().collect()
}

/// Fits the local polynomial at `x0` and returns the estimate with its
/// standard error.
pub fn local_fit(
    points: &[SeriesPoint],
    x0: f64,
    params: &SmoothParams,
) -> Result<LocalFit, SmoothError> {
    let prepared = Prepared::new(points, params)?;
    let sigma2 = prepared.residual_variance()?;
    let kernel = prepared.kernel(x0)?;
    Ok(LocalFit {
        fit: kernel.apply(&prepared.ys),
        se: (sigma2 * kernel.norm_sq()).sqrt(),
    })
}

/// Two-sided Student-t critical value for `ci_level` at `df` degrees of freedom.
pub fn t_critical(ci_level: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1 is always valid");
    dist.inverse_cdf(1.0 - (1.0 - ci_level) / 2.0)
}

/// Smooths a whole series on the configured grid.
pub fn smooth_series(
    points: &[SeriesPoint],
    params: &SmoothParams,
) -> Result<SmoothedSeries, SmoothError> {
    let prepared = Prepared::new(points, params)?;
    let n = prepared.xs.len();
    let sigma2 = prepared.residual_variance()?;
    let df = params.residual_df(n);
    let t = t_critical(params.ci_level, df);

    let eval_x = prepared.grid();
    let kernels = first_error(eval_x.par_iter().map(|&x0| prepared.kernel(x0)).collect())?;
    let fit: Vec<f64> = kernels.iter().map(|k| k.apply(&prepared.ys)).collect();
    let se: Vec<f64> = kernels
        .iter()
        .map(|k| (sigma2 * k.norm_sq()).sqrt())
        .collect();
    let lower = fit.iter().zip(&se).map(|(f, s)| f - t * s).collect();
    let upper = fit.iter().zip(&se).map(|(f, s)| f + t * s).collect();

    // Residual of each observation against the fit interpolated at its x.
    let residuals: Vec<f64> = prepared
        .xs
        .iter()
        .zip(&prepared.ys)
        .map(|(&x, &y)| Ok(y - interpolate(&eval_x, &fit, x)?))
        .collect::<Result<_, SmoothError>>()?;
    let cond_var = kernels
        .iter()
        .map(|k| {
            let local = &residuals[k.window.clone()];
            let total: f64 = k.weights.iter().sum();
            if total > 0.0 {
                k.weights
                    .iter()
                    .zip(local)
                    .map(|(w, r)| w * r * r)
                    .sum::<f64>()
                    / total
            } else {
                0.0
            }
        })
        .collect();

    let seq_mean = prepared.ys.iter().sum::<f64>() / n as f64;
    let seq_var = prepared
        .ys
        .iter()
        .map(|y| (y - seq_mean).powi(2))
        .sum::<f64>()
        / n as f64;

    Ok(SmoothedSeries {
        eval_x,
        fit,
        se,
        lower,
        upper,
        cond_var,
        params: *params,
        seq_mean,
        seq_var,
        df,
        sigma2,
    })
}

/// Linear interpolation of `values` over the sorted knots `xs`.
pub fn interpolate(xs: &[f64], values: &[f64], x: f64) -> Result<f64, SmoothError> {
    let (min, max) = (xs[0], xs[xs.len() - 1]);
    if !(x >= min && x <= max) {
        return Err(SmoothError::OutOfRange { x, min, max });
    }
    let j = xs.partition_point(|&g| g < x);
    if xs[j] == x {
        return Ok(values[j]);
    }
    let (x0, x1) = (xs[j - 1], xs[j]);
    let (v0, v1) = (values[j - 1], values[j]);
    Ok(v0 + (v1 - v0) * (x - x0) / (x1 - x0))
}

/// Conditional mean at an arbitrary `x` inside the evaluated range.
pub fn conditional_mean_at(series: &SmoothedSeries, x: f64) -> Result<f64, SmoothError> {
    interpolate(&series.eval_x, &series.fit, x)
}

impl SmoothedSeries {
    pub fn len(&self) -> usize {
        self.eval_x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eval_x.is_empty()
    }

    /// The fit as reported for a non-negative metric.
    pub fn clamped_fit(&self) -> Vec<f64> {
        self.fit.iter().map(|&f| f.max(0.0)).collect()
    }

    /// `(fit, lower, upper)` interpolated at `x`.
    pub fn band_at(&self, x: f64) -> Result<(f64, f64, f64), SmoothError> {
        Ok((
            interpolate(&self.eval_x, &self.fit, x)?,
            interpolate(&self.eval_x, &self.lower, x)?,
            interpolate(&self.eval_x, &self.upper, x)?,
        ))
    }

    pub fn cond_var_at(&self, x: f64) -> Result<f64, SmoothError> {
        interpolate(&self.eval_x, &self.cond_var, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(ys: &[f64]) -> Vec<SeriesPoint> {
        ys.iter()
            .enumerate()
            .map(|(i, &y)| SeriesPoint::new(i as f64 + 1.0, y))
            .collect()
    }

    fn params(span: f64, degree: usize) -> SmoothParams {
        SmoothParams {
            span,
            degree,
            ..SmoothParams::default()
        }
    }

    #[test]
    fn constant_series_is_reproduced_exactly() {
        let pts = series(&[0.1; 30]);
        for degree in 0..=2 {
            let s = smooth_series(&pts, &params(0.5, degree)).unwrap();
            assert!(s.fit.iter().all(|&f| f == 0.1));
            assert!(s.se.iter().all(|&e| e == 0.0));
            assert!(s.cond_var.iter().all(|&v| v == 0.0));
            assert_eq!(s.lower, s.upper);
            let lf = local_fit(&pts, 7.5, &params(0.5, degree)).unwrap();
            assert_eq!(lf, LocalFit { fit: 0.1, se: 0.0 });
        }
    }

    #[test]
    fn linear_series_is_reproduced() {
        let pts: Vec<SeriesPoint> = (1..=40)
            .map(|i| SeriesPoint::new(f64::from(i), 2.0 * f64::from(i) + 1.0))
            .collect();
        for degree in 1..=2 {
            for span in [0.2, 0.5, 1.0] {
                let s = smooth_series(&pts, &params(span, degree)).unwrap();
                for (x, f) in s.eval_x.iter().zip(&s.fit) {
                    assert!(
                        (f - (2.0 * x + 1.0)).abs() < 1e-9,
                        "deg {degree} span {span}: {f} at {x}"
                    );
                }
                assert!(s.cond_var.iter().all(|&v| v < 1e-18));
            }
        }
        let s = smooth_series(
            &pts,
            &SmoothParams {
                grid: Grid::AllX,
                degree: 1,
                ..SmoothParams::default()
            },
        )
        .unwrap();
        assert!(s.cond_var.iter().all(|&v| v < 1e-18));
    }

    #[test]
    fn band_contains_fit() {
        let ys: Vec<f64> = (0..60).map(|i| ((i * 7919) % 13) as f64 / 3.0).collect();
        let s = smooth_series(&series(&ys), &SmoothParams::default()).unwrap();
        assert_eq!(s.len(), 80);
        for i in 0..s.len() {
            assert!(s.lower[i] <= s.fit[i] && s.fit[i] <= s.upper[i]);
            assert!(s.se[i] >= 0.0 && s.cond_var[i] >= 0.0);
        }
        assert_eq!(s.eval_x[0], 1.0);
        assert_eq!(s.eval_x[79], 60.0);
    }

    #[test]
    fn too_few_points_and_bad_params() {
        assert_eq!(
            smooth_series(&series(&[1.0, 2.0, 3.0]), &params(1.0, 2)).unwrap_err(),
            SmoothError::TooFewPoints { n: 3, need: 4 }
        );
        assert!(matches!(
            smooth_series(&series(&[1.0; 10]), &params(0.0, 1)),
            Err(SmoothError::InvalidParams(_))
        ));
        assert!(matches!(
            smooth_series(&series(&[1.0; 10]), &params(0.5, 3)),
            Err(SmoothError::InvalidParams(_))
        ));
        let pts = vec![
            SeriesPoint::new(2.0, 1.0),
            SeriesPoint::new(1.0, 1.0),
            SeriesPoint::new(3.0, 1.0),
        ];
        assert!(matches!(
            smooth_series(&pts, &params(1.0, 0)),
            Err(SmoothError::Unsorted { index: 1 })
        ));
    }

    #[test]
    fn degenerate_window_names_x0() {
        let pts = vec![SeriesPoint::new(5.0, 1.0); 6];
        let err = local_fit(&pts, 5.0, &params(1.0, 1)).unwrap_err();
        assert_eq!(err, SmoothError::Singular { x0: 5.0 });
        assert!(err.to_string().contains("x0 = 5"));
    }

    #[test]
    fn interpolation() {
        let xs = [1.0, 2.0, 3.0];
        let vs = [2.0, 4.0, 10.0];
        assert_eq!(interpolate(&xs, &vs, 2.0).unwrap(), 4.0);
        assert_eq!(interpolate(&xs, &vs, 1.5).unwrap(), 3.0);
        assert!(matches!(
            interpolate(&xs, &vs, 3.5),
            Err(SmoothError::OutOfRange { .. })
        ));
        assert!(interpolate(&xs, &vs, f64::NAN).is_err());
    }

    #[test]
    fn grid_parses() {
        assert_eq!("all".parse::<Grid>(), Ok(Grid::AllX));
        assert_eq!("80".parse::<Grid>(), Ok(Grid::Points(80)));
        assert!("x".parse::<Grid>().is_err());
        let json = serde_json::to_string(&SmoothParams::default()).unwrap();
        assert_eq!(
            json,
            r#"{"span":0.75,"degree":2,"ci_level":0.95,"grid":"80"}"#
        );
    }

    #[test]
    fn t_critical_matches_tables() {
        // Standard t-table values.
        assert!((t_critical(0.95, 10.0) - 2.228138851986).abs() < 1e-6);
        assert!((t_critical(0.99, 5.0) - 4.032142983557).abs() < 1e-6);
    }

    #[test]
    fn locality() {
        // With span 0.2 on 50 points the window at x0 = 5 never reaches x = 40.
        let mut ys: Vec<f64> = (0..50).map(|i| (i % 5) as f64).collect();
        let p = SmoothParams {
            grid: Grid::AllX,
            ..params(0.2, 2)
        };
        let before = EquivalentKernel::build(
            &(1..=50).map(f64::from).collect::<Vec<_>>(),
            5.0,
            window_size(0.2, 50),
            2,
        )
        .unwrap()
        .apply(&ys);
        ys[39] += 100.0;
        let s = smooth_series(&series(&ys), &p).unwrap();
        assert_eq!(conditional_mean_at(&s, 5.0).unwrap(), before);
    }

    proptest! {
        #[test]
        fn interpolation_is_monotone_between_knots(
            steps in proptest::collection::vec(0.0f64..5.0, 2..20),
            probes in proptest::collection::vec(0.0f64..1.0, 2..10),
        ) {
            let values: Vec<f64> = steps.iter().scan(0.0, |acc, s| { *acc += s; Some(*acc) }).collect();
            let xs: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
            let mut probes: Vec<f64> = probes.iter().map(|p| p * (xs.len() - 1) as f64).collect();
            probes.sort_by(f64::total_cmp);
            let got: Vec<f64> = probes.iter().map(|&x| interpolate(&xs, &values, x).unwrap()).collect();
            prop_assert!(got.windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn raising_ci_never_narrows(ys in proptest::collection::vec(0.0f64..6.0, 10..40)) {
            let lo = smooth_series(&series(&ys), &SmoothParams { ci_level: 0.90, ..SmoothParams::default() }).unwrap();
            let hi = smooth_series(&series(&ys), &SmoothParams { ci_level: 0.99, ..SmoothParams::default() }).unwrap();
            for i in 0..lo.len() {
                prop_assert!(hi.lower[i] <= lo.lower[i] && hi.upper[i] >= lo.upper[i]);
            }
        }
    }
}
