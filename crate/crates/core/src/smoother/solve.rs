//! Dense solve for the small normal systems of a local polynomial fit.

/// Relative pivot threshold below which a system is treated as singular.
const PIVOT_TOLERANCE: f64 = 1e-11;

/// Solves `a · x = b` for a row-major `m × m` matrix by Gaussian elimination
/// with full pivoting. Returns `None` when the matrix is (numerically)
/// singular.
pub(crate) fn solve_full_pivot(mut a: Vec<f64>, mut b: Vec<f64>, m: usize) -> Option<Vec<f64>> {
    debug_assert_eq!(a.len(), m * m);
    debug_assert_eq!(b.len(), m);

    let scale = a.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let tolerance = PIVOT_TOLERANCE * scale;
    // col_of[j] = original unknown stored in column j
    let mut col_of: Vec<usize> = (0..m).collect();

    for k in 0..m {
        let (mut pr, mut pc, mut best) = (k, k, 0.0);
        for r in k..m {
            for c in k..m {
                let v = a[r * m + c].abs();
                if v > best {
                    (pr, pc, best) = (r, c, v);
                }
            }
        }
        if best <= tolerance {
            return None;
        }
        if pr != k {
            for c in 0..m {
                a.swap(k * m + c, pr * m + c);
            }
            b.swap(k, pr);
        }
        if pc != k {
            for r in 0..m {
                a.swap(r * m + k, r * m + pc);
            }
            col_of.swap(k, pc);
        }
        let pivot = a[k * m + k];
        for r in k + 1..m {
            let factor = a[r * m + k] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in k..m {
                a[r * m + c] -= factor * a[k * m + c];
            }
            b[r] -= factor * b[k];
        }
    }

    let mut z = vec![0.0; m];
    for k in (0..m).rev() {
        let tail: f64 = (k + 1..m).map(|c| a[k * m + c] * z[c]).sum();
        z[k] = (b[k] - tail) / a[k * m + k];
    }
    let mut x = vec![0.0; m];
    for (j, &orig) in col_of.iter().enumerate() {
        x[orig] = z[j];
    }
    Some(x)
}
