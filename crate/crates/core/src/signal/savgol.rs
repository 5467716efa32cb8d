//! Savitzky-Golay smoothing with polynomial boundary extrapolation.

use crate::error::{Error, Result};

/// Least-squares projection for one window: `rows[k][j]` is the weight of
/// sample `j` in the fitted coefficient of `u^k`, with `u` centered on the
/// window.
struct Projection {
    half: usize,
    rows: Vec<Vec<f64>>,
}

impl Projection {
    fn new(window: usize, poly_order: usize) -> Result<Self> {
        let half = window / 2;
        let m = poly_order + 1;
        let us: Vec<f64> = (0..window).map(|j| j as f64 - half as f64).collect();

        // Normal equations (VᵀV) A = Vᵀ, solved column by column.
        let mut gram = vec![vec![0.0; m]; m];
        for (r, row) in gram.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = us.iter().map(|u| u.powi((r + c) as i32)).sum();
            }
        }
        let mut rows = vec![vec![0.0; window]; m];
        for (j, u) in us.iter().enumerate() {
            let rhs: Vec<f64> = (0..m).map(|k| u.powi(k as i32)).collect();
            let sol = solve(gram.clone(), rhs)?;
            for k in 0..m {
                rows[k][j] = sol[k];
            }
        }
        Ok(Self { half, rows })
    }

    /// Weights evaluating the fitted polynomial at offset `u` from the center.
    fn weights_at(&self, u: f64) -> Vec<f64> {
        let window = self.rows[0].len();
        (0..window)
            .map(|j| {
                self.rows
                    .iter()
                    .enumerate()
                    .map(|(k, row)| u.powi(k as i32) * row[j])
                    .sum()
            })
            .collect()
    }
}

#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::Filter("singular normal equations".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

fn check_params(len: usize, window: usize, poly_order: usize) -> Result<()> {
    if window.is_multiple_of(2) || window == 0 {
        return Err(Error::Filter(format!("window length must be odd, got {window}")));
    }
    if poly_order >= window {
        return Err(Error::Filter(format!(
            "polynomial order {poly_order} must be below window length {window}"
        )));
    }
    if len < window {
        return Err(Error::Filter(format!(
            "window length {window} exceeds series length {len}"
        )));
    }
    Ok(())
}

/// Smooths `series` with a centered least-squares polynomial fit.
///
/// The first and last `window / 2` points are taken from the polynomial
/// fitted to the nearest full window.
pub fn savitzky_golay(series: &[f64], window: usize, poly_order: usize) -> Result<Vec<f64>> {
    check_params(series.len(), window, poly_order)?;
    let proj = Projection::new(window, poly_order)?;
    let n = series.len();
    let half = proj.half;
    let center = proj.weights_at(0.0);
    let mut out = vec![0.0; n];

    for i in half..n - half {
        out[i] = dot(&center, &series[i - half..=i + half]);
    }
    let head = &series[..window];
    let tail = &series[n - window..];
    for i in 0..half {
        out[i] = dot(&proj.weights_at(i as f64 - half as f64), head);
        let k = n - half + i;
        out[k] = dot(&proj.weights_at((i + 1) as f64), tail);
    }
    Ok(out)
}

/// Applies [`savitzky_golay`] with the window shrunk to fit short series.
/// Series too short for any fit are returned unchanged.
pub fn smooth_adaptive(series: &[f64], window: usize, poly_order: usize) -> Vec<f64> {
    let mut w = window.min(series.len());
    if w.is_multiple_of(2) {
        w = w.saturating_sub(1);
    }
    if w <= poly_order || w < 3 {
        return series.to_vec();
    }
    savitzky_golay(series, w, poly_order).unwrap_or_else(|_| series.to_vec())
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}
