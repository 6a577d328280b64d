use super::Spectrum;
use crate::error::{Error, Result};

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

/// Half-widths either side of the initial centre used by the refinement.
pub const FIT_WINDOW_HALF_WIDTHS: f64 = 20.0;
pub const MAX_ITERATIONS: u32 = 100;
/// Refinement stops once every parameter moves by less than this relative amount.
pub const STEP_TOLERANCE: f64 = 1e-10;

/// Fit of h / (1 + ((ω − Ω)/β)²). `beta_fit` is the half width at half maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianFit {
    pub beta_fit: f64,
    pub omega_center: f64,
    pub peak_height: f64,
    pub rms_residual: f64,
    pub converged: bool,
    pub iterations: u32,
}

impl LorentzianFit {
    pub fn fwhm(&self) -> f64 {
        2.0 * self.beta_fit
    }
}

/// Fits the dominant line in `spectrum`.
///
/// A half-maximum estimate seeds a Gauss–Newton refinement restricted to
/// `FIT_WINDOW_HALF_WIDTHS` around the peak. If the refinement fails to
/// converge the seed is returned with `converged = false`.
pub fn fit_lorentzian(spectrum: &Spectrum) -> Result<LorentzianFit> {
    let (w, y) = (&spectrum.omega, &spectrum.density);
    let n = y.len();
    let dw = spectrum.step();

    let imax = (0..n).fold(0, |best, i| if y[i] > y[best] { i } else { best });
    if imax == 0 || imax == n - 1 || y[imax] <= 0.0 {
        return Err(Error::NoPeak);
    }

    let (ym, y0, yp) = (y[imax - 1], y[imax], y[imax + 1]);
    let curvature = ym - 2.0 * y0 + yp;
    let offset = if curvature < 0.0 { 0.5 * (ym - yp) / curvature } else { 0.0 };
    let center0 = w[imax] + offset * dw;
    let height0 = y0 - 0.25 * (ym - yp) * offset;
    let half = 0.5 * height0;

    let left = (0..imax).rev().find(|&j| y[j] < half).map(|j| w[j] + (half - y[j]) / (y[j + 1] - y[j]) * dw);
    let right = (imax + 1..n).find(|&j| y[j] < half).map(|j| w[j] - (half - y[j]) / (y[j - 1] - y[j]) * dw);
    let beta0 = match (left, right) {
        (Some(l), Some(r)) => 0.5 * (r - l),
        (Some(l), None) => center0 - l,
        (None, Some(r)) => r - center0,
        (None, None) => return Err(Error::NoPeak),
    };
    if beta0.is_nan() || beta0 <= 0.0 {
        return Err(Error::NoPeak);
    }

    let lo = center0 - FIT_WINDOW_HALF_WIDTHS * beta0;
    let hi = center0 + FIT_WINDOW_HALF_WIDTHS * beta0;
    let window: alloc::vec::Vec<usize> = (0..n).filter(|&i| w[i] >= lo && w[i] <= hi).collect();

    let seed = [height0, center0, beta0];
    let fallback = |iterations| LorentzianFit {
        beta_fit: beta0,
        omega_center: center0,
        peak_height: height0,
        rms_residual: rms(&window, w, y, seed),
        converged: false,
        iterations,
    };
    if window.len() < 4 {
        return Ok(fallback(0));
    }

    let mut p = seed;
    for iter in 1..=MAX_ITERATIONS {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for &i in &window {
            let u = (w[i] - p[1]) / p[2];
            let q = 1.0 / (1.0 + u * u);
            let f = p[0] * q;
            let grad = [q, 2.0 * f * q * u / p[2], 2.0 * f * q * u * u / p[2]];
            let r = y[i] - f;
            for a in 0..3 {
                jtr[a] += grad[a] * r;
                for b in 0..3 {
                    jtj[a][b] += grad[a] * grad[b];
                }
            }
        }
        let Some(delta) = solve3(jtj, jtr) else {
            return Ok(fallback(iter));
        };
        for k in 0..3 {
            p[k] += delta[k];
        }
        if !(p[0] > 0.0 && p[2] > 0.0 && p.iter().all(|v| v.is_finite())) {
            return Ok(fallback(iter));
        }
        let scales = [p[0], p[1].abs().max(p[2]), p[2]];
        if (0..3).all(|k| delta[k].abs() <= STEP_TOLERANCE * scales[k]) {
            return Ok(LorentzianFit {
                beta_fit: p[2],
                omega_center: p[1],
                peak_height: p[0],
                rms_residual: rms(&window, w, y, p),
                converged: true,
                iterations: iter,
            });
        }
    }
    Ok(fallback(MAX_ITERATIONS))
}

fn rms(window: &[usize], w: &[f64], y: &[f64], p: [f64; 3]) -> f64 {
    if window.is_empty() {
        return 0.0;
    }
    let ss: f64 = window
        .iter()
        .map(|&i| {
            let u = (w[i] - p[1]) / p[2];
            let r = y[i] - p[0] / (1.0 + u * u);
            r * r
        })
        .sum();
    (ss / window.len() as f64).sqrt()
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let m = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= m * p;
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let s: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
