use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use num_complex::Complex64;

use super::{BlochState, SimParams};
use crate::error::{ensure, Error, Result};

/// exp(M t) for a real 2×2 matrix `[[a, b], [c, d]]`.
///
/// Uses e^{Mt} = e^{mt}(f·I + g·(M − mI)) with m the half trace and
/// δ² = ((a − d)/2)² + bc; f, g are cosh/sinh or cos/sin of the
/// eigenvalue split depending on the sign of δ².
pub(crate) fn expm2(m: [[f64; 2]; 2], t: f64) -> [[f64; 2]; 2] {
    let [[a, b], [c, d]] = m;
    let half_trace = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let disc = half_diff * half_diff + b * c;
    let (f, g) = if disc > 0.0 {
        let s = disc.sqrt();
        ((s * t).cosh(), (s * t).sinh() / s)
    } else if disc < 0.0 {
        let w = (-disc).sqrt();
        ((w * t).cos(), (w * t).sin() / w)
    } else {
        (1.0, t)
    };
    let e = (half_trace * t).exp();
    [[e * (f + g * half_diff), e * g * b], [e * g * c, e * (f - g * half_diff)]]
}

/// Ensemble-mean Bloch vector at time `t`.
pub fn mean_closed_form(params: &SimParams, init: &BlochState, t: f64) -> Result<BlochState> {
    ensure(t >= 0.0 && t.is_finite(), "t", "must be non-negative")?;
    if t == 0.0 {
        return Ok(*init);
    }
    let (beta, lx, lz, omega) = (params.beta_qed, params.lambda_x, params.lambda_z, params.omega_qed);

    let relax = beta + lx;
    let sz = if relax > 0.0 {
        let floor = beta / relax;
        (floor + init.sz) * (-2.0 * relax * t).exp() - floor
    } else {
        init.sz
    };

    let generator = [[-(beta + 2.0 * lz), -omega], [omega, -(beta + 2.0 * lx + 2.0 * lz)]];
    let u = expm2(generator, t);
    Ok(BlochState { sx: u[0][0] * init.sx + u[0][1] * init.sy, sy: u[1][0] * init.sx + u[1][1] * init.sy, sz })
}

/// Mean excited-state population E⟨σ₊σ₋⟩(t) = (1 + E⟨σz⟩)/2.
pub fn excited_population(params: &SimParams, sz0: f64, t: f64) -> Result<f64> {
    ensure(sz0.abs() <= 1.0 + 1e-12, "sz0", "|sz0| must not exceed 1")?;
    ensure(t >= 0.0 && t.is_finite(), "t", "must be non-negative")?;
    let relax = params.beta_qed + params.lambda_x;
    if relax == 0.0 {
        return Ok(0.5 * (1.0 + sz0));
    }
    let decaying = (params.beta_qed / relax + sz0) * (-2.0 * relax * t).exp();
    Ok(0.5 * (decaying + params.lambda_x / relax))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CorrelationForm {
    /// e^{−βτ}(cos Ωτ + i(Ω_QED/Ω) sin Ωτ), Ω = √(Ω_QED² − λx²).
    #[default]
    Exact,
    /// Leading order in λx/Ω_QED: e^{−βτ} e^{iΩτ}.
    Taylor,
}

/// Dipole autocorrelation E⟨σ₊(t+τ)σ₋(t)⟩ on `tau`, given its value `c0` at τ = 0.
pub fn autocorrelation_closed_form(
    params: &SimParams,
    tau: &[f64],
    c0: Complex64,
    form: CorrelationForm,
) -> Result<Vec<Complex64>> {
    let (omega_qed, lx) = (params.omega_qed, params.lambda_x);
    if omega_qed <= lx {
        return Err(Error::Overdamped { omega_qed, lambda_x: lx });
    }
    let omega = (omega_qed * omega_qed - lx * lx).sqrt();
    let width = params.total_width();
    let ratio = omega_qed / omega;
    Ok(tau
        .iter()
        .map(|&t| {
            let envelope = (-width * t).exp();
            let (s, c) = (omega * t).sin_cos();
            let shape = match form {
                CorrelationForm::Exact => Complex64::new(c, ratio * s),
                CorrelationForm::Taylor => Complex64::new(c, s),
            };
            c0 * shape * envelope
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Scheme;
    use approx::assert_relative_eq;

    fn p(omega: f64, beta: f64, lx: f64, lz: f64) -> SimParams {
        SimParams {
            omega_qed: omega,
            beta_qed: beta,
            lambda_x: lx,
            lambda_z: lz,
            dt: 1e-3,
            t_max: 1.0,
            n_traj: 1,
            seed: 0,
            scheme: Scheme::StratonovichHeun,
        }
    }

    // Oracle: truncated Taylor series of the matrix exponential with squaring.
    fn expm2_series(m: [[f64; 2]; 2], t: f64) -> [[f64; 2]; 2] {
        let squarings = 10;
        let s = t / f64::from(1 << squarings);
        let mut term = [[1.0, 0.0], [0.0, 1.0]];
        let mut acc = term;
        for k in 1..30 {
            let mut next = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    next[i][j] = (term[i][0] * m[0][j] + term[i][1] * m[1][j]) * s / f64::from(k);
                }
            }
            term = next;
            for i in 0..2 {
                for j in 0..2 {
                    acc[i][j] += term[i][j];
                }
            }
        }
        for _ in 0..squarings {
            let mut sq = [[0.0; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    sq[i][j] = acc[i][0] * acc[0][j] + acc[i][1] * acc[1][j];
                }
            }
            acc = sq;
        }
        acc
    }

    #[test]
    fn expm2_against_series() {
        let cases = [
            [[-1.2, -5.0], [5.0, -1.8]], // underdamped
            [[-1.0, -0.2], [0.2, -3.0]], // overdamped
            [[-1.0, -0.5], [0.5, -2.0]], // critical
            [[0.3, 1.0], [2.0, -0.1]],   // real, unequal signs
        ];
        for m in cases {
            for t in [0.0, 0.1, 1.0, 2.5] {
                let a = expm2(m, t);
                let b = expm2_series(m, t);
                for i in 0..2 {
                    for j in 0..2 {
                        assert!(
                            (a[i][j] - b[i][j]).abs() < 1e-12 * b[i][j].abs().max(1.0),
                            "{m:?} t={t}: {a:?} vs {b:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn identity_at_zero() {
        let s = BlochState::new(0.1, 0.2, 0.3).unwrap();
        assert_eq!(mean_closed_form(&p(3.0, 1.0, 0.2, 0.1), &s, 0.0).unwrap(), s);
    }

    #[test]
    fn decay_law() {
        let t = 0.7;
        let s = mean_closed_form(&p(3.0, 1.0, 1.0, 0.0), &BlochState::EXCITED, t).unwrap();
        assert_relative_eq!(s.sz, 1.5 * (-4.0 * t).exp() - 0.5, max_relative = 1e-14);
        let s = mean_closed_form(&p(3.0, 0.8, 0.0, 0.0), &BlochState::EXCITED, t).unwrap();
        assert_relative_eq!(s.sz, 2.0 * (-1.6 * t).exp() - 1.0, max_relative = 1e-14);
        let s = mean_closed_form(&p(3.0, 1.0, 0.2, 0.0), &BlochState::GROUND, 50.0).unwrap();
        assert_relative_eq!(s.sz, -1.0 / 1.2, max_relative = 1e-12);
    }

    #[test]
    fn damped_rotation() {
        let init = BlochState::new(1.0, 0.0, 0.0).unwrap();
        for t in [0.3, 1.1, 2.0] {
            let s = mean_closed_form(&p(5.0, 1.0, 0.0, 0.0), &init, t).unwrap();
            assert_relative_eq!(s.sx, (-t).exp() * (5.0 * t).cos(), epsilon = 1e-14);
            assert_relative_eq!(s.sy, (-t).exp() * (5.0 * t).sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn population_law() {
        let q = p(1.0, 0.5, 0.3, 0.1);
        assert_relative_eq!(excited_population(&q, 1.0, 0.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(excited_population(&q, -1.0, 1e3).unwrap(), 0.3 / (2.0 * 0.8), max_relative = 1e-14);
        let eq = p(1.0, 0.4, 0.4, 0.0);
        assert_relative_eq!(excited_population(&eq, 0.3, 1e3).unwrap(), 0.25, max_relative = 1e-14);
        // consistent with the sz law
        let sz = mean_closed_form(&q, &BlochState::EXCITED, 0.4).unwrap().sz;
        assert_relative_eq!(excited_population(&q, 1.0, 0.4).unwrap(), 0.5 * (1.0 + sz), max_relative = 1e-14);
    }

    #[test]
    fn autocorrelation_limits() {
        let c0 = Complex64::new(0.4, -0.1);
        let q = p(5.0, 1.0, 3.0, 0.2);
        let c = autocorrelation_closed_form(&q, &[0.0], c0, CorrelationForm::Exact).unwrap();
        assert_eq!(c[0], c0);

        let q0 = p(5.0, 0.7, 0.0, 0.0);
        let tau = [0.0, 0.3, 1.7];
        let c = autocorrelation_closed_form(&q0, &tau, c0, CorrelationForm::Exact).unwrap();
        for (t, v) in tau.iter().zip(&c) {
            let expect = c0 * Complex64::new(-0.7 * t, 5.0 * t).exp();
            assert!((v - expect).norm() < 1e-14);
        }

        // Ω = √(25 − 9) = 4: the exact form is periodic in 2π/4 up to the envelope
        let period = core::f64::consts::PI / 2.0;
        let c =
            autocorrelation_closed_form(&q, &[0.0, period], Complex64::new(1.0, 0.0), CorrelationForm::Exact).unwrap();
        assert_relative_eq!(c[1].re, (-(1.0 + 3.0 + 0.4) * period).exp(), max_relative = 1e-12);
        assert!(c[1].im.abs() < 1e-12);

        assert!(matches!(
            autocorrelation_closed_form(&p(1.0, 1.0, 1.0, 0.0), &tau, c0, CorrelationForm::Exact),
            Err(Error::Overdamped { .. })
        ));
    }

    // The closed form must solve the averaged τ-equations for (X, Y) with
    // C = (X + iY)/2, X(0) = C0, Y(0) = −iC0.
    #[test]
    fn autocorrelation_solves_pair_equations() {
        let q = p(10.0, 1.0, 0.3, 0.1);
        let c0 = Complex64::new(0.8, 0.0);
        let tau = [0.0, 0.05, 0.4, 1.3];
        let c = autocorrelation_closed_form(&q, &tau, c0, CorrelationForm::Exact).unwrap();
        let gen = [[-(1.0 + 0.2), -10.0], [10.0, -(1.0 + 0.6 + 0.2)]];
        for (t, v) in tau.iter().zip(&c) {
            let u = expm2_series(gen, *t);
            let x0 = c0;
            let y0 = -Complex64::i() * c0;
            let x = x0 * u[0][0] + y0 * u[0][1];
            let y = x0 * u[1][0] + y0 * u[1][1];
            let expect = 0.5 * (x + Complex64::i() * y);
            assert!((v - expect).norm() < 1e-12, "{t}: {v} vs {expect}");
        }
    }
}
