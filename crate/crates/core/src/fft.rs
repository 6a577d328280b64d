//! In-place iterative radix-2 FFT, forward sign convention
//! X_k = Σ_n x_n e^{−2πi kn/N}.

use core::f64::consts::PI;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use num_complex::Complex64;

/// Panics if `buf.len()` is not a power of two.
pub(crate) fn fft_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "fft length must be a power of two");
    if n <= 1 {
        return;
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let theta = -2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // direct twiddle evaluation keeps round-off from accumulating
                let (s, c) = (theta * k as f64).sin_cos();
                let w = Complex64::new(c, s);
                let a = buf[start + k];
                let b = buf[start + k + half] * w;
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn matches_direct_dft() {
        let n = 64;
        let x: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos() - 0.2)).collect();
        let mut y = x.clone();
        fft_in_place(&mut y);
        for (k, got) in y.iter().enumerate() {
            let direct: Complex64 = x
                .iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64))
                .sum();
            assert!((direct - got).norm() < 1e-10);
        }
    }

    #[test]
    fn matches_rustfft() {
        let n = 1 << 12;
        let x: Vec<Complex64> =
            (0..n).map(|i| Complex64::new((i as f64 * 0.013).exp().sin(), (i as f64).sqrt().cos())).collect();
        let mut ours = x.clone();
        fft_in_place(&mut ours);
        let mut theirs = x;
        rustfft::FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut theirs);
        let scale = theirs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn trivial_lengths() {
        let mut one = [Complex64::new(2.0, -1.0)];
        fft_in_place(&mut one);
        assert_eq!(one[0], Complex64::new(2.0, -1.0));
    }
}
