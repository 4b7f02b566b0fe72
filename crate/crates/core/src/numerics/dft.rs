//! Discretised continuous Fourier transform (1/2π) ∫ dt e^{-iωt} f(t).

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct DftResult {
    /// Angular frequencies in FFT order: 0, dω, …, then the negative half.
    pub omega: Vec<f64>,
    pub amplitude: Vec<Complex64>,
    pub d_omega: f64,
}

impl DftResult {
    /// Indices of the strictly positive frequencies below Nyquist.
    pub fn positive_range(&self) -> std::ops::Range<usize> {
        1..self.omega.len() / 2
    }
}

/// Zero-padded length used by [`dft`]: four times the next power of two.
pub fn padded_len(n: usize) -> usize {
    4 * n.next_power_of_two()
}

/// Riemann-sum approximation of (1/2π) ∫ dt e^{-iωt} f(t) for uniformly
/// sampled `samples` with spacing `dt`, with the first sample taken as t = 0.
/// The samples are zero-padded to [`padded_len`] so that ω_j = 2πj/(N dt)
/// interpolates the continuous transform.
pub fn dft(samples: &[Complex64], dt: f64) -> Result<DftResult> {
    if samples.len() < 2 {
        return Err(Error::domain("dft needs at least two samples"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain(format!("dt must be > 0, got {dt}")));
    }
    let n = padded_len(samples.len());
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    buf[..samples.len()].copy_from_slice(samples);
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = dt / std::f64::consts::TAU;
    for v in &mut buf {
        *v *= scale;
    }
    let d_omega = std::f64::consts::TAU / (n as f64 * dt);
    let omega = (0..n)
        .map(|j| {
            if j < n / 2 {
                j as f64 * d_omega
            } else {
                (j as f64 - n as f64) * d_omega
            }
        })
        .collect();
    Ok(DftResult {
        omega,
        amplitude: buf,
        d_omega,
    })
}

/// Convenience wrapper for real samples.
pub fn dft_real(samples: &[f64], dt: f64) -> Result<DftResult> {
    let c: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    dft(&c, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn constant_input_is_dc() {
        let r = dft_real(&[1.0; 64], 0.1).unwrap();
        let dc = r.amplitude[0].norm();
        assert!((dc - 6.4 / TAU).abs() < 1e-12);
        // all other bins are far below the DC bin once we step past the sinc main lobe
        let peak = r
            .amplitude
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap()
            .0;
        assert_eq!(peak, 0);
    }

    #[test]
    fn cosine_peaks_at_plus_minus_omega() {
        let w0 = 3.0;
        let dt = 0.01;
        let s: Vec<f64> = (0..4000).map(|i| (w0 * i as f64 * dt).cos()).collect();
        let r = dft_real(&s, dt).unwrap();
        let mut best_pos = (0, 0.0);
        let mut best_neg = (0, 0.0);
        for (j, a) in r.amplitude.iter().enumerate() {
            let m = a.norm();
            if r.omega[j] > 0.0 && m > best_pos.1 {
                best_pos = (j, m);
            }
            if r.omega[j] < 0.0 && m > best_neg.1 {
                best_neg = (j, m);
            }
        }
        assert!((r.omega[best_pos.0] - w0).abs() <= r.d_omega);
        assert!((r.omega[best_neg.0] + w0).abs() <= r.d_omega);
    }

    #[test]
    fn parseval() {
        let dt = 0.05;
        let s: Vec<Complex64> = (0..777)
            .map(|i| {
                let t = i as f64 * dt;
                Complex64::new(
                    (-(t - 20.0).powi(2) / 30.0).exp() * (2.0 * t).sin(),
                    0.3 * (0.7 * t).cos(),
                )
            })
            .collect();
        let r = dft(&s, dt).unwrap();
        let lhs: f64 = s.iter().map(|v| v.norm_sqr()).sum::<f64>() * dt;
        let rhs: f64 = r.amplitude.iter().map(|v| v.norm_sqr()).sum::<f64>() * r.d_omega * TAU;
        assert!((lhs - rhs).abs() <= 1e-8 * lhs);
    }

    #[test]
    fn rejects_short_input() {
        assert!(dft_real(&[1.0], 0.1).is_err());
        assert!(dft_real(&[1.0, 2.0], 0.0).is_err());
    }
}
