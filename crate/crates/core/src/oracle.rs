//! Double-precision references: naive DFT, direct convolution, SOS cascade,
//! and the spectral error metric the cores are judged by.

use std::f64::consts::PI;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fir::{impulse_amplitude, FirCore};
use crate::iir::{IirCore, SosCoeffs};

/// Complex spectrum `X[0..N]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum(Vec<Complex64>);

impl Spectrum {
    pub fn new(bins: Vec<Complex64>) -> Self {
        Self(bins)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn bins(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0.iter().map(|z| z * k).collect())
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

impl Index<usize> for Spectrum {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

impl From<Vec<Complex64>> for Spectrum {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

/// `X[k] = Σ x[n] e^{-i2πkn/N}`, evaluated directly in O(N²).
pub fn dft(x: &[Complex64]) -> Spectrum {
    let n = x.len();
    let bins = (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(i, &v)| {
                    // reduce kn mod N before the trig call to keep the angle small
                    let p = (k * i) % n;
                    v * Complex64::from_polar(1.0, -2.0 * PI * p as f64 / n as f64)
                })
                .sum()
        })
        .collect();
    Spectrum(bins)
}

pub fn dft_real(x: &[f64]) -> Spectrum {
    let c: Vec<_> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft(&c)
}

/// `y[n] = Σ h[k] x[n-k]` with zero initial conditions, `len(y) = len(x)`.
pub fn direct_fir(h: &[f64], x: &[f64]) -> Vec<f64> {
    (0..x.len()).map(|n| h.iter().take(n + 1).enumerate().map(|(k, &hk)| hk * x[n - k]).sum()).collect()
}

/// Cascade of biquads, each fed with `gain * input`, zero initial state.
/// The recursion runs over past outputs.
pub fn direct_sos(sections: &[SosCoeffs], gain: f64, x: &[f64]) -> Result<Vec<f64>> {
    if sections.is_empty() {
        return Err(Error::InvalidConfig("SOS cascade needs at least one section".into()));
    }
    let mut signal = x.to_vec();
    for s in sections {
        let [b0, b1, b2] = s.b;
        let [a0, a1, a2] = s.a;
        let (b0, b1, b2, a1, a2) = (b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0);
        let (mut w1, mut w2) = (0.0, 0.0);
        for v in &mut signal {
            let u = gain * *v;
            let y = b0 * u + w1;
            w1 = b1 * u - a1 * y + w2;
            w2 = b2 * u - a2 * y;
            *v = y;
        }
    }
    Ok(signal)
}

/// `Σ |a[k] - b[k]|²` (a plain sum, no `1/N`).
pub fn mse(a: &Spectrum, b: &Spectrum) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.0.iter().zip(&b.0).map(|(x, y)| (x - y).norm_sqr()).sum())
}

/// Something that can report its response to a quantized unit impulse.
pub trait ImpulseResponse {
    /// Amplitude of the impulse the response was taken with.
    fn impulse_amplitude(&self) -> f64;
    fn impulse_response(&mut self, len: usize) -> Result<Vec<f64>>;
}

impl ImpulseResponse for FirCore {
    fn impulse_amplitude(&self) -> f64 {
        impulse_amplitude(self.config().data_fmt()).to_real()
    }

    fn impulse_response(&mut self, len: usize) -> Result<Vec<f64>> {
        FirCore::impulse_response(self, len)
    }
}

impl ImpulseResponse for IirCore {
    fn impulse_amplitude(&self) -> f64 {
        impulse_amplitude(self.config().data_fmt()).to_real()
    }

    fn impulse_response(&mut self, len: usize) -> Result<Vec<f64>> {
        IirCore::impulse_response(self, len)
    }
}

/// Impulse response of `core` over `len` samples, divided by the impulse
/// amplitude, then transformed with [`dft`].
pub fn freq_response_via_impulse<C: ImpulseResponse + ?Sized>(core: &mut C, len: usize) -> Result<Spectrum> {
    let amp = core.impulse_amplitude();
    let h: Vec<f64> = core.impulse_response(len)?.into_iter().map(|v| v / amp).collect();
    Ok(dft_real(&h))
}

/// Length after which `|h[n]|` stays below `threshold`, searched up to `max_len`.
pub fn effective_length(h: &[f64], threshold: f64) -> usize {
    h.iter().rposition(|v| v.abs() >= threshold).map_or(1, |i| i + 1)
}
