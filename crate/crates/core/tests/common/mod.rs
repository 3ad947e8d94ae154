//! Helpers shared by the integration tests: seeded randomness and
//! exact-integer reference models written independently of the crate.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wbdsp::fixed::{FxFormat, FxSample};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two's-complement wrap of `v` into `bits` bits.
pub fn wrap(v: i128, bits: u32) -> i64 {
    let m = 1i128 << bits;
    let r = v.rem_euclid(m);
    (if r >= m / 2 { r - m } else { r }) as i64
}

/// Product of two raw values rescaled by `shift` with floor.
pub fn prod(a: i64, b: i64, shift: u32) -> i128 {
    (a as i128 * b as i128) >> shift
}

/// Direct convolution `y[n] = Σ h[k] x[n-k]` with every product floored by
/// `2^q`, summed exactly and wrapped once to `bits`.
pub fn fir_exact(h: &[i64], x: &[i64], q: u32, bits: u32) -> Vec<i64> {
    (0..x.len())
        .map(|n| {
            let acc: i128 = (0..h.len().min(n + 1)).map(|k| prod(h[k], x[n - k], q)).sum();
            wrap(acc, bits)
        })
        .collect()
}

/// Raw coefficients of one biquad plus its gain.
#[derive(Debug, Clone, Copy)]
pub struct SosRaw {
    pub b0: i64,
    pub b1: i64,
    pub b2: i64,
    pub a1: i64,
    pub a2: i64,
    pub gain: i64,
}

/// Transposed biquad recurrence on raw integers:
/// `u = g x`, `y = b0 u + s1`, `s1 = b1 u - a1 y + s2`, `s2 = b2 u - a2 y`.
/// Products are floored by `2^q`; every register wraps to `bits`.
pub fn sos_exact(c: &SosRaw, x: &[i64], q: u32, bits: u32) -> Vec<i64> {
    let (mut s1, mut s2) = (0i64, 0i64);
    x.iter()
        .map(|&xn| {
            let u = wrap(prod(c.gain, xn, q), bits);
            let y = wrap(prod(c.b0, u, q) + s1 as i128, bits);
            let n1 = wrap(prod(c.b1, u, q) - prod(c.a1, y, q) + s2 as i128, bits);
            let n2 = wrap(prod(c.b2, u, q) - prod(c.a2, y, q), bits);
            s1 = n1;
            s2 = n2;
            y
        })
        .collect()
}

pub fn random_raw(rng: &mut impl Rng, fmt: FxFormat) -> i64 {
    rng.gen_range(fmt.min_raw()..=fmt.max_raw())
}

pub fn samples(raw: &[i64], fmt: FxFormat) -> Vec<FxSample> {
    raw.iter().map(|&r| FxSample::from_raw(r, fmt).unwrap()).collect()
}

pub fn raws(s: &[FxSample]) -> Vec<i64> {
    s.iter().map(|v| v.raw()).collect()
}
