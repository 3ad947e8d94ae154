//! Twiddle ROMs and the fixed-point complex multiplier.
//!
//! Stage pair `p` of an `N`-point radix-2² pipeline works on sub-transforms
//! of `4d` points, `d = N / 4^(p+1)`. The BF2II output of that pair leaves in
//! four blocks of `d` samples; block `b` at position `n` needs
//! `W_{4d}^(n * [0, 2, 1, 3][b])`. The ROM for the pair stores exactly that
//! sequence, indexed by the position within the `4d`-sample window.
//!
//! ROM entries are `round_half_even(cos θ * (2^(M-1) - 1))` and
//! `round_half_even(-sin θ * (2^(M-1) - 1))`, read as `(M, M-1)` values, so
//! `+1.0` is representable and every twiddle is scaled by `1 - 2^-(M-1)`.

use std::f64::consts::PI;

use crate::error::Result;
use crate::fixed::{FxFormat, FxSample};

use super::ComplexFx;

/// Block order of the radix-2² decomposition (k1 + 2*k2 for blocks 0..4).
const BLOCK_MULTIPLIER: [usize; 4] = [0, 2, 1, 3];

/// Exponent `e` of `W_{4d}^e` for position `index` in a `4d` window.
pub(crate) fn exponent(depth: usize, index: usize) -> usize {
    let block = index / depth;
    let n = index % depth;
    n * BLOCK_MULTIPLIER[block]
}

/// Twiddle angle in radians (`W = e^{-iθ}`) for position `index`.
pub(crate) fn angle(depth: usize, index: usize) -> f64 {
    2.0 * PI * exponent(depth, index) as f64 / (4 * depth) as f64
}

/// Format of ROM entries for an `M`-bit word.
pub fn rom_format(word_bits: u32) -> Result<FxFormat> {
    FxFormat::new(word_bits, word_bits - 1)
}

/// Quantize `e^{-iθ}` with the ROM scale convention.
pub fn quantize_twiddle(theta: f64, word_bits: u32) -> Result<ComplexFx> {
    let fmt = rom_format(word_bits)?;
    let scale = fmt.max_raw() as f64;
    let q = |v: f64| FxSample::from_raw((v * scale).round_ties_even() as i64, fmt);
    ComplexFx::new(q(theta.cos())?, q(-theta.sin())?)
}

/// ROM of stage pair `pair` of an `n_points` transform: `4d` entries.
pub fn twiddle_rom(n_points: usize, pair: usize, word_bits: u32) -> Result<Vec<ComplexFx>> {
    let depth = pair_depth(n_points, pair);
    (0..4 * depth).map(|i| quantize_twiddle(angle(depth, i), word_bits)).collect()
}

/// BF2II buffer depth of stage pair `pair`.
pub(crate) fn pair_depth(n_points: usize, pair: usize) -> usize {
    n_points >> (2 * pair + 2)
}

/// `a * w`, each partial product truncated by the twiddle scale and every sum
/// wrapped into `a`'s format.
pub fn complex_mul(a: ComplexFx, w: ComplexFx) -> Result<ComplexFx> {
    let fmt = a.format();
    let rr = a.re.mul(w.re, fmt)?;
    let ii = a.im.mul(w.im, fmt)?;
    let ri = a.re.mul(w.im, fmt)?;
    let ir = a.im.mul(w.re, fmt)?;
    ComplexFx::new(rr.sub(ii)?, ri.add(ir)?)
}
