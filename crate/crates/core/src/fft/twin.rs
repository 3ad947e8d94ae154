//! Double-precision execution of the same delay-feedback schedule with exact
//! twiddles and no scaling. Used to check the schedule independently of
//! quantization.

use num_complex::Complex64;

use super::sdf::{SdfArith, SdfEngine};
use super::{bit_reverse, check_points, twiddle};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FloatArith {
    tables: Vec<Vec<Complex64>>,
}

impl FloatArith {
    fn new(n_points: usize) -> Self {
        let pairs = n_points.trailing_zeros() as usize / 2;
        let tables = (0..pairs)
            .map(|p| {
                let d = twiddle::pair_depth(n_points, p);
                (0..4 * d).map(|i| Complex64::from_polar(1.0, -twiddle::angle(d, i))).collect()
            })
            .collect();
        Self { tables }
    }
}

impl SdfArith for FloatArith {
    type Value = Complex64;

    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn add(&self, a: Complex64, b: Complex64) -> Complex64 {
        a + b
    }

    fn sub(&self, a: Complex64, b: Complex64) -> Complex64 {
        a - b
    }

    fn rotate_neg_j(&self, a: Complex64) -> Complex64 {
        Complex64::new(a.im, -a.re)
    }

    fn scale(&self, a: Complex64, shift: u32) -> Complex64 {
        a * (-(shift as f64)).exp2()
    }

    fn twiddle(&self, pair: usize, index: usize, a: Complex64) -> Complex64 {
        a * self.tables[pair][index]
    }
}

/// Floating-point twin of [`super::FftPipeline`].
#[derive(Debug, Clone)]
pub struct FloatPipeline {
    n_points: usize,
    engine: SdfEngine<FloatArith>,
}

impl FloatPipeline {
    pub fn new(n_points: usize) -> Result<Self> {
        check_points(n_points)?;
        let stages = n_points.trailing_zeros() as usize;
        Ok(Self { n_points, engine: SdfEngine::new(n_points, FloatArith::new(n_points), vec![0; stages]) })
    }

    /// Transform one frame and return the spectrum in natural order.
    pub fn frame(&mut self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.n_points;
        if x.len() != n {
            return Err(Error::LengthMismatch { left: x.len(), right: n });
        }
        self.engine.reset();
        let bits = n.trailing_zeros();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        let zero = Complex64::new(0.0, 0.0);
        for t in 0..2 * n - 1 {
            let y = self.engine.clock(x.get(t).copied().unwrap_or(zero));
            if t >= n - 1 {
                out[bit_reverse(t - (n - 1), bits)?] = y;
            }
        }
        Ok(out)
    }
}
