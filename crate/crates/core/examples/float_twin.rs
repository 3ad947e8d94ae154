//! The floating-point twin runs the same delay-line schedule with exact
//! twiddles. Comparing it with the fixed-point pipeline separates rounding
//! noise from schedule errors.

use num_complex::Complex64;
use wbdsp::fft::{error_bound_lsb, ComplexFx, FftConfig, FftPipeline, FloatPipeline};
use wbdsp::oracle::dft;
use wbdsp::Rounding;

fn main() -> wbdsp::Result<()> {
    for n in [16usize, 64, 256, 1024] {
        let cfg = FftConfig::new(n, 16, 15)?;
        let g = cfg.total_gain();
        // tone bin lands at a quarter of full scale after the scaled transform
        let a = 0.5 / (n as f64 * g);
        let x: Vec<Complex64> = (0..n)
            .map(|k| {
                let t = k as f64 / n as f64;
                Complex64::new(a * (2.0 * std::f64::consts::PI * 3.0 * t).cos(), 0.2 * a * (t - 0.5))
            })
            .collect();
        let want = dft(&x);
        let twin = FloatPipeline::new(n)?.frame(&x)?;
        let schedule_err = twin.iter().zip(want.bins()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);

        let xq: Vec<ComplexFx> =
            x.iter().map(|&z| ComplexFx::quantize(z, cfg.word_fmt(), Rounding::NearestEven)).collect::<Result<_, _>>()?;
        let fixed = FftPipeline::new(cfg.clone())?.frame(&xq)?;
        let xr: Vec<Complex64> = xq.iter().map(|z| z.to_complex()).collect();
        let twin = FloatPipeline::new(n)?.frame(&xr)?;
        let lsb = cfg.word_fmt().lsb();
        let fixed_err = fixed.iter().zip(&twin).map(|(a, b)| (a.to_complex() - b * g).norm()).fold(0.0, f64::max) / lsb;
        let bound = error_bound_lsb(&cfg, a * 2f64.sqrt());
        println!("N = {n:>4}: twin vs DFT {schedule_err:.2e}, fixed vs twin {fixed_err:.2} LSB (bound {bound:.1}, gain {g})");
    }
    Ok(())
}
