//! Load the bundled 50-tap low-pass, filter a two-tone signal and compare
//! against the floating-point convolution.

use std::f64::consts::PI;

use wbdsp::fir::{FirConfig, FirCore};
use wbdsp::fixture;
use wbdsp::oracle::direct_fir;
use wbdsp::{FxSample, Rounding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let taps = fixture::load_fir_taps(&fixture::bundled("fir_lowpass_50.txt"))?;
    let cfg = FirConfig::new(taps.len(), 16, 8, 15)?;
    let mut core = FirCore::new(cfg, &taps)?;

    // one tone in the passband, one in the stopband
    let x: Vec<f64> = (0..400)
        .map(|n| 0.4 * (2.0 * PI * 0.05 * n as f64).sin() + 0.4 * (2.0 * PI * 0.35 * n as f64).sin())
        .collect();
    let h: Vec<f64> = core.coefficients().iter().map(|c| c.to_real()).collect();
    let want = direct_fir(&h, &x);

    let mut worst = 0.0f64;
    let mut tail_power = [0.0; 2];
    for (n, &v) in x.iter().enumerate() {
        let y = core.step(FxSample::quantize(v, cfg.data_fmt(), Rounding::NearestEven)?)?.to_real();
        worst = worst.max((y - want[n]).abs());
        if n >= 200 {
            tail_power[0] += v * v;
            tail_power[1] += y * y;
        }
    }
    println!("taps: {}, data format {:?}", cfg.n_taps(), cfg.data_fmt());
    println!("max |core - float| = {worst:.3e} ({:.1} LSB)", worst / cfg.data_fmt().lsb());
    println!("output/input power = {:.3} (stopband tone removed)", tail_power[1] / tail_power[0]);

    let r = wbdsp::harness::cmd_fir_test(&Default::default())?;
    print!("{}", r.summary());
    Ok(())
}
