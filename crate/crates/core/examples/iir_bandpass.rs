//! Six-section band-pass: impulse response, settling and the magnitude
//! response check.

use wbdsp::fir::impulse_amplitude;
use wbdsp::fixture;
use wbdsp::harness::{self, RunConfig};
use wbdsp::iir::{IirConfig, IirCore};
use wbdsp::oracle::effective_length;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = fixture::load_sos(&fixture::bundled("iir_bandpass_6sos.txt"))?;
    let cfg = IirConfig::new(fx.sections.len(), 16, 8, 13)?;
    let mut core = IirCore::new(cfg, &fx.sections, fx.gain, fx.sections.len())?;
    println!("{} sections, gain {:.6}, data {:?}", fx.sections.len(), fx.gain, cfg.data_fmt());

    let amp = impulse_amplitude(cfg.data_fmt()).to_real();
    let h: Vec<f64> = core.impulse_response(4096)?.into_iter().map(|v| v / amp).collect();
    let peak = h.iter().enumerate().fold((0, 0.0f64), |m, (i, v)| if v.abs() > m.1 { (i, v.abs()) } else { m });
    println!("peak |h| = {:.5} at n = {}", peak.1, peak.0);
    println!("below 2^-13 after {} samples", effective_length(&h, 2f64.powi(-13)));
    for n in (0..40).step_by(5) {
        println!("  h[{n:>2}] = {:+.6}", h[n]);
    }

    // reconfigure to three sections on the fly
    core.set_active_sections(3)?;
    core.reset();
    println!("active sections now {}", core.active_sections());

    let r = harness::cmd_iir_test(&RunConfig::default())?;
    print!("{}", r.summary());
    Ok(())
}
