//! Bring up all three cores behind the Wishbone model with the register
//! drivers, then show the register map and an error response.

use num_complex::Complex64;
use wbdsp::bus::{AddressMap, FftDriver, FirDriver, IirDriver, Soc};
use wbdsp::fft::{ComplexFx, FftConfig};
use wbdsp::fir::FirConfig;
use wbdsp::iir::{IirConfig, SosCoeffs, SosSection};
use wbdsp::{FxSample, Rounding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fir_cfg = FirConfig::new(4, 16, 8, 15)?;
    let iir_cfg = IirConfig::new(2, 16, 8, 13)?;
    let fft_cfg = FftConfig::new(16, 16, 15)?;
    let map = AddressMap::default();
    let mut soc = Soc::new(map, fir_cfg, iir_cfg, fft_cfg.clone())?;
    println!("{map}");

    // 4-tap moving average
    let q = |v: f64, f| FxSample::quantize(v, f, Rounding::NearestEven);
    let mut fir = FirDriver::new(&mut soc.bus, map.fir_base, fir_cfg);
    fir.set_frac_bits(15)?;
    fir.load(&[q(0.25, fir_cfg.coeff_fmt())?; 4])?;
    let mut ys = Vec::new();
    for _ in 0..6 {
        ys.push(fir.filter(q(0.5, fir_cfg.data_fmt())?)?.to_real());
    }
    println!("FIR step response: {ys:?}");

    // one-pole low-pass in section 0, pass-through in section 1
    let lp = SosSection::quantize(&SosCoeffs::new([0.5, 0.0, 0.0], -0.5, 0.0), iir_cfg.coeff_fmt())?;
    let wire = SosSection::quantize(&SosCoeffs::identity(), iir_cfg.coeff_fmt())?;
    let mut iir = IirDriver::new(&mut soc.bus, map.iir_base, iir_cfg);
    iir.configure(&[lp, wire], q(1.0 - 1.0 / 8192.0, iir_cfg.coeff_fmt())?, 2)?;
    let mut ys = Vec::new();
    for _ in 0..6 {
        ys.push(iir.filter(q(0.5, iir_cfg.data_fmt())?)?.to_real());
    }
    println!("IIR step response: {ys:?}");

    // DC into a 16-point FFT lands in bin 0
    let mut fft = FftDriver::new(&mut soc.bus, map.fft_base, fft_cfg.clone());
    let frame = vec![ComplexFx::quantize(Complex64::new(0.05, 0.0), fft_cfg.word_fmt(), Rounding::NearestEven)?; 16];
    let bins = fft.transform(&frame)?;
    println!("FFT bin 0 = {}, bin 1 = {}", bins[0].to_complex(), bins[1].to_complex());

    println!("{} bus cycles so far", soc.bus.elapsed_cycles());
    for (name, addr, info) in soc.bus.register_map().into_iter().take(6) {
        println!("  {name:<12} {addr:#010x} {} x{}", info.access, info.words);
    }
    match soc.bus.read(map.fir_base) {
        Ok(t) => println!("read CONTROL: {t:?}"),
        Err(e) => println!("read CONTROL: {e}"),
    }
    match soc.bus.read(0x8000_0000) {
        Ok(t) => println!("unmapped read: {t:?}"),
        Err(e) => println!("unmapped read: {e}"),
    }
    Ok(())
}
