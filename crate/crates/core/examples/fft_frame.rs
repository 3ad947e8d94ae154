//! Run the built-in 1024-point test vector through the pipelined FFT and
//! compare with a naive DFT.

use wbdsp::fft::{fft_latency, ComplexFx, FftConfig, FftPipeline};
use wbdsp::harness::fft_test_frame;
use wbdsp::oracle::{dft, mse, Spectrum};
use wbdsp::Rounding;

fn main() -> wbdsp::Result<()> {
    let cfg = FftConfig::new(1024, 16, 15)?;
    let mut fft = FftPipeline::new(cfg.clone())?;
    println!("N = {}, stages {}, shifts {:?}, gain {}", cfg.n_points(), cfg.stages(), cfg.scaling(), cfg.total_gain());
    println!("latency {} cycles, delay lines {:?}", fft_latency(&cfg), fft.fifo_depths());

    let x = fft_test_frame(1024);
    let xq: Vec<ComplexFx> =
        x.iter().map(|&z| ComplexFx::quantize(z, cfg.word_fmt(), Rounding::NearestEven)).collect::<Result<_, _>>()?;
    let out = fft.frame(&xq)?;

    let reference = dft(&x).scaled(cfg.total_gain());
    let measured = Spectrum::new(out.iter().map(|z| z.to_complex()).collect());
    let e = mse(&reference, &measured)?;
    println!("MSE over all bins {e:.6e}, per bin {:.6e}", e / 1024.0);
    for k in [0usize, 1, 2, 511, 512, 1023] {
        println!("  X[{k:>4}] = {:+.6} (ref {:+.6}) packed {:#010x}", measured.bins()[k], reference.bins()[k], out[k].pack());
    }
    Ok(())
}
