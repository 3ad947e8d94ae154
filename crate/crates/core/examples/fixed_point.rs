//! Quantization, wrapping datapath arithmetic and the product rescale.

use wbdsp::{FxFormat, FxSample, Rounding};

fn main() -> wbdsp::Result<()> {
    let q15 = FxFormat::new(16, 15)?;
    let acc = FxFormat::new(24, 15)?;

    for x in [0.5, -0.25, 0.999_99, 1.5, -1.0, 3.0517578125e-5 * 1.5] {
        let s = FxSample::quantize(x, q15, Rounding::NearestEven)?;
        println!("{x:>12.8} -> raw {:>6} = {:.10}", s.raw(), s.to_real());
    }

    // adds wrap like a hardware adder
    let max = FxSample::max(q15);
    let one_lsb = FxSample::from_raw(1, q15)?;
    println!("max + lsb = {} (raw {})", max.add(one_lsb)?.to_real(), max.add(one_lsb)?.raw());

    // products are floor-shifted into the output format
    let a = FxSample::quantize(0.7, q15, Rounding::NearestEven)?;
    let b = FxSample::quantize(-0.3, q15, Rounding::NearestEven)?;
    let p = a.mul(b, acc)?;
    println!("0.7 * -0.3 = {:.10} (exact {:.10}, err {:.3e})", p.to_real(), 0.7 * -0.3, p.to_real() + 0.21);
    println!("-1 lsb >> 3 = raw {}", FxSample::from_raw(-1, q15)?.shift_right(3).raw());
    Ok(())
}
