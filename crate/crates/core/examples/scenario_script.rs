//! Parse and run a register scenario, then run one with a deliberate
//! mismatch to show the report.

use wbdsp::bus::scenario;
use wbdsp::harness::RunConfig;

const SCRIPT: &str = "\
# FIR wire: Q = 0, h[0] = 1
W FIR_Q 0
W FIR_COEFF 1
W FIR_DATA 1234
W FIR_CONTROL 1
POLL FIR_STATUS 1 1 8
R FIR_DATA 1234
R FIR_CONTROL ERR
R FIR_BASE-4 ERR
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut soc = RunConfig::default().soc(50, 6)?;
    let script = scenario::parse("inline", SCRIPT)?;
    for d in &script.directives {
        println!("  {d}");
    }
    let report = scenario::run(&script, &mut soc.bus);
    println!("{} of {} directives, passed: {}", report.executed, report.total, report.passed());

    let bad = scenario::parse("bad", "W FIR_DATA 7\nW FIR_CONTROL 1\nR FIR_DATA 8\n")?;
    let report = scenario::run(&bad, &mut soc.bus);
    if let Some(m) = report.mismatch {
        println!("stopped at {m}");
    }

    let file = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/fir_bringup.txt");
    let report = scenario::run(&scenario::load(&file)?, &mut RunConfig::default().soc(50, 6)?.bus);
    println!("{}: {} directives, passed: {}", file.display(), report.total, report.passed());
    Ok(())
}
