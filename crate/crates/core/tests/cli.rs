use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wbdsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbdsp")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wbdsp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn scenario(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name).display().to_string()
}

#[test]
fn fir_and_iir_tests_pass_and_are_deterministic() {
    for cmd in ["fir-test", "iir-test"] {
        let a = tmp(&format!("{cmd}-a.csv"));
        let b = tmp(&format!("{cmd}-b.csv"));
        let out = wbdsp(&[cmd, "--out", a.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("MSE = ") && text.contains("PASS"), "{text}");
        assert!(wbdsp(&[cmd, "--out", b.to_str().unwrap()]).status.success());
        let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().starts_with("frequency,h_float,h_core\n"));
    }
}

#[test]
fn direct_and_bus_runs_agree() {
    for cmd in ["fir-test", "iir-test", "fft-test"] {
        let a = tmp(&format!("{cmd}-bus.csv"));
        let b = tmp(&format!("{cmd}-direct.csv"));
        wbdsp(&[cmd, "--fft-points", "256", "--out", a.to_str().unwrap()]);
        wbdsp(&[cmd, "--fft-points", "256", "--direct", "--out", b.to_str().unwrap()]);
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), "{cmd}");
    }
}

#[test]
fn mse_is_printed_with_fifteen_digits() {
    let out = String::from_utf8(wbdsp(&["fir-test"]).stdout).unwrap();
    let line = out.lines().find(|l| l.starts_with("MSE = ")).unwrap();
    let value = line.trim_start_matches("MSE = ").split_whitespace().next().unwrap();
    let mantissa = value.split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 15, "{value}");
}

#[test]
fn threshold_controls_exit_status() {
    assert!(!wbdsp(&["fir-test", "--max-mse", "1e-12"]).status.success());
    let csv = tmp("fft.csv");
    let out = wbdsp(&["fft-test", "--max-mse", "1", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("index,re_raw,im_raw,re,im,re_ref,im_ref\n"));
    assert_eq!(text.lines().count(), 1025);
}

#[test]
fn scenarios_through_the_binary() {
    assert!(wbdsp(&["scenario", &scenario("fir_bringup.txt")]).status.success());
    assert!(wbdsp(&["scenario", &scenario("iir_bringup.txt")]).status.success());
    assert!(wbdsp(&["scenario", &scenario("fft_bringup_16.txt"), "--fft-points", "16"]).status.success());
    // the FFT script expects a 16-point core
    let out = wbdsp(&["scenario", &scenario("fft_bringup_16.txt")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));

    let bad = tmp("bad.txt");
    std::fs::write(&bad, "W FIR_Q f\n\nR FIR_Q\n").unwrap();
    let out = wbdsp(&["scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains(":3: "));
}

#[test]
fn moved_bases_are_honoured() {
    let out = wbdsp(&["dump-regs", "--fir-base", "0x1000", "--iir-base", "2000", "--fft-base", "0x3000"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FIR_COEFF,0x00001010,50,WO,16"), "{text}");
    assert!(text.contains("IIR_GAIN,0x00002010,1,WO,16"));
    assert!(text.contains("FFT_STATUS,0x00003008,1,RO,1"));
    let out = wbdsp(&["fir-test", "--fir-base", "0x1000", "--iir-base", "0x1010"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("overlaps"));
}

#[test]
fn bad_fixture_reports_line() {
    let f = tmp("taps.txt");
    std::fs::write(&f, "0.1\n0.2\nx\n").unwrap();
    let out = wbdsp(&["fir-test", "--fixture", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("taps.txt:3: not a number"));
}
