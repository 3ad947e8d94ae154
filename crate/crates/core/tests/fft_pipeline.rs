mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use wbdsp::fft::{bit_reverse, error_bound_lsb, ComplexFx, FftConfig, FftPipeline, FloatPipeline};
use wbdsp::oracle::{dft, mse, Spectrum};

fn random_frame(r: &mut impl Rng, n: usize, amp: f64) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(r.gen_range(-amp..amp), r.gen_range(-amp..amp))).collect()
}

fn on_grid(r: &mut impl Rng, n: usize, max_raw: i64, cfg: &FftConfig) -> Vec<ComplexFx> {
    (0..n)
        .map(|_| ComplexFx::from_raw(r.gen_range(-max_raw..=max_raw), r.gen_range(-max_raw..=max_raw), cfg.word_fmt()).unwrap())
        .collect()
}

fn max_rel_err(got: &[Complex64], want: &Spectrum) -> f64 {
    let scale = want.bins().iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    got.iter().zip(want.bins()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
}

#[test]
fn float_twin_matches_dft() {
    let mut r = rng(31);
    for n in [4usize, 16, 64, 256, 1024] {
        let mut twin = FloatPipeline::new(n).unwrap();
        for _ in 0..5 {
            let x = random_frame(&mut r, n, 1.0);
            let err = max_rel_err(&twin.frame(&x).unwrap(), &dft(&x));
            assert!(err < 1e-9, "N={n}: {err:e}");
        }
    }
}

#[test]
fn emitted_indices_cover_every_bin_once() {
    let mut r = rng(32);
    for n in [4usize, 16, 64, 256] {
        let cfg = FftConfig::new(n, 16, 15).unwrap();
        let mut p = FftPipeline::new(cfg.clone()).unwrap();
        for _frame in 0..3 {
            let mut idx = Vec::new();
            for x in on_grid(&mut r, n, 1000, &cfg) {
                idx.extend(p.push(x).unwrap().map(|(_, i)| i));
            }
            idx.extend(p.flush().unwrap().into_iter().map(|(_, i)| i));
            let order = idx.clone();
            idx.sort_unstable();
            assert_eq!(idx, (0..n).collect::<Vec<_>>());
            let bits = n.trailing_zeros();
            assert_eq!(order, (0..n).map(|s| bit_reverse(s, bits).unwrap()).collect::<Vec<_>>());
        }
    }
}

#[test]
fn identical_frames_give_identical_spectra() {
    let mut r = rng(33);
    let cfg = FftConfig::new(64, 16, 15).unwrap();
    let mut p = FftPipeline::new(cfg.clone()).unwrap();
    let a = on_grid(&mut r, 64, 4000, &cfg);
    let b = on_grid(&mut r, 64, 4000, &cfg);
    let first = p.frame(&a).unwrap();
    let other = p.frame(&b).unwrap();
    assert_eq!(p.frame(&a).unwrap(), first);
    assert_eq!(p.frame(&b).unwrap(), other);
    let mut fresh = FftPipeline::new(cfg).unwrap();
    assert_eq!(fresh.frame(&b).unwrap(), other);
}

#[test]
fn every_bin_within_worst_case_bound() {
    let mut r = rng(34);
    for n in [16usize, 64, 256, 1024] {
        let cfg = FftConfig::new(n, 16, 15).unwrap();
        let lsb = cfg.word_fmt().lsb();
        // keep the peak after the unscaled growth below full scale
        let max_raw = (1i64 << 15) >> (cfg.stages() as u32 - cfg.total_shift() + 1);
        let bound = error_bound_lsb(&cfg, max_raw as f64 * lsb * 2f64.sqrt());
        let mut p = FftPipeline::new(cfg.clone()).unwrap();
        for _ in 0..4 {
            let x = on_grid(&mut r, n, max_raw, &cfg);
            let xr: Vec<Complex64> = x.iter().map(|z| z.to_complex()).collect();
            let want = dft(&xr).scaled(cfg.total_gain());
            for (k, (got, w)) in p.frame(&x).unwrap().iter().zip(want.bins()).enumerate() {
                let d = got.to_complex() - w;
                assert!(d.re.abs() <= bound * lsb && d.im.abs() <= bound * lsb, "N={n} bin {k}: {d} > {bound} LSB");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval_within_noise_budget(seed in any::<u64>(), max_raw in 1i64..1024) {
        let mut r = rng(seed);
        let cfg = FftConfig::new(64, 16, 15).unwrap();
        let lsb = cfg.word_fmt().lsb();
        let x = on_grid(&mut r, 64, max_raw, &cfg);
        let out = FftPipeline::new(cfg.clone()).unwrap().frame(&x).unwrap();
        let g = cfg.total_gain();
        let ex: f64 = x.iter().map(|z| z.to_complex().norm_sqr()).sum();
        let eo: f64 = out.iter().map(|z| z.to_complex().norm_sqr()).sum::<f64>() / 64.0;
        let e = 2f64.sqrt() * error_bound_lsb(&cfg, max_raw as f64 * lsb * 2f64.sqrt()) * lsb;
        let budget = 2.0 * g * e * ex.sqrt() + e * e;
        prop_assert!((ex * g * g - eo).abs() <= budget, "{} > {}", (ex * g * g - eo).abs(), budget);
    }

    #[test]
    fn random_frame_mse_within_budget(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cfg = FftConfig::new(64, 16, 15).unwrap();
        let lsb = cfg.word_fmt().lsb();
        let x = on_grid(&mut r, 64, 4096, &cfg);
        let out = FftPipeline::new(cfg.clone()).unwrap().frame(&x).unwrap();
        let xr: Vec<Complex64> = x.iter().map(|z| z.to_complex()).collect();
        let want = dft(&xr).scaled(cfg.total_gain());
        let got = Spectrum::new(out.iter().map(|z| z.to_complex()).collect());
        let e = 2f64.sqrt() * error_bound_lsb(&cfg, 4096.0 * lsb * 2f64.sqrt()) * lsb;
        prop_assert!(mse(&want, &got).unwrap() <= 64.0 * e * e);
    }

    #[test]
    fn twin_is_linear(seed in any::<u64>(), a in -4.0f64..4.0) {
        let mut r = rng(seed);
        let mut twin = FloatPipeline::new(64).unwrap();
        let x = random_frame(&mut r, 64, 1.0);
        let y = random_frame(&mut r, 64, 1.0);
        let sum: Vec<Complex64> = x.iter().zip(&y).map(|(p, q)| p * a + q).collect();
        let fx = twin.frame(&x).unwrap();
        let fy = twin.frame(&y).unwrap();
        for (k, v) in twin.frame(&sum).unwrap().iter().enumerate() {
            prop_assert!((v - (fx[k] * a + fy[k])).norm() < 1e-9);
        }
    }
}
