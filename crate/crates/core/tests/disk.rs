use std::f64::consts::PI;

use lle_core::coeffs::SpectralFunction;
use lle_core::disk_spectra::*;
use lle_core::landau_kernel::{LevelSelector, MagneticSetup};
use lle_core::specfun::{gamma_p, integrate_adaptive_complex};
use num_complex::Complex64;

fn setup(b: f64) -> MagneticSetup {
    MagneticSetup::new(b).unwrap()
}

#[test]
fn sector_kernel_matches_adaptive_oracle() {
    let s = setup(1.0);
    let v = radial_sector_kernel(s, LevelSelector::Single(0), 1, 1.0, 2.0).unwrap();
    let kernel = |phi: f64| {
        let d2 = 1.0 + 4.0 - 4.0 * phi.cos();
        let p = Complex64::from_polar((-d2 / 4.0).exp() / (2.0 * PI), 0.5 * 2.0 * phi.sin());
        p * Complex64::from_polar(1.0 / (2.0 * PI), -phi)
    };
    let (oracle, _) = integrate_adaptive_complex(kernel, 0.0, 2.0 * PI, 1e-14).unwrap();
    assert!((v - oracle.re).abs() < 1e-10, "{v} vs {}", oracle.re);
    assert!(oracle.im.abs() < 1e-12);
}

#[test]
fn sector_kernel_factorizes() {
    let s = setup(1.4);
    for sel in [LevelSelector::Single(2), LevelSelector::UpTo(3)] {
        for k in [-3i64, -1, 0, 2, 5] {
            for (r, t) in [(0.4, 1.7), (2.0, 2.5), (1.1, 1.1)] {
                let direct = radial_sector_kernel(s, sel, k, r, t).unwrap();
                let fac: f64 = sel
                    .levels()
                    .map(|l| sector_function(1.4, l, k, r) * sector_function(1.4, l, k, t))
                    .sum();
                assert!(
                    (direct - fac).abs() < 1e-12,
                    "{sel} k={k} r={r} s={t}: {direct} vs {fac}"
                );
            }
        }
    }
}

#[test]
fn sector_sum_rule() {
    let s = setup(1.0);
    let sel = LevelSelector::UpTo(1);
    let r = 1.5;
    let total: f64 = (-30..=30)
        .map(|k| radial_sector_kernel(s, sel, k, r, r).unwrap())
        .sum();
    assert!((total - 2.0 / (2.0 * PI)).abs() < 1e-12);
}

#[test]
fn trace_equals_density_times_area() {
    for (b, sel, r) in [
        (1.0, LevelSelector::UpTo(0), 20.0),
        (1.0, LevelSelector::UpTo(2), 12.0),
        (2.5, LevelSelector::Single(1), 7.0),
    ] {
        let spec = disk_spectrum(setup(b), sel, r).unwrap();
        let expect = sel.count() as f64 * b * r * r / 2.0;
        assert!(
            (spec.trace - expect).abs() < 1e-6 * expect,
            "{} vs {expect}",
            spec.trace
        );
        let f = SpectralFunction::monomial(1).unwrap();
        assert!((entropy_from_spectrum(&spec, &f) - expect).abs() < 1e-6 * expect);
    }
}

#[test]
fn lll_matches_sector_solver() {
    let r = 40.0;
    let spec = disk_spectrum(setup(1.0), LevelSelector::Single(0), r).unwrap();
    let m_max = 1300;
    let lll = lll_disk_eigenvalues(1.0, r, m_max).unwrap();
    let mut sorted: Vec<f64> = lll.iter().copied().filter(|&x| x >= spec.cutoff).collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(sorted.len(), spec.eigenvalues.len());
    for (a, b) in sorted.iter().zip(&spec.eigenvalues) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}

#[test]
fn lll_tail_decreases() {
    let ev = lll_disk_eigenvalues(1.0, 4.0, 60).unwrap();
    for w in ev[8..].windows(2) {
        assert!(w[1] < w[0]);
    }
    assert!((ev[5] - gamma_p(6.0, 8.0).unwrap()).abs() < 1e-15);
}

#[test]
fn top_sector_saturates() {
    let spec = disk_spectrum(setup(1.0), LevelSelector::UpTo(1), 30.0).unwrap();
    assert!((spec.eigenvalues[0] - 1.0).abs() < 1e-8);
}

#[test]
fn nystrom_sector_mode_agrees() {
    let s = setup(1.0);
    let sel = LevelSelector::UpTo(1);
    let a = disk_spectrum(s, sel, 3.0).unwrap();
    let b = disk_spectrum_with(s, sel, 3.0, DiskSolver::SectorNystrom, 1e-6).unwrap();
    let a: Vec<f64> = a.eigenvalues.into_iter().filter(|&x| x >= 1e-6).collect();
    assert_eq!(a.len(), b.eigenvalues.len());
    for (x, y) in a.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn entropy_stable_under_cutoff_halving() {
    let s = setup(1.0);
    let sel = LevelSelector::UpTo(0);
    let f = SpectralFunction::renyi(1.0).unwrap();
    let a = disk_spectrum_with(s, sel, 20.0, DiskSolver::Factored, 1e-12).unwrap();
    let b = disk_spectrum_with(s, sel, 20.0, DiskSolver::Factored, 5e-13).unwrap();
    let (ea, eb) = (entropy_from_spectrum(&a, &f), entropy_from_spectrum(&b, &f));
    assert!(ea > 0.0 && (ea - eb).abs() < 1e-6);
    assert!(cutoff_bias(&a, &f) < 1e-6);
}

#[test]
fn hilbert_schmidt_identity() {
    let spec = disk_spectrum(setup(1.0), LevelSelector::Single(0), 10.0).unwrap();
    let p2 = schatten_cross_norm(&spec, 2.0).unwrap();
    assert!((p2 - (spec.moment(1) - spec.moment(2))).abs() < 1e-10);
}

#[test]
fn schatten_grows_linearly() {
    let s = setup(1.0);
    let v: Vec<f64> = [20.0, 40.0]
        .iter()
        .map(|&r| {
            schatten_cross_norm(&disk_spectrum(s, LevelSelector::Single(0), r).unwrap(), 1.0)
                .unwrap()
        })
        .collect();
    let ratio = v[1] / v[0];
    assert!((1.8..=2.2).contains(&ratio), "{ratio}");
}

#[test]
fn spectrum_json_is_deterministic() {
    let s = setup(1.0);
    let a = disk_spectrum(s, LevelSelector::UpTo(1), 6.0)
        .unwrap()
        .to_json();
    let b = disk_spectrum(s, LevelSelector::UpTo(1), 6.0)
        .unwrap()
        .to_json();
    assert_eq!(a, b);
    let back: LocalSpectrum = serde_json::from_str(&a).unwrap();
    assert_eq!(back.to_json(), a);
}
