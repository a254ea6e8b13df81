use std::f64::consts::PI;

use lle_core::coeffs::{poly_boundary_coeff, SpectralFunction};
use lle_core::disk_spectra::{disk_spectrum, schatten_cross_norm};
use lle_core::geometry::Region;
use lle_core::landau_kernel::{LevelSelector, MagneticSetup, Point2};
use lle_core::region_sim::*;

fn setup() -> MagneticSetup {
    MagneticSetup::new(1.0).unwrap()
}

fn unit_area_trefoil() -> Region {
    let c = 1.0 / (PI * (1.0 + 0.5 * 0.15 * 0.15)).sqrt();
    Region::star(vec![c, 0.0, 0.0, 0.0, 0.0, 0.15 * c]).unwrap()
}

/// Largest eigenvalue gap over the values above `floor` (the longer list is
/// truncated to the length of the shorter one).
fn max_gap(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let a: Vec<f64> = a.iter().copied().filter(|&x| x > floor).collect();
    let b: Vec<f64> = b.iter().copied().filter(|&x| x > floor).collect();
    let n = a.len().min(b.len());
    let mut gap: f64 = 0.0;
    for i in 0..n {
        gap = gap.max((a[i] - b[i]).abs());
    }
    for x in a[n..].iter().chain(&b[n..]) {
        gap = gap.max(*x);
    }
    gap
}

#[test]
fn unit_area_star_trace() {
    let s = unit_area_trefoil();
    assert!((s.area() - 1.0).abs() < 1e-12);
    for sel in [LevelSelector::Single(0), LevelSelector::UpTo(1)] {
        let spec = region_spectrum(setup(), sel, &s, 4.0, Resolution::auto(1.0, &s, 4.0)).unwrap();
        let expected = sel.count() as f64 * 16.0 / (2.0 * PI);
        assert!(
            (spec.trace - expected).abs() < 1e-3 * expected,
            "{} vs {expected}",
            spec.trace
        );
        let sum: f64 = spec.eigenvalues.iter().sum();
        assert!((sum - spec.trace).abs() < 1e-3 * expected);
        assert_eq!(spec.solver, "nystrom2d");
    }
}

#[test]
fn disk_agrees_with_sector_solver() {
    let d = Region::disk(1.0).unwrap();
    let sel = LevelSelector::UpTo(1);
    let ny = region_spectrum(setup(), sel, &d, 4.0, Resolution::auto(1.0, &d, 4.0)).unwrap();
    let sec = disk_spectrum(setup(), sel, 4.0).unwrap();
    assert!(max_gap(&ny.eigenvalues, &sec.eigenvalues, 1e-6) < 1e-4);
}

#[test]
fn doubling_resolution_is_converged() {
    let d = Region::disk(1.0).unwrap();
    let sel = LevelSelector::UpTo(1);
    let res = Resolution::auto(1.0, &d, 4.0);
    let a = region_spectrum(setup(), sel, &d, 4.0, res).unwrap();
    let b = region_spectrum(setup(), sel, &d, 4.0, res.doubled()).unwrap();
    let gap = max_gap(&a.eigenvalues, &b.eigenvalues, 1e-4);
    assert!(gap < 1e-5, "{gap}");
}

#[test]
fn moment_two_matches_prediction() {
    // Σμ(1−μ) = tr P − tr P² ≈ −L√B|∂Λ|·M₀(t²).
    let m2 = poly_boundary_coeff(0, 2).unwrap();
    for region in [Region::disk(1.0).unwrap(), unit_area_trefoil()] {
        let l = 4.0;
        let spec = region_spectrum(
            setup(),
            LevelSelector::Single(0),
            &region,
            l,
            Resolution::auto(1.0, &region, l),
        )
        .unwrap();
        let got: f64 = spec.eigenvalues.iter().map(|m| m * (1.0 - m)).sum();
        let predicted = -l * region.perimeter() * m2;
        assert!((got - predicted).abs() < 0.5, "{got} vs {predicted}");
    }
}

#[test]
fn frobenius_route_matches_eigenvalues() {
    let s = unit_area_trefoil();
    let res = Resolution::auto(1.0, &s, 3.0);
    let spec = region_spectrum(setup(), LevelSelector::Single(0), &s, 3.0, res).unwrap();
    let tr2 = region_trace_square(setup(), LevelSelector::Single(0), &s, 3.0, res).unwrap();
    assert!(
        (spec.moment(2) - tr2).abs() < 1e-8,
        "{} vs {tr2}",
        spec.moment(2)
    );
}

#[test]
fn area_coefficient_from_quadratic_fit() {
    // f = t²: c2 = B|Λ|(n+1)f(1)/2π for the unit disk.
    let f = SpectralFunction::monomial(2).unwrap();
    for sel in [LevelSelector::Single(0), LevelSelector::UpTo(1)] {
        let pts: Vec<(f64, f64)> = (0..=6)
            .map(|i| {
                let l = 10.0 + 5.0 * i as f64;
                let spec = disk_spectrum(setup(), sel, l).unwrap();
                (l, spec.eigenvalues.iter().map(|&x| f.eval(x)).sum())
            })
            .collect();
        let fit = scaling_fit(
            &ScalingSeries::new(pts, serde_json::Value::Null).unwrap(),
            FitModel::Quadratic,
        )
        .unwrap();
        let expected = PI * sel.count() as f64 / (2.0 * PI);
        assert!(
            (fit.c2 - expected).abs() < 5e-3 * expected,
            "{} vs {expected}",
            fit.c2
        );
    }
}

#[test]
fn second_order_probe_trends() {
    let d = Region::disk(1.0).unwrap();
    let lin = second_order_probe(
        setup(),
        LevelSelector::Single(1),
        &d,
        &SpectralFunction::monomial(1).unwrap(),
        &[10.0, 20.0],
    )
    .unwrap();
    assert!(lin.iter().all(|(_, r)| r.abs() < 1e-8), "{lin:?}");
    let sq = second_order_probe(
        setup(),
        LevelSelector::Single(0),
        &d,
        &SpectralFunction::monomial(2).unwrap(),
        &[10.0, 40.0],
    )
    .unwrap();
    assert!(sq[1].1.abs() < sq[0].1.abs(), "{sq:?}");
    let cube = second_order_probe(
        setup(),
        LevelSelector::UpTo(1),
        &d,
        &SpectralFunction::monomial(3).unwrap(),
        &[10.0, 40.0],
    )
    .unwrap();
    assert!(cube[1].1.abs() < cube[0].1.abs(), "{cube:?}");
}

#[test]
fn square_schatten_spot_check() {
    // Same perimeter-normalized size as the disk up to an O(1) factor.
    let side = 2.0;
    let sq = Region::polygon(vec![
        Point2::new(-1.0, -1.0),
        Point2::new(1.0, -1.0),
        Point2::new(1.0, 1.0),
        Point2::new(-1.0, 1.0),
    ])
    .unwrap();
    let l = 2.0;
    let res = Resolution {
        radial: 14,
        angular: 0,
    };
    let spec = region_spectrum(setup(), LevelSelector::Single(0), &sq, l, res).unwrap();
    assert!((spec.trace - l * l * side * side / (2.0 * PI)).abs() < 1e-3);
    let s_sq = schatten_cross_norm(&spec, 1.0).unwrap() / (l * sq.perimeter());
    let disk = disk_spectrum(setup(), LevelSelector::Single(0), 4.0).unwrap();
    let s_disk = schatten_cross_norm(&disk, 1.0).unwrap() / (4.0 * 2.0 * PI);
    let ratio = s_sq / s_disk;
    assert!(ratio > 0.5 && ratio < 2.0, "{ratio}");
}

#[test]
fn series_csv_and_guards() {
    let s =
        ScalingSeries::new(vec![(1.0, 0.5), (2.0, 0.25)], serde_json::json!({"f": "t"})).unwrap();
    assert_eq!(s.to_csv(), "L,value\n1,0.5\n2,0.25\n");
    let d = Region::disk(1.0).unwrap();
    assert!(region_spectrum(
        setup(),
        LevelSelector::Single(0),
        &d,
        30.0,
        Resolution::auto(1.0, &d, 30.0)
    )
    .is_err());
}
