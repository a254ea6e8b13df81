use std::f64::consts::PI;

use lle_core::geometry::*;
use lle_core::landau_kernel::Point2;
use lle_core::specfun::integrate_adaptive;
use proptest::prelude::*;

fn lens_complement(r: f64, d: f64) -> f64 {
    let lens = 2.0 * r * r * (d / (2.0 * r)).acos() - 0.5 * d * (4.0 * r * r - d * d).sqrt();
    PI * r * r - lens
}

// r(θ) = 1 + 0.15 cos 3θ
fn trefoil() -> Region {
    Region::star(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.15]).unwrap()
}

#[test]
fn disk_normal_and_curvature() {
    let d = Region::disk(2.0).unwrap();
    for k in 0..16 {
        assert!((d.boundary_point(k as f64 * 0.4).unwrap().curvature - 0.5).abs() < 1e-14);
    }
    let b = d.boundary_point(0.0).unwrap();
    assert!(
        (b.point.x1 - 2.0).abs() < 1e-15
            && (b.normal.x1 + 1.0).abs() < 1e-15
            && b.normal.x2.abs() < 1e-15
    );
    assert!((d.area() - 4.0 * PI).abs() < 1e-12 && (d.perimeter() - 4.0 * PI).abs() < 1e-12);
}

#[test]
fn star_curvature_matches_finite_differences() {
    let s = Region::star(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.2]).unwrap();
    let h = 1e-4;
    let x = |t: f64| s.boundary_point(t).unwrap().point;
    for k in 0..40 {
        let t = k as f64 * 2.0 * PI / 40.0 + 0.013;
        let (a, b, c) = (x(t - h), x(t), x(t + h));
        let d1 = (c - a).scale(0.5 / h);
        let d2 = (c - b.scale(2.0) + a).scale(1.0 / (h * h));
        let kappa = d1.symplectic(&d2) / d1.norm().powi(3);
        let bp = s.boundary_point(t).unwrap();
        assert!(
            (bp.curvature - kappa).abs() < 1e-6,
            "θ={t}: {} vs {kappa}",
            bp.curvature
        );
        // Inward normal is the left normal of the counterclockwise tangent.
        let left = d1.j().scale(-1.0 / d1.norm());
        assert!((bp.normal - left).norm() < 1e-6 || (bp.normal + left).norm() > 1.9);
    }
}

#[test]
fn lens_agrees_with_monte_carlo() {
    let d = Region::disk(1.0).unwrap();
    let fam = TranslateFamily::new(vec![Point2::new(1.0, 0.0)], 0.5).unwrap();
    let exact = intersect_translates_area(&d, &fam).unwrap();
    assert_eq!(exact.method, "lens");
    assert!((exact.complement - lens_complement(1.0, 0.5)).abs() < 1e-14);
    let mc = monte_carlo_complement(&d, &fam, 10_000_000, 11);
    let se = mc.std_error.unwrap();
    assert!(
        (mc.complement - exact.complement).abs() < 3.0 * se,
        "{} ± {se} vs {}",
        mc.complement,
        exact.complement
    );
}

#[test]
fn zero_scale_and_slab() {
    let sq = Region::polygon(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap();
    let v = vec![Point2::new(1.0, 0.0)];
    for r in [&sq, &trefoil(), &Region::disk(1.0).unwrap()] {
        let a =
            intersect_translates_area(r, &TranslateFamily::new(v.clone(), 0.0).unwrap()).unwrap();
        assert_eq!(a.complement, 0.0);
    }
    let t1 = roccaforte_first_order(&sq, &v).unwrap();
    assert!((t1 - 1.0).abs() < 1e-15);
    for k in 1..10 {
        let eps = 2f64.powi(-k);
        let a =
            intersect_translates_area(&sq, &TranslateFamily::new(v.clone(), eps).unwrap()).unwrap();
        assert!((a.complement - eps * t1).abs() < 1e-15);
    }
}

#[test]
fn disk_terms_match_adaptive_oracle() {
    let d = Region::disk(1.0).unwrap();
    let v = [Point2::new(1.0, 0.0)];
    let t = roccaforte_terms(&d, &v).unwrap();
    // Inward normal at angle θ is −(cos θ, sin θ).
    let first = integrate_adaptive(|th| (-th.cos()).max(0.0), 0.0, 2.0 * PI, 1e-13)
        .unwrap()
        .value;
    let second = 0.5
        * integrate_adaptive(
            |th| {
                if th.cos() < 0.0 {
                    1.0 - 2.0 * th.cos().powi(2)
                } else {
                    0.0
                }
            },
            0.0,
            2.0 * PI,
            1e-13,
        )
        .unwrap()
        .value;
    assert!((t.first - first).abs() < 1e-10 && (first - 2.0).abs() < 1e-10);
    assert!((t.second.unwrap() - second).abs() < 1e-10);
    assert!(!t.degenerate);
}

#[test]
fn expansion_residuals_vanish() {
    let vs = [
        vec![Point2::new(1.0, 0.0)],
        vec![
            Point2::new(1.0, 0.3),
            Point2::new(-0.4, 0.8),
            Point2::new(0.2, -0.9),
        ],
    ];
    let opts = AreaOptions {
        tol: 1e-13,
        ..Default::default()
    };
    for region in [Region::disk(1.0).unwrap(), trefoil()] {
        for v in &vs {
            let t = roccaforte_terms(&region, v).unwrap();
            let (mut p1, mut p2) = (f64::INFINITY, f64::INFINITY);
            for k in 3..=9 {
                let eps = 2f64.powi(-k);
                let a = intersect_translates_area_with(
                    &region,
                    &TranslateFamily::new(v.clone(), eps).unwrap(),
                    opts,
                )
                .unwrap();
                let r1 = ((a.complement - eps * t.first) / eps).abs();
                let r2 = ((a.complement - eps * t.first - eps * eps * t.second.unwrap())
                    / (eps * eps))
                    .abs();
                assert!(r1 < p1 && r2 < p2, "k={k}: {r1} {r2}");
                (p1, p2) = (r1, r2);
            }
            assert!(p1 < 3e-3 && p2 < 2e-3);
        }
    }
}

#[test]
fn polygon_has_no_second_order() {
    let tri = Region::polygon(vec![
        Point2::new(0.0, 0.0),
        Point2::new(2.0, 0.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap();
    assert!(roccaforte_second_order(&tri, &[Point2::new(1.0, 1.0)]).is_err());
    assert!(tri.boundary_point(0.3).is_err());
}

#[test]
fn json_schema() {
    let r = Region::from_json(r#"{"type":"star","coeffs":[1.0,0.0,0.0,0.0,0.0,0.15]}"#).unwrap();
    assert_eq!(r, trefoil());
    assert!(Region::from_json(r#"{"type":"disk","R":1.0,"extra":1}"#).is_err());
    assert!(Region::from_json(r#"{"type":"star","coeffs":[0.1,0.0,0.5]}"#).is_err());
    let p = Region::from_json(r#"{"type":"polygon","vertices":[[0,0],[1,0],[0,1]]}"#).unwrap();
    assert!((p.area() - 0.5).abs() < 1e-15);
}

fn vectors() -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Point2::new(a, b)),
        1..=4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn first_order_positive_and_rotation_invariant(vs in vectors(), phi in 0.0f64..std::f64::consts::TAU) {
        let s = trefoil();
        let t1 = roccaforte_first_order(&s, &vs).unwrap();
        let nonzero = vs.iter().any(|v| v.norm() > 0.0);
        prop_assert!(t1 >= 0.0);
        prop_assert_eq!(t1 > 0.0, nonzero);
        let rv: Vec<Point2> = vs.iter().map(|v| v.rotate(phi)).collect();
        let t1r = roccaforte_first_order(&s.rotated(phi), &rv).unwrap();
        prop_assert!((t1 - t1r).abs() < 1e-10, "{} vs {}", t1, t1r);
        let cut = Region::star(vec![1.0, 0.1, -0.05, 0.12]).unwrap();
        let t1c = roccaforte_first_order(&cut, &vs).unwrap();
        let t1cr = roccaforte_first_order(&cut.rotated(phi), &rv).unwrap();
        prop_assert!((t1c - t1cr).abs() < 1e-10, "{} vs {}", t1c, t1cr);
    }

    #[test]
    fn first_order_law(vs in vectors()) {
        prop_assume!(vs.iter().any(|v| v.norm() > 0.05));
        for region in [Region::disk(1.0).unwrap(), trefoil()] {
            let t1 = roccaforte_first_order(&region, &vs).unwrap();
            let r = |eps: f64| {
                let a = intersect_translates_area(&region, &TranslateFamily::new(vs.clone(), eps).unwrap()).unwrap();
                ((a.complement - eps * t1) / eps).abs()
            };
            let (a, b) = (r(2f64.powi(-5)), r(2f64.powi(-8)));
            prop_assert!(b < a.max(1e-6) && b < 0.02, "{} {}", a, b);
        }
    }
}
