use std::f64::consts::PI;

use lle_core::coeffs::*;
use lle_core::landau_kernel::{k_kernel, LevelSelector};
use lle_core::linalg::jacobi_eigenvalues;
use lle_core::specfun::{composite_gauss_legendre, gauss_legendre, lambda_ell};
use proptest::prelude::*;

fn lambda0(x: f64) -> f64 {
    0.5 * libm::erfc(x)
}

fn lambda1(x: f64) -> f64 {
    0.5 * libm::erfc(x) + x * (-x * x).exp() / PI.sqrt()
}

/// Trapezoid on a dense grid of ∫ dξ/2π (λ^m − λ).
fn dense_moment(lam: impl Fn(f64) -> f64, m: i32) -> f64 {
    let h = 1e-3;
    (-12_000..=12_000)
        .map(|i| {
            let l = lam(i as f64 * h);
            l.powi(m) - l
        })
        .sum::<f64>()
        * h
        / (2.0 * PI)
}

/// Eigenvalues of the Nyström matrix of k_kernel on [ξ, b].
fn nystrom_k(n: usize, xi: f64, b: f64, nodes: usize) -> Vec<f64> {
    let rule = gauss_legendre(nodes, xi, b).unwrap();
    let mut a = vec![0.0; nodes * nodes];
    for i in 0..nodes {
        for j in 0..nodes {
            a[i * nodes + j] = (rule.weights[i] * rule.weights[j]).sqrt()
                * k_kernel(n, xi, rule.nodes[i], rule.nodes[j]);
        }
    }
    jacobi_eigenvalues(&mut a, nodes).unwrap()
}

#[test]
fn renyi_examples() {
    for a in [0.5, 1.0, 2.0, 3.5] {
        assert_eq!(renyi_h(a, 0.0).unwrap(), 0.0);
        assert!(renyi_h(a, 1.0).unwrap().abs() < 1e-15);
    }
    assert!((renyi_h(1.0, 0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
    assert!((renyi_h(2.0, 0.25).unwrap() - (8.0f64 / 5.0).ln()).abs() < 1e-15);
    assert!(renyi_h(1.0, 1.1).is_err());
}

#[test]
fn gram_examples() {
    let g = gram_matrix(0, 0.7).unwrap();
    assert_eq!(g.len(), 1);
    assert!((g[0] - lambda_ell(0, 0.7).unwrap()).abs() < 1e-15);
    let g = gram_matrix(4, -20.0).unwrap();
    for i in 0..5 {
        for j in 0..5 {
            let e = if i == j { 1.0 } else { 0.0 };
            assert!((g[i * 5 + j] - e).abs() < 1e-10);
        }
    }
    let spec = gram_spectrum(2, 0.3).unwrap();
    let ny = nystrom_k(2, 0.3, 10.3, 200);
    for (k, (a, b)) in spec.eigenvalues.iter().zip(&ny).take(3).enumerate() {
        assert!((a - b).abs() < 1e-8, "{k}: {a} vs {b}");
    }
}

#[test]
fn gram_traces_match_nystrom() {
    let f = SpectralFunction::renyi(1.0).unwrap();
    for n in 0..=4 {
        for i in 0..=8 {
            let xi = -6.0 + 1.5 * i as f64;
            let spec = gram_spectrum(n, xi).unwrap();
            assert!(spec.eigenvalues.iter().all(|&m| (0.0..=1.0).contains(&m)));
            let sum: f64 = spec.eigenvalues.iter().sum();
            assert!((sum - spec.trace).abs() < 1e-10);
            let lam_sum: f64 = (0..=n).map(|l| lambda_ell(l, xi).unwrap()).sum();
            assert!((sum - lam_sum).abs() < 1e-10);
            let hi = xi.max(0.0) + 12.0;
            let ny: f64 = nystrom_k(n, xi, hi, 300)
                .iter()
                .map(|&m| f.eval(m.clamp(0.0, 1.0)))
                .sum();
            let gr: f64 = spec.eigenvalues.iter().map(|&m| f.eval(m)).sum();
            assert!((ny - gr).abs() < 1e-7, "n={n} ξ={xi}: {ny} vs {gr}");
        }
    }
}

#[test]
fn spectral_tail_decay() {
    for f in [
        SpectralFunction::gtilde(),
        SpectralFunction::renyi(1.0).unwrap(),
    ] {
        let q = f.endpoint_exponent();
        for n in [0usize, 2] {
            let norm = |xi: f64| -> f64 {
                let s = gram_spectrum(n, xi).unwrap();
                s.eigenvalues
                    .iter()
                    .map(|&m| (f.eval(m) - f.value_at_one() * m).abs())
                    .sum()
            };
            let c = (0..=8)
                .map(|i| {
                    let x = 2.0 + 0.5 * i as f64;
                    norm(x) * (0.9 * q * x * x).exp()
                })
                .fold(0.0, f64::max);
            for i in 0..16 {
                let x = 2.125 + 0.25 * i as f64;
                assert!(
                    norm(x) <= 2.0 * c * (-0.9 * q * x * x).exp(),
                    "{f} n={n} ξ={x}"
                );
            }
        }
    }
}

#[test]
fn renyi_coefficients_positive() {
    for n in 0..=3 {
        for a in [0.5, 1.0, 2.0] {
            let m = coeff_m_le_n(n, &SpectralFunction::renyi(a).unwrap(), DEFAULT_TOL).unwrap();
            assert!(m.value > 0.0 && m.value.is_finite());
        }
    }
}

#[test]
fn halving_tolerance_within_estimate() {
    for (n, f) in [(0usize, "renyi:1"), (1, "renyi:0.5"), (2, "monomial:3")] {
        let f: SpectralFunction = f.parse().unwrap();
        let a = coeff_m_le_n(n, &f, 1e-6).unwrap();
        let b = coeff_m_le_n(n, &f, 5e-7).unwrap();
        assert!(
            (a.value - b.value).abs() <= a.error.max(1e-15),
            "{} vs {} ± {}",
            a.value,
            b.value,
            a.error
        );
    }
}

#[test]
fn lowest_level_coincidence() {
    for a in [0.5, 1.0, 2.0] {
        let f = SpectralFunction::renyi(a).unwrap();
        let single = coeff_m_ell(0, &f, DEFAULT_TOL).unwrap().value;
        let upto = coeff_m_le_n(0, &f, DEFAULT_TOL).unwrap().value;
        assert!((single - upto).abs() < 1e-9);
        let sel = coeff_for(LevelSelector::UpTo(0), &f, DEFAULT_TOL)
            .unwrap()
            .value;
        assert_eq!(sel, upto);
    }
    let id = SpectralFunction::monomial(1).unwrap();
    for n in 0..3 {
        assert!(coeff_m_le_n(n, &id, DEFAULT_TOL).unwrap().value.abs() < 1e-14);
    }
}

#[test]
fn trace_moment_examples() {
    let t = trace_moment_k(3, 0.4, 1).unwrap();
    let lam: f64 = (0..=3).map(|l| lambda_ell(l, 0.4).unwrap()).sum();
    assert!((t.spectral - lam).abs() < 1e-12 && (t.chain - lam).abs() < 1e-12);
    assert!((t.christoffel_darboux.unwrap() - lam).abs() < 1e-10);
    for m in 1..5 {
        let t = trace_moment_k(0, -0.2, m).unwrap();
        assert!((t.spectral - lambda_ell(0, -0.2).unwrap().powi(m as i32)).abs() < 1e-14);
    }
    let t = trace_moment_k(2, 0.7, 3).unwrap();
    assert!((t.spectral - t.chain).abs() < 1e-10);
}

#[test]
fn moment_coefficients_against_dense_grid() {
    for l in 0..4 {
        assert!(poly_boundary_coeff(l, 1).unwrap().abs() < 1e-15);
    }
    let m02 = poly_boundary_coeff(0, 2).unwrap();
    assert!(
        (m02 - coeff_m_ell(0, &SpectralFunction::monomial(2).unwrap(), 1e-10)
            .unwrap()
            .value)
            .abs()
            < 1e-10
    );
    assert!((m02 - dense_moment(lambda0, 2)).abs() < 1e-10);
    assert!(m02 < 0.0);
    let m14 = poly_boundary_coeff(1, 4).unwrap();
    assert!((m14 - dense_moment(lambda1, 4)).abs() < 1e-9);
}

/// M_{≤1}(p) for a Chebyshev interpolant p of h₁, with tr p(K) computed by a
/// matrix Clenshaw recurrence on the Gram matrix.
fn polynomial_route(deg: usize) -> f64 {
    let h = |t: f64| renyi_h(1.0, t).unwrap();
    let nodes: Vec<f64> = (0..=deg)
        .map(|k| 0.5 + 0.5 * (PI * (k as f64 + 0.5) / (deg as f64 + 1.0)).cos())
        .collect();
    let c: Vec<f64> = (0..=deg)
        .map(|j| {
            let s: f64 = (0..=deg)
                .map(|k| {
                    h(nodes[k]) * (j as f64 * PI * (k as f64 + 0.5) / (deg as f64 + 1.0)).cos()
                })
                .sum();
            s * if j == 0 { 1.0 } else { 2.0 } / (deg as f64 + 1.0)
        })
        .collect();
    let cheb = |t: f64| {
        let x = 2.0 * t - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &cj in c[1..].iter().rev() {
            let b0 = 2.0 * x * b1 - b2 + cj;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + c[0]
    };
    // Pin the endpoints so p(0) = 0 and p(1) = h(1).
    let (e0, e1) = (cheb(0.0), cheb(1.0) - h(1.0));
    let rule = composite_gauss_legendre(-12.0, 12.0, 0.25, 16).unwrap();
    rule.integrate(|xi| {
        let g = gram_matrix(1, xi).unwrap();
        let mul = |a: &[f64; 4], b: &[f64; 4]| {
            [
                a[0] * b[0] + a[1] * b[2],
                a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3],
            ]
        };
        let x = [2.0 * g[0] - 1.0, 2.0 * g[1], 2.0 * g[2], 2.0 * g[3] - 1.0];
        let (mut b1, mut b2) = ([0.0; 4], [0.0; 4]);
        for &cj in c[1..].iter().rev() {
            let xb = mul(&x, &b1);
            let b0 = [
                2.0 * xb[0] - b2[0] + cj,
                2.0 * xb[1] - b2[1],
                2.0 * xb[2] - b2[2],
                2.0 * xb[3] - b2[3] + cj,
            ];
            b2 = b1;
            b1 = b0;
        }
        let xb = mul(&x, &b1);
        let tr_p = xb[0] + xb[3] - b2[0] - b2[3] + 2.0 * c[0];
        let tr_g = g[0] + g[3];
        tr_p - 2.0 * e0 - e1 * tr_g + e0 * tr_g - h(1.0) * tr_g
    }) / (2.0 * PI)
}

#[test]
fn polynomial_approximants_converge() {
    let target = coeff_m_le_n(1, &SpectralFunction::renyi(1.0).unwrap(), DEFAULT_TOL)
        .unwrap()
        .value;
    let errs: Vec<f64> = [8, 32, 128]
        .iter()
        .map(|&d| (polynomial_route(d) - target).abs())
        .collect();
    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
    assert!(errs[2] < 2e-3, "{errs:?}");
}

proptest! {
    #[test]
    fn holder_bound_holds(a in 0.3f64..4.0) {
        let f = SpectralFunction::renyi(a).unwrap();
        let q = f.endpoint_exponent();
        let c = f.holder_constant();
        prop_assert_eq!(f.eval(0.0), 0.0);
        for i in 0..1000 {
            let t = (i as f64 + 0.5) / 1000.0;
            let lhs = (f.eval(t) - f.value_at_one() * t).abs();
            prop_assert!(lhs <= c * (t * (1.0 - t)).powf(q) * (1.0 + 1e-12), "t={}", t);
        }
    }

    #[test]
    fn gram_spectrum_in_unit_interval(n in 0usize..=6, xi in -8.0f64..8.0) {
        let s = gram_spectrum(n, xi).unwrap();
        prop_assert_eq!(s.eigenvalues.len(), n + 1);
        prop_assert!(s.eigenvalues.iter().all(|&m| (0.0..=1.0).contains(&m)));
    }
}
