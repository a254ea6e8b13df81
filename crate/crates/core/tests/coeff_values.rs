use lle_core::coeffs::{
    coeff_m_ell, coeff_m_le_n, poly_boundary_coeff, SpectralFunction, DEFAULT_TOL,
};

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() < tol, "{a} vs {b}");
}

#[test]
fn lowest_level_renyi_one() {
    let f = SpectralFunction::renyi(1.0).unwrap();
    let m = coeff_m_ell(0, &f, DEFAULT_TOL).unwrap();
    close(m.value, 0.2032908, 5e-7);
    assert!(m.error < DEFAULT_TOL);
}

#[test]
fn frozen_coefficients() {
    let table = [
        (0usize, "renyi:2", 0.158430),
        (0, "renyi:0.5", 0.278936),
        (1, "renyi:1", 0.335059),
        (1, "renyi:2", 0.289852),
        (2, "renyi:1", 0.427869),
        (2, "renyi:2", 0.377160),
        (1, "monomial:2", -0.111114),
        (1, "monomial:3", -0.166671),
        (2, "monomial:2", -0.143853),
        (2, "monomial:3", -0.215779),
    ];
    for (l, f, v) in table {
        let f: SpectralFunction = f.parse().unwrap();
        close(coeff_m_ell(l, &f, DEFAULT_TOL).unwrap().value, v, 2e-6);
    }
    let h1 = SpectralFunction::renyi(1.0).unwrap();
    close(
        coeff_m_le_n(1, &h1, DEFAULT_TOL).unwrap().value,
        0.356990,
        2e-6,
    );
}

#[test]
fn monomials_match_integrated_by_parts_route() {
    for l in 0..4 {
        for m in 2..5u32 {
            let a = coeff_m_ell(l, &SpectralFunction::monomial(m).unwrap(), DEFAULT_TOL)
                .unwrap()
                .value;
            let b = poly_boundary_coeff(l, m).unwrap();
            close(a, b, 1e-9);
        }
    }
    close(
        poly_boundary_coeff(0, 2).unwrap(),
        -0.063_493_635_934_240_97,
        1e-12,
    );
    close(
        poly_boundary_coeff(0, 3).unwrap(),
        -0.095_240_453_901_361_46,
        1e-12,
    );
}
