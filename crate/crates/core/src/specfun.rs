//! Orthogonal polynomials, Hermite functions, overlap integrals and quadrature.
//!
//! Hermite functions are normalized as
//! ψ_ℓ(t) = (√π 2^ℓ ℓ!)^{-1/2} H_ℓ(t) e^{-t²/2}, and the overlaps
//! λ_{ℓℓ'}(ξ) = ∫_ξ^∞ ψ_ℓ ψ_ℓ' are computed by adaptive Gauss–Legendre
//! quadrature.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest Hermite/Laguerre degree accepted by the checked entry points.
pub const MAX_LEVEL: usize = 60;

/// Absolute tolerance used for overlap integrals.
pub const OVERLAP_TOL: f64 = 1e-13;

const ADAPT_NODES: usize = 10;
const MAX_DEPTH: usize = 40;

fn check_level(ell: usize) -> Result<()> {
    if ell > MAX_LEVEL {
        return Err(Error::Capability(format!(
            "level {ell} exceeds supported cap {MAX_LEVEL}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Gamma function family

/// ln Γ(x) for x > 0 (Stirling series after upward shift).
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs x > 0, got {x}");
    let mut shift = 0.0;
    let mut y = x;
    while y < 15.0 {
        shift += y.ln();
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
    (y - 0.5) * y.ln() - y + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

/// ln(n!).
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Regularized lower incomplete gamma function P(a, x).
///
/// Series for x < a + 1, Lentz continued fraction for the complement otherwise.
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    if a <= 0.0 || !a.is_finite() {
        return Err(Error::Domain(format!("gamma_p needs a > 0, got {a}")));
    }
    if x < 0.0 || x.is_nan() {
        return Err(Error::Domain(format!("gamma_p needs x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let ln_pre = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut ap = a;
        for _ in 0..100_000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-17 {
                return Ok((sum.ln() + ln_pre).exp().min(1.0));
            }
        }
        Err(Error::Numeric(format!(
            "gamma_p series did not converge (a={a}, x={x})"
        )))
    } else {
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..100_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                let q = (ln_pre + h.ln()).exp();
                return Ok((1.0 - q).max(0.0));
            }
        }
        Err(Error::Numeric(format!(
            "gamma_p continued fraction did not converge (a={a}, x={x})"
        )))
    }
}

// ---------------------------------------------------------------------------
// Hermite

/// Physicists' Hermite polynomial H_ℓ(t) by the three-term recurrence.
///
/// ```
/// use lle_core::specfun::hermite_poly;
/// assert_eq!(hermite_poly(1, 2.0).unwrap(), 4.0);
/// ```
pub fn hermite_poly(ell: usize, t: f64) -> Result<f64> {
    check_level(ell)?;
    Ok(hermite_poly_unchecked(ell, t))
}

pub(crate) fn hermite_poly_unchecked(ell: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if ell == 0 {
        return prev;
    }
    let mut cur = 2.0 * t;
    for k in 1..ell {
        let next = 2.0 * t * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite function ψ_ℓ(t) with the normalization evaluated in log space.
pub fn hermite_fn(ell: usize, t: f64) -> Result<f64> {
    check_level(ell)?;
    // Recurrence with periodic rescaling, so only ln|H_ℓ| is ever needed.
    let mut log_scale = 0.0;
    let mut prev = 1.0f64;
    let mut cur = if ell == 0 { 1.0 } else { 2.0 * t };
    for k in 1..ell {
        let next = 2.0 * t * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 150.0 * std::f64::consts::LN_10;
        }
    }
    if cur == 0.0 {
        return Ok(0.0);
    }
    let ln_norm = 0.5
        * (0.5 * std::f64::consts::PI.ln()
            + ell as f64 * std::f64::consts::LN_2
            + ln_factorial(ell));
    let ln_abs = cur.abs().ln() + log_scale - 0.5 * t * t - ln_norm;
    Ok(cur.signum() * ln_abs.exp())
}

/// ψ_0(t), …, ψ_n(t) written into `out[0..=n]` by the normalized recurrence
/// ψ_{k+1} = √(2/(k+1)) t ψ_k − √(k/(k+1)) ψ_{k−1}.
pub fn hermite_fns(n: usize, t: f64, out: &mut [f64]) {
    assert!(out.len() > n);
    out[0] = std::f64::consts::PI.powf(-0.25) * (-0.5 * t * t).exp();
    if n == 0 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * t * out[0];
    for k in 1..n {
        let kf = k as f64;
        out[k + 1] = (2.0 / (kf + 1.0)).sqrt() * t * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}

// ---------------------------------------------------------------------------
// Laguerre

fn binomial(n: i64, r: i64) -> f64 {
    if r < 0 || n < 0 || r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    let mut acc = 1.0;
    for i in 1..=r {
        acc = acc * (n - r + i) as f64 / i as f64;
    }
    acc
}

/// Coefficients c_j of 𝓛_ℓ^{(k)}(z) = Σ_j c_j z^j.
pub fn laguerre_coefficients(ell: usize, k: i64) -> Result<Vec<f64>> {
    if k < -(ell as i64) {
        return Err(Error::Domain(format!(
            "laguerre superscript {k} below −{ell}"
        )));
    }
    let n = ell as i64 + k;
    let mut inv_fact = 1.0;
    let mut coeffs = Vec::with_capacity(ell + 1);
    for j in 0..=ell {
        if j > 0 {
            inv_fact /= j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(sign * inv_fact * binomial(n, ell as i64 - j as i64));
    }
    Ok(coeffs)
}

/// Generalized Laguerre polynomial 𝓛_ℓ^{(k)}(z), Horner on the explicit sum.
pub fn laguerre(ell: usize, k: i64, z: Complex64) -> Result<Complex64> {
    let c = laguerre_coefficients(ell, k)?;
    Ok(horner_complex(&c, z))
}

/// Real-argument version of [`laguerre`].
pub fn laguerre_real(ell: usize, k: i64, x: f64) -> Result<f64> {
    let c = laguerre_coefficients(ell, k)?;
    Ok(horner(&c, x))
}

pub(crate) fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &cj| acc * x + cj)
}

pub(crate) fn horner_complex(c: &[f64], z: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &cj| acc * z + cj)
}

// ---------------------------------------------------------------------------
// Gauss–Legendre

/// Nodes and weights of an interpolatory rule on `domain`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: (f64, f64),
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// The same rule carried affinely onto [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let (a0, b0) = self.domain;
        let s = (b - a) / (b0 - a0);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| a + (x - a0) * s).collect(),
            weights: self.weights.iter().map(|&w| w * s).collect(),
            domain: (a, b),
            exactness_degree: self.exactness_degree,
        }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn reference_rule(n: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&n) {
        return Ok(r.clone());
    }
    let rule = Arc::new(build_reference_rule(n)?);
    cache.lock().unwrap().insert(n, rule.clone());
    Ok(rule)
}

fn build_reference_rule(n: usize) -> Result<QuadratureRule> {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numeric(format!(
                "Gauss–Legendre Newton iteration failed for node {i} of {n}"
            )));
        }
        if n % 2 == 1 && i == half - 1 {
            x = 0.0;
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: (-1.0, 1.0),
        exactness_degree: 2 * n - 1,
    })
}

/// n-point Gauss–Legendre rule on [a, b].
///
/// ```
/// use lle_core::specfun::gauss_legendre;
/// let r = gauss_legendre(5, -1.0, 1.0).unwrap();
/// assert!((r.integrate(|t| t.powi(8)) - 2.0 / 9.0).abs() < 1e-14);
/// ```
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Domain("Gauss–Legendre rule needs n ≥ 1".into()));
    }
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Domain(format!(
            "Gauss–Legendre interval [{a}, {b}] is empty"
        )));
    }
    Ok(reference_rule(n)?.mapped(a, b))
}

/// Composite Gauss–Legendre rule with `per_panel` nodes on panels of width ≤ `panel`.
pub fn composite_gauss_legendre(
    a: f64,
    b: f64,
    panel: f64,
    per_panel: usize,
) -> Result<QuadratureRule> {
    let panels = ((b - a) / panel).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let base = reference_rule(per_panel)?;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let r = base.mapped(lo, lo + h);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        domain: (a, b),
        exactness_degree: 2 * per_panel - 1,
    })
}

// ---------------------------------------------------------------------------
// Adaptive quadrature

/// Result of an adaptive integration: value and accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

struct Adaptive<'a> {
    f: &'a mut dyn FnMut(f64, &mut [f64]),
    dim: usize,
    rule: Arc<QuadratureRule>,
    scratch: Vec<f64>,
}

impl Adaptive<'_> {
    /// Panel integrals followed by the panel integrals of |f|.
    fn panel(&mut self, a: f64, b: f64) -> Vec<f64> {
        let d = self.dim;
        let mut acc = vec![0.0; 2 * d];
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        for (&x, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
            (self.f)(c + h * x, &mut self.scratch);
            for (k, v) in self.scratch.iter().enumerate() {
                acc[k] += w * h * v;
                acc[d + k] += (w * h * v).abs();
            }
        }
        acc
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        b: f64,
        whole: &[f64],
        tol: f64,
        depth: usize,
        acc: &mut [f64],
        err: &mut f64,
    ) -> Result<()> {
        let m = 0.5 * (a + b);
        let left = self.panel(a, m);
        let right = self.panel(m, b);
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for k in 0..self.dim {
            diff = diff.max((left[k] + right[k] - whole[k]).abs());
            scale = scale.max(left[self.dim + k] + right[self.dim + k]);
        }
        if diff <= tol || diff <= 64.0 * f64::EPSILON * scale {
            for k in 0..self.dim {
                acc[k] += left[k] + right[k];
            }
            *err += diff;
            return Ok(());
        }
        if depth >= MAX_DEPTH {
            return Err(Error::Accuracy {
                message: format!("adaptive quadrature hit depth {MAX_DEPTH} on [{a}, {b}]"),
                achieved: diff,
            });
        }
        self.refine(a, m, &left, 0.5 * tol, depth + 1, acc, err)?;
        self.refine(m, b, &right, 0.5 * tol, depth + 1, acc, err)
    }
}

/// Adaptive bisection for a vector-valued integrand sharing one mesh.
///
/// The error estimate on each panel compares a 10-point Gauss–Legendre value
/// with the sum over its two halves.
pub fn integrate_adaptive_vec(
    f: &mut dyn FnMut(f64, &mut [f64]),
    dim: usize,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<(Vec<f64>, f64)> {
    if a == b {
        return Ok((vec![0.0; dim], 0.0));
    }
    let mut ad = Adaptive {
        f,
        dim,
        rule: reference_rule(ADAPT_NODES)?,
        scratch: vec![0.0; dim],
    };
    let whole = ad.panel(a, b);
    let mut acc = vec![0.0; dim];
    let mut err = 0.0;
    ad.refine(a, b, &whole, abs_tol, 0, &mut acc, &mut err)?;
    Ok((acc, err))
}

/// Scalar adaptive quadrature of `f` over [a, b] to absolute tolerance `abs_tol`.
pub fn integrate_adaptive(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Integral> {
    let mut g = |x: f64, out: &mut [f64]| out[0] = f(x);
    let (v, e) = integrate_adaptive_vec(&mut g, 1, a, b, abs_tol)?;
    Ok(Integral {
        value: v[0],
        error: e,
    })
}

/// Adaptive quadrature of a complex-valued integrand.
pub fn integrate_adaptive_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<(Complex64, f64)> {
    let mut g = |x: f64, out: &mut [f64]| {
        let z = f(x);
        out[0] = z.re;
        out[1] = z.im;
    };
    let (v, e) = integrate_adaptive_vec(&mut g, 2, a, b, abs_tol)?;
    Ok((Complex64::new(v[0], v[1]), e))
}

// ---------------------------------------------------------------------------
// Overlaps

/// Upper truncation point standing in for +∞ in the overlap integrals.
pub fn upper_limit(max_level: usize, xi: f64) -> f64 {
    xi.abs().max((2.0 * max_level as f64 + 1.0).sqrt()) + 10.0
}

fn lower_limit(max_level: usize, xi: f64) -> f64 {
    xi.max(-upper_limit(max_level, 0.0))
}

/// λ_ℓ(ξ) = ∫_ξ^∞ ψ_ℓ(t)² dt.
pub fn lambda_ell(ell: usize, xi: f64) -> Result<f64> {
    overlap_lambda(ell, ell, xi)
}

/// λ_{ℓ₁ℓ₂}(ξ) = ∫_ξ^∞ ψ_{ℓ₁}(t) ψ_{ℓ₂}(t) dt.
pub fn overlap_lambda(l1: usize, l2: usize, xi: f64) -> Result<f64> {
    check_level(l1.max(l2))?;
    let n = l1.max(l2);
    let hi = upper_limit(n, xi);
    let lo = lower_limit(n, xi);
    if lo >= hi {
        return Ok(0.0);
    }
    let mut buf = vec![0.0; n + 1];
    let mut f = |t: f64, out: &mut [f64]| {
        hermite_fns(n, t, &mut buf);
        out[0] = buf[l1] * buf[l2];
    };
    let (v, _) = integrate_adaptive_vec(&mut f, 1, lo, hi, OVERLAP_TOL)?;
    Ok(v[0])
}

/// Full overlap matrix (λ_{ℓℓ'}(ξ))_{ℓ,ℓ' ≤ n}, row-major, from one shared adaptive mesh.
pub fn overlap_matrix(n: usize, xi: f64) -> Result<Vec<f64>> {
    overlap_matrix_tol(n, xi, OVERLAP_TOL)
}

pub(crate) fn overlap_matrix_tol(n: usize, xi: f64, tol: f64) -> Result<Vec<f64>> {
    check_level(n)?;
    let dim = n + 1;
    let hi = upper_limit(n, xi);
    let lo = lower_limit(n, xi);
    let mut out = vec![0.0; dim * dim];
    if lo >= hi {
        return Ok(out);
    }
    let npairs = dim * (dim + 1) / 2;
    let mut buf = vec![0.0; dim];
    let mut f = |t: f64, o: &mut [f64]| {
        hermite_fns(n, t, &mut buf);
        let mut k = 0;
        for i in 0..dim {
            for j in i..dim {
                o[k] = buf[i] * buf[j];
                k += 1;
            }
        }
    };
    let (v, _) = integrate_adaptive_vec(&mut f, npairs, lo, hi, tol)?;
    let mut k = 0;
    for i in 0..dim {
        for j in i..dim {
            out[i * dim + j] = v[k];
            out[j * dim + i] = v[k];
            k += 1;
        }
    }
    Ok(out)
}

/// Overlaps λ_{ℓℓ'}(ξ_i) tabulated on a ξ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapTable {
    pub xi_grid: Vec<f64>,
    pub max_level: usize,
    values: Vec<Vec<f64>>,
}

impl OverlapTable {
    pub fn build(max_level: usize, xi_grid: Vec<f64>) -> Result<Self> {
        Self::build_with_tol(max_level, xi_grid, OVERLAP_TOL)
    }

    pub(crate) fn build_with_tol(max_level: usize, xi_grid: Vec<f64>, tol: f64) -> Result<Self> {
        let values = xi_grid
            .par_iter()
            .map(|&xi| overlap_matrix_tol(max_level, xi, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            xi_grid,
            max_level,
            values,
        })
    }

    /// λ_{ℓ₁ℓ₂}(ξ_i).
    pub fn get(&self, l1: usize, l2: usize, i: usize) -> f64 {
        let dim = self.max_level + 1;
        self.values[i][l1 * dim + l2]
    }

    /// Row-major overlap matrix at grid index `i`.
    pub fn matrix(&self, i: usize) -> &[f64] {
        &self.values[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_single_node() {
        let r = gauss_legendre(1, -1.0, 1.0).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gl_rejects_empty_interval() {
        assert!(gauss_legendre(4, 1.0, 1.0).is_err());
        assert!(gauss_legendre(0, 0.0, 1.0).is_err());
    }

    #[test]
    fn large_rules_converge() {
        for n in [200, 500, 1024] {
            let r = gauss_legendre(n, 0.0, 1.0).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_small_values() {
        assert_eq!(hermite_poly(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_poly(1, 2.0).unwrap(), 4.0);
        assert!(hermite_poly(61, 0.1).is_err());
    }

    #[test]
    fn hermite_fn_normalization_constant() {
        assert!((hermite_fn(0, 0.0).unwrap() - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(hermite_fn(1, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn hermite_fns_batch_matches_log_scaled() {
        let mut buf = vec![0.0; 41];
        for &t in &[-7.5, -2.0, 0.3, 4.4, 9.0] {
            hermite_fns(40, t, &mut buf);
            for (ell, &v) in buf.iter().enumerate() {
                let w = hermite_fn(ell, t).unwrap();
                assert!((v - w).abs() < 1e-12, "ell={ell} t={t}: {v} vs {w}");
            }
        }
    }

    #[test]
    fn laguerre_domain() {
        assert!(laguerre(2, -3, Complex64::new(1.0, 0.0)).is_err());
        assert_eq!(
            laguerre(0, 0, Complex64::new(3.0, -1.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn ln_gamma_integers() {
        let mut f = 1.0f64;
        for n in 1..25usize {
            f *= n as f64;
            assert!((ln_factorial(n) - f.ln()).abs() < 1e-13 * f.ln().max(1.0));
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn gamma_p_exponential_head() {
        for &x in &[0.1, 1.0, 3.0, 20.0] {
            assert!((gamma_p(1.0, x).unwrap() - (1.0 - (-x).exp())).abs() < 1e-15);
        }
    }

    #[test]
    fn overlap_matrix_matches_pairs() {
        let m = overlap_matrix(3, 0.4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let v = overlap_lambda(i, j, 0.4).unwrap();
                assert!((m[i * 4 + j] - v).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn overlap_table_symmetry() {
        let t = OverlapTable::build(3, vec![-1.0, 0.0, 1.5]).unwrap();
        for i in 0..3 {
            for a in 0..4 {
                for b in 0..4 {
                    assert_eq!(t.get(a, b, i), t.get(b, a, i));
                }
            }
        }
    }
}
