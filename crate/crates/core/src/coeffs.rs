//! Boundary coefficients M_ℓ(f), M_{≤n}(f) and the spectral data of K_{n,ξ}.
//!
//! M_ℓ(f) = ∫ dξ/2π [f(λ_ℓ(ξ)) − f(1) λ_ℓ(ξ)] and
//! M_{≤n}(f) = ∫ dξ/2π [Σ_k f(μ_k(ξ)) − f(1) Σ_k μ_k(ξ)],
//! with μ_k(ξ) the eigenvalues of the overlap Gram matrix (λ_{ℓℓ'}(ξ)).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::landau_kernel::{k_kernel, LevelSelector};
use crate::linalg::jacobi_eigenvalues;
use crate::specfun::{self, composite_gauss_legendre, integrate_adaptive, integrate_adaptive_vec};

/// Slack allowed outside [0, 1] before values are rejected instead of clamped.
pub const CLAMP_WINDOW: f64 = 1e-10;

/// Default absolute tolerance for the coefficient integrals.
pub const DEFAULT_TOL: f64 = 1e-8;

fn clamp_unit(t: f64, slack: f64) -> Result<f64> {
    if !(t >= -slack && t <= 1.0 + slack) {
        return Err(Error::Domain(format!(
            "value {t} outside [0,1] beyond slack {slack:e}"
        )));
    }
    Ok(t.clamp(0.0, 1.0))
}

/// Rényi entropy function h_α(t) = ln(t^α + (1−t)^α)/(1−α), with the
/// binary Shannon entropy at α = 1.
///
/// ```
/// use lle_core::coeffs::renyi_h;
/// assert!((renyi_h(1.0, 0.5).unwrap() - 2f64.ln()).abs() < 1e-15);
/// ```
pub fn renyi_h(alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!(
            "Rényi index must be positive, got {alpha}"
        )));
    }
    let t = clamp_unit(t, CLAMP_WINDOW)?;
    Ok(renyi_unchecked(alpha, t))
}

fn renyi_unchecked(alpha: f64, t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    if (alpha - 1.0).abs() < 1e-8 {
        return -t * t.ln() - (1.0 - t) * (-t).ln_1p();
    }
    // ln(t^α + (1−t)^α) = ln1p(t^α + expm1(α ln(1−t)))
    let s = t.powf(alpha) + (alpha * (-t).ln_1p()).exp_m1();
    s.ln_1p() / (1.0 - alpha)
}

/// Kind tag of a [`SpectralFunction`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FunctionKind {
    Renyi(f64),
    Monomial(u32),
    GTilde,
    Custom(String),
}

/// A test function f on [0,1] with f(0) = 0 and an endpoint Hölder bound
/// |f(t) − f(1)t| ≤ C t^q (1−t)^q.
#[derive(Clone)]
pub struct SpectralFunction {
    kind: FunctionKind,
    q: f64,
    value_at_one: f64,
    holder_constant: f64,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralFunction")
            .field("kind", &self.kind)
            .field("q", &self.q)
            .field("value_at_one", &self.value_at_one)
            .finish()
    }
}

fn fit_holder(eval: &dyn Fn(f64) -> f64, q: f64) -> Result<(f64, f64)> {
    let f0 = eval(0.0);
    if !(f0.abs() <= 1e-12) {
        return Err(Error::Invalid(format!("f(0) = {f0} must vanish")));
    }
    let f1 = eval(1.0);
    if !f1.is_finite() {
        return Err(Error::Invalid("f(1) is not finite".into()));
    }
    let ratio = |t: f64| (eval(t) - f1 * t).abs() / (t * (1.0 - t)).powf(q);
    let mut c = 0.0f64;
    for i in 0..1000 {
        let r = ratio((i as f64 + 0.5) / 1000.0);
        if !r.is_finite() {
            return Err(Error::Invalid("f is not finite on [0,1]".into()));
        }
        c = c.max(r);
    }
    for k in 4..=12 {
        let e = 10f64.powi(-k);
        for t in [e, 1.0 - e] {
            let r = ratio(t);
            if !r.is_finite() || r > 10.0 * c + 1e-300 {
                return Err(Error::Invalid(format!(
                    "endpoint bound with exponent q = {q} fails near t = {t}"
                )));
            }
        }
    }
    Ok((f1, c))
}

impl SpectralFunction {
    fn build(
        kind: FunctionKind,
        q: f64,
        eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Result<Self> {
        if !(q > 0.0) {
            return Err(Error::Invalid(format!(
                "endpoint exponent must be positive, got {q}"
            )));
        }
        let (value_at_one, holder_constant) = fit_holder(eval.as_ref(), q)?;
        Ok(Self {
            kind,
            q,
            value_at_one,
            holder_constant,
            eval,
        })
    }

    /// h_α with endpoint exponent min(α, 1)/2.
    pub fn renyi(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!(
                "Rényi index must be positive, got {alpha}"
            )));
        }
        Self::build(
            FunctionKind::Renyi(alpha),
            0.5 * alpha.min(1.0),
            Arc::new(move |t| renyi_unchecked(alpha, t)),
        )
    }

    /// t^m, m ≥ 1.
    pub fn monomial(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid(
                "monomial degree must be ≥ 1 (f(0) = 0)".into(),
            ));
        }
        Self::build(
            FunctionKind::Monomial(m),
            1.0,
            Arc::new(move |t: f64| t.powi(m as i32)),
        )
    }

    /// g̃(t) = t(1−t).
    pub fn gtilde() -> Self {
        Self::build(FunctionKind::GTilde, 1.0, Arc::new(|t: f64| t * (1.0 - t)))
            .expect("g̃ satisfies the endpoint bound")
    }

    /// User-supplied function; rejected unless f(0) = 0 and the endpoint
    /// bound with exponent `q` holds numerically.
    pub fn custom(
        name: impl Into<String>,
        q: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(FunctionKind::Custom(name.into()), q, Arc::new(f))
    }

    pub fn kind(&self) -> &FunctionKind {
        &self.kind
    }

    pub fn endpoint_exponent(&self) -> f64 {
        self.q
    }

    pub fn value_at_one(&self) -> f64 {
        self.value_at_one
    }

    /// Constant C of the endpoint bound fitted on a 1000-point grid.
    pub fn holder_constant(&self) -> f64 {
        self.holder_constant
    }

    /// f(t) for t ∈ [0, 1].
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// f(t) after clamping t into [0,1]; values further than `slack` outside
    /// are rejected.
    pub fn eval_clamped(&self, t: f64, slack: f64) -> Result<f64> {
        Ok((self.eval)(clamp_unit(t, slack)?))
    }

    /// Degree when f is the monomial t^m.
    pub fn monomial_degree(&self) -> Option<u32> {
        match self.kind {
            FunctionKind::Monomial(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FunctionKind::Renyi(a) => write!(f, "renyi:{a}"),
            FunctionKind::Monomial(m) => write!(f, "monomial:{m}"),
            FunctionKind::GTilde => write!(f, "gtilde"),
            FunctionKind::Custom(name) => write!(f, "custom:{name}"),
        }
    }
}

impl FromStr for SpectralFunction {
    type Err = Error;

    /// Parses `renyi:α`, `monomial:m` or `gtilde`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "gtilde" {
            return Ok(Self::gtilde());
        }
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("function spec `{s}` not understood")))?;
        match kind {
            "renyi" => {
                let a: f64 = arg
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad Rényi index in `{s}`")))?;
                Self::renyi(a).map_err(|e| Error::Invalid(e.to_string()))
            }
            "monomial" => {
                let m: u32 = arg
                    .parse()
                    .map_err(|_| Error::Invalid(format!("bad monomial degree in `{s}`")))?;
                Self::monomial(m)
            }
            _ => Err(Error::Invalid(format!("unknown function kind `{kind}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Gram spectra

/// Nonzero spectrum of K_{n,ξ}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramSpectrum {
    pub xi: f64,
    /// Eigenvalues in [0,1], descending.
    pub eigenvalues: Vec<f64>,
    /// tr K_{n,ξ} = Σ_ℓ λ_ℓ(ξ) read off the diagonal.
    pub trace: f64,
}

/// Overlap Gram matrix (λ_{ℓℓ'}(ξ))_{ℓ,ℓ'≤n}, row-major.
pub fn gram_matrix(n: usize, xi: f64) -> Result<Vec<f64>> {
    specfun::overlap_matrix(n, xi)
}

fn spectrum_of(n: usize, xi: f64, mut g: Vec<f64>) -> Result<GramSpectrum> {
    let dim = n + 1;
    let trace: f64 = (0..dim).map(|i| g[i * dim + i]).sum();
    let raw = jacobi_eigenvalues(&mut g, dim)?;
    let eigenvalues = raw
        .into_iter()
        .map(|m| {
            clamp_unit(m, CLAMP_WINDOW).map_err(|_| {
                Error::Consistency(format!("Gram eigenvalue {m} at ξ = {xi} outside [0,1]"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GramSpectrum {
        xi,
        eigenvalues,
        trace,
    })
}

/// Eigenvalues of the Gram matrix, i.e. the nonzero spectrum of K_{n,ξ}.
pub fn gram_spectrum(n: usize, xi: f64) -> Result<GramSpectrum> {
    spectrum_of(n, xi, gram_matrix(n, xi)?)
}

// ---------------------------------------------------------------------------
// Boundary coefficients

/// A coefficient value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffEstimate {
    pub value: f64,
    /// Difference to a coarser grid plus the truncated tails.
    pub error: f64,
    /// Half-width Ξ of the ξ interval used.
    pub xi_max: f64,
    pub nodes: usize,
}

fn integrand(sel: LevelSelector, f: &SpectralFunction, xi: f64, inner_tol: f64) -> Result<f64> {
    let f1 = f.value_at_one();
    match sel {
        LevelSelector::Single(l) => {
            let lam = single_lambda(l, xi, inner_tol)?;
            Ok(f.eval_clamped(lam, CLAMP_WINDOW)? - f1 * lam)
        }
        LevelSelector::UpTo(n) => {
            let s = spectrum_of(n, xi, specfun::overlap_matrix_tol(n, xi, inner_tol)?)?;
            let sum: f64 = s.eigenvalues.iter().map(|&m| f.eval(m)).sum();
            Ok(sum - f1 * s.trace)
        }
    }
}

fn single_lambda(l: usize, xi: f64, tol: f64) -> Result<f64> {
    let n = l;
    let hi = specfun::upper_limit(n, xi);
    let lo = xi.max(-specfun::upper_limit(n, 0.0));
    if lo >= hi {
        return Ok(0.0);
    }
    let mut buf = vec![0.0; n + 1];
    let mut g = |t: f64, out: &mut [f64]| {
        specfun::hermite_fns(n, t, &mut buf);
        out[0] = buf[l] * buf[l];
    };
    Ok(integrate_adaptive_vec(&mut g, 1, lo, hi, tol)?.0[0])
}

fn grid_integral(
    sel: LevelSelector,
    f: &SpectralFunction,
    xi_max: f64,
    panel: f64,
    per_panel: usize,
    inner_tol: f64,
) -> Result<(f64, usize)> {
    let rule = composite_gauss_legendre(-xi_max, xi_max, panel, per_panel)?;
    let vals = rule
        .nodes
        .par_iter()
        .map(|&xi| integrand(sel, f, xi, inner_tol))
        .collect::<Result<Vec<_>>>()?;
    // Fixed summation order keeps the result independent of scheduling.
    let sum: f64 = vals.iter().zip(&rule.weights).map(|(v, w)| v * w).sum();
    Ok((sum / (2.0 * std::f64::consts::PI), rule.len()))
}

fn boundary_coefficient(
    sel: LevelSelector,
    f: &SpectralFunction,
    tol: f64,
) -> Result<CoeffEstimate> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let inner = (tol * 1e-5).min(specfun::OVERLAP_TOL);
    let mut xi_max = 8.0 + (2.0 * sel.top() as f64 + 1.0).sqrt();
    let tail = |x: f64| -> Result<f64> {
        Ok(integrand(sel, f, x, inner)?.abs() + integrand(sel, f, -x, inner)?.abs())
    };
    let mut t = tail(xi_max)?;
    while t > 1e-3 * tol {
        xi_max += 2.0;
        if xi_max > 60.0 {
            return Err(Error::Accuracy {
                message: format!("integrand tails of {f} do not decay below tolerance"),
                achieved: t,
            });
        }
        t = tail(xi_max)?;
    }
    let (fine, nodes) = grid_integral(sel, f, xi_max, 0.25, 16, inner)?;
    let (coarse, _) = grid_integral(sel, f, xi_max, 0.5, 8, 100.0 * inner)?;
    Ok(CoeffEstimate {
        value: fine,
        error: (fine - coarse).abs() + t / (2.0 * std::f64::consts::PI),
        xi_max,
        nodes,
    })
}

/// M_ℓ(f).
pub fn coeff_m_ell(ell: usize, f: &SpectralFunction, tol: f64) -> Result<CoeffEstimate> {
    boundary_coefficient(LevelSelector::Single(ell), f, tol)
}

/// M_{≤n}(f).
pub fn coeff_m_le_n(n: usize, f: &SpectralFunction, tol: f64) -> Result<CoeffEstimate> {
    boundary_coefficient(LevelSelector::UpTo(n), f, tol)
}

/// M_ℓ(f) or M_{≤n}(f) according to the selector.
pub fn coeff_for(sel: LevelSelector, f: &SpectralFunction, tol: f64) -> Result<CoeffEstimate> {
    boundary_coefficient(sel, f, tol)
}

// ---------------------------------------------------------------------------
// Trace moments

/// tr K_{n,ξ}^m by independent routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceMoment {
    /// Σ_k μ_k(ξ)^m from the Gram spectrum.
    pub spectral: f64,
    /// Σ over ℓ₁…ℓ_m of λ_{ℓ₁ℓ₂}λ_{ℓ₂ℓ₃}···λ_{ℓ_mℓ₁}.
    pub chain: f64,
    /// For m = 1: ∫_ξ^∞ K_{n,ξ}(τ,τ) dτ with the confluent Christoffel–Darboux kernel.
    pub christoffel_darboux: Option<f64>,
}

/// Agreement required between the routes of [`trace_moment_k`].
pub const TRACE_ROUTE_TOL: f64 = 1e-9;

pub fn trace_moment_k(n: usize, xi: f64, m: u32) -> Result<TraceMoment> {
    if m == 0 {
        return Err(Error::Domain("moment order must be ≥ 1".into()));
    }
    let dim = n + 1;
    let terms = (dim as f64).powi(m as i32);
    if terms > 5e7 {
        return Err(Error::Capability(format!("chain sum with {terms:e} terms")));
    }
    let g = gram_matrix(n, xi)?;
    let spec = spectrum_of(n, xi, g.clone())?;
    let spectral: f64 = spec.eigenvalues.iter().map(|&x| x.powi(m as i32)).sum();

    let m = m as usize;
    let mut idx = vec![0usize; m];
    let mut chain = 0.0;
    loop {
        let mut prod = 1.0;
        for k in 0..m {
            prod *= g[idx[k] * dim + idx[(k + 1) % m]];
        }
        chain += prod;
        let mut pos = 0;
        loop {
            if pos == m {
                break;
            }
            idx[pos] += 1;
            if idx[pos] < dim {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    let scale = spectral.abs().max(1.0);
    if (spectral - chain).abs() > TRACE_ROUTE_TOL * scale {
        return Err(Error::Consistency(format!(
            "tr K^{m} at ξ = {xi}: spectral {spectral} vs chain {chain}"
        )));
    }
    let christoffel_darboux = if m == 1 {
        let hi = specfun::upper_limit(n, xi);
        let lo = xi.max(-specfun::upper_limit(n, 0.0));
        let cd = if lo < hi {
            integrate_adaptive(|t| k_kernel(n, xi, t, t), lo, hi, 1e-13)?.value
        } else {
            0.0
        };
        if (cd - spectral).abs() > TRACE_ROUTE_TOL * scale {
            return Err(Error::Consistency(format!(
                "tr K at ξ = {xi}: spectral {spectral} vs Christoffel–Darboux {cd}"
            )));
        }
        Some(cd)
    } else {
        None
    };
    Ok(TraceMoment {
        spectral,
        chain,
        christoffel_darboux,
    })
}

/// ∫ dξ/2π [λ_ℓ(ξ)^m − λ_ℓ(ξ)], evaluated in the integrated-by-parts form
/// −(m−1)/2π ∫ dξ ψ_ℓ(ξ)² λ_ℓ(ξ)^{m−2} ∫_ξ^∞ (τ−ξ) ψ_ℓ(τ)² dτ.
pub fn poly_boundary_coeff(ell: usize, m: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("moment order must be ≥ 1".into()));
    }
    if m == 1 {
        return Ok(0.0);
    }
    let xi_max = 8.0 + (2.0 * ell as f64 + 1.0).sqrt();
    let outer = |xi: f64| -> f64 {
        let hi = specfun::upper_limit(ell, xi);
        let mut buf = vec![0.0; ell + 1];
        let mut g = |t: f64, out: &mut [f64]| {
            specfun::hermite_fns(ell, t, &mut buf);
            let p = buf[ell] * buf[ell];
            out[0] = p;
            out[1] = (t - xi) * p;
        };
        let (v, _) = integrate_adaptive_vec(&mut g, 2, xi, hi, 1e-14)
            .expect("smooth Gaussian integrand converges");
        specfun::hermite_fns(ell, xi, &mut buf);
        let psi2 = buf[ell] * buf[ell];
        psi2 * v[0].powi(m as i32 - 2) * v[1]
    };
    let total = integrate_adaptive(outer, -xi_max, xi_max, 1e-13)?;
    Ok(-(m as f64 - 1.0) * total.value / (2.0 * std::f64::consts::PI))
}
