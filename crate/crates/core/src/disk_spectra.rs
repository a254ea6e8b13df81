//! Spectra of localized Landau projections on centered disks.
//!
//! Rotation invariance splits 1_{D_R} P 1_{D_R} into angular sectors. In
//! sector k the projection is spanned by the radial functions φ_{ℓ,k}, so the
//! nonzero spectrum is that of the (n+1)×(n+1) Gram matrix
//! 2π ∫₀^R φ_{ℓ,k}(r) φ_{ℓ',k}(r) r dr.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::SpectralFunction;
use crate::error::{Error, Result};
use crate::geometry::Region;
use crate::landau_kernel::{LandauKernel, LevelSelector, MagneticSetup, Point2};
use crate::linalg::jacobi_eigenvalues;
use crate::specfun::{gamma_p, gauss_legendre, ln_factorial, MAX_LEVEL};

/// Eigenvalues below this are not stored.
pub const RETENTION_CUTOFF: f64 = 1e-12;
/// Threshold for the per-sector rank assertion.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// Eigenvalues this far outside [0,1] are clamped; further out is an error.
pub const CLAMP_TOL: f64 = 1e-9;
/// Nodes of the periodic trapezoid rule in [`radial_sector_kernel`].
pub const ANGULAR_NODES: usize = 512;

/// Nonzero spectrum of a localized projection 1_{LΛ} P 1_{LΛ}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSpectrum {
    #[serde(rename = "B")]
    pub b: f64,
    pub selector: LevelSelector,
    #[serde(rename = "L")]
    pub scale: f64,
    pub region: Region,
    pub solver: String,
    pub cutoff: f64,
    /// Sum of all eigenvalues, including those below the cutoff.
    pub trace: f64,
    /// Number of eigenvalues below the cutoff that were discarded.
    pub dropped: usize,
    /// Retained eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
}

impl LocalSpectrum {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spectrum serializes")
    }

    /// Σ_k μ_k^m over the retained eigenvalues.
    pub fn moment(&self, m: u32) -> f64 {
        self.eigenvalues.iter().map(|x| x.powi(m as i32)).sum()
    }
}

/// Disk solver variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskSolver {
    /// Gram matrix of the closed-form sector functions.
    Factored,
    /// Radial Nyström matrix of the angularly averaged kernel.
    SectorNystrom,
}

impl DiskSolver {
    fn tag(&self) -> &'static str {
        match self {
            DiskSolver::Factored => "disk-sector",
            DiskSolver::SectorNystrom => "disk-sector-nystrom",
        }
    }
}

/// φ_{ℓ,k}(r): radial part of the level-ℓ eigenfunction with angular mode k,
/// normalized so that 2π∫φ² r dr = 1. Zero for k < −ℓ.
pub fn sector_function(b: f64, ell: usize, k: i64, r: f64) -> f64 {
    let a = k.unsigned_abs() as usize;
    let j = ell as i64 + k.min(0);
    if j < 0 {
        return 0.0;
    }
    let j = j as usize;
    let u = 0.5 * b * r * r;
    // Generalized Laguerre L_j^{(a)}(u) by the three-term recurrence.
    let af = a as f64;
    let (mut p0, mut p1) = (1.0, 1.0 + af - u);
    let lag = if j == 0 {
        1.0
    } else {
        for i in 1..j {
            let fi = i as f64;
            let p2 = ((2.0 * fi + 1.0 + af - u) * p1 - (fi + af) * p0) / (fi + 1.0);
            p0 = p1;
            p1 = p2;
        }
        p1
    };
    if lag == 0.0 {
        return 0.0;
    }
    let ln_norm = 0.5 * ((b / (2.0 * PI)).ln() + ln_factorial(j) - ln_factorial(j + a));
    let ln_pow = if a == 0 { 0.0 } else { 0.5 * af * u.ln() };
    lag.signum() * (ln_norm + ln_pow - 0.5 * u + lag.abs().ln()).exp()
}

/// (1/2π)∫₀^{2π} P(x_r, y_{s,φ}) e^{−ikφ} dφ by the periodic trapezoid rule.
pub fn radial_sector_kernel(
    setup: MagneticSetup,
    selector: LevelSelector,
    k: i64,
    r: f64,
    s: f64,
) -> Result<f64> {
    if !(r >= 0.0 && s >= 0.0) {
        return Err(Error::Domain(format!(
            "radii must be non-negative, got {r}, {s}"
        )));
    }
    let kernel = LandauKernel::new(setup, selector)?;
    sector_kernel_with(&kernel, k, r, s)
}

fn sector_kernel_with(kernel: &LandauKernel, k: i64, r: f64, s: f64) -> Result<f64> {
    let x = Point2::new(r, 0.0);
    let h = 2.0 * PI / ANGULAR_NODES as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..ANGULAR_NODES {
        let phi = i as f64 * h;
        let y = Point2::new(s * phi.cos(), s * phi.sin());
        acc += kernel.eval(x, y) * Complex64::from_polar(1.0, -(k as f64) * phi);
    }
    acc /= ANGULAR_NODES as f64;
    if acc.im.abs() > 1e-9 {
        return Err(Error::Consistency(format!(
            "sector kernel imaginary residue {:e} at k = {k}",
            acc.im
        )));
    }
    Ok(acc.re)
}

/// Half-width of the sector window |k| ≤ K.
pub fn sector_window(b: f64, r_total: f64, n: usize) -> i64 {
    let x = 0.5 * b * r_total * r_total;
    (x + 12.0 * (x + 1.0).sqrt() + n as f64 + 20.0).ceil() as i64
}

/// Radial Gauss–Legendre node count.
pub fn radial_nodes(b: f64, r_total: f64) -> usize {
    24 + 6 * (b.sqrt() * r_total).ceil() as usize
}

fn clamp(mu: f64, what: &str) -> Result<f64> {
    if !(-CLAMP_TOL..=1.0 + CLAMP_TOL).contains(&mu) {
        return Err(Error::Consistency(format!(
            "{what} eigenvalue {mu} outside [0,1]"
        )));
    }
    Ok(mu.clamp(0.0, 1.0))
}

struct Sector {
    k: i64,
    eigenvalues: Vec<f64>,
    trace: f64,
}

fn factored_sector(
    b: f64,
    levels: &[usize],
    k: i64,
    nodes: &[f64],
    weights: &[f64],
) -> Result<Sector> {
    let active: Vec<usize> = levels
        .iter()
        .copied()
        .filter(|&l| l as i64 + k >= 0)
        .collect();
    let d = active.len();
    if d == 0 {
        return Ok(Sector {
            k,
            eigenvalues: Vec::new(),
            trace: 0.0,
        });
    }
    let phi: Vec<Vec<f64>> = active
        .iter()
        .map(|&l| {
            nodes
                .iter()
                .zip(weights)
                .map(|(&r, &w)| (2.0 * PI * w * r).sqrt() * sector_function(b, l, k, r))
                .collect()
        })
        .collect();
    let mut g = vec![0.0; d * d];
    for i in 0..d {
        for j in i..d {
            let v: f64 = phi[i].iter().zip(&phi[j]).map(|(x, y)| x * y).sum();
            g[i * d + j] = v;
            g[j * d + i] = v;
        }
    }
    let trace = (0..d).map(|i| g[i * d + i]).sum();
    let ev = jacobi_eigenvalues(&mut g, d)?;
    Ok(Sector {
        k,
        eigenvalues: ev
            .into_iter()
            .map(|m| clamp(m, "sector"))
            .collect::<Result<_>>()?,
        trace,
    })
}

fn nystrom_sector(kernel: &LandauKernel, k: i64, nodes: &[f64], weights: &[f64]) -> Result<Sector> {
    let n = nodes.len();
    let sw: Vec<f64> = nodes
        .iter()
        .zip(weights)
        .map(|(&r, &w)| (2.0 * PI * w * r).sqrt())
        .collect();
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = sw[i] * sector_kernel_with(kernel, k, nodes[i], nodes[j])? * sw[j];
            m[i * n + j] = v;
            m[j * n + i] = v;
        }
    }
    let trace = (0..n).map(|i| m[i * n + i]).sum();
    let ev = jacobi_eigenvalues(&mut m, n)?;
    Ok(Sector {
        k,
        eigenvalues: ev
            .into_iter()
            .map(|m| clamp(m, "sector"))
            .collect::<Result<_>>()?,
        trace,
    })
}

/// Spectrum of 1_D P 1_D for the centered disk D of radius `r_total`.
pub fn disk_spectrum(
    setup: MagneticSetup,
    selector: LevelSelector,
    r_total: f64,
) -> Result<LocalSpectrum> {
    disk_spectrum_with(
        setup,
        selector,
        r_total,
        DiskSolver::Factored,
        RETENTION_CUTOFF,
    )
}

pub fn disk_spectrum_with(
    setup: MagneticSetup,
    selector: LevelSelector,
    r_total: f64,
    solver: DiskSolver,
    cutoff: f64,
) -> Result<LocalSpectrum> {
    if !(r_total > 0.0 && r_total.is_finite()) {
        return Err(Error::Domain(format!(
            "disk radius must be positive, got {r_total}"
        )));
    }
    if selector.top() > MAX_LEVEL {
        return Err(Error::Capability(format!(
            "level {} exceeds cap {MAX_LEVEL}",
            selector.top()
        )));
    }
    let b = setup.b;
    let levels: Vec<usize> = selector.levels().collect();
    let kmax = sector_window(b, r_total, selector.top());
    let kmin = -(selector.top() as i64);
    let rule = gauss_legendre(radial_nodes(b, r_total), 0.0, r_total)?;
    let kernel = LandauKernel::new(setup, selector)?;
    let sectors = (kmin..=kmax)
        .into_par_iter()
        .map(|k| match solver {
            DiskSolver::Factored => factored_sector(b, &levels, k, &rule.nodes, &rule.weights),
            DiskSolver::SectorNystrom => nystrom_sector(&kernel, k, &rule.nodes, &rule.weights),
        })
        .collect::<Result<Vec<Sector>>>()?;

    let mut eigenvalues = Vec::new();
    let mut trace = 0.0;
    let mut dropped = 0;
    for s in &sectors {
        let big = s
            .eigenvalues
            .iter()
            .filter(|&&m| m > RANK_THRESHOLD)
            .count();
        if big > levels.len() {
            return Err(Error::Consistency(format!(
                "sector {} has {big} eigenvalues above {RANK_THRESHOLD}, rank is {}",
                s.k,
                levels.len()
            )));
        }
        trace += s.trace;
        for &m in &s.eigenvalues {
            if m >= cutoff {
                eigenvalues.push(m);
            } else {
                dropped += 1;
            }
        }
    }
    let edge = sectors
        .last()
        .map(|s| s.eigenvalues.first().copied().unwrap_or(0.0))
        .unwrap_or(0.0);
    if edge > cutoff {
        return Err(Error::Window(format!(
            "boundary sector {kmax} still carries eigenvalue {edge:e} above cutoff {cutoff:e}"
        )));
    }
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(LocalSpectrum {
        b,
        selector,
        scale: r_total,
        region: Region::disk(1.0)?,
        solver: solver.tag().into(),
        cutoff,
        trace,
        dropped,
        eigenvalues,
    })
}

/// Lowest-level disk eigenvalues P(m+1, BR²/2) for m = 0..=m_max, checked
/// against the sector Gram values.
pub fn lll_disk_eigenvalues(b: f64, r: f64, m_max: usize) -> Result<Vec<f64>> {
    MagneticSetup::new(b)?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!(
            "disk radius must be positive, got {r}"
        )));
    }
    let x = 0.5 * b * r * r;
    let rule = gauss_legendre(radial_nodes(b, r), 0.0, r)?;
    (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let exact = gamma_p(m as f64 + 1.0, x)?;
            let gram: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&t, &w)| 2.0 * PI * w * t * sector_function(b, 0, m as i64, t).powi(2))
                .sum();
            if (gram - exact).abs() > 1e-7 {
                return Err(Error::Consistency(format!(
                    "m = {m}: incomplete gamma {exact} vs sector Gram {gram}"
                )));
            }
            Ok(exact)
        })
        .collect()
}

/// Σ_k f(μ_k) over the retained eigenvalues.
pub fn entropy_from_spectrum(spec: &LocalSpectrum, f: &SpectralFunction) -> f64 {
    spec.eigenvalues.iter().map(|&m| f.eval(m)).sum()
}

/// Estimated contribution of the discarded eigenvalues to Σ f(μ_k): their
/// count times the largest |f| sampled on (0, cutoff].
pub fn cutoff_bias(spec: &LocalSpectrum, f: &SpectralFunction) -> f64 {
    let modulus = (0..=12)
        .map(|j| f.eval(spec.cutoff * 10f64.powi(-j)).abs())
        .fold(f.eval(0.0).abs(), f64::max);
    spec.dropped as f64 * modulus
}

/// Σ_k (μ_k(1−μ_k))^{p/2}, the p-th Schatten power of 1_Λ P (1−1_Λ).
pub fn schatten_cross_norm(spec: &LocalSpectrum, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!(
            "Schatten exponent must be positive, got {p}"
        )));
    }
    Ok(spec
        .eigenvalues
        .iter()
        .map(|&m| (m * (1.0 - m)).max(0.0).powf(0.5 * p))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b1() -> MagneticSetup {
        MagneticSetup::new(1.0).unwrap()
    }

    #[test]
    fn sector_functions_normalized() {
        for (l, k) in [(0usize, 0i64), (0, 7), (1, -1), (2, 3), (3, -2)] {
            let rule = gauss_legendre(200, 0.0, 20.0).unwrap();
            let v = rule.integrate(|r| 2.0 * PI * r * sector_function(1.3, l, k, r).powi(2));
            assert!((v - 1.0).abs() < 1e-12, "{l},{k}: {v}");
        }
        assert_eq!(sector_function(1.0, 1, -2, 0.7), 0.0);
    }

    #[test]
    fn sector_kernel_at_origin() {
        let v = radial_sector_kernel(b1(), LevelSelector::UpTo(2), 3, 0.0, 0.0).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn lll_head() {
        let r = 2f64.sqrt();
        let ev = lll_disk_eigenvalues(1.0, r, 0).unwrap();
        assert!((ev[0] - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn schatten_endpoints() {
        let mut s = disk_spectrum(b1(), LevelSelector::Single(0), 1.0).unwrap();
        s.eigenvalues = vec![1.0, 0.0, 1.0];
        assert_eq!(schatten_cross_norm(&s, 0.5).unwrap(), 0.0);
        assert!(schatten_cross_norm(&s, 0.0).is_err());
    }
}
