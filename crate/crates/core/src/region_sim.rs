//! Nyström spectra of localized projections on general regions and the
//! asymptotic fits of trace functionals in the scale L.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeffs::{coeff_for, SpectralFunction, DEFAULT_TOL};
use crate::disk_spectra::{disk_spectrum, LocalSpectrum, RETENTION_CUTOFF};
use crate::error::{Error, Result};
use crate::geometry::{Region, RegionKind};
use crate::landau_kernel::{LandauKernel, LevelSelector, MagneticSetup, Point2};
use crate::linalg::hermitian_eigenvalues;
use crate::specfun::gauss_legendre;

/// Largest Nyström dimension accepted.
pub const MAX_DIMENSION: usize = 6000;
/// Eigenvalues further than this outside [0,1] abort; closer ones are clamped.
pub const NYSTROM_ABORT: f64 = 1e-4;

/// Quadrature resolution: radial and angular node counts for smooth regions,
/// nodes per direction on each triangle for polygons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub radial: usize,
    pub angular: usize,
}

impl Resolution {
    /// Default resolution for the scaled region LΛ at field B.
    pub fn auto(b: f64, region: &Region, scale: f64) -> Self {
        let (lo, hi) = region.bounding_box();
        let extent = 0.5 * b.sqrt() * scale * (hi.x1 - lo.x1).max(hi.x2 - lo.x2);
        Resolution {
            radial: (10.0 + 3.0 * extent).ceil() as usize,
            angular: (24.0 + 2.0 * PI * 1.5 * extent).ceil() as usize,
        }
    }

    pub fn doubled(&self) -> Self {
        Resolution {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
        }
    }
}

/// Quadrature nodes and weights on LΛ.
pub fn region_quadrature(
    region: &Region,
    scale: f64,
    res: Resolution,
) -> Result<(Vec<Point2>, Vec<f64>)> {
    if !(scale > 0.0) {
        return Err(Error::Domain(format!(
            "scale must be positive, got {scale}"
        )));
    }
    let mut pts = Vec::new();
    let mut wts = Vec::new();
    match region.kind() {
        RegionKind::Polygon { vertices } => {
            let n = vertices.len();
            let convex = (0..n).all(|i| {
                let a = vertices[i];
                let b = vertices[(i + 1) % n];
                let c = vertices[(i + 2) % n];
                (b - a).symplectic(&(c - b)) >= 0.0
            });
            if !convex {
                return Err(Error::Capability(
                    "Nyström quadrature needs a convex polygon".into(),
                ));
            }
            let gl = gauss_legendre(res.radial, 0.0, 1.0)?;
            let c = vertices
                .iter()
                .fold(Point2::default(), |acc, v| acc + *v)
                .scale(1.0 / n as f64);
            for i in 0..n {
                let a = c.scale(scale);
                let b = vertices[i].scale(scale);
                let d = vertices[(i + 1) % n].scale(scale);
                let jac = (b - a).symplectic(&(d - a)).abs();
                for (u, wu) in gl.nodes.iter().zip(&gl.weights) {
                    for (v, wv) in gl.nodes.iter().zip(&gl.weights) {
                        pts.push(a + (b - a).scale(*u) + (d - b).scale(u * v));
                        wts.push(jac * u * wu * wv);
                    }
                }
            }
        }
        _ => {
            let gl = gauss_legendre(res.radial, 0.0, 1.0)?;
            let pole = region.pole().scale(scale);
            let h = 2.0 * PI / res.angular as f64;
            for k in 0..res.angular {
                let th = (k as f64 + 0.5) * h;
                let rt = scale * region.radial_extent(th).expect("smooth region");
                let e = Point2::new(th.cos(), th.sin());
                for (rho, w) in gl.nodes.iter().zip(&gl.weights) {
                    pts.push(pole + e.scale(rho * rt));
                    wts.push(rt * rt * rho * w * h);
                }
            }
        }
    }
    Ok((pts, wts))
}

fn nystrom_matrix(
    setup: MagneticSetup,
    selector: LevelSelector,
    pts: &[Point2],
    wts: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    let kernel = LandauKernel::new(setup, selector)?;
    let n = pts.len();
    let sw: Vec<f64> = wts.iter().map(|w| w.sqrt()).collect();
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| kernel.eval(pts[i], pts[j]) * (sw[i] * sw[j]))
                .collect()
        })
        .collect())
}

fn check_dimension(n: usize) -> Result<()> {
    if n > MAX_DIMENSION {
        return Err(Error::Capability(format!(
            "Nyström dimension {n} exceeds the guard {MAX_DIMENSION}"
        )));
    }
    Ok(())
}

/// Spectrum of 1_{LΛ} P 1_{LΛ} by a Nyström discretization.
pub fn region_spectrum(
    setup: MagneticSetup,
    selector: LevelSelector,
    region: &Region,
    scale: f64,
    res: Resolution,
) -> Result<LocalSpectrum> {
    let (pts, wts) = region_quadrature(region, scale, res)?;
    check_dimension(pts.len())?;
    let m = nystrom_matrix(setup, selector, &pts, &wts)?;
    let trace: f64 = m.iter().enumerate().map(|(i, row)| row[i].re).sum();
    let raw = hermitian_eigenvalues(&m)?;
    let mut eigenvalues = Vec::new();
    let mut dropped = 0;
    for mu in raw {
        if !(-NYSTROM_ABORT..=1.0 + NYSTROM_ABORT).contains(&mu) {
            return Err(Error::Consistency(format!(
                "Nyström eigenvalue {mu} outside [0,1]"
            )));
        }
        let mu = mu.clamp(0.0, 1.0);
        if mu >= RETENTION_CUTOFF {
            eigenvalues.push(mu);
        } else {
            dropped += 1;
        }
    }
    Ok(LocalSpectrum {
        b: setup.b,
        selector,
        scale,
        region: region.clone(),
        solver: "nystrom2d".into(),
        cutoff: RETENTION_CUTOFF,
        trace,
        dropped,
        eigenvalues,
    })
}

/// tr (1_{LΛ} P 1_{LΛ})² as the squared Frobenius norm of the Nyström
/// matrix, without an eigensolve.
pub fn region_trace_square(
    setup: MagneticSetup,
    selector: LevelSelector,
    region: &Region,
    scale: f64,
    res: Resolution,
) -> Result<f64> {
    let (pts, wts) = region_quadrature(region, scale, res)?;
    check_dimension(pts.len())?;
    let kernel = LandauKernel::new(setup, selector)?;
    let n = pts.len();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| wts[i] * wts[j] * kernel.eval(pts[i], pts[j]).norm_sqr())
                .sum()
        })
        .collect();
    Ok(rows.iter().sum())
}

// ---------------------------------------------------------------------------
// Fits

/// Values of a trace functional against the scale L.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSeries {
    pub points: Vec<(f64, f64)>,
    /// Free-form description (function, selector, B, region).
    pub metadata: serde_json::Value,
}

impl ScalingSeries {
    pub fn new(points: Vec<(f64, f64)>, metadata: serde_json::Value) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid(
                "a scaling series needs at least 2 points".into(),
            ));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Invalid("scales must be strictly increasing".into()));
        }
        Ok(Self { points, metadata })
    }

    /// CSV with header `L,value`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("L,value\n");
        for (l, v) in &self.points {
            s.push_str(&format!("{l},{v}\n"));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    /// c1 L + c0.
    Linear,
    /// c2 L² + c1 L + c0.
    Quadratic,
}

/// Least-squares coefficients in the monomial basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub model: FitModel,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
    pub residual_norm: f64,
    pub residuals: Vec<f64>,
    pub window: (f64, f64),
    pub condition: f64,
    /// Successive-difference slopes (S(L_{i+1}) − S(L_i))/(L_{i+1} − L_i).
    pub slopes: Vec<f64>,
}

/// Largest accepted condition number of the design matrix.
pub const MAX_CONDITION: f64 = 1e10;

pub fn scaling_fit(series: &ScalingSeries, model: FitModel) -> Result<AsymptoticFit> {
    let pts = &series.points;
    let cols = match model {
        FitModel::Linear => 2,
        FitModel::Quadratic => 3,
    };
    if pts.len() < cols + 1 {
        return Err(Error::Fit(format!(
            "{model:?} fit needs at least {} points, got {}",
            cols + 1,
            pts.len()
        )));
    }
    let a = DMatrix::from_fn(pts.len(), cols, |i, j| pts[i].0.powi((cols - 1 - j) as i32));
    let y = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = smax / smin;
    if !(condition <= MAX_CONDITION) {
        return Err(Error::Fit(format!(
            "ill-conditioned fit window (condition {condition:e})"
        )));
    }
    let c = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::Fit(format!("least squares failed: {e}")))?;
    let r = &a * &c - &y;
    let (c2, c1, c0) = match model {
        FitModel::Linear => (0.0, c[0], c[1]),
        FitModel::Quadratic => (c[0], c[1], c[2]),
    };
    Ok(AsymptoticFit {
        model,
        c2,
        c1,
        c0,
        residual_norm: r.norm(),
        residuals: r.iter().copied().collect(),
        window: (pts[0].0, pts[pts.len() - 1].0),
        condition,
        slopes: pts
            .windows(2)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect(),
    })
}

/// r(L) = tr f(P(LΛ)) − L²B|Λ|(n+1)f(1)/2π − L√B|∂Λ|M(f) for each L.
pub fn second_order_probe(
    setup: MagneticSetup,
    selector: LevelSelector,
    region: &Region,
    f: &SpectralFunction,
    scales: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if !region.is_smooth() {
        return Err(Error::Domain(
            "second-order probe needs a smooth region".into(),
        ));
    }
    let m = coeff_for(selector, f, DEFAULT_TOL)?.value;
    let b = setup.b;
    let levels = selector.count() as f64;
    scales
        .par_iter()
        .map(|&l| {
            let spec = match region.kind() {
                RegionKind::Disk { radius, .. } => disk_spectrum(setup, selector, l * radius)?,
                _ => region_spectrum(setup, selector, region, l, Resolution::auto(b, region, l))?,
            };
            let tr: f64 = spec.eigenvalues.iter().map(|&x| f.eval(x)).sum();
            let area = l * l * b * region.area() * levels * f.value_at_one() / (2.0 * PI);
            let boundary = l * b.sqrt() * region.perimeter() * m;
            Ok((l, tr - area - boundary))
        })
        .collect()
}
