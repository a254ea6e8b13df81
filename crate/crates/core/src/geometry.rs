//! Planar regions and the area of intersections with small translates.
//!
//! For Λ_ε = Λ ∩ (Λ+εv₁) ∩ ··· ∩ (Λ+εv_r) the removed area behaves like
//! ε T₁ + ε² T₂ + o(ε²), with
//! T₁ = ∫_{∂Λ} max{0, ⟨v_i|n⟩} and T₂ = ½ Σ_q ∫_{C_q} κ (‖v_q‖² − 2⟨v_q|n⟩²).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landau_kernel::Point2;
use crate::specfun::integrate_adaptive;

/// Boundary nodes used for Roccaforte integrals and star-profile checks.
pub const BOUNDARY_NODES: usize = 2048;

/// Margin below which two candidates of the argmax count as tied.
pub const DEGENERACY_MARGIN: f64 = 1e-9;

/// JSON form of a region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionSpec {
    Disk {
        #[serde(rename = "R")]
        r: f64,
        #[serde(default, skip_serializing_if = "is_origin")]
        center: [f64; 2],
    },
    /// r(θ) = c₀ + Σ_k (a_k cos kθ + b_k sin kθ), coefficients [c₀, a₁, b₁, a₂, b₂, …].
    Star {
        coeffs: Vec<f64>,
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
}

fn is_origin(c: &[f64; 2]) -> bool {
    c[0] == 0.0 && c[1] == 0.0
}

/// Radius profile r(θ) of a star-shaped region as a trigonometric polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierProfile {
    coeffs: Vec<f64>,
}

impl FourierProfile {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid(
                "star profile needs finite coefficients".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// (r, r', r'') at θ.
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let mut r = self.coeffs[0];
        let mut d1 = 0.0;
        let mut d2 = 0.0;
        for (k, pair) in self.coeffs[1..].chunks(2).enumerate() {
            let kf = (k + 1) as f64;
            let a = pair[0];
            let b = pair.get(1).copied().unwrap_or(0.0);
            let (s, c) = (kf * theta).sin_cos();
            r += a * c + b * s;
            d1 += kf * (-a * s + b * c);
            d2 -= kf * kf * (a * c + b * s);
        }
        (r, d1, d2)
    }

    pub fn radius(&self, theta: f64) -> f64 {
        self.eval(theta).0
    }

    fn rotated(&self, phi: f64) -> Self {
        let mut c = self.coeffs.clone();
        if c.len().is_multiple_of(2) {
            c.push(0.0);
        }
        for k in 0..(c.len() - 1) / 2 {
            let kf = (k + 1) as f64;
            let (a, b) = (c[1 + 2 * k], c[2 + 2 * k]);
            let (s, co) = (kf * phi).sin_cos();
            c[1 + 2 * k] = a * co - b * s;
            c[2 + 2 * k] = a * s + b * co;
        }
        Self { coeffs: c }
    }
}

/// Shape of a region.
#[derive(Debug, Clone, PartialEq)]
pub enum RegionKind {
    Disk { center: Point2, radius: f64 },
    SmoothStar { profile: FourierProfile },
    Polygon { vertices: Vec<Point2> },
}

/// A bounded region with cached area and perimeter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegionSpec", into = "RegionSpec")]
pub struct Region {
    kind: RegionKind,
    area: f64,
    perimeter: f64,
}

/// Point, inward unit normal, curvature and speed |x'(θ)| of the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub point: Point2,
    pub normal: Point2,
    pub curvature: f64,
    pub speed: f64,
}

fn trapezoid_periodic(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<f64>() * h
}

fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let orient = |p: Point2, q: Point2, r: Point2| (q - p).symplectic(&(r - p));
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn shoelace(v: &[Point2]) -> f64 {
    let n = v.len();
    0.5 * (0..n)
        .map(|i| v[i].symplectic(&v[(i + 1) % n]))
        .sum::<f64>()
}

impl Region {
    pub fn disk(radius: f64) -> Result<Self> {
        Self::from_kind(RegionKind::Disk {
            center: Point2::default(),
            radius,
        })
    }

    pub fn star(coeffs: Vec<f64>) -> Result<Self> {
        Self::from_kind(RegionKind::SmoothStar {
            profile: FourierProfile::new(coeffs)?,
        })
    }

    pub fn polygon(vertices: Vec<Point2>) -> Result<Self> {
        Self::from_kind(RegionKind::Polygon { vertices })
    }

    /// Parses the JSON region description.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("region JSON: {e}")))
    }

    pub fn from_kind(kind: RegionKind) -> Result<Self> {
        match &kind {
            RegionKind::Disk { center, radius } => {
                if !(*radius > 0.0 && radius.is_finite())
                    || !center.x1.is_finite()
                    || !center.x2.is_finite()
                {
                    return Err(Error::Invalid(format!(
                        "disk radius must be positive, got {radius}"
                    )));
                }
                let (area, perimeter) = (PI * radius * radius, 2.0 * PI * radius);
                Ok(Self {
                    kind,
                    area,
                    perimeter,
                })
            }
            RegionKind::SmoothStar { profile } => {
                let min_r = (0..4 * BOUNDARY_NODES)
                    .map(|k| profile.radius(2.0 * PI * k as f64 / (4 * BOUNDARY_NODES) as f64))
                    .fold(f64::INFINITY, f64::min);
                if !(min_r > 0.0) {
                    return Err(Error::Invalid(format!(
                        "star profile not positive (min {min_r})"
                    )));
                }
                let area_n = |n| trapezoid_periodic(n, |t| 0.5 * profile.radius(t).powi(2));
                let per_n = |n| {
                    trapezoid_periodic(n, |t| {
                        let (r, d, _) = profile.eval(t);
                        (r * r + d * d).sqrt()
                    })
                };
                let (a1, a2) = (area_n(BOUNDARY_NODES), area_n(2 * BOUNDARY_NODES));
                let (p1, p2) = (per_n(BOUNDARY_NODES), per_n(2 * BOUNDARY_NODES));
                if (a1 - a2).abs() > 1e-10 || (p1 - p2).abs() > 1e-10 {
                    return Err(Error::Invalid(
                        "star profile not resolved by boundary quadrature".into(),
                    ));
                }
                Ok(Self {
                    kind,
                    area: a2,
                    perimeter: p2,
                })
            }
            RegionKind::Polygon { vertices } => {
                let n = vertices.len();
                if n < 3
                    || vertices
                        .iter()
                        .any(|v| !v.x1.is_finite() || !v.x2.is_finite())
                {
                    return Err(Error::Invalid(
                        "polygon needs at least 3 finite vertices".into(),
                    ));
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
                        if !adjacent
                            && segments_cross(
                                vertices[i],
                                vertices[(i + 1) % n],
                                vertices[j],
                                vertices[(j + 1) % n],
                            )
                        {
                            return Err(Error::Invalid("polygon is self-intersecting".into()));
                        }
                    }
                }
                let area = shoelace(vertices);
                if !(area > 0.0) {
                    return Err(Error::Invalid(
                        "polygon vertices must be counterclockwise".into(),
                    ));
                }
                let perimeter = (0..n)
                    .map(|i| (vertices[(i + 1) % n] - vertices[i]).norm())
                    .sum();
                Ok(Self {
                    kind,
                    area,
                    perimeter,
                })
            }
        }
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn is_smooth(&self) -> bool {
        !matches!(self.kind, RegionKind::Polygon { .. })
    }

    /// Center of the polar parametrization of a smooth region.
    pub fn pole(&self) -> Point2 {
        match &self.kind {
            RegionKind::Disk { center, .. } => *center,
            _ => Point2::default(),
        }
    }

    /// Distance from the pole to the boundary in direction θ (smooth regions).
    pub fn radial_extent(&self, theta: f64) -> Option<f64> {
        match &self.kind {
            RegionKind::Disk { radius, .. } => Some(*radius),
            RegionKind::SmoothStar { profile } => Some(profile.radius(theta)),
            RegionKind::Polygon { .. } => None,
        }
    }

    /// Boundary data at parameter θ.
    pub fn boundary_point(&self, theta: f64) -> Result<BoundaryPoint> {
        match &self.kind {
            RegionKind::Disk { center, radius } => {
                let (s, c) = theta.sin_cos();
                Ok(BoundaryPoint {
                    point: Point2::new(center.x1 + radius * c, center.x2 + radius * s),
                    normal: Point2::new(-c, -s),
                    curvature: 1.0 / radius,
                    speed: *radius,
                })
            }
            RegionKind::SmoothStar { profile } => {
                let (r, d1, d2) = profile.eval(theta);
                let (s, c) = theta.sin_cos();
                let dx = d1 * c - r * s;
                let dy = d1 * s + r * c;
                let speed = (r * r + d1 * d1).sqrt();
                Ok(BoundaryPoint {
                    point: Point2::new(r * c, r * s),
                    normal: Point2::new(-dy / speed, dx / speed),
                    curvature: (r * r + 2.0 * d1 * d1 - r * d2) / speed.powi(3),
                    speed,
                })
            }
            RegionKind::Polygon { .. } => Err(Error::Capability(
                "boundary curvature is not defined for polygons".into(),
            )),
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        match &self.kind {
            RegionKind::Disk { center, radius } => (p - *center).norm_sq() < radius * radius,
            RegionKind::SmoothStar { profile } => {
                let rho = p.norm();
                rho < profile.radius(p.x2.atan2(p.x1))
            }
            RegionKind::Polygon { vertices } => {
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if (a.x2 > p.x2) != (b.x2 > p.x2) {
                        let x = a.x1 + (p.x2 - a.x2) / (b.x2 - a.x2) * (b.x1 - a.x1);
                        if p.x1 < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    /// Axis-aligned bounding box (min, max).
    pub fn bounding_box(&self) -> (Point2, Point2) {
        match &self.kind {
            RegionKind::Disk { center, radius } => (
                Point2::new(center.x1 - radius, center.x2 - radius),
                Point2::new(center.x1 + radius, center.x2 + radius),
            ),
            RegionKind::SmoothStar { profile } => {
                let rmax = (0..4 * BOUNDARY_NODES)
                    .map(|k| profile.radius(2.0 * PI * k as f64 / (4 * BOUNDARY_NODES) as f64))
                    .fold(0.0, f64::max)
                    * (1.0 + 1e-6);
                (Point2::new(-rmax, -rmax), Point2::new(rmax, rmax))
            }
            RegionKind::Polygon { vertices } => {
                let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
                let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
                for v in vertices {
                    lo = Point2::new(lo.x1.min(v.x1), lo.x2.min(v.x2));
                    hi = Point2::new(hi.x1.max(v.x1), hi.x2.max(v.x2));
                }
                (lo, hi)
            }
        }
    }

    /// The region rotated by φ about the origin.
    pub fn rotated(&self, phi: f64) -> Region {
        let kind = match &self.kind {
            RegionKind::Disk { center, radius } => RegionKind::Disk {
                center: center.rotate(phi),
                radius: *radius,
            },
            RegionKind::SmoothStar { profile } => RegionKind::SmoothStar {
                profile: profile.rotated(phi),
            },
            RegionKind::Polygon { vertices } => RegionKind::Polygon {
                vertices: vertices.iter().map(|v| v.rotate(phi)).collect(),
            },
        };
        Region {
            kind,
            area: self.area,
            perimeter: self.perimeter,
        }
    }
}

impl TryFrom<RegionSpec> for Region {
    type Error = Error;

    fn try_from(spec: RegionSpec) -> Result<Self> {
        match spec {
            RegionSpec::Disk { r, center } => Region::from_kind(RegionKind::Disk {
                center: Point2::new(center[0], center[1]),
                radius: r,
            }),
            RegionSpec::Star { coeffs } => Region::star(coeffs),
            RegionSpec::Polygon { vertices } => Region::polygon(
                vertices
                    .into_iter()
                    .map(|v| Point2::new(v[0], v[1]))
                    .collect(),
            ),
        }
    }
}

impl From<Region> for RegionSpec {
    fn from(r: Region) -> Self {
        match r.kind {
            RegionKind::Disk { center, radius } => RegionSpec::Disk {
                r: radius,
                center: [center.x1, center.x2],
            },
            RegionKind::SmoothStar { profile } => RegionSpec::Star {
                coeffs: profile.coeffs,
            },
            RegionKind::Polygon { vertices } => RegionSpec::Polygon {
                vertices: vertices.into_iter().map(|v| [v.x1, v.x2]).collect(),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Translates

/// Translation vectors v₁…v_r and the scale ε.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslateFamily {
    pub vectors: Vec<Point2>,
    pub eps: f64,
}

impl TranslateFamily {
    pub fn new(vectors: Vec<Point2>, eps: f64) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Invalid(
                "translate family needs at least one vector".into(),
            ));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::Invalid(format!("ε must be non-negative, got {eps}")));
        }
        Ok(Self { vectors, eps })
    }

    fn shifts(&self) -> Vec<Point2> {
        self.vectors.iter().map(|v| v.scale(self.eps)).collect()
    }
}

/// |Λ_ε| and |Λ∖Λ_ε|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntersectionArea {
    pub intersection: f64,
    pub complement: f64,
    /// Standard error when the value is a Monte Carlo estimate.
    pub std_error: Option<f64>,
    pub method: &'static str,
}

/// Controls for [`intersect_translates_area`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaOptions {
    /// Absolute tolerance of the deterministic quadrature.
    pub tol: f64,
    /// Sample count and seed of the Monte Carlo fallback.
    pub mc_samples: u64,
    pub seed: u64,
    /// Largest standard error accepted from the fallback.
    pub mc_max_std_error: f64,
}

impl Default for AreaOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            mc_samples: 4_000_000,
            seed: 0,
            mc_max_std_error: 1e-3,
        }
    }
}

pub fn intersect_translates_area(
    region: &Region,
    family: &TranslateFamily,
) -> Result<IntersectionArea> {
    intersect_translates_area_with(region, family, AreaOptions::default())
}

pub fn intersect_translates_area_with(
    region: &Region,
    family: &TranslateFamily,
    opts: AreaOptions,
) -> Result<IntersectionArea> {
    let shifts = family.shifts();
    let exact = |complement: f64, method| IntersectionArea {
        intersection: region.area() - complement,
        complement,
        std_error: None,
        method,
    };
    if shifts.iter().all(|s| s.norm_sq() == 0.0) {
        return Ok(exact(0.0, "trivial"));
    }
    match region.kind() {
        RegionKind::Disk { radius, .. } if shifts.len() == 1 => {
            let r = *radius;
            let d = shifts[0].norm();
            let lens = if d >= 2.0 * r {
                0.0
            } else {
                2.0 * r * r * (d / (2.0 * r)).acos() - 0.5 * d * (4.0 * r * r - d * d).sqrt()
            };
            Ok(exact(region.area() - lens, "lens"))
        }
        RegionKind::Polygon { vertices } => {
            let mut polys = vec![vertices.clone()];
            for s in &shifts {
                polys.push(vertices.iter().map(|v| *v + *s).collect());
            }
            let inter = polygon_intersection_area(&polys);
            Ok(exact(region.area() - inter, "slab"))
        }
        _ => match ray_complement(region, &shifts, opts.tol) {
            Ok(c) => Ok(exact(c, "ray-quadrature")),
            Err(_) => {
                let mc = monte_carlo_complement(region, family, opts.mc_samples, opts.seed);
                if mc.std_error.unwrap_or(0.0) > opts.mc_max_std_error {
                    return Err(Error::Accuracy {
                        message: "Monte Carlo fallback above error budget".into(),
                        achieved: mc.std_error.unwrap_or(f64::NAN),
                    });
                }
                Ok(mc)
            }
        },
    }
}

/// Exact area of the intersection of simple polygons by vertical slab decomposition.
///
/// Between consecutive breakpoints (vertex abscissae and edge crossings)
/// the cross-section length is affine in x, so the midpoint rule is exact.
pub fn polygon_intersection_area(polys: &[Vec<Point2>]) -> f64 {
    let edges: Vec<(Point2, Point2)> = polys
        .iter()
        .flat_map(|p| (0..p.len()).map(move |i| (p[i], p[(i + 1) % p.len()])))
        .collect();
    let mut xs: Vec<f64> = polys.iter().flatten().map(|v| v.x1).collect();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            let r = b - a;
            let s = d - c;
            let den = r.symplectic(&s);
            if den.abs() < 1e-300 {
                continue;
            }
            let t = (c - a).symplectic(&s) / den;
            let u = (c - a).symplectic(&r) / den;
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                xs.push(a.x1 + t * r.x1);
            }
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut area = 0.0;
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 - x0 <= 0.0 {
            continue;
        }
        let xm = 0.5 * (x0 + x1);
        let mut acc: Option<Vec<(f64, f64)>> = None;
        for p in polys {
            let sec = cross_section(p, xm);
            acc = Some(match acc {
                None => sec,
                Some(prev) => intersect_intervals(&prev, &sec),
            });
        }
        let len: f64 = acc.unwrap_or_default().iter().map(|(a, b)| b - a).sum();
        area += len * (x1 - x0);
    }
    area
}

fn cross_section(p: &[Point2], x: f64) -> Vec<(f64, f64)> {
    let n = p.len();
    let mut ys = Vec::new();
    for i in 0..n {
        let a = p[i];
        let b = p[(i + 1) % n];
        if (a.x1 < x) != (b.x1 < x) {
            ys.push(a.x2 + (x - a.x1) / (b.x1 - a.x1) * (b.x2 - a.x2));
        }
    }
    ys.sort_by(f64::total_cmp);
    ys.chunks(2)
        .filter(|c| c.len() == 2)
        .map(|c| (c[0], c[1]))
        .collect()
}

fn intersect_intervals(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Distance along the ray from the pole in direction θ at which the ray
/// leaves Λ + w, assuming the translate is star-shaped about the pole.
fn ray_exit(region: &Region, w: Point2, theta: f64) -> Result<f64> {
    let pole = region.pole();
    let e = Point2::new(theta.cos(), theta.sin());
    let g = |rho: f64| {
        let p = pole + e.scale(rho) - w - pole;
        let ang = p.x2.atan2(p.x1);
        p.norm() - region.radial_extent(ang).unwrap_or(0.0)
    };
    if g(0.0) >= 0.0 {
        return Err(Error::Numeric("pole outside a translate".into()));
    }
    let guess = region.radial_extent(theta).unwrap_or(1.0);
    let mut lo = 0.0;
    let mut hi = guess + 2.0 * w.norm() + 1e-12;
    let mut grow = 0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::Numeric("ray never leaves translate".into()));
        }
    }
    // Safeguarded secant/bisection.
    let (mut glo, mut ghi) = (g(lo), g(hi));
    for _ in 0..200 {
        let mut x = hi - ghi * (hi - lo) / (ghi - glo);
        if !(x > lo && x < hi) || (hi - lo) > 0.5 * guess {
            x = 0.5 * (lo + hi);
        }
        let gx = g(x);
        if gx <= 0.0 {
            lo = x;
            glo = gx;
        } else {
            hi = x;
            ghi = gx;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi || gx == 0.0 {
            return Ok(if gx == 0.0 { x } else { 0.5 * (lo + hi) });
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ray_complement(region: &Region, shifts: &[Point2], tol: f64) -> Result<f64> {
    let integrand = |theta: f64| -> std::result::Result<f64, Error> {
        let r0 = region.radial_extent(theta).unwrap_or(0.0);
        let mut m = r0;
        for w in shifts {
            m = m.min(ray_exit(region, *w, theta)?);
        }
        Ok(0.5 * (r0 - m) * (r0 + m))
    };
    // Probe once so that geometric failures surface as errors, not panics.
    for k in 0..64 {
        integrand(2.0 * PI * k as f64 / 64.0)?;
    }
    let pieces = 64;
    let mut total = 0.0;
    let local_tol = (tol * 1e-4).max(1e-15) / pieces as f64;
    for k in 0..pieces {
        let a = 2.0 * PI * k as f64 / pieces as f64;
        let b = 2.0 * PI * (k + 1) as f64 / pieces as f64;
        let v = integrate_adaptive(|t| integrand(t).unwrap_or(f64::NAN), a, b, local_tol)?;
        if !v.value.is_finite() {
            return Err(Error::Numeric(
                "ray quadrature produced a non-finite value".into(),
            ));
        }
        total += v.value;
    }
    Ok(total)
}

/// Monte Carlo estimate of |Λ∖Λ_ε| with a fixed seed. Samples are drawn in
/// shards of fixed size with per-shard seeds, so the estimate does not depend
/// on the number of worker threads.
pub fn monte_carlo_complement(
    region: &Region,
    family: &TranslateFamily,
    samples: u64,
    seed: u64,
) -> IntersectionArea {
    const SHARD: u64 = 1 << 16;
    let shifts = family.shifts();
    let (lo, hi) = region.bounding_box();
    let box_area = (hi.x1 - lo.x1) * (hi.x2 - lo.x2);
    let shards = samples.div_ceil(SHARD);
    let hits: u64 = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(crate::mix_seed(seed, s));
            let count = SHARD.min(samples - s * SHARD);
            let mut h = 0u64;
            for _ in 0..count {
                let p = Point2::new(
                    rng.random_range(lo.x1..hi.x1),
                    rng.random_range(lo.x2..hi.x2),
                );
                if region.contains(p) && shifts.iter().any(|w| !region.contains(p - *w)) {
                    h += 1;
                }
            }
            h
        })
        .sum();
    let frac = hits as f64 / samples as f64;
    let complement = box_area * frac;
    IntersectionArea {
        intersection: region.area() - complement,
        complement,
        std_error: Some(box_area * (frac * (1.0 - frac) / samples as f64).sqrt()),
        method: "monte-carlo",
    }
}

// ---------------------------------------------------------------------------
// Roccaforte terms

/// First- and second-order coefficients with a degeneracy flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoccaforteTerms {
    pub first: f64,
    /// Absent for polygons.
    pub second: Option<f64>,
    /// True when two argmax candidates stay within 1e−9 of each other at
    /// neighbouring sample nodes (for polygons: along an edge).
    pub degenerate: bool,
}

fn active(normal: Point2, vectors: &[Point2]) -> (usize, f64) {
    let mut best = 0.0;
    let mut idx = 0usize;
    let mut vals = Vec::with_capacity(vectors.len() + 1);
    vals.push(0.0);
    for (i, v) in vectors.iter().enumerate() {
        let x = v.dot(&normal);
        vals.push(x);
        if x > best {
            best = x;
            idx = i + 1;
        }
    }
    let margin = vals
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, &x)| best - x)
        .fold(f64::INFINITY, f64::min);
    (idx, margin)
}

/// (start, end, argmax index) arcs of the boundary parameter.
type Pieces = Vec<(f64, f64, usize)>;

/// Parameter intervals on which the argmax index (0 = none positive) is constant.
fn argmax_pieces(region: &Region, vectors: &[Point2]) -> Result<(Pieces, bool)> {
    let n = BOUNDARY_NODES;
    let h = 2.0 * PI / n as f64;
    let at =
        |t: f64| -> Result<(usize, f64)> { Ok(active(region.boundary_point(t)?.normal, vectors)) };
    let mut pieces = Vec::new();
    // A near-tie at an isolated node is just a crossing; one that persists
    // over neighbouring nodes means the argmax is ambiguous on an arc.
    let mut degenerate = false;
    let (mut cur, m0) = at(0.0)?;
    let mut prev_tie = m0 < DEGENERACY_MARGIN;
    let mut start = 0.0;
    for k in 1..=n {
        let t = k as f64 * h;
        let (a, m) = at(t)?;
        let tie = m < DEGENERACY_MARGIN;
        degenerate |= tie && prev_tie;
        prev_tie = tie;
        if a != cur {
            let (mut lo, mut hi) = (t - h, t);
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if at(mid)?.0 == cur {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let split = 0.5 * (lo + hi);
            pieces.push((start, split, cur));
            start = split;
            cur = a;
        }
    }
    pieces.push((start, 2.0 * PI, cur));
    Ok((pieces, degenerate))
}

fn polygon_edges(vertices: &[Point2]) -> impl Iterator<Item = (f64, Point2)> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| {
        let d = vertices[(i + 1) % n] - vertices[i];
        let len = d.norm();
        (len, Point2::new(-d.x2 / len, d.x1 / len))
    })
}

/// T₁ = ∫_{∂Λ} max{0, ⟨v₁|n⟩, …, ⟨v_r|n⟩} dA.
pub fn roccaforte_first_order(region: &Region, vectors: &[Point2]) -> Result<f64> {
    Ok(roccaforte_terms(region, vectors)?.first)
}

/// T₂ = ½ Σ_q ∫_{C_q} κ (‖v_q‖² − 2⟨v_q|n⟩²) dA.
pub fn roccaforte_second_order(region: &Region, vectors: &[Point2]) -> Result<f64> {
    roccaforte_terms(region, vectors)?
        .second
        .ok_or_else(|| Error::Capability("second-order term needs a smooth region".into()))
}

/// Both Roccaforte coefficients; the second only for smooth regions.
pub fn roccaforte_terms(region: &Region, vectors: &[Point2]) -> Result<RoccaforteTerms> {
    if vectors.is_empty() {
        return Err(Error::Invalid("at least one vector is required".into()));
    }
    if let RegionKind::Polygon { vertices } = region.kind() {
        let mut first = 0.0;
        let mut degenerate = false;
        for (len, n) in polygon_edges(vertices) {
            let (idx, margin) = active(n, vectors);
            degenerate |= margin < DEGENERACY_MARGIN;
            if idx > 0 {
                first += len * vectors[idx - 1].dot(&n);
            }
        }
        return Ok(RoccaforteTerms {
            first,
            second: None,
            degenerate,
        });
    }
    let (pieces, degenerate) = argmax_pieces(region, vectors)?;
    let mut first = 0.0;
    let mut second = 0.0;
    for &(a, b, idx) in &pieces {
        if idx == 0 || b <= a {
            continue;
        }
        let v = vectors[idx - 1];
        let f1 = |t: f64| {
            let bp = region.boundary_point(t).expect("smooth region");
            bp.speed * v.dot(&bp.normal)
        };
        let f2 = |t: f64| {
            let bp = region.boundary_point(t).expect("smooth region");
            let vn = v.dot(&bp.normal);
            0.5 * bp.speed * bp.curvature * (v.norm_sq() - 2.0 * vn * vn)
        };
        first += integrate_adaptive(f1, a, b, 1e-15)?.value;
        second += integrate_adaptive(f2, a, b, 1e-15)?.value;
    }
    Ok(RoccaforteTerms {
        first,
        second: Some(second),
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_accessors() {
        let d = Region::disk(2.0).unwrap();
        let bp = d.boundary_point(0.0).unwrap();
        assert_eq!(bp.curvature, 0.5);
        assert!((bp.normal.x1 + 1.0).abs() < 1e-15 && bp.normal.x2.abs() < 1e-15);
        assert!((d.area() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn polygon_curvature_is_capability_error() {
        let sq = unit_square();
        assert!(matches!(sq.boundary_point(0.3), Err(Error::Capability(_))));
    }

    fn unit_square() -> Region {
        Region::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn polygon_validation() {
        let bow = Region::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ]);
        assert!(bow.is_err());
        let cw = Region::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(1.0, 0.0),
        ]);
        assert!(cw.is_err());
    }

    #[test]
    fn region_json_roundtrip() {
        for s in [
            r#"{"type":"disk","R":1.5}"#,
            r#"{"type":"star","coeffs":[1.0,0.0,0.0,0.0,0.0,0.15,0.0]}"#,
            r#"{"type":"polygon","vertices":[[0.0,0.0],[1.0,0.0],[0.0,1.0]]}"#,
        ] {
            let r = Region::from_json(s).unwrap();
            assert_eq!(serde_json::to_string(&r).unwrap(), s);
        }
        assert!(Region::from_json(r#"{"type":"disk","R":1.0,"extra":2}"#).is_err());
        assert!(Region::from_json(r#"{"type":"star","coeffs":[0.1,0.5]}"#).is_err());
    }

    #[test]
    fn square_slab() {
        let sq = unit_square();
        for eps in [0.0, 0.1, 0.37] {
            let fam = TranslateFamily::new(vec![Point2::new(1.0, 0.0)], eps).unwrap();
            let a = intersect_translates_area(&sq, &fam).unwrap();
            assert!(
                (a.complement - eps).abs() < 1e-14,
                "{eps}: {}",
                a.complement
            );
        }
    }

    #[test]
    fn slab_handles_nonconvex() {
        // L-shape minus its own translate by (0.5, 0): the removed area is 1.0.
        let l = Region::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 2.0),
            Point2::new(0.0, 2.0),
        ])
        .unwrap();
        let fam = TranslateFamily::new(vec![Point2::new(0.5, 0.0)], 1.0).unwrap();
        let a = intersect_translates_area(&l, &fam).unwrap();
        assert!((a.complement - 1.0).abs() < 1e-13);
    }

    #[test]
    fn zero_vector_terms_vanish() {
        let d = Region::disk(1.0).unwrap();
        let t = roccaforte_terms(&d, &[Point2::new(0.0, 0.0)]).unwrap();
        assert_eq!(t.first, 0.0);
        assert!(t.degenerate);
    }
}
