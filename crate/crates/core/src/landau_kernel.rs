//! Landau-level projection kernels in the symmetric gauge and the truncated
//! Hermite kernel K_{n,ξ}.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, MAX_LEVEL};

/// Constant magnetic field strength B > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticSetup {
    #[serde(rename = "B")]
    pub b: f64,
}

impl MagneticSetup {
    pub fn new(b: f64) -> Result<Self> {
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::Domain(format!(
                "field strength must be positive, got {b}"
            )));
        }
        Ok(Self { b })
    }
}

/// Which Landau levels make up the projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LevelSelector {
    /// The single level ℓ, projection P_ℓ.
    Single(usize),
    /// Levels 0..=n, projection P_{≤n}.
    UpTo(usize),
}

impl LevelSelector {
    /// Highest level index involved.
    pub fn top(&self) -> usize {
        match *self {
            LevelSelector::Single(l) | LevelSelector::UpTo(l) => l,
        }
    }

    /// Level indices in increasing order.
    pub fn levels(&self) -> std::ops::RangeInclusive<usize> {
        match *self {
            LevelSelector::Single(l) => l..=l,
            LevelSelector::UpTo(n) => 0..=n,
        }
    }

    /// Number of levels.
    pub fn count(&self) -> usize {
        match *self {
            LevelSelector::Single(_) => 1,
            LevelSelector::UpTo(n) => n + 1,
        }
    }
}

impl fmt::Display for LevelSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelSelector::Single(l) => write!(f, "single:{l}"),
            LevelSelector::UpTo(n) => write!(f, "upto:{n}"),
        }
    }
}

impl FromStr for LevelSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, idx) = s
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("level selector `{s}` is not kind:index")))?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad level index in `{s}`")))?;
        match kind.trim() {
            "single" => Ok(LevelSelector::Single(idx)),
            "upto" => Ok(LevelSelector::UpTo(idx)),
            other => Err(Error::Invalid(format!(
                "unknown level selector kind `{other}`"
            ))),
        }
    }
}

impl Serialize for LevelSelector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LevelSelector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

impl Point2 {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    /// Symplectic pairing ⟨x|J y⟩ = x₁y₂ − x₂y₁, J = [[0,1],[−1,0]].
    pub fn symplectic(&self, y: &Point2) -> f64 {
        self.x1 * y.x2 - self.x2 * y.x1
    }

    /// J applied to the point: (x₂, −x₁).
    pub fn j(&self) -> Point2 {
        Point2::new(self.x2, -self.x1)
    }

    pub fn dot(&self, y: &Point2) -> f64 {
        self.x1 * y.x1 + self.x2 * y.x2
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: f64) -> Point2 {
        Point2::new(s * self.x1, s * self.x2)
    }

    /// Rotation by angle `phi` about the origin.
    pub fn rotate(&self, phi: f64) -> Point2 {
        let (s, c) = phi.sin_cos();
        Point2::new(c * self.x1 - s * self.x2, s * self.x1 + c * self.x2)
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

/// ν = ⌊(μ/B − 1)/2⌋, the index of the highest filled Landau level.
pub fn nu_from_mu(mu: f64, b: f64) -> Result<usize> {
    if !(b > 0.0) {
        return Err(Error::Domain(format!(
            "field strength must be positive, got {b}"
        )));
    }
    if mu < b {
        return Err(Error::Domain(format!(
            "μ = {mu} below the lowest Landau level B = {b}: the Fermi projection is the zero operator"
        )));
    }
    Ok(((mu / b - 1.0) / 2.0).floor() as usize)
}

/// Evaluator for the projection kernel of a level selector. The Laguerre
/// coefficients are computed once, which matters in dense assembly loops.
#[derive(Debug, Clone)]
pub struct LandauKernel {
    b: f64,
    coeffs: Vec<f64>,
}

impl LandauKernel {
    pub fn new(setup: MagneticSetup, selector: LevelSelector) -> Result<Self> {
        let coeffs = match selector {
            LevelSelector::Single(l) => {
                check(l)?;
                specfun::laguerre_coefficients(l, 0)?
            }
            LevelSelector::UpTo(n) => {
                check(n)?;
                specfun::laguerre_coefficients(n, 1)?
            }
        };
        Ok(Self { b: setup.b, coeffs })
    }

    /// Kernel value at (x, y).
    pub fn eval(&self, x: Point2, y: Point2) -> Complex64 {
        let d2 = (x - y).norm_sq();
        let u = 0.5 * self.b * d2;
        let radial = self.b / (2.0 * std::f64::consts::PI)
            * (-0.5 * u).exp()
            * specfun::horner(&self.coeffs, u);
        let phase = 0.5 * self.b * x.symplectic(&y);
        Complex64::from_polar(radial, phase)
    }

    /// Diagonal value, the density (number of levels)·B/2π.
    pub fn diagonal(&self) -> f64 {
        self.b / (2.0 * std::f64::consts::PI) * self.coeffs[0]
    }
}

fn check(l: usize) -> Result<()> {
    if l > MAX_LEVEL {
        return Err(Error::Capability(format!(
            "level {l} exceeds supported cap {MAX_LEVEL}"
        )));
    }
    Ok(())
}

/// Kernel p_ℓ(x, y) of the ℓ-th Landau level projection.
pub fn p_ell(setup: MagneticSetup, ell: usize, x: Point2, y: Point2) -> Result<Complex64> {
    Ok(LandauKernel::new(setup, LevelSelector::Single(ell))?.eval(x, y))
}

/// Kernel of P_{≤n}, via the single polynomial 𝓛_n^{(1)}.
pub fn p_le_n(setup: MagneticSetup, n: usize, x: Point2, y: Point2) -> Result<Complex64> {
    Ok(LandauKernel::new(setup, LevelSelector::UpTo(n))?.eval(x, y))
}

/// Coincidence threshold below which the confluent form of the
/// Christoffel–Darboux quotient is used.
pub const CONFLUENT_THRESHOLD: f64 = 1e-7;

/// Below this separation the quotient loses more than ~11 digits and the
/// second-order midpoint expansion is used instead.
pub const SERIES_THRESHOLD: f64 = 1e-4;

/// Kernel of K_{n,ξ}: Σ_{ℓ≤n} ψ_ℓ(τ)ψ_ℓ(τ') on [ξ,∞)², zero elsewhere,
/// evaluated in Christoffel–Darboux form.
pub fn k_kernel(n: usize, xi: f64, tau: f64, tau_p: f64) -> f64 {
    if tau < xi || tau_p < xi {
        return 0.0;
    }
    let mut a = vec![0.0; n + 3];
    let d = tau - tau_p;
    let nf = n as f64;
    if d.abs() < SERIES_THRESHOLD {
        // The kernel is even in the separation about the midpoint m:
        // K = K(m,m) + (d/2)² Σ_ℓ (ψ_ℓψ_ℓ'' − ψ_ℓ'²)(m) + O(d⁴).
        let m = 0.5 * (tau + tau_p);
        specfun::hermite_fns(n + 2, m, &mut a);
        let diag =
            (nf + 1.0) * a[n + 1] * a[n + 1] - ((nf + 1.0) * (nf + 2.0)).sqrt() * a[n] * a[n + 2];
        if d.abs() < CONFLUENT_THRESHOLD {
            return diag;
        }
        let mut curv = 0.0;
        for l in 0..=n {
            let lf = l as f64;
            let lower = if l > 0 {
                (lf / 2.0).sqrt() * a[l - 1]
            } else {
                0.0
            };
            let dpsi = lower - ((lf + 1.0) / 2.0).sqrt() * a[l + 1];
            curv += (m * m - (2.0 * lf + 1.0)) * a[l] * a[l] - dpsi * dpsi;
        }
        return diag + 0.25 * d * d * curv;
    }
    let mut b = vec![0.0; n + 2];
    specfun::hermite_fns(n + 1, tau, &mut a);
    specfun::hermite_fns(n + 1, tau_p, &mut b);
    ((nf + 1.0) / 2.0).sqrt() * (a[n + 1] * b[n] - a[n] * b[n + 1]) / d
}
