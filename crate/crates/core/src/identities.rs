//! Numerical verification of the algebraic and special-function identities
//! behind the boundary coefficients: the change of variables in the trace
//! chain, the Laguerre argument maps, the Hermite integral identity, Mehler's
//! formula and Christoffel–Darboux.
//!
//! The change-of-variables checks run in the inverse direction: starting from
//! (ξ, τ) the original variables are reconstructed and both sides evaluated.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::landau_kernel::Point2;
use crate::specfun::{self, hermite_fns, hermite_poly};

/// Largest chain length in the randomized suites.
pub const MAX_CHAIN: usize = 8;

// ---------------------------------------------------------------------------
// Integer matrices

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntMatrix {
    pub dim: usize,
    pub entries: Vec<i64>,
}

impl IntMatrix {
    fn from_fn(dim: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let entries = (0..dim * dim)
            .map(|k| f(k / dim + 1, k % dim + 1))
            .collect();
        Self { dim, entries }
    }

    /// Entry (i, j), 1-based.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[(i - 1) * self.dim + (j - 1)]
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| (i == j) as i64)
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let n = self.dim;
        IntMatrix::from_fn(n, |i, j| {
            (1..=n).map(|k| self.get(i, k) * o.get(k, j)).sum()
        })
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.dim, |i, j| self.get(j, i))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        let n = self.dim;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j] as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (1..=self.dim)
            .map(|i| {
                (1..=self.dim)
                    .map(|j| self.get(i, j) as f64 * v[j - 1])
                    .sum()
            })
            .collect()
    }
}

/// S_{ij} = −1 for i < j, 0 on the diagonal, 1 for i > j.
pub fn s_matrix(m: usize) -> IntMatrix {
    IntMatrix::from_fn(m - 1, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
        std::cmp::Ordering::Greater => 1,
    })
}

/// A^{(q)}_{ij} = 1 if i ≤ j ≤ q or q+1 ≤ j ≤ i, else 0.
pub fn a_matrix(m: usize, q: usize) -> IntMatrix {
    IntMatrix::from_fn(m - 1, |i, j| {
        ((i <= j && j <= q) || (q < j && j <= i)) as i64
    })
}

/// Inverse of A^{(q)}: unit diagonal, −1 at (i, i+1) for i ≤ q−1 and at
/// (i, i−1) for i ≥ q+2.
pub fn a_inverse(m: usize, q: usize) -> IntMatrix {
    IntMatrix::from_fn(m - 1, |i, j| {
        if i == j {
            1
        } else if (j == i + 1 && i < q) || (i == j + 1 && j > q) {
            -1
        } else {
            0
        }
    })
}

/// I^{(q)} = diag(1,…,1, −1,…,−1) with q leading ones.
pub fn flip_matrix(m: usize, q: usize) -> IntMatrix {
    IntMatrix::from_fn(m - 1, |i, j| {
        if i != j {
            0
        } else if i <= q {
            1
        } else {
            -1
        }
    })
}

/// The matrices of the change of variables for chain length m and branch q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubstitutionPlan {
    pub m: usize,
    pub q: usize,
    pub s: IntMatrix,
    pub a: IntMatrix,
    pub a_inv: IntMatrix,
    pub flip: IntMatrix,
}

impl SubstitutionPlan {
    pub fn new(m: usize, q: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Domain(format!("chain length must be ≥ 3, got {m}")));
        }
        if !(1..m).contains(&q) {
            return Err(Error::Domain(format!(
                "branch index q = {q} outside 1..={}",
                m - 1
            )));
        }
        Ok(Self {
            m,
            q,
            s: s_matrix(m),
            a: a_matrix(m, q),
            a_inv: a_inverse(m, q),
            flip: flip_matrix(m, q),
        })
    }

    /// det A = 1, A·A⁻¹ = 1, I² = 1 and Sᵀ = −S, all in integer arithmetic.
    pub fn integer_identities_hold(&self) -> bool {
        let id = IntMatrix::identity(self.m - 1);
        let neg_s = IntMatrix {
            dim: self.s.dim,
            entries: self.s.entries.iter().map(|x| -x).collect(),
        };
        self.a.det() == 1
            && self.a.mul(&self.a_inv) == id
            && self.a_inv.mul(&self.a) == id
            && self.flip.mul(&self.flip) == id
            && self.s.transpose() == neg_s
    }

    /// τ_{m−1} when q ≤ m−2; for q = m−1 no sign flip occurs and the
    /// corresponding shift term vanishes.
    fn tau_star(&self, tau: &[f64]) -> f64 {
        if self.q + 1 < self.m {
            tau[self.m - 2]
        } else {
            0.0
        }
    }
}

// ---------------------------------------------------------------------------
// Individual verifiers

/// Outcome of one verification case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub passed: bool,
    pub error: f64,
    pub tolerance: f64,
    pub inputs: serde_json::Value,
}

fn check(error: f64, tolerance: f64, inputs: serde_json::Value) -> Check {
    Check {
        passed: error <= tolerance,
        error,
        tolerance,
        inputs,
    }
}

fn sum_points(ys: &[Point2]) -> Point2 {
    ys.iter().fold(Point2::default(), |a, y| a + *y)
}

/// Σ_{i=1}^{m−2} ⟨y₁+…+y_i | J y_{i+1}⟩.
fn chain_phase(ys: &[Point2]) -> f64 {
    (1..ys.len())
        .map(|i| sum_points(&ys[..i]).symplectic(&ys[i]))
        .sum()
}

/// Σ_{i=0}^{m−1} ⟨x_i|J x_{i+1}⟩ with x₀ = x_m = x and x_i = x − (y₁+…+y_i)
/// equals Σ_{i=1}^{m−2} ⟨y₁+…+y_i | J y_{i+1}⟩. Relative tolerance 1e−12.
pub fn verify_phase_telescoping(x: Point2, ys: &[Point2]) -> Check {
    let m = ys.len() + 1;
    let mut xs = vec![x];
    for i in 1..m {
        xs.push(x - sum_points(&ys[..i]));
    }
    xs.push(x);
    let terms: Vec<f64> = (0..m).map(|i| xs[i].symplectic(&xs[i + 1])).collect();
    let lhs: f64 = terms.iter().sum();
    let rhs = chain_phase(ys);
    let scale = 1.0 + terms.iter().map(|t| t.abs()).sum::<f64>();
    check(
        (lhs - rhs).abs() / scale,
        1e-12,
        json!({"m": m, "x": x, "y": ys, "lhs": lhs, "rhs": rhs}),
    )
}

/// With t_i = ⟨y_i|n⟩ and z_i = −⟨y_i|Jn⟩, y_i = −z_i Jn + t_i n,
/// ‖y_i‖² = z_i² + t_i², and the chain phase equals ⟨z|S t⟩.
pub fn verify_local_frame_reduction(ys: &[Point2], normal: Point2) -> Check {
    let m = ys.len() + 1;
    let jn = normal.j();
    let t: Vec<f64> = ys.iter().map(|y| y.dot(&normal)).collect();
    let z: Vec<f64> = ys.iter().map(|y| -y.dot(&jn)).collect();
    let mut err: f64 = 0.0;
    for (i, y) in ys.iter().enumerate() {
        let rec = jn.scale(-z[i]) + normal.scale(t[i]);
        err = err.max((rec - *y).norm() / (1.0 + y.norm()));
        err = err.max((z[i] * z[i] + t[i] * t[i] - y.norm_sq()).abs() / (1.0 + y.norm_sq()));
    }
    let st = s_matrix(m).apply(&t);
    let zst: f64 = z.iter().zip(&st).map(|(a, b)| a * b).sum();
    let phase = chain_phase(ys);
    let scale = 1.0 + ys.iter().map(|y| y.norm_sq()).sum::<f64>() * m as f64;
    err = err.max((zst - phase).abs() / scale);
    check(
        err,
        1e-12,
        json!({"m": m, "y": ys, "n": normal, "phase": phase, "zSt": zst}),
    )
}

/// Pre-substitution exponent from (ξ, t): mξ² + ξΣT + ¼ΣT² + ¼Σt² with
/// T = S t, T_m = 0 and t_m = t₁+⋯+t_{m−1}.
fn exponent_lhs(m: usize, xi: f64, t: &[f64]) -> f64 {
    let big_t = s_matrix(m).apply(t);
    let tm: f64 = t.iter().sum();
    let sum_t: f64 = big_t.iter().sum();
    let sq_t: f64 = big_t.iter().map(|x| x * x).sum();
    let sq_small: f64 = t.iter().map(|x| x * x).sum::<f64>() + tm * tm;
    m as f64 * xi * xi + xi * sum_t + 0.25 * sq_t + 0.25 * sq_small
}

/// Starting from (ξ, τ), undo ξ → −ξ and the shift by (τ₁+τ*)/2, then
/// t = A⁻¹Iτ, and compare the exponent with ξ² + Σ_j (ξ+τ_j)².
/// Relative tolerance 1e−11.
pub fn verify_exponent_identity(plan: &SubstitutionPlan, xi: f64, tau: &[f64]) -> Check {
    let m = plan.m;
    let ts = plan.tau_star(tau);
    let xi0 = -xi - 0.5 * (tau[0] + ts);
    let t = plan.a_inv.apply(&plan.flip.apply(tau));
    let lhs = exponent_lhs(m, xi0, &t);
    let rhs = xi * xi + tau.iter().map(|x| (xi + x).powi(2)).sum::<f64>();
    check(
        (lhs - rhs).abs() / (1.0 + rhs),
        1e-11,
        json!({"m": m, "q": plan.q, "xi": xi, "tau": tau, "xi_reconstructed": xi0, "t": t, "lhs": lhs, "rhs": rhs}),
    )
}

/// Closed forms of T_j in τ: plain (t = A⁻¹τ), after the sign flip
/// (t = A⁻¹Iτ) and after the ξ-shift (T̃ = T − (τ₁+τ*)), plus t̃ = IA⁻¹τ.
pub fn verify_t_in_tau(plan: &SubstitutionPlan, tau: &[f64]) -> Check {
    let (m, q) = (plan.m, plan.q);
    let ts = plan.tau_star(tau);
    let tj = |j: usize| tau[j - 1];
    let plain = plan.s.apply(&plan.a_inv.apply(tau));
    let flipped = plan.s.apply(&plan.a_inv.apply(&plan.flip.apply(tau)));
    let small = plan.flip.apply(&plan.a_inv.apply(tau));
    let small_alt = plan.a_inv.apply(&plan.flip.apply(tau));
    let mut err: f64 = 0.0;
    for j in 1..m {
        let (p, f, tl, s) = if j < q {
            (
                tj(1) - tj(j) - tj(j + 1) - ts,
                tj(1) - tj(j) - tj(j + 1) + ts,
                -tj(j) - tj(j + 1),
                tj(j) - tj(j + 1),
            )
        } else if j == q {
            (tj(1) - tj(q) - ts, tj(1) - tj(q) + ts, -tj(q), tj(q))
        } else if j == q + 1 {
            (
                tj(1) + tj(q + 1) - ts,
                tj(1) - tj(q + 1) + ts,
                -tj(q + 1),
                -tj(q + 1),
            )
        } else {
            (
                tj(1) + tj(j - 1) + tj(j) - ts,
                tj(1) - tj(j - 1) - tj(j) + ts,
                -tj(j - 1) - tj(j),
                tj(j - 1) - tj(j),
            )
        };
        err = err
            .max((plain[j - 1] - p).abs())
            .max((flipped[j - 1] - f).abs())
            .max((flipped[j - 1] - (tj(1) + ts) - tl).abs())
            .max((small[j - 1] - s).abs())
            .max((small_alt[j - 1] - s).abs());
    }
    let scale = 1.0 + tau.iter().map(|x| x.abs()).sum::<f64>();
    check(
        err / scale,
        1e-12,
        json!({"m": m, "q": q, "tau": tau, "T": plain}),
    )
}

/// Each Laguerre argument (ω + i(2ξ+T_j))² + t_j², j = 1..m, under the full
/// chain (τ → τ−ξ, shift, sign flip, t = A⁻¹Iτ, ξ → −ξ) equals its product
/// form. Relative tolerance 1e−11.
pub fn verify_laguerre_argument_maps(
    plan: &SubstitutionPlan,
    omega: f64,
    xi: f64,
    tau: &[f64],
) -> Check {
    let (m, q) = (plan.m, plan.q);
    let shifted: Vec<f64> = tau.iter().map(|x| x - xi).collect();
    let ts = plan.tau_star(&shifted);
    let xi0 = -xi - 0.5 * (shifted[0] + ts);
    let t = plan.a_inv.apply(&plan.flip.apply(&shifted));
    let big_t = plan.s.apply(&t);
    let tm: f64 = t.iter().sum();
    let i = Complex64::i();
    let w = Complex64::new(omega, 0.0);
    let f = |x: f64| w - 2.0 * i * x;
    let tj = |j: usize| tau[j - 1];
    let mut err: f64 = 0.0;
    let mut values = Vec::new();
    for j in 1..=m {
        let (bt, st) = if j == m {
            (0.0, tm)
        } else {
            (big_t[j - 1], t[j - 1])
        };
        let pre = (w + i * (2.0 * xi0 + bt)).powi(2) + st * st;
        let claim = if j == m {
            if q + 1 < m {
                f(tj(1)) * f(tj(m - 1))
            } else {
                f(xi) * f(tj(1))
            }
        } else if j < q {
            f(tj(j)) * f(tj(j + 1))
        } else if j == q || j == q + 1 {
            f(xi) * f(tj(j))
        } else {
            f(tj(j - 1)) * f(tj(j))
        };
        err = err.max((pre - claim).norm() / (1.0 + claim.norm()));
        values.push([pre.re, pre.im, claim.re, claim.im]);
    }
    check(
        err,
        1e-11,
        json!({"m": m, "q": q, "omega": omega, "xi": xi, "tau": tau, "pre_vs_claim": values}),
    )
}

/// (2π)^{−1/2} ∫_{−30}^{30} L_ℓ((ω−2iξ)(ω−2iτ)/2) e^{−ω²/4} dω = √2 (2^ℓ ℓ!)^{−1} H_ℓ(ξ) H_ℓ(τ),
/// relative tolerance 1e−9 with an absolute floor 1e−10.
pub fn verify_hermite_identity(ell: usize, xi: f64, tau: f64) -> Result<Check> {
    if ell > 12 || xi.abs() > 4.0 || tau.abs() > 4.0 {
        return Err(Error::Domain(
            "Hermite identity checked for ℓ ≤ 12, |ξ|,|τ| ≤ 4".into(),
        ));
    }
    let rhs = 2f64.sqrt()
        * (-(ell as f64) * 2f64.ln() - specfun::ln_factorial(ell)).exp()
        * hermite_poly(ell, xi)?
        * hermite_poly(ell, tau)?;
    let allowed = 1e-9 * rhs.abs() + 1e-10;
    // The integrand cancels by up to ~1e9 relative to its magnitude at the
    // top of the domain, so the fixed composite rule runs in double-double.
    // A coarser rule supplies the error estimate.
    let fine = dd::hermite_integral(ell, xi, tau, 20);
    let coarse = dd::hermite_integral(ell, xi, tau, 14);
    let norm = (2.0 * PI).sqrt();
    let quad_err = (fine - coarse).norm() / norm;
    if quad_err > allowed {
        return Err(Error::Numeric(format!(
            "Hermite-identity quadrature unresolved at ℓ={ell}, ξ={xi}, τ={tau}: {quad_err:e}"
        )));
    }
    let lhs = fine / norm;
    let diff = (lhs - rhs).norm();
    let err = diff / allowed;
    Ok(check(
        err,
        1.0,
        json!({"ell": ell, "xi": xi, "tau": tau, "lhs": [lhs.re, lhs.im], "rhs": rhs, "abs_error": diff}),
    ))
}

/// Double-double evaluation of ∫_{−30}^{30} 𝓛_ℓ((ω−2iξ)(ω−2iτ)/2) e^{−ω²/4} dω.
mod dd {
    use std::sync::OnceLock;

    use num_complex::Complex64;
    use twofloat::TwoFloat;

    type C = (TwoFloat, TwoFloat);

    fn mul(a: C, b: C) -> C {
        (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
    }

    // The crate's own division and exponential stop near double precision.

    fn div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
        let q0 = a.hi() / b.hi();
        let r = a - b * q0;
        let q1 = r.hi() / b.hi();
        let r = r - b * q1;
        TwoFloat::new_add(q0, q1) + r.hi() / b.hi()
    }

    fn exp(x: TwoFloat) -> TwoFloat {
        let ln2 = TwoFloat::new_add(std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17);
        let k = (x.hi() / std::f64::consts::LN_2).round();
        // e^x = 2^k (e^{s})^{1024}, |s| ≤ ln2/2048
        let s = (x - ln2 * k) * (1.0 / 1024.0);
        let mut term = s;
        let mut em1 = s;
        for j in 2..=9 {
            term = term * s / j as f64;
            em1 += term;
        }
        for _ in 0..10 {
            em1 = em1 * (em1 + 2.0);
        }
        let e = em1 + 1.0;
        let scale = 2f64.powi(k as i32);
        TwoFloat::new_add(e.hi() * scale, e.lo() * scale)
    }

    /// Gauss–Legendre rule on [−1,1], nodes polished by Newton steps in double-double.
    fn reference(n: usize) -> Vec<(TwoFloat, TwoFloat)> {
        let base = crate::specfun::gauss_legendre(n, -1.0, 1.0).expect("n ≥ 1");
        base.nodes
            .iter()
            .map(|&x0| {
                let mut x = TwoFloat::from(x0);
                let mut dp = TwoFloat::from(1.0);
                for _ in 0..3 {
                    let (mut p0, mut p1) = (TwoFloat::from(1.0), x);
                    for k in 2..=n {
                        let k = k as f64;
                        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = div(n as f64 * (x * p1 - p0), x * x - 1.0);
                    x -= div(p1, dp);
                }
                (x, div(TwoFloat::from(2.0), (1.0 - x * x) * dp * dp))
            })
            .collect()
    }

    /// Composite rule with unit panels on [−30,30].
    fn rule(per_panel: usize) -> &'static [(TwoFloat, TwoFloat)] {
        static FINE: OnceLock<Vec<(TwoFloat, TwoFloat)>> = OnceLock::new();
        static COARSE: OnceLock<Vec<(TwoFloat, TwoFloat)>> = OnceLock::new();
        let cell = match per_panel {
            20 => &FINE,
            14 => &COARSE,
            _ => unreachable!("only the 14- and 20-node rules are used"),
        };
        cell.get_or_init(|| {
            let base = reference(per_panel);
            (0..60)
                .flat_map(|p| {
                    let a = TwoFloat::from(p as f64 - 30.0);
                    base.iter()
                        .map(move |&(t, w)| (a + 0.5 * (t + 1.0), 0.5 * w))
                })
                .collect()
        })
    }

    pub fn hermite_integral(ell: usize, xi: f64, tau: f64, per_panel: usize) -> Complex64 {
        // 𝓛_ℓ(z) = Σ_k (−1)^k C(ℓ,k) z^k / k!
        let mut coeffs = Vec::with_capacity(ell + 1);
        let (mut binom, mut fact) = (1.0f64, 1.0f64);
        for k in 0..=ell {
            if k > 0 {
                binom = binom * (ell + 1 - k) as f64 / k as f64;
                fact *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            coeffs.push(TwoFloat::from(sign * binom) / fact);
        }
        let xt = TwoFloat::new_mul(xi, tau);
        let s = TwoFloat::new_add(xi, tau);
        let zero = TwoFloat::from(0.0);
        let mut acc: C = (zero, zero);
        for &(w, wt) in rule(per_panel) {
            let z = (0.5 * (w * w) - 2.0 * xt, -(s * w));
            let mut p: C = (coeffs[ell], zero);
            for &c in coeffs[..ell].iter().rev() {
                p = mul(p, z);
                p.0 += c;
            }
            let g = wt * exp(-0.25 * (w * w));
            acc = (acc.0 + g * p.0, acc.1 + g * p.1);
        }
        Complex64::new(f64::from(acc.0), f64::from(acc.1))
    }
}

/// Partial sums of Σ H_ℓ(ξ)H_ℓ(τ)(t/2)^ℓ/ℓ! against Mehler's closed form,
/// error relative to max(1, |closed form|), tolerance 1e−9.
pub fn verify_mehler(xi: f64, tau: f64, t: f64) -> Result<Check> {
    if !(t.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "Mehler series needs |t| < 1, got {t}"
        )));
    }
    let closed = (1.0 - t * t).powf(-0.5)
        * (2.0 * xi * tau * t / (1.0 - t) - t * t * (xi + tau).powi(2) / (1.0 - t * t)).exp();
    // H_ℓ(ξ)H_ℓ(τ)/(2^ℓ ℓ!) = √π e^{(ξ²+τ²)/2} ψ_ℓ(ξ)ψ_ℓ(τ).
    const CAP: usize = 200;
    let mut a = vec![0.0; CAP + 1];
    let mut b = vec![0.0; CAP + 1];
    hermite_fns(CAP, xi, &mut a);
    hermite_fns(CAP, tau, &mut b);
    let pre = PI.sqrt() * (0.5 * (xi * xi + tau * tau)).exp();
    let mut sum = 0.0;
    let mut tp = 1.0;
    let mut quiet = 0;
    let mut terms = 0;
    for l in 0..=CAP {
        let term = pre * a[l] * b[l] * tp;
        sum += term;
        tp *= t;
        terms = l + 1;
        if term.abs() <= 1e-17 * sum.abs().max(1.0) {
            quiet += 1;
            if quiet >= 4 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    if quiet < 4 {
        return Err(Error::Numeric(format!(
            "Mehler series not converged within {CAP} terms at ξ={xi}, τ={tau}, t={t}"
        )));
    }
    Ok(check(
        (sum - closed).abs() / closed.abs().max(1.0),
        1e-9,
        json!({"xi": xi, "tau": tau, "t": t, "series": sum, "closed": closed, "terms": terms}),
    ))
}

/// Σ_{ℓ≤n} H_ℓ(τ)H_ℓ(τ′)/(2^ℓ ℓ!) against the Christoffel–Darboux quotient
/// (H_{n+1}(τ)H_n(τ′) − H_n(τ)H_{n+1}(τ′))/(2^{n+1} n! (τ−τ′)), or the
/// confluent form (H_{n+1}² − H_n H_{n+2})/(2^{n+1} n!) at τ = τ′. Errors are
/// relative to Σ|terms|, tolerance 1e−10.
pub fn verify_christoffel_darboux(n: usize, tau: f64, tau_p: f64) -> Result<Check> {
    if n > 20 {
        return Err(Error::Domain(format!(
            "Christoffel–Darboux checked for n ≤ 20, got {n}"
        )));
    }
    let norm = |l: usize| (l as f64 * 2f64.ln() + specfun::ln_factorial(l)).exp();
    let mut direct = 0.0;
    let mut scale = 0.0;
    for l in 0..=n {
        let term = hermite_poly(l, tau)? * hermite_poly(l, tau_p)? / norm(l);
        direct += term;
        scale += term.abs();
    }
    let den = 2.0 * norm(n);
    let h = |l, x| hermite_poly(l, x);
    let quotient = if tau == tau_p {
        (h(n + 1, tau)?.powi(2) - h(n, tau)? * h(n + 2, tau)?) / den
    } else {
        (h(n + 1, tau)? * h(n, tau_p)? - h(n, tau)? * h(n + 1, tau_p)?) / (den * (tau - tau_p))
    };
    Ok(check(
        (direct - quotient).abs() / scale,
        1e-10,
        json!({"n": n, "tau": tau, "tau_p": tau_p, "direct": direct, "quotient": quotient}),
    ))
}

/// Σ_{ℓ≤n} L_ℓ(t) = L_n^{(1)}(t), relative to max(1, Σ|L_ℓ(t)|), tolerance 1e−12.
pub fn verify_laguerre_sum(n: usize, t: f64) -> Result<Check> {
    let mut sum = 0.0;
    let mut scale = 1.0;
    for l in 0..=n {
        let v = specfun::laguerre_real(l, 0, t)?;
        sum += v;
        scale += v.abs();
    }
    let one = specfun::laguerre_real(n, 1, t)?;
    Ok(check(
        (sum - one).abs() / scale,
        1e-12,
        json!({"n": n, "t": t, "sum": sum, "generalized": one}),
    ))
}

// ---------------------------------------------------------------------------
// Randomized suites

/// Named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    IntegerMatrices,
    PhaseTelescoping,
    LocalFrame,
    Exponent,
    TTable,
    LaguerreMaps,
    HermiteIdentity,
    Mehler,
    ChristoffelDarboux,
    LaguerreSum,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::IntegerMatrices,
        Suite::PhaseTelescoping,
        Suite::LocalFrame,
        Suite::Exponent,
        Suite::TTable,
        Suite::LaguerreMaps,
        Suite::HermiteIdentity,
        Suite::Mehler,
        Suite::ChristoffelDarboux,
        Suite::LaguerreSum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::IntegerMatrices => "integer-matrices",
            Suite::PhaseTelescoping => "phase-telescoping",
            Suite::LocalFrame => "local-frame",
            Suite::Exponent => "exponent",
            Suite::TTable => "t-table",
            Suite::LaguerreMaps => "laguerre-maps",
            Suite::HermiteIdentity => "hermite-identity",
            Suite::Mehler => "mehler",
            Suite::ChristoffelDarboux => "christoffel-darboux",
            Suite::LaguerreSum => "laguerre-sum",
        }
    }

    /// Parses a suite name; `all` yields every suite.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }
}

/// Result of a randomized suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub identity: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: bool,
    /// Largest error in units of the case tolerance.
    pub max_error: f64,
    pub failures: Vec<serde_json::Value>,
}

fn points(rng: &mut ChaCha8Rng, k: usize) -> Vec<Point2> {
    (0..k)
        .map(|_| Point2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
        .collect()
}

fn plan(rng: &mut ChaCha8Rng) -> SubstitutionPlan {
    let m = rng.random_range(3..=MAX_CHAIN);
    let q = rng.random_range(1..m);
    SubstitutionPlan::new(m, q).expect("valid plan")
}

fn run_case(suite: Suite, rng: &mut ChaCha8Rng) -> Result<Check> {
    Ok(match suite {
        Suite::IntegerMatrices => {
            let p = plan(rng);
            let ok = p.integer_identities_hold();
            check(if ok { 0.0 } else { 1.0 }, 0.0, json!({"m": p.m, "q": p.q}))
        }
        Suite::PhaseTelescoping => {
            let m = rng.random_range(2..=MAX_CHAIN);
            let x = points(rng, 1)[0];
            verify_phase_telescoping(x, &points(rng, m - 1))
        }
        Suite::LocalFrame => {
            let m = rng.random_range(2..=MAX_CHAIN);
            let th: f64 = rng.random_range(0.0..2.0 * PI);
            verify_local_frame_reduction(&points(rng, m - 1), Point2::new(th.cos(), th.sin()))
        }
        Suite::Exponent => {
            let p = plan(rng);
            let xi = rng.random_range(-3.0..3.0);
            let tau: Vec<f64> = (0..p.m - 1).map(|_| rng.random_range(0.0..3.0)).collect();
            verify_exponent_identity(&p, xi, &tau)
        }
        Suite::TTable => {
            let p = plan(rng);
            let tau: Vec<f64> = (0..p.m - 1).map(|_| rng.random_range(-3.0..3.0)).collect();
            verify_t_in_tau(&p, &tau)
        }
        Suite::LaguerreMaps => {
            let p = plan(rng);
            let omega = rng.random_range(-5.0..5.0);
            let xi = rng.random_range(-3.0..3.0);
            let tau: Vec<f64> = (0..p.m - 1).map(|_| rng.random_range(0.0..3.0)).collect();
            verify_laguerre_argument_maps(&p, omega, xi, &tau)
        }
        Suite::HermiteIdentity => {
            let l = rng.random_range(0..=12);
            verify_hermite_identity(l, rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0))?
        }
        Suite::Mehler => {
            let t = rng.random_range(-0.8..0.8);
            verify_mehler(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), t)?
        }
        Suite::ChristoffelDarboux => {
            let n = rng.random_range(0..=20);
            let a = rng.random_range(-4.0..4.0);
            let b = if rng.random_bool(0.2) {
                a
            } else {
                rng.random_range(-4.0..4.0)
            };
            verify_christoffel_darboux(n, a, b)?
        }
        Suite::LaguerreSum => {
            verify_laguerre_sum(rng.random_range(0..=10), rng.random_range(0.0..40.0))?
        }
    })
}

/// Runs `cases` seeded random cases. Case i draws from its own generator
/// seeded with a hash of (seed, suite, i), so the outcome does not depend on
/// scheduling.
pub fn run_suite(suite: Suite, cases: usize, seed: u64) -> SuiteReport {
    let salt = Suite::ALL.iter().position(|s| *s == suite).unwrap() as u64;
    let outcomes: Vec<std::result::Result<Check, (Error, u64)>> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let case_seed = crate::mix_seed(crate::mix_seed(seed, salt), i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
            run_case(suite, &mut rng).map_err(|e| (e, case_seed))
        })
        .collect();
    let mut max_error: f64 = 0.0;
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(c) => {
                let scaled = if c.tolerance > 0.0 {
                    c.error / c.tolerance
                } else {
                    c.error
                };
                max_error = max_error.max(scaled);
                if !c.passed {
                    failures.push(
                        json!({"error": c.error, "tolerance": c.tolerance, "inputs": c.inputs}),
                    );
                }
            }
            Err((e, s)) => failures.push(json!({"case_seed": s, "failure": e.to_string()})),
        }
    }
    SuiteReport {
        identity: suite.name().into(),
        seed,
        cases,
        passed: failures.is_empty(),
        max_error,
        failures,
    }
}
