//! Dense symmetric eigenvalue routines.

use faer::{c64, Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues of a real symmetric `n×n` matrix (row-major) by cyclic Jacobi
/// rotations, sorted descending. The input is overwritten.
pub fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-16 * norm {
            let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            ev.sort_by(|x, y| y.total_cmp(x));
            return Ok(ev);
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= 1e-19 * norm {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::Numeric(
        "Jacobi eigensolver did not converge in 100 sweeps".into(),
    ))
}

/// Eigenvalues of a Hermitian matrix given by rows, sorted descending. Only
/// the lower triangle is read.
pub fn hermitian_eigenvalues(rows: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    let n = rows.len();
    let m = Mat::<c64>::from_fn(n, n, |i, j| {
        let z = rows[i][j];
        c64::new(z.re, z.im)
    });
    let ev = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numeric(format!("Hermitian eigensolve of size {n} failed: {e:?}")))?;
    let mut ev: Vec<f64> = ev.into_iter().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}
