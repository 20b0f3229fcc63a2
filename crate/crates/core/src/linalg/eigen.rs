//! Eigenvalues of Hermitian matrices.
//!
//! Two independent routes are provided. [`hermitian_eigenvalues`] reduces the
//! matrix to real symmetric tridiagonal form with Householder reflections and
//! finishes with implicit-shift QL; it is the default used by the trace
//! distance. [`jacobi_eigenvalues`] runs cyclic complex Jacobi rotations and
//! serves as the cross-check.

use super::{ComplexMatrix, Tolerances, C64, ZERO};
use crate::error::{Error, Result};

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_TOL: f64 = 1e-12;
const QL_MAX_ITER: usize = 60;

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let residual = m.hermitian_residual();
    if residual > Tolerances::default().herm {
        return Err(Error::NotHermitian(residual));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let (mut d, mut e) = tridiagonalize(m);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues by cyclic Jacobi sweeps, ascending.
///
/// Stops once the off-diagonal Frobenius mass drops below `1e-12` (scaled by
/// the matrix norm when that exceeds one); fails after 100 sweeps.
pub fn jacobi_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let n = m.dim();
    let mut a = m.clone();
    a.symmetrize();
    let scale = a.frobenius_norm().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(&a) < JACOBI_OFF_TOL * scale {
            let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
            eig.sort_by(f64::total_cmp);
            return Ok(eig);
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, p, q);
            }
        }
    }
    Err(Error::NoConvergence(JACOBI_MAX_SWEEPS))
}

/// `Σ|λ_i|` of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(m)?.iter().map(|x| x.abs()).sum())
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi_rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let b = a[(p, q)];
    let b_abs = b.norm();
    if b_abs == 0.0 {
        return;
    }
    // Phase column q so that the (p, q) entry becomes real and positive,
    // then annihilate it with a real Givens rotation.
    let omega = b.conj() / b_abs;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * b_abs);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let n = a.dim();
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)] * omega;
        a[(k, p)] = x * c - y * s;
        a[(k, q)] = x * s + y * c;
    }
    let omega_bar = omega.conj();
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)] * omega_bar;
        a[(p, k)] = x * c - y * s;
        a[(q, k)] = x * s + y * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * b_abs, 0.0);
    a[(q, q)] = C64::new(aqq + t * b_abs, 0.0);
}

/// Householder reduction to tridiagonal form, working on the lower triangle.
/// Returns the real diagonal and
/// the moduli of the sub-diagonal (`e[i]` couples `i` and `i + 1`,
/// `e[n - 1] == 0`). A diagonal unitary similarity makes the complex
/// sub-diagonal real without changing the spectrum.
fn tridiagonalize(m: &ComplexMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut a = m.clone();
    let mut e = vec![0.0; n];
    let mut v = vec![ZERO; n];
    let mut p = vec![ZERO; n];
    for k in 0..n.saturating_sub(1) {
        let len = n - k - 1;
        let x0 = a[(k + 1, k)];
        let tail: f64 = (k + 2..n).map(|r| a[(r, k)].norm_sqr()).sum();
        if tail == 0.0 {
            e[k] = x0.norm();
            continue;
        }
        let x_norm = (x0.norm_sqr() + tail).sqrt();
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * x_norm;

        let v = &mut v[..len];
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = a[(k + 1 + j, k)];
        }
        v[0] -= alpha;
        let v_norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vj in v.iter_mut() {
            *vj /= v_norm;
        }

        // p = S v on the trailing block S = a[k+1.., k+1..]; only the lower
        // triangle of S is read or written
        let p = &mut p[..len];
        p.fill(ZERO);
        let data = a.data();
        for r in 0..len {
            let row = (k + 1 + r) * n + k + 1;
            let vr = v[r];
            let mut acc = ZERO;
            let (head, tail) = p.split_at_mut(r);
            for ((s, pc), vc) in data[row..row + r].iter().zip(head.iter_mut()).zip(&v[..r]) {
                acc += s * vc;
                *pc += s.conj() * vr;
            }
            tail[0] += acc + data[row + r] * vr;
        }
        let kappa: C64 = v.iter().zip(p.iter()).map(|(x, y)| x.conj() * y).sum();
        for (pr, vr) in p.iter_mut().zip(v.iter()) {
            *pr -= kappa * vr;
        }
        // S <- S - 2 (v w† + w v†), with w stored in p
        let data = a.data_mut();
        for r in 0..len {
            let vr2 = v[r] * 2.0;
            let wr2 = p[r] * 2.0;
            let row = (k + 1 + r) * n + k + 1;
            for ((s, pc), vc) in data[row..=row + r].iter_mut().zip(&p[..=r]).zip(&v[..=r]) {
                *s -= vr2 * pc.conj() + wr2 * vc.conj();
            }
        }
        e[k] = alpha.norm();
    }
    let d = (0..n).map(|i| a[(i, i)].re).collect();
    (d, e)
}

/// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues are left
/// in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n < 2 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITER {
                return Err(Error::NoConvergence(QL_MAX_ITER));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
