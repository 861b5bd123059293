use alloc::vec::Vec;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::math;

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order; column `k` of `vectors` belongs to
/// `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// `tol` bounds the admissible Hermitian asymmetry relative to the largest
/// entry. Rotations continue until the off-diagonal part vanishes to working
/// precision.
pub fn hermitian_eigen(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::Empty);
    }
    if !m.is_finite() {
        return Err(Error::NonFinite { what: "matrix" });
    }
    let asymmetry = m.hermitian_asymmetry();
    let allowed = tol * m.max_abs();
    if asymmetry > allowed {
        return Err(Error::NotHermitian { asymmetry, allowed });
    }

    // Work on the exactly Hermitian part.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(m[(i, i)].re, 0.0)
        } else {
            (m[(i, j)] + m[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n == 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, sweep > 4);
            }
        }
        let off = off_diagonal_norm(&a);
        converged = off == 0.0 || off <= 1e-3 * f64::EPSILON * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |row, k| v[(row, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    math::sqrt(s)
}

/// Annihilate `a[p][q]` with the unitary `G = diag(1, e^{-iφ}) · R(t)` acting on
/// the `(p, q)` plane, where `a[p][q] = |z| e^{iφ}`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, late: bool) {
    let z = a[(p, q)];
    let mag = math::hypot(z.re, z.im);
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Once the iteration is well under way, entries that can no longer move
    // the diagonal are dropped outright.
    if late && math::abs(app) + 100.0 * mag == math::abs(app) && math::abs(aqq) + 100.0 * mag == math::abs(aqq) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }

    let phase = z / mag;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + math::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + math::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / math::sqrt(1.0 + t * t);
    let s = t * c;

    // G = [[g_pp, g_pq], [g_qp, g_qq]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.rows();
    // A <- A G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A <- G† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * mag, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * mag, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}
