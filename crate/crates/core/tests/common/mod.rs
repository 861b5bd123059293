//! Test-only oracles, independent of the library's eigen/SVD path.
#![allow(dead_code)]

use ctbands_core::{Complex64, ComplexMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap();
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

pub fn shifted(m: &ComplexMatrix, shift: Complex64) -> ComplexMatrix {
    let mut s = m.clone();
    for i in 0..m.rows() {
        s[(i, i)] -= shift;
    }
    s
}

/// Roots of the real function `det(M - λI)` for Hermitian `M`, found by a
/// sign-change scan over `[-R, R]` followed by bisection.
pub fn char_poly_roots(m: &ComplexMatrix, scan_points: usize) -> Vec<f64> {
    let r = m.frobenius_norm() * 1.01 + 1e-3;
    let f = |x: f64| det(&shifted(m, Complex64::new(x, 0.0))).re;
    let mut roots = Vec::new();
    let mut prev_x = -r;
    let mut prev_f = f(prev_x);
    for i in 1..=scan_points {
        let x = -r + 2.0 * r * i as f64 / scan_points as f64;
        let fx = f(x);
        if fx == 0.0 {
            roots.push(x);
        } else if prev_f.signum() != fx.signum() && prev_f != 0.0 {
            let (mut lo, mut hi, mut flo) = (prev_x, x, prev_f);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid);
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-15 * r {
                    break;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn random_real(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
}

pub fn random_complex(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn real_values(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
