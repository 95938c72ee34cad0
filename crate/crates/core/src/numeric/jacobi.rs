//! Cyclic Jacobi eigensolver for small real symmetric matrices, run in
//! double-double so that eigenvalues far below `1e-16 * lambda_max` keep
//! meaningful digits.

use super::dd::Dd;

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition result, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<Dd>,
    /// Column-major `n x n`; column `i` belongs to `values[i]`.
    pub vectors: Vec<f64>,
}

/// Diagonalise the symmetric matrix `a` (row-major, `n*n`). Only the upper
/// triangle is read.
pub fn symmetric_eigen(a: &[Dd], n: usize) -> Eigen {
    assert_eq!(a.len(), n * n);
    let mut a: Vec<Dd> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if i <= j {
                a[idx]
            } else {
                a[j * n + i]
            }
        })
        .collect();
    let mut v = vec![Dd::ZERO; n * n];
    for i in 0..n {
        v[i * n + i] = Dd::ONE;
    }
    let eps = 1e-33;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.is_zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let scale = (app.abs() * aqq.abs()).sqrt().to_f64();
                if apq.hi.abs() <= eps * scale {
                    a[p * n + q] = Dd::ZERO;
                    a[q * n + p] = Dd::ZERO;
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (Dd::new(2.0) * apq);
                let t = {
                    let r = (theta * theta + Dd::ONE).sqrt();
                    let t = Dd::ONE / (theta.abs() + r);
                    if theta.hi < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = Dd::ONE / (t * t + Dd::ONE).sqrt();
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
                a[p * n + q] = Dd::ZERO;
                a[q * n + p] = Dd::ZERO;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (col, &i) in order.iter().enumerate() {
        for k in 0..n {
            vectors[col * n + k] = v[k * n + i].to_f64();
        }
    }
    Eigen { values, vectors }
}

/// Convenience wrapper for an f64 matrix.
pub fn symmetric_eigen_f64(a: &[f64], n: usize) -> Eigen {
    let a: Vec<Dd> = a.iter().map(|&x| Dd::new(x)).collect();
    symmetric_eigen(&a, n)
}
