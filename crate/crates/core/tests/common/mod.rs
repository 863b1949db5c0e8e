//! Test-only reference implementations, independent of the library's
//! linear algebra backend.

#![allow(dead_code)]

pub mod cli;

use polygrid::admittance::GridModel;
use polygrid::linalg::{Complex64, ComplexMatrix};

pub type Dense = Vec<Vec<Complex64>>;

pub fn to_dense(m: &ComplexMatrix) -> Dense {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn from_dense(d: &Dense) -> ComplexMatrix {
    ComplexMatrix::from_rows(d).unwrap()
}

/// Singular values by one-sided (Hestenes) Jacobi rotations on the
/// columns, sorted descending.
pub fn jacobi_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let (rows, cols) = m.shape();
    // Work on the orientation with fewer columns.
    let mut a: Vec<Vec<Complex64>> = if cols <= rows {
        (0..cols).map(|j| (0..rows).map(|i| m[(i, j)]).collect()).collect()
    } else {
        (0..rows)
            .map(|i| (0..cols).map(|j| m[(i, j)].conj()).collect())
            .collect()
    };
    let c = a.len();
    let dot = |x: &[Complex64], y: &[Complex64]| x.iter().zip(y).map(|(p, q)| p.conj() * q).sum::<Complex64>();
    for _sweep in 0..100 {
        let mut rotated = false;
        for i in 0..c {
            for j in i + 1..c {
                let alpha = dot(&a[i], &a[i]).re;
                let beta = dot(&a[j], &a[j]).re;
                let gamma = dot(&a[i], &a[j]);
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                let (left, right) = a.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (u, w) = (*x, *y * phase.conj());
                    *x = u * cs - w * sn;
                    *y = (u * sn + w * cs) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut s: Vec<f64> = a.iter().map(|col| dot(col, col).re.sqrt()).collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Rank by the same threshold rule as the library, on Jacobi singular
/// values.
pub fn jacobi_rank(m: &ComplexMatrix, rel_tol: f64) -> usize {
    let s = jacobi_singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let threshold = rel_tol * smax * m.rows().max(m.cols()) as f64;
    s.iter().filter(|&&x| x > threshold).count()
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut a = to_dense(m);
    let mut inv: Dense = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].norm().partial_cmp(&a[y][col].norm()).unwrap())
            .unwrap();
        assert!(a[pivot][col].norm() > 0.0, "singular matrix");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for k in 0..n {
            a[col][k] /= d;
            inv[col][k] /= d;
        }
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != Complex64::new(0.0, 0.0) {
                    for k in 0..n {
                        let (ak, ik) = (a[col][k], inv[col][k]);
                        a[row][k] -= f * ak;
                        inv[row][k] -= f * ik;
                    }
                }
            }
        }
    }
    from_dense(&inv)
}

/// Nodal admittance matrix by element stamping: each branch adds
/// `Z⁻¹` to its two diagonal blocks and subtracts it from the two
/// off-diagonal blocks; shunts add to the diagonal.
pub fn stamp_admittance(model: &GridModel) -> ComplexMatrix {
    let p = model.phase_count();
    let n = model.node_count();
    let mut y = vec![vec![Complex64::new(0.0, 0.0); n * p]; n * p];
    for e in model.graph().edges() {
        let yl = gauss_jordan_inverse(model.branch_impedances()[e.edge_index].matrix());
        let (f, t) = (e.from.0, e.to.0);
        for i in 0..p {
            for j in 0..p {
                let v = yl[(i, j)];
                y[f * p + i][f * p + j] += v;
                y[t * p + i][t * p + j] += v;
                y[f * p + i][t * p + j] -= v;
                y[t * p + i][f * p + j] -= v;
            }
        }
    }
    for (k, shunt) in model.shunt_admittances().iter().enumerate() {
        for i in 0..p {
            for j in 0..p {
                y[k * p + i][k * p + j] += shunt.matrix()[(i, j)];
            }
        }
    }
    from_dense(&y)
}

/// Largest entry of `a - b` relative to `1 + max|a|`.
pub fn rel_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b) / (1.0 + a.max_abs())
}
