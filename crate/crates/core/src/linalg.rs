//! Dense linear algebra helpers.

use nalgebra::DMatrix;

/// Thin singular value decomposition `a = u diag(s) v^T`, with `s`
/// non-increasing.
///
/// Columns of `u` that belong to zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v: DMatrix<f64>,
}

/// One-sided Jacobi SVD.
///
/// Robust for exactly rank-deficient input and accurate in the small
/// singular values, which matters for sampled low-rank functions.
pub fn svd(a: &DMatrix<f64>) -> Svd {
    if a.nrows() < a.ncols() {
        let t = svd(&a.transpose());
        return Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let tol = f64::EPSILON * (m as f64).sqrt();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * x - s * y;
                    w[(i, q)] = s * x + c * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let mut u = DMatrix::zeros(m, n);
    let mut vs = DMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let sj = norms[j];
        s.push(sj);
        if sj > 0.0 {
            u.set_column(k, &(w.column(j) / sj));
        }
        vs.set_column(k, &v.column(j));
    }
    Svd { u, s, v: vs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &DMatrix<f64>) {
        let d = svd(a);
        let back = &d.u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.s.clone())) * d.v.transpose();
        assert!((back - a).amax() < 1e-13 * a.amax().max(1.0));
        assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        let vtv = d.v.transpose() * &d.v;
        assert!((vtv - DMatrix::identity(d.s.len(), d.s.len())).amax() < 1e-13);
    }

    #[test]
    fn rank_deficient_shapes() {
        for (m, n) in [(33, 32), (32, 32), (17, 16), (16, 17), (5, 1)] {
            let a = DMatrix::from_fn(m, n, |i, j| (1.0 + (i as f64 / m as f64).powi(2)) * (j as f64).cos());
            check(&a);
        }
    }

    #[test]
    fn matches_known_values() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 4.0, 5.0]);
        let d = svd(&a);
        assert!((d.s[0] - 45f64.sqrt()).abs() < 1e-14);
        assert!((d.s[1] - 5f64.sqrt()).abs() < 1e-14);
        let r = DMatrix::from_fn(7, 5, |i, j| ((i * 3 + j * 7) % 5) as f64 - 2.0);
        check(&r);
    }
}
