//! Weighted singular value decomposition on the disk, the L2 norm, the
//! discrete SVD of a sampled doubled function and roots of `J0`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::bmc::BmcSample;
use crate::diskfun::DiskFun;
use crate::linalg::svd;
use crate::series::{cc_weights, cheb_points, fourier_points, ChebSeries, FourierSeries};

/// `f(theta, rho) = sum sigma_j u_j(rho) v_j(theta)` on the disk.
///
/// `u_j` are orthonormal under `int_0^1 u w rho d rho` and `v_j` under
/// `int_{-pi}^{pi} v w d theta`. Each `u_j` lives on `[0, 1]` and is
/// stored as a Chebyshev series in `2 rho - 1`; see [`WeightedSvd::u_at`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSvd {
    pub sigma: Vec<f64>,
    pub u: Vec<ChebSeries>,
    pub v: Vec<FourierSeries>,
}

impl WeightedSvd {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    /// `u_j(rho)` for `rho` in `[0, 1]`.
    pub fn u_at(&self, j: usize, rho: f64) -> f64 {
        self.u[j].eval(2.0 * rho - 1.0)
    }

    /// Value of the rank-`r` truncation at `(theta, rho)`, `rho` in `[0, 1]`.
    pub fn eval_truncated(&self, r: usize, theta: f64, rho: f64) -> f64 {
        self.sigma
            .iter()
            .zip(&self.v)
            .take(r)
            .enumerate()
            .map(|(j, (s, v))| s * self.u_at(j, rho) * v.eval_real(theta))
            .sum()
    }
}

/// Clenshaw-Curtis nodes on `[0, 1]` with the weight `rho` folded in.
pub fn radial_quadrature(q: usize) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = cheb_points(q).iter().map(|x| 0.5 * (x + 1.0)).collect();
    let w = cc_weights(q).iter().zip(&x).map(|(w, r)| 0.5 * w * r).collect();
    (x, w)
}

/// Values of `T_l(x)` for `l < len`.
fn cheb_basis(x: f64, len: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(len);
    for l in 0..len {
        t.push(match l {
            0 => 1.0,
            1 => x,
            _ => 2.0 * x * t[l - 1] - t[l - 2],
        });
    }
    t
}

/// Weighted SVD of an approximant.
///
/// Polynomials of degree below `m` in `rho` are sampled at `2m + 1`
/// Clenshaw-Curtis nodes on `[0, 1]` with the `rho` weight, where the
/// quadrature is exact for their products. QR of the weighted Chebyshev
/// basis gives an orthonormal polynomial basis; the radial slices are
/// expressed in it and orthonormalized there, so every left factor stays a
/// polynomial even in numerically dependent directions. The angular slices
/// use the trapezoid rule. The resulting `K x K` core is decomposed
/// densely and `sigma_j <= eps * sigma_1` is dropped.
pub fn weighted_svd(f: &DiskFun) -> WeightedSvd {
    let k = f.rank();
    let (m, n) = f.lengths();
    let q = 2 * m + 1;
    let p = 2 * n + 2;
    let (rx, rw) = radial_quadrature(q);
    let tx = fourier_points(p);
    let tw = (2.0 * PI / p as f64).sqrt();

    let basis: Vec<Vec<f64>> = rx.iter().map(|&x| cheb_basis(2.0 * x - 1.0, m)).collect();
    let (qb, rb) = DMatrix::from_fn(q, m, |i, l| rw[i].sqrt() * basis[i][l]).qr().unpack();
    let c = DMatrix::from_fn(q, k, |i, j| rw[i].sqrt() * f.terms()[j].radial.eval(rx[i]));
    let r = DMatrix::from_fn(p, k, |i, j| tw * f.terms()[j].angular.eval_real(tx[i]));
    let (qc, rc) = (qb.transpose() * c).qr().unpack();
    let (qr, rr) = r.qr().unpack();
    let d = DMatrix::from_diagonal(&DVector::from_iterator(k, f.terms().iter().map(|t| t.weight)));
    let dec = svd(&(rc * d * rr.transpose()));
    let s1 = dec.s[0];
    if !(s1 > 0.0) {
        return WeightedSvd {
            sigma: vec![0.0],
            u: vec![ChebSeries::constant(2f64.sqrt())],
            v: vec![FourierSeries::constant(1.0 / (2.0 * PI).sqrt())],
        };
    }

    let mut out = WeightedSvd {
        sigma: Vec::new(),
        u: Vec::new(),
        v: Vec::new(),
    };
    for (i, &s) in dec.s.iter().enumerate() {
        if s <= f64::EPSILON * s1 {
            break;
        }
        let ua = rb.solve_upper_triangular(&(&qc * dec.u.column(i))).expect("full-rank basis");
        let vals: Vec<f64> = (&qr * dec.v.column(i)).iter().map(|v| v / tw).collect();
        let v = FourierSeries::from_values(&vals).expect("even length").resized(n).expect("even length");
        out.sigma.push(s);
        out.u.push(ChebSeries::new(ua.iter().copied().collect()));
        out.v.push(v);
    }
    out
}

/// `||f||_2` over the disk, from the weighted singular values.
pub fn l2norm(f: &DiskFun) -> f64 {
    weighted_svd(f).sigma.iter().map(|s| s * s).sum::<f64>().sqrt()
}

/// Discrete SVD of a sampled doubled function.
///
/// Quadrature weights make the singular values approximate those of the
/// function on `[-pi, pi] x [-1, 1]`. Columns of `u` are indexed by
/// `rho` and columns of `v` by `theta`, both on the sample grid.
#[derive(Debug, Clone)]
pub struct BmcSvd {
    pub sigma: Vec<f64>,
    pub u: DMatrix<f64>,
    pub v: DMatrix<f64>,
}

impl BmcSvd {
    /// `sqrt(sum_{j >= r} sigma_j^2)`: L2 error of the best rank-`r` approximation.
    pub fn tail(&self, r: usize) -> f64 {
        self.sigma.iter().skip(r).map(|s| s * s).sum::<f64>().sqrt()
    }

    /// Rank-`r` reconstruction on the sample grid, row-major per `rho`.
    pub fn reconstruct(&self, r: usize) -> Vec<f64> {
        let (m, n) = (self.u.nrows(), self.v.nrows());
        let mut out = vec![0.0; m * n];
        for j in 0..r.min(self.sigma.len()) {
            for i in 0..m {
                let a = self.sigma[j] * self.u[(i, j)];
                for k in 0..n {
                    out[i * n + k] += a * self.v[(k, j)];
                }
            }
        }
        out
    }
}

fn grid_weights(sample: &BmcSample) -> (Vec<f64>, f64) {
    (cc_weights(sample.m()), 2.0 * PI / sample.n() as f64)
}

/// Weighted SVD of a sample taken on `cheb_points(m)` by `fourier_points(n)`.
pub fn bmc_svd(sample: &BmcSample) -> BmcSvd {
    let (m, n) = (sample.m(), sample.n());
    let (wr, wt) = grid_weights(sample);
    let st = wt.sqrt();
    let a = DMatrix::from_fn(m, n, |i, k| wr[i].sqrt() * sample.get(i, k) * st);
    let dec = svd(&a);
    let r = dec.s.len();
    let u = DMatrix::from_fn(m, r, |i, j| dec.u[(i, j)] / wr[i].sqrt());
    let v = DMatrix::from_fn(n, r, |k, j| dec.v[(k, j)] / st);
    BmcSvd { sigma: dec.s, u, v }
}

/// Quadrature L2 norm of a sample over `[-pi, pi] x [-1, 1]`.
pub fn grid_l2(sample: &BmcSample) -> f64 {
    let (wr, wt) = grid_weights(sample);
    let mut s = 0.0;
    for (i, w) in wr.iter().enumerate() {
        s += w * sample.row(i).iter().map(|v| v * v).sum::<f64>();
    }
    (s * wt).sqrt()
}

/// `(J0(x), J1(x))` by normalized backward recurrence.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (1.0, 0.0);
    }
    let x = x.abs();
    let mut top = (x + 30.0 + 8.0 * x.sqrt()) as usize;
    top += top % 2;
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let (mut j0, mut j1) = (0.0, 0.0);
    for k in (1..=top).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        let idx = k - 1;
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * j;
        }
        if idx == 1 {
            j1 = j;
        }
        if idx == 0 {
            j0 = j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
            j0 *= 1e-250;
        }
    }
    norm += j0;
    (j0 / norm, j1 / norm)
}

/// First `k` positive roots of `J0` by Newton from `(j - 1/4) pi`.
pub fn bessel_j0_roots(k: usize) -> Vec<f64> {
    (1..=k)
        .map(|j| {
            let mut w = (j as f64 - 0.25) * PI;
            for _ in 0..50 {
                let (j0, j1) = bessel_j01(w);
                let step = -j0 / j1;
                w -= step;
                if step.abs() <= 1e-15 * w {
                    break;
                }
            }
            w
        })
        .collect()
}
