//! Factored ADI for `L Y - S1M Y B = U V^*` with `B` diagonal.
//!
//! This is the Sylvester equation `A Y - Y B = C` with `A = S1M^{-1} L`
//! and `C = S1M^{-1} U V^*`, kept in generalized form so that `S1M` is never
//! inverted.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::banded::Banded;
use super::ops::{build_l, build_s1m};
use super::shifts::{Interval, Shifts};
use crate::error::{Error, Result};
use crate::linalg::svd;

/// Low-rank solution `Y = Z diag(d) G^*`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiSolution {
    /// Chebyshev-coefficient columns, `m x r`.
    pub z: DMatrix<f64>,
    pub d: Vec<f64>,
    /// Fourier-coefficient columns, `n x r`.
    pub g: DMatrix<Complex64>,
    pub iterations: usize,
    /// Relative residual of the generalized equation, once computed.
    pub residual: Option<f64>,
}

impl AdiSolution {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// Dense `Y`.
    pub fn dense(&self) -> DMatrix<Complex64> {
        let zd = DMatrix::from_fn(self.z.nrows(), self.z.ncols(), |i, j| Complex64::new(self.z[(i, j)] * self.d[j], 0.0));
        zd * self.g.adjoint()
    }
}

/// Eigenvalue bounds and eigenvector conditioning of the pencil `(L, S1M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    /// Most negative eigenvalue.
    pub lo: f64,
    /// Eigenvalue closest to zero.
    pub hi: f64,
    /// Estimate of the 2-norm condition number of the eigenvector matrix.
    pub kappa: f64,
}

impl Spectrum {
    /// Padded interval that contains the spectrum.
    pub fn interval(&self) -> Interval {
        Interval::new(2.0 * self.lo, 0.5 * self.hi)
    }
}

/// Sizes up to which the spectrum comes from a dense eigensolve.
const DENSE_LIMIT: usize = 256;
/// Size up to which eigenvectors are computed for the condition number.
const KAPPA_LIMIT: usize = 128;

fn spectrum_cache() -> &'static Mutex<HashMap<usize, Spectrum>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Spectrum>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Spectrum of `S1M^{-1} L` at size `m`, cached.
pub fn spectrum(m: usize) -> Result<Spectrum> {
    if let Some(s) = spectrum_cache().lock().expect("cache poisoned").get(&m) {
        return Ok(*s);
    }
    let l = build_l(m)?.mat;
    let s1m = build_s1m(m)?.mat;
    let s = if m <= DENSE_LIMIT {
        let ev = dense_eigenvalues(&l, &s1m)?;
        let kappa = if m <= KAPPA_LIMIT {
            eigenvector_condition(&l, &s1m, &ev)?
        } else {
            spectrum(KAPPA_LIMIT)?.kappa * (m as f64 / KAPPA_LIMIT as f64).powi(2)
        };
        Spectrum {
            lo: ev[0],
            hi: ev[ev.len() - 1],
            kappa,
        }
    } else {
        let (lo, hi) = iterative_extremes(&l, &s1m)?;
        Spectrum {
            lo,
            hi,
            kappa: spectrum(KAPPA_LIMIT)?.kappa * (m as f64 / KAPPA_LIMIT as f64).powi(2),
        }
    };
    spectrum_cache().lock().expect("cache poisoned").insert(m, s);
    Ok(s)
}

fn dense(b: &Banded) -> DMatrix<f64> {
    let n = b.size();
    DMatrix::from_fn(n, n, |i, j| b.get(i, j))
}

/// Sorted real eigenvalues of the pencil; errors if any is complex or
/// nonnegative.
pub(crate) fn dense_eigenvalues(l: &Banded, s1m: &Banded) -> Result<Vec<f64>> {
    let a = dense(s1m).lu().solve(&dense(l)).ok_or(Error::ShiftCollision)?;
    let ev = a.complex_eigenvalues();
    let scale = ev.iter().fold(0.0f64, |s, z| s.max(z.norm()));
    let mut re = Vec::with_capacity(ev.len());
    for z in ev.iter() {
        if z.im.abs() > 1e-8 * scale || z.re >= 0.0 || !z.re.is_finite() {
            return Err(Error::InvalidArgument("operator spectrum is not real and negative".into()));
        }
        re.push(z.re);
    }
    re.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    Ok(re)
}

/// Condition number of the column-normalized eigenvector matrix, with
/// eigenvectors from inverse iteration on the banded pencil.
fn eigenvector_condition(l: &Banded, s1m: &Banded, ev: &[f64]) -> Result<f64> {
    let m = l.size();
    let mut v = DMatrix::zeros(m, ev.len());
    for (j, &lam) in ev.iter().enumerate() {
        let mut shift = lam * (1.0 + 1e-12);
        let lu = loop {
            match l.axpy(-shift, s1m).lu() {
                Ok(lu) => break lu,
                Err(_) => shift *= 1.0 + 1e-10,
            }
        };
        let mut x: Vec<f64> = (0..m).map(|i| 1.0 + 0.1 * ((i * 7 + j * 3) % 11) as f64).collect();
        for _ in 0..3 {
            x = lu.solve(&s1m.mul_vec(&x));
            let nrm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            x.iter_mut().for_each(|a| *a /= nrm);
        }
        v.set_column(j, &nalgebra::DVector::from_vec(x));
    }
    let s = svd(&v).s;
    Ok(s[0] / s[s.len() - 1])
}

/// Extreme eigenvalues by power iteration (most negative) and inverse
/// iteration (closest to zero) on the factored pencil.
fn iterative_extremes(l: &Banded, s1m: &Banded) -> Result<(f64, f64)> {
    let m = l.size();
    let s_lu = s1m.lu()?;
    let l_lu = l.lu()?;
    let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
    let start: Vec<f64> = (0..m).map(|i| 1.0 + ((i * 37) % 17) as f64 / 17.0).collect();

    let mut x = start.clone();
    let mut lo = 0.0;
    for _ in 0..400 {
        let y = s_lu.solve(&l.mul_vec(&x));
        let ny = norm(&y);
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        lo = -ny / norm(&x) * if dot <= 0.0 { 1.0 } else { -1.0 };
        x = y.iter().map(|a| a / ny).collect();
    }

    let mut x = start;
    let mut hi = 0.0;
    for _ in 0..100 {
        let y = l_lu.solve(&s1m.mul_vec(&x));
        let ny = norm(&y);
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        hi = norm(&x) / ny * if dot <= 0.0 { -1.0 } else { 1.0 };
        x = y.iter().map(|a| a / ny).collect();
    }
    if !(lo < 0.0 && hi < 0.0) {
        return Err(Error::InvalidArgument("operator spectrum is not negative".into()));
    }
    Ok((lo, hi))
}

/// Run fADI with the given shifts, stopping early once the bound on the
/// increment drops below `stop_tol` relative to the largest one for two
/// consecutive steps.
///
/// `alpha` shifts must lie near the spectrum of the pencil and `beta`
/// shifts near `b`.
pub fn fadi_solve(
    l: &Banded,
    s1m: &Banded,
    b: &[f64],
    u: &DMatrix<f64>,
    v: &DMatrix<Complex64>,
    shifts: &Shifts,
    stop_tol: f64,
) -> Result<AdiSolution> {
    let (m, n, r) = (l.size(), b.len(), u.ncols());
    if r == 0 || shifts.is_empty() || u.iter().all(|x| *x == 0.0) {
        return Ok(AdiSolution {
            z: DMatrix::zeros(m, 0),
            d: Vec::new(),
            g: DMatrix::zeros(n, 0),
            iterations: 0,
            residual: None,
        });
    }
    let nsteps = shifts.len();
    let mut zs: Vec<DMatrix<f64>> = Vec::with_capacity(nsteps);
    let mut ys: Vec<DMatrix<Complex64>> = Vec::with_capacity(nsteps);
    let mut ds: Vec<f64> = Vec::with_capacity(nsteps);

    let solve_cols = |shift: f64, rhs: &DMatrix<f64>| -> Result<DMatrix<f64>> {
        let lu = l.axpy(-shift, s1m).lu()?;
        let mut out = rhs.clone();
        for j in 0..rhs.ncols() {
            let mut col: Vec<f64> = rhs.column(j).iter().copied().collect();
            lu.solve_in_place(&mut col);
            out.set_column(j, &nalgebra::DVector::from_vec(col));
        }
        Ok(out)
    };
    let fourier = |alpha: f64, y: &DMatrix<Complex64>| -> Result<DMatrix<Complex64>> {
        let mut out = y.clone();
        for (k, &bk) in b.iter().enumerate() {
            let den = bk - alpha;
            if den == 0.0 {
                return Err(Error::ShiftCollision);
            }
            for j in 0..y.ncols() {
                out[(k, j)] /= den;
            }
        }
        Ok(out)
    };
    let apply = |mat: &Banded, x: &DMatrix<f64>| -> DMatrix<f64> {
        let mut out = x.clone();
        for j in 0..x.ncols() {
            let col: Vec<f64> = x.column(j).iter().copied().collect();
            out.set_column(j, &nalgebra::DVector::from_vec(mat.mul_vec(&col)));
        }
        out
    };

    let (a, bb) = (&shifts.alpha, &shifts.beta);
    let mut z = solve_cols(bb[0], u)?;
    let mut y = fourier(a[0], v)?;
    let mut largest = 0.0f64;
    let mut small = 0;
    for j in 0..nsteps {
        if j > 0 {
            let step = solve_cols(bb[j], &apply(s1m, &z))?;
            z += step * (bb[j] - a[j - 1]);
            let step = fourier(a[j], &y)?;
            y += step * Complex64::new(a[j] - bb[j - 1], 0.0);
        }
        let w = bb[j] - a[j];
        let bound = w.abs() * z.norm() * y.norm();
        if !bound.is_finite() {
            return Err(Error::NonFinite);
        }
        largest = largest.max(bound);
        zs.push(z.clone());
        ys.push(y.clone());
        ds.push(w);
        if bound <= stop_tol * largest {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    let iterations = zs.len();
    let zcat = DMatrix::from_fn(m, iterations * r, |i, c| zs[c / r][(i, c % r)]);
    let gcat = DMatrix::from_fn(n, iterations * r, |i, c| ys[c / r][(i, c % r)]);
    let d = (0..iterations * r).map(|c| ds[c / r]).collect();
    Ok(AdiSolution {
        z: zcat,
        d,
        g: gcat,
        iterations,
        residual: None,
    })
}

/// Real stacking `[Re G; -Im G]`, so that `Z D G^* = Z D H^T` in the
/// layout `[Re Y | Im Y]`.
fn stack(g: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = g.nrows();
    DMatrix::from_fn(2 * n, g.ncols(), |i, j| if i < n { g[(i, j)].re } else { -g[(i - n, j)].im })
}

fn nonzero_rows(h: &DMatrix<f64>) -> Vec<usize> {
    (0..h.nrows()).filter(|&i| h.row(i).iter().any(|x| *x != 0.0)).collect()
}

/// Recompress `Y = Z D G^*` by QR on both sides and a small SVD, keeping
/// singular values above `tol * sigma_1`.
pub fn compress(sol: &AdiSolution, tol: f64) -> AdiSolution {
    let (m, n) = (sol.z.nrows(), sol.g.nrows());
    let empty = AdiSolution {
        z: DMatrix::zeros(m, 0),
        d: Vec::new(),
        g: DMatrix::zeros(n, 0),
        iterations: sol.iterations,
        residual: sol.residual,
    };
    if sol.rank() == 0 {
        return empty;
    }
    let h = stack(&sol.g);
    let rows = nonzero_rows(&h);
    if rows.is_empty() {
        return empty;
    }
    let hs = h.select_rows(rows.iter());
    let qr = hs.qr();
    let (qh, rh) = (qr.q(), qr.r());
    let zd = DMatrix::from_fn(m, sol.rank(), |i, j| sol.z[(i, j)] * sol.d[j]);
    let w = zd * rh.transpose();
    let qr = w.qr();
    let (qw, rw) = (qr.q(), qr.r());
    let f = svd(&rw);
    let s1 = f.s.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..f.s.len()).filter(|&i| f.s[i] > 0.0 && f.s[i] > tol * s1).collect();
    let z = &qw * f.u.select_columns(keep.iter());
    let hk = &qh * f.v.select_columns(keep.iter());
    let mut g = DMatrix::zeros(n, keep.len());
    for (p, &row) in rows.iter().enumerate() {
        for c in 0..keep.len() {
            if row < n {
                g[(row, c)] += Complex64::new(hk[(p, c)], 0.0);
            } else {
                g[(row - n, c)] += Complex64::new(0.0, -hk[(p, c)]);
            }
        }
    }
    AdiSolution {
        z,
        d: keep.iter().map(|&i| f.s[i]).collect(),
        g,
        iterations: sol.iterations,
        residual: sol.residual,
    }
}

/// `||P Q^*||_F` from QR factors of both sides.
fn factored_norm(p: &DMatrix<f64>, q: &DMatrix<Complex64>) -> f64 {
    let n = q.nrows();
    let qs = DMatrix::from_fn(2 * n, q.ncols(), |i, j| if i < n { q[(i, j)].re } else { q[(i - n, j)].im });
    let rows = nonzero_rows(&qs);
    if rows.is_empty() || p.ncols() == 0 {
        return 0.0;
    }
    let rq = qs.select_rows(rows.iter()).qr().r();
    let rp = p.clone().qr().r();
    (rp * rq.transpose()).norm()
}

/// `||L Y - S1M Y B - U V^*||_F / ||U V^*||_F`.
pub fn sylvester_residual(
    l: &Banded,
    s1m: &Banded,
    b: &[f64],
    u: &DMatrix<f64>,
    v: &DMatrix<Complex64>,
    sol: &AdiSolution,
) -> f64 {
    let (m, r, rc) = (l.size(), sol.rank(), u.ncols());
    let mut p = DMatrix::zeros(m, 2 * r + rc);
    let mut q = DMatrix::zeros(b.len(), 2 * r + rc);
    for j in 0..r {
        let z: Vec<f64> = sol.z.column(j).iter().copied().collect();
        let lz = l.mul_vec(&z);
        let sz = s1m.mul_vec(&z);
        for i in 0..m {
            p[(i, j)] = lz[i];
            p[(i, r + j)] = sz[i];
        }
        for (k, &bk) in b.iter().enumerate() {
            let gd = sol.g[(k, j)] * sol.d[j];
            q[(k, j)] = gd;
            q[(k, r + j)] = -gd * bk;
        }
    }
    for j in 0..rc {
        p.set_column(2 * r + j, &u.column(j));
        for k in 0..b.len() {
            q[(k, 2 * r + j)] = -v[(k, j)];
        }
    }
    let c = factored_norm(u, v);
    if c == 0.0 {
        return factored_norm(&p, &q);
    }
    factored_norm(&p, &q) / c
}
