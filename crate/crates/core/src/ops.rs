//! Operations on approximants: coefficients, sampling, integration,
//! Cartesian derivatives and pointwise algebra.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bmc::BmcSample;
use crate::diskfun::{construct, ConstructOptions, DiskFun, Term, TermSum};
use crate::error::{Error, Result};
use crate::function::DiskFunction;
use crate::series::{
    cheb_points, cheb_transform, cheb_values, fourier_points, fourier_transform, ChebSeries, FourierSeries, Parity,
};

/// Factored 2D coefficients `X = A diag(d) B^T`.
///
/// Row `l` of `X` multiplies `T_l(rho)`; column `k + n/2` multiplies
/// `e^{ik theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankCoeffs {
    /// Chebyshev coefficient columns, each of length `m`.
    pub a: Vec<Vec<f64>>,
    pub d: Vec<f64>,
    /// Fourier coefficient columns, each of length `n`.
    pub b: Vec<Vec<Complex64>>,
    pub m: usize,
    pub n: usize,
}

impl LowRankCoeffs {
    pub fn rank(&self) -> usize {
        self.d.len()
    }

    /// Dense `m x n` coefficient matrix.
    pub fn dense(&self) -> DenseCoeffs {
        let mut data = vec![Complex64::new(0.0, 0.0); self.m * self.n];
        for ((a, &d), b) in self.a.iter().zip(&self.d).zip(&self.b) {
            for (l, &al) in a.iter().enumerate() {
                if al == 0.0 {
                    continue;
                }
                let row = &mut data[l * self.n..(l + 1) * self.n];
                for (x, &bk) in row.iter_mut().zip(b) {
                    *x += bk * (al * d);
                }
            }
        }
        DenseCoeffs {
            m: self.m,
            n: self.n,
            data,
        }
    }
}

/// Dense Chebyshev-Fourier coefficients of a doubled function.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseCoeffs {
    pub m: usize,
    pub n: usize,
    /// Row-major, `data[l * n + k + n/2]`.
    pub data: Vec<Complex64>,
}

impl DenseCoeffs {
    pub fn get(&self, l: usize, k: i64) -> Complex64 {
        self.data[l * self.n + (k + (self.n / 2) as i64) as usize]
    }

    /// Coefficients of the interpolant through a tensor-grid sample taken
    /// on `cheb_points(m)` by `fourier_points(n)`.
    pub fn from_sample(sample: &BmcSample) -> Result<Self> {
        let m = sample.m();
        let n = sample.n();
        let mut by_row: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        for i in 0..m {
            let z: Vec<Complex64> = sample.row(i).iter().map(|&v| Complex64::new(v, 0.0)).collect();
            by_row.push(fourier_transform(&z)?.coeffs().to_vec());
        }
        let mut data = vec![Complex64::new(0.0, 0.0); m * n];
        for k in 0..n {
            let re: Vec<f64> = by_row.iter().map(|r| r[k].re).collect();
            let im: Vec<f64> = by_row.iter().map(|r| r[k].im).collect();
            let cr = cheb_transform(&re)?;
            let ci = cheb_transform(&im)?;
            for l in 0..m {
                data[l * n + k] = Complex64::new(cr.coeffs()[l], ci.coeffs()[l]);
            }
        }
        Ok(Self { m, n, data })
    }

    /// Values on `cheb_points(m_out)` by `fourier_points(n_out)`.
    pub fn sample(&self, m_out: usize, n_out: usize) -> Result<BmcSample> {
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(self.n);
        for k in 0..self.n {
            let re: Vec<f64> = (0..self.m).map(|l| self.data[l * self.n + k].re).collect();
            let im: Vec<f64> = (0..self.m).map(|l| self.data[l * self.n + k].im).collect();
            let vr = cheb_values(&re, m_out);
            let vi = cheb_values(&im, m_out);
            cols.push(vr.into_iter().zip(vi).map(|(a, b)| Complex64::new(a, b)).collect());
        }
        let mut values = Vec::with_capacity(m_out * n_out);
        for i in 0..m_out {
            let row: Vec<Complex64> = cols.iter().map(|c| c[i]).collect();
            let v = crate::series::fourier_values(&row, n_out)?;
            values.extend(v.iter().map(|z| z.re));
        }
        BmcSample::new(fourier_points(n_out), cheb_points(m_out), values)
    }
}

impl DiskFunction for DenseCoeffs {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        self.eval_grid(&[theta], &[rho])[0]
    }

    fn eval_grid(&self, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
        let h = (self.n / 2) as f64;
        let q = thetas.len();
        // g[j][l] = Re sum_k X[l][k] e^{ik theta_j}
        let mut g = vec![0.0; q * self.m];
        for (j, &t) in thetas.iter().enumerate() {
            let z = Complex64::from_polar(1.0, t);
            let shift = Complex64::from_polar(1.0, -h * t);
            for l in 0..self.m {
                let row = &self.data[l * self.n..(l + 1) * self.n];
                let mut acc = Complex64::new(0.0, 0.0);
                for &b in row.iter().rev() {
                    acc = acc * z + b;
                }
                g[j * self.m + l] = (acc * shift).re;
            }
        }
        let mut out = vec![0.0; rhos.len() * q];
        for (i, &r) in rhos.iter().enumerate() {
            for j in 0..q {
                let s = ChebSeriesRef(&g[j * self.m..(j + 1) * self.m]);
                out[i * q + j] = s.eval(r);
            }
        }
        out
    }
}

struct ChebSeriesRef<'a>(&'a [f64]);

impl ChebSeriesRef<'_> {
    fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(-1.0, 1.0);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.0.iter().skip(1).rev() {
            let b0 = c + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.0[0] + x * b1 - b2
    }
}

/// Factored coefficients, zero-padded to common lengths.
pub fn coeffs2(f: &DiskFun) -> LowRankCoeffs {
    let (m, n) = f.lengths();
    let mut a = Vec::with_capacity(f.rank());
    let mut d = Vec::with_capacity(f.rank());
    let mut b = Vec::with_capacity(f.rank());
    for t in f.terms() {
        a.push(t.radial.resized(m).coeffs().to_vec());
        d.push(t.weight);
        b.push(t.angular.resized(n).expect("even").coeffs().to_vec());
    }
    LowRankCoeffs { a, d, b, m, n }
}

/// Values of the doubled function on `cheb_points(m)` by `fourier_points(n)`.
pub fn sample(f: &DiskFun, m: usize, n: usize) -> Result<BmcSample> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::EvenLengthRequired(n));
    }
    if m == 0 {
        return Err(Error::EmptySample);
    }
    let mut values = vec![0.0; m * n];
    for t in f.terms() {
        let c = t.radial.values(m);
        let r: Vec<f64> = t.angular.values(n)?.iter().map(|z| z.re * t.weight).collect();
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0.0 {
                continue;
            }
            for (v, &rj) in values[i * n..(i + 1) * n].iter_mut().zip(&r) {
                *v += ci * rj;
            }
        }
    }
    BmcSample::new(fourier_points(n), cheb_points(m), values)
}

/// Integral over the unit disk.
///
/// Only even terms contribute: the angular integral of a pi-antiperiodic
/// slice vanishes. Each radial factor is `int_0^1 rho c(rho) d rho`.
pub fn sum2(f: &DiskFun) -> f64 {
    f.terms()
        .iter()
        .filter(|t| t.parity != Parity::Odd)
        .map(|t| t.weight * t.angular.integral().re * t.radial.mul_x().integral_unit())
        .sum()
}

/// Coefficients of `c(rho) / rho` for a series vanishing at the origin.
///
/// Solves the tridiagonal system for multiplication by `rho` on an even
/// number of coefficients. A residual value `c(0)` within
/// `1e-10 * vscale` is projected out first.
pub fn mult_by_invrho(c: &ChebSeries, vscale: f64) -> Result<ChebSeries> {
    let mut a = c.coeffs().to_vec();
    let c0: f64 = a
        .iter()
        .enumerate()
        .step_by(2)
        .map(|(l, v)| if (l / 2) % 2 == 0 { *v } else { -*v })
        .sum();
    if c0.abs() > 1e-10 * vscale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotDivisibleByRho);
    }
    a[0] -= c0;
    let mut m = a.len() + 1;
    if m % 2 == 1 {
        m += 1;
    }
    a.resize(m, 0.0);
    let mut x = vec![0.0; m];
    // Odd unknowns from rows 0, 2, 4, ...
    x[1] = 2.0 * a[0];
    let mut k = 2;
    while k + 1 < m {
        x[k + 1] = 2.0 * a[k] - x[k - 1];
        k += 2;
    }
    // Even unknowns from rows m-1, m-3, ..., 1.
    if m == 2 {
        x[0] = a[1];
    } else {
        x[m - 2] = 2.0 * a[m - 1];
        let mut k = m - 3;
        while k >= 3 {
            x[k - 1] = 2.0 * a[k] - x[k + 1];
            k -= 2;
        }
        x[0] = a[1] - 0.5 * x[2];
    }
    Ok(ChebSeries::with_parity(x, c.parity().flip()))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

fn derivative_terms(f: &DiskFun, axis: Axis) -> Result<Vec<Term>> {
    if !f.is_structured() {
        return Err(Error::Unstructured);
    }
    let mut out = Vec::with_capacity(2 * f.rank());
    for t in f.terms() {
        let parity = t.parity.flip();
        let dc = t.radial.derivative();
        let ang = match axis {
            Axis::X => t.angular.mul_cos(),
            Axis::Y => t.angular.mul_sin(),
        };
        out.push(Term {
            weight: t.weight,
            radial: dc,
            angular: ang,
            parity,
            constant_mode: false,
            pivot: t.pivot,
        });
        if t.angular.is_constant() {
            continue;
        }
        // The term's value at the origin is judged against the function's
        // scale, not the slice's own size.
        let contribution = t.weight.abs() * t.angular.abs_sum();
        let cr = mult_by_invrho(&t.radial, f.vscale() / contribution.max(f64::MIN_POSITIVE))?;
        let dr = t.angular.derivative();
        let (w, ang) = match axis {
            Axis::X => (-t.weight, dr.mul_sin()),
            Axis::Y => (t.weight, dr.mul_cos()),
        };
        out.push(Term {
            weight: w,
            radial: cr,
            angular: ang,
            parity,
            constant_mode: false,
            pivot: t.pivot,
        });
    }
    if let Some(c) = origin_correction(&out, ChebSeries::with_parity(vec![1.0], Parity::Even), Parity::Even)? {
        out.push(c);
    }
    Ok(out)
}

/// Term cancelling the angular variation of a term sum at the origin.
///
/// Slope noise in the odd terms of `f` reappears in a derivative as
/// `theta`-dependence at `rho = 0`; a structured approximant cannot carry
/// it, so it is removed before recompression. `profile` is the radial
/// factor of the correction and must equal one at the origin.
pub(crate) fn origin_correction(terms: &[Term], profile: ChebSeries, parity: Parity) -> Result<Option<Term>> {
    let n = terms.iter().map(|t| t.angular.n()).max().unwrap_or(2);
    let h = (n / 2) as i64;
    let mut trace = vec![Complex64::new(0.0, 0.0); n];
    for t in terms {
        let c0 = t.weight * t.radial.eval(0.0);
        if c0 == 0.0 {
            continue;
        }
        for (k, b) in (-h..h).zip(trace.iter_mut()) {
            *b += c0 * t.angular.coeff(k);
        }
    }
    trace[h as usize] = Complex64::new(0.0, 0.0);
    if trace.iter().all(|b| b.norm() == 0.0) {
        return Ok(None);
    }
    Ok(Some(Term {
        weight: -1.0,
        radial: profile,
        angular: FourierSeries::with_parity(trace, parity)?,
        parity,
        constant_mode: false,
        pivot: (0.0, 0.0),
    }))
}

fn max_len(terms: &[Term]) -> usize {
    terms
        .iter()
        .map(|t| t.radial.len().max(t.angular.n()))
        .max()
        .unwrap_or(1)
}

/// Rebuild a term sum as a compressed approximant.
///
/// The tolerance covers the rounding in evaluating the sum: cancelling
/// terms leave noise at `eps * sum |w| |c|_1 |r|_1` that no rank resolves.
pub(crate) fn recompress(terms: Vec<Term>, floor: f64) -> Result<DiskFun> {
    let mass: f64 = terms
        .iter()
        .map(|t| t.weight.abs() * t.radial.abs_sum() * t.angular.abs_sum())
        .sum();
    let cond = (max_len(&terms) as f64).max(mass / floor.max(f64::MIN_POSITIVE));
    let opts = ConstructOptions::default()
        .with_tol(f64::EPSILON * cond)
        .with_vscale_floor(floor);
    construct(&TermSum { terms }, &opts)
}

/// `df/dx` by the polar chain rule, recompressed.
pub fn diff_x(f: &DiskFun) -> Result<DiskFun> {
    recompress(derivative_terms(f, Axis::X)?, f.vscale())
}

/// `df/dy` by the polar chain rule, recompressed.
pub fn diff_y(f: &DiskFun) -> Result<DiskFun> {
    recompress(derivative_terms(f, Axis::Y)?, f.vscale())
}

/// `f + g`, recompressed.
pub fn add(f: &DiskFun, g: &DiskFun) -> Result<DiskFun> {
    let terms: Vec<Term> = f.terms().iter().chain(g.terms()).cloned().collect();
    recompress(terms, f.vscale().max(g.vscale()))
}

/// `f - g`, recompressed.
pub fn sub(f: &DiskFun, g: &DiskFun) -> Result<DiskFun> {
    add(f, &negate(g))
}

/// `s * f`.
pub fn scale(f: &DiskFun, s: f64) -> DiskFun {
    f.scaled(s)
}

/// `-f`.
pub fn negate(f: &DiskFun) -> DiskFun {
    scale(f, -1.0)
}

struct Pointwise<'a, F> {
    f: &'a DiskFun,
    g: &'a DiskFun,
    op: F,
}

impl<F: Fn(f64, f64) -> f64 + Sync> DiskFunction for Pointwise<'_, F> {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        (self.op)(self.f.eval_doubled(theta, rho), self.g.eval_doubled(theta, rho))
    }

    fn eval_grid(&self, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
        let a = self.f.eval_grid(thetas, rhos);
        let b = self.g.eval_grid(thetas, rhos);
        a.into_iter().zip(b).map(|(x, y)| (self.op)(x, y)).collect()
    }
}

/// Pointwise product `f g`, rebuilt by elimination.
pub fn product(f: &DiskFun, g: &DiskFun) -> Result<DiskFun> {
    let src = Pointwise {
        f,
        g,
        op: |a: f64, b: f64| a * b,
    };
    let opts = ConstructOptions::default().with_vscale_floor(f.vscale() * g.vscale());
    construct(&src, &opts)
}

/// Value of the integrand pieces used by [`sum2`] for one term, exposed for
/// diagnostics: `(2 pi b_0, int_0^1 rho c(rho) d rho)`.
pub fn term_integrals(t: &Term) -> (f64, f64) {
    (2.0 * PI * t.angular.coeff(0).re, t.radial.mul_x().integral_unit())
}

/// Build an approximant from factored coefficients.
pub fn from_coeffs(c: &LowRankCoeffs) -> Result<DiskFun> {
    let mut terms = Vec::with_capacity(c.rank());
    for ((a, &d), b) in c.a.iter().zip(&c.d).zip(&c.b) {
        terms.push(Term {
            weight: d,
            radial: ChebSeries::new(a.clone()),
            angular: FourierSeries::new(b.clone())?,
            parity: Parity::None,
            constant_mode: false,
            pivot: (0.0, 0.0),
        });
    }
    Ok(DiskFun::from_terms(terms))
}
