//! One-dimensional Chebyshev and Fourier series.
//!
//! Chebyshev data lives on `[-1, 1]` and is sampled at Chebyshev points of
//! the second kind in ascending order. Fourier data lives on `[-pi, pi)`,
//! sampled at `n` equispaced points starting at `-pi`, with coefficients
//! stored for `k = -n/2 .. n/2 - 1`.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Symmetry tag carried by a series.
///
/// For a Chebyshev series `Even`/`Odd` refer to the parity in `x`. For a
/// Fourier series `Even` means only even wavenumbers are present (the
/// function is pi-periodic) and `Odd` means only odd wavenumbers (the
/// function is pi-antiperiodic).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    None,
    Even,
    Odd,
}

impl Parity {
    /// Whether index `k` may carry a nonzero coefficient.
    pub fn admits(self, k: i64) -> bool {
        match self {
            Parity::None => true,
            Parity::Even => k.rem_euclid(2) == 0,
            Parity::Odd => k.rem_euclid(2) == 1,
        }
    }

    /// Parity after differentiation or multiplication by `x`.
    pub fn flip(self) -> Parity {
        match self {
            Parity::None => Parity::None,
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn forward_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

fn inverse_plan(len: usize) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// Chebyshev points of the second kind on `[-1, 1]`, ascending.
///
/// The sine form keeps the grid exactly symmetric, puts an exact zero in
/// the middle of odd-sized grids and makes grids of size `2^k + 1` nest.
pub fn cheb_points(m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let n = (m - 1) as f64;
            (0..m)
                .map(|i| {
                    let k = 2.0 * i as f64 - n;
                    (PI * k / (2.0 * n)).sin()
                })
                .collect()
        }
    }
}

/// Clenshaw-Curtis weights on `[-1, 1]` for `cheb_points(m)`.
pub fn cc_weights(m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![2.0],
        _ => {
            let n = m - 1;
            let nf = n as f64;
            let mut w = vec![0.0; m];
            let ends = if n.is_multiple_of(2) { 1.0 / (nf * nf - 1.0) } else { 1.0 / (nf * nf) };
            w[0] = ends;
            w[n] = ends;
            for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
                let t = PI * i as f64 / nf;
                let mut v = 1.0;
                for k in 1..=(n - 1) / 2 {
                    let kf = k as f64;
                    v -= 2.0 * (2.0 * kf * t).cos() / (4.0 * kf * kf - 1.0);
                }
                if n.is_multiple_of(2) {
                    v -= (nf * t).cos() / (nf * nf - 1.0);
                }
                *wi = 2.0 * v / nf;
            }
            w
        }
    }
}

/// Equispaced points `-pi + 2 pi j / n`, `j = 0..n`.
pub fn fourier_points(n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| {
            // Exact for power-of-two n, so grids nest under doubling.
            PI * (2.0 * j as f64 / n as f64 - 1.0)
        })
        .collect()
}

/// Length to keep so that every discarded magnitude is `<= tol * vscale`.
///
/// All-zero (or all-negligible) input keeps a single coefficient.
pub fn chop(magnitudes: &[f64], vscale: f64, tol: f64) -> usize {
    let threshold = tol * vscale;
    magnitudes
        .iter()
        .rposition(|&c| c.abs() > threshold)
        .map_or(1, |i| i + 1)
}

/// Chebyshev series `sum a_l T_l(x)` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
    parity: Parity,
}

impl ChebSeries {
    /// Series with the given coefficients and no parity tag.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![0.0] } else { coeffs };
        Self {
            coeffs,
            parity: Parity::None,
        }
    }

    /// Series tagged with `parity`; coefficients of the wrong parity are zeroed.
    pub fn with_parity(coeffs: Vec<f64>, parity: Parity) -> Self {
        let mut s = Self::new(coeffs);
        s.set_parity(parity);
        s
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0])
    }

    pub fn constant(c: f64) -> Self {
        Self::with_parity(vec![c], Parity::Even)
    }

    fn set_parity(&mut self, parity: Parity) {
        self.parity = parity;
        for (l, a) in self.coeffs.iter_mut().enumerate() {
            if !parity.admits(l as i64) {
                *a = 0.0;
            }
        }
    }

    /// Interpolant of `values` given at `cheb_points(values.len())`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        cheb_transform(values)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sum of absolute coefficients, an upper bound for `max |s|`.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|a| a.abs()).sum()
    }

    /// Clenshaw evaluation; `x` is clamped to `[-1, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, x.clamp(-1.0, 1.0))
    }

    /// Clenshaw evaluation that rejects points away from `[-1, 1]`.
    pub fn clenshaw_eval(&self, x: f64) -> Result<f64> {
        if !(x.abs() <= 1.0 + 10.0 * f64::EPSILON) {
            return Err(Error::OutsideDomain);
        }
        Ok(self.eval(x))
    }

    /// Values at `cheb_points(m)`, aliasing longer series onto the grid.
    pub fn values(&self, m: usize) -> Vec<f64> {
        cheb_values(&self.coeffs, m)
    }

    /// Coefficients of `ds/dx`.
    pub fn derivative(&self) -> ChebSeries {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::with_parity(vec![0.0], Parity::Even);
        }
        let mut b = vec![0.0; n + 1];
        for k in (1..n).rev() {
            b[k - 1] = b[k + 1] + 2.0 * k as f64 * self.coeffs[k];
        }
        b[0] *= 0.5;
        b.truncate(n - 1);
        Self::with_parity(b, self.parity.flip())
    }

    /// Clenshaw-Curtis integral over `[-1, 1]`.
    pub fn integral(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .step_by(2)
            .map(|(l, a)| 2.0 * a / (1.0 - (l * l) as f64))
            .sum()
    }

    /// Exact integral over `[0, 1]`.
    pub fn integral_unit(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, a)| a * unit_integral_of_t(l))
            .sum()
    }

    /// Coefficients of `x s(x)`, one longer than `s`.
    pub fn mul_x(&self) -> ChebSeries {
        let n = self.coeffs.len();
        let mut out = vec![0.0; n + 1];
        for (l, &a) in self.coeffs.iter().enumerate() {
            if l == 0 {
                out[1] += a;
            } else {
                out[l + 1] += 0.5 * a;
                out[l - 1] += 0.5 * a;
            }
        }
        Self::with_parity(out, self.parity.flip())
    }

    /// Copy truncated or zero-padded to `len` coefficients.
    pub fn resized(&self, len: usize) -> ChebSeries {
        let mut c = self.coeffs.clone();
        c.resize(len.max(1), 0.0);
        Self {
            coeffs: c,
            parity: self.parity,
        }
    }

    /// Drop trailing coefficients with magnitude `<= tol * vscale`.
    pub fn chopped(&self, vscale: f64, tol: f64) -> ChebSeries {
        let mags: Vec<f64> = self.coeffs.iter().map(|a| a.abs()).collect();
        self.resized(chop(&mags, vscale, tol))
    }

    pub fn scaled(&self, s: f64) -> ChebSeries {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
            parity: self.parity,
        }
    }
}

fn clenshaw(a: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    let x2 = 2.0 * x;
    for &c in a.iter().skip(1).rev() {
        let b0 = c + x2 * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    a[0] + x * b1 - b2
}

fn unit_integral_of_t(l: usize) -> f64 {
    // T_j(0) = cos(j pi / 2)
    let t0 = |j: usize| -> f64 {
        match j % 4 {
            0 => 1.0,
            2 => -1.0,
            _ => 0.0,
        }
    };
    match l {
        0 => 1.0,
        1 => 0.5,
        _ => {
            let up = (l + 1) as f64;
            let dn = (l - 1) as f64;
            (1.0 / (2.0 * up) - 1.0 / (2.0 * dn)) - (t0(l + 1) / (2.0 * up) - t0(l - 1) / (2.0 * dn))
        }
    }
}

/// Chebyshev coefficients of the interpolant through `values` at the
/// ascending second-kind points; O(m log m) via a mirrored FFT.
pub fn cheb_transform(values: &[f64]) -> Result<ChebSeries> {
    let m = values.len();
    if m == 0 {
        return Err(Error::EmptySample);
    }
    if m == 1 {
        return Ok(ChebSeries::new(vec![values[0]]));
    }
    let n = m - 1;
    // Reverse so that w[j] sits at x = cos(pi j / n).
    let mut buf: Vec<Complex64> = Vec::with_capacity(2 * n);
    buf.extend(values.iter().rev().map(|&v| Complex64::new(v, 0.0)));
    buf.extend(values[1..n].iter().map(|&v| Complex64::new(v, 0.0)));
    forward_plan(2 * n).process(&mut buf);
    let mut a: Vec<f64> = buf[..m].iter().map(|z| z.re / n as f64).collect();
    a[0] *= 0.5;
    a[n] *= 0.5;
    Ok(ChebSeries::new(a))
}

/// Values of `sum a_l T_l` at `cheb_points(m)`.
pub fn cheb_values(a: &[f64], m: usize) -> Vec<f64> {
    match m {
        0 => Vec::new(),
        1 => vec![clenshaw(a, 0.0)],
        _ => {
            let n = m - 1;
            let mut c = vec![0.0; m];
            for (k, &ak) in a.iter().enumerate() {
                let r = k % (2 * n);
                let k2 = if r > n { 2 * n - r } else { r };
                c[k2] += ak;
            }
            let mut buf: Vec<Complex64> = Vec::with_capacity(2 * n);
            buf.extend(c.iter().map(|&v| Complex64::new(v, 0.0)));
            buf.extend(c[1..n].iter().rev().map(|&v| Complex64::new(v, 0.0)));
            forward_plan(2 * n).process(&mut buf);
            // buf[j] = a0 + (-1)^j aN + 2 sum a_k cos(pi j k / n)
            let mut w: Vec<f64> = (0..m)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    0.5 * (buf[j].re + c[0] + sign * c[n])
                })
                .collect();
            w.reverse();
            w
        }
    }
}

/// Fourier series `sum b_k e^{ik theta}`, `k = -n/2 .. n/2 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    coeffs: Vec<Complex64>,
    parity: Parity,
}

impl FourierSeries {
    /// Series from coefficients ordered `k = -n/2 .. n/2 - 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || !coeffs.len().is_multiple_of(2) {
            return Err(Error::EvenLengthRequired(coeffs.len()));
        }
        Ok(Self {
            coeffs,
            parity: Parity::None,
        })
    }

    /// Series tagged with `parity`; modes of the wrong parity are zeroed.
    pub fn with_parity(coeffs: Vec<Complex64>, parity: Parity) -> Result<Self> {
        let mut s = Self::new(coeffs)?;
        s.set_parity(parity);
        Ok(s)
    }

    /// The constant function `c` (stored with `n = 2`).
    pub fn constant(c: f64) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(c, 0.0)],
            parity: Parity::Even,
        }
    }

    fn set_parity(&mut self, parity: Parity) {
        self.parity = parity;
        let half = (self.coeffs.len() / 2) as i64;
        for (idx, b) in self.coeffs.iter_mut().enumerate() {
            if !parity.admits(idx as i64 - half) {
                *b = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// Coefficients of the trigonometric interpolant of real samples,
    /// with conjugate symmetry enforced.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut s = fourier_transform(&z)?;
        s.symmetrize();
        Ok(s)
    }

    /// Coefficients of the trigonometric interpolant of complex samples.
    pub fn from_complex_values(values: &[Complex64]) -> Result<Self> {
        fourier_transform(values)
    }

    /// Replace `b_k` and `b_{-k}` by their conjugate-symmetric average.
    pub fn symmetrize(&mut self) {
        let n = self.coeffs.len();
        let h = n / 2;
        self.coeffs[0].im = 0.0;
        self.coeffs[h].im = 0.0;
        for k in 1..h {
            let avg = 0.5 * (self.coeffs[h + k] + self.coeffs[h - k].conj());
            self.coeffs[h + k] = avg;
            self.coeffs[h - k] = avg.conj();
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Number of stored modes.
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient `b_k`, zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let h = (self.coeffs.len() / 2) as i64;
        if k < -h || k >= h {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + h) as usize]
        }
    }

    /// Largest `|k|` with `|b_k| > threshold` (0 if none).
    pub fn kmax(&self, threshold: f64) -> usize {
        let h = (self.coeffs.len() / 2) as i64;
        (-h..h)
            .filter(|&k| self.coeff(k).norm() > threshold)
            .map(|k| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Whether only `b_0` may be nonzero.
    pub fn is_constant(&self) -> bool {
        let h = (self.coeffs.len() / 2) as i64;
        (-h..h).all(|k| k == 0 || self.coeff(k) == Complex64::new(0.0, 0.0))
    }

    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|b| b.norm()).sum()
    }

    /// Horner evaluation at `theta`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for &b in self.coeffs.iter().rev() {
            acc = acc * z + b;
        }
        let h = (self.coeffs.len() / 2) as f64;
        acc * Complex64::from_polar(1.0, -h * theta)
    }

    /// Horner evaluation returning the real part.
    pub fn eval_real(&self, theta: f64) -> f64 {
        self.eval(theta).re
    }

    /// Values at `fourier_points(n)`, aliasing longer series onto the grid.
    pub fn values(&self, n: usize) -> Result<Vec<Complex64>> {
        fourier_values(&self.coeffs, n)
    }

    /// Coefficients of `d/dtheta`.
    pub fn derivative(&self) -> FourierSeries {
        let h = (self.coeffs.len() / 2) as i64;
        let coeffs = (-h..h)
            .map(|k| self.coeff(k) * Complex64::new(0.0, k as f64))
            .collect();
        Self {
            coeffs,
            parity: self.parity,
        }
    }

    /// Trapezoid integral over `[-pi, pi)`: `2 pi b_0`.
    pub fn integral(&self) -> Complex64 {
        self.coeff(0) * (2.0 * PI)
    }

    /// Coefficients of `cos(theta) s(theta)`; two modes longer.
    pub fn mul_cos(&self) -> FourierSeries {
        let h = (self.coeffs.len() / 2) as i64 + 1;
        let coeffs = (-h..h)
            .map(|k| 0.5 * (self.coeff(k - 1) + self.coeff(k + 1)))
            .collect();
        Self {
            coeffs,
            parity: self.parity.flip(),
        }
    }

    /// Coefficients of `sin(theta) s(theta)`; two modes longer.
    pub fn mul_sin(&self) -> FourierSeries {
        let h = (self.coeffs.len() / 2) as i64 + 1;
        let coeffs = (-h..h)
            .map(|k| (self.coeff(k - 1) - self.coeff(k + 1)) * Complex64::new(0.0, -0.5))
            .collect();
        Self {
            coeffs,
            parity: self.parity.flip(),
        }
    }

    /// Copy with `n` stored modes (padding with zeros or truncating).
    pub fn resized(&self, n: usize) -> Result<FourierSeries> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::EvenLengthRequired(n));
        }
        let h = (n / 2) as i64;
        let coeffs = (-h..h).map(|k| self.coeff(k)).collect();
        Ok(Self {
            coeffs,
            parity: self.parity,
        })
    }

    /// Shortest copy keeping every mode with `|b_k| > tol * vscale`.
    ///
    /// The result has `n = 2 kmax + 2` modes, so `b_{-n/2}` is zero and a
    /// real function stays real.
    pub fn chopped(&self, vscale: f64, tol: f64) -> FourierSeries {
        let kmax = self.kmax(tol * vscale);
        self.resized(2 * kmax + 2).expect("even length")
    }

    pub fn scaled(&self, s: f64) -> FourierSeries {
        Self {
            coeffs: self.coeffs.iter().map(|b| b * s).collect(),
            parity: self.parity,
        }
    }
}

/// Coefficients `b_{-n/2} .. b_{n/2-1}` of the trigonometric interpolant of
/// samples at `fourier_points(n)`.
pub fn fourier_transform(values: &[Complex64]) -> Result<FourierSeries> {
    let n = values.len();
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::EvenLengthRequired(n));
    }
    let mut buf = values.to_vec();
    forward_plan(n).process(&mut buf);
    let h = (n / 2) as i64;
    let scale = 1.0 / n as f64;
    let coeffs = (-h..h)
        .map(|k| {
            let sign = if k.rem_euclid(2) == 0 { scale } else { -scale };
            buf[k.rem_euclid(n as i64) as usize] * sign
        })
        .collect();
    FourierSeries::new(coeffs)
}

/// Values of `sum b_k e^{ik theta}` (coefficients ordered from `-len/2`) at
/// `fourier_points(n)`.
pub fn fourier_values(b: &[Complex64], n: usize) -> Result<Vec<Complex64>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::EvenLengthRequired(n));
    }
    let h = (b.len() / 2) as i64;
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (idx, &bk) in b.iter().enumerate() {
        let k = idx as i64 - h;
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        buf[k.rem_euclid(n as i64) as usize] += bk * sign;
    }
    inverse_plan(n).process(&mut buf);
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct_cheb_coeffs(values: &[f64]) -> Vec<f64> {
        // O(m^2) cosine sum at x_j = cos(pi j / n) after reversal.
        let m = values.len();
        let n = m - 1;
        let w: Vec<f64> = values.iter().rev().copied().collect();
        (0..m)
            .map(|k| {
                let mut s = 0.0;
                for (j, &wj) in w.iter().enumerate() {
                    let f = if j == 0 || j == n { 0.5 } else { 1.0 };
                    s += f * wj * (PI * (j * k) as f64 / n as f64).cos();
                }
                let f = if k == 0 || k == n { 0.5 } else { 1.0 };
                2.0 * f * s / n as f64
            })
            .collect()
    }

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    #[test]
    fn cc_weights_exact_for_polynomials() {
        for m in [2usize, 5, 16, 33] {
            let x = cheb_points(m);
            let w = cc_weights(m);
            for k in 0..m {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "m={m} k={k}");
            }
        }
    }

    #[test]
    fn t3_round_trip() {
        let x = cheb_points(8);
        let v: Vec<f64> = x.iter().map(|&x| 4.0 * x * x * x - 3.0 * x).collect();
        let s = cheb_transform(&v).unwrap();
        for (l, a) in s.coeffs().iter().enumerate() {
            let e = if l == 3 { 1.0 } else { 0.0 };
            assert!((a - e).abs() < 1e-14, "l={l} a={a}");
        }
    }

    #[test]
    fn constant_samples() {
        let s = cheb_transform(&[2.5; 9]).unwrap();
        assert!((s.coeffs()[0] - 2.5).abs() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|a| a.abs() < 1e-15));
        assert_eq!(cheb_transform(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn cheb_transform_matches_direct_sum() {
        let mut seed = 7;
        let v: Vec<f64> = (0..33).map(|_| lcg(&mut seed)).collect();
        let fast = cheb_transform(&v).unwrap();
        let slow = direct_cheb_coeffs(&v);
        for (a, b) in fast.coeffs().iter().zip(&slow) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn points_are_symmetric_and_nested() {
        let x = cheb_points(17);
        assert_eq!(x[8], 0.0);
        for i in 0..17 {
            assert_eq!(x[i], -x[16 - i]);
        }
        let y = cheb_points(33);
        for i in 0..17 {
            assert_eq!(x[i], y[2 * i]);
        }
        let t = fourier_points(16);
        let u = fourier_points(32);
        for j in 0..16 {
            assert_eq!(t[j], u[2 * j]);
        }
    }

    #[test]
    fn cheb_values_alias_long_series() {
        let mut seed = 3;
        let a: Vec<f64> = (0..40).map(|_| lcg(&mut seed)).collect();
        let s = ChebSeries::new(a);
        let x = cheb_points(17);
        let v = s.values(17);
        for (xi, vi) in x.iter().zip(&v) {
            assert!((s.eval(*xi) - vi).abs() < 1e-13);
        }
    }

    #[test]
    fn clenshaw_examples() {
        let t2 = ChebSeries::new(vec![0.0, 0.0, 1.0]);
        assert!((t2.eval(0.5) + 0.5).abs() < 1e-15);
        assert_eq!(ChebSeries::new(vec![3.0]).eval(0.2), 3.0);
        assert_eq!(t2.clenshaw_eval(1.5), Err(Error::OutsideDomain));
        let mut seed = 11;
        let a: Vec<f64> = (0..21).map(|_| lcg(&mut seed)).collect();
        let s = ChebSeries::new(a.clone());
        for _ in 0..10 {
            let x = lcg(&mut seed);
            let direct: f64 = a
                .iter()
                .enumerate()
                .map(|(l, c)| c * (l as f64 * x.acos()).cos())
                .sum();
            assert!((s.eval(x) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn horner_examples() {
        let mut one = vec![Complex64::new(0.0, 0.0); 4];
        one[2] = Complex64::new(1.0, 0.0);
        let s = FourierSeries::new(one.clone()).unwrap();
        assert!((s.eval(1.234) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        one[2] = Complex64::new(0.0, 0.0);
        one[3] = Complex64::new(1.0, 0.0);
        let s = FourierSeries::new(one).unwrap();
        assert!((s.eval(PI / 2.0) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn horner_matches_direct_sum() {
        let mut seed = 5;
        let b: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(lcg(&mut seed), lcg(&mut seed)))
            .collect();
        let s = FourierSeries::new(b.clone()).unwrap();
        for _ in 0..10 {
            let t = PI * lcg(&mut seed);
            let direct: Complex64 = b
                .iter()
                .enumerate()
                .map(|(i, c)| c * Complex64::from_polar(1.0, (i as f64 - 8.0) * t))
                .sum();
            assert!((s.eval(t) - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn fourier_transform_examples() {
        let t = fourier_points(8);
        let v: Vec<Complex64> = t.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
        let s = fourier_transform(&v).unwrap();
        for k in -4..4 {
            let e = if k == 1 { 1.0 } else { 0.0 };
            assert!((s.coeff(k) - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
        let c = FourierSeries::from_values(&[3.0; 8]).unwrap();
        assert!((c.coeff(0).re - 3.0).abs() < 1e-15);
        assert_eq!(
            fourier_transform(&[Complex64::new(1.0, 0.0); 7]),
            Err(Error::EvenLengthRequired(7))
        );
    }

    #[test]
    fn fourier_matches_direct_dft() {
        let mut seed = 9;
        let v: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(lcg(&mut seed), lcg(&mut seed)))
            .collect();
        let s = fourier_transform(&v).unwrap();
        let t = fourier_points(16);
        for k in -8i64..8 {
            let direct: Complex64 = v
                .iter()
                .zip(&t)
                .map(|(vj, tj)| vj * Complex64::from_polar(1.0, -(k as f64) * tj))
                .sum::<Complex64>()
                / 16.0;
            assert!((s.coeff(k) - direct).norm() < 1e-13);
        }
        let back = s.values(16).unwrap();
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn derivative_examples() {
        let t1 = ChebSeries::new(vec![0.0, 1.0]);
        let d = t1.derivative();
        assert_eq!(d.coeffs(), &[1.0]);
        assert_eq!(ChebSeries::new(vec![4.0]).derivative().coeffs(), &[0.0]);
        let mut seed = 13;
        let s = ChebSeries::new((0..15).map(|_| lcg(&mut seed)).collect());
        let ds = s.derivative();
        let h = 1e-6;
        for _ in 0..20 {
            let x = 0.9 * lcg(&mut seed);
            let fd = (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
            assert!((ds.eval(x) - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn quadrature_examples() {
        assert!((ChebSeries::new(vec![1.0]).integral() - 2.0).abs() < 1e-15);
        assert_eq!(ChebSeries::new(vec![0.0, 1.0]).integral(), 0.0);
        assert!((ChebSeries::new(vec![0.0, 0.0, 1.0]).integral() + 2.0 / 3.0).abs() < 1e-15);
        assert!((FourierSeries::constant(1.0).integral().re - 2.0 * PI).abs() < 1e-15);
        let e1 = FourierSeries::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(e1.integral().norm(), 0.0);
    }

    #[test]
    fn unit_integral_matches_dense_rule() {
        let mut seed = 17;
        let s = ChebSeries::new((0..12).map(|_| lcg(&mut seed)).collect());
        // Composite Simpson on [0,1] with many panels.
        let n = 20000;
        let h = 1.0 / n as f64;
        let mut acc = s.eval(0.0) + s.eval(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * s.eval(i as f64 * h);
        }
        assert!((s.integral_unit() - acc * h / 3.0).abs() < 1e-12);
    }

    #[test]
    fn chop_examples() {
        assert_eq!(chop(&[1.0, 1e-20, 1e-20], 1.0, 1e-15), 1);
        assert_eq!(chop(&[0.0; 5], 1.0, 1e-15), 1);
        let g: Vec<f64> = (0..80).map(|l| 2f64.powi(-l)).collect();
        // Last index with 2^-l > 1e-15 is l = 49.
        assert_eq!(chop(&g, 1.0, 1e-15), 50);
    }

    #[test]
    fn mul_trig_matches_pointwise() {
        let mut seed = 21;
        let b: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(lcg(&mut seed), lcg(&mut seed)))
            .collect();
        let s = FourierSeries::new(b).unwrap();
        let c = s.mul_cos();
        let sn = s.mul_sin();
        for _ in 0..5 {
            let t = PI * lcg(&mut seed);
            assert!((c.eval(t) - s.eval(t) * t.cos()).norm() < 1e-14);
            assert!((sn.eval(t) - s.eval(t) * t.sin()).norm() < 1e-14);
        }
    }
}
