//! Doubling of disk functions and block-mirror-centrosymmetric structure.
//!
//! A function `f(theta, rho)` on the disk is extended to the rectangle
//! `[-pi, pi) x [-1, 1]` by `f~(theta, rho) = f(theta - pi, -rho)` for
//! `rho < 0`. The extension satisfies `f~(theta, rho) = f~(theta - pi, -rho)`
//! and is constant along `rho = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::function::DiskFunction;
use crate::series::{cheb_points, fourier_points};

/// Reduce an angle into `[-pi, pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if t >= PI {
        -PI
    } else {
        t
    }
}

/// The doubled function `f~` on `[-pi, pi] x [-1, 1]`.
pub fn extend_to_bmc<F: DiskFunction>(f: F) -> impl Fn(f64, f64) -> f64 + Sync {
    move |theta, rho| {
        if rho >= 0.0 {
            f.eval_polar(theta, rho)
        } else {
            f.eval_polar(wrap_angle(theta - PI), -rho)
        }
    }
}

/// Even and odd parts of a doubled function, computed pointwise.
///
/// `even(theta, rho) = f~(theta, rho) + f~(theta - pi, rho)` and
/// `odd(theta, rho) = f~(theta, rho) - f~(theta - pi, rho)`, so that
/// `f~ = (even + odd) / 2`.
#[allow(clippy::type_complexity)]
pub fn parity_split_fn<F>(f: F) -> (impl Fn(f64, f64) -> f64, impl Fn(f64, f64) -> f64)
where
    F: Fn(f64, f64) -> f64 + Clone,
{
    let g = f.clone();
    let even = move |t: f64, r: f64| f(t, r) + f(wrap_angle(t - PI), r);
    let odd = move |t: f64, r: f64| g(t, r) - g(wrap_angle(t - PI), r);
    (even, odd)
}

/// Values of a doubled function on a tensor grid.
///
/// Values are stored row-major with one row per `rho` (ascending) and one
/// column per `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct BmcSample {
    thetas: Vec<f64>,
    rhos: Vec<f64>,
    values: Vec<f64>,
}

impl BmcSample {
    pub fn new(thetas: Vec<f64>, rhos: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || rhos.is_empty() {
            return Err(Error::EmptySample);
        }
        if values.len() != thetas.len() * rhos.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                thetas.len() * rhos.len(),
                values.len()
            )));
        }
        Ok(Self {
            thetas,
            rhos,
            values,
        })
    }

    /// Sample a doubled callable `f~(theta, rho)` on the `m` Chebyshev by
    /// `n` Fourier grid.
    pub fn from_doubled(f: impl Fn(f64, f64) -> f64, m: usize, n: usize) -> Result<Self> {
        let rhos = cheb_points(m);
        let thetas = fourier_points(n);
        let mut values = Vec::with_capacity(m * n);
        for &r in &rhos {
            for &t in &thetas {
                values.push(f(t, r));
            }
        }
        Self::new(thetas, rhos, values)
    }

    /// Sample a disk function on the `m` Chebyshev by `n` Fourier grid.
    ///
    /// Only the `rho >= 0` half is evaluated; the other half is filled in
    /// by the doubling symmetry, so the result is exactly BMC.
    pub fn from_disk<F: DiskFunction + ?Sized>(f: &F, m: usize, n: usize) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::EvenLengthRequired(n));
        }
        if m == 0 {
            return Err(Error::EmptySample);
        }
        let rhos = cheb_points(m);
        let thetas = fourier_points(n);
        let start = m / 2;
        let half = f.eval_grid(&thetas, &rhos[start..]);
        if half.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut values = vec![0.0; m * n];
        values[start * n..].copy_from_slice(&half);
        for i in 0..start {
            let src = m - 1 - i;
            for j in 0..n {
                values[i * n + j] = values[src * n + (j + n / 2) % n];
            }
        }
        Self::new(thetas, rhos, values)
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn rhos(&self) -> &[f64] {
        &self.rhos
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Number of radial points.
    pub fn m(&self) -> usize {
        self.rhos.len()
    }

    /// Number of angular points.
    pub fn n(&self) -> usize {
        self.thetas.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.thetas.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.thetas.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.m()).map(|i| self.get(i, j)).collect()
    }

    /// Largest absolute sample.
    pub fn vscale(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Index of the `rho = 0` row, if the grid has one.
    pub fn axis_row(&self) -> Option<usize> {
        self.rhos.iter().position(|&r| r == 0.0)
    }

    /// Check that the grid is closed under `(theta, rho) -> (theta - pi, -rho)`.
    pub fn check_symmetric_grid(&self) -> Result<()> {
        let m = self.m();
        let n = self.n();
        if !n.is_multiple_of(2) {
            return Err(Error::GridNotBmcCompatible);
        }
        for i in 0..m {
            if (self.rhos[i] + self.rhos[m - 1 - i]).abs() > 1e-14 {
                return Err(Error::GridNotBmcCompatible);
            }
        }
        for j in 0..n {
            let shifted = wrap_angle(self.thetas[j] - PI);
            let partner = self.thetas[(j + n / 2) % n];
            let d = wrap_angle(shifted - partner).abs();
            if d > 1e-12 && (2.0 * PI - d) > 1e-12 {
                return Err(Error::GridNotBmcCompatible);
            }
        }
        Ok(())
    }

    /// Largest `|f~(theta, rho) - f~(theta - pi, -rho)|` over the grid.
    pub fn bmc_violation(&self) -> Result<f64> {
        self.check_symmetric_grid()?;
        let m = self.m();
        let n = self.n();
        let mut worst: f64 = 0.0;
        for i in 0..m {
            for j in 0..n {
                let d = self.get(i, j) - self.get(m - 1 - i, (j + n / 2) % n);
                worst = worst.max(d.abs());
            }
        }
        Ok(worst)
    }

    /// BMC check: returns whether the violation is within `tol * vscale`,
    /// together with the violation itself.
    pub fn is_bmc(&self, tol: f64) -> Result<(bool, f64)> {
        let v = self.bmc_violation()?;
        Ok((v <= tol * self.vscale(), v))
    }

    /// Spread `max - min` of the `rho = 0` row (zero if there is none).
    pub fn axis_spread(&self) -> f64 {
        match self.axis_row() {
            None => 0.0,
            Some(i) => {
                let row = self.row(i);
                let hi = row.iter().cloned().fold(f64::MIN, f64::max);
                let lo = row.iter().cloned().fold(f64::MAX, f64::min);
                hi - lo
            }
        }
    }

    /// Combined BMC-II violation: the larger of the BMC violation and the
    /// spread of the axis row.
    pub fn bmc2_violation(&self) -> Result<f64> {
        Ok(self.bmc_violation()?.max(self.axis_spread()))
    }

    /// BMC-II check: BMC and constant along `rho = 0`, within `tol * vscale`.
    pub fn is_bmc2(&self, tol: f64) -> Result<bool> {
        Ok(self.bmc2_violation()? <= tol * self.vscale())
    }

    /// Even and odd parts on the same grid.
    pub fn parity_split(&self) -> Result<(BmcSample, BmcSample)> {
        self.check_symmetric_grid()?;
        let m = self.m();
        let n = self.n();
        let mut even = vec![0.0; m * n];
        let mut odd = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                let a = self.get(i, j);
                let b = self.get(i, (j + n / 2) % n);
                even[i * n + j] = a + b;
                odd[i * n + j] = a - b;
            }
        }
        Ok((
            Self::new(self.thetas.clone(), self.rhos.clone(), even)?,
            Self::new(self.thetas.clone(), self.rhos.clone(), odd)?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Polar;

    #[test]
    fn extension_examples() {
        let x = extend_to_bmc(Polar(|t: f64, r: f64| r * t.cos()));
        for &(t, r) in &[(0.3, -0.4), (-2.0, 0.7), (3.0, -1.0)] {
            assert!((x(t, r) - r * f64::cos(t)).abs() < 1e-15);
        }
        let one = extend_to_bmc(Polar(|_: f64, _: f64| 1.0));
        assert_eq!(one(1.0, -0.5), 1.0);
        let f = |t: f64, r: f64| r * r * t.sin();
        let g = extend_to_bmc(Polar(f));
        assert_eq!(g(0.3, -0.4), f(0.3 - PI, 0.4));
    }

    #[test]
    fn bmc_checks() {
        let x = BmcSample::from_doubled(|t, r| r * t.cos(), 17, 16).unwrap();
        let (ok, v) = x.is_bmc(1e-14).unwrap();
        assert!(ok);
        assert!(v < 1e-15);
        assert!(x.is_bmc2(1e-14).unwrap());

        let s = BmcSample::from_doubled(|t, r| (2.0 * t).sin() * (2.0 * r).cos(), 17, 16).unwrap();
        assert!(s.is_bmc(1e-14).unwrap().0);
        assert!(!s.is_bmc2(1e-14).unwrap());

        let tr = BmcSample::from_doubled(|t, r| t * r, 17, 16).unwrap();
        assert!(!tr.is_bmc(1e-14).unwrap().0);

        let p = BmcSample::from_doubled(|t, r| 1.0 + r * r * (2.0 * t).sin(), 17, 16).unwrap();
        assert!(p.is_bmc2(1e-14).unwrap());
    }

    #[test]
    fn asymmetric_grid_rejected() {
        let s = BmcSample::new(vec![0.0, 1.0], vec![0.0, 0.5], vec![0.0; 4]).unwrap();
        assert_eq!(s.is_bmc(1e-14), Err(Error::GridNotBmcCompatible));
    }

    #[test]
    fn parity_split_examples() {
        let x = BmcSample::from_doubled(|t, r| r * t.cos(), 17, 16).unwrap();
        let (e, o) = x.parity_split().unwrap();
        assert!(e.vscale() < 1e-15);
        for (a, b) in o.values().iter().zip(x.values()) {
            assert!((a - 2.0 * b).abs() < 1e-15);
        }
        let q = BmcSample::from_doubled(|t, r| r * r * (2.0 * t).cos(), 17, 16).unwrap();
        let (e, o) = q.parity_split().unwrap();
        assert!(o.vscale() < 1e-15);
        for (a, b) in e.values().iter().zip(q.values()) {
            assert!((a - 2.0 * b).abs() < 1e-15);
        }
    }

    #[test]
    fn wrap_is_half_open() {
        assert_eq!(wrap_angle(PI), -PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }
}
