//! Ultraspherical discretization of the radial part of the Laplacian.
//!
//! Operators act on Chebyshev-T coefficients. Those that end in the
//! Chebyshev-U basis are marked as such; all are truncated to `m x m`.

use num_complex::Complex64;

use super::banded::Banded;
use crate::error::{Error, Result};

/// Polynomial basis of a coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    ChebT,
    ChebU,
}

/// A banded operator with its input and output bases.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedOp {
    pub mat: Banded,
    pub input: Basis,
    pub output: Basis,
}

impl BandedOp {
    pub fn size(&self) -> usize {
        self.mat.size()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.mat.mul_vec(x)
    }
}

// Sparse coefficient maps on vectors that are long enough to hold the
// result; each returns a vector two entries longer than its input.

fn grow(v: &[f64]) -> Vec<f64> {
    vec![0.0; v.len() + 2]
}

/// `x * p` in the U basis.
fn xu(v: &[f64]) -> Vec<f64> {
    let mut out = grow(v);
    for (l, &a) in v.iter().enumerate() {
        out[l + 1] += 0.5 * a;
        if l >= 1 {
            out[l - 1] += 0.5 * a;
        }
    }
    out
}

/// `x * p` in the T basis.
fn xt(v: &[f64]) -> Vec<f64> {
    let mut out = grow(v);
    for (l, &a) in v.iter().enumerate() {
        if l == 0 {
            out[1] += a;
        } else {
            out[l + 1] += 0.5 * a;
            out[l - 1] += 0.5 * a;
        }
    }
    out
}

/// T to U conversion.
fn s1(v: &[f64]) -> Vec<f64> {
    let mut out = grow(v);
    for (l, &a) in v.iter().enumerate() {
        if l == 0 {
            out[0] += a;
        } else {
            out[l] += 0.5 * a;
            if l >= 2 {
                out[l - 2] -= 0.5 * a;
            }
        }
    }
    out
}

/// `d/dx`, T to U.
fn d1(v: &[f64]) -> Vec<f64> {
    let mut out = grow(v);
    for (l, &a) in v.iter().enumerate().skip(1) {
        out[l - 1] += l as f64 * a;
    }
    out
}

/// `(1 - x^2) d^2/dx^2`, T to U, from
/// `(1 - x^2) T_l'' = -l(l-1)/2 U_l + l(l+1)/2 U_{l-2}`.
fn d21(v: &[f64]) -> Vec<f64> {
    let mut out = grow(v);
    for (l, &a) in v.iter().enumerate() {
        let lf = l as f64;
        out[l] -= 0.5 * lf * (lf - 1.0) * a;
        if l >= 2 {
            out[l - 2] += 0.5 * lf * (lf + 1.0) * a;
        }
    }
    out
}

fn sub(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - s * b.get(i).copied().unwrap_or(0.0))
        .collect()
}

fn unit(l: usize) -> Vec<f64> {
    let mut e = vec![0.0; l + 1];
    e[l] = 1.0;
    e
}

fn check_size(m: usize) -> Result<()> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(Error::InvalidOperatorSize(m));
    }
    Ok(())
}

fn assemble(m: usize, kl: usize, ku: usize, column: impl Fn(usize) -> Vec<f64>) -> Banded {
    let mut b = Banded::zeros(m, kl, ku);
    for j in 0..m {
        let c = column(j);
        for (i, &v) in c.iter().enumerate().take(m) {
            if v != 0.0 {
                b.set(i, j, v);
            }
        }
    }
    b
}

/// Column `l` of `L`: the image of `T_l` under
/// `rho^2 (1 - rho^2) d^2 + (rho - 5 rho^3) d - 4 rho^2`, in the U basis.
fn l_column(l: usize) -> Vec<f64> {
    let e = unit(l);
    let a = xu(&xu(&d21(&e)));
    let dv = d1(&e);
    let b = sub(&xu(&dv), &xu(&xu(&xu(&dv))), 5.0);
    let c = xu(&xu(&s1(&e)));
    let ab: Vec<f64> = sub(&a, &b, -1.0);
    sub(&ab, &c, 4.0)
}

/// The radial operator `L` (T to U). Only the diagonals at offsets
/// `-2, 0, 2, 4` are occupied.
pub fn build_l(m: usize) -> Result<BandedOp> {
    check_size(m)?;
    Ok(BandedOp {
        mat: assemble(m, 2, 4, l_column),
        input: Basis::ChebT,
        output: Basis::ChebU,
    })
}

/// `S1 M`: multiplication by `1 - rho^2`, then conversion to U.
pub fn build_s1m(m: usize) -> Result<BandedOp> {
    check_size(m)?;
    Ok(BandedOp {
        mat: assemble(m, 2, 4, |l| {
            let e = unit(l);
            s1(&sub(&e, &xt(&xt(&e)), 1.0))
        }),
        input: Basis::ChebT,
        output: Basis::ChebU,
    })
}

/// `S1 M_{rho^2}`: multiplication by `rho^2`, then conversion to U.
pub fn build_s1mr2(m: usize) -> Result<BandedOp> {
    check_size(m)?;
    Ok(BandedOp {
        mat: assemble(m, 2, 4, |l| s1(&xt(&xt(&unit(l))))),
        input: Basis::ChebT,
        output: Basis::ChebU,
    })
}

/// `M`: multiplication by `1 - rho^2` in the T basis, `m + 2` rows so
/// nothing is truncated.
pub fn mul_one_minus_rho2(a: &[f64]) -> Vec<f64> {
    sub(a, &xt(&xt(a)), 1.0)
}

/// `T` to `U` conversion `S1` as a banded operator.
pub fn build_s1(m: usize) -> Result<BandedOp> {
    check_size(m)?;
    Ok(BandedOp {
        mat: assemble(m, 0, 2, |l| s1(&unit(l))),
        input: Basis::ChebT,
        output: Basis::ChebU,
    })
}

/// Diagonal of the second Fourier derivative, `-k^2` for
/// `k = -n/2 .. n/2 - 1`.
pub fn build_df2(n: usize) -> Result<Vec<f64>> {
    if !n.is_multiple_of(2) {
        return Err(Error::EvenLengthRequired(n));
    }
    let h = (n / 2) as i64;
    Ok((-h..h).map(|k| -((k * k) as f64)).collect())
}

/// Apply the Fourier second derivative to coefficients.
pub fn apply_df2(b: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = build_df2(b.len())?;
    Ok(b.iter().zip(d).map(|(x, s)| x * s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// U-basis coefficients of a monomial-basis polynomial, via
    /// `U_l(cos t) = sin((l+1)t)/sin t` sampled and solved densely.
    fn monomial_to_u(p: &[f64], len: usize) -> Vec<f64> {
        use nalgebra::{DMatrix, DVector};
        let t: Vec<f64> = (0..len).map(|i| (i as f64 + 0.5) * std::f64::consts::PI / len as f64).collect();
        let a = DMatrix::from_fn(len, len, |i, l| ((l as f64 + 1.0) * t[i]).sin() / t[i].sin());
        let b = DVector::from_fn(len, |i, _| {
            let x = t[i].cos();
            p.iter().enumerate().map(|(k, c)| c * x.powi(k as i32)).sum()
        });
        a.lu().solve(&b).unwrap().iter().cloned().collect()
    }

    #[test]
    fn l_columns() {
        let l = build_l(8).unwrap();
        let c0: Vec<f64> = (0..8).map(|i| l.mat.get(i, 0)).collect();
        assert_eq!(c0, vec![-1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        // L(rho) = rho - 9 rho^3.
        let want = monomial_to_u(&[0.0, 1.0, 0.0, -9.0], 8);
        for i in 0..8 {
            assert!((l.mat.get(i, 1) - want[i]).abs() < 1e-12);
        }
        // L(T_4) with T_4 = 8x^4 - 8x^2 + 1:
        // rho^2(1-rho^2)(96 rho^2 - 16) + (rho - 5 rho^3)(32 rho^3 - 16 rho) - 4 rho^2 T_4.
        let p = [0.0, 0.0, -36.0, 0.0, 256.0, 0.0, -288.0];
        let want = monomial_to_u(&p, 8);
        for i in 0..8 {
            assert!((l.mat.get(i, 4) - want[i]).abs() < 1e-10, "{i}");
        }
    }

    #[test]
    fn bandwidths() {
        let m = 32;
        let l = build_l(m).unwrap().mat;
        assert_eq!(l.occupied_bandwidths(), (2, 4));
        let diagonals: Vec<i64> = (-2..=4)
            .filter(|&o: &i64| (0..m).any(|i| {
                let j = i as i64 + o;
                j >= 0 && (j as usize) < m && l.get(i, j as usize) != 0.0
            }))
            .collect();
        assert_eq!(diagonals, vec![-2, 0, 2, 4]);
        assert_eq!(build_s1m(m).unwrap().mat.occupied_bandwidths(), (2, 4));
        assert_eq!(build_s1mr2(m).unwrap().mat.occupied_bandwidths(), (2, 4));
        assert_eq!(build_l(7).unwrap_err(), Error::InvalidOperatorSize(7));
    }

    #[test]
    fn df2_examples() {
        assert_eq!(build_df2(4).unwrap(), vec![-4.0, -1.0, 0.0, -1.0]);
        let mut b = vec![Complex64::new(0.0, 0.0); 8];
        b[5] = Complex64::new(1.0, 0.0);
        let d = apply_df2(&b).unwrap();
        assert_eq!(d[5], Complex64::new(-1.0, 0.0));
        // sin 3t = (e^{3it} - e^{-3it}) / 2i
        let mut s = vec![Complex64::new(0.0, 0.0); 8];
        s[1] = Complex64::new(0.0, 0.5);
        s[7] = Complex64::new(0.0, -0.5);
        let d = apply_df2(&s).unwrap();
        assert_eq!(d[1], Complex64::new(0.0, -4.5));
        assert_eq!(d[7], Complex64::new(0.0, 4.5));
    }
}
