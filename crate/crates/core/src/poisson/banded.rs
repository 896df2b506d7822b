//! Banded matrices and banded LU with partial pivoting.

use crate::error::{Error, Result};

/// Square banded matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct Banded {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major, `width = kl + ku + 1` entries per row, entry `(i, j)` at
    /// `i * width + (j + kl - i)`.
    data: Vec<f64>,
}

impl Banded {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `(kl, ku)`.
    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[i * self.width() + (j + self.kl - i)]
        } else {
            0.0
        }
    }

    /// Set an entry; panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let w = self.width();
        self.data[i * w + (j + self.kl - i)] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// `self + s * other`, widening the band as needed.
    pub fn axpy(&self, s: f64, other: &Banded) -> Banded {
        assert_eq!(self.n, other.n);
        let mut out = Banded::zeros(self.n, self.kl.max(other.kl), self.ku.max(other.ku));
        for i in 0..self.n {
            let lo = i.saturating_sub(out.kl);
            let hi = (i + out.ku).min(self.n - 1);
            for j in lo..=hi {
                let v = self.get(i, j) + s * other.get(i, j);
                if v != 0.0 {
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Outermost nonzero diagonals actually present, `(lower, upper)`.
    pub fn occupied_bandwidths(&self) -> (usize, usize) {
        let (mut lo, mut up) = (0, 0);
        for i in 0..self.n {
            for j in i.saturating_sub(self.kl)..=(i + self.ku).min(self.n - 1) {
                if self.get(i, j) != 0.0 {
                    if i > j {
                        lo = lo.max(i - j);
                    } else {
                        up = up.max(j - i);
                    }
                }
            }
        }
        (lo, up)
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku + self.kl;
        let w = kl + ku + 1;
        // Row i holds columns i - kl ..= i + ku.
        let mut a = vec![0.0; n * w];
        for i in 0..n {
            for j in i.saturating_sub(self.kl)..=(i + self.ku).min(n.saturating_sub(1)) {
                a[i * w + (j + kl - i)] = self.get(i, j);
            }
        }
        let idx = |i: usize, j: usize| i * w + (j + kl - i);
        let scale = self.data.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        let mut piv = vec![0usize; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = a[idx(k, k)].abs();
            for i in k + 1..=last {
                let v = a[idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || best <= f64::EPSILON * 1e-3 * scale {
                return Err(Error::ShiftCollision);
            }
            piv[k] = p;
            let jmax = (k + ku).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    let (x, y) = (idx(k, j), idx(p, j));
                    a.swap(x, y);
                }
            }
            let d = a[idx(k, k)];
            for i in k + 1..=last {
                let l = a[idx(i, k)] / d;
                a[idx(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..=jmax {
                        a[idx(i, j)] -= l * a[idx(k, j)];
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, ku, a, piv })
    }
}

/// Factors from [`Banded::lu`].
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLu {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * (self.kl + self.ku + 1) + (j + self.kl - i)]
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + self.kl).min(n - 1) {
                    b[i] -= self.at(i, k) * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + self.ku).min(n - 1) {
                s -= self.at(k, j) * b[j];
            }
            b[k] = s / self.at(k, k);
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
