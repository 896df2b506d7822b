//! Zolotarev shift parameters for ADI on two disjoint real intervals.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }
}

/// Shift pairs: `alpha` near the first interval, `beta` near the second.
#[derive(Debug, Clone, PartialEq)]
pub struct Shifts {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// Cross-ratio of the interval endpoints.
    pub gamma: f64,
}

impl Shifts {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

/// `K(m)` with `m = 1 - kp^2`, from the complementary modulus `kp`.
pub fn ellipk_complement(kp: f64) -> f64 {
    let (mut a, mut b) = (1.0f64, kp);
    for _ in 0..64 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    PI / (2.0 * a)
}

/// Jacobi `dn(u | m)` with `m = 1 - kp^2`, for `0 <= u <= K`.
///
/// Past `K/2` the reflection `dn(K - u) = kp / dn(u)` keeps the relative
/// accuracy when `kp` is tiny.
pub fn ellip_dn(u: f64, kp: f64) -> f64 {
    let kk = ellipk_complement(kp);
    if u > 0.5 * kk {
        return kp / dn_agm(kk - u, kp);
    }
    dn_agm(u, kp)
}

/// Descending AGM (Landen) evaluation of `dn`.
fn dn_agm(u: f64, kp: f64) -> f64 {
    let k = ((1.0 - kp) * (1.0 + kp)).sqrt();
    let mut a = vec![1.0f64];
    let mut c = vec![k];
    let mut b = kp;
    while a.len() < 64 && c[c.len() - 1].abs() > f64::EPSILON * a[a.len() - 1] {
        let al = a[a.len() - 1];
        c.push(0.5 * (al - b));
        a.push(0.5 * (al + b));
        b = (al * b).sqrt();
    }
    let n = a.len() - 1;
    if n == 0 {
        return 1.0;
    }
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    let mut prev = phi;
    for i in (1..=n).rev() {
        prev = phi;
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    phi.cos() / (prev - phi).cos()
}

/// Möbius map as a 2x2 matrix `[[p, q], [r, s]]`, `z -> (p z + q)/(r z + s)`.
#[derive(Debug, Clone, Copy)]
struct Mobius([f64; 4]);

impl Mobius {
    /// Sends `z1, z2, z3` to `0, 1, inf`.
    fn to_standard(z: [f64; 3]) -> Self {
        let [z1, z2, z3] = z;
        Mobius([z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)])
    }

    fn inverse(self) -> Self {
        let [p, q, r, s] = self.0;
        Mobius([s, -q, -r, p])
    }

    fn compose(self, o: Mobius) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = o.0;
        Mobius([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }

    fn apply(self, z: f64) -> f64 {
        let [p, q, r, s] = self.0;
        (p * z + q) / (r * z + s)
    }
}

/// Cross-ratio of `[a, b]` and `[c, d]` with `b < c`; at least 1.
pub fn cross_ratio(e: Interval, f: Interval) -> f64 {
    let (a, b, c, d) = (e.lo, e.hi, f.lo, f.hi);
    (c - a) * (d - b) / ((c - b) * (d - a))
}

fn ordered(e: Interval, f: Interval) -> Result<bool> {
    if !(e.lo <= e.hi && f.lo <= f.hi) {
        return Err(Error::InvalidArgument("interval endpoints out of order".into()));
    }
    if e.hi < f.lo {
        Ok(true)
    } else if f.hi < e.lo {
        Ok(false)
    } else {
        Err(Error::IntervalsOverlap)
    }
}

/// Number of ADI steps that reach relative accuracy `eps`:
/// `ceil(log(4 kappa / eps) log(16 gamma) / pi^2)`.
pub fn shift_count(gamma: f64, kappa: f64, eps: f64) -> usize {
    ((4.0 * kappa / eps).ln() * (16.0 * gamma).ln() / (PI * PI)).ceil().max(1.0) as usize
}

/// `n` Zolotarev shift pairs for `A X - X B = C` with `sigma(A)` in `e` and
/// `sigma(B)` in `f`.
///
/// The intervals are mapped to `[-a, -1]` and `[1, a]` by a Möbius map; on
/// the symmetric pair the optimal parameters are `a dn((2j-1)K/(2n))`.
pub fn zolotarev_shifts(e: Interval, f: Interval, n: usize) -> Result<Shifts> {
    let forward = ordered(e, f)?;
    let (lo, hi) = if forward { (e, f) } else { (f, e) };
    let gamma = cross_ratio(lo, hi);
    let alpha = -1.0 + 2.0 * gamma + 2.0 * (gamma * gamma - gamma).max(0.0).sqrt();
    // T: (-alpha, -1, 1) -> (lo.lo, lo.hi, hi.lo); then T(alpha) = hi.hi.
    let t = Mobius::to_standard([lo.lo, lo.hi, hi.lo])
        .inverse()
        .compose(Mobius::to_standard([-alpha, -1.0, 1.0]));
    let kp = 1.0 / alpha;
    let kk = ellipk_complement(kp);
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for j in 1..=n {
        let u = (2 * j - 1) as f64 * kk / (2 * n) as f64;
        let p = alpha * ellip_dn(u, kp);
        let (near_lo, near_hi) = (t.apply(-p), t.apply(p));
        if forward {
            a.push(near_lo);
            b.push(near_hi);
        } else {
            a.push(near_hi);
            b.push(near_lo);
        }
    }
    Ok(Shifts { alpha: a, beta: b, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `F(phi | m)` by composite Simpson.
    fn incomplete_f(phi: f64, m: f64) -> f64 {
        let n = 20000;
        let h = phi / n as f64;
        let g = |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt();
        let mut s = g(0.0) + g(phi);
        for i in 1..n {
            s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    /// `dn(u | m)` by inverting `F` with bisection.
    fn dn_oracle(u: f64, m: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, PI / 2.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if incomplete_f(mid, m) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (1.0 - m * (0.5 * (lo + hi)).sin().powi(2)).sqrt()
    }

    #[test]
    fn elliptic_functions() {
        // K(1/2) and K(0.99) against Simpson.
        for &kp in &[0.5f64.sqrt(), 0.1] {
            let m = 1.0 - kp * kp;
            let k = ellipk_complement(kp);
            assert!((k - incomplete_f(PI / 2.0, m)).abs() < 1e-9, "{kp}");
            for &frac in &[0.1, 0.5, 0.9] {
                let d = ellip_dn(frac * k, kp);
                assert!((d - dn_oracle(frac * k, m)).abs() < 1e-8);
            }
            assert!((ellip_dn(0.0, kp) - 1.0).abs() < 1e-15);
            assert!((ellip_dn(k, kp) - kp).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_intervals() {
        let e = Interval::new(-10.0, -1.0);
        let f = Interval::new(1.0, 10.0);
        let gamma = cross_ratio(e, f);
        assert!((gamma - 121.0 / 40.0).abs() < 1e-14);
        let n = shift_count(gamma, 1.0, 1e-12);
        assert_eq!(n, ((4e12f64).ln() * (16.0 * 3.025f64).ln() / (PI * PI)).ceil() as usize);
        let s = zolotarev_shifts(e, f, n).unwrap();
        let m = 1.0 - 0.01;
        let kk = incomplete_f(PI / 2.0, m);
        for j in 0..n {
            let want = 10.0 * dn_oracle((2 * j + 1) as f64 * kk / (2 * n) as f64, m);
            assert!((s.beta[j] - want).abs() < 1e-7, "{j}");
            assert!((s.alpha[j] + want).abs() < 1e-7);
        }
    }

    #[test]
    fn count_monotone() {
        let f = Interval::new(0.0, 100.0);
        let mut last = 0;
        for gap in [10.0, 1.0, 0.1, 0.01] {
            let g = cross_ratio(Interval::new(-1e4, -gap), f);
            let n = shift_count(g, 10.0, 1e-12);
            assert!(n >= last);
            last = n;
            let half = shift_count(g, 10.0, 5e-13);
            let bound = ((2f64).ln() * (16.0 * g).ln() / (PI * PI)).ceil() as usize;
            assert!(half - n <= bound);
        }
    }

    #[test]
    fn overlap_rejected() {
        let r = zolotarev_shifts(Interval::new(-1.0, 1.0), Interval::new(0.0, 2.0), 4);
        assert_eq!(r.unwrap_err(), Error::IntervalsOverlap);
    }

    #[test]
    fn shifts_reduce_rational_function() {
        // The rational function with these zeros and poles is small on e
        // and large on f.
        let e = Interval::new(-1e6, -0.1);
        let f = Interval::new(0.0, 1e4);
        let n = 30;
        let s = zolotarev_shifts(e, f, n).unwrap();
        let r = |z: f64| (0..n).map(|j| (z - s.alpha[j]) / (z - s.beta[j])).product::<f64>().abs();
        let on_e = (0..200)
            .map(|i| -(10f64).powf(-1.0 + 7.0 * i as f64 / 199.0))
            .map(r)
            .fold(0.0, f64::max);
        let on_f = (0..200)
            .map(|i| 1e4 * i as f64 / 199.0)
            .map(r)
            .fold(f64::INFINITY, f64::min);
        assert!(on_e / on_f < 1e-8, "{on_e} {on_f}");
    }
}
