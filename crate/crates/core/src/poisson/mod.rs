//! Poisson's equation on the unit disk.
//!
//! `lap u = f` with `u = g` on the boundary is multiplied by `rho^2` and
//! written as `u = (1 - rho^2) v + h`, with `h` the harmonic extension of
//! `g`. In coefficients this gives the Sylvester equation
//! `L Y - S1M Y K^2 = S1M_{rho^2} F`, solved by factored ADI when the
//! right-hand side has low rank and mode by mode otherwise.

pub mod adi;
pub mod banded;
pub mod ops;
pub mod shifts;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use self::adi::{compress, fadi_solve, spectrum, sylvester_residual};
use self::banded::Banded;
use self::ops::{build_l, build_s1m, build_s1mr2, mul_one_minus_rho2};
use self::shifts::{cross_ratio, shift_count, zolotarev_shifts, Interval};
use crate::diskfun::{construct, effective_tol, eval_terms_grid, ConstructOptions, DiskFun, Term};
use crate::error::{Error, Result};
use crate::function::DiskFunction;
use crate::ops::{coeffs2, origin_correction, DenseCoeffs};
use crate::series::{ChebSeries, FourierSeries, Parity};

/// Target accuracy of the ADI iteration.
const ADI_EPS: f64 = 1e-15;
/// Largest accepted relative residual before the direct solver takes over.
const ADI_MAX_RESIDUAL: f64 = 1e-8;

/// How a Poisson problem was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Right-hand side is zero; only the boundary data contributes.
    Trivial,
    Adi,
    Direct,
}

/// Diagnostics from [`poisson_with_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonReport {
    pub method: SolveMethod,
    /// ADI steps taken.
    pub iterations: usize,
    /// Number of shifts from the a priori bound.
    pub shift_bound: usize,
    /// Relative residual of the discrete equation (zero for direct solves).
    pub residual: f64,
    /// Rank of the right-hand side.
    pub rhs_rank: usize,
    /// Radial size actually used (odd sizes are rounded up).
    pub m: usize,
}

/// Operators for one radial size.
#[derive(Debug)]
pub struct Operators {
    pub l: Banded,
    pub s1m: Banded,
    pub s1mr2: Banded,
}

/// Operators for size `m`, cached.
pub fn operators(m: usize) -> Result<Arc<Operators>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Operators>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(o) = cache.lock().expect("cache poisoned").get(&m) {
        return Ok(o.clone());
    }
    let o = Arc::new(Operators {
        l: build_l(m)?.mat,
        s1m: build_s1m(m)?.mat,
        s1mr2: build_s1mr2(m)?.mat,
    });
    cache.lock().expect("cache poisoned").insert(m, o.clone());
    Ok(o)
}

/// Right-hand side `S1M_{rho^2} F = U V^*` in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct Assembled {
    /// `m x r`, U-basis columns.
    pub u: DMatrix<f64>,
    /// `n x r`.
    pub v: DMatrix<Complex64>,
    /// Diagonal of `B = -D_F^2`, i.e. `k^2`.
    pub b: Vec<f64>,
}

impl Assembled {
    pub fn rank(&self) -> usize {
        self.u.ncols()
    }
}

/// Factor the right-hand side of the discrete equation for `f`.
pub fn assemble(f: &DiskFun, m: usize, n: usize) -> Result<Assembled> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::EvenLengthRequired(n));
    }
    let op = operators(m)?;
    let (mf, nf) = f.lengths();
    if f.rank() > 0 && (mf + 2 > m || nf > n) {
        return Err(Error::Unresolved { m, n });
    }
    let c = coeffs2(f);
    let r = c.rank();
    let mut u = DMatrix::zeros(m, r);
    let mut v = DMatrix::zeros(n, r);
    for j in 0..r {
        let mut a = c.a[j].clone();
        a.resize(m, 0.0);
        u.set_column(j, &nalgebra::DVector::from_vec(op.s1mr2.mul_vec(&a)));
        let b = FourierSeries::new(c.b[j].clone())?.resized(n)?;
        for (k, bk) in b.coeffs().iter().enumerate() {
            v[(k, j)] = bk.conj() * c.d[j];
        }
    }
    let h = (n / 2) as i64;
    let b = (-h..h).map(|k| (k * k) as f64).collect();
    Ok(Assembled { u, v, b })
}

/// Solve `lap u = f` on the unit disk with `u = g` on the boundary
/// (`g = 0` when `None`), using `m` Chebyshev and `n` Fourier modes.
pub fn poisson(f: &DiskFun, g: Option<&FourierSeries>, m: usize, n: usize) -> Result<DiskFun> {
    poisson_with_report(f, g, m, n).map(|(u, _)| u)
}

/// [`poisson`] together with solver diagnostics.
pub fn poisson_with_report(
    f: &DiskFun,
    g: Option<&FourierSeries>,
    m: usize,
    n: usize,
) -> Result<(DiskFun, PoissonReport)> {
    let m = m + m % 2;
    if let Some(g) = g {
        if g.n() > n {
            return Err(Error::Unresolved { m, n });
        }
    }
    let rhs = assemble(f, m, n)?;
    let harmonic = g.filter(|g| g.abs_sum() > 0.0).cloned();
    let mut report = PoissonReport {
        method: SolveMethod::Trivial,
        iterations: 0,
        shift_bound: 0,
        residual: 0.0,
        rhs_rank: rhs.rank(),
        m,
    };
    let body = if rhs.rank() == 0 || rhs.u.iter().all(|x| *x == 0.0) {
        Body::Terms(Vec::new())
    } else if rhs.rank() > n / 8 {
        report.method = SolveMethod::Direct;
        direct_solve(&rhs, m)?
    } else {
        match adi_terms(&rhs, m, &mut report) {
            Ok(Some(terms)) => {
                report.method = SolveMethod::Adi;
                Body::Terms(terms)
            }
            Ok(None) | Err(Error::ShiftCollision) | Err(Error::IntervalsOverlap) => {
                report.method = SolveMethod::Direct;
                direct_solve(&rhs, m)?
            }
            Err(e) => return Err(e),
        }
    };
    let sampler = Solution { body, harmonic };
    if sampler.is_zero() {
        return Ok((DiskFun::zero(), report));
    }
    // Rounding in a size-m solve sits near the effective tolerance for m.
    let opts = ConstructOptions::default().with_tol(effective_tol(f64::EPSILON, m.max(n)));
    Ok((construct(&sampler, &opts)?, report))
}

/// Solve by fADI; `None` when the residual check fails.
fn adi_terms(rhs: &Assembled, m: usize, report: &mut PoissonReport) -> Result<Option<Vec<Term>>> {
    let op = operators(m)?;
    let n = rhs.b.len();
    let kmax = (0..n)
        .filter(|&k| rhs.v.row(k).iter().any(|z| z.norm() > 0.0))
        .map(|k| rhs.b[k])
        .fold(0.0, f64::max);
    let sp = spectrum(m)?;
    let e = sp.interval();
    let fi = Interval::new(0.0, kmax.max(1.0));
    let count = shift_count(cross_ratio(e, fi), sp.kappa, ADI_EPS);
    let shifts = zolotarev_shifts(e, fi, count)?;
    let sol = fadi_solve(&op.l, &op.s1m, &rhs.b, &rhs.u, &rhs.v, &shifts, ADI_EPS)?;
    let sol = compress(&sol, f64::EPSILON);
    let residual = sylvester_residual(&op.l, &op.s1m, &rhs.b, &rhs.u, &rhs.v, &sol);
    report.iterations = sol.iterations;
    report.shift_bound = count;
    report.residual = residual;
    if !(residual <= ADI_MAX_RESIDUAL) {
        return Ok(None);
    }
    // The operator is diagonal in k: modes without forcing stay zero.
    let active: Vec<bool> = (0..n).map(|k| rhs.v.row(k).iter().any(|z| z.norm() > 0.0)).collect();
    let mut terms = Vec::with_capacity(sol.rank());
    for j in 0..sol.rank() {
        let z: Vec<f64> = sol.z.column(j).iter().copied().collect();
        let radial = ChebSeries::new(mul_one_minus_rho2(&z));
        let scale = radial.coeffs().iter().fold(0.0f64, |s, a| s.max(a.abs()));
        let g: Vec<Complex64> = sol
            .g
            .column(j)
            .iter()
            .zip(&active)
            .map(|(z, &a)| if a { z.conj() } else { Complex64::new(0.0, 0.0) })
            .collect();
        let angular = FourierSeries::new(g)?;
        terms.push(plain_term(sol.d[j], radial.chopped(scale, f64::EPSILON), angular));
    }
    // Only the k = 0 mode may be nonzero at the origin; the rest is noise.
    let profile = ChebSeries::new(vec![0.5, 0.0, -0.5]);
    if let Some(c) = origin_correction(&terms, profile, Parity::None)? {
        terms.push(c);
    }
    Ok(Some(terms))
}

fn plain_term(weight: f64, radial: ChebSeries, angular: FourierSeries) -> Term {
    Term {
        weight,
        radial,
        angular,
        parity: Parity::None,
        constant_mode: false,
        pivot: (0.0, 0.0),
    }
}

/// Solve `(L - k^2 S1M) y_k = (U V^*)_k` for every active mode.
fn direct_solve(rhs: &Assembled, m: usize) -> Result<Body> {
    let op = operators(m)?;
    let n = rhs.b.len();
    let mut data = vec![Complex64::new(0.0, 0.0); (m + 2) * n];
    for k in 0..n {
        if rhs.v.row(k).iter().all(|z| z.norm() == 0.0) {
            continue;
        }
        let mut re = vec![0.0; m];
        let mut im = vec![0.0; m];
        for j in 0..rhs.rank() {
            let w = rhs.v[(k, j)].conj();
            for i in 0..m {
                re[i] += rhs.u[(i, j)] * w.re;
                im[i] += rhs.u[(i, j)] * w.im;
            }
        }
        let lu = op.l.axpy(-rhs.b[k], &op.s1m).lu()?;
        lu.solve_in_place(&mut re);
        lu.solve_in_place(&mut im);
        let (mut re, mut im) = (mul_one_minus_rho2(&re), mul_one_minus_rho2(&im));
        if rhs.b[k] != 0.0 {
            // Only the k = 0 mode may be nonzero at the origin: subtract
            // the value there times 1 - rho^2, which keeps the boundary.
            for c in [&mut re, &mut im] {
                let v0 = ChebSeries::new(c.clone()).eval(0.0);
                c[0] -= 0.5 * v0;
                c[2] += 0.5 * v0;
            }
        }
        for l in 0..m + 2 {
            data[l * n + k] = Complex64::new(re[l], im[l]);
        }
    }
    Ok(Body::Dense(DenseCoeffs { m: m + 2, n, data }))
}

enum Body {
    Terms(Vec<Term>),
    Dense(DenseCoeffs),
}

/// Sampling source for the solution: the homogeneous part plus the
/// harmonic extension `sum_k g_k rho^{|k|} e^{ik theta}`.
struct Solution {
    body: Body,
    harmonic: Option<FourierSeries>,
}

impl Solution {
    fn is_zero(&self) -> bool {
        let empty = match &self.body {
            Body::Terms(t) => t.is_empty(),
            Body::Dense(d) => d.data.iter().all(|z| z.norm() == 0.0),
        };
        empty && self.harmonic.is_none()
    }
}

fn harmonic_grid(g: &FourierSeries, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
    let h = (g.n() / 2) as i64;
    let mut out = vec![0.0; thetas.len() * rhos.len()];
    for k in -h..h {
        let c = g.coeff(k);
        if c.norm() == 0.0 {
            continue;
        }
        let ang: Vec<Complex64> = thetas.iter().map(|&t| c * Complex64::from_polar(1.0, k as f64 * t)).collect();
        for (i, &r) in rhos.iter().enumerate() {
            let p = r.powi(k.unsigned_abs() as i32);
            for (o, a) in out[i * thetas.len()..(i + 1) * thetas.len()].iter_mut().zip(&ang) {
                *o += p * a.re;
            }
        }
    }
    out
}

impl DiskFunction for Solution {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        self.eval_grid(&[theta], &[rho])[0]
    }

    fn eval_grid(&self, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
        let mut out = match &self.body {
            Body::Terms(t) => eval_terms_grid(t, thetas, rhos),
            Body::Dense(d) => d.eval_grid(thetas, rhos),
        };
        if let Some(g) = &self.harmonic {
            for (o, h) in out.iter_mut().zip(harmonic_grid(g, thetas, rhos)) {
                *o += h;
            }
        }
        out
    }
}
