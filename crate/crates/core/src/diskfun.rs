//! Low-rank approximants on the disk and their adaptive construction.
//!
//! Construction runs in two phases. Phase 1 samples the doubled function on
//! coarse tensor grids and runs structure-preserving elimination until the
//! residual falls below tolerance within a rank budget, doubling the grid
//! otherwise. Phase 2 keeps the pivot locations, samples the function only
//! along the pivot diameters and circles, refines those 1D samples until
//! their coefficients decay, and repeats the elimination arithmetic on the
//! skeleton alone.

use std::f64::consts::PI;

use crate::bmc::{wrap_angle, BmcSample};
use crate::error::{Error, Result};
use crate::function::DiskFunction;
use crate::ge::{ge_on_grid, GridGeOptions, GridTerm, DEFAULT_ALPHA};
use crate::series::{chop, cheb_points, cheb_transform, fourier_points, ChebSeries, FourierSeries, Parity};

/// One rank-1 component `weight * radial(rho) * angular(theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub weight: f64,
    pub radial: ChebSeries,
    pub angular: FourierSeries,
    /// `Even`: even radial slice and pi-periodic angular slice.
    /// `Odd`: odd radial slice and pi-antiperiodic angular slice.
    pub parity: Parity,
    /// The term that carries the value at the origin (angular slice `1`).
    pub constant_mode: bool,
    /// Pivot location `(theta*, rho*)` that produced the term.
    pub pivot: (f64, f64),
}

impl Term {
    pub fn eval(&self, theta: f64, rho: f64) -> f64 {
        self.weight * self.radial.eval(rho) * self.angular.eval_real(theta)
    }
}

/// A rank-K approximant of a function on the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskFun {
    terms: Vec<Term>,
    vscale: f64,
    grid: (usize, usize),
}

/// Settings for [`construct`].
#[derive(Debug, Clone, Copy)]
pub struct ConstructOptions {
    /// Relative tolerance; the effective tolerance grows mildly with the grid.
    pub tol: f64,
    /// Coupling parameter for the 2x2 pivots.
    pub alpha: f64,
    /// Largest rank accepted before giving up.
    pub max_rank: usize,
    /// Lower bound on the scale that tolerances are relative to.
    pub vscale_floor: f64,
    /// Largest 1D slice length tried during refinement.
    pub max_length: usize,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        Self {
            tol: f64::EPSILON,
            alpha: DEFAULT_ALPHA,
            max_rank: 513,
            vscale_floor: 0.0,
            max_length: 1 << 16,
        }
    }
}

impl ConstructOptions {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_vscale_floor(mut self, floor: f64) -> Self {
        self.vscale_floor = floor;
        self
    }
}

const START_M: usize = 17;
const START_N: usize = 16;
const MAX_PHASE1_N: usize = 2048;

/// Tolerance actually used on a grid with `size` points per direction.
///
/// Sample noise in transformed coefficients grows slowly with the grid, so
/// a fixed machine-epsilon threshold would chase rounding.
pub fn effective_tol(tol: f64, size: usize) -> f64 {
    tol.max(f64::EPSILON * (size as f64).powf(2.0 / 3.0))
}

fn cheb_resolved(values: &[f64], threshold: f64) -> bool {
    let s = match cheb_transform(values) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let len = s.len();
    let mags: Vec<f64> = s.coeffs().iter().map(|a| a.abs()).collect();
    let keep = chop(&mags, threshold, 1.0);
    keep + (len / 8).max(3) <= len
}

fn fourier_resolved(values: &[f64], threshold: f64) -> bool {
    let s = match FourierSeries::from_values(values) {
        Ok(s) => s,
        Err(_) => return false,
    };
    let n = s.n();
    s.kmax(threshold) + (n / 16).max(2) <= n / 2
}

fn fine_index(i: usize, coarse: usize, fine: usize) -> usize {
    i * (fine - 1) / (coarse - 1)
}

struct Skeleton {
    /// Pivot angles in `[0, pi)`, with phase-1 column indices.
    thetas: Vec<(f64, usize)>,
    /// Pivot radii, with phase-1 row indices.
    rhos: Vec<(f64, usize)>,
}

/// Build a low-rank approximant of `f` with default settings.
pub fn construct_default<F: DiskFunction + ?Sized>(f: &F) -> Result<DiskFun> {
    construct(f, &ConstructOptions::default())
}

/// Build a low-rank approximant of `f` by structure-preserving elimination.
pub fn construct<F: DiskFunction + ?Sized>(f: &F, opts: &ConstructOptions) -> Result<DiskFun> {
    let (mut m, mut n) = (START_M, START_N);
    loop {
        let sample = BmcSample::from_disk(f, m, n)?;
        let vscale = sample.vscale().max(opts.vscale_floor);
        if vscale == 0.0 {
            return Ok(DiskFun::zero());
        }
        let tol = effective_tol(opts.tol, n.max(m));
        let budget = (n / 4).min(opts.max_rank);
        let ge = ge_on_grid(
            &sample,
            &GridGeOptions {
                tol,
                scale: Some(vscale),
                alpha: opts.alpha,
                max_terms: budget,
            },
        )?;
        if ge.converged {
            if ge.terms.is_empty() {
                let mut z = DiskFun::zero();
                z.vscale = sample.vscale();
                z.grid = (m, n);
                return Ok(z);
            }
            let fun = resolve_slices(f, &ge.terms, m, n, vscale, tol, opts)?;
            if passes_spot_check(f, &fun, vscale, tol) {
                let mut fun = fun;
                fun.vscale = fun.vscale.max(sample.vscale());
                return Ok(fun);
            }
        }
        if n >= MAX_PHASE1_N {
            return Err(Error::RankOverflow);
        }
        m = 2 * (m - 1) + 1;
        n *= 2;
    }
}

fn passes_spot_check<F: DiskFunction + ?Sized>(f: &F, g: &DiskFun, vscale: f64, tol: f64) -> bool {
    // Deterministic scattered points, from near the origin to the rim. The
    // origin itself is the constant mode's value by construction.
    let count = 24;
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut worst: f64 = 0.0;
    for k in 0..count {
        let rho = if k == 0 { 1e-3 } else { ((k as f64 - 0.37) / (count as f64 - 1.0)).sqrt().min(1.0) };
        let theta = wrap_angle(0.123 + golden * k as f64);
        let v = f.eval_polar(theta, rho);
        if !v.is_finite() {
            return false;
        }
        worst = worst.max((v - g.eval_doubled(theta, rho)).abs());
    }
    worst <= (1e2 * tol).max(1e-13) * vscale
}

fn skeleton(terms: &[GridTerm]) -> Skeleton {
    let mut thetas: Vec<(f64, usize)> = Vec::new();
    let mut rhos: Vec<(f64, usize)> = Vec::new();
    for t in terms {
        if !thetas.iter().any(|&(_, j)| j == t.theta_index) {
            thetas.push((t.theta, t.theta_index));
        }
        if !t.constant_mode && !rhos.iter().any(|&(_, i)| i == t.rho_index) {
            rhos.push((t.rho, t.rho_index));
        }
    }
    Skeleton { thetas, rhos }
}

/// Diameters `f~(theta*, rho)` over `cheb_points(m)` for each pivot angle.
fn sample_diameters<F: DiskFunction + ?Sized>(f: &F, sk: &Skeleton, m: usize) -> Result<Vec<Vec<f64>>> {
    let rhos = cheb_points(m);
    let start = m / 2;
    let mut angles = Vec::with_capacity(2 * sk.thetas.len());
    for &(t, _) in &sk.thetas {
        angles.push(t);
        angles.push(wrap_angle(t - PI));
    }
    let vals = f.eval_grid(&angles, &rhos[start..]);
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let w = angles.len();
    let out = (0..sk.thetas.len())
        .map(|q| {
            (0..m)
                .map(|i| {
                    if i >= start {
                        vals[(i - start) * w + 2 * q]
                    } else {
                        vals[(m - 1 - i - start) * w + 2 * q + 1]
                    }
                })
                .collect()
        })
        .collect();
    Ok(out)
}

/// Circles `f(theta, rho*)` over `fourier_points(n)` for each pivot radius.
fn sample_circles<F: DiskFunction + ?Sized>(f: &F, sk: &Skeleton, n: usize) -> Result<Vec<Vec<f64>>> {
    let thetas = fourier_points(n);
    let radii: Vec<f64> = sk.rhos.iter().map(|&(r, _)| r).collect();
    let vals = f.eval_grid(&thetas, &radii);
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(vals.chunks(n).map(|c| c.to_vec()).collect())
}

fn resolve_slices<F: DiskFunction + ?Sized>(
    f: &F,
    terms: &[GridTerm],
    m1: usize,
    n1: usize,
    vscale: f64,
    tol: f64,
    opts: &ConstructOptions,
) -> Result<DiskFun> {
    let sk = skeleton(terms);
    let threshold = tol * vscale;

    let mut m2 = m1;
    let diameters = loop {
        let d = sample_diameters(f, &sk, m2)?;
        if d.iter().all(|c| cheb_resolved(c, threshold)) {
            break d;
        }
        if m2 > opts.max_length {
            return Err(Error::Unresolved { m: m2, n: n1 });
        }
        m2 = 2 * (m2 - 1) + 1;
    };
    let mut n2 = n1;
    let circles = loop {
        let c = sample_circles(f, &sk, n2)?;
        if c.iter().all(|r| fourier_resolved(r, threshold)) {
            break c;
        }
        if n2 >= opts.max_length {
            return Err(Error::Unresolved { m: m2, n: n2 });
        }
        n2 *= 2;
    };

    let slice_max = diameters
        .iter()
        .chain(circles.iter())
        .flat_map(|v| v.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()));

    let mut out = Vec::with_capacity(terms.len());
    for parity in [Parity::Even, Parity::Odd] {
        let seq: Vec<&GridTerm> = terms.iter().filter(|t| t.parity == parity).collect();
        if seq.is_empty() {
            continue;
        }
        let sign = if parity == Parity::Even { 1.0 } else { -1.0 };
        let col_of = |t: &GridTerm| -> Vec<f64> {
            let q = sk.thetas.iter().position(|&(_, j)| j == t.theta_index).expect("pivot angle");
            let d = &diameters[q];
            (0..m2).map(|i| d[i] + sign * d[m2 - 1 - i]).collect()
        };
        let row_of = |t: &GridTerm| -> Vec<f64> {
            let p = sk.rhos.iter().position(|&(_, i)| i == t.rho_index).expect("pivot radius");
            let c = &circles[p];
            let h = n2 / 2;
            (0..n2).map(|j| c[j] + sign * c[(j + h) % n2]).collect()
        };
        let mut cols: Vec<Vec<f64>> = seq.iter().map(|t| col_of(t)).collect();
        let mut rows: Vec<Option<Vec<f64>>> = seq
            .iter()
            .map(|t| if t.constant_mode { None } else { Some(row_of(t)) })
            .collect();
        let ridx: Vec<usize> = seq.iter().map(|t| fine_index(t.rho_index, m1, m2)).collect();
        let tidx: Vec<usize> = seq.iter().map(|t| t.theta_index * (n2 / n1)).collect();

        let origin = m2 / 2;
        for s in 0..seq.len() {
            if parity == Parity::Even && !seq[s].constant_mode {
                // Past the constant mode the value at the origin is noise.
                cols[s][origin] = 0.0;
            }
            let (col_s, row_s) = (cols[s].clone(), rows[s].clone());
            let weight;
            match &row_s {
                None => {
                    // Constant mode: e -= e(theta0, rho) * 1.
                    for q in s + 1..seq.len() {
                        for (a, b) in cols[q].iter_mut().zip(&col_s) {
                            *a -= b;
                        }
                        if let Some(r) = rows[q].as_mut() {
                            let v = col_s[ridx[q]];
                            r.iter_mut().for_each(|x| *x -= v);
                        }
                    }
                    out.push(make_term(
                        1.0,
                        col_s.iter().map(|v| 0.5 * v).collect(),
                        None,
                        parity,
                        (seq[s].theta, 0.0),
                        vscale,
                        tol,
                    )?);
                    continue;
                }
                Some(r) => {
                    let piv = col_s[ridx[s]];
                    if !piv.is_finite() {
                        return Err(Error::ZeroPivot);
                    }
                    let col_max = col_s.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                    if piv.abs() <= f64::EPSILON * col_max || piv == 0.0 {
                        // A pivot at rounding level: the term carries nothing.
                        continue;
                    }
                    weight = 1.0 / piv;
                    for q in s + 1..seq.len() {
                        let fc = r[tidx[q]] * weight;
                        for (a, b) in cols[q].iter_mut().zip(&col_s) {
                            *a -= fc * b;
                        }
                        let fr = col_s[ridx[q]] * weight;
                        if let Some(rq) = rows[q].as_mut() {
                            for (a, b) in rq.iter_mut().zip(r) {
                                *a -= fr * b;
                            }
                        }
                    }
                }
            }
            out.push(make_term(
                0.5 * weight,
                col_s,
                row_s,
                parity,
                (seq[s].theta, seq[s].rho),
                vscale,
                tol,
            )?);
        }
    }
    // Pivots picked at rounding level leave terms that contribute nothing.
    let negligible = |t: &Term| {
        !t.constant_mode && t.weight.abs() * t.radial.abs_sum() * t.angular.abs_sum() <= threshold
    };
    if out.iter().any(|t| !negligible(t)) {
        out.retain(|t| !negligible(t));
    }
    // Keep the constant-mode term first.
    out.sort_by_key(|t| !t.constant_mode);
    Ok(DiskFun {
        terms: out,
        vscale: slice_max,
        grid: (m1, n1),
    })
}

fn make_term(
    weight: f64,
    col: Vec<f64>,
    row: Option<Vec<f64>>,
    parity: Parity,
    pivot: (f64, f64),
    vscale: f64,
    tol: f64,
) -> Result<Term> {
    let col_max = col.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let radial = ChebSeries::with_parity(cheb_transform(&col)?.coeffs().to_vec(), parity);
    let constant_mode = row.is_none();
    let (angular, row_max) = match row {
        None => (FourierSeries::constant(1.0), 1.0),
        Some(r) => {
            let rm = r.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let s = FourierSeries::from_values(&r)?;
            (FourierSeries::with_parity(s.coeffs().to_vec(), parity)?, rm)
        }
    };
    let target = tol * vscale / weight.abs();
    let radial = if row_max > 0.0 { radial.chopped(target / row_max, 1.0) } else { radial };
    let angular = if col_max > 0.0 && row_max > 0.0 && !angular.is_constant() {
        angular.chopped(target / col_max, 1.0)
    } else {
        angular
    };
    Ok(Term {
        weight,
        radial,
        angular,
        parity,
        constant_mode,
        pivot,
    })
}

impl DiskFun {
    /// The zero function, stored as a single zero term.
    pub fn zero() -> Self {
        DiskFun {
            terms: vec![Term {
                weight: 1.0,
                radial: ChebSeries::constant(0.0),
                angular: FourierSeries::constant(1.0),
                parity: Parity::Even,
                constant_mode: true,
                pivot: (0.0, 0.0),
            }],
            vscale: 0.0,
            grid: (START_M, START_N),
        }
    }

    /// Approximant from explicit terms; `vscale` is taken from samples.
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut f = DiskFun {
            terms,
            vscale: 0.0,
            grid: (0, 0),
        };
        if f.terms.is_empty() {
            return DiskFun::zero();
        }
        let (m, n) = f.lengths();
        let m = (2 * m + 1).max(17);
        let n = (2 * n).max(16);
        let grid = f.eval_grid(&fourier_points(n), &cheb_points(m));
        f.vscale = grid.iter().fold(0.0, |a, v| a.max(v.abs()));
        f
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of terms.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// Approximate maximum of `|f|`.
    pub fn vscale(&self) -> f64 {
        self.vscale
    }

    /// Size of the phase-1 grid that fixed the rank.
    pub fn grid(&self) -> (usize, usize) {
        self.grid
    }

    /// Longest radial slice length and largest angular mode count.
    pub fn lengths(&self) -> (usize, usize) {
        let m = self.terms.iter().map(|t| t.radial.len()).max().unwrap_or(1);
        let n = self.terms.iter().map(|t| t.angular.n()).max().unwrap_or(2);
        (m, n)
    }

    /// Whether every term carries a parity tag.
    pub fn is_structured(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.parity != Parity::None && t.radial.parity() == t.parity && t.angular.parity() == t.parity)
    }

    /// Value of the doubled function at any `(theta, rho)` with `|rho| <= 1`.
    pub fn eval_doubled(&self, theta: f64, rho: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(theta, rho)).sum()
    }

    /// Value at polar coordinates; `rho` must lie in `[0, 1]`.
    pub fn feval(&self, theta: f64, rho: f64) -> Result<f64> {
        if !(0.0..=1.0 + 10.0 * f64::EPSILON).contains(&rho) {
            return Err(Error::OutsideDomain);
        }
        Ok(self.eval_doubled(theta, rho.min(1.0)))
    }

    /// Value at Cartesian coordinates, with `theta = atan2(y, x)`.
    pub fn feval_xy(&self, x: f64, y: f64) -> Result<f64> {
        let rho = x.hypot(y);
        let theta = if rho == 0.0 { 0.0 } else { y.atan2(x) };
        self.feval(theta, rho)
    }

    /// Copy with every weight multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        if s == 0.0 {
            return DiskFun::zero();
        }
        DiskFun {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    weight: t.weight * s,
                    ..t.clone()
                })
                .collect(),
            vscale: self.vscale * s.abs(),
            grid: self.grid,
        }
    }
}

impl DiskFunction for DiskFun {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        self.eval_doubled(theta, rho)
    }

    fn eval_grid(&self, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
        eval_terms_grid(&self.terms, thetas, rhos)
    }
}

/// Tensor-grid values of a term sum, row-major with one row per `rho`.
pub(crate) fn eval_terms_grid(terms: &[Term], thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
    let n = thetas.len();
    let mut out = vec![0.0; n * rhos.len()];
    let mut ang = vec![0.0; n];
    for t in terms {
        for (a, &th) in ang.iter_mut().zip(thetas) {
            *a = t.weight * t.angular.eval_real(th);
        }
        for (i, &r) in rhos.iter().enumerate() {
            let c = t.radial.eval(r);
            if c == 0.0 {
                continue;
            }
            for (o, a) in out[i * n..(i + 1) * n].iter_mut().zip(&ang) {
                *o += c * a;
            }
        }
    }
    out
}

/// A plain sum of terms used as a sampling source for recompression.
pub(crate) struct TermSum {
    pub terms: Vec<Term>,
}

impl DiskFunction for TermSum {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(theta, rho)).sum()
    }

    fn eval_grid(&self, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
        eval_terms_grid(&self.terms, thetas, rhos)
    }
}
