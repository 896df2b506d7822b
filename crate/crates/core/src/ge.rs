//! Gaussian elimination with 2x2 centrosymmetric pivots on sampled grids.
//!
//! At a pivot `(theta*, rho*)` with `theta*` in `[0, pi)` and `rho* >= 0`,
//! the four reflected values of a BMC function form
//! `M = [[a, b], [b, a]]` with `a = f~(theta* - pi, rho*)` and
//! `b = f~(theta*, rho*)`. Its eigenvalues `a + b` and `a - b` are the pivot
//! values of the even and odd parts, so one elimination step with `M`
//! performs one rank-1 step on each part whose eigenvalue survives the
//! coupling test.

use crate::bmc::BmcSample;
use crate::error::{Error, Result};
use crate::series::Parity;

/// Default coupling parameter.
pub const DEFAULT_ALPHA: f64 = 0.01;

/// The 2x2 pivot `[[a, b], [b, a]]` at a grid location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PivotMatrix {
    /// `f~(theta* - pi, rho*)`
    pub a: f64,
    /// `f~(theta*, rho*)`
    pub b: f64,
    pub theta: f64,
    pub rho: f64,
    pub theta_index: usize,
    pub rho_index: usize,
}

impl PivotMatrix {
    pub fn sigma1(&self) -> f64 {
        (self.a + self.b).abs().max((self.a - self.b).abs())
    }

    pub fn sigma2(&self) -> f64 {
        (self.a + self.b).abs().min((self.a - self.b).abs())
    }
}

/// Eigenvalue reciprocals of the alpha-pseudoinverse of `M`.
///
/// Returns `(1/(a+b), 0)` when `|a-b| < alpha |a+b|`, `(0, 1/(a-b))` when
/// `|a+b| < alpha |a-b|`, and both reciprocals otherwise.
pub fn pseudo_inverse_2x2(p: &PivotMatrix, alpha: f64) -> Result<(f64, f64)> {
    let s = p.a + p.b;
    let d = p.a - p.b;
    if p.sigma1() == 0.0 || !p.sigma1().is_finite() {
        return Err(Error::ZeroPivot);
    }
    if d.abs() < alpha * s.abs() {
        Ok((1.0 / s, 0.0))
    } else if s.abs() < alpha * d.abs() {
        Ok((0.0, 1.0 / d))
    } else {
        Ok((1.0 / s, 1.0 / d))
    }
}

/// Index of the first `rho >= 0` row of a symmetric grid.
fn first_nonneg_row(sample: &BmcSample) -> usize {
    sample.m() / 2
}

/// Grid location maximizing `sigma1(M)` over `theta` in `[0, pi)` and
/// `rho > 0`; ties go to the smallest `rho`, then the smallest `theta`.
///
/// The origin row is left to the constant-mode step: what remains there
/// is the angular variation of `f(., 0)`, which is sampling noise.
/// Returns `None` when the residual vanishes identically.
pub fn find_pivot(residual: &BmcSample) -> Result<Option<PivotMatrix>> {
    residual.check_symmetric_grid()?;
    let m = residual.m();
    let n = residual.n();
    let h = n / 2;
    let mut best: Option<PivotMatrix> = None;
    let mut best_s = 0.0;
    for i in first_nonneg_row(residual)..m {
        if residual.rhos()[i] == 0.0 {
            continue;
        }
        for j in h..n {
            let (a, b) = (residual.get(i, j - h), residual.get(i, j));
            let p = PivotMatrix {
                a,
                b,
                theta: residual.thetas()[j],
                rho: residual.rhos()[i],
                theta_index: j,
                rho_index: i,
            };
            let s = p.sigma1();
            if s > best_s {
                best_s = s;
                best = Some(p);
            }
        }
    }
    Ok(best)
}

/// A rank-1 term sampled on a grid: `weight * column(rho) * row(theta)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTerm {
    pub weight: f64,
    pub column: Vec<f64>,
    pub row: Vec<f64>,
    pub parity: Parity,
    /// Pivot location; `rho` is zero for the constant-mode term.
    pub theta: f64,
    pub rho: f64,
    pub theta_index: usize,
    pub rho_index: usize,
    pub constant_mode: bool,
}

fn subtract_term(residual: &mut BmcSample, t: &GridTerm) {
    let n = residual.n();
    let vals = residual.values_mut();
    for (i, &c) in t.column.iter().enumerate() {
        let wc = t.weight * c;
        if wc == 0.0 {
            continue;
        }
        for (v, &r) in vals[i * n..(i + 1) * n].iter_mut().zip(&t.row) {
            *v -= wc * r;
        }
    }
}

/// Column in `[0, pi)` holding the largest `|even part|`, used to anchor the
/// constant-mode step.
pub fn axis_pivot_column(sample: &BmcSample) -> usize {
    let m = sample.m();
    let n = sample.n();
    let h = n / 2;
    let mut best = h;
    let mut best_v = -1.0;
    for j in h..n {
        let mut v: f64 = 0.0;
        for i in first_nonneg_row(sample)..m {
            v = v.max((sample.get(i, j) + sample.get(i, j - h)).abs());
        }
        if v > best_v {
            best_v = v;
            best = j;
        }
    }
    best
}

/// First elimination step that removes the value along `rho = 0`.
///
/// Emits the even term `1 * c(rho) * 1` with `c(rho)` the even part of the
/// diameter through `theta_index`, `c(rho) = (f~(theta0, rho) + f~(theta0, -rho)) / 2`.
/// For a BMC-II function the residual vanishes on the axis.
pub fn zero_pole_step(sample: &BmcSample, theta_index: usize) -> Result<(GridTerm, BmcSample)> {
    sample.check_symmetric_grid()?;
    let m = sample.m();
    let n = sample.n();
    let column: Vec<f64> = (0..m)
        .map(|i| 0.5 * (sample.get(i, theta_index) + sample.get(m - 1 - i, theta_index)))
        .collect();
    let term = GridTerm {
        weight: 1.0,
        column,
        row: vec![1.0; n],
        parity: Parity::Even,
        theta: sample.thetas()[theta_index],
        rho: 0.0,
        theta_index,
        rho_index: m / 2,
        constant_mode: true,
    };
    let mut residual = sample.clone();
    subtract_term(&mut residual, &term);
    Ok((term, residual))
}

/// One elimination step with the 2x2 pivot `p`.
///
/// With columns `C1 = f~(theta* - pi, .)`, `C2 = f~(theta*, .)` and rows
/// `R1 = f~(., rho*)`, `R2 = f~(., -rho*)`, the update
/// `f~ - [C1 C2] M^+ [R1; R2]` splits into an even term
/// `(C1 + C2)(R1 + R2) / (2 (a + b))` and an odd term
/// `(C1 - C2)(R1 - R2) / (2 (a - b))`, each dropped when the coupling test
/// zeroes its eigenvalue.
pub fn ge_step(residual: &BmcSample, p: &PivotMatrix, alpha: f64) -> Result<(Vec<GridTerm>, BmcSample)> {
    residual.check_symmetric_grid()?;
    let (me, mo) = pseudo_inverse_2x2(p, alpha)?;
    let m = residual.m();
    let n = residual.n();
    let j2 = p.theta_index;
    let j1 = (j2 + n / 2) % n;
    let i1 = p.rho_index;
    let i2 = m - 1 - i1;
    let c1 = residual.column(j1);
    let c2 = residual.column(j2);
    let r1 = residual.row(i1).to_vec();
    let r2 = residual.row(i2).to_vec();
    let mut terms = Vec::with_capacity(2);
    if me != 0.0 {
        terms.push(GridTerm {
            weight: 0.5 * me,
            column: c1.iter().zip(&c2).map(|(a, b)| a + b).collect(),
            row: r1.iter().zip(&r2).map(|(a, b)| a + b).collect(),
            parity: Parity::Even,
            theta: p.theta,
            rho: p.rho,
            theta_index: p.theta_index,
            rho_index: p.rho_index,
            constant_mode: false,
        });
    }
    if mo != 0.0 {
        terms.push(GridTerm {
            weight: 0.5 * mo,
            column: c1.iter().zip(&c2).map(|(a, b)| a - b).collect(),
            row: r1.iter().zip(&r2).map(|(a, b)| a - b).collect(),
            parity: Parity::Odd,
            theta: p.theta,
            rho: p.rho,
            theta_index: p.theta_index,
            rho_index: p.rho_index,
            constant_mode: false,
        });
    }
    let mut next = residual.clone();
    for t in &terms {
        subtract_term(&mut next, t);
    }
    Ok((terms, next))
}

/// Settings for elimination on a fixed grid.
#[derive(Debug, Clone, Copy)]
pub struct GridGeOptions {
    /// Stop once `sigma1 <= tol * scale`.
    pub tol: f64,
    /// Scale used with `tol`; the sample's own maximum when `None`.
    pub scale: Option<f64>,
    pub alpha: f64,
    /// Stop once this many terms have been produced.
    pub max_terms: usize,
}

impl Default for GridGeOptions {
    fn default() -> Self {
        Self {
            tol: f64::EPSILON,
            scale: None,
            alpha: DEFAULT_ALPHA,
            max_terms: usize::MAX,
        }
    }
}

/// Result of elimination on a grid.
#[derive(Debug, Clone)]
pub struct GridGe {
    pub terms: Vec<GridTerm>,
    pub residual: BmcSample,
    /// Whether the residual fell below the tolerance.
    pub converged: bool,
}

/// Run structure-preserving elimination to convergence (or the term cap).
///
/// A constant-mode step comes first when the axis value is above the
/// tolerance.
pub fn ge_on_grid(sample: &BmcSample, opts: &GridGeOptions) -> Result<GridGe> {
    sample.check_symmetric_grid()?;
    let scale = opts.scale.unwrap_or_else(|| sample.vscale());
    let thresh = opts.tol * scale;
    let mut residual = sample.clone();
    let mut terms = Vec::new();

    if let Some(axis) = sample.axis_row() {
        let axis_max = sample.row(axis).iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if axis_max > thresh && opts.max_terms > 0 {
            let j0 = axis_pivot_column(sample);
            let (t, r) = zero_pole_step(&residual, j0)?;
            terms.push(t);
            residual = r;
        }
    }

    loop {
        let pivot = find_pivot(&residual)?;
        let p = match pivot {
            Some(p) if p.sigma1() > thresh => p,
            _ => {
                return Ok(GridGe {
                    terms,
                    residual,
                    converged: true,
                })
            }
        };
        if terms.len() >= opts.max_terms {
            return Ok(GridGe {
                terms,
                residual,
                converged: false,
            });
        }
        // Only a rank-1 update fits when one term of budget remains.
        let alpha = if terms.len() + 2 > opts.max_terms { 1.0 } else { opts.alpha };
        let (new_terms, next) = ge_step(&residual, &p, alpha)?;
        terms.extend(new_terms);
        residual = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(a: f64, b: f64) -> PivotMatrix {
        PivotMatrix {
            a,
            b,
            theta: 0.0,
            rho: 0.0,
            theta_index: 0,
            rho_index: 0,
        }
    }

    #[test]
    fn pseudo_inverse_cases() {
        let (e, o) = pseudo_inverse_2x2(&pm(2.0, 1.0), 0.01).unwrap();
        assert!((e - 1.0 / 3.0).abs() < 1e-16 && (o - 1.0).abs() < 1e-16);
        assert_eq!(pseudo_inverse_2x2(&pm(1.0, 1.0), 0.01).unwrap(), (0.5, 0.0));
        let (e, o) = pseudo_inverse_2x2(&pm(1.0, 0.999), 0.01).unwrap();
        assert!((e - 1.0 / 1.999).abs() < 1e-16);
        assert_eq!(o, 0.0);
        assert_eq!(pseudo_inverse_2x2(&pm(0.0, 0.0), 0.01), Err(Error::ZeroPivot));
    }

    #[test]
    fn pivot_on_constant_and_cosine() {
        let one = BmcSample::from_doubled(|_, _| 1.0, 17, 16).unwrap();
        let p = find_pivot(&one).unwrap().unwrap();
        assert_eq!(p.sigma1(), 2.0);
        assert_eq!(p.rho, one.rhos()[9]);
        assert_eq!(p.theta, 0.0);

        // cos(theta) doubled without regard to smoothness: sign(rho) cos(theta).
        let c = BmcSample::from_doubled(|t, r| if r >= 0.0 { t.cos() } else { -t.cos() }, 17, 16).unwrap();
        let p = find_pivot(&c).unwrap().unwrap();
        assert!((p.sigma1() - 2.0).abs() < 1e-15);
        assert_eq!(p.theta, 0.0);
    }

    #[test]
    fn pure_parity_steps_finish_in_one() {
        let q = BmcSample::from_doubled(|t, r| r * r * (2.0 * t).cos(), 17, 16).unwrap();
        let p = find_pivot(&q).unwrap().unwrap();
        let (terms, res) = ge_step(&q, &p, 0.01).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].parity, Parity::Even);
        assert!(res.vscale() < 1e-15);

        let x = BmcSample::from_doubled(|t, r| r * t.cos(), 17, 16).unwrap();
        let p = find_pivot(&x).unwrap().unwrap();
        let (terms, res) = ge_step(&x, &p, 0.01).unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].parity, Parity::Odd);
        assert!(res.vscale() < 1e-15);
    }

    #[test]
    fn coupled_step_emits_two_terms() {
        let f = BmcSample::from_doubled(|t, r| r * r * (2.0 * t).cos() + r * t.cos(), 17, 16).unwrap();
        let p = find_pivot(&f).unwrap().unwrap();
        let (terms, res) = ge_step(&f, &p, 0.01).unwrap();
        assert_eq!(terms.len(), 2);
        assert!(res.vscale() < 1e-14);
    }

    #[test]
    fn zero_pole_examples() {
        let one = BmcSample::from_doubled(|_, _| 1.0, 17, 16).unwrap();
        let (t, r) = zero_pole_step(&one, 8).unwrap();
        assert!(t.column.iter().all(|&c| c == 1.0));
        assert_eq!(r.vscale(), 0.0);

        let f = BmcSample::from_doubled(|t, r| 1.0 + r * t.sin(), 17, 16).unwrap();
        let j0 = axis_pivot_column(&f);
        let (_, r) = zero_pole_step(&f, j0).unwrap();
        let g = BmcSample::from_doubled(|t, r| r * t.sin(), 17, 16).unwrap();
        for (a, b) in r.values().iter().zip(g.values()) {
            assert!((a - b).abs() < 1e-15);
        }

        let c = BmcSample::from_doubled(|_, r| (3.0 * std::f64::consts::PI * r).cos(), 33, 16).unwrap();
        let (_, r) = zero_pole_step(&c, axis_pivot_column(&c)).unwrap();
        assert!(r.vscale() < 1e-15);
    }
}
