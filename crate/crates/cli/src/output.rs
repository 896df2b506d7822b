//! JSON and CSV documents written by the commands.

use std::f64::consts::PI;

use diskfun::{coeffs2, from_coeffs, DiskFun, DiskFunction, FourierSeries, LowRankCoeffs, Parity};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Top-level output document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub kind: String,
    pub rank: usize,
    pub vscale: f64,
    pub m: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<Skeleton>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Coeffs>,
    /// Command-specific fields.
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

/// Samples on a polar tensor grid; `values[i][j]` is at `(theta[j], rho[i])`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Grid {
    pub theta: Vec<f64>,
    pub rho: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pivot {
    pub theta: f64,
    pub rho: f64,
    pub parity: String,
}

/// Elimination skeleton: one pivot, one radial line and one circle per term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Skeleton {
    pub pivots: Vec<Pivot>,
    /// Angles of the radial lines through the pivots.
    pub lines: Vec<f64>,
    /// Radii of the circles through the pivots.
    pub circles: Vec<f64>,
}

/// Factored coefficients `X = A diag(d) B^T`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Coeffs {
    /// Ordering of the rows of `a`: Chebyshev index ascending.
    pub chebyshev_order: String,
    /// Ordering of the rows of `b`: Fourier `k` ascending from `-n/2`.
    pub fourier_order: String,
    /// `a[j][l]`: coefficient of `T_l(rho)` in term `j`.
    pub a: Vec<Vec<f64>>,
    pub d: Vec<f64>,
    /// `b[j][k + n/2] = [re, im]`.
    pub b: Vec<Vec<[f64; 2]>>,
}

pub const CHEBYSHEV_ORDER: &str = "ascending";
pub const FOURIER_ORDER: &str = "ascending from -n/2";

fn parity_name(p: Parity, constant: bool) -> &'static str {
    match (p, constant) {
        (_, true) => "constant",
        (Parity::Even, _) => "even",
        (Parity::Odd, _) => "odd",
        (Parity::None, _) => "none",
    }
}

/// Parity labels of the terms, the constant-mode term first.
pub fn term_parities(f: &DiskFun) -> Vec<&'static str> {
    f.terms().iter().map(|t| parity_name(t.parity, t.constant_mode)).collect()
}

impl Document {
    pub fn summary(kind: &str, f: &DiskFun) -> Self {
        let (m, n) = f.lengths();
        Document {
            kind: kind.to_string(),
            rank: f.rank(),
            vscale: f.vscale(),
            m,
            n,
            grid: None,
            skeleton: None,
            coeffs: None,
            extra: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.extra.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }
}

pub fn coeffs_of(f: &DiskFun) -> Coeffs {
    let c = coeffs2(f);
    Coeffs {
        chebyshev_order: CHEBYSHEV_ORDER.into(),
        fourier_order: FOURIER_ORDER.into(),
        a: c.a,
        d: c.d,
        b: c.b.iter().map(|col| col.iter().map(|z| [z.re, z.im]).collect()).collect(),
    }
}

/// Approximant stored in a coefficient document.
pub fn from_document(doc: &Document) -> anyhow::Result<DiskFun> {
    let c = doc
        .coeffs
        .as_ref()
        .ok_or_else(|| anyhow::anyhow!("document has no `coeffs` field"))?;
    if c.chebyshev_order != CHEBYSHEV_ORDER || c.fourier_order != FOURIER_ORDER {
        anyhow::bail!("unsupported coefficient ordering");
    }
    if c.a.len() != c.d.len() || c.b.len() != c.d.len() {
        anyhow::bail!("factor counts differ: {} a, {} d, {} b", c.a.len(), c.d.len(), c.b.len());
    }
    let low = LowRankCoeffs {
        a: c.a.clone(),
        d: c.d.clone(),
        b: c.b.iter().map(|col| col.iter().map(|z| Complex64::new(z[0], z[1])).collect()).collect(),
        m: doc.m,
        n: doc.n,
    };
    Ok(from_coeffs(&low)?)
}

pub fn skeleton_of(f: &DiskFun) -> Skeleton {
    let pivots: Vec<Pivot> = f
        .terms()
        .iter()
        .map(|t| Pivot {
            theta: t.pivot.0,
            rho: t.pivot.1,
            parity: parity_name(t.parity, t.constant_mode).into(),
        })
        .collect();
    Skeleton {
        lines: pivots.iter().map(|p| p.theta).collect(),
        circles: pivots.iter().map(|p| p.rho).collect(),
        pivots,
    }
}

/// `m` radii equispaced in `[0, 1]` by `n` angles equispaced from `-pi`.
pub fn grid_of(f: &DiskFun, m: usize, n: usize) -> Grid {
    let rho: Vec<f64> = (0..m).map(|i| if m == 1 { 0.0 } else { i as f64 / (m - 1) as f64 }).collect();
    let theta: Vec<f64> = (0..n).map(|j| -PI + 2.0 * PI * j as f64 / n as f64).collect();
    let flat = f.eval_grid(&theta, &rho);
    Grid {
        values: flat.chunks(n.max(1)).map(|c| c.to_vec()).collect(),
        theta,
        rho,
    }
}

pub fn grid_csv(g: &Grid) -> String {
    let mut s = String::from("theta,rho,value\n");
    for (i, r) in g.rho.iter().enumerate() {
        for (j, t) in g.theta.iter().enumerate() {
            s.push_str(&format!("{t:?},{r:?},{:?}\n", g.values[i][j]));
        }
    }
    s
}

/// Boundary trace `f(theta, 1)` as a Fourier series with `n` modes.
pub fn boundary_series(values: &[f64]) -> anyhow::Result<FourierSeries> {
    Ok(FourierSeries::from_values(values)?)
}

/// JSON Schema for `plotdata` documents.
pub const PLOTDATA_SCHEMA: &str = include_str!("../schema/plotdata.schema.json");

#[cfg(test)]
mod tests {
    use super::*;
    use diskfun::{construct_default, Cartesian};

    #[test]
    fn coefficient_document_round_trip() {
        let f = construct_default(&Cartesian(|x: f64, y: f64| (x + 2.0 * y).sin() + x * y)).unwrap();
        let mut doc = Document::summary("diskfun", &f);
        doc.coeffs = Some(coeffs_of(&f));
        let text = serde_json::to_string(&doc).unwrap();
        let back: Document = serde_json::from_str(&text).unwrap();
        let g = from_document(&back).unwrap();
        for &(x, y) in &[(0.1, 0.2), (-0.5, 0.3), (0.0, 0.0)] {
            assert!((f.feval_xy(x, y).unwrap() - g.feval_xy(x, y).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn skeleton_counts_match_rank() {
        let f = construct_default(&Cartesian(|x: f64, y: f64| (x - y * y).cos())).unwrap();
        let s = skeleton_of(&f);
        assert_eq!(s.lines.len(), f.rank());
        assert_eq!(s.circles.len(), f.rank());
    }

    #[test]
    fn csv_layout() {
        let f = construct_default(&Cartesian(|x: f64, _: f64| x)).unwrap();
        let csv = grid_csv(&grid_of(&f, 3, 4));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "theta,rho,value");
        assert_eq!(lines.len(), 1 + 12);
        let last: Vec<f64> = lines[12].split(',').map(|v| v.parse().unwrap()).collect();
        assert!((last[2] - last[1] * last[0].cos()).abs() < 1e-14);
    }
}
