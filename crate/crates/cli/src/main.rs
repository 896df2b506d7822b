//! `diskfun`: approximate, evaluate and solve with functions on the unit disk.

mod demo;
mod expr;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use diskfun::{
    construct, diff_x, diff_y, l2norm, poisson_with_report, sum2, weighted_svd, ConstructOptions, DiskFun,
    DiskFunction, SolveMethod,
};
use serde::Serialize;

use expr::{Coords, Expr};
use output::{coeffs_of, grid_csv, grid_of, skeleton_of, term_parities, Document};

/// Functions on the unit disk as low-rank Chebyshev-Fourier approximants.
///
/// Expressions use `x`, `y` (or `t`, `r` with `--polar`), `pi`, the
/// operators `+ - * / ^`, the functions `sin cos exp sinh sqrt abs max0`
/// and the named examples `phi1 phi2 wave forcing`.
#[derive(Debug, Parser)]
#[command(name = "diskfun", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Read expressions and points in polar coordinates `(t, r)`.
    #[arg(long, global = true)]
    polar: bool,
    /// Construction tolerance.
    #[arg(long, global = true, default_value_t = f64::EPSILON)]
    tol: f64,
    /// Growth-factor bound for pivot selection.
    #[arg(long, global = true, default_value_t = 0.01)]
    alpha: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build an approximant and report its rank, scale and lengths.
    Approx {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Evaluate at points `a,b` (`x,y`, or `t,r` with `--polar`).
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long = "at", required = true, value_parser = parse_point)]
        at: Vec<(f64, f64)>,
    },
    /// Integral over the disk.
    Integrate {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Cartesian partial derivative.
    Diff {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Axis::X)]
        var: Axis,
        #[arg(long = "at", value_parser = parse_point)]
        at: Vec<(f64, f64)>,
    },
    /// L2 norm over the disk.
    Norm {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Leading singular values of the weighted SVD.
    Svd {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Solve `lap u = f` with `u = g` on the boundary.
    ///
    /// `F` and `--g` are expressions or paths of coefficient files written
    /// by `approx --format json`.
    Poisson {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        /// Chebyshev by Fourier modes of the solve, as `MxN`.
        #[arg(long, value_parser = parse_grid)]
        size: Option<(usize, usize)>,
        #[arg(long = "at", value_parser = parse_point)]
        at: Vec<(f64, f64)>,
    },
    /// Values on a polar grid and the elimination skeleton.
    Plotdata {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Radii by angles, as `MxN`.
        #[arg(long, value_parser = parse_grid, default_value = "33x64")]
        grid: (usize, usize),
    },
    /// Print the JSON Schema of `plotdata` documents.
    Schema,
    /// Run the worked examples and report pass or fail for each.
    Demo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    X,
    Y,
}

/// Bad input, reported with exit status 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn parse_point(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got `{s}`"))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((num(a)?, num(b)?))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected `MxN`, got `{s}`"))?;
    let num = |v: &str| match v.trim().parse::<usize>() {
        Ok(0) => Err("sizes must be positive".to_string()),
        Ok(k) => Ok(k),
        Err(e) => Err(format!("`{v}`: {e}")),
    };
    Ok((num(a)?, num(b)?))
}

struct ExprFunction(Expr);

impl DiskFunction for ExprFunction {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        self.0.eval(theta, rho)
    }
}

struct Ctx {
    coords: Coords,
    opts: ConstructOptions,
}

impl Ctx {
    fn parse(&self, src: &str) -> Result<Expr> {
        expr::parse(src, self.coords).map_err(|e| usage(format!("in `{src}`: {e}")))
    }

    fn build(&self, src: &str) -> Result<DiskFun> {
        let e = self.parse(src)?;
        construct(&ExprFunction(e), &self.opts).with_context(|| format!("approximating `{src}`"))
    }

    /// An expression, or a coefficient file if `src` names one.
    fn load(&self, src: &str) -> Result<DiskFun> {
        let path = Path::new(src);
        if path.is_file() {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {src}"))?;
            let doc: Document =
                serde_json::from_str(&text).map_err(|e| usage(format!("{src} is not a coefficient file: {e}")))?;
            return output::from_document(&doc).map_err(|e| usage(format!("{src}: {e:#}")));
        }
        self.build(src)
    }

    /// `(theta, rho)` of a user point.
    fn polar_point(&self, (a, b): (f64, f64)) -> Result<(f64, f64)> {
        let (t, r) = match self.coords {
            Coords::Cartesian => (b.atan2(a), a.hypot(b)),
            Coords::Polar => (a, b),
        };
        if !(0.0..=1.0 + 1e-14).contains(&r) || !t.is_finite() {
            return Err(usage(format!("point ({a}, {b}) is outside the unit disk")));
        }
        Ok((t, r.min(1.0)))
    }

    fn point_labels(&self) -> (&'static str, &'static str) {
        match self.coords {
            Coords::Cartesian => ("x", "y"),
            Coords::Polar => ("theta", "rho"),
        }
    }
}

#[derive(Serialize)]
struct PointValue {
    at: [f64; 2],
    value: f64,
}

fn point_values(ctx: &Ctx, f: &DiskFun, at: &[(f64, f64)]) -> Result<Vec<PointValue>> {
    at.iter()
        .map(|&p| {
            let (t, r) = ctx.polar_point(p)?;
            Ok(PointValue {
                at: [p.0, p.1],
                value: f.feval(t, r)?,
            })
        })
        .collect()
}

/// Rendered result of a command in each supported format.
struct Rendered {
    text: String,
    json: Document,
    csv: Option<String>,
}

fn summary_text(f: &DiskFun) -> String {
    let (m, n) = f.lengths();
    format!(
        "rank {}\nvscale {:?}\nlengths {m}x{n}\nparity {}\n",
        f.rank(),
        f.vscale(),
        term_parities(f).join(" ")
    )
}

fn points_text(values: &[PointValue]) -> String {
    values.iter().map(|p| format!("{:?}\n", p.value)).collect()
}

fn points_csv(ctx: &Ctx, values: &[PointValue]) -> String {
    let (a, b) = ctx.point_labels();
    let mut s = format!("{a},{b},value\n");
    for p in values {
        s.push_str(&format!("{:?},{:?},{:?}\n", p.at[0], p.at[1], p.value));
    }
    s
}

/// Approximant with its coefficients and optional point values.
fn function_result(ctx: &Ctx, f: &DiskFun, at: &[(f64, f64)]) -> Result<Rendered> {
    let values = point_values(ctx, f, at)?;
    let mut json = Document::summary("diskfun", f).with("parity", term_parities(f));
    json.coeffs = Some(coeffs_of(f));
    if !values.is_empty() {
        json = json.with("points", &values);
    }
    Ok(Rendered {
        text: summary_text(f) + &points_text(&values),
        csv: (!values.is_empty()).then(|| points_csv(ctx, &values)),
        json,
    })
}

fn scalar_result(kind: &str, f: &DiskFun, value: f64) -> Rendered {
    Rendered {
        text: format!("{value:?}\n"),
        json: Document::summary(kind, f).with("value", value),
        csv: None,
    }
}

fn run_command(ctx: &Ctx, cmd: &Command) -> Result<Rendered> {
    Ok(match cmd {
        Command::Approx { expr } => function_result(ctx, &ctx.build(expr)?, &[])?,
        Command::Eval { expr, at } => {
            let f = ctx.build(expr)?;
            let values = point_values(ctx, &f, at)?;
            Rendered {
                text: points_text(&values),
                csv: Some(points_csv(ctx, &values)),
                json: Document::summary("eval", &f).with("points", &values),
            }
        }
        Command::Integrate { expr } => {
            let f = ctx.build(expr)?;
            scalar_result("integral", &f, sum2(&f))
        }
        Command::Norm { expr } => {
            let f = ctx.build(expr)?;
            scalar_result("norm", &f, l2norm(&f))
        }
        Command::Diff { expr, var, at } => {
            let f = ctx.build(expr)?;
            let d = match var {
                Axis::X => diff_x(&f),
                Axis::Y => diff_y(&f),
            }
            .context("differentiating")?;
            function_result(ctx, &d, at)?
        }
        Command::Svd { expr, count } => {
            let f = ctx.build(expr)?;
            let s = weighted_svd(&f);
            let sigma: Vec<f64> = s.sigma.iter().copied().take(*count).collect();
            Rendered {
                text: sigma.iter().map(|v| format!("{v:?}\n")).collect(),
                csv: Some(
                    std::iter::once("index,sigma\n".to_string())
                        .chain(sigma.iter().enumerate().map(|(i, v)| format!("{},{v:?}\n", i + 1)))
                        .collect(),
                ),
                json: Document::summary("svd", &f).with("sigma", &sigma).with("svd_rank", s.rank()),
            }
        }
        Command::Poisson { f, g, size, at } => {
            let f = ctx.load(f)?;
            let (fm, fn_) = f.lengths();
            let (m, n) = size.unwrap_or(((2 * fm + 1).max(32), (2 * fn_).max(32)));
            if n % 2 == 1 {
                return Err(usage(format!("Fourier size {n} must be even")));
            }
            let g = match g {
                Some(src) => {
                    let gf = ctx.load(src)?;
                    let values: Vec<f64> =
                        diskfun::series::fourier_points(n).iter().map(|&t| gf.eval_doubled(t, 1.0)).collect();
                    Some(output::boundary_series(&values)?)
                }
                None => None,
            };
            let (u, rep) = poisson_with_report(&f, g.as_ref(), m, n).context("solving the Poisson problem")?;
            let mut r = function_result(ctx, &u, at)?;
            let method = match rep.method {
                SolveMethod::Trivial => "trivial",
                SolveMethod::Adi => "adi",
                SolveMethod::Direct => "direct",
            };
            r.text.push_str(&format!(
                "method {method}\niterations {}\nshift_bound {}\nresidual {:?}\nrhs_rank {}\nsize {}x{n}\n",
                rep.iterations, rep.shift_bound, rep.residual, rep.rhs_rank, rep.m
            ));
            r.json = r.json.with(
                "report",
                serde_json::json!({
                    "method": method,
                    "iterations": rep.iterations,
                    "shift_bound": rep.shift_bound,
                    "residual": rep.residual,
                    "rhs_rank": rep.rhs_rank,
                    "size": [rep.m, n],
                }),
            );
            r
        }
        Command::Plotdata { expr, grid } => {
            let f = ctx.build(expr)?;
            let g = grid_of(&f, grid.0, grid.1);
            let sk = skeleton_of(&f);
            let mut json = Document::summary("plotdata", &f);
            let text = format!(
                "{}grid {}x{}\npivots {}\n",
                summary_text(&f),
                g.rho.len(),
                g.theta.len(),
                sk.pivots.len()
            );
            let csv = grid_csv(&g);
            json.grid = Some(g);
            json.skeleton = Some(sk);
            Rendered { text, json, csv: Some(csv) }
        }
        Command::Schema | Command::Demo => unreachable!("handled before dispatch"),
    })
}

fn emit(out: Option<&Path>, s: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, s).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(usage("--tol must lie in (0, 1)"));
    }
    if !(cli.alpha > 0.0 && cli.alpha <= 1.0) {
        return Err(usage("--alpha must lie in (0, 1]"));
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Schema => return emit(out, output::PLOTDATA_SCHEMA),
        Command::Demo => {
            let (report, ok) = demo::run();
            emit(out, &report)?;
            return if ok { Ok(()) } else { Err(anyhow::anyhow!("a worked example failed")) };
        }
        _ => {}
    }
    let ctx = Ctx {
        coords: if cli.polar { Coords::Polar } else { Coords::Cartesian },
        opts: ConstructOptions::default().with_tol(cli.tol).with_alpha(cli.alpha),
    };
    let r = run_command(&ctx, &cli.command)?;
    let s = match cli.format {
        Format::Text => r.text,
        Format::Json => serde_json::to_string_pretty(&r.json)? + "\n",
        Format::Csv => r.csv.ok_or_else(|| usage("CSV output is not available for this command"))?,
    };
    emit(out, &s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn point_and_grid_arguments() {
        assert_eq!(parse_point("0.5,-0.25"), Ok((0.5, -0.25)));
        assert!(parse_point("0.5").is_err());
        assert_eq!(parse_grid("33x64"), Ok((33, 64)));
        assert!(parse_grid("0x4").is_err());
    }

    #[test]
    fn polar_points_are_checked() {
        let ctx = Ctx {
            coords: Coords::Cartesian,
            opts: ConstructOptions::default(),
        };
        let (t, r) = ctx.polar_point((0.0, 1.0)).unwrap();
        assert!((t - PI / 2.0).abs() < 1e-15 && r == 1.0);
        assert!(ctx.polar_point((0.8, 0.8)).is_err());
    }

    #[test]
    fn command_line_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
