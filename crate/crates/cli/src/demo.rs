//! Worked examples with known answers.

use std::f64::consts::PI;

use diskfun::{construct_default, diff_x, l2norm, poisson, sum2, Cartesian, DiskFun, Polar};

use crate::expr::{Coords, Named};
use crate::ExprFunction;

struct Outcome {
    name: &'static str,
    detail: String,
    pass: bool,
}

fn build(src: &str, coords: Coords) -> diskfun::Result<DiskFun> {
    let e = crate::expr::parse(src, coords).expect("demo expressions parse");
    construct_default(&ExprFunction(e))
}

fn check(name: &'static str, got: diskfun::Result<(f64, f64)>, tol: f64) -> Outcome {
    match got {
        Ok((value, expected)) => Outcome {
            name,
            detail: format!("got {value:?}, expected {expected:?} within {tol:e}"),
            pass: (value - expected).abs() <= tol,
        },
        Err(e) => Outcome {
            name,
            detail: format!("error: {e}"),
            pass: false,
        },
    }
}

fn examples() -> Vec<Outcome> {
    let mut out = Vec::new();

    out.push(check(
        "integral of -x^2 - 3xy - (y-1)^2",
        build("-x^2 - 3*x*y - (y-1)^2", Coords::Cartesian).map(|f| (sum2(&f), -1.5 * PI)),
        1e-13,
    ));

    out.push(check(
        "x*y at (0.5, 0.5)",
        build("x*y", Coords::Cartesian).and_then(|f| Ok((f.feval_xy(0.5, 0.5)?, 0.25))),
        1e-15,
    ));

    out.push(check(
        "norm of 1",
        build("1", Coords::Cartesian).map(|f| (l2norm(&f), PI.sqrt())),
        1e-13,
    ));

    let wave = construct_default(&Polar(|t, r| Named::Wave.eval(t, r)));
    out.push(match wave {
        Ok(f) => Outcome {
            name: "rank of wave",
            detail: format!("rank {}, expected 11 to 15", f.rank()),
            pass: (11..=15).contains(&f.rank()),
        },
        Err(e) => Outcome {
            name: "rank of wave",
            detail: format!("error: {e}"),
            pass: false,
        },
    });

    out.push(check(
        "d/dx sin(x) y at (0.3, -0.4)",
        construct_default(&Cartesian(|x: f64, y: f64| x.sin() * y))
            .and_then(|f| diff_x(&f))
            .and_then(|d| Ok((d.feval_xy(0.3, -0.4)?, -0.4 * 0.3f64.cos()))),
        1e-12,
    ));

    out.push(check(
        "Poisson with f = -4 at (0.3, 0.4)",
        construct_default(&Cartesian(|_, _| -4.0))
            .and_then(|f| poisson(&f, None, 32, 32))
            .and_then(|u| Ok((u.feval_xy(0.3, 0.4)?, 0.75))),
        1e-13,
    ));

    out
}

/// Report with one line per example, and whether all passed.
pub fn run() -> (String, bool) {
    let outcomes = examples();
    let mut s = String::new();
    for o in &outcomes {
        s.push_str(&format!("{} {}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail));
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    s.push_str(&format!("{passed}/{} examples passed\n", outcomes.len()));
    (s, passed == outcomes.len())
}
