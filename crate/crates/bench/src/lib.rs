//! Inputs shared by the benchmarks in `benches/`.

use diskfun::{construct_default, Cartesian, DiskFun, Polar};

/// `cos(3 pi rho) + sin(2 rho sin(theta) - 0.4)`, rank 14.
pub fn wave() -> DiskFun {
    construct_default(&Polar(|t: f64, r: f64| (3.0 * std::f64::consts::PI * r).cos() + (2.0 * r * t.sin() - 0.4).sin()))
        .expect("wave is smooth")
}

/// `exp(-(cos(11 y) + sin(x))^2)`, a function of moderately high rank.
pub fn phi1() -> DiskFun {
    construct_default(&Cartesian(|x: f64, y: f64| (-((11.0 * y).cos() + x.sin()).powi(2)).exp())).expect("phi1 is smooth")
}

/// Low-rank Gaussian bump used as a Poisson right-hand side.
pub fn bump() -> DiskFun {
    construct_default(&Cartesian(|x: f64, y: f64| (-10.0 * ((x - 0.2).powi(2) + y * y)).exp())).expect("bump is smooth")
}
