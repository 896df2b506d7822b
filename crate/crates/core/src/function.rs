//! Callables that can be sampled on the unit disk.

/// A real function on the unit disk, addressed in polar coordinates.
///
/// `eval_polar` is only called with `0 <= rho <= 1`. Grid sampling goes
/// through `eval_grid`, which implementations may override with something
/// faster than pointwise evaluation.
pub trait DiskFunction: Sync {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64;

    /// Values on the tensor grid, row-major with one row per `rho`.
    fn eval_grid(&self, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(thetas.len() * rhos.len());
        for &r in rhos {
            for &t in thetas {
                out.push(self.eval_polar(t, r));
            }
        }
        out
    }
}

impl<T: DiskFunction + ?Sized> DiskFunction for &T {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        (**self).eval_polar(theta, rho)
    }

    fn eval_grid(&self, thetas: &[f64], rhos: &[f64]) -> Vec<f64> {
        (**self).eval_grid(thetas, rhos)
    }
}

/// Wraps a closure `f(theta, rho)`.
#[derive(Debug, Clone, Copy)]
pub struct Polar<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> DiskFunction for Polar<F> {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        (self.0)(theta, rho)
    }
}

/// Wraps a closure `f(x, y)`.
#[derive(Debug, Clone, Copy)]
pub struct Cartesian<F>(pub F);

impl<F: Fn(f64, f64) -> f64 + Sync> DiskFunction for Cartesian<F> {
    fn eval_polar(&self, theta: f64, rho: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        (self.0)(rho * c, rho * s)
    }
}
