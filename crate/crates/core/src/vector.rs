//! Vector fields on the disk with Cartesian components.

use crate::diskfun::DiskFun;
use crate::error::Result;
use crate::ops::{add, diff_x, diff_y, negate, product, sub};

/// A vector field `u i + v j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskFunV {
    pub u: DiskFun,
    pub v: DiskFun,
}

impl DiskFunV {
    pub fn new(u: DiskFun, v: DiskFun) -> Self {
        Self { u, v }
    }

    /// Components at Cartesian `(x, y)`.
    pub fn feval_xy(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        Ok((self.u.feval_xy(x, y)?, self.v.feval_xy(x, y)?))
    }

    /// Components at polar `(theta, rho)`.
    pub fn feval(&self, theta: f64, rho: f64) -> Result<(f64, f64)> {
        Ok((self.u.feval(theta, rho)?, self.v.feval(theta, rho)?))
    }

    pub fn vscale(&self) -> f64 {
        self.u.vscale().max(self.v.vscale())
    }
}

/// `(f_x, f_y)`.
pub fn grad(f: &DiskFun) -> Result<DiskFunV> {
    Ok(DiskFunV::new(diff_x(f)?, diff_y(f)?))
}

/// Curl of a scalar: `(f_y, -f_x)`.
pub fn scurl(f: &DiskFun) -> Result<DiskFunV> {
    Ok(DiskFunV::new(diff_y(f)?, negate(&diff_x(f)?)))
}

/// `u_x + v_y`.
pub fn div(w: &DiskFunV) -> Result<DiskFun> {
    add(&diff_x(&w.u)?, &diff_y(&w.v)?)
}

/// Curl of a field: `v_x - u_y`.
pub fn vcurl(w: &DiskFunV) -> Result<DiskFun> {
    sub(&diff_x(&w.v)?, &diff_y(&w.u)?)
}

/// `u1 v1 + u2 v2`.
pub fn dot(a: &DiskFunV, b: &DiskFunV) -> Result<DiskFun> {
    add(&product(&a.u, &b.u)?, &product(&a.v, &b.v)?)
}

/// Scalar cross product `u1 v2 - u2 v1`.
pub fn cross(a: &DiskFunV, b: &DiskFunV) -> Result<DiskFun> {
    sub(&product(&a.u, &b.v)?, &product(&a.v, &b.u)?)
}

/// `f_xx + f_yy`.
pub fn laplacian(f: &DiskFun) -> Result<DiskFun> {
    div(&grad(f)?)
}
