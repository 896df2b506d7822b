//! Computing with smooth functions on the unit disk.
//!
//! Functions are approximated by sums of rank-1 terms
//! `d_j c_j(rho) r_j(theta)`, with Chebyshev radial slices and Fourier
//! angular slices, built by Gaussian elimination that preserves the
//! symmetry of the doubled polar representation. On top of the
//! approximants the crate offers evaluation, integration, Cartesian
//! derivatives, vector calculus, a weighted SVD and a fast Poisson solver.

// `!(a <= b)` is the NaN-rejecting test; banded kernels index by offset.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bmc;
pub mod diskfun;
pub mod error;
pub mod function;
pub mod linalg;
pub mod ge;
pub mod ops;
pub mod poisson;
pub mod series;
pub mod svd;
pub mod vector;

pub use bmc::{extend_to_bmc, BmcSample};
pub use diskfun::{construct, construct_default, ConstructOptions, DiskFun, Term};
pub use error::{Error, Result};
pub use function::{Cartesian, DiskFunction, Polar};
pub use ops::{add, coeffs2, from_coeffs, diff_x, diff_y, mult_by_invrho, negate, product, sample, scale, sub, sum2, DenseCoeffs, LowRankCoeffs};
pub use poisson::{poisson, poisson_with_report, PoissonReport, SolveMethod};
pub use series::{ChebSeries, FourierSeries, Parity};
pub use svd::{bessel_j0_roots, bmc_svd, l2norm, weighted_svd, BmcSvd, WeightedSvd};
pub use vector::{cross, div, dot, grad, laplacian, scurl, vcurl, DiskFunV};
