use std::f64::consts::PI;

use diskfun::series::{cheb_points, fourier_points};
use diskfun::{
    add, bmc_svd, coeffs2, construct_default, diff_x, diff_y, div, from_coeffs, grad, laplacian, poisson, product,
    scurl, sub, sum2, vcurl, weighted_svd, BmcSample, Cartesian, ChebSeries, DiskFun, FourierSeries, Parity,
};
use proptest::prelude::*;

/// `a + b x + c y + d sin(k1 x + k2 y + p) + e exp(-s ((x - x0)^2 + y^2))`.
#[derive(Debug, Clone, Copy)]
struct Family {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    k1: f64,
    k2: f64,
    p: f64,
    e: f64,
    s: f64,
    x0: f64,
}

impl Family {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.a
            + self.b * x
            + self.c * y
            + self.d * (self.k1 * x + self.k2 * y + self.p).sin()
            + self.e * (-self.s * ((x - self.x0).powi(2) + y * y)).exp()
    }

    fn build(&self) -> DiskFun {
        let me = *self;
        construct_default(&Cartesian(move |x, y| me.eval(x, y))).unwrap()
    }
}

fn family() -> impl Strategy<Value = Family> {
    (
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64),
        (-4.0..4.0f64, -4.0..4.0f64, -PI..PI),
        (-2.0..2.0f64, 0.5..5.0f64, -0.5..0.5f64),
    )
        .prop_map(|((a, b, c, d), (k1, k2, p), (e, s, x0))| Family { a, b, c, d, k1, k2, p, e, s, x0 })
}

fn disk_point() -> impl Strategy<Value = (f64, f64)> {
    (-PI..PI, 0.0..=1.0f64)
}

fn xy((t, r): (f64, f64)) -> (f64, f64) {
    (r * t.cos(), r * t.sin())
}

fn quadratic() -> impl Strategy<Value = [f64; 6]> {
    prop::array::uniform6(-3.0..3.0f64)
}

fn quad_eval(q: &[f64; 6], x: f64, y: f64) -> f64 {
    q[0] + q[1] * x + q[2] * y + q[3] * x * x + q[4] * x * y + q[5] * y * y
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn approximant_matches_function(g in family(), pts in prop::collection::vec(disk_point(), 8)) {
        let f = g.build();
        for p in pts {
            let (x, y) = xy(p);
            prop_assert!((f.feval(p.0, p.1).unwrap() - g.eval(x, y)).abs() <= 1e-11 * f.vscale().max(1.0));
        }
    }

    #[test]
    fn doubled_function_is_symmetric(g in family(), p in disk_point()) {
        let f = g.build();
        let a = f.eval_doubled(p.0, p.1);
        let b = f.eval_doubled(p.0 + PI, -p.1);
        prop_assert!((a - b).abs() <= 1e-13 * f.vscale().max(1.0));
    }

    #[test]
    fn origin_value_is_single_valued(g in family(), t1 in -PI..PI, t2 in -PI..PI) {
        let f = g.build();
        prop_assert!((f.feval(t1, 0.0).unwrap() - f.feval(t2, 0.0).unwrap()).abs() <= 1e-13 * f.vscale().max(1.0));
    }

    #[test]
    fn term_parities_are_consistent(g in family()) {
        let f = g.build();
        for t in f.terms() {
            prop_assert_eq!(t.radial.parity(), t.angular.parity());
            for (l, c) in t.radial.coeffs().iter().enumerate() {
                prop_assert!(t.radial.parity().admits(l as i64) || *c == 0.0);
            }
            let h = (t.angular.n() / 2) as i64;
            for k in -h..h {
                prop_assert!(t.angular.parity().admits(k) || t.angular.coeff(k).norm() == 0.0);
            }
            if t.constant_mode {
                prop_assert_eq!(t.radial.parity(), Parity::Even);
            }
        }
    }

    #[test]
    fn integral_is_linear(g in family(), h in family(), a in -3.0..3.0f64) {
        let (f1, f2) = (g.build(), h.build());
        let combo = construct_default(&Cartesian(|x, y| a * g.eval(x, y) + h.eval(x, y))).unwrap();
        let scale = 1.0 + a.abs() * f1.vscale() + f2.vscale();
        prop_assert!((sum2(&combo) - (a * sum2(&f1) + sum2(&f2))).abs() <= 1e-12 * scale);
    }

    #[test]
    fn add_and_sub_are_pointwise(g in family(), h in family(), p in disk_point()) {
        let (f1, f2) = (g.build(), h.build());
        let s = add(&f1, &f2).unwrap();
        let d = sub(&f1, &f2).unwrap();
        let (a, b) = (f1.feval(p.0, p.1).unwrap(), f2.feval(p.0, p.1).unwrap());
        let tol = 1e-12 * (f1.vscale() + f2.vscale()).max(1.0);
        prop_assert!((s.feval(p.0, p.1).unwrap() - (a + b)).abs() <= tol);
        prop_assert!((d.feval(p.0, p.1).unwrap() - (a - b)).abs() <= tol);
        prop_assert!(sub(&f1, &f1).unwrap().vscale() <= tol);
    }

    #[test]
    fn squared_singular_values_sum_to_integral_of_square(g in family()) {
        let f = g.build();
        let s = weighted_svd(&f);
        let energy: f64 = s.sigma.iter().map(|v| v * v).sum();
        let ff = product(&f, &f).unwrap();
        prop_assert!((energy - sum2(&ff)).abs() <= 1e-11 * energy.max(1.0));
    }

    #[test]
    fn coefficients_round_trip(g in family(), p in disk_point()) {
        let f = g.build();
        let back = from_coeffs(&coeffs2(&f)).unwrap();
        prop_assert!((back.feval(p.0, p.1).unwrap() - f.feval(p.0, p.1).unwrap()).abs() <= 1e-13 * f.vscale().max(1.0));
    }

    #[test]
    fn quadratic_derivatives_are_exact(q in quadratic(), p in disk_point()) {
        let f = construct_default(&Cartesian(|x, y| quad_eval(&q, x, y))).unwrap();
        let (x, y) = xy(p);
        let fx = q[1] + 2.0 * q[3] * x + q[4] * y;
        let fy = q[2] + q[4] * x + 2.0 * q[5] * y;
        prop_assert!((diff_x(&f).unwrap().feval_xy(x, y).unwrap() - fx).abs() <= 1e-12);
        prop_assert!((diff_y(&f).unwrap().feval_xy(x, y).unwrap() - fy).abs() <= 1e-12);
        let lap = laplacian(&f).unwrap().feval_xy(x, y).unwrap();
        prop_assert!((lap - 2.0 * (q[3] + q[5])).abs() <= 1e-11);
    }

    #[test]
    fn curl_of_gradient_and_divergence_of_curl_vanish(g in family(), p in disk_point()) {
        let f = g.build();
        let tol = 1e-8 * f.vscale().max(1.0);
        let gr = grad(&f).unwrap();
        prop_assert!(vcurl(&gr).unwrap().feval(p.0, p.1).unwrap().abs() <= tol);
        let sc = scurl(&f).unwrap();
        prop_assert!(div(&sc).unwrap().feval(p.0, p.1).unwrap().abs() <= tol);
    }

    #[test]
    fn derivatives_are_continuous_through_origin(g in family(), t in -PI..PI) {
        let f = g.build();
        for d in [diff_x(&f).unwrap(), diff_y(&f).unwrap()] {
            let (a, b) = (d.eval_doubled(t, 1e-7), d.eval_doubled(t, -1e-7));
            prop_assert!((a - b).abs() <= 1e-6 * d.vscale());
        }
    }

    #[test]
    fn poisson_inverts_laplacian_on_polynomials(q in quadratic(), p in disk_point()) {
        // u = (1 - x^2 - y^2) q(x, y) vanishes on the circle.
        let u_exact = |x: f64, y: f64| (1.0 - x * x - y * y) * quad_eval(&q, x, y);
        let lap = |x: f64, y: f64| {
            let (a, b, c, d, e, h) = (q[0], q[1], q[2], q[3], q[4], q[5]);
            let r2 = x * x + y * y;
            -4.0 * (a + b * x + c * y + d * x * x + e * x * y + h * y * y)
                - 4.0 * (x * (b + 2.0 * d * x + e * y) + y * (c + e * x + 2.0 * h * y))
                + (1.0 - r2) * 2.0 * (d + h)
        };
        let f = construct_default(&Cartesian(lap)).unwrap();
        let u = poisson(&f, None, 32, 32).unwrap();
        let (x, y) = xy(p);
        prop_assert!((u.feval_xy(x, y).unwrap() - u_exact(x, y)).abs() <= 1e-12 * f.vscale().max(1.0));
    }

    #[test]
    fn chebyshev_transform_round_trips(v in prop::collection::vec(-10.0..10.0f64, 1..40)) {
        let s = ChebSeries::from_values(&v).unwrap();
        for (a, b) in s.values(v.len()).iter().zip(&v) {
            prop_assert!((a - b).abs() <= 1e-12 * 10.0);
        }
        let x = cheb_points(v.len());
        for (xi, b) in x.iter().zip(&v) {
            prop_assert!((s.eval(*xi) - b).abs() <= 1e-12 * 10.0);
        }
    }

    #[test]
    fn fourier_transform_round_trips(h in 1usize..20, seed in prop::collection::vec(-10.0..10.0f64, 40)) {
        let v = &seed[..2 * h];
        let s = FourierSeries::from_values(v).unwrap();
        for (t, b) in fourier_points(2 * h).iter().zip(v) {
            prop_assert!((s.eval_real(*t) - b).abs() <= 1e-12 * 10.0);
        }
    }

    #[test]
    fn full_rank_discrete_svd_reproduces_sample(g in family()) {
        let sample = BmcSample::from_doubled(
            |t, r| g.eval(r * t.cos(), r * t.sin()),
            17,
            16,
        ).unwrap();
        let d = bmc_svd(&sample);
        let back = d.reconstruct(d.sigma.len());
        let scale = sample.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in back.iter().zip(sample.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale.max(1.0));
        }
        prop_assert!(d.sigma.windows(2).all(|w| w[0] >= w[1]));
    }
}
