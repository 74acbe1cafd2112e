use std::sync::Arc;

use discrete_cycloids::evolute::{double_evolute, evolute};
use discrete_cycloids::halfturn::{extend_by_recurrence, half_turn_trace};
use discrete_cycloids::random::{
    random_ball, random_closed, random_constant_width, random_radii, rng,
};
use discrete_cycloids::{
    det, half_turn, multiperiod_spectrum_by_roots, solve_spectrum, PolygonBall, RadiiVector,
    Subspace,
};
use proptest::prelude::*;

fn ball_for(seed: u64, n: usize) -> Arc<PolygonBall> {
    Arc::new(random_ball(&mut rng(seed), n))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn duality_invariants(seed: u64, n in 2usize..=12) {
        let ball = ball_for(seed, n);
        let q = &ball.dual().vertices;
        let len = ball.len();
        let scale = q.iter().map(|v| v.norm()).fold(1.0, f64::max)
            * ball.vertices().iter().map(|v| v.norm()).fold(1.0, f64::max);
        for i in 0..len {
            let p0 = ball.vertices()[i];
            let p1 = ball.vertices()[(i + 1) % len];
            let dq = q[(i + 1) % len] - q[i];
            prop_assert!((det(&p0, &q[i]) - 1.0).abs() <= 1e-9 * scale);
            prop_assert!(det(&(p1 - p0), &q[i]).abs() <= 1e-9 * scale);
            prop_assert!(det(&p1, &dq).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn dual_of_dual_is_a_shifted_copy(seed: u64, n in 2usize..=12) {
        let ball = ball_for(seed, n);
        let qq = ball.dual().as_ball().unwrap().dual().vertices.clone();
        let len = ball.len();
        for (i, v) in qq.iter().enumerate() {
            let expect = ball.vertices()[(i + 1 + n) % len];
            prop_assert!((v - expect).norm() <= 1e-9 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn double_evolute_kills_constants_and_is_positive(seed: u64, n in 2usize..=12) {
        let ball = ball_for(seed, n);
        let ones = RadiiVector::ones(Arc::clone(&ball));
        let t1 = double_evolute(&ones);
        let scale = ball.alpha().iter().zip(ball.beta()).map(|(a, b)| a * b).fold(0.0, f64::max);
        prop_assert!(t1.values().iter().all(|x| x.abs() <= 1e-9 * scale));

        let r = random_radii(&mut rng(seed ^ 1), ball);
        let form = double_evolute(&r).inner_product(&r).unwrap();
        prop_assert!(form >= -1e-12 * scale * r.norm().powi(2));
    }

    #[test]
    fn evolute_of_closed_polygon_is_closed(seed: u64, n in 2usize..=12) {
        let ball = ball_for(seed, n);
        let r = random_closed(&mut rng(seed ^ 2), ball);
        let s = evolute(&r);
        let pts = s.reconstruct_vertices(Default::default());
        let size: f64 = pts.iter().map(|p| p.norm()).fold(1.0, f64::max);
        prop_assert!((pts[pts.len() - 1] - pts[0]).norm() <= 1e-9 * size);
    }

    #[test]
    fn double_evolute_preserves_parity(seed: u64, n in 2usize..=12) {
        let ball = ball_for(seed, n);
        let r = random_radii(&mut rng(seed ^ 3), ball);
        for space in [Subspace::S, Subspace::A] {
            let part = r.project(space).unwrap();
            prop_assert!(double_evolute(&part).classify().contains(space));
        }
    }

    #[test]
    fn constant_width_radii_have_constant_width(seed: u64, n in 3usize..=12) {
        let ball = ball_for(seed, n);
        let r = random_constant_width(&mut rng(seed ^ 4), ball);
        let w = r.width_vector();
        let top = w.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        prop_assert!(w.iter().all(|x| (x - w[0]).abs() <= 1e-9 * top));
        prop_assert!(r.classify().constant_width);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn negative_lambda_is_hyperbolic(seed: u64, n in 2usize..=10, lambda in -50.0..-1e-3f64) {
        let ball = ball_for(seed, n);
        prop_assert!(half_turn_trace(&ball, lambda).abs() > 2.0);
    }

    #[test]
    fn bands_and_gaps(seed: u64, n in 2usize..=8) {
        let ball = ball_for(seed, n);
        let ev = solve_spectrum(&ball).unwrap().eigenvalues();
        let lmax = ev[ev.len() - 1];
        let resolved = |a: f64, b: f64| b - a > 1e-6 * lmax;
        for k in 1..n {
            // elliptic band between lambda_k^2 and lambda_{k+1}^1
            let (a, b) = (ev[2 * k], ev[2 * k + 1]);
            if resolved(a, b) {
                prop_assert!(half_turn_trace(&ball, 0.5 * (a + b)).abs() < 2.0);
            }
            // hyperbolic window between lambda_k^1 and lambda_k^2
            let (c, d) = (ev[2 * k - 1], ev[2 * k]);
            if k > 1 && resolved(c, d) {
                prop_assert!(half_turn_trace(&ball, 0.5 * (c + d)).abs() > 2.0);
            }
        }
    }

    #[test]
    fn new_roots_are_ordered_by_angle(seed: u64, n in 2usize..=6, m in 2usize..=4) {
        let ball = ball_for(seed, n);
        let spec = multiperiod_spectrum_by_roots(&ball, m).unwrap();
        let labels: Vec<f64> = spec.cycloids().iter().map(|c| c.label.value()).collect();
        prop_assert!(labels.windows(2).all(|w| w[0] <= w[1]));
        let lmax = spec.lambda_max();
        let ev = spec.eigenvalues();
        prop_assert!(ev.windows(2).all(|w| w[1] >= w[0] - 1e-9 * lmax));
        // each fractional label appears as a double eigenvalue
        let cycloids = spec.cycloids();
        for p in (1..cycloids.len() - 1).step_by(2) {
            let (a, b) = (&cycloids[p], &cycloids[p + 1]);
            if !a.label.is_integer() {
                prop_assert_eq!(&a.label.text(), &b.label.text());
                prop_assert!((a.eigenvalue - b.eigenvalue).abs() <= 1e-7 * lmax);
            }
        }
    }

    #[test]
    fn expanding_seed_grows_by_mu(seed: u64, n in 2usize..=8, lambda in -20.0..-0.1f64) {
        let ball = ball_for(seed, n);
        let h = half_turn(&ball, lambda);
        let mu = h.mu.unwrap();
        let (r0, r1) = h.expanding_direction().unwrap();
        let r = extend_by_recurrence(&ball, lambda, r0, r1, 2 * n + 2);
        let scale = r0.abs().max(r1.abs());
        prop_assert!((r[n] - mu * r0).abs().max((r[n + 1] - mu * r1).abs()) <= 1e-8 * mu.abs() * scale);
    }
}
