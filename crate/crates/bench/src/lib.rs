//! Seeded inputs shared by the benchmarks.

use std::sync::Arc;

use discrete_cycloids::random::{random_ball, random_closed_convex, rng};
use discrete_cycloids::{PolygonBall, RadiiVector};

/// A random ball with `n` half-sides; the same `n` always gives the same ball.
pub fn ball(n: usize) -> Arc<PolygonBall> {
    Arc::new(random_ball(&mut rng(n as u64), n))
}

pub fn regular(n: usize) -> Arc<PolygonBall> {
    Arc::new(PolygonBall::regular(n).expect("n >= 2"))
}

/// A closed convex polygon on [`ball`]`(n)`.
pub fn closed_convex(n: usize) -> RadiiVector {
    let mut g = rng(1000 + n as u64);
    random_closed_convex(&mut g, ball(n))
}
