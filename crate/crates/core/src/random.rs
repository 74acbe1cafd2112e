//! Seeded generators for random balls and radii vectors.
//!
//! A random ball has half-vertices `rho_i (cos theta_i, sin theta_i)` with
//! sorted angles `theta_i` in `(0, pi)` and radii `rho_i` in `[0.5, 2]`,
//! completed by their negatives and conditioned on strict convexity. Plain
//! rejection is hopeless beyond a handful of vertices, so the conditioned
//! distribution is sampled with a single-site Metropolis chain started at the
//! regular polygon: each step redraws one angle uniformly between its
//! neighbours or one radius uniformly in `[0.5, 2]`, and keeps the draw when
//! the polygon stays strictly convex.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ball::{validate_ball, PolygonBall};
use crate::geom::{det, Point};
use crate::radii::{RadiiVector, Subspace};

pub type TestRng = ChaCha8Rng;

const RHO_MIN: f64 = 0.5;
const RHO_MAX: f64 = 2.0;
const SWEEPS: usize = 200;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Chain {
    theta: Vec<f64>,
    rho: Vec<f64>,
}

impl Chain {
    fn regular(n: usize) -> Self {
        Self {
            theta: (0..n).map(|i| (i as f64 + 0.5) * PI / n as f64).collect(),
            rho: vec![1.0; n],
        }
    }

    fn n(&self) -> usize {
        self.theta.len()
    }

    /// Vertex `j` of the full `2n`-gon, any integer `j`.
    fn vertex(&self, j: isize) -> Point {
        let n = self.n() as isize;
        let k = j.rem_euclid(2 * n);
        let i = (k % n) as usize;
        let v = Point::new(self.theta[i].cos(), self.theta[i].sin()) * self.rho[i];
        if k < n {
            v
        } else {
            -v
        }
    }

    fn convex_at(&self, j: isize) -> bool {
        let a = self.vertex(j - 1);
        let b = self.vertex(j);
        let c = self.vertex(j + 1);
        det(&(b - a), &(c - b)) > 0.0
    }

    /// Convexity at the vertices whose turn depends on half-vertex `i`; the
    /// mirrored turns are equal by symmetry.
    fn convex_near(&self, i: usize) -> bool {
        let i = i as isize;
        (i - 1..=i + 1).all(|j| self.convex_at(j))
    }

    fn step<R: Rng>(&mut self, rng: &mut R) {
        let n = self.n();
        let i = rng.random_range(0..n);
        if rng.random_bool(0.5) {
            let lo = if i == 0 { 0.0 } else { self.theta[i - 1] };
            let hi = if i + 1 == n { PI } else { self.theta[i + 1] };
            let old = self.theta[i];
            let new = rng.random_range(lo..hi);
            if new <= lo {
                return;
            }
            self.theta[i] = new;
            if !self.convex_near(i) {
                self.theta[i] = old;
            }
        } else {
            let old = self.rho[i];
            self.rho[i] = rng.random_range(RHO_MIN..=RHO_MAX);
            if !self.convex_near(i) {
                self.rho[i] = old;
            }
        }
    }

    fn vertices(&self) -> Vec<Point> {
        (0..2 * self.n() as isize).map(|j| self.vertex(j)).collect()
    }
}

/// A random symmetric convex `2n`-gon.
pub fn random_ball<R: Rng>(rng: &mut R, n: usize) -> PolygonBall {
    assert!(n >= 2, "a ball needs at least 4 vertices");
    let mut chain = Chain::regular(n);
    loop {
        for _ in 0..SWEEPS * 2 * n {
            chain.step(rng);
        }
        let mut vertices = chain.vertices();
        // Random rotation of the starting vertex keeps index 0 generic.
        vertices.rotate_left(rng.random_range(0..2 * n));
        if let Ok(ball) = validate_ball(vertices) {
            return ball;
        }
    }
}

/// Radii with independent entries in `[-1, 1]`.
pub fn random_radii<R: Rng>(rng: &mut R, ball: Arc<PolygonBall>) -> RadiiVector {
    let values = (0..ball.len())
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect();
    RadiiVector::new(ball, values).expect("length matches")
}

/// A random closed radii vector (not necessarily convex).
pub fn random_closed<R: Rng>(rng: &mut R, ball: Arc<PolygonBall>) -> RadiiVector {
    random_radii(rng, ball)
        .project(Subspace::C)
        .expect("C is a supported target")
}

/// A random closed convex polygon that is not a ball: `1 + c v` with `v`
/// closed and `c` small enough to keep every radius positive.
pub fn random_closed_convex<R: Rng>(rng: &mut R, ball: Arc<PolygonBall>) -> RadiiVector {
    let ones = RadiiVector::ones(Arc::clone(&ball));
    loop {
        let v = random_closed(rng, Arc::clone(&ball));
        let amp = v.values().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if amp < 1e-6 {
            continue;
        }
        let c = rng.random_range(0.05..0.95) / amp;
        return ones.combine(1.0, &v, c).expect("same ball");
    }
}

/// A random convex polygon of constant width: a ball plus a zero-width part.
///
/// Needs `n >= 3`; on a parallelogram every constant-width polygon is a ball.
pub fn random_constant_width<R: Rng>(rng: &mut R, ball: Arc<PolygonBall>) -> RadiiVector {
    assert!(
        ball.half_sides() >= 3,
        "no zero-width part exists for n = 2"
    );
    let ones = RadiiVector::ones(Arc::clone(&ball));
    loop {
        let d = random_radii(rng, Arc::clone(&ball))
            .project(Subspace::D)
            .expect("D is a supported target");
        let amp = d.values().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if amp < 1e-6 {
            continue;
        }
        let c = rng.random_range(0.05..0.95) / amp;
        return ones.combine(1.0, &d, c).expect("same ball");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_balls_validate() {
        let mut g = rng(1);
        for n in 2..=16 {
            for _ in 0..5 {
                let ball = random_ball(&mut g, n);
                assert_eq!(ball.len(), 2 * n);
                assert!(ball.alpha().iter().all(|a| *a > 0.0));
                assert!(ball.beta().iter().all(|b| *b > 0.0));
            }
        }
    }

    #[test]
    fn generators_respect_their_subspaces() {
        let mut g = rng(2);
        let ball = Arc::new(random_ball(&mut g, 6));
        let r = random_closed_convex(&mut g, Arc::clone(&ball));
        assert!(r.is_closed());
        assert!(r.values().iter().all(|x| *x > 0.0));
        let w = random_constant_width(&mut g, ball);
        let tag = w.classify();
        assert!(tag.closed && tag.constant_width && !tag.ball);
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_ball(&mut rng(99), 7);
        let b = random_ball(&mut rng(99), 7);
        assert_eq!(a, b);
    }
}
