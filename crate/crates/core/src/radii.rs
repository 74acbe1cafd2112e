//! The curvature-radius space of periodic P-polygons.
//!
//! A P-polygon `M` has sides `M_{i+1} - M_i = r_i (P_{i+1} - P_i)`; the list
//! `r` (one period) determines `M` up to translation. The space carries the
//! weighted inner product `<r, s>_P = sum r_i s_i / beta_i`, under which the
//! double evolute is self-adjoint.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ball::PolygonBall;
use crate::error::{CycloidError, Result};
use crate::geom::{det, solve_support_pair, wrap, Point};

/// Distinguished subspaces of the radii space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subspace {
    /// The whole space.
    L,
    /// Closed polygons.
    C,
    /// Symmetric polygons, `r_{i+N} = r_i`.
    S,
    /// Anti-symmetric polygons, `r_{i+N} = -r_i`.
    A,
    /// Double (zero width) polygons, `A` intersected with `C`.
    D,
    /// Balls, multiples of the all-ones vector.
    B,
    /// Constant-width polygons.
    W,
}

/// Membership of a radii vector in each [`Subspace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceTag {
    pub closed: bool,
    pub symmetric: bool,
    pub antisymmetric: bool,
    pub double: bool,
    pub ball: bool,
    pub constant_width: bool,
}

impl SubspaceTag {
    pub fn contains(&self, space: Subspace) -> bool {
        match space {
            Subspace::L => true,
            Subspace::C => self.closed,
            Subspace::S => self.symmetric,
            Subspace::A => self.antisymmetric,
            Subspace::D => self.double,
            Subspace::B => self.ball,
            Subspace::W => self.constant_width,
        }
    }
}

/// Radii of a periodic P-polygon, tied to its reference ball.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiiVector {
    radii: Vec<f64>,
    ball: Arc<PolygonBall>,
}

/// Radii of a periodic Q-polygon (the evolute side), relative to the dual ball.
#[derive(Clone, Debug, PartialEq)]
pub struct DualRadii {
    radii: Vec<f64>,
    ball: Arc<PolygonBall>,
}

fn check_len(ball: &PolygonBall, got: usize) -> Result<()> {
    if ball.len() != got {
        return Err(CycloidError::LengthMismatch {
            expected: ball.len(),
            got,
        });
    }
    Ok(())
}

fn same_ball(a: &Arc<PolygonBall>, b: &Arc<PolygonBall>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl RadiiVector {
    pub fn new(ball: Arc<PolygonBall>, radii: Vec<f64>) -> Result<Self> {
        check_len(&ball, radii.len())?;
        Ok(Self { radii, ball })
    }

    /// The ball itself: all radii equal to one.
    pub fn ones(ball: Arc<PolygonBall>) -> Self {
        let radii = vec![1.0; ball.len()];
        Self { radii, ball }
    }

    pub fn zeros(ball: Arc<PolygonBall>) -> Self {
        let radii = vec![0.0; ball.len()];
        Self { radii, ball }
    }

    pub(crate) fn from_parts(ball: Arc<PolygonBall>, radii: Vec<f64>) -> Self {
        debug_assert_eq!(ball.len(), radii.len());
        Self { radii, ball }
    }

    pub fn values(&self) -> &[f64] {
        &self.radii
    }

    pub fn into_values(self) -> Vec<f64> {
        self.radii
    }

    pub fn ball(&self) -> &Arc<PolygonBall> {
        &self.ball
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Radius `r_i`, taken cyclically.
    pub fn at(&self, i: isize) -> f64 {
        self.radii[wrap(i, self.radii.len())]
    }

    fn with_values(&self, radii: Vec<f64>) -> Self {
        Self {
            radii,
            ball: Arc::clone(&self.ball),
        }
    }

    fn ensure_same_ball(&self, other: &Self) -> Result<()> {
        if !same_ball(&self.ball, &other.ball) {
            return Err(CycloidError::BallMismatch);
        }
        check_len(&self.ball, other.radii.len())
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.ensure_same_ball(other)?;
        Ok(self.with_values(
            self.radii
                .iter()
                .zip(&other.radii)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        ))
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.with_values(self.radii.iter().map(|x| x * factor).collect())
    }

    /// `<self, other>_P = sum r_i s_i / beta_i`.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        self.ensure_same_ball(other)?;
        Ok(weighted_dot(&self.radii, &other.radii, self.ball.beta()))
    }

    pub fn norm(&self) -> f64 {
        weighted_dot(&self.radii, &self.radii, self.ball.beta()).sqrt()
    }

    /// `sum r_i (P_{i+1} - P_i)`: the displacement after one period.
    pub fn drift(&self) -> Point {
        self.radii
            .iter()
            .enumerate()
            .fold(Point::zeros(), |acc, (i, r)| acc + self.ball.side(i) * *r)
    }

    fn drift_scale(&self) -> f64 {
        self.radii
            .iter()
            .enumerate()
            .map(|(i, r)| r.abs() * self.ball.side(i).norm())
            .sum::<f64>()
            + 1e-300
    }

    pub fn is_closed(&self) -> bool {
        self.drift().norm() <= self.ball.tolerances().membership * self.drift_scale()
    }

    pub(crate) fn require_closed(&self) -> Result<()> {
        if self.is_closed() {
            Ok(())
        } else {
            Err(CycloidError::NotClosed {
                drift: self.drift().norm(),
            })
        }
    }

    fn max_abs(&self) -> f64 {
        self.radii.iter().fold(0.0_f64, |m, r| m.max(r.abs()))
    }

    fn parity_defect(&self, sign: f64) -> f64 {
        let half = self.ball.half_len();
        (0..half)
            .map(|i| (self.radii[i + half] - sign * self.radii[i]).abs())
            .fold(0.0, f64::max)
    }

    /// Tests membership in every distinguished subspace.
    pub fn classify(&self) -> SubspaceTag {
        let tol = self.ball.tolerances().membership;
        let scale = self.max_abs();
        let closed = self.is_closed();
        let symmetric = self.parity_defect(1.0) <= tol * scale;
        let antisymmetric = self.parity_defect(-1.0) <= tol * scale;
        let first = self.radii[0];
        let ball = self.radii.iter().all(|r| (r - first).abs() <= tol * scale);
        let (width, wscale) = self.width_with_scale();
        let w0 = width[0];
        let constant_width = width.iter().all(|w| (w - w0).abs() <= tol * wscale);
        SubspaceTag {
            closed,
            symmetric,
            antisymmetric,
            double: antisymmetric && closed,
            ball,
            constant_width,
        }
    }

    /// Orthogonal projection under `<.,.>_P` onto one of `S, A, C, D, B`.
    pub fn project(&self, target: Subspace) -> Result<Self> {
        let half = self.ball.half_len();
        let len = self.radii.len();
        match target {
            Subspace::S | Subspace::A => {
                let sign = if target == Subspace::S { 1.0 } else { -1.0 };
                let values = (0..len)
                    .map(|i| {
                        let partner = self.radii[(i + half) % len];
                        0.5 * (self.radii[i] + sign * partner)
                    })
                    .collect();
                Ok(self.with_values(values))
            }
            Subspace::B => {
                let ones = Self::ones(Arc::clone(&self.ball));
                let c = self.inner_product(&ones)? / ones.inner_product(&ones)?;
                Ok(ones.scale(c))
            }
            Subspace::C => Ok(self.remove_drift()),
            Subspace::D => Ok(self.project(Subspace::A)?.remove_drift()),
            other => Err(CycloidError::UnsupportedTarget(other)),
        }
    }

    /// Removes the component along the Riesz representers of the drift,
    /// which are the coordinate sequences `Q_i.x` and `Q_i.y`.
    fn remove_drift(&self) -> Self {
        let q = &self.ball.dual().vertices;
        let beta = self.ball.beta();
        let gx: Vec<f64> = q.iter().map(|p| p.x).collect();
        let gy: Vec<f64> = q.iter().map(|p| p.y).collect();
        let g11 = weighted_dot(&gx, &gx, beta);
        let g12 = weighted_dot(&gx, &gy, beta);
        let g22 = weighted_dot(&gy, &gy, beta);
        let d = self.drift();
        let det_g = g11 * g22 - g12 * g12;
        let cx = (d.x * g22 - d.y * g12) / det_g;
        let cy = (g11 * d.y - g12 * d.x) / det_g;
        self.with_values(
            self.radii
                .iter()
                .zip(gx.iter().zip(&gy))
                .map(|(r, (x, y))| r - cx * x - cy * y)
                .collect(),
        )
    }

    /// Vertices `M_1 .. M_{2mn+1}` with `M_1 = start`.
    pub fn reconstruct_vertices(&self, start: Point) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.radii.len() + 1);
        out.push(start);
        let mut m = start;
        for (i, r) in self.radii.iter().enumerate() {
            m += self.ball.side(i) * *r;
            out.push(m);
        }
        out
    }

    /// P-width `w_i` between side `i` and the opposite parallel side `i + n`.
    pub fn width_vector(&self) -> Vec<f64> {
        self.width_with_scale().0
    }

    fn width_with_scale(&self) -> (Vec<f64>, f64) {
        let len = self.radii.len();
        let n = self.ball.half_sides();
        let q = &self.ball.dual().vertices;
        let mut scale = 0.0_f64;
        let width = (0..len)
            .map(|i| {
                let mut w = 0.0;
                let mut s = 0.0;
                for k in i + 1..i + n {
                    let k = k % len;
                    let term = self.radii[k] * det(&self.ball.side(k), &q[i]);
                    w -= term;
                    s += term.abs();
                }
                scale = scale.max(s);
                w
            })
            .collect();
        (width, scale + 1e-300)
    }

    /// Signed Q-length `L_Q = sum r_i / beta_i`.
    pub fn signed_length_q(&self) -> f64 {
        self.radii
            .iter()
            .zip(self.ball.beta())
            .map(|(r, b)| r / b)
            .sum()
    }
}

impl DualRadii {
    pub fn new(ball: Arc<PolygonBall>, radii: Vec<f64>) -> Result<Self> {
        check_len(&ball, radii.len())?;
        Ok(Self { radii, ball })
    }

    pub(crate) fn from_parts(ball: Arc<PolygonBall>, radii: Vec<f64>) -> Self {
        Self { radii, ball }
    }

    pub fn values(&self) -> &[f64] {
        &self.radii
    }

    pub fn ball(&self) -> &Arc<PolygonBall> {
        &self.ball
    }

    /// `<self, other>_Q = sum s_i w_i / alpha_i`.
    pub fn inner_product(&self, other: &Self) -> Result<f64> {
        if !same_ball(&self.ball, &other.ball) {
            return Err(CycloidError::BallMismatch);
        }
        check_len(&self.ball, other.radii.len())?;
        Ok(weighted_dot(&self.radii, &other.radii, self.ball.alpha()))
    }

    /// Signed P-length `L_P = sum s_i / alpha_i`.
    pub fn signed_length_p(&self) -> f64 {
        self.radii
            .iter()
            .zip(self.ball.alpha())
            .map(|(s, a)| s / a)
            .sum()
    }

    /// Vertices of the Q-polygon, `N_{i+1} - N_i = s_i (Q_{i+1} - Q_i)`.
    pub fn reconstruct_vertices(&self, start: Point) -> Vec<Point> {
        let q = &self.ball.dual().vertices;
        let len = q.len();
        let mut out = Vec::with_capacity(len + 1);
        let mut m = start;
        out.push(m);
        for (i, s) in self.radii.iter().enumerate() {
            m += (q[(i + 1) % len] - q[i]) * *s;
            out.push(m);
        }
        out
    }
}

/// `sum x_i y_i / w_i`.
pub(crate) fn weighted_dot(x: &[f64], y: &[f64], w: &[f64]) -> f64 {
    x.iter().zip(y).zip(w).map(|((a, b), w)| a * b / w).sum()
}

pub fn inner_product(r: &RadiiVector, s: &RadiiVector) -> Result<f64> {
    r.inner_product(s)
}

pub fn classify_subspaces(r: &RadiiVector) -> SubspaceTag {
    r.classify()
}

pub fn project(r: &RadiiVector, target: Subspace) -> Result<RadiiVector> {
    r.project(target)
}

pub fn reconstruct_vertices(r: &RadiiVector, start: Point) -> Vec<Point> {
    r.reconstruct_vertices(start)
}

pub fn width_vector(r: &RadiiVector) -> Vec<f64> {
    r.width_vector()
}

pub fn signed_length_q(r: &RadiiVector) -> f64 {
    r.signed_length_q()
}

pub fn signed_length_p(s: &DualRadii) -> f64 {
    s.signed_length_p()
}

/// Radii from a support function: `r_i = h_i + beta_i (alpha_i (h_{i+1} - h_i) - alpha_{i-1} (h_i - h_{i-1}))`.
pub fn radii_from_support(h: &[f64], ball: Arc<PolygonBall>) -> Result<RadiiVector> {
    check_len(&ball, h.len())?;
    let len = h.len();
    let alpha = ball.alpha();
    let beta = ball.beta();
    let radii = (0..len)
        .map(|i| {
            let prev = (i + len - 1) % len;
            let next = (i + 1) % len;
            let fwd = alpha[i] * (h[next] - h[i]);
            let bwd = alpha[prev] * (h[i] - h[prev]);
            h[i] + beta[i] * (fwd - bwd)
        })
        .collect();
    Ok(RadiiVector::from_parts(ball, radii))
}

/// Places the polygon with support `h`: `M_i` satisfies `[M_i, Q_i] = h_i`
/// and `[M_i, Q_{i-1}] = h_{i-1}`. Returns `M_1 .. M_{2mn}`.
pub fn vertices_from_support(h: &[f64], ball: &PolygonBall) -> Result<Vec<Point>> {
    check_len(ball, h.len())?;
    let len = h.len();
    let q = &ball.dual().vertices;
    (0..len)
        .map(|i| {
            let prev = (i + len - 1) % len;
            solve_support_pair(&q[i], h[i], &q[prev], h[prev])
                .ok_or(CycloidError::DegenerateSolutionPair { index: i })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::validate_ball;
    use crate::random::{random_ball, rng};

    fn square() -> Arc<PolygonBall> {
        Arc::new(
            validate_ball(vec![
                Point::new(1.0, 0.0),
                Point::new(0.0, 1.0),
                Point::new(-1.0, 0.0),
                Point::new(0.0, -1.0),
            ])
            .unwrap(),
        )
    }

    fn octagon() -> Arc<PolygonBall> {
        Arc::new(PolygonBall::regular(4).unwrap())
    }

    #[test]
    fn inner_product_on_square() {
        let ball = square();
        let one = RadiiVector::ones(Arc::clone(&ball));
        assert_eq!(one.inner_product(&one).unwrap(), 4.0);
        let zero = RadiiVector::zeros(Arc::clone(&ball));
        assert_eq!(zero.inner_product(&one).unwrap(), 0.0);
    }

    #[test]
    fn inner_product_rejects_other_ball() {
        let a = RadiiVector::ones(square());
        let b = RadiiVector::ones(octagon());
        assert_eq!(a.inner_product(&b), Err(CycloidError::BallMismatch));
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            RadiiVector::new(square(), vec![1.0; 3]),
            Err(CycloidError::LengthMismatch {
                expected: 4,
                got: 3
            })
        ));
    }

    #[test]
    fn figure_radii_close_and_open() {
        let mut g = rng(7);
        for _ in 0..20 {
            let ball = Arc::new(random_ball(&mut g, 4));
            let closes = RadiiVector::new(
                Arc::clone(&ball),
                vec![0.5, 1.0, 1.5, 1.0, 0.5, 1.0, 1.5, 1.0],
            )
            .unwrap();
            assert!(closes.classify().closed);
            let verts = closes.reconstruct_vertices(Point::new(0.3, 0.1));
            assert!((verts[8] - verts[0]).norm() < 1e-12);
            let open =
                RadiiVector::new(ball, vec![1.0, 2.0, 1.0, 2.0, 1.0, 2.0, 1.0, -1.0]).unwrap();
            assert!(!open.classify().closed);
        }
    }

    #[test]
    fn ones_membership() {
        let tag = RadiiVector::ones(octagon()).classify();
        assert!(tag.ball && tag.symmetric && tag.closed && tag.constant_width);
        assert!(!tag.antisymmetric && !tag.double);
    }

    #[test]
    fn projections_split() {
        let mut g = rng(3);
        let ball = Arc::new(random_ball(&mut g, 5));
        let r = crate::random::random_radii(&mut g, Arc::clone(&ball));
        let s = r.project(Subspace::S).unwrap();
        let a = r.project(Subspace::A).unwrap();
        let sum = s.combine(1.0, &a, 1.0).unwrap();
        for (x, y) in sum.values().iter().zip(r.values()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(s.inner_product(&a).unwrap().abs() < 1e-12);
        let one = RadiiVector::ones(ball);
        assert!(one
            .project(Subspace::A)
            .unwrap()
            .values()
            .iter()
            .all(|x| *x == 0.0));
        assert!(matches!(
            r.project(Subspace::W),
            Err(CycloidError::UnsupportedTarget(Subspace::W))
        ));
    }

    #[test]
    fn closed_projection_is_idempotent_and_orthogonal() {
        let mut g = rng(11);
        let ball = Arc::new(random_ball(&mut g, 6));
        let r = crate::random::random_radii(&mut g, Arc::clone(&ball));
        let c = r.project(Subspace::C).unwrap();
        assert!(c.is_closed());
        let cc = c.project(Subspace::C).unwrap();
        for (x, y) in c.values().iter().zip(cc.values()) {
            assert!((x - y).abs() < 1e-12);
        }
        let rest = r.combine(1.0, &c, -1.0).unwrap();
        assert!(rest.inner_product(&c).unwrap().abs() < 1e-10);
    }

    #[test]
    fn unit_radii_reconstruct_ball() {
        let ball = octagon();
        let start = Point::new(2.0, -1.0);
        let verts = RadiiVector::ones(Arc::clone(&ball)).reconstruct_vertices(start);
        for (i, v) in verts.iter().enumerate() {
            let expect = ball.vertex(i as isize) - ball.vertices()[0] + start;
            assert!((v - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn width_of_ball_is_two() {
        let mut g = rng(5);
        for n in 2..8 {
            let ball = Arc::new(random_ball(&mut g, n));
            let w = RadiiVector::ones(ball).width_vector();
            assert!(w.iter().all(|x| (x - 2.0).abs() < 1e-12), "{w:?}");
        }
    }

    #[test]
    fn width_shift_by_ball() {
        let mut g = rng(9);
        let ball = Arc::new(random_ball(&mut g, 5));
        let r = crate::random::random_radii(&mut g, Arc::clone(&ball));
        let shifted = r.combine(1.0, &RadiiVector::ones(ball), 0.75).unwrap();
        for (a, b) in r.width_vector().iter().zip(shifted.width_vector()) {
            assert!((b - a - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn support_of_ball_gives_unit_radii() {
        let ball = octagon();
        let r = radii_from_support(&[1.0; 8], Arc::clone(&ball)).unwrap();
        assert!(r.values().iter().all(|x| (x - 1.0).abs() < 1e-12));
        let verts = vertices_from_support(&[1.0; 8], &ball).unwrap();
        for (v, p) in verts.iter().zip(ball.vertices()) {
            assert!((v - p).norm() < 1e-12);
        }
    }

    #[test]
    fn q_length_of_ones() {
        let ball = square();
        assert_eq!(RadiiVector::ones(ball).signed_length_q(), 4.0);
    }
}
