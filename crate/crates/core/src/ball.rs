//! Polygonal unit balls and their duals.
//!
//! A ball `P = P_1 .. P_2n` is a centrally symmetric, strictly convex polygon
//! listed counter-clockwise around the origin. Its dual `Q` is the unique
//! polygon with `[P_i, Q_i] = 1` and `Q_i` parallel to the side `P_i P_{i+1}`:
//!
//! ```text
//! Q_i     =  beta_i  (P_{i+1} - P_i),   beta_i  = 1 / [P_i, P_{i+1}]
//! P_{i+1} = -alpha_i (Q_{i+1} - Q_i),   alpha_i = 1 / [Q_i, Q_{i+1}]
//! ```
//!
//! A ball may also be traversed `m` times (see [`traverse_m_times`]); all
//! operators then act on `2mn`-periodic sequences.

use std::f64::consts::PI;

use crate::error::BallError;
use crate::geom::{det, diameter, Point};
use crate::tolerance::Tolerances;

/// The dual polygon `Q` together with the coefficient sequences.
#[derive(Clone, Debug, PartialEq)]
pub struct DualBall {
    pub vertices: Vec<Point>,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl DualBall {
    /// Computes `Q`, `alpha` and `beta` from a closed vertex list.
    fn from_vertices(p: &[Point]) -> Self {
        let len = p.len();
        let beta: Vec<f64> = (0..len)
            .map(|i| 1.0 / det(&p[i], &p[(i + 1) % len]))
            .collect();
        let vertices: Vec<Point> = (0..len)
            .map(|i| (p[(i + 1) % len] - p[i]) * beta[i])
            .collect();
        let alpha = (0..len)
            .map(|i| 1.0 / det(&vertices[i], &vertices[(i + 1) % len]))
            .collect();
        Self {
            vertices,
            alpha,
            beta,
        }
    }

    /// Treats `Q` as a unit ball in its own right.
    pub fn as_ball(&self) -> Result<PolygonBall, BallError> {
        validate_ball(self.vertices.clone())
    }
}

/// A validated polygonal unit ball, possibly traversed several times.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonBall {
    vertices: Vec<Point>,
    half_sides: usize,
    turns: usize,
    dual: DualBall,
    tol: Tolerances,
}

/// Validates a vertex list with the default tolerances.
pub fn validate_ball(vertices: Vec<Point>) -> Result<PolygonBall, BallError> {
    PolygonBall::validate_with(vertices, Tolerances::default())
}

/// The `2mn`-vertex ball obtained by going `m` times around `ball`.
pub fn traverse_m_times(ball: &PolygonBall, m: usize) -> Result<PolygonBall, BallError> {
    if m < 1 {
        return Err(BallError::InvalidM(m));
    }
    let vertices: Vec<Point> = ball
        .vertices
        .iter()
        .cycle()
        .take(ball.vertices.len() * m)
        .copied()
        .collect();
    let dual = DualBall {
        vertices: repeat(&ball.dual.vertices, m),
        alpha: repeat(&ball.dual.alpha, m),
        beta: repeat(&ball.dual.beta, m),
    };
    Ok(PolygonBall {
        vertices,
        half_sides: ball.half_sides,
        turns: ball.turns * m,
        dual,
        tol: ball.tol,
    })
}

fn repeat<T: Clone>(items: &[T], m: usize) -> Vec<T> {
    items
        .iter()
        .cycle()
        .take(items.len() * m)
        .cloned()
        .collect()
}

impl PolygonBall {
    /// Validates `vertices` as a symmetric convex ball.
    ///
    /// Clockwise input is reversed. Vertices whose symmetric partner is within
    /// tolerance are snapped to exact symmetry; anything further off is
    /// rejected.
    pub fn validate_with(mut vertices: Vec<Point>, tol: Tolerances) -> Result<Self, BallError> {
        let len = vertices.len();
        if len % 2 == 1 {
            return Err(BallError::OddVertexCount(len));
        }
        if len < 4 {
            return Err(BallError::TooFewVertices(len));
        }
        if let Some(i) = vertices
            .iter()
            .position(|p| !p.x.is_finite() || !p.y.is_finite())
        {
            return Err(BallError::NonFinite(i));
        }
        let n = len / 2;

        let twice_area: f64 = (0..len)
            .map(|i| det(&vertices[i], &vertices[(i + 1) % len]))
            .sum();
        if twice_area < 0.0 {
            vertices.reverse();
        }

        let diam = diameter(&vertices);
        if diam == 0.0 {
            return Err(BallError::DegenerateSide { index: 0 });
        }
        let eps = tol.geometry * diam;
        for i in 0..n {
            let deviation = (vertices[i + n] + vertices[i]).norm();
            if deviation > eps {
                return Err(BallError::NotSymmetric {
                    index: i + n,
                    partner: i,
                    deviation,
                });
            }
        }
        for i in 0..n {
            vertices[i + n] = -vertices[i];
        }

        for i in 0..len {
            let side = vertices[(i + 1) % len] - vertices[i];
            if side.norm() <= eps {
                return Err(BallError::DegenerateSide { index: i });
            }
        }
        let area_eps = tol.geometry * diam * diam;
        for i in 0..len {
            let prev = vertices[i] - vertices[(i + len - 1) % len];
            let next = vertices[(i + 1) % len] - vertices[i];
            if det(&prev, &next) <= area_eps
                || det(&vertices[i], &vertices[(i + 1) % len]) <= area_eps
            {
                return Err(BallError::NotConvex { index: i });
            }
        }

        let winding = winding_number(&vertices);
        if winding != 1 {
            return Err(BallError::NotSimple { winding });
        }

        let dual = DualBall::from_vertices(&vertices);
        Ok(Self {
            vertices,
            half_sides: n,
            turns: 1,
            dual,
            tol,
        })
    }

    /// Regular `2n`-gon scaled so that it is congruent to its dual,
    /// `|P_i| = 1 / sqrt(cos(pi / 2n))`, with `P_1` on the positive x axis.
    pub fn regular(n: usize) -> Result<Self, BallError> {
        if n < 2 {
            return Err(BallError::TooFewVertices(2 * n));
        }
        let gamma = PI / (2 * n) as f64;
        let radius = 1.0 / gamma.cos().sqrt();
        let vertices = (0..2 * n)
            .map(|i| {
                let phi = 2.0 * gamma * i as f64;
                Point::new(radius * phi.cos(), radius * phi.sin())
            })
            .collect();
        validate_ball(vertices)
    }

    /// All `2mn` vertices.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Vertex `i`, taken cyclically.
    pub fn vertex(&self, i: isize) -> Point {
        self.vertices[crate::geom::wrap(i, self.vertices.len())]
    }

    /// `n`, half the number of sides of the underlying (single-turn) ball.
    pub fn half_sides(&self) -> usize {
        self.half_sides
    }

    /// Number of traversals `m`.
    pub fn turns(&self) -> usize {
        self.turns
    }

    /// Length `2mn` of the radii sequences over this ball.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Half-period `mn` used by the symmetric/antisymmetric split.
    pub fn half_len(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn dual(&self) -> &DualBall {
        &self.dual
    }

    pub fn alpha(&self) -> &[f64] {
        &self.dual.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.dual.beta
    }

    /// Side vector `P_{i+1} - P_i`.
    pub fn side(&self, i: usize) -> Point {
        let len = self.vertices.len();
        self.vertices[(i + 1) % len] - self.vertices[i % len]
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Same ball with different tolerances.
    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// The single-turn ball this one was built from.
    pub fn base(&self) -> PolygonBall {
        let len = 2 * self.half_sides;
        PolygonBall {
            vertices: self.vertices[..len].to_vec(),
            half_sides: self.half_sides,
            turns: 1,
            dual: DualBall {
                vertices: self.dual.vertices[..len].to_vec(),
                alpha: self.dual.alpha[..len].to_vec(),
                beta: self.dual.beta[..len].to_vec(),
            },
            tol: self.tol,
        }
    }

    /// Ball scaled by `factor` (positive).
    pub fn scaled(&self, factor: f64) -> Result<PolygonBall, BallError> {
        let vertices = self.vertices[..2 * self.half_sides]
            .iter()
            .map(|p| p * factor)
            .collect();
        let base = PolygonBall::validate_with(vertices, self.tol)?;
        traverse_m_times(&base, self.turns)
    }
}

/// Returns the dual of `ball`.
pub fn dual_ball(ball: &PolygonBall) -> DualBall {
    ball.dual.clone()
}

fn winding_number(vertices: &[Point]) -> i64 {
    let len = vertices.len();
    let total: f64 = (0..len)
        .map(|i| {
            let a = vertices[i];
            let b = vertices[(i + 1) % len];
            det(&a, &b).atan2(a.dot(&b))
        })
        .sum();
    (total / (2.0 * PI)).round() as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point> {
        vec![
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
        ]
    }

    #[test]
    fn square_is_valid() {
        let ball = validate_ball(square()).unwrap();
        assert_eq!(ball.half_sides(), 2);
        assert_eq!(ball.turns(), 1);
        assert_eq!(ball.len(), 4);
    }

    #[test]
    fn square_dual_by_hand() {
        // beta_i = 1 / [P_i, P_{i+1}] = 1, so Q_i = P_{i+1} - P_i.
        let ball = validate_ball(square()).unwrap();
        let dual = dual_ball(&ball);
        let expected = [
            Point::new(-1.0, 1.0),
            Point::new(-1.0, -1.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
        ];
        for (i, e) in expected.iter().enumerate() {
            assert!((dual.vertices[i] - e).norm() < 1e-15);
            assert!((dual.beta[i] - 1.0).abs() < 1e-15);
            // [Q_i, Q_{i+1}] = 2
            assert!((dual.alpha[i] - 0.5).abs() < 1e-15);
            assert!((det(&ball.vertices()[i], &dual.vertices[i]) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let mut v = square();
        v.reverse();
        let ball = validate_ball(v).unwrap();
        let p = ball.vertices();
        assert!(det(&p[0], &p[1]) > 0.0);
    }

    #[test]
    fn asymmetric_square_rejected() {
        let mut v = square();
        v[3] = Point::new(0.0, -2.0);
        assert!(matches!(
            validate_ball(v),
            Err(BallError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn odd_and_short_lists_rejected() {
        let mut v = square();
        v.pop();
        assert_eq!(validate_ball(v), Err(BallError::OddVertexCount(3)));
        assert_eq!(
            validate_ball(vec![Point::new(1.0, 0.0), Point::new(-1.0, 0.0)]),
            Err(BallError::TooFewVertices(2))
        );
    }

    #[test]
    fn collinear_vertex_rejected() {
        // Hexagon with a vertex in the middle of a square side.
        let v = vec![
            Point::new(1.0, -1.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(-1.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(-1.0, -1.0),
        ];
        assert!(matches!(validate_ball(v), Err(BallError::NotConvex { .. })));
    }

    #[test]
    fn repeated_vertex_rejected() {
        let v = vec![
            Point::new(1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(-1.0, 0.0),
            Point::new(-1.0, 0.0),
            Point::new(0.0, -1.0),
        ];
        assert!(matches!(
            validate_ball(v),
            Err(BallError::DegenerateSide { .. })
        ));
    }

    #[test]
    fn double_wound_polygon_rejected() {
        let v: Vec<Point> = (0..10)
            .map(|i| {
                let phi = 4.0 * PI * i as f64 / 10.0;
                Point::new(phi.cos(), phi.sin())
            })
            .collect();
        // 10 points going twice around a pentagon; not symmetric in the
        // P_{i+n} = -P_i sense either, but winding is what we exercise here.
        assert!(validate_ball(v).is_err());
    }

    #[test]
    fn regular_polygon_coefficients() {
        for n in 2..12 {
            let ball = PolygonBall::regular(n).unwrap();
            let gamma = PI / (2 * n) as f64;
            let expected = 1.0 / (2.0 * gamma.sin());
            for i in 0..2 * n {
                assert!((ball.alpha()[i] - expected).abs() < 1e-12 * expected);
                assert!((ball.beta()[i] - expected).abs() < 1e-12 * expected);
                let q = ball.dual().vertices[i].norm();
                assert!((q - ball.vertices()[i].norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn traversal() {
        let ball = validate_ball(square()).unwrap();
        assert_eq!(traverse_m_times(&ball, 1).unwrap(), ball);
        let twice = traverse_m_times(&ball, 2).unwrap();
        assert_eq!(twice.len(), 8);
        assert_eq!(twice.turns(), 2);
        assert_eq!(&twice.vertices()[4..], ball.vertices());
        assert_eq!(traverse_m_times(&ball, 0), Err(BallError::InvalidM(0)));
        assert_eq!(twice.base(), ball);
    }

    #[test]
    fn regular_traversed_three_times() {
        let n = 5;
        let ball = traverse_m_times(&PolygonBall::regular(n).unwrap(), 3).unwrap();
        let expected = 1.0 / (2.0 * (PI / (2 * n) as f64).sin());
        assert_eq!(ball.len(), 6 * n);
        for i in 0..6 * n {
            assert!((ball.alpha()[i] - expected).abs() < 1e-12);
            assert!((ball.beta()[i] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn dual_of_dual_shifts_index() {
        // Dual of Q: Q'_i = alpha_i (Q_{i+1} - Q_i) = -P_{i+1} = P_{i+1+n}.
        let ball = PolygonBall::regular(3).unwrap().scaled(1.7).unwrap();
        let q_ball = ball.dual().as_ball().unwrap();
        let qq = q_ball.dual();
        let len = ball.len();
        let n = ball.half_sides();
        for i in 0..len {
            let expect = ball.vertices()[(i + 1 + n) % len];
            assert!((qq.vertices[i] - expect).norm() < 1e-12);
        }
    }
}
