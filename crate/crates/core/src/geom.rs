//! Plane primitives shared by every module.

use nalgebra::Vector2;

/// A point or vector in the plane.
pub type Point = Vector2<f64>;

/// Determinant `[v, w]` of the 2x2 matrix with columns `v` and `w`.
#[inline]
pub fn det(v: &Point, w: &Point) -> f64 {
    v.x * w.y - v.y * w.x
}

/// Cyclic index into a sequence of length `len`; `i` may be negative.
#[inline]
pub fn wrap(i: isize, len: usize) -> usize {
    i.rem_euclid(len as isize) as usize
}

/// Largest distance between two points of the list (brute force).
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0_f64;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max((a - b).norm());
        }
    }
    best
}

/// Solves `[m, a] = ha` and `[m, b] = hb` for `m`.
pub(crate) fn solve_support_pair(a: &Point, ha: f64, b: &Point, hb: f64) -> Option<Point> {
    // [m, a] = m.x a.y - m.y a.x
    let d = a.y * (-b.x) - (-a.x) * b.y;
    if d == 0.0 {
        return None;
    }
    let x = (ha * (-b.x) - (-a.x) * hb) / d;
    let y = (a.y * hb - b.y * ha) / d;
    Some(Point::new(x, y))
}
