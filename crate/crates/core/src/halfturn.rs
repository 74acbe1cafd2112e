//! Half-turn transfer matrix and everything built on it.
//!
//! For a fixed `lambda` the cycloid equation is a second-order recurrence
//!
//! ```text
//! r_{k+1} = (1 + a_{k-1}/a_k - lambda / (a_k b_k)) r_k - (a_{k-1}/a_k) r_{k-1}
//! ```
//!
//! (`a = alpha`, `b = beta`). Its step matrices `S_k` multiply to the
//! half-turn transform `H = S_{n} ... S_1` (0-based), which maps
//! `(r_0, r_1)` to `(r_n, r_{n+1})` and has determinant one. The trace of `H`
//! locates the eigenvalues of every `m`-times traversed ball: the new
//! eigenvalue with label `p = k + j/m` is the root of `tr H = 2 cos(pi p)`
//! inside the gap between the old labels `k` and `k + 1`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use crate::ball::{traverse_m_times, PolygonBall};
use crate::error::{BallError, CycloidError, Result};
use crate::geom::Point;
use crate::radii::RadiiVector;
use crate::spectrum::{
    cusp_report, solve_spectrum, Cycloid, CycloidSpectrum, Parity, SpaceClass, SpectralLabel,
};

/// Default relative tolerance for telling the six half-turn cases apart.
pub const CASE_TOL: f64 = 1e-9;

/// Grid samples per interval per traversal when bracketing trace roots.
const GRID_PER_TURN: usize = 64;

/// Absolute bisection tolerance in `lambda`.
const ROOT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HalfTurnCase {
    /// `H = I`: double eigenvalue, both eigenvectors symmetric.
    Identity,
    /// `H = -I`: double eigenvalue, both eigenvectors anti-symmetric.
    NegIdentity,
    /// Single eigenvalue 1 (Jordan block): simple symmetric eigenvalue.
    SinglePlus1,
    /// Single eigenvalue -1 (Jordan block): simple anti-symmetric eigenvalue.
    SingleMinus1,
    /// Real eigenvalues `mu`, `1/mu` with `|mu| > 1`.
    RealHyperbolic,
    /// Eigenvalues `exp(+-i theta)`.
    ComplexElliptic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalfTurnTransform {
    pub lambda: f64,
    pub matrix: Matrix2<f64>,
    pub case: HalfTurnCase,
    /// Rotation angle in `(0, pi)` for the elliptic case.
    pub theta: Option<f64>,
    /// Eigenvalue of modulus greater than one for the hyperbolic case.
    pub mu: Option<f64>,
}

impl HalfTurnTransform {
    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }

    pub fn apply(&self, rho: (f64, f64)) -> (f64, f64) {
        let v = self.matrix * Vector2::new(rho.0, rho.1);
        (v.x, v.y)
    }

    /// Eigenvector of `mu` in the hyperbolic case.
    pub fn expanding_direction(&self) -> Option<(f64, f64)> {
        let mu = self.mu?;
        let h = &self.matrix;
        // (H - mu I) v = 0, pick the better conditioned row.
        let (a, b) = (h[(0, 0)] - mu, h[(0, 1)]);
        let (c, d) = (h[(1, 0)], h[(1, 1)] - mu);
        let v = if a.abs() + b.abs() >= c.abs() + d.abs() {
            (b, -a)
        } else {
            (d, -c)
        };
        let norm = (v.0 * v.0 + v.1 * v.1).sqrt();
        Some((v.0 / norm, v.1 / norm))
    }
}

/// Coefficients `(c1, c0)` of `r_{k+1} = c1 r_k - c0 r_{k-1}` at index `k`.
fn step_coefficients(ball: &PolygonBall, lambda: f64, k: isize) -> (f64, f64) {
    let len = ball.len() as isize;
    let alpha = ball.alpha();
    let beta = ball.beta();
    let at = |i: isize| i.rem_euclid(len) as usize;
    let a_prev = alpha[at(k - 1)];
    let a_k = alpha[at(k)];
    let ratio = a_prev / a_k;
    (1.0 + ratio - lambda / (a_k * beta[at(k)]), ratio)
}

/// Step matrix `S_k(lambda)` taking `(r_{k-1}, r_k)` to `(r_k, r_{k+1})`.
pub fn step_matrix(ball: &PolygonBall, lambda: f64, k: isize) -> Matrix2<f64> {
    let (c1, c0) = step_coefficients(ball, lambda, k);
    Matrix2::new(0.0, 1.0, -c0, c1)
}

/// The half-turn transform at `lambda`, classified with [`CASE_TOL`].
pub fn half_turn(ball: &PolygonBall, lambda: f64) -> HalfTurnTransform {
    half_turn_with_tol(ball, lambda, CASE_TOL)
}

pub fn half_turn_with_tol(ball: &PolygonBall, lambda: f64, tol: f64) -> HalfTurnTransform {
    let matrix = half_turn_matrix(ball, lambda);
    let scale = 1.0 + matrix.abs().max();
    let eps = tol * scale;
    let tr = matrix.trace();
    let (case, theta, mu) = if tr.abs() > 2.0 + eps {
        let disc = (tr * tr - 4.0).sqrt();
        let mu = if tr > 0.0 {
            (tr + disc) / 2.0
        } else {
            (tr - disc) / 2.0
        };
        (HalfTurnCase::RealHyperbolic, None, Some(mu))
    } else if tr.abs() < 2.0 - eps {
        (HalfTurnCase::ComplexElliptic, Some((tr / 2.0).acos()), None)
    } else if tr > 0.0 {
        if (matrix - Matrix2::identity()).abs().max() <= eps {
            (HalfTurnCase::Identity, None, None)
        } else {
            (HalfTurnCase::SinglePlus1, None, None)
        }
    } else if (matrix + Matrix2::identity()).abs().max() <= eps {
        (HalfTurnCase::NegIdentity, None, None)
    } else {
        (HalfTurnCase::SingleMinus1, None, None)
    };
    HalfTurnTransform {
        lambda,
        matrix,
        case,
        theta,
        mu,
    }
}

fn half_turn_matrix(ball: &PolygonBall, lambda: f64) -> Matrix2<f64> {
    let n = ball.half_sides() as isize;
    (1..=n).fold(Matrix2::identity(), |acc, k| {
        step_matrix(ball, lambda, k) * acc
    })
}

/// `tr H_lambda`.
pub fn half_turn_trace(ball: &PolygonBall, lambda: f64) -> f64 {
    half_turn_matrix(ball, lambda).trace()
}

/// Forward solution `r_0 .. r_{count-1}` of the recurrence seeded with
/// `r_0 = r1`, `r_1 = r2`.
pub fn extend_by_recurrence(
    ball: &PolygonBall,
    lambda: f64,
    r1: f64,
    r2: f64,
    count: usize,
) -> Vec<f64> {
    recurrence_window(ball, lambda, r1, r2, 0, count as isize)
}

/// Solution values `r_start .. r_{end-1}` of the recurrence seeded with
/// `r_0 = r1`, `r_1 = r2`; negative indices run the recurrence backwards.
pub fn recurrence_window(
    ball: &PolygonBall,
    lambda: f64,
    r1: f64,
    r2: f64,
    start: isize,
    end: isize,
) -> Vec<f64> {
    if end <= start {
        return Vec::new();
    }
    let mut forward = vec![r1, r2];
    let mut k = 1;
    while (forward.len() as isize) < end {
        let (c1, c0) = step_coefficients(ball, lambda, k);
        let next = c1 * forward[k as usize] - c0 * forward[k as usize - 1];
        forward.push(next);
        k += 1;
    }
    // backward[i] holds r_{-1-i}
    let mut backward: Vec<f64> = Vec::new();
    let mut k: isize = 0;
    while -(backward.len() as isize) > start {
        let r_k = if k >= 0 {
            forward[k as usize]
        } else {
            backward[(-k - 1) as usize]
        };
        let r_next = if k + 1 >= 0 {
            forward[(k + 1) as usize]
        } else {
            backward[(-k - 2) as usize]
        };
        let (c1, c0) = step_coefficients(ball, lambda, k);
        backward.push((c1 * r_k - r_next) / c0);
        k -= 1;
    }
    (start..end)
        .map(|i| {
            if i >= 0 {
                forward[i as usize]
            } else {
                backward[(-i - 1) as usize]
            }
        })
        .collect()
}

/// Radii of a generic cycloid over `laps` traversals of the ball.
pub fn spiraling_radii(ball: &PolygonBall, lambda: f64, r1: f64, r2: f64, laps: usize) -> Vec<f64> {
    extend_by_recurrence(ball, lambda, r1, r2, laps * 2 * ball.half_sides())
}

/// Vertices (starting at the origin) of the polygonal line with the radii of
/// [`spiraling_radii`]; `2n * laps + 1` points.
pub fn spiraling_cycloid(
    ball: &PolygonBall,
    lambda: f64,
    r1: f64,
    r2: f64,
    laps: usize,
) -> Vec<Point> {
    let radii = spiraling_radii(ball, lambda, r1, r2, laps);
    let mut out = Vec::with_capacity(radii.len() + 1);
    let mut m = Point::zeros();
    out.push(m);
    for (i, r) in radii.iter().enumerate() {
        m += ball.side(i) * *r;
        out.push(m);
    }
    out
}

/// Spectrum of the `m`-times traversed ball, preferring the root-finding
/// route and falling back to the direct eigensolve when they disagree.
pub fn multiperiod_spectrum(ball: &PolygonBall, m: usize) -> Result<CycloidSpectrum> {
    let direct_ball = Arc::new(traverse_m_times(&ball.base(), m)?);
    let direct = solve_spectrum(&direct_ball)?;
    match multiperiod_spectrum_by_roots(ball, m) {
        Ok(roots) if spectra_agree(&roots, &direct, 1e-7) => Ok(roots),
        _ => Ok(direct),
    }
}

/// Eigenvalues agree pairwise to `rel` relative to their size (with a floor
/// of `rel * 1e-6 * lambda_max` near zero).
pub fn spectra_agree(a: &CycloidSpectrum, b: &CycloidSpectrum, rel: f64) -> bool {
    max_relative_gap(a, b).is_some_and(|g| g <= rel)
}

/// Largest relative eigenvalue gap between two spectra of equal size.
pub fn max_relative_gap(a: &CycloidSpectrum, b: &CycloidSpectrum) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let floor = 1e-6 * a.lambda_max().max(b.lambda_max());
    let mut x = a.eigenvalues();
    let mut y = b.eigenvalues();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    Some(
        x.iter()
            .zip(&y)
            .map(|(p, q)| (p - q).abs() / (p.abs().max(q.abs()) + floor))
            .fold(0.0, f64::max),
    )
}

/// Spectrum of the `m`-times traversed ball built from the single-turn
/// spectrum plus roots of the half-turn trace equation.
pub fn multiperiod_spectrum_by_roots(ball: &PolygonBall, m: usize) -> Result<CycloidSpectrum> {
    if m < 1 {
        return Err(BallError::InvalidM(m).into());
    }
    let base = Arc::new(ball.base());
    let base_spec = solve_spectrum(&base)?;
    if m == 1 {
        return Ok(base_spec);
    }
    let n = base.half_sides();
    let mball = Arc::new(traverse_m_times(&base, m)?);
    let len = mball.len();
    let half = mball.half_len();
    let tol = *base.tolerances();

    let lambda_of = |k: usize, branch: Option<u8>| -> f64 {
        base_spec
            .get(k, branch)
            .map(|c| c.eigenvalue)
            .expect("base spectrum carries every label")
    };

    // (eigenvalue, radii, label index, branch)
    let mut entries: Vec<(f64, Vec<f64>, usize, Option<u8>)> = Vec::with_capacity(len);
    let norm_tile = 1.0 / (m as f64).sqrt();
    for c in base_spec.cycloids() {
        let values: Vec<f64> = c
            .radii
            .values()
            .iter()
            .cycle()
            .take(len)
            .map(|x| x * norm_tile)
            .collect();
        entries.push((c.eigenvalue, values, c.label.index * m, c.label.branch));
    }

    for k in 0..n {
        let left = if k == 0 {
            lambda_of(0, None)
        } else {
            lambda_of(k, Some(2))
        };
        let right = if k + 1 == n {
            lambda_of(n, None)
        } else {
            lambda_of(k + 1, Some(1))
        };
        for j in 1..m {
            let p = k as f64 + j as f64 / m as f64;
            let target = 2.0 * (PI * p).cos();
            let root = bracket_and_bisect(
                |l| half_turn_trace(&base, l) - target,
                left,
                right,
                GRID_PER_TURN * m,
            )
            .ok_or(CycloidError::RootNotBracketed { interval: k, j })?;
            let q = k * m + j;
            let parity = Parity::of_label(q);
            let pair = elliptic_eigenvectors(&mball, root, parity, half)?;
            for (b, v) in pair.into_iter().enumerate() {
                entries.push((root, v, q, Some(b as u8 + 1)));
            }
        }
    }

    entries.sort_by(|x, y| x.2.cmp(&y.2).then(x.3.cmp(&y.3)));
    for w in entries.windows(2) {
        if w[1].0 < w[0].0 - tol.degeneracy * w[0].0.abs().max(1.0) {
            return Err(CycloidError::SpectralOrderViolation(format!(
                "trace roots out of order near lambda = {:.6}",
                w[1].0
            )));
        }
    }

    let lambda_max = entries.last().map(|e| e.0).unwrap_or(0.0);
    let mut cycloids = Vec::with_capacity(len);
    for (eigenvalue, mut values, index, branch) in entries {
        normalize_first_positive(&mut values);
        let radii = RadiiVector::new(Arc::clone(&mball), values)?;
        let cusps = cusp_report(radii.values(), true, tol.cusp_zero)?;
        let parity = Parity::of_label(index);
        let space_class = if index == 0 {
            SpaceClass::Ball
        } else if index == m {
            SpaceClass::Open
        } else if parity == Parity::Symmetric {
            SpaceClass::Symmetric
        } else {
            SpaceClass::Antisymmetric
        };
        cycloids.push(Cycloid {
            eigenvalue,
            radii,
            parity,
            space_class,
            cusps,
            label: SpectralLabel {
                index,
                turns: m,
                branch,
            },
        });
    }
    Ok(CycloidSpectrum::from_parts(cycloids, mball, lambda_max))
}

fn normalize_first_positive(values: &mut [f64]) {
    let max = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if let Some(first) = values.iter().find(|x| x.abs() > 1e-9 * max) {
        if *first < 0.0 {
            values.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Two orthonormal (under `<.,.>_P`) eigenvectors for an elliptic root,
/// generated by the recurrence from the seeds `(1, 0)` and `(0, 1)`.
fn elliptic_eigenvectors(
    mball: &Arc<PolygonBall>,
    lambda: f64,
    parity: Parity,
    half: usize,
) -> Result<Vec<Vec<f64>>> {
    let len = mball.len();
    let sign = parity.sign();
    let pure = |v: Vec<f64>| -> Vec<f64> {
        (0..len)
            .map(|i| 0.5 * (v[i] + sign * v[(i + half) % len]))
            .collect()
    };
    let a = RadiiVector::new(
        Arc::clone(mball),
        pure(extend_by_recurrence(mball, lambda, 1.0, 0.0, len)),
    )?;
    let b = RadiiVector::new(
        Arc::clone(mball),
        pure(extend_by_recurrence(mball, lambda, 0.0, 1.0, len)),
    )?;
    let a = a.scale(1.0 / a.norm());
    let b = b.combine(1.0, &a, -b.inner_product(&a)?)?;
    let b = b.scale(1.0 / b.norm());
    Ok(vec![a.into_values(), b.into_values()])
}

/// Finds a sign change of `g` on a uniform grid over `[lo, hi]` and refines it
/// by bisection.
fn bracket_and_bisect<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, samples: usize) -> Option<f64> {
    let step = (hi - lo) / samples as f64;
    let mut prev_x = lo;
    let mut prev_g = g(lo);
    for s in 1..=samples {
        let x = if s == samples {
            hi
        } else {
            lo + step * s as f64
        };
        let gx = g(x);
        if gx == 0.0 {
            return Some(x);
        }
        if prev_g.signum() != gx.signum() {
            return Some(bisect(&g, prev_x, x, prev_g));
        }
        prev_x = x;
        prev_g = gx;
    }
    None
}

fn bisect<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64, mut g_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= ROOT_TOL.max(4.0 * f64::EPSILON * mid.abs()) {
            return mid;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == g_lo.signum() {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
