//! Evolutes, double evolutes and the double involute.
//!
//! The evolute of a P-polygon with radii `r` is the Q-polygon of centers
//! `E_i = M_i - r_i P_i`, whose Q-radii are `s_i = alpha_i (r_{i+1} - r_i)`.
//! Taking the evolute again with respect to `Q` gives a P-polygon with radii
//! `t_i = -beta_i (s_i - s_{i-1})`, so `T_P = E_Q E_P` is linear on radii.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::ball::PolygonBall;
use crate::error::Result;
use crate::geom::Point;
use crate::radii::{DualRadii, RadiiVector};
use crate::spectrum::{solve_spectrum, CycloidSpectrum};

/// Dense matrices of `E_P`, `E_Q` and `T_P = E_Q E_P` for one ball.
#[derive(Clone, Debug)]
pub struct EvoluteOperator {
    ep: DMatrix<f64>,
    eq: DMatrix<f64>,
    tp: DMatrix<f64>,
    ball: Arc<PolygonBall>,
}

impl EvoluteOperator {
    pub fn new(ball: Arc<PolygonBall>) -> Self {
        let len = ball.len();
        let alpha = ball.alpha();
        let beta = ball.beta();
        let mut ep = DMatrix::zeros(len, len);
        let mut eq = DMatrix::zeros(len, len);
        for i in 0..len {
            ep[(i, i)] -= alpha[i];
            ep[(i, (i + 1) % len)] += alpha[i];
            eq[(i, (i + len - 1) % len)] += beta[i];
            eq[(i, i)] -= beta[i];
        }
        let tp = &eq * &ep;
        Self { ep, eq, tp, ball }
    }

    pub fn ep(&self) -> &DMatrix<f64> {
        &self.ep
    }

    pub fn eq(&self) -> &DMatrix<f64> {
        &self.eq
    }

    pub fn tp(&self) -> &DMatrix<f64> {
        &self.tp
    }

    pub fn ball(&self) -> &Arc<PolygonBall> {
        &self.ball
    }

    /// `T_P r` through the matrix product.
    pub fn apply_tp(&self, r: &RadiiVector) -> RadiiVector {
        let v = &self.tp * DVector::from_column_slice(r.values());
        RadiiVector::from_parts(Arc::clone(r.ball()), v.iter().copied().collect())
    }

    /// `E_P r` through the matrix product.
    pub fn apply_ep(&self, r: &RadiiVector) -> DualRadii {
        let v = &self.ep * DVector::from_column_slice(r.values());
        DualRadii::from_parts(Arc::clone(r.ball()), v.iter().copied().collect())
    }

    /// `E_Q s` through the matrix product.
    pub fn apply_eq(&self, s: &DualRadii) -> RadiiVector {
        let v = &self.eq * DVector::from_column_slice(s.values());
        RadiiVector::from_parts(Arc::clone(s.ball()), v.iter().copied().collect())
    }
}

/// Q-radii of the evolute: `s_i = alpha_i (r_{i+1} - r_i)`.
pub fn evolute(r: &RadiiVector) -> DualRadii {
    let len = r.len();
    let alpha = r.ball().alpha();
    let v = r.values();
    let s = (0..len)
        .map(|i| alpha[i] * (v[(i + 1) % len] - v[i]))
        .collect();
    DualRadii::from_parts(Arc::clone(r.ball()), s)
}

/// P-radii of the evolute of a Q-polygon: `t_i = -beta_i (s_i - s_{i-1})`.
pub fn evolute_of_dual(s: &DualRadii) -> RadiiVector {
    let v = s.values();
    let len = v.len();
    let beta = s.ball().beta();
    let t = (0..len)
        .map(|i| -beta[i] * (v[i] - v[(i + len - 1) % len]))
        .collect();
    RadiiVector::from_parts(Arc::clone(s.ball()), t)
}

/// Radii of the double evolute, `T_P r`.
pub fn double_evolute(r: &RadiiVector) -> RadiiVector {
    evolute_of_dual(&evolute(r))
}

/// Evolute vertices `E_j = M_j - r_j P_j` for `j = 0 ..= 2mn`, where `M` is
/// reconstructed from `start`.
pub fn evolute_vertices(r: &RadiiVector, start: Point) -> Vec<Point> {
    let ball = r.ball();
    r.reconstruct_vertices(start)
        .iter()
        .enumerate()
        .map(|(j, m)| m - ball.vertex(j as isize) * r.at(j as isize))
        .collect()
}

/// Double evolute vertices for `j = 0 ..= 2mn`. Entry `j` is `E_j - s_j Q_j`,
/// i.e. the vertex one step ahead of `E_j`, so that entry `j` minus entry
/// `j - 1` equals `t_j (P_{j+1} - P_j)` and `t` shares the indexing of `r`.
pub fn double_evolute_vertices(r: &RadiiVector, start: Point) -> Vec<Point> {
    let s = evolute(r);
    let q = &r.ball().dual().vertices;
    let len = q.len();
    evolute_vertices(r, start)
        .iter()
        .enumerate()
        .map(|(j, e)| e - q[j % len] * s.values()[j % len])
        .collect()
}

/// Spectral pseudo-inverse of `T_P` applied to a closed `r`; the component
/// along the ball direction is discarded.
pub fn double_involute(r: &RadiiVector) -> Result<RadiiVector> {
    r.require_closed()?;
    let spectrum = solve_spectrum(r.ball())?;
    double_involute_with(r, &spectrum)
}

/// Same as [`double_involute`] with a precomputed spectrum of `r`'s ball.
pub fn double_involute_with(r: &RadiiVector, spectrum: &CycloidSpectrum) -> Result<RadiiVector> {
    r.require_closed()?;
    let mut out = vec![0.0; r.len()];
    for cluster in spectrum.clusters() {
        let lambda = cluster.eigenvalue;
        if lambda <= spectrum.zero_threshold() {
            continue;
        }
        for idx in cluster.members {
            let e = &spectrum.cycloids()[idx].radii;
            let c = r.inner_product(e)? / lambda;
            for (o, x) in out.iter_mut().zip(e.values()) {
                *o += c * x;
            }
        }
    }
    Ok(RadiiVector::from_parts(Arc::clone(r.ball()), out))
}
