//! Edgices and the four-edgex check.
//!
//! An edgex is a zero-crossing of `Delta r_i = r_{i+1} - r_i`, i.e. a maximal
//! run of sides at a strict local extremum of the radii. A plateau between a
//! rise and a fall counts once; a plateau inside a monotone stretch does not
//! count. Every closed polygon that is not a ball has at least four edgices,
//! and at least six when it has constant width.

use serde::Serialize;

use crate::error::{CycloidError, Result};
use crate::evolute::double_involute_with;
use crate::radii::RadiiVector;
use crate::spectrum::solve_spectrum;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgexReport {
    pub edgex_count: usize,
    /// Each edgex as a cyclic index range `[first, last]` of radii.
    pub positions: Vec<[usize; 2]>,
    /// `(iteration, edgex_count)` along `I_P^k r`, starting with `k = 0`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub involute_trace: Vec<(usize, usize)>,
    pub constant_width: bool,
}

/// Edgices of a periodic sequence. Differences with
/// `|d| <= plateau_tol * max|d|` are treated as zero.
pub fn edgex_positions(values: &[f64], plateau_tol: f64) -> Result<Vec<[usize; 2]>> {
    let len = values.len();
    if len == 0 {
        return Err(CycloidError::EmptyInput);
    }
    let diffs: Vec<f64> = (0..len)
        .map(|i| values[(i + 1) % len] - values[i])
        .collect();
    let max = diffs.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    if max == 0.0 {
        return Err(CycloidError::ConstantRadii);
    }
    let thr = plateau_tol * max;
    let nonzero: Vec<usize> = (0..len).filter(|&i| diffs[i].abs() > thr).collect();
    let mut positions = Vec::new();
    for (k, &a) in nonzero.iter().enumerate() {
        let b = nonzero[(k + 1) % nonzero.len()];
        if diffs[a].signum() != diffs[b].signum() {
            // radii a+1 ..= b sit between the rise and the fall
            positions.push([(a + 1) % len, b]);
        }
    }
    positions.sort_unstable();
    Ok(positions)
}

/// Counts the edgices of `r` per period.
pub fn count_edgices(r: &RadiiVector) -> Result<EdgexReport> {
    let tol = r.ball().tolerances();
    let positions = edgex_positions(r.values(), tol.plateau)?;
    Ok(EdgexReport {
        edgex_count: positions.len(),
        positions,
        involute_trace: Vec::new(),
        constant_width: r.classify().constant_width,
    })
}

/// Checks the four-edgex (six for constant width) lower bound on a closed
/// `r` that is not a ball.
pub fn verify_four_edgex(r: &RadiiVector) -> Result<EdgexReport> {
    verify_four_edgex_with_trace(r, 0)
}

/// [`verify_four_edgex`], also recording edgex counts along `iterations`
/// steps of the renormalized double involute.
pub fn verify_four_edgex_with_trace(r: &RadiiVector, iterations: usize) -> Result<EdgexReport> {
    r.require_closed()?;
    let mut report = count_edgices(r)?;
    let bound = if report.constant_width { 6 } else { 4 };
    if report.edgex_count < bound {
        return Err(CycloidError::TheoremViolated(format!(
            "{} edgices, expected at least {bound}",
            report.edgex_count
        )));
    }
    if iterations > 0 {
        report.involute_trace = involute_trace(r, iterations)?;
    }
    Ok(report)
}

/// Edgex counts of `I_P^k r` for `k = 0 ..= iterations`, each iterate scaled
/// to unit norm. Stops early if an iterate has no edgices left to count.
pub fn involute_trace(r: &RadiiVector, iterations: usize) -> Result<Vec<(usize, usize)>> {
    r.require_closed()?;
    let spectrum = solve_spectrum(r.ball())?;
    let plateau = r.ball().tolerances().plateau;
    let mut trace = vec![(0, edgex_positions(r.values(), plateau)?.len())];
    let mut x = r.clone();
    for k in 1..=iterations {
        x = double_involute_with(&x, &spectrum)?;
        let norm = x.norm();
        if norm == 0.0 {
            break;
        }
        x = x.scale(1.0 / norm);
        match edgex_positions(x.values(), plateau) {
            Ok(p) => trace.push((k, p.len())),
            Err(CycloidError::ConstantRadii) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(trace)
}
