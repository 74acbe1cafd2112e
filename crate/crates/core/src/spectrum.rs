//! The cycloid eigenproblem `T_P r = lambda r`.
//!
//! `T_P` is not symmetric as a matrix, but it is self-adjoint for the weighted
//! inner product with weights `w_i = 1 / beta_i`. We therefore diagonalize the
//! symmetric matrix `W^{1/2} T_P W^{-1/2}` and map eigenvectors back with
//! `W^{-1/2}`, which makes them orthonormal under `<.,.>_P`.
//!
//! In ascending order the eigenvalues carry the labels
//!
//! ```text
//! position   0    1  2    3  4   ...   2N-3 2N-2   2N-1
//! label      0    1  1    2  2   ...    N-1  N-1    N
//! branch     -    1  2    1  2   ...     1    2     -
//! ```
//!
//! with `N = mn`. Labels with odd index belong to anti-symmetric vectors and
//! labels with even index to symmetric ones, so each parity block is labelled
//! by rank alone; a merged list that is not ascending is reported as a
//! numerical failure. On an `m`-times traversed ball the label `q`
//! corresponds to the fractional index `q / m`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::ball::PolygonBall;
use crate::error::{CycloidError, Result};
use crate::geom::{det, Point};
use crate::radii::RadiiVector;

/// Symmetric or anti-symmetric under the half-period shift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

impl Parity {
    /// Parity expected for label `q`.
    pub fn of_label(q: usize) -> Self {
        if q.is_multiple_of(2) {
            Parity::Symmetric
        } else {
            Parity::Antisymmetric
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => -1.0,
        }
    }
}

/// Coarse class of a cycloid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpaceClass {
    /// Eigenvalue 0: the ball itself.
    Ball,
    /// Eigenvalue 1: cycloids that do not close.
    Open,
    Symmetric,
    Antisymmetric,
}

impl fmt::Display for SpaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SpaceClass::Ball => "BALL",
            SpaceClass::Open => "OPEN",
            SpaceClass::Symmetric => "SYMMETRIC",
            SpaceClass::Antisymmetric => "ANTISYMMETRIC",
        };
        f.write_str(s)
    }
}

/// Position of an eigenvalue in the ordered spectrum.
///
/// `index / turns` is the (possibly fractional) label `k + j/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpectralLabel {
    pub index: usize,
    pub turns: usize,
    /// 1 or 2 for paired eigenvalues; `None` for the first and last.
    pub branch: Option<u8>,
}

impl SpectralLabel {
    pub fn from_position(position: usize, len: usize, turns: usize) -> Self {
        let index = position.div_ceil(2);
        let branch = if position == 0 || position + 1 == len {
            None
        } else if position % 2 == 1 {
            Some(1)
        } else {
            Some(2)
        };
        Self {
            index,
            turns,
            branch,
        }
    }

    /// Integer part `k`.
    pub fn whole(&self) -> usize {
        self.index / self.turns
    }

    /// Numerator `j` of the fractional part `j/m`.
    pub fn frac_numerator(&self) -> usize {
        self.index % self.turns
    }

    pub fn value(&self) -> f64 {
        self.index as f64 / self.turns as f64
    }

    pub fn is_integer(&self) -> bool {
        self.index.is_multiple_of(self.turns)
    }

    /// Text form: `"k"` or `"k+j/m"`.
    pub fn text(&self) -> String {
        if self.is_integer() {
            self.whole().to_string()
        } else {
            format!("{}+{}/{}", self.whole(), self.frac_numerator(), self.turns)
        }
    }

    /// Form usable inside file names: `"k"` or `"k+j-m"`.
    pub fn file_text(&self) -> String {
        self.text().replace('/', "-")
    }

    pub fn parity(&self) -> Parity {
        Parity::of_label(self.index)
    }
}

/// Cusp statistics of a radii sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CuspReport {
    /// Number of zero-crossings per period.
    pub count: usize,
    /// Every crossing has at most one zero radius between the opposite signs.
    pub ordinary: bool,
    /// For each crossing, the last non-zero index before it and the first one after it.
    pub crossings: Vec<(usize, usize)>,
}

/// One eigenpair of `T_P`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cycloid {
    pub eigenvalue: f64,
    /// Unit vector under `<.,.>_P`, first non-zero entry positive.
    pub radii: RadiiVector,
    pub parity: Parity,
    pub space_class: SpaceClass,
    pub cusps: CuspReport,
    pub label: SpectralLabel,
}

impl Cycloid {
    pub fn cusp_count(&self) -> usize {
        self.cusps.count
    }

    /// `||T_P e - lambda e||_P / ||e||_P`.
    pub fn residual(&self) -> f64 {
        let t = crate::evolute::double_evolute(&self.radii);
        let diff = t
            .combine(1.0, &self.radii, -self.eigenvalue)
            .expect("same ball");
        diff.norm() / self.radii.norm()
    }
}

/// A group of numerically equal eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub eigenvalue: f64,
    pub members: Vec<usize>,
}

/// The full ordered spectrum of `T_P` on one ball.
#[derive(Clone, Debug)]
pub struct CycloidSpectrum {
    cycloids: Vec<Cycloid>,
    ball: Arc<PolygonBall>,
    lambda_max: f64,
}

impl CycloidSpectrum {
    pub fn cycloids(&self) -> &[Cycloid] {
        &self.cycloids
    }

    pub fn ball(&self) -> &Arc<PolygonBall> {
        &self.ball
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.cycloids.iter().map(|c| c.eigenvalue).collect()
    }

    pub fn len(&self) -> usize {
        self.cycloids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycloids.is_empty()
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    /// Eigenvalues below this are treated as the zero eigenvalue.
    pub fn zero_threshold(&self) -> f64 {
        self.ball.tolerances().degeneracy * self.lambda_max
    }

    /// Consecutive eigenvalues grouped by the degeneracy threshold.
    pub fn clusters(&self) -> Vec<Cluster> {
        cluster_sorted(&self.eigenvalues(), self.zero_threshold())
    }

    /// Cycloid with label `index` and `branch`.
    pub fn get(&self, index: usize, branch: Option<u8>) -> Option<&Cycloid> {
        self.cycloids
            .iter()
            .find(|c| c.label.index == index && c.label.branch == branch)
    }

    pub(crate) fn from_parts(
        cycloids: Vec<Cycloid>,
        ball: Arc<PolygonBall>,
        lambda_max: f64,
    ) -> Self {
        Self {
            cycloids,
            ball,
            lambda_max,
        }
    }
}

fn cluster_sorted(values: &[f64], threshold: f64) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for (i, v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(c) if (v - values[*c.members.last().unwrap()]).abs() <= threshold => {
                c.members.push(i);
            }
            _ => out.push(Cluster {
                eigenvalue: *v,
                members: vec![i],
            }),
        }
    }
    for c in &mut out {
        c.eigenvalue = c.members.iter().map(|&i| values[i]).sum::<f64>() / c.members.len() as f64;
    }
    out
}

/// `W^{1/2} T W^{-1/2}` restricted to sequences with `r_{i+N} = sign * r_i`,
/// written in the coordinates `r_0 .. r_{N-1}` (`N = half`).
fn block_operator(alpha: &[f64], beta: &[f64], half: usize, sign: f64) -> DMatrix<f64> {
    let len = alpha.len();
    let mut a = DMatrix::zeros(half, half);
    for i in 0..half {
        let prev = (i + len - 1) % len;
        a[(i, i)] += beta[i] * (alpha[i] + alpha[prev]);
        let next = i + 1;
        let off = -alpha[i] * (beta[i] * beta[next % len]).sqrt();
        let (j, off) = if next == half {
            (0, sign * off)
        } else {
            (next, off)
        };
        a[(i, j)] += off;
        a[(j, i)] += off;
    }
    a
}

/// `W^{1/2} T W^{-1/2}` on all `len` coordinates.
fn symmetrized_operator(alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let len = alpha.len();
    let mut a = DMatrix::zeros(len, len);
    for i in 0..len {
        let prev = (i + len - 1) % len;
        let next = (i + 1) % len;
        a[(i, i)] += beta[i] * (alpha[i] + alpha[prev]);
        let off = -alpha[i] * (beta[i] * beta[next]).sqrt();
        a[(i, next)] += off;
        a[(next, i)] += off;
    }
    a
}

/// Eigenpairs of a symmetric matrix, ascending, as `(lambda, y)`.
fn symmetric_eigenpairs(a: DMatrix<f64>) -> Result<Vec<(f64, DVector<f64>)>> {
    let len = a.nrows();
    let eig = SymmetricEigen::try_new(a, 1e-15, 100_000)
        .ok_or_else(|| CycloidError::EigensolverFailure("symmetric QR did not converge".into()))?;
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..len)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(pairs)
}

/// Label index of the eigenvalue at `rank` inside its parity block of size `half`.
fn block_label(rank: usize, parity: Parity) -> usize {
    match parity {
        Parity::Symmetric => 2 * rank.div_ceil(2),
        Parity::Antisymmetric => 2 * (rank / 2) + 1,
    }
}

fn normalize_sign(values: &mut [f64]) {
    let max = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if let Some(first) = values.iter().find(|x| x.abs() > 1e-9 * max) {
        if *first < 0.0 {
            values.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// One eigenpair of a parity block before assembly.
struct BlockEntry {
    index: usize,
    branch: Option<u8>,
    lambda: f64,
    y: Vec<f64>,
    parity: Parity,
}

/// Solves the full eigenproblem of `T_P` on `ball` (any number of turns).
///
/// `T_P` commutes with the half-period shift, so the symmetric and
/// anti-symmetric sequences are solved as two separate blocks. Within each
/// block the ascending rank fixes the label, which keeps labels exact even
/// when a symmetric and an anti-symmetric eigenvalue agree to machine
/// precision.
pub fn solve_spectrum(ball: &Arc<PolygonBall>) -> Result<CycloidSpectrum> {
    let alpha = ball.alpha();
    let beta = ball.beta();
    let len = ball.len();
    let half = ball.half_len();
    let turns = ball.turns();
    let tol = *ball.tolerances();

    let mut entries: Vec<BlockEntry> = Vec::with_capacity(len);
    for parity in [Parity::Symmetric, Parity::Antisymmetric] {
        let sign = parity.sign();
        let pairs = symmetric_eigenpairs(block_operator(alpha, beta, half, sign))?;
        for (rank, (lambda, y)) in pairs.into_iter().enumerate() {
            let index = block_label(rank, parity);
            let branch = if index == 0 || index == half {
                None
            } else if (parity == Parity::Symmetric) == (rank % 2 == 1) {
                Some(1)
            } else {
                Some(2)
            };
            let full: Vec<f64> = (0..len)
                .map(|i| {
                    let s = if i < half { 1.0 } else { sign };
                    s * y[i % half] * std::f64::consts::FRAC_1_SQRT_2
                })
                .collect();
            entries.push(BlockEntry {
                index,
                branch,
                lambda,
                y: full,
                parity,
            });
        }
    }
    entries.sort_by(|x, y| x.index.cmp(&y.index).then(x.branch.cmp(&y.branch)));

    let lambda_max = entries
        .iter()
        .map(|e| e.lambda)
        .fold(f64::MIN_POSITIVE, f64::max);
    let slack = tol.degeneracy * lambda_max;
    for w in entries.windows(2) {
        if w[1].lambda < w[0].lambda - slack {
            return Err(CycloidError::SpectralOrderViolation(format!(
                "eigenvalue {:.6} (label {}) lies below {:.6} (label {})",
                w[1].lambda, w[1].index, w[0].lambda, w[0].index
            )));
        }
    }

    let mut cycloids = Vec::with_capacity(len);
    for BlockEntry {
        index,
        branch,
        lambda,
        y,
        parity,
    } in entries
    {
        let label = SpectralLabel {
            index,
            turns,
            branch,
        };
        let mut values: Vec<f64> = y.iter().zip(beta).map(|(v, b)| v * b.sqrt()).collect();
        normalize_sign(&mut values);
        let radii = RadiiVector::from_parts(Arc::clone(ball), values);
        let cusps = cusp_report(radii.values(), true, tol.cusp_zero)?;
        let space_class = if index == 0 {
            SpaceClass::Ball
        } else if index == turns {
            SpaceClass::Open
        } else if parity == Parity::Symmetric {
            SpaceClass::Symmetric
        } else {
            SpaceClass::Antisymmetric
        };
        let eigenvalue = if index == 0 { lambda.max(0.0) } else { lambda };
        cycloids.push(Cycloid {
            eigenvalue,
            radii,
            parity,
            space_class,
            cusps,
            label,
        });
    }

    Ok(CycloidSpectrum {
        cycloids,
        ball: Arc::clone(ball),
        lambda_max,
    })
}

/// Zero-crossing statistics of a raw sequence. Entries with
/// `|x| <= zero_tol * max|x|` count as zero.
pub fn cusp_report(values: &[f64], cyclic: bool, zero_tol: f64) -> Result<CuspReport> {
    let max = values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return Err(CycloidError::AllZero);
    }
    let thr = zero_tol * max;
    let nonzero: Vec<usize> = (0..values.len())
        .filter(|&i| values[i].abs() > thr)
        .collect();
    let len = values.len();
    let mut pairs: Vec<(usize, usize)> = nonzero.windows(2).map(|w| (w[0], w[1])).collect();
    if cyclic && nonzero.len() > 1 {
        pairs.push((*nonzero.last().unwrap(), nonzero[0]));
    }
    let mut crossings = Vec::new();
    let mut ordinary = true;
    for (a, b) in pairs {
        if values[a].signum() != values[b].signum() {
            let gap = (b + len - a) % len;
            if gap > 2 {
                ordinary = false;
            }
            crossings.push((a, b));
        }
    }
    Ok(CuspReport {
        count: crossings.len(),
        ordinary,
        crossings,
    })
}

/// Cusps of a periodic P-polygon: zero-crossings of its radii per period.
pub fn count_cusps(r: &RadiiVector) -> Result<CuspReport> {
    cusp_report(r.values(), true, r.ball().tolerances().cusp_zero)
}

/// The eigenvalue-1 cycloid `u_i = [X, Q_i]`. Its radii are returned as
/// given by that formula, without normalization.
pub fn open_cycloid_from_direction(x: Point, ball: &Arc<PolygonBall>) -> Result<Cycloid> {
    if x.norm() == 0.0 || !x.x.is_finite() || !x.y.is_finite() {
        return Err(CycloidError::ZeroDirection);
    }
    let values: Vec<f64> = ball.dual().vertices.iter().map(|q| det(&x, q)).collect();
    let radii = RadiiVector::from_parts(Arc::clone(ball), values);
    let cusps = cusp_report(radii.values(), true, ball.tolerances().cusp_zero)?;
    let parity = Parity::of_label(ball.turns());
    Ok(Cycloid {
        eigenvalue: 1.0,
        radii,
        parity,
        space_class: SpaceClass::Open,
        cusps,
        label: SpectralLabel {
            index: ball.turns(),
            turns: ball.turns(),
            branch: None,
        },
    })
}

/// Coefficients of a closed `r` in the orthonormal cycloid basis.
pub fn decompose_into_cycloids(r: &RadiiVector) -> Result<Vec<(Cycloid, f64)>> {
    r.require_closed()?;
    let spectrum = solve_spectrum(r.ball())?;
    decompose_with(r, &spectrum)
}

/// [`decompose_into_cycloids`] with a precomputed spectrum.
pub fn decompose_with(r: &RadiiVector, spectrum: &CycloidSpectrum) -> Result<Vec<(Cycloid, f64)>> {
    r.require_closed()?;
    spectrum
        .cycloids()
        .iter()
        .map(|c| Ok((c.clone(), r.inner_product(&c.radii)?)))
        .collect()
}

/// Sum of `coefficient * cycloid` over a decomposition.
pub fn recompose(parts: &[(Cycloid, f64)]) -> Option<RadiiVector> {
    let first = parts.first()?;
    let mut acc = first.0.radii.scale(first.1);
    for (c, coeff) in &parts[1..] {
        acc = acc.combine(1.0, &c.radii, *coeff).ok()?;
    }
    Some(acc)
}

/// Builds a ball whose cycloid problem is the Sturm-Liouville problem
/// `(a_i (u_{i+1} - u_i)) - (a_{i-1} (u_i - u_{i-1})) + lambda b_i u_i = 0`
/// with `n`-periodic coefficients `a`, `b` and `2n`-periodic `u`.
///
/// Requires eigenvalue 1 to be double. The result is unique only up to a
/// linear map of the plane; it satisfies `alpha_i = a_i` and `beta_i = 1/b_i`.
pub fn inverse_sturm_liouville(a: &[f64], b: &[f64]) -> Result<PolygonBall> {
    let n = a.len();
    if b.len() != n {
        return Err(CycloidError::LengthMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if n < 2 {
        return Err(CycloidError::LengthMismatch {
            expected: 2,
            got: n,
        });
    }
    if a.iter()
        .chain(b)
        .any(|x| x.is_nan() || *x <= 0.0 || x.is_infinite())
    {
        return Err(CycloidError::Format(
            "Sturm-Liouville coefficients must be positive and finite".into(),
        ));
    }
    let len = 2 * n;
    let alpha: Vec<f64> = (0..len).map(|i| a[i % n]).collect();
    let beta: Vec<f64> = (0..len).map(|i| 1.0 / b[i % n]).collect();
    let pairs = symmetric_eigenpairs(symmetrized_operator(&alpha, &beta))?;
    let lambda_max = pairs.last().unwrap().0;
    let unit: Vec<&(f64, DVector<f64>)> = pairs
        .iter()
        .filter(|(l, _)| (l - 1.0).abs() <= 1e-8 * lambda_max.max(1.0))
        .collect();
    if unit.len() != 2 {
        return Err(CycloidError::NotDoubleEigenvalueOne {
            multiplicity: unit.len(),
        });
    }
    let to_radii = |y: &DVector<f64>| -> Vec<f64> {
        y.iter().zip(&beta).map(|(v, bt)| v * bt.sqrt()).collect()
    };
    let x = to_radii(&unit[0].1);
    let mut y = to_radii(&unit[1].1);

    let mut q: Vec<Point> = (0..len).map(|i| Point::new(x[i], y[i])).collect();
    let scale = q.iter().fold(0.0_f64, |m, p| m.max(p.norm_squared()));
    let brackets: Vec<f64> = (0..len).map(|i| det(&q[i], &q[(i + 1) % len])).collect();
    if let Some(index) = brackets.iter().position(|c| c.abs() <= 1e-12 * scale) {
        return Err(CycloidError::DegenerateSolutionPair { index });
    }
    if brackets[0] < 0.0 {
        y.iter_mut().for_each(|v| *v = -*v);
        q = (0..len).map(|i| Point::new(x[i], y[i])).collect();
    }
    // The discrete Wronskian a_i [Q_i, Q_{i+1}] is constant; scale it to 1.
    let wronskian = alpha[0] * det(&q[0], &q[1]);
    let s = 1.0 / wronskian.sqrt();
    q.iter_mut().for_each(|p| *p *= s);

    let p: Vec<Point> = (0..len)
        .map(|i| {
            let prev = (i + len - 1) % len;
            -(q[i] - q[prev]) / det(&q[prev], &q[i])
        })
        .collect();
    crate::ball::validate_ball(p).map_err(CycloidError::NotABall)
}
