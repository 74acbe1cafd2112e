//! Discrete cycloids over convex symmetric polygonal unit balls.
//!
//! A convex, centrally symmetric polygon `P` is taken as the unit ball of a
//! normed plane. Polygonal lines whose sides are parallel to the sides of `P`
//! are described by their curvature radii, and the double evolute acts on
//! those radii as a linear operator. Its eigenvectors are the discrete
//! cycloids.
//!
//! Module map:
//! - [`ball`]: unit balls, duals and the coefficients `alpha`/`beta`.
//! - [`radii`]: the curvature-radius space, its inner product and subspaces.
//! - [`evolute`]: evolute, double evolute and double involute operators.
//! - [`spectrum`]: the cycloid eigenproblem, cusp counts, decompositions and
//!   the inverse Sturm-Liouville construction.
//! - [`halfturn`]: the half-turn transfer matrix, recurrence, multi-period
//!   spectra and spiraling cycloids.
//! - [`four_vertex`]: edgex counting and the four-edgex check.
//! - [`io`] and [`render`]: file formats and SVG output.

pub mod ball;
pub mod error;
pub mod evolute;
pub mod four_vertex;
pub mod geom;
pub mod halfturn;
pub mod io;
pub mod radii;
pub mod random;
pub mod render;
pub mod spectrum;
pub mod tolerance;

pub use ball::{dual_ball, traverse_m_times, validate_ball, DualBall, PolygonBall};
pub use error::{BallError, CycloidError, ErrorClass};
pub use evolute::EvoluteOperator;
pub use four_vertex::{count_edgices, verify_four_edgex, EdgexReport};
pub use geom::{det, Point};
pub use halfturn::{
    extend_by_recurrence, half_turn, multiperiod_spectrum, multiperiod_spectrum_by_roots,
    spiraling_cycloid, HalfTurnCase, HalfTurnTransform,
};
pub use radii::{RadiiVector, Subspace, SubspaceTag};
pub use spectrum::{
    count_cusps, decompose_into_cycloids, inverse_sturm_liouville, open_cycloid_from_direction,
    solve_spectrum, CuspReport, Cycloid, CycloidSpectrum, Parity, SpaceClass, SpectralLabel,
};
pub use tolerance::Tolerances;
