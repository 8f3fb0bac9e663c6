//! Conic geometry toolkit.
//!
//! The crate computes cone-restricted operator norms and singular values,
//! classifies biconic feasibility instances with Renegar-style condition
//! numbers, evaluates conic intrinsic volumes and moment functionals, and
//! produces Gaussian comparison bound curves together with Monte Carlo
//! verification harnesses.
//!
//! Module layout:
//!
//! * [`numerics`]: special functions, chi distributions, quadrature, seeded
//!   Gaussian sampling, and small dense spectral routines.
//! * [`cones`]: closed convex cone descriptions, exact projections, polarity,
//!   and cone angles.
//! * [`restricted`]: solvers and brute-force oracles for restricted norms and
//!   restricted singular values.
//! * [`geometry`]: intrinsic volume profiles, statistical dimension, moment
//!   functionals, and Steiner formulas.
//! * [`feasibility`]: biconic feasibility classification, Renegar numbers,
//!   and kinematic vanishing probabilities.
//! * [`bounds`]: bound curves, empirical curves, and stochastic inequality
//!   checkers.
//! * [`cli`]: table and report emission used by the `conekit` binary.

pub mod bounds;
pub mod cli;
pub mod cones;
pub mod feasibility;
pub mod geometry;
pub mod numerics;
pub mod restricted;

pub use bounds::{BoundCurve, CurveKind, InequalityCheck};
pub use cones::Cone;
pub use feasibility::{FeasibilityReport, FeasibilityStatus};
pub use geometry::{IntrinsicVolumeProfile, MomentFunction};
pub use numerics::SeededSampler;
pub use restricted::{RestrictedExtremum, RestrictedKind, SolverConfig};
