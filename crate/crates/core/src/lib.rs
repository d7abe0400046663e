//! Numerical toolkit for hyperbolicity certification of sampled flows.
//!
//! The crate integrates vector fields together with their variational
//! equation, estimates invariant splittings along the resulting orbit
//! segments, certifies domination / contraction / volume and sectional
//! expansion empirically, and constructs Riemannian metrics in which the
//! certified inequalities hold with constant 1 (no transient factor).
//! Exterior-power (compound) cocycles are the main computational device:
//! volume distortions become operator norms on wedge powers, and metrics
//! built on wedge powers are pulled back to the base bundle.

pub mod cocycle;
pub mod exterior;
pub mod flow;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod report;
pub mod splitting;

pub use cocycle::{Cocycle, SegmentCocycle, WedgeCocycle};
pub use exterior::{GramForm, KVector, MultiIndex, SingularDecomposition};
pub use flow::{CircleProfile, CocycleSegment, ProfileKind, SmoothScalarField, VectorFieldSpec};
pub use metric::{GramEntry, GramField, MetricConstants};
pub use splitting::{Certificate, CertificateKind, GeneratorSamples, ResidualRow, SplittingFrame};
