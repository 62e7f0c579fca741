//! Target-less LiDAR-camera extrinsic refinement from matched 3D/2D line
//! features.
//!
//! Two solvers are provided. [`method1`] jointly refines rotation and
//! translation by Levenberg-Marquardt on point-to-projected-line pixel
//! residuals. [`method2`] (PLK-Calib) decouples the problem: rotation from
//! co-perpendicular constraints between back-projected image-line normals and
//! LiDAR line directions, then translation from the co-parallel constraints
//! as a linear least-squares problem solved by SVD.
//!
//! [`sim`] generates synthetic scenes (including the degenerate parallel and
//! coplanar arrangements) and runs seeded Monte Carlo evaluations; the
//! [`preprocess`] module merges fragmented 2D segments and filters short ones.
//!
//! Core math is generic over the scalar type; concrete `f64` aliases are
//! exported at the crate root.

pub mod error;
pub mod geometry;
pub mod io;
pub mod method1;
pub mod method2;
pub mod preprocess;
pub mod sim;

pub use error::Error;

use num_traits::{FromPrimitive, ToPrimitive};

/// Scalar type the core math is generic over (`f32` or `f64` in practice).
pub trait Scalar: nalgebra::RealField + Copy + FromPrimitive + ToPrimitive {}

impl<T> Scalar for T where T: nalgebra::RealField + Copy + FromPrimitive + ToPrimitive {}

/// Lossy cast from a literal, for constants inside generic code.
pub(crate) fn cast<S: Scalar>(x: f64) -> S {
    S::from_f64(x).expect("f64 literal representable in scalar type")
}

pub type PluckerLine3 = geometry::PluckerLine3d<f64>;
pub type PluckerLine3f = geometry::PluckerLine3d<f32>;
pub type LineSegment2 = geometry::LineSegment2d<f64>;
pub type LineSegment2f = geometry::LineSegment2d<f32>;
pub type CameraIntrinsics = geometry::CameraIntrinsics<f64>;
pub type ExtrinsicPose = geometry::ExtrinsicPose<f64>;
pub type Correspondence = method1::Correspondence<f64>;
pub type SolverConfig = method1::SolverConfig<f64>;
pub type CalibrationResult = method1::CalibrationResult<f64>;
pub type SegmentSet = preprocess::SegmentSet<f64>;
