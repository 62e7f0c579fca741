//! File formats for the CLI: TOML calibration input and report, and the
//! whitespace segment list consumed by the preprocessor.
//!
//! The input schema is versioned; rotation is accepted either as a unit
//! quaternion `(w, x, y, z)` or a row-major 3x3 matrix. Rotations with an
//! orthonormality defect above `1e-6` are warned about and snapped to the
//! nearest rotation; above `1e-3` they are rejected.

use std::fs;
use std::path::Path;

use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::{CameraIntrinsics, ExtrinsicPose, LineSegment2d, PluckerLine3d};
use crate::method1::Correspondence;
use crate::{CalibrationResult, Error};

pub const SCHEMA_VERSION: u32 = 1;

/// Rotation-repair limits: warn above the first, reject above the second.
pub const ROTATION_WARN_DEFECT: f64 = 1e-6;
pub const ROTATION_REJECT_DEFECT: f64 = 1e-3;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct IntrinsicsRecord {
    pub fu: f64,
    pub fv: f64,
    pub cu: f64,
    pub cv: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PoseRecord {
    /// Unit quaternion `(w, x, y, z)`; alternative to `rotation_matrix`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_quaternion: Option<[f64; 4]>,
    /// Row-major 3x3 rotation; alternative to `rotation_quaternion`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_matrix: Option<[f64; 9]>,
    pub translation: [f64; 3],
}

impl PoseRecord {
    pub fn from_pose(pose: &ExtrinsicPose<f64>) -> Self {
        let q = UnitQuaternion::from_matrix(pose.rotation());
        Self {
            rotation_quaternion: Some([q.w, q.i, q.j, q.k]),
            rotation_matrix: None,
            translation: [
                pose.translation().x,
                pose.translation().y,
                pose.translation().z,
            ],
        }
    }

    pub fn resolve(&self, what: &str) -> Result<ExtrinsicPose<f64>, Error> {
        let r = match (&self.rotation_quaternion, &self.rotation_matrix) {
            (Some(q), None) => {
                let quat = Quaternion::new(q[0], q[1], q[2], q[3]);
                if quat.norm() < 1e-6 {
                    return Err(Error::parse(format!("{what}: zero quaternion")));
                }
                UnitQuaternion::from_quaternion(quat).to_rotation_matrix().into_inner()
            }
            (None, Some(m)) => Matrix3::from_row_slice(m),
            (Some(_), Some(_)) => {
                return Err(Error::parse(format!(
                    "{what}: give rotation_quaternion or rotation_matrix, not both"
                )))
            }
            (None, None) => {
                return Err(Error::parse(format!(
                    "{what}: missing rotation_quaternion or rotation_matrix"
                )))
            }
        };
        let t = Vector3::from_column_slice(&self.translation);
        let (pose, defect) = ExtrinsicPose::new_orthonormalized(r, t, ROTATION_REJECT_DEFECT)?;
        if defect > ROTATION_WARN_DEFECT {
            log::warn!("{what}: rotation orthonormality defect {defect:.2e}; re-orthonormalized");
        }
        Ok(pose)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CorrespondenceRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    /// 3D endpoints, meters, LiDAR frame.
    pub p1: [f64; 3],
    pub p2: [f64; 3],
    /// Segment endpoint pixels.
    pub u_s: f64,
    pub v_s: f64,
    pub u_e: f64,
    pub v_e: f64,
}

/// On-disk calibration problem.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CalibrationInputFile {
    pub version: u32,
    pub intrinsics: IntrinsicsRecord,
    pub initial_pose: PoseRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<PoseRecord>,
    pub correspondences: Vec<CorrespondenceRecord>,
}

/// Validated in-memory calibration problem.
pub struct ResolvedInput {
    pub intrinsics: CameraIntrinsics<f64>,
    pub initial_pose: ExtrinsicPose<f64>,
    pub ground_truth: Option<ExtrinsicPose<f64>>,
    pub correspondences: Vec<Correspondence<f64>>,
}

impl CalibrationInputFile {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let text = toml::to_string_pretty(self).map_err(|e| Error::parse(e.to_string()))?;
        fs::write(path, text)?;
        Ok(())
    }

    pub fn resolve(&self) -> Result<ResolvedInput, Error> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::parse(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        let intrinsics = CameraIntrinsics::new(
            self.intrinsics.fu,
            self.intrinsics.fv,
            self.intrinsics.cu,
            self.intrinsics.cv,
        )?;
        if self.correspondences.len() < 3 {
            return Err(Error::InsufficientLines {
                required: 3,
                actual: self.correspondences.len(),
            });
        }
        let mut correspondences = Vec::with_capacity(self.correspondences.len());
        for (i, rec) in self.correspondences.iter().enumerate() {
            let label = rec.id.clone().unwrap_or_else(|| i.to_string());
            let line = PluckerLine3d::from_endpoints(
                &Vector3::from_column_slice(&rec.p1),
                &Vector3::from_column_slice(&rec.p2),
            )
            .map_err(|e| Error::parse(format!("correspondence {label}: {e}")))?;
            let seg = LineSegment2d::from_pixels(rec.u_s, rec.v_s, rec.u_e, rec.v_e)
                .map_err(|e| Error::parse(format!("correspondence {label}: {e}")))?;
            let mut corr = Correspondence::new(line, seg);
            corr.id = rec.id.clone();
            correspondences.push(corr);
        }
        Ok(ResolvedInput {
            intrinsics,
            initial_pose: self.initial_pose.resolve("initial_pose")?,
            ground_truth: self
                .ground_truth
                .as_ref()
                .map(|p| p.resolve("ground_truth"))
                .transpose()?,
            correspondences,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DegeneracyRecord {
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobian_sv_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction_sv_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub translation_sv_ratio: Option<f64>,
}

/// On-disk calibration report.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ReportFile {
    pub method: String,
    pub converged: bool,
    pub iterations: usize,
    /// Sum of squared pixel residuals at the estimate.
    pub final_cost_px2: f64,
    pub wall_time_s: f64,
    pub estimated_pose: PoseRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rot_err_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trans_err_m: Option<f64>,
    /// Signed endpoint distances in pixels, `[start, end]` per line.
    pub per_line_residuals_px: Vec<[f64; 2]>,
    pub degeneracy: DegeneracyRecord,
}

impl ReportFile {
    pub fn from_result(
        method: &str,
        result: &CalibrationResult,
        gt: Option<&ExtrinsicPose<f64>>,
        wall_time_s: f64,
    ) -> Self {
        let errors = gt.map(|gt| crate::geometry::pose_error(&result.pose, gt));
        Self {
            method: method.to_string(),
            converged: result.converged,
            iterations: result.iterations,
            final_cost_px2: result.final_cost,
            wall_time_s,
            estimated_pose: PoseRecord::from_pose(&result.pose),
            rot_err_deg: errors.map(|e| e.0),
            trans_err_m: errors.map(|e| e.1),
            per_line_residuals_px: result
                .per_line_residuals
                .iter()
                .map(|r| [r.x, r.y])
                .collect(),
            degeneracy: DegeneracyRecord {
                degenerate: result.degeneracy.degenerate,
                jacobian_sv_ratio: result.degeneracy.jacobian_sv_ratio,
                direction_sv_ratio: result.degeneracy.direction_sv_ratio,
                translation_sv_ratio: result.degeneracy.translation_sv_ratio,
            },
        }
    }

    pub fn to_toml(&self) -> Result<String, Error> {
        toml::to_string_pretty(self).map_err(|e| Error::parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::parse(e.to_string()))
    }
}

/// Parse a segment list, one `u_s v_s u_e v_e` record per line. Blank lines
/// and `#` comments are skipped; malformed records name the line number.
pub fn parse_segments(text: &str) -> Result<Vec<LineSegment2d<f64>>, Error> {
    let mut segments = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::parse(format!(
                "line {}: expected 4 fields (u_s v_s u_e v_e), got {}",
                lineno + 1,
                fields.len()
            )));
        }
        let mut vals = [0.0; 4];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f.parse::<f64>().map_err(|e| {
                Error::parse(format!("line {}: bad number '{f}': {e}", lineno + 1))
            })?;
        }
        let seg = LineSegment2d::from_pixels(vals[0], vals[1], vals[2], vals[3])
            .map_err(|e| Error::parse(format!("line {}: {e}", lineno + 1)))?;
        segments.push(seg);
    }
    Ok(segments)
}

pub fn format_segments(segments: &[LineSegment2d<f64>]) -> String {
    let mut out = String::from("# u_s v_s u_e v_e (px)\n");
    for s in segments {
        out.push_str(&format!(
            "{} {} {} {}\n",
            s.start().x,
            s.start().y,
            s.end().x,
            s.end().y
        ));
    }
    out
}
