//! Baseline solver: joint Levenberg-Marquardt minimization of
//! point-to-projected-line pixel residuals over rotation and translation.
//!
//! Each matched pair contributes a 2-vector of signed point-to-line
//! distances, `r = [x_s^T l, x_e^T l] / sqrt(l1^2 + l2^2)` with
//! `l = K n_C`. The 2x6 Jacobian is assembled from the chain
//! `dr/dl * dl/dn_C * dn_C/d(theta, P)` under the left-multiplicative
//! rotation increment of [`ExtrinsicPose::retract`].

use nalgebra::{DMatrix, DVector, Matrix2x3, Matrix2x6, Matrix3, Vector2, Vector3, Vector6};

use crate::geometry::{
    skew, transform_line, ExtrinsicPose, LineSegment2d, PluckerLine3d,
};
use crate::{cast, Error, Scalar};

/// One matched 3D/2D line pair (LiDAR-frame line, image segment).
#[derive(Clone, Debug)]
pub struct Correspondence<S: Scalar> {
    pub line3d: PluckerLine3d<S>,
    pub segment2d: LineSegment2d<S>,
    pub id: Option<String>,
}

impl<S: Scalar> Correspondence<S> {
    pub fn new(line3d: PluckerLine3d<S>, segment2d: LineSegment2d<S>) -> Self {
        Self {
            line3d,
            segment2d,
            id: None,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    fn label(&self, index: usize) -> String {
        self.id.clone().unwrap_or_else(|| index.to_string())
    }
}

/// Levenberg-Marquardt settings shared by both solvers.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig<S: Scalar> {
    pub max_iterations: usize,
    /// Absolute change in total cost below which we stop.
    pub cost_tolerance: S,
    /// Step norm below which we stop.
    pub step_tolerance: S,
    pub initial_lambda: S,
    pub lambda_up: S,
    pub lambda_down: S,
}

impl<S: Scalar> Default for SolverConfig<S> {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            cost_tolerance: cast(1e-12),
            step_tolerance: cast(1e-10),
            initial_lambda: cast(1e-3),
            lambda_up: cast(10.0),
            lambda_down: cast(0.1),
        }
    }
}

/// Singular-value ratio below which a system is considered rank deficient.
pub const DEGENERACY_SV_RATIO: f64 = 1e-8;

/// Rank-deficiency diagnostics attached to every solve result. Ratios are
/// `sigma_min / sigma_max` of the relevant system; `None` when the stage did
/// not run.
#[derive(Clone, Copy, Debug)]
pub struct DegeneracyReport<S: Scalar> {
    pub degenerate: bool,
    /// Method I: stacked 2Nx6 residual Jacobian.
    pub jacobian_sv_ratio: Option<S>,
    /// Method II rotation stage: singular values of the direction matrix.
    pub direction_sv_ratio: Option<S>,
    /// Method II translation stage: stacked 3Nx3 system matrix.
    pub translation_sv_ratio: Option<S>,
}

impl<S: Scalar> Default for DegeneracyReport<S> {
    fn default() -> Self {
        Self {
            degenerate: false,
            jacobian_sv_ratio: None,
            direction_sv_ratio: None,
            translation_sv_ratio: None,
        }
    }
}

/// `sigma_min / sigma_max` over a set of singular values.
pub(crate) fn sv_ratio<S: Scalar>(sv: &[S]) -> S {
    let max = sv.iter().fold(S::zero(), |a, &x| a.max(x));
    let min = sv.iter().fold(max, |a, &x| a.min(x));
    if max == S::zero() {
        S::zero()
    } else {
        min / max
    }
}

/// Outcome of a calibration solve.
#[derive(Clone, Debug)]
pub struct CalibrationResult<S: Scalar> {
    pub pose: ExtrinsicPose<S>,
    pub final_cost: S,
    pub iterations: usize,
    pub converged: bool,
    /// Signed endpoint-to-line pixel distances at the final pose.
    pub per_line_residuals: Vec<Vector2<S>>,
    pub degeneracy: DegeneracyReport<S>,
}

/// Signed point-to-line pixel residual of one correspondence.
pub fn residual<S: Scalar>(
    corr: &Correspondence<S>,
    pose: &ExtrinsicPose<S>,
    k: &Matrix3<S>,
) -> Result<Vector2<S>, Error> {
    let line_cam = transform_line(pose, &corr.line3d);
    let l = k * line_cam.normal();
    let norm12 = l.xy().norm();
    if norm12 <= cast(1e-12) {
        return Err(Error::ProjectionDegenerate(corr.label(0)));
    }
    Ok(Vector2::new(
        corr.segment2d.start_h().dot(&l) / norm12,
        corr.segment2d.end_h().dot(&l) / norm12,
    ))
}

/// `dr/dl` for one segment: rows for the start and end points.
fn residual_wrt_line<S: Scalar>(seg: &LineSegment2d<S>, l: &Vector3<S>) -> Matrix2x3<S> {
    let sq = l.x * l.x + l.y * l.y;
    let norm12 = sq.sqrt();
    let xs = seg.start_h();
    let xe = seg.end_h();
    let ds = xs.dot(l);
    let de = xe.dot(l);
    Matrix2x3::new(
        xs.x - l.x * ds / sq,
        xs.y - l.y * ds / sq,
        S::one(),
        xe.x - l.x * de / sq,
        xe.y - l.y * de / sq,
        S::one(),
    ) / norm12
}

/// 2x6 residual Jacobian, columns `[d/dtheta | d/dP]`.
pub fn jacobian<S: Scalar>(
    corr: &Correspondence<S>,
    pose: &ExtrinsicPose<S>,
    k: &Matrix3<S>,
) -> Result<Matrix2x6<S>, Error> {
    let line_cam = transform_line(pose, &corr.line3d);
    let l = k * line_cam.normal();
    if l.xy().norm() <= cast(1e-12) {
        return Err(Error::ProjectionDegenerate(corr.label(0)));
    }
    let dr_dl = residual_wrt_line(&corr.segment2d, &l);
    let dr_dn = dr_dl * k;

    let r_n = pose.rotation() * corr.line3d.normal();
    let r_v = pose.rotation() * corr.line3d.direction();
    // Left increment R <- exp(skew(t)) R gives
    //   dn_C/dtheta = -(skew(R n) + skew(P) skew(R v)),  dn_C/dP = -skew(R v).
    let dn_dtheta = -(skew(&r_n) + skew(pose.translation()) * skew(&r_v));
    let dn_dp = -skew(&r_v);

    let mut j = Matrix2x6::zeros();
    j.fixed_view_mut::<2, 3>(0, 0).copy_from(&(dr_dn * dn_dtheta));
    j.fixed_view_mut::<2, 3>(0, 3).copy_from(&(dr_dn * dn_dp));
    Ok(j)
}

struct Linearization<S: Scalar> {
    jacobian: DMatrix<S>,
    residuals: DVector<S>,
    cost: S,
    used: usize,
}

fn linearize<S: Scalar>(
    corrs: &[Correspondence<S>],
    pose: &ExtrinsicPose<S>,
    k: &Matrix3<S>,
) -> Linearization<S> {
    let mut rows: Vec<(Matrix2x6<S>, Vector2<S>)> = Vec::with_capacity(corrs.len());
    for (i, corr) in corrs.iter().enumerate() {
        match (residual(corr, pose, k), jacobian(corr, pose, k)) {
            (Ok(r), Ok(j)) => rows.push((j, r)),
            _ => {
                log::warn!(
                    "correspondence {} projects to a line at infinity; skipped",
                    corr.label(i)
                );
            }
        }
    }
    let used = rows.len();
    let mut jac = DMatrix::zeros(2 * used, 6);
    let mut res = DVector::zeros(2 * used);
    for (i, (j, r)) in rows.iter().enumerate() {
        jac.view_mut((2 * i, 0), (2, 6)).copy_from(j);
        res.view_mut((2 * i, 0), (2, 1)).copy_from(r);
    }
    let cost = res.norm_squared();
    Linearization {
        jacobian: jac,
        residuals: res,
        cost,
        used,
    }
}

fn total_cost<S: Scalar>(
    corrs: &[Correspondence<S>],
    pose: &ExtrinsicPose<S>,
    k: &Matrix3<S>,
) -> S {
    corrs
        .iter()
        .filter_map(|c| residual(c, pose, k).ok())
        .fold(S::zero(), |acc, r| acc + r.norm_squared())
}

/// Joint LM refinement of the extrinsic pose from >= 3 correspondences.
///
/// Rank deficiency of the stacked Jacobian (e.g. all line directions
/// parallel) is flagged in the result rather than aborting: degenerate
/// arrangements still produce an estimate, just an unusable one.
pub fn solve<S: Scalar>(
    corrs: &[Correspondence<S>],
    init: &ExtrinsicPose<S>,
    k: &Matrix3<S>,
    cfg: &SolverConfig<S>,
) -> Result<CalibrationResult<S>, Error> {
    if corrs.len() < 3 {
        return Err(Error::InsufficientLines {
            required: 3,
            actual: corrs.len(),
        });
    }

    let mut pose = *init;
    let mut lin = linearize(corrs, &pose, k);
    if lin.used < 3 {
        return Err(Error::InsufficientLines {
            required: 3,
            actual: lin.used,
        });
    }

    let mut lambda = cfg.initial_lambda;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cfg.max_iterations {
        iterations += 1;
        let jt = lin.jacobian.transpose();
        let jtj = &jt * &lin.jacobian;
        let jtr = &jt * &lin.residuals;

        let mut accepted = false;
        // Inner damping loop: raise lambda until a step is accepted or the
        // problem is hopeless.
        for _ in 0..32 {
            let damped = &jtj + DMatrix::identity(6, 6) * lambda;
            let Some(step) = damped.lu().solve(&(-&jtr)) else {
                lambda *= cfg.lambda_up;
                continue;
            };
            let dtheta = Vector3::new(step[0], step[1], step[2]);
            let dp = Vector3::new(step[3], step[4], step[5]);
            let candidate = pose.retract(&dtheta, &dp);
            let new_cost = total_cost(corrs, &candidate, k);
            if new_cost <= lin.cost {
                let cost_drop = lin.cost - new_cost;
                let step_norm = Vector6::from_column_slice(step.as_slice()).norm();
                pose = candidate;
                lin = linearize(corrs, &pose, k);
                lambda *= cfg.lambda_down;
                accepted = true;
                if cost_drop < cfg.cost_tolerance || step_norm < cfg.step_tolerance {
                    converged = true;
                }
                break;
            }
            lambda *= cfg.lambda_up;
        }
        if converged || !accepted {
            break;
        }
    }

    let sv = lin.jacobian.singular_values();
    let ratio = sv_ratio(sv.as_slice());
    let degeneracy = DegeneracyReport {
        degenerate: ratio < cast(DEGENERACY_SV_RATIO),
        jacobian_sv_ratio: Some(ratio),
        ..DegeneracyReport::default()
    };

    let per_line_residuals = corrs
        .iter()
        .map(|c| residual(c, &pose, k).unwrap_or_else(|_| Vector2::zeros()))
        .collect();

    Ok(CalibrationResult {
        pose,
        final_cost: lin.cost,
        iterations,
        converged,
        per_line_residuals,
        degeneracy,
    })
}
