//! Plucker line representation, frame transformation, projection and pose
//! utilities shared by both solvers.
//!
//! A 3D line through points `p1`, `p2` is stored as the pair `(n, v)` with
//! `n = p1 x p2` (normal of the plane spanned by the line and the origin)
//! and `v = p2 - p1` (line direction). Lines are kept unnormalized as built
//! from endpoints; unit-normal / plane-distance accessors are derived on
//! demand.
//!
//! Rotation increments are applied as a LEFT multiplication,
//! `R <- exp(skew(dtheta)) * R`. All analytic Jacobians in the solver
//! modules follow this convention and are verified against finite
//! differences of [`ExtrinsicPose::retract`].

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::{cast, Error, Scalar};

/// Endpoint-coincidence threshold for line construction.
pub const ENDPOINT_EPS: f64 = 1e-9;

/// Skew-symmetric matrix of `w`, so that `skew(w) * a = w x a`.
pub fn skew<S: Scalar>(w: &Vector3<S>) -> Matrix3<S> {
    let z = S::zero();
    Matrix3::new(z, -w.z, w.y, w.z, z, -w.x, -w.y, w.x, z)
}

/// Rotation matrix `exp(skew(theta))` via the Rodrigues formula, with a
/// Taylor fallback near the identity to avoid 0/0.
pub fn so3_exp<S: Scalar>(theta: &Vector3<S>) -> Matrix3<S> {
    let angle = theta.norm();
    let k = skew(theta);
    let (a, b) = if angle < cast(1e-8) {
        let a2 = angle * angle;
        // sin(t)/t and (1-cos(t))/t^2 to second order
        (S::one() - a2 / cast(6.0), cast::<S>(0.5) - a2 / cast(24.0))
    } else {
        (angle.sin() / angle, (S::one() - angle.cos()) / (angle * angle))
    };
    Matrix3::identity() + k * a + k * k * b
}

/// Rotation-vector logarithm of a rotation matrix.
pub fn so3_log<S: Scalar>(r: &Matrix3<S>) -> Vector3<S> {
    let two = cast::<S>(2.0);
    let cos = ((r.trace() - S::one()) / two).clamp(-S::one(), S::one());
    let angle = cos.acos();
    let vee = Vector3::new(
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    );
    if angle < cast(1e-8) {
        return vee / two;
    }
    if S::pi() - angle < cast(1e-6) {
        // Near pi the vee part vanishes; recover the axis from R + I.
        let m = (*r + Matrix3::identity()) / two;
        let diag = m.diagonal();
        let i = diag.imax();
        let col = m.column(i);
        let axis = col / diag[i].sqrt();
        // Sign of the axis is fixed by the off-diagonal skew part.
        let sign = if vee[i] < S::zero() { -S::one() } else { S::one() };
        return axis * (angle * sign);
    }
    vee * (angle / (two * angle.sin()))
}

/// 3D line in Plucker coordinates `(n, v)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PluckerLine3d<S: Scalar> {
    n: Vector3<S>,
    v: Vector3<S>,
}

impl<S: Scalar> PluckerLine3d<S> {
    /// Build from two points on the line: `n = p1 x p2`, `v = p2 - p1`.
    pub fn from_endpoints(p1: &Vector3<S>, p2: &Vector3<S>) -> Result<Self, Error> {
        let v = p2 - p1;
        if v.norm() <= cast(ENDPOINT_EPS) {
            return Err(Error::DegenerateEndpoints(
                "3D endpoints coincide; no line direction",
            ));
        }
        Ok(Self { n: p1.cross(p2), v })
    }

    /// Build directly from Plucker coordinates. Rejects a zero direction or a
    /// pair violating `n . v = 0` (relative to the coordinate scale).
    pub fn from_parts(n: Vector3<S>, v: Vector3<S>) -> Result<Self, Error> {
        if v.norm() <= cast(ENDPOINT_EPS) {
            return Err(Error::DegenerateEndpoints("zero line direction"));
        }
        let scale = S::one().max(n.norm()) * v.norm();
        if n.dot(&v).abs() > cast::<S>(1e-9) * scale {
            return Err(Error::DegenerateEndpoints(
                "Plucker constraint n . v = 0 violated",
            ));
        }
        Ok(Self { n, v })
    }

    /// Normal of the line plane, `p1 x p2`.
    pub fn normal(&self) -> Vector3<S> {
        self.n
    }

    /// Line direction, `p2 - p1`.
    pub fn direction(&self) -> Vector3<S> {
        self.v
    }

    /// Unit normal `n_e` of the decomposition `n = d * n_e`.
    ///
    /// Zero when the line passes through the origin.
    pub fn unit_normal(&self) -> Vector3<S> {
        let d = self.n.norm();
        if d == S::zero() {
            Vector3::zeros()
        } else {
            self.n / d
        }
    }

    /// Plane distance `d` of the decomposition `n = d * n_e`.
    pub fn plane_distance(&self) -> S {
        self.n.norm()
    }

    pub fn unit_direction(&self) -> Vector3<S> {
        self.v.normalize()
    }

    /// Uniform rescale `(n, v) -> (s n, s v)`; same projective line.
    pub fn scaled(&self, s: S) -> Self {
        Self {
            n: self.n * s,
            v: self.v * s,
        }
    }
}

/// Transform a line from the LiDAR frame into the camera frame:
/// `n_C = R n_L + skew(P) R v_L`, `v_C = R v_L`.
pub fn transform_line<S: Scalar>(
    pose: &ExtrinsicPose<S>,
    line: &PluckerLine3d<S>,
) -> PluckerLine3d<S> {
    let rv = pose.rotation() * line.v;
    PluckerLine3d {
        n: pose.rotation() * line.n + pose.translation().cross(&rv),
        v: rv,
    }
}

/// 2D image segment with derived homogeneous line coefficients `l = x_s x x_e`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSegment2d<S: Scalar> {
    x_s: Vector3<S>,
    x_e: Vector3<S>,
    l: Vector3<S>,
}

impl<S: Scalar> LineSegment2d<S> {
    pub fn from_pixels(u_s: S, v_s: S, u_e: S, v_e: S) -> Result<Self, Error> {
        let x_s = Vector3::new(u_s, v_s, S::one());
        let x_e = Vector3::new(u_e, v_e, S::one());
        let l = x_s.cross(&x_e);
        // For unit-w homogeneous endpoints (l1, l2) vanishes iff the pixels
        // coincide.
        if l.xy().norm() <= cast(ENDPOINT_EPS) {
            return Err(Error::DegenerateEndpoints("2D segment endpoints coincide"));
        }
        Ok(Self { x_s, x_e, l })
    }

    /// Homogeneous start point `[u_s, v_s, 1]`.
    pub fn start_h(&self) -> Vector3<S> {
        self.x_s
    }

    /// Homogeneous end point `[u_e, v_e, 1]`.
    pub fn end_h(&self) -> Vector3<S> {
        self.x_e
    }

    pub fn start(&self) -> Vector2<S> {
        self.x_s.xy()
    }

    pub fn end(&self) -> Vector2<S> {
        self.x_e.xy()
    }

    /// Homogeneous line coefficients `[l1, l2, l3]`.
    pub fn line(&self) -> Vector3<S> {
        self.l
    }

    pub fn length(&self) -> S {
        (self.end() - self.start()).norm()
    }

    /// Undirected 2D direction (not normalized).
    pub fn direction(&self) -> Vector2<S> {
        self.end() - self.start()
    }
}

/// Pinhole intrinsics; the camera image is assumed pre-undistorted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CameraIntrinsics<S: Scalar> {
    pub fu: S,
    pub fv: S,
    pub cu: S,
    pub cv: S,
}

impl<S: Scalar> CameraIntrinsics<S> {
    pub fn new(fu: S, fv: S, cu: S, cv: S) -> Result<Self, Error> {
        if fu <= S::zero() || fv <= S::zero() {
            return Err(Error::InvalidIntrinsics {
                fu: fu.to_f64().unwrap_or(f64::NAN),
                fv: fv.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { fu, fv, cu, cv })
    }

    /// 3x3 line-projection matrix mapping a camera-frame Plucker normal to
    /// homogeneous image-line coefficients.
    pub fn line_projection_matrix(&self) -> Matrix3<S> {
        let z = S::zero();
        Matrix3::new(
            self.fv,
            z,
            z,
            z,
            self.fu,
            z,
            -self.fv * self.cu,
            -self.fu * self.cv,
            self.fu * self.fv,
        )
    }

    /// Pinhole projection of a camera-frame point; `None` for nonpositive
    /// depth.
    pub fn project_point(&self, p: &Vector3<S>) -> Option<Vector2<S>> {
        if p.z <= S::zero() {
            return None;
        }
        Some(Vector2::new(
            self.fu * p.x / p.z + self.cu,
            self.fv * p.y / p.z + self.cv,
        ))
    }
}

/// Project a camera-frame line to homogeneous image-line coefficients,
/// `l = K n_C`. Only the normal enters; the direction block is zero.
pub fn project_line<S: Scalar>(
    k: &Matrix3<S>,
    line_cam: &PluckerLine3d<S>,
) -> Result<Vector3<S>, Error> {
    if line_cam.normal().norm() == S::zero() {
        return Err(Error::ZeroNormal);
    }
    Ok(k * line_cam.normal())
}

/// Normal of the back-projected line plane, `n' = K^-1 l'` (up to scale).
pub fn back_project_direction<S: Scalar>(k: &Matrix3<S>, l_prime: &Vector3<S>) -> Vector3<S> {
    let k_inv = k.try_inverse().expect("line-projection matrix is invertible");
    k_inv * l_prime
}

/// Rigid transform {R, P} mapping LiDAR-frame quantities into the camera
/// frame: `x_C = R x_L + P`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtrinsicPose<S: Scalar> {
    r: Matrix3<S>,
    p: Vector3<S>,
}

impl<S: Scalar> ExtrinsicPose<S> {
    /// Orthonormality defect `max|R^T R - I|` plus determinant-sign defect.
    fn rotation_defect(r: &Matrix3<S>) -> S {
        let ortho = (r.transpose() * r - Matrix3::identity())
            .iter()
            .fold(S::zero(), |acc, x| acc.max(x.abs()));
        let det = (r.determinant() - S::one()).abs();
        ortho.max(det)
    }

    pub fn new(r: Matrix3<S>, p: Vector3<S>) -> Result<Self, Error> {
        let defect = Self::rotation_defect(&r);
        if defect > cast(1e-9) {
            return Err(Error::InvalidRotation {
                defect: defect.to_f64().unwrap_or(f64::NAN),
                limit: 1e-9,
            });
        }
        Ok(Self { r, p })
    }

    /// Accepts a rotation with defect up to `limit`, snapping it to the
    /// nearest rotation via SVD. Returns the defect alongside the pose.
    pub fn new_orthonormalized(
        r: Matrix3<S>,
        p: Vector3<S>,
        limit: f64,
    ) -> Result<(Self, S), Error> {
        let defect = Self::rotation_defect(&r);
        if defect > cast(limit) {
            return Err(Error::InvalidRotation {
                defect: defect.to_f64().unwrap_or(f64::NAN),
                limit,
            });
        }
        let svd = r.svd(true, true);
        let u = svd.u.unwrap();
        let vt = svd.v_t.unwrap();
        let mut fixed = u * vt;
        if fixed.determinant() < S::zero() {
            let mut u = u;
            u.column_mut(2).neg_mut();
            fixed = u * vt;
        }
        Ok((Self { r: fixed, p }, defect))
    }

    pub fn identity() -> Self {
        Self {
            r: Matrix3::identity(),
            p: Vector3::zeros(),
        }
    }

    pub fn rotation(&self) -> &Matrix3<S> {
        &self.r
    }

    pub fn translation(&self) -> &Vector3<S> {
        &self.p
    }

    /// Apply the error state: `R <- exp(skew(dtheta)) R`, `P <- P + dp`.
    pub fn retract(&self, dtheta: &Vector3<S>, dp: &Vector3<S>) -> Self {
        Self {
            r: so3_exp(dtheta) * self.r,
            p: self.p + dp,
        }
    }

    /// `self` after `other`: maps through `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            r: self.r * other.r,
            p: self.r * other.p + self.p,
        }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.r.transpose();
        Self {
            r: rt,
            p: -(rt * self.p),
        }
    }

    pub fn transform_point(&self, p: &Vector3<S>) -> Vector3<S> {
        self.r * p + self.p
    }
}

/// Geodesic rotation error (degrees) and translation L2 error between an
/// estimate and ground truth.
pub fn pose_error<S: Scalar>(est: &ExtrinsicPose<S>, gt: &ExtrinsicPose<S>) -> (S, S) {
    let dr = gt.rotation().transpose() * est.rotation();
    let rot_err_deg = so3_log(&dr).norm() * cast::<S>(180.0) / S::pi();
    let trans_err = (est.translation() - gt.translation()).norm();
    (rot_err_deg, trans_err)
}
