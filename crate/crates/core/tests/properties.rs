//! Property-based tests over the geometry layer: randomized inputs with
//! shrinking on failure.

use nalgebra::Vector3;
use proptest::prelude::*;

use plk_calib::geometry::{
    pose_error, project_line, so3_exp, so3_log, transform_line, ExtrinsicPose, LineSegment2d,
    PluckerLine3d,
};
use plk_calib::CameraIntrinsics;

fn vec3(range: f64) -> impl Strategy<Value = Vector3<f64>> {
    [-range..range, -range..range, -range..range].prop_map(|[x, y, z]| Vector3::new(x, y, z))
}

fn pose() -> impl Strategy<Value = ExtrinsicPose<f64>> {
    (vec3(1.5), vec3(2.0))
        .prop_map(|(theta, p)| ExtrinsicPose::identity().retract(&theta, &p))
}

proptest! {
    #[test]
    fn plucker_constraint_holds_for_any_endpoints(
        p1 in vec3(20.0),
        p2 in vec3(20.0),
    ) {
        prop_assume!((p2 - p1).norm() > 1e-6);
        let line = PluckerLine3d::from_endpoints(&p1, &p2).unwrap();
        let scale = line.normal().norm().max(1.0) * line.direction().norm();
        prop_assert!(line.normal().dot(&line.direction()).abs() <= 1e-9 * scale);
    }

    #[test]
    fn rescaled_lines_are_the_same_projective_line(
        p1 in vec3(10.0),
        p2 in vec3(10.0),
        s in 0.01f64..100.0,
    ) {
        prop_assume!((p2 - p1).norm() > 1e-6);
        prop_assume!(p1.cross(&p2).norm() > 1e-6);
        let line = PluckerLine3d::from_endpoints(&p1, &p2).unwrap();
        let scaled = line.scaled(s);
        // Unit normal/direction and plane distance ratio are scale-free.
        prop_assert!((scaled.unit_normal() - line.unit_normal()).norm() < 1e-9);
        prop_assert!((scaled.unit_direction() - line.unit_direction()).norm() < 1e-9);
    }

    #[test]
    fn transform_then_invert_is_identity(
        p1 in vec3(10.0),
        p2 in vec3(10.0),
        pose in pose(),
    ) {
        prop_assume!((p2 - p1).norm() > 1e-6);
        let line = PluckerLine3d::from_endpoints(&p1, &p2).unwrap();
        let back = transform_line(&pose.inverse(), &transform_line(&pose, &line));
        let scale = line.normal().norm().max(line.direction().norm()).max(1.0);
        prop_assert!((back.normal() - line.normal()).norm() < 1e-8 * scale);
        prop_assert!((back.direction() - line.direction()).norm() < 1e-8 * scale);
    }

    #[test]
    fn so3_exp_log_roundtrip(theta in vec3(1.0)) {
        // Stay clearly inside the principal ball where log is unique.
        prop_assume!(theta.norm() < 3.0);
        let r = so3_exp(&theta);
        let recovered = so3_log(&r);
        prop_assert!((recovered - theta).norm() < 1e-9 * theta.norm().max(1.0));
    }

    #[test]
    fn compose_inverse_gives_zero_pose_error(pose in pose()) {
        let ident = pose.compose(&pose.inverse());
        let (rot_deg, trans_m) = pose_error(&ident, &ExtrinsicPose::identity());
        prop_assert!(rot_deg < 1e-8 && trans_m < 1e-8);
    }

    #[test]
    fn projected_line_contains_projected_endpoints(
        pa in vec3(0.8),
        pb in vec3(0.8),
        za in 1.0f64..9.0,
        zb in 1.0f64..9.0,
    ) {
        let a = Vector3::new(pa.x * za, pa.y * za, za);
        let b = Vector3::new(pb.x * zb, pb.y * zb, zb);
        prop_assume!((b - a).norm() > 0.1);
        prop_assume!(a.cross(&b).norm() > 1e-3);
        let intr = CameraIntrinsics::new(500.0, 500.0, 320.0, 240.0).unwrap();
        let k = intr.line_projection_matrix();
        let line_cam = PluckerLine3d::from_endpoints(&a, &b).unwrap();
        let l = project_line(&k, &line_cam).unwrap();
        prop_assume!(l.xy().norm() > 1e-6);
        // Both pinhole-projected endpoints satisfy the line equation.
        for p in [a, b] {
            let px = intr.project_point(&p).unwrap();
            let dist = Vector3::new(px.x, px.y, 1.0).dot(&l).abs() / l.xy().norm();
            prop_assert!(dist < 1e-6, "endpoint {px:?} is {dist} px off its own line");
        }
    }

    #[test]
    fn segment_line_coefficients_match_endpoints(
        us in -500.0f64..1200.0,
        vs in -500.0f64..1200.0,
        ue in -500.0f64..1200.0,
        ve in -500.0f64..1200.0,
    ) {
        prop_assume!(((ue - us).powi(2) + (ve - vs).powi(2)).sqrt() > 1e-3);
        let seg = LineSegment2d::from_pixels(us, vs, ue, ve).unwrap();
        let l = seg.line();
        prop_assert!(seg.start_h().dot(&l).abs() < 1e-6 * l.norm().max(1.0));
        prop_assert!(seg.end_h().dot(&l).abs() < 1e-6 * l.norm().max(1.0));
    }
}
