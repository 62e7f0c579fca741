//! PLK-Calib: decoupled extrinsic solver.
//!
//! The back-projected image-line plane normal `K^-1 l'` and the transformed
//! LiDAR line describe the same 3D line, which gives two constraints per
//! pair: the normal is perpendicular to the rotated line direction
//! (rotation only), and parallel to the transformed Plucker normal (linear
//! in translation once rotation is fixed). Rotation is solved first by LM
//! over its 3-dof error state; translation then falls out of a stacked
//! linear system via SVD.

use nalgebra::{DMatrix, DVector, Matrix3, RowVector3, Vector2, Vector3};

use crate::geometry::{back_project_direction, skew, ExtrinsicPose};
use crate::method1::{
    sv_ratio, CalibrationResult, Correspondence, DegeneracyReport, SolverConfig,
    DEGENERACY_SV_RATIO,
};
use crate::{cast, Error, Scalar};

/// Per-line inputs of the rotation stage.
#[derive(Clone, Debug)]
pub struct RotationProblem<S: Scalar> {
    /// `(l', v_L)` pairs: homogeneous image line and LiDAR-frame direction.
    pub pairs: Vec<(Vector3<S>, Vector3<S>)>,
    /// Transpose of `K^-1`.
    pub k_inv_t: Matrix3<S>,
}

impl<S: Scalar> RotationProblem<S> {
    pub fn from_correspondences(corrs: &[Correspondence<S>], k: &Matrix3<S>) -> Self {
        let pairs = corrs
            .iter()
            .map(|c| (c.segment2d.line(), c.line3d.direction()))
            .collect();
        Self {
            pairs,
            k_inv_t: k.try_inverse().expect("K invertible").transpose(),
        }
    }

    /// Pairs with unit `v_L` and unit back-projected normal, so every line
    /// contributes comparably to the cost.
    fn normalized_pairs(&self) -> Vec<(Vector3<S>, Vector3<S>)> {
        // l'^T (K^-1)^T contracts to (K^-1 l') . , so rows use K^-1 l'.
        let k_inv = self.k_inv_t.transpose();
        self.pairs
            .iter()
            .map(|(l, v)| ((k_inv * l).normalize(), v.normalize()))
            .collect()
    }
}

/// Diagnostics of the rotation stage.
#[derive(Clone, Copy, Debug)]
pub struct RotationDiagnostics<S: Scalar> {
    pub iterations: usize,
    pub converged: bool,
    pub final_cost: S,
    /// Second-to-first singular value ratio of the direction matrix; near
    /// zero when all line directions are parallel.
    pub direction_sv_ratio: S,
    pub degenerate: bool,
}

/// Co-perpendicularity defect `r' = l'^T (K^-1)^T R v_L`.
pub fn rotation_residual<S: Scalar>(
    l_prime: &Vector3<S>,
    v_l: &Vector3<S>,
    r: &Matrix3<S>,
    k: &Matrix3<S>,
) -> S {
    back_project_direction(k, l_prime).dot(&(r * v_l))
}

/// Gradient of `r'^2` with respect to the left rotation increment:
/// `2 r' * (-(K^-1 l')^T skew(R v_L))`.
pub fn rotation_jacobian<S: Scalar>(
    l_prime: &Vector3<S>,
    v_l: &Vector3<S>,
    r: &Matrix3<S>,
    k: &Matrix3<S>,
) -> RowVector3<S> {
    let a = back_project_direction(k, l_prime);
    let res = a.dot(&(r * v_l));
    let row = -(a.transpose() * skew(&(r * v_l)));
    row * (res * cast::<S>(2.0))
}

fn rotation_cost<S: Scalar>(pairs: &[(Vector3<S>, Vector3<S>)], r: &Matrix3<S>) -> S {
    pairs.iter().fold(S::zero(), |acc, (a, v)| {
        let res = a.dot(&(r * v));
        acc + res * res
    })
}

/// LM on SO(3) minimizing the summed squared co-perpendicularity defects.
pub fn solve_rotation<S: Scalar>(
    problem: &RotationProblem<S>,
    r_init: &Matrix3<S>,
    cfg: &SolverConfig<S>,
) -> Result<(Matrix3<S>, RotationDiagnostics<S>), Error> {
    if problem.pairs.len() < 3 {
        return Err(Error::InsufficientLines {
            required: 3,
            actual: problem.pairs.len(),
        });
    }
    let pairs = problem.normalized_pairs();

    // Direction-span check: parallel directions lose the rotation component
    // about the shared axis.
    let mut dirs = DMatrix::zeros(pairs.len(), 3);
    for (i, (_, v)) in pairs.iter().enumerate() {
        dirs.set_row(i, &v.transpose());
    }
    let sv = dirs.singular_values();
    let max = sv.iter().fold(S::zero(), |a, &x| a.max(x));
    let second = {
        let mut s: Vec<S> = sv.as_slice().to_vec();
        s.sort_by(|a, b| b.partial_cmp(a).unwrap());
        s[1]
    };
    let direction_sv_ratio = second / max;
    let degenerate = direction_sv_ratio < cast(DEGENERACY_SV_RATIO);

    let mut r = *r_init;
    let mut cost = rotation_cost(&pairs, &r);
    let mut lambda = cfg.initial_lambda;
    let mut converged = false;
    let mut iterations = 0;

    for _ in 0..cfg.max_iterations {
        iterations += 1;
        // Gauss-Newton system from the residual rows dr'/dtheta.
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for (a, v) in &pairs {
            let res = a.dot(&(r * v));
            let row = -(a.transpose() * skew(&(r * v)));
            jtj += row.transpose() * row;
            jtr += row.transpose() * res;
        }

        let mut accepted = false;
        for _ in 0..32 {
            let damped = jtj + Matrix3::identity() * lambda;
            let Some(step) = damped.lu().solve(&(-jtr)) else {
                lambda *= cfg.lambda_up;
                continue;
            };
            let candidate = crate::geometry::so3_exp(&step) * r;
            let new_cost = rotation_cost(&pairs, &candidate);
            if new_cost <= cost {
                let drop = cost - new_cost;
                r = candidate;
                cost = new_cost;
                lambda *= cfg.lambda_down;
                accepted = true;
                if drop < cfg.cost_tolerance || step.norm() < cfg.step_tolerance {
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

    Ok((
        r,
        RotationDiagnostics {
            iterations,
            converged,
            final_cost: cost,
            direction_sv_ratio,
            degenerate,
        },
    ))
}

/// Stacked linear system `A P = b` for the translation, one 3x3 block per
/// line.
#[derive(Clone, Debug)]
pub struct TranslationSystem<S: Scalar> {
    pub a: DMatrix<S>,
    pub b: DVector<S>,
    /// Line label per 3-row block.
    pub provenance: Vec<String>,
}

impl<S: Scalar> TranslationSystem<S> {
    pub fn block_count(&self) -> usize {
        self.a.nrows() / 3
    }
}

/// Build the co-parallel system with rotation fixed:
/// `A_i = skew(a_i) skew(R v_i)`, `b_i = skew(a_i) R n_i` with
/// `a_i = K^-1 l'_i`, each block scaled by `1 / ||K^-1 l'_i||`.
pub fn build_translation_system<S: Scalar>(
    corrs: &[Correspondence<S>],
    r: &Matrix3<S>,
    k: &Matrix3<S>,
) -> TranslationSystem<S> {
    let n = corrs.len();
    let mut a = DMatrix::zeros(3 * n, 3);
    let mut b = DVector::zeros(3 * n);
    let mut provenance = Vec::with_capacity(n);
    for (i, corr) in corrs.iter().enumerate() {
        let back = back_project_direction(k, &corr.segment2d.line());
        let a_hat = back / back.norm();
        let block = skew(&a_hat) * skew(&(r * corr.line3d.direction()));
        let rhs = skew(&a_hat) * (r * corr.line3d.normal());
        a.view_mut((3 * i, 0), (3, 3)).copy_from(&block);
        b.view_mut((3 * i, 0), (3, 1)).copy_from(&rhs);
        provenance.push(corr.id.clone().unwrap_or_else(|| i.to_string()));
    }
    TranslationSystem { a, b, provenance }
}

/// Translation estimate plus conditioning of the stacked system.
#[derive(Clone, Debug)]
pub struct TranslationSolution<S: Scalar> {
    pub p: Vector3<S>,
    pub sv_ratio: S,
    pub degenerate: bool,
}

/// Least-squares solve of `A P = b` by SVD pseudo-inverse.
pub fn solve_translation<S: Scalar>(
    sys: &TranslationSystem<S>,
) -> Result<TranslationSolution<S>, Error> {
    if sys.block_count() < 3 {
        return Err(Error::InsufficientLines {
            required: 3,
            actual: sys.block_count(),
        });
    }
    let svd = sys.a.clone().svd(true, true);
    let ratio = sv_ratio(svd.singular_values.as_slice());
    let max = svd
        .singular_values
        .iter()
        .fold(S::zero(), |a, &x| a.max(x));
    let p = svd
        .solve(&sys.b, max * cast(1e-12))
        .map_err(Error::parse)?;
    Ok(TranslationSolution {
        p: Vector3::new(p[0], p[1], p[2]),
        sv_ratio: ratio,
        degenerate: ratio < cast(DEGENERACY_SV_RATIO),
    })
}

/// Full decoupled pipeline: rotation stage, then translation from the
/// rotation stage output.
pub fn solve_plk_calib<S: Scalar>(
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
    let problem = RotationProblem::from_correspondences(corrs, k);
    let (r, rot_diag) = solve_rotation(&problem, init.rotation(), cfg)?;
    let sys = build_translation_system(corrs, &r, k);
    let trans = solve_translation(&sys)?;

    let pose = ExtrinsicPose::new_orthonormalized(r, trans.p, 1e-6)
        .map(|(pose, _)| pose)
        .expect("rotation stage output stays on SO(3)");

    let per_line_residuals: Vec<Vector2<S>> = corrs
        .iter()
        .map(|c| crate::method1::residual(c, &pose, k).unwrap_or_else(|_| Vector2::zeros()))
        .collect();
    let final_cost = per_line_residuals
        .iter()
        .fold(S::zero(), |acc, r| acc + r.norm_squared());

    Ok(CalibrationResult {
        pose,
        final_cost,
        iterations: rot_diag.iterations,
        converged: rot_diag.converged,
        per_line_residuals,
        degeneracy: DegeneracyReport {
            degenerate: rot_diag.degenerate || trans.degenerate,
            jacobian_sv_ratio: None,
            direction_sv_ratio: Some(rot_diag.direction_sv_ratio),
            translation_sv_ratio: Some(trans.sv_ratio),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{
        pose_error, so3_exp, transform_line, CameraIntrinsics, LineSegment2d, PluckerLine3d,
    };
    use approx::assert_relative_eq;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn intr() -> CameraIntrinsics<f64> {
        CameraIntrinsics::new(500.0, 500.0, 320.0, 240.0).unwrap()
    }

    fn rand_vec(rng: &mut StdRng, scale: f64) -> Vector3<f64> {
        Vector3::new(
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
            rng.random_range(-scale..scale),
        )
    }

    fn rand_pose(rng: &mut StdRng) -> ExtrinsicPose<f64> {
        ExtrinsicPose::identity().retract(&rand_vec(rng, 1.5), &rand_vec(rng, 0.5))
    }

    /// Noiseless correspondence visible from `pose`.
    fn rand_correspondence(rng: &mut StdRng, pose: &ExtrinsicPose<f64>) -> Correspondence<f64> {
        let intr = intr();
        loop {
            let a = Vector3::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(2.0..9.0),
            );
            let b = Vector3::new(
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
                rng.random_range(2.0..9.0),
            );
            if (b - a).norm() < 1.0 {
                continue;
            }
            let inv = pose.inverse();
            let line = PluckerLine3d::from_endpoints(
                &inv.transform_point(&a),
                &inv.transform_point(&b),
            )
            .unwrap();
            if transform_line(pose, &line).normal().norm() < 1e-6 {
                continue;
            }
            let pa = intr.project_point(&a).unwrap();
            let pb = intr.project_point(&b).unwrap();
            let Ok(seg) = LineSegment2d::from_pixels(pa.x, pa.y, pb.x, pb.y) else {
                continue;
            };
            return Correspondence::new(line, seg);
        }
    }

    #[test]
    fn rotation_residual_zero_at_ground_truth() {
        let mut rng = StdRng::seed_from_u64(40);
        let pose = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        for _ in 0..20 {
            let c = rand_correspondence(&mut rng, &pose);
            let l = c.segment2d.line();
            let r = rotation_residual(
                &(l / l.norm()),
                &c.line3d.unit_direction(),
                pose.rotation(),
                &k,
            );
            assert!(r.abs() < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn rotation_residual_sign_and_oracle() {
        let mut rng = StdRng::seed_from_u64(41);
        let k = intr().line_projection_matrix();
        let k_inv = k.try_inverse().unwrap();
        for _ in 0..100 {
            let l = rand_vec(&mut rng, 50.0);
            let v = rand_vec(&mut rng, 2.0);
            let r = so3_exp(&rand_vec(&mut rng, 2.0));
            let res = rotation_residual(&l, &v, &r, &k);
            // Antisymmetry in the direction sign.
            assert_relative_eq!(rotation_residual(&l, &(-v), &r, &k), -res, epsilon = 1e-12);
            // Independent dot-product oracle: (K^-1 l') . (R v).
            let oracle = (k_inv * l).dot(&(r * v));
            assert_relative_eq!(res, oracle, epsilon = 1e-9, max_relative = 1e-12);
        }
    }

    #[test]
    fn rotation_jacobian_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(42);
        let k = intr().line_projection_matrix();
        let h = 1e-6;
        for _ in 0..100 {
            let l = rand_vec(&mut rng, 10.0);
            let v = rand_vec(&mut rng, 2.0).normalize();
            if l.norm() < 0.5 {
                continue;
            }
            let r = so3_exp(&rand_vec(&mut rng, 2.0));
            let j = rotation_jacobian(&l, &v, &r, &k);
            let mut fd = RowVector3::zeros();
            for c in 0..3 {
                let mut d = Vector3::zeros();
                d[c] = h;
                let sq = |rot: Matrix3<f64>| {
                    let res = rotation_residual(&l, &v, &rot, &k);
                    res * res
                };
                fd[c] = (sq(so3_exp(&d) * r) - sq(so3_exp(&(-d)) * r)) / (2.0 * h);
            }
            let denom = j.norm().max(1e-6);
            assert!((j - fd).norm() / denom < 1e-5, "j {j} fd {fd}");
        }
    }

    #[test]
    fn rotation_jacobian_zero_at_zero_residual_and_descends() {
        let mut rng = StdRng::seed_from_u64(43);
        let pose = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let c = rand_correspondence(&mut rng, &pose);
        let l = c.segment2d.line();
        let v = c.line3d.unit_direction();
        let j = rotation_jacobian(&l, &v, pose.rotation(), &k);
        assert!(j.norm() < 1e-6 * l.norm());

        // Off ground truth, a small step along -gradient reduces r'^2.
        let r0 = so3_exp(&Vector3::new(0.05, -0.02, 0.04)) * pose.rotation();
        let j = rotation_jacobian(&l, &v, &r0, &k);
        let res0 = rotation_residual(&l, &v, &r0, &k);
        let step = -j.transpose() * (1e-8 / j.norm().max(1e-12));
        let r1 = so3_exp(&step) * r0;
        let res1 = rotation_residual(&l, &v, &r1, &k);
        assert!(res1 * res1 < res0 * res0);
    }

    #[test]
    fn solve_rotation_recovers_ground_truth() {
        let mut rng = StdRng::seed_from_u64(44);
        let pose = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let corrs: Vec<_> = (0..4).map(|_| rand_correspondence(&mut rng, &pose)).collect();
        let problem = RotationProblem::from_correspondences(&corrs, &k);
        let d = 5.0_f64.to_radians();
        let r_init = so3_exp(&Vector3::new(d, d, d)) * pose.rotation();
        let (r, diag) = solve_rotation(&problem, &r_init, &SolverConfig::default()).unwrap();
        let err = crate::geometry::so3_log(&(pose.rotation().transpose() * r))
            .norm()
            .to_degrees();
        assert!(err < 1e-6, "rot err {err}");
        assert!(!diag.degenerate);

        // At ground truth: immediate convergence at ~zero cost.
        let (_, diag) =
            solve_rotation(&problem, pose.rotation(), &SolverConfig::default()).unwrap();
        assert!(diag.converged && diag.iterations <= 2);
        assert!(diag.final_cost < 1e-20);
    }

    #[test]
    fn solve_rotation_flags_parallel_directions() {
        let mut rng = StdRng::seed_from_u64(45);
        let k = intr().line_projection_matrix();
        let dir = Vector3::new(0.2, 0.5, 0.1);
        let mut corrs = Vec::new();
        for i in 0..3 {
            let base = Vector3::new(i as f64 - 1.0, 0.4 * i as f64, 5.0 + i as f64);
            let line = PluckerLine3d::from_endpoints(&base, &(base + dir)).unwrap();
            let seg = LineSegment2d::from_pixels(
                rng.random_range(0.0..600.0),
                rng.random_range(0.0..400.0),
                rng.random_range(0.0..600.0),
                rng.random_range(0.0..400.0),
            )
            .unwrap();
            corrs.push(Correspondence::new(line, seg));
        }
        let problem = RotationProblem::from_correspondences(&corrs, &k);
        let (_, diag) =
            solve_rotation(&problem, &Matrix3::identity(), &SolverConfig::default()).unwrap();
        assert!(diag.degenerate);
        assert!(diag.direction_sv_ratio < 1e-8);
    }

    #[test]
    fn rotation_argmin_invariant_to_input_scaling() {
        let mut rng = StdRng::seed_from_u64(46);
        let pose = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let corrs: Vec<_> = (0..4).map(|_| rand_correspondence(&mut rng, &pose)).collect();
        let scaled: Vec<_> = corrs
            .iter()
            .map(|c| Correspondence::new(c.line3d.scaled(4.2), c.segment2d))
            .collect();
        let d = 3.0_f64.to_radians();
        let r_init = so3_exp(&Vector3::new(d, -d, d)) * pose.rotation();
        let cfg = SolverConfig::default();
        let (r1, _) =
            solve_rotation(&RotationProblem::from_correspondences(&corrs, &k), &r_init, &cfg)
                .unwrap();
        let (r2, _) =
            solve_rotation(&RotationProblem::from_correspondences(&scaled, &k), &r_init, &cfg)
                .unwrap();
        assert_relative_eq!(r1, r2, epsilon = 1e-9);
    }

    #[test]
    fn translation_system_consistency_and_structure() {
        let mut rng = StdRng::seed_from_u64(47);
        let pose = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let corrs: Vec<_> = (0..4).map(|_| rand_correspondence(&mut rng, &pose)).collect();
        let sys = build_translation_system(&corrs, pose.rotation(), &k);

        // Ground-truth consistency: A P = b at zero noise.
        let residual = &sys.a * pose.translation() - &sys.b;
        assert!(residual.norm() < 1e-9, "residual {}", residual.norm());

        // Each 3x3 block is a product of two skews: rank <= 2.
        for i in 0..sys.block_count() {
            let block = sys.a.view((3 * i, 0), (3, 3)).into_owned();
            let sv = block.singular_values();
            assert!(sv[2] < 1e-10 * sv[0].max(1.0));
        }

        // Doubling all Plucker normals doubles b and leaves A unchanged.
        let doubled: Vec<_> = corrs
            .iter()
            .map(|c| {
                Correspondence::new(
                    PluckerLine3d::from_parts(
                        c.line3d.normal() * 2.0,
                        c.line3d.direction(),
                    )
                    .unwrap(),
                    c.segment2d,
                )
            })
            .collect();
        let sys2 = build_translation_system(&doubled, pose.rotation(), &k);
        assert_relative_eq!(sys.a, sys2.a, epsilon = 1e-12);
        assert_relative_eq!(sys.b * 2.0, sys2.b, epsilon = 1e-9);
    }

    #[test]
    fn single_line_translation_rank_deficient() {
        let mut rng = StdRng::seed_from_u64(48);
        let pose = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let corrs = vec![rand_correspondence(&mut rng, &pose)];
        let sys = build_translation_system(&corrs, pose.rotation(), &k);
        let sv = sys.a.singular_values();
        assert!(sv[2] < 1e-10 * sv[0].max(1.0));
        // And the solver refuses to run on fewer than 3 blocks.
        assert!(matches!(
            solve_translation(&sys),
            Err(Error::InsufficientLines { .. })
        ));
    }

    #[test]
    fn solve_translation_matches_normal_equations_oracle() {
        let mut rng = StdRng::seed_from_u64(49);
        let pose = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let corrs: Vec<_> = (0..5).map(|_| rand_correspondence(&mut rng, &pose)).collect();
        let sys = build_translation_system(&corrs, pose.rotation(), &k);
        let sol = solve_translation(&sys).unwrap();
        assert!(!sol.degenerate);

        let ata = sys.a.transpose() * &sys.a;
        let atb = sys.a.transpose() * &sys.b;
        let oracle = ata.lu().solve(&atb).unwrap();
        assert_relative_eq!(
            sol.p,
            Vector3::new(oracle[0], oracle[1], oracle[2]),
            epsilon = 1e-9
        );
        // Zero noise: recover ground truth.
        assert!((sol.p - pose.translation()).norm() < 1e-6);
    }

    #[test]
    fn plk_calib_exact_recovery_zero_noise() {
        let mut rng = StdRng::seed_from_u64(50);
        let gt = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let corrs: Vec<_> = (0..4).map(|_| rand_correspondence(&mut rng, &gt)).collect();
        let d = 5.0_f64.to_radians();
        let init = gt.retract(&Vector3::new(d, d, d), &Vector3::new(0.5, 0.5, 0.5));
        let result = solve_plk_calib(&corrs, &init, &k, &SolverConfig::default()).unwrap();
        let (re, te) = pose_error(&result.pose, &gt);
        assert!(re < 1e-6, "rot err {re}");
        assert!(te < 1e-6, "trans err {te}");
        assert!(!result.degeneracy.degenerate);
    }

    #[test]
    fn plk_calib_rejects_insufficient_lines() {
        let mut rng = StdRng::seed_from_u64(51);
        let gt = rand_pose(&mut rng);
        let k = intr().line_projection_matrix();
        let corrs: Vec<_> = (0..2).map(|_| rand_correspondence(&mut rng, &gt)).collect();
        assert!(matches!(
            solve_plk_calib(&corrs, &gt, &k, &SolverConfig::default()),
            Err(Error::InsufficientLines { .. })
        ));
    }

    #[test]
    fn rotation_cost_never_increased_by_solve() {
        let mut rng = StdRng::seed_from_u64(52);
        let k = intr().line_projection_matrix();
        for _ in 0..20 {
            let pose = rand_pose(&mut rng);
            let corrs: Vec<_> = (0..4).map(|_| rand_correspondence(&mut rng, &pose)).collect();
            let problem = RotationProblem::from_correspondences(&corrs, &k);
            let r_init = so3_exp(&rand_vec(&mut rng, 0.4)) * pose.rotation();
            let pairs = problem.normalized_pairs();
            let init_cost = rotation_cost(&pairs, &r_init);
            let (_, diag) = solve_rotation(&problem, &r_init, &SolverConfig::default()).unwrap();
            assert!(diag.final_cost <= init_cost + 1e-15);
        }
    }
}
