use std::f64::consts::PI;

use geoik_core::fk::{build_frames, fk_planar, wrist_centre};
use geoik_core::ik::{
    base_line, planar_z_residual, project_p5, shoulder_line, solve_theta1, solve_theta2,
    solve_trig_line, PlanarTarget, VERIFY_TOL,
};
use geoik_core::{
    fk, ik_dls, ik_solve, normalize_angle, ArmParams, DlsConfig, IkSolution, JointAngles, Pose,
    Vec3,
};
use proptest::prelude::*;

fn non_singular_angles() -> impl Strategy<Value = JointAngles> {
    prop::array::uniform6(-PI..PI)
        .prop_map(JointAngles)
        .prop_filter("wrist away from singularity", |q| q[4].sin().abs() > 0.05)
}

fn check_solution(s: &IkSolution, pose: &Pose, params: &ArmParams) -> Result<(), TestCaseError> {
    let achieved = fk(&s.angles, params);
    prop_assert!(achieved.position_error(pose) < VERIFY_TOL * pose.p.norm().max(1.0));
    prop_assert!(achieved.orientation_error(pose) < VERIFY_TOL);

    // base-angle equation
    let p5 = pose.p - params.d6 * pose.z_axis;
    let t1 = s.angles[0];
    let eq9 = p5.x * t1.sin() - p5.y * t1.cos() - params.d4;
    prop_assert!(eq9.abs() / p5.norm().max(1.0) < 1e-10);

    // shoulder equation and the vertical planar coordinate
    let f = build_frames(&s.angles);
    let mut target = project_p5(p5, t1, params.d4);
    target.phi = f.phi;
    let line = shoulder_line(&target, params);
    prop_assert!(line.scaled_residual(s.angles[1]) < 1e-10);
    let z = planar_z_residual(s.angles[1], s.angles[2], &target, params);
    prop_assert!(z.abs() / target.z.abs().max(1.0) < 1e-8);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn round_trip_and_generator_recovery(q in non_singular_angles()) {
        let params = ArmParams::reference();
        let pose = fk(&q, &params);
        let sols = ik_solve(&pose, &params).unwrap();
        prop_assert!((1..=8).contains(&sols.len()));
        prop_assert!(sols.iter().any(|s| s.angles.max_distance(&q) < 1e-8));
        for s in &sols {
            check_solution(s, &pose, &params)?;
        }
        let mut labels: Vec<_> = sols.iter().map(|s| s.branch).collect();
        labels.dedup();
        prop_assert_eq!(labels.len(), sols.len());
    }

    #[test]
    fn solving_is_deterministic(q in non_singular_angles()) {
        let params = ArmParams::reference();
        let pose = fk(&q, &params);
        prop_assert_eq!(ik_solve(&pose, &params), ik_solve(&pose, &params));
    }

    #[test]
    fn base_angle_forms_agree(
        x in -2.0..2.0f64, y in -2.0..2.0f64, d4 in -0.5..0.5f64,
    ) {
        let p5 = Vec3::new(x, y, 0.0);
        prop_assume!(x * x + y * y > d4 * d4 * (1.0 + 1e-6));
        let arcsine: Vec<f64> = solve_theta1(p5, d4).unwrap().into_iter().map(|r| r.0).collect();
        let half_angle = solve_trig_line(&base_line(p5, d4)).unwrap();
        prop_assert_eq!(arcsine.len(), half_angle.len());
        for a in &arcsine {
            prop_assert!(half_angle.iter().any(|h| normalize_angle(a - h).abs() < 1e-10));
        }
    }

    #[test]
    fn shoulder_line_holds_on_planar_fk(
        t2 in -PI..PI, t3 in -PI..PI, phi in -PI..PI,
    ) {
        let params = ArmParams::reference();
        let (x, z) = fk_planar(t2, t3, phi, &params);
        let target = PlanarTarget { x, z, phi };
        prop_assert!(shoulder_line(&target, &params).scaled_residual(t2) < 1e-10);
    }

    #[test]
    fn shoulder_root_recovers_generator(
        t2 in -PI..PI, t3 in -PI..PI, phi in -PI..PI,
    ) {
        prop_assume!(t3.sin().abs() > 1e-3);
        let params = ArmParams::reference();
        let (x, z) = fk_planar(t2, t3, phi, &params);
        let roots = solve_theta2(&PlanarTarget { x, z, phi }, &params).unwrap();
        prop_assert!(roots.iter().any(|r| normalize_angle(r.0 - t2).abs() < 1e-9));
    }

    #[test]
    fn projection_matches_fk(q in prop::array::uniform6(-PI..PI).prop_map(JointAngles)) {
        let params = ArmParams::reference();
        let (p5, f) = wrist_centre(&q, &params);
        let t = project_p5(p5, q[0], params.d4);
        let (x, z) = fk_planar(q[1], q[2], f.phi, &params);
        prop_assert!((t.x - x).abs() < 1e-10 && (t.z - z).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dls_agrees_with_analytic_pose(q in non_singular_angles(), offset in prop::array::uniform6(-0.1..0.1f64)) {
        let params = ArmParams::reference();
        let cfg = DlsConfig::default();
        let pose = fk(&q, &params);
        let mut seed = q;
        for (t, d) in seed.0.iter_mut().zip(offset) {
            *t += d;
        }
        let r = ik_dls(&pose, &seed, &params, &cfg);
        if r.converged {
            prop_assert!(r.final_pos_residual < cfg.pos_tol && r.final_ori_residual < cfg.ori_tol);
            let reached = fk(&r.angles, &params);
            let sols = ik_solve(&pose, &params).unwrap();
            let agree = sols.iter().any(|s| {
                let analytic = fk(&s.angles, &params);
                analytic.position_error(&reached) < 1e-5 && analytic.orientation_error(&reached) < 1e-5
            });
            prop_assert!(agree);
        }
    }
}
