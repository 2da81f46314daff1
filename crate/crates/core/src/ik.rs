//! Closed-form geometric inverse kinematics.
//!
//! The solve runs in four stages:
//!
//! 1. Back off the tool length to get the joint-5 centre `P5 = P6 − d6·k6`.
//! 2. Solve the base angle from `d4 = x5·sinθ1 − y5·cosθ1` (two roots).
//! 3. Per base root, recover θ5 and the joint-5 axis `k5` from `r0` and `k6`
//!    (two wrist branches, `±θ5` with `±k5`), then the in-plane wrist angle
//!    `phi` from `k5`.
//! 4. Solve the planar three-link problem in the arm plane for θ2 (two
//!    half-angle roots) and θ3 (root consistent with both planar
//!    coordinates), then θ4 from `phi` and θ6 from `m5`, `m6`.
//!
//! Every candidate is checked against forward kinematics before it is
//! returned, so up to eight verified, deduplicated solutions come back.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{IkFailure, IkFailureKind};
use crate::fk::{base_axes, fk};
use crate::model::{
    normalize_angle, ArmParams, Branch, BranchLabel, ElbowRealEq, IkSolution, JointAngles, Pose,
    TrigLineEq, Vec3,
};

/// Minimum `‖r0 × k6‖` before the joint-5 axis is considered undefined.
pub const WRIST_EPS: f64 = 1e-8;
/// Negative discriminant slack, scaled by `max(1, A² + B²)`.
pub const DISC_EPS: f64 = 1e-9;
/// Minimum horizontal distance of the wrist centre from the base axis.
pub const BASE_AXIS_EPS: f64 = 1e-9;
/// Forward-kinematics acceptance: position (scaled by `max(1, ‖p‖)`) and
/// orientation (radians).
pub const VERIFY_TOL: f64 = 1e-8;
/// Two solutions closer than this on every joint (mod 2π) are merged.
pub const DEDUP_TOL: f64 = 1e-9;
/// Slack for the imaginary-part check that picks the θ3 root.
pub const PLANAR_Z_TOL: f64 = 1e-8;

/// Wrist-centre coordinates in the arm plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarTarget {
    /// Signed distance along `r1` from the base axis.
    pub x: f64,
    /// Height above the shoulder axis.
    pub z: f64,
    /// Angle of the wrist link `k5` above `r1`.
    pub phi: f64,
}

/// One wrist branch for a given base angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WristFrame {
    pub theta5: f64,
    pub k5: Vec3,
    pub r0: Vec3,
    pub r1: Vec3,
    pub branch: Branch,
}

fn out_of_reach(eq: &TrigLineEq, disc: f64) -> IkFailure {
    IkFailure::new(
        IkFailureKind::OutOfReach,
        format!(
            "no real root for {:.6e}·cos + {:.6e}·sin = {:.6e} (discriminant {:.3e})",
            eq.a, eq.b, eq.c, disc
        ),
    )
}

/// Real roots of `A·cosθ + B·sinθ = C` via the half-angle substitution
/// `t = tan(θ/2)`, which turns it into `(C + A)t² − 2Bt + (C − A) = 0`.
///
/// Roots are returned in the order `+`, `−` of
/// `t = (B ± √(B² − (C² − A²))) / (C + A)`, normalized to (−π, π]. A double
/// root is returned once. Each root is evaluated as `2·atan2(num, den)` using
/// the cancellation-free pairing of the two quadratic forms, so `C + A = 0`
/// (where one root is θ = π) needs no special case.
pub fn solve_trig_line(eq: &TrigLineEq) -> Result<Vec<f64>, IkFailure> {
    let TrigLineEq { a, b, c } = *eq;
    let norm_sq = a * a + b * b;
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(IkFailure::new(
            IkFailureKind::OutOfReach,
            "non-finite equation coefficients",
        ));
    }
    if norm_sq == 0.0 {
        return Err(IkFailure::new(
            IkFailureKind::OutOfReach,
            format!("degenerate equation 0 = {c:.6e}"),
        ));
    }
    let disc = eq.discriminant();
    if disc < -DISC_EPS * norm_sq.max(1.0) {
        return Err(out_of_reach(eq, disc));
    }
    if disc <= 0.0 {
        // Tangent case: the single root is where A·cos + B·sin peaks (C > 0)
        // or bottoms out (C < 0).
        let s = if c < 0.0 { -1.0 } else { 1.0 };
        return Ok(vec![normalize_angle((s * b).atan2(s * a))]);
    }
    let root = disc.sqrt();
    // q carries the sign of B so that B + sign(B)·√D never cancels.
    let (plus, minus) = if b >= 0.0 {
        let q = b + root;
        (2.0 * q.atan2(c + a), 2.0 * (c - a).atan2(q))
    } else {
        let q = b - root;
        (2.0 * (c - a).atan2(q), 2.0 * q.atan2(c + a))
    };
    let (plus, minus) = (normalize_angle(plus), normalize_angle(minus));
    if normalize_angle(plus - minus).abs() <= 1e-12 {
        Ok(vec![plus])
    } else {
        Ok(vec![plus, minus])
    }
}

/// Base-angle roots of `d4 = x5·sinθ1 − y5·cosθ1`.
///
/// Branch `A` is `asin(d4/ρ) + atan2(y5, x5)`, branch `B` is
/// `π − asin(d4/ρ) + atan2(y5, x5)`, with `ρ = √(x5² + y5²)`. `A` keeps the
/// wrist centre in front of the arm plane origin (`X ≥ 0`), `B` reaches over
/// the base (`X ≤ 0`).
pub fn solve_theta1(p5: Vec3, d4: f64) -> Result<Vec<(f64, Branch)>, IkFailure> {
    let rho = p5.x.hypot(p5.y);
    if rho < BASE_AXIS_EPS {
        return Err(IkFailure::new(
            IkFailureKind::ShoulderSingularity,
            "wrist centre lies on the base axis",
        ));
    }
    let s = d4 / rho;
    if s.abs() > 1.0 + 1e-12 {
        return Err(IkFailure::new(
            IkFailureKind::ShoulderSingularity,
            format!(
                "wrist centre radius {rho:.6e} m is inside the lateral offset |d4| = {:.6e} m",
                d4.abs()
            ),
        ));
    }
    let alpha = p5.y.atan2(p5.x);
    let lean = s.clamp(-1.0, 1.0).asin();
    let first = normalize_angle(lean + alpha);
    let second = normalize_angle(PI - lean + alpha);
    let mut roots = vec![(first, Branch::A)];
    if normalize_angle(first - second).abs() > DEDUP_TOL {
        roots.push((second, Branch::B));
    }
    Ok(roots)
}

/// The base-angle equation in `A·cos + B·sin = C` form (`A = −y5`,
/// `B = x5`, `C = d4`), for the half-angle route.
pub fn base_line(p5: Vec3, d4: f64) -> TrigLineEq {
    TrigLineEq::new(-p5.y, p5.x, d4)
}

/// θ5 and the joint-5 axis for both wrist branches.
///
/// Branch `A`: `θ5 = atan2(‖r0 × k6‖, r0 · k6)` in (0, π) with
/// `k5 = (r0 × k6)/‖r0 × k6‖`. Branch `B` flips both signs.
pub fn wrist_frame(theta1: f64, k6: Vec3) -> Result<[WristFrame; 2], IkFailure> {
    let (r0, r1) = base_axes(theta1);
    let cross = r0.cross(k6);
    let sin5 = cross.norm();
    if sin5 < WRIST_EPS {
        return Err(IkFailure::new(
            IkFailureKind::WristSingularity,
            format!("tool z-axis is parallel to the arm-plane normal (|r0 x k6| = {sin5:.3e})"),
        ));
    }
    let theta5 = sin5.atan2(r0.dot(k6));
    let k5 = cross * (1.0 / sin5);
    Ok([
        WristFrame {
            theta5,
            k5,
            r0,
            r1,
            branch: Branch::A,
        },
        WristFrame {
            theta5: -theta5,
            k5: -k5,
            r0,
            r1,
            branch: Branch::B,
        },
    ])
}

/// Signed angle from `r1` to `k5`, measured about `r0`.
///
/// `r1 × k5` is parallel to `r0` because both vectors lie in the plane
/// normal to `r0`, so projecting onto `r0` recovers the sine with its sign.
pub fn signed_phi(r1: Vec3, k5: Vec3, r0: Vec3) -> f64 {
    r1.cross(k5).dot(r0).atan2(r1.dot(k5))
}

/// Removes the lateral offset from the wrist centre and expresses it in the
/// arm plane. `phi` is left at zero for the caller to fill.
pub fn project_p5(p5: Vec3, theta1: f64, d4: f64) -> PlanarTarget {
    let (r0, r1) = base_axes(theta1);
    let in_plane = p5 - d4 * r0;
    PlanarTarget {
        x: r1.dot(in_plane),
        z: p5.z,
        phi: 0.0,
    }
}

/// Shoulder equation `L1·cosθ2 + L2·sinθ2 = L3`, from the modulus of the
/// planar chain after the wrist link is removed.
pub fn shoulder_line(target: &PlanarTarget, params: &ArmParams) -> TrigLineEq {
    let PlanarTarget { x, z, phi } = *target;
    let ArmParams { a2, a3, d5, .. } = *params;
    let (sp, cp) = phi.sin_cos();
    let l1 = 2.0 * a2 * x - 2.0 * a2 * d5 * cp;
    let l2 = 2.0 * a2 * z - 2.0 * a2 * d5 * sp;
    let l3 = x * x + z * z + a2 * a2 + d5 * d5 - a3 * a3 - 2.0 * d5 * z * sp - 2.0 * d5 * x * cp;
    TrigLineEq::new(l1, l2, l3)
}

pub fn solve_theta2(
    target: &PlanarTarget,
    params: &ArmParams,
) -> Result<Vec<(f64, Branch)>, IkFailure> {
    let roots = solve_trig_line(&shoulder_line(target, params))?;
    Ok(roots.into_iter().zip([Branch::A, Branch::B]).collect())
}

/// Real part of the planar chain for a known θ2.
pub fn elbow_line(theta2: f64, target: &PlanarTarget, params: &ArmParams) -> ElbowRealEq {
    let (s2, c2) = theta2.sin_cos();
    ElbowRealEq {
        l4: target.x - params.a2 * c2 - params.d5 * target.phi.cos(),
        l5: params.a3 * c2,
        l6: params.a3 * s2,
    }
}

/// Residual of the vertical planar coordinate for a (θ2, θ3) pair.
pub fn planar_z_residual(
    theta2: f64,
    theta3: f64,
    target: &PlanarTarget,
    params: &ArmParams,
) -> f64 {
    params.a2 * theta2.sin() + params.a3 * (theta2 + theta3).sin() + params.d5 * target.phi.sin()
        - target.z
}

/// θ3 roots of the real-part equation that also satisfy the vertical
/// coordinate, best first.
///
/// The real-part quadratic alone admits a mirror root with
/// `θ2 + θ3 → −(θ2 + θ3)`; it is removed here.
pub fn solve_theta3(
    theta2: f64,
    target: &PlanarTarget,
    params: &ArmParams,
) -> Result<Vec<f64>, IkFailure> {
    let roots = solve_trig_line(&elbow_line(theta2, target, params).as_trig_line())?;
    let tol = PLANAR_Z_TOL * target.z.abs().max(1.0);
    let mut kept: Vec<(f64, f64)> = roots
        .into_iter()
        .map(|t3| (t3, planar_z_residual(theta2, t3, target, params).abs()))
        .filter(|&(_, r)| r <= tol)
        .collect();
    if kept.is_empty() {
        return Err(IkFailure::new(
            IkFailureKind::NoConsistentBranch,
            format!("no elbow root matches the wrist height for theta2 = {theta2:.6}"),
        ));
    }
    kept.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(kept.into_iter().map(|(t, _)| t).collect())
}

pub fn solve_theta4(phi: f64, theta2: f64, theta3: f64) -> f64 {
    normalize_angle(phi - (theta2 + theta3) + FRAC_PI_2)
}

/// Signed angle from `m5 = k6 × k5` to the target x-axis, about `k6`.
pub fn solve_theta6(k5: Vec3, k6: Vec3, m6_target: Vec3) -> f64 {
    let m5 = k6.cross(k5);
    m5.cross(m6_target).dot(k6).atan2(m5.dot(m6_target))
}

/// Position and orientation residuals of a configuration against a pose.
pub fn residuals(angles: &JointAngles, pose: &Pose, params: &ArmParams) -> (f64, f64) {
    let achieved = fk(angles, params);
    (
        achieved.position_error(pose),
        achieved.orientation_error(pose),
    )
}

/// Every verified joint configuration reaching `pose`, sorted by branch
/// label.
///
/// Singularities are reported for the whole pose: if any base root meets the
/// wrist singularity the solution set is a continuum and no finite list is
/// returned. Out-of-reach planar branches are skipped; the failure is only
/// returned if no branch survives. Solutions outside the joint limits are
/// dropped, which can leave the list empty.
pub fn ik_solve(pose: &Pose, params: &ArmParams) -> Result<Vec<IkSolution>, IkFailure> {
    let k6 = pose.z_axis;
    let p5 = pose.p - params.d6 * k6;
    let shoulders = solve_theta1(p5, params.d4)?;

    let pos_tol = VERIFY_TOL * pose.p.norm().max(1.0);
    let mut solutions: Vec<IkSolution> = Vec::with_capacity(8);
    let mut reach_failure: Option<IkFailure> = None;
    let mut verify_failures = 0usize;

    for &(theta1, shoulder) in &shoulders {
        let wrists = wrist_frame(theta1, k6)
            .map_err(|e| e.with_context(&format!("shoulder branch {shoulder}")))?;
        for wrist in wrists {
            let mut target = project_p5(p5, theta1, params.d4);
            target.phi = signed_phi(wrist.r1, wrist.k5, wrist.r0);
            let elbows = match solve_theta2(&target, params) {
                Ok(roots) => roots,
                Err(e) => {
                    let ctx = format!("shoulder {shoulder}, wrist {}", wrist.branch);
                    reach_failure.get_or_insert(e.with_context(&ctx));
                    continue;
                }
            };
            let theta6 = solve_theta6(wrist.k5, k6, pose.x_axis);
            for (theta2, elbow) in elbows {
                let theta3 = match solve_theta3(theta2, &target, params) {
                    Ok(roots) => roots[0],
                    Err(e) if e.kind == IkFailureKind::OutOfReach => {
                        let ctx =
                            format!("shoulder {shoulder}, elbow {elbow}, wrist {}", wrist.branch);
                        reach_failure.get_or_insert(e.with_context(&ctx));
                        continue;
                    }
                    Err(_) => {
                        verify_failures += 1;
                        continue;
                    }
                };
                let theta4 = solve_theta4(target.phi, theta2, theta3);
                let angles = JointAngles([theta1, theta2, theta3, theta4, wrist.theta5, theta6])
                    .normalized();
                let (pos_residual, ori_residual) = residuals(&angles, pose, params);
                if pos_residual < pos_tol && ori_residual < VERIFY_TOL {
                    solutions.push(IkSolution {
                        angles,
                        branch: BranchLabel {
                            shoulder,
                            elbow,
                            wrist: wrist.branch,
                        },
                        pos_residual,
                        ori_residual,
                    });
                } else {
                    verify_failures += 1;
                }
            }
        }
    }

    if solutions.is_empty() {
        return Err(match (verify_failures, reach_failure) {
            (0, Some(e)) => e,
            (0, None) => IkFailure::new(IkFailureKind::OutOfReach, "no candidate configurations"),
            (n, _) => IkFailure::new(
                IkFailureKind::NoConsistentBranch,
                format!("all {n} candidate configurations failed forward verification"),
            ),
        });
    }

    solutions.sort_by_key(|s| s.branch);
    let mut unique: Vec<IkSolution> = Vec::with_capacity(solutions.len());
    for s in solutions {
        if !unique
            .iter()
            .any(|u| u.angles.max_distance(&s.angles) <= DEDUP_TOL)
        {
            unique.push(s);
        }
    }
    unique.retain(|s| params.within_limits(&s.angles));
    Ok(unique)
}

/// Solves a batch of poses across worker threads. Results are in input
/// order.
pub fn ik_solve_batch(
    poses: &[Pose],
    params: &ArmParams,
) -> Vec<Result<Vec<IkSolution>, IkFailure>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = poses.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = poses
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || part.iter().map(|p| ik_solve(p, params)).collect::<Vec<_>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("ik worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fk::{build_frames, fk_planar, wrist_centre};
    use crate::model::{pose_from_axes, JointLimit};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_4;

    fn contains_angle(roots: &[f64], want: f64, tol: f64) -> bool {
        roots.iter().any(|&r| normalize_angle(r - want).abs() < tol)
    }

    fn random_angles(rng: &mut ChaCha8Rng) -> JointAngles {
        JointAngles(std::array::from_fn(|_| rng.random_range(-PI..PI)))
    }

    #[test]
    fn trig_line_examples() {
        assert_eq!(
            solve_trig_line(&TrigLineEq::new(1.0, 0.0, 1.0)).unwrap(),
            vec![0.0]
        );

        let r = solve_trig_line(&TrigLineEq::new(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(contains_angle(&r, 0.0, 1e-15) && contains_angle(&r, FRAC_PI_2, 1e-15));

        let e = solve_trig_line(&TrigLineEq::new(1.0, 0.0, 2.0)).unwrap_err();
        assert_eq!(e.kind, IkFailureKind::OutOfReach);

        // C + A = 0: one root sits at θ = π.
        let eq = TrigLineEq::new(-1.0, 1.0, 1.0);
        let r = solve_trig_line(&eq).unwrap();
        assert_eq!(r.len(), 2);
        assert!(contains_angle(&r, FRAC_PI_2, 1e-15) && contains_angle(&r, PI, 1e-15));
        for t in r {
            assert!(eq.residual(t).abs() < 1e-15);
        }
    }

    #[test]
    fn trig_line_degenerate_double_root_at_pi() {
        // -cosθ = 1, B = 0: C + A = 0 and the discriminant vanishes.
        let r = solve_trig_line(&TrigLineEq::new(-1.0, 0.0, 1.0)).unwrap();
        assert_eq!(r, vec![PI]);
        let r = solve_trig_line(&TrigLineEq::new(2.0, 0.0, -2.0)).unwrap();
        assert_eq!(r, vec![PI]);
    }

    #[test]
    fn trig_line_rejects_zero_coefficients() {
        assert!(solve_trig_line(&TrigLineEq::new(0.0, 0.0, 0.5)).is_err());
    }

    #[test]
    fn trig_line_roots_satisfy_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let a = rng.random_range(-3.0..3.0);
            let b = rng.random_range(-3.0..3.0);
            // pick C inside the reachable band
            let amp = f64::hypot(a, b);
            let c = rng.random_range(-amp..amp);
            let eq = TrigLineEq::new(a, b, c);
            for t in solve_trig_line(&eq).unwrap() {
                assert!(eq.scaled_residual(t) < 1e-10, "{eq:?} at {t}");
            }
        }
    }

    #[test]
    fn theta1_examples() {
        let r = solve_theta1(Vec3::new(1.0, 1.0, 0.3), 0.0).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - FRAC_PI_4).abs() < 1e-15);
        assert!((r[1].0 + 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert_eq!((r[0].1, r[1].1), (Branch::A, Branch::B));

        let r = solve_theta1(Vec3::new(1.0, 0.0, 0.0), 1.0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].0 - FRAC_PI_2).abs() < 1e-15);

        let p5 = Vec3::new(0.3, 0.2, 0.1);
        let r = solve_theta1(p5, 0.06).unwrap();
        assert_eq!(r.len(), 2);
        for (t, _) in r {
            let residual = p5.x * t.sin() - p5.y * t.cos() - 0.06;
            assert!(residual.abs() < 1e-12);
        }

        let e = solve_theta1(Vec3::new(0.01, 0.0, 0.0), 0.06).unwrap_err();
        assert_eq!(e.kind, IkFailureKind::ShoulderSingularity);
        let e = solve_theta1(Vec3::new(0.0, 0.0, 0.4), 0.0).unwrap_err();
        assert_eq!(e.kind, IkFailureKind::ShoulderSingularity);
    }

    #[test]
    fn theta1_branches_straddle_the_base() {
        let p5 = Vec3::new(0.3, 0.2, 0.1);
        let r = solve_theta1(p5, 0.06).unwrap();
        let xa = project_p5(p5, r[0].0, 0.06).x;
        let xb = project_p5(p5, r[1].0, 0.06).x;
        assert!(xa > 0.0 && xb < 0.0);
        assert!((xa + xb).abs() < 1e-12);
    }

    #[test]
    fn wrist_frame_examples() {
        let [a, b] = wrist_frame(0.0, Vec3::X).unwrap();
        assert!((a.theta5 - FRAC_PI_2).abs() < 1e-15);
        assert!((a.k5 - Vec3::Z).norm() < 1e-15);
        assert_eq!(b.theta5, -a.theta5);
        assert_eq!(b.k5, -a.k5);

        let e = wrist_frame(0.0, -Vec3::Y).unwrap_err();
        assert_eq!(e.kind, IkFailureKind::WristSingularity);
        let e = wrist_frame(0.0, Vec3::Y).unwrap_err();
        assert_eq!(e.kind, IkFailureKind::WristSingularity);
    }

    #[test]
    fn wrist_frame_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let t1 = rng.random_range(-PI..PI);
            let k6 = Vec3::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
            .try_normalize(1e-3);
            let Some(k6) = k6 else { continue };
            for w in wrist_frame(t1, k6).unwrap() {
                assert!((w.theta5.cos() - w.r0.dot(k6)).abs() < 1e-12);
                assert!(w.k5.dot(w.r0).abs() < 1e-12);
                assert!(w.k5.dot(k6).abs() < 1e-12);
                // rotating r0 about k5 by θ5 lands on k6
                let rebuilt = w.theta5.cos() * w.r0 + w.theta5.sin() * w.k5.cross(w.r0);
                assert!((rebuilt - k6).norm() < 1e-12);
            }
            let [a, _] = wrist_frame(t1, k6).unwrap();
            assert!(a.r0.cross(k6).dot(a.k5) > 0.0);
        }
    }

    #[test]
    fn signed_phi_examples() {
        let (r0, r1) = base_axes(0.0);
        assert!((signed_phi(r1, Vec3::Z, r0) - FRAC_PI_2).abs() < 1e-15);
        assert!((signed_phi(r1, -Vec3::Z, r0) + FRAC_PI_2).abs() < 1e-15);
        assert_eq!(signed_phi(r1, r1, r0), 0.0);
    }

    #[test]
    fn project_p5_examples() {
        let t = project_p5(Vec3::new(1.0, 0.0, 0.5), 0.0, 0.0);
        assert_eq!((t.x, t.z), (1.0, 0.5));
        let t = project_p5(Vec3::new(1.0, -0.06, 0.2), 0.0, 0.06);
        assert!((t.x - 1.0).abs() < 1e-15);
        assert_eq!(t.z, 0.2);
    }

    #[test]
    fn project_p5_matches_planar_fk() {
        let params = ArmParams::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let q = random_angles(&mut rng);
            let (p5, frames) = wrist_centre(&q, &params);
            let t = project_p5(p5, q[0], params.d4);
            let (x, z) = fk_planar(q[1], q[2], frames.phi, &params);
            assert!((t.x - x).abs() < 1e-10 && (t.z - z).abs() < 1e-10);
            // |X| is the length of the horizontal projection after the offset is removed
            let in_plane = p5 - params.d4 * frames.r0;
            assert!((t.x.abs() - in_plane.x.hypot(in_plane.y)).abs() < 1e-10);
        }
    }

    #[test]
    fn theta2_examples() {
        let p = ArmParams::reference();
        let reach = p.a2 + p.a3 + p.d5;
        let up = PlanarTarget {
            x: 0.0,
            z: reach,
            phi: FRAC_PI_2,
        };
        let roots: Vec<f64> = solve_theta2(&up, &p)
            .unwrap()
            .into_iter()
            .map(|r| r.0)
            .collect();
        assert!(contains_angle(&roots, FRAC_PI_2, 1e-7));

        let flat = PlanarTarget {
            x: reach,
            z: 0.0,
            phi: 0.0,
        };
        let roots = solve_theta2(&flat, &p).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].0.abs() < 1e-7);

        let far = PlanarTarget {
            x: 10.0,
            z: 0.0,
            phi: 0.0,
        };
        assert_eq!(
            solve_theta2(&far, &p).unwrap_err().kind,
            IkFailureKind::OutOfReach
        );
    }

    #[test]
    fn theta3_and_theta4_on_extended_chains() {
        let p = ArmParams::reference();
        let reach = p.a2 + p.a3 + p.d5;
        let up = PlanarTarget {
            x: 0.0,
            z: reach,
            phi: FRAC_PI_2,
        };
        let t3 = solve_theta3(FRAC_PI_2, &up, &p).unwrap();
        assert!(t3[0].abs() < 1e-7);
        let flat = PlanarTarget {
            x: reach,
            z: 0.0,
            phi: 0.0,
        };
        let t3 = solve_theta3(0.0, &flat, &p).unwrap();
        assert!(t3[0].abs() < 1e-7);
    }

    #[test]
    fn theta3_filter_drops_mirror_root() {
        let params = ArmParams::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        for _ in 0..500 {
            let q = random_angles(&mut rng);
            let phi = build_frames(&q).phi;
            let (x, z) = fk_planar(q[1], q[2], phi, &params);
            let target = PlanarTarget { x, z, phi };
            let kept = solve_theta3(q[1], &target, &params).unwrap();
            assert!(normalize_angle(kept[0] - q[2]).abs() < 1e-9);
            let raw = solve_trig_line(&elbow_line(q[1], &target, &params).as_trig_line()).unwrap();
            if let Some(&mirror) = raw
                .iter()
                .find(|&&t| normalize_angle(t - q[2]).abs() > 1e-6)
            {
                // the discarded root misses the height by 2·a3·|sin(θ2 + θ3)|
                let miss = planar_z_residual(q[1], mirror, &target, &params).abs();
                let expect = 2.0 * params.a3 * (q[1] + q[2]).sin().abs();
                assert!((miss - expect).abs() < 1e-9);
                if expect > 1e-6 {
                    assert!(!kept
                        .iter()
                        .any(|&t| normalize_angle(t - mirror).abs() < 1e-9));
                    checked += 1;
                }
            }
        }
        assert!(checked > 400);
    }

    #[test]
    fn theta4_examples() {
        assert_eq!(solve_theta4(-FRAC_PI_2, 0.0, 0.0), 0.0);
        assert!((solve_theta4(FRAC_PI_2, FRAC_PI_2, 0.0) - FRAC_PI_2).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let (phi, t2, t3) = (
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
            );
            let t4 = solve_theta4(phi, t2, t3);
            assert!(normalize_angle(t2 + t3 + t4 - FRAC_PI_2 - phi).abs() < 1e-12);
        }
    }

    #[test]
    fn theta6_examples() {
        let k5 = Vec3::Z;
        let k6 = Vec3::X;
        let m5 = k6.cross(k5);
        assert_eq!(solve_theta6(k5, k6, m5), 0.0);
        assert!((solve_theta6(k5, k6, k6.cross(m5)) - FRAC_PI_2).abs() < 1e-15);
        assert!((solve_theta6(k5, k6, -m5) - PI).abs() < 1e-15);
    }

    #[test]
    fn far_target_is_out_of_reach() {
        let pose = pose_from_axes(Vec3::new(10.0, 0.0, 0.0), Vec3::X, Vec3::Z).unwrap();
        let e = ik_solve(&pose, &ArmParams::reference()).unwrap_err();
        assert_eq!(e.kind, IkFailureKind::OutOfReach, "{e}");
    }

    #[test]
    fn home_pose_is_wrist_singular() {
        let params = ArmParams::reference();
        let pose = fk(&JointAngles::ZERO, &params);
        let e = ik_solve(&pose, &params).unwrap_err();
        assert_eq!(e.kind, IkFailureKind::WristSingularity, "{e}");
    }

    #[test]
    fn round_trip_recovers_generator() {
        let params = ArmParams::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut n = 0;
        while n < 300 {
            let q = random_angles(&mut rng);
            if q[4].sin().abs() < 0.05 {
                continue;
            }
            n += 1;
            let pose = fk(&q, &params);
            let sols = ik_solve(&pose, &params).unwrap();
            assert!((1..=8).contains(&sols.len()));
            assert!(
                sols.iter().any(|s| s.angles.max_distance(&q) < 1e-8),
                "{q:?} -> {sols:?}"
            );
            for s in &sols {
                assert!(s.pos_residual < 1e-8 && s.ori_residual < 1e-8);
            }
            for w in sols.windows(2) {
                assert!(w[0].branch < w[1].branch);
            }
        }
    }

    #[test]
    fn joint_limits_filter_solutions() {
        let mut params = ArmParams::reference();
        let q = JointAngles([0.4, 0.3, -0.7, 0.2, 1.0, 0.5]);
        let pose = fk(&q, &params);
        let all = ik_solve(&pose, &params).unwrap();
        params.joint_limits[0] = JointLimit { lo: 0.0, hi: 1.0 };
        let limited = ik_solve(&pose, &params).unwrap();
        assert!(limited.len() < all.len());
        assert!(limited.iter().all(|s| (0.0..=1.0).contains(&s.angles[0])));
        assert!(limited.iter().any(|s| s.angles.max_distance(&q) < 1e-8));
    }

    #[test]
    fn batch_preserves_order() {
        let params = ArmParams::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let poses: Vec<Pose> = (0..37)
            .map(|_| fk(&random_angles(&mut rng), &params))
            .collect();
        let batch = ik_solve_batch(&poses, &params);
        let serial: Vec<_> = poses.iter().map(|p| ik_solve(p, &params)).collect();
        assert_eq!(batch, serial);
    }
}
