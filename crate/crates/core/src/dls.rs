//! Iterative damped-least-squares inverse kinematics.
//!
//! Used as an independent cross-check of the closed-form solver and as the
//! timing baseline. The Jacobian is taken by central differences on [`fk`],
//! so the two solvers share nothing but the forward model.

use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};

use crate::fk::fk;
use crate::model::{ArmParams, JointAngles, Pose};

/// Default central-difference step for [`numeric_jacobian`].
pub const JACOBIAN_STEP: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlsConfig {
    /// Damping λ; the update solves `(J Jᵀ + λ² I)`.
    pub damping: f64,
    pub max_iters: usize,
    pub pos_tol: f64,
    pub ori_tol: f64,
    /// Fraction of the damped step applied per iteration, in (0, 1].
    pub step_scale: f64,
}

impl Default for DlsConfig {
    fn default() -> Self {
        DlsConfig {
            damping: 0.01,
            max_iters: 200,
            pos_tol: 1e-6,
            ori_tol: 1e-6,
            step_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DlsResult {
    pub angles: JointAngles,
    /// Number of updates applied.
    pub iterations: usize,
    pub converged: bool,
    pub final_pos_residual: f64,
    pub final_ori_residual: f64,
}

fn rotation(pose: &Pose) -> Matrix3<f64> {
    let (x, y, z) = (pose.x_axis, pose.y_axis(), pose.z_axis);
    Matrix3::new(x.x, y.x, z.x, x.y, y.y, z.y, x.z, y.z, z.z)
}

/// Rotation vector (axis × angle) of a rotation matrix.
///
/// Uses `atan2` on the skew and trace parts so small angles keep full
/// relative precision; near π the axis comes from the symmetric part.
pub fn rotation_log(r: &Matrix3<f64>) -> Vector3<f64> {
    let skew = Vector3::new(
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    ) * 0.5;
    let sin = skew.norm();
    let cos = (r.trace() - 1.0) * 0.5;
    let angle = sin.atan2(cos);
    if cos > -0.9 {
        if sin < 1e-300 {
            return Vector3::zeros();
        }
        return skew * (angle / sin);
    }
    // R + Rᵀ = 2cosθ·I + 2(1 − cosθ)·n nᵀ: take the best-conditioned column.
    let sym = (r + r.transpose()) * 0.5 - Matrix3::identity() * cos;
    let i = (0..3)
        .max_by(|&a, &b| sym[(a, a)].total_cmp(&sym[(b, b)]))
        .unwrap();
    let mut axis = sym.column(i).into_owned().normalize();
    if axis.dot(&skew) < 0.0 {
        axis = -axis;
    }
    axis * angle
}

/// Rotation vector of the rotation taking `from` onto `to`, expressed in
/// the base frame.
pub fn orientation_error(from: &Pose, to: &Pose) -> [f64; 3] {
    let v = rotation_log(&(rotation(to) * rotation(from).transpose()));
    [v.x, v.y, v.z]
}

/// Position difference stacked over the rotation vector from `from` to `to`.
pub fn task_error(from: &Pose, to: &Pose) -> Vector6<f64> {
    let dp = to.p - from.p;
    let [wx, wy, wz] = orientation_error(from, to);
    Vector6::new(dp.x, dp.y, dp.z, wx, wy, wz)
}

/// 6×6 Jacobian of (position, rotation vector) with respect to the joints,
/// by central differences with step `h`. The rotation coordinates are taken
/// relative to the pose at `angles`.
pub fn numeric_jacobian(angles: &JointAngles, params: &ArmParams, h: f64) -> Matrix6<f64> {
    let reference = fk(angles, params);
    let mut jac = Matrix6::zeros();
    for i in 0..6 {
        let mut plus = *angles;
        let mut minus = *angles;
        plus.0[i] += h;
        minus.0[i] -= h;
        let fwd = task_error(&reference, &fk(&plus, params));
        let back = task_error(&reference, &fk(&minus, params));
        jac.set_column(i, &((fwd - back) / (2.0 * h)));
    }
    jac
}

/// Damped-least-squares iteration `Δθ = Jᵀ (J Jᵀ + λ² I)⁻¹ e` from `seed`.
///
/// The error norm is not guaranteed to decrease monotonically. Running out
/// of iterations is reported through `converged = false`, not as an error.
pub fn ik_dls(pose: &Pose, seed: &JointAngles, params: &ArmParams, cfg: &DlsConfig) -> DlsResult {
    let mut angles = seed.normalized();
    let damping_sq = cfg.damping * cfg.damping;
    let mut iterations = 0;
    loop {
        let current = fk(&angles, params);
        let pos = current.position_error(pose);
        let ori = current.orientation_error(pose);
        let converged = pos < cfg.pos_tol && ori < cfg.ori_tol;
        if converged || iterations >= cfg.max_iters {
            return DlsResult {
                angles,
                iterations,
                converged,
                final_pos_residual: pos,
                final_ori_residual: ori,
            };
        }
        let err = task_error(&current, pose);
        let jac = numeric_jacobian(&angles, params, JACOBIAN_STEP);
        let system = jac * jac.transpose() + Matrix6::identity() * damping_sq;
        let Some(y) = system.lu().solve(&err) else {
            // Singular only when λ = 0 at a kinematic singularity.
            return DlsResult {
                angles,
                iterations,
                converged: false,
                final_pos_residual: pos,
                final_ori_residual: ori,
            };
        };
        let step = jac.transpose() * y * cfg.step_scale;
        for (t, d) in angles.0.iter_mut().zip(step.iter()) {
            *t += d;
        }
        angles = angles.normalized();
        iterations += 1;
    }
}
