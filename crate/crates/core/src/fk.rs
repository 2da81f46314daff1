//! Forward kinematics.
//!
//! The chain is built from the same vectors the inverse solver recovers:
//! the arm-plane normal `r0` and in-plane horizontal `r1` (from θ1), the
//! cumulative in-plane angle `phi = θ2 + θ3 + θ4 − π/2`, the joint-5 axis
//! `k5`, the tool z-axis `k6` and the x-axes `m5`, `m6`.

use std::f64::consts::FRAC_PI_2;

use crate::model::{normalize_angle, ArmParams, JointAngles, Pose, Vec3};

/// Intermediate axes of the chain for one joint configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSet {
    /// Arm-plane normal (axis of joints 2–4).
    pub r0: Vec3,
    /// In-plane horizontal direction.
    pub r1: Vec3,
    /// Joint-5 axis.
    pub k5: Vec3,
    pub m5: Vec3,
    /// Tool z-axis (joint-6 axis).
    pub k6: Vec3,
    /// Tool x-axis.
    pub m6: Vec3,
    /// Angle of `k5` above `r1`, normalized to (−π, π].
    pub phi: f64,
}

/// Arm-plane normal and in-plane horizontal for a base angle.
pub fn base_axes(theta1: f64) -> (Vec3, Vec3) {
    let (s, c) = theta1.sin_cos();
    (Vec3::new(s, -c, 0.0), Vec3::new(c, s, 0.0))
}

pub fn cumulative_phi(theta2: f64, theta3: f64, theta4: f64) -> f64 {
    theta2 + theta3 + theta4 - FRAC_PI_2
}

pub fn build_frames(angles: &JointAngles) -> FrameSet {
    let [t1, t2, t3, t4, t5, t6] = angles.0;
    let (r0, r1) = base_axes(t1);
    let phi = cumulative_phi(t2, t3, t4);
    let (sp, cp) = phi.sin_cos();
    let k5 = cp * r1 + sp * Vec3::Z;
    let (s5, c5) = t5.sin_cos();
    let k6 = c5 * r0 + s5 * k5.cross(r0);
    let m5 = k6.cross(k5);
    let (s6, c6) = t6.sin_cos();
    let m6 = c6 * m5 + s6 * k6.cross(m5);
    FrameSet {
        r0,
        r1,
        k5,
        m5,
        k6,
        m6,
        phi: normalize_angle(phi),
    }
}

/// In-plane coordinates (X, Z) of the joint-5 centre relative to the
/// shoulder, X along `r1` and Z vertical.
pub fn fk_planar(theta2: f64, theta3: f64, phi: f64, params: &ArmParams) -> (f64, f64) {
    let t23 = theta2 + theta3;
    let x = params.a2 * theta2.cos() + params.a3 * t23.cos() + params.d5 * phi.cos();
    let z = params.a2 * theta2.sin() + params.a3 * t23.sin() + params.d5 * phi.sin();
    (x, z)
}

/// Joint-5 centre P5 for a configuration, returned with its frames.
pub fn wrist_centre(angles: &JointAngles, params: &ArmParams) -> (Vec3, FrameSet) {
    let frames = build_frames(angles);
    let [_, t2, t3, t4, ..] = angles.0;
    let (x, z) = fk_planar(t2, t3, cumulative_phi(t2, t3, t4), params);
    let p5 = x * frames.r1 + z * Vec3::Z + params.d4 * frames.r0;
    (p5, frames)
}

pub fn fk(angles: &JointAngles, params: &ArmParams) -> Pose {
    let (p5, frames) = wrist_centre(angles, params);
    Pose {
        p: p5 + params.d6 * frames.k6,
        x_axis: frames.m6,
        z_axis: frames.k6,
    }
}
