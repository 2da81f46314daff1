//! Value types shared by the forward and inverse solvers, plus the small
//! amount of 3-vector math they need.
//!
//! Frame conventions: the base z-axis is vertical and is the axis of joint 1.
//! Joints 2, 3 and 4 rotate about the arm-plane normal `r0`, joint 5 about
//! `k5` and joint 6 about the tool z-axis `k6`. A pose carries only the tool
//! x- and z-axes; the y-axis is implied as `z × x`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::KinError;

/// Tolerance for unit-length and orthogonality checks on pose axes.
pub const AXIS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Returns `None` for vectors shorter than `min_len`.
    pub fn try_normalize(self, min_len: f64) -> Option<Vec3> {
        let n = self.norm();
        (n >= min_len && n.is_finite()).then(|| self * (1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// Inclusive joint range in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct JointLimit {
    pub lo: f64,
    pub hi: f64,
}

impl JointLimit {
    pub const FULL: JointLimit = JointLimit { lo: -PI, hi: PI };

    pub fn contains(&self, theta: f64) -> bool {
        theta >= self.lo && theta <= self.hi
    }
}

impl From<[f64; 2]> for JointLimit {
    fn from(a: [f64; 2]) -> Self {
        JointLimit { lo: a[0], hi: a[1] }
    }
}

impl From<JointLimit> for [f64; 2] {
    fn from(l: JointLimit) -> Self {
        [l.lo, l.hi]
    }
}

/// Geometric constants of the arm.
///
/// `a2` and `a3` are the upper-arm and forearm lengths in the arm plane, `d4`
/// is the lateral offset along the arm-plane normal, `d5` the wrist link
/// along `k5` and `d6` the tool length along `k6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmParams {
    pub a2: f64,
    pub a3: f64,
    pub d4: f64,
    pub d5: f64,
    pub d6: f64,
    pub joint_limits: [JointLimit; 6],
}

impl ArmParams {
    /// Builds a validated parameter set.
    pub fn new(
        a2: f64,
        a3: f64,
        d4: f64,
        d5: f64,
        d6: f64,
        joint_limits: [JointLimit; 6],
    ) -> Result<Self, KinError> {
        let p = ArmParams {
            a2,
            a3,
            d4,
            d5,
            d6,
            joint_limits,
        };
        p.validate()?;
        Ok(p)
    }

    /// The reference arm used throughout the tests and examples:
    /// 0.30 / 0.25 m links, 0.06 m lateral offset, 0.08 m wrist link and a
    /// 0.10 m tool, every joint limited to (−π, π].
    pub fn reference() -> Self {
        ArmParams {
            a2: 0.30,
            a3: 0.25,
            d4: 0.06,
            d5: 0.08,
            d6: 0.10,
            joint_limits: [JointLimit::FULL; 6],
        }
    }

    /// Checks the parameter invariants, naming the first offending field.
    pub fn validate(&self) -> Result<(), KinError> {
        let scalars = [
            ("a2", self.a2),
            ("a3", self.a3),
            ("d4", self.d4),
            ("d5", self.d5),
            ("d6", self.d6),
        ];
        for (name, v) in scalars {
            if !v.is_finite() {
                return Err(KinError::invalid(
                    name,
                    format!("{name} must be finite, got {v}"),
                ));
            }
        }
        if self.a2 <= 0.0 {
            return Err(KinError::invalid(
                "a2",
                format!("a2 must be > 0, got {}", self.a2),
            ));
        }
        if self.a3 <= 0.0 {
            return Err(KinError::invalid(
                "a3",
                format!("a3 must be > 0, got {}", self.a3),
            ));
        }
        if self.d5 < 0.0 {
            return Err(KinError::invalid(
                "d5",
                format!("d5 must be >= 0, got {}", self.d5),
            ));
        }
        if self.d6 < 0.0 {
            return Err(KinError::invalid(
                "d6",
                format!("d6 must be >= 0, got {}", self.d6),
            ));
        }
        for (i, lim) in self.joint_limits.iter().enumerate() {
            let field = format!("joint_limits[{i}]");
            if !(lim.lo.is_finite() && lim.hi.is_finite()) || lim.lo >= lim.hi {
                return Err(KinError::invalid(
                    &field,
                    format!("need lo < hi, got [{}, {}]", lim.lo, lim.hi),
                ));
            }
            if lim.lo < -TAU || lim.hi > TAU {
                return Err(KinError::invalid(
                    &field,
                    format!(
                        "limits must lie within [-2pi, 2pi], got [{}, {}]",
                        lim.lo, lim.hi
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Outer radius of the wrist-centre workspace in the arm plane.
    pub fn planar_reach(&self) -> f64 {
        self.a2 + self.a3 + self.d5
    }

    pub fn within_limits(&self, angles: &JointAngles) -> bool {
        self.joint_limits
            .iter()
            .zip(angles.0.iter())
            .all(|(lim, &t)| lim.contains(t))
    }
}

/// Six joint values θ1..θ6 in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JointAngles(pub [f64; 6]);

impl JointAngles {
    pub const ZERO: JointAngles = JointAngles([0.0; 6]);

    pub fn new(theta: [f64; 6]) -> Self {
        JointAngles(theta)
    }

    /// Copy with every joint wrapped into (−π, π].
    pub fn normalized(&self) -> Self {
        JointAngles(self.0.map(normalize_angle))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|t| t.is_finite())
    }

    /// Largest per-joint angular distance, measured modulo 2π.
    pub fn max_distance(&self, other: &JointAngles) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| angular_distance(a, b))
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for JointAngles {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// End-effector pose: tool position `p` (P6) with the tool x-axis (m6) and
/// z-axis (k6). Construct through [`pose_from_axes`] to get the invariants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub p: Vec3,
    pub x_axis: Vec3,
    pub z_axis: Vec3,
}

impl Pose {
    pub fn y_axis(&self) -> Vec3 {
        self.z_axis.cross(self.x_axis)
    }

    /// Rotation matrix, row-major, with columns (x, y, z).
    pub fn rotation_rows(&self) -> [[f64; 3]; 3] {
        let (x, y, z) = (self.x_axis, self.y_axis(), self.z_axis);
        [[x.x, y.x, z.x], [x.y, y.y, z.y], [x.z, y.z, z.z]]
    }

    /// Larger of the angles between corresponding x- and z-axes.
    pub fn orientation_error(&self, other: &Pose) -> f64 {
        angle_between_axes(self.x_axis, other.x_axis)
            .max(angle_between_axes(self.z_axis, other.z_axis))
    }

    pub fn position_error(&self, other: &Pose) -> f64 {
        (self.p - other.p).norm()
    }
}

/// `A·cosθ + B·sinθ = C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigLineEq {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TrigLineEq {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        TrigLineEq { a, b, c }
    }

    pub fn residual(&self, theta: f64) -> f64 {
        self.a * theta.cos() + self.b * theta.sin() - self.c
    }

    /// Residual divided by `max(1, |A| + |B| + |C|)`.
    pub fn scaled_residual(&self, theta: f64) -> f64 {
        self.residual(theta).abs() / 1f64.max(self.a.abs() + self.b.abs() + self.c.abs())
    }

    /// Half-angle discriminant `B² − (C² − A²)`.
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - (self.c * self.c - self.a * self.a)
    }
}

/// Real part of the planar chain once θ2 is known:
/// `L5·cosθ3 − L6·sinθ3 = L4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElbowRealEq {
    pub l4: f64,
    pub l5: f64,
    pub l6: f64,
}

impl ElbowRealEq {
    pub fn as_trig_line(&self) -> TrigLineEq {
        TrigLineEq::new(self.l5, -self.l6, self.l4)
    }
}

/// Which root of a two-way choice was taken. Letters are positional: `A` is
/// the `+` root of the half-angle formula (or the arcsine branch for the
/// shoulder, the positive-sine branch for the wrist).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Branch {
    A,
    B,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::A => "A",
            Branch::B => "B",
        })
    }
}

impl std::str::FromStr for Branch {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(Branch::A),
            "B" => Ok(Branch::B),
            _ => Err(format!("unknown branch letter {s:?}")),
        }
    }
}

/// Branch choices for the shoulder (θ1), elbow (θ2) and wrist (θ5) roots.
/// Orders lexicographically by (shoulder, elbow, wrist).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchLabel {
    pub shoulder: Branch,
    pub elbow: Branch,
    pub wrist: Branch,
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.shoulder, self.elbow, self.wrist)
    }
}

impl std::str::FromStr for BranchLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters: Vec<Branch> = s
            .chars()
            .map(|c| c.to_string().parse())
            .collect::<Result<_, _>>()?;
        match letters[..] {
            [shoulder, elbow, wrist] => Ok(BranchLabel {
                shoulder,
                elbow,
                wrist,
            }),
            _ => Err(format!("branch label must be three letters, got {s:?}")),
        }
    }
}

impl Serialize for BranchLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BranchLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One verified joint configuration reaching the target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IkSolution {
    #[serde(rename = "theta")]
    pub angles: JointAngles,
    pub branch: BranchLabel,
    pub pos_residual: f64,
    pub ori_residual: f64,
}

/// Wraps an angle into (−π, π].
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs.
    if r > PI {
        r - TAU
    } else if r <= -PI {
        r + TAU
    } else {
        r
    }
}

/// Unsigned distance between two angles modulo 2π, in [0, π].
pub fn angular_distance(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

/// Unsigned angle between two unit vectors, in [0, π].
pub fn angle_between_axes(u: Vec3, v: Vec3) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

/// Builds a pose from a position and two (approximately) orthonormal axes.
///
/// `z_axis` keeps its direction; `x_axis` is Gram–Schmidt orthogonalized
/// against it and both are normalized.
pub fn pose_from_axes(p: Vec3, x_axis: Vec3, z_axis: Vec3) -> Result<Pose, KinError> {
    if !(p.is_finite() && x_axis.is_finite() && z_axis.is_finite()) {
        return Err(KinError::NonFinite("pose components"));
    }
    let z = z_axis
        .try_normalize(AXIS_TOL)
        .ok_or(KinError::DegenerateAxes("z_axis has near-zero length"))?;
    let x = x_axis
        .try_normalize(AXIS_TOL)
        .ok_or(KinError::DegenerateAxes("x_axis has near-zero length"))?;
    if x.cross(z).norm() < AXIS_TOL {
        return Err(KinError::DegenerateAxes("x_axis and z_axis are parallel"));
    }
    let x = (x - x.dot(z) * z)
        .try_normalize(AXIS_TOL)
        .ok_or(KinError::DegenerateAxes("x_axis and z_axis are parallel"))?;
    Ok(Pose {
        p,
        x_axis: x,
        z_axis: z,
    })
}

/// Builds a pose from a row-major 3×3 rotation matrix, taking its first and
/// third columns as the x- and z-axes.
pub fn pose_from_rotation(p: Vec3, rows: [f64; 9]) -> Result<Pose, KinError> {
    let x = Vec3::new(rows[0], rows[3], rows[6]);
    let z = Vec3::new(rows[2], rows[5], rows[8]);
    pose_from_axes(p, x, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_angle(0.0), 0.0);
        assert!((normalize_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert_eq!(normalize_angle(-PI), PI);
        assert_eq!(normalize_angle(PI), PI);
        assert!((normalize_angle(-3.0 * PI) - PI).abs() < 1e-12);
        assert!((normalize_angle(-0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn normalize_tiny_negative_stays_in_range() {
        let r = normalize_angle(-1e-300);
        assert!(r > -PI && r <= PI);
    }

    #[test]
    fn angle_between_examples() {
        assert_eq!(angle_between_axes(Vec3::X, Vec3::X), 0.0);
        assert!((angle_between_axes(Vec3::X, Vec3::Y) - PI / 2.0).abs() < 1e-15);
        assert!((angle_between_axes(Vec3::X, -Vec3::X) - PI).abs() < 1e-15);
    }

    #[test]
    fn pose_from_axes_examples() {
        let pose = pose_from_axes(Vec3::ZERO, Vec3::X, Vec3::Z).unwrap();
        assert_eq!(pose.x_axis, Vec3::X);
        assert_eq!(pose.z_axis, Vec3::Z);
        assert_eq!(pose.y_axis(), Vec3::Y);

        let pose = pose_from_axes(Vec3::ZERO, Vec3::new(1.0, 1e-12, 0.0), Vec3::Z).unwrap();
        assert!((pose.x_axis - Vec3::X).norm() < 1e-11);
        assert!((pose.x_axis.norm() - 1.0).abs() < 1e-15);

        assert!(matches!(
            pose_from_axes(Vec3::ZERO, Vec3::Z, Vec3::Z),
            Err(KinError::DegenerateAxes(_))
        ));
        assert!(matches!(
            pose_from_axes(Vec3::ZERO, Vec3::ZERO, Vec3::Z),
            Err(KinError::DegenerateAxes(_))
        ));
    }

    #[test]
    fn pose_from_axes_orthogonalizes_skewed_x() {
        let pose = pose_from_axes(
            Vec3::ZERO,
            Vec3::new(1.0, 0.0, 0.3),
            Vec3::new(0.0, 0.0, 2.0),
        )
        .unwrap();
        assert_eq!(pose.z_axis, Vec3::Z);
        assert!((pose.x_axis - Vec3::X).norm() < 1e-15);
    }

    #[test]
    fn rotation_import_uses_first_and_third_columns() {
        // 90° about z: x -> y, y -> -x.
        let rows = [0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        let pose = pose_from_rotation(Vec3::ZERO, rows).unwrap();
        assert_eq!(pose.x_axis, Vec3::Y);
        assert_eq!(pose.z_axis, Vec3::Z);
        assert_eq!(pose.y_axis(), -Vec3::X);
    }

    #[test]
    fn reference_params_are_valid() {
        ArmParams::reference().validate().unwrap();
        let mut bad = ArmParams::reference();
        bad.a2 = -1.0;
        assert!(
            matches!(bad.validate(), Err(KinError::InvalidParam { ref field, .. }) if field == "a2")
        );
        let mut bad = ArmParams::reference();
        bad.joint_limits[2] = JointLimit { lo: 1.0, hi: 0.5 };
        assert!(bad.validate().is_err());
        let mut bad = ArmParams::reference();
        bad.joint_limits[0] = JointLimit { lo: -7.0, hi: 0.5 };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn branch_label_text_round_trip() {
        let l = BranchLabel {
            shoulder: Branch::B,
            elbow: Branch::A,
            wrist: Branch::B,
        };
        assert_eq!(l.to_string(), "BAB");
        assert_eq!("BAB".parse::<BranchLabel>().unwrap(), l);
        assert!("AB".parse::<BranchLabel>().is_err());
        assert!("ABC".parse::<BranchLabel>().is_err());
    }

    fn unit_vec() -> impl Strategy<Value = Vec3> {
        (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_filter_map("non-degenerate", |(x, y, z)| {
            Vec3::new(x, y, z).try_normalize(1e-3)
        })
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_congruent(x in -1e4..1e4f64) {
            let n = normalize_angle(x);
            prop_assert!(n > -PI && n <= PI);
            prop_assert_eq!(normalize_angle(n), n);
            let k = ((x - n) / TAU).round();
            prop_assert!((x - n - k * TAU).abs() < 1e-9);
        }

        #[test]
        fn angle_between_is_symmetric(u in unit_vec(), v in unit_vec()) {
            let a = angle_between_axes(u, v);
            prop_assert!((a - angle_between_axes(v, u)).abs() < 1e-12);
            prop_assert!((0.0..=PI).contains(&a));
        }

        #[test]
        fn pose_triad_is_right_handed(x in unit_vec(), z in unit_vec()) {
            prop_assume!(x.cross(z).norm() > 1e-3);
            let pose = pose_from_axes(Vec3::ZERO, x, z).unwrap();
            let (x, y, z) = (pose.x_axis, pose.y_axis(), pose.z_axis);
            prop_assert!((x.norm() - 1.0).abs() < AXIS_TOL);
            prop_assert!((z.norm() - 1.0).abs() < AXIS_TOL);
            prop_assert!(x.dot(z).abs() < AXIS_TOL);
            let det = x.dot(y.cross(z));
            prop_assert!((det - 1.0).abs() < 1e-9);
        }
    }
}
