//! Closed-form geometric inverse kinematics for a six-revolute arm whose
//! joints 2–4 share a plane offset laterally from the base axis, with a
//! matching forward model and a damped-least-squares baseline.
//!
//! ```
//! use geoik_core::{fk, ik_solve, ArmParams, JointAngles};
//!
//! let params = ArmParams::reference();
//! let q = JointAngles([0.4, 0.3, -0.7, 0.2, 1.0, 0.5]);
//! let pose = fk(&q, &params);
//! let solutions = ik_solve(&pose, &params).unwrap();
//! assert!(solutions.iter().any(|s| s.angles.max_distance(&q) < 1e-8));
//! ```

pub mod dls;
pub mod error;
pub mod fk;
pub mod ik;
pub mod model;

pub use dls::{ik_dls, numeric_jacobian, DlsConfig, DlsResult};
pub use error::{IkFailure, IkFailureKind, KinError};
pub use fk::{build_frames, fk, fk_planar, FrameSet};
pub use ik::{ik_solve, ik_solve_batch, PlanarTarget};
pub use model::{
    angle_between_axes, normalize_angle, pose_from_axes, pose_from_rotation, ArmParams, Branch,
    BranchLabel, IkSolution, JointAngles, JointLimit, Pose, TrigLineEq, Vec3,
};
