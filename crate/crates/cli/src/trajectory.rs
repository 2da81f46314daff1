//! Solving a waypoint sequence while keeping joint motion continuous.

use geoik_core::{
    ik_solve, ArmParams, BranchLabel, IkFailure, IkFailureKind, IkSolution, JointAngles, Pose,
};

use crate::error::HarnessError;

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryResult {
    pub waypoints: Vec<Pose>,
    pub angles: Vec<JointAngles>,
    pub branches: Vec<BranchLabel>,
    /// Max per-joint distance from the previous choice (from the reference
    /// for the first waypoint).
    pub jumps: Vec<f64>,
    /// Largest jump between consecutive waypoints; the move from the
    /// reference onto the first waypoint is not counted.
    pub max_jump: f64,
    /// Every solution available at each waypoint.
    pub candidates: Vec<Vec<IkSolution>>,
}

/// Solution nearest to `from` by max per-joint distance. Solutions arrive
/// in branch order, so the first minimum wins ties.
pub fn nearest(solutions: &[IkSolution], from: &JointAngles) -> Option<(IkSolution, f64)> {
    let mut best: Option<(IkSolution, f64)> = None;
    for s in solutions {
        let d = s.angles.max_distance(from);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((*s, d));
        }
    }
    best
}

/// Solves every waypoint, starting from the all-zero configuration.
pub fn run_trajectory(
    waypoints: &[Pose],
    params: &ArmParams,
) -> Result<TrajectoryResult, HarnessError> {
    run_trajectory_from(waypoints, params, &JointAngles::ZERO)
}

pub fn run_trajectory_from(
    waypoints: &[Pose],
    params: &ArmParams,
    reference: &JointAngles,
) -> Result<TrajectoryResult, HarnessError> {
    let mut out = TrajectoryResult {
        waypoints: waypoints.to_vec(),
        angles: Vec::with_capacity(waypoints.len()),
        branches: Vec::with_capacity(waypoints.len()),
        jumps: Vec::with_capacity(waypoints.len()),
        max_jump: 0.0,
        candidates: Vec::with_capacity(waypoints.len()),
    };
    let mut previous = *reference;
    for (index, pose) in waypoints.iter().enumerate() {
        let solutions = ik_solve(pose, params)
            .map_err(|failure| HarnessError::UnreachableWaypoint { index, failure })?;
        let (chosen, jump) =
            nearest(&solutions, &previous).ok_or_else(|| HarnessError::UnreachableWaypoint {
                index,
                failure: IkFailure::new(
                    IkFailureKind::NoConsistentBranch,
                    "no solution within joint limits",
                ),
            })?;
        if index > 0 {
            out.max_jump = out.max_jump.max(jump);
        }
        out.angles.push(chosen.angles);
        out.branches.push(chosen.branch);
        out.jumps.push(jump);
        out.candidates.push(solutions);
        previous = chosen.angles;
    }
    Ok(out)
}
