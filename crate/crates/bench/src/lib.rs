//! Shared workloads for the solver benchmarks.

use geoik_core::{fk, ArmParams, JointAngles, Pose};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reachable, non-singular targets with the joint configurations that
/// generated them.
pub fn targets(n: usize, seed: u64, params: &ArmParams) -> Vec<(JointAngles, Pose)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let q = JointAngles(std::array::from_fn(|_| rng.random_range(-3.1..3.1)));
        if q[4].sin().abs() < 0.05 {
            continue;
        }
        out.push((q, fk(&q, params)));
    }
    out
}
