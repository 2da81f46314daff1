//! Round-trip validation: sample joint space, map through forward
//! kinematics, solve back and measure how well the pose is reproduced.

use geoik_core::{fk, ik_solve_batch, ArmParams, BranchLabel, IkFailure, JointAngles, Pose};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Default `|sin θ5|` cutoff below which a sample counts as wrist-singular.
pub const DEFAULT_EXCLUSION: f64 = 0.05;

/// Deterministic joint-space sampler, uniform within the joint limits.
pub struct JointSampler {
    rng: ChaCha8Rng,
    limits: [(f64, f64); 6],
}

impl JointSampler {
    pub fn new(seed: u64, params: &ArmParams) -> Self {
        JointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            limits: params.joint_limits.map(|l| (l.lo, l.hi)),
        }
    }

    pub fn sample(&mut self) -> JointAngles {
        let rng = &mut self.rng;
        JointAngles(self.limits.map(|(lo, hi)| rng.random_range(lo..=hi)))
    }
}

/// Whether the generating configuration sits too close to the wrist
/// singularity to be scored.
pub fn is_near_singular(q: &JointAngles, exclusion: f64) -> bool {
    q[4].sin().abs() < exclusion
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub idx: usize,
    pub generator: JointAngles,
    pub target: Pose,
    pub achieved: Pose,
    pub pos_err: f64,
    pub ori_err: f64,
    pub branch: BranchLabel,
    pub n_solutions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleFailure {
    pub idx: usize,
    pub generator: JointAngles,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n_samples: usize,
    pub n_solved: usize,
    pub n_singular_skipped: usize,
    pub max_pos_err: f64,
    pub mean_pos_err: f64,
    pub max_ori_err: f64,
    /// Scored samples that the solver could not solve.
    pub failures: Vec<SampleFailure>,
    #[serde(skip)]
    pub records: Vec<SampleRecord>,
}

impl ValidationReport {
    /// True when every non-excluded sample was solved.
    pub fn all_solved(&self) -> bool {
        self.n_solved + self.n_singular_skipped == self.n_samples
    }
}

fn failure_text(e: &IkFailure) -> String {
    e.to_string()
}

/// Runs the round-trip experiment on `n` sampled configurations.
///
/// For each solved sample the recorded solution is the one with the smallest
/// position error (ties resolved by branch order). The report depends only
/// on the arguments.
pub fn run_roundtrip(
    n: usize,
    rng_seed: u64,
    params: &ArmParams,
    exclusion: f64,
) -> ValidationReport {
    let mut sampler = JointSampler::new(rng_seed, params);
    let generators: Vec<JointAngles> = (0..n).map(|_| sampler.sample()).collect();

    let scored: Vec<(usize, JointAngles, Pose)> = generators
        .iter()
        .enumerate()
        .filter(|(_, q)| !is_near_singular(q, exclusion))
        .map(|(i, q)| (i, *q, fk(q, params)))
        .collect();
    let poses: Vec<Pose> = scored.iter().map(|s| s.2).collect();
    let results = ik_solve_batch(&poses, params);

    let mut records = Vec::with_capacity(scored.len());
    let mut failures = Vec::new();
    for ((idx, generator, target), result) in scored.into_iter().zip(results) {
        let best = result.as_ref().ok().and_then(|sols| {
            sols.iter().min_by(|a, b| {
                a.pos_residual
                    .total_cmp(&b.pos_residual)
                    .then(a.branch.cmp(&b.branch))
            })
        });
        match (best, result.as_ref()) {
            (Some(s), _) => {
                let achieved = fk(&s.angles, params);
                records.push(SampleRecord {
                    idx,
                    generator,
                    target,
                    achieved,
                    pos_err: achieved.position_error(&target),
                    ori_err: achieved.orientation_error(&target),
                    branch: s.branch,
                    n_solutions: result.as_ref().map_or(0, Vec::len),
                });
            }
            (None, Err(e)) => failures.push(SampleFailure {
                idx,
                generator,
                error: failure_text(e),
            }),
            (None, Ok(_)) => failures.push(SampleFailure {
                idx,
                generator,
                error: "no solution within joint limits".into(),
            }),
        }
    }

    let n_solved = records.len();
    let max_pos_err = records.iter().map(|r| r.pos_err).fold(0.0, f64::max);
    let max_ori_err = records.iter().map(|r| r.ori_err).fold(0.0, f64::max);
    let mean_pos_err = if n_solved == 0 {
        0.0
    } else {
        records.iter().map(|r| r.pos_err).sum::<f64>() / n_solved as f64
    };
    ValidationReport {
        n_samples: n,
        n_solved,
        n_singular_skipped: generators
            .iter()
            .filter(|q| is_near_singular(q, exclusion))
            .count(),
        max_pos_err,
        mean_pos_err,
        max_ori_err,
        failures,
        records,
    }
}
