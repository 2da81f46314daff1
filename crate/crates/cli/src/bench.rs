//! Wall-clock comparison of the closed-form solver and the DLS baseline on
//! the same target set.

use std::time::Instant;

use geoik_core::{fk, ik_dls, ik_solve, ArmParams, DlsConfig, JointAngles, Pose};
use serde::Serialize;

use crate::error::HarnessError;
use crate::roundtrip::{is_near_singular, JointSampler, DEFAULT_EXCLUSION};

/// Fixed offset added to every joint of the generating configuration to
/// seed the DLS solver.
pub const DLS_SEED_OFFSET: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimingStats {
    pub median_s: f64,
    pub p95_s: f64,
}

impl TimingStats {
    fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_by(f64::total_cmp);
        TimingStats {
            median_s: percentile(&samples, 0.5),
            p95_s: percentile(&samples, 0.95),
        }
    }
}

/// Nearest-rank percentile of sorted samples.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DlsStats {
    #[serde(flatten)]
    pub timing: TimingStats,
    pub mean_iterations: f64,
    pub converged: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub n_targets: usize,
    pub analytic: TimingStats,
    pub analytic_solved: usize,
    pub dls: DlsStats,
    /// `dls.median / analytic.median`.
    pub speed_ratio: f64,
}

/// Reachable non-singular targets with their generating configurations.
pub fn bench_targets(n: usize, rng_seed: u64, params: &ArmParams) -> Vec<(JointAngles, Pose)> {
    let mut sampler = JointSampler::new(rng_seed, params);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let q = sampler.sample();
        if !is_near_singular(&q, DEFAULT_EXCLUSION) {
            out.push((q, fk(&q, params)));
        }
    }
    out
}

pub fn run_bench(
    n: usize,
    rng_seed: u64,
    params: &ArmParams,
    cfg: &DlsConfig,
) -> Result<BenchReport, HarnessError> {
    if n == 0 {
        return Err(HarnessError::Usage(
            "bench needs at least one target".into(),
        ));
    }
    let targets = bench_targets(n, rng_seed, params);

    let mut analytic_times = Vec::with_capacity(n);
    let mut analytic_solved = 0;
    for (_, pose) in &targets {
        let start = Instant::now();
        let result = ik_solve(pose, params);
        analytic_times.push(start.elapsed().as_secs_f64());
        analytic_solved += usize::from(result.is_ok_and(|s| !s.is_empty()));
    }

    let mut dls_times = Vec::with_capacity(n);
    let mut iterations = 0usize;
    let mut converged = 0usize;
    for (q, pose) in &targets {
        let seed = JointAngles(q.0.map(|t| t + DLS_SEED_OFFSET));
        let start = Instant::now();
        let r = ik_dls(pose, &seed, params, cfg);
        dls_times.push(start.elapsed().as_secs_f64());
        iterations += r.iterations;
        converged += usize::from(r.converged);
    }

    let analytic = TimingStats::from_samples(analytic_times);
    let dls = DlsStats {
        timing: TimingStats::from_samples(dls_times),
        mean_iterations: iterations as f64 / n as f64,
        converged,
    };
    Ok(BenchReport {
        n_targets: n,
        analytic,
        analytic_solved,
        speed_ratio: dls.timing.median_s / analytic.median_s.max(f64::MIN_POSITIVE),
        dls,
    })
}
