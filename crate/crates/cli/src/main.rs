use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use geoik_cli::trajectory::nearest;
use geoik_cli::{
    load_params, load_pose, load_waypoints, run_bench, run_roundtrip, run_trajectory, scatter,
    write_scatter_csv, write_svg, HarnessError, DEFAULT_EXCLUSION,
};
use geoik_core::{fk, ik_solve, DlsConfig, JointAngles};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "geoik",
    version,
    about = "Closed-form inverse kinematics for a 6R arm"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one pose.
    Solve {
        #[arg(long)]
        params: PathBuf,
        /// Pose file, or inline JSON starting with `{`.
        #[arg(long)]
        pose: String,
        /// Print every branch instead of the one nearest the zero configuration.
        #[arg(long)]
        all_branches: bool,
        #[arg(long)]
        json: bool,
    },
    /// Forward kinematics for six joint angles (radians).
    Fk {
        #[arg(long)]
        params: PathBuf,
        #[arg(
            long,
            num_args = 6,
            allow_negative_numbers = true,
            value_name = "THETA"
        )]
        angles: Vec<f64>,
    },
    /// Round-trip validation over sampled joint configurations.
    Validate {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// |sin θ5| below which a sample is skipped as wrist-singular.
        #[arg(long, default_value_t = DEFAULT_EXCLUSION)]
        exclusion: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Time the closed-form solver against damped least squares.
    Bench {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        damping: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Solve a waypoint list, keeping consecutive configurations close.
    Traj {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        waypoints: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn run(cmd: Command) -> Result<(), HarnessError> {
    match cmd {
        Command::Solve {
            params,
            pose,
            all_branches,
            json,
        } => {
            let params = load_params(&params)?;
            let pose = load_pose(&pose)?;
            let mut solutions = ik_solve(&pose, &params).map_err(HarnessError::Solver)?;
            if !all_branches {
                solutions = nearest(&solutions, &JointAngles::ZERO)
                    .map(|(s, _)| s)
                    .into_iter()
                    .collect();
            }
            if solutions.is_empty() {
                return Err(HarnessError::Solver(geoik_core::IkFailure::new(
                    geoik_core::IkFailureKind::NoConsistentBranch,
                    "no solution within joint limits",
                )));
            }
            if json {
                print_json(&solutions);
            } else {
                for s in &solutions {
                    let theta: Vec<String> =
                        s.angles.0.iter().map(|t| format!("{t:+.9}")).collect();
                    println!(
                        "{}  theta [{}]  pos {:.3e} m  ori {:.3e} rad",
                        s.branch,
                        theta.join(", "),
                        s.pos_residual,
                        s.ori_residual
                    );
                }
            }
        }
        Command::Fk { params, angles } => {
            let params = load_params(&params)?;
            let q: [f64; 6] = angles
                .try_into()
                .map_err(|_| HarnessError::Usage("--angles takes exactly six values".into()))?;
            if q.iter().any(|t| !t.is_finite()) {
                return Err(HarnessError::Validation {
                    field: "angles".into(),
                    msg: "must be finite".into(),
                });
            }
            print_json(&fk(&JointAngles(q), &params));
        }
        Command::Validate {
            params,
            n,
            seed,
            exclusion,
            out,
            svg,
        } => {
            if n == 0 {
                return Err(HarnessError::Usage("--n must be positive".into()));
            }
            if !(0.0..1.0).contains(&exclusion) {
                return Err(HarnessError::Usage("--exclusion must lie in [0, 1)".into()));
            }
            let params = load_params(&params)?;
            let report = run_roundtrip(n, seed, &params, exclusion);
            write_scatter_csv(&report, &out)?;
            if let Some(svg) = svg {
                write_svg(&report, &svg)?;
            }
            print_json(&report);
            if !report.all_solved() {
                return Err(HarnessError::Solver(geoik_core::IkFailure::new(
                    geoik_core::IkFailureKind::NoConsistentBranch,
                    format!("{} scored samples were not solved", report.failures.len()),
                )));
            }
        }
        Command::Bench {
            params,
            n,
            seed,
            damping,
            max_iters,
        } => {
            let params = load_params(&params)?;
            let mut cfg = DlsConfig::default();
            if let Some(d) = damping {
                if !(d >= 0.0 && d.is_finite()) {
                    return Err(HarnessError::Usage("--damping must be >= 0".into()));
                }
                cfg.damping = d;
            }
            if let Some(m) = max_iters {
                if m == 0 {
                    return Err(HarnessError::Usage("--max-iters must be positive".into()));
                }
                cfg.max_iters = m;
            }
            print_json(&run_bench(n, seed, &params, &cfg)?);
        }
        Command::Traj {
            params,
            waypoints,
            out,
        } => {
            let params = load_params(&params)?;
            let waypoints = load_waypoints(&waypoints)?;
            let t = run_trajectory(&waypoints, &params)?;
            scatter::write_trajectory_csv(&t.angles, &t.branches, &t.jumps, &out)?;
            print_json(&json!({
                "n_waypoints": t.waypoints.len(),
                "max_jump": t.max_jump,
                "branches": t.branches.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            }));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
