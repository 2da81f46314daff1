//! Harness around the closed-form solver: parameter and pose I/O, the
//! round-trip validation run, trajectory solving with branch continuity, a
//! timing comparison against the DLS baseline, and scatter output.

pub mod bench;
pub mod error;
pub mod io;
pub mod roundtrip;
pub mod scatter;
pub mod trajectory;

pub use bench::{run_bench, BenchReport};
pub use error::HarnessError;
pub use io::{load_params, load_pose, load_waypoints};
pub use roundtrip::{run_roundtrip, ValidationReport, DEFAULT_EXCLUSION};
pub use scatter::{write_scatter_csv, write_svg};
pub use trajectory::{run_trajectory, TrajectoryResult};
