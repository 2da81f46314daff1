//! JSON input formats: arm parameters, poses and waypoint lists.

use std::fs;
use std::path::Path;

use geoik_core::{pose_from_axes, pose_from_rotation, ArmParams, JointLimit, KinError, Pose, Vec3};
use log::warn;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::error::HarnessError;

const PARAM_KEYS: [&str; 5] = ["a2", "a3", "d4", "d5", "d6"];

fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))
}

fn json_error(source: &str, e: &serde_json::Error) -> HarnessError {
    HarnessError::Parse {
        context: format!("{source} line {} column {}", e.line(), e.column()),
        msg: e.to_string(),
    }
}

fn field_error(source: &str, field: &str, msg: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        context: format!("{source} field {field}"),
        msg: msg.into(),
    }
}

fn kin_error(e: KinError) -> HarnessError {
    match e {
        KinError::InvalidParam { field, msg } => HarnessError::Validation { field, msg },
        other => HarnessError::Validation {
            field: "pose".into(),
            msg: other.to_string(),
        },
    }
}

/// Parameters plus warnings about keys that were ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedParams {
    pub params: ArmParams,
    pub warnings: Vec<String>,
}

/// Parses the params JSON object. Unknown keys are accepted and reported as
/// warnings; missing `joint_limits` default to (−π, π] on every joint.
pub fn parse_params(text: &str, source: &str) -> Result<LoadedParams, HarnessError> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(source, &e))?;
    let Value::Object(obj) = value else {
        return Err(HarnessError::Parse {
            context: source.to_string(),
            msg: "expected a JSON object".into(),
        });
    };

    let number = |obj: &Map<String, Value>, key: &str| -> Result<f64, HarnessError> {
        match obj.get(key) {
            None => Err(field_error(source, key, "missing required field")),
            Some(v) => v
                .as_f64()
                .ok_or_else(|| field_error(source, key, format!("expected a number, got {v}"))),
        }
    };
    let [a2, a3, d4, d5, d6] = [
        number(&obj, "a2")?,
        number(&obj, "a3")?,
        number(&obj, "d4")?,
        number(&obj, "d5")?,
        number(&obj, "d6")?,
    ];

    let joint_limits = match obj.get("joint_limits") {
        None | Some(Value::Null) => [JointLimit::FULL; 6],
        Some(v) => {
            let pairs: Vec<[f64; 2]> = serde_json::from_value(v.clone()).map_err(|e| {
                field_error(
                    source,
                    "joint_limits",
                    format!("expected [[lo, hi]; 6]: {e}"),
                )
            })?;
            let pairs: [[f64; 2]; 6] = pairs.try_into().map_err(|p: Vec<_>| {
                field_error(
                    source,
                    "joint_limits",
                    format!("expected 6 pairs, got {}", p.len()),
                )
            })?;
            pairs.map(JointLimit::from)
        }
    };

    let warnings: Vec<String> = obj
        .keys()
        .filter(|k| !PARAM_KEYS.contains(&k.as_str()) && k.as_str() != "joint_limits")
        .map(|k| format!("{source}: ignoring unknown field {k:?}"))
        .collect();

    let params = ArmParams::new(a2, a3, d4, d5, d6, joint_limits).map_err(kin_error)?;
    Ok(LoadedParams { params, warnings })
}

/// Loads and validates a params file, logging any warnings.
pub fn load_params(path: impl AsRef<Path>) -> Result<ArmParams, HarnessError> {
    let path = path.as_ref();
    let loaded = parse_params(&read(path)?, &path.display().to_string())?;
    for w in &loaded.warnings {
        warn!("{w}");
    }
    Ok(loaded.params)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PoseSpec {
    Axes {
        p: [f64; 3],
        x_axis: [f64; 3],
        z_axis: [f64; 3],
    },
    Matrix {
        p: [f64; 3],
        rotation: [f64; 9],
    },
}

impl PoseSpec {
    fn into_pose(self) -> Result<Pose, KinError> {
        match self {
            PoseSpec::Axes { p, x_axis, z_axis } => {
                pose_from_axes(p.into(), x_axis.into(), z_axis.into())
            }
            PoseSpec::Matrix { p, rotation } => pose_from_rotation(Vec3::from(p), rotation),
        }
    }
}

fn pose_value(value: Value, source: &str) -> Result<Pose, HarnessError> {
    let spec: PoseSpec = serde_json::from_value(value).map_err(|_| HarnessError::Parse {
        context: source.to_string(),
        msg: "expected {\"p\":[x,y,z], \"x_axis\":[..], \"z_axis\":[..]} or {\"p\":[..], \"rotation\":[9 numbers]}".into(),
    })?;
    spec.into_pose().map_err(kin_error)
}

pub fn parse_pose(text: &str, source: &str) -> Result<Pose, HarnessError> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(source, &e))?;
    pose_value(value, source)
}

/// Reads a pose from inline JSON (argument starting with `{`) or a file.
pub fn load_pose(arg: &str) -> Result<Pose, HarnessError> {
    if arg.trim_start().starts_with('{') {
        parse_pose(arg, "inline pose")
    } else {
        parse_pose(&read(Path::new(arg))?, arg)
    }
}

pub fn parse_waypoints(text: &str, source: &str) -> Result<Vec<Pose>, HarnessError> {
    let value: Value = serde_json::from_str(text).map_err(|e| json_error(source, &e))?;
    let Value::Array(items) = value else {
        return Err(HarnessError::Parse {
            context: source.to_string(),
            msg: "expected a JSON array of poses".into(),
        });
    };
    items
        .into_iter()
        .enumerate()
        .map(|(i, v)| pose_value(v, &format!("{source} waypoint {i}")))
        .collect()
}

pub fn load_waypoints(path: impl AsRef<Path>) -> Result<Vec<Pose>, HarnessError> {
    let path = path.as_ref();
    parse_waypoints(&read(path)?, &path.display().to_string())
}
