//! File formats: body JSON, trajectory JSON lines, and the float formatting
//! they share.
//!
//! A body file stores the grid layout and the raw support samples:
//!
//! ```text
//! {"dim": 2, "grid": {"type": "uniform_angle", "m": 512}, "h": [...]}
//! {"dim": 3, "grid": {"type": "gauss_fourier", "n_theta": 32, "n_phi": 64}, "h": [...]}
//! ```
//!
//! Spatial samples are theta-major: `h[a*n_phi + b]` is the value at
//! colatitude row `a`, azimuth column `b`. Floats are written with 17
//! significant digits, enough to reproduce every double exactly, so writing
//! a body and reading it back yields bit-identical support values and hence
//! an identical validity report.

use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::body::ConvexBody;
use crate::spherical::ScalarField;
use crate::error::{Error, Result};
use crate::flow::FlowTrajectory;
use crate::spherical::SphereGrid;

/// One double, 17 significant digits, round-trip exact.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `sig` significant digits for human-facing tables (CSV output).
pub fn fmt_sig(x: f64, sig: usize) -> String {
    format!("{x:.*e}", sig.saturating_sub(1))
}

/// Serialize a body to the body JSON format.
pub fn body_to_json(body: &ConvexBody) -> String {
    let grid = body.support().grid();
    let res = grid.resolution();
    let header = match grid.dim() {
        2 => format!(
            "{{\"dim\": 2, \"grid\": {{\"type\": \"uniform_angle\", \"m\": {}}}, \"h\": [",
            res[0]
        ),
        _ => format!(
            "{{\"dim\": 3, \"grid\": {{\"type\": \"gauss_fourier\", \"n_theta\": {}, \"n_phi\": {}}}, \"h\": [",
            res[0], res[1]
        ),
    };
    let mut out = header;
    for (i, &h) in body.support().values().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_f64(h));
    }
    out.push_str("]}");
    out
}

#[derive(Deserialize)]
struct BodyFile {
    dim: usize,
    grid: Value,
    h: Vec<f64>,
}

fn grid_field(grid: &Value, key: &str) -> Result<usize> {
    grid.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Config(format!("body JSON: grid is missing integer field {key:?}")))
}

/// Parse a body from the body JSON format and validate it.
pub fn body_from_json(text: &str) -> Result<ConvexBody> {
    let file: BodyFile = serde_json::from_str(text)?;
    let kind = file
        .grid
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Config("body JSON: grid is missing string field \"type\"".into()))?;
    let grid: Arc<SphereGrid> = match (file.dim, kind) {
        (2, "uniform_angle") => SphereGrid::circle(grid_field(&file.grid, "m")?)?,
        (3, "gauss_fourier") => SphereGrid::sphere(
            grid_field(&file.grid, "n_theta")?,
            grid_field(&file.grid, "n_phi")?,
        )?,
        (d, k) => {
            return Err(Error::Config(format!(
                "body JSON: unsupported dim/grid combination ({d}, {k:?})"
            )))
        }
    };
    ConvexBody::from_support(ScalarField::new(grid, file.h)?)
}

/// Serialize a trajectory as JSON lines, one record per stored snapshot:
/// `{"t": ..., "body": <body JSON>, "vol": ..., "vol_polar": ..., "min_eig": ...}`.
///
/// The volume, polar volume, and convexity margin are recomputed from the
/// snapshot body, so a record stays self-consistent under round-trip even
/// though only the support samples are stored.
pub fn trajectory_to_jsonl(traj: &FlowTrajectory) -> String {
    let mut out = String::new();
    for (t, body) in &traj.snapshots {
        out.push_str("{\"t\": ");
        out.push_str(&fmt_f64(*t));
        out.push_str(", \"body\": ");
        out.push_str(&body_to_json(body));
        out.push_str(", \"vol\": ");
        out.push_str(&fmt_f64(body.volume()));
        out.push_str(", \"vol_polar\": ");
        out.push_str(&fmt_f64(body.polar_volume()));
        out.push_str(", \"min_eig\": ");
        out.push_str(&fmt_f64(body.validity().min_eig));
        out.push_str("}\n");
    }
    out
}
