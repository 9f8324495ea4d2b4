//! File formats: trajectory / collision / metrics CSVs, run summary JSON,
//! sweep CSV, and the reverse parse of trajectory CSVs for re-classification.

use crate::agent::AgentState;
use crate::math::Vec2;
use crate::metrics::{classify_phase, collision_statistics, CollisionStats, MetricSample, PhaseLabel};
use crate::params::ModelParams;
use crate::simulator::{CollisionEvent, RunOutput, TrajectoryRecord, TrajectoryRow};
use crate::sweep::PhaseDiagram;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

pub const TRAJECTORY_HEADER: &str = "t,agent_id,x,y,theta";
pub const COLLISION_HEADER: &str = "t,n_involved,ids";
pub const METRICS_HEADER: &str = "t,P,M,O";
pub const SWEEP_HEADER: &str = "k_attract,k_align,replicate,P,M,O,phase,collision_fraction";

pub fn trajectory_csv(record: &TrajectoryRecord) -> String {
    let mut out = String::with_capacity(32 * record.rows.len() + 32);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in &record.rows {
        writeln!(out, "{},{},{},{},{}", r.t, r.agent_id, r.x, r.y, r.theta).unwrap();
    }
    out
}

pub fn collisions_csv(events: &[CollisionEvent]) -> String {
    let mut out = String::new();
    out.push_str(COLLISION_HEADER);
    out.push('\n');
    for e in events {
        let ids = e
            .agents
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(";");
        writeln!(out, "{},{},{}", e.t, e.agents.len(), ids).unwrap();
    }
    out
}

pub fn metrics_csv(samples: &[MetricSample]) -> String {
    let mut out = String::with_capacity(32 * samples.len() + 16);
    out.push_str(METRICS_HEADER);
    out.push('\n');
    for s in samples {
        writeln!(out, "{},{},{},{}", s.t, s.polarization, s.milling, s.opacity).unwrap();
    }
    out
}

/// Everything worth keeping from one run, as a JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub effective_tau: f64,
    pub phase: PhaseLabel,
    pub collisions: CollisionStats,
    pub params: ModelParams,
}

/// Classify a finished run and bundle its statistics.
pub fn summarize_run(params: &ModelParams, out: &RunOutput) -> Result<RunSummary> {
    let phase = classify_phase(&out.metrics, params.metrics_window, params.bistable_occupancy)?;
    let collisions = collision_statistics(
        out.collisions.iter().map(|e| (e.step, e.agents.len())),
        out.total_frames,
    );
    Ok(RunSummary {
        seed: out.seed,
        effective_tau: out.effective_tau,
        phase,
        collisions,
        params: params.clone(),
    })
}

/// Per-replicate sweep rows, cells in grid order.
pub fn sweep_csv(diagram: &PhaseDiagram) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for cell in &diagram.cells {
        for rep in &cell.replicates {
            match &rep.summary {
                Some(s) => writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    cell.k_attract,
                    cell.k_align,
                    rep.replicate,
                    s.mean_polarization,
                    s.mean_milling,
                    s.mean_opacity,
                    s.phase,
                    s.collision_fraction
                )
                .unwrap(),
                None => writeln!(
                    out,
                    "{},{},{},nan,nan,nan,failed,nan",
                    cell.k_attract, cell.k_align, rep.replicate
                )
                .unwrap(),
            }
        }
    }
    out
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field.trim().parse().map_err(|_| Error::MalformedInput {
        line,
        reason: format!("cannot parse {what} from {field:?}"),
    })
}

/// One parsed row of a sweep CSV; failed replicates have `phase == None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCsvRow {
    pub k_attract: f64,
    pub k_align: f64,
    pub replicate: usize,
    pub mean_polarization: f64,
    pub mean_milling: f64,
    pub mean_opacity: f64,
    pub phase: Option<crate::metrics::Phase>,
    pub collision_fraction: f64,
}

/// Parse a sweep CSV produced by [`sweep_csv`].
pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepCsvRow>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line.trim() != SWEEP_HEADER {
                return Err(Error::MalformedInput {
                    line: 1,
                    reason: format!("expected header {SWEEP_HEADER:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(Error::MalformedInput {
                line: idx + 1,
                reason: format!("expected 8 fields, found {}", fields.len()),
            });
        }
        let phase = match fields[6].trim() {
            "failed" => None,
            other => Some(other.parse().map_err(|e| Error::MalformedInput {
                line: idx + 1,
                reason: e,
            })?),
        };
        rows.push(SweepCsvRow {
            k_attract: parse_field(fields[0], idx + 1, "k_attract")?,
            k_align: parse_field(fields[1], idx + 1, "k_align")?,
            replicate: parse_field(fields[2], idx + 1, "replicate")?,
            mean_polarization: parse_field(fields[3], idx + 1, "P")?,
            mean_milling: parse_field(fields[4], idx + 1, "M")?,
            mean_opacity: parse_field(fields[5], idx + 1, "O")?,
            phase,
            collision_fraction: parse_field(fields[7], idx + 1, "collision_fraction")?,
        });
    }
    Ok(rows)
}

/// Parse a trajectory CSV produced by [`trajectory_csv`].
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<TrajectoryRow>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line.trim() != TRAJECTORY_HEADER {
                return Err(Error::MalformedInput {
                    line: 1,
                    reason: format!("expected header {TRAJECTORY_HEADER:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::MalformedInput {
                line: idx + 1,
                reason: format!("expected 5 fields, found {}", fields.len()),
            });
        }
        rows.push(TrajectoryRow {
            t: parse_field(fields[0], idx + 1, "t")?,
            agent_id: parse_field(fields[1], idx + 1, "agent_id")?,
            x: parse_field(fields[2], idx + 1, "x")?,
            y: parse_field(fields[3], idx + 1, "y")?,
            theta: parse_field(fields[4], idx + 1, "theta")?,
        });
    }
    Ok(rows)
}

/// Group trajectory rows into per-frame agent states, in recorded order.
pub fn trajectory_frames(rows: &[TrajectoryRow]) -> Result<Vec<(f64, Vec<AgentState>)>> {
    let mut frames: Vec<(f64, Vec<AgentState>)> = Vec::new();
    for row in rows {
        match frames.last_mut() {
            Some((t, agents)) if *t == row.t => {
                if row.agent_id != agents.len() {
                    return Err(Error::MalformedInput {
                        line: 0,
                        reason: format!(
                            "agent ids of frame t={t} are not contiguous (saw {})",
                            row.agent_id
                        ),
                    });
                }
                agents.push(AgentState::new(Vec2::new(row.x, row.y), row.theta));
            }
            _ => {
                if row.agent_id != 0 {
                    return Err(Error::MalformedInput {
                        line: 0,
                        reason: format!("frame t={} does not start at agent 0", row.t),
                    });
                }
                frames.push((
                    row.t,
                    vec![AgentState::new(Vec2::new(row.x, row.y), row.theta)],
                ));
            }
        }
    }
    Ok(frames)
}
