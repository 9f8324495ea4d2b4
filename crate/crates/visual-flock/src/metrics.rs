//! Global order metrics, windowed phase classification and collision
//! statistics.
//!
//! Polarization P is the norm of the mean heading; milling M the norm of
//! the mean tangential heading component about the center of mass; opacity
//! O the mean fraction of the visual field covered by neighbors (anchor
//! excluded). All three live in [0, 1].

use crate::agent::AgentState;
use crate::math::Vec2;
use crate::vision::Panorama;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// One sample of the three order metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub t: f64,
    pub polarization: f64,
    pub milling: f64,
    pub opacity: f64,
}

/// Collective phase of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Schooling,
    Milling,
    Swarming,
    Bistable,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::Schooling => "schooling",
            Phase::Milling => "milling",
            Phase::Swarming => "swarming",
            Phase::Bistable => "bistable",
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Phase {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "schooling" => Ok(Phase::Schooling),
            "milling" => Ok(Phase::Milling),
            "swarming" => Ok(Phase::Swarming),
            "bistable" => Ok(Phase::Bistable),
            other => Err(format!("unknown phase {other:?}")),
        }
    }
}

/// Phase label plus the windowed statistics supporting it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseLabel {
    pub phase: Phase,
    pub mean_polarization: f64,
    pub mean_milling: f64,
    pub mean_opacity: f64,
    /// Fraction of window samples in the instantaneous schooling quadrant.
    pub schooling_fraction: f64,
    /// Fraction of window samples in the instantaneous milling quadrant.
    pub milling_fraction: f64,
    /// Fraction of window samples in the instantaneous swarming quadrant.
    pub swarming_fraction: f64,
}

/// Occupancy both sub-phases must reach within the window before a run is
/// called bistable rather than labeled by its window means.
pub const DEFAULT_BISTABLE_OCCUPANCY: f64 = 0.2;

const PHASE_THRESHOLD: f64 = 0.5;

/// Compute P, M and O for one frame.
///
/// An agent sitting exactly on the center of mass has no defined tangential
/// direction and is excluded from M's mean for that sample.
pub fn compute_metrics(states: &[AgentState], panoramas: &[Panorama]) -> MetricSample {
    assert!(!states.is_empty(), "compute_metrics: no agents");
    assert_eq!(states.len(), panoramas.len());
    let n = states.len() as f64;

    let mean_heading = states
        .iter()
        .fold(Vec2::ZERO, |acc, s| acc + s.heading_vector())
        * (1.0 / n);
    let polarization = mean_heading.norm().min(1.0);

    let milling = if states.len() < 2 {
        0.0
    } else {
        let com = states.iter().fold(Vec2::ZERO, |acc, s| acc + s.position) * (1.0 / n);
        let mut sum = 0.0;
        let mut count = 0usize;
        for s in states {
            let r = s.position - com;
            let norm = r.norm();
            if norm == 0.0 {
                continue;
            }
            sum += (r * (1.0 / norm)).cross(s.heading_vector());
            count += 1;
        }
        if count == 0 {
            0.0
        } else {
            (sum / count as f64).abs().min(1.0)
        }
    };

    let opacity =
        panoramas.iter().map(|p| p.neighbor_coverage()).sum::<f64>() / (n * TAU);

    let timestamp = panoramas.first().map_or(0.0, |p| p.timestamp);
    MetricSample {
        t: timestamp,
        polarization,
        milling: milling.min(1.0),
        opacity: opacity.min(1.0),
    }
}

fn in_schooling(s: &MetricSample) -> bool {
    s.polarization > PHASE_THRESHOLD && s.milling < PHASE_THRESHOLD
}

fn in_milling(s: &MetricSample) -> bool {
    s.polarization < PHASE_THRESHOLD && s.milling > PHASE_THRESHOLD
}

fn in_swarming(s: &MetricSample) -> bool {
    s.polarization < PHASE_THRESHOLD && s.milling < PHASE_THRESHOLD
}

/// Classify the trailing `window` time units of a metric series.
///
/// Window means of P and M pick the label; a run whose instantaneous state
/// keeps alternating (both the schooling and the milling condition hold for
/// at least `bistable_occupancy` of the window samples each) is bistable
/// instead. Means landing with both P and M high also count as bistable:
/// neither pure label describes such a window.
pub fn classify_phase(
    series: &[MetricSample],
    window: f64,
    bistable_occupancy: f64,
) -> Result<PhaseLabel> {
    let (first, last) = match (series.first(), series.last()) {
        (Some(f), Some(l)) => (f.t, l.t),
        _ => {
            return Err(Error::SeriesTooShort {
                needed: window,
                have: 0.0,
            })
        }
    };
    let span = last - first;
    // Allow for one sample of slack so a series spanning exactly the window
    // classifies cleanly.
    if span + 1e-9 < window {
        return Err(Error::SeriesTooShort {
            needed: window,
            have: span,
        });
    }

    let cutoff = last - window;
    let tail: Vec<&MetricSample> = series.iter().filter(|s| s.t >= cutoff - 1e-9).collect();
    let n = tail.len() as f64;
    let mean_polarization = tail.iter().map(|s| s.polarization).sum::<f64>() / n;
    let mean_milling = tail.iter().map(|s| s.milling).sum::<f64>() / n;
    let mean_opacity = tail.iter().map(|s| s.opacity).sum::<f64>() / n;
    let schooling_fraction = tail.iter().filter(|s| in_schooling(s)).count() as f64 / n;
    let milling_fraction = tail.iter().filter(|s| in_milling(s)).count() as f64 / n;
    let swarming_fraction = tail.iter().filter(|s| in_swarming(s)).count() as f64 / n;

    let phase = if schooling_fraction >= bistable_occupancy && milling_fraction >= bistable_occupancy
    {
        Phase::Bistable
    } else if mean_polarization > PHASE_THRESHOLD && mean_milling < PHASE_THRESHOLD {
        Phase::Schooling
    } else if mean_polarization < PHASE_THRESHOLD && mean_milling > PHASE_THRESHOLD {
        Phase::Milling
    } else if mean_polarization < PHASE_THRESHOLD && mean_milling < PHASE_THRESHOLD {
        Phase::Swarming
    } else {
        Phase::Bistable
    };

    Ok(PhaseLabel {
        phase,
        mean_polarization,
        mean_milling,
        mean_opacity,
        schooling_fraction,
        milling_fraction,
        swarming_fraction,
    })
}

/// Collision summary of a completed run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct CollisionStats {
    pub frames_with_contact: u64,
    pub total_frames: u64,
    /// Contact-set size -> number of contact events of that size.
    pub size_histogram: BTreeMap<usize, u64>,
}

impl CollisionStats {
    /// Fraction of frames containing at least one contact.
    pub fn contact_fraction(&self) -> f64 {
        if self.total_frames == 0 {
            0.0
        } else {
            self.frames_with_contact as f64 / self.total_frames as f64
        }
    }
}

/// Aggregate a collision log of `(frame_index, contact_set_size)` pairs.
pub fn collision_statistics(
    events: impl IntoIterator<Item = (u64, usize)>,
    total_frames: u64,
) -> CollisionStats {
    let mut frames = std::collections::BTreeSet::new();
    let mut size_histogram = BTreeMap::new();
    for (frame, size) in events {
        frames.insert(frame);
        *size_histogram.entry(size).or_insert(0) += 1;
    }
    CollisionStats {
        frames_with_contact: frames.len() as u64,
        total_frames,
        size_histogram,
    }
}
