//! Occlusion-aware 1D binary panoramas.
//!
//! Each agent sees the world as a binary occupancy function over retinal
//! angle `phi` (measured from its heading, counter-clockwise positive).
//! Overlapping disk projections merge into maximal contiguous retinal
//! objects; apparent distance is inferred from optical size alone. A virtual
//! anchor disk is rendered on its own, never-occluded channel. Edges are
//! analytic (exact interval arithmetic), not pixel samples.

use crate::agent::AgentState;
use crate::math::{ccw_arc, wrap_angle, Vec2};
use crate::params::ModelParams;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Which visual channel an object belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    Neighbor,
    Anchor,
}

/// One maximal contiguous interval of the binary visual field.
///
/// The object spans counter-clockwise from `rise` to `fall`; objects crossing
/// the `+-pi` cut simply have `rise > fall`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetinalObject {
    pub rise: f64,
    pub fall: f64,
    pub center: f64,
    /// Angular width in `(0, 2pi]`.
    pub width: f64,
    /// Distance inferred from the width, in units of `a`.
    pub apparent_distance: f64,
    pub channel: Channel,
}

impl RetinalObject {
    /// Build an object from its rising edge and width.
    pub fn from_arc(rise: f64, width: f64, radius: f64, channel: Channel) -> Self {
        assert!(
            width > 0.0 && width <= TAU + 1e-12,
            "retinal object width {width} out of (0, 2pi]"
        );
        let width = width.min(TAU);
        RetinalObject {
            rise: wrap_angle(rise),
            fall: wrap_angle(rise + width),
            center: wrap_angle(rise + width / 2.0),
            width,
            apparent_distance: apparent_distance(width, radius),
            channel,
        }
    }

    /// Object covering the whole visual field (engulfment).
    pub fn full_circle(radius: f64, channel: Channel) -> Self {
        // Degenerate arc: rise == fall, width 2pi, center dead ahead.
        RetinalObject {
            rise: PI,
            fall: PI,
            center: 0.0,
            width: TAU,
            apparent_distance: apparent_distance(TAU, radius),
            channel,
        }
    }

    /// Circular membership test, inclusive at both edges.
    pub fn contains(&self, phi: f64) -> bool {
        if self.width >= TAU {
            return true;
        }
        ccw_arc(self.rise, phi) <= self.width
    }

    /// The same object seen from a frame rotated clockwise by `delta`
    /// (all retinal angles shift by `+delta`; width and distance are
    /// frame-independent).
    pub fn rotated(&self, delta: f64) -> RetinalObject {
        RetinalObject {
            rise: wrap_angle(self.rise + delta),
            fall: wrap_angle(self.fall + delta),
            center: wrap_angle(self.center + delta),
            ..*self
        }
    }
}

/// Apparent distance of an object of angular width `width` for disk radius
/// `a`: the distance at which an isolated disk subtends that width. Clamped
/// to `a` (contact) once the width reaches a half circle.
pub fn apparent_distance(width: f64, a: f64) -> f64 {
    assert!(width > 0.0, "apparent_distance: width {width} must be > 0");
    if width >= PI {
        a
    } else {
        a / (width / 2.0).sin()
    }
}

/// Projection of a disk onto the observer's retina: an arc described by its
/// center angle and half-width. `half_width == pi` means the disk engulfs
/// the observer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub center: f64,
    pub half_width: f64,
}

impl Projection {
    pub fn is_full_circle(&self) -> bool {
        self.half_width >= PI
    }
}

/// Project a disk of the given radius at `target_position` onto the retina
/// of `observer`. Coincident centers carry no direction and are an error;
/// `build_panorama` treats that case as engulfment instead.
pub fn project_agent(
    observer: &AgentState,
    target_position: Vec2,
    radius: f64,
) -> Result<Projection> {
    let offset = target_position - observer.position;
    let d = offset.norm();
    if d == 0.0 {
        return Err(Error::CoincidentAgents);
    }
    if d <= radius {
        return Ok(Projection {
            center: wrap_angle(offset.angle() - observer.heading()),
            half_width: PI,
        });
    }
    Ok(Projection {
        center: wrap_angle(offset.angle() - observer.heading()),
        half_width: (radius / d).asin(),
    })
}

/// An agent's full visual state at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panorama {
    /// Neighbor-channel objects, pairwise disjoint, sorted by center.
    pub objects: Vec<RetinalObject>,
    /// The always-visible anchor, on its own channel.
    pub anchor: RetinalObject,
    pub timestamp: f64,
}

impl Panorama {
    /// Total angular coverage of the neighbor channel, in radians.
    pub fn neighbor_coverage(&self) -> f64 {
        self.objects.iter().map(|o| o.width).sum()
    }

    /// True if any neighbor object covers the retinal angle `phi`.
    pub fn covers(&self, phi: f64) -> bool {
        self.objects.iter().any(|o| o.contains(phi))
    }

    /// Re-express every retinal angle in a body frame rotated by `-delta`
    /// relative to the frame this panorama was captured in.
    pub fn rotated(&self, delta: f64) -> Panorama {
        Panorama {
            objects: self.objects.iter().map(|o| o.rotated(delta)).collect(),
            anchor: self.anchor.rotated(delta),
            timestamp: self.timestamp,
        }
    }
}

/// Merge a set of projected arcs into maximal disjoint retinal objects.
fn merge_projections(projections: &[Projection], radius: f64) -> Vec<RetinalObject> {
    if projections.is_empty() {
        return Vec::new();
    }
    if projections.iter().any(Projection::is_full_circle) {
        return vec![RetinalObject::full_circle(radius, Channel::Neighbor)];
    }

    // Cut the circle at +-pi: arcs crossing the cut split into two linear
    // segments so a standard sweep applies; wrapped objects are re-stitched
    // afterwards.
    let mut segments: Vec<(f64, f64)> = Vec::with_capacity(projections.len() + 1);
    for p in projections {
        let mut rise = wrap_angle(p.center - p.half_width);
        if rise == PI {
            rise = -PI;
        }
        let fall = wrap_angle(p.center + p.half_width);
        if rise <= fall {
            segments.push((rise, fall));
        } else {
            segments.push((rise, PI));
            segments.push((-PI, fall));
        }
    }
    segments.sort_by(|a, b| a.partial_cmp(b).expect("finite edges"));

    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(segments.len());
    for (start, end) in segments {
        match merged.last_mut() {
            Some(last) if start <= last.1 => last.1 = last.1.max(end),
            _ => merged.push((start, end)),
        }
    }

    // Segments touching the cut from both sides form one circular object.
    let wraps = merged.len() >= 2 && merged[0].0 <= -PI && merged.last().unwrap().1 >= PI;
    let mut objects = Vec::with_capacity(merged.len());
    if wraps {
        let first = merged[0];
        let last = *merged.last().unwrap();
        let width = (PI - last.0) + (first.1 + PI);
        if width >= TAU {
            return vec![RetinalObject::full_circle(radius, Channel::Neighbor)];
        }
        objects.push(RetinalObject::from_arc(last.0, width, radius, Channel::Neighbor));
        for &(s, e) in &merged[1..merged.len() - 1] {
            objects.push(RetinalObject::from_arc(s, e - s, radius, Channel::Neighbor));
        }
    } else {
        for &(s, e) in &merged {
            if e - s >= TAU {
                return vec![RetinalObject::full_circle(radius, Channel::Neighbor)];
            }
            objects.push(RetinalObject::from_arc(s, e - s, radius, Channel::Neighbor));
        }
    }

    objects.sort_by(|a, b| a.center.partial_cmp(&b.center).expect("finite centers"));
    objects
}

/// Construct the panorama of one observer from the global agent states.
///
/// The neighbor channel is the binary union of all other agents' disk
/// projections (occlusion is implicit in the union); the anchor channel is
/// the projection of a virtual disk of radius `a` at the anchor position,
/// never occluded. A coincident neighbor or anchor engulfs the observer
/// rather than erroring.
pub fn build_panorama(
    observer_index: usize,
    states: &[AgentState],
    params: &ModelParams,
    timestamp: f64,
) -> Panorama {
    let observer = &states[observer_index];
    let a = params.radius;

    let mut projections = Vec::with_capacity(states.len().saturating_sub(1));
    for (j, target) in states.iter().enumerate() {
        if j == observer_index {
            continue;
        }
        match project_agent(observer, target.position, a) {
            Ok(p) => projections.push(p),
            Err(Error::CoincidentAgents) => projections.push(Projection {
                center: 0.0,
                half_width: PI,
            }),
            Err(_) => unreachable!("project_agent only fails on coincidence"),
        }
    }
    let objects = merge_projections(&projections, a);

    let anchor = match project_agent(observer, params.anchor_position, a) {
        Ok(p) if p.is_full_circle() => RetinalObject::full_circle(a, Channel::Anchor),
        Ok(p) => RetinalObject::from_arc(
            p.center - p.half_width,
            2.0 * p.half_width,
            a,
            Channel::Anchor,
        ),
        Err(_) => RetinalObject::full_circle(a, Channel::Anchor),
    };

    Panorama {
        objects,
        anchor,
        timestamp,
    }
}

/// Panoramas of every agent at one instant.
pub fn build_all_panoramas(
    states: &[AgentState],
    params: &ModelParams,
    timestamp: f64,
) -> Vec<Panorama> {
    (0..states.len())
        .map(|i| build_panorama(i, states, params, timestamp))
        .collect()
}
