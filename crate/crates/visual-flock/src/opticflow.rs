//! Feature-matching optic flow over retinal objects.
//!
//! Objects of two consecutive panoramas are paired by circular angular
//! order (the cheapest cyclic alignment of the two sorted lists); a frame
//! whose object count changed indicates a merge or split and is ignored
//! entirely. Each matched pair yields the azimuthal flow of its center and
//! the divergence of its width, by one-frame backward differences.

use crate::math::{circular_diff, Vec2};
use crate::vision::{Panorama, RetinalObject};
use serde::{Deserialize, Serialize};

/// Flow of one retinal object in the current panorama.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowEntry {
    /// Index into the current panorama's neighbor objects.
    pub object_index: usize,
    /// Azimuthal flow of the object center, rad/time.
    pub azimuthal: f64,
    /// Divergence: rate of change of the object's width, rad/time.
    /// Positive when the object grows (looms), so the apparent velocity
    /// `(-D, O) * R/U` points toward the observer for approaching objects.
    pub divergence: f64,
}

/// Per-object flow of one agent between two consecutive frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FlowField {
    /// Entries sorted by `object_index`.
    pub entries: Vec<FlowEntry>,
    pub matched_count: usize,
    /// Current objects that carry no flow this frame.
    pub ignored_count: usize,
}

impl FlowField {
    pub fn empty() -> Self {
        FlowField::default()
    }

    pub fn get(&self, object_index: usize) -> Option<&FlowEntry> {
        self.entries
            .binary_search_by_key(&object_index, |e| e.object_index)
            .ok()
            .map(|i| &self.entries[i])
    }
}

fn pair_cost(prev: &RetinalObject, curr: &RetinalObject) -> f64 {
    let dc = circular_diff(curr.center, prev.center);
    let dw = curr.width - prev.width;
    (dc * dc + dw * dw).sqrt()
}

/// Pair the retinal objects of two consecutive panoramas of one observer.
///
/// Equal counts: both lists are sorted by center, so the order-preserving
/// candidates are the cyclic shifts; the shift with the least total cost
/// wins and pairs costlier than `cost_gate` are dropped. Different counts
/// signal a merge or split and produce no matches at all.
pub fn match_objects(prev: &Panorama, curr: &Panorama, cost_gate: f64) -> Vec<(usize, usize)> {
    let n = prev.objects.len();
    if n == 0 || n != curr.objects.len() {
        return Vec::new();
    }

    let mut best_shift = 0;
    let mut best_cost = f64::INFINITY;
    for shift in 0..n {
        let total: f64 = (0..n)
            .map(|k| pair_cost(&prev.objects[k], &curr.objects[(k + shift) % n]))
            .sum();
        if total < best_cost {
            best_cost = total;
            best_shift = shift;
        }
    }

    let mut matches: Vec<(usize, usize)> = (0..n)
        .filter_map(|k| {
            let pair = (k, (k + best_shift) % n);
            (pair_cost(&prev.objects[pair.0], &curr.objects[pair.1]) <= cost_gate).then_some(pair)
        })
        .collect();
    matches.sort_by_key(|&(_, c)| c);
    matches
}

/// Backward-difference flow for every matched pair.
pub fn compute_flow(
    prev: &Panorama,
    curr: &Panorama,
    matches: &[(usize, usize)],
    dt: f64,
) -> FlowField {
    assert!(dt > 0.0, "compute_flow: dt must be > 0, got {dt}");
    let entries: Vec<FlowEntry> = matches
        .iter()
        .map(|&(pi, ci)| {
            let p = &prev.objects[pi];
            let c = &curr.objects[ci];
            FlowEntry {
                object_index: ci,
                azimuthal: circular_diff(c.center, p.center) / dt,
                divergence: (c.width - p.width) / dt,
            }
        })
        .collect();
    let matched_count = entries.len();
    FlowField {
        entries,
        matched_count,
        ignored_count: curr.objects.len() - matched_count,
    }
}

/// Apparent velocity of a retinal object in the observer's local polar frame
/// at the object center: `(-D, O) * R / U` (radial, azimuthal components).
pub fn assemble_apparent_velocity(object: &RetinalObject, flow: &FlowEntry, speed: f64) -> Vec2 {
    let scale = object.apparent_distance / speed;
    Vec2::new(-flow.divergence * scale, flow.azimuthal * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::AgentState;
    use crate::params::ModelParams;
    use crate::vision::build_panorama;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn pano_at(positions: &[Vec2], observer: Vec2, heading: f64, t: f64) -> Panorama {
        let mut states = vec![AgentState::new(observer, heading)];
        states.extend(positions.iter().map(|&p| AgentState::new(p, 0.0)));
        let params = ModelParams {
            n_agents: states.len(),
            ..ModelParams::default()
        };
        build_panorama(0, &states, &params, t)
    }

    #[test]
    fn identical_panoramas_match_fully_with_zero_cost() {
        let ps = [Vec2::new(5.0, 0.0), Vec2::new(0.0, 6.0), Vec2::new(-4.0, -4.0)];
        let a = pano_at(&ps, Vec2::ZERO, 0.0, 0.0);
        let b = pano_at(&ps, Vec2::ZERO, 0.0, 0.1);
        let m = match_objects(&a, &b, FRAC_PI_4);
        assert_eq!(m, vec![(0, 0), (1, 1), (2, 2)]);
        let flow = compute_flow(&a, &b, &m, 0.1);
        assert_eq!(flow.matched_count, 3);
        assert_eq!(flow.ignored_count, 0);
        for e in &flow.entries {
            assert_eq!(e.azimuthal, 0.0);
            assert_eq!(e.divergence, 0.0);
        }
    }

    #[test]
    fn small_displacements_match_on_the_diagonal() {
        let a = pano_at(
            &[Vec2::new(5.0, 0.0), Vec2::new(0.0, 6.0), Vec2::new(-4.0, -4.0)],
            Vec2::ZERO,
            0.0,
            0.0,
        );
        let b = pano_at(
            &[Vec2::new(5.0, 0.3), Vec2::new(-0.2, 6.0), Vec2::new(-4.1, -3.9)],
            Vec2::ZERO,
            0.0,
            0.1,
        );
        assert_eq!(match_objects(&a, &b, FRAC_PI_4), vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn count_change_ignores_the_frame() {
        let a = pano_at(&[Vec2::new(5.0, 0.0), Vec2::new(0.0, 6.0)], Vec2::ZERO, 0.0, 0.0);
        let b = pano_at(
            &[Vec2::new(5.0, 0.0), Vec2::new(0.0, 6.0), Vec2::new(-6.0, 0.0)],
            Vec2::ZERO,
            0.0,
            0.1,
        );
        assert!(match_objects(&a, &b, FRAC_PI_4).is_empty());
        let flow = compute_flow(&a, &b, &[], 0.1);
        assert_eq!(flow.matched_count, 0);
        assert_eq!(flow.ignored_count, 3);
    }

    #[test]
    fn cost_gate_drops_jumps() {
        let a = pano_at(&[Vec2::new(5.0, 0.0)], Vec2::ZERO, 0.0, 0.0);
        let b = pano_at(&[Vec2::new(0.0, 5.0)], Vec2::ZERO, 0.0, 0.1);
        // Center jumped pi/2 > gate pi/4.
        assert!(match_objects(&a, &b, FRAC_PI_4).is_empty());
        assert_eq!(match_objects(&a, &b, 2.0).len(), 1);
    }

    #[test]
    fn matching_survives_sort_order_shift_across_the_cut() {
        // Two objects; one drifts across +-pi between frames, rotating the
        // center-sorted order. The cyclic search must still pair identities.
        let a = pano_at(
            &[Vec2::new(-6.0, -0.5), Vec2::new(6.0, 1.0)],
            Vec2::ZERO,
            0.0,
            0.0,
        );
        let b = pano_at(
            &[Vec2::new(-6.0, 0.5), Vec2::new(6.0, 1.0)],
            Vec2::ZERO,
            0.0,
            0.1,
        );
        let m = match_objects(&a, &b, FRAC_PI_4);
        assert_eq!(m.len(), 2);
        let flow = compute_flow(&a, &b, &m, 0.1);
        // The behind object moved ~1/6 rad in bearing; the ahead object is
        // static. Both flows must be small (no identity swap).
        for e in &flow.entries {
            assert!(e.azimuthal.abs() < 2.0, "identity swap: {e:?}");
        }
    }

    #[test]
    fn radial_motion_signs() {
        // Receding object shrinks: negative divergence, no azimuthal flow.
        let a = pano_at(&[Vec2::new(4.0, 0.0)], Vec2::ZERO, 0.0, 0.0);
        let b = pano_at(&[Vec2::new(5.0, 0.0)], Vec2::ZERO, 0.0, 0.1);
        let m = match_objects(&a, &b, FRAC_PI_4);
        let flow = compute_flow(&a, &b, &m, 0.1);
        assert_eq!(flow.entries.len(), 1);
        assert_eq!(flow.entries[0].azimuthal, 0.0);
        assert!(flow.entries[0].divergence < 0.0);

        // Looming object grows: positive divergence, and the assembled
        // apparent velocity points at the observer (negative radial part).
        let m = match_objects(&b, &a, FRAC_PI_4);
        let flow = compute_flow(&b, &a, &m, 0.1);
        assert!(flow.entries[0].divergence > 0.0);
        let v = assemble_apparent_velocity(&a.objects[0], &flow.entries[0], 1.0);
        assert!(v.x < 0.0, "approaching object must have inward radial flow");
    }

    #[test]
    fn orbiting_neighbor_matches_analytic_rate() {
        // Neighbor on a circular orbit of constant radius: the azimuthal
        // flow equals the orbit rate exactly (centers move linearly), and
        // the divergence vanishes.
        let (d, w, dt) = (5.0, 0.7, 0.05);
        let phi0 = 0.4;
        let at = |t: f64| Vec2::new(d * (phi0 + w * t).cos(), d * (phi0 + w * t).sin());
        let a = pano_at(&[at(0.0)], Vec2::ZERO, 0.0, 0.0);
        let b = pano_at(&[at(dt)], Vec2::ZERO, 0.0, dt);
        let m = match_objects(&a, &b, FRAC_PI_4);
        let flow = compute_flow(&a, &b, &m, dt);
        assert_relative_eq!(flow.entries[0].azimuthal, w, max_relative = 1e-6);
        assert_relative_eq!(flow.entries[0].divergence, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn time_reversal_negates_flow() {
        let a = pano_at(
            &[Vec2::new(5.0, 0.4), Vec2::new(-1.0, 6.2)],
            Vec2::ZERO,
            0.0,
            0.0,
        );
        let b = pano_at(
            &[Vec2::new(4.6, 0.6), Vec2::new(-1.3, 6.0)],
            Vec2::ZERO,
            0.0,
            0.1,
        );
        let fwd = compute_flow(&a, &b, &match_objects(&a, &b, FRAC_PI_4), 0.1);
        let bwd = compute_flow(&b, &a, &match_objects(&b, &a, FRAC_PI_4), 0.1);
        assert_eq!(fwd.entries.len(), bwd.entries.len());
        for (f, r) in fwd.entries.iter().zip(&bwd.entries) {
            assert_relative_eq!(f.azimuthal, -r.azimuthal, epsilon = 1e-12);
            assert_relative_eq!(f.divergence, -r.divergence, epsilon = 1e-12);
        }
    }

    #[test]
    fn comoving_pair_has_zero_flow() {
        // Identical velocity and heading: the relative scene is rigid.
        let v = Vec2::new(0.3, -0.2);
        let dt = 0.1;
        let obs0 = Vec2::new(1.0, 2.0);
        let nb0 = Vec2::new(4.0, 3.0);
        let a = pano_at(&[nb0], obs0, 0.5, 0.0);
        let b = pano_at(&[nb0 + v * dt], obs0 + v * dt, 0.5, dt);
        let flow = compute_flow(&a, &b, &match_objects(&a, &b, FRAC_PI_4), dt);
        assert_relative_eq!(flow.entries[0].azimuthal, 0.0, epsilon = 1e-10);
        assert_relative_eq!(flow.entries[0].divergence, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn apparent_velocity_examples() {
        let obj = crate::vision::RetinalObject::from_arc(
            0.0,
            2.0 * (1.0f64 / 2.0).asin(),
            1.0,
            crate::vision::Channel::Neighbor,
        );
        assert_relative_eq!(obj.apparent_distance, 2.0, epsilon = 1e-12);

        let zero = FlowEntry {
            object_index: 0,
            azimuthal: 0.0,
            divergence: 0.0,
        };
        assert_eq!(assemble_apparent_velocity(&obj, &zero, 1.0), Vec2::ZERO);

        let diverging = FlowEntry {
            object_index: 0,
            azimuthal: 0.0,
            divergence: 0.1,
        };
        let v = assemble_apparent_velocity(&obj, &diverging, 1.0);
        assert_relative_eq!(v.x, -0.2, epsilon = 1e-12);
        assert_relative_eq!(v.y, 0.0, epsilon = 1e-12);

        let sliding = FlowEntry {
            object_index: 0,
            azimuthal: 0.3,
            divergence: 0.0,
        };
        let v = assemble_apparent_velocity(&obj, &sliding, 1.0);
        assert_relative_eq!(v.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(v.y, 0.6, epsilon = 1e-12);
    }

    #[test]
    fn wrapped_centers_difference_uses_shortest_arc() {
        // Object drifting across the cut: flow must be the short way.
        let a = pano_at(&[Vec2::new(-6.0, -0.3)], Vec2::ZERO, 0.0, 0.0);
        let b = pano_at(&[Vec2::new(-6.0, 0.3)], Vec2::ZERO, 0.0, 0.1);
        let flow = compute_flow(&a, &b, &match_objects(&a, &b, FRAC_PI_4), 0.1);
        let expected = circular_diff((0.3f64).atan2(-6.0), (-0.3f64).atan2(-6.0)) / 0.1;
        assert!(expected.abs() < PI);
        assert_relative_eq!(flow.entries[0].azimuthal, expected, epsilon = 1e-12);
    }
}
