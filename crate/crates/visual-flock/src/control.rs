//! Steering laws: attraction with near-field avoidance, optic-flow
//! alignment, anchor attraction and heading noise.
//!
//! Every visual term is an integral of a piecewise-constant-per-object
//! quantity against trigonometric weights, so each object contributes in
//! closed form via the antiderivatives below. The heading rate is the
//! gain-weighted sum of the four terms; the steering inputs are the
//! delayed panorama and flow when a perception-action delay is active.

use crate::opticflow::FlowField;
use crate::params::{AvoidMode, ModelParams, ObjectAveraging};
use crate::vision::{Channel, Panorama, RetinalObject};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Frontal weighting `b(phi) = 1 + epsilon*cos(phi)`; at `epsilon = 1` the
/// rear of the visual field carries zero weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlindspotWeight {
    pub epsilon: f64,
}

impl BlindspotWeight {
    pub fn weight(&self, phi: f64) -> f64 {
        1.0 + self.epsilon * phi.cos()
    }
}

/// The four steering contributions and their gain-weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringTerms {
    pub attract: f64,
    pub align: f64,
    pub anchor: f64,
    /// Unit-variance noise sample (dimensionless).
    pub noise: f64,
    /// `k_attract*attract + k_align*align + k_anchor*anchor + k_noise*noise`.
    pub total: f64,
}

impl SteeringTerms {
    /// Heading rate without the noise term; the integrator applies noise
    /// with Brownian `sqrt(dt)` scaling instead.
    pub fn deterministic(&self, params: &ModelParams) -> f64 {
        params.k_attract * self.attract
            + params.k_align * self.align
            + params.k_anchor * self.anchor
    }
}

/// Antiderivative of `(1 + eps*cos(phi)) * sin(phi)`.
fn weighted_sin_antideriv(phi: f64, eps: f64) -> f64 {
    -phi.cos() - eps / 4.0 * (2.0 * phi).cos()
}

/// Antiderivative of `(1 + eps*cos(phi)) * cos(phi)`.
fn weighted_cos_antideriv(phi: f64, eps: f64) -> f64 {
    phi.sin() + eps * (phi / 2.0 + (2.0 * phi).sin() / 4.0)
}

/// Integral of `(1 + eps*cos(phi)) * sin(phi)` over the object's arc.
///
/// The arc runs from `rise` counter-clockwise for `width` radians; using the
/// unwrapped upper limit keeps the closed form valid across the `+-pi` cut.
fn weighted_sin_integral(rise: f64, width: f64, eps: f64) -> f64 {
    weighted_sin_antideriv(rise + width, eps) - weighted_sin_antideriv(rise, eps)
}

/// Integral of `(1 + eps*cos(phi)) * cos(phi)` over the object's arc.
fn weighted_cos_integral(rise: f64, width: f64, eps: f64) -> f64 {
    weighted_cos_antideriv(rise + width, eps) - weighted_cos_antideriv(rise, eps)
}

/// Integral of `sin(phi)` over the object's arc (anchor term carries no
/// blind-spot weighting).
fn sin_integral(rise: f64, width: f64) -> f64 {
    rise.cos() - (rise + width).cos()
}

fn combine(sum: f64, count: usize, averaging: ObjectAveraging) -> f64 {
    match averaging {
        _ if count == 0 => 0.0,
        ObjectAveraging::Mean => sum / count as f64,
        ObjectAveraging::Sum => sum,
    }
}

/// Piecewise-constant avoidance factor: `avoid_gain` inside the near zone,
/// `+1` elsewhere. The near zone triggers strictly below the apparent
/// distance threshold (or strictly above the width threshold, which is the
/// same zone expressed in optical size).
pub fn avoidance_factor(object: &RetinalObject, params: &ModelParams) -> f64 {
    debug_assert_eq!(object.channel, Channel::Neighbor);
    let near = match params.avoid_mode {
        AvoidMode::ApparentDistance => {
            object.apparent_distance < params.avoid_distance * params.radius
        }
        AvoidMode::AngularWidth => object.width > params.avoid_width,
    };
    if near {
        params.avoid_gain
    } else {
        1.0
    }
}

/// Attraction term: per-object `A * W(R) * integral(b_eps * sin)`, where
/// `W` is the configured apparent-distance weighting of the binary field.
pub fn attraction_term(panorama: &Panorama, params: &ModelParams) -> f64 {
    let sum: f64 = panorama
        .objects
        .iter()
        .map(|o| {
            avoidance_factor(o, params)
                * params.attract_weight.factor(o.apparent_distance)
                * weighted_sin_integral(o.rise, o.width, params.epsilon)
        })
        .sum();
    combine(sum, panorama.objects.len(), params.averaging)
}

/// Alignment term: per matched object
/// `(W(R)/U) * integral((-D*sin + O*cos) * b_eps)`, `W` the configured
/// apparent-distance weighting; unmatched objects contribute nothing.
pub fn alignment_term(panorama: &Panorama, flow: &FlowField, params: &ModelParams) -> f64 {
    let sum: f64 = flow
        .entries
        .iter()
        .map(|e| {
            let o = &panorama.objects[e.object_index];
            params.align_weight.factor(o.apparent_distance)
                * (-e.divergence * weighted_sin_integral(o.rise, o.width, params.epsilon)
                    + e.azimuthal * weighted_cos_integral(o.rise, o.width, params.epsilon))
                / params.speed
        })
        .sum();
    combine(sum, flow.matched_count, params.averaging)
}

/// Anchor term: `(R^2 / a) * integral(sin)` over the anchor object. No
/// blind-spot weighting, no avoidance, no per-object averaging.
pub fn anchor_term(panorama: &Panorama, params: &ModelParams) -> f64 {
    let o = &panorama.anchor;
    o.apparent_distance.powi(2) / params.radius * sin_integral(o.rise, o.width)
}

/// One zero-mean unit-variance Gaussian draw.
pub fn noise_term<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Evaluate all steering terms from the (possibly delayed) visual state.
pub fn steering<R: Rng + ?Sized>(
    delayed_panorama: &Panorama,
    delayed_flow: &FlowField,
    params: &ModelParams,
    rng: &mut R,
) -> SteeringTerms {
    let attract = attraction_term(delayed_panorama, params);
    let align = alignment_term(delayed_panorama, delayed_flow, params);
    let anchor = anchor_term(delayed_panorama, params);
    let noise = noise_term(rng);
    SteeringTerms {
        attract,
        align,
        anchor,
        noise,
        total: params.k_attract * attract
            + params.k_align * align
            + params.k_anchor * anchor
            + params.k_noise * noise,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agent::AgentState;
    use crate::math::Vec2;
    use crate::opticflow::{compute_flow, match_objects, FlowEntry};
    use crate::params::DistanceWeight;
    use crate::vision::{build_panorama, Channel, RetinalObject};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    /// Independent midpoint-rule quadrature.
    fn quad(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        (0..n).map(|k| f(lo + (k as f64 + 0.5) * h)).sum::<f64>() * h
    }

    fn object_at(center: f64, width: f64) -> RetinalObject {
        RetinalObject::from_arc(center - width / 2.0, width, 1.0, Channel::Neighbor)
    }

    fn far_params() -> ModelParams {
        ModelParams {
            k_noise: 0.0,
            ..ModelParams::default()
        }
    }

    #[test]
    fn avoidance_factor_cases() {
        let p = ModelParams::default();
        let near = object_at(0.3, 2.0 * (1.0f64 / 2.0).asin()); // R = 2a
        assert_eq!(avoidance_factor(&near, &p), -5.0);
        let far = object_at(0.3, 2.0 * (1.0f64 / 10.0).asin()); // R = 10a
        assert_eq!(avoidance_factor(&far, &p), 1.0);
        let boundary = object_at(0.3, 2.0 * (1.0f64 / 3.0).asin()); // R = 3a exactly
        assert_eq!(avoidance_factor(&boundary, &p), 1.0);
    }

    #[test]
    fn avoidance_width_mode_matches_distance_mode_for_isolated_disks() {
        let p = ModelParams {
            avoid_mode: AvoidMode::AngularWidth,
            ..ModelParams::default()
        };
        let near = object_at(0.0, 2.0 * (1.0f64 / 2.0).asin());
        assert_eq!(avoidance_factor(&near, &p), -5.0);
        let far = object_at(0.0, 2.0 * (1.0f64 / 10.0).asin());
        assert_eq!(avoidance_factor(&far, &p), 1.0);
    }

    #[test]
    fn attraction_empty_is_zero() {
        let states = [AgentState::new(Vec2::ZERO, 0.0)];
        let pano = build_panorama(0, &states, &far_params(), 0.0);
        assert_eq!(attraction_term(&pano, &far_params()), 0.0);
    }

    #[test]
    fn attraction_dead_ahead_is_zero() {
        let pano = Panorama {
            objects: vec![object_at(0.0, 0.4)],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        assert_relative_eq!(attraction_term(&pano, &far_params()), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn attraction_matches_quadrature() {
        let width = PI / 6.0;
        let obj = object_at(FRAC_PI_2, width);
        let pano = Panorama {
            objects: vec![obj],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        let p = far_params();
        let got = attraction_term(&pano, &p);
        let expected = p.attract_weight.factor(obj.apparent_distance)
            * quad(
                |phi| (1.0 + p.epsilon * phi.cos()) * phi.sin(),
                obj.center - width / 2.0,
                obj.center + width / 2.0,
                1_000_000,
            );
        assert!(got > 0.0, "neighbor on the left must pull left");
        assert_relative_eq!(got, expected, epsilon = 1e-8);

        // The distance-weighted variants scale the same closed form.
        for w in [DistanceWeight::Linear, DistanceWeight::Squared] {
            let pw = ModelParams {
                attract_weight: w,
                ..p.clone()
            };
            assert_relative_eq!(
                attraction_term(&pano, &pw),
                w.factor(obj.apparent_distance) * expected,
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn attraction_wrapped_object_matches_quadrature() {
        // Object straddling the +-pi cut.
        let obj = RetinalObject::from_arc(PI - 0.2, 0.5, 1.0, Channel::Neighbor);
        let pano = Panorama {
            objects: vec![obj],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        let p = far_params();
        let a_factor = avoidance_factor(&obj, &p);
        let expected = a_factor
            * p.attract_weight.factor(obj.apparent_distance)
            * quad(
                |phi| (1.0 + p.epsilon * phi.cos()) * phi.sin(),
                PI - 0.2,
                PI + 0.3,
                1_000_000,
            );
        assert_relative_eq!(attraction_term(&pano, &p), expected, epsilon = 1e-8);
    }

    #[test]
    fn alignment_zero_flow_is_zero() {
        let pano = Panorama {
            objects: vec![object_at(1.0, 0.3)],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        assert_eq!(alignment_term(&pano, &FlowField::empty(), &far_params()), 0.0);
    }

    #[test]
    fn alignment_pure_divergence_dead_ahead_is_zero() {
        let pano = Panorama {
            objects: vec![object_at(0.0, 0.4)],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        let flow = FlowField {
            entries: vec![FlowEntry {
                object_index: 0,
                azimuthal: 0.0,
                divergence: 0.7,
            }],
            matched_count: 1,
            ignored_count: 0,
        };
        assert_relative_eq!(
            alignment_term(&pano, &flow, &far_params()),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn alignment_matches_quadrature() {
        for center in [PI / 4.0, FRAC_PI_2] {
            for eps in [0.0, 1.0] {
                let width = PI / 6.0;
                let obj = object_at(center, width);
                let pano = Panorama {
                    objects: vec![obj],
                    anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
                    timestamp: 0.0,
                };
                let (azimuthal, divergence) = (0.3, 0.1);
                let flow = FlowField {
                    entries: vec![FlowEntry {
                        object_index: 0,
                        azimuthal,
                        divergence,
                    }],
                    matched_count: 1,
                    ignored_count: 0,
                };
                let p = ModelParams {
                    epsilon: eps,
                    ..far_params()
                };
                let got = alignment_term(&pano, &flow, &p);
                let expected = quad(
                    |phi| {
                        (-divergence * phi.sin() + azimuthal * phi.cos())
                            * (1.0 + eps * phi.cos())
                    },
                    center - width / 2.0,
                    center + width / 2.0,
                    1_000_000,
                );
                assert_relative_eq!(got, expected, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn alignment_positive_for_leftward_slide_ahead_left() {
        // Object ahead-left whose azimuthal flow is positive: the observer
        // turns left to follow it.
        let obj = object_at(PI / 4.0, 0.3);
        let pano = Panorama {
            objects: vec![obj],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        let flow = FlowField {
            entries: vec![FlowEntry {
                object_index: 0,
                azimuthal: 0.3,
                divergence: 0.0,
            }],
            matched_count: 1,
            ignored_count: 0,
        };
        assert!(alignment_term(&pano, &flow, &far_params()) > 0.0);
    }

    #[test]
    fn anchor_symmetric_spans_are_zero() {
        let p = far_params();
        for center in [0.0, PI] {
            let anchor = RetinalObject::from_arc(center - 0.15, 0.3, 1.0, Channel::Anchor);
            let pano = Panorama {
                objects: vec![],
                anchor,
                timestamp: 0.0,
            };
            assert_relative_eq!(anchor_term(&pano, &p), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn anchor_at_quarter_turn_matches_closed_form_and_quadrature() {
        // Anchor at distance 20a, center +pi/2: exactly 2*d*sin(center) = 40.
        let d: f64 = 20.0;
        let half = (1.0f64 / d).asin();
        let anchor = RetinalObject::from_arc(FRAC_PI_2 - half, 2.0 * half, 1.0, Channel::Anchor);
        let pano = Panorama {
            objects: vec![],
            anchor,
            timestamp: 0.0,
        };
        let got = anchor_term(&pano, &far_params());
        assert_relative_eq!(got, 40.0, epsilon = 1e-9);
        let expected = anchor.apparent_distance.powi(2)
            * quad(
                |phi| phi.sin(),
                FRAC_PI_2 - half,
                FRAC_PI_2 + half,
                1_000_000,
            );
        assert_relative_eq!(got, expected, epsilon = 1e-8);
    }

    #[test]
    fn noise_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| noise_term(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn zero_noise_gain_contributes_nothing() {
        let states = [AgentState::new(Vec2::new(5.0, 5.0), 0.3)];
        let p = ModelParams {
            k_noise: 0.0,
            ..ModelParams::default()
        };
        let pano = build_panorama(0, &states, &p, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let terms = steering(&pano, &FlowField::empty(), &p, &mut rng);
        assert_eq!(
            terms.total,
            p.k_attract * terms.attract + p.k_align * terms.align + p.k_anchor * terms.anchor
        );
    }

    #[test]
    fn all_gains_zero_moves_straight() {
        let p = ModelParams {
            k_attract: 0.0,
            k_align: 0.0,
            k_anchor: 0.0,
            k_noise: 0.0,
            ..ModelParams::default()
        };
        let states = [
            AgentState::new(Vec2::ZERO, 0.0),
            AgentState::new(Vec2::new(4.0, 2.0), 1.0),
        ];
        let pano = build_panorama(0, &states, &p, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let terms = steering(&pano, &FlowField::empty(), &p, &mut rng);
        assert_eq!(terms.total, 0.0);
        assert_eq!(terms.deterministic(&p), 0.0);
    }

    #[test]
    fn lone_agent_on_anchor_feels_noise_only() {
        let p = ModelParams::default();
        let states = [AgentState::new(p.anchor_position, 0.7)];
        let pano = build_panorama(0, &states, &p, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let terms = steering(&pano, &FlowField::empty(), &p, &mut rng);
        assert_eq!(terms.attract, 0.0);
        assert_eq!(terms.align, 0.0);
        assert_relative_eq!(terms.anchor, 0.0, epsilon = 1e-12);
        assert_relative_eq!(terms.total, p.k_noise * terms.noise, epsilon = 1e-14);
    }

    #[test]
    fn head_on_pair_inside_avoid_zone_turn_apart() {
        // Head-on approach, mirrored about the perpendicular bisector:
        // attraction terms carry opposite turn signs (both turn away).
        let p = far_params();
        let tilt = 0.08;
        let states = [
            AgentState::new(Vec2::ZERO, tilt),
            AgentState::new(Vec2::new(2.5, 0.0), PI - tilt),
        ];
        let pano0 = build_panorama(0, &states, &p, 0.0);
        let pano1 = build_panorama(1, &states, &p, 0.0);
        let w0 = attraction_term(&pano0, &p);
        let w1 = attraction_term(&pano1, &p);
        assert!(
            avoidance_factor(&pano0.objects[0], &p) == p.avoid_gain,
            "pair must be inside the avoidance zone"
        );
        let phi0 = pano0.objects[0].center;
        assert!(phi0 < 0.0, "neighbor should sit right of heading");
        // Neighbor on the right, avoidance inverted: agent 0 turns left.
        assert!(w0 > 0.0, "avoidance must turn agent 0 away");
        assert_relative_eq!(w0, -w1, epsilon = 1e-9);
    }

    #[test]
    fn rear_object_with_full_blindspot_contributes_nearly_nothing() {
        let p = far_params();
        let width = 0.2;
        let pano = Panorama {
            objects: vec![object_at(PI, width)],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        assert_relative_eq!(attraction_term(&pano, &p), 0.0, epsilon = 1e-12);
        let flow = FlowField {
            entries: vec![FlowEntry {
                object_index: 0,
                azimuthal: 1.0,
                divergence: 1.0,
            }],
            matched_count: 1,
            ignored_count: 0,
        };
        // Residual is O(width^3) from the cos-weighted part.
        assert!(alignment_term(&pano, &flow, &p).abs() < width.powi(3));
    }

    #[test]
    fn sum_convention_scales_mean_by_object_count() {
        let p = far_params();
        let p_sum = ModelParams {
            averaging: ObjectAveraging::Sum,
            ..p.clone()
        };
        let pano = Panorama {
            objects: vec![object_at(0.9, 0.2), object_at(-1.4, 0.25), object_at(2.2, 0.15)],
            anchor: RetinalObject::full_circle(1.0, Channel::Anchor),
            timestamp: 0.0,
        };
        assert_relative_eq!(
            attraction_term(&pano, &p_sum),
            3.0 * attraction_term(&pano, &p),
            epsilon = 1e-12
        );
    }

    #[test]
    fn gain_scaling_is_linear() {
        let p = far_params();
        let scaled = ModelParams {
            k_attract: p.k_attract * 3.0,
            k_align: p.k_align * 3.0,
            k_anchor: p.k_anchor * 3.0,
            ..p.clone()
        };
        let states = [
            AgentState::new(Vec2::ZERO, 0.2),
            AgentState::new(Vec2::new(4.0, 1.0), -0.4),
            AgentState::new(Vec2::new(-2.0, 5.0), 0.9),
        ];
        let pano = build_panorama(0, &states, &p, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t1 = steering(&pano, &FlowField::empty(), &p, &mut rng);
        let t3 = steering(&pano, &FlowField::empty(), &scaled, &mut rng);
        assert_relative_eq!(
            t3.deterministic(&scaled),
            3.0 * t1.deterministic(&p),
            epsilon = 1e-12
        );
    }

    /// Full-pipeline steering terms from two consecutive physical frames.
    fn terms_from_scene(
        prev: &[AgentState],
        curr: &[AgentState],
        params: &ModelParams,
    ) -> (f64, f64, f64) {
        let pano_prev = build_panorama(0, prev, params, 0.0);
        let pano_curr = build_panorama(0, curr, params, params.dt);
        let matches = match_objects(&pano_prev, &pano_curr, params.cost_gate);
        let flow = compute_flow(&pano_prev, &pano_curr, &matches, params.dt);
        (
            attraction_term(&pano_curr, params),
            alignment_term(&pano_curr, &flow, params),
            anchor_term(&pano_curr, params),
        )
    }

    #[test]
    fn alignment_turns_toward_lateral_neighbor_motion() {
        // Velocity matching must hold for lateral neighbors on either
        // side, receding or approaching.
        let params = ModelParams {
            epsilon: 0.0, // keep both sides equally weighted for this check
            ..far_params()
        };
        let advance = |s: &AgentState| {
            AgentState::new(
                s.position + s.heading_vector() * (params.speed * params.dt),
                s.heading(),
            )
        };
        let cases = [
            // (neighbor position, neighbor heading, expected turn sign)
            (Vec2::new(0.0, 5.0), FRAC_PI_2, 1.0),   // left, heading +y
            (Vec2::new(0.0, 5.0), -FRAC_PI_2, -1.0), // left, heading -y
            (Vec2::new(0.0, -5.0), FRAC_PI_2, 1.0),  // right, heading +y
            (Vec2::new(0.0, -5.0), -FRAC_PI_2, -1.0),
        ];
        for (pos, heading, sign) in cases {
            let prev = [AgentState::new(Vec2::ZERO, 0.0), AgentState::new(pos, heading)];
            let curr: Vec<AgentState> = prev.iter().map(&advance).collect();
            let (_, align, _) = terms_from_scene(&prev, &curr, &params);
            assert!(
                align * sign > 0.0,
                "neighbor at {pos:?} heading {heading}: align={align}, want sign {sign}"
            );
        }
    }

    #[test]
    fn mirror_symmetry_negates_all_terms() {
        // Reflect the whole scene about the observer's heading axis (the x
        // axis here): every steering term flips sign exactly.
        let params = ModelParams {
            anchor_position: Vec2::new(3.0, 4.0),
            ..far_params()
        };
        let mirrored_params = ModelParams {
            anchor_position: Vec2::new(3.0, -4.0),
            ..params.clone()
        };
        let mirror =
            |s: &AgentState| AgentState::new(Vec2::new(s.position.x, -s.position.y), -s.heading());

        let prev = [
            AgentState::new(Vec2::ZERO, 0.0),
            AgentState::new(Vec2::new(5.0, 1.0), 0.8),
            AgentState::new(Vec2::new(-2.0, 3.0), -1.2),
        ];
        let curr: Vec<AgentState> = prev
            .iter()
            .map(|s| {
                AgentState::new(
                    s.position + s.heading_vector() * (params.speed * params.dt),
                    s.heading(),
                )
            })
            .collect();
        let prev_m: Vec<AgentState> = prev.iter().map(&mirror).collect();
        let curr_m: Vec<AgentState> = curr.iter().map(&mirror).collect();

        let (at, al, an) = terms_from_scene(&prev, &curr, &params);
        let (at_m, al_m, an_m) = terms_from_scene(&prev_m, &curr_m, &mirrored_params);
        assert!(at.abs() > 1e-6 && an.abs() > 1e-6, "degenerate scene");
        assert_relative_eq!(at_m, -at, epsilon = 1e-10);
        assert_relative_eq!(al_m, -al, epsilon = 1e-10);
        assert_relative_eq!(an_m, -an, epsilon = 1e-10);
    }

    #[test]
    fn rotation_invariance_of_all_terms() {
        let chi = 1.234;
        let params = ModelParams {
            anchor_position: Vec2::new(3.0, 4.0),
            ..far_params()
        };
        let rotated_params = ModelParams {
            anchor_position: params.anchor_position.rotated(chi),
            ..params.clone()
        };
        let rotate =
            |s: &AgentState| AgentState::new(s.position.rotated(chi), s.heading() + chi);

        let prev = [
            AgentState::new(Vec2::new(1.0, -0.5), 0.3),
            AgentState::new(Vec2::new(5.0, 1.0), 0.8),
            AgentState::new(Vec2::new(-2.0, 3.0), -1.2),
        ];
        let curr: Vec<AgentState> = prev
            .iter()
            .map(|s| {
                AgentState::new(
                    s.position + s.heading_vector() * (params.speed * params.dt),
                    s.heading(),
                )
            })
            .collect();
        let prev_r: Vec<AgentState> = prev.iter().map(&rotate).collect();
        let curr_r: Vec<AgentState> = curr.iter().map(&rotate).collect();

        let (at, al, an) = terms_from_scene(&prev, &curr, &params);
        let (at_r, al_r, an_r) = terms_from_scene(&prev_r, &curr_r, &rotated_params);
        assert_relative_eq!(at_r, at, epsilon = 1e-9, max_relative = 1e-9);
        assert_relative_eq!(al_r, al, epsilon = 1e-9, max_relative = 1e-9);
        assert_relative_eq!(an_r, an, epsilon = 1e-9, max_relative = 1e-9);
    }

    /// Visual integrand `-D*sin(phi) + O*cos(phi)` at the object center,
    /// measured from two rendered frames `dt` apart, evaluated at time `t`.
    fn visual_integrand(
        neighbor_at: impl Fn(f64) -> Vec2,
        t: f64,
        dt: f64,
        params: &ModelParams,
    ) -> f64 {
        let observer = AgentState::new(Vec2::ZERO, 0.0);
        let prev = [observer, AgentState::new(neighbor_at(t - dt), 0.0)];
        let curr = [observer, AgentState::new(neighbor_at(t), 0.0)];
        let pano_prev = build_panorama(0, &prev, params, t - dt);
        let pano_curr = build_panorama(0, &curr, params, t);
        let matches = match_objects(&pano_prev, &pano_curr, params.cost_gate);
        assert_eq!(matches.len(), 1);
        let flow = compute_flow(&pano_prev, &pano_curr, &matches, dt);
        let e = &flow.entries[0];
        let phi = pano_curr.objects[0].center;
        -e.divergence * phi.sin() + e.azimuthal * phi.cos()
    }

    #[test]
    fn cross_product_identity_oracle_circular_motion() {
        // Orbit at constant distance: centers move linearly, so the
        // backward difference is exact and the visual integrand matches the
        // analytic cross product to rounding error.
        let (d, w) = (6.0, 0.5);
        let orbit = |t: f64| Vec2::new(d * (0.4 + w * t).cos(), d * (0.4 + w * t).sin());
        let params = far_params();
        let t = 1.0;
        let got = visual_integrand(orbit, t, 0.1, &params);
        // Ground truth: O = w (heading fixed), D = 0, phi = orbit angle.
        let phi = 0.4 + w * t;
        let expected = w * phi.cos();
        assert_relative_eq!(got, expected, epsilon = 1e-9);
    }

    #[test]
    fn cross_product_identity_oracle_radial_motion_converges_first_order() {
        // Receding neighbor: the width rate varies in time, so the backward
        // difference carries an O(dt) error that halves with dt.
        let (d0, v, phi0): (f64, f64, f64) = (4.0, 0.8, 1.1);
        let radial = move |t: f64| {
            let d = d0 + v * t;
            Vec2::new(d * phi0.cos(), d * phi0.sin())
        };
        let params = far_params();
        let t = 1.0;
        let d = d0 + v * t;
        // D_true = d(width)/dt with width = 2*asin(a/d), negative while
        // receding.
        let d_true = -2.0 * v / (d * d * (1.0 - 1.0 / (d * d)).sqrt());
        let expected = -d_true * phi0.sin();

        let err = |dt: f64| (visual_integrand(radial, t, dt, &params) - expected).abs();
        let e1 = err(0.1);
        let e2 = err(0.05);
        let e3 = err(0.025);
        assert!(e1 > 1e-6, "error floor too low to measure convergence");
        assert!(e2 <= 0.6 * e1 + 1e-12, "e(dt/2)={e2} vs e(dt)={e1}");
        assert!(e3 <= 0.6 * e2 + 1e-12, "e(dt/4)={e3} vs e(dt/2)={e2}");
    }

    #[test]
    fn blindspot_weight_bounds() {
        let b = BlindspotWeight { epsilon: 1.0 };
        assert_eq!(b.weight(0.0), 2.0);
        assert!(b.weight(PI).abs() < 1e-15);
        for k in 0..64 {
            let phi = -PI + TAU * k as f64 / 64.0;
            assert!(b.weight(phi) >= -1e-15);
        }
    }
}
