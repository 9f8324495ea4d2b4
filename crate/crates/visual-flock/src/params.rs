//! Model parameters, dimensionless conventions and variant switches.
//!
//! All lengths are in units of the agent radius `a` and times in `a/U`;
//! the defaults `a = 1`, `U = 1` make the system dimensionless.

use crate::math::Vec2;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

/// How per-object steering contributions are combined into one term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ObjectAveraging {
    /// Arithmetic mean over visible (or matched) retinal objects.
    #[default]
    Mean,
    /// Plain sum; fallback convention if mean lands the phase regions off.
    Sum,
}

/// Which quantity triggers the near-field avoidance inversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AvoidMode {
    /// Invert attraction when apparent distance drops below `avoid_distance * a`.
    #[default]
    ApparentDistance,
    /// Invert attraction when the object's angular width exceeds `avoid_width`.
    AngularWidth,
}

/// Apparent-distance weighting of a per-object visual integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceWeight {
    /// Plain binary-field integral (no distance factor).
    #[default]
    Binary,
    /// Weight each object by its apparent distance `R`.
    Linear,
    /// Weight each object by `R^2`.
    Squared,
}

fn default_align_weight() -> DistanceWeight {
    DistanceWeight::Linear
}

/// What happens when two agents come into contact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ContactModel {
    /// Contacts are counted and resolved as a hard-disk bounce: touching
    /// pairs separate to `contact_separation * a`.
    #[default]
    Resolve,
    /// Contacts are counted only; disks may interpenetrate freely.
    CountOnly,
}

impl DistanceWeight {
    pub fn factor(&self, apparent_distance: f64) -> f64 {
        match self {
            DistanceWeight::Binary => 1.0,
            DistanceWeight::Linear => apparent_distance,
            DistanceWeight::Squared => apparent_distance * apparent_distance,
        }
    }
}

/// Model ablation ladder: each variant enables one more supplement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Bare visual model: no avoidance, no anchor, no delay.
    Original,
    /// Adds the near-field avoidance inversion.
    Avoid,
    /// Adds avoidance and the virtual anchor.
    Anchor,
    /// Adds avoidance, anchor and the perception-action delay.
    #[default]
    Delay,
}

impl Variant {
    /// Project a base parameter set onto this variant by disabling the
    /// supplements the variant does not include.
    pub fn apply(self, base: &ModelParams) -> ModelParams {
        let mut p = base.clone();
        match self {
            Variant::Original => {
                p.avoid_gain = 1.0; // A == 1 everywhere disables avoidance
                p.k_anchor = 0.0;
                p.tau = 0.0;
            }
            Variant::Avoid => {
                p.k_anchor = 0.0;
                p.tau = 0.0;
            }
            Variant::Anchor => {
                p.tau = 0.0;
            }
            Variant::Delay => {}
        }
        p
    }
}

fn default_radius() -> f64 {
    1.0
}
fn default_speed() -> f64 {
    1.0
}
fn default_k_attract() -> f64 {
    0.07
}
fn default_k_align() -> f64 {
    0.16
}
fn default_k_anchor() -> f64 {
    0.005
}
fn default_k_noise() -> f64 {
    0.01
}
fn default_epsilon() -> f64 {
    1.0
}
fn default_tau() -> f64 {
    2.4
}
fn default_dt() -> f64 {
    0.1
}
fn default_avoid_gain() -> f64 {
    -5.0
}
fn default_avoid_distance() -> f64 {
    3.0
}
fn default_avoid_width() -> f64 {
    // Angular width subtended at the apparent-distance threshold: the two
    // trigger conditions coincide for an isolated disk.
    2.0 * (1.0f64 / default_avoid_distance()).asin()
}
fn default_n_agents() -> usize {
    10
}
fn default_t_end() -> f64 {
    5000.0
}
fn default_metrics_window() -> f64 {
    1000.0
}
fn default_cost_gate() -> f64 {
    FRAC_PI_4
}
fn default_bistable_occupancy() -> f64 {
    0.2
}
fn default_contact_separation() -> f64 {
    2.15
}

/// Full parameter set of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelParams {
    /// Agent radius `a` (length unit).
    pub radius: f64,
    /// Constant forward speed `U`.
    pub speed: f64,
    /// Attraction gain.
    pub k_attract: f64,
    /// Alignment gain.
    pub k_align: f64,
    /// Anchor gain.
    pub k_anchor: f64,
    /// Heading-noise gain.
    pub k_noise: f64,
    /// Blind-spot parameter of the frontal weighting `1 + epsilon*cos(phi)`.
    pub epsilon: f64,
    /// Perception-action delay in `a/U`; rounded to a multiple of `dt`.
    pub tau: f64,
    /// Integration step in `a/U`.
    pub dt: f64,
    /// Attraction factor inside the avoidance zone (`1.0` disables avoidance).
    pub avoid_gain: f64,
    /// Avoidance threshold on apparent distance, in units of `a`.
    pub avoid_distance: f64,
    /// Which observable triggers avoidance.
    pub avoid_mode: AvoidMode,
    /// Avoidance threshold on angular width (only for `AvoidMode::AngularWidth`).
    pub avoid_width: f64,
    /// Location of the virtual anchor disk.
    pub anchor_position: Vec2,
    /// Flock size.
    pub n_agents: usize,
    /// Total simulated time.
    pub t_end: f64,
    /// Trailing window for averaged metrics and phase classification.
    pub metrics_window: f64,
    /// Maximum feature-matching cost before a pair is discarded.
    pub cost_gate: f64,
    /// Per-object combination rule for attraction and alignment.
    pub averaging: ObjectAveraging,
    /// Apparent-distance weighting of the attraction integrand.
    pub attract_weight: DistanceWeight,
    /// Apparent-distance weighting of the alignment integrand.
    pub align_weight: DistanceWeight,
    /// Contact handling.
    pub contact_model: ContactModel,
    /// Center distance touching pairs rebound to, in units of `a`.
    pub contact_separation: f64,
    /// Minimum window occupancy of both sub-phases before a run counts as
    /// bistable.
    pub bistable_occupancy: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            radius: default_radius(),
            speed: default_speed(),
            k_attract: default_k_attract(),
            k_align: default_k_align(),
            k_anchor: default_k_anchor(),
            k_noise: default_k_noise(),
            epsilon: default_epsilon(),
            tau: default_tau(),
            dt: default_dt(),
            avoid_gain: default_avoid_gain(),
            avoid_distance: default_avoid_distance(),
            avoid_mode: AvoidMode::default(),
            avoid_width: default_avoid_width(),
            anchor_position: Vec2::ZERO,
            n_agents: default_n_agents(),
            t_end: default_t_end(),
            metrics_window: default_metrics_window(),
            cost_gate: default_cost_gate(),
            averaging: ObjectAveraging::default(),
            attract_weight: DistanceWeight::default(),
            align_weight: default_align_weight(),
            contact_model: ContactModel::default(),
            contact_separation: default_contact_separation(),
            bistable_occupancy: default_bistable_occupancy(),
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParams(msg.to_string()))
            }
        };
        check(self.radius > 0.0 && self.radius.is_finite(), "radius must be > 0")?;
        check(self.speed > 0.0 && self.speed.is_finite(), "speed must be > 0")?;
        check(self.dt > 0.0 && self.dt.is_finite(), "dt must be > 0")?;
        check(self.tau >= 0.0 && self.tau.is_finite(), "tau must be >= 0")?;
        let gains = [
            self.k_attract,
            self.k_align,
            self.k_anchor,
            self.k_noise,
            self.avoid_gain,
        ];
        check(gains.iter().all(|g| g.is_finite()), "gains must be finite")?;
        check(
            (0.0..=1.0).contains(&self.epsilon),
            "epsilon must lie in [0, 1]",
        )?;
        check(self.avoid_distance > 0.0, "avoid_distance must be > 0")?;
        check(self.avoid_width > 0.0, "avoid_width must be > 0")?;
        check(self.n_agents >= 1, "n_agents must be >= 1")?;
        check(self.t_end > 0.0 && self.t_end.is_finite(), "t_end must be > 0")?;
        check(self.metrics_window > 0.0, "metrics_window must be > 0")?;
        check(self.cost_gate > 0.0, "cost_gate must be > 0")?;
        check(
            self.bistable_occupancy > 0.0 && self.bistable_occupancy <= 0.5,
            "bistable_occupancy must lie in (0, 0.5]",
        )?;
        check(
            self.contact_separation >= 2.0,
            "contact_separation must be >= 2 agent radii",
        )?;
        check(self.anchor_position.is_finite(), "anchor_position must be finite")?;
        Ok(())
    }

    /// Delay expressed in whole integration steps (`tau` rounded to a
    /// multiple of `dt`).
    pub fn delay_steps(&self) -> usize {
        (self.tau / self.dt).round() as usize
    }

    /// The delay actually realized after rounding to the step grid.
    pub fn effective_tau(&self) -> f64 {
        self.delay_steps() as f64 * self.dt
    }

    /// Number of integration steps to reach `t_end`.
    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}
