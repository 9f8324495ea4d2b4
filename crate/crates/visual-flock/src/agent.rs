//! State of a single self-propelled disk agent.

use crate::math::{wrap_angle, Vec2};
use serde::{Deserialize, Serialize};

/// Position and heading of one agent. Lengths are in units of the agent
/// radius, the heading angle is kept normalized to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Vec2,
    heading: f64,
}

impl AgentState {
    pub fn new(position: Vec2, heading: f64) -> Self {
        AgentState {
            position,
            heading: wrap_angle(heading),
        }
    }

    pub fn heading(&self) -> f64 {
        self.heading
    }

    /// Unit heading vector `(cos theta, sin theta)`.
    pub fn heading_vector(&self) -> Vec2 {
        Vec2::from_angle(self.heading)
    }

    pub fn set_heading(&mut self, heading: f64) {
        self.heading = wrap_angle(heading);
    }

    pub fn is_finite(&self) -> bool {
        self.position.is_finite() && self.heading.is_finite()
    }
}
