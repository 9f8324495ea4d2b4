use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};
use visual_flock::agent::AgentState;
use visual_flock::math::Vec2;
use visual_flock::metrics::compute_metrics;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::SimState;

fn main() {
    let taus = [0.0, 0.4, 0.8, 1.2, 1.6, 2.0, 2.4];
    let results: Vec<String> = taus
        .par_iter()
        .map(|&tau| {
            let params = ModelParams {
                k_attract: 0.07,
                k_align: 0.16,
                tau,
                ..Variant::Anchor.apply(&ModelParams::default())
            };
            // Formed mill, radius 8.
            let agents: Vec<AgentState> = (0..10)
                .map(|i| {
                    let ang = TAU * i as f64 / 10.0;
                    AgentState::new(Vec2::from_angle(ang) * 8.0, ang + FRAC_PI_2)
                })
                .collect();
            let mut state = SimState::from_states(agents, &params, &RngStream::new(4)).unwrap();
            let mut m_tail = 0.0;
            let steps = 20000usize;
            let mut count = 0.0;
            for n in 1..=steps {
                state.step(&params).unwrap();
                if n > steps - 5000 {
                    m_tail += compute_metrics(&state.agents, state.panoramas()).milling;
                    count += 1.0;
                }
            }
            format!("tau={tau:3.1}: mean M over final 500tu = {:.2}", m_tail / count)
        })
        .collect();
    for r in results { println!("{r}"); }
}
