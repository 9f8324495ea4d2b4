use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};
use visual_flock::agent::AgentState;
use visual_flock::math::Vec2;
use visual_flock::metrics::compute_metrics;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::SimState;

fn run_case(tag: &str, params: &ModelParams) -> String {
    let agents: Vec<AgentState> = (0..10)
        .map(|i| {
            let ang = TAU * i as f64 / 10.0;
            AgentState::new(Vec2::from_angle(ang) * 8.0, ang + FRAC_PI_2)
        })
        .collect();
    let mut state = SimState::from_states(agents, params, &RngStream::new(4)).unwrap();
    let mut ms = Vec::new();
    for n in 1..=20000usize {
        state.step(params).unwrap();
        if n % 2500 == 0 {
            ms.push(format!("{:.2}", compute_metrics(&state.agents, state.panoramas()).milling));
        }
    }
    format!("{tag}: M(t)={}", ms.join(" "))
}

fn main() {
    let base = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Delay.apply(&ModelParams::default()) };
    let cases: Vec<(String, ModelParams)> = vec![
        ("avoid R<3a (default) ".into(), base.clone()),
        ("avoid R<1.2a (blobs excluded)".into(), ModelParams { avoid_distance: 1.2, ..base.clone() }),
        ("avoid R<1.2a noise0  ".into(), ModelParams { avoid_distance: 1.2, k_noise: 0.0, ..base.clone() }),
        ("no avoidance at all  ".into(), ModelParams { avoid_gain: 1.0, ..base.clone() }),
    ];
    let out: Vec<String> = cases.par_iter().map(|(tag, p)| run_case(tag, p)).collect();
    for r in out { println!("{r}"); }
}
