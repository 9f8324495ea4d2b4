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
    let steps = (2000.0 / params.dt) as usize;
    let every = steps / 8;
    let mut ms = Vec::new();
    for n in 1..=steps {
        state.step(params).unwrap();
        if n % every == 0 {
            ms.push(format!("{:.2}", compute_metrics(&state.agents, state.panoramas()).milling));
        }
    }
    format!("{tag}: M(t..2000)= {}", ms.join(" "))
}

fn main() {
    let base = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Delay.apply(&ModelParams::default()) };
    let cases: Vec<(String, ModelParams)> = vec![
        ("dt=0.1 (now)   ".into(), base.clone()),
        ("dt=0.2         ".into(), ModelParams { dt: 0.2, ..base.clone() }),
        ("dt=0.4         ".into(), ModelParams { dt: 0.4, ..base.clone() }),
        ("dt=0.8         ".into(), ModelParams { dt: 0.8, ..base.clone() }),
        ("dt=0.1 noise0  ".into(), ModelParams { k_noise: 0.0, ..base.clone() }),
        ("dt=0.4 noise0  ".into(), ModelParams { dt: 0.4, k_noise: 0.0, ..base.clone() }),
    ];
    let out: Vec<String> = cases.par_iter().map(|(tag, p)| run_case(tag, p)).collect();
    for r in out { println!("{r}"); }
}
