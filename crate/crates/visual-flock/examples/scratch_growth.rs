use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, TAU};
use visual_flock::agent::AgentState;
use visual_flock::math::Vec2;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::SimState;

fn run_case(tag: &str, params: &ModelParams) -> String {
    // Formed mill with a 1e-8 radial perturbation on agent 0.
    let agents: Vec<AgentState> = (0..10)
        .map(|i| {
            let ang = TAU * i as f64 / 10.0;
            let rho = if i == 0 { 8.0 + 1e-8 } else { 8.0 };
            AgentState::new(Vec2::from_angle(ang) * rho, ang + FRAC_PI_2)
        })
        .collect();
    let mut state = SimState::from_states(agents, params, &RngStream::new(4)).unwrap();
    let mut lines = Vec::new();
    for n in 1..=6000usize {
        state.step(params).unwrap();
        if n % 750 == 0 {
            // Radial spread around the mean radius = symmetry breaking.
            let radii: Vec<f64> = state.agents.iter().map(|a| a.position.norm()).collect();
            let mean = radii.iter().sum::<f64>() / radii.len() as f64;
            let var = radii.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / radii.len() as f64;
            lines.push(format!("{:.1e}", var.sqrt()));
        }
    }
    format!("{tag}: dev(t=75..600)= {}", lines.join(" "))
}

fn main() {
    let base = ModelParams {
        k_attract: 0.07,
        k_align: 0.16,
        k_noise: 0.0,
        ..Variant::Delay.apply(&ModelParams::default())
    };
    let cases: Vec<(String, ModelParams)> = vec![
        ("full tau2.4          ".into(), base.clone()),
        ("k_align=0            ".into(), ModelParams { k_align: 0.0, ..base.clone() }),
        ("k_attract=0          ".into(), ModelParams { k_attract: 0.0, ..base.clone() }),
        ("anchor only          ".into(), ModelParams { k_attract: 0.0, k_align: 0.0, ..base.clone() }),
        ("full tau=0           ".into(), ModelParams { tau: 0.0, ..base.clone() }),
        ("attract only tau2.4  ".into(), ModelParams { k_align: 0.0, k_anchor: 0.0, ..base.clone() }),
    ];
    let out: Vec<String> = cases.par_iter().map(|(tag, p)| run_case(tag, p)).collect();
    for r in out { println!("{r}"); }
}
