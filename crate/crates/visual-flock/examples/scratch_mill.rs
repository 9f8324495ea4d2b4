use std::f64::consts::{FRAC_PI_2, TAU};
use visual_flock::agent::AgentState;
use visual_flock::math::Vec2;
use visual_flock::metrics::compute_metrics;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::SimState;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let rho: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(6.0);
    let ka: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(0.07);
    let kj: f64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(0.16);
    let variant = match args.get(4).map(|s| s.as_str()).unwrap_or("anchor") {
        "original" => Variant::Original,
        "avoid" => Variant::Avoid,
        "anchor" => Variant::Anchor,
        _ => Variant::Delay,
    };
    let params = ModelParams { k_attract: ka, k_align: kj, k_noise: 0.01, ..variant.apply(&ModelParams::default()) };
    let agents: Vec<AgentState> = (0..10)
        .map(|i| {
            let ang = TAU * i as f64 / 10.0;
            AgentState::new(Vec2::from_angle(ang) * rho, ang + FRAC_PI_2)
        })
        .collect();
    let mut state = SimState::from_states(agents, &params, &RngStream::new(4)).unwrap();
    println!("mill rho={rho} k=({ka},{kj}) variant={variant:?}");
    for n in 1..=8000usize {
        state.step(&params).unwrap();
        if n % 800 == 0 {
            let m = compute_metrics(&state.agents, state.panoramas());
            let com = state.agents.iter().fold(Vec2::ZERO, |a, s| a + s.position) * 0.1;
            let spread = (state.agents.iter().map(|s| (s.position - com).norm_sq()).sum::<f64>() / 10.0).sqrt();
            println!("t={:5.0} P={:.2} M={:.2} O={:.2} spread={:5.1}", n as f64 * 0.1, m.polarization, m.milling, m.opacity, spread);
        }
    }
}
