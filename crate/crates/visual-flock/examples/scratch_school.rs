use visual_flock::agent::AgentState;
use visual_flock::math::Vec2;
use visual_flock::metrics::compute_metrics;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::SimState;
use rand::{Rng, SeedableRng};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let ka: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(0.07);
    let kj: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(0.3);
    let params = ModelParams { k_attract: ka, k_align: kj, ..Variant::Original.apply(&ModelParams::default()) };
    // Loose aligned cluster, spacing ~4a.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
    let agents: Vec<AgentState> = (0..10)
        .map(|i| {
            let x = (i % 5) as f64 * 4.0 + rng.random_range(-0.8..0.8);
            let y = (i / 5) as f64 * 4.0 + rng.random_range(-0.8..0.8);
            AgentState::new(Vec2::new(x, y), 0.0 + rng.random_range(-0.05..0.05))
        })
        .collect();
    let mut state = SimState::from_states(agents, &params, &RngStream::new(4)).unwrap();
    println!("school k=({ka},{kj}) original");
    for n in 1..=6000usize {
        state.step(&params).unwrap();
        if n % 600 == 0 {
            let m = compute_metrics(&state.agents, state.panoramas());
            println!("t={:5.0} P={:.2} M={:.2} O={:.2}", n as f64 * 0.1, m.polarization, m.milling, m.opacity);
        }
    }
}
