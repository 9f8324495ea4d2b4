use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::{replicate_seed, RngStream};
use visual_flock::simulator::initialize;

fn main() {
    let params = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Delay.apply(&ModelParams::default()) };
    let mut state = initialize(&params, &RngStream::new(replicate_seed(7, 0.07, 0.16, 1))).unwrap();
    let mut col_in_bin = 0u64;
    let mut dropped = 0u64;
    let mut frames = 0u64;
    let mut m_sum = 0.0;
    let bin = 2500usize;
    println!("per-250tu bins: collision% / dropped-matching% / mean M");
    for n in 1..=50000usize {
        let before = state.collision_log.len();
        state.step(&params).unwrap();
        if state.collision_log.len() > before { col_in_bin += 1; }
        for f in state.flows() {
            frames += 1;
            if f.matched_count == 0 { dropped += 1; }
        }
        m_sum += visual_flock::metrics::compute_metrics(&state.agents, state.panoramas()).milling;
        if n % bin == 0 {
            println!(
                "t={:5.0}: col={:4.1}% dropped={:4.1}% M={:.2}",
                n as f64 * 0.1,
                100.0 * col_in_bin as f64 / bin as f64,
                100.0 * dropped as f64 / frames as f64,
                m_sum / bin as f64
            );
            col_in_bin = 0; dropped = 0; frames = 0; m_sum = 0.0;
        }
    }
}
