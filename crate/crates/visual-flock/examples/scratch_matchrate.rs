use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::initialize;

fn main() {
    let params = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Anchor.apply(&ModelParams::default()) };
    let mut state = initialize(&params, &RngStream::new(7)).unwrap();
    let (mut frames, mut dropped, mut partial) = (0u64, 0u64, 0u64);
    for _ in 1..=5000usize {
        state.step(&params).unwrap();
        for flow in state.flows() {
            frames += 1;
            if flow.matched_count == 0 { dropped += 1; }
            else if flow.ignored_count > 0 { partial += 1; }
        }
    }
    println!("agent-frames={frames} fully-dropped={:.1}% partial={:.1}%",
        100.0 * dropped as f64 / frames as f64, 100.0 * partial as f64 / frames as f64);
}
