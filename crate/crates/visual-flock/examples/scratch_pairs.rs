use std::collections::HashMap;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::{replicate_seed, RngStream};
use visual_flock::simulator::initialize;

fn main() {
    let params = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Delay.apply(&ModelParams::default()) };
    let mut state = initialize(&params, &RngStream::new(replicate_seed(7, 0.07, 0.16, 1))).unwrap();
    // Contact-run lengths per pair in the milling window t in [2500, 5000].
    let mut active: HashMap<(usize, usize), u64> = HashMap::new();
    let mut durations: Vec<f64> = Vec::new();
    for n in 1..=50000usize {
        state.step(&params).unwrap();
        if n < 25000 { continue; }
        let mut now: Vec<(usize, usize)> = Vec::new();
        for i in 0..10 { for j in 0..i {
            if state.agents[i].position.distance(state.agents[j].position) < 2.0 {
                now.push((j, i));
            }
        }}
        let keys: Vec<(usize, usize)> = active.keys().cloned().collect();
        for k in keys {
            if !now.contains(&k) {
                durations.push(active.remove(&k).unwrap() as f64 * 0.1);
            }
        }
        for k in now { *active.entry(k).or_insert(0) += 1; }
    }
    for (_, v) in active { durations.push(v as f64 * 0.1); }
    durations.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let total: f64 = durations.iter().sum();
    println!("contact episodes: {}  total contact pair-time: {:.0} tu (window 2500 tu)", durations.len(), total);
    println!("longest episodes: {:?}", &durations[..durations.len().min(12)]);
    let long: f64 = durations.iter().filter(|&&d| d > 10.0).sum();
    println!("fraction of pair-contact time in episodes >10tu: {:.2}", long / total);
}
