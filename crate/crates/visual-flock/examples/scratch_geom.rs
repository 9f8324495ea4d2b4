use rayon::prelude::*;
use visual_flock::math::Vec2;
use visual_flock::metrics::classify_phase;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::replicate_seed;
use visual_flock::simulator::{initialize, run, RunOptions};
use visual_flock::rng::RngStream;

fn main() {
    // 1) Anchor variant (tau=0) at the milling point: label + collision %.
    let jobs: Vec<usize> = (0..4).collect();
    let rows: Vec<String> = jobs.par_iter().map(|&rep| {
        let params = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Anchor.apply(&ModelParams::default()) };
        let seed = replicate_seed(7, 0.07, 0.16, rep);
        let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
        let l = classify_phase(&out.metrics, 1000.0, 0.2).unwrap();
        let col = {
            let f: std::collections::BTreeSet<u64> = out.collisions.iter().map(|e| e.step).collect();
            f.len() as f64 / out.total_frames as f64
        };
        format!("anchor tau0 r{rep}: {} M={:.2} col={:.1}%", l.phase, l.mean_milling, 100.0*col)
    }).collect();
    for r in rows { println!("{r}"); }

    // 2) Geometry of a delayed mill: ring radii and min pairwise distance.
    let params = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Delay.apply(&ModelParams::default()) };
    let mut state = initialize(&params, &RngStream::new(replicate_seed(7, 0.07, 0.16, 1))).unwrap();
    for n in 1..=50000usize {
        state.step(&params).unwrap();
        if n >= 35000 && n % 2500 == 0 {
            let com = state.agents.iter().fold(Vec2::ZERO, |a, s| a + s.position) * 0.1;
            let mut radii: Vec<f64> = state.agents.iter().map(|s| (s.position - com).norm()).collect();
            radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut min_pair = f64::INFINITY;
            for i in 0..10 { for j in 0..i {
                min_pair = min_pair.min(state.agents[i].position.distance(state.agents[j].position));
            }}
            println!("t={:5.0} radii[min/med/max]=({:.1},{:.1},{:.1}) min_pair={:.2}",
                n as f64 * 0.1, radii[0], radii[5], radii[9], min_pair);
        }
    }
}
