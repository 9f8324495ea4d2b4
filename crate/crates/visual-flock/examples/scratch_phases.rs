use std::time::Instant;
use visual_flock::metrics::classify_phase;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::replicate_seed;
use visual_flock::simulator::{run, RunOptions};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n_seeds: u64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(3);
    let points = [
        ("swarming", 0.25, 0.04),
        ("milling", 0.07, 0.16),
        ("bistable", 0.20, 0.25),
    ];
    for (expect, ka, kj) in points {
        print!("({ka:4.2},{kj:4.2}) expect {expect:9}:");
        for seed_idx in 0..n_seeds {
            let params = ModelParams {
                k_attract: ka,
                k_align: kj,
                ..Variant::Delay.apply(&ModelParams::default())
            };
            let seed = replicate_seed(20250810, ka, kj, seed_idx as usize);
            let t0 = Instant::now();
            let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
            let label = classify_phase(&out.metrics, params.metrics_window, params.bistable_occupancy).unwrap();
            let frac = {
                let frames: std::collections::BTreeSet<u64> = out.collisions.iter().map(|e| e.step).collect();
                frames.len() as f64 / out.total_frames as f64
            };
            print!(
                " [{} P={:.2} M={:.2} O={:.2} col={:.0}% sf={:.2} mf={:.2} {:.1}s]",
                label.phase, label.mean_polarization, label.mean_milling, label.mean_opacity,
                100.0 * frac, label.schooling_fraction, label.milling_fraction,
                t0.elapsed().as_secs_f64()
            );
        }
        println!();
    }
}
