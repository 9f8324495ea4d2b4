use rayon::prelude::*;
use visual_flock::metrics::classify_phase;
use visual_flock::params::{DistanceWeight, ModelParams, Variant};
use visual_flock::rng::replicate_seed;
use visual_flock::simulator::{run, RunOptions};

fn main() {
    let weights = [DistanceWeight::Binary, DistanceWeight::Linear, DistanceWeight::Squared];
    let points = [("swarm", 0.25, 0.04), ("mill ", 0.07, 0.16), ("bist ", 0.20, 0.25)];
    let mut jobs = Vec::new();
    for &q in &weights {
        for &(tag, ka, kj) in &points {
            for rep in 0..2usize {
                jobs.push((q, tag, ka, kj, rep));
            }
        }
    }
    let results: Vec<String> = jobs
        .par_iter()
        .map(|&(q, tag, ka, kj, rep)| {
            let params = ModelParams {
                k_attract: ka,
                k_align: kj,
                align_weight: q,
                ..Variant::Delay.apply(&ModelParams::default())
            };
            let seed = replicate_seed(1, ka, kj, rep);
            let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
            let l = classify_phase(&out.metrics, 1000.0, 0.2).unwrap();
            let col = {
                let frames: std::collections::BTreeSet<u64> = out.collisions.iter().map(|e| e.step).collect();
                frames.len() as f64 / out.total_frames as f64
            };
            format!(
                "q={q:?} {tag} rep{rep}: {} P={:.2} M={:.2} O={:.2} col={:.0}% sf={:.2} mf={:.2}",
                l.phase, l.mean_polarization, l.mean_milling, l.mean_opacity, 100.0 * col,
                l.schooling_fraction, l.milling_fraction
            )
        })
        .collect();
    for r in results { println!("{r}"); }
}
