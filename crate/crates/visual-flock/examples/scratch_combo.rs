use rayon::prelude::*;
use visual_flock::metrics::classify_phase;
use visual_flock::params::{DistanceWeight, ModelParams, Variant};
use visual_flock::rng::replicate_seed;
use visual_flock::simulator::{run, RunOptions};

fn main() {
    let mut jobs: Vec<(Variant, DistanceWeight, f64, f64, usize)> = Vec::new();
    for q in [DistanceWeight::Linear, DistanceWeight::Squared] {
        for (ka, kj) in [(0.07, 0.22), (0.22, 0.22), (0.25, 0.04), (0.07, 0.16)] {
            for rep in 0..2 {
                jobs.push((Variant::Original, q, ka, kj, rep));
                jobs.push((Variant::Delay, q, ka, kj, rep));
            }
        }
    }
    let results: Vec<String> = jobs
        .par_iter()
        .map(|&(v, q, ka, kj, rep)| {
            let params = ModelParams {
                k_attract: ka,
                k_align: kj,
                align_weight: q,
                ..v.apply(&ModelParams::default())
            };
            let seed = replicate_seed(7, ka, kj, rep);
            let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
            let l = classify_phase(&out.metrics, 1000.0, 0.2).unwrap();
            format!(
                "{v:?} q={q:?} ({ka},{kj}) r{rep}: {} P={:.2} M={:.2} O={:.2} sf={:.2} mf={:.2}",
                l.phase, l.mean_polarization, l.mean_milling, l.mean_opacity,
                l.schooling_fraction, l.milling_fraction
            )
        })
        .collect();
    for r in results { println!("{r}"); }
}
