use rayon::prelude::*;
use visual_flock::metrics::classify_phase;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::replicate_seed;
use visual_flock::simulator::{run, RunOptions};

fn main() {
    let points = [("swarm", 0.25, 0.04), ("mill ", 0.07, 0.16), ("bist ", 0.20, 0.25)];
    let zones = [3.0, 4.5, 6.39];
    let mut jobs = Vec::new();
    for &z in &zones {
        for &(tag, ka, kj) in &points {
            for rep in 0..6usize {
                jobs.push((z, tag, ka, kj, rep));
            }
        }
    }
    let results: Vec<(String, String)> = jobs
        .par_iter()
        .map(|&(z, tag, ka, kj, rep)| {
            let params = ModelParams {
                k_attract: ka,
                k_align: kj,
                avoid_distance: z,
                ..Variant::Delay.apply(&ModelParams::default())
            };
            let seed = replicate_seed(7, ka, kj, rep);
            let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
            let l = classify_phase(&out.metrics, 1000.0, 0.2).unwrap();
            let col = {
                let f: std::collections::BTreeSet<u64> = out.collisions.iter().map(|e| e.step).collect();
                f.len() as f64 / out.total_frames as f64
            };
            (
                format!("z={z} {tag}"),
                format!("{}:{:.0}%", l.phase.to_string().chars().next().unwrap(), 100.0 * col),
            )
        })
        .collect();
    let mut grouped: std::collections::BTreeMap<String, Vec<String>> = Default::default();
    for (k, v) in results {
        grouped.entry(k).or_default().push(v);
    }
    for (k, v) in grouped {
        println!("{k}: {}", v.join(" "));
    }
}
