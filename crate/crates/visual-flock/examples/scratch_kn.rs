use rayon::prelude::*;
use visual_flock::metrics::classify_phase;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::replicate_seed;
use visual_flock::simulator::{run, RunOptions};

fn main() {
    let points = [("swarm", 0.25, 0.04), ("mill ", 0.07, 0.16), ("bist ", 0.20, 0.25)];
    let mut jobs = Vec::new();
    for &kn in &[0.02, 0.04] {
        for &(tag, ka, kj) in &points {
            for rep in 0..6usize { jobs.push((kn, tag, ka, kj, rep)); }
        }
    }
    let results: Vec<(String, String)> = jobs
        .par_iter()
        .map(|&(kn, tag, ka, kj, rep)| {
            let params = ModelParams {
                k_attract: ka, k_align: kj, k_noise: kn,
                ..Variant::Delay.apply(&ModelParams::default())
            };
            let seed = replicate_seed(7, ka, kj, rep);
            let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
            let l = classify_phase(&out.metrics, 1000.0, 0.2).unwrap();
            let col = {
                let f: std::collections::BTreeSet<u64> = out.collisions.iter().map(|e| e.step).collect();
                f.len() as f64 / out.total_frames as f64
            };
            (format!("kn={kn} {tag}"),
             format!("{}{:.0}/{:.0}/{:.0}", l.phase.to_string().chars().next().unwrap(),
                100.0*col, 100.0*l.schooling_fraction, 100.0*l.milling_fraction))
        })
        .collect();
    let mut grouped: std::collections::BTreeMap<String, Vec<String>> = Default::default();
    for (k, v) in results { grouped.entry(k).or_default().push(v); }
    println!("label-initial col%/schoolocc%/millocc%");
    for (k, v) in grouped { println!("{k}: {}", v.join(" ")); }
}
