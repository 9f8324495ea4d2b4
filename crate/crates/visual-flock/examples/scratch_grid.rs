use rayon::prelude::*;
use visual_flock::metrics::classify_phase;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::replicate_seed;
use visual_flock::simulator::{run, RunOptions};
use visual_flock::sweep::linspace;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let variant = match args.get(1).map(|s| s.as_str()).unwrap_or("anchor") {
        "original" => Variant::Original,
        "avoid" => Variant::Avoid,
        "anchor" => Variant::Anchor,
        _ => Variant::Delay,
    };
    let t_end: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(2000.0);
    let reps: usize = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(3);
    let ks = linspace(0.0, 0.3, 5);
    println!("variant {variant:?} t_end={t_end} reps={reps}");
    let jobs: Vec<(f64, f64)> = ks.iter().flat_map(|&a| ks.iter().map(move |&j| (a, j))).collect();
    let results: Vec<String> = jobs
        .par_iter()
        .map(|&(ka, kj)| {
            let mut labels = Vec::new();
            for rep in 0..reps {
                let params = ModelParams {
                    k_attract: ka,
                    k_align: kj, attract_weight: visual_flock::params::DistanceWeight::Linear,
                    t_end,
                    ..variant.apply(&ModelParams::default())
                };
                let seed = replicate_seed(99, ka, kj, rep);
                let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
                let l = classify_phase(&out.metrics, 1000.0_f64.min(t_end / 2.0), 0.2).unwrap();
                labels.push(format!("{}", l.phase).chars().next().unwrap().to_uppercase().to_string());
            }
            format!("{}", labels.join(""))
        })
        .collect();
    print!("k_al\\k_at ");
    for ka in &ks { print!("{ka:>8.2}"); }
    println!();
    for (j, kj) in ks.iter().enumerate().rev() {
        print!("{kj:>8.2}: ");
        for i in 0..ks.len() {
            print!("{:>8}", results[i * ks.len() + j]);
        }
        println!();
    }
}
