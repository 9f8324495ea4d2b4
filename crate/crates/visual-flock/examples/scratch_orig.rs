use rayon::prelude::*;
use visual_flock::math::Vec2;
use visual_flock::params::{DistanceWeight, ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::initialize;

fn run_case(tag: &str, params: &ModelParams, seed: u64) -> String {
    let mut state = initialize(params, &RngStream::new(seed)).unwrap();
    let mut lines = Vec::new();
    let steps = 50000usize;
    for n in 1..=steps {
        state.step(params).unwrap();
        if n % 6250 == 0 {
            let m = visual_flock::metrics::compute_metrics(&state.agents, state.panoramas());
            let com = state.agents.iter().fold(Vec2::ZERO, |a, s| a + s.position) * 0.1;
            let spread = (state.agents.iter().map(|s| (s.position - com).norm_sq()).sum::<f64>() / 10.0).sqrt();
            lines.push(format!("sp{:.0}/P{:.2}/M{:.2}", spread, m.polarization, m.milling));
        }
    }
    format!("{tag}: {}", lines.join(" "))
}

fn main() {
    let mk = |w: DistanceWeight, ka: f64, kj: f64| ModelParams {
        k_attract: ka,
        k_align: kj,
        attract_weight: w,
        ..Variant::Original.apply(&ModelParams::default())
    };
    let cases: Vec<(String, ModelParams, u64)> = vec![
        ("orig Bin (.07,.30)".into(), mk(DistanceWeight::Binary, 0.07, 0.30), 1),
        ("orig Bin (.22,.22)".into(), mk(DistanceWeight::Binary, 0.22, 0.22), 1),
        ("orig Lin (.07,.30)".into(), mk(DistanceWeight::Linear, 0.07, 0.30), 1),
        ("orig Lin (.22,.22)".into(), mk(DistanceWeight::Linear, 0.22, 0.22), 1),
        ("orig Lin (.07,.07)".into(), mk(DistanceWeight::Linear, 0.07, 0.07), 1),
        ("orig Sq  (.07,.30)".into(), mk(DistanceWeight::Squared, 0.07, 0.30), 1),
    ];
    let out: Vec<String> = cases.par_iter().map(|(t, p, s)| run_case(t, p, *s)).collect();
    for r in out { println!("{r}"); }
}
