use visual_flock::math::Vec2;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::initialize;

fn main() {
    for variant in [Variant::Anchor, Variant::Delay] {
        println!("=== variant {variant:?} (k=0.07/0.16)");
        let params = ModelParams {
            k_attract: 0.07,
            k_align: 0.16,
            ..variant.apply(&ModelParams::default())
        };
        let mut state = initialize(&params, &RngStream::new(7)).unwrap();
        for n in 1..=20000usize {
            state.step(&params).unwrap();
            if n % 2000 == 0 {
                let com = state.agents.iter().fold(Vec2::ZERO, |a, s| a + s.position) * (1.0 / 10.0);
                let spread = (state.agents.iter().map(|s| (s.position - com).norm_sq()).sum::<f64>() / 10.0).sqrt();
                let panos = state.panoramas();
                let mean_cov: f64 = panos.iter().map(|p| p.neighbor_coverage()).sum::<f64>() / (10.0 * std::f64::consts::TAU);
                // headings order
                let p_now = (state.agents.iter().fold(Vec2::ZERO, |a, s| a + s.heading_vector()) * 0.1).norm();
                println!("t={:5.0} spread={:7.2} O={:.3} P={:.2} com_r={:6.2}", n as f64 * 0.1, spread, mean_cov, p_now, com.norm());
            }
        }
    }
}
