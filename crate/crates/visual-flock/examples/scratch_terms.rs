use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::initialize;

fn main() {
    let params = ModelParams {
        k_attract: 0.07,
        k_align: 0.16,
        ..Variant::Delay.apply(&ModelParams::default())
    };
    let mut state = initialize(&params, &RngStream::new(7)).unwrap();
    for n in 1..=60 {
        let terms = state.step(&params).unwrap();
        if n % 10 == 0 {
            let t0 = &terms[0];
            let nobj = state.panoramas()[0].objects.len();
            println!(
                "step {n}: agent0 objects={nobj} attract={:+9.3} align={:+9.4} anchor={:+9.3} total={:+8.4}",
                t0.attract, t0.align, t0.anchor, t0.total
            );
            if n == 60 {
                for (i, t) in terms.iter().enumerate() {
                    println!("  agent{i}: at={:+8.3} al={:+8.4} an={:+8.3} tot={:+8.4}", t.attract, t.align, t.anchor, t.total);
                }
            }
        }
    }
}
