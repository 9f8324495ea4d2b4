use std::f64::consts::{FRAC_PI_2, TAU};
use visual_flock::agent::AgentState;
use visual_flock::math::Vec2;
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::RngStream;
use visual_flock::simulator::{initialize, SimState};

fn rms_report(tag: &str, mut state: SimState, params: &ModelParams, steps: usize) {
    let (mut sa, mut sl, mut sc, mut n) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..steps {
        let terms = state.step(params).unwrap();
        for t in &terms {
            sa += (params.k_attract * t.attract).powi(2);
            sl += (params.k_align * t.align).powi(2);
            sc += (params.k_anchor * t.anchor).powi(2);
            n += 1.0;
        }
    }
    println!(
        "{tag}: rms k.attract={:.4} k.align={:.4} k.anchor={:.4}",
        (sa / n).sqrt(), (sl / n).sqrt(), (sc / n).sqrt()
    );
}

fn main() {
    let params = ModelParams { k_attract: 0.07, k_align: 0.16, ..Variant::Anchor.apply(&ModelParams::default()) };
    rms_report("random-init swarm", initialize(&params, &RngStream::new(7)).unwrap(), &params, 5000);

    let agents: Vec<AgentState> = (0..10)
        .map(|i| { let ang = TAU * i as f64 / 10.0; AgentState::new(Vec2::from_angle(ang) * 8.0, ang + FRAC_PI_2) })
        .collect();
    rms_report("formed mill     ", SimState::from_states(agents.clone(), &params, &RngStream::new(4)).unwrap(), &params, 5000);

    let params0 = ModelParams { k_align: 0.0, ..params.clone() };
    let mut state = SimState::from_states(agents, &params0, &RngStream::new(4)).unwrap();
    for _ in 0..8000usize { state.step(&params0).unwrap(); }
    let m = visual_flock::metrics::compute_metrics(&state.agents, state.panoramas());
    println!("mill with k_align=0 after t=800: P={:.2} M={:.2} O={:.2}", m.polarization, m.milling, m.opacity);
}
