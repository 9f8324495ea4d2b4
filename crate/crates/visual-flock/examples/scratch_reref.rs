use rayon::prelude::*;
use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, TAU};
use visual_flock::agent::AgentState;
use visual_flock::control::{alignment_term, anchor_term, attraction_term};
use visual_flock::math::{wrap_angle, Vec2};
use visual_flock::opticflow::{compute_flow, match_objects, FlowField};
use visual_flock::params::{ModelParams, Variant};
use visual_flock::vision::{build_all_panoramas, Panorama, RetinalObject};

fn rotate_object(o: &RetinalObject, delta: f64) -> RetinalObject {
    RetinalObject {
        rise: wrap_angle(o.rise + delta),
        fall: wrap_angle(o.fall + delta),
        center: wrap_angle(o.center + delta),
        ..*o
    }
}

fn rotate_panorama(p: &Panorama, delta: f64) -> Panorama {
    Panorama {
        objects: p.objects.iter().map(|o| rotate_object(o, delta)).collect(),
        anchor: rotate_object(&p.anchor, delta),
        timestamp: p.timestamp,
    }
}

fn run_case(tag: &str, reref: bool, mill_init: bool, seed: u64) -> String {
    let params = ModelParams {
        k_attract: 0.07,
        k_align: 0.16,
        ..Variant::Delay.apply(&ModelParams::default())
    };
    let mut agents: Vec<AgentState> = if mill_init {
        (0..10)
            .map(|i| {
                let ang = TAU * i as f64 / 10.0;
                AgentState::new(Vec2::from_angle(ang) * 8.0, ang + FRAC_PI_2)
            })
            .collect()
    } else {
        let state = visual_flock::simulator::initialize(&params, &visual_flock::rng::RngStream::new(seed)).unwrap();
        state.agents.clone()
    };
    let mut rngs: Vec<_> = (0..10).map(|i| visual_flock::rng::RngStream::new(seed).agent(i)).collect();
    let l = params.delay_steps();
    let mut panoramas = build_all_panoramas(&agents, &params, 0.0);
    let zero_flows: Vec<FlowField> = (0..10).map(|_| FlowField::empty()).collect();
    let mut history: VecDeque<(Vec<Panorama>, Vec<FlowField>, Vec<f64>)> = VecDeque::new();
    let headings: Vec<f64> = agents.iter().map(|a| a.heading()).collect();
    for _ in 0..=l {
        history.push_back((panoramas.clone(), zero_flows.clone(), headings.clone()));
    }
    let mut ms = Vec::new();
    let steps = 50000usize;
    for n in 1..=steps {
        let (dp, df, dh) = history.front().unwrap();
        let mut new_agents = agents.clone();
        for i in 0..10 {
            let delta = if reref { wrap_angle(dh[i] - agents[i].heading()) } else { 0.0 };
            let pano = if delta != 0.0 { rotate_panorama(&dp[i], delta) } else { dp[i].clone() };
            let at = attraction_term(&pano, &params);
            let al = alignment_term(&pano, &df[i], &params);
            let an = anchor_term(&pano, &params);
            let noise: f64 = rand_distr::Distribution::sample(&rand_distr::StandardNormal, &mut rngs[i]);
            let dtheta = (params.k_attract * at + params.k_align * al + params.k_anchor * an)
                * params.dt
                + params.k_noise * noise * params.dt.sqrt();
            let old = agents[i].heading();
            new_agents[i].position += Vec2::from_angle(old) * (params.speed * params.dt);
            new_agents[i].set_heading(wrap_angle(old + dtheta));
        }
        agents = new_agents;
        let t = n as f64 * params.dt;
        let new_panos = build_all_panoramas(&agents, &params, t);
        let flows: Vec<FlowField> = new_panos
            .iter()
            .zip(&panoramas)
            .map(|(c, p)| compute_flow(p, c, &match_objects(p, c, params.cost_gate), params.dt))
            .collect();
        panoramas = new_panos.clone();
        history.push_back((new_panos, flows, agents.iter().map(|a| a.heading()).collect()));
        while history.len() > l + 1 {
            history.pop_front();
        }
        if n % 6250 == 0 {
            let m = visual_flock::metrics::compute_metrics(&agents, &panoramas);
            ms.push(format!("P{:.2}/M{:.2}", m.polarization, m.milling));
        }
    }
    format!("{tag}: {}", ms.join(" "))
}

fn main() {
    let cases: Vec<(String, bool, bool, u64)> = vec![
        ("reref mill-init       ".into(), true, true, 4),
        ("reref random-init s1  ".into(), true, false, 1),
        ("reref random-init s2  ".into(), true, false, 2),
        ("plain random-init s1  ".into(), false, false, 1),
    ];
    let out: Vec<String> = cases
        .par_iter()
        .map(|(tag, r, m, s)| run_case(tag, *r, *m, *s))
        .collect();
    for r in out {
        println!("{r}");
    }
}
