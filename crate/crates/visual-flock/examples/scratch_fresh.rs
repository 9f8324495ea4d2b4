use rayon::prelude::*;
use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, TAU};
use visual_flock::agent::AgentState;
use visual_flock::control::{alignment_term, anchor_term, attraction_term};
use visual_flock::math::{wrap_angle, Vec2};
use visual_flock::opticflow::{compute_flow, match_objects, FlowField};
use visual_flock::params::{ModelParams, Variant};
use visual_flock::vision::{build_all_panoramas, Panorama};

// Custom integrator: choose per-term whether it reads the delayed or the
// current visual frame.
fn run_case(tag: &str, delayed_attract: bool, delayed_align: bool, delayed_anchor: bool) -> String {
    let params = ModelParams {
        k_attract: 0.07,
        k_align: 0.16,
        k_noise: 0.0,
        ..Variant::Delay.apply(&ModelParams::default())
    };
    let mut agents: Vec<AgentState> = (0..10)
        .map(|i| {
            let ang = TAU * i as f64 / 10.0;
            let rho = if i == 0 { 8.0 + 1e-8 } else { 8.0 };
            AgentState::new(Vec2::from_angle(ang) * rho, ang + FRAC_PI_2)
        })
        .collect();
    let l = params.delay_steps();
    let mut panoramas = build_all_panoramas(&agents, &params, 0.0);
    let zero_flows: Vec<FlowField> = (0..10).map(|_| FlowField::empty()).collect();
    let mut history: VecDeque<(Vec<Panorama>, Vec<FlowField>)> = VecDeque::new();
    for _ in 0..=l {
        history.push_back((panoramas.clone(), zero_flows.clone()));
    }
    let mut ms = Vec::new();
    let steps = 20000usize;
    for n in 1..=steps {
        let (dp, df) = history.front().unwrap();
        let (cp, cf) = history.back().unwrap();
        let mut new_agents = agents.clone();
        for i in 0..10 {
            let at = attraction_term(if delayed_attract { &dp[i] } else { &cp[i] }, &params);
            let al = alignment_term(
                if delayed_align { &dp[i] } else { &cp[i] },
                if delayed_align { &df[i] } else { &cf[i] },
                &params,
            );
            let an = anchor_term(if delayed_anchor { &dp[i] } else { &cp[i] }, &params);
            let dtheta =
                (params.k_attract * at + params.k_align * al + params.k_anchor * an) * params.dt;
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
        history.push_back((new_panos, flows));
        while history.len() > l + 1 {
            history.pop_front();
        }
        if n % 2500 == 0 {
            let m = visual_flock::metrics::compute_metrics(&agents, &panoramas);
            ms.push(format!("{:.2}", m.milling));
        }
    }
    format!("{tag}: M= {}", ms.join(" "))
}

fn main() {
    let cases = [
        ("all delayed (print)     ", true, true, true),
        ("anchor fresh            ", true, true, false),
        ("align fresh             ", true, false, true),
        ("attract fresh           ", false, true, true),
        ("anchor+align fresh      ", true, false, false),
        ("all fresh (tau=0 equiv) ", false, false, false),
    ];
    let out: Vec<String> = cases
        .par_iter()
        .map(|&(tag, a, b, c)| run_case(tag, a, b, c))
        .collect();
    for r in out {
        println!("{r}");
    }
}
