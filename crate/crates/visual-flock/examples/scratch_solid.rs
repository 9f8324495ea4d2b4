use rayon::prelude::*;
use std::collections::VecDeque;
use visual_flock::agent::AgentState;
use visual_flock::control::steering;
use visual_flock::math::{wrap_angle, Vec2};
use visual_flock::metrics::{classify_phase, compute_metrics, MetricSample};
use visual_flock::opticflow::{compute_flow, match_objects, FlowField};
use visual_flock::params::{ModelParams, Variant};
use visual_flock::rng::{replicate_seed, RngStream};
use visual_flock::vision::{build_all_panoramas, Panorama};

struct Frame { panos: Vec<Panorama>, flows: Vec<FlowField>, headings: Vec<f64> }

fn run_solid(params: &ModelParams, seed: u64) -> (Vec<MetricSample>, f64) {
    let stream = RngStream::new(seed);
    let init = visual_flock::simulator::initialize(params, &stream).unwrap();
    let mut agents = init.agents.clone();
    let n = agents.len();
    let mut rngs: Vec<_> = (0..n).map(|i| stream.agent(i)).collect();
    let l = params.delay_steps();
    let mut panoramas = build_all_panoramas(&agents, params, 0.0);
    let mut history: VecDeque<Frame> = VecDeque::new();
    for _ in 0..=l {
        history.push_back(Frame {
            panos: panoramas.clone(),
            flows: (0..n).map(|_| FlowField::empty()).collect(),
            headings: agents.iter().map(|a| a.heading()).collect(),
        });
    }
    let steps = params.n_steps();
    let mut series = Vec::with_capacity(steps + 1);
    series.push(compute_metrics(&agents, &panoramas));
    let mut contact_frames = 0u64;
    for s in 1..=steps {
        let front = history.front().unwrap();
        let mut new_agents = agents.clone();
        for i in 0..n {
            let delta = wrap_angle(front.headings[i] - agents[i].heading());
            let pano = if delta == 0.0 { front.panos[i].clone() } else { front.panos[i].rotated(delta) };
            let terms = steering(&pano, &front.flows[i], params, &mut rngs[i]);
            let dtheta = terms.deterministic(params) * params.dt
                + params.k_noise * terms.noise * params.dt.sqrt();
            let old = agents[i].heading();
            new_agents[i].position += Vec2::from_angle(old) * (params.speed * params.dt);
            new_agents[i].set_heading(old + dtheta);
        }
        // Hard-disk separation; a frame counts as contact if any pair
        // needed separating.
        let mut touched = false;
        for _ in 0..6 {
            let mut moved = false;
            for i in 0..n {
                for j in 0..i {
                    let delta = new_agents[i].position - new_agents[j].position;
                    let d = delta.norm();
                    if d < 2.0 * params.radius {
                        touched = true;
                        moved = true;
                        let push = if d > 1e-9 {
                            delta * ((2.0 * params.radius - d) / d * 0.5)
                        } else {
                            Vec2::new(2.0 * params.radius * 0.5, 0.0)
                        };
                        new_agents[i].position += push;
                        new_agents[j].position += -push;
                    }
                }
            }
            if !moved { break; }
        }
        if touched { contact_frames += 1; }
        agents = new_agents;
        let t = s as f64 * params.dt;
        let new_panos = build_all_panoramas(&agents, params, t);
        let flows: Vec<FlowField> = new_panos
            .iter()
            .zip(&panoramas)
            .map(|(c, p)| compute_flow(p, c, &match_objects(p, c, params.cost_gate), params.dt))
            .collect();
        panoramas = new_panos;
        history.push_back(Frame {
            panos: panoramas.clone(),
            flows,
            headings: agents.iter().map(|a| a.heading()).collect(),
        });
        while history.len() > l + 1 { history.pop_front(); }
        series.push(compute_metrics(&agents, &panoramas));
    }
    (series, contact_frames as f64 / (steps + 1) as f64)
}

fn main() {
    let points = [("swarm", 0.25, 0.04), ("mill ", 0.07, 0.16), ("bist ", 0.20, 0.25)];
    let mut jobs = Vec::new();
    for &(tag, ka, kj) in &points {
        for rep in 0..4usize { jobs.push((tag, ka, kj, rep)); }
    }
    let rows: Vec<String> = jobs.par_iter().map(|&(tag, ka, kj, rep)| {
        let params = ModelParams { k_attract: ka, k_align: kj, ..Variant::Delay.apply(&ModelParams::default()) };
        let seed = replicate_seed(7, ka, kj, rep);
        let (series, col) = run_solid(&params, seed);
        let l = classify_phase(&series, 1000.0, 0.2).unwrap();
        format!("{tag} r{rep}: {:9} P={:.2} M={:.2} O={:.2} col={:4.1}% sf={:.2} mf={:.2}",
            l.phase.to_string(), l.mean_polarization, l.mean_milling, l.mean_opacity,
            100.0*col, l.schooling_fraction, l.milling_fraction)
    }).collect();
    for r in rows { println!("{r}"); }
}
