use visual_flock::params::{ModelParams, Variant};
use visual_flock::sweep::{run_sweep, SweepGrid};

fn main() {
    for variant in [Variant::Original, Variant::Anchor, Variant::Delay] {
        let grid = SweepGrid::with_resolution(7, 5, variant, ModelParams::default());
        let diagram = run_sweep(&grid, 20250810, 0).unwrap();
        println!("=== variant {variant:?} (modal phase, agreement)");
        for (j, kj) in diagram.k_align.iter().enumerate().rev() {
            print!("k_al={kj:4.2}: ");
            for (i, _) in diagram.k_attract.iter().enumerate() {
                let c = diagram.cell(i, j);
                let label = c.modal_phase.map(|p| p.to_string().chars().next().unwrap().to_uppercase().to_string()).unwrap_or("?".into());
                print!("{label}{:.0} ", 10.0 * c.agreement - 0.01);
            }
            println!();
        }
        let mut schooling_cells = 0;
        let mut milling_cells = 0;
        let mut swarm_cells = 0;
        let mut bistable_cells = 0;
        for c in &diagram.cells {
            match c.modal_phase {
                Some(visual_flock::metrics::Phase::Schooling) => schooling_cells += 1,
                Some(visual_flock::metrics::Phase::Milling) => milling_cells += 1,
                Some(visual_flock::metrics::Phase::Swarming) => swarm_cells += 1,
                Some(visual_flock::metrics::Phase::Bistable) => bistable_cells += 1,
                None => {}
            }
        }
        println!("counts: S={schooling_cells} M={milling_cells} Sw={swarm_cells} B={bistable_cells}");
    }
}
