//! Replicated parameter sweeps over the attraction-alignment gain plane.
//!
//! Every (cell, replicate) job runs an independent simulation with a seed
//! derived from the master seed and the cell's parameter values, so results
//! are reproducible regardless of worker count or scheduling, and grids of
//! different shapes share results for identical cells.

use crate::metrics::Phase;
use crate::params::{ModelParams, Variant};
use crate::rng::replicate_seed;
use crate::simulator::{run, RunOptions};
use crate::{output, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1);
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

/// The sweep definition: gain grids, replicate count, model variant and the
/// base parameters every cell starts from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepGrid {
    pub k_attract: Vec<f64>,
    pub k_align: Vec<f64>,
    pub replicates: usize,
    pub variant: Variant,
    pub base: ModelParams,
}

impl SweepGrid {
    /// The paper-scale default: `[0, 0.3] x [0, 0.3]`.
    pub fn with_resolution(n: usize, replicates: usize, variant: Variant, base: ModelParams) -> Self {
        SweepGrid {
            k_attract: linspace(0.0, 0.3, n),
            k_align: linspace(0.0, 0.3, n),
            replicates,
            variant,
            base,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_attract.is_empty() || self.k_align.is_empty() {
            return Err(crate::Error::InvalidParams("empty sweep grid".into()));
        }
        if self.replicates == 0 {
            return Err(crate::Error::InvalidParams("replicates must be >= 1".into()));
        }
        self.base.validate()
    }
}

/// Windowed outcome of one replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicateSummary {
    pub phase: Phase,
    pub mean_polarization: f64,
    pub mean_milling: f64,
    pub mean_opacity: f64,
    pub collision_fraction: f64,
}

/// One replicate of one cell; a failed run keeps its error text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub replicate: usize,
    pub seed: u64,
    pub summary: Option<ReplicateSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Aggregated record of one `(k_attract, k_align)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub k_attract: f64,
    pub k_align: f64,
    pub replicates: Vec<ReplicateRecord>,
    /// Means over successful replicates (NaN if all failed).
    pub mean_polarization: f64,
    pub mean_milling: f64,
    pub mean_opacity: f64,
    /// Most common phase among successful replicates.
    pub modal_phase: Option<Phase>,
    /// Fraction of successful replicates agreeing with the modal phase.
    pub agreement: f64,
    pub failed: usize,
}

impl CellRecord {
    fn aggregate(k_attract: f64, k_align: f64, replicates: Vec<ReplicateRecord>) -> Self {
        let ok: Vec<&ReplicateSummary> =
            replicates.iter().filter_map(|r| r.summary.as_ref()).collect();
        let failed = replicates.len() - ok.len();
        let n = ok.len() as f64;
        let (mut p, mut m, mut o) = (f64::NAN, f64::NAN, f64::NAN);
        let mut modal_phase = None;
        let mut agreement = 0.0;
        if !ok.is_empty() {
            p = ok.iter().map(|s| s.mean_polarization).sum::<f64>() / n;
            m = ok.iter().map(|s| s.mean_milling).sum::<f64>() / n;
            o = ok.iter().map(|s| s.mean_opacity).sum::<f64>() / n;
            // Modal label; ties break in fixed phase order for determinism.
            let order = [Phase::Schooling, Phase::Milling, Phase::Swarming, Phase::Bistable];
            let (best, count) = order
                .iter()
                .map(|ph| (*ph, ok.iter().filter(|s| s.phase == *ph).count()))
                .max_by_key(|&(ph, c)| (c, std::cmp::Reverse(order.iter().position(|p| *p == ph))))
                .unwrap();
            modal_phase = Some(best);
            agreement = count as f64 / n;
        }
        CellRecord {
            k_attract,
            k_align,
            replicates,
            mean_polarization: p,
            mean_milling: m,
            mean_opacity: o,
            modal_phase,
            agreement,
            failed,
        }
    }
}

/// The aggregated sweep result: one record per grid cell, row-major with
/// `k_attract` as the outer axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub variant: Variant,
    pub master_seed: u64,
    pub k_attract: Vec<f64>,
    pub k_align: Vec<f64>,
    pub replicates: usize,
    pub cells: Vec<CellRecord>,
}

impl PhaseDiagram {
    pub fn cell(&self, ia: usize, ij: usize) -> &CellRecord {
        &self.cells[ia * self.k_align.len() + ij]
    }

    pub fn failed_replicates(&self) -> usize {
        self.cells.iter().map(|c| c.failed).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    /// Rebuild a diagram from per-replicate sweep rows (for rendering from
    /// a CSV; variant and master seed are cosmetic here).
    pub fn from_rows(
        rows: &[crate::output::SweepCsvRow],
        variant: Variant,
        master_seed: u64,
    ) -> Result<PhaseDiagram> {
        let mut k_attract: Vec<f64> = rows.iter().map(|r| r.k_attract).collect();
        k_attract.sort_by(|a, b| a.partial_cmp(b).unwrap());
        k_attract.dedup();
        let mut k_align: Vec<f64> = rows.iter().map(|r| r.k_align).collect();
        k_align.sort_by(|a, b| a.partial_cmp(b).unwrap());
        k_align.dedup();
        if k_attract.is_empty() {
            return Err(crate::Error::InvalidParams("no sweep rows".into()));
        }

        let mut replicates = 0usize;
        let mut cells = Vec::with_capacity(k_attract.len() * k_align.len());
        for &ka in &k_attract {
            for &kj in &k_align {
                let recs: Vec<ReplicateRecord> = rows
                    .iter()
                    .filter(|r| r.k_attract == ka && r.k_align == kj)
                    .map(|r| ReplicateRecord {
                        replicate: r.replicate,
                        seed: 0,
                        summary: r.phase.map(|phase| ReplicateSummary {
                            phase,
                            mean_polarization: r.mean_polarization,
                            mean_milling: r.mean_milling,
                            mean_opacity: r.mean_opacity,
                            collision_fraction: r.collision_fraction,
                        }),
                        error: r.phase.is_none().then(|| "failed".to_string()),
                    })
                    .collect();
                if recs.is_empty() {
                    return Err(crate::Error::InvalidParams(format!(
                        "sweep rows missing cell ({ka}, {kj})"
                    )));
                }
                replicates = replicates.max(recs.len());
                cells.push(CellRecord::aggregate(ka, kj, recs));
            }
        }
        Ok(PhaseDiagram {
            variant,
            master_seed,
            k_attract,
            k_align,
            replicates,
            cells,
        })
    }
}

fn run_replicate(
    grid: &SweepGrid,
    master_seed: u64,
    k_attract: f64,
    k_align: f64,
    replicate: usize,
) -> ReplicateRecord {
    let params = ModelParams {
        k_attract,
        k_align,
        ..grid.variant.apply(&grid.base)
    };
    let seed = replicate_seed(master_seed, k_attract, k_align, replicate);
    let outcome = run(&params, seed, &RunOptions { record_every: 0 })
        .and_then(|out| output::summarize_run(&params, &out));
    match outcome {
        Ok(summary) => ReplicateRecord {
            replicate,
            seed,
            summary: Some(ReplicateSummary {
                phase: summary.phase.phase,
                mean_polarization: summary.phase.mean_polarization,
                mean_milling: summary.phase.mean_milling,
                mean_opacity: summary.phase.mean_opacity,
                collision_fraction: summary.collisions.contact_fraction(),
            }),
            error: None,
        },
        Err(e) => ReplicateRecord {
            replicate,
            seed,
            summary: None,
            error: Some(e.to_string()),
        },
    }
}

/// Run every (cell, replicate) job on a bounded worker pool and reduce in
/// grid order. `workers = 0` uses the default pool size.
pub fn run_sweep(grid: &SweepGrid, master_seed: u64, workers: usize) -> Result<PhaseDiagram> {
    grid.validate()?;

    let jobs: Vec<(usize, usize, usize)> = (0..grid.k_attract.len())
        .flat_map(|ia| {
            (0..grid.k_align.len())
                .flat_map(move |ij| (0..grid.replicates).map(move |rep| (ia, ij, rep)))
        })
        .collect();

    let execute = || {
        jobs.par_iter()
            .map(|&(ia, ij, rep)| {
                run_replicate(grid, master_seed, grid.k_attract[ia], grid.k_align[ij], rep)
            })
            .collect::<Vec<_>>()
    };
    let results = if workers == 0 {
        execute()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| crate::Error::InvalidParams(format!("worker pool: {e}")))?;
        pool.install(execute)
    };

    let mut cells = Vec::with_capacity(grid.k_attract.len() * grid.k_align.len());
    let mut iter = results.into_iter();
    for &ka in &grid.k_attract {
        for &kj in &grid.k_align {
            let reps: Vec<ReplicateRecord> = iter.by_ref().take(grid.replicates).collect();
            cells.push(CellRecord::aggregate(ka, kj, reps));
        }
    }

    Ok(PhaseDiagram {
        variant: grid.variant,
        master_seed,
        k_attract: grid.k_attract.clone(),
        k_align: grid.k_align.clone(),
        replicates: grid.replicates,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::classify_phase;
    use crate::output::sweep_csv;

    fn tiny_base() -> ModelParams {
        ModelParams {
            t_end: 30.0,
            metrics_window: 20.0,
            ..ModelParams::default()
        }
    }

    #[test]
    fn degenerate_sweep_equals_single_run() {
        let grid = SweepGrid {
            k_attract: vec![0.07],
            k_align: vec![0.16],
            replicates: 1,
            variant: Variant::Delay,
            base: tiny_base(),
        };
        let diagram = run_sweep(&grid, 11, 1).unwrap();
        assert_eq!(diagram.cells.len(), 1);
        let rep = &diagram.cells[0].replicates[0];
        let summary = rep.summary.as_ref().unwrap();

        // Reproduce the same replicate by hand.
        let params = ModelParams {
            k_attract: 0.07,
            k_align: 0.16,
            ..Variant::Delay.apply(&tiny_base())
        };
        let seed = replicate_seed(11, 0.07, 0.16, 0);
        assert_eq!(rep.seed, seed);
        let out = run(&params, seed, &RunOptions { record_every: 0 }).unwrap();
        let label =
            classify_phase(&out.metrics, params.metrics_window, params.bistable_occupancy).unwrap();
        assert_eq!(summary.phase, label.phase);
        assert_eq!(summary.mean_polarization, label.mean_polarization);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let grid = SweepGrid {
            k_attract: linspace(0.0, 0.3, 2),
            k_align: linspace(0.0, 0.3, 2),
            replicates: 2,
            variant: Variant::Anchor,
            base: tiny_base(),
        };
        let one = run_sweep(&grid, 5, 1).unwrap();
        let four = run_sweep(&grid, 5, 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(sweep_csv(&one), sweep_csv(&four));
    }

    #[test]
    fn grids_of_different_shapes_share_cell_results() {
        let coarse = SweepGrid {
            k_attract: vec![0.0, 0.3],
            k_align: vec![0.1],
            replicates: 2,
            variant: Variant::Delay,
            base: tiny_base(),
        };
        let fine = SweepGrid {
            k_attract: vec![0.0, 0.15, 0.3],
            k_align: vec![0.1],
            replicates: 2,
            variant: Variant::Delay,
            base: tiny_base(),
        };
        let a = run_sweep(&coarse, 9, 2).unwrap();
        let b = run_sweep(&fine, 9, 2).unwrap();
        assert_eq!(a.cell(0, 0).replicates, b.cell(0, 0).replicates);
        assert_eq!(a.cell(1, 0).replicates, b.cell(2, 0).replicates);
    }

    #[test]
    fn failed_cells_do_not_abort_the_sweep() {
        // A window longer than the run makes classification fail.
        let base = ModelParams {
            t_end: 5.0,
            metrics_window: 50.0,
            ..ModelParams::default()
        };
        let grid = SweepGrid {
            k_attract: vec![0.1],
            k_align: vec![0.1],
            replicates: 2,
            variant: Variant::Delay,
            base,
        };
        let diagram = run_sweep(&grid, 1, 1).unwrap();
        assert_eq!(diagram.failed_replicates(), 2);
        let cell = &diagram.cells[0];
        assert!(cell.modal_phase.is_none());
        assert!(cell.mean_polarization.is_nan());
        assert!(sweep_csv(&diagram).contains("failed"));
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 0.3, 7);
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[6], 0.3);
        assert!((v[1] - 0.05).abs() < 1e-12);
    }
}
