//! Debug trace: JSON-lines dump of panorama edge tuples, per-object flow
//! and steering terms at the recording cadence.

use crate::params::ModelParams;
use crate::simulator::StepView;
use crate::vision::Channel;
use serde_json::json;
use std::io::Write;

/// Streams one JSON object per line. Panorama rows list `(rise, fall,
/// channel)` tuples with the anchor tuple last.
pub struct TraceWriter<W: Write> {
    out: W,
    every: usize,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W, every: usize) -> Self {
        TraceWriter {
            out,
            every: every.max(1),
        }
    }

    pub fn observe(&mut self, view: &StepView<'_>, params: &ModelParams) -> std::io::Result<()> {
        if view.step % self.every as u64 != 0 {
            return Ok(());
        }
        for (agent, pano) in view.panoramas.iter().enumerate() {
            let mut edges: Vec<serde_json::Value> = pano
                .objects
                .iter()
                .map(|o| json!([o.rise, o.fall, "neighbor"]))
                .collect();
            debug_assert_eq!(pano.anchor.channel, Channel::Anchor);
            edges.push(json!([pano.anchor.rise, pano.anchor.fall, "anchor"]));
            writeln!(
                self.out,
                "{}",
                json!({"kind": "panorama", "t": view.t, "agent": agent, "edges": edges})
            )?;

            if let Some(flow) = view.flows.get(agent) {
                for e in &flow.entries {
                    writeln!(
                        self.out,
                        "{}",
                        json!({
                            "kind": "flow",
                            "t": view.t,
                            "agent": agent,
                            "object_center": pano.objects[e.object_index].center,
                            "azimuthal": e.azimuthal,
                            "divergence": e.divergence,
                        })
                    )?;
                }
            }

            if let Some(terms) = view.terms {
                let tr = &terms[agent];
                writeln!(
                    self.out,
                    "{}",
                    json!({
                        "kind": "steering",
                        "t": view.t,
                        "agent": agent,
                        "attract": tr.attract,
                        "align": tr.align,
                        "anchor": tr.anchor,
                        "noise": tr.noise,
                        "theta_dot": tr.total,
                        "k_attract": params.k_attract,
                        "k_align": params.k_align,
                    })
                )?;
            }
        }
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
