//! SVG heatmap rendering of phase diagrams.
//!
//! Continuous channels draw a color map with the conventional level marks
//! (dotted P = 0.5, dashed M = 0.5, solid O = 0.3 on the cell borders where
//! the level is crossed); the phase channel draws a categorical map with
//! bistable cells split between the two coordinated-phase colors. Cells
//! whose replicates all failed render gray with an X.

use crate::metrics::Phase;
use crate::sweep::PhaseDiagram;
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RenderChannel {
    #[value(name = "P")]
    Polarization,
    #[value(name = "M")]
    Milling,
    #[value(name = "O")]
    Opacity,
    #[value(name = "phase")]
    Phase,
}

impl RenderChannel {
    pub fn name(&self) -> &'static str {
        match self {
            RenderChannel::Polarization => "P",
            RenderChannel::Milling => "M",
            RenderChannel::Opacity => "O",
            RenderChannel::Phase => "phase",
        }
    }

    fn contour_level(&self) -> Option<f64> {
        match self {
            RenderChannel::Polarization | RenderChannel::Milling => Some(0.5),
            RenderChannel::Opacity => Some(0.3),
            RenderChannel::Phase => None,
        }
    }

    fn dash(&self) -> &'static str {
        match self {
            RenderChannel::Polarization => "2,4",
            RenderChannel::Milling => "8,4",
            _ => "none",
        }
    }
}

const CELL: f64 = 48.0;
const MARGIN_LEFT: f64 = 72.0;
const MARGIN_BOTTOM: f64 = 56.0;
const MARGIN_TOP: f64 = 34.0;
const LEGEND_W: f64 = 130.0;

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

/// Three-stop color map over [0, 1].
fn heat_color(v: f64) -> String {
    let stops = [(68.0, 1.0, 84.0), (33.0, 145.0, 140.0), (253.0, 231.0, 37.0)];
    let v = v.clamp(0.0, 1.0);
    let (lo, hi, t) = if v < 0.5 {
        (stops[0], stops[1], v * 2.0)
    } else {
        (stops[1], stops[2], (v - 0.5) * 2.0)
    };
    format!(
        "rgb({},{},{})",
        lerp(lo.0, hi.0, t).round(),
        lerp(lo.1, hi.1, t).round(),
        lerp(lo.2, hi.2, t).round()
    )
}

fn phase_color(phase: Phase) -> &'static str {
    match phase {
        Phase::Schooling => "#2166ac",
        Phase::Milling => "#1b9e77",
        Phase::Swarming => "#f4a24c",
        Phase::Bistable => "#8856a7",
    }
}

const FAILED_COLOR: &str = "#bdbdbd";

/// Render one channel of the diagram as an SVG document.
pub fn render_diagram(diagram: &PhaseDiagram, channel: RenderChannel) -> String {
    let cols = diagram.k_attract.len();
    let rows = diagram.k_align.len();
    let grid_w = cols as f64 * CELL;
    let grid_h = rows as f64 * CELL;
    let width = MARGIN_LEFT + grid_w + LEGEND_W;
    let height = MARGIN_TOP + grid_h + MARGIN_BOTTOM;

    // k_attract on x, k_align on y, origin bottom-left.
    let cell_xy = |ia: usize, ij: usize| {
        (
            MARGIN_LEFT + ia as f64 * CELL,
            MARGIN_TOP + (rows - 1 - ij) as f64 * CELL,
        )
    };
    let value_of = |ia: usize, ij: usize| -> f64 {
        let c = diagram.cell(ia, ij);
        match channel {
            RenderChannel::Polarization => c.mean_polarization,
            RenderChannel::Milling => c.mean_milling,
            RenderChannel::Opacity => c.mean_opacity,
            RenderChannel::Phase => f64::NAN,
        }
    };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{}" y="20" font-family="sans-serif" font-size="15">{} — variant {:?}, seed {}</text>"#,
        MARGIN_LEFT,
        channel.name(),
        diagram.variant,
        diagram.master_seed
    )
    .unwrap();

    // Cells.
    for ia in 0..cols {
        for ij in 0..rows {
            let (x, y) = cell_xy(ia, ij);
            let cell = diagram.cell(ia, ij);
            let all_failed = cell.modal_phase.is_none();
            if all_failed {
                writeln!(
                    svg,
                    r##"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{FAILED_COLOR}"/>
<path d="M {x} {y} l {CELL} {CELL} M {} {y} l -{CELL} {CELL}" stroke="#7a7a7a" stroke-width="2" fill="none"/>"##,
                    x + CELL
                )
                .unwrap();
                continue;
            }
            match channel {
                RenderChannel::Phase => {
                    let phase = cell.modal_phase.unwrap();
                    if phase == Phase::Bistable {
                        // Split cell: the run alternates between the two
                        // coordinated phases.
                        writeln!(
                            svg,
                            r#"<path d="M {x} {y} h {CELL} v {CELL} z" fill="{}"/>
<path d="M {x} {y} v {CELL} h {CELL} z" fill="{}"/>"#,
                            phase_color(Phase::Schooling),
                            phase_color(Phase::Milling)
                        )
                        .unwrap();
                    } else {
                        writeln!(
                            svg,
                            r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                            phase_color(phase)
                        )
                        .unwrap();
                    }
                    // Low replicate agreement gets a thin warning border.
                    if cell.agreement < 0.5 {
                        writeln!(
                            svg,
                            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="white" stroke-width="1.5" stroke-dasharray="3,3"/>"#,
                            x + 1.0,
                            y + 1.0,
                            CELL - 2.0,
                            CELL - 2.0
                        )
                        .unwrap();
                    }
                }
                _ => {
                    writeln!(
                        svg,
                        r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{}"/>"#,
                        heat_color(value_of(ia, ij))
                    )
                    .unwrap();
                }
            }
        }
    }

    // Level marks on edges between cells straddling the contour level.
    if let Some(level) = channel.contour_level() {
        let straddles = |a: f64, b: f64| {
            a.is_finite() && b.is_finite() && (a - level) * (b - level) <= 0.0 && a != b
        };
        for ia in 0..cols {
            for ij in 0..rows {
                let v = value_of(ia, ij);
                let (x, y) = cell_xy(ia, ij);
                if ia + 1 < cols && straddles(v, value_of(ia + 1, ij)) {
                    writeln!(
                        svg,
                        r#"<line x1="{0}" y1="{y}" x2="{0}" y2="{1}" stroke="white" stroke-width="3" stroke-dasharray="{2}"/>"#,
                        x + CELL,
                        y + CELL,
                        channel.dash()
                    )
                    .unwrap();
                }
                if ij + 1 < rows && straddles(v, value_of(ia, ij + 1)) {
                    writeln!(
                        svg,
                        r#"<line x1="{x}" y1="{0}" x2="{1}" y2="{0}" stroke="white" stroke-width="3" stroke-dasharray="{2}"/>"#,
                        y,
                        x + CELL,
                        channel.dash()
                    )
                    .unwrap();
                }
            }
        }
    }

    // Axes.
    for (ia, k) in diagram.k_attract.iter().enumerate() {
        let (x, _) = cell_xy(ia, 0);
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{k:.2}</text>"#,
            x + CELL / 2.0,
            MARGIN_TOP + grid_h + 16.0
        )
        .unwrap();
    }
    for (ij, k) in diagram.k_align.iter().enumerate() {
        let (_, y) = cell_xy(0, ij);
        writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{k:.2}</text>"#,
            MARGIN_LEFT - 8.0,
            y + CELL / 2.0 + 4.0
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">k_attract</text>"#,
        MARGIN_LEFT + grid_w / 2.0,
        MARGIN_TOP + grid_h + 40.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="16" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {0})">k_align</text>"#,
        MARGIN_TOP + grid_h / 2.0
    )
    .unwrap();

    // Legend.
    let lx = MARGIN_LEFT + grid_w + 18.0;
    match channel {
        RenderChannel::Phase => {
            let entries = [
                ("schooling", phase_color(Phase::Schooling)),
                ("milling", phase_color(Phase::Milling)),
                ("swarming", phase_color(Phase::Swarming)),
                ("bistable", phase_color(Phase::Bistable)),
                ("failed", FAILED_COLOR),
            ];
            for (i, (label, color)) in entries.iter().enumerate() {
                let y = MARGIN_TOP + i as f64 * 24.0;
                writeln!(
                    svg,
                    r#"<rect x="{lx}" y="{y}" width="16" height="16" fill="{color}"/>
<text x="{}" y="{}" font-family="sans-serif" font-size="12">{label}</text>"#,
                    lx + 22.0,
                    y + 12.0
                )
                .unwrap();
            }
        }
        _ => {
            let bar_h = grid_h.min(160.0);
            let steps = 32;
            for s in 0..steps {
                let v = 1.0 - s as f64 / (steps - 1) as f64;
                writeln!(
                    svg,
                    r#"<rect x="{lx}" y="{}" width="16" height="{}" fill="{}"/>"#,
                    MARGIN_TOP + s as f64 * bar_h / steps as f64,
                    bar_h / steps as f64 + 0.5,
                    heat_color(v)
                )
                .unwrap();
            }
            for (v, frac) in [(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)] {
                writeln!(
                    svg,
                    r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{v:.1}</text>"#,
                    lx + 22.0,
                    MARGIN_TOP + frac * bar_h + 4.0
                )
                .unwrap();
            }
            if let Some(level) = channel.contour_level() {
                writeln!(
                    svg,
                    r#"<text x="{lx}" y="{}" font-family="sans-serif" font-size="11">level {level}</text>"#,
                    MARGIN_TOP + bar_h + 18.0
                )
                .unwrap();
            }
        }
    }

    svg.push_str("</svg>\n");
    svg
}
