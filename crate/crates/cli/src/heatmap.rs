//! Static SVG rendering of atlas count matrices, one panel per κ.

use poolcore::fmt::g4;
use poolcore::simulation::Atlas;

const CELL: f64 = 28.0;
const MARGIN: f64 = 56.0;
const GAP: f64 = 36.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Fill colour from white (0) to dark blue (`max`).
fn shade(count: u32, max: u32) -> String {
    let t = if max == 0 { 0.0 } else { count as f64 / max as f64 };
    let mix = |hi: f64, lo: f64| (hi + (lo - hi) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(255.0, 8.0), mix(255.0, 48.0), mix(255.0, 107.0))
}

/// Panels side by side; η increases upwards and ln D to the right.
pub fn render(atlas: &Atlas) -> String {
    let cfg = &atlas.config;
    let (ne, nd) = (cfg.eta.len(), cfg.ln_divergence.len());
    let max = cfg.ln_w.len() as u32;
    let panel_w = nd as f64 * CELL;
    let panel_h = ne as f64 * CELL;
    let width = MARGIN + cfg.kappas.len() as f64 * (panel_w + GAP);
    let height = panel_h + 2.0 * MARGIN;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         font-family=\"sans-serif\" font-size=\"10\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    for (ik, (kappa, freq)) in cfg.kappas.iter().zip(&atlas.frequency).enumerate() {
        let x0 = MARGIN + ik as f64 * (panel_w + GAP);
        let y0 = MARGIN;
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            x0 + panel_w / 2.0,
            y0 - 12.0,
            escape(&format!("κ = {}", g4(*kappa)))
        ));
        for ie in 0..ne {
            let y = y0 + (ne - 1 - ie) as f64 * CELL;
            for id in 0..nd {
                let count = *freq.counts.get(ie, id);
                s.push_str(&format!(
                    "<rect x=\"{}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{}\" stroke=\"#ccc\">\
                     <title>eta={} lnD={} count={count}</title></rect>\n",
                    x0 + id as f64 * CELL,
                    shade(count, max),
                    g4(cfg.eta[ie]),
                    g4(cfg.ln_divergence[id])
                ));
            }
            if ik == 0 {
                s.push_str(&format!(
                    "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
                    x0 - 4.0,
                    y + CELL / 2.0 + 3.0,
                    g4(cfg.eta[ie])
                ));
            }
        }
        for id in 0..nd {
            s.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                x0 + (id as f64 + 0.5) * CELL,
                y0 + panel_h + 14.0,
                g4(cfg.ln_divergence[id])
            ));
        }
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">ln D</text>\n",
            x0 + panel_w / 2.0,
            y0 + panel_h + 30.0
        ));
    }
    s.push_str(&format!(
        "<text x=\"12\" y=\"{}\" transform=\"rotate(-90 12 {})\" text-anchor=\"middle\">η</text>\n",
        MARGIN + panel_h / 2.0,
        MARGIN + panel_h / 2.0
    ));
    s.push_str("</svg>\n");
    s
}
