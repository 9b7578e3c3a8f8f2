use super::SimResult;

const W: f64 = 640.0;
const H: f64 = 440.0;
const M: f64 = 60.0;
const COLOURS: [&str; 8] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666"];

/// SER against SNR on a log scale, one polyline per result. Points with
/// zero errors or infinite SNR are left out.
pub fn render_svg(results: &[SimResult]) -> String {
    let pts: Vec<Vec<(f64, f64)>> = results
        .iter()
        .map(|r| {
            r.points
                .iter()
                .filter(|p| p.snr_db.is_finite() && p.ser > 0.0)
                .map(|p| (p.snr_db, p.ser.log10()))
                .collect()
        })
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in all {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, -1.0, 0.0);
    }
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        W - 2.0 * M,
        H - 2.0 * M
    );
    let mut decade = y0 as i32;
    while decade <= y1 as i32 {
        let y = sy(decade as f64);
        svg.push_str(&format!(
            "<line x1=\"{M}\" x2=\"{}\" y1=\"{y:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/><text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">1e{decade}</text>\n",
            W - M,
            M - 6.0,
            y + 4.0
        ));
        decade += 1;
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">SNR (dB)</text>\n<text x=\"{M}\" y=\"{:.1}\">{x0}</text><text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{x1}</text>\n",
        W / 2.0,
        H - 15.0,
        H - M + 16.0,
        W - M,
        H - M + 16.0
    ));
    for (k, (r, line)) in results.iter().zip(&pts).enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let path: Vec<String> = line.iter().map(|(x, y)| format!("{:.1},{:.1}", sx(*x), sy(*y))).collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{colour}\" stroke-width=\"2\" points=\"{}\"/>\n<text x=\"{:.1}\" y=\"{:.1}\" fill=\"{colour}\">{}</text>\n",
            path.join(" "),
            W - M - 150.0,
            M + 16.0 * (k + 1) as f64,
            escape(&r.code)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{SimPoint, SnrMeta, SnrMode};

    #[test]
    fn renders_polylines() {
        let r = SimResult {
            code: "a<b".into(),
            n_tx: 2,
            n_rx: 2,
            codewords: 1,
            symbols_per_codeword: 1,
            seed: 0,
            snr: SnrMeta { mode: SnrMode::Measured, formula: String::new(), signal_energy: 1.0 },
            points: [(6.0, 0.1), (8.0, 0.01), (10.0, 0.0)]
                .map(|(snr_db, ser)| SimPoint { snr_db, noise_var: 0.0, ser, bler: ser, ci: 0.0, bler_ci: 0.0, trials: 1, symbol_errors: 0, block_errors: 0 })
                .to_vec(),
        };
        let svg = render_svg(&[r]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("a&lt;b"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(render_svg(&[]).ends_with("</svg>\n"));
    }
}
