//! Minimal SVG line charts of functional curves.

use std::fmt::Write as _;

use willmore_core::functionals::FunctionalCurve;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    values: Vec<f64>,
}

/// H_β^{c,d} and F_β against ln τ, each normalized by its largest
/// magnitude so both fit one axis. Flagged grid points are circled.
pub fn curve_svg(curve: &FunctionalCurve) -> String {
    let x: Vec<f64> = curve.taus.iter().map(|t| t.ln()).collect();
    let normalized = |v: &[f64]| {
        let m = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        v.iter().map(|y| if m > 0.0 { y / m } else { 0.0 }).collect::<Vec<_>>()
    };
    let series = [
        Series {
            label: "H (normalized)",
            color: "#1f77b4",
            values: normalized(&curve.h_cd),
        },
        Series {
            label: "F (normalized)",
            color: "#d62728",
            values: normalized(&curve.f_beta),
        },
    ];
    let (x0, x1) = (x[0], x[x.len() - 1].max(x[0] + 1e-12));
    let lo = series.iter().flat_map(|s| &s.values).fold(0.0f64, |a, b| a.min(*b));
    let hi = series.iter().flat_map(|s| &s.values).fold(0.0f64, |a, b| a.max(*b)).max(lo + 1e-12);
    let px = |v: f64| MARGIN + (v - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2.0 * MARGIN);

    let p = &curve.params;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{MARGIN}\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">beta = {}, c = {}, d = {}</text>",
        p.beta, p.c, p.d
    );
    let _ = writeln!(
        s,
        "<path d=\"M{:.2},{:.2} V{:.2} H{:.2}\" stroke=\"black\" fill=\"none\"/>",
        MARGIN,
        MARGIN,
        HEIGHT - MARGIN,
        WIDTH - MARGIN
    );
    if lo < 0.0 {
        let _ = writeln!(
            s,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#999\" stroke-dasharray=\"4\"/>",
            MARGIN,
            py(0.0),
            WIDTH - MARGIN,
            py(0.0)
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">ln tau</text>",
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    for (k, ser) in series.iter().enumerate() {
        let points: Vec<String> =
            x.iter().zip(&ser.values).map(|(a, b)| format!("{:.2},{:.2}", px(*a), py(*b))).collect();
        let _ = writeln!(
            s,
            "<polyline points=\"{}\" stroke=\"{}\" stroke-width=\"1.5\" fill=\"none\"/>",
            points.join(" "),
            ser.color
        );
        let _ = writeln!(
            s,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"{}\">{}</text>",
            WIDTH - MARGIN - 120.0,
            MARGIN + 16.0 * k as f64,
            ser.color,
            ser.label
        );
    }
    for v in &curve.violations {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"5\" stroke=\"black\" fill=\"none\"/>",
            px(x[v.index]),
            py(series[1].values[v.index])
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use willmore_core::functionals::ParamSet;

    #[test]
    fn svg_has_both_series() {
        let curve = FunctionalCurve {
            params: ParamSet::new(2.0, 1.0, 0.0),
            taus: vec![1.0, 2.0, 4.0],
            h_cd: vec![3.0, 2.0, 1.0],
            h_cd_scale: vec![3.0; 3],
            f_beta: vec![5.0, 4.5, 4.4],
            f_beta_prime: vec![-1.0; 3],
            f_beta_prime_scale: vec![1.0; 3],
            residuals: vec![0.0; 3],
            violations: Vec::new(),
        };
        let svg = curve_svg(&curve);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
