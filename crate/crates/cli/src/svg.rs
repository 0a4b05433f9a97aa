//! Minimal deterministic SVG line plots: fixed canvas, nice-number ticks,
//! one polyline per curve, inline legend. No external renderer.

use std::fmt::Write as _;

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 58.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub curves: Vec<Curve>,
}

struct Range {
    min: f64,
    max: f64,
}

impl Range {
    fn of(values: impl Iterator<Item = f64>) -> Range {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values.filter(|v| v.is_finite()) {
            min = min.min(v);
            max = max.max(v);
        }
        if min > max {
            return Range { min: 0.0, max: 1.0 };
        }
        if min == max {
            return Range {
                min: min - 1.0,
                max: max + 1.0,
            };
        }
        Range { min, max }
    }

    fn padded(self, fraction: f64) -> Range {
        let pad = (self.max - self.min) * fraction;
        Range {
            min: self.min - pad,
            max: self.max + pad,
        }
    }

    fn span(&self) -> f64 {
        self.max - self.min
    }
}

/// Tick step rounded to 1, 2 or 5 times a power of ten, aiming for about
/// five intervals.
fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let residual = raw / magnitude;
    let factor = if residual < 1.5 {
        1.0
    } else if residual < 3.5 {
        2.0
    } else if residual < 7.5 {
        5.0
    } else {
        10.0
    };
    factor * magnitude
}

fn ticks(range: &Range) -> Vec<f64> {
    let step = nice_step(range.span());
    let first = (range.min / step).ceil() * step;
    let mut out = Vec::new();
    let mut tick = first;
    while tick <= range.max + step * 1e-9 {
        // Snap values that are zero up to step noise so "0" labels cleanly.
        out.push(if tick.abs() < step * 1e-9 { 0.0 } else { tick });
        tick += step;
    }
    out
}

fn tick_label(value: f64, step: f64) -> String {
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10().floor()) as usize
    };
    format!("{value:.decimals$}")
}

impl Plot {
    pub fn render(&self) -> String {
        let x_range = Range::of(
            self.curves
                .iter()
                .flat_map(|c| c.points.iter().map(|p| p.0)),
        );
        let y_range = Range::of(
            self.curves
                .iter()
                .flat_map(|c| c.points.iter().map(|p| p.1)),
        )
        .padded(0.05);

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let to_x = |v: f64| MARGIN_LEFT + (v - x_range.min) / x_range.span() * plot_w;
        let to_y = |v: f64| MARGIN_TOP + (y_range.max - v) / y_range.span() * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
        );
        let _ = writeln!(svg, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"24\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            escape(&self.title)
        );

        let x_step = nice_step(x_range.span());
        for tick in ticks(&x_range) {
            let x = to_x(tick);
            let _ = writeln!(
                svg,
                "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>",
                MARGIN_TOP,
                MARGIN_TOP + plot_h
            );
            let _ = writeln!(
                svg,
                "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
                MARGIN_TOP + plot_h + 18.0,
                tick_label(tick, x_step)
            );
        }
        let y_step = nice_step(y_range.span());
        for tick in ticks(&y_range) {
            let y = to_y(tick);
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>",
                MARGIN_LEFT,
                MARGIN_LEFT + plot_w
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">{}</text>",
                MARGIN_LEFT - 8.0,
                y + 4.0,
                tick_label(tick, y_step)
            );
        }

        let _ = writeln!(
            svg,
            "<rect x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" fill=\"none\" stroke=\"black\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            "<text x=\"20\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">{}</text>",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for (index, curve) in self.curves.iter().enumerate() {
            let color = PALETTE[index % PALETTE.len()];
            let mut path = String::new();
            for &(x, y) in curve
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
            {
                let _ = write!(path, "{:.2},{:.2} ", to_x(x), to_y(y));
            }
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
                path.trim_end()
            );
        }

        for (index, curve) in self.curves.iter().enumerate() {
            let color = PALETTE[index % PALETTE.len()];
            let y = MARGIN_TOP + 16.0 + 18.0 * index as f64;
            let x = MARGIN_LEFT + plot_w - 170.0;
            let _ = writeln!(
                svg,
                "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>",
                x + 24.0
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\">{}</text>",
                x + 30.0,
                y + 4.0,
                escape(&curve.label)
            );
        }

        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Plot {
        Plot {
            title: "reflectivity".into(),
            x_label: "detuning (THz)".into(),
            y_label: "|r|^2".into(),
            curves: vec![Curve {
                label: "g1 = 0.3".into(),
                points: (0..100)
                    .map(|i| {
                        let x = -1.0 + 0.02 * i as f64;
                        (x, 1.0 / (1.0 + x * x))
                    })
                    .collect(),
            }],
        }
    }

    #[test]
    fn renders_well_formed_svg() {
        let svg = sample().render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("detuning (THz)"));
        assert_eq!(svg.matches("<polyline").count(), 1);
    }

    #[test]
    fn rendering_is_deterministic() {
        assert_eq!(sample().render(), sample().render());
    }

    #[test]
    fn nice_steps_are_round() {
        assert_eq!(nice_step(10.0), 2.0);
        assert_eq!(nice_step(1.0), 0.2);
        assert_eq!(nice_step(6.0), 1.0);
        assert_eq!(nice_step(0.5), 0.1);
    }

    #[test]
    fn degenerate_ranges_do_not_collapse() {
        let plot = Plot {
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            curves: vec![Curve {
                label: String::new(),
                points: vec![(0.0, 1.0), (1.0, 1.0)],
            }],
        };
        let svg = plot.render();
        assert!(svg.contains("<polyline"));
    }
}
