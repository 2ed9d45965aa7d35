//! Minimal self-contained SVG emitter for log–log polyline plots.
//!
//! No templating, no external renderer: the two figure panels are simple
//! enough (decade grid, a handful of polylines, a legend) that writing the
//! XML directly keeps the artifact dependency-free. Output is deterministic
//! for identical input.

/// One curve on a plot. Points must be strictly positive in both
/// coordinates to be representable on log axes; offending points are
/// dropped silently (the caller controls the data).
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 620.0;
const MARGIN_LEFT: f64 = 95.0;
const MARGIN_RIGHT: f64 = 250.0;
const MARGIN_TOP: f64 = 60.0;
const MARGIN_BOTTOM: f64 = 80.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Whole-decade bounds covering all finite positive values on one axis.
fn decade_range(values: impl Iterator<Item = f64>) -> (i32, i32) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v > 0.0 && v.is_finite() {
            let l = v.log10();
            lo = lo.min(l);
            hi = hi.max(l);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0, 1);
    }
    let lo = lo.floor() as i32;
    let mut hi = hi.ceil() as i32;
    if hi == lo {
        hi += 1;
    }
    (lo, hi)
}

fn tick_label(exponent: i32) -> String {
    match exponent {
        0 => "1".to_string(),
        1 => "10".to_string(),
        _ => format!("1e{exponent}"),
    }
}

/// Renders a log–log plot of the given series to an SVG document string.
pub fn log_log_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let (x_lo, x_hi) = decade_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_lo, y_hi) = decade_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let x_span = (x_hi - x_lo) as f64;
    let y_span = (y_hi - y_lo) as f64;
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN_LEFT + (x.log10() - x_lo as f64) / x_span * plot_w,
            MARGIN_TOP + (y_hi as f64 - y.log10()) / y_span * plot_h,
        )
    };

    let mut svg = String::with_capacity(16 * 1024);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"Helvetica, Arial, sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"30\" font-size=\"17\" text-anchor=\"middle\" fill=\"#222\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    ));

    // Decade grid and tick labels. Thin the labels if the range is wide.
    let x_step = 1 + (x_hi - x_lo) / 12;
    let y_step = 1 + (y_hi - y_lo) / 12;
    for e in x_lo..=x_hi {
        let x = MARGIN_LEFT + (e - x_lo) as f64 / x_span * plot_w;
        svg.push_str(&format!(
            "  <line x1=\"{x:.1}\" y1=\"{MARGIN_TOP}\" x2=\"{x:.1}\" y2=\"{:.1}\" \
             stroke=\"#ddd\" stroke-width=\"1\"/>\n",
            MARGIN_TOP + plot_h
        ));
        if (e - x_lo) % x_step == 0 {
            svg.push_str(&format!(
                "  <text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" \
                 fill=\"#333\">{}</text>\n",
                MARGIN_TOP + plot_h + 22.0,
                tick_label(e)
            ));
        }
    }
    for e in y_lo..=y_hi {
        let y = MARGIN_TOP + (y_hi - e) as f64 / y_span * plot_h;
        svg.push_str(&format!(
            "  <line x1=\"{MARGIN_LEFT}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"#ddd\" stroke-width=\"1\"/>\n",
            MARGIN_LEFT + plot_w
        ));
        if (e - y_lo) % y_step == 0 {
            svg.push_str(&format!(
                "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"end\" \
                 fill=\"#333\">{}</text>\n",
                MARGIN_LEFT - 8.0,
                y + 4.0,
                tick_label(e)
            ));
        }
    }

    // Frame.
    svg.push_str(&format!(
        "  <rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w:.1}\" \
         height=\"{plot_h:.1}\" fill=\"none\" stroke=\"#444\" stroke-width=\"1.5\"/>\n"
    ));

    // Axis labels.
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"15\" text-anchor=\"middle\" \
         fill=\"#222\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 25.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"28\" y=\"{:.1}\" font-size=\"15\" text-anchor=\"middle\" fill=\"#222\" \
         transform=\"rotate(-90 28 {:.1})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    ));

    // Curves.
    for s in series {
        let pts: Vec<String> = s
            .points
            .iter()
            .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        if pts.len() < 2 {
            continue;
        }
        svg.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2.2\"/>\n",
            pts.join(" "),
            s.color
        ));
    }

    // Legend, to the right of the plot.
    let lx = MARGIN_LEFT + plot_w + 18.0;
    for (i, s) in series.iter().enumerate() {
        let ly = MARGIN_TOP + 14.0 + 24.0 * i as f64;
        svg.push_str(&format!(
            "  <line x1=\"{lx:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" \
             stroke=\"{}\" stroke-width=\"2.2\"/>\n",
            lx + 26.0,
            s.color
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" fill=\"#222\">{}</text>\n",
            lx + 33.0,
            ly + 4.5,
            escape(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}
