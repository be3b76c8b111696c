use std::fmt::Write as _;

/// Fixed palette, cycled by cluster id.
const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#2f4b7c", "#a05195",
];

/// Render a 2-D state cloud as an SVG scatter plot.
///
/// One circle per point, filled by cluster; points of accepting clusters get
/// a black outline. The initial state, which belongs to no cluster, is drawn
/// separately as a cross when provided. Output is deterministic.
pub fn render_pca_svg(
    points: &[(f64, f64)],
    cluster_ids: &[usize],
    accepting_clusters: &[bool],
    initial_state: Option<(f64, f64)>,
) -> String {
    assert_eq!(points.len(), cluster_ids.len());
    let size = 640.0;
    let margin = 40.0;

    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for &(x, y) in points.iter().chain(initial_state.iter()) {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    if points.is_empty() && initial_state.is_none() {
        min_x = 0.0;
        max_x = 1.0;
        min_y = 0.0;
        max_y = 1.0;
    }
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let place = |x: f64, y: f64| -> (f64, f64) {
        (
            margin + (x - min_x) / span_x * (size - 2.0 * margin),
            // SVG y grows downward
            size - margin - (y - min_y) / span_y * (size - 2.0 * margin),
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(
        out,
        "  <rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>"
    );
    for (&(x, y), &cluster) in points.iter().zip(cluster_ids) {
        let (cx, cy) = place(x, y);
        let fill = PALETTE[cluster % PALETTE.len()];
        let outline = if accepting_clusters.get(cluster).copied().unwrap_or(false) {
            " stroke=\"black\" stroke-width=\"1\""
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"3\" fill=\"{fill}\" fill-opacity=\"0.7\"{outline}/>"
        );
    }
    if let Some((x, y)) = initial_state {
        let (cx, cy) = place(x, y);
        let _ = writeln!(
            out,
            "  <path d=\"M {:.2} {:.2} L {:.2} {:.2} M {:.2} {:.2} L {:.2} {:.2}\" stroke=\"black\" stroke-width=\"2\"/>",
            cx - 6.0, cy - 6.0, cx + 6.0, cy + 6.0, cx - 6.0, cy + 6.0, cx + 6.0, cy - 6.0
        );
    }
    out.push_str("</svg>\n");
    out
}
