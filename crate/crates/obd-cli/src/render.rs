//! Best-effort SVG rendering of a curve system: tiles laid out in a row,
//! chords drawn as straight segments, one colour per path. For visual
//! cross-checking only; carries no correctness contract.

use obd_core::page::{point_of, CurveSystem};

const COLORS: [&str; 8] = [
    "#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085", "#7f8c8d", "#2c3e50",
];

fn approx(p: &obd_core::page::Pos) -> f64 {
    let n: f64 = p.numer().to_string().parse().unwrap_or(0.0);
    let d: f64 = p.denom().to_string().parse().unwrap_or(1.0);
    n / d
}

pub fn svg_of_system(sys: &CurveSystem) -> String {
    let size = 140.0;
    let gap = 20.0;
    let tiles = sys.page.tiles.max(1);
    let width = tiles as f64 * (size + gap) + gap;
    let height = size + 2.0 * gap + 20.0;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    let origin = |tile: usize| (gap + tile as f64 * (size + gap), gap);
    for t in 0..sys.page.tiles {
        let (x, y) = origin(t);
        out.push_str(&format!(
            "<rect x=\"{x}\" y=\"{y}\" width=\"{size}\" height=\"{size}\" fill=\"none\" \
             stroke=\"#999\"/>\n<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"#555\">{t}</text>\n",
            x + 4.0,
            y + size + 14.0
        ));
    }
    for (k, (id, path)) in sys.paths.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        for c in &path.crossings {
            let (ox, oy) = origin(c.tile);
            let a = point_of(c.enter.0, &c.enter.1);
            let b = point_of(c.exit.0, &c.exit.1);
            // svg y grows downward; tile coordinates grow upward
            let (x1, y1) = (ox + approx(&a.0) * size, oy + (1.0 - approx(&a.1)) * size);
            let (x2, y2) = (ox + approx(&b.0) * size, oy + (1.0 - approx(&b.1)) * size);
            out.push_str(&format!(
                "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" \
                 stroke=\"{color}\" stroke-width=\"1.4\"><title>{id}</title></line>\n"
            ));
        }
    }
    out.push_str("</svg>\n");
    out
}
