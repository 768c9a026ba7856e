//! SVG pictures of colorings.
//!
//! Output is SVG 1.1 with one disc per point, laid out on the true
//! triangular lattice, and is byte-for-byte deterministic. For a periodic
//! stripe one period is drawn.

use std::fmt::Write;

use crate::coloring::Coloring;
use crate::triangles::Triangle;

const PALETTE: [&str; 12] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45",
    "#469990", "#9a6324", "#800000", "#000075",
];

/// Fill color for a color index. The first twelve come from a fixed table;
/// later ones step around the hue circle by the golden angle.
pub fn palette_color(color: u32) -> String {
    match PALETTE.get(color as usize) {
        Some(hex) => hex.to_string(),
        None => {
            let hue = (color as u64 * 137_508 / 1000) % 360;
            let light = 35 + (color / 12 % 3) * 15;
            format!("hsl({hue},70%,{light}%)")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderOptions {
    /// Distance between neighbouring points, in SVG user units.
    pub spacing: f64,
    /// Disc radius as a fraction of the spacing.
    pub radius: f64,
    /// Print the color index inside each disc.
    pub labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { spacing: 24.0, radius: 0.38, labels: false }
    }
}

/// Draws `coloring`, outlining `witness` if one is given.
pub fn render_svg(coloring: &Coloring, witness: Option<Triangle>, options: &RenderOptions) -> String {
    let points = coloring.region().points();
    let s = options.spacing;
    let margin = s;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| p.cartesian()).collect();
    let (min_x, max_x) = bounds(xy.iter().map(|c| c.0));
    let (min_y, max_y) = bounds(xy.iter().map(|c| c.1));
    let width = (max_x - min_x) * s + 2.0 * margin;
    let height = (max_y - min_y) * s + 2.0 * margin;
    // SVG y grows downward; row 0 goes at the bottom.
    let place = |x: f64, y: f64| (margin + (x - min_x) * s, margin + (max_y - y) * s);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\">",
        w = width,
        h = height
    )
    .unwrap();
    writeln!(out, "<title>{} with {} colors</title>", coloring.region(), coloring.num_colors()).unwrap();
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (p, &(x, y)) in points.iter().zip(&xy) {
        let color = coloring.color(*p).expect("point of the region");
        let (cx, cy) = place(x, y);
        writeln!(
            out,
            "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"{fill}\"><title>({a},{b}) color {color}</title></circle>",
            r = options.radius * s,
            fill = palette_color(color),
            a = p.a,
            b = p.b,
        )
        .unwrap();
        if options.labels {
            writeln!(
                out,
                "<text x=\"{cx:.2}\" y=\"{ty:.2}\" font-size=\"{fs:.2}\" text-anchor=\"middle\" fill=\"white\">{color}</text>",
                ty = cy + 0.15 * s,
                fs = 0.4 * s
            )
            .unwrap();
        }
    }
    if let Some(t) = witness {
        let corners: Vec<String> = t
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = v.cartesian();
                let (px, py) = place(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        writeln!(
            out,
            "<polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{:.2}\"/>",
            corners.join(" "),
            0.12 * s
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::chevron_coloring;
    use crate::lattice::LatticePoint;
    use crate::Region;

    #[test]
    fn one_disc_per_point_and_deterministic() {
        let c = chevron_coloring(6);
        let svg = render_svg(&c, None, &RenderOptions::default());
        assert_eq!(svg.matches("<circle").count(), 21);
        assert_eq!(svg, render_svg(&c, None, &RenderOptions::default()));
        assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn witness_is_outlined() {
        let c = Coloring::new(Region::triangle(2), 1, vec![0; 3]).unwrap();
        let t = Triangle::new(LatticePoint::new(0, 0), LatticePoint::new(1, 0), LatticePoint::new(0, 1))
            .unwrap();
        let svg = render_svg(&c, Some(t), &RenderOptions { labels: true, ..Default::default() });
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert_eq!(svg.matches("<text").count(), 3);
    }

    #[test]
    fn palette_is_distinct_for_small_indices() {
        let names: std::collections::BTreeSet<_> = (0..40).map(palette_color).collect();
        assert_eq!(names.len(), 40);
    }
}
