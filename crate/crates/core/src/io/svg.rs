//! Standalone SVG 1.1 pictures of `P + X` over a window.
//!
//! Coordinates stay exact until the final conversion to pixels, which is
//! rounded to 15 significant digits. The y axis points up in the picture.
//!
//! Coverage colors come from a fixed 8-color palette indexed by
//! multiplicity modulo 8 (the Okabe-Ito colors):
//!
//! | multiplicity mod 8 | color     |
//! |--------------------|-----------|
//! | 0                  | `#999999` |
//! | 1                  | `#E69F00` |
//! | 2                  | `#56B4E9` |
//! | 3                  | `#009E73` |
//! | 4                  | `#F0E442` |
//! | 5                  | `#0072B2` |
//! | 6                  | `#D55E00` |
//! | 7                  | `#CC79A7` |

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::arrangement::build_arrangement;
use crate::coverage::MultiplicityCounter;
use crate::geometry::{CsPolygon, Point};
use crate::lattice::{BBox, Parallelogram, TranslateMultiset};
use crate::rational::{self, int, Rat};

pub const PALETTE: [&str; 8] = ["#999999", "#E69F00", "#56B4E9", "#009E73", "#F0E442", "#0072B2", "#D55E00", "#CC79A7"];

/// Width of the drawing area in pixels.
const WIDTH: i64 = 800;
const MARGIN: i64 = 20;
const LEGEND_WIDTH: i64 = 120;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderMode {
    Outlines,
    CoverageHeat,
}

impl std::str::FromStr for RenderMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "outlines" => Ok(RenderMode::Outlines),
            "coverage-heat" | "heat" => Ok(RenderMode::CoverageHeat),
            _ => Err(format!("unknown render mode {s:?}; expected outlines or coverage-heat")),
        }
    }
}

pub fn palette_color(multiplicity: u32) -> &'static str {
    PALETTE[(multiplicity % 8) as usize]
}

/// Rounds to 15 significant digits and prints the shortest form.
pub fn fmt_num(v: f64) -> String {
    let rounded: f64 = format!("{v:.14e}").parse().expect("float round-trips");
    if rounded == 0.0 {
        return "0".to_string();
    }
    format!("{rounded}")
}

struct View {
    window: BBox,
    scale: Rat,
}

impl View {
    fn new(window: &BBox) -> Self {
        let scale = int(WIDTH) / window.width();
        View { window: window.clone(), scale }
    }

    fn height(&self) -> Rat {
        self.window.height() * &self.scale
    }

    fn x(&self, p: &Point) -> String {
        fmt_num(rational::to_f64(&((&p.x - &self.window.xmin) * &self.scale + int(MARGIN))))
    }

    fn y(&self, p: &Point) -> String {
        fmt_num(rational::to_f64(&((&self.window.ymax - &p.y) * &self.scale + int(MARGIN))))
    }

    fn points(&self, pts: &[Point]) -> String {
        pts.iter().map(|p| format!("{},{}", self.x(p), self.y(p))).collect::<Vec<_>>().join(" ")
    }
}

/// Draws every translate meeting `window`; in coverage-heat mode the cells
/// of the arrangement inside the window are filled by multiplicity and a
/// legend lists the multiplicities present.
pub fn render_svg(polygon: &CsPolygon, x: &TranslateMultiset, window: &BBox, mode: RenderMode) -> String {
    assert!(window.width() > Rat::zero() && window.height() > Rat::zero(), "window must have positive area");
    let view = View::new(window);
    let h = rational::to_f64(&view.height());
    let total_w = WIDTH + 2 * MARGIN + if mode == RenderMode::CoverageHeat { LEGEND_WIDTH } else { 0 };
    let total_h = fmt_num(h + 2.0 * MARGIN as f64);
    let translates = x.enumerate(polygon, window);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="yes"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    let corners = window.corners();
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="window"><polygon points="{}"/></clipPath></defs>"#,
        view.points(&corners)
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{total_w}" height="{total_h}" fill="#ffffff"/>"##);

    let mut present = BTreeSet::new();
    if mode == RenderMode::CoverageHeat {
        let segments: Vec<_> = translates
            .iter()
            .flat_map(|t| polygon.edges().map(move |e| e.translate(&t.vector)))
            .collect();
        let arr = build_arrangement(&segments, &Parallelogram::from_bbox(window));
        let counter = MultiplicityCounter::new(polygon, x);
        let _ = writeln!(out, r#"<g id="cells">"#);
        for face in arr.cells() {
            let m = counter.count(&face.sample).open;
            present.insert(m);
            let color = palette_color(m);
            for &t in &face.trapezoids {
                let pts = arr.trapezoids[t].corners();
                let _ = writeln!(
                    out,
                    r#"<polygon points="{}" fill="{color}" stroke="{color}" stroke-width="0.5"/>"#,
                    view.points(&pts)
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    let _ = writeln!(out, r##"<g id="translates" clip-path="url(#window)" fill="none" stroke="#000000" stroke-width="1">"##);
    for t in &translates {
        let pts: Vec<Point> = polygon.vertices().iter().map(|v| v + &t.vector).collect();
        let _ = writeln!(out, r#"<polygon points="{}"/>"#, view.points(&pts));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="none" stroke="#444444" stroke-width="1.5"/>"##,
        view.points(&corners)
    );

    if mode == RenderMode::CoverageHeat {
        let lx = WIDTH + 2 * MARGIN;
        let _ = writeln!(out, r#"<g id="legend" font-family="sans-serif" font-size="14">"#);
        let _ = writeln!(out, r#"<text x="{lx}" y="{}">multiplicity</text>"#, MARGIN + 4);
        for (row, m) in present.iter().enumerate() {
            let y = MARGIN + 16 + 24 * row as i64;
            let _ = writeln!(
                out,
                r##"<rect x="{lx}" y="{y}" width="18" height="18" fill="{}" stroke="#000000"/>"##,
                palette_color(*m)
            );
            let _ = writeln!(out, r#"<text x="{}" y="{}">{m}</text>"#, lx + 26, y + 14);
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    out
}

/// Parses `xmin:xmax:ymin:ymax`, for example `-4:4:-4:4`.
pub fn parse_window(text: &str) -> Result<BBox, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err(format!("expected xmin:xmax:ymin:ymax, got {text:?}"));
    }
    let v: Vec<Rat> = parts
        .iter()
        .map(|p| rational::parse(p.trim()).map_err(|e| format!("{e}: {p:?}")))
        .collect::<Result<_, _>>()?;
    if v[0] >= v[1] || v[2] >= v[3] {
        return Err("window must have xmin < xmax and ymin < ymax".to_string());
    }
    Ok(BBox::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::load_fixture;

    fn legend_labels(svg: &str) -> Vec<String> {
        let legend = &svg[svg.find(r#"<g id="legend""#).unwrap()..];
        legend
            .lines()
            .filter_map(|l| l.strip_prefix("<text x=\"").filter(|_| !l.contains("multiplicity")))
            .map(|l| l.split('>').nth(1).unwrap().trim_end_matches("</text").to_string())
            .collect()
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.1 + 0.2), "0.3");
        assert_eq!(fmt_num(100.0), "100");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(1.0 / 3.0), "0.333333333333333");
    }

    #[test]
    fn square_heat_is_single_color() {
        let inst = load_fixture("unit_square");
        let w = parse_window("0:3:0:2").unwrap();
        let svg = render_svg(&inst.polygon, &inst.multiset, &w, RenderMode::CoverageHeat);
        assert_eq!(legend_labels(&svg), vec!["1"]);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn octagon_heat_is_seven() {
        let inst = load_fixture("d8prime_grs");
        let w = parse_window("-1:2:-1:2").unwrap();
        let svg = render_svg(&inst.polygon, &inst.multiset, &w, RenderMode::CoverageHeat);
        assert_eq!(legend_labels(&svg), vec!["7"]);
    }

    #[test]
    fn outlines_draw_every_translate() {
        let inst = load_fixture("unit_square");
        let w = parse_window("0:1:0:1").unwrap();
        let svg = render_svg(&inst.polygon, &inst.multiset, &w, RenderMode::Outlines);
        let g = &svg[svg.find(r#"<g id="translates""#).unwrap()..];
        let count = g[..g.find("</g>").unwrap()].matches("<polygon").count();
        assert_eq!(count, 9);
    }

    #[test]
    fn window_parsing() {
        assert!(parse_window("-4:4:-4:4").is_ok());
        assert!(parse_window("1:0:0:1").is_err());
        assert!(parse_window("0:1:0").is_err());
        assert!(parse_window("0:1:0:0.5").is_err());
    }
}
