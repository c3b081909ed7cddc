//! SVG drawings of matchings, extensions, cells and dual graphs.
//! Coordinates are printed with 12 decimals; y points up.

use std::fmt::Write as _;
use std::str::FromStr;

use geomatch::algorithms::hv::ColoredDual;
use geomatch::geom::{Coord, Matching, Scalar};
use geomatch::subdivision::Color;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layers {
    pub segments: bool,
    pub extensions: bool,
    pub cells: bool,
    pub dual: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Layers { segments: true, extensions: true, cells: true, dual: true }
    }
}

impl FromStr for Layers {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            return Ok(Layers::default());
        }
        let mut l = Layers { segments: false, extensions: false, cells: false, dual: false };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "segments" => l.segments = true,
                "extensions" => l.extensions = true,
                "cells" => l.cells = true,
                "dual" => l.dual = true,
                other => return Err(format!("unknown layer `{other}` (segments, extensions, cells, dual, all)")),
            }
        }
        Ok(l)
    }
}

/// Axis-aligned drawing window in f64.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn around<'a>(coords: impl IntoIterator<Item = &'a Coord>) -> Viewport {
        let mut v = Viewport { xmin: f64::INFINITY, xmax: f64::NEG_INFINITY, ymin: f64::INFINITY, ymax: f64::NEG_INFINITY };
        for c in coords {
            let (x, y) = (c.x.to_f64(), c.y.to_f64());
            v.xmin = v.xmin.min(x);
            v.xmax = v.xmax.max(x);
            v.ymin = v.ymin.min(y);
            v.ymax = v.ymax.max(y);
        }
        if !v.xmin.is_finite() {
            return Viewport { xmin: -1.0, xmax: 1.0, ymin: -1.0, ymax: 1.0 };
        }
        v
    }

    pub fn union(&self, o: &Viewport) -> Viewport {
        Viewport {
            xmin: self.xmin.min(o.xmin),
            xmax: self.xmax.max(o.xmax),
            ymin: self.ymin.min(o.ymin),
            ymax: self.ymax.max(o.ymax),
        }
    }

    fn span(&self) -> f64 {
        (self.xmax - self.xmin).max(self.ymax - self.ymin).max(1e-9)
    }
}

pub struct Scene<'a> {
    pub matching: &'a Matching,
    /// Further matchings drawn on top, with a stroke colour.
    pub overlays: Vec<(&'a Matching, &'static str)>,
    pub colored: Option<&'a ColoredDual>,
}

impl Scene<'_> {
    /// Tight window around everything the scene may draw.
    pub fn extent(&self) -> Viewport {
        let mut coords: Vec<Coord> = self.matching.base().points().iter().map(|p| p.coord()).collect();
        if let Some(c) = self.colored {
            for cell in &c.subdivision.cells {
                coords.extend(cell.vertices().iter().cloned());
            }
            for e in &c.geometry.extensions {
                coords.push(e.terminus.clone());
            }
        }
        Viewport::around(coords.iter())
    }
}

fn num(s: &Scalar) -> String {
    fmt(s.to_f64())
}

fn fmt(v: f64) -> String {
    // avoid "-0.000000000000"
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.12}")
}

fn point(c: &Coord) -> String {
    format!("{},{}", num(&c.x), fmt(-c.y.to_f64()))
}

fn color_name(c: Option<Color>) -> &'static str {
    match c {
        Some(Color::Red) => "red",
        Some(Color::Green) => "green",
        Some(Color::Blue) => "blue",
        None => "gray",
    }
}

fn segment_lines(out: &mut String, m: &Matching, stroke: &str, width: f64, dash: Option<f64>) {
    let dash = dash.map_or(String::new(), |d| format!(" stroke-dasharray=\"{}\"", fmt(d)));
    for s in m.segments() {
        let (a, b) = m.endpoints(&s);
        let _ = writeln!(
            out,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\"{dash}/>",
            num(&a.x),
            fmt(-a.y.to_f64()),
            num(&b.x),
            fmt(-b.y.to_f64()),
            fmt(width)
        );
    }
}

/// SVG document for `scene` inside `view` (padded by 5%).
pub fn svg(scene: &Scene, layers: &Layers, view: &Viewport) -> String {
    let pad = view.span() * 0.05;
    let w = view.span() / 300.0;
    let (x0, y0) = (view.xmin - pad, -view.ymax - pad);
    let (width, height) = (view.xmax - view.xmin + 2.0 * pad, view.ymax - view.ymin + 2.0 * pad);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"800\" height=\"{}\">",
        fmt(x0),
        fmt(y0),
        fmt(width),
        fmt(height),
        (800.0 * height / width).round().max(1.0)
    );

    if let Some(c) = scene.colored {
        if layers.cells {
            out.push_str("  <g id=\"cells\">\n");
            for cell in &c.subdivision.cells {
                let pts: Vec<String> = cell.vertices().iter().map(point).collect();
                let _ = writeln!(
                    out,
                    "    <polygon points=\"{}\" fill=\"#f2f2f2\" stroke=\"#bbbbbb\" stroke-width=\"{}\"/>",
                    pts.join(" "),
                    fmt(w / 2.0)
                );
            }
            out.push_str("  </g>\n");
        }
        if layers.extensions {
            out.push_str("  <g id=\"extensions\">\n");
            for e in &c.geometry.extensions {
                let _ = writeln!(
                    out,
                    "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#555555\" stroke-width=\"{}\" stroke-dasharray=\"{}\"/>",
                    num(&e.origin.x),
                    fmt(-e.origin.y.to_f64()),
                    num(&e.terminus.x),
                    fmt(-e.terminus.y.to_f64()),
                    fmt(w),
                    fmt(3.0 * w)
                );
            }
            out.push_str("  </g>\n");
        }
        if layers.dual {
            out.push_str("  <g id=\"dual\">\n");
            let centroids: Vec<Coord> = c.subdivision.cells.iter().map(|p| p.centroid()).collect();
            for e in &c.dual.edges {
                let v = scene.matching.coord(e.vertex);
                let _ = writeln!(
                    out,
                    "    <polyline points=\"{} {} {}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
                    point(&centroids[e.left]),
                    point(&v),
                    point(&centroids[e.right]),
                    color_name(e.color),
                    fmt(w)
                );
            }
            for (i, ctr) in centroids.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "    <circle id=\"cell-{i}\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
                    num(&ctr.x),
                    fmt(-ctr.y.to_f64()),
                    fmt(2.0 * w)
                );
            }
            out.push_str("  </g>\n");
        }
    }

    if layers.segments {
        out.push_str("  <g id=\"segments\">\n");
        segment_lines(&mut out, scene.matching, "black", 2.0 * w, None);
        for p in scene.matching.vertex_ids() {
            let c = scene.matching.coord(p);
            let _ = writeln!(
                out,
                "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"black\"/>",
                num(&c.x),
                fmt(-c.y.to_f64()),
                fmt(2.5 * w)
            );
        }
        out.push_str("  </g>\n");
    }
    if !scene.overlays.is_empty() {
        out.push_str("  <g id=\"output\">\n");
        for (m, stroke) in &scene.overlays {
            segment_lines(&mut out, m, stroke, 1.5 * w, Some(4.0 * w));
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use geomatch::geom::PointSet;
    use std::sync::Arc;

    #[test]
    fn layer_parsing() {
        assert_eq!("all".parse::<Layers>().unwrap(), Layers::default());
        let l: Layers = "segments, dual".parse().unwrap();
        assert!(l.segments && l.dual && !l.cells && !l.extensions);
        assert!("segments,bogus".parse::<Layers>().is_err());
    }

    #[test]
    fn fixed_precision() {
        assert_eq!(num(&Scalar::ratio(1, 3)), "0.333333333333");
        assert_eq!(fmt(-0.0), "0.000000000000");
    }

    #[test]
    fn plain_matching() {
        let ps = PointSet::from_coords([Coord::new(0, 0), Coord::new(2, 1)]);
        let m = Matching::new(Arc::new(ps), [(0, 1)]).unwrap();
        let scene = Scene { matching: &m, overlays: vec![], colored: None };
        let text = svg(&scene, &Layers::default(), &scene.extent());
        assert!(text.starts_with("<svg") && text.ends_with("</svg>\n"));
        assert_eq!(text.matches("<line").count(), 1);
        assert!(!text.contains("id=\"cells\""));
    }
}
