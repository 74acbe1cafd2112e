//! Deterministic SVG output for balls, polygons, evolutes and cycloids.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::ball::PolygonBall;
use crate::error::{CycloidError, Result};
use crate::evolute::{double_evolute_vertices, evolute_vertices};
use crate::geom::Point;
use crate::radii::{vertices_from_support, RadiiVector};
use crate::spectrum::{cusp_report, Cycloid, CycloidSpectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RenderWhat {
    Ball,
    Dual,
    Polygon,
    Evolute,
    DoubleEvolute,
    CycloidGallery,
    Spiral,
}

impl RenderWhat {
    pub const ALL: [RenderWhat; 7] = [
        RenderWhat::Ball,
        RenderWhat::Dual,
        RenderWhat::Polygon,
        RenderWhat::Evolute,
        RenderWhat::DoubleEvolute,
        RenderWhat::CycloidGallery,
        RenderWhat::Spiral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RenderWhat::Ball => "ball",
            RenderWhat::Dual => "dual",
            RenderWhat::Polygon => "polygon",
            RenderWhat::Evolute => "evolute",
            RenderWhat::DoubleEvolute => "double_evolute",
            RenderWhat::CycloidGallery => "cycloid_gallery",
            RenderWhat::Spiral => "spiral",
        }
    }
}

impl fmt::Display for RenderWhat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RenderWhat {
    type Err = CycloidError;

    fn from_str(s: &str) -> Result<Self> {
        RenderWhat::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| CycloidError::InvalidRenderSpec(format!("unknown figure `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub what: RenderWhat,
    /// Pixels per unit.
    pub scale: f64,
    pub stroke: String,
    pub stroke_width: f64,
    /// Fill for closed layers; `None` leaves them unfilled.
    pub fill: Option<String>,
    pub cusp_markers: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            what: RenderWhat::Polygon,
            scale: 100.0,
            stroke: "black".into(),
            stroke_width: 1.5,
            fill: None,
            cusp_markers: true,
        }
    }
}

impl RenderSpec {
    pub fn new(what: RenderWhat) -> Self {
        Self {
            what,
            ..Self::default()
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(CycloidError::InvalidRenderSpec(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if !(self.stroke_width.is_finite() && self.stroke_width >= 0.0) {
            return Err(CycloidError::InvalidRenderSpec(format!(
                "stroke width must be non-negative, got {}",
                self.stroke_width
            )));
        }
        Ok(())
    }
}

/// One polyline or polygon of a figure.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub points: Vec<Point>,
    pub closed: bool,
    /// Overrides the spec's stroke colour.
    pub stroke: Option<String>,
    pub cusps: Vec<Point>,
}

impl Layer {
    pub fn open(points: Vec<Point>) -> Self {
        Self {
            points,
            closed: false,
            stroke: None,
            cusps: Vec::new(),
        }
    }

    pub fn closed(points: Vec<Point>) -> Self {
        Self {
            closed: true,
            ..Self::open(points)
        }
    }

    pub fn with_stroke(mut self, stroke: &str) -> Self {
        self.stroke = Some(stroke.to_string());
        self
    }

    pub fn with_cusps(mut self, cusps: Vec<Point>) -> Self {
        self.cusps = cusps;
        self
    }
}

/// Number with 9 significant digits, trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// SVG 1.1 document with every layer, fitted into a view box with a 5% margin.
pub fn render_svg(layers: &[Layer], spec: &RenderSpec) -> Result<String> {
    spec.check()?;
    if layers.is_empty() || layers.iter().any(|l| l.points.len() < 2) {
        return Err(CycloidError::EmptyInput);
    }
    let all = layers.iter().flat_map(|l| l.points.iter().chain(&l.cusps));
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in all {
        if !p.x.is_finite() || !p.y.is_finite() {
            return Err(CycloidError::InvalidRenderSpec(
                "non-finite coordinate".into(),
            ));
        }
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let extent = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let margin = 0.05 * extent;
    let width = (max_x - min_x + 2.0 * margin) * spec.scale;
    let height = (max_y - min_y + 2.0 * margin) * spec.scale;
    let to_px = |p: &Point| {
        (
            (p.x - min_x + margin) * spec.scale,
            (max_y - p.y + margin) * spec.scale,
        )
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = fmt_num(width),
        h = fmt_num(height)
    );
    let marker_r = fmt_num(0.012 * extent * spec.scale);
    for layer in layers {
        let stroke = layer.stroke.as_deref().unwrap_or(&spec.stroke);
        let fill = match (&spec.fill, layer.closed) {
            (Some(f), true) => f.as_str(),
            _ => "none",
        };
        let pts: Vec<String> = layer
            .points
            .iter()
            .map(|p| {
                let (x, y) = to_px(p);
                format!("{},{}", fmt_num(x), fmt_num(y))
            })
            .collect();
        let tag = if layer.closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            out,
            "  <{tag} points=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
            pts.join(" "),
            fmt_num(spec.stroke_width)
        );
        if spec.cusp_markers {
            for c in &layer.cusps {
                let (x, y) = to_px(c);
                let _ = writeln!(
                    out,
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"{marker_r}\" fill=\"red\"/>",
                    fmt_num(x),
                    fmt_num(y)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Drops the repeated closing point of a closed vertex list.
fn strip_closing(mut pts: Vec<Point>, closed: bool) -> Vec<Point> {
    if closed && pts.len() > 1 {
        pts.pop();
    }
    pts
}

pub fn ball_layer(ball: &PolygonBall) -> Layer {
    Layer::closed(ball.base().vertices().to_vec())
}

pub fn dual_layers(ball: &PolygonBall) -> Vec<Layer> {
    vec![
        ball_layer(ball),
        Layer::closed(ball.base().dual().vertices.clone()).with_stroke("steelblue"),
    ]
}

/// Cusp positions of `r`: the vertex after the last non-zero radius before
/// each sign change.
fn cusp_points(r: &RadiiVector, vertices: &[Point]) -> Vec<Point> {
    match cusp_report(r.values(), r.is_closed(), r.ball().tolerances().cusp_zero) {
        Ok(rep) => rep
            .crossings
            .iter()
            .map(|(a, _)| vertices[(a + 1) % vertices.len()])
            .collect(),
        Err(_) => Vec::new(),
    }
}

/// The polygon with radii `r` starting at `start`, with its cusps.
pub fn polygon_layer(r: &RadiiVector, start: Point) -> Layer {
    let closed = r.is_closed();
    let pts = r.reconstruct_vertices(start);
    let cusps = cusp_points(r, &pts);
    let pts = strip_closing(pts, closed);
    let layer = if closed {
        Layer::closed(pts)
    } else {
        Layer::open(pts)
    };
    layer.with_cusps(cusps)
}

pub fn evolute_layers(r: &RadiiVector, start: Point) -> Vec<Layer> {
    let closed = r.is_closed();
    let e = strip_closing(evolute_vertices(r, start), closed);
    vec![
        polygon_layer(r, start),
        Layer {
            points: e,
            closed,
            stroke: Some("steelblue".into()),
            cusps: Vec::new(),
        },
    ]
}

pub fn double_evolute_layers(r: &RadiiVector, start: Point) -> Vec<Layer> {
    let closed = r.is_closed();
    let f = strip_closing(double_evolute_vertices(r, start), closed);
    vec![
        polygon_layer(r, start),
        Layer {
            points: f,
            closed,
            stroke: Some("darkgreen".into()),
            cusps: Vec::new(),
        },
    ]
}

/// A cycloid drawn in its natural position: closed cycloids are placed by the
/// support function `h = r / (1 - lambda)`, open ones start at the origin.
pub fn cycloid_layer(c: &Cycloid) -> Layer {
    let r = &c.radii;
    if r.is_closed() && (1.0 - c.eigenvalue).abs() > 1e-9 {
        let h: Vec<f64> = r
            .values()
            .iter()
            .map(|x| x / (1.0 - c.eigenvalue))
            .collect();
        if let Ok(pts) = vertices_from_support(&h, r.ball()) {
            let cusps = cusp_points(r, &pts);
            return Layer::closed(pts).with_cusps(cusps);
        }
    }
    polygon_layer(r, Point::zeros())
}

/// File name of a gallery entry; unbranched labels use branch `0`.
pub fn gallery_file_name(c: &Cycloid) -> String {
    format!(
        "cycloid_k{}_{}.svg",
        c.label.file_text(),
        c.label.branch.unwrap_or(0)
    )
}

/// One SVG per cycloid, each with a faint overlay of the ball.
pub fn render_gallery(
    spectrum: &CycloidSpectrum,
    spec: &RenderSpec,
) -> Result<Vec<(String, String)>> {
    let ball = ball_layer(spectrum.ball()).with_stroke("#bbbbbb");
    spectrum
        .cycloids()
        .iter()
        .map(|c| {
            let svg = render_svg(&[ball.clone(), cycloid_layer(c)], spec)?;
            Ok((gallery_file_name(c), svg))
        })
        .collect()
}
