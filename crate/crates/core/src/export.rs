//! DOT, JSON and SVG renderings of a model.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::GraphModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Json,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Symbol {
    #[default]
    Circle,
    Square,
    Triangle,
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "circle" => Ok(Symbol::Circle),
            "square" => Ok(Symbol::Square),
            "triangle" => Ok(Symbol::Triangle),
            other => Err(Error::InvalidArgument(format!("unknown symbol {other:?}"))),
        }
    }
}

/// Vertex styling. Highlighted vertices take colours from `highlight_colours`
/// in turn, recycling the list when it is shorter.
#[derive(Clone, Debug, PartialEq)]
pub struct Style {
    pub highlight: Vec<usize>,
    pub highlight_colours: Vec<String>,
    pub discrete_colour: String,
    pub continuous_colour: String,
    pub discrete_symbol: Symbol,
    pub continuous_symbol: Symbol,
    /// Vertex radius in SVG pixels.
    pub radius: f64,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            highlight: Vec::new(),
            highlight_colours: vec!["red".into()],
            discrete_colour: "black".into(),
            continuous_colour: "grey".into(),
            discrete_symbol: Symbol::Circle,
            continuous_symbol: Symbol::Circle,
            radius: 6.0,
        }
    }
}

impl Style {
    fn fill(&self, g: &GraphModel, v: usize) -> &str {
        if let Some(i) = self.highlight.iter().position(|&h| h == v) {
            if !self.highlight_colours.is_empty() {
                return &self.highlight_colours[i % self.highlight_colours.len()];
            }
        }
        if g.num_cat()[v - 1] > 0 {
            &self.discrete_colour
        } else {
            &self.continuous_colour
        }
    }

    fn symbol(&self, g: &GraphModel, v: usize) -> Symbol {
        if g.num_cat()[v - 1] > 0 {
            self.discrete_symbol
        } else {
            self.continuous_symbol
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn to_dot(g: &GraphModel, style: &Style) -> String {
    let mut out = String::from("graph G {\n  node [style=filled, fontcolor=white];\n");
    for v in 1..=g.p() {
        let shape = match style.symbol(g, v) {
            Symbol::Circle => "circle",
            Symbol::Square => "box",
            Symbol::Triangle => "triangle",
        };
        let _ = writeln!(
            out,
            "  {v} [label=\"{}\", shape={shape}, fillcolor=\"{}\"];",
            escape(&g.vert_names()[v - 1]),
            escape(style.fill(g, v))
        );
    }
    for e in g.edges() {
        let _ = writeln!(out, "  {} -- {};", e.u, e.v);
    }
    out.push_str("}\n");
    out
}

const CANVAS: f64 = 500.0;
const MARGIN: f64 = 20.0;

pub fn to_svg(g: &GraphModel, coords: Option<&[(f64, f64)]>, style: &Style) -> Result<String> {
    let coords = coords.ok_or_else(|| Error::InvalidArgument("svg export requires coordinates".into()))?;
    if coords.len() != g.p() {
        return Err(Error::InvalidArgument(format!("{} coordinates for {} vertices", coords.len(), g.p())));
    }
    let span = CANVAS - 2.0 * MARGIN;
    let at = |v: usize| {
        let (x, y) = coords[v - 1];
        (MARGIN + x * span, MARGIN + (1.0 - y) * span)
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">\n"
    );
    for e in g.edges() {
        let ((x1, y1), (x2, y2)) = (at(e.u), at(e.v));
        let _ = writeln!(
            out,
            "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"black\"/>"
        );
    }
    let r = style.radius;
    for v in 1..=g.p() {
        let (x, y) = at(v);
        let fill = xml_escape(style.fill(g, v));
        let shape = match style.symbol(g, v) {
            Symbol::Circle => format!("<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{r}\" fill=\"{fill}\"/>"),
            Symbol::Square => format!(
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>",
                x - r,
                y - r,
                2.0 * r,
                2.0 * r
            ),
            Symbol::Triangle => format!(
                "<polygon points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\" fill=\"{fill}\"/>",
                x,
                y - r,
                x - r,
                y + r,
                x + r,
                y + r
            ),
        };
        let _ = writeln!(out, "  <g id=\"v{v}\">{shape}<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"10\">{}</text></g>",
            x + r + 2.0,
            y + 3.0,
            xml_escape(&g.vert_names()[v - 1]));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders `g` in the requested format.
pub fn export(g: &GraphModel, coords: Option<&[(f64, f64)]>, format: Format, style: &Style) -> Result<String> {
    match format {
        Format::Dot => Ok(to_dot(g, style)),
        Format::Json => g.to_json(),
        Format::Svg => to_svg(g, coords, style),
    }
}
