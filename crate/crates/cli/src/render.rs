//! SVG drawings of polygons and reduction traces. Output depends only on
//! the input, so identical invocations give identical bytes.

use std::fmt::Write;

use latgon::typeclass::{type_figure, ReductionTrace, Tag};
use latgon::{Line, LatticePolygon, Point, Segment};

const MARGIN: i64 = 1;
const GAP: i64 = 20;
const TITLE: i64 = 24;

/// Integer box of lattice coordinates shown in one panel.
#[derive(Clone, Copy)]
struct View {
    x_min: i64,
    x_max: i64,
    y_min: i64,
    y_max: i64,
    scale: i64,
}

impl View {
    fn around(points: impl IntoIterator<Item = Point>, scale: i64) -> View {
        let mut v = View { x_min: i64::MAX, x_max: i64::MIN, y_min: i64::MAX, y_max: i64::MIN, scale };
        for p in points {
            v.x_min = v.x_min.min(p.x);
            v.x_max = v.x_max.max(p.x);
            v.y_min = v.y_min.min(p.y);
            v.y_max = v.y_max.max(p.y);
        }
        v.x_min -= MARGIN;
        v.x_max += MARGIN;
        v.y_min -= MARGIN;
        v.y_max += MARGIN;
        v
    }

    fn width(&self) -> i64 {
        (self.x_max - self.x_min) * self.scale
    }

    fn height(&self) -> i64 {
        (self.y_max - self.y_min) * self.scale
    }

    // y grows downward in SVG
    fn px(&self, p: Point) -> (i64, i64) {
        ((p.x - self.x_min) * self.scale, (self.y_max - p.y) * self.scale)
    }

    /// End points of the part of `l` inside the view, in pixels.
    fn clip(&self, l: &Line) -> Option<((f64, f64), (f64, f64))> {
        let s = self.scale as f64;
        let to_px = |x: f64, y: f64| ((x - self.x_min as f64) * s, (self.y_max as f64 - y) * s);
        if l.b == 0 {
            let x = l.c as f64 / l.a as f64;
            if x < self.x_min as f64 || x > self.x_max as f64 {
                return None;
            }
            return Some((to_px(x, self.y_min as f64), to_px(x, self.y_max as f64)));
        }
        let y_at = |x: f64| (l.c as f64 - l.a as f64 * x) / l.b as f64;
        let (x0, x1) = (self.x_min as f64, self.x_max as f64);
        Some((to_px(x0, y_at(x0)), to_px(x1, y_at(x1))))
    }
}

fn path(view: &View, p: &LatticePolygon) -> String {
    let mut d = String::new();
    for (i, &v) in p.vertices().iter().enumerate() {
        let (x, y) = view.px(v);
        let _ = write!(d, "{}{x} {y} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

fn figure_points(tag: Option<Tag>, n: Option<i64>) -> Vec<Point> {
    match (tag, n) {
        (Some(t), Some(n)) => type_figure(t, n).splitting.iter().flat_map(|s| [s.a, s.b]).collect(),
        _ => Vec::new(),
    }
}

/// One panel: integer grid dots, nZ² dots, the type's lines and segments,
/// then the polygon on top.
fn panel(out: &mut String, view: &View, p: &LatticePolygon, n: Option<i64>, tag: Option<Tag>) {
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{}" height="{}" fill="white" stroke="#ccc"/>"##, view.width(), view.height());
    out.push_str("<g fill=\"#bbb\">\n");
    for x in view.x_min..=view.x_max {
        for y in view.y_min..=view.y_max {
            let (cx, cy) = view.px(Point::new(x, y));
            let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="1"/>"#);
        }
    }
    out.push_str("</g>\n");
    if let Some(n) = n {
        out.push_str("<g class=\"lattice\" fill=\"#c03\">\n");
        let lo = |v: i64| v.div_euclid(n) * n;
        let mut x = lo(view.x_min);
        while x <= view.x_max {
            let mut y = lo(view.y_min);
            while y <= view.y_max {
                if x >= view.x_min && y >= view.y_min {
                    let (cx, cy) = view.px(Point::new(x, y));
                    let _ = writeln!(out, r#"<circle cx="{cx}" cy="{cy}" r="3"/>"#);
                }
                y += n;
            }
            x += n;
        }
        out.push_str("</g>\n");
        if let Some(tag) = tag {
            let fig = type_figure(tag, n);
            for l in &fig.non_splitting {
                line(out, view, l, "non-splitting", "stroke-width=\"1\"");
            }
            for l in &fig.disjoint {
                line(out, view, l, "disjoint", "stroke-width=\"1\" stroke-dasharray=\"2 4\"");
            }
            for s in &fig.splitting {
                segment(out, view, s);
            }
        }
    }
    let _ = writeln!(
        out,
        r##"<path class="polygon" d="{}" fill="#36c" fill-opacity="0.25" stroke="#036" stroke-width="2"/>"##,
        path(view, p)
    );
}

fn line(out: &mut String, view: &View, l: &Line, class: &str, style: &str) {
    if let Some(((x1, y1), (x2, y2))) = view.clip(l) {
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" {style}/>"#
        );
    }
}

fn segment(out: &mut String, view: &View, s: &Segment) {
    let (x1, y1) = view.px(s.a);
    let (x2, y2) = view.px(s.b);
    let _ = writeln!(
        out,
        r#"<line class="splitting" data-from="{}" data-to="{}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="4"/>"#,
        s.a, s.b
    );
}

fn document(width: i64, height: i64, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         {body}</svg>\n"
    )
}

pub fn render_polygon(p: &LatticePolygon, n: Option<i64>, tag: Option<Tag>, scale: i64) -> String {
    let mut pts: Vec<Point> = p.vertices().to_vec();
    pts.extend(figure_points(tag, n));
    let view = View::around(pts, scale);
    let mut body = String::new();
    panel(&mut body, &view, p, n, tag);
    document(view.width(), view.height(), &body)
}

/// The input followed by one panel per step, left to right, all drawn at
/// the same coordinates so the panels can be compared. The last panel shows
/// the segments of the result type.
pub fn render_trace(trace: &ReductionTrace, scale: i64) -> String {
    let n = trace.result.n;
    let mut panels: Vec<(String, &LatticePolygon)> = vec![("input".to_string(), &trace.input)];
    for (i, s) in trace.steps.iter().enumerate() {
        let label = serde_json::to_value(s.label).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        let title = match s.a {
            Some(a) => format!("{}. {label} a={a}", i + 1),
            None => format!("{}. {label}", i + 1),
        };
        panels.push((title, &s.polygon));
    }
    let mut pts: Vec<Point> = panels.iter().flat_map(|(_, p)| p.vertices().iter().copied()).collect();
    pts.extend(figure_points(Some(trace.result.tag), Some(n)));
    let view = View::around(pts, scale);
    let mut body = String::new();
    let last = panels.len() - 1;
    for (i, (title, p)) in panels.iter().enumerate() {
        let x = i as i64 * (view.width() + GAP);
        let _ = writeln!(body, r#"<g class="panel" transform="translate({x},{TITLE})">"#);
        let tag = if i == last { Some(trace.result.tag) } else { None };
        panel(&mut body, &view, p, Some(n), tag);
        body.push_str("</g>\n");
        let title = if i == last { format!("{title} → {}", trace.result) } else { title.clone() };
        let _ = writeln!(body, r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">{title}</text>"#, x + 4, TITLE - 8);
    }
    let width = panels.len() as i64 * (view.width() + GAP) - GAP;
    document(width, view.height() + TITLE, &body)
}
