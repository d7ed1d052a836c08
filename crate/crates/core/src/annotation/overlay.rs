//! Deterministic SVG rendering of a document and its analysis.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::{AnalysisReport, AnnotationDocument};
use crate::geometry::{Point2, Verdict};

const PADDING: f64 = 40.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf",
];

/// Renders annotations and estimates as SVG. The canvas grows to include
/// finite estimates within ten image sizes of the image; points at infinity
/// are not drawn. Output depends only on the inputs.
pub fn render_overlay(doc: &AnnotationDocument, report: &AnalysisReport) -> String {
    let w = doc.image_size.width as f64;
    let h = doc.image_size.height as f64;
    let reach = 10.0 * doc.image_size.max_dim();
    let in_reach = |p: &Point2| p.x.abs() <= w + reach && p.y.abs() <= h + reach;

    let mut marks: Vec<Point2> = vec![Point2::new(0.0, 0.0), Point2::new(w, h)];
    let finite_vps: Vec<(String, Point2)> = report
        .vanishing_points
        .iter()
        .filter_map(|g| Some((g.group.clone(), g.estimate.as_ref()?.location.as_finite()?)))
        .filter(|(_, p)| in_reach(p))
        .collect();
    marks.extend(finite_vps.iter().map(|(_, p)| *p));
    let light = report
        .shadows
        .as_ref()
        .and_then(|s| s.estimate.as_ref()?.light_projection.as_finite())
        .filter(in_reach);
    let mirror = report
        .reflections
        .as_ref()
        .and_then(|r| r.result.as_ref()?.intersection.as_finite())
        .filter(in_reach);
    marks.extend(light.iter().chain(mirror.iter()).copied());

    let min_x = marks.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) - PADDING;
    let min_y = marks.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) - PADDING;
    let max_x = marks.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max) + PADDING;
    let max_y = marks.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max) + PADDING;
    let canvas = Canvas {
        min_x,
        min_y,
        max_x,
        max_y,
    };

    let violations: BTreeSet<&str> = report
        .point_on_line
        .iter()
        .filter(|c| c.verdict.verdict == Verdict::Inconsistent)
        .map(|c| c.group.as_str())
        .collect();

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(min_x),
        num(min_y),
        num(max_x - min_x),
        num(max_y - min_y),
        num(max_x - min_x),
        num(max_y - min_y)
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&doc.image_ref));
    let _ = writeln!(
        out,
        r##"<rect class="image" x="0.000" y="0.000" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        num(w),
        num(h)
    );

    for (k, g) in doc.line_groups.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let _ = writeln!(
            out,
            r#"<g class="line-group" data-group="{}" stroke="{colour}">"#,
            escape(&g.id)
        );
        let vp = finite_vps
            .iter()
            .find(|(id, _)| id == &g.id)
            .map(|(_, p)| *p);
        for s in &g.segments {
            line(&mut out, "segment", s.p, s.q, "stroke-width=\"2\"");
            if let Some(v) = vp {
                line(
                    &mut out,
                    "extension",
                    s.midpoint(),
                    v,
                    "stroke-width=\"1\" stroke-dasharray=\"6 4\"",
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }

    for (id, p) in &finite_vps {
        let class = if violations.contains(id.as_str()) {
            "vp vp-violation"
        } else {
            "vp"
        };
        let colour = if violations.contains(id.as_str()) {
            "#d62728"
        } else {
            "#222"
        };
        let _ = writeln!(
            out,
            r#"<circle class="{class}" data-group="{}" cx="{}" cy="{}" r="6" fill="none" stroke="{colour}"/>"#,
            escape(id),
            num(p.x),
            num(p.y)
        );
    }

    for entry in &report.vanishing_lines {
        let Some(est) = &entry.estimate else { continue };
        if let Some((a, b)) = canvas.clip(est.line) {
            let colour = if entry.verdict.verdict == Verdict::Inconsistent {
                "#d62728"
            } else {
                "#555"
            };
            line(
                &mut out,
                "vanishing-line",
                a,
                b,
                &format!(
                    "stroke=\"{colour}\" stroke-width=\"1.5\" data-plane-group=\"{}\"",
                    escape(&entry.plane_group)
                ),
            );
        }
    }

    if !doc.shadow_pairs.is_empty() {
        let _ = writeln!(out, r##"<g class="shadows" stroke="#e377c2">"##);
        for c in &doc.shadow_pairs {
            line(
                &mut out,
                "shadow-pair",
                c.shadow_point,
                c.object_point,
                "stroke-width=\"2\"",
            );
            if let Some(l) = light {
                line(
                    &mut out,
                    "extension",
                    c.object_point,
                    l,
                    "stroke-width=\"1\" stroke-dasharray=\"6 4\"",
                );
            }
        }
        let _ = writeln!(out, "</g>");
        if let Some(l) = light {
            marker(&mut out, "light", l, "#e377c2");
        }
    }

    if !doc.reflection_pairs.is_empty() {
        let _ = writeln!(out, r##"<g class="reflections" stroke="#bcbd22">"##);
        for c in &doc.reflection_pairs {
            line(
                &mut out,
                "reflection-pair",
                c.scene_point,
                c.reflection_point,
                "stroke-width=\"2\"",
            );
            if let Some(m) = mirror {
                let near = if c.scene_point.distance(&m) < c.reflection_point.distance(&m) {
                    c.scene_point
                } else {
                    c.reflection_point
                };
                line(
                    &mut out,
                    "extension",
                    near,
                    m,
                    "stroke-width=\"1\" stroke-dasharray=\"6 4\"",
                );
            }
        }
        let _ = writeln!(out, "</g>");
        if let Some(m) = mirror {
            marker(&mut out, "mirror-vp", m, "#bcbd22");
        }
    }

    if !report.checks.is_empty() {
        let _ = writeln!(
            out,
            r#"<text class="verdict" x="{}" y="{}" font-family="monospace" font-size="14">{}</text>"#,
            num(0.0),
            num(-8.0),
            report.overall_verdict
        );
    }
    out.push_str("</svg>\n");
    out
}

struct Canvas {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Canvas {
    /// Portion of the line `a·x + b·y + c = 0` inside the canvas.
    fn clip(&self, [a, b, c]: [f64; 3]) -> Option<(Point2, Point2)> {
        let mut hits = Vec::new();
        if b.abs() > 1e-12 {
            for x in [self.min_x, self.max_x] {
                let y = -(a * x + c) / b;
                if (self.min_y..=self.max_y).contains(&y) {
                    hits.push(Point2::new(x, y));
                }
            }
        }
        if a.abs() > 1e-12 {
            for y in [self.min_y, self.max_y] {
                let x = -(b * y + c) / a;
                if (self.min_x..=self.max_x).contains(&x) {
                    hits.push(Point2::new(x, y));
                }
            }
        }
        let first = *hits.first()?;
        let far = hits
            .iter()
            .copied()
            .max_by(|p, q| p.distance(&first).total_cmp(&q.distance(&first)))?;
        (far.distance(&first) > 0.0).then_some((first, far))
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

fn line(out: &mut String, class: &str, a: Point2, b: Point2, attrs: &str) {
    let _ = writeln!(
        out,
        r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" {attrs}/>"#,
        num(a.x),
        num(a.y),
        num(b.x),
        num(b.y)
    );
}

fn marker(out: &mut String, class: &str, p: Point2, colour: &str) {
    let _ = writeln!(
        out,
        r#"<circle class="{class}" cx="{}" cy="{}" r="8" fill="{colour}" fill-opacity="0.4" stroke="{colour}"/>"#,
        num(p.x),
        num(p.y)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
