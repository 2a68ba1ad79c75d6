use std::fmt::Write;

use crate::floorplan::Floorplan;

#[derive(Debug, Clone, Copy)]
pub struct SvgOptions {
    /// Pixels per length unit.
    pub scale: f64,
    /// Also draw extra and padding rooms.
    pub debug: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 20.0,
            debug: false,
        }
    }
}

const FILLS: [&str; 10] = [
    "#f2d0a9", "#c9e4ca", "#b8d8f0", "#f5c6d6", "#e4d9f2", "#fff1a8", "#cde6e0", "#f6d8c2",
    "#d6e2b5", "#d9d9d9",
];

/// Fixed-point number without trailing zeros.
fn num(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// SVG 1.1 drawing: one `rect` per room part, parts of a room sharing one
/// fill class, the label in the room's largest part. The y axis points up
/// in the floorplan and down in the picture.
pub fn emit_svg(f: &Floorplan, opts: SvgOptions) -> String {
    let k = opts.scale;
    let b = f.bbox;
    let (w, h) = (b.w * k, b.h * k);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="-2 -2 {} {}">"#,
        num(w + 4.0),
        num(h + 4.0),
        num(w + 4.0),
        num(h + 4.0)
    );
    out.push_str("<style>\n");
    out.push_str("rect { stroke: #333; stroke-width: 1.5; }\n");
    out.push_str("text { font: 12px sans-serif; text-anchor: middle; dominant-baseline: middle; }\n");
    out.push_str(".extra { fill: #f28b82; fill-opacity: 0.5; stroke-dasharray: 4 2; }\n");
    for (i, fill) in FILLS.iter().enumerate() {
        let _ = writeln!(out, ".fill{i} {{ fill: {fill}; }}");
    }
    out.push_str("</style>\n");
    for (ri, room) in f.rooms.iter().enumerate() {
        if room.extra && !opts.debug {
            continue;
        }
        let class = if room.extra {
            "extra".to_string()
        } else {
            format!("fill{}", ri % FILLS.len())
        };
        let _ = writeln!(out, r#"<g id="room-{}">"#, escape(&room.id));
        for r in &room.rects {
            let _ = writeln!(
                out,
                r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}"/>"#,
                num((r.x - b.x) * k),
                num((b.top() - r.top()) * k),
                num(r.w * k),
                num(r.h * k)
            );
        }
        if let Some(big) = room
            .rects
            .iter()
            .max_by(|p, q| p.area().partial_cmp(&q.area()).unwrap())
        {
            let name = room.label.as_deref().unwrap_or(&room.id);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{}</text>"#,
                num((big.x + big.w / 2.0 - b.x) * k),
                num((b.top() - big.y - big.h / 2.0) * k),
                escape(name)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
