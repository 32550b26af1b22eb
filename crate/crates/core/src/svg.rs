//! SVG rendering of assemblies. Output depends only on the input.

use std::fmt::Write as _;

use crate::atam::{Assembly, Direction, Glue, Tas};

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One `scale`-pixel square per tile with its name in the middle and glue
/// labels along the edges. Strength-2 edges are drawn as double lines. North
/// is up.
pub fn render_svg(tas: &Tas, assembly: &Assembly, scale: u32) -> String {
    let scale = scale.max(8) as i64;
    let mut out = String::new();
    let Some((lo, hi)) = assembly.bounds() else {
        writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="0" height="0"></svg>"#).unwrap();
        return out;
    };
    let width = (hi.x - lo.x + 1) * scale;
    let height = (hi.y - lo.y + 1) * scale;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    let font = (scale / 5).max(4);
    let small = (scale / 8).max(3);
    for (pos, tile) in assembly.cells() {
        let t = &tas.tiles()[tile];
        let x0 = (pos.x - lo.x) * scale;
        let y0 = (hi.y - pos.y) * scale;
        let fill = if tile == tas.seed() { "#d9d9d9" } else { "#ffffff" };
        writeln!(
            out,
            r##"<rect class="tile" x="{x0}" y="{y0}" width="{scale}" height="{scale}" fill="{fill}" stroke="#999999" stroke-width="1"/>"##
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="{font}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            x0 + scale / 2,
            y0 + scale / 2,
            escape(t.name())
        )
        .unwrap();
        for d in Direction::ALL {
            let side = t.side(d);
            let Glue::Label(label) = side.glue() else { continue };
            // edge endpoints, inset so neighboring tiles' edges stay apart
            let inset = 3;
            let (x1, y1, x2, y2) = match d {
                Direction::N => (x0, y0 + inset, x0 + scale, y0 + inset),
                Direction::S => (x0, y0 + scale - inset, x0 + scale, y0 + scale - inset),
                Direction::E => (x0 + scale - inset, y0, x0 + scale - inset, y0 + scale),
                Direction::W => (x0 + inset, y0, x0 + inset, y0 + scale),
            };
            let (dx, dy) = match d {
                Direction::N | Direction::S => (0, 2),
                Direction::E | Direction::W => (2, 0),
            };
            writeln!(out, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#000000" stroke-width="1"/>"##)
                .unwrap();
            if side.strength() == 2 {
                let (x1, y1, x2, y2) = match d {
                    Direction::N | Direction::W => (x1 + dx, y1 + dy, x2 + dx, y2 + dy),
                    Direction::S | Direction::E => (x1 - dx, y1 - dy, x2 - dx, y2 - dy),
                };
                writeln!(out, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#000000" stroke-width="1"/>"##)
                    .unwrap();
            }
            let (lx, ly) = match d {
                Direction::N => (x0 + scale / 2, y0 + scale / 5),
                Direction::S => (x0 + scale / 2, y0 + scale - scale / 6),
                Direction::E => (x0 + scale - scale / 5, y0 + scale / 3),
                Direction::W => (x0 + scale / 5, y0 + scale / 3),
            };
            writeln!(
                out,
                r#"<text x="{lx}" y="{ly}" font-size="{small}" text-anchor="middle">{}:{}</text>"#,
                escape(label),
                side.strength()
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atam::sample_sequence;
    use crate::corpus;

    #[test]
    fn one_square_per_tile() {
        let tas = corpus::elbow();
        let seed_only = render_svg(&tas, &tas.seed_assembly(), 40);
        assert_eq!(seed_only.matches(r#"class="tile""#).count(), 1);
        let full = sample_sequence(&tas, 0, 10).replay(&tas).unwrap();
        let svg = render_svg(&tas, &full, 40);
        assert_eq!(svg.matches(r#"class="tile""#).count(), 4);
        assert_eq!(svg, render_svg(&tas, &full, 40));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }

    #[test]
    fn strength_two_edges_are_doubled() {
        let tas = corpus::elbow();
        let svg = render_svg(&tas, &tas.seed_assembly(), 40);
        // the seed's two strength-2 sides give four lines
        assert_eq!(svg.matches("<line").count(), 4);
        let tr = tas.tile_index("tR").unwrap();
        let a: Assembly = [(crate::atam::Pos::ORIGIN, tr)].into_iter().collect();
        // tR: W=a:2 doubled, N=c:1 single
        assert_eq!(render_svg(&tas, &a, 40).matches("<line").count(), 3);
    }

    #[test]
    fn layout_follows_positions() {
        let tas = corpus::elbow();
        let full = sample_sequence(&tas, 0, 10).replay(&tas).unwrap();
        let svg = render_svg(&tas, &full, 50);
        assert!(svg.contains(r#"width="100" height="100""#));
        // the seed sits bottom-left
        assert!(svg.contains(r##"<rect class="tile" x="0" y="50" width="50" height="50" fill="#d9d9d9""##));
    }
}
