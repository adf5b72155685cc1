//! Byte-deterministic image writers.
//!
//! PPM: plain `P3`, header `P3\n<w> <h>\n255\n`, one pixel per cell in
//! row-major order, each pixel `r g b`, pixels separated by one space and a
//! newline after every row. The background is white, layers are painted in
//! order (last on top), and markers are painted last as a black 8-arm
//! asterisk of radius 2 cells.
//!
//! SVG: version 1.1, `viewBox` equal to the bounding box in complex-plane
//! units with the imaginary axis flipped (`y = -im`). A white background
//! rect, then one `<g>` per layer holding one `<rect>` per set cell, then a
//! `<g id="markers">` with one asterisk `<path>` per marker. Numbers use the
//! shortest round-trip decimal form; `-0` is written as `0`.

use std::fmt::Write as _;

use super::grid::{Canvas, RasterGrid};
use crate::error::Result;
use crate::linalg::ComplexScalar;
use crate::regions::RegionKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const WHITE: Rgb = Rgb(0xFF, 0xFF, 0xFF);
    pub const BLACK: Rgb = Rgb(0, 0, 0);

    pub fn hex(&self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}

/// Fixed layer color of each inclusion set.
pub fn set_color(kind: RegionKind) -> Rgb {
    match kind {
        RegionKind::Gersh | RegionKind::GershDisk(_) => Rgb(0xDD, 0xDD, 0xDD),
        RegionKind::Brauer | RegionKind::BrauerOval(..) => Rgb(0xAA, 0xCC, 0xEE),
        RegionKind::Omega => Rgb(0x88, 0xBB, 0x88),
        RegionKind::Phi | RegionKind::PhiPair(..) => Rgb(0x33, 0x55, 0xAA),
        RegionKind::Theta | RegionKind::ThetaPair(..) => Rgb(0xAA, 0x55, 0x33),
        RegionKind::ExclDelta(..) | RegionKind::ExclL(..) | RegionKind::ExclLambda(..) => {
            Rgb(0x99, 0x99, 0x99)
        }
    }
}

pub const LAYER_OPACITY: &str = "0.8";

/// One painted grid.
#[derive(Clone, Copy, Debug)]
pub struct Layer<'a> {
    pub name: &'a str,
    pub grid: &'a RasterGrid,
    pub color: Rgb,
}

fn check_layers(canvas: &Canvas, layers: &[Layer<'_>]) -> Result<()> {
    layers
        .iter()
        .try_for_each(|layer| canvas.check_same(layer.grid.canvas()))
}

const ASTERISK_ARMS: [(i64, i64); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
];

pub fn emit_ppm(
    canvas: &Canvas,
    layers: &[Layer<'_>],
    markers: &[ComplexScalar],
) -> Result<Vec<u8>> {
    check_layers(canvas, layers)?;
    let (w, h) = (canvas.width, canvas.height);
    let mut pixels = vec![Rgb::WHITE; w * h];
    for layer in layers {
        for (px, &bit) in pixels.iter_mut().zip(layer.grid.bits()) {
            if bit {
                *px = layer.color;
            }
        }
    }
    for &m in markers {
        let Some((row, col)) = canvas.cell_of(m) else {
            continue;
        };
        pixels[row * w + col] = Rgb::BLACK;
        for (dr, dc) in ASTERISK_ARMS {
            for step in 1..=2 {
                let r = row as i64 + dr * step;
                let c = col as i64 + dc * step;
                if (0..h as i64).contains(&r) && (0..w as i64).contains(&c) {
                    pixels[r as usize * w + c as usize] = Rgb::BLACK;
                }
            }
        }
    }
    let mut out = format!("P3\n{w} {h}\n255\n");
    for row in pixels.chunks(w) {
        let line: Vec<String> = row
            .iter()
            .map(|p| format!("{} {} {}", p.0, p.1, p.2))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out.into_bytes())
}

fn num(v: f64) -> String {
    if v == 0.0 {
        "0".to_owned()
    } else {
        format!("{v}")
    }
}

pub fn emit_svg(
    canvas: &Canvas,
    layers: &[Layer<'_>],
    markers: &[ComplexScalar],
) -> Result<Vec<u8>> {
    check_layers(canvas, layers)?;
    let b = canvas.bbox;
    let (dx, dy) = (canvas.cell_width(), canvas.cell_height());
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" \
         viewBox=\"{} {} {} {}\" preserveAspectRatio=\"none\">",
        canvas.width,
        canvas.height,
        num(b.re_min),
        num(-b.im_max),
        num(b.re_span()),
        num(b.im_span())
    );
    let _ = writeln!(
        out,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#FFFFFF\"/>",
        num(b.re_min),
        num(-b.im_max),
        num(b.re_span()),
        num(b.im_span())
    );
    for (idx, layer) in layers.iter().enumerate() {
        let _ = writeln!(
            out,
            "<g id=\"layer-{idx}-{}\" fill=\"{}\" fill-opacity=\"{LAYER_OPACITY}\" shape-rendering=\"crispEdges\">",
            layer.name,
            layer.color.hex()
        );
        let (w_s, h_s) = (num(dx), num(dy));
        for (row, col) in layer.grid.set_cells() {
            let x = b.re_min + col as f64 * dx;
            let y = -(b.im_max - row as f64 * dy);
            let _ = writeln!(
                out,
                "<rect x=\"{}\" y=\"{}\" width=\"{w_s}\" height=\"{h_s}\"/>",
                num(x),
                num(y)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("<g id=\"markers\" stroke=\"#000000\" fill=\"none\">\n");
    let arm = 0.015 * b.re_span().max(b.im_span());
    let diag = arm * std::f64::consts::FRAC_1_SQRT_2;
    for m in markers {
        let (x, y) = (m.re, -m.im);
        let _ = writeln!(
            out,
            "<path d=\"M{} {}L{} {}M{} {}L{} {}M{} {}L{} {}M{} {}L{} {}\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\"/>",
            num(x - arm), num(y), num(x + arm), num(y),
            num(x), num(y - arm), num(x), num(y + arm),
            num(x - diag), num(y - diag), num(x + diag), num(y + diag),
            num(x - diag), num(y + diag), num(x + diag), num(y - diag),
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out.into_bytes())
}

/// Plain PBM (`P1`) dump of a grid, `1` for set cells.
pub fn emit_pbm(grid: &RasterGrid) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", grid.width(), grid.height());
    for row in grid.bits().chunks(grid.width()) {
        let line: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::raster::BoundingBox;

    fn canvas(w: usize, h: usize) -> Canvas {
        Canvas::new(BoundingBox::new(-1.0, 1.0, -1.0, 1.0).unwrap(), w, h).unwrap()
    }

    #[test]
    fn empty_layers_give_white_image() {
        let bytes = emit_ppm(&canvas(2, 2), &[], &[]).unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "P3\n2 2\n255\n255 255 255 255 255 255\n255 255 255 255 255 255\n"
        );
    }

    #[test]
    fn full_grid_is_one_color() {
        let cv = canvas(3, 2);
        let full = RasterGrid::from_bits(cv, vec![true; 6]).unwrap();
        let layer = Layer {
            name: "phi",
            grid: &full,
            color: set_color(RegionKind::Phi),
        };
        let text = String::from_utf8(emit_ppm(&cv, &[layer], &[]).unwrap()).unwrap();
        let body: Vec<&str> = text.lines().skip(3).collect();
        assert_eq!(body, vec!["51 85 170 51 85 170 51 85 170"; 2]);
    }

    #[test]
    fn later_layers_paint_over_earlier_ones() {
        let cv = canvas(2, 2);
        let a = RasterGrid::from_bits(cv, vec![true, true, false, false]).unwrap();
        let b = RasterGrid::from_bits(cv, vec![false, true, true, false]).unwrap();
        let layers = [
            Layer {
                name: "a",
                grid: &a,
                color: Rgb(1, 2, 3),
            },
            Layer {
                name: "b",
                grid: &b,
                color: Rgb(4, 5, 6),
            },
        ];
        let text = String::from_utf8(emit_ppm(&cv, &layers, &[]).unwrap()).unwrap();
        assert_eq!(text, "P3\n2 2\n255\n1 2 3 4 5 6\n4 5 6 255 255 255\n");
    }

    #[test]
    fn mismatched_layers_rejected() {
        let g = RasterGrid::empty(canvas(3, 3));
        let layer = Layer {
            name: "x",
            grid: &g,
            color: Rgb::BLACK,
        };
        assert!(matches!(
            emit_ppm(&canvas(2, 2), &[layer], &[]),
            Err(Error::GeometryMismatch(_))
        ));
        assert!(emit_svg(&canvas(2, 2), &[layer], &[]).is_err());
    }

    #[test]
    fn svg_layout() {
        let cv = canvas(2, 2);
        let g = RasterGrid::from_bits(cv, vec![false, true, false, false]).unwrap();
        let layer = Layer {
            name: "brauer",
            grid: &g,
            color: set_color(RegionKind::Brauer),
        };
        let svg =
            String::from_utf8(emit_svg(&cv, &[layer], &[ComplexScalar::new(0.5, 0.5)]).unwrap())
                .unwrap();
        assert!(svg.contains("viewBox=\"-1 -1 2 2\""));
        assert!(svg.contains("<g id=\"layer-0-brauer\" fill=\"#AACCEE\""));
        assert!(svg.contains("<rect x=\"0\" y=\"-1\" width=\"1\" height=\"1\"/>"));
        assert_eq!(svg.matches("<path ").count(), 1);
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn marker_paints_asterisk() {
        let cv = canvas(5, 5);
        let text = String::from_utf8(emit_ppm(&cv, &[], &[ComplexScalar::new(0.0, 0.0)]).unwrap())
            .unwrap();
        let rows: Vec<&str> = text.lines().skip(3).collect();
        assert!(rows[2].split(' ').all(|v| v == "0"));
        assert_eq!(rows[0], "0 0 0 255 255 255 0 0 0 255 255 255 0 0 0");
    }

    #[test]
    fn pbm_dump() {
        let g = RasterGrid::from_bits(canvas(2, 2), vec![true, false, false, true]).unwrap();
        assert_eq!(emit_pbm(&g), b"P1\n2 2\n1 0\n0 1\n");
    }
}
