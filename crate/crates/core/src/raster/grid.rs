use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexScalar};
use crate::regions::{eval_validated, RegionKind};

pub const DEFAULT_RESOLUTION: usize = 512;

/// Axis-aligned rectangle in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundingBox {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl BoundingBox {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite || re_min >= re_max || im_min >= im_max {
            return Err(Error::InvalidBox(format!(
                "[{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, z: ComplexScalar) -> bool {
        (self.re_min..=self.re_max).contains(&z.re) && (self.im_min..=self.im_max).contains(&z.im)
    }

    pub fn re_span(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn im_span(&self) -> f64 {
        self.im_max - self.im_min
    }
}

/// Box and resolution shared by grids that are compared or layered.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Canvas {
    #[serde(rename = "box")]
    pub bbox: BoundingBox,
    pub width: usize,
    pub height: usize,
}

impl Canvas {
    pub fn new(bbox: BoundingBox, width: usize, height: usize) -> Result<Self> {
        if width < 2 || height < 2 {
            return Err(Error::Dimension(format!(
                "grid must be at least 2x2, got {width}x{height}"
            )));
        }
        Ok(Self {
            bbox,
            width,
            height,
        })
    }

    pub fn cell_width(&self) -> f64 {
        self.bbox.re_span() / self.width as f64
    }

    pub fn cell_height(&self) -> f64 {
        self.bbox.im_span() / self.height as f64
    }

    /// Sample point of cell `(row, col)`; row 0 is the top (`im_max`) edge.
    pub fn cell_center(&self, row: usize, col: usize) -> ComplexScalar {
        ComplexScalar::new(
            self.bbox.re_min + (col as f64 + 0.5) * self.cell_width(),
            self.bbox.im_max - (row as f64 + 0.5) * self.cell_height(),
        )
    }

    /// Cell containing `z`, if `z` lies inside the box.
    pub fn cell_of(&self, z: ComplexScalar) -> Option<(usize, usize)> {
        if !self.bbox.contains(z) {
            return None;
        }
        let col = ((z.re - self.bbox.re_min) / self.cell_width()).floor() as usize;
        let row = ((self.bbox.im_max - z.im) / self.cell_height()).floor() as usize;
        Some((row.min(self.height - 1), col.min(self.width - 1)))
    }

    pub fn check_same(&self, other: &Canvas) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GeometryMismatch(format!(
                "{}x{} over {:?} vs {}x{} over {:?}",
                self.width, self.height, self.bbox, other.width, other.height, other.bbox
            )))
        }
    }
}

/// Row-major membership bits sampled at cell centers.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterGrid {
    canvas: Canvas,
    bits: Vec<bool>,
}

impl RasterGrid {
    pub fn empty(canvas: Canvas) -> Self {
        Self {
            canvas,
            bits: vec![false; canvas.width * canvas.height],
        }
    }

    pub fn from_bits(canvas: Canvas, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != canvas.width * canvas.height {
            return Err(Error::Dimension(format!(
                "{} bits for a {}x{} grid",
                bits.len(),
                canvas.width,
                canvas.height
            )));
        }
        Ok(Self { canvas, bits })
    }

    pub fn canvas(&self) -> &Canvas {
        &self.canvas
    }

    pub fn width(&self) -> usize {
        self.canvas.width
    }

    pub fn height(&self) -> usize {
        self.canvas.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.canvas.width + col]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Set cells as `(row, col)` in row-major order.
    pub fn set_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.canvas.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(idx, _)| (idx / w, idx % w))
    }
}

/// Smallest box holding every Geršgorin disk, padded by 5% of its larger
/// side on each edge. A box collapsed to a point becomes that point ±0.5.
pub fn auto_box(a: &ComplexMatrix) -> BoundingBox {
    let (mut re_min, mut re_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut im_min, mut im_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &r) in a.row_sums().iter().enumerate() {
        let c = a.diag(i);
        re_min = re_min.min(c.re - r);
        re_max = re_max.max(c.re + r);
        im_min = im_min.min(c.im - r);
        im_max = im_max.max(c.im + r);
    }
    let side = (re_max - re_min).max(im_max - im_min);
    let pad = if side > 0.0 { 0.05 * side } else { 0.5 };
    BoundingBox {
        re_min: re_min - pad,
        re_max: re_max + pad,
        im_min: im_min - pad,
        im_max: im_max + pad,
    }
}

/// Membership of every cell center. Rows are evaluated in parallel; the
/// result is identical to a sequential sweep.
pub fn rasterize(
    a: &ComplexMatrix,
    kind: RegionKind,
    bbox: BoundingBox,
    width: usize,
    height: usize,
) -> Result<RasterGrid> {
    let canvas = Canvas::new(bbox, width, height)?;
    kind.validate(a)?;
    let mut bits = vec![false; width * height];
    bits.par_chunks_mut(width)
        .enumerate()
        .for_each(|(row, cells)| {
            for (col, bit) in cells.iter_mut().enumerate() {
                *bit = eval_validated(a, kind, canvas.cell_center(row, col), 0.0);
            }
        });
    Ok(RasterGrid { canvas, bits })
}

/// `(set cells) * (cell width) * (cell height)`.
pub fn area(grid: &RasterGrid) -> f64 {
    grid.count() as f64 * grid.canvas.cell_width() * grid.canvas.cell_height()
}

/// Every set cell of `a` is set in `b`.
pub fn grid_subset(a: &RasterGrid, b: &RasterGrid) -> Result<bool> {
    a.canvas.check_same(&b.canvas)?;
    Ok(a.bits.iter().zip(&b.bits).all(|(&x, &y)| !x || y))
}

/// Number of cells set in `a` but not in `b`.
pub fn difference_count(a: &RasterGrid, b: &RasterGrid) -> Result<usize> {
    a.canvas.check_same(&b.canvas)?;
    Ok(a.bits
        .iter()
        .zip(&b.bits)
        .filter(|(&x, &y)| x && !y)
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn square(h: f64) -> BoundingBox {
        BoundingBox::new(-h, h, -h, h).unwrap()
    }

    #[test]
    fn box_validation() {
        assert!(BoundingBox::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(BoundingBox::new(0.0, 1.0, 2.0, 1.0).is_err());
        assert!(BoundingBox::new(0.0, f64::NAN, 0.0, 1.0).is_err());
        assert!(Canvas::new(square(1.0), 1, 5).is_err());
    }

    #[test]
    fn auto_box_examples() {
        let point = ComplexMatrix::new(1, vec![c(5., 0.)]).unwrap();
        assert_eq!(
            auto_box(&point),
            BoundingBox::new(4.5, 5.5, -0.5, 0.5).unwrap()
        );

        let b = auto_box(&fixtures::flip2());
        assert!(b.re_min < -1.0 && b.re_max > 1.0 && b.im_min < -1.0 && b.im_max > 1.0);
        assert!((b.re_max - 1.1).abs() < 1e-12);

        let e = fixtures::example31();
        let b = auto_box(&e);
        assert!(b.re_max >= 14.0 + 18.12);
        for i in 0..4 {
            let (ctr, r) = (e.diag(i), e.row_sum(i).unwrap());
            assert!(b.re_min <= ctr.re - r && b.re_max >= ctr.re + r);
            assert!(b.im_min <= ctr.im - r && b.im_max >= ctr.im + r);
        }
    }

    #[test]
    fn diagonal_gersh_is_a_few_points() {
        let d = ComplexMatrix::diagonal(&[c(0.25, 0.25), c(-0.5, 0.5)]).unwrap();
        let g = rasterize(&d, RegionKind::Gersh, square(1.0), 64, 64).unwrap();
        // 0.25 = -1 + (40 + 0.5) * (2/64) is not a center; no cell hits exactly.
        for (r, col) in g.set_cells() {
            let z = g.canvas().cell_center(r, col);
            assert!(z == d.diag(0) || z == d.diag(1));
        }
        let centered = ComplexMatrix::diagonal(&[c(-1. + 40.5 / 32., 1. - 20.5 / 32.)]).unwrap();
        let g = rasterize(&centered, RegionKind::Gersh, square(1.0), 64, 64).unwrap();
        assert_eq!(g.count(), 1);
        assert!(g.get(20, 40));
    }

    #[test]
    fn flip_brauer_is_filled() {
        let f = fixtures::flip2();
        let g = rasterize(&f, RegionKind::Brauer, square(2.0), 256, 256).unwrap();
        assert!(g.get(127, 127) && g.get(128, 128));
        assert!(!g.get(0, 0));
    }

    #[test]
    fn flip_phi_is_a_thin_ring() {
        let f = fixtures::flip2();
        let g = rasterize(&f, RegionKind::Phi, square(2.0), 256, 256).unwrap();
        let cell = g.canvas().cell_width();
        for (r, col) in g.set_cells() {
            let z = g.canvas().cell_center(r, col);
            assert!((z.norm() - 1.0).abs() <= 2.0 * cell);
        }
    }

    #[test]
    fn area_examples() {
        let canvas = Canvas::new(square(1.0), 4, 4).unwrap();
        assert_eq!(area(&RasterGrid::empty(canvas)), 0.0);
        let f = fixtures::flip2();
        let g = rasterize(&f, RegionKind::Gersh, square(2.0), 512, 512).unwrap();
        assert!((area(&g) - std::f64::consts::PI).abs() < 0.03 * std::f64::consts::PI);
    }

    #[test]
    fn subset_rules() {
        let f = fixtures::flip2();
        let g = rasterize(&f, RegionKind::Gersh, square(2.0), 32, 32).unwrap();
        let empty = RasterGrid::empty(*g.canvas());
        assert!(grid_subset(&g, &g).unwrap());
        assert!(grid_subset(&empty, &g).unwrap());
        assert!(!grid_subset(&g, &empty).unwrap());
        assert_eq!(difference_count(&g, &empty).unwrap(), g.count());
        let other = RasterGrid::empty(Canvas::new(square(2.0), 32, 31).unwrap());
        assert!(matches!(
            grid_subset(&g, &other),
            Err(Error::GeometryMismatch(_))
        ));
    }

    #[test]
    fn parallel_matches_sequential() {
        let e = fixtures::example31();
        let b = auto_box(&e);
        let g = rasterize(&e, RegionKind::Phi, b, 97, 61).unwrap();
        for r in 0..61 {
            for col in 0..97 {
                let z = g.canvas().cell_center(r, col);
                assert_eq!(g.get(r, col), crate::regions::phi_contains(&e, z));
            }
        }
        assert_eq!(g, rasterize(&e, RegionKind::Phi, b, 97, 61).unwrap());
    }

    #[test]
    fn cell_lookup_inverts_centers() {
        let canvas = Canvas::new(BoundingBox::new(-3.0, 5.0, -1.0, 2.0).unwrap(), 40, 30).unwrap();
        for (r, col) in [(0, 0), (29, 39), (10, 17)] {
            assert_eq!(canvas.cell_of(canvas.cell_center(r, col)), Some((r, col)));
        }
        assert_eq!(canvas.cell_of(c(5.0, -1.0)), Some((29, 39)));
        assert_eq!(canvas.cell_of(c(6.0, 0.0)), None);
    }
}
