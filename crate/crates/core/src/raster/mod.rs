//! Membership grids over a box in the complex plane, grid-level set
//! algebra, and the PPM/SVG figure writers.

mod emit;
mod grid;

pub use emit::{emit_pbm, emit_ppm, emit_svg, set_color, Layer, Rgb, LAYER_OPACITY};
pub use grid::{
    area, auto_box, difference_count, grid_subset, rasterize, BoundingBox, Canvas, RasterGrid,
    DEFAULT_RESOLUTION,
};
