//! Spacetime palettes.
//!
//! * `signed`: empty cells black. A value `v` gets level `round(80 + 175 t)`
//!   with `t = |v| / max|v|`; positive values are `(level, level / 4, 0)`,
//!   negative ones `(0, level / 2, level)`.
//! * `angle`: the engine2d direction palette.
//! * `kmer`: the legend's top ids get fixed categorical colours, other
//!   assigned ids gray `(128, 128, 128)`, unassigned sites black.
//! * `bool`: active black, inactive white, decayed cells red.

use symba_core::dnaca::KmerSpacetime;
use symba_core::image::{BitMatrix, Rgb, RgbImage};

pub use symba_core::engine2d::render_angle_field as render_angle;

pub const GRAY: Rgb = [128, 128, 128];
pub const DECAY: Rgb = [220, 30, 30];

/// Categorical colours for legend ranks, cycled when the legend is longer.
pub const CATEGORICAL: [Rgb; 12] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [188, 189, 34],
    [23, 190, 207],
    [174, 199, 232],
    [255, 187, 120],
    [152, 223, 138],
];

pub fn signed_color(v: i32, max_abs: u32) -> Rgb {
    if v == 0 || max_abs == 0 {
        return [0, 0, 0];
    }
    let t = v.unsigned_abs() as f64 / max_abs as f64;
    let level = (80.0 + 175.0 * t).round() as u8;
    if v > 0 {
        [level, level / 4, 0]
    } else {
        [0, level / 2, level]
    }
}

/// Row-major `data` with rows of `width` cells.
pub fn render_signed(width: usize, data: &[i32]) -> RgbImage {
    assert!(
        width > 0 && !data.is_empty() && data.len().is_multiple_of(width),
        "matrix must be nonempty and rectangular"
    );
    let max_abs = data.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let mut img = RgbImage::new(width, data.len() / width);
    for (i, &v) in data.iter().enumerate() {
        img.set(i % width, i / width, signed_color(v, max_abs));
    }
    img
}

pub fn render_kmer(st: &KmerSpacetime) -> RgbImage {
    let mut img = RgbImage::new(st.width, st.cycles());
    for (i, &id) in st.ids.iter().enumerate() {
        let color = if id < 0 {
            [0, 0, 0]
        } else {
            match st.legend.iter().position(|&l| l == id) {
                Some(rank) => CATEGORICAL[rank % CATEGORICAL.len()],
                None => GRAY,
            }
        };
        img.set(i % st.width, i / st.width, color);
    }
    img
}

pub fn render_bool(spacetime: &BitMatrix, decay: Option<&BitMatrix>) -> RgbImage {
    let mut img = RgbImage::new(spacetime.width(), spacetime.height());
    for (y, row) in spacetime.rows().enumerate() {
        let decayed = decay.map(|d| d.row(y));
        for (x, &on) in row.iter().enumerate() {
            let color = if decayed.is_some_and(|d| d[x]) {
                DECAY
            } else if on {
                [0, 0, 0]
            } else {
                [255, 255, 255]
            };
            img.set(x, y, color);
        }
    }
    img
}
