//! Two-dimensional variant: each occupied cell holds an integer vector that
//! acts as its replication displacement on a torus. Only the norms that do
//! not depend on one-dimensional sign conventions (Zero and D) apply.

use crate::error::{Result, SymbaError};
use crate::image::{Rgb, RgbImage};
use crate::norms::NormId;
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2Gene {
    pub dx: i32,
    pub dy: i32,
}

impl Vec2Gene {
    pub fn new(dx: i32, dy: i32) -> Option<Self> {
        ((dx, dy) != (0, 0)).then_some(Vec2Gene { dx, dy })
    }

    pub fn angle(self) -> f64 {
        (self.dy as f64).atan2(self.dx as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World2D {
    width: usize,
    height: usize,
    cells: Vec<Option<Vec2Gene>>,
    norm: NormId,
}

impl World2D {
    /// A height of 1 is allowed so that 1D worlds embed exactly.
    pub fn empty(width: usize, height: usize, norm: NormId) -> Result<Self> {
        if width < 1 || height < 1 || width * height < 2 {
            return Err(SymbaError::InvalidParameter(format!("grid {width}x{height} is too small")));
        }
        if !matches!(norm, NormId::Zero | NormId::D) {
            return Err(SymbaError::InvalidParameter(format!("norm {norm} is not defined in 2D (use zero or d)")));
        }
        Ok(World2D { width, height, cells: vec![None; width * height], norm })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn norm(&self) -> NormId {
        self.norm
    }

    pub fn get(&self, x: usize, y: usize) -> Option<Vec2Gene> {
        self.cells[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, gene: Option<Vec2Gene>) -> Result<()> {
        if let Some(g) = gene {
            if !self.fits(g) {
                return Err(SymbaError::InvalidParameter(format!(
                    "vector ({}, {}) exceeds grid {}x{}",
                    g.dx, g.dy, self.width, self.height
                )));
            }
        }
        self.cells[y * self.width + x] = gene;
        Ok(())
    }

    pub fn cells(&self) -> &[Option<Vec2Gene>] {
        &self.cells
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    fn fits(&self, g: Vec2Gene) -> bool {
        (g.dx.unsigned_abs() as usize) < self.width && (g.dy.unsigned_abs() as usize) < self.height
    }

    fn wrap(&self, x: i64, y: i64) -> usize {
        let x = x.rem_euclid(self.width as i64) as usize;
        let y = y.rem_euclid(self.height as i64) as usize;
        y * self.width + x
    }

    fn vector_at(&self, idx: usize) -> (i64, i64) {
        self.cells[idx].map_or((0, 0), |g| (g.dx as i64, g.dy as i64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Attempt2 {
    source: usize,
    gene: Vec2Gene,
}

fn emit_attempts(prev: &World2D, source: usize, out: &mut Vec<(usize, Attempt2)>) {
    let Some(gene) = prev.cells[source] else {
        return;
    };
    let (x, y) = ((source % prev.width) as i64, (source / prev.width) as i64);
    let first = out.len();
    out.push((source, Attempt2 { source, gene }));
    let mut offset = (gene.dx as i64, gene.dy as i64);
    loop {
        let target = prev.wrap(x + offset.0, y + offset.1);
        if out[first..].iter().any(|(t, _)| *t == target) {
            break;
        }
        out.push((target, Attempt2 { source, gene }));
        match prev.cells[target] {
            Some(m) => offset = (m.dx as i64, m.dy as i64),
            None => break,
        }
    }
}

fn resolve_d(prev: &World2D, target: usize) -> Option<Vec2Gene> {
    let (x, y) = ((target % prev.width) as i64, (target / prev.width) as i64);
    let s = prev.vector_at(target);
    let ahead = prev.vector_at(prev.wrap(x + s.0, y + s.1));
    let behind = prev.vector_at(prev.wrap(x - s.0, y - s.1));
    if ahead != behind {
        return None;
    }
    let dx = -s.0 + 2 * ahead.0;
    let dy = -s.1 + 2 * ahead.1;
    if dx.unsigned_abs() as usize >= prev.width || dy.unsigned_abs() as usize >= prev.height {
        return None;
    }
    Vec2Gene::new(dx as i32, dy as i32)
}

pub fn step_2d(prev: &World2D) -> (World2D, usize) {
    let n = prev.cells.len();
    let mut attempts = Vec::with_capacity(prev.occupied() * 3);
    for source in 0..n {
        emit_attempts(prev, source, &mut attempts);
    }
    let mut by_target: Vec<Vec<Attempt2>> = vec![Vec::new(); n];
    for (t, a) in attempts {
        by_target[t].push(a);
    }
    let mut next = World2D { cells: vec![None; n], ..prev.clone() };
    let mut collisions = 0;
    for (target, mut colliders) in by_target.into_iter().enumerate() {
        // source index is (y, x) row-major, so this is the lexicographic order
        colliders.sort_by_key(|a| a.source);
        let mut distinct: Vec<Attempt2> = Vec::with_capacity(colliders.len());
        for c in colliders {
            if !distinct.iter().any(|d| d.gene == c.gene) {
                distinct.push(c);
            }
        }
        next.cells[target] = match distinct.len() {
            0 => None,
            1 => Some(distinct[0].gene),
            _ => {
                collisions += 1;
                match prev.norm {
                    NormId::D => resolve_d(prev, target),
                    _ => None,
                }
            }
        };
    }
    (next, collisions)
}

pub fn run_2d(initial: &World2D, generations: usize) -> Vec<World2D> {
    assert!(generations >= 1, "need at least one generation");
    let mut frames = Vec::with_capacity(generations);
    frames.push(initial.clone());
    for _ in 1..generations {
        let (next, _) = step_2d(frames.last().unwrap());
        frames.push(next);
    }
    frames
}

/// Each cell occupied with probability `density`, vector components drawn
/// uniformly from `[-max_abs, max_abs]` excluding the zero vector.
pub fn seed_world_2d(
    width: usize,
    height: usize,
    norm: NormId,
    density: f64,
    max_abs: i32,
    rng_seed: u64,
) -> Result<World2D> {
    let mut w = World2D::empty(width, height, norm)?;
    if !(0.0..=1.0).contains(&density) {
        return Err(SymbaError::InvalidSeed(format!("density {density} outside [0, 1]")));
    }
    let max_x = max_abs.min(width as i32 - 1);
    let max_y = max_abs.min(height as i32 - 1);
    if max_x < 0 || max_y < 0 || (max_x == 0 && max_y == 0) {
        return Err(SymbaError::InvalidSeed(format!("no nonzero vectors with |component| <= {max_abs}")));
    }
    let mut rng = SimRng::new(rng_seed);
    for idx in 0..w.cells.len() {
        if !rng.bernoulli(density) {
            continue;
        }
        let gene = loop {
            let dx = rng.below((2 * max_x + 1) as u64) as i32 - max_x;
            let dy = rng.below((2 * max_y + 1) as u64) as i32 - max_y;
            if let Some(g) = Vec2Gene::new(dx, dy) {
                break g;
            }
        };
        w.cells[idx] = Some(gene);
    }
    Ok(w)
}

/// Palette index for an angle in `(-pi, pi]`: `floor((angle + pi) / 2pi * 256)`,
/// clamped to 255.
pub fn angle_index(angle: f64) -> u8 {
    let t = (angle + std::f64::consts::PI) / std::f64::consts::TAU;
    (t * 256.0).floor().clamp(0.0, 255.0) as u8
}

/// 256-entry diverging palette: blue (index 0, angle -pi) through white
/// (index 128, angle 0) to red (index 255, angle pi).
///
/// For `t = i / 255`: if `t < 0.5`, `s = t / 0.5` and the colour is
/// `(round(59 + 196 s), round(76 + 179 s), round(192 + 63 s))`; otherwise
/// `s = (t - 0.5) / 0.5` and the colour is
/// `(round(255 - 75 s), round(255 - 251 s), round(255 - 217 s))`.
pub fn angle_palette() -> [Rgb; 256] {
    let mut p = [[0u8; 3]; 256];
    for (i, c) in p.iter_mut().enumerate() {
        let t = i as f64 / 255.0;
        let rgb = if t < 0.5 {
            let s = t / 0.5;
            [59.0 + 196.0 * s, 76.0 + 179.0 * s, 192.0 + 63.0 * s]
        } else {
            let s = (t - 0.5) / 0.5;
            [255.0 - 75.0 * s, 255.0 - 251.0 * s, 255.0 - 217.0 * s]
        };
        *c = rgb.map(|v| v.round() as u8);
    }
    p
}

pub fn render_angle_field(world: &World2D) -> RgbImage {
    let palette = angle_palette();
    let mut img = RgbImage::new(world.width, world.height);
    for y in 0..world.height {
        for x in 0..world.width {
            if let Some(g) = world.get(x, y) {
                img.set(x, y, palette[angle_index(g.angle()) as usize]);
            }
        }
    }
    img
}
