//! Elementary cellular automaton gated by a neighbourhood-activity norm.
//!
//! A cell is updated by the elementary rule only when at least `threshold`
//! cells of its 5-cell window (radius 2) are active; otherwise it is forced
//! inactive, and if it was active that forced change is logged as a decay.

use crate::error::{Result, SymbaError};
use crate::image::BitMatrix;
use crate::rng::SimRng;

pub const GATE_RADIUS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolWorld {
    cells: Vec<bool>,
}

impl BoolWorld {
    pub fn new(cells: Vec<bool>) -> Result<Self> {
        if cells.len() < 2 * GATE_RADIUS + 1 {
            return Err(SymbaError::InvalidLength(cells.len()));
        }
        Ok(BoolWorld { cells })
    }

    /// Each cell active independently with probability `density`.
    pub fn random(len: usize, density: f64, rng_seed: u64) -> Result<Self> {
        let mut rng = SimRng::new(rng_seed);
        BoolWorld::new((0..len).map(|_| rng.bernoulli(density)).collect())
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active() == 0
    }

    pub fn active(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GateConfig {
    pub rule: u8,
    /// Minimum active cells in the 5-cell window for the rule to apply.
    pub threshold: u8,
}

impl Default for GateConfig {
    fn default() -> Self {
        GateConfig { rule: 110, threshold: 2 }
    }
}

impl GateConfig {
    pub fn new(rule: u8, threshold: u8) -> Result<Self> {
        if threshold as usize > 2 * GATE_RADIUS + 1 {
            return Err(SymbaError::InvalidParameter(format!("gate threshold {threshold} outside [0, 5]")));
        }
        Ok(GateConfig { rule, threshold })
    }
}

#[inline]
fn apply_rule(rule: u8, left: bool, centre: bool, right: bool) -> bool {
    let idx = ((left as u8) << 2) | ((centre as u8) << 1) | right as u8;
    (rule >> idx) & 1 == 1
}

/// One synchronous step; returns the next row and the decay mask.
pub fn step_gated(world: &BoolWorld, cfg: GateConfig) -> (BoolWorld, Vec<bool>) {
    let c = &world.cells;
    let n = c.len();
    let at = |i: usize, d: isize| c[(i as isize + d).rem_euclid(n as isize) as usize];
    let mut next = vec![false; n];
    let mut decay = vec![false; n];
    for i in 0..n {
        let active = (-2..=2).filter(|&d| at(i, d)).count();
        if active >= cfg.threshold as usize {
            next[i] = apply_rule(cfg.rule, at(i, -1), c[i], at(i, 1));
        } else {
            decay[i] = c[i];
        }
    }
    (BoolWorld { cells: next }, decay)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GatedRun {
    pub spacetime: BitMatrix,
    /// Row `g` marks decays applied when producing generation `g`; row 0 is empty.
    pub decay_log: BitMatrix,
}

pub fn run_gated(initial: &BoolWorld, cfg: GateConfig, generations: usize) -> GatedRun {
    assert!(generations >= 1, "need at least one generation");
    let n = initial.len();
    let mut spacetime = BitMatrix::new(n);
    let mut decay_log = BitMatrix::new(n);
    spacetime.push_row(initial.cells());
    decay_log.push_row(&vec![false; n]);
    let mut world = initial.clone();
    for _ in 1..generations {
        let (next, decay) = step_gated(&world, cfg);
        spacetime.push_row(next.cells());
        decay_log.push_row(&decay);
        world = next;
    }
    GatedRun { spacetime, decay_log }
}
