//! The one-dimensional numerical automaton.
//!
//! Each generation every gene `n` at cell `a` persists in place and tries to
//! copy itself to `a + n`. If that cell already held a gene `m`, it also
//! tries `a + m`, and so on until it lands on a cell that was empty or
//! revisits a target. Cells reached by two or more distinct values are
//! handed to the cell's collision norm.

use std::str::FromStr;

use crate::error::{Result, SymbaError};
use crate::norms::{resolve_collision, Collider, CollisionContext, NormId};
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Periodic,
    Bounded,
}

impl Boundary {
    /// Maps an unwrapped index onto the grid, or `None` if it falls off a
    /// bounded grid.
    #[inline]
    pub fn resolve(self, raw: i64, len: usize) -> Option<usize> {
        match self {
            Boundary::Periodic => Some(raw.rem_euclid(len as i64) as usize),
            Boundary::Bounded => (raw >= 0 && raw < len as i64).then_some(raw as usize),
        }
    }
}

impl FromStr for Boundary {
    type Err = SymbaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Boundary::Periodic),
            "bounded" => Ok(Boundary::Bounded),
            other => {
                Err(SymbaError::InvalidParameter(format!("unknown boundary `{other}` (expected periodic or bounded)")))
            }
        }
    }
}

/// A nonzero cell value whose magnitude is below the grid length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Gene(i32);

impl Gene {
    pub fn new(value: i64, len: usize) -> Result<Gene> {
        if value == 0 || value.unsigned_abs() as usize >= len || value.abs() > i32::MAX as i64 {
            return Err(SymbaError::InvalidGene { value, len });
        }
        Ok(Gene(value as i32))
    }

    pub fn get(self) -> i32 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World1D {
    cells: Vec<i32>,
    boundary: Boundary,
    norm_map: Vec<NormId>,
}

impl World1D {
    pub fn new(cells: Vec<i32>, boundary: Boundary, norm_map: Vec<NormId>) -> Result<Self> {
        let len = cells.len();
        if len < 2 {
            return Err(SymbaError::InvalidLength(len));
        }
        if norm_map.len() != len {
            return Err(SymbaError::LengthMismatch { expected: len, found: norm_map.len() });
        }
        for &v in &cells {
            if v != 0 {
                Gene::new(v as i64, len)?;
            }
        }
        Ok(World1D { cells, boundary, norm_map })
    }

    /// Empty periodic world under a single norm.
    pub fn empty(len: usize, norm: NormId) -> Result<Self> {
        World1D::new(vec![0; len], Boundary::Periodic, vec![norm; len])
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_norm_map(mut self, norm_map: Vec<NormId>) -> Result<Self> {
        if norm_map.len() != self.cells.len() {
            return Err(SymbaError::LengthMismatch { expected: self.cells.len(), found: norm_map.len() });
        }
        self.norm_map = norm_map;
        Ok(self)
    }

    pub fn with_norm(self, norm: NormId) -> Self {
        let len = self.len();
        self.with_norm_map(vec![norm; len]).expect("uniform map has matching length")
    }

    pub fn set(&mut self, pos: usize, value: i32) -> Result<()> {
        if value != 0 {
            Gene::new(value as i64, self.len())?;
        }
        self.cells[pos] = value;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|&v| v == 0)
    }

    pub fn cells(&self) -> &[i32] {
        &self.cells
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn norm_map(&self) -> &[NormId] {
        &self.norm_map
    }

    pub fn living(&self) -> usize {
        self.cells.iter().filter(|&&v| v != 0).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicationAttempt {
    pub source_pos: usize,
    pub value: i32,
    pub target_pos: usize,
    /// 0 = persistence in place, 1 = first shift, >= 2 = induced by occupants.
    pub chain_depth: u32,
    /// Unwrapped shift from source to target.
    pub displacement: i64,
}

/// All attempts emitted by the gene at `a`, self-persistence first.
pub fn replication_targets(prev: &World1D, a: usize) -> Vec<ReplicationAttempt> {
    let mut out = Vec::new();
    push_replication_targets(prev, a, &mut out);
    out
}

fn push_replication_targets(prev: &World1D, a: usize, out: &mut Vec<ReplicationAttempt>) {
    let n = prev.cells[a];
    if n == 0 {
        return;
    }
    let len = prev.len();
    let first = out.len();
    out.push(ReplicationAttempt { source_pos: a, value: n, target_pos: a, chain_depth: 0, displacement: 0 });
    let mut offset = n as i64;
    let mut depth = 1;
    while let Some(target) = prev.boundary.resolve(a as i64 + offset, len) {
        if out[first..].iter().any(|t| t.target_pos == target) {
            break;
        }
        out.push(ReplicationAttempt {
            source_pos: a,
            value: n,
            target_pos: target,
            chain_depth: depth,
            displacement: offset,
        });
        let occupant = prev.cells[target];
        if occupant == 0 {
            break;
        }
        offset = occupant as i64;
        depth += 1;
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub next: World1D,
    pub attempts: Vec<ReplicationAttempt>,
    /// Target cells contested by two or more distinct values.
    pub collisions: usize,
}

pub fn step_1d(prev: &World1D) -> StepOutcome {
    let len = prev.len();
    let mut attempts = Vec::with_capacity(prev.living() * 3);
    for a in 0..len {
        push_replication_targets(prev, a, &mut attempts);
    }

    let mut by_target: Vec<Vec<Collider>> = vec![Vec::new(); len];
    for at in &attempts {
        by_target[at.target_pos].push(Collider {
            value: at.value,
            source: at.source_pos,
            displacement: at.displacement,
        });
    }

    let mut cells = vec![0; len];
    let mut collisions = 0;
    for (target, colliders) in by_target.into_iter().enumerate() {
        match colliders.len() {
            0 => {}
            1 => cells[target] = colliders[0].value,
            _ => {
                let ctx = CollisionContext::new(target, colliders, &prev.cells, prev.boundary);
                if ctx.colliders.len() == 1 {
                    cells[target] = ctx.colliders[0].value;
                } else {
                    collisions += 1;
                    cells[target] = resolve_collision(prev.norm_map[target], &ctx);
                }
            }
        }
    }

    StepOutcome {
        next: World1D { cells, boundary: prev.boundary, norm_map: prev.norm_map.clone() },
        attempts,
        collisions,
    }
}

/// Stacked generations, row `g` = generation `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spacetime {
    width: usize,
    data: Vec<i32>,
}

impl Spacetime {
    pub fn new(width: usize) -> Self {
        Spacetime { width, data: Vec::new() }
    }

    pub fn from_rows(width: usize, data: Vec<i32>) -> Result<Self> {
        if width == 0 || !data.len().is_multiple_of(width) {
            return Err(SymbaError::Format(format!("{} values do not form rows of width {width}", data.len())));
        }
        Ok(Spacetime { width, data })
    }

    pub fn push_row(&mut self, row: &[i32]) {
        assert_eq!(row.len(), self.width, "row width mismatch");
        self.data.extend_from_slice(row);
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn generations(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn row(&self, g: usize) -> &[i32] {
        &self.data[g * self.width..(g + 1) * self.width]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i32]> {
        self.data.chunks_exact(self.width)
    }

    pub fn data(&self) -> &[i32] {
        &self.data
    }
}

/// Per-generation counts produced while stepping; entry 0 (the seeded row)
/// is all zeros.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub attempts: usize,
    pub collisions: usize,
}

pub fn run_1d(initial: &World1D, generations: usize) -> Spacetime {
    run_1d_logged(initial, generations).0
}

pub fn run_1d_logged(initial: &World1D, generations: usize) -> (Spacetime, Vec<StepStats>) {
    assert!(generations >= 1, "need at least one generation");
    let mut st = Spacetime::new(initial.len());
    let mut log = Vec::with_capacity(generations);
    st.push_row(initial.cells());
    log.push(StepStats::default());
    let mut world = initial.clone();
    for _ in 1..generations {
        let out = step_1d(&world);
        st.push_row(out.next.cells());
        log.push(StepStats { attempts: out.attempts.len(), collisions: out.collisions });
        world = out.next;
    }
    (st, log)
}

/// Magnitudes `min_abs..=max_abs`, both signs, drawn uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange {
    pub min_abs: i32,
    pub max_abs: i32,
}

impl ValueRange {
    pub fn symmetric(min_abs: i32, max_abs: i32) -> Self {
        ValueRange { min_abs, max_abs }
    }

    fn validate(&self, len: usize) -> Result<()> {
        if self.min_abs < 1 || self.max_abs < self.min_abs {
            return Err(SymbaError::InvalidSeed(format!(
                "value range ±[{}, {}] must satisfy 1 <= min <= max",
                self.min_abs, self.max_abs
            )));
        }
        Gene::new(self.max_abs as i64, len).map(|_| ())
    }

    fn draw(&self, rng: &mut SimRng) -> i32 {
        let span = (self.max_abs - self.min_abs + 1) as u64;
        let k = rng.below(2 * span) as i32;
        let magnitude = self.min_abs + k / 2;
        if k % 2 == 0 {
            magnitude
        } else {
            -magnitude
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeedSpec {
    /// `genes` values at distinct cells chosen uniformly inside `region`.
    Sparse { genes: usize, values: ValueRange, region: std::ops::Range<usize> },
    /// Exactly `round(fill * len)` occupied cells placed uniformly.
    Dense { fill: f64, values: ValueRange },
    /// Explicit `(position, value)` pairs.
    Explicit(Vec<(usize, i32)>),
}

/// The `width` cells centred in a grid of length `len`.
pub fn centered(len: usize, width: usize) -> std::ops::Range<usize> {
    let start = len.saturating_sub(width) / 2;
    start..(start + width).min(len)
}

/// Periodic world under norm Zero; adjust with `with_norm_map`/`with_boundary`.
pub fn seed_world(len: usize, spec: &SeedSpec, rng_seed: u64) -> Result<World1D> {
    if len < 2 {
        return Err(SymbaError::InvalidLength(len));
    }
    let mut cells = vec![0i32; len];
    let mut rng = SimRng::new(rng_seed);
    match spec {
        SeedSpec::Sparse { genes, values, region } => {
            values.validate(len)?;
            if region.end > len || region.start >= region.end || *genes > region.len() {
                return Err(SymbaError::InvalidSeed(format!(
                    "{genes} genes do not fit region {region:?} of a length-{len} grid"
                )));
            }
            for offset in rng.sample_distinct(region.len(), *genes) {
                cells[region.start + offset] = values.draw(&mut rng);
            }
        }
        SeedSpec::Dense { fill, values } => {
            values.validate(len)?;
            if !(0.0..=1.0).contains(fill) {
                return Err(SymbaError::InvalidSeed(format!("fill fraction {fill} outside [0, 1]")));
            }
            let count = (fill * len as f64).round() as usize;
            for pos in rng.sample_distinct(len, count) {
                cells[pos] = values.draw(&mut rng);
            }
        }
        SeedSpec::Explicit(entries) => {
            for &(pos, value) in entries {
                if pos >= len {
                    return Err(SymbaError::InvalidSeed(format!("position {pos} outside grid of length {len}")));
                }
                cells[pos] = Gene::new(value as i64, len)?.get();
            }
        }
    }
    World1D::new(cells, Boundary::Periodic, vec![NormId::Zero; len])
}

/// A four-gene organism that rebuilds itself four cells to the right every
/// generation under norm Zero. None of its genes survives alone.
pub const TRAVELLER: [i32; 4] = [1, 4, -2, -1];

/// First `(start, period)` with `row(start + period) == row(start)`.
pub fn detect_period(st: &Spacetime) -> Option<(usize, usize)> {
    use std::collections::HashMap;
    let mut seen: HashMap<&[i32], usize> = HashMap::new();
    for (g, row) in st.rows().enumerate() {
        if let Some(&first) = seen.get(row) {
            return Some((first, g - first));
        }
        seen.insert(row, g);
    }
    None
}
