//! Collision norms: how a cell contested by two or more distinct genes is
//! resolved, plus patchwise ("quasi-uniform") norm maps.

use std::fmt;
use std::str::FromStr;

use crate::core1d::Boundary;
use crate::error::{Result, SymbaError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormId {
    Zero,
    A,
    B,
    C,
    D,
}

impl NormId {
    pub const ALL: [NormId; 5] = [NormId::Zero, NormId::A, NormId::B, NormId::C, NormId::D];

    pub fn name(self) -> &'static str {
        match self {
            NormId::Zero => "zero",
            NormId::A => "a",
            NormId::B => "b",
            NormId::C => "c",
            NormId::D => "d",
        }
    }
}

impl fmt::Display for NormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormId {
    type Err = SymbaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" | "0" => Ok(NormId::Zero),
            "a" => Ok(NormId::A),
            "b" => Ok(NormId::B),
            "c" => Ok(NormId::C),
            "d" => Ok(NormId::D),
            other => Err(SymbaError::UnknownNorm(other.to_string())),
        }
    }
}

/// One distinct value contesting a cell.
///
/// `displacement` is the signed shift that carried the value here, so the
/// source sits at `target - displacement` before wrapping. Zero means the
/// cell's own occupant persisting in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collider {
    pub value: i32,
    pub source: usize,
    pub displacement: i64,
}

/// Everything a norm may read when resolving one contested cell.
#[derive(Debug, Clone)]
pub struct CollisionContext<'a> {
    pub target: usize,
    /// Distinct values, sorted by source position.
    pub colliders: Vec<Collider>,
    pub prev_row: &'a [i32],
    pub boundary: Boundary,
    pub prev_occupied: bool,
    /// Displacement magnitude of the collider arriving from the right.
    pub u: usize,
    /// Displacement magnitude of the collider arriving from the left.
    pub v: usize,
}

impl<'a> CollisionContext<'a> {
    /// Builds a context; colliders are sorted by source and identical values
    /// merged (the lowest source is kept).
    pub fn new(target: usize, mut colliders: Vec<Collider>, prev_row: &'a [i32], boundary: Boundary) -> Self {
        colliders.sort_by_key(|c| c.source);
        let mut merged: Vec<Collider> = Vec::with_capacity(colliders.len());
        for c in colliders {
            if !merged.iter().any(|m| m.value == c.value) {
                merged.push(c);
            }
        }
        let (u, v) = if merged.len() >= 2 { pair_roles(&merged[0], &merged[1]) } else { (0, 0) };
        CollisionContext { target, colliders: merged, prev_row, boundary, prev_occupied: prev_row[target] != 0, u, v }
    }

    fn len(&self) -> usize {
        self.prev_row.len()
    }

    /// Previous-generation value at `target + offset`; 0 outside a bounded grid.
    fn prev_at(&self, offset: i64) -> i32 {
        match self.boundary.resolve(self.target as i64 + offset, self.len()) {
            Some(i) => self.prev_row[i],
            None => 0,
        }
    }
}

/// (u, v) for a pair of colliders. `first` must not have a larger source
/// than `second`; it takes the v role when both arrive from the same side.
fn pair_roles(first: &Collider, second: &Collider) -> (usize, usize) {
    let mag = |c: &Collider| c.displacement.unsigned_abs() as usize;
    match (first.displacement > 0, second.displacement > 0) {
        (true, false) => (mag(second), mag(first)),
        (false, true) => (mag(first), mag(second)),
        _ => (mag(second), mag(first)),
    }
}

fn same_sign(x: i32, y: i32) -> bool {
    x != 0 && y != 0 && (x > 0) == (y > 0)
}

fn pair_outcome(norm: NormId, ctx: &CollisionContext<'_>, u: usize, v: usize) -> i64 {
    let (u, v) = (u as i64, v as i64);
    match norm {
        NormId::Zero => 0,
        NormId::A | NormId::B => {
            if ctx.prev_occupied {
                return 0;
            }
            let magnitude = if norm == NormId::A { u + v } else { u + v - 1 };
            if same_sign(ctx.prev_at(u), ctx.prev_at(-v)) {
                magnitude
            } else {
                -magnitude
            }
        }
        NormId::C => {
            if ctx.prev_occupied {
                0
            } else {
                ctx.prev_at(-v) as i64 - ctx.prev_at(u) as i64
            }
        }
        NormId::D => {
            let s = ctx.prev_row[ctx.target] as i64;
            let ahead = ctx.prev_at(s) as i64;
            let behind = ctx.prev_at(-s) as i64;
            if ahead == behind {
                -s + 2 * ahead
            } else {
                0
            }
        }
    }
}

/// Values that are zero or reach the grid length are not genes.
fn survive(value: i64, len: usize) -> i32 {
    if value == 0 || value.unsigned_abs() as usize >= len {
        0
    } else {
        value as i32
    }
}

/// New value of a contested cell. With more than two distinct colliders the
/// pairwise rule is folded left to right in source order; the running result
/// keeps the geometry of the first collider.
pub fn resolve_collision(norm: NormId, ctx: &CollisionContext<'_>) -> i32 {
    let Some((first, rest)) = ctx.colliders.split_first() else {
        return 0;
    };
    let len = ctx.len();
    let mut acc = *first;
    let mut resolved_once = false;
    for next in rest {
        if next.value == acc.value {
            continue;
        }
        let (u, v) = pair_roles(&acc, next);
        acc.value = survive(pair_outcome(norm, ctx, u, v), len);
        resolved_once = true;
    }
    if resolved_once {
        acc.value
    } else {
        survive(acc.value as i64, len)
    }
}

/// Per-cell norm assignment built from half-open patches `[start, end)`.
pub fn make_norm_map(len: usize, patches: &[(usize, usize, NormId)]) -> Result<Vec<NormId>> {
    let mut map: Vec<Option<NormId>> = vec![None; len];
    for &(start, end, norm) in patches {
        if start >= end || end > len {
            return Err(SymbaError::InvalidNormMap(format!("patch [{start}, {end}) is empty or exceeds length {len}")));
        }
        for (i, slot) in map.iter_mut().enumerate().take(end).skip(start) {
            if slot.is_some() {
                return Err(SymbaError::InvalidNormMap(format!("patches overlap at cell {i}")));
            }
            *slot = Some(norm);
        }
    }
    map.into_iter()
        .enumerate()
        .map(|(i, n)| n.ok_or_else(|| SymbaError::InvalidNormMap(format!("cell {i} is not covered"))))
        .collect()
}

/// Parses `"0..128:a,128..256:c"` into patches.
pub fn parse_patches(text: &str) -> Result<Vec<(usize, usize, NormId)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|patch| {
            let bad = || SymbaError::InvalidNormMap(format!("malformed patch `{patch}` (expected START..END:NORM)"));
            let (range, norm) = patch.split_once(':').ok_or_else(bad)?;
            let (start, end) = range.split_once("..").ok_or_else(bad)?;
            let start = start.trim().parse().map_err(|_| bad())?;
            let end = end.trim().parse().map_err(|_| bad())?;
            Ok((start, end, norm.trim().parse()?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_with<'a>(row: &'a [i32], target: usize, colliders: &[(i32, i64)]) -> CollisionContext<'a> {
        let len = row.len() as i64;
        let colliders = colliders
            .iter()
            .map(|&(value, displacement)| Collider {
                value,
                source: (target as i64 - displacement).rem_euclid(len) as usize,
                displacement,
            })
            .collect();
        CollisionContext::new(target, colliders, row, Boundary::Periodic)
    }

    #[test]
    fn roles_follow_arrival_side() {
        let mut row = vec![0; 16];
        row[10] = -2;
        row[5] = 3;
        let ctx = ctx_with(&row, 8, &[(-2, -2), (3, 3)]);
        assert_eq!((ctx.u, ctx.v), (2, 3));
    }

    #[test]
    fn identical_colliders_merge() {
        let row = vec![0; 16];
        let ctx = ctx_with(&row, 8, &[(3, 3), (3, 3), (-2, -2)]);
        assert_eq!(ctx.colliders.len(), 2);
    }

    #[test]
    fn zero_norm_three_way() {
        let mut row = vec![0; 16];
        row[5] = 3;
        row[10] = -2;
        row[7] = 1;
        let ctx = ctx_with(&row, 8, &[(3, 3), (-2, -2), (1, 1)]);
        assert_eq!(resolve_collision(NormId::Zero, &ctx), 0);
    }

    #[test]
    fn result_beyond_length_dies() {
        // A gives u + v = 7 >= 6
        let mut row = vec![0; 6];
        row[1] = 3; // a - v with a = 4, v = 3
        row[2] = -4; // wraps: a + u = 4 + 4 = 8 = 2 (mod 6)
        let ctx = ctx_with(&row, 4, &[(3, 3), (-4, -4)]);
        assert_eq!(resolve_collision(NormId::A, &ctx), 0);
    }

    #[test]
    fn norm_names_round_trip() {
        for n in NormId::ALL {
            assert_eq!(n.name().parse::<NormId>().unwrap(), n);
        }
        assert!("q".parse::<NormId>().is_err());
    }

    #[test]
    fn patches_parse() {
        let p = parse_patches("0..8:a, 8..16:c").unwrap();
        assert_eq!(p, vec![(0, 8, NormId::A), (8, 16, NormId::C)]);
        assert!(parse_patches("0-8:a").is_err());
    }

    #[test]
    fn norm_map_split_and_validation() {
        let map = make_norm_map(8, &[(0, 4, NormId::A), (4, 8, NormId::C)]).unwrap();
        assert_eq!(map[3], NormId::A);
        assert_eq!(map[4], NormId::C);
        assert!(make_norm_map(8, &[(0, 5, NormId::A), (4, 8, NormId::C)]).is_err());
        assert!(make_norm_map(8, &[(0, 3, NormId::A), (4, 8, NormId::C)]).is_err());
        assert_eq!(make_norm_map(8, &[(0, 8, NormId::Zero)]).unwrap(), vec![NormId::Zero; 8]);
    }
}
