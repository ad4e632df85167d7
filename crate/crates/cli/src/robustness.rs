//! Intruder sweep around a periodic organism.
//!
//! The organism is centred on the grid and run alone to find its cycle. For
//! each `(value, distance)` the intruder replaces the cell `distance` steps
//! left of the organism's first gene. A run survives when some generation in
//! the second half (`g >= G / 2`) contains one of the organism's cycle rows,
//! trimmed of empty edges, as a contiguous window (wrapping on a ring).

use symba_core::core1d::{centered, detect_period, run_1d, Boundary, World1D};
use symba_core::norms::NormId;

use crate::config::RobustnessParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RobustnessRow {
    pub value: i32,
    pub distance: usize,
    pub survived: bool,
    /// First matching generation at or after `G / 2`, or `G - 1` on death.
    pub generations_to_verdict: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustnessReport {
    pub period: usize,
    pub rows: Vec<RobustnessRow>,
}

impl RobustnessReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,distance,survived,generations_to_verdict\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.value, r.distance, r.survived as u8, r.generations_to_verdict));
        }
        out
    }
}

fn organism_world(p: &RobustnessParams) -> Result<(World1D, usize), String> {
    let span = centered(p.length, p.organism.len());
    if span.len() != p.organism.len() {
        return Err(format!("organism of {} cells does not fit a grid of {}", p.organism.len(), p.length));
    }
    let mut cells = vec![0; p.length];
    cells[span.clone()].copy_from_slice(&p.organism);
    let w = World1D::new(cells, p.boundary, vec![p.norm; p.length]).map_err(|e| e.to_string())?;
    Ok((w, span.start))
}

fn trim(row: &[i32]) -> &[i32] {
    let Some(first) = row.iter().position(|&v| v != 0) else { return &[] };
    let last = row.iter().rposition(|&v| v != 0).unwrap();
    &row[first..=last]
}

/// Whether `pattern` occurs in `row`, wrapping around when `periodic`.
pub fn contains_pattern(row: &[i32], pattern: &[i32], periodic: bool) -> bool {
    let n = row.len();
    if pattern.is_empty() || pattern.len() > n {
        return pattern.is_empty();
    }
    let starts = if periodic { n } else { n - pattern.len() + 1 };
    (0..starts).any(|s| pattern.iter().enumerate().all(|(i, &v)| row[(s + i) % n] == v))
}

pub fn robustness_sweep(p: &RobustnessParams) -> Result<RobustnessReport, String> {
    let (control, left) = organism_world(p)?;
    let control_run = run_1d(&control, p.generations);
    let (start, period) = detect_period(&control_run).ok_or_else(|| {
        format!("the organism shows no periodic cycle within {} generations, so survival is undefined", p.generations)
    })?;
    let mut patterns: Vec<&[i32]> = (start..start + period).map(|g| trim(control_run.row(g))).collect();
    patterns.sort();
    patterns.dedup();
    if patterns.iter().any(|pat| pat.is_empty()) {
        return Err("the organism dies out in the control run".into());
    }

    let periodic = p.boundary == Boundary::Periodic;
    let half = p.generations / 2;
    let mut rows = Vec::with_capacity(p.values.len() * p.distances.len());
    for &value in &p.values {
        for &distance in &p.distances {
            if distance > left {
                return Err(format!("distance {distance} leaves the grid (at most {left} cells left of the organism)"));
            }
            let mut world = control.clone();
            world.set(left - distance, value).map_err(|e| e.to_string())?;
            let run = run_1d(&world, p.generations);
            let hit =
                (half..p.generations).find(|&g| patterns.iter().any(|pat| contains_pattern(run.row(g), pat, periodic)));
            rows.push(RobustnessRow {
                value,
                distance,
                survived: hit.is_some(),
                generations_to_verdict: hit.unwrap_or(p.generations - 1),
            });
        }
    }
    Ok(RobustnessReport { period, rows })
}

/// Default sweep parameters around `organism`, used by the tests and the
/// example configuration.
pub fn sweep_params(organism: &[i32], length: usize, generations: usize, boundary: Boundary) -> RobustnessParams {
    RobustnessParams {
        organism: organism.to_vec(),
        values: (1..=8).flat_map(|m| [m, -m]).collect(),
        distances: (4..=32).step_by(4).collect(),
        length,
        generations,
        boundary,
        norm: NormId::Zero,
    }
}
