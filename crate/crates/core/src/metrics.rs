//! Analysis of simulation output: population counts, value distributions,
//! plug-in Shannon entropy and mutual information (in bits), k-mer
//! repetition statistics and Wilson score intervals.

use std::collections::{BTreeMap, HashMap};

use crate::core1d::{Spacetime, StepStats};
use crate::error::{Result, SymbaError};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopulationSeries {
    pub living_cells: Vec<usize>,
    pub replication_candidates: Vec<usize>,
    pub collisions: Vec<usize>,
}

impl PopulationSeries {
    pub fn len(&self) -> usize {
        self.living_cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.living_cells.is_empty()
    }
}

pub fn population_series(st: &Spacetime, log: &[StepStats]) -> Result<PopulationSeries> {
    if log.len() != st.generations() {
        return Err(SymbaError::LengthMismatch { expected: st.generations(), found: log.len() });
    }
    Ok(PopulationSeries {
        living_cells: st.rows().map(|r| r.iter().filter(|&&v| v != 0).count()).collect(),
        replication_candidates: log.iter().map(|s| s.attempts).collect(),
        collisions: log.iter().map(|s| s.collisions).collect(),
    })
}

/// Counts of each nonzero value in a row.
pub fn row_histogram(row: &[i32]) -> BTreeMap<i32, usize> {
    let mut h = BTreeMap::new();
    for &v in row.iter().filter(|&&v| v != 0) {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

pub fn value_histogram(st: &Spacetime) -> Vec<BTreeMap<i32, usize>> {
    st.rows().map(row_histogram).collect()
}

/// Whether the empty value 0 counts as a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alphabet {
    #[default]
    IncludeEmpty,
    ExcludeEmpty,
}

/// Maps a row to dense symbol ids; returns (ids, alphabet size).
fn symbolize(row: &[i32]) -> (Vec<u32>, usize) {
    let mut ids: HashMap<i32, u32> = HashMap::new();
    let out = row
        .iter()
        .map(|v| {
            let next = ids.len() as u32;
            *ids.entry(*v).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

fn entropy_from_counts(counts: impl Iterator<Item = usize>, n: usize) -> f64 {
    let n = n as f64;
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let c = c as f64;
            (c / n) * (n / c).log2()
        })
        .sum()
}

pub fn shannon_entropy(row: &[i32]) -> f64 {
    shannon_entropy_with(row, Alphabet::IncludeEmpty)
}

pub fn shannon_entropy_with(row: &[i32], alphabet: Alphabet) -> f64 {
    let values: Vec<i32> = match alphabet {
        Alphabet::IncludeEmpty => row.to_vec(),
        Alphabet::ExcludeEmpty => row.iter().copied().filter(|&v| v != 0).collect(),
    };
    if values.is_empty() {
        return 0.0;
    }
    let (ids, k) = symbolize(&values);
    let mut counts = vec![0usize; k];
    for id in ids {
        counts[id as usize] += 1;
    }
    entropy_from_counts(counts.into_iter(), values.len())
}

pub fn mutual_information(a: &[i32], b: &[i32]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(SymbaError::LengthMismatch { expected: a.len(), found: b.len() });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let (xa, ka) = symbolize(a);
    let (xb, kb) = symbolize(b);
    Ok(mi_symbols(&xa, ka, &xb, kb))
}

fn mi_symbols(xa: &[u32], ka: usize, xb: &[u32], kb: usize) -> f64 {
    let n = xa.len();
    let mut ca = vec![0usize; ka];
    let mut cb = vec![0usize; kb];
    for &x in xa {
        ca[x as usize] += 1;
    }
    for &y in xb {
        cb[y as usize] += 1;
    }
    let joint: Vec<((u32, u32), usize)> = if ka * kb <= 1 << 16 {
        let mut dense = vec![0usize; ka * kb];
        for (&x, &y) in xa.iter().zip(xb) {
            dense[x as usize * kb + y as usize] += 1;
        }
        dense
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(i, c)| (((i / kb) as u32, (i % kb) as u32), c))
            .collect()
    } else {
        let mut sparse: HashMap<(u32, u32), usize> = HashMap::new();
        for (&x, &y) in xa.iter().zip(xb) {
            *sparse.entry((x, y)).or_insert(0) += 1;
        }
        sparse.into_iter().collect()
    };
    let nf = n as f64;
    let mut joint = joint;
    joint.sort_unstable();
    joint
        .into_iter()
        .map(|((x, y), c)| {
            let c = c as f64;
            let ratio = c * nf / (ca[x as usize] as f64 * cb[y as usize] as f64);
            (c / nf) * ratio.log2()
        })
        .sum()
}

/// Symmetric generation-by-generation mutual information; the diagonal holds
/// the per-row entropies.
#[derive(Debug, Clone, PartialEq)]
pub struct MiMatrix {
    size: usize,
    data: Vec<f64>,
}

impl MiMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.size..(i + 1) * self.size]
    }
}

pub fn mi_matrix(st: &Spacetime) -> MiMatrix {
    let g = st.generations();
    let symbols: Vec<(Vec<u32>, usize)> = st.rows().map(symbolize).collect();
    let mut data = vec![0.0; g * g];
    for i in 0..g {
        data[i * g + i] = shannon_entropy(st.row(i));
        for j in (i + 1)..g {
            let (xa, ka) = &symbols[i];
            let (xb, kb) = &symbols[j];
            let mi = mi_symbols(xa, *ka, xb, *kb);
            data[i * g + j] = mi;
            data[j * g + i] = mi;
        }
    }
    MiMatrix { size: g, data }
}

/// Sliding-window repetition counts for one motif length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    /// Total windows.
    pub windows: usize,
    /// Windows whose k-mer occurs exactly once.
    pub singletons: usize,
    /// `(windows - singletons) / windows`, or 0 when there are no windows.
    pub repeated_fraction: f64,
}

pub fn repeated_window_fraction<S: AsRef<[u8]>>(strands: &[S], k: usize) -> WindowStats {
    assert!(k >= 1, "motif length must be positive");
    let mut counts: HashMap<&[u8], usize> = HashMap::new();
    let mut windows = 0;
    for s in strands {
        let s = s.as_ref();
        if s.len() < k {
            continue;
        }
        for w in s.windows(k) {
            *counts.entry(w).or_insert(0) += 1;
            windows += 1;
        }
    }
    let singletons = counts.values().filter(|&&c| c == 1).count();
    let repeated_fraction = if windows == 0 { 0.0 } else { (windows - singletons) as f64 / windows as f64 };
    WindowStats { windows, singletons, repeated_fraction }
}

/// `1[r >= tau]`.
pub fn threshold_indicator(r: f64, tau: f64) -> bool {
    r >= tau
}

/// Column means of a runs x cycles indicator matrix.
pub fn run_fraction(indicators: &[Vec<bool>]) -> Result<Vec<f64>> {
    let Some(first) = indicators.first() else {
        return Err(SymbaError::InvalidParameter("run_fraction needs at least one run".into()));
    };
    let t = first.len();
    if let Some(bad) = indicators.iter().find(|r| r.len() != t) {
        return Err(SymbaError::LengthMismatch { expected: t, found: bad.len() });
    }
    let n = indicators.len() as f64;
    Ok((0..t).map(|c| indicators.iter().filter(|r| r[c]).count() as f64 / n).collect())
}

/// Two-sided 95% normal quantile used for all Wilson intervals.
pub const WILSON_Z: f64 = 1.959964;

pub fn wilson_interval(successes: usize, n: usize) -> (f64, f64) {
    wilson_interval_z(successes, n, WILSON_Z)
}

pub fn wilson_interval_z(successes: usize, n: usize, z: f64) -> (f64, f64) {
    assert!(n >= 1 && successes <= n, "need 0 <= successes <= n and n >= 1");
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    let lower = if successes == 0 { 0.0 } else { (centre - half).clamp(0.0, 1.0) };
    let upper = if successes == n { 1.0 } else { (centre + half).clamp(0.0, 1.0) };
    (lower, upper)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotifPoint {
    pub cycle: usize,
    pub successes: usize,
    pub runs: usize,
    pub fraction: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Repetition statistics for one motif length across independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifStats {
    pub k: usize,
    pub tau: f64,
    /// `per_run[i][t]` for run `i` at cycle `t`.
    pub per_run: Vec<Vec<WindowStats>>,
    pub indicators: Vec<Vec<bool>>,
    pub curve: Vec<MotifPoint>,
}

impl MotifStats {
    /// `populations[i][t]` is the list of strands of run `i` at cycle `t`.
    pub fn compute<S: AsRef<[u8]>>(populations: &[Vec<Vec<S>>], k: usize, tau: f64) -> Result<MotifStats> {
        let per_run: Vec<Vec<WindowStats>> = populations
            .iter()
            .map(|run| run.iter().map(|strands| repeated_window_fraction(strands, k)).collect())
            .collect();
        let indicators: Vec<Vec<bool>> = per_run
            .iter()
            .map(|run| run.iter().map(|w| threshold_indicator(w.repeated_fraction, tau)).collect())
            .collect();
        let fractions = run_fraction(&indicators)?;
        let runs = indicators.len();
        let curve = fractions
            .iter()
            .enumerate()
            .map(|(cycle, &fraction)| {
                let successes = indicators.iter().filter(|r| r[cycle]).count();
                let (lower, upper) = wilson_interval(successes, runs);
                MotifPoint { cycle, successes, runs, fraction, lower, upper }
            })
            .collect();
        Ok(MotifStats { k, tau, per_run, indicators, curve })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_excludes_zero() {
        let h = row_histogram(&[0, 3, 3, -5]);
        assert_eq!(h, BTreeMap::from([(3, 2), (-5, 1)]));
        assert!(row_histogram(&[0, 0]).is_empty());
    }

    #[test]
    fn entropy_basics() {
        assert_eq!(shannon_entropy(&[0, 0, 0, 0]), 0.0);
        assert!((shannon_entropy(&[0, 5]) - 1.0).abs() < 1e-15);
        assert_eq!(shannon_entropy_with(&[0, 5], Alphabet::ExcludeEmpty), 0.0);
        assert_eq!(shannon_entropy_with(&[0, 0], Alphabet::ExcludeEmpty), 0.0);
    }

    #[test]
    fn mi_constant_row_is_zero() {
        let a = [1, 2, 3, 4, 0, 0];
        assert_eq!(mutual_information(&a, &[7; 6]).unwrap(), 0.0);
        assert!(mutual_information(&a, &[1, 2]).is_err());
    }

    #[test]
    fn window_examples() {
        let w = repeated_window_fraction(&["ACGT"], 4);
        assert_eq!((w.windows, w.singletons, w.repeated_fraction), (1, 1, 0.0));
        let w = repeated_window_fraction(&["AAAA"], 2);
        assert_eq!((w.windows, w.singletons, w.repeated_fraction), (3, 0, 1.0));
        let w = repeated_window_fraction(&["AC"], 3);
        assert_eq!((w.windows, w.repeated_fraction), (0, 0.0));
    }

    #[test]
    fn indicator_boundary() {
        assert!(threshold_indicator(0.10, 0.10));
        assert!(!threshold_indicator(0.099, 0.10));
        assert!(threshold_indicator(1.0, 1.0));
    }

    #[test]
    fn fractions() {
        assert_eq!(run_fraction(&[vec![true, true], vec![false, false]]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(run_fraction(&[vec![true; 3]]).unwrap(), vec![1.0; 3]);
        assert!(run_fraction(&[]).is_err());
        assert!(run_fraction(&[vec![true], vec![]]).is_err());
    }

    #[test]
    fn wilson_edges() {
        assert_eq!(wilson_interval(0, 10).0, 0.0);
        assert_eq!(wilson_interval(10, 10).1, 1.0);
        let (lo, hi) = wilson_interval(25, 50);
        assert!(lo < 0.5 && hi > 0.5);
        assert!(((lo + hi) / 2.0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn population_length_mismatch() {
        let st = Spacetime::from_rows(2, vec![0, 1, 1, 1]).unwrap();
        assert!(population_series(&st, &[StepStats::default()]).is_err());
        let p = population_series(&st, &[StepStats::default(); 2]).unwrap();
        assert_eq!(p.living_cells, vec![1, 2]);
    }
}
