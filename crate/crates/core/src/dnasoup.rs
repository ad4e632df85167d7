//! Well-mixed strand chemistry: a monomer pool, oriented single strands and
//! antiparallel duplexes, driven by elongation, complementary annealing,
//! gap filling and splitting.
//!
//! Duplex geometry: the bottom strand is read 3'->5' against the top strand
//! (5'->3'). With `rb` the reversed bottom strand, top position `i` faces
//! `rb[i - offset]`, so the overlap is `max(0, offset) .. min(len_top,
//! offset + len_bottom)` in top coordinates.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Result, SymbaError};
use crate::rng::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nucleotide {
    A,
    C,
    G,
    T,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::C, Nucleotide::G, Nucleotide::T];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Nucleotide {
        Self::ALL[i]
    }

    pub fn complement(self) -> Nucleotide {
        match self {
            Nucleotide::A => Nucleotide::T,
            Nucleotide::T => Nucleotide::A,
            Nucleotide::C => Nucleotide::G,
            Nucleotide::G => Nucleotide::C,
        }
    }

    pub fn as_byte(self) -> u8 {
        b"ACGT"[self.index()]
    }

    pub fn from_byte(b: u8) -> Option<Nucleotide> {
        match b {
            b'A' => Some(Nucleotide::A),
            b'C' => Some(Nucleotide::C),
            b'G' => Some(Nucleotide::G),
            b'T' => Some(Nucleotide::T),
            _ => None,
        }
    }
}

pub fn complement(n: Nucleotide) -> Nucleotide {
    n.complement()
}

pub fn parse_bases(s: &str) -> Result<Vec<Nucleotide>> {
    s.bytes()
        .map(|b| Nucleotide::from_byte(b).ok_or_else(|| SymbaError::Format(format!("invalid base `{}`", b as char))))
        .collect()
}

pub fn bases_to_ascii(bases: &[Nucleotide]) -> Vec<u8> {
    bases.iter().map(|b| b.as_byte()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strand {
    pub id: u64,
    /// 5' -> 3'.
    pub bases: Vec<Nucleotide>,
}

impl Strand {
    pub fn new(id: u64, bases: Vec<Nucleotide>) -> Result<Self> {
        if bases.is_empty() {
            return Err(SymbaError::InvalidParameter("strands need at least one base".into()));
        }
        Ok(Strand { id, bases })
    }

    pub fn parse(id: u64, s: &str) -> Result<Self> {
        Strand::new(id, parse_bases(s)?)
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn to_ascii(&self) -> Vec<u8> {
        bases_to_ascii(&self.bases)
    }
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bases {
            write!(f, "{}", b.as_byte() as char)?;
        }
        Ok(())
    }
}

/// Base of `bottom` facing top position `i` under `offset`, if any.
fn facing(top_len: usize, bottom: &[Nucleotide], offset: i64, i: usize) -> Option<usize> {
    let k = i as i64 - offset;
    if i >= top_len || k < 0 || k >= bottom.len() as i64 {
        None
    } else {
        Some(bottom.len() - 1 - k as usize)
    }
}

fn overlap_range(top_len: usize, bottom_len: usize, offset: i64) -> std::ops::Range<usize> {
    let start = offset.max(0) as usize;
    let end = (offset + bottom_len as i64).min(top_len as i64).max(0) as usize;
    start..end.max(start)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Duplex {
    pub top: Strand,
    pub bottom: Strand,
    pub offset: i64,
    /// One flag per overlap position, in top order.
    pub pairing: Vec<bool>,
}

impl Duplex {
    /// Pairs every complementary overlap position.
    pub fn new(top: Strand, bottom: Strand, offset: i64) -> Self {
        let range = overlap_range(top.len(), bottom.len(), offset);
        let pairing = range
            .map(|i| {
                let j = facing(top.len(), &bottom.bases, offset, i).expect("inside overlap");
                bottom.bases[j] == top.bases[i].complement()
            })
            .collect();
        Duplex { top, bottom, offset, pairing }
    }

    pub fn overlap(&self) -> std::ops::Range<usize> {
        overlap_range(self.top.len(), self.bottom.len(), self.offset)
    }

    pub fn overlap_len(&self) -> usize {
        self.pairing.len()
    }

    pub fn paired_len(&self) -> usize {
        self.pairing.iter().filter(|&&p| p).count()
    }

    pub fn gaps(&self) -> usize {
        self.overlap_len() - self.paired_len()
    }

    pub fn mass(&self) -> usize {
        self.top.len() + self.bottom.len()
    }

    /// Every paired position faces its complement.
    pub fn is_valid(&self) -> bool {
        let range = self.overlap();
        range.len() == self.pairing.len()
            && range.zip(&self.pairing).all(|(i, &p)| {
                !p || {
                    let j = facing(self.top.len(), &self.bottom.bases, self.offset, i).unwrap();
                    self.bottom.bases[j] == self.top.bases[i].complement()
                }
            })
    }
}

/// Best antiparallel alignment of `bottom` against `top`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Anneal {
    pub offset: i64,
    /// Top coordinate where the longest complementary run starts.
    pub run_start: usize,
    pub run_len: usize,
}

/// Scans all antiparallel offsets and keeps the one with the longest
/// contiguous complementary run (ties: smaller |offset|, then smaller
/// offset). `None` unless that run reaches `min_overlap`.
pub fn find_best_anneal(top: &Strand, bottom: &Strand, min_overlap: usize) -> Option<Anneal> {
    let (lt, lb) = (top.len() as i64, bottom.len() as i64);
    let mut best: Option<Anneal> = None;
    for offset in (1 - lb)..lt {
        let mut run = 0usize;
        let mut best_here = (0usize, 0usize);
        for i in overlap_range(top.len(), bottom.len(), offset) {
            let j = facing(top.len(), &bottom.bases, offset, i).unwrap();
            if bottom.bases[j] == top.bases[i].complement() {
                run += 1;
                if run > best_here.1 {
                    best_here = (i + 1 - run, run);
                }
            } else {
                run = 0;
            }
        }
        let candidate = Anneal { offset, run_start: best_here.0, run_len: best_here.1 };
        let better = match best {
            None => true,
            Some(b) => {
                (candidate.run_len, std::cmp::Reverse(offset.abs()), std::cmp::Reverse(offset))
                    > (b.run_len, std::cmp::Reverse(b.offset.abs()), std::cmp::Reverse(b.offset))
            }
        };
        if better {
            best = Some(candidate);
        }
    }
    best.filter(|b| b.run_len >= min_overlap.max(1))
}

/// Where gap-filling monomers come from.
pub trait MonomerSource {
    fn take(&mut self, base: Nucleotide) -> bool;
    /// A base displaced from a strand.
    fn give_back(&mut self, base: Nucleotide);
}

/// Free monomer counts indexed by [`Nucleotide::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pool(pub [u64; 4]);

impl Pool {
    pub fn uniform(per_base: u64) -> Self {
        Pool([per_base; 4])
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn count(&self, b: Nucleotide) -> u64 {
        self.0[b.index()]
    }

    /// Removes one monomer drawn in proportion to the counts.
    pub fn draw(&mut self, rng: &mut SimRng) -> Option<Nucleotide> {
        let i = rng.weighted_index(&self.0)?;
        self.0[i] -= 1;
        Some(Nucleotide::from_index(i))
    }
}

impl MonomerSource for Pool {
    fn take(&mut self, base: Nucleotide) -> bool {
        let slot = &mut self.0[base.index()];
        if *slot == 0 {
            return false;
        }
        *slot -= 1;
        true
    }

    fn give_back(&mut self, base: Nucleotide) {
        self.0[base.index()] += 1;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FillReport {
    pub filled: usize,
    pub starved: usize,
}

/// Repairs unpaired overlap positions, 5'->3' along the top strand, by
/// substituting the complement of the opposite base into the shorter strand
/// (the bottom strand on equal lengths). Each repair takes the needed monomer
/// from `source` and returns the displaced base to it.
pub fn fill_gaps<M: MonomerSource>(d: &mut Duplex, source: &mut M) -> FillReport {
    let mut report = FillReport::default();
    let fix_top = d.top.len() < d.bottom.len();
    let range = d.overlap();
    for (slot, i) in range.enumerate() {
        if d.pairing[slot] {
            continue;
        }
        let j = facing(d.top.len(), &d.bottom.bases, d.offset, i).unwrap();
        let (template, target) =
            if fix_top { (d.bottom.bases[j], &mut d.top.bases[i]) } else { (d.top.bases[i], &mut d.bottom.bases[j]) };
        let needed = template.complement();
        if source.take(needed) {
            source.give_back(*target);
            *target = needed;
            d.pairing[slot] = true;
            report.filled += 1;
        } else {
            report.starved += 1;
        }
    }
    report
}

/// Releases both strands once the overlap is fully paired and long enough.
pub fn split(d: &Duplex, split_min_len: usize) -> Option<(Strand, Strand)> {
    (d.gaps() == 0 && d.paired_len() >= split_min_len).then(|| (d.top.clone(), d.bottom.clone()))
}

/// Substitutes each base with probability `rate` by one of the other three.
/// Returns the number of substitutions.
pub fn mutate(s: &mut Strand, rate: f64, rng: &mut SimRng) -> usize {
    let mut changed = 0;
    for b in s.bases.iter_mut() {
        if rng.bernoulli(rate) {
            let shift = 1 + rng.below(3) as usize;
            *b = Nucleotide::from_index((b.index() + shift) % 4);
            changed += 1;
        }
    }
    changed
}

/// Appends one monomer from the pool at the 3' end; `false` on starvation.
pub fn elongate(s: &mut Strand, pool: &mut Pool, rng: &mut SimRng) -> bool {
    match pool.draw(rng) {
        Some(b) => {
            s.bases.push(b);
            true
        }
        None => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// Elongation only.
    A,
    /// Elongation, annealing, gap filling and splitting.
    B,
}

impl FromStr for Condition {
    type Err = SymbaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Condition::A),
            "b" | "B" => Ok(Condition::B),
            other => Err(SymbaError::InvalidParameter(format!("unknown condition `{other}` (expected a or b)"))),
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "a",
            Condition::B => "b",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoupConfig {
    pub mutation_rate: f64,
    pub cycles: usize,
    pub min_overlap: usize,
    pub split_min_len: usize,
    pub condition: Condition,
    pub rng_seed: u64,
    pub pool_per_base: u64,
    pub initial_strands: usize,
    pub initial_strand_len: usize,
    /// Upper bound on random strand pairs tested for annealing per cycle.
    pub association_pairs: usize,
}

impl Default for SoupConfig {
    fn default() -> Self {
        SoupConfig {
            mutation_rate: 1e-4,
            cycles: 400,
            min_overlap: 4,
            split_min_len: 8,
            condition: Condition::B,
            rng_seed: 0,
            pool_per_base: 2500,
            initial_strands: 50,
            initial_strand_len: 4,
            association_pairs: 64,
        }
    }
}

impl SoupConfig {
    /// Smaller soup (4 x 75 monomers, 20 initial 4-mers) in which chance
    /// repeats of long motifs stay rare without annealing.
    pub fn motif_separation() -> Self {
        SoupConfig { pool_per_base: 75, initial_strands: 20, ..SoupConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SymbaError::InvalidParameter(m));
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad(format!("mutation rate {} outside [0, 1]", self.mutation_rate));
        }
        if self.min_overlap < 1 {
            return bad("min_overlap must be at least 1".into());
        }
        if self.initial_strand_len < 1 {
            return bad("initial strands need at least one base".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SoupStats {
    pub starvations: u64,
    pub mutations: u64,
    pub anneals: u64,
    pub fills: u64,
    pub splits: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Soup {
    pub pool: Pool,
    pub strands: Vec<Strand>,
    pub duplexes: Vec<Duplex>,
    pub cycle: usize,
    pub stats: SoupStats,
    rng: SimRng,
    next_id: u64,
}

/// All strands present at one cycle, free and bound, ordered by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub cycle: usize,
    pub strands: Vec<(u64, Vec<u8>)>,
}

impl Snapshot {
    pub fn sequences(&self) -> Vec<&[u8]> {
        self.strands.iter().map(|(_, s)| s.as_slice()).collect()
    }
}

impl Soup {
    pub fn new(pool: Pool, strands: Vec<Strand>, rng_seed: u64) -> Self {
        let next_id = strands.iter().map(|s| s.id + 1).max().unwrap_or(0);
        Soup {
            pool,
            strands,
            duplexes: Vec::new(),
            cycle: 0,
            stats: SoupStats::default(),
            rng: SimRng::new(rng_seed),
            next_id,
        }
    }

    /// Uniform pool plus random initial strands drawn from `rng_seed`.
    pub fn seeded(cfg: &SoupConfig, rng_seed: u64) -> Self {
        let rng = SimRng::new(rng_seed);
        let mut init = rng.split(0);
        let strands = (0..cfg.initial_strands as u64)
            .map(|id| Strand {
                id,
                bases: (0..cfg.initial_strand_len).map(|_| Nucleotide::from_index(init.below(4) as usize)).collect(),
            })
            .collect();
        let mut soup = Soup::new(Pool::uniform(cfg.pool_per_base), strands, 0);
        soup.rng = rng.split(1);
        soup
    }

    /// Pool monomers plus every strand base.
    pub fn total_mass(&self) -> u64 {
        self.pool.total()
            + self.strands.iter().map(|s| s.len() as u64).sum::<u64>()
            + self.duplexes.iter().map(|d| d.mass() as u64).sum::<u64>()
    }

    pub fn snapshot(&self) -> Snapshot {
        let mut strands: Vec<(u64, Vec<u8>)> = self
            .strands
            .iter()
            .chain(self.duplexes.iter().flat_map(|d| [&d.top, &d.bottom]))
            .map(|s| (s.id, s.to_ascii()))
            .collect();
        strands.sort_unstable_by_key(|(id, _)| *id);
        Snapshot { cycle: self.cycle, strands }
    }

    pub fn fresh_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    /// One sweep: mutate, elongate, then (condition B) anneal, fill and split.
    pub fn cycle(&mut self, cfg: &SoupConfig) {
        for s in self.strands.iter_mut() {
            self.stats.mutations += mutate(s, cfg.mutation_rate, &mut self.rng) as u64;
        }
        for s in self.strands.iter_mut() {
            if !elongate(s, &mut self.pool, &mut self.rng) {
                self.stats.starvations += 1;
            }
        }
        if cfg.condition == Condition::B {
            self.associate(cfg);
            for d in self.duplexes.iter_mut() {
                self.stats.fills += fill_gaps(d, &mut self.pool).filled as u64;
            }
            let mut kept = Vec::with_capacity(self.duplexes.len());
            for d in std::mem::take(&mut self.duplexes) {
                match split(&d, cfg.split_min_len) {
                    Some((a, b)) => {
                        self.strands.push(a);
                        self.strands.push(b);
                        self.stats.splits += 1;
                    }
                    None => kept.push(d),
                }
            }
            self.duplexes = kept;
        }
        self.cycle += 1;
    }

    fn associate(&mut self, cfg: &SoupConfig) {
        let n = self.strands.len();
        if n < 2 {
            return;
        }
        let total_pairs = n * (n - 1) / 2;
        let attempts = n.min(cfg.association_pairs).min(total_pairs);
        let mut chosen: HashSet<(usize, usize)> = HashSet::with_capacity(attempts);
        let mut order = Vec::with_capacity(attempts);
        while order.len() < attempts {
            let i = self.rng.below_usize(n);
            let j = self.rng.below_usize(n);
            if i == j {
                continue;
            }
            let key = (i.min(j), i.max(j));
            if chosen.insert(key) {
                order.push((i, j));
            }
        }
        let mut bound = vec![false; n];
        let mut formed = Vec::new();
        for (i, j) in order {
            if bound[i] || bound[j] {
                continue;
            }
            if let Some(a) = find_best_anneal(&self.strands[i], &self.strands[j], cfg.min_overlap) {
                bound[i] = true;
                bound[j] = true;
                formed.push((i, j, a.offset));
            }
        }
        if formed.is_empty() {
            return;
        }
        let mut slots: Vec<Option<Strand>> = std::mem::take(&mut self.strands).into_iter().map(Some).collect();
        for (i, j, offset) in formed {
            let top = slots[i].take().unwrap();
            let bottom = slots[j].take().unwrap();
            self.duplexes.push(Duplex::new(top, bottom, offset));
            self.stats.anneals += 1;
        }
        self.strands = slots.into_iter().flatten().collect();
    }
}

/// Seed of run `index` under `master_seed`.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    SimRng::new(master_seed).split(index).key()
}

/// Runs one seed, handing each snapshot (cycle 0 included) to `observe`.
pub fn run_seed_with<F: FnMut(&Soup)>(cfg: &SoupConfig, seed: u64, mut observe: F) -> Soup {
    let mut soup = Soup::seeded(cfg, seed);
    observe(&soup);
    for _ in 0..cfg.cycles {
        soup.cycle(cfg);
        observe(&soup);
    }
    soup
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    pub snapshots: Vec<Snapshot>,
    pub stats: SoupStats,
}

/// Independent runs with seeds split from `cfg.rng_seed`.
pub fn run_experiment(cfg: &SoupConfig, n_seeds: usize) -> Result<Vec<SeedRun>> {
    cfg.validate()?;
    if n_seeds < 1 {
        return Err(SymbaError::InvalidParameter("need at least one seed".into()));
    }
    Ok((0..n_seeds as u64)
        .map(|i| {
            let seed = derive_seed(cfg.rng_seed, i);
            let mut snapshots = Vec::with_capacity(cfg.cycles + 1);
            let soup = run_seed_with(cfg, seed, |s| snapshots.push(s.snapshot()));
            SeedRun { seed, snapshots, stats: soup.stats }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strand(id: u64, s: &str) -> Strand {
        Strand::parse(id, s).unwrap()
    }

    #[test]
    fn complement_pairs() {
        assert_eq!(complement(Nucleotide::A), Nucleotide::T);
        assert_eq!(complement(Nucleotide::G), Nucleotide::C);
        for n in Nucleotide::ALL {
            assert_eq!(complement(complement(n)), n);
            assert_ne!(complement(n), n);
        }
    }

    #[test]
    fn self_complementary_anneal() {
        let a = find_best_anneal(&strand(0, "ACGT"), &strand(1, "ACGT"), 4).unwrap();
        assert_eq!(a, Anneal { offset: 0, run_start: 0, run_len: 4 });
        assert!(find_best_anneal(&strand(0, "AAAA"), &strand(1, "AAAA"), 1).is_none());
    }

    #[test]
    fn staggered_anneal_offset() {
        // reversed bottom AATGCA: top ACGT faces TGCA at offset 0
        let a = find_best_anneal(&strand(0, "GGACGT"), &strand(1, "ACGTAA"), 4).unwrap();
        let d = Duplex::new(strand(0, "GGACGT"), strand(1, "ACGTAA"), a.offset);
        assert!(d.is_valid());
        assert_eq!(a.run_len, 4);
        assert_eq!(d.paired_len(), 4);
    }

    #[test]
    fn elongation_and_starvation() {
        let mut rng = SimRng::new(1);
        let mut s = strand(0, "AC");
        let mut pool = Pool([0, 0, 1, 0]);
        assert!(elongate(&mut s, &mut pool, &mut rng));
        assert_eq!(s.to_string(), "ACG");
        assert_eq!(pool.total(), 0);
        assert!(!elongate(&mut s, &mut pool, &mut rng));
        assert_eq!(s.to_string(), "ACG");

        let mut pool = Pool([100, 0, 0, 0]);
        for _ in 0..10 {
            elongate(&mut s, &mut pool, &mut rng);
        }
        assert!(s.to_string().ends_with("AAAAAAAAAA"));
    }

    #[test]
    fn single_gap_filled_with_complement() {
        // top AAAA against bottom TTGT: reversed TGTT faces A A A A -> gap at top index 1
        let mut d = Duplex::new(strand(0, "AAAA"), strand(1, "TTGT"), 0);
        assert_eq!(d.gaps(), 1);
        let mut pool = Pool([0, 0, 0, 1]);
        let r = fill_gaps(&mut d, &mut pool);
        assert_eq!(r, FillReport { filled: 1, starved: 0 });
        assert_eq!(d.bottom.to_string(), "TTTT");
        assert_eq!(pool, Pool([0, 0, 1, 0]));
        assert!(d.is_valid());
        assert_eq!(d.gaps(), 0);
    }

    #[test]
    fn fully_paired_unchanged_by_fill() {
        let mut d = Duplex::new(strand(0, "ACGT"), strand(1, "ACGT"), 0);
        let before = d.clone();
        let mut pool = Pool::uniform(3);
        assert_eq!(fill_gaps(&mut d, &mut pool).filled, 0);
        assert_eq!(d, before);
        assert_eq!(pool, Pool::uniform(3));
    }

    #[test]
    fn split_thresholds() {
        let d = Duplex::new(strand(0, "AACCGGTT"), strand(1, "AACCGGTT"), 0);
        assert_eq!(d.paired_len(), 8);
        assert!(split(&d, 8).is_some());
        assert!(split(&d, 9).is_none());
        let gapped = Duplex::new(strand(0, "AACCGGTT"), strand(1, "AACCGGTA"), 0);
        assert_eq!(gapped.gaps(), 1);
        assert!(split(&gapped, 1).is_none());
    }

    #[test]
    fn mutation_extremes() {
        let mut rng = SimRng::new(3);
        let original = strand(0, "ACGTACGTAC");
        let mut s = original.clone();
        assert_eq!(mutate(&mut s, 0.0, &mut rng), 0);
        assert_eq!(s, original);
        assert_eq!(mutate(&mut s, 1.0, &mut rng), 10);
        assert!(s.bases.iter().zip(&original.bases).all(|(a, b)| a != b));
    }

    #[test]
    fn condition_a_never_binds() {
        let cfg = SoupConfig { condition: Condition::A, cycles: 50, ..SoupConfig::default() };
        let soup = run_seed_with(&cfg, 11, |s| assert!(s.duplexes.is_empty()));
        assert_eq!(soup.stats.anneals, 0);
        assert_eq!(soup.stats.splits, 0);
    }

    #[test]
    fn empty_soup_only_counts_cycles() {
        let cfg = SoupConfig::default();
        let mut soup = Soup::new(Pool::default(), Vec::new(), 5);
        soup.cycle(&cfg);
        assert_eq!(soup.cycle, 1);
        assert_eq!(soup.total_mass(), 0);
        assert!(soup.strands.is_empty() && soup.duplexes.is_empty());
    }

    #[test]
    fn experiment_shapes_and_determinism() {
        let cfg = SoupConfig { cycles: 0, ..SoupConfig::default() };
        let runs = run_experiment(&cfg, 1).unwrap();
        assert_eq!(runs[0].snapshots.len(), 1);
        let cfg = SoupConfig { cycles: 20, ..SoupConfig::default() };
        assert_eq!(run_experiment(&cfg, 2).unwrap(), run_experiment(&cfg, 2).unwrap());
        assert!(run_experiment(&cfg, 0).is_err());
    }
}
