//! Strand chemistry on a ring of sites. Each site holds at most one fragment
//! (a single strand or a duplex) and a real-valued nucleotide budget that
//! diffuses to its two neighbours and is spent by growth.
//!
//! A cycle is synchronous. Neighbour interactions happen inside disjoint
//! pairs of adjacent sites, `(2m + p, 2m + p + 1)` with `p = cycle mod 2`,
//! so over two cycles every site meets both neighbours. Every decision
//! reads only the previous state of the site and its pair partner, and
//! random draws come from a stream keyed by `(cycle, site)`. A site's next
//! state is therefore a function of sites within distance 1.
//!
//! Phases per cycle:
//! 1. budget diffusion (`rate` of the budget to each neighbour);
//! 2. mutation and elongation of single strands, one budget unit per base;
//! 3. (condition B) annealing inside each pair, the duplex taking one site
//!    and freeing the other;
//! 4. (condition B) gap filling from the site's own budget;
//! 5. (condition B) splitting: the top strand stays, the bottom strand moves
//!    into the pair partner when that site is empty.

use std::collections::HashMap;

use crate::dnasoup::{
    fill_gaps, find_best_anneal, mutate, split, Condition, Duplex, MonomerSource, Nucleotide, Strand,
};
use crate::error::{Result, SymbaError};
use crate::rng::SimRng;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Fragment {
    #[default]
    Empty,
    Single(Strand),
    Double(Duplex),
}

impl Fragment {
    pub fn is_empty(&self) -> bool {
        matches!(self, Fragment::Empty)
    }

    pub fn strands(&self) -> Vec<&Strand> {
        match self {
            Fragment::Empty => Vec::new(),
            Fragment::Single(s) => vec![s],
            Fragment::Double(d) => vec![&d.top, &d.bottom],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DnaCell {
    pub fragment: Fragment,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig {
    pub sites: usize,
    pub condition: Condition,
    pub mutation_rate: f64,
    pub min_overlap: usize,
    pub split_min_len: usize,
    pub diffusion_rate: f64,
    pub initial_budget: f64,
    /// Probability that a site starts with a random strand.
    pub fragment_prob: f64,
    pub fragment_len: usize,
    pub rng_seed: u64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            sites: 512,
            condition: Condition::B,
            mutation_rate: 1e-4,
            min_overlap: 4,
            split_min_len: 8,
            diffusion_rate: 0.1,
            initial_budget: 16.0,
            fragment_prob: 0.2,
            fragment_len: 4,
            rng_seed: 0,
        }
    }
}

impl LatticeConfig {
    /// Dense seeding, large budgets and longer anneal overlaps: the setting
    /// in which Condition B forms the most persistent same-motif domains.
    pub fn spatial_domains() -> Self {
        LatticeConfig { fragment_prob: 1.0, initial_budget: 256.0, min_overlap: 6, ..LatticeConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SymbaError::InvalidParameter(m));
        if self.sites < 2 {
            return bad(format!("lattice needs at least 2 sites, got {}", self.sites));
        }
        if !(0.0..=0.5).contains(&self.diffusion_rate) {
            return bad(format!("diffusion rate {} outside [0, 0.5]", self.diffusion_rate));
        }
        if !(self.initial_budget >= 0.0 && self.initial_budget.is_finite()) {
            return bad(format!("initial budget {} must be finite and nonnegative", self.initial_budget));
        }
        if !(0.0..=1.0).contains(&self.fragment_prob) || !(0.0..=1.0).contains(&self.mutation_rate) {
            return bad("probabilities must lie in [0, 1]".into());
        }
        if self.min_overlap < 1 || self.fragment_len < 1 {
            return bad("min_overlap and fragment_len must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DnaLattice {
    pub cells: Vec<DnaCell>,
    pub cycle: usize,
    rng: SimRng,
}

/// Budget available to one site during a cycle.
struct LocalBudget {
    available: f64,
    spent: f64,
}

impl LocalBudget {
    fn spend(&mut self) -> bool {
        if self.available >= 1.0 {
            self.available -= 1.0;
            self.spent += 1.0;
            true
        } else {
            false
        }
    }
}

impl MonomerSource for LocalBudget {
    fn take(&mut self, _base: Nucleotide) -> bool {
        self.spend()
    }

    // Displaced bases are not recycled into the budget.
    fn give_back(&mut self, _base: Nucleotide) {}
}

impl DnaLattice {
    pub fn new(cells: Vec<DnaCell>, rng_seed: u64) -> Result<Self> {
        if cells.len() < 2 {
            return Err(SymbaError::InvalidLength(cells.len()));
        }
        if cells.iter().any(|c| c.budget.is_nan() || c.budget < 0.0) {
            return Err(SymbaError::InvalidParameter("budgets must be nonnegative".into()));
        }
        Ok(DnaLattice { cells, cycle: 0, rng: SimRng::new(rng_seed) })
    }

    /// Uniform budgets and random initial strands; strand ids are site indices.
    pub fn seeded(cfg: &LatticeConfig) -> Result<Self> {
        cfg.validate()?;
        let root = SimRng::new(cfg.rng_seed);
        let mut init = root.split(u64::MAX);
        let cells = (0..cfg.sites)
            .map(|i| {
                let fragment = if init.bernoulli(cfg.fragment_prob) {
                    let bases = (0..cfg.fragment_len).map(|_| Nucleotide::from_index(init.below_usize(4))).collect();
                    Fragment::Single(Strand { id: i as u64, bases })
                } else {
                    Fragment::Empty
                };
                DnaCell { fragment, budget: cfg.initial_budget }
            })
            .collect();
        DnaLattice::new(cells, cfg.rng_seed)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.fragment.is_empty())
    }

    pub fn total_budget(&self) -> f64 {
        self.cells.iter().map(|c| c.budget).sum()
    }

    pub fn duplex_count(&self) -> usize {
        self.cells.iter().filter(|c| matches!(c.fragment, Fragment::Double(_))).count()
    }

    fn site_rng(&self, site: usize) -> SimRng {
        self.rng.split(self.cycle as u64).split(site as u64)
    }

    pub fn step(&mut self, cfg: &LatticeConfig) {
        let n = self.len();
        let r = cfg.diffusion_rate;
        let old: Vec<f64> = self.cells.iter().map(|c| c.budget).collect();
        let mut budgets: Vec<LocalBudget> =
            old.iter().map(|&b| LocalBudget { available: b * (1.0 - 2.0 * r), spent: 0.0 }).collect();
        let mut rngs: Vec<SimRng> = (0..n).map(|i| self.site_rng(i)).collect();

        for (i, cell) in self.cells.iter_mut().enumerate() {
            if let Fragment::Single(s) = &mut cell.fragment {
                mutate(s, cfg.mutation_rate, &mut rngs[i]);
                if budgets[i].spend() {
                    s.bases.push(Nucleotide::from_index(rngs[i].below_usize(4)));
                }
            }
        }

        if cfg.condition == Condition::B {
            let parity = self.cycle % 2;
            let pairs: Vec<(usize, usize)> =
                (0..n / 2).map(|m| ((2 * m + parity) % n, (2 * m + parity + 1) % n)).collect();
            for &(left, right) in &pairs {
                self.anneal_pair(left, right, cfg, &mut rngs[left]);
            }
            for (i, cell) in self.cells.iter_mut().enumerate() {
                if let Fragment::Double(d) = &mut cell.fragment {
                    fill_gaps(d, &mut budgets[i]);
                }
            }
            for &(left, right) in &pairs {
                self.split_into_partner(left, right, cfg);
                self.split_into_partner(right, left, cfg);
            }
        }

        for i in 0..n {
            let prev = old[(i + n - 1) % n];
            let next = old[(i + 1) % n];
            let b = old[i] + r * (prev - old[i]) + r * (next - old[i]) - budgets[i].spent;
            self.cells[i].budget = b.max(0.0);
        }
        self.cycle += 1;
    }

    fn anneal_pair(&mut self, left: usize, right: usize, cfg: &LatticeConfig, rng: &mut SimRng) {
        let (Fragment::Single(_), Fragment::Single(_)) = (&self.cells[left].fragment, &self.cells[right].fragment)
        else {
            return;
        };
        let (host, guest) = if rng.bernoulli(0.5) { (left, right) } else { (right, left) };
        let (Fragment::Single(top), Fragment::Single(bottom)) =
            (&self.cells[host].fragment, &self.cells[guest].fragment)
        else {
            unreachable!()
        };
        if let Some(a) = find_best_anneal(top, bottom, cfg.min_overlap) {
            let bottom = match std::mem::take(&mut self.cells[guest].fragment) {
                Fragment::Single(s) => s,
                _ => unreachable!(),
            };
            let top = match std::mem::take(&mut self.cells[host].fragment) {
                Fragment::Single(s) => s,
                _ => unreachable!(),
            };
            self.cells[host].fragment = Fragment::Double(Duplex::new(top, bottom, a.offset));
        }
    }

    fn split_into_partner(&mut self, site: usize, partner: usize, cfg: &LatticeConfig) {
        if !self.cells[partner].fragment.is_empty() {
            return;
        }
        let Fragment::Double(d) = &self.cells[site].fragment else {
            return;
        };
        if let Some((top, bottom)) = split(d, cfg.split_min_len) {
            self.cells[site].fragment = Fragment::Single(top);
            self.cells[partner].fragment = Fragment::Single(bottom);
        }
    }
}

pub fn step_lattice(lat: &DnaLattice, cfg: &LatticeConfig) -> DnaLattice {
    let mut next = lat.clone();
    next.step(cfg);
    next
}

/// How windows are identified when counting k-mers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KmerReadout {
    /// Windows as written on each strand.
    #[default]
    Literal,
    /// A window and its reverse complement count as one k-mer, named by the
    /// lexicographically smaller of the two.
    Canonical,
}

impl std::str::FromStr for KmerReadout {
    type Err = SymbaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(KmerReadout::Literal),
            "canonical" => Ok(KmerReadout::Canonical),
            _ => Err(SymbaError::InvalidParameter(format!("unknown readout '{s}' (expected literal or canonical)"))),
        }
    }
}

impl std::fmt::Display for KmerReadout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            KmerReadout::Literal => "literal",
            KmerReadout::Canonical => "canonical",
        })
    }
}

fn reverse_complement_ascii(w: &[u8]) -> Vec<u8> {
    w.iter()
        .rev()
        .map(|&b| match b {
            b'A' => b'T',
            b'T' => b'A',
            b'C' => b'G',
            _ => b'C',
        })
        .collect()
}

/// Most frequent k-mer over the site's strand(s); ties go to the
/// lexicographically smallest.
pub fn dominant_kmer(cell: &DnaCell, k: usize) -> Option<Vec<u8>> {
    dominant_kmer_with(cell, k, KmerReadout::Literal)
}

pub fn dominant_kmer_with(cell: &DnaCell, k: usize, readout: KmerReadout) -> Option<Vec<u8>> {
    assert!(k >= 1, "motif length must be positive");
    let mut counts: HashMap<Vec<u8>, usize> = HashMap::new();
    for s in cell.fragment.strands() {
        let seq = s.to_ascii();
        if seq.len() < k {
            continue;
        }
        for w in seq.windows(k) {
            let key = match readout {
                KmerReadout::Literal => w.to_vec(),
                KmerReadout::Canonical => {
                    let rc = reverse_complement_ascii(w);
                    if rc.as_slice() < w {
                        rc
                    } else {
                        w.to_vec()
                    }
                }
            };
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    counts.into_iter().max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0))).map(|(w, _)| w)
}

/// Dominant k-mer identity per site and cycle; row `t` is cycle `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KmerSpacetime {
    pub k: usize,
    pub width: usize,
    /// Interned ids, `-1` where no k-mer is assigned.
    pub ids: Vec<i32>,
    /// `names[id]` is the k-mer string.
    pub names: Vec<String>,
    /// Most frequent ids over the whole diagram, most frequent first.
    pub legend: Vec<i32>,
}

impl KmerSpacetime {
    pub fn cycles(&self) -> usize {
        self.ids.len() / self.width
    }

    pub fn row(&self, t: usize) -> &[i32] {
        &self.ids[t * self.width..(t + 1) * self.width]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeRun {
    pub spacetimes: Vec<KmerSpacetime>,
    /// Total budget at each recorded cycle.
    pub budget_totals: Vec<f64>,
    pub final_state: DnaLattice,
}

struct Interner {
    ids: HashMap<Vec<u8>, i32>,
    names: Vec<String>,
}

impl Interner {
    fn id(&mut self, kmer: Vec<u8>) -> i32 {
        if let Some(&id) = self.ids.get(&kmer) {
            return id;
        }
        let id = self.names.len() as i32;
        self.names.push(String::from_utf8(kmer.clone()).expect("ascii bases"));
        self.ids.insert(kmer, id);
        id
    }
}

/// Records `cycles` rows (the initial state first) of dominant k-mer ids for
/// each `k`, with a top-`top_m` legend per diagram.
pub fn run_lattice(
    initial: &DnaLattice,
    cfg: &LatticeConfig,
    cycles: usize,
    ks: &[usize],
    top_m: usize,
    readout: KmerReadout,
) -> Result<LatticeRun> {
    cfg.validate()?;
    if cycles < 1 {
        return Err(SymbaError::InvalidParameter("need at least one cycle".into()));
    }
    if ks.contains(&0) {
        return Err(SymbaError::InvalidParameter("motif lengths must be positive".into()));
    }
    let width = initial.len();
    let mut interners: Vec<Interner> = ks.iter().map(|_| Interner { ids: HashMap::new(), names: Vec::new() }).collect();
    let mut ids: Vec<Vec<i32>> = ks.iter().map(|_| Vec::with_capacity(width * cycles)).collect();
    let mut budget_totals = Vec::with_capacity(cycles);
    let mut lat = initial.clone();
    for t in 0..cycles {
        if t > 0 {
            lat.step(cfg);
        }
        budget_totals.push(lat.total_budget());
        for (ki, &k) in ks.iter().enumerate() {
            for cell in &lat.cells {
                let id = dominant_kmer_with(cell, k, readout).map_or(-1, |w| interners[ki].id(w));
                ids[ki].push(id);
            }
        }
    }
    let spacetimes = ks
        .iter()
        .zip(interners)
        .zip(ids)
        .map(|((&k, interner), ids)| {
            let legend = top_ids(&ids, &interner.names, top_m);
            KmerSpacetime { k, width, ids, names: interner.names, legend }
        })
        .collect();
    Ok(LatticeRun { spacetimes, budget_totals, final_state: lat })
}

fn top_ids(ids: &[i32], names: &[String], top_m: usize) -> Vec<i32> {
    let mut counts = vec![0usize; names.len()];
    for &id in ids.iter().filter(|&&id| id >= 0) {
        counts[id as usize] += 1;
    }
    let mut order: Vec<i32> = (0..names.len() as i32).collect();
    order.sort_by(|&a, &b| {
        counts[b as usize].cmp(&counts[a as usize]).then_with(|| names[a as usize].cmp(&names[b as usize]))
    });
    order.truncate(top_m);
    order
}

/// A same-id run of sites followed through consecutive cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Domain {
    pub id: i32,
    pub first_cycle: usize,
    pub cycles: usize,
    pub max_width: usize,
}

/// Tracks maximal runs of at least `min_width` adjacent sites sharing an id.
/// A run continues a domain from the previous cycle when it has the same id
/// and overlaps it spatially. Runs do not wrap across site 0.
pub fn track_domains(st: &KmerSpacetime, min_width: usize) -> Vec<Domain> {
    struct Track {
        domain: Domain,
        span: (usize, usize),
    }
    let mut finished = Vec::new();
    let mut active: Vec<Track> = Vec::new();
    for t in 0..st.cycles() {
        let row = st.row(t);
        let mut runs = Vec::new();
        let mut start = 0;
        while start < row.len() {
            let mut end = start + 1;
            while end < row.len() && row[end] == row[start] {
                end += 1;
            }
            if row[start] >= 0 && end - start >= min_width {
                runs.push((row[start], start, end));
            }
            start = end;
        }
        let mut next_active = Vec::new();
        let mut used = vec![false; active.len()];
        for (id, s, e) in runs {
            let parent = active
                .iter()
                .enumerate()
                .filter(|(i, tr)| !used[*i] && tr.domain.id == id && tr.span.0 < e && s < tr.span.1)
                .max_by_key(|(_, tr)| tr.domain.cycles)
                .map(|(i, _)| i);
            let domain = match parent {
                Some(i) => {
                    used[i] = true;
                    let d = active[i].domain;
                    Domain { cycles: d.cycles + 1, max_width: d.max_width.max(e - s), ..d }
                }
                None => Domain { id, first_cycle: t, cycles: 1, max_width: e - s },
            };
            next_active.push(Track { domain, span: (s, e) });
        }
        for (i, tr) in active.into_iter().enumerate() {
            if !used[i] {
                finished.push(tr.domain);
            }
        }
        active = next_active;
    }
    finished.extend(active.into_iter().map(|t| t.domain));
    finished
}

/// Whether some domain of width `min_width` lasts `min_cycles` cycles.
pub fn has_persistent_domain(st: &KmerSpacetime, min_width: usize, min_cycles: usize) -> bool {
    track_domains(st, min_width).iter().any(|d| d.cycles >= min_cycles)
}
