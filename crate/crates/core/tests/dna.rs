use proptest::prelude::*;

use symba_core::dnaca::{DnaCell, DnaLattice, Fragment, LatticeConfig};
use symba_core::dnasoup::{
    fill_gaps, find_best_anneal, mutate, Condition, Duplex, Nucleotide, Pool, Soup, SoupConfig, Strand,
};
use symba_core::rng::SimRng;

fn comp(b: u8) -> u8 {
    match b {
        b'A' => b'T',
        b'T' => b'A',
        b'C' => b'G',
        _ => b'C',
    }
}

/// Longest complementary run at every offset, indexed from `1 - lb`.
fn runs_by_offset(top: &[u8], bottom: &[u8]) -> Vec<(i64, usize, usize)> {
    let (lt, lb) = (top.len() as i64, bottom.len() as i64);
    let rb: Vec<u8> = bottom.iter().rev().copied().collect();
    let mut out = Vec::new();
    for o in (1 - lb)..lt {
        let mut best = (0usize, 0usize);
        for start in 0..lt {
            let mut len = 0;
            while start + len < lt && {
                let i = start + len;
                let k = i - o;
                (0..lb).contains(&k) && rb[k as usize] == comp(top[i as usize])
            } {
                len += 1;
            }
            if len as usize > best.1 {
                best = (start as usize, len as usize);
            }
        }
        out.push((o, best.0, best.1));
    }
    out
}

fn strand_from(id: u64, s: &[u8]) -> Strand {
    Strand::parse(id, std::str::from_utf8(s).unwrap()).unwrap()
}

fn bases(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(prop::sample::select(b"ACGT".to_vec()), 1..max)
}

proptest! {
    #[test]
    fn anneal_matches_exhaustive_scan(top in bases(14), bottom in bases(14), min_overlap in 1usize..6) {
        let runs = runs_by_offset(&top, &bottom);
        let expected = runs
            .iter()
            .copied()
            .max_by_key(|&(o, _, len)| (len, std::cmp::Reverse(o.abs()), std::cmp::Reverse(o)))
            .filter(|&(_, _, len)| len >= min_overlap);
        let got = find_best_anneal(&strand_from(0, &top), &strand_from(1, &bottom), min_overlap);
        prop_assert_eq!(got.map(|a| (a.offset, a.run_start, a.run_len)), expected);
    }

    #[test]
    fn anneal_is_symmetric_under_swap(a in bases(14), b in bases(14)) {
        let forward = runs_by_offset(&a, &b);
        let backward = runs_by_offset(&b, &a);
        let shift = b.len() as i64 - a.len() as i64;
        for &(o, _, len) in &forward {
            let mirrored = backward.iter().find(|x| x.0 == o + shift).unwrap();
            prop_assert_eq!(mirrored.2, len);
        }
        let x = find_best_anneal(&strand_from(0, &a), &strand_from(1, &b), 1).map(|r| r.run_len);
        let y = find_best_anneal(&strand_from(1, &b), &strand_from(0, &a), 1).map(|r| r.run_len);
        prop_assert_eq!(x, y);
    }

    #[test]
    fn fill_gaps_replay(top in bases(16), bottom in bases(16), offset_pick in 0usize..64, per_base in 0u64..4) {
        let lo = 1 - bottom.len() as i64;
        let span = (top.len() + bottom.len() - 1) as i64;
        let offset = lo + offset_pick as i64 % span;
        let mut d = Duplex::new(strand_from(0, &top), strand_from(1, &bottom), offset);
        let before = d.clone();
        let mut pool = Pool::uniform(per_base);
        let mass_before = pool.total() + d.mass() as u64;
        let report = fill_gaps(&mut d, &mut pool);

        prop_assert_eq!(pool.total() + d.mass() as u64, mass_before);
        prop_assert_eq!(report.filled + report.starved, before.gaps());
        prop_assert_eq!(d.gaps(), report.starved);
        prop_assert!(d.is_valid());
        let fix_top = top.len() < bottom.len();
        if fix_top {
            prop_assert_eq!(&d.bottom, &before.bottom);
        } else {
            prop_assert_eq!(&d.top, &before.top);
        }
        // previously paired positions are untouched
        for (slot, &p) in before.pairing.iter().enumerate() {
            if p {
                prop_assert!(d.pairing[slot]);
            }
        }
        // every repaired position now faces its complement
        let rb: Vec<Nucleotide> = d.bottom.bases.iter().rev().copied().collect();
        for (slot, i) in d.overlap().enumerate() {
            let faces = rb[(i as i64 - offset) as usize];
            prop_assert_eq!(d.pairing[slot], faces == d.top.bases[i].complement());
        }
    }
}

#[test]
fn mutation_count_is_binomial() {
    let n = 200_000usize;
    let rate = 0.01;
    let mut s = Strand::new(0, vec![Nucleotide::A; n]).unwrap();
    let mut rng = SimRng::new(2024);
    let changed = mutate(&mut s, rate, &mut rng);
    let mean = n as f64 * rate;
    let sd = (n as f64 * rate * (1.0 - rate)).sqrt();
    assert!((changed as f64 - mean).abs() < 5.0 * sd, "{changed} substitutions, expected about {mean}");
    assert_eq!(s.bases.iter().filter(|&&b| b != Nucleotide::A).count(), changed);
    // the replacement base is uniform over the other three
    for b in [Nucleotide::C, Nucleotide::G, Nucleotide::T] {
        let c = s.bases.iter().filter(|&&x| x == b).count() as f64;
        let m = changed as f64 / 3.0;
        assert!((c - m).abs() < 5.0 * (m * 2.0 / 3.0).sqrt(), "{b:?}: {c}");
    }
}

#[test]
fn zero_rate_never_mutates() {
    let mut s = Strand::parse(0, "ACGTACGTACGT").unwrap();
    let before = s.clone();
    assert_eq!(mutate(&mut s, 0.0, &mut SimRng::new(1)), 0);
    assert_eq!(s, before);
}

#[test]
fn soup_mass_audit() {
    for condition in [Condition::A, Condition::B] {
        let cfg = SoupConfig { condition, cycles: 120, ..SoupConfig::default() };
        for seed in 0..3 {
            let mut soup = Soup::seeded(&cfg, seed);
            let mass = soup.total_mass();
            for _ in 0..cfg.cycles {
                soup.cycle(&cfg);
                assert_eq!(soup.total_mass(), mass, "{condition} seed {seed} cycle {}", soup.cycle);
            }
            if condition == Condition::A {
                assert!(soup.duplexes.is_empty());
                assert_eq!(soup.stats.splits, 0);
            }
        }
    }
}

fn random_lattice(cfg: &LatticeConfig, seed: u64) -> DnaLattice {
    let mut rng = SimRng::new(seed);
    let mut lat = DnaLattice::seeded(&LatticeConfig { rng_seed: seed, ..cfg.clone() }).unwrap();
    for c in lat.cells.iter_mut() {
        c.budget = rng.unit_f64() * 2.0 * cfg.initial_budget;
    }
    lat
}

#[test]
fn diffusion_alone_conserves_budget() {
    let cfg = LatticeConfig { sites: 64, fragment_prob: 0.0, ..LatticeConfig::default() };
    let mut lat = random_lattice(&cfg, 5);
    let spread = |l: &DnaLattice| {
        let m = l.total_budget() / l.len() as f64;
        l.cells.iter().map(|c| (c.budget - m).powi(2)).sum::<f64>()
    };
    let initial_spread = spread(&lat);
    let mut total = lat.total_budget();
    for _ in 0..200 {
        lat.step(&cfg);
        let now = lat.total_budget();
        assert!((now - total).abs() <= 1e-9, "drift {}", now - total);
        total = now;
    }
    assert!(spread(&lat) < 0.5 * initial_spread);
}

#[test]
fn budget_never_increases() {
    for condition in [Condition::A, Condition::B] {
        let cfg =
            LatticeConfig { sites: 96, condition, fragment_prob: 0.7, initial_budget: 6.0, ..LatticeConfig::default() };
        let mut lat = random_lattice(&cfg, 11);
        let mut total = lat.total_budget();
        for _ in 0..150 {
            lat.step(&cfg);
            let now = lat.total_budget();
            assert!(now <= total + 1e-9, "{condition}: {total} -> {now}");
            assert!(lat.cells.iter().all(|c| c.budget >= 0.0));
            if condition == Condition::A {
                assert_eq!(lat.duplex_count(), 0);
            }
            total = now;
        }
    }
}

fn ring_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(n - d)
}

#[test]
fn perturbations_stay_inside_light_cone() {
    let n = 48;
    let cfg = LatticeConfig { sites: n, fragment_prob: 0.8, initial_budget: 12.0, ..LatticeConfig::default() };
    for (seed, site) in [(1u64, 0usize), (2, 17), (3, 47), (4, 30)] {
        let base = random_lattice(&cfg, seed);
        let mut other = base.clone();
        other.cells[site] =
            DnaCell { fragment: Fragment::Single(Strand::parse(999, "ACGTTGCAACGT").unwrap()), budget: 40.0 };
        let (mut a, mut b) = (base, other);
        for g in 1..=12 {
            a.step(&cfg);
            b.step(&cfg);
            for i in 0..n {
                if ring_distance(i, site, n) > g {
                    assert_eq!(a.cells[i], b.cells[i], "seed {seed}, site {i} at step {g}");
                }
            }
        }
    }
}

#[test]
fn same_seed_same_lattice() {
    let cfg = LatticeConfig { sites: 64, rng_seed: 8, ..LatticeConfig::default() };
    let a =
        symba_core::dnaca::run_lattice(&DnaLattice::seeded(&cfg).unwrap(), &cfg, 40, &[4, 6], 8, Default::default())
            .unwrap();
    let b =
        symba_core::dnaca::run_lattice(&DnaLattice::seeded(&cfg).unwrap(), &cfg, 40, &[4, 6], 8, Default::default())
            .unwrap();
    assert_eq!(a.spacetimes, b.spacetimes);
}

#[test]
fn empty_lattice_is_unassigned() {
    let cfg = LatticeConfig { sites: 16, fragment_prob: 0.0, ..LatticeConfig::default() };
    let run = symba_core::dnaca::run_lattice(&DnaLattice::seeded(&cfg).unwrap(), &cfg, 10, &[4], 8, Default::default())
        .unwrap();
    assert!(run.spacetimes[0].ids.iter().all(|&id| id == -1));
    assert!(run.spacetimes[0].legend.is_empty());
}
