mod support;

use proptest::prelude::*;

use symba_core::core1d::{run_1d_logged, seed_world, SeedSpec, Spacetime, ValueRange};
use symba_core::metrics::{
    mi_matrix, mutual_information, population_series, repeated_window_fraction, run_fraction, shannon_entropy,
    shannon_entropy_with, threshold_indicator, wilson_interval, Alphabet, MotifStats, WILSON_Z,
};
use symba_core::rng::SimRng;

use support::{entropy_neumaier, multiset_rk, wilson_roots};

fn row() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-4i32..=4, 1..80)
}

proptest! {
    #[test]
    fn entropy_matches_compensated_sum(r in row()) {
        let h = shannon_entropy(&r);
        prop_assert!(h >= 0.0);
        prop_assert!((h - entropy_neumaier(&r)).abs() < 1e-12);
    }

    #[test]
    fn entropy_without_empty_symbol(r in row()) {
        let occupied: Vec<i32> = r.iter().copied().filter(|&v| v != 0).collect();
        let h = shannon_entropy_with(&r, Alphabet::ExcludeEmpty);
        let expected = if occupied.is_empty() { 0.0 } else { entropy_neumaier(&occupied) };
        prop_assert!((h - expected).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_identities((a, b) in (1usize..60).prop_flat_map(|n| (
        prop::collection::vec(-3i32..=3, n),
        prop::collection::vec(-3i32..=3, n),
    ))) {
        let ab = mutual_information(&a, &b).unwrap();
        let ba = mutual_information(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ab >= -1e-12);
        prop_assert!(ab <= shannon_entropy(&a).min(shannon_entropy(&b)) + 1e-12);
        prop_assert!((mutual_information(&a, &a).unwrap() - shannon_entropy(&a)).abs() < 1e-12);
    }

    #[test]
    fn wilson_matches_quadratic_roots(n in 1usize..500, frac in 0.0f64..=1.0) {
        let s = ((n as f64) * frac).round() as usize;
        let (lo, hi) = wilson_interval(s, n);
        let (rlo, rhi) = wilson_roots(s, n, WILSON_Z);
        prop_assert!((lo - rlo).abs() < 1e-9, "{} vs {}", lo, rlo);
        prop_assert!((hi - rhi).abs() < 1e-9, "{} vs {}", hi, rhi);
        let p = s as f64 / n as f64;
        prop_assert!(lo <= p && p <= hi);
    }
}

#[test]
fn mi_rejects_mismatched_lengths() {
    assert!(mutual_information(&[1, 2], &[1]).is_err());
}

#[test]
fn mi_matrix_has_entropies_on_diagonal() {
    let st = Spacetime::from_rows(4, vec![0, 1, 2, 3, 1, 1, 0, 0, 3, 0, 3, 0]).unwrap();
    let m = mi_matrix(&st);
    for g in 0..3 {
        assert!((m.get(g, g) - shannon_entropy(st.row(g))).abs() < 1e-12);
        for h in 0..3 {
            assert!((m.get(g, h) - m.get(h, g)).abs() < 1e-12);
        }
    }
}

fn random_soup(rng: &mut SimRng) -> Vec<Vec<u8>> {
    let strands = 1 + rng.below_usize(30);
    (0..strands)
        .map(|_| {
            let len = rng.below_usize(16);
            (0..len).map(|_| b"ACGT"[rng.below_usize(4)]).collect()
        })
        .collect()
}

#[test]
fn repeated_fraction_matches_multiset_oracle() {
    let mut rng = SimRng::new(77);
    for _ in 0..100 {
        let soup = random_soup(&mut rng);
        for k in [1, 2, 3, 4, 6, 8] {
            assert_eq!(repeated_window_fraction(&soup, k).repeated_fraction, multiset_rk(&soup, k), "k={k}");
        }
    }
}

#[test]
fn threshold_boundary_is_inclusive() {
    assert!(threshold_indicator(0.10, 0.10));
    assert!(!threshold_indicator(0.0999999, 0.10));
    // 20 one-window strands, one 3-mer present twice: R = 2/20
    let mut soup: Vec<Vec<u8>> = vec![b"AAA".to_vec(), b"AAA".to_vec()];
    let distinct = [
        "ACG", "AGT", "ATC", "CAG", "CCT", "CGA", "CTT", "GAC", "GCA", "GGG", "GTA", "TAC", "TCC", "TGA", "TTG", "ACC",
        "AGG", "ATT",
    ];
    soup.extend(distinct.iter().map(|s| s.as_bytes().to_vec()));
    let w = repeated_window_fraction(&soup, 3);
    assert_eq!((w.windows, w.singletons), (20, 18));
    assert_eq!(w.repeated_fraction, 0.10);
    assert!(threshold_indicator(w.repeated_fraction, 0.10));
}

#[test]
fn run_fraction_is_column_mean() {
    let mut rng = SimRng::new(3);
    let runs: Vec<Vec<bool>> = (0..13).map(|_| (0..40).map(|_| rng.bernoulli(0.4)).collect()).collect();
    let p = run_fraction(&runs).unwrap();
    for t in 0..40 {
        let ones = runs.iter().filter(|r| r[t]).count();
        assert_eq!(p[t], ones as f64 / 13.0);
    }
    assert!(run_fraction(&[vec![true], vec![true, false]]).is_err());
}

#[test]
fn motif_curve_agrees_with_parts() {
    let mut rng = SimRng::new(12);
    let pops: Vec<Vec<Vec<Vec<u8>>>> = (0..7).map(|_| (0..5).map(|_| random_soup(&mut rng)).collect()).collect();
    let stats = MotifStats::compute(&pops, 2, 0.1).unwrap();
    for (t, point) in stats.curve.iter().enumerate() {
        let ones = pops.iter().filter(|run| multiset_rk(&run[t], 2) >= 0.1).count();
        assert_eq!(point.successes, ones);
        assert_eq!(point.fraction, ones as f64 / 7.0);
        assert_eq!((point.lower, point.upper), wilson_interval(ones, 7));
    }
}

#[test]
fn population_series_counts() {
    let w =
        seed_world(64, &SeedSpec::Sparse { genes: 6, values: ValueRange::symmetric(1, 5), region: 20..40 }, 9).unwrap();
    let (st, log) = run_1d_logged(&w, 30);
    let pop = population_series(&st, &log).unwrap();
    assert_eq!(pop.len(), 30);
    for (g, stats) in log.iter().enumerate() {
        assert_eq!(pop.living_cells[g], st.row(g).iter().filter(|&&v| v != 0).count());
        assert_eq!(pop.replication_candidates[g], stats.attempts);
        assert_eq!(pop.collisions[g], stats.collisions);
    }
    assert!(population_series(&st, &log[..5]).is_err());
}
