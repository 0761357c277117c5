use std::collections::{BTreeMap, BTreeSet};

use polytile::homsearch::{cyclic_semicross_tiling, find_all_bijective_homs, DEFAULT_HOM_BUDGET};
use polytile::semicross_stats::{
    census_at, check_all_ones_shift, check_no_short_types, check_pair_sums, check_type_census, expected_type1k,
    sample_references, TypeSpec,
};
use polytile::torus_search::{enumerate_tilings, SearchOptions};
use polytile::{IntVec, Lattice, PeriodicTiling, Tile};

fn q5_tilings() -> Vec<PeriodicTiling> {
    let l = Lattice::scaled_identity(4, 5).unwrap();
    enumerate_tilings(&Tile::semicross(4), &l, &SearchOptions::default())
        .unwrap()
        .tilings
}

#[test]
fn census_holds_on_every_q5_tiling() {
    let tilings = q5_tilings();
    assert_eq!(tilings.len(), 30);
    for t in &tilings {
        for k in 1..=4 {
            assert!(check_type_census(t, k).unwrap(), "k={k} on {:?}", t.centers()[0]);
        }
        assert!(check_all_ones_shift(t));
        assert!(check_no_short_types(t).unwrap());
        let (centers, _) = sample_references(t, 4);
        for w in &centers {
            assert!(check_pair_sums(t, w).unwrap());
        }
    }
}

/// Counts of mixed types depend only on whether the reference word is a
/// codeword. No formula is known for them, so only constancy is asserted.
#[test]
fn mixed_type_counts_are_class_constants() {
    let specs: Vec<TypeSpec> = ["1^2,-1^1", "1^1,-1^1", "2^1,-1^1", "1^3,-1^1", "2^2"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let mut seen: BTreeMap<(String, bool), BTreeSet<u64>> = BTreeMap::new();
    for t in q5_tilings() {
        let (centers, others) = sample_references(&t, 6);
        for spec in &specs {
            for (refs, is_center) in [(&centers, true), (&others, false)] {
                for w in refs {
                    seen.entry((spec.to_string(), is_center))
                        .or_default()
                        .insert(census_at(&t, w, spec).unwrap());
                }
            }
        }
    }
    for ((spec, is_center), counts) in &seen {
        println!("{spec} codeword={is_center}: {counts:?}");
        assert_eq!(counts.len(), 1, "{spec} codeword={is_center} varies: {counts:?}");
    }
    // [2^2] follows the [1^2] formula
    let two_squared = &seen[&("[2^2]".to_string(), true)];
    assert_eq!(
        two_squared.iter().next().copied(),
        Some(expected_type1k(5, 2, true).unwrap() as u64)
    );
}

/// Brute-force census: scan every center of the torus and classify the
/// difference by hand.
fn census_by_scan(t: &PeriodicTiling, w: &IntVec, value: i64, k: usize) -> u64 {
    let q = t.dim() as i64 + 1;
    let mut count = 0;
    for c in Lattice::scaled_identity(t.dim(), q)
        .unwrap()
        .coset_reps(u64::MAX)
        .unwrap()
    {
        if !t.is_center(&c) {
            continue;
        }
        // the representative of c - w with coordinates in (-q/2, q/2]
        let d: Vec<i64> = c
            .iter()
            .zip(w.iter())
            .map(|(a, b)| {
                let r = (a - b).rem_euclid(q);
                if r > q / 2 {
                    r - q
                } else {
                    r
                }
            })
            .collect();
        if d.iter().filter(|&&x| x == value).count() == k && d.iter().filter(|&&x| x != 0).count() == k {
            count += 1;
        }
    }
    count
}

#[test]
fn census_matches_scan_on_cyclic_tilings() {
    for q in [5i64, 7] {
        let t = cyclic_semicross_tiling(q).unwrap();
        let n = (q - 1) as usize;
        let refs = [IntVec::zero(n), IntVec::unit(n, 0), IntVec::from(vec![1; n])];
        for w in &refs {
            for value in [1i64, -1, 2] {
                for k in 1..n {
                    let spec = TypeSpec::uniform(value, k as u32).unwrap();
                    assert_eq!(
                        census_at(&t, w, &spec).unwrap(),
                        census_by_scan(&t, w, value, k),
                        "q={q} {spec} at {w}"
                    );
                }
            }
        }
    }
}

#[test]
fn q5_lattice_tilings_are_the_hom_kernels() {
    let kernels: BTreeSet<Lattice> = find_all_bijective_homs(&Tile::semicross(4), DEFAULT_HOM_BUDGET)
        .unwrap()
        .into_iter()
        .map(|(_, k)| k)
        .collect();
    let periods: BTreeSet<Lattice> = q5_tilings()
        .iter()
        .map(|t| t.period_lattice(u64::MAX).unwrap())
        .collect();
    assert_eq!(kernels, periods);
}

/// Full enumeration on 7Z^6; run with `--ignored` in release mode.
#[test]
#[ignore]
fn q7_tilings_are_unique_up_to_congruence() {
    use polytile::torus_search::{unique_up_to_congruence, Dedup};
    let l = Lattice::scaled_identity(6, 7).unwrap();
    let opts = SearchOptions::with_dedup(Dedup::Congruence);
    let u = unique_up_to_congruence(&Tile::semicross(6), &l, &opts).unwrap();
    assert_eq!(u.class_count, 1);
    assert!(u.is_unique);
}
