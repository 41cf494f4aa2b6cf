//! Fleiss' kappa against an independent pair-counting recomputation.

use caseform_core::agreement::{fleiss_kappa, AgreementError, RatingMatrix};
use caseform_testkit::oracle::fleiss_kappa_pairwise;
use rand::prelude::*;
use rand_pcg::Pcg64;

fn random_matrix(seed: u64) -> (Vec<Vec<u32>>, u32) {
    let mut rng = Pcg64::seed_from_u64(seed);
    let subjects = rng.gen_range(2..=12);
    let categories = rng.gen_range(2..=6);
    let raters = rng.gen_range(2..=8u32);
    let mut counts = Vec::with_capacity(subjects);
    for _ in 0..subjects {
        let mut row = vec![0u32; categories];
        for _ in 0..raters {
            row[rng.gen_range(0..categories)] += 1;
        }
        counts.push(row);
    }
    (counts, raters)
}

#[test]
fn kappa_matches_pairwise_oracle_on_random_matrices() {
    for seed in 0..200 {
        let (counts, raters) = random_matrix(seed);
        let matrix = RatingMatrix::new(counts.clone(), raters).unwrap();
        match (fleiss_kappa(&matrix), fleiss_kappa_pairwise(&counts, raters)) {
            (Ok(got), Some(want)) => {
                assert!(
                    (got - want).abs() <= 1e-12,
                    "seed {seed}: {got} vs {want}"
                );
            }
            (Err(AgreementError::DegenerateExpectedAgreement), None) => {}
            (got, want) => panic!("seed {seed}: disagreement {got:?} vs {want:?}"),
        }
    }
}

#[test]
fn kappa_is_one_for_perfect_agreement_and_never_more() {
    let mut rng = Pcg64::seed_from_u64(77);
    for _ in 0..50 {
        let subjects = rng.gen_range(2..=10);
        let categories = rng.gen_range(2..=5);
        let raters = rng.gen_range(2..=6u32);
        let mut counts = Vec::with_capacity(subjects);
        let mut used = std::collections::BTreeSet::new();
        for _ in 0..subjects {
            let pick = rng.gen_range(0..categories);
            used.insert(pick);
            let mut row = vec![0u32; categories];
            row[pick] = raters;
            counts.push(row);
        }
        let matrix = RatingMatrix::new(counts, raters).unwrap();
        match fleiss_kappa(&matrix) {
            Ok(kappa) => {
                assert!(used.len() >= 2);
                assert_eq!(kappa, 1.0);
            }
            Err(AgreementError::DegenerateExpectedAgreement) => assert_eq!(used.len(), 1),
            Err(other) => panic!("unexpected error {other:?}"),
        }
    }
    // random matrices never exceed 1
    for seed in 300..360 {
        let (counts, raters) = random_matrix(seed);
        let matrix = RatingMatrix::new(counts, raters).unwrap();
        if let Ok(kappa) = fleiss_kappa(&matrix) {
            assert!(kappa <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn kappa_invariant_under_permutations() {
    let mut rng = Pcg64::seed_from_u64(4242);
    for seed in 0..40 {
        let (counts, raters) = random_matrix(seed + 9000);
        let matrix = RatingMatrix::new(counts.clone(), raters).unwrap();
        let Ok(base) = fleiss_kappa(&matrix) else {
            continue;
        };

        let mut shuffled = counts.clone();
        shuffled.shuffle(&mut rng);
        let subject_permuted = RatingMatrix::new(shuffled, raters).unwrap();
        assert!((fleiss_kappa(&subject_permuted).unwrap() - base).abs() <= 1e-12);

        let categories = counts[0].len();
        let mut order: Vec<usize> = (0..categories).collect();
        order.shuffle(&mut rng);
        let column_permuted: Vec<Vec<u32>> = counts
            .iter()
            .map(|row| order.iter().map(|&j| row[j]).collect())
            .collect();
        let column_permuted = RatingMatrix::new(column_permuted, raters).unwrap();
        assert!((fleiss_kappa(&column_permuted).unwrap() - base).abs() <= 1e-12);
    }
}
