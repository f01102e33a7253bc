//! Counting rows `h` with `h . x = h . y = 0`.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand_core::RngCore;
use wdconc::ensemble::{
    count_orthogonal_rows, count_orthogonal_rows_brute, stream_rng, OverlapCase, PairOverlapProfile,
};
use wdconc::BitVector;

/// Filters all `2^n` rows directly on machine words.
fn filter_count(n: usize, x: u64, y: u64) -> u64 {
    (0u64..1 << n)
        .filter(|h| (h & x).count_ones() % 2 == 0 && (h & y).count_ones() % 2 == 0)
        .count() as u64
}

fn expected(n: usize, x: u64, y: u64) -> u64 {
    if x == y {
        1 << (n - 1)
    } else {
        1 << (n - 2)
    }
}

#[test]
fn all_nonzero_pairs_up_to_n_8() {
    for n in 2..=8 {
        let mut seen = BTreeSet::new();
        for x in 1u64..1 << n {
            for y in 1u64..1 << n {
                let (bx, by) = (BitVector::from_u64(n, x), BitVector::from_u64(n, y));
                let count = filter_count(n, x, y);
                assert_eq!(count, expected(n, x, y), "n={n} x={x:b} y={y:b}");
                assert_eq!(count_orthogonal_rows(&bx, &by).unwrap(), BigUint::from(count));
                assert_eq!(count_orthogonal_rows_brute(&bx, &by).unwrap(), BigUint::from(count));
                seen.insert(PairOverlapProfile::of(&bx, &by).unwrap().case());
            }
        }
        // a partial overlap needs x-only, shared and y-only coordinates
        let all: BTreeSet<_> = OverlapCase::ALL
            .into_iter()
            .filter(|c| n >= 3 || *c != OverlapCase::Partial)
            .collect();
        assert_eq!(seen, all, "n={n}");
    }
}

#[test]
fn n_1_has_only_the_equal_case() {
    let x = BitVector::from_u64(1, 1);
    assert_eq!(count_orthogonal_rows(&x, &x).unwrap(), BigUint::from(1u32));
    assert_eq!(PairOverlapProfile::of(&x, &x).unwrap().case(), OverlapCase::Equal);
}

#[test]
fn random_pairs_at_n_16() {
    let n = 16;
    let mut rng = stream_rng(0x5eed, 16);
    let mut tested = 0;
    while tested < 10_000 {
        let (x, y) = (rng.next_u64() & 0xffff, rng.next_u64() & 0xffff);
        if x == 0 || y == 0 {
            continue;
        }
        let (bx, by) = (BitVector::from_u64(n, x), BitVector::from_u64(n, y));
        let count = count_orthogonal_rows_brute(&bx, &by).unwrap();
        assert_eq!(count, BigUint::from(expected(n, x, y)));
        assert_eq!(count_orthogonal_rows(&bx, &by).unwrap(), count);
        tested += 1;
    }
}

#[test]
fn two_unit_vectors_in_length_three() {
    let x: BitVector = "100".parse().unwrap();
    let y: BitVector = "010".parse().unwrap();
    assert_eq!(count_orthogonal_rows(&x, &y).unwrap(), BigUint::from(2u32));
    assert_eq!(filter_count(3, 0b001, 0b010), 2);
}

#[test]
fn large_n_uses_the_closed_form() {
    let n = 200;
    let mut x = BitVector::zeros(n);
    let mut y = BitVector::zeros(n);
    x.set(0, true);
    x.set(150, true);
    y.set(150, true);
    y.set(199, true);
    assert_eq!(count_orthogonal_rows(&x, &y).unwrap(), BigUint::from(1u32) << (n - 2));
    assert_eq!(count_orthogonal_rows(&x, &x).unwrap(), BigUint::from(1u32) << (n - 1));
    assert!(count_orthogonal_rows_brute(&x, &y).is_err());
}
