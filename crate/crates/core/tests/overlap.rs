//! Overlap chaining with independent uniform blocks: adjacent syndromes
//! share a block and are dependent, syndromes two apart are independent.

use lsc_core::codes::CodeSpec;
use lsc_core::gf::{FieldElement, FieldSpec};
use lsc_core::scheme::{overlap_chain_consistent, overlap_chain_encode};
use lsc_core::secrecy::mutual_information_from_joint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 2;

fn label(s: &[FieldElement]) -> u64 {
    s.iter().fold(0, |acc, e| acc * 2 + e.value() as u64)
}

fn blocks_from(idx: u64, count: usize, f: &FieldSpec) -> Vec<Vec<FieldElement>> {
    (0..count)
        .map(|b| {
            (0..N)
                .map(|i| f.element((idx >> (b * N + i)) & 1).unwrap())
                .collect()
        })
        .collect()
}

/// Exact `I(Y_a; Y_b)` over all `2^(count * N)` equiprobable block sequences.
fn exact_mi(code: &CodeSpec, count: usize, a: usize, b: usize) -> f64 {
    let f = code.field();
    let joint = (0..1u64 << (count * N)).map(|idx| {
        let ys = overlap_chain_encode(&blocks_from(idx, count, f), code).unwrap();
        (label(ys[a].symbols()), label(ys[b].symbols()), 1.0)
    });
    mutual_information_from_joint(joint)
}

#[test]
fn adjacent_dependence_matches_enumeration() {
    let f = FieldSpec::prime(2).unwrap();
    let code = CodeSpec::random_full_rank(&f, 2 * N, 2, 3).unwrap();
    let exact = exact_mi(&code, 3, 0, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let samples = 40_000;
    let joint: Vec<(u64, u64, f64)> = (0..samples)
        .map(|_| {
            let idx = rng.gen_range(0..1u64 << (3 * N));
            let ys = overlap_chain_encode(&blocks_from(idx, 3, &f), &code).unwrap();
            (label(ys[0].symbols()), label(ys[1].symbols()), 1.0)
        })
        .collect();
    let empirical = mutual_information_from_joint(joint);
    assert!((empirical - exact).abs() < 0.01, "{empirical} vs {exact}");
}

#[test]
fn syndromes_without_shared_block_are_independent() {
    let f = FieldSpec::prime(2).unwrap();
    for seed in 0..5 {
        let code = CodeSpec::random_full_rank(&f, 2 * N, 2, seed).unwrap();
        assert!(exact_mi(&code, 4, 0, 2).abs() < 1e-12);
    }
}

#[test]
fn consistency_check_detects_tampering() {
    let f = FieldSpec::prime(2).unwrap();
    let code = CodeSpec::random_full_rank(&f, 2 * N, 2, 1).unwrap();
    let blocks = blocks_from(0b10_01_11_00, 4, &f);
    let ys = overlap_chain_encode(&blocks, &code).unwrap();
    assert!(overlap_chain_consistent(&blocks, &code, &ys).unwrap());
    let mut other = ys.clone();
    other.swap(0, 2);
    if other != ys {
        assert!(!overlap_chain_consistent(&blocks, &code, &other).unwrap());
    }
}
