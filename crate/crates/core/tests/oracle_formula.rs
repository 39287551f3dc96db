//! Equivalence of the numeric omega-index oracle and the symbolic iteration
//! formulas on randomized block products.
//!
//! For a path assembled from block generators the endpoint decomposition is
//! known by construction; seeding the iteration formula with the oracle's
//! `(i(gamma,1), nu(gamma,1))` must reproduce the oracle at every iterate,
//! whatever homotopy class the generators happen to realize.

use nalgebra::Complex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use sik_core::idx::decomp::{IndexSeed, NormalFormDecomposition};
use sik_core::idx::iterate::iterate_index;
use sik_core::num::Angle;
use sik_core::oracle::generator::generator_product_path;
use sik_core::oracle::index::{omega_index_sweep, OracleOptions};
use sik_core::sp::block::{n2_from_sigma, BasicBlock, N2Class};

fn angle(t: f64) -> Angle {
    Angle::from_f64_approx(t, 1e-15).unwrap()
}

/// Random angle bounded away from 0, 1/2, 1 and from resonances that would
/// put iterate crossings on top of each other for m <= m_max.
fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let t: f64 = rng.gen_range(0.03..0.97);
        if (t - 0.5).abs() > 0.03 {
            return t;
        }
    }
}

fn random_blocks(rng: &mut ChaCha8Rng, n_target: usize) -> Vec<BasicBlock> {
    let mut blocks = Vec::new();
    let mut dim = 0usize;
    while dim < n_target {
        let room = n_target - dim;
        let choice = rng.gen_range(0..10u32);
        let block = match choice {
            0 => BasicBlock::N1 { lambda: 1, b: 1.0 },
            1 => BasicBlock::N1 { lambda: 1, b: -1.0 },
            2 => BasicBlock::N1 { lambda: -1, b: 1.0 },
            3 => BasicBlock::N1 { lambda: -1, b: -1.0 },
            4 => BasicBlock::D {
                lambda: rng.gen_range(1.3..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            },
            5 | 6 | 7 => BasicBlock::R {
                theta: angle(random_angle(rng)),
            },
            _ => {
                if room < 2 {
                    continue;
                }
                let tr = rng.gen_range(0.4..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let s2 = rng.gen_range(-0.4..0.4);
                let s1 = tr * rng.gen_range(0.3..0.7);
                let s3 = tr - s1;
                match n2_from_sigma(angle(random_angle(rng)), s1, s2, s3) {
                    Ok(b) => b,
                    Err(_) => continue,
                }
            }
        };
        dim += block.half_dim();
        blocks.push(block);
    }
    blocks
}

fn decomposition_of(blocks: &[BasicBlock], n: usize) -> NormalFormDecomposition {
    let mut p = [0u32; 3];
    let mut q = [0u32; 3];
    let mut thetas = Vec::new();
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    let mut hyp = 0usize;
    for b in blocks {
        match b {
            BasicBlock::N1 { lambda: 1, b } if *b > 0.0 => p[0] += 1,
            BasicBlock::N1 { lambda: 1, b } if *b < 0.0 => p[2] += 1,
            BasicBlock::N1 { lambda: 1, .. } => p[1] += 1,
            BasicBlock::N1 { lambda: -1, b } if *b > 0.0 => q[0] += 1,
            BasicBlock::N1 { lambda: -1, b } if *b < 0.0 => q[2] += 1,
            BasicBlock::N1 { .. } => q[1] += 1,
            BasicBlock::D { .. } => hyp += 2,
            BasicBlock::R { theta } => thetas.push(theta.clone()),
            BasicBlock::N2 { theta, .. } => match b.n2_class().unwrap() {
                N2Class::NonTrivial => alphas.push(theta.clone()),
                N2Class::Trivial => betas.push(theta.clone()),
            },
        }
    }
    NormalFormDecomposition {
        n,
        p,
        q,
        thetas_over_2pi: thetas,
        alphas_over_2pi: alphas,
        betas_over_2pi: betas,
        hyp_dim: hyp,
    }
}

/// Shared driver: `paths` cases of half-dimension <= n_max, iterates <= m_max.
fn run_equivalence(seed: u64, cases: usize, n_max: usize, m_max: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = OracleOptions::default();
    let one = Complex::new(1.0, 0.0);
    for case in 0..cases {
        let n = rng.gen_range(1..=n_max);
        let blocks = random_blocks(&mut rng, n);
        let dec = decomposition_of(&blocks, n);
        let path = generator_product_path(&blocks).expect("generator path");
        let sweep = omega_index_sweep(&path, m_max, one, &opts)
            .unwrap_or_else(|e| panic!("case {case}: oracle failed on {blocks:?}: {e}"));
        let nu1 = dec.nu1();
        let seed_idx = IndexSeed { i1: sweep[0], nu1 };
        for m in 1..=m_max {
            let (i_m, _) = iterate_index(&dec, &seed_idx, m)
                .unwrap_or_else(|e| panic!("case {case}: formula failed: {e}"));
            assert_eq!(
                sweep[m as usize - 1],
                i_m,
                "case {case}, m = {m}: numeric {} vs formula {} on {blocks:?}",
                sweep[m as usize - 1],
                i_m
            );
        }
    }
}

#[test]
fn oracle_matches_formula_small() {
    run_equivalence(7, 25, 2, 8);
}

#[test]
fn oracle_matches_formula_medium() {
    run_equivalence(11, 20, 3, 6);
}

#[test]
fn parity_statements() {
    let opts = OracleOptions::default();
    let one = Complex::new(1.0, 0.0);
    // Pure rotation: odd.
    let p = generator_product_path(&[BasicBlock::R { theta: angle(0.37) }]).unwrap();
    let i1 = omega_index_sweep(&p, 1, one, &opts).unwrap()[0];
    assert_eq!(i1.rem_euclid(2), 1);
    // Single N2: even.
    let blk = n2_from_sigma(angle(0.29), 0.9, 0.2, 0.5).unwrap();
    let p2 = generator_product_path(&[blk]).unwrap();
    let i2 = omega_index_sweep(&p2, 1, one, &opts).unwrap()[0];
    assert_eq!(i2.rem_euclid(2), 0);
}
