#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sixstate::coherent2::{feasible_alpha, Coherent2Params};
use sixstate::coherent3::{polygon_box, Coherent3Params};
use sixstate::numerics::{srm_outcome_probabilities, ComplexMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coh2(rng: &mut impl Rng) -> Coherent2Params {
    loop {
        let d = rng.random_range(0.005..0.5);
        let Some((lo, hi)) = feasible_alpha(d) else { continue };
        let alpha = rng.random_range(lo..=hi);
        if let Ok(p) = Coherent2Params::from_disturbance(d, alpha) {
            return p;
        }
    }
}

pub fn random_coh3(rng: &mut impl Rng) -> Coherent3Params {
    loop {
        let d = rng.random_range(0.005..0.5);
        let Some(((a0, a1), (b0, b1))) = polygon_box(d) else {
            continue;
        };
        if a1 <= a0 || b1 <= b0 {
            continue;
        }
        let alpha = rng.random_range(a0..a1);
        let beta = rng.random_range(b0..b1);
        if let Ok(p) = Coherent3Params::from_disturbance(d, alpha, beta) {
            return p;
        }
    }
}

/// Random PSD matrix `A A†` of size `n` with rank at most `rank`.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, rank, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    a.matmul(&a.adjoint())
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    a.add(&a.adjoint()).scale(0.5)
}

/// SRM outcome probabilities for state 0 of `gram`, summed by the number of
/// bit errors (restricted to the bits outside `mask`).
pub fn srm_by_errors(gram: &ComplexMatrix, mask: usize) -> Vec<f64> {
    let t = srm_outcome_probabilities(gram).unwrap();
    let bits = gram.rows().trailing_zeros() as usize;
    let mut out = vec![0.0; bits + 1];
    for (j, row) in t.iter().enumerate() {
        if j & mask != 0 {
            assert!(row[0] < 1e-12, "outcome outside the block");
            continue;
        }
        out[j.count_ones() as usize] += row[0];
    }
    out
}
