//! Joint outcome tables for one attacked group of qubits.
//!
//! For every choice of Alice's bases, Alice's bits and Bob's bases the table
//! holds the cumulative distribution of (Bob's outcome, Eve's outcome). Eve
//! measures after the bases are announced: first the disturbance pattern,
//! then the square-root measurement inside that family.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{inner, ComplexMatrix};
use crate::probe::{derive_families, max_cross_family_overlap, project_bob};
use crate::qubit::{product_state, Basis};

const ORTHOGONALITY_TOL: f64 = 1e-9;

/// Eve's outcome: the disturbance pattern she identified and her guess of Alice's bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EveOutcome {
    pub pattern: usize,
    pub guess: usize,
}

#[derive(Debug, Clone)]
pub struct Channel {
    qubits: usize,
    eve_outcomes: Vec<EveOutcome>,
    /// Cumulative distributions, one per (alice bases, alice bits, bob bases).
    cdfs: Vec<Vec<f64>>,
}

fn basis_tuple(index: usize, n: usize) -> Vec<Basis> {
    (0..n)
        .map(|q| Basis::from_index(index / 3usize.pow((n - 1 - q) as u32) % 3))
        .collect()
}

impl Channel {
    /// `isometry` maps `n` qubits (z basis) to `n` qubits ⊗ probe, row
    /// `bob * probe_dim + probe`.
    pub fn new(isometry: &ComplexMatrix, probe_dim: usize, n: usize) -> Result<Self> {
        let dim = 1usize << n;
        let tuples = 3usize.pow(n as u32);
        if isometry.rows() != dim * probe_dim || isometry.cols() != dim {
            return Err(Error::Contract(format!(
                "isometry is {}x{}, expected {}x{}",
                isometry.rows(),
                isometry.cols(),
                dim * probe_dim,
                dim
            )));
        }

        // Eve's measurement vectors per Alice basis tuple.
        let mut povms: Vec<Vec<(EveOutcome, Vec<Complex64>)>> = Vec::with_capacity(tuples);
        let mut eve_outcomes = Vec::new();
        for ab in 0..tuples {
            let bases = basis_tuple(ab, n);
            let families = derive_families(isometry, probe_dim, &bases);
            let cross = max_cross_family_overlap(&families);
            if cross > ORTHOGONALITY_TOL {
                return Err(Error::Contract(format!(
                    "probe families overlap by {cross:e} in bases {bases:?}"
                )));
            }
            let mut povm = Vec::new();
            for fam in &families {
                if fam.weights.iter().all(|&w| w <= ORTHOGONALITY_TOL) {
                    continue;
                }
                let vectors = crate::numerics::srm_vectors(&ComplexMatrix::from_columns(&fam.states))?;
                for (guess, m) in vectors.into_iter().enumerate() {
                    povm.push((
                        EveOutcome {
                            pattern: fam.pattern,
                            guess,
                        },
                        m,
                    ));
                }
            }
            povms.push(povm);
        }
        // Outcome labels are shared across basis tuples; use the union in a fixed order.
        for pattern in 0..dim {
            for guess in 0..dim {
                eve_outcomes.push(EveOutcome { pattern, guess });
            }
        }

        let mut cdfs = Vec::with_capacity(tuples * dim * tuples);
        for (ab, povm) in povms.iter().enumerate() {
            let abases = basis_tuple(ab, n);
            for s in 0..dim {
                let out = isometry.apply(&product_state(&abases, s));
                for bb in 0..tuples {
                    let bbases = basis_tuple(bb, n);
                    let mut probs = vec![0.0; dim * eve_outcomes.len()];
                    for o in 0..dim {
                        let chi = project_bob(&out, &product_state(&bbases, o), probe_dim);
                        for (e, m) in povm {
                            let k = e.pattern * dim + e.guess;
                            probs[o * eve_outcomes.len() + k] += inner(m, &chi).norm_sqr();
                        }
                    }
                    let total: f64 = probs.iter().sum();
                    if (total - 1.0).abs() > 1e-9 {
                        return Err(Error::Contract(format!("outcome probabilities sum to {total}")));
                    }
                    let mut acc = 0.0;
                    let cdf = probs
                        .iter()
                        .map(|p| {
                            acc += p / total;
                            acc
                        })
                        .collect();
                    cdfs.push(cdf);
                }
            }
        }
        Ok(Self {
            qubits: n,
            eve_outcomes,
            cdfs,
        })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Samples `(bob outcome, eve outcome)` from uniform `u ∈ [0, 1)`.
    pub fn sample(&self, alice_bases: usize, alice_bits: usize, bob_bases: usize, u: f64) -> (usize, EveOutcome) {
        let dim = 1usize << self.qubits;
        let tuples = 3usize.pow(self.qubits as u32);
        let cdf = &self.cdfs[(alice_bases * dim + alice_bits) * tuples + bob_bases];
        let k = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        let ne = self.eve_outcomes.len();
        (k / ne, self.eve_outcomes[k % ne])
    }
}

/// Two copies of a single-qubit isometry acting independently, laid out
/// with row `(bob pair) * pd² + probe pair`.
pub fn pair_isometry(v: &ComplexMatrix, probe_dim: usize) -> ComplexMatrix {
    let pd2 = probe_dim * probe_dim;
    let mut out = ComplexMatrix::zeros(4 * pd2, 4);
    for s1 in 0..2 {
        for s2 in 0..2 {
            for b1 in 0..2 {
                for b2 in 0..2 {
                    for e1 in 0..probe_dim {
                        for e2 in 0..probe_dim {
                            let amp = v[(b1 * probe_dim + e1, s1)] * v[(b2 * probe_dim + e2, s2)];
                            out[((b1 * 2 + b2) * pd2 + e1 * probe_dim + e2, s1 * 2 + s2)] = amp;
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incoherent::{IncoherentAttack, PROBE_DIM};

    #[test]
    fn basis_tuples_enumerate_all() {
        assert_eq!(basis_tuple(0, 2), vec![Basis::Z, Basis::Z]);
        assert_eq!(basis_tuple(5, 2), vec![Basis::X, Basis::Y]);
    }

    #[test]
    fn pair_isometry_is_isometric() {
        let v = IncoherentAttack::new(0.7).unwrap().isometry();
        let p = pair_isometry(&v, PROBE_DIM);
        assert!(p.column_gram().sub(&ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn no_attack_channel_is_perfect() {
        let v = IncoherentAttack::new(0.0).unwrap().isometry();
        let c = Channel::new(&v, PROBE_DIM, 1).unwrap();
        for b in 0..3 {
            for s in 0..2 {
                for u in [0.0, 0.3, 0.999] {
                    assert_eq!(c.sample(b, s, b, u).0, s);
                }
            }
        }
    }
}
