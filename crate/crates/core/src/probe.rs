//! Symmetric probes attached to `n` qubits.
//!
//! A symmetric attack is fixed by the weights `w_k` (probability that a given
//! set of `k` qubits arrives disturbed) and by the weighted overlaps between
//! probe states of one disturbance pattern. Probe states with different
//! patterns are orthogonal, and so are states that differ in a disturbed
//! index. Two states of the pattern with `k` disturbed qubits that differ in
//! `d` undisturbed indices have weighted overlap `Σ_j (−1)^j C(d,j) w_{k+j}`.
//! For one qubit this is `F − D`; for two it gives `A1, A2, B1`; for three
//! `A1..A3, B1, B2, C1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{gram_factorize, hermitian_eigen, inner, norm_sqr, ComplexMatrix, PSD_TOL};
use crate::qubit::{product_state, Basis};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Weights `w_0..w_n` of an `n`-qubit symmetric attack.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProbe {
    n: usize,
    weights: Vec<f64>,
}

impl SymmetricProbe {
    pub fn new(weights: Vec<f64>) -> Self {
        assert!(weights.len() >= 2, "need at least one qubit");
        Self {
            n: weights.len() - 1,
            weights,
        }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weighted overlap for `disturbed` disturbed qubits and `diff` differing
    /// undisturbed indices.
    pub fn weighted_overlap(&self, disturbed: usize, diff: usize) -> f64 {
        (0..=diff)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(diff, j) * self.weights[disturbed + j]
            })
            .sum()
    }

    /// Weighted Gram matrix of the family with disturbance pattern `pattern`
    /// (bit `q` set when qubit `q` is disturbed), indexed by Alice's bits.
    pub fn family_gram(&self, pattern: usize) -> ComplexMatrix {
        let dim = 1 << self.n;
        let k = pattern.count_ones() as usize;
        ComplexMatrix::from_real_fn(dim, dim, |s, t| {
            let d = s ^ t;
            if d & pattern != 0 {
                0.0
            } else {
                self.weighted_overlap(k, d.count_ones() as usize)
            }
        })
    }

    /// Eigenvalues of every distinct family Gram; all must be ≥ −1e-10.
    pub fn min_family_eigenvalue(&self) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for k in 0..=self.n {
            let pattern = (1usize << k) - 1;
            let e = hermitian_eigen(&self.family_gram(pattern))?;
            worst = worst.min(e.min_value());
        }
        Ok(worst)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = self.weights.iter().find(|&&w| w < -PSD_TOL) {
            return Err(Error::Validity(format!("negative weight {w}")));
        }
        let total: f64 = (0..=self.n).map(|k| binomial(self.n, k) * self.weights[k]).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validity(format!("weights sum to {total}, not 1")));
        }
        let min = self.min_family_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::Validity(format!(
                "probe family gram not PSD (min eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    /// Realizes the probe by Gram factorization and returns the attack
    /// isometry in the z basis.
    pub fn realize(&self) -> Result<ProbeRealization> {
        self.validate()?;
        let dim: usize = 1 << self.n;
        let mut blocks = Vec::new();
        let mut offset = 0;
        for pattern in 0..dim {
            if self.weights[pattern.count_ones() as usize] <= 0.0 {
                continue;
            }
            let x = gram_factorize(&self.family_gram(pattern))?;
            let rank = x.rows();
            blocks.push((pattern, offset, x));
            offset += rank;
        }
        let probe_dim = offset;
        let mut iso = ComplexMatrix::zeros(dim * probe_dim, dim);
        let mut family_states = Vec::new();
        for (pattern, off, x) in &blocks {
            let mut states = Vec::with_capacity(dim);
            for s in 0..dim {
                let bob = s ^ pattern;
                let mut v = vec![Complex64::new(0.0, 0.0); probe_dim];
                for r in 0..x.rows() {
                    v[off + r] = x[(r, s)];
                    iso[(bob * probe_dim + off + r, s)] = x[(r, s)];
                }
                states.push(v);
            }
            family_states.push((*pattern, states));
        }
        Ok(ProbeRealization {
            qubits: self.n,
            probe_dim,
            isometry: iso,
            family_states,
        })
    }
}

/// Explicit probe vectors and the isometry `|s⟩ ↦ Σ_f |s⊕f⟩ ⊗ x_{f,s}`.
#[derive(Debug, Clone)]
pub struct ProbeRealization {
    pub qubits: usize,
    pub probe_dim: usize,
    /// `(2^n · probe_dim) × 2^n`, row index `bob * probe_dim + probe`.
    pub isometry: ComplexMatrix,
    /// Weighted probe states `x_{f,s}` per disturbance pattern `f`, indexed by `s`.
    pub family_states: Vec<(usize, Vec<Vec<Complex64>>)>,
}

/// One probe family seen from a basis tuple.
#[derive(Debug, Clone)]
pub struct DerivedFamily {
    pub pattern: usize,
    /// `‖φ_{s,f}‖²`, equal across `s` for a symmetric attack.
    pub weights: Vec<f64>,
    /// Weighted Gram `⟨φ_{s,f}|φ_{t,f}⟩`.
    pub gram: ComplexMatrix,
    /// Unnormalized probe states, indexed by Alice's bits.
    pub states: Vec<Vec<Complex64>>,
}

/// Applies `isometry` (z-basis, `n` qubits) to Alice's state in `bases` and
/// decomposes the output along Bob's outcomes in the same bases:
/// `φ_{s,f} = (⟨s⊕f| ⊗ 1) V |s⟩`.
pub fn derive_families(isometry: &ComplexMatrix, probe_dim: usize, bases: &[Basis]) -> Vec<DerivedFamily> {
    let dim = 1 << bases.len();
    let outputs: Vec<Vec<Complex64>> = (0..dim).map(|s| isometry.apply(&product_state(bases, s))).collect();
    let bob_states: Vec<Vec<Complex64>> = (0..dim).map(|b| product_state(bases, b)).collect();
    (0..dim)
        .map(|pattern| {
            let states: Vec<Vec<Complex64>> = (0..dim)
                .map(|s| project_bob(&outputs[s], &bob_states[s ^ pattern], probe_dim))
                .collect();
            let weights = states.iter().map(|v| norm_sqr(v)).collect();
            let gram = ComplexMatrix::from_fn(dim, dim, |i, j| inner(&states[i], &states[j]));
            DerivedFamily {
                pattern,
                weights,
                gram,
                states,
            }
        })
        .collect()
}

/// `(⟨bob| ⊗ 1) psi` for a joint vector with row index `z * probe_dim + e`.
pub fn project_bob(psi: &[Complex64], bob: &[Complex64], probe_dim: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); probe_dim];
    for (z, b) in bob.iter().enumerate() {
        let bc = b.conj();
        if bc == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (e, o) in out.iter_mut().enumerate() {
            *o += bc * psi[z * probe_dim + e];
        }
    }
    out
}

/// Largest modulus of an inner product between probe states of different families.
pub fn max_cross_family_overlap(families: &[DerivedFamily]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in families.iter().enumerate() {
        for b in &families[i + 1..] {
            for u in &a.states {
                for v in &b.states {
                    worst = worst.max(inner(u, v).norm());
                }
            }
        }
    }
    worst
}
