//! The six protocol states.
//!
//! The z eigenstates are the computational basis. `|x⟩ = (|z⟩+|−z⟩)/√2` and
//! `|−x⟩ = (−i|z⟩+i|−z⟩)/√2`; `|y⟩ = (|z⟩+i|−z⟩)/√2` and `|−y⟩ = (i|z⟩+|−z⟩)/√2`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{kron_vec, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
    Y,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::Z, Basis::X, Basis::Y];

    pub fn index(self) -> usize {
        match self {
            Basis::Z => 0,
            Basis::X => 1,
            Basis::Y => 2,
        }
    }

    pub fn from_index(i: usize) -> Basis {
        Self::ALL[i % 3]
    }

    /// `bit = 0` is the `+k` state and `bit = 1` the `−k` state.
    pub fn state(self, bit: u8) -> [Complex64; 2] {
        let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let i = Complex64::new(0.0, FRAC_1_SQRT_2);
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        match (self, bit) {
            (Basis::Z, 0) => [one, zero],
            (Basis::Z, _) => [zero, one],
            (Basis::X, 0) => [r, r],
            (Basis::X, _) => [-i, i],
            (Basis::Y, 0) => [r, i],
            (Basis::Y, _) => [i, r],
        }
    }

    /// 2×2 unitary whose columns are the `+k`, `−k` states.
    pub fn frame(self) -> ComplexMatrix {
        let p = self.state(0);
        let m = self.state(1);
        ComplexMatrix::from_fn(2, 2, |i, j| if j == 0 { p[i] } else { m[i] })
    }
}

/// Bit of qubit `q` (qubit 0 is the most significant tensor factor).
pub fn bit_of(index: usize, q: usize, n: usize) -> u8 {
    ((index >> (n - 1 - q)) & 1) as u8
}

/// Product state `⊗_q |bases[q], bits[q]⟩` with bits packed as in [`bit_of`].
pub fn product_state(bases: &[Basis], bits: usize) -> Vec<Complex64> {
    let n = bases.len();
    let mut v = vec![Complex64::new(1.0, 0.0)];
    for (q, b) in bases.iter().enumerate() {
        v = kron_vec(&v, &b.state(bit_of(bits, q, n)));
    }
    v
}
