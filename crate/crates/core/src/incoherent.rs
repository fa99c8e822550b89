//! Single-qubit (incoherent) attacks.
//!
//! Eve attaches a 4-dimensional probe to each qubit. With probe coordinates
//! `ψ0^z = e1`, `ψ0^{−z} = (cos a, 0, sin a, 0)`, `ψ1^z = e2`, `ψ1^{−z} = e4`
//! the attack is symmetric in all three bases and Bob's fidelity is
//! `F = 1/(2 − cos a)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::info::{renyi_information, shannon_information};
use crate::numerics::{inner, ComplexMatrix};
use crate::qubit::Basis;

pub const PROBE_DIM: usize = 4;

/// An incoherent attack, parameterized by the probe angle `a ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncoherentAttack {
    a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IncoherentMetrics {
    pub fidelity: f64,
    pub disturbance: f64,
    /// Eve's success probability on the undisturbed (ψ0) probe states.
    pub ps: f64,
    pub pf: f64,
    /// Probability that Eve guesses the bit.
    pub pg: f64,
    /// Same, restricted to bits Bob received undisturbed.
    pub pg_undist: f64,
    pub shannon: f64,
    pub renyi: f64,
}

impl IncoherentAttack {
    pub fn new(a: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&a) {
            return Err(domain("a", a, "[0, π]"));
        }
        Ok(Self { a })
    }

    /// Inverse of `D = 1 − 1/(2 − cos a)`: `cos a = (1 − 2D)/(1 − D)`.
    pub fn from_disturbance(d: f64) -> Result<Self> {
        if !(0.0..=2.0 / 3.0).contains(&d) {
            return Err(domain("D", d, "[0, 2/3]"));
        }
        let cos_a = ((1.0 - 2.0 * d) / (1.0 - d)).clamp(-1.0, 1.0);
        Self::new(cos_a.acos())
    }

    pub fn angle(&self) -> f64 {
        self.a
    }

    pub fn fidelity(&self) -> f64 {
        1.0 / (2.0 - self.a.cos())
    }

    pub fn disturbance(&self) -> f64 {
        1.0 - self.fidelity()
    }

    pub fn metrics(&self) -> IncoherentMetrics {
        let f = self.fidelity();
        let d = 1.0 - f;
        let ps = 0.5 * (1.0 + self.a.sin());
        let pf = 1.0 - ps;
        IncoherentMetrics {
            fidelity: f,
            disturbance: d,
            ps,
            pf,
            pg: f * ps + d,
            pg_undist: ps,
            shannon: f * shannon_information(1.0, &[pf, ps]) + d,
            renyi: f * renyi_information(1.0, &[pf, ps]) + d,
        }
    }

    /// Probe vectors `(ψ0^z, ψ0^{−z}, ψ1^z, ψ1^{−z})`.
    pub fn z_probe_states(&self) -> [[f64; PROBE_DIM]; 4] {
        let (s, c) = self.a.sin_cos();
        [
            [1.0, 0.0, 0.0, 0.0],
            [c, 0.0, s, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    }

    /// The attack isometry `qubit → qubit ⊗ probe` (8×2, row `qubit*4 + probe`):
    /// `|k⟩ ↦ √F |k⟩ψ0^k + √D |−k⟩ψ1^k` for `k = ±z`.
    pub fn isometry(&self) -> ComplexMatrix {
        let f = self.fidelity();
        let (sf, sd) = (f.sqrt(), (1.0 - f).sqrt());
        let [p0z, p0m, p1z, p1m] = self.z_probe_states();
        let mut v = ComplexMatrix::zeros(2 * PROBE_DIM, 2);
        for e in 0..PROBE_DIM {
            v[(e, 0)] = Complex64::new(sf * p0z[e], 0.0);
            v[(PROBE_DIM + e, 0)] = Complex64::new(sd * p1z[e], 0.0);
            v[(PROBE_DIM + e, 1)] = Complex64::new(sf * p0m[e], 0.0);
            v[(e, 1)] = Complex64::new(sd * p1m[e], 0.0);
        }
        v
    }

    /// Probability that Bob, measuring in `basis`, finds the state Alice sent
    /// (averaged over the two states of the basis).
    pub fn bob_fidelity(&self, basis: Basis) -> f64 {
        let v = self.isometry();
        let mut total = 0.0;
        for bit in 0..2u8 {
            let out = v.apply(&basis.state(bit));
            let probe = crate::probe::project_bob(&out, &basis.state(bit), PROBE_DIM);
            total += probe.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        total / 2.0
    }

    /// Two-qubit state shared by Alice and Bob when Alice keeps half of
    /// `(|00⟩+|11⟩)/√2` and the other half passes through the attack.
    pub fn alice_bob_state(&self) -> ComplexMatrix {
        let v = self.isometry();
        let amp = std::f64::consts::FRAC_1_SQRT_2;
        // joint vector on alice ⊗ bob ⊗ probe
        let mut psi = vec![Complex64::new(0.0, 0.0); 2 * 2 * PROBE_DIM];
        for alice in 0..2 {
            let mut input = [Complex64::new(0.0, 0.0); 2];
            input[alice] = Complex64::new(amp, 0.0);
            let out = v.apply(&input);
            for (k, z) in out.iter().enumerate() {
                psi[alice * 2 * PROBE_DIM + k] += z;
            }
        }
        ComplexMatrix::from_fn(4, 4, |r, c| {
            (0..PROBE_DIM)
                .map(|e| psi[r * PROBE_DIM + e] * psi[c * PROBE_DIM + e].conj())
                .sum()
        })
    }
}

/// Outcome of reconstructing the cloning-machine attack.
#[derive(Debug, Clone, Serialize)]
pub struct ClonerReport {
    pub fidelity: f64,
    pub disturbance: f64,
    /// `⟨ψ0^z|ψ0^{−z}⟩`.
    pub undisturbed_overlap: f64,
    /// `⟨ψ1^z|ψ1^{−z}⟩`.
    pub disturbed_overlap: f64,
    pub pg: f64,
    pub passed: bool,
}

/// Builds the universal 1→2 cloner output on `|±z⟩` (original ⊗ clone ⊗
/// machine), reads off the probe states on clone ⊗ machine, and returns the
/// equivalent incoherent attack together with the checks.
pub fn cloner_point() -> (IncoherentAttack, ClonerReport) {
    let (w_same, w_flip) = ((2.0_f64 / 3.0).sqrt(), (1.0_f64 / 6.0).sqrt());
    // basis index original*4 + clone*2 + machine, 0 = z, 1 = −z
    let idx = |o: usize, c: usize, m: usize| o * 4 + c * 2 + m;
    let mut out_z = [0.0; 8];
    out_z[idx(0, 0, 0)] = w_same;
    out_z[idx(0, 1, 1)] = w_flip;
    out_z[idx(1, 0, 1)] = w_flip;
    let mut out_mz = [0.0; 8];
    out_mz[idx(1, 1, 1)] = w_same;
    out_mz[idx(1, 0, 0)] = w_flip;
    out_mz[idx(0, 1, 0)] = w_flip;

    // Unnormalized probe states: project the original onto |±z⟩.
    let probe = |out: &[f64; 8], original: usize| -> Vec<Complex64> {
        (0..4).map(|e| Complex64::new(out[original * 4 + e], 0.0)).collect()
    };
    let f0z = probe(&out_z, 0);
    let f1z = probe(&out_z, 1);
    let f0m = probe(&out_mz, 1);
    let f1m = probe(&out_mz, 0);
    let fidelity = inner(&f0z, &f0z).re;
    let disturbance = inner(&f1z, &f1z).re;
    let undisturbed_overlap = inner(&f0z, &f0m).re / fidelity;
    let disturbed_overlap = inner(&f1z, &f1m).re / disturbance;

    let attack =
        IncoherentAttack::new(undisturbed_overlap.clamp(-1.0, 1.0).acos()).expect("cloner overlap is a valid angle");
    let pg = attack.metrics().pg;
    let passed = (fidelity - 5.0 / 6.0).abs() < 1e-12
        && (disturbance - 1.0 / 6.0).abs() < 1e-12
        && (undisturbed_overlap - 0.8).abs() < 1e-12
        && disturbed_overlap.abs() < 1e-12
        && (attack.fidelity() - 5.0 / 6.0).abs() < 1e-12;
    (
        attack,
        ClonerReport {
            fidelity,
            disturbance,
            undisturbed_overlap,
            disturbed_overlap,
            pg,
            passed,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::partial_transpose_min_eig;
    use std::f64::consts::PI;

    #[test]
    fn no_attack() {
        let m = IncoherentAttack::new(0.0).unwrap().metrics();
        assert_eq!(m.fidelity, 1.0);
        assert_eq!(m.disturbance, 0.0);
        assert_eq!(m.ps, 0.5);
        assert_eq!(m.pg, 0.5);
        assert!(m.shannon.abs() < 1e-15);
        assert!(m.renyi.abs() < 1e-15);
    }

    #[test]
    fn cloner_angle_metrics() {
        let m = IncoherentAttack::new(0.8_f64.acos()).unwrap().metrics();
        assert!((m.fidelity - 5.0 / 6.0).abs() < 1e-12);
        assert!((m.disturbance - 1.0 / 6.0).abs() < 1e-12);
        assert!((m.pg - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_floor_at_pi() {
        let a = IncoherentAttack::new(PI).unwrap();
        assert!((a.fidelity() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_angle() {
        assert!(IncoherentAttack::new(-0.1).is_err());
        assert!(IncoherentAttack::new(3.2).is_err());
        assert!(IncoherentAttack::from_disturbance(0.7).is_err());
    }

    #[test]
    fn from_disturbance_values() {
        assert_eq!(IncoherentAttack::from_disturbance(0.0).unwrap().angle(), 0.0);
        let a = IncoherentAttack::from_disturbance(1.0 / 6.0).unwrap();
        assert!((a.angle().cos() - 0.8).abs() < 1e-15);
        let a = IncoherentAttack::from_disturbance(1.0 / 3.0).unwrap();
        assert!((a.angle() - PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn full_information_at_half_disturbance() {
        let m = IncoherentAttack::new(PI / 2.0).unwrap().metrics();
        assert_eq!(m.ps, 1.0);
        assert_eq!(m.shannon, 1.0);
        assert_eq!(m.renyi, 1.0);
        assert!((m.disturbance - 0.5).abs() < 1e-15);
    }

    #[test]
    fn isometry_and_basis_fidelities() {
        let a = IncoherentAttack::new(1.0).unwrap();
        let v = a.isometry();
        assert!(v.column_gram().sub(&ComplexMatrix::identity(2)).max_abs() < 1e-10);
        for b in Basis::ALL {
            assert!((a.bob_fidelity(b) - a.fidelity()).abs() < 1e-10);
        }
    }

    #[test]
    fn cloner_reconstruction() {
        let (attack, report) = cloner_point();
        assert!(report.passed, "{report:?}");
        assert!((attack.angle().cos() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn entangled_below_one_third() {
        let at = |d: f64| {
            let rho = IncoherentAttack::from_disturbance(d).unwrap().alice_bob_state();
            partial_transpose_min_eig(&rho).unwrap()
        };
        assert!((at(0.0) + 0.5).abs() < 1e-12);
        assert!(at(0.2) < -1e-3);
        assert!(at(1.0 / 3.0).abs() < 1e-10);
        assert!(at(0.4) > 1e-3);
    }
}
