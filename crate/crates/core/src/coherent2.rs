//! Two-qubit coherent attacks.
//!
//! One probe is attached to a pair of qubits. The attack is fixed by the
//! probabilities `α` (neither qubit disturbed), `β` (a given single qubit
//! disturbed) and `γ` (both disturbed) with `α + 2β + γ = 1`; `F = α + β`,
//! `D = β + γ`. All remaining probe overlaps follow from these three.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::incoherent::IncoherentAttack;
use crate::info::{renyi_information, shannon_information};
use crate::numerics::{ComplexMatrix, PSD_TOL};
use crate::optimize::{maximize_scalar, ScalarOptimum};
use crate::probe::{derive_families, max_cross_family_overlap, ProbeRealization, SymmetricProbe};
use crate::qubit::Basis;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coherent2Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Weighted overlaps of the probe states. Only `a1`, `a2` and `b1` can be
/// nonzero; the others are kept to mirror the full overlap table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramSet2 {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub c1: f64,
    pub c2: f64,
}

/// `P_ij`: probability that Eve guesses `j` of the two bits when `i` arrived disturbed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probs2 {
    pub p02: f64,
    pub p01: f64,
    pub p00: f64,
    pub p12: f64,
    pub p11: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics2 {
    /// Probability of guessing both bits.
    pub pcg: f64,
    /// Probability of guessing a bit that Bob received undisturbed.
    pub pcg_undist: f64,
    pub shannon: f64,
    pub renyi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Metric2 {
    Pcg,
    PcgUndist,
    Shannon,
    Renyi,
}

/// Default grid for [`optimize`].
pub const DEFAULT_GRID: usize = 2001;

fn clamp_sqrt(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

/// Success amplitudes `(a, b, c)` of the square-root measurement on four
/// states with weighted overlap table `(w, x1, x2)` over the two-index
/// flip group.
pub(crate) fn abc(weight: f64, x1: f64, x2: f64) -> (f64, f64, f64) {
    let plus = clamp_sqrt(1.0 + x2 / weight + 2.0 * x1 / weight);
    let minus = clamp_sqrt(1.0 + x2 / weight - 2.0 * x1 / weight);
    let mid = clamp_sqrt(1.0 - x2 / weight);
    (
        0.25 * (2.0 * mid + plus + minus),
        0.25 * (plus - minus),
        0.25 * (2.0 * mid - plus - minus),
    )
}

impl Coherent2Params {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self { alpha, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    /// Solves `F = α + β`, `D = β + γ` for fixed `D` and `α`.
    pub fn from_disturbance(d: f64, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&d) {
            return Err(domain("D", d, "[0, 1)"));
        }
        Self::new(alpha, 1.0 - d - alpha, alpha + 2.0 * d - 1.0)
    }

    /// The double incoherent attack `(F², FD, D²)`.
    pub fn factorized(d: f64) -> Self {
        let f = 1.0 - d;
        Self {
            alpha: f * f,
            beta: f * d,
            gamma: d * d,
        }
    }

    fn probe(&self) -> SymmetricProbe {
        SymmetricProbe::new(vec![self.alpha, self.beta, self.gamma])
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)] {
            if !v.is_finite() || v < -PSD_TOL {
                return Err(Error::Validity(format!("{name} = {v} is negative")));
            }
        }
        let total = self.alpha + 2.0 * self.beta + self.gamma;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validity(format!("alpha + 2 beta + gamma = {total} != 1")));
        }
        if self.alpha <= 0.0 {
            return Err(Error::Validity("alpha must be positive".into()));
        }
        let min = self.probe().min_family_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::Validity(format!(
                "probe gram not PSD (min eigenvalue {min:e}; needs 2 beta >= gamma and 4 alpha - 4 beta + gamma >= 0)"
            )));
        }
        Ok(())
    }

    pub fn fidelity(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn disturbance(&self) -> f64 {
        self.beta + self.gamma
    }

    pub fn gram_values(&self) -> GramSet2 {
        GramSet2 {
            a1: self.alpha - self.beta,
            a2: self.alpha - 2.0 * self.beta + self.gamma,
            b1: self.beta - self.gamma,
            b2: 0.0,
            b3: 0.0,
            c1: 0.0,
            c2: 0.0,
        }
    }

    /// Weighted Gram of the undisturbed family, order `(zz, z−z, −zz, −z−z)`.
    pub fn psi0_gram(&self) -> ComplexMatrix {
        self.probe().family_gram(0)
    }

    /// Weighted Gram of the family where qubit `q` (0 or 1) is disturbed.
    pub fn psi1_gram(&self, q: usize) -> ComplexMatrix {
        self.probe().family_gram(if q == 0 { 0b10 } else { 0b01 })
    }

    pub fn psi2_gram(&self) -> ComplexMatrix {
        self.probe().family_gram(0b11)
    }

    pub fn probs(&self) -> Probs2 {
        let g = self.gram_values();
        let (a, b, c) = abc(self.alpha, g.a1, g.a2);
        let p12 = if self.beta > 0.0 {
            let r = self.gamma / self.beta;
            0.5 * (1.0 + clamp_sqrt(2.0 * r - r * r))
        } else {
            1.0
        };
        Probs2 {
            p02: a * a,
            p01: 2.0 * b * b,
            p00: c * c,
            p12,
            p11: 1.0 - p12,
        }
    }

    pub fn metrics(&self) -> Metrics2 {
        let p = self.probs();
        let Self { alpha, beta, gamma } = *self;
        let psi0 = [p.p02, 0.5 * p.p01, 0.5 * p.p01, p.p00];
        let psi1 = [p.p12, p.p11, 0.0, 0.0];
        Metrics2 {
            pcg: alpha * p.p02 + 2.0 * beta * p.p12 + gamma,
            pcg_undist: (alpha * (p.p02 + 0.5 * p.p01) + beta * p.p12) / (alpha + beta),
            shannon: alpha * shannon_information(2.0, &psi0)
                + 2.0 * beta * shannon_information(2.0, &psi1)
                + gamma * 2.0,
            renyi: alpha * renyi_information(2.0, &psi0) + 2.0 * beta * renyi_information(2.0, &psi1) + gamma * 2.0,
        }
    }

    /// Undisturbed-bit probability with `β·P11` in the numerator. Diagnostic
    /// only: it does not reduce to `p(s)` at the factorized point.
    pub fn printed_pcg_undist(&self) -> f64 {
        let p = self.probs();
        (self.alpha * (p.p02 + 0.5 * p.p01) + self.beta * p.p11) / (self.alpha + self.beta)
    }

    /// Expected fraction of all bits (disturbed or not) that Eve guesses.
    pub fn per_bit_accuracy(&self) -> f64 {
        let p = self.probs();
        (self.alpha * (2.0 * p.p02 + p.p01) + 2.0 * self.beta * (1.0 + p.p12) + 2.0 * self.gamma) / 2.0
    }

    pub fn metric(&self, which: Metric2) -> f64 {
        let m = self.metrics();
        match which {
            Metric2::Pcg => m.pcg,
            Metric2::PcgUndist => m.pcg_undist,
            Metric2::Shannon => m.shannon,
            Metric2::Renyi => m.renyi,
        }
    }

    /// Probe states and the attack isometry `pair → pair ⊗ probe`.
    pub fn build_probe_states(&self) -> Result<ProbeRealization> {
        self.validate()?;
        self.probe().realize()
    }
}

/// Feasible `α` interval at disturbance `D`, or `None` when empty.
///
/// Bounds: `β ≥ 0` (`α ≤ 1 − D`), `γ ≥ 0` (`α ≥ 1 − 2D`), `2β ≥ γ`
/// (`α ≤ 1 − 4D/3`) and `4α − 4β + γ ≥ 0` (`α ≥ (5 − 6D)/9`).
pub fn feasible_alpha(d: f64) -> Option<(f64, f64)> {
    let lo = (1.0 - 2.0 * d).max((5.0 - 6.0 * d) / 9.0).max(0.0);
    let hi = (1.0 - d).min(1.0 - 4.0 * d / 3.0);
    (lo <= hi).then_some((lo, hi))
}

/// Feasible `D` interval for fixed `α`, or `None` when empty.
pub fn feasible_disturbance(alpha: f64) -> Option<(f64, f64)> {
    let lo = ((1.0 - alpha) / 2.0).max((5.0 - 9.0 * alpha) / 6.0).max(0.0);
    let hi = (1.0 - alpha).min(0.75 * (1.0 - alpha));
    (lo <= hi && alpha > 0.0).then_some((lo, hi))
}

/// Result of [`optimize`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum2 {
    pub alpha: f64,
    pub value: f64,
}

/// Maximizes `metric` over the feasible `α` at disturbance `D`: a `grid`-point
/// scan followed by golden-section refinement around the best grid point.
pub fn optimize(d: f64, metric: Metric2, grid: usize) -> Result<Optimum2> {
    if !(d > 0.0 && d < 0.5) {
        return Err(domain("D", d, "(0, 1/2)"));
    }
    optimize_unchecked(d, metric, grid)
}

/// [`optimize`] without the domain check, for scans that include the endpoints.
pub(crate) fn optimize_unchecked(d: f64, metric: Metric2, grid: usize) -> Result<Optimum2> {
    let (lo, hi) = feasible_alpha(d).ok_or(Error::Infeasible(d))?;
    let objective = |alpha: f64| {
        let beta = 1.0 - d - alpha;
        let gamma = alpha + 2.0 * d - 1.0;
        Coherent2Params {
            alpha,
            beta: beta.max(0.0),
            gamma: gamma.max(0.0),
        }
        .metric(metric)
    };
    let ScalarOptimum { x, value } = maximize_scalar(objective, lo, hi, grid.max(2), 1e-10);
    Ok(Optimum2 { alpha: x, value })
}

/// Incoherent reference values at the same disturbance, squared or doubled
/// to compare with a pair of qubits.
pub fn incoherent_pair_reference(d: f64, metric: Metric2) -> Result<f64> {
    let m = IncoherentAttack::from_disturbance(d)?.metrics();
    Ok(match metric {
        Metric2::Pcg => m.pg * m.pg,
        Metric2::PcgUndist => m.ps,
        Metric2::Shannon => 2.0 * m.shannon,
        Metric2::Renyi => 2.0 * m.renyi,
    })
}

/// Result of re-deriving the attack in another basis pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceCheck {
    /// Largest deviation of the recovered weights from `(α, β, β, γ)`.
    pub weight_error: f64,
    /// Largest entrywise deviation of the recovered family Grams.
    pub gram_error: f64,
    /// Largest overlap between states of different families.
    pub cross_overlap: f64,
}

/// Applies the realized isometry to pairs prepared in `bases` and compares
/// the resulting probe families with the z-basis ones.
pub fn basis_covariance(p: &Coherent2Params, bases: [Basis; 2]) -> Result<CovarianceCheck> {
    let r = p.build_probe_states()?;
    let probe = p.probe();
    let fams = derive_families(&r.isometry, r.probe_dim, &bases);
    let mut weight_error = 0.0_f64;
    let mut gram_error = 0.0_f64;
    for fam in &fams {
        let expect = probe.weights()[fam.pattern.count_ones() as usize];
        for w in &fam.weights {
            weight_error = weight_error.max((w - expect).abs());
        }
        gram_error = gram_error.max(fam.gram.sub(&probe.family_gram(fam.pattern)).max_abs());
    }
    Ok(CovarianceCheck {
        weight_error,
        gram_error,
        cross_overlap: max_cross_family_overlap(&fams),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hermitian_eigen, srm_outcome_probabilities, srm_success};

    #[test]
    fn params_from_disturbance() {
        let p = Coherent2Params::from_disturbance(0.0, 1.0).unwrap();
        assert_eq!((p.alpha, p.beta, p.gamma), (1.0, 0.0, 0.0));
        let p = Coherent2Params::from_disturbance(1.0 / 6.0, 25.0 / 36.0).unwrap();
        assert!((p.beta - 5.0 / 36.0).abs() < 1e-15);
        assert!((p.gamma - 1.0 / 36.0).abs() < 1e-15);
        let err = Coherent2Params::from_disturbance(0.25, 7.0 / 8.0).unwrap_err();
        assert!(matches!(err, Error::Validity(ref m) if m.contains("beta")), "{err}");
    }

    #[test]
    fn psd_violation_is_named() {
        let err = Coherent2Params::new(0.8, 0.02, 0.16).unwrap_err();
        assert!(matches!(err, Error::Validity(ref m) if m.contains("PSD")));
    }

    #[test]
    fn gram_values_no_attack() {
        let g = Coherent2Params::new(1.0, 0.0, 0.0).unwrap().gram_values();
        assert_eq!((g.a1, g.a2, g.b1), (1.0, 1.0, 0.0));
    }

    #[test]
    fn gram_values_factorized() {
        let d = 0.2;
        let f = 1.0 - d;
        let g = Coherent2Params::factorized(d).gram_values();
        assert!((g.a1 - f * (f - d)).abs() < 1e-15);
        assert!((g.a2 - (f - d).powi(2)).abs() < 1e-15);
        assert!((g.b1 - d * (f - d)).abs() < 1e-15);
    }

    #[test]
    fn psi0_spectrum() {
        let p = Coherent2Params::new(0.7, 0.1, 0.1).unwrap();
        let e = hermitian_eigen(&p.psi0_gram()).unwrap();
        let expect = [0.1, 0.1, 0.1, 2.5];
        for (v, x) in e.values.iter().zip(expect) {
            assert!((v - x).abs() < 1e-12);
        }
    }

    #[test]
    fn probs_no_attack() {
        let p = Coherent2Params::new(1.0, 0.0, 0.0).unwrap().probs();
        assert!((p.p02 - 0.25).abs() < 1e-15);
        assert!((p.p01 - 0.5).abs() < 1e-15);
        assert!((p.p00 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn p12_half_when_gamma_vanishes() {
        let p = Coherent2Params::from_disturbance(0.1, 0.8).unwrap();
        assert_eq!(p.gamma, 0.0);
        assert!((p.probs().p12 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn probs_match_srm_oracle() {
        let p = Coherent2Params::new(0.7, 0.1, 0.1).unwrap();
        let pr = p.probs();
        let table = srm_outcome_probabilities(&p.psi0_gram()).unwrap();
        assert!((table[0][0] - pr.p02).abs() < 1e-12);
        assert!((table[1][0] + table[2][0] - pr.p01).abs() < 1e-12);
        assert!((table[3][0] - pr.p00).abs() < 1e-12);
        // ψ1 family splits into two orthogonal blocks
        let s1 = srm_success(&p.psi1_gram(0)).unwrap();
        assert!(s1.iter().all(|x| (x - pr.p12).abs() < 1e-12));
    }

    #[test]
    fn factorized_point_reduces_to_incoherent() {
        let d = 1.0 / 6.0;
        let m = Coherent2Params::factorized(d).metrics();
        let i = IncoherentAttack::from_disturbance(d).unwrap().metrics();
        assert!((m.pcg - (5.0_f64 / 6.0).powi(2)).abs() < 1e-9);
        assert!((m.pcg_undist - 0.8).abs() < 1e-9);
        assert!((m.shannon - 2.0 * i.shannon).abs() < 1e-9);
        assert!((m.renyi - 2.0 * i.renyi).abs() < 1e-9);
    }

    #[test]
    fn printed_undisturbed_formula_misses_factorized_point() {
        let p = Coherent2Params::factorized(0.1);
        let ps = IncoherentAttack::from_disturbance(0.1).unwrap().metrics().ps;
        assert!((p.printed_pcg_undist() - ps).abs() > 1e-2);
    }

    #[test]
    fn gamma_contributes_two_bits() {
        let p = Coherent2Params::new(0.6, 0.15, 0.1).unwrap();
        let pr = p.probs();
        let psi0 = [pr.p02, 0.5 * pr.p01, 0.5 * pr.p01, pr.p00];
        let psi1 = [pr.p12, pr.p11, 0.0, 0.0];
        let rest = p.alpha * shannon_information(2.0, &psi0) + 2.0 * p.beta * shannon_information(2.0, &psi1);
        assert!((p.metrics().shannon - rest - 2.0 * p.gamma).abs() < 1e-15);
    }

    #[test]
    fn feasible_windows() {
        let (lo, hi) = feasible_disturbance(7.0 / 8.0).unwrap();
        assert!((lo - 1.0 / 16.0).abs() < 1e-15 && (hi - 3.0 / 32.0).abs() < 1e-15);
        let (lo, hi) = feasible_alpha(0.1).unwrap();
        assert!((lo - 0.8).abs() < 1e-15 && (hi - (1.0 - 0.4 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn covariance_in_mixed_bases() {
        let p = Coherent2Params::new(0.6, 0.15, 0.1).unwrap();
        for bases in [[Basis::X, Basis::X], [Basis::Y, Basis::Z], [Basis::X, Basis::Y]] {
            let c = basis_covariance(&p, bases).unwrap();
            assert!(c.weight_error < 1e-9 && c.gram_error < 1e-9 && c.cross_overlap < 1e-9);
        }
    }

    #[test]
    fn undisturbed_optimum_is_factorized() {
        let o = optimize(0.1, Metric2::PcgUndist, DEFAULT_GRID).unwrap();
        assert!((o.alpha - 0.81).abs() < 1e-4);
        let ps = IncoherentAttack::from_disturbance(0.1).unwrap().metrics().ps;
        assert!((o.value - ps).abs() < 1e-9);
    }
}
