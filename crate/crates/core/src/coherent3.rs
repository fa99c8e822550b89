//! Three-qubit coherent attacks.
//!
//! Weights `α, β, γ, δ` are the probabilities that none, one given, two given
//! or all three qubits arrive disturbed: `F = α + 2β + γ`, `D = β + 2γ + δ`,
//! `α + 3β + 3γ + δ = 1`.

use serde::Serialize;

use crate::coherent2::abc;
use crate::error::{domain, Error, Result};
use crate::incoherent::IncoherentAttack;
use crate::numerics::PSD_TOL;
use crate::optimize::{maximize_planar, PlanarOptimum};
use crate::probe::{ProbeRealization, SymmetricProbe};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coherent3Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramSet3 {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
}

/// `P_ij`: Eve guesses `j` of three bits when `i` arrived disturbed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probs3 {
    pub p03: f64,
    pub p02: f64,
    pub p01: f64,
    pub p00: f64,
    pub p13: f64,
    pub p12: f64,
    pub p11: f64,
    pub p23: f64,
    pub p22: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics3 {
    /// Probability of guessing all three bits.
    pub pcg: f64,
    /// Probability of guessing a bit Bob received undisturbed.
    pub undisturbed_accuracy: f64,
    /// An alternative undisturbed-bit closed form; it exceeds 1 at
    /// the factorized point and is reported for comparison only.
    pub printed_undist: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Metric3 {
    Pcg,
    Undist,
    Xor,
}

pub const DEFAULT_GRID: usize = 400;
pub const REFINE_TOL: f64 = 1e-8;

fn clamp_sqrt(x: f64) -> f64 {
    x.max(0.0).sqrt()
}

impl Coherent3Params {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let p = Self {
            alpha,
            beta,
            gamma,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    /// `γ = 1 − D − α − 2β`, `δ = 3D − 2 + 2α + 3β`.
    pub fn from_disturbance(d: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&d) {
            return Err(domain("D", d, "[0, 1)"));
        }
        Self::new(
            alpha,
            beta,
            1.0 - d - alpha - 2.0 * beta,
            3.0 * d - 2.0 + 2.0 * alpha + 3.0 * beta,
        )
    }

    /// Three independent incoherent attacks: `(F³, F²D, FD², D³)`.
    pub fn factorized(d: f64) -> Self {
        let f = 1.0 - d;
        Self {
            alpha: f * f * f,
            beta: f * f * d,
            gamma: f * d * d,
            delta: d * d * d,
        }
    }

    fn probe(&self) -> SymmetricProbe {
        SymmetricProbe::new(vec![self.alpha, self.beta, self.gamma, self.delta])
    }

    /// Eigenvalues of the undisturbed-family Gram by number of sign flips in
    /// the character: `8α − 12β + 6γ − δ`, `4β − 4γ + δ`, `2γ − δ`, `δ`.
    /// The disturbed families share the last three.
    pub fn spectrum(&self) -> [f64; 4] {
        let Self {
            alpha: a,
            beta: b,
            gamma: g,
            delta: d,
        } = *self;
        [8.0 * a - 12.0 * b + 6.0 * g - d, 4.0 * b - 4.0 * g + d, 2.0 * g - d, d]
    }

    /// Cheap feasibility test used inside the optimizer.
    pub fn is_feasible(&self) -> bool {
        let w = [self.alpha, self.beta, self.gamma, self.delta];
        w.iter().all(|&x| x >= -PSD_TOL) && self.alpha > 0.0 && self.spectrum().iter().all(|&x| x >= -PSD_TOL)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !v.is_finite() || v < -PSD_TOL {
                return Err(Error::Validity(format!("{name} = {v} is negative")));
            }
        }
        let total = self.alpha + 3.0 * self.beta + 3.0 * self.gamma + self.delta;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validity(format!(
                "alpha + 3 beta + 3 gamma + delta = {total} != 1"
            )));
        }
        if self.alpha <= 0.0 {
            return Err(Error::Validity("alpha must be positive".into()));
        }
        let min = self.probe().min_family_eigenvalue()?;
        if min < -PSD_TOL {
            return Err(Error::Validity(format!(
                "probe family gram not PSD (min eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    pub fn fidelity(&self) -> f64 {
        self.alpha + 2.0 * self.beta + self.gamma
    }

    pub fn disturbance(&self) -> f64 {
        self.beta + 2.0 * self.gamma + self.delta
    }

    pub fn gram_values(&self) -> GramSet3 {
        let Self {
            alpha: a,
            beta: b,
            gamma: g,
            delta: d,
        } = *self;
        GramSet3 {
            a1: a - b,
            a2: a - 2.0 * b + g,
            a3: a - 3.0 * b + 3.0 * g - d,
            b1: b - g,
            b2: b - 2.0 * g + d,
            c1: g - d,
        }
    }

    /// Weighted Gram of the family with disturbance pattern `pattern`
    /// (bit 2 = first qubit), indexed by Alice's bits.
    pub fn family_gram(&self, pattern: usize) -> crate::numerics::ComplexMatrix {
        self.probe().family_gram(pattern)
    }

    pub fn probs(&self) -> Probs3 {
        let g = self.gram_values();
        let a = self.alpha;
        let r0 = clamp_sqrt(a + g.a3 + 3.0 * (g.a1 + g.a2));
        let r1 = clamp_sqrt(a - g.a3 + g.a1 - g.a2);
        let r3 = clamp_sqrt(a - g.a3 - 3.0 * (g.a1 - g.a2));
        let r2 = clamp_sqrt(a + g.a3 - g.a1 - g.a2);
        let p03 = (r0 + 3.0 * r1 + r3 + 3.0 * r2).powi(2) / (64.0 * a);
        let p02 = 3.0 * (r0 + r1 - r3 - r2).powi(2) / (64.0 * a);
        let p01 = 3.0 * (r0 - r1 + r3 - r2).powi(2) / (64.0 * a);
        let p00 = (r0 - 3.0 * r1 - r3 + 3.0 * r2).powi(2) / (64.0 * a);

        let (p13, p12, p11) = if self.beta > 0.0 {
            let (x, y, z) = abc(self.beta, g.b1, g.b2);
            (x * x, 2.0 * y * y, z * z)
        } else {
            (1.0, 0.0, 0.0)
        };
        let p23 = if self.gamma > 0.0 {
            0.5 * (1.0 + clamp_sqrt(1.0 - (g.c1 / self.gamma).powi(2)))
        } else {
            1.0
        };
        Probs3 {
            p03,
            p02,
            p01,
            p00,
            p13,
            p12,
            p11,
            p23,
            p22: 1.0 - p23,
        }
    }

    pub fn metrics(&self) -> Metrics3 {
        let p = self.probs();
        let Self {
            alpha: a,
            beta: b,
            gamma: g,
            delta: d,
        } = *self;
        let undisturbed = 3.0 * (a + 2.0 * b + g);
        Metrics3 {
            pcg: a * p.p03 + 3.0 * b * p.p13 + 3.0 * g * p.p23 + d,
            undisturbed_accuracy: (a * (3.0 * p.p03 + 2.0 * p.p02 + p.p01)
                + 3.0 * b * (2.0 * p.p13 + p.p12)
                + 3.0 * g * p.p23)
                / undisturbed,
            printed_undist: (a * (p.p03 + 2.0 * p.p02 + p.p01) + 2.0 * b * (p.p13 + p.p12) + g * p.p23)
                / (a + 2.0 * b + g),
        }
    }

    /// Probability that Eve guesses the xor of qubits 1 and 2 given both arrived undisturbed.
    pub fn p_xor(&self) -> f64 {
        let p = self.probs();
        (self.alpha * (p.p03 + (p.p02 + p.p01) / 3.0 + p.p00) + self.beta * (p.p13 + p.p11)) / (self.alpha + self.beta)
    }

    /// Expected fraction of all bits that Eve guesses.
    pub fn per_bit_accuracy(&self) -> f64 {
        let p = self.probs();
        (self.alpha * (3.0 * p.p03 + 2.0 * p.p02 + p.p01)
            + 3.0 * self.beta * (1.0 + 2.0 * p.p13 + p.p12)
            + 3.0 * self.gamma * (2.0 + p.p23)
            + 3.0 * self.delta)
            / 3.0
    }

    pub fn metric(&self, which: Metric3) -> f64 {
        match which {
            Metric3::Pcg => self.metrics().pcg,
            Metric3::Undist => self.metrics().undisturbed_accuracy,
            Metric3::Xor => self.p_xor(),
        }
    }

    pub fn build_probe_states(&self) -> Result<ProbeRealization> {
        self.validate()?;
        self.probe().realize()
    }
}

/// `P(G)³` and `p(s)` at the same disturbance, for comparison.
pub fn incoherent_triple_reference(d: f64) -> Result<(f64, f64)> {
    let m = IncoherentAttack::from_disturbance(d)?.metrics();
    Ok((m.pg.powi(3), m.ps))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimum3 {
    pub alpha: f64,
    pub beta: f64,
    pub value: f64,
}

/// Maximizes `metric` over the feasible `(α, β)` polygon at disturbance `D`
/// (a `grid × grid` scan of its bounding box, then zoom refinement to 1e-8).
pub fn optimize(d: f64, metric: Metric3, grid: usize) -> Result<Optimum3> {
    if !(d > 0.0 && d < 0.5) {
        return Err(domain("D", d, "(0, 1/2)"));
    }
    optimize_unchecked(d, metric, grid)
}

pub(crate) fn optimize_unchecked(d: f64, metric: Metric3, grid: usize) -> Result<Optimum3> {
    let params = |alpha: f64, beta: f64| Coherent3Params {
        alpha,
        beta,
        gamma: 1.0 - d - alpha - 2.0 * beta,
        delta: 3.0 * d - 2.0 + 2.0 * alpha + 3.0 * beta,
    };
    let (ax, bx) = polygon_box(d).ok_or(Error::Infeasible(d))?;
    let PlanarOptimum { x, y, value } = maximize_planar(
        |a, b| params(a, b).metric(metric),
        |a, b| params(a, b).is_feasible(),
        ax,
        bx,
        grid.max(2),
        21,
        REFINE_TOL,
    )
    .ok_or(Error::Infeasible(d))?;
    Ok(Optimum3 {
        alpha: x,
        beta: y,
        value,
    })
}

/// Bounding box of the feasible `(α, β)` polygon at disturbance `D`.
///
/// Every constraint is linear in `(α, β)`; the polygon's vertices are
/// feasible pairwise intersections of the constraint lines.
pub fn polygon_box(d: f64) -> Option<((f64, f64), (f64, f64))> {
    // Each constraint: c0 + ca·α + cb·β ≥ 0
    let lines: [(f64, f64, f64); 7] = [
        (0.0, 1.0, 0.0),           // α
        (0.0, 0.0, 1.0),           // β
        (1.0 - d, -1.0, -2.0),     // γ
        (3.0 * d - 2.0, 2.0, 3.0), // δ
        // 8α − 12β + 6γ − δ (the α terms cancel)
        (6.0 * (1.0 - d) - (3.0 * d - 2.0), 0.0, -27.0),
        // 4β − 4γ + δ
        (-4.0 * (1.0 - d) + 3.0 * d - 2.0, 6.0, 15.0),
        // 2γ − δ
        (2.0 * (1.0 - d) - (3.0 * d - 2.0), -4.0, -7.0),
    ];
    let ok = |a: f64, b: f64| lines.iter().all(|&(c, ca, cb)| c + ca * a + cb * b >= -1e-12);
    let mut pts = Vec::new();
    for (i, l1) in lines.iter().enumerate() {
        for l2 in &lines[i + 1..] {
            let det = l1.1 * l2.2 - l1.2 * l2.1;
            if det.abs() < 1e-14 {
                continue;
            }
            let a = (-l1.0 * l2.2 + l1.2 * l2.0) / det;
            let b = (-l1.1 * l2.0 + l1.0 * l2.1) / det;
            if ok(a, b) {
                pts.push((a, b));
            }
        }
    }
    if pts.is_empty() {
        return None;
    }
    let fold = |f: fn(&(f64, f64)) -> f64| {
        pts.iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    };
    Some((fold(|p| p.0), fold(|p| p.1)))
}
