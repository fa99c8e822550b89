//! Invariant suites run by `sixstate verify`.

use serde::Serialize;

use crate::coherent2::{self, feasible_disturbance, Coherent2Params, Metric2};
use crate::coherent3::{self, Coherent3Params, Metric3};
use crate::error::Result;
use crate::incoherent::{cloner_point, IncoherentAttack};
use crate::numerics::{partial_transpose_min_eig, srm_outcome_probabilities, srm_success, ComplexMatrix};
use crate::postproc;
use crate::qubit::Basis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Incoherent,
    Coh2,
    Coh3,
    Xor,
    Qcm,
    Ppt,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub invariant: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub pass: bool,
    pub checks: Vec<Check>,
}

struct Collector {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Collector {
    fn new(suite: &'static str) -> Self {
        Self {
            suite,
            checks: Vec::new(),
        }
    }

    /// `|value − target| ≤ tol`
    fn close(&mut self, invariant: impl Into<String>, value: f64, target: f64, tol: f64) {
        let pass = (value - target).abs() <= tol;
        self.push(invariant, value, tol, pass);
    }

    fn push(&mut self, invariant: impl Into<String>, value: f64, tolerance: f64, pass: bool) {
        self.checks.push(Check {
            suite: self.suite,
            invariant: invariant.into(),
            value,
            tolerance,
            pass,
        });
    }
}

/// Minimum eigenvalue of the partial transpose of the Alice–Bob state at disturbance `d`.
pub fn ppt_min_eig(d: f64) -> Result<f64> {
    partial_transpose_min_eig(&IncoherentAttack::from_disturbance(d)?.alice_bob_state())
}

/// Disturbance where the partial transpose stops having a negative eigenvalue.
pub fn ppt_threshold() -> Result<f64> {
    let (mut lo, mut hi) = (0.2, 0.4);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if ppt_min_eig(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest relative gain `P^c(G) / P(G)² − 1` for fixed `α` over `steps`
/// disturbances in the feasible window, with the disturbance where it occurs.
pub fn fixed_alpha_gain(alpha: f64, steps: usize) -> Result<(f64, f64)> {
    let (lo, hi) = feasible_disturbance(alpha).ok_or(crate::Error::Infeasible(alpha))?;
    let mut best = (lo, f64::NEG_INFINITY);
    for d in crate::optimize::linspace(lo, hi, steps) {
        let Ok(p) = Coherent2Params::from_disturbance(d, alpha) else {
            continue;
        };
        let pg = IncoherentAttack::from_disturbance(d)?.metrics().pg;
        let gain = p.metrics().pcg / (pg * pg) - 1.0;
        if gain > best.1 {
            best = (d, gain);
        }
    }
    Ok(best)
}

fn incoherent(c: &mut Collector) -> Result<()> {
    let m = IncoherentAttack::new(std::f64::consts::PI)?.metrics();
    c.close("F at a = pi equals 1/3", m.fidelity, 1.0 / 3.0, 1e-12);
    for d in [0.05, 0.1, 0.25, 0.5] {
        let att = IncoherentAttack::from_disturbance(d)?;
        let m = att.metrics();
        c.close(format!("D({d}) round trip"), m.disturbance, d, 1e-12);
        let ca = att.angle().cos();
        let g = ComplexMatrix::from_real(2, 2, &[1.0, ca, ca, 1.0]);
        c.close(format!("ps({d}) equals SRM success"), m.ps, srm_success(&g)?[0], 1e-12);
        c.close(
            format!("P(G)({d}) = F ps + D"),
            m.pg,
            m.fidelity * m.ps + m.disturbance,
            1e-12,
        );
        let v = att.isometry();
        c.close(
            format!("isometry at D = {d}"),
            v.column_gram().sub(&ComplexMatrix::identity(2)).max_abs(),
            0.0,
            1e-10,
        );
        for b in Basis::ALL {
            c.close(
                format!("fidelity in {b:?} basis at D = {d}"),
                att.bob_fidelity(b),
                m.fidelity,
                1e-9,
            );
        }
    }
    Ok(())
}

fn qcm(c: &mut Collector) -> Result<()> {
    let (att, r) = cloner_point();
    c.close("cloner F = 5/6", r.fidelity, 5.0 / 6.0, 1e-12);
    c.close("cloner D = 1/6", r.disturbance, 1.0 / 6.0, 1e-12);
    c.close("cos a = 4/5", att.angle().cos(), 0.8, 1e-12);
    c.close("undisturbed probe overlap 4/5", r.undisturbed_overlap, 0.8, 1e-12);
    c.close("disturbed probe overlap 0", r.disturbed_overlap, 0.0, 1e-12);
    c.close("cloner P(G) = 5/6", r.pg, 5.0 / 6.0, 1e-12);
    c.push("cloner reconstruction", r.passed as u8 as f64, 0.0, r.passed);
    Ok(())
}

fn coh2(c: &mut Collector) -> Result<()> {
    for d in [0.05, 0.1, 1.0 / 6.0, 0.25] {
        let m = IncoherentAttack::from_disturbance(d)?.metrics();
        let p = Coherent2Params::factorized(d).metrics();
        c.close(
            format!("factorized PcG = P(G)^2 at D = {d:.4}"),
            p.pcg,
            m.pg * m.pg,
            1e-9,
        );
        c.close(
            format!("factorized ISc = 2 IS at D = {d:.4}"),
            p.shannon,
            2.0 * m.shannon,
            1e-9,
        );
        c.close(
            format!("factorized IRc = 2 IR at D = {d:.4}"),
            p.renyi,
            2.0 * m.renyi,
            1e-9,
        );
        c.close(
            format!("factorized PcG|undist = ps at D = {d:.4}"),
            p.pcg_undist,
            m.ps,
            1e-9,
        );
    }
    for (d, alpha) in [(0.1, 0.85), (0.2, 0.7), (0.3, 0.5), (0.4, 0.3)] {
        let p = Coherent2Params::from_disturbance(d, alpha)?;
        let pr = p.probs();
        let t = srm_outcome_probabilities(&p.psi0_gram())?;
        c.close(format!("P02 vs SRM at ({alpha}, {d})"), pr.p02, t[0][0], 1e-9);
        c.close(format!("P00 vs SRM at ({alpha}, {d})"), pr.p00, t[3][0], 1e-9);
        let s1 = srm_success(&p.psi1_gram(0))?;
        c.close(format!("P12 vs SRM at ({alpha}, {d})"), pr.p12, s1[0], 1e-9);
    }
    let (_, gain) = fixed_alpha_gain(0.875, 401)?;
    c.push(
        "alpha = 7/8 relative PcG gain in [1%, 2.5%]",
        gain,
        0.0,
        (0.01..=0.025).contains(&gain),
    );
    for d in [0.05, 0.15, 0.25] {
        let best = coherent2::optimize(d, Metric2::Shannon, coherent2::DEFAULT_GRID)?.value;
        let reference = coherent2::incoherent_pair_reference(d, Metric2::Shannon)?;
        c.push(
            format!("max ISc <= 2 IS at D = {d}"),
            best - reference,
            1e-6,
            best <= reference + 1e-6,
        );
    }
    for d in [0.05, 0.1, 0.2] {
        let o = coherent2::optimize(d, Metric2::PcgUndist, coherent2::DEFAULT_GRID)?;
        let ps = IncoherentAttack::from_disturbance(d)?.metrics().ps;
        c.close(
            format!("undisturbed optimum alpha = F^2 at D = {d}"),
            o.alpha,
            (1.0 - d).powi(2),
            1e-3,
        );
        c.close(format!("undisturbed optimum value = ps at D = {d}"), o.value, ps, 1e-6);
    }
    Ok(())
}

fn coh3(c: &mut Collector) -> Result<()> {
    for d in [0.05, 0.1, 1.0 / 6.0, 0.25] {
        let ps = IncoherentAttack::from_disturbance(d)?.metrics().ps;
        let p = Coherent3Params::factorized(d);
        c.close(
            format!("factorized P03 = ps^3 at D = {d:.4}"),
            p.probs().p03,
            ps.powi(3),
            1e-9,
        );
        c.close(
            format!("factorized undisturbed accuracy = ps at D = {d:.4}"),
            p.metrics().undisturbed_accuracy,
            ps,
            1e-9,
        );
    }
    let p = Coherent3Params::from_disturbance(0.15, 0.66, 0.085)?;
    let pr = p.probs();
    let t = srm_outcome_probabilities(&p.family_gram(0))?;
    c.close("P03 vs SRM", pr.p03, t[0][0], 1e-9);
    c.close("P00 vs SRM", pr.p00, t[7][0], 1e-9);
    c.close("P13 vs SRM", pr.p13, srm_success(&p.family_gram(4))?[0], 1e-9);
    c.close("P23 vs SRM", pr.p23, srm_success(&p.family_gram(6))?[0], 1e-9);
    let d = 0.07;
    let o = coherent3::optimize(d, Metric3::Pcg, coherent3::DEFAULT_GRID)?;
    let pg = IncoherentAttack::from_disturbance(d)?.metrics().pg;
    let ratio = o.value / pg.powi(3);
    c.push(
        "max PcG / P(G)^3 at D = 0.07 in [1.05, 1.07]",
        ratio,
        0.0,
        (1.05..=1.07).contains(&ratio),
    );
    Ok(())
}

fn xor(c: &mut Collector) -> Result<()> {
    for d in [0.35, 0.45] {
        c.close(
            format!("p_xor2((1-D)/2, {d}) = 1"),
            postproc::p_xor2((1.0 - d) / 2.0, d)?,
            1.0,
            1e-10,
        );
    }
    let dc = (3.0 - 3.0_f64.sqrt()) / 6.0;
    c.close(
        "p_xor2_max meets p_xor1 at D = (3 - sqrt 3)/6",
        postproc::p_xor2_max(dc)?.value,
        postproc::p_xor1(dc)?,
        1e-6,
    );
    for pt in postproc::xor_curves(&[0.1, 0.2, 0.3, 0.4], 120)? {
        c.push(
            format!("p_xor1 <= p_xor3_max at D = {}", pt.d),
            pt.pxor3_max - pt.pxor1,
            1e-6,
            pt.pxor1 <= pt.pxor3_max + 1e-6,
        );
        c.push(
            format!("p_xor3_max <= p_xor2_max at D = {}", pt.d),
            pt.pxor2_max - pt.pxor3_max,
            1e-6,
            pt.pxor3_max <= pt.pxor2_max + 1e-6,
        );
    }
    for d in [0.05, 0.15, 0.25, 0.35, 0.45] {
        let a = postproc::p_xor2_max(d)?.value;
        let s = postproc::p_xor2_scan(d, 2001)?.value;
        c.push(
            format!("analytic xor optimum beats scan at D = {d}"),
            a - s,
            1e-6,
            a >= s - 1e-6,
        );
    }
    Ok(())
}

fn ppt(c: &mut Collector) -> Result<()> {
    let t = 1.0 / 3.0;
    let below = ppt_min_eig(t - 1e-6)?;
    let above = ppt_min_eig(t + 1e-6)?;
    c.push("PT eigenvalue negative at D = 1/3 - 1e-6", below, 0.0, below < 0.0);
    c.push("PT eigenvalue non-negative at D = 1/3 + 1e-6", above, 0.0, above >= 0.0);
    let e = ppt_min_eig(0.2)?;
    c.push("PT eigenvalue < -1e-3 at D = 0.2", e, 1e-3, e < -1e-3);
    let e = ppt_min_eig(0.4)?;
    c.push("PT eigenvalue > 1e-3 at D = 0.4", e, 1e-3, e > 1e-3);
    c.close("entanglement threshold", ppt_threshold()?, t, 1e-6);
    Ok(())
}

pub fn run(suite: Suite) -> Result<Report> {
    type Part = fn(&mut Collector) -> Result<()>;
    let parts: &[(&'static str, Part)] = &[
        ("incoherent", incoherent),
        ("qcm", qcm),
        ("coh2", coh2),
        ("coh3", coh3),
        ("xor", xor),
        ("ppt", ppt),
    ];
    let selected = match suite {
        Suite::All => None,
        Suite::Incoherent => Some("incoherent"),
        Suite::Coh2 => Some("coh2"),
        Suite::Coh3 => Some("coh3"),
        Suite::Xor => Some("xor"),
        Suite::Qcm => Some("qcm"),
        Suite::Ppt => Some("ppt"),
    };
    let mut checks = Vec::new();
    for (name, f) in parts {
        if selected.is_some_and(|s| s != *name) {
            continue;
        }
        let mut c = Collector::new(name);
        f(&mut c)?;
        checks.extend(c.checks);
    }
    Ok(Report {
        suite,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
