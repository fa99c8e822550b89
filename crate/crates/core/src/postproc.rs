//! Guessing the xor of two sifted bits, as used by parity-based error
//! correction and privacy amplification.

use rayon::prelude::*;
use serde::Serialize;

use crate::coherent2::{feasible_alpha, Coherent2Params};
use crate::coherent3::{self, Coherent3Params, Metric3};
use crate::error::{domain, Error, Result};
use crate::incoherent::IncoherentAttack;
use crate::optimize::maximize_scalar;

const RADICAND_TOL: f64 = 1e-12;

fn checked_d(d: f64, lo_open: bool) -> Result<f64> {
    let ok = if lo_open {
        d > 0.0 && d <= 0.5
    } else {
        (0.0..=0.5).contains(&d)
    };
    if ok {
        Ok(d)
    } else {
        Err(domain("D", d, if lo_open { "(0, 1/2]" } else { "[0, 1/2]" }))
    }
}

/// Two independent probes, each measured separately: `ps² + pf²`.
pub fn p_xor1(d: f64) -> Result<f64> {
    checked_d(d, false)?;
    let closed = 1.0 - 0.5 * ((1.0 - 2.0 * d) / (1.0 - d)).powi(2);
    let ps = IncoherentAttack::from_disturbance(d)?.metrics().ps;
    let product = ps * ps + (1.0 - ps) * (1.0 - ps);
    if (closed - product).abs() > 1e-12 {
        return Err(Error::Contract(format!(
            "xor forms disagree at D = {d}: {closed} vs {product}"
        )));
    }
    Ok(closed)
}

fn radicand(x: f64, what: &str) -> Result<f64> {
    if x < -RADICAND_TOL {
        return Err(Error::Validity(format!("{what} radicand {x} is negative")));
    }
    Ok(x.max(0.0).sqrt())
}

/// One probe on both qubits: `P00 + P02` of the pair attack at `(α, D)`.
pub fn p_xor2(alpha: f64, d: f64) -> Result<f64> {
    Coherent2Params::from_disturbance(d, alpha)?;
    let s1 = radicand(9.0 * alpha - 5.0 + 6.0 * d, "first")?;
    let s2 = radicand(alpha - 1.0 + 2.0 * d, "second")?;
    Ok((3.0 - alpha - 4.0 * d + s1 * s2) / (4.0 * alpha))
}

/// Closed form without the validity check, for scans over known-feasible `α`.
fn p_xor2_raw(alpha: f64, d: f64) -> f64 {
    let s1 = (9.0 * alpha - 5.0 + 6.0 * d).max(0.0).sqrt();
    let s2 = (alpha - 1.0 + 2.0 * d).max(0.0).sqrt();
    (3.0 - alpha - 4.0 * d + s1 * s2) / (4.0 * alpha)
}

/// Lower end of the middle regime of the piecewise optimum, `(5 − √13)/12`.
pub fn xor2_low_threshold() -> f64 {
    (5.0 - 13.0_f64.sqrt()) / 12.0
}

/// The piecewise optimal `α` as originally stated, before intersecting with
/// the feasible interval. Below the low threshold this is `1 − D`, which is
/// not a valid attack.
pub fn xor2_alpha_unconstrained(d: f64) -> f64 {
    if d >= 1.0 / 3.0 {
        (1.0 - d) / 2.0
    } else if d >= xor2_low_threshold() {
        (5.0 - 21.0 * d + 28.0 * d * d - 12.0 * d.powi(3)) / (4.0 - 6.0 * d)
    } else {
        1.0 - d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Xor2Optimum {
    pub alpha: f64,
    pub value: f64,
    /// The piecewise `α` before clipping into the feasible interval.
    pub alpha_unconstrained: f64,
}

/// Best pair-probe xor guess at `D`.
pub fn p_xor2_max(d: f64) -> Result<Xor2Optimum> {
    checked_d(d, true)?;
    let (lo, hi) = feasible_alpha(d).ok_or(Error::Infeasible(d))?;
    let raw = xor2_alpha_unconstrained(d);
    let alpha = raw.clamp(lo, hi);
    Ok(Xor2Optimum {
        alpha,
        value: p_xor2_raw(alpha, d),
        alpha_unconstrained: raw,
    })
}

/// Numerical maximum of `p_xor2` over the feasible `α` (grid then golden section).
pub fn p_xor2_scan(d: f64, grid: usize) -> Result<Xor2Optimum> {
    checked_d(d, true)?;
    let (lo, hi) = feasible_alpha(d).ok_or(Error::Infeasible(d))?;
    let o = maximize_scalar(|a| p_xor2_raw(a, d), lo, hi, grid.max(2), 1e-10);
    Ok(Xor2Optimum {
        alpha: o.x,
        value: o.value,
        alpha_unconstrained: o.x,
    })
}

/// One probe on three qubits, xor of the first two.
pub fn p_xor3(p: &Coherent3Params) -> Result<f64> {
    p.validate()?;
    Ok(p.p_xor())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XorCurvePoint {
    pub d: f64,
    pub pxor1: f64,
    pub pxor2_max: f64,
    pub alpha2_star: f64,
    pub pxor3_max: f64,
    pub alpha3_star: f64,
    pub beta3_star: f64,
}

pub fn xor_point(d: f64, grid3: usize) -> Result<XorCurvePoint> {
    checked_d(d, true)?;
    let x2 = p_xor2_max(d)?;
    let x3 = coherent3::optimize_unchecked(d, Metric3::Xor, grid3)?;
    Ok(XorCurvePoint {
        d,
        pxor1: p_xor1(d)?,
        pxor2_max: x2.value,
        alpha2_star: x2.alpha,
        pxor3_max: x3.value,
        alpha3_star: x3.alpha,
        beta3_star: x3.beta,
    })
}

/// The three xor curves on `grid`, in input order.
pub fn xor_curves(grid: &[f64], grid3: usize) -> Result<Vec<XorCurvePoint>> {
    grid.par_iter().map(|&d| xor_point(d, grid3)).collect()
}
