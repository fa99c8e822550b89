//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use sixstate::cli::{scan, scan_csv, Format, ScanArgs, ScanMetric, ScanStrategy};
use sixstate::coherent2::{self, Coherent2Params, Metric2};
use sixstate::coherent3::{self, Coherent3Params, Metric3};
use sixstate::incoherent::{cloner_point, IncoherentAttack};
use sixstate::numerics::ComplexMatrix;
use sixstate::postproc;
use sixstate::qubit::Basis;
use sixstate::sim::{run_protocol, run_xor_protocol, Estimate, Pairing, SimConfig, Strategy};
use sixstate::verify::{ppt_min_eig, ppt_threshold};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn budget(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn pg(d: f64) -> f64 {
    IncoherentAttack::from_disturbance(d).unwrap().metrics().pg
}

fn c1_cloner() -> Outcome {
    let t = Instant::now();
    let m = IncoherentAttack::new(0.8_f64.acos())
        .map_err(|e| e.to_string())?
        .metrics();
    for (name, v, want) in [
        ("F", m.fidelity, 5.0 / 6.0),
        ("D", m.disturbance, 1.0 / 6.0),
        ("P(G)", m.pg, 5.0 / 6.0),
    ] {
        ensure((v - want).abs() < 1e-12, || format!("{name} = {v}"))?;
    }
    let (_, r) = cloner_point();
    ensure(r.passed, || format!("cloner report failed: {r:?}"))?;
    ensure(
        (r.undisturbed_overlap - 0.8).abs() < 1e-12 && r.disturbed_overlap.abs() < 1e-12,
        || format!("overlaps {} / {}", r.undisturbed_overlap, r.disturbed_overlap),
    )?;
    budget(t, Duration::from_secs(1))?;
    Ok(format!("F = {:.15}, P(G) = {:.15}", m.fidelity, m.pg))
}

fn c2_isometry_covariance() -> Outcome {
    let t = Instant::now();
    let mut r = rng(20);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let att = IncoherentAttack::new(r.random_range(0.0..std::f64::consts::PI)).unwrap();
        let v = att.isometry();
        let e = v.column_gram().sub(&ComplexMatrix::identity(2)).max_abs();
        ensure(e < 1e-10, || format!("incoherent V†V error {e}"))?;
        for b in Basis::ALL {
            let e = (att.bob_fidelity(b) - att.fidelity()).abs();
            worst = worst.max(e);
            ensure(e < 1e-9, || format!("fidelity in {b:?} off by {e}"))?;
        }
    }
    for _ in 0..100 {
        let p = random_coh2(&mut r);
        let real = p.build_probe_states().map_err(|e| e.to_string())?;
        let e = real.isometry.column_gram().sub(&ComplexMatrix::identity(4)).max_abs();
        ensure(e < 1e-10, || format!("pair V†V error {e}"))?;
        for b0 in Basis::ALL {
            for b1 in Basis::ALL {
                let c = coherent2::basis_covariance(&p, [b0, b1]).map_err(|e| e.to_string())?;
                let e = c.weight_error.max(c.gram_error).max(c.cross_overlap);
                worst = worst.max(e);
                ensure(e < 1e-9, || format!("{p:?} in ({b0:?}, {b1:?}): {c:?}"))?;
            }
        }
    }
    budget(t, Duration::from_secs(10))?;
    Ok(format!("worst basis deviation {worst:.2e}"))
}

fn c3_oracle() -> Outcome {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut r = rng(30);
    for _ in 0..1000 {
        let p = random_coh2(&mut r);
        let pr = p.probs();
        let psi0 = srm_by_errors(&p.psi0_gram(), 0);
        let mut pairs = vec![(pr.p02, psi0[0]), (pr.p01, psi0[1]), (pr.p00, psi0[2])];
        if p.beta > 1e-9 {
            let psi1 = srm_by_errors(&p.psi1_gram(0), 0b10);
            pairs.extend([(pr.p12, psi1[0]), (pr.p11, psi1[1])]);
        }
        for (a, b) in pairs {
            worst = worst.max((a - b).abs());
            ensure((a - b).abs() < 1e-9, || format!("{p:?}: {a} vs {b}"))?;
        }
    }
    for _ in 0..1000 {
        let p = random_coh3(&mut r);
        let pr = p.probs();
        let psi0 = srm_by_errors(&p.family_gram(0), 0);
        let mut pairs = vec![
            (pr.p03, psi0[0]),
            (pr.p02, psi0[1]),
            (pr.p01, psi0[2]),
            (pr.p00, psi0[3]),
        ];
        if p.beta > 1e-9 {
            let psi1 = srm_by_errors(&p.family_gram(0b100), 0b100);
            pairs.extend([(pr.p13, psi1[0]), (pr.p12, psi1[1]), (pr.p11, psi1[2])]);
        }
        if p.gamma > 1e-9 {
            let psi2 = srm_by_errors(&p.family_gram(0b110), 0b110);
            pairs.extend([(pr.p23, psi2[0]), (pr.p22, psi2[1])]);
        }
        for (a, b) in pairs {
            worst = worst.max((a - b).abs());
            ensure((a - b).abs() < 1e-9, || format!("{p:?}: {a} vs {b}"))?;
        }
    }
    budget(t, Duration::from_secs(20))?;
    Ok(format!("2000 parameter sets, worst deviation {worst:.2e}"))
}

fn c4_factorized() -> Outcome {
    for d in [0.05, 0.10, 1.0 / 6.0, 0.25] {
        let m = IncoherentAttack::from_disturbance(d).unwrap().metrics();
        let c = Coherent2Params::factorized(d).metrics();
        for (name, v, want) in [
            ("PcG", c.pcg, m.pg * m.pg),
            ("ISc", c.shannon, 2.0 * m.shannon),
            ("IRc", c.renyi, 2.0 * m.renyi),
            ("PcG|undist", c.pcg_undist, m.ps),
        ] {
            ensure((v - want).abs() < 1e-9, || format!("{name} at D = {d}: {v} vs {want}"))?;
        }
        let p3 = Coherent3Params::factorized(d);
        let (p03, u) = (p3.probs().p03, p3.metrics().undisturbed_accuracy);
        ensure((p03 - m.ps.powi(3)).abs() < 1e-9, || format!("P03 at D = {d}: {p03}"))?;
        ensure((u - m.ps).abs() < 1e-9, || {
            format!("undisturbed accuracy at D = {d}: {u}")
        })?;
    }
    Ok("4 disturbances, 2- and 3-qubit".into())
}

fn c5_fig1_gain() -> Outcome {
    let args = ScanArgs {
        strategy: ScanStrategy::Coh2,
        metric: ScanMetric::Pg,
        d_min: 0.0,
        d_max: 0.5,
        steps: 4001,
        alpha: Some(0.875),
        grid: 2,
        output: None,
        format: Format::Csv,
    };
    let csv = scan_csv(&scan(&args).map_err(|e| e.to_string())?);
    let mut exists = false;
    let mut best: (f64, f64) = (0.0, f64::NEG_INFINITY);
    for line in csv.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let (d, v) = (f[0], f[1]);
        let r = pg(d).powi(2);
        exists |= v > r + 1e-4;
        if v / r - 1.0 > best.1 {
            best = (d, v / r - 1.0);
        }
    }
    ensure(exists, || "no D with PcG > P(G)^2 + 1e-4".into())?;
    ensure((0.01..=0.025).contains(&best.1), || format!("relative gain {}", best.1))?;
    Ok(format!("max relative gain {:.3}% at D = {:.5}", 100.0 * best.1, best.0))
}

fn c6_no_shannon_gain() -> Outcome {
    let t = Instant::now();
    let mut margin = f64::INFINITY;
    for i in 0..30 {
        let d = 0.02 + 0.28 * i as f64 / 29.0;
        let best = coherent2::optimize(d, Metric2::Shannon, coherent2::DEFAULT_GRID).map_err(|e| e.to_string())?;
        let reference = coherent2::incoherent_pair_reference(d, Metric2::Shannon).unwrap();
        margin = margin.min(reference - best.value);
        ensure(best.value <= reference + 1e-6, || {
            format!("D = {d}: {} > {reference}", best.value)
        })?;
    }
    budget(t, Duration::from_secs(60))?;
    Ok(format!("smallest margin 2 IS - max ISc = {margin:.2e}"))
}

fn c7_renyi_gain() -> Outcome {
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..30 {
        let d = 0.02 + 0.28 * i as f64 / 29.0;
        let o = coherent2::optimize(d, Metric2::Renyi, coherent2::DEFAULT_GRID).map_err(|e| e.to_string())?;
        let gain = o.value - coherent2::incoherent_pair_reference(d, Metric2::Renyi).unwrap();
        if gain > best.2 {
            best = (d, o.alpha, gain);
        }
    }
    ensure(best.2 > 1e-4, || format!("best Renyi gain {}", best.2))?;
    Ok(format!(
        "IRc - 2 IR = {:.4} at D = {:.3}, alpha = {:.4}",
        best.2, best.0, best.1
    ))
}

fn c8_undisturbed() -> Outcome {
    let mut detail = Vec::new();
    for d in [0.05, 0.10, 0.20] {
        let o = coherent2::optimize(d, Metric2::PcgUndist, coherent2::DEFAULT_GRID).map_err(|e| e.to_string())?;
        let ps = IncoherentAttack::from_disturbance(d).unwrap().metrics().ps;
        let f2 = (1.0 - d).powi(2);
        ensure((o.alpha - f2).abs() < 1e-3, || {
            format!("D = {d}: alpha* {} vs F^2 {f2}", o.alpha)
        })?;
        ensure((o.value - ps).abs() < 1e-6, || {
            format!("D = {d}: {} vs ps {ps}", o.value)
        })?;
        detail.push(format!("{:.2e}", (o.alpha - f2).abs()));
    }
    Ok(format!("|alpha* - F^2| = {}", detail.join(", ")))
}

fn c9_three_qubit_gain() -> Outcome {
    let t = Instant::now();
    let o = coherent3::optimize(0.07, Metric3::Pcg, coherent3::DEFAULT_GRID).map_err(|e| e.to_string())?;
    let ratio = o.value / pg(0.07).powi(3);
    ensure((1.05..=1.07).contains(&ratio), || format!("ratio {ratio}"))?;
    budget(t, Duration::from_secs(120))?;
    Ok(format!(
        "ratio {ratio:.5} at alpha = {:.5}, beta = {:.5}",
        o.alpha, o.beta
    ))
}

fn c10_xor() -> Outcome {
    for d in [0.35, 0.45] {
        let v = postproc::p_xor2((1.0 - d) / 2.0, d).map_err(|e| e.to_string())?;
        ensure((v - 1.0).abs() < 1e-10, || format!("p_xor2 at D = {d}: {v}"))?;
    }
    let dc = (3.0 - 3.0_f64.sqrt()) / 6.0;
    let gap = (postproc::p_xor2_max(dc).unwrap().value - postproc::p_xor1(dc).unwrap()).abs();
    ensure(gap < 1e-6, || format!("crossing gap {gap}"))?;
    let grid: Vec<f64> = (1..=50).map(|i| 0.01 * i as f64).collect();
    for pt in postproc::xor_curves(&grid, 200).map_err(|e| e.to_string())? {
        ensure(
            pt.pxor1 <= pt.pxor3_max + 1e-6 && pt.pxor3_max <= pt.pxor2_max + 1e-6,
            || format!("{pt:?}"),
        )?;
        let s = postproc::p_xor2_scan(pt.d, 2001).unwrap().value;
        ensure(pt.pxor2_max >= s - 1e-6, || {
            format!("scan beats analytic at D = {}: {s}", pt.d)
        })?;
    }
    Ok(format!("crossing gap {gap:.2e}; ordering on 50 points"))
}

fn c11_entanglement() -> Outcome {
    let (lo, hi) = (ppt_min_eig(0.2).unwrap(), ppt_min_eig(0.4).unwrap());
    ensure(lo < -1e-3, || format!("min eig at 0.2: {lo}"))?;
    ensure(hi >= 1e-3, || format!("min eig at 0.4: {hi}"))?;
    let root = ppt_threshold().unwrap();
    ensure((root - 1.0 / 3.0).abs() < 1e-6, || format!("root {root}"))?;
    Ok(format!("eig(0.2) = {lo:.4}, eig(0.4) = {hi:.4}, root = {root:.9}"))
}

fn sigma_check(e: &Estimate, target: f64, what: &str) -> Result<f64, String> {
    let z = e.sigmas_from(target);
    ensure(z < 4.0, || {
        format!("{what}: {} vs {target}, {z:.2} sigma (n = {})", e.value, e.n)
    })?;
    Ok(z)
}

fn c12_monte_carlo() -> Outcome {
    let t = Instant::now();
    let cloner = IncoherentAttack::new(0.8_f64.acos()).unwrap();
    let st = run_protocol(&SimConfig {
        strategy: Strategy::incoherent(&cloner),
        trials: 620_000,
        seed: 2024,
        pairing: Pairing::None,
    })
    .map_err(|e| e.to_string())?;
    ensure(st.qber.n >= 200_000, || format!("only {} sifted bits", st.qber.n))?;
    let mut zs = vec![
        sigma_check(&st.sift_rate, 1.0 / 3.0, "sift rate")?,
        sigma_check(&st.qber, 1.0 / 6.0, "qber")?,
        sigma_check(&st.eve_bit_accuracy, 5.0 / 6.0, "bit accuracy")?,
        sigma_check(&st.eve_undisturbed_accuracy, 0.8, "undisturbed accuracy")?,
    ];

    let d1 = 1.0 / 3.0;
    let x2 = postproc::p_xor2_max(0.2).unwrap();
    let p2 = Coherent2Params::from_disturbance(0.2, x2.alpha).unwrap();
    let o3 = coherent3::optimize(0.2, Metric3::Xor, 200).unwrap();
    let p3 = Coherent3Params::from_disturbance(0.2, o3.alpha, o3.beta).unwrap();
    let cases = [
        (
            Strategy::incoherent(&IncoherentAttack::from_disturbance(d1).unwrap()),
            (1.0 - d1).powi(2),
            postproc::p_xor1(d1).unwrap(),
        ),
        (Strategy::coherent2(&p2), p2.alpha, x2.value),
        (
            Strategy::coherent3(&p3),
            p3.alpha + p3.beta,
            postproc::p_xor3(&p3).unwrap(),
        ),
    ];
    for (i, (strategy, undisturbed_pair, want)) in cases.into_iter().enumerate() {
        let trials = (1.1e5 * 9.0 / undisturbed_pair).ceil() as u64;
        let st = run_xor_protocol(&SimConfig {
            strategy,
            trials,
            seed: 77 + i as u64,
            pairing: Pairing::WithinProbeXor,
        })
        .map_err(|e| e.to_string())?;
        let x = st.eve_xor_accuracy.unwrap();
        ensure(x.n >= 100_000, || format!("only {} pairs", x.n))?;
        zs.push(sigma_check(&x, want, "xor accuracy")?);
    }
    budget(t, Duration::from_secs(60))?;
    let worst = zs.iter().cloned().fold(0.0, f64::max);
    Ok(format!("7 estimates, worst {worst:.2} sigma"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("cloning point", c1_cloner),
        ("isometry and basis covariance", c2_isometry_covariance),
        ("closed forms match SRM oracle", c3_oracle),
        ("factorized-point reduction", c4_factorized),
        ("fixed-alpha coherent gain", c5_fig1_gain),
        ("no Shannon gain", c6_no_shannon_gain),
        ("Renyi gain", c7_renyi_gain),
        ("undisturbed-bit optimum at F^2", c8_undisturbed),
        ("three-qubit gain at D = 0.07", c9_three_qubit_gain),
        ("xor curves", c10_xor),
        ("entanglement threshold", c11_entanglement),
        ("Monte Carlo concordance", c12_monte_carlo),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
