//! Deterministic maximizers: grid scans with local refinement.
//!
//! Grid points are evaluated in parallel; the reduction is index-ordered and
//! ties go to the earliest point (smallest coordinates).

use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarOptimum {
    pub x: f64,
    pub value: f64,
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] || values[best].is_nan() {
            best = i;
        }
    }
    best
}

/// Evenly spaced grid including both endpoints.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// Golden-section search for a maximum on `[a, b]` down to width `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> ScalarOptimum {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    ScalarOptimum { x, value: f(x) }
}

/// Scans `n` points of `[lo, hi]`, then refines with golden section inside
/// the two cells adjacent to the best point. Endpoints are included.
pub fn maximize_scalar(f: impl Fn(f64) -> f64 + Sync, lo: f64, hi: f64, n: usize, tol: f64) -> ScalarOptimum {
    let xs = linspace(lo, hi, n);
    let values: Vec<f64> = xs.par_iter().map(|&x| f(x)).collect();
    let i = argmax(&values);
    let grid_best = ScalarOptimum {
        x: xs[i],
        value: values[i],
    };
    if xs.len() < 2 {
        return grid_best;
    }
    let a = xs[i.saturating_sub(1)];
    let b = xs[(i + 1).min(xs.len() - 1)];
    let refined = golden_section_max(&f, a, b, tol);
    if refined.value > grid_best.value {
        refined
    } else {
        grid_best
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarOptimum {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Maximizes `f` over the region where `feasible` holds inside the box
/// `[x0, x1] × [y0, y1]`: an `n × n` grid followed by repeated zooming
/// (`zoom_n × zoom_n` grids on a shrinking window around the incumbent)
/// until the window is narrower than `tol` in both coordinates.
#[allow(clippy::too_many_arguments)]
pub fn maximize_planar(
    f: impl Fn(f64, f64) -> f64 + Sync,
    feasible: impl Fn(f64, f64) -> bool + Sync,
    (x0, x1): (f64, f64),
    (y0, y1): (f64, f64),
    n: usize,
    zoom_n: usize,
    tol: f64,
) -> Option<PlanarOptimum> {
    let scan = |xs: &[f64], ys: &[f64]| -> Option<PlanarOptimum> {
        let rows: Vec<Option<PlanarOptimum>> = xs
            .par_iter()
            .map(|&x| {
                let mut best: Option<PlanarOptimum> = None;
                for &y in ys {
                    if !feasible(x, y) {
                        continue;
                    }
                    let value = f(x, y);
                    if value.is_nan() {
                        continue;
                    }
                    if best.is_none_or(|b| value > b.value) {
                        best = Some(PlanarOptimum { x, y, value });
                    }
                }
                best
            })
            .collect();
        rows.into_iter()
            .flatten()
            .fold(None, |acc: Option<PlanarOptimum>, r| match acc {
                Some(a) if a.value >= r.value => Some(a),
                _ => Some(r),
            })
    };

    let mut best = scan(&linspace(x0, x1, n), &linspace(y0, y1, n))?;
    let mut hx = (x1 - x0) / (n.max(2) - 1) as f64;
    let mut hy = (y1 - y0) / (n.max(2) - 1) as f64;
    while hx > tol || hy > tol {
        let xs = linspace((best.x - 2.0 * hx).max(x0), (best.x + 2.0 * hx).min(x1), zoom_n);
        let ys = linspace((best.y - 2.0 * hy).max(y0), (best.y + 2.0 * hy).min(y1), zoom_n);
        if let Some(cand) = scan(&xs, &ys) {
            if cand.value > best.value {
                best = cand;
            }
        }
        // The new grid spacing is 4h/(zoom_n - 1); shrink the window half as fast.
        let shrink = ((zoom_n - 1) as f64 / 8.0).max(1.5);
        hx /= shrink;
        hy /= shrink;
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let o = golden_section_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((o.x - 0.3).abs() < 1e-9);
    }

    #[test]
    fn scalar_boundary_maximum() {
        let o = maximize_scalar(|x| x, 0.0, 2.0, 11, 1e-10);
        assert!((o.x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn ties_go_to_smallest_x() {
        let o = maximize_scalar(|_| 1.0, 0.0, 1.0, 11, 1e-10);
        assert_eq!(o.x, 0.0);
    }

    #[test]
    fn planar_peak_on_slanted_edge() {
        let o = maximize_planar(
            |x, y| -(x - 0.5).powi(2) - (y - 0.7).powi(2),
            |x, y| x >= 0.0 && y >= 0.0 && x + y <= 1.0,
            (0.0, 1.0),
            (0.0, 1.0),
            50,
            21,
            1e-9,
        )
        .unwrap();
        // projection of (0.5, 0.7) onto x + y = 1 is (0.4, 0.6)
        assert!((o.x - 0.4).abs() < 1e-7 && (o.y - 0.6).abs() < 1e-7, "{o:?}");
    }
}
