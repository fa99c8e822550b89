//! Small dense complex linear algebra: Hermitian eigendecomposition, PSD
//! square roots, Gram factorization, the square-root measurement and the
//! partial transpose. Dimensions stay ≤ 64 throughout the crate.

mod eigen;
mod matrix;

pub use eigen::{hermitian_eigen, HermitianEigen, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use matrix::{inner, kron_vec, norm_sqr, ComplexMatrix, HERMITIAN_TOL};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues above `-PSD_TOL` are treated as zero when a matrix must be PSD.
pub const PSD_TOL: f64 = 1e-10;

/// Eigenvalues above this count towards the rank in [`gram_factorize`].
pub const RANK_TOL: f64 = 1e-10;

fn require_psd(e: &HermitianEigen) -> Result<()> {
    let min = e.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(())
}

/// Unique PSD square root.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(m)?;
    require_psd(&e)?;
    Ok(e.map_values(|l| l.max(0.0).sqrt()))
}

/// Moore–Penrose pseudo-inverse of the PSD square root; eigenvalues at or
/// below [`RANK_TOL`] are dropped.
pub fn psd_inv_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(m)?;
    require_psd(&e)?;
    Ok(e.map_values(|l| if l > RANK_TOL { 1.0 / l.sqrt() } else { 0.0 }))
}

/// Realizes a PSD Gram matrix as `n` vectors of dimension `rank(G)`.
///
/// Returns an `r × n` matrix `X` whose columns satisfy `⟨x_i|x_j⟩ = G_ij`.
pub fn gram_factorize(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eigen(g)?;
    require_psd(&e)?;
    let n = g.rows();
    let kept: Vec<usize> = (0..n).filter(|&k| e.values[k] > RANK_TOL).collect();
    Ok(ComplexMatrix::from_fn(kept.len(), n, |r, j| {
        let k = kept[r];
        e.vectors[(j, k)].conj() * e.values[k].sqrt()
    }))
}

fn normalized_gram(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    g.require_hermitian("srm")?;
    let diag = g.real_diagonal();
    let (lo, hi) = diag.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &d| {
        (lo.min(d), hi.max(d))
    });
    if diag.is_empty() || lo <= 0.0 {
        return Err(Error::Contract("srm: gram diagonal must be positive".into()));
    }
    if hi - lo > 1e-10 * hi.max(1.0) {
        return Err(Error::UnequalDiagonal { spread: hi - lo });
    }
    Ok(g.scale(1.0 / hi))
}

/// Outcome table of the square-root measurement on equiprobable pure states:
/// entry `(j, i)` is the probability of outcome `j` when state `i` was sent.
pub fn srm_outcome_probabilities(g: &ComplexMatrix) -> Result<Vec<Vec<f64>>> {
    let root = psd_sqrt(&normalized_gram(g)?)?;
    let n = g.rows();
    Ok((0..n)
        .map(|j| (0..n).map(|i| root[(j, i)].norm_sqr()).collect())
        .collect())
}

/// Per-state probability that the square-root measurement identifies each
/// state correctly.
pub fn srm_success(g: &ComplexMatrix) -> Result<Vec<f64>> {
    let root = psd_sqrt(&normalized_gram(g)?)?;
    Ok((0..g.rows()).map(|i| root[(i, i)].re.powi(2)).collect())
}

/// Square-root measurement vectors for the states given as columns of
/// `states` (not necessarily normalized, but of equal norm). Outcome `j`
/// corresponds to state `j`; the vectors span the same subspace as the states.
pub fn srm_vectors(states: &ComplexMatrix) -> Result<Vec<Vec<Complex64>>> {
    let gram = states.column_gram();
    let norm = gram.real_diagonal().into_iter().fold(0.0, f64::max);
    if norm <= 0.0 {
        return Err(Error::Contract("srm_vectors: zero states".into()));
    }
    let gn = normalized_gram(&gram)?;
    let pinv_root = psd_inv_sqrt(&gn)?;
    let m = states.scale(1.0 / norm.sqrt()).matmul(&pinv_root);
    Ok((0..m.cols()).map(|j| m.column(j)).collect())
}

/// Checks that `rho` is a density matrix: Hermitian, unit trace, PSD.
pub fn require_density_matrix(rho: &ComplexMatrix) -> Result<HermitianEigen> {
    rho.require_hermitian("density matrix")?;
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::Contract(format!("density matrix trace {tr} != 1")));
    }
    let e = hermitian_eigen(rho)?;
    if e.min_value() < -PSD_TOL {
        return Err(Error::Contract(format!(
            "density matrix has negative eigenvalue {:e}",
            e.min_value()
        )));
    }
    Ok(e)
}

/// Partial transpose over the second qubit of a two-qubit operator.
pub fn partial_transpose_second(rho: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!((rho.rows(), rho.cols()), (4, 4));
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (i, j) = (r / 2, r % 2);
        let (k, l) = (c / 2, c % 2);
        rho[(2 * i + l, 2 * k + j)]
    })
}

/// Minimum eigenvalue of the partial transpose of a two-qubit density matrix;
/// negative exactly when the state is entangled.
pub fn partial_transpose_min_eig(rho: &ComplexMatrix) -> Result<f64> {
    if (rho.rows(), rho.cols()) != (4, 4) {
        return Err(Error::Contract(format!(
            "partial transpose expects 4x4, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    require_density_matrix(rho)?;
    Ok(hermitian_eigen(&partial_transpose_second(rho))?.min_value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_diagonal() {
        let s = psd_sqrt(&ComplexMatrix::diagonal(&[4.0, 9.0])).unwrap();
        assert!(s.sub(&ComplexMatrix::diagonal(&[2.0, 3.0])).max_abs() < 1e-14);
        let i = psd_sqrt(&ComplexMatrix::identity(3)).unwrap();
        assert!(i.sub(&ComplexMatrix::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn sqrt_rejects_negative() {
        let err = psd_sqrt(&ComplexMatrix::diagonal(&[1.0, -1e-6])).unwrap_err();
        assert!(matches!(err, Error::NotPsd { .. }));
        // tiny negative rounding is clamped
        assert!(psd_sqrt(&ComplexMatrix::diagonal(&[1.0, -1e-12])).is_ok());
    }

    #[test]
    fn gram_of_all_ones_is_rank_one() {
        let g = ComplexMatrix::from_real_fn(3, 3, |_, _| 1.0);
        let x = gram_factorize(&g).unwrap();
        assert_eq!(x.rows(), 1);
        for j in 0..3 {
            assert!((x[(0, j)] - x[(0, 0)]).norm() < 1e-12);
            assert!((x[(0, j)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gram_of_identity_is_orthonormal() {
        let x = gram_factorize(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(x.rows(), 4);
        assert!(x.column_gram().sub(&ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn srm_two_states() {
        let a: f64 = 0.7;
        let g = ComplexMatrix::from_real(2, 2, &[1.0, a.cos(), a.cos(), 1.0]);
        let p = srm_success(&g).unwrap();
        for pi in p {
            assert!((pi - 0.5 * (1.0 + a.sin())).abs() < 1e-14);
        }
    }

    #[test]
    fn srm_orthogonal_states() {
        let p = srm_success(&ComplexMatrix::identity(5).scale(0.3)).unwrap();
        assert!(p.iter().all(|&x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn srm_rejects_unequal_diagonal() {
        let err = srm_success(&ComplexMatrix::diagonal(&[1.0, 0.5])).unwrap_err();
        assert!(matches!(err, Error::UnequalDiagonal { .. }));
    }

    #[test]
    fn srm_vectors_reproduce_root_amplitudes() {
        let a: f64 = 1.1;
        let states = ComplexMatrix::from_real(3, 2, &[1.0, a.cos(), 0.0, a.sin(), 0.0, 0.0]);
        let m = srm_vectors(&states).unwrap();
        for (j, mj) in m.iter().enumerate() {
            let p = inner(mj, &states.column(j)).norm_sqr();
            assert!((p - 0.5 * (1.0 + a.sin())).abs() < 1e-12);
        }
        // completeness on the span
        let total: f64 = m.iter().map(|mj| inner(mj, &states.column(0)).norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    fn singlet() -> ComplexMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [0.0, s, -s, 0.0];
        ComplexMatrix::from_real_fn(4, 4, |i, j| v[i] * v[j])
    }

    #[test]
    fn singlet_partial_transpose() {
        let m = partial_transpose_min_eig(&singlet()).unwrap();
        assert!((m + 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_state_is_separable() {
        let rho = ComplexMatrix::diagonal(&[1.0, 0.0, 0.0, 0.0]);
        assert!(partial_transpose_min_eig(&rho).unwrap() >= -1e-14);
    }

    #[test]
    fn partial_transpose_rejects_bad_trace() {
        let rho = ComplexMatrix::diagonal(&[1.0, 1.0, 0.0, 0.0]);
        assert!(matches!(partial_transpose_min_eig(&rho), Err(Error::Contract(_))));
    }
}
