//! Defect operators, restricted solves on defect spaces, and the numerical
//! radius. These are the linear-algebra kernels behind the fundamental
//! equations `S_i - S_{n-i}^* S_n = D_{S_n} X_i D_{S_n}`.

use crate::error::{Error, Result};
use crate::mat::{self, cr, ComplexMatrix};

/// The defect operator `D_T = (I - T*T)^{1/2}` of a contraction together
/// with an orthonormal basis of its range.
#[derive(Debug, Clone)]
pub struct DefectData {
    /// Hermitian PSD square root of `I - T*T`.
    pub d_matrix: ComplexMatrix,
    /// Columns form an orthonormal basis of `ran D_T` (dim x rank).
    pub basis: ComplexMatrix,
    /// Eigenvalues of `I - T*T` kept by the rank cutoff, descending.
    pub kept_eigenvalues: Vec<f64>,
    pub rank: usize,
    pub tol_used: f64,
}

impl DefectData {
    pub fn dim(&self) -> usize {
        self.d_matrix.nrows()
    }

    /// Expands an operator given on the defect basis to the ambient space:
    /// `B X B*`.
    pub fn expand(&self, x_on_basis: &ComplexMatrix) -> ComplexMatrix {
        &self.basis * x_on_basis * self.basis.adjoint()
    }

    /// Compresses an ambient operator to the defect basis: `B* M B`.
    pub fn compress(&self, ambient: &ComplexMatrix) -> ComplexMatrix {
        self.basis.adjoint() * ambient * &self.basis
    }
}

/// Defect operator of a square contraction.
///
/// Eigenvalues of `I - T*T` that the contraction test allows to dip slightly
/// below zero are clamped to zero before the square root. An eigenvalue
/// contributes to the range iff it exceeds `tol * lambda_max` (absolute
/// `tol` when `lambda_max` is zero).
pub fn defect(t: &ComplexMatrix, tol: f64) -> Result<DefectData> {
    if t.nrows() != t.ncols() {
        return Err(Error::NonSquare {
            rows: t.nrows(),
            cols: t.ncols(),
        });
    }
    let norm = mat::spectral_norm(t);
    if norm > 1.0 + tol {
        return Err(Error::NotAContraction { norm, tol });
    }
    let n = t.nrows();
    let gram = mat::identity(n) - t.adjoint() * t;
    let (raw_values, vectors) = mat::hermitian_eigen(&gram);
    let values: Vec<f64> = raw_values.iter().map(|&v| v.max(0.0)).collect();
    let lambda_max = values.first().copied().unwrap_or(0.0);
    // relative cutoff, falling back to absolute when the largest eigenvalue
    // is itself indistinguishable from zero
    let cutoff = if lambda_max > tol { tol * lambda_max } else { tol };
    let rank = values.iter().filter(|&&v| v > cutoff).count();

    let sqrt_diag = ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            cr(values[r].sqrt())
        } else {
            cr(0.0)
        }
    });
    let d_matrix = &vectors * sqrt_diag * vectors.adjoint();
    let mut basis = ComplexMatrix::from_fn(n, rank, |r, c| vectors[(r, c)]);
    mat::fix_column_phases(&mut basis);
    Ok(DefectData {
        d_matrix,
        basis,
        kept_eigenvalues: values[..rank].to_vec(),
        rank,
        tol_used: tol,
    })
}

/// Numerical radius `w(X) = max_theta lambda_max(Re(e^{i theta} X))`.
///
/// Dense sampling over `[0, 2pi)` followed by ternary refinement of the best
/// bracket down to width `refine_tol`. The sweep function need not be
/// unimodal, so the dense pre-sample guards against missed maxima; the
/// returned value is a certified lower bound at sampling resolution.
pub fn numerical_radius(x: &ComplexMatrix, angle_samples: usize, refine_tol: f64) -> Result<f64> {
    if x.nrows() != x.ncols() {
        return Err(Error::NonSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    if x.nrows() == 0 {
        return Ok(0.0);
    }
    let samples = angle_samples.max(8);
    let objective = |theta: f64| -> f64 {
        let rot = x * mat::c(theta.cos(), theta.sin());
        mat::lambda_max_hermitian(&rot)
    };
    let step = 2.0 * std::f64::consts::PI / samples as f64;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_theta = 0.0;
    for j in 0..samples {
        let theta = j as f64 * step;
        let v = objective(theta);
        if v > best_val {
            best_val = v;
            best_theta = theta;
        }
    }
    // ternary refinement of the winning bracket
    let mut lo = best_theta - step;
    let mut hi = best_theta + step;
    while hi - lo > refine_tol {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let v1 = objective(m1);
        let v2 = objective(m2);
        if v1 > best_val {
            best_val = v1;
        }
        if v2 > best_val {
            best_val = v2;
        }
        if v1 < v2 {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    Ok(best_val)
}

/// A solution of `D X D ~ Sigma` supported on the defect basis.
#[derive(Debug, Clone)]
pub struct RestrictedSolution {
    /// rank x rank matrix expressed on `DefectData::basis`.
    pub x: ComplexMatrix,
    /// `‖D X D - Sigma‖_F`.
    pub residual: f64,
}

/// Minimizes `‖D X D - Sigma‖_F` over operators `X` supported on the defect
/// basis, via projection onto the eigenbasis of `D`. Succeeds iff the
/// residual is at most `tol * (1 + ‖Sigma‖_F)`; the solution is then the
/// unique defect-supported one.
pub fn solve_restricted(
    d: &DefectData,
    sigma: &ComplexMatrix,
    tol: f64,
) -> Result<RestrictedSolution> {
    if sigma.nrows() != sigma.ncols() {
        return Err(Error::NonSquare {
            rows: sigma.nrows(),
            cols: sigma.ncols(),
        });
    }
    if sigma.nrows() != d.dim() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "Sigma is {}x{} but the defect lives on dimension {}",
                sigma.nrows(),
                sigma.ncols(),
                d.dim()
            ),
        });
    }
    let sigma_norm = sigma.norm();
    let threshold = tol * (1.0 + sigma_norm);
    if d.rank == 0 {
        let residual = sigma_norm;
        if residual <= threshold {
            return Ok(RestrictedSolution {
                x: mat::zeros(0, 0),
                residual,
            });
        }
        return Err(Error::NoSolution {
            index: 0,
            residual,
        });
    }
    // On the defect basis, D acts as diag(sqrt(lambda_j)); the minimizer is
    // obtained by scaling the compressed Sigma by the inverse weights.
    let compressed = d.compress(sigma);
    let weights: Vec<f64> = d.kept_eigenvalues.iter().map(|&l| l.sqrt()).collect();
    let x = ComplexMatrix::from_fn(d.rank, d.rank, |r, c| {
        compressed[(r, c)] / cr(weights[r] * weights[c])
    });
    let residual = (&d.d_matrix * d.expand(&x) * &d.d_matrix - sigma).norm();
    if residual <= threshold {
        Ok(RestrictedSolution { x, residual })
    } else {
        Err(Error::NoSolution {
            index: 0,
            residual,
        })
    }
}

/// Independent solve path for the uniqueness cross-check: solves the normal
/// equations `D^2 X D^2 = D Sigma D` with an SVD pseudoinverse of `D^2`,
/// then compresses to the defect basis. Shares no factorization with
/// [`solve_restricted`].
pub fn solve_restricted_normal_eq(
    d: &DefectData,
    sigma: &ComplexMatrix,
) -> Result<RestrictedSolution> {
    if sigma.nrows() != d.dim() || sigma.ncols() != d.dim() {
        return Err(Error::DimensionMismatch {
            context: "Sigma dimension does not match the defect".into(),
        });
    }
    if d.rank == 0 {
        return Ok(RestrictedSolution {
            x: mat::zeros(0, 0),
            residual: sigma.norm(),
        });
    }
    let d2 = &d.d_matrix * &d.d_matrix;
    let pinv = pseudoinverse(&d2, d.tol_used);
    let ambient = &pinv * (&d.d_matrix * sigma * &d.d_matrix) * &pinv;
    let x = d.compress(&ambient);
    let residual = (&d.d_matrix * d.expand(&x) * &d.d_matrix - sigma).norm();
    Ok(RestrictedSolution { x, residual })
}

/// Moore-Penrose pseudoinverse with a relative singular-value cutoff.
pub fn pseudoinverse(m: &ComplexMatrix, rel_tol: f64) -> ComplexMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return mat::zeros(m.ncols(), m.nrows());
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().unwrap();
    let vt = svd.v_t.as_ref().unwrap();
    let smax = svd.singular_values.max();
    let cutoff = if smax > 0.0 { rel_tol * smax } else { rel_tol };
    let k = svd.singular_values.len();
    let inv_diag = ComplexMatrix::from_fn(k, k, |r, c| {
        if r == c && svd.singular_values[r] > cutoff {
            cr(1.0 / svd.singular_values[r])
        } else {
            cr(0.0)
        }
    });
    vt.adjoint() * inv_diag * u.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::c;

    #[test]
    fn defect_of_zero_is_identity() {
        let t = mat::zeros(3, 3);
        let d = defect(&t, 1e-10).unwrap();
        assert!((&d.d_matrix - mat::identity(3)).norm() < 1e-12);
        assert_eq!(d.rank, 3);
    }

    #[test]
    fn defect_of_unitary_is_zero() {
        let u = ComplexMatrix::from_row_slice(
            2,
            2,
            &[cr(0.0), c(0.0, 1.0), c(0.0, 1.0), cr(0.0)],
        );
        let d = defect(&u, 1e-10).unwrap();
        assert!(d.d_matrix.norm() < 1e-7);
        assert_eq!(d.rank, 0);
    }

    #[test]
    fn defect_of_scalar() {
        let t = ComplexMatrix::from_row_slice(1, 1, &[cr(0.6)]);
        let d = defect(&t, 1e-10).unwrap();
        assert!((d.d_matrix[(0, 0)] - cr(0.8)).norm() < 1e-14);
        assert_eq!(d.rank, 1);
    }

    #[test]
    fn defect_rejects_expansive_operator() {
        let t = mat::identity(2) * cr(1.5);
        assert!(matches!(
            defect(&t, 1e-10),
            Err(Error::NotAContraction { .. })
        ));
    }

    #[test]
    fn defect_squares_back() {
        let t = ComplexMatrix::from_row_slice(
            2,
            2,
            &[cr(0.3), c(0.1, 0.2), cr(0.0), c(0.0, -0.5)],
        );
        let d = defect(&t, 1e-10).unwrap();
        let err = (&d.d_matrix * &d.d_matrix + t.adjoint() * &t - mat::identity(2)).norm();
        assert!(err < 1e-12, "err {err}");
    }

    #[test]
    fn radius_of_identity_and_zero() {
        assert!((numerical_radius(&mat::identity(3), 64, 1e-9).unwrap() - 1.0).abs() < 1e-10);
        assert!(numerical_radius(&mat::zeros(2, 2), 64, 1e-9).unwrap().abs() < 1e-12);
    }

    #[test]
    fn radius_of_jordan_block_matches_brute_force() {
        // for [[0,1],[0,0]] the hermitian part of e^{i t} X has eigenvalues
        // +-1/2 for every t; brute force with the exact 2x2 formula
        let x = ComplexMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        let mut brute = f64::NEG_INFINITY;
        for j in 0..100_000 {
            let t = 2.0 * std::f64::consts::PI * j as f64 / 100_000.0;
            // Re(e^{it} X) = [[0, e^{it}/2], [e^{-it}/2, 0]]: eigenvalues +-1/2
            let offdiag = 0.5 * c(t.cos(), t.sin()).norm();
            brute = brute.max(offdiag);
        }
        let w = numerical_radius(&x, 720, 1e-9).unwrap();
        assert!((w - brute).abs() < 1e-6, "w = {w}, brute = {brute}");
        assert!((w - 0.5).abs() < 1e-6);
    }

    #[test]
    fn solve_restricted_full_defect_returns_sigma() {
        let d = defect(&mat::zeros(3, 3), 1e-10).unwrap();
        let sigma = ComplexMatrix::from_fn(3, 3, |r, c_| c(r as f64, c_ as f64));
        let sol = solve_restricted(&d, &sigma, 1e-12).unwrap();
        assert!((d.expand(&sol.x) - &sigma).norm() < 1e-12);
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn solve_restricted_rank_zero() {
        let u = mat::identity(2);
        let d = defect(&u, 1e-10).unwrap();
        let sol = solve_restricted(&d, &mat::zeros(2, 2), 1e-12).unwrap();
        assert_eq!(sol.x.shape(), (0, 0));
        assert!(sol.residual < 1e-12);
        assert!(solve_restricted(&d, &mat::identity(2), 1e-12).is_err());
    }

    #[test]
    fn solve_restricted_scalar() {
        let t = ComplexMatrix::from_row_slice(1, 1, &[cr(0.6)]);
        let d = defect(&t, 1e-10).unwrap();
        let sigma = ComplexMatrix::from_row_slice(1, 1, &[c(0.32, -0.16)]);
        let sol = solve_restricted(&d, &sigma, 1e-12).unwrap();
        // sigma = (1 - 0.36) x
        assert!((sol.x[(0, 0)] - c(0.5, -0.25)).norm() < 1e-12);
    }

    #[test]
    fn solve_paths_agree() {
        let t = ComplexMatrix::from_row_slice(
            2,
            2,
            &[cr(0.4), c(0.0, 0.2), cr(0.1), cr(-0.3)],
        );
        let d = defect(&t, 1e-10).unwrap();
        let sigma = &d.d_matrix
            * ComplexMatrix::from_row_slice(2, 2, &[cr(1.0), c(0.5, 0.5), cr(-0.25), cr(2.0)])
            * &d.d_matrix;
        let a = solve_restricted(&d, &sigma, 1e-9).unwrap();
        let b = solve_restricted_normal_eq(&d, &sigma).unwrap();
        assert!((a.x - b.x).norm() < 1e-8);
    }

    #[test]
    fn sigma_off_the_defect_is_rejected() {
        // D from the lower shift: defect of T_z truncation is the last basis
        // vector; a Sigma touching e_0 has no defect-supported solution
        let mut s = mat::zeros(2, 2);
        s[(1, 0)] = cr(1.0);
        let d = defect(&s, 1e-10).unwrap();
        let mut sigma = mat::zeros(2, 2);
        sigma[(0, 0)] = cr(1.0);
        let err = solve_restricted(&d, &sigma, 1e-9);
        assert!(matches!(err, Err(Error::NoSolution { .. })));
    }
}
