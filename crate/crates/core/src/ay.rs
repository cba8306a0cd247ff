//! Agler-Young membership, fundamental-operator computation, the
//! isometry/unitary predicates, the hereditary functional calculus, and
//! compression to co-invariant subspaces.
//!
//! A tuple `(S_1, ..., S_n)` with `S_n` a contraction is in the class `AY_n`
//! iff the fundamental equations `S_i - S_{n-i}^* S_n = D_{S_n} X_i D_{S_n}`
//! admit (necessarily unique) solutions on the defect space of `S_n`.

use crate::error::{Error, Result};
use crate::linalg::{self, DefectData};
use crate::mat::{self, cr, ComplexMatrix, C64};
use crate::tuple::OperatorTuple;
use crate::DEFECT_RANK_TOL;

/// Solution tuple of the fundamental equations, expressed on the defect
/// basis of `D_{S_n}`.
#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    pub x_ops: Vec<ComplexMatrix>,
    pub residuals: Vec<f64>,
    pub numerical_radii: Vec<f64>,
    pub defect: DefectData,
}

impl FundamentalSolution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_radius(&self) -> f64 {
        self.numerical_radii.iter().copied().fold(0.0, f64::max)
    }
}

/// The right-hand sides `Sigma_i = S_i - S_{n-i}^* S_n` of the fundamental
/// equations, for `i = 1, ..., n-1`.
pub fn fundamental_offsets(tuple: &OperatorTuple) -> Vec<ComplexMatrix> {
    let n = tuple.n();
    (1..n)
        .map(|i| tuple.op(i) - tuple.op(n - i).adjoint() * tuple.last())
        .collect()
}

fn defect_for_solver(t: &ComplexMatrix, tol: f64) -> Result<DefectData> {
    let norm = mat::spectral_norm(t);
    if norm > 1.0 + tol {
        return Err(Error::NotAContraction { norm, tol });
    }
    // contraction already certified with the caller's tolerance; the rank
    // cutoff stays at the fixed default so tolerances do not leak into the
    // geometry of the defect space
    let mut clamped = t.clone();
    if norm > 1.0 {
        clamped *= cr(1.0 / norm);
    }
    linalg::defect(&clamped, DEFECT_RANK_TOL)
}

/// Solves the fundamental equations. `Err(NoSolution)` signals the tuple is
/// not in `AY_n`; the successful result carries residuals and the numerical
/// radius of each fundamental operator.
pub fn solve_fundamental(tuple: &OperatorTuple, tol: f64) -> Result<FundamentalSolution> {
    let defect = defect_for_solver(tuple.last(), tol)?;
    let offsets = fundamental_offsets(tuple);
    let mut x_ops = Vec::with_capacity(offsets.len());
    let mut residuals = Vec::with_capacity(offsets.len());
    let mut radii = Vec::with_capacity(offsets.len());
    for (idx, sigma) in offsets.iter().enumerate() {
        let sol = linalg::solve_restricted(&defect, sigma, tol).map_err(|e| match e {
            Error::NoSolution { residual, .. } => Error::NoSolution {
                index: idx + 1,
                residual,
            },
            other => other,
        })?;
        radii.push(linalg::numerical_radius(&sol.x, 720, 1e-9)?);
        residuals.push(sol.residual);
        x_ops.push(sol.x);
    }
    Ok(FundamentalSolution {
        x_ops,
        residuals,
        numerical_radii: radii,
        defect,
    })
}

/// Runs both independent solve paths (eigenbasis projection and SVD normal
/// equations) and returns the solution together with the largest
/// disagreement between the two, for the uniqueness cross-check.
pub fn solve_fundamental_cross(
    tuple: &OperatorTuple,
    tol: f64,
) -> Result<(FundamentalSolution, f64)> {
    let sol = solve_fundamental(tuple, tol)?;
    let offsets = fundamental_offsets(tuple);
    let mut disagreement = 0.0f64;
    for (x, sigma) in sol.x_ops.iter().zip(offsets.iter()) {
        let alt = linalg::solve_restricted_normal_eq(&sol.defect, sigma)?;
        disagreement = disagreement.max((x - alt.x).norm());
    }
    Ok((sol, disagreement))
}

/// Solves the adjoint fundamental equations
/// `S_i^* - S_{n-i} S_n^* = D_{S_n^*} Y_i^* D_{S_n^*}` and returns the
/// `Y_i` on the defect basis of `D_{S_n^*}`. Failure signals that the
/// adjoint tuple is not Agler-Young.
pub fn adjoint_fundamental(tuple: &OperatorTuple, tol: f64) -> Result<FundamentalSolution> {
    let mut sol = solve_fundamental(&tuple.adjoint(), tol)?;
    // the solver produced Y_i^*; hand back Y_i (numerical radius is
    // invariant under adjoints, so the report carries over)
    for x in &mut sol.x_ops {
        *x = x.adjoint();
    }
    Ok(sol)
}

/// Outcome of the isometry/unitary predicates. Deviations are reported per
/// relation; `pass` applies the tolerance.
#[derive(Debug, Clone)]
pub struct AyRelationReport {
    pub pass: bool,
    pub tol: f64,
    /// Scalar columns the deviations were measured on.
    pub window_cols: usize,
    /// `‖(S_n^* S_n - I)|_window‖`.
    pub isometry_dev: f64,
    /// `‖(S_n S_n^* - I)‖` on the full space; only set by the unitary check.
    pub co_isometry_dev: Option<f64>,
    /// `‖(S_i - S_{n-i}^* S_n)|_window‖` for each i.
    pub relation_devs: Vec<f64>,
    /// `‖[S_i, S_n]‖` for each i; only set by the unitary check.
    pub commutator_devs: Option<Vec<f64>>,
}

fn window_norm(m: &ComplexMatrix, cols: usize) -> f64 {
    let w = cols.min(m.ncols());
    m.view((0, 0), (m.nrows(), w)).norm()
}

/// Checks the Agler-Young isometry characterization `S_n^* S_n = I` and
/// `S_i = S_{n-i}^* S_n` on the leading `window_cols` scalar columns
/// (defaults to the full matrix). Truncated representatives built by the
/// Hardy module satisfy the relations exactly on all but the last block
/// column, so callers pass the builder's exactness window.
pub fn is_ay_isometry(
    tuple: &OperatorTuple,
    tol: f64,
    window_cols: Option<usize>,
) -> AyRelationReport {
    let n = tuple.n();
    let window = window_cols.unwrap_or(tuple.dim()).min(tuple.dim());
    let gram = tuple.last().adjoint() * tuple.last() - mat::identity(tuple.dim());
    let isometry_dev = window_norm(&gram, window);
    let relation_devs: Vec<f64> = (1..n)
        .map(|i| {
            let diff = tuple.op(i) - tuple.op(n - i).adjoint() * tuple.last();
            window_norm(&diff, window)
        })
        .collect();
    let pass = isometry_dev <= tol && relation_devs.iter().all(|&d| d <= tol);
    AyRelationReport {
        pass,
        tol,
        window_cols: window,
        isometry_dev,
        co_isometry_dev: None,
        relation_devs,
        commutator_devs: None,
    }
}

/// Checks the Agler-Young unitary characterization: `S_n` unitary plus the
/// isometry relations. The commutators `[S_i, S_n]`, which vanish for every
/// Agler-Young unitary, are reported as corroboration.
pub fn is_ay_unitary(tuple: &OperatorTuple, tol: f64) -> AyRelationReport {
    let n = tuple.n();
    let dim = tuple.dim();
    let id = mat::identity(dim);
    let isometry_dev = (tuple.last().adjoint() * tuple.last() - &id).norm();
    let co_isometry_dev = (tuple.last() * tuple.last().adjoint() - &id).norm();
    let relation_devs: Vec<f64> = (1..n)
        .map(|i| (tuple.op(i) - tuple.op(n - i).adjoint() * tuple.last()).norm())
        .collect();
    let commutator_devs: Vec<f64> = (1..n)
        .map(|i| mat::commutator(tuple.op(i), tuple.last()).norm())
        .collect();
    let pass = isometry_dev <= tol
        && co_isometry_dev <= tol
        && relation_devs.iter().all(|&d| d <= tol);
    AyRelationReport {
        pass,
        tol,
        window_cols: dim,
        isometry_dev,
        co_isometry_dev: Some(co_isometry_dev),
        relation_devs,
        commutator_devs: Some(commutator_devs),
    }
}

/// Compression `(B^* S_i B)` of the tuple to the span of the orthonormal
/// columns of `basis`. The span must be invariant under every `S_i^*`; this
/// is the hypothesis under which compressions of Agler-Young isometries
/// stay in the class.
pub fn compress(
    tuple: &OperatorTuple,
    basis: &ComplexMatrix,
    tol: f64,
) -> Result<OperatorTuple> {
    if basis.nrows() != tuple.dim() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "basis has {} rows, tuple dimension is {}",
                basis.nrows(),
                tuple.dim()
            ),
        });
    }
    let ortho = mat::orthonormality_defect(basis);
    if ortho > tol {
        return Err(Error::InvalidInput(format!(
            "basis columns not orthonormal: defect {ortho:.3e}"
        )));
    }
    let proj_out = mat::identity(tuple.dim()) - basis * basis.adjoint();
    for (idx, op) in tuple.ops().iter().enumerate() {
        let leak = (&proj_out * op.adjoint() * basis).norm();
        if leak > tol * (1.0 + op.norm()) {
            return Err(Error::NotCoinvariant {
                index: idx + 1,
                deviation: leak,
            });
        }
    }
    let ops = tuple
        .ops()
        .iter()
        .map(|op| basis.adjoint() * op * basis)
        .collect();
    OperatorTuple::new(ops)
}

/// One monomial `coeff * z^*_{star} z_{plain}` of a hereditary polynomial;
/// the representation keeps every starred letter ahead of every plain
/// letter, so hereditary form is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct HereditaryMonomial {
    pub coeff: C64,
    pub star: Vec<usize>,
    pub plain: Vec<usize>,
}

/// A polynomial in non-commuting variables `z_1, ..., z_n` and their
/// adjoints in hereditary form.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HereditaryPolynomial {
    pub monomials: Vec<HereditaryMonomial>,
}

impl HereditaryPolynomial {
    pub fn new(monomials: Vec<HereditaryMonomial>) -> Self {
        Self { monomials }
    }

    /// The formal adjoint: `(c z^*_s z_p)^* = conj(c) z^*_{rev p} z_{rev s}`.
    pub fn adjoint(&self) -> Self {
        let monomials = self
            .monomials
            .iter()
            .map(|m| {
                let mut star = m.plain.clone();
                star.reverse();
                let mut plain = m.star.clone();
                plain.reverse();
                HereditaryMonomial {
                    coeff: m.coeff.conj(),
                    star,
                    plain,
                }
            })
            .collect();
        Self { monomials }
    }

    /// `1 - z_n^* z_n`, positive exactly at contractions.
    pub fn contraction_witness(n: usize) -> Self {
        Self::new(vec![
            HereditaryMonomial {
                coeff: cr(1.0),
                star: vec![],
                plain: vec![],
            },
            HereditaryMonomial {
                coeff: cr(-1.0),
                star: vec![n],
                plain: vec![n],
            },
        ])
    }

    /// The family
    /// `h_{alpha,i} = 2 w (1 - z_n^* z_n) - alpha (z_i - z_{n-i}^* z_n)
    ///  - conj(alpha) (z_i^* - z_n^* z_{n-i})`
    /// whose joint positivity over unimodular `alpha` characterizes
    /// membership with fundamental operators of numerical radius at most `w`.
    pub fn ay_witness(n: usize, i: usize, w_bound: f64, alpha: C64) -> Self {
        assert!(i >= 1 && i < n, "witness index {i} out of 1..{n}");
        Self::new(vec![
            HereditaryMonomial {
                coeff: cr(2.0 * w_bound),
                star: vec![],
                plain: vec![],
            },
            HereditaryMonomial {
                coeff: cr(-2.0 * w_bound),
                star: vec![n],
                plain: vec![n],
            },
            HereditaryMonomial {
                coeff: -alpha,
                star: vec![],
                plain: vec![i],
            },
            HereditaryMonomial {
                coeff: alpha,
                star: vec![n - i],
                plain: vec![n],
            },
            HereditaryMonomial {
                coeff: -alpha.conj(),
                star: vec![i],
                plain: vec![],
            },
            HereditaryMonomial {
                coeff: alpha.conj(),
                star: vec![n],
                plain: vec![n - i],
            },
        ])
    }
}

/// Evaluates `h(S, S^*)`: the monomial `(c, [a, b], [u, v])` contributes
/// `c * S_a^* S_b^* S_u S_v`.
pub fn hereditary_eval(
    h: &HereditaryPolynomial,
    tuple: &OperatorTuple,
) -> Result<ComplexMatrix> {
    let adj = tuple.adjoint();
    let mut acc = mat::zeros(tuple.dim(), tuple.dim());
    for m in &h.monomials {
        let starred = adj.word_product(&m.star)?;
        let plain = tuple.word_product(&m.plain)?;
        acc += starred * plain * m.coeff;
    }
    Ok(acc)
}

/// Report of the hereditary positivity sweep and its cross-check against the
/// fundamental-equation solver.
#[derive(Debug, Clone)]
pub struct HereditaryReport {
    /// Positivity of every `h_{alpha,i}(S, S^*)` on the sample grid.
    pub pass: bool,
    pub min_eigenvalue: f64,
    /// Index `i` and angle attaining the minimum.
    pub argmin_index: usize,
    pub argmin_theta: f64,
    pub w_bound: f64,
    pub theta_samples: usize,
    pub tol: f64,
    /// Solver route: membership plus `w(X_i) <= w_bound + tol` for all i.
    pub solver_pass: bool,
    pub solver_max_radius: Option<f64>,
    pub solver_residual: Option<f64>,
    /// Whether the two routes agree.
    pub routes_agree: bool,
}

/// Sweeps the hereditary family `h_{alpha,i}` over a uniform grid of
/// unimodular `alpha` and reports the minimum eigenvalue seen; positivity of
/// the family is equivalent to membership in `AY_n` with fundamental
/// operators of numerical radius at most `w_bound`, which is cross-checked
/// against the solver route.
pub fn hereditary_family_check(
    tuple: &OperatorTuple,
    w_bound: f64,
    theta_samples: usize,
    tol: f64,
) -> Result<HereditaryReport> {
    if w_bound <= 0.0 {
        return Err(Error::InvalidInput("w_bound must be positive".into()));
    }
    let samples = theta_samples.max(8);
    let n = tuple.n();
    // theta-independent part of the witness, via the calculus itself
    let base = hereditary_eval(&HereditaryPolynomial::contraction_witness(n), tuple)?
        * cr(2.0 * w_bound);
    let offsets = fundamental_offsets(tuple);

    let mut min_eig = f64::INFINITY;
    let mut argmin_index = 1usize;
    let mut argmin_theta = 0.0f64;
    for (idx, sigma) in offsets.iter().enumerate() {
        for j in 0..samples {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / samples as f64;
            let alpha = mat::c(theta.cos(), theta.sin());
            let h = &base - sigma * alpha - sigma.adjoint() * alpha.conj();
            let lam = mat::lambda_min_hermitian(&h);
            if lam < min_eig {
                min_eig = lam;
                argmin_index = idx + 1;
                argmin_theta = theta;
            }
        }
    }
    let pass = min_eig >= -tol;

    let (solver_pass, solver_max_radius, solver_residual) = match solve_fundamental(tuple, tol) {
        Ok(sol) => {
            let max_radius = sol.max_radius();
            (
                max_radius <= w_bound + tol,
                Some(max_radius),
                Some(sol.max_residual()),
            )
        }
        Err(_) => (false, None, None),
    };

    Ok(HereditaryReport {
        pass,
        min_eigenvalue: min_eig,
        argmin_index,
        argmin_theta,
        w_bound,
        theta_samples: samples,
        tol,
        solver_pass,
        solver_max_radius,
        solver_residual,
        routes_agree: pass == solver_pass,
    })
}
