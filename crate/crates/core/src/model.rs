//! Functional model for pure Agler-Young contractions: the characteristic
//! function of the last component, the isometric embedding
//! `(Wh)(z) = D_{S_n^*} (I - z S_n^*)^{-1} h` into the truncated Hardy
//! space of the defect, complementarity with the characteristic multiplier,
//! and recovery of the constant model symbols `Y_i`.

use crate::ay;
use crate::error::{Error, Result};
use crate::hardy::{self, LaurentSymbol};
use crate::linalg::{self, DefectData};
use crate::mat::{self, ComplexMatrix};
use crate::tuple::OperatorTuple;
use crate::DEFECT_RANK_TOL;

/// Spectral radii at or above this are rejected as not pure.
pub const PURE_RADIUS_LIMIT: f64 = 1.0 - 1e-8;

/// Taylor coefficients of the characteristic function
/// `Theta_A = [-A + z D_{A^*} (I - z A^*)^{-1} D_A]|_{D_A}`, expressed on
/// the defect bases: `Theta_0 = -A|`, `Theta_k = D_{A^*} (A^*)^{k-1} D_A|`
/// for k >= 1.
pub fn char_function(a: &ComplexMatrix, order: usize) -> Result<LaurentSymbol> {
    if order == 0 {
        return Err(Error::OrderTooSmall {
            order,
            required: 1,
        });
    }
    let defect = linalg::defect(a, DEFECT_RANK_TOL)?;
    let defect_star = linalg::defect(&a.adjoint(), DEFECT_RANK_TOL)?;
    if defect.rank != defect_star.rank {
        // cannot happen for square matrices: A^*A and AA^* are isospectral
        return Err(Error::DimensionMismatch {
            context: format!(
                "defect ranks disagree: {} vs {}",
                defect.rank, defect_star.rank
            ),
        });
    }
    let b = &defect.basis;
    let b_star = &defect_star.basis;
    let mut coeffs = Vec::with_capacity(order + 1);
    coeffs.push(b_star.adjoint() * (-a) * b);
    let mut power = mat::identity(a.nrows());
    for _ in 1..=order {
        coeffs.push(b_star.adjoint() * &defect_star.d_matrix * &power * &defect.d_matrix * b);
        power = a.adjoint() * power;
    }
    LaurentSymbol::new(defect.rank.max(1), 0, pad_coeffs(coeffs, defect.rank))
}

fn pad_coeffs(coeffs: Vec<ComplexMatrix>, rank: usize) -> Vec<ComplexMatrix> {
    if rank >= 1 {
        return coeffs;
    }
    // rank-zero defects (unitary A) degenerate to the zero symbol on a
    // one-dimensional placeholder space
    vec![mat::zeros(1, 1); coeffs.len()]
}

/// The model embedding of a pure tuple at truncation order `N`.
#[derive(Debug, Clone)]
pub struct ModelEmbedding {
    /// Stacked blocks `D_{S_n^*} (S_n^*)^k` on the defect-star basis:
    /// `(N * rank) x dim(H)`.
    pub w_matrix: ComplexMatrix,
    /// Characteristic function coefficients of `S_n` to order `N`.
    pub theta: LaurentSymbol,
    pub order: usize,
    /// Estimated spectral radius of `S_n`.
    pub decay_rate: f64,
    pub defect: DefectData,
    pub defect_star: DefectData,
    /// `‖W^* W - I‖`; decays like `decay_rate^(2N)`.
    pub isometry_defect: f64,
    /// `‖(W S_n^* - T_z^* W)|all but last block row‖`.
    pub intertwine_dev: f64,
}

/// Builds the isometric embedding of `H` into the truncated
/// `H^2(D_{S_n^*})` and verifies the shift intertwining.
pub fn embed_w(tuple: &OperatorTuple, order: usize) -> Result<ModelEmbedding> {
    let s_n = tuple.last();
    let m = tuple.dim();
    let rho = mat::spectral_radius(s_n);
    if rho >= PURE_RADIUS_LIMIT {
        return Err(Error::NotPure { radius: rho });
    }
    if order == 0 {
        return Err(Error::OrderTooSmall {
            order,
            required: 1,
        });
    }
    let defect = linalg::defect(s_n, DEFECT_RANK_TOL)?;
    let defect_star = linalg::defect(&s_n.adjoint(), DEFECT_RANK_TOL)?;
    let r_star = defect_star.rank;
    if r_star == 0 {
        return Err(Error::InvalidInput(
            "last component is an isometry; the model needs rank(D) >= 1".into(),
        ));
    }
    let row = defect_star.basis.adjoint() * &defect_star.d_matrix;
    let mut w = mat::zeros(order * r_star, m);
    let mut power = mat::identity(m);
    for k in 0..order {
        w.view_mut((k * r_star, 0), (r_star, m))
            .copy_from(&(&row * &power));
        power = s_n.adjoint() * power;
    }
    let isometry_defect = (w.adjoint() * &w - mat::identity(m)).norm();

    let t_z = hardy::block_shift(r_star, order);
    let diff = &w * s_n.adjoint() - t_z.adjoint() * &w;
    let intertwine_dev = diff
        .view((0, 0), ((order - 1) * r_star, m))
        .norm();

    let theta = char_function(s_n, order)?;
    Ok(ModelEmbedding {
        w_matrix: w,
        theta,
        order,
        decay_rate: rho,
        defect,
        defect_star,
        isometry_defect,
        intertwine_dev,
    })
}

/// Report of the complementarity identity `W W^* + M_Theta M_Theta^* = I`.
#[derive(Debug, Clone)]
pub struct ComplementarityReport {
    pub pass: bool,
    /// Deviation on the full truncated space.
    pub full_dev: f64,
    /// Deviation on the interior window (all but the last block row/column).
    pub interior_dev: f64,
    /// Max of `‖Theta(z)^* Theta(z) - I‖` on a 128-point circle grid.
    pub inner_dev: f64,
    pub tol: f64,
}

/// Checks that the ranges of `W` and of the characteristic multiplier are
/// complementary, and that the characteristic function is inner on the
/// circle grid.
pub fn complementarity_check(emb: &ModelEmbedding, tol: f64) -> ComplementarityReport {
    let r_star = emb.defect_star.rank;
    let n_dim = emb.order * r_star;
    let m_theta = hardy::toeplitz_matrix(&emb.theta, emb.order);
    let resid =
        &emb.w_matrix * emb.w_matrix.adjoint() + &m_theta * m_theta.adjoint() - mat::identity(n_dim);
    let full_dev = resid.norm();
    let interior = (emb.order - 1) * r_star;
    let interior_dev = resid.view((0, 0), (interior, interior)).norm();

    let mut inner_dev = 0.0f64;
    for z in mat::unit_circle(128) {
        let v = emb.theta.eval(z);
        let dim = v.nrows();
        inner_dev = inner_dev.max((v.adjoint() * v - mat::identity(dim)).norm());
    }
    ComplementarityReport {
        pass: interior_dev <= tol,
        full_dev,
        interior_dev,
        inner_dev,
        tol,
    }
}

/// The recovered functional model of a pure Agler-Young contraction.
#[derive(Debug, Clone)]
pub struct PureModel {
    /// Model symbols `Y_i` on the defect-star basis.
    pub y_ops: Vec<ComplexMatrix>,
    pub embedding: ModelEmbedding,
    /// `‖(W S_i^* - T_{Y_i + z Y_{n-i}^*}^* W)|all but last block row‖`.
    pub intertwine_devs: Vec<f64>,
    pub pass: bool,
    pub tol: f64,
}

/// Computes the model symbols of a pure Agler-Young contraction via the
/// adjoint fundamental equations and verifies the model intertwining
/// `W S_i^* = T_{Y_i + z Y_{n-i}^*}^* W` on the interior.
pub fn pure_model(tuple: &OperatorTuple, order: usize, tol: f64) -> Result<PureModel> {
    // membership first: the model only exists for Agler-Young tuples
    ay::solve_fundamental(tuple, tol)?;
    let emb = embed_w(tuple, order)?;
    if emb.defect.rank == 0 {
        return Err(Error::InvalidInput(
            "last component is an isometry; the model needs rank(D_{S_n}) >= 1".into(),
        ));
    }
    let adj = ay::adjoint_fundamental(tuple, tol)?;
    let n = tuple.n();
    let r_star = emb.defect_star.rank;
    let scale = 1.0 + tuple.ops().iter().map(|m| m.norm()).fold(0.0, f64::max);
    let mut intertwine_devs = Vec::with_capacity(n - 1);
    for i in 1..n {
        let psi = LaurentSymbol::new(
            r_star,
            0,
            vec![adj.x_ops[i - 1].clone(), adj.x_ops[n - 1 - i].adjoint()],
        )?;
        let t_psi = hardy::toeplitz_matrix(&psi, order);
        let diff = &emb.w_matrix * tuple.op(i).adjoint() - t_psi.adjoint() * &emb.w_matrix;
        let dev = diff.view((0, 0), ((order - 1) * r_star, tuple.dim())).norm();
        intertwine_devs.push(dev);
    }
    let budget = tol.sqrt().max(10.0 * emb.isometry_defect) * scale;
    let worst = intertwine_devs.iter().copied().fold(0.0, f64::max);
    if worst > budget {
        return Err(Error::ModelMismatch { deviation: worst });
    }
    Ok(PureModel {
        y_ops: adj.x_ops,
        embedding: emb,
        intertwine_devs,
        pass: worst <= budget,
        tol,
    })
}
