//! Model spaces of finite Blaschke products, their conjugation, truncated
//! Toeplitz operators, and the classification of Agler-Young pairs
//! `(A_phi, A_z)`.
//!
//! The model space `K_u = H^2 ⊖ u H^2` of a finite Blaschke product `u` is
//! finite-dimensional; it is represented here on the Takenaka-Malmquist
//! orthonormal basis, with every function carried as a Taylor coefficient
//! vector of length `N` (the ambient order, chosen so all tails are below
//! 1e-12). The conjugation acts as `C(g)(z) = u(z) conj(z g(z))` on the
//! circle.

use crate::error::{Error, Result};
use crate::hardy::{self, LaurentSymbol};
use crate::mat::{self, cr, ComplexMatrix, C64};
use crate::tuple::OperatorTuple;

/// Zeros closer to the circle than this are rejected.
pub const ZERO_MODULUS_LIMIT: f64 = 1.0 - 1e-8;

/// Ambient tail budget: the order is raised until `max|a_j|^N` is below it.
pub const TAIL_BUDGET: f64 = 1e-12;

/// A finite Blaschke product `c * prod (z - a_j) / (1 - conj(a_j) z)`.
#[derive(Debug, Clone)]
pub struct BlaschkeProduct {
    zeros: Vec<C64>,
    constant: C64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>, constant: C64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::InvalidInput(
                "a Blaschke product needs at least one zero".into(),
            ));
        }
        for a in &zeros {
            if a.norm() > ZERO_MODULUS_LIMIT {
                return Err(Error::ZeroTooCloseToCircle { modulus: a.norm() });
            }
        }
        if (constant.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "leading constant must be unimodular, got modulus {}",
                constant.norm()
            )));
        }
        Ok(Self { zeros, constant })
    }

    /// Monomial `z^d`.
    pub fn monomial(degree: usize) -> Self {
        Self {
            zeros: vec![cr(0.0); degree.max(1)],
            constant: cr(1.0),
        }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = self.constant;
        for &a in &self.zeros {
            acc *= (z - a) / (cr(1.0) - a.conj() * z);
        }
        acc
    }

    /// Taylor coefficients `u_0, ..., u_{order-1}`.
    pub fn taylor(&self, order: usize) -> Vec<C64> {
        let mut acc = vec![cr(0.0); order];
        if order == 0 {
            return acc;
        }
        acc[0] = self.constant;
        for &a in &self.zeros {
            acc = mul_truncated(&acc, &factor_taylor(a, order), order);
        }
        acc
    }
}

/// Taylor series of one factor `(z - a)/(1 - conj(a) z)`:
/// `-a + (1 - |a|^2) sum_{k>=1} conj(a)^{k-1} z^k`.
fn factor_taylor(a: C64, order: usize) -> Vec<C64> {
    let mut out = vec![cr(0.0); order];
    if order == 0 {
        return out;
    }
    out[0] = -a;
    let d2 = cr(1.0 - a.norm_sqr());
    let mut pow = cr(1.0);
    for coeff in out.iter_mut().skip(1) {
        *coeff = d2 * pow;
        pow *= a.conj();
    }
    out
}

fn mul_truncated(a: &[C64], b: &[C64], order: usize) -> Vec<C64> {
    let mut out = vec![cr(0.0); order];
    for (i, &x) in a.iter().enumerate() {
        if x.norm() == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if i + j >= order {
                break;
            }
            out[i + j] += x * y;
        }
    }
    out
}

/// The model space `K_u` of a finite Blaschke product, on the
/// Takenaka-Malmquist orthonormal basis.
#[derive(Debug, Clone)]
pub struct ModelSpaceKu {
    pub blaschke: BlaschkeProduct,
    /// Taylor truncation order of the ambient Hardy space.
    pub ambient_order: usize,
    /// `N x d`: column j holds the Taylor coefficients of the j-th basis
    /// function.
    pub basis: ComplexMatrix,
    /// The conjugation on basis coordinates: `C(v) = conj_matrix * conj(v)`.
    pub conj_matrix: ComplexMatrix,
    /// Coordinates of the reproducing kernel at 0, `k_0 = 1 - conj(u(0)) u`.
    pub k0: ComplexMatrix,
    /// Coordinates of `C(k_0)`.
    pub k0_tilde: ComplexMatrix,
    /// Largest numerical defect observed while building (orthonormality,
    /// involution, kernel reproduction).
    pub tail_bound: f64,
    /// Taylor coefficients of `u` to order `2N`, cached for the conjugation.
    u_taylor2: Vec<C64>,
}

impl ModelSpaceKu {
    pub fn degree(&self) -> usize {
        self.blaschke.degree()
    }

    /// Basis coordinates of an ambient Taylor coefficient vector.
    pub fn project(&self, ambient: &ComplexMatrix) -> ComplexMatrix {
        self.basis.adjoint() * ambient
    }

    /// Ambient Taylor coefficients of a coordinate vector.
    pub fn embed(&self, coords: &ComplexMatrix) -> ComplexMatrix {
        &self.basis * coords
    }

    /// The conjugation applied to a coordinate vector (antilinear).
    pub fn conjugate(&self, coords: &ComplexMatrix) -> ComplexMatrix {
        &self.conj_matrix * coords.map(|z| z.conj())
    }

    /// Applies the conjugation to ambient Taylor coefficients:
    /// `(Cg)_t = sum_k u_{t+k+1} conj(g_k)`.
    fn conjugate_ambient(&self, g: &ComplexMatrix) -> ComplexMatrix {
        let n = self.ambient_order;
        ComplexMatrix::from_fn(n, 1, |t, _| {
            let mut acc = cr(0.0);
            for k in 0..n {
                let idx = t + k + 1;
                if idx < self.u_taylor2.len() {
                    acc += self.u_taylor2[idx] * g[(k, 0)].conj();
                }
            }
            acc
        })
    }
}

/// Builds the model space, auto-raising the ambient order until all Taylor
/// tails are below the budget.
pub fn build_model_space(u: &BlaschkeProduct, ambient_order: usize) -> Result<ModelSpaceKu> {
    let d = u.degree();
    let rho = u.max_zero_modulus();
    let tail_order = if rho > 0.0 {
        (TAIL_BUDGET.ln() / rho.ln()).ceil() as usize
    } else {
        0
    };
    let n = ambient_order.max(tail_order + d + 8);

    // Takenaka-Malmquist basis: e_j = sqrt(1-|a_j|^2)/(1 - conj(a_j) z)
    // times the partial product of the first j factors
    let mut basis = mat::zeros(n, d);
    let mut partial = vec![cr(0.0); n];
    partial[0] = cr(1.0);
    for (j, &a) in u.zeros().iter().enumerate() {
        let mut cauchy = vec![cr(0.0); n];
        let mut pow = cr(1.0);
        for coeff in cauchy.iter_mut() {
            *coeff = pow;
            pow *= a.conj();
        }
        let col = mul_truncated(&partial, &cauchy, n);
        let scale = cr((1.0 - a.norm_sqr()).sqrt());
        for t in 0..n {
            basis[(t, j)] = scale * col[t];
        }
        partial = mul_truncated(&partial, &factor_taylor(a, n), n);
    }
    let mut tail_bound = mat::orthonormality_defect(&basis);

    let u_taylor2 = u.taylor(2 * n + 1);
    let mut space = ModelSpaceKu {
        blaschke: u.clone(),
        ambient_order: n,
        basis,
        conj_matrix: mat::zeros(d, d),
        k0: mat::zeros(d, 1),
        k0_tilde: mat::zeros(d, 1),
        tail_bound: 0.0,
        u_taylor2,
    };

    // conjugation on the basis: column j holds the coordinates of C(e_j)
    let mut conj_matrix = mat::zeros(d, d);
    for j in 0..d {
        let e_j = space.basis.column(j).into_owned();
        let e_j = ComplexMatrix::from_fn(n, 1, |t, _| e_j[t]);
        let image = space.conjugate_ambient(&e_j);
        // the image lies in K_u up to tails; record the leakage
        let coords = space.project(&image);
        let back = space.embed(&coords);
        tail_bound = tail_bound.max((&back - &image).norm());
        conj_matrix.view_mut((0, j), (d, 1)).copy_from(&coords);
    }
    space.conj_matrix = conj_matrix;

    // involution and antiunitarity defects
    let cc = &space.conj_matrix * space.conj_matrix.map(|z| z.conj());
    tail_bound = tail_bound.max((cc - mat::identity(d)).norm());
    tail_bound = tail_bound.max(mat::orthonormality_defect(&space.conj_matrix));

    // k_0 = 1 - conj(u(0)) u
    let u0 = space.u_taylor2[0];
    let k0_ambient = ComplexMatrix::from_fn(n, 1, |t, _| {
        let base = if t == 0 { cr(1.0) } else { cr(0.0) };
        base - u0.conj() * space.u_taylor2[t]
    });
    let k0 = space.project(&k0_ambient);
    tail_bound = tail_bound.max((space.embed(&k0) - &k0_ambient).norm());
    // kernel reproduction on a circle grid: k_0(z) = 1 - conj(u(0)) u(z)
    for z in mat::unit_circle(16) {
        let mut val = cr(0.0);
        let emb = space.embed(&k0);
        let mut pow = cr(1.0);
        for t in 0..n {
            val += emb[(t, 0)] * pow;
            pow *= z;
        }
        let direct = cr(1.0) - u0.conj() * u.eval(z);
        tail_bound = tail_bound.max((val - direct).norm());
    }
    space.k0_tilde = space.conjugate(&k0);
    space.k0 = k0;
    space.tail_bound = tail_bound;
    Ok(space)
}

/// The truncated Toeplitz operator `A_phi = P_u T_phi |_{K_u}` on the
/// Takenaka-Malmquist basis, for a scalar Laurent symbol.
pub fn truncated_toeplitz(space: &ModelSpaceKu, phi: &LaurentSymbol) -> Result<ComplexMatrix> {
    if phi.dim_e() != 1 {
        return Err(Error::DimensionMismatch {
            context: "truncated Toeplitz symbols are scalar here".into(),
        });
    }
    let n = space.ambient_order;
    let band = phi.bandwidth();
    if 2 * band >= n {
        return Err(Error::BandwidthTooLarge {
            bandwidth: band,
            order: n,
        });
    }
    let t_phi = hardy::toeplitz_matrix(phi, n);
    Ok(space.basis.adjoint() * t_phi * &space.basis)
}

/// The compressed shift `A_z` of a model space.
pub fn shift_operator(space: &ModelSpaceKu) -> Result<ComplexMatrix> {
    truncated_toeplitz(space, &LaurentSymbol::shift(1))
}

/// Report on the conjugation and rank-one defect identities.
#[derive(Debug, Clone)]
pub struct ConjugationReport {
    pub pass: bool,
    /// `‖C A_phi C - A_phi^*‖`.
    pub conj_identity_dev: f64,
    /// `‖C C - I‖` (involution, as an antilinear square).
    pub involution_dev: f64,
    /// `‖C^* C - I‖` (antiunitarity).
    pub antiunitary_dev: f64,
    /// `‖(I - A_z A_z^*) - k_0 k_0^*‖`.
    pub defect_star_dev: f64,
    /// `‖(I - A_z^* A_z) - k~_0 k~_0^*‖`.
    pub defect_dev: f64,
    pub tol: f64,
}

/// Checks `C A_phi C = A_phi^*` and the rank-one defect identities of the
/// compressed shift.
pub fn conjugation_identity_check(
    space: &ModelSpaceKu,
    phi: &LaurentSymbol,
    tol: f64,
) -> Result<ConjugationReport> {
    let d = space.degree();
    let a_phi = truncated_toeplitz(space, phi)?;
    let a_z = shift_operator(space)?;
    let c_mat = &space.conj_matrix;
    let cac = c_mat * a_phi.map(|z| z.conj()) * c_mat.map(|z| z.conj());
    let conj_identity_dev = (cac - a_phi.adjoint()).norm();
    let involution_dev = (c_mat * c_mat.map(|z| z.conj()) - mat::identity(d)).norm();
    let antiunitary_dev = mat::orthonormality_defect(c_mat);
    let defect_star_dev =
        (mat::identity(d) - &a_z * a_z.adjoint() - &space.k0 * space.k0.adjoint()).norm();
    let defect_dev = (mat::identity(d)
        - a_z.adjoint() * &a_z
        - &space.k0_tilde * space.k0_tilde.adjoint())
    .norm();
    let worst = conj_identity_dev
        .max(involution_dev)
        .max(antiunitary_dev)
        .max(defect_star_dev)
        .max(defect_dev);
    Ok(ConjugationReport {
        pass: worst <= tol,
        conj_identity_dev,
        involution_dev,
        antiunitary_dev,
        defect_star_dev,
        defect_dev,
        tol,
    })
}

/// Outcome of a symbol-equivalence test.
#[derive(Debug, Clone)]
pub struct EquivalenceResult {
    /// `A_{phi - psi} = 0` within tolerance.
    pub equivalent: bool,
    /// `‖A_{phi - psi}‖`.
    pub operator_norm: f64,
    /// Residual of projecting `phi - psi` onto the truncated span of
    /// `u H^2 + conj(u H^2)` — the independent oracle.
    pub projection_residual: f64,
    /// Whether the two routes agree.
    pub oracle_agrees: bool,
    pub tol: f64,
}

/// Decides `A_phi = A_psi`, which holds iff `phi - psi` lies in
/// `u H^2 + conj(u H^2)`; cross-validated by explicitly projecting the
/// coefficient vector onto that subspace within the Laurent window.
pub fn symbol_equivalence(
    space: &ModelSpaceKu,
    phi: &LaurentSymbol,
    psi: &LaurentSymbol,
    tol: f64,
) -> Result<EquivalenceResult> {
    let diff = phi.add(&psi.scale(cr(-1.0)))?.trimmed(0.0);
    let a_diff = truncated_toeplitz(space, &diff)?;
    let operator_norm = a_diff.norm();
    let scale = 1.0 + diff.max_coeff_norm();
    let equivalent = operator_norm <= tol * scale;

    let projection_residual = span_projection_residual(space, &diff);
    let oracle_says = projection_residual <= tol.sqrt().max(1e-6) * scale;
    Ok(EquivalenceResult {
        equivalent,
        operator_norm,
        projection_residual,
        oracle_agrees: equivalent == oracle_says,
        tol,
    })
}

/// Residual of the best approximation of the symbol by elements of
/// `u H^2 + conj(u H^2)` within a Laurent coefficient window.
fn span_projection_residual(space: &ModelSpaceKu, chi: &LaurentSymbol) -> f64 {
    let band = chi.bandwidth() as i64;
    let rho = space.blaschke.max_zero_modulus();
    let decay = if rho > 0.0 {
        ((1e-10f64).ln() / rho.ln()).ceil() as i64
    } else {
        1
    };
    let deg = space.degree() as i64;
    let k_cut = band + deg + decay + 2;
    let t_max = band + k_cut + deg + 2;
    let rows = (2 * t_max + 1) as usize;
    let cols = 2 * (k_cut as usize + 1);
    let u_coeffs = space.blaschke.taylor((2 * t_max + 2) as usize);

    let idx = |t: i64| (t + t_max) as usize;
    let mut a = mat::zeros(rows, cols);
    for k in 0..=(k_cut as usize) {
        // u z^k: coefficient at t is u_{t-k}
        for t in -t_max..=t_max {
            let s = t - k as i64;
            if s >= 0 && (s as usize) < u_coeffs.len() {
                a[(idx(t), k)] = u_coeffs[s as usize];
            }
        }
        // conj(u z^k): coefficient at t is conj(u_{-t-k})
        for t in -t_max..=t_max {
            let s = -t - k as i64;
            if s >= 0 && (s as usize) < u_coeffs.len() {
                a[(idx(t), k_cut as usize + 1 + k)] = u_coeffs[s as usize].conj();
            }
        }
    }
    let rhs = ComplexMatrix::from_fn(rows, 1, |r, _| {
        let t = r as i64 - t_max;
        chi.coeff(t)[(0, 0)]
    });
    let svd = a.clone().svd(true, true);
    match svd.solve(&rhs, 1e-12) {
        Ok(sol) => (&rhs - a * sol).norm(),
        Err(_) => rhs.norm(),
    }
}

/// Outcome of classifying a pair `(A_phi, A_z)`.
#[derive(Debug, Clone)]
pub struct Classification {
    pub in_ay: bool,
    /// The extracted scalar with `phi ~ conj(c) + c z` modulo
    /// `u H^2 + conj(u H^2)`; `None` when not a member.
    pub c: Option<C64>,
    /// Fundamental-equation residual (the failure witness for
    /// non-members).
    pub residual: f64,
    /// `‖[A_phi, A_z]‖`.
    pub commutator_norm: f64,
    /// Deviation of `A_phi - A_phi^* A_z` from the rank-one form
    /// `conj(c) k~_0 (x) k~_0`.
    pub rank_one_dev: f64,
    /// Converse direction: `phi` and `conj(c) + c z` induce the same
    /// truncated Toeplitz operator.
    pub converse_ok: bool,
    pub tol: f64,
}

/// Classifies the Agler-Young pair `(A_phi, A_z)`: membership holds iff
/// `phi = conj(c) + c z + g` with `g` in `u H^2 + conj(u H^2)`, and then
/// `A_phi` commutes with `A_z`. The scalar is extracted from the rank-one
/// fundamental equation via the conjugated kernel at zero.
pub fn classify_ay_pair(
    space: &ModelSpaceKu,
    phi: &LaurentSymbol,
    tol: f64,
) -> Result<Classification> {
    let a_phi = truncated_toeplitz(space, phi)?;
    let a_z = shift_operator(space)?;
    let pair = OperatorTuple::new(vec![a_phi.clone(), a_z.clone()])?;
    let commutator_norm = mat::commutator(&a_phi, &a_z).norm();
    match crate::ay::solve_fundamental(&pair, tol) {
        Ok(sol) => {
            let sigma = &a_phi - a_phi.adjoint() * &a_z;
            let kt = &space.k0_tilde;
            let kt_norm2 = kt.adjoint() * kt;
            let denom = kt_norm2[(0, 0)].re.powi(2);
            let inner = (kt.adjoint() * &sigma * kt)[(0, 0)];
            let c_bar = inner / cr(denom);
            let c = c_bar.conj();
            let rank_one_dev = (&sigma - kt * kt.adjoint() * c_bar).norm();
            // converse: phi is equivalent to conj(c) + c z
            let linear = LaurentSymbol::new(
                1,
                0,
                vec![
                    ComplexMatrix::from_row_slice(1, 1, &[c_bar]),
                    ComplexMatrix::from_row_slice(1, 1, &[c]),
                ],
            )?;
            let equiv = symbol_equivalence(space, phi, &linear, tol.max(1e-8))?;
            Ok(Classification {
                in_ay: true,
                c: Some(c),
                residual: sol.max_residual(),
                commutator_norm,
                rank_one_dev,
                converse_ok: equiv.equivalent,
                tol,
            })
        }
        Err(Error::NoSolution { residual, .. }) => Ok(Classification {
            in_ay: false,
            c: None,
            residual,
            commutator_norm,
            rank_one_dev: f64::NAN,
            converse_ok: false,
            tol,
        }),
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::c;

    fn scalar_symbol(k_min: i64, values: &[C64]) -> LaurentSymbol {
        let coeffs = values
            .iter()
            .map(|&v| ComplexMatrix::from_row_slice(1, 1, &[v]))
            .collect();
        LaurentSymbol::new(1, k_min, coeffs).unwrap()
    }

    fn space_z2() -> ModelSpaceKu {
        build_model_space(&BlaschkeProduct::monomial(2), 16).unwrap()
    }

    #[test]
    fn monomial_space_has_exact_polynomial_basis() {
        let space = space_z2();
        assert_eq!(space.degree(), 2);
        assert!(space.tail_bound < 1e-13, "tail {}", space.tail_bound);
        // basis {1, z}
        assert!((space.basis[(0, 0)] - cr(1.0)).norm() < 1e-14);
        assert!((space.basis[(1, 1)] - cr(1.0)).norm() < 1e-14);
        // conjugation swaps 1 and z
        let expected = ComplexMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        assert!((&space.conj_matrix - expected).norm() < 1e-13);
        // k_0 = 1, its conjugate is z
        assert!((space.k0[(0, 0)] - cr(1.0)).norm() < 1e-13);
        assert!(space.k0[(1, 0)].norm() < 1e-13);
        assert!((space.k0_tilde[(1, 0)] - cr(1.0)).norm() < 1e-13);
    }

    #[test]
    fn degree_one_space_fixes_constants() {
        let space = build_model_space(&BlaschkeProduct::monomial(1), 8).unwrap();
        assert_eq!(space.degree(), 1);
        assert!((space.conj_matrix[(0, 0)] - cr(1.0)).norm() < 1e-13);
    }

    #[test]
    fn cauchy_kernel_gram_matches_closed_form() {
        let zeros = vec![cr(0.0), cr(0.5)];
        let u = BlaschkeProduct::new(zeros.clone(), cr(1.0)).unwrap();
        let space = build_model_space(&u, 32).unwrap();
        let n = space.ambient_order;
        // kernels at the zeros live in K_u; Gram entries are 1/(1 - conj(w) v)
        let mut kernels = Vec::new();
        for &w in &zeros {
            let vec = ComplexMatrix::from_fn(n, 1, |t, _| w.conj().powu(t as u32));
            let coords = space.project(&vec);
            // projection must not lose mass: k_w is already in K_u
            assert!((space.embed(&coords) - &vec).norm() < 1e-10);
            kernels.push(coords);
        }
        for (j, kj) in kernels.iter().enumerate() {
            for (k, kk) in kernels.iter().enumerate() {
                let gram = (kj.adjoint() * kk)[(0, 0)];
                let direct = cr(1.0) / (cr(1.0) - zeros[j].conj() * zeros[k]);
                assert!((gram - direct).norm() < 1e-10, "({j},{k}): {gram} vs {direct}");
            }
        }
    }

    #[test]
    fn shift_on_z2_is_the_jordan_block() {
        let space = space_z2();
        let a_z = shift_operator(&space).unwrap();
        let expected = ComplexMatrix::from_row_slice(2, 2, &[cr(0.0), cr(0.0), cr(1.0), cr(0.0)]);
        assert!((a_z - expected).norm() < 1e-13);
    }

    #[test]
    fn constant_symbol_gives_identity() {
        let space = space_z2();
        let a = truncated_toeplitz(&space, &scalar_symbol(0, &[cr(1.0)])).unwrap();
        assert!((a - mat::identity(2)).norm() < 1e-13);
    }

    #[test]
    fn linear_symbol_on_z2() {
        let space = space_z2();
        let cc = c(0.7, -0.2);
        let a = truncated_toeplitz(&space, &scalar_symbol(0, &[cc.conj(), cc])).unwrap();
        let expected =
            ComplexMatrix::from_row_slice(2, 2, &[cc.conj(), cr(0.0), cc, cc.conj()]);
        assert!((a - expected).norm() < 1e-13);
    }

    #[test]
    fn conjugation_identities_on_z2_are_exact() {
        let space = space_z2();
        let rep =
            conjugation_identity_check(&space, &scalar_symbol(1, &[cr(1.0)]), 1e-12).unwrap();
        assert!(rep.pass, "{rep:?}");
        let rep1 = conjugation_identity_check(&space, &scalar_symbol(0, &[cr(1.0)]), 1e-12)
            .unwrap();
        assert!(rep1.pass, "{rep1:?}");
    }

    #[test]
    fn conjugation_identities_on_random_degree3() {
        let zeros = vec![c(0.3, 0.2), c(-0.4, 0.1), c(0.0, -0.55)];
        let u = BlaschkeProduct::new(zeros, c(0.6, 0.8)).unwrap();
        let space = build_model_space(&u, 16).unwrap();
        let phi = scalar_symbol(-2, &[c(0.2, 0.1), c(-0.3, 0.4), cr(0.15), c(0.0, -0.2), c(0.5, 0.0)]);
        let rep = conjugation_identity_check(&space, &phi, 1e-8).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn adjoint_symbol_gives_adjoint_operator() {
        let space = space_z2();
        let phi = scalar_symbol(-1, &[c(0.2, 0.3), cr(0.4), c(-0.1, 0.6)]);
        let a = truncated_toeplitz(&space, &phi).unwrap();
        let a_star = truncated_toeplitz(&space, &phi.adjoint()).unwrap();
        assert!((a.adjoint() - a_star).norm() < 1e-13);
    }

    #[test]
    fn symbol_equivalence_basics_on_z2() {
        let space = space_z2();
        let phi = scalar_symbol(0, &[c(0.3, 0.1), cr(0.2)]);
        let same = symbol_equivalence(&space, &phi, &phi, 1e-10).unwrap();
        assert!(same.equivalent && same.oracle_agrees, "{same:?}");
        // z^2 is in u H^2
        let shifted = phi.add(&scalar_symbol(2, &[cr(1.0)])).unwrap();
        let equiv = symbol_equivalence(&space, &phi, &shifted, 1e-10).unwrap();
        assert!(equiv.equivalent && equiv.oracle_agrees, "{equiv:?}");
        // conj(z) is not
        let shifted_down = phi.add(&scalar_symbol(-1, &[cr(1.0)])).unwrap();
        let non = symbol_equivalence(&space, &phi, &shifted_down, 1e-10).unwrap();
        assert!(!non.equivalent && non.oracle_agrees, "{non:?}");
    }

    #[test]
    fn classify_linear_member_on_z2() {
        let space = space_z2();
        let cc = c(1.0, 1.0);
        let phi = scalar_symbol(0, &[cc.conj(), cc]);
        let out = classify_ay_pair(&space, &phi, 1e-9).unwrap();
        assert!(out.in_ay);
        assert!((out.c.unwrap() - cc).norm() < 1e-12, "{:?}", out.c);
        assert!(out.commutator_norm < 1e-12);
        assert!(out.rank_one_dev < 1e-12);
        assert!(out.converse_ok);
    }

    #[test]
    fn classify_zero_symbol() {
        let space = space_z2();
        let out = classify_ay_pair(&space, &scalar_symbol(0, &[cr(0.0)]), 1e-9).unwrap();
        assert!(out.in_ay);
        assert!(out.c.unwrap().norm() < 1e-12);
        assert!(out.converse_ok);
    }

    #[test]
    fn classify_conjugate_shift_as_non_member() {
        let space = space_z2();
        let out = classify_ay_pair(&space, &scalar_symbol(-1, &[cr(1.0)]), 1e-9).unwrap();
        assert!(!out.in_ay);
        assert!(out.residual > 0.1);
    }

    #[test]
    fn member_with_mass_in_u_h2_recovers_c() {
        // phi = conj(c) + c z + u * (2 - z) + conj(u * 3 z)
        let zeros = vec![c(0.2, -0.3), cr(0.45)];
        let u = BlaschkeProduct::new(zeros, cr(1.0)).unwrap();
        let cc = c(-0.4, 0.9);
        // enough Taylor terms of u that the truncation tail is negligible,
        // and an ambient order wide enough for the resulting bandwidth
        let n_u = 40usize;
        let space = build_model_space(&u, 2 * (n_u + 2) + 8).unwrap();
        let u_taylor = u.taylor(n_u);
        // assemble the symbol coefficients directly
        let mut coeffs = vec![cr(0.0); 2 * n_u + 2];
        let k_min = -(n_u as i64);
        let at = |k: i64| (k - k_min) as usize;
        let mut vals = coeffs.clone();
        vals[at(0)] += cc.conj();
        vals[at(1)] += cc;
        for (t, &ut) in u_taylor.iter().enumerate() {
            // u * (2 - z)
            vals[at(t as i64)] += ut * cr(2.0);
            vals[at(t as i64 + 1)] -= ut;
            // conj(u * 3 z): coefficient at -(t+1) is conj(3 u_t)
            vals[at(-(t as i64) - 1)] += (ut * cr(3.0)).conj();
        }
        coeffs.copy_from_slice(&vals);
        let phi = scalar_symbol(
            k_min,
            &coeffs,
        );
        let out = classify_ay_pair(&space, &phi, 1e-8).unwrap();
        assert!(out.in_ay, "{out:?}");
        assert!((out.c.unwrap() - cc).norm() < 1e-8, "{:?}", out.c);
        assert!(out.commutator_norm < 1e-9, "{}", out.commutator_norm);
        assert!(out.converse_ok);
    }

    #[test]
    fn degree_one_space_always_classifies_as_member() {
        let u = BlaschkeProduct::new(vec![c(0.3, 0.25)], cr(1.0)).unwrap();
        let space = build_model_space(&u, 16).unwrap();
        for phi in [
            scalar_symbol(-1, &[c(0.8, 0.1), cr(0.0), c(0.2, -0.7)]),
            scalar_symbol(0, &[cr(1.0)]),
            scalar_symbol(-2, &[cr(0.5), cr(0.0), cr(0.0), cr(0.0), cr(0.5)]),
        ] {
            let out = classify_ay_pair(&space, &phi, 1e-8).unwrap();
            assert!(out.in_ay, "{out:?}");
            assert!(out.converse_ok, "{out:?}");
        }
    }

    #[test]
    fn blaschke_eval_matches_taylor_on_disc_boundary_of_convergence() {
        let u = BlaschkeProduct::new(vec![c(0.4, 0.2), cr(-0.3)], c(0.0, 1.0)).unwrap();
        let taylor = u.taylor(200);
        // evaluate the series well inside the disc where it converges fast
        let z = c(0.3, -0.2);
        let mut series = cr(0.0);
        let mut pow = cr(1.0);
        for &coeff in &taylor {
            series += coeff * pow;
            pow *= z;
        }
        assert!((series - u.eval(z)).norm() < 1e-12);
    }

    #[test]
    fn zero_near_circle_is_rejected() {
        assert!(matches!(
            BlaschkeProduct::new(vec![cr(1.0 - 1e-10)], cr(1.0)),
            Err(Error::ZeroTooCloseToCircle { .. })
        ));
    }
}
