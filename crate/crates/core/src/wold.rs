//! Wold decomposition of Agler-Young isometries, fundamental-function
//! extraction, the rank-one determinant-type relation, the `C_i`
//! factorization of pure Agler-Young isometries, extension to an
//! Agler-Young unitary, and symbol transfer under inner multipliers.
//!
//! Inputs are truncated representatives: a matrix tuple that is an
//! Agler-Young isometry away from the truncation edge, structured as
//! (finite unitary block) ⊕ (truncated block Toeplitz part) under an
//! unknown unitary mixing. Nothing here assumes the split is axis-aligned.
//! The unitary part is recovered as `ran(S_n^p)` — exact at finite order
//! because the truncated shift is nilpotent — and the pure part is put in
//! shift coordinates by marching the wandering space forward.

use crate::ay;
use crate::error::{Error, Result};
use crate::hardy::{self, LaurentSymbol};
use crate::mat::{self, ComplexMatrix};
use crate::tuple::OperatorTuple;

/// Result of the Wold decomposition of a truncated Agler-Young isometry.
#[derive(Debug, Clone)]
pub struct WoldResult {
    /// Orthogonal projection onto the recovered unitary part.
    pub p_unitary: ComplexMatrix,
    /// Orthonormal basis of the unitary part (dim x d1).
    pub unitary_basis: ComplexMatrix,
    /// Restriction of the tuple to the unitary part, when it is nontrivial.
    pub unitary_tuple: Option<OperatorTuple>,
    /// Ordered shift basis of the pure part: block k holds `S_n^k` applied
    /// to the wandering space (dim x blocks*multiplicity).
    pub shift_basis: ComplexMatrix,
    /// Dimension of the wandering space `ker(S_n^*|pure)`.
    pub multiplicity: usize,
    /// Number of shift blocks in the pure part.
    pub blocks: usize,
    /// Recovered Toeplitz symbols `phi_i` of the pure restrictions, on the
    /// wandering basis.
    pub symbols: Vec<LaurentSymbol>,
    /// Analytic fundamental functions `f_i` (strictly positive part of
    /// `phi_i`, shifted down by one).
    pub f_recovered: Vec<LaurentSymbol>,
    /// Interior blocks of the pure part (blocks minus the largest recovered
    /// bandwidth).
    pub interior_window: usize,
    pub deviations: WoldDeviations,
    pub tol: f64,
}

/// Per-step deviations of a Wold decomposition.
#[derive(Debug, Clone, Default)]
pub struct WoldDeviations {
    /// `max(‖P^2 - P‖, ‖P - P^*‖)` for the recovered projection.
    pub projection: f64,
    /// `max_i ‖[P, S_i]‖` (the reducing property).
    pub reducing: f64,
    /// Worst Agler-Young unitary deviation of the restriction to the
    /// unitary part.
    pub unitary_part: f64,
    /// Deviation of `W^* S_n W` from the exact block shift.
    pub shift: f64,
    /// Orthonormality defect of the assembled shift basis.
    pub basis: f64,
    /// Mirror law `A_k^{(i)} = (A_{1-k}^{(n-i)})^*` for k <= 0.
    pub mirror: f64,
    /// Isometry relations of the recovered pure tuple on the interior.
    pub relations_interior: f64,
}

impl WoldDeviations {
    pub fn worst(&self) -> f64 {
        [
            self.projection,
            self.reducing,
            self.unitary_part,
            self.shift,
            self.basis,
            self.mirror,
            self.relations_interior,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn structural_tol(tol: f64) -> f64 {
    tol.sqrt().max(1e-7)
}

/// Wold decomposition: recovers the unitary part as `ran(S_n^max_power)`,
/// orders the pure part into shift coordinates, and reads the fundamental
/// functions off the block diagonals.
pub fn wold_decompose(tuple: &OperatorTuple, max_power: usize, tol: f64) -> Result<WoldResult> {
    let m = tuple.dim();
    let n = tuple.n();
    let s_n = tuple.last();
    let stol = structural_tol(tol);

    let norm = mat::spectral_norm(s_n);
    if norm > 1.0 + stol {
        return Err(Error::NotAyIsometry {
            context: format!("last component has spectral norm {norm}"),
        });
    }
    // isometry up to the truncation edge: S_n^* S_n must be a projection
    let gram = s_n.adjoint() * s_n;
    let idem = (&gram * &gram - &gram).norm();
    if idem > stol {
        return Err(Error::NotAyIsometry {
            context: format!("S_n^* S_n is not a projection: deviation {idem:.3e}"),
        });
    }
    if max_power == 0 {
        return Err(Error::InvalidInput("max_power must be positive".into()));
    }

    // ran(S_n^k) is decreasing and the truncated-shift part is nilpotent,
    // so the intersection over k <= p is ran(S_n^p); p must have saturated
    let mut power = mat::identity(m);
    for _ in 0..max_power {
        power = s_n * power;
    }
    let rank_p = count_large_singular_values(&power);
    let rank_next = count_large_singular_values(&(s_n * &power));
    if rank_next != rank_p {
        return Err(Error::WindowTooSmall {
            context: format!(
                "ran(S_n^k) still shrinking at k = {max_power}: rank {rank_p} -> {rank_next}"
            ),
        });
    }
    let d1 = rank_p;
    let unitary_basis = if d1 == m {
        mat::identity(m)
    } else {
        mat::range_basis(&power, 0.5)
    };
    let p_unitary = &unitary_basis * unitary_basis.adjoint();

    let mut dev = WoldDeviations {
        projection: (&p_unitary * &p_unitary - &p_unitary)
            .norm()
            .max((&p_unitary - p_unitary.adjoint()).norm()),
        ..Default::default()
    };
    for op in tuple.ops() {
        dev.reducing = dev.reducing.max(mat::commutator(&p_unitary, op).norm());
    }
    if dev.reducing > stol {
        return Err(Error::NotAyIsometry {
            context: format!(
                "recovered unitary part is not reducing: deviation {:.3e}",
                dev.reducing
            ),
        });
    }

    let unitary_tuple = if d1 > 0 {
        let restricted = OperatorTuple::new(
            tuple
                .ops()
                .iter()
                .map(|op| unitary_basis.adjoint() * op * &unitary_basis)
                .collect(),
        )?;
        let report = ay::is_ay_unitary(&restricted, stol);
        dev.unitary_part = report
            .relation_devs
            .iter()
            .copied()
            .fold(
                report
                    .isometry_dev
                    .max(report.co_isometry_dev.unwrap_or(0.0)),
                f64::max,
            );
        Some(restricted)
    } else {
        None
    };

    if d1 == m {
        return Ok(WoldResult {
            p_unitary,
            unitary_basis,
            unitary_tuple,
            shift_basis: mat::zeros(m, 0),
            multiplicity: 0,
            blocks: 0,
            symbols: Vec::new(),
            f_recovered: Vec::new(),
            interior_window: 0,
            deviations: dev,
            tol,
        });
    }

    let pure_basis = if d1 == 0 {
        mat::identity(m)
    } else {
        mat::orthonormal_complement(&unitary_basis)
    };
    let pure_dim = pure_basis.ncols();
    let v = pure_basis.adjoint() * s_n * &pure_basis;
    // wandering space of the restricted shift
    let wandering = mat::kernel_basis(&v.adjoint(), 0.5);
    let e = wandering.ncols();
    if e == 0 || pure_dim % e != 0 {
        return Err(Error::WindowTooSmall {
            context: format!("pure part of dimension {pure_dim} with wandering multiplicity {e}"),
        });
    }
    let blocks = pure_dim / e;

    // march the wandering space forward: block k is S_n^k applied to it
    let w0 = &pure_basis * &wandering;
    let mut shift_basis = mat::zeros(m, blocks * e);
    let mut acc = w0;
    for k in 0..blocks {
        shift_basis.view_mut((0, k * e), (m, e)).copy_from(&acc);
        acc = s_n * acc;
    }
    dev.basis = mat::orthonormality_defect(&shift_basis);
    if dev.basis > stol {
        return Err(Error::NotAyIsometry {
            context: format!(
                "marched wandering basis is not orthonormal: defect {:.3e}",
                dev.basis
            ),
        });
    }

    // read Toeplitz symbols in shift coordinates
    let shift_exact = hardy::block_shift(e, blocks);
    let v_shifted = shift_basis.adjoint() * s_n * &shift_basis;
    dev.shift = (&v_shifted - &shift_exact).norm();

    let mut symbols = Vec::with_capacity(n - 1);
    let mut recovered_ops = Vec::with_capacity(n);
    for i in 1..n {
        let compressed = shift_basis.adjoint() * tuple.op(i) * &shift_basis;
        let extract_tol = stol * (1.0 + compressed.norm());
        let sym = hardy::symbol_from_toeplitz_auto(&compressed, e, extract_tol)?;
        recovered_ops.push(compressed);
        symbols.push(sym);
    }
    recovered_ops.push(v_shifted);
    let recovered = OperatorTuple::new(recovered_ops)?;

    let band = symbols.iter().map(|s| s.bandwidth()).max().unwrap_or(0);
    if blocks <= band {
        return Err(Error::WindowTooSmall {
            context: format!("pure part has {blocks} blocks but bandwidth {band}"),
        });
    }
    let interior_window = blocks - band;

    // mirror law and analytic parts
    let mut f_recovered = Vec::with_capacity(n - 1);
    for i in 1..n {
        let sym = &symbols[i - 1];
        let partner = &symbols[n - 1 - i];
        for k in sym.k_min()..=0 {
            let expected = partner.coeff(1 - k).adjoint();
            dev.mirror = dev.mirror.max((sym.coeff(k) - expected).norm());
        }
        let top = sym.k_max().max(1);
        let coeffs: Vec<ComplexMatrix> = (1..=top).map(|k| sym.coeff(k)).collect();
        f_recovered.push(LaurentSymbol::new(e, 0, coeffs)?.trimmed(0.0));
    }

    // isometry relations of the recovered pure tuple on the interior
    let report = ay::is_ay_isometry(&recovered, tol, Some((blocks - 1) * e));
    dev.relations_interior = report
        .relation_devs
        .iter()
        .copied()
        .fold(report.isometry_dev, f64::max);

    Ok(WoldResult {
        p_unitary,
        unitary_basis,
        unitary_tuple,
        shift_basis,
        multiplicity: e,
        blocks,
        symbols,
        f_recovered,
        interior_window,
        deviations: dev,
        tol,
    })
}

fn count_large_singular_values(m: &ComplexMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    m.clone()
        .singular_values()
        .iter()
        .filter(|&&s| s > 0.5)
        .count()
}

/// Report of the determinant-type relation
/// `S_{n-i}^* - S_i S_n^* = 0_{H_1} ⊕ W (T_{f_i} (I - T_z T_z^*)) W^*`.
#[derive(Debug, Clone)]
pub struct DeterminantReport {
    pub pass: bool,
    /// Deviation on the unitary part per i.
    pub unitary_devs: Vec<f64>,
    /// Deviation against the assembled right-hand side on the pure part.
    pub pure_devs: Vec<f64>,
    /// Norm of the off-diagonal (mixing) blocks, which must vanish.
    pub cross_devs: Vec<f64>,
    pub tol: f64,
}

/// Verifies the determinant-type relation of the decomposition against the
/// original tuple.
pub fn verify_determinant_relation(
    wres: &WoldResult,
    original: &OperatorTuple,
    tol: f64,
) -> DeterminantReport {
    let n = original.n();
    let e = wres.multiplicity;
    let blocks = wres.blocks;
    let mut unitary_devs = Vec::new();
    let mut pure_devs = Vec::new();
    let mut cross_devs = Vec::new();
    for i in 1..n {
        let lhs = original.op(n - i).adjoint() - original.op(i) * original.last().adjoint();
        let u = &wres.unitary_basis;
        let w = &wres.shift_basis;
        unitary_devs.push(if u.ncols() > 0 {
            (u.adjoint() * &lhs * u).norm()
        } else {
            0.0
        });
        if blocks > 0 {
            // the right side is T_{f_i} times the projection onto constants:
            // the first block column carries the f_i coefficients
            let f = &wres.f_recovered[i - 1];
            let mut rhs = mat::zeros(blocks * e, blocks * e);
            for j in 0..blocks {
                let a = f.coeff(j as i64);
                if a.norm() > 0.0 {
                    rhs.view_mut((j * e, 0), (e, e)).copy_from(&a);
                }
            }
            pure_devs.push((w.adjoint() * &lhs * w - rhs).norm());
            if u.ncols() > 0 {
                cross_devs.push(
                    (u.adjoint() * &lhs * w)
                        .norm()
                        .max((w.adjoint() * &lhs * u).norm()),
                );
            }
        } else {
            pure_devs.push(0.0);
        }
    }
    let worst = unitary_devs
        .iter()
        .chain(pure_devs.iter())
        .chain(cross_devs.iter())
        .copied()
        .fold(0.0, f64::max);
    DeterminantReport {
        pass: worst <= tol,
        unitary_devs,
        pure_devs,
        cross_devs,
        tol,
    }
}

/// Report of the `S_i = C_i S_n + C_{n-i}^*` factorization.
#[derive(Debug, Clone)]
pub struct CsReport {
    pub pass: bool,
    /// `‖(C_i S_n + C_{n-i}^* - S_i)|interior‖` per i.
    pub relation_devs: Vec<f64>,
    /// `‖[C_i, S_n]|interior‖` per i.
    pub commutator_devs: Vec<f64>,
    pub interior_cols: usize,
    pub tol: f64,
}

/// Builds `C_i = W T_{f_i} W^*` for a pure Agler-Young isometry and checks
/// `S_i = C_i S_n + C_{n-i}^*` together with `[C_i, S_n] = 0` on the
/// interior window.
pub fn cs_factorize(
    tuple: &OperatorTuple,
    wres: &WoldResult,
) -> Result<(Vec<ComplexMatrix>, CsReport)> {
    if wres.unitary_basis.ncols() > 0 {
        return Err(Error::HasUnitaryPart {
            dim: wres.unitary_basis.ncols(),
        });
    }
    let n = tuple.n();
    let e = wres.multiplicity;
    let w = &wres.shift_basis;
    let tol = wres.tol;
    let interior_cols = wres.interior_window * e;
    let cs: Vec<ComplexMatrix> = wres
        .f_recovered
        .iter()
        .map(|f| w * hardy::toeplitz_matrix(f, wres.blocks) * w.adjoint())
        .collect();
    let mut relation_devs = Vec::new();
    let mut commutator_devs = Vec::new();
    for i in 1..n {
        let reassembled = &cs[i - 1] * tuple.last() + cs[n - 1 - i].adjoint();
        let diff = reassembled - tuple.op(i);
        relation_devs.push(diff.view((0, 0), (diff.nrows(), interior_cols)).norm());
        let comm = mat::commutator(&cs[i - 1], tuple.last());
        commutator_devs.push(comm.view((0, 0), (comm.nrows(), interior_cols)).norm());
    }
    let worst = relation_devs
        .iter()
        .chain(commutator_devs.iter())
        .copied()
        .fold(0.0, f64::max);
    let report = CsReport {
        pass: worst <= structural_tol(tol),
        relation_devs,
        commutator_devs,
        interior_cols,
        tol,
    };
    Ok((cs, report))
}

/// An Agler-Young unitary extension on `H_1 ⊕ (bilateral slots)` together
/// with the isometric embedding of the original space.
#[derive(Debug, Clone)]
pub struct UnitaryExtension {
    pub r_ops: OperatorTuple,
    /// Embedding of the original space: `K x dim(H)`.
    pub embedding: ComplexMatrix,
    /// Bilateral slots run from `-order` to `order`.
    pub order: usize,
    /// `‖(R_i emb - emb S_i)|embedded rows‖` per i (including i = n).
    pub intertwine_devs: Vec<f64>,
    /// Mass of `R_i emb` in the negative slots; nonzero exactly when a
    /// symbol has genuinely negative frequencies.
    pub leakage: f64,
    /// Mass of `R_i emb` in the slots at and beyond the embedded window;
    /// analytic action pushes content forward, so this is expected.
    pub forward_spill: f64,
    /// Agler-Young unitary relations of R on the bilateral interior.
    pub relation_dev: f64,
}

/// Extends the decomposed isometry to an Agler-Young unitary: the unitary
/// part is kept and the pure part is widened to a truncated bilateral
/// sequence space where the symbols act as full Laurent matrices and the
/// last slot acts as the bilateral shift.
pub fn extend_to_unitary(
    wres: &WoldResult,
    original: &OperatorTuple,
    order: usize,
) -> Result<UnitaryExtension> {
    let n = original.n();
    let m = original.dim();
    let d1 = wres.unitary_basis.ncols();
    let e = wres.multiplicity;
    let blocks = wres.blocks;
    if blocks > 0 && order < blocks {
        return Err(Error::OrderTooSmall {
            order,
            required: blocks,
        });
    }
    let slots = 2 * order + 1;
    let dim_k = d1 + slots * e;
    let slot_row = |s: i64| d1 + ((s + order as i64) as usize) * e;

    let mut ops = Vec::with_capacity(n);
    for i in 1..=n {
        let mut r = mat::zeros(dim_k, dim_k);
        if d1 > 0 {
            let u = &wres.unitary_basis;
            r.view_mut((0, 0), (d1, d1))
                .copy_from(&(u.adjoint() * original.op(i) * u));
        }
        if e > 0 {
            if i < n {
                let sym = &wres.symbols[i - 1];
                for s in -(order as i64)..=(order as i64) {
                    for t in -(order as i64)..=(order as i64) {
                        let a = sym.coeff(s - t);
                        if a.norm() > 0.0 {
                            r.view_mut((slot_row(s), slot_row(t)), (e, e)).copy_from(&a);
                        }
                    }
                }
            } else {
                for t in -(order as i64)..(order as i64) {
                    r.view_mut((slot_row(t + 1), slot_row(t)), (e, e))
                        .copy_from(&mat::identity(e));
                }
            }
        }
        ops.push(r);
    }
    let r_ops = OperatorTuple::new(ops)?;

    // embedding: H_1 coordinates on top, pure-part shift coordinates in
    // slots 0..blocks-1
    let mut embedding = mat::zeros(dim_k, m);
    if d1 > 0 {
        embedding
            .view_mut((0, 0), (d1, m))
            .copy_from(&wres.unitary_basis.adjoint());
    }
    for k in 0..blocks {
        let w_block = wres.shift_basis.view((0, k * e), (m, e)).adjoint();
        embedding
            .view_mut((slot_row(k as i64), 0), (e, m))
            .copy_from(&w_block);
    }

    // row regions: embedded (H_1 plus slots 0..blocks-1), negative slots,
    // and the forward region at and beyond the embedded window
    #[derive(Clone, Copy, PartialEq)]
    enum Region {
        Embedded,
        Negative,
        Forward,
    }
    let mut region = vec![Region::Forward; dim_k];
    for r in region.iter_mut().take(d1) {
        *r = Region::Embedded;
    }
    for s in -(order as i64)..=(order as i64) {
        let tag = if s < 0 {
            Region::Negative
        } else if (s as usize) < blocks {
            Region::Embedded
        } else {
            Region::Forward
        };
        let base = slot_row(s);
        for r in region.iter_mut().skip(base).take(e) {
            *r = tag;
        }
    }
    let mut intertwine_devs = Vec::with_capacity(n);
    let mut leakage = 0.0f64;
    let mut forward_spill = 0.0f64;
    for i in 1..=n {
        let image = r_ops.op(i) * &embedding;
        let diff = &image - &embedding * original.op(i);
        let mut inside = 0.0f64;
        let mut negative = 0.0f64;
        let mut forward = 0.0f64;
        for r in 0..dim_k {
            for c_ in 0..m {
                match region[r] {
                    Region::Embedded => inside += diff[(r, c_)].norm_sqr(),
                    Region::Negative => negative += image[(r, c_)].norm_sqr(),
                    Region::Forward => forward += image[(r, c_)].norm_sqr(),
                }
            }
        }
        intertwine_devs.push(inside.sqrt());
        leakage = leakage.max(negative.sqrt());
        forward_spill = forward_spill.max(forward.sqrt());
    }

    // Agler-Young unitary relations of R on the bilateral interior (all but
    // the last slot column)
    let interior = d1 + slots.saturating_sub(1) * e;
    let mut relation_dev = 0.0f64;
    for i in 1..n {
        let diff = r_ops.op(n - i).adjoint() * r_ops.last() - r_ops.op(i);
        relation_dev = relation_dev.max(diff.view((0, 0), (dim_k, interior)).norm());
    }
    let gram = r_ops.last().adjoint() * r_ops.last() - mat::identity(dim_k);
    relation_dev = relation_dev.max(gram.view((0, 0), (dim_k, interior)).norm());

    Ok(UnitaryExtension {
        r_ops,
        embedding,
        order,
        intertwine_devs,
        leakage,
        forward_spill,
        relation_dev,
    })
}

/// Report of a symbol transfer under an inner multiplier.
#[derive(Debug, Clone)]
pub struct TransferReport {
    pub pass: bool,
    /// Max deviation of `theta(z)^* theta(z) - I` on the circle grid.
    pub inner_dev: f64,
    /// Range-invariance leakage per symbol.
    pub invariance_devs: Vec<f64>,
    /// Coefficient deviation of `phi_i theta - theta psi_i` per symbol.
    pub product_devs: Vec<f64>,
    pub tol: f64,
}

/// Transfers symbols through an inner multiplier: computes the compressions
/// `M_theta^* T_{phi_i} M_theta`, verifies they are Toeplitz within the
/// window, extracts `psi_i`, and checks the multiplicative identity
/// `phi_i theta = theta psi_i` as Laurent products.
pub fn symbol_transfer(
    theta: &LaurentSymbol,
    phi: &[LaurentSymbol],
    order: usize,
    tol: f64,
) -> Result<(Vec<LaurentSymbol>, TransferReport)> {
    let e = theta.dim_e();
    if !theta.is_analytic() {
        return Err(Error::InvalidInput(
            "the multiplier symbol must be analytic".into(),
        ));
    }
    for (j, p) in phi.iter().enumerate() {
        if p.dim_e() != e {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "phi_{} has dim_e {}, multiplier has {}",
                    j + 1,
                    p.dim_e(),
                    e
                ),
            });
        }
    }
    // inner on the circle grid
    let mut inner_dev = 0.0f64;
    for z in mat::unit_circle(256) {
        let v = theta.eval(z);
        inner_dev = inner_dev.max((v.adjoint() * v - mat::identity(e)).norm());
    }
    if inner_dev > tol {
        return Err(Error::NotInner {
            deviation: inner_dev,
        });
    }

    let b_theta = theta.bandwidth();
    let b_phi = phi.iter().map(|p| p.bandwidth()).max().unwrap_or(0);
    let b_psi = b_phi + 2 * b_theta;
    if order < 2 * b_psi + 2 {
        return Err(Error::OrderTooSmall {
            order,
            required: 2 * b_psi + 2,
        });
    }

    let t_theta = hardy::toeplitz_matrix(theta, order);
    let proj = &t_theta * t_theta.adjoint();
    let complement = mat::identity(order * e) - &proj;
    let interior_cols = (order - b_psi) * e;

    let mut psis = Vec::with_capacity(phi.len());
    let mut invariance_devs = Vec::with_capacity(phi.len());
    let mut product_devs = Vec::with_capacity(phi.len());
    for (j, p) in phi.iter().enumerate() {
        let t_phi = hardy::toeplitz_matrix(p, order);
        let leak_full = &complement * &t_phi * &proj;
        let leak = leak_full.view((0, 0), (order * e, interior_cols)).norm();
        let scale = 1.0 + p.max_coeff_norm();
        if leak > structural_tol(tol) * scale {
            return Err(Error::NotInvariant {
                index: j + 1,
                leakage: leak,
            });
        }
        invariance_devs.push(leak);
        let compressed = t_theta.adjoint() * &t_phi * &t_theta;
        let psi = hardy::symbol_from_toeplitz(&compressed, e, b_psi, structural_tol(tol) * scale)?
            .trimmed(1e-13);
        let lhs = p.mul(theta)?;
        let rhs = theta.mul(&psi)?;
        product_devs.push(lhs.coeff_distance(&rhs));
        psis.push(psi);
    }
    let worst = product_devs.iter().copied().fold(0.0, f64::max);
    let report = TransferReport {
        pass: worst <= structural_tol(tol),
        inner_dev,
        invariance_devs,
        product_devs,
        tol,
    };
    Ok((psis, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{c, cr, C64};

    fn scalar_symbol(k_min: i64, values: &[C64]) -> LaurentSymbol {
        let coeffs = values
            .iter()
            .map(|&v| ComplexMatrix::from_row_slice(1, 1, &[v]))
            .collect();
        LaurentSymbol::new(1, k_min, coeffs).unwrap()
    }

    fn diag_ay_unitary(thetas: &[f64], radii: &[f64]) -> OperatorTuple {
        let d = thetas.len();
        let s2 = ComplexMatrix::from_fn(d, d, |r, c_| {
            if r == c_ {
                c(thetas[r].cos(), thetas[r].sin())
            } else {
                cr(0.0)
            }
        });
        let s1 = ComplexMatrix::from_fn(d, d, |r, c_| {
            if r == c_ {
                c((thetas[r] / 2.0).cos(), (thetas[r] / 2.0).sin()) * cr(radii[r])
            } else {
                cr(0.0)
            }
        });
        OperatorTuple::new(vec![s1, s2]).unwrap()
    }

    #[test]
    fn pure_canonical_recovers_planted_f() {
        let f = vec![scalar_symbol(0, &[c(0.4, 0.1), c(-0.2, 0.3)])];
        let built = hardy::canonical_ay(&f, 8).unwrap();
        let wres = wold_decompose(&built.tuple, 16, 1e-9).unwrap();
        assert_eq!(wres.unitary_basis.ncols(), 0);
        assert_eq!(wres.multiplicity, 1);
        assert_eq!(wres.blocks, 8);
        assert!(wres.deviations.worst() < 1e-10, "{:?}", wres.deviations);
        // unmixed fixture: the recovered wandering basis is the standard one
        assert!(wres.f_recovered[0].coeff_distance(&f[0]) < 1e-10);
    }

    #[test]
    fn unitary_only_input_has_no_pure_part() {
        let t = diag_ay_unitary(&[0.3, 1.9, 4.4], &[0.5, 1.2, 0.9]);
        let wres = wold_decompose(&t, 8, 1e-9).unwrap();
        assert_eq!(wres.unitary_basis.ncols(), 3);
        assert_eq!(wres.blocks, 0);
        assert!(wres.f_recovered.is_empty());
        assert!(wres.deviations.worst() < 1e-10);
    }

    #[test]
    fn non_isometry_input_is_rejected() {
        let half = mat::identity(2) * cr(0.5);
        let t = OperatorTuple::new(vec![mat::zeros(2, 2), half]).unwrap();
        assert!(matches!(
            wold_decompose(&t, 8, 1e-9),
            Err(Error::NotAyIsometry { .. })
        ));
    }

    #[test]
    fn determinant_relation_constant_f() {
        // n = 2, f constant a: the right side is a times the projection
        // onto constants in shift coordinates
        let a = c(0.3, -0.5);
        let f = vec![scalar_symbol(0, &[a])];
        let built = hardy::canonical_ay(&f, 7).unwrap();
        let wres = wold_decompose(&built.tuple, 14, 1e-9).unwrap();
        let report = verify_determinant_relation(&wres, &built.tuple, 1e-10);
        assert!(report.pass, "{report:?}");
        // direct assembly of the right side for the constant case
        let lhs = built.tuple.op(1).adjoint() - built.tuple.op(1) * built.tuple.op(2).adjoint();
        let mut rhs = mat::zeros(7, 7);
        rhs[(0, 0)] = a;
        let w = &wres.shift_basis;
        assert!((w.adjoint() * lhs * w - rhs).norm() < 1e-10);
    }

    #[test]
    fn determinant_relation_zero_f() {
        let f = vec![scalar_symbol(0, &[cr(0.0)])];
        let built = hardy::canonical_ay(&f, 6).unwrap();
        let wres = wold_decompose(&built.tuple, 12, 1e-9).unwrap();
        let report = verify_determinant_relation(&wres, &built.tuple, 1e-12);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn cs_factorization_on_pure_input() {
        let f = vec![scalar_symbol(0, &[c(0.2, 0.6)])];
        let built = hardy::canonical_ay(&f, 8).unwrap();
        let wres = wold_decompose(&built.tuple, 16, 1e-9).unwrap();
        let (cs, report) = cs_factorize(&built.tuple, &wres).unwrap();
        assert_eq!(cs.len(), 1);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn cs_factorization_rejects_unitary_part() {
        let t = diag_ay_unitary(&[0.4, 2.2], &[0.3, 0.8]);
        let wres = wold_decompose(&t, 8, 1e-9).unwrap();
        assert!(matches!(
            cs_factorize(&t, &wres),
            Err(Error::HasUnitaryPart { dim: 2 })
        ));
    }

    #[test]
    fn extension_of_unitary_only_input_is_identity_embedding() {
        let t = diag_ay_unitary(&[0.7, 3.0], &[1.1, 0.2]);
        let wres = wold_decompose(&t, 8, 1e-9).unwrap();
        let ext = extend_to_unitary(&wres, &t, 2).unwrap();
        // no pure part: the embedding is the identity onto H_1 coordinates
        assert!(ext.intertwine_devs.iter().all(|&d| d < 1e-12));
        assert_eq!(ext.leakage, 0.0);
        assert!((ext.embedding.view((0, 0), (2, 2)) - mat::identity(2)).norm() < 1e-12);
    }

    #[test]
    fn extension_of_constant_pure_part_intertwines_exactly() {
        let f = vec![scalar_symbol(0, &[c(0.35, 0.15)])];
        let built = hardy::canonical_ay(&f, 6).unwrap();
        let wres = wold_decompose(&built.tuple, 12, 1e-9).unwrap();
        let ext = extend_to_unitary(&wres, &built.tuple, 8).unwrap();
        assert!(
            ext.intertwine_devs.iter().all(|&d| d < 1e-10),
            "{:?}",
            ext.intertwine_devs
        );
        // constant symbols are analytic: nothing escapes the embedded window
        assert!(ext.leakage < 1e-12);
        assert!(ext.relation_dev < 1e-10);
    }

    #[test]
    fn extension_with_nonconstant_f_leaks_into_negative_slots() {
        // n = 3 with genuinely negative frequencies in phi_2
        let f1 = scalar_symbol(1, &[c(0.3, 0.2)]);
        let f2 = scalar_symbol(0, &[c(-0.1, 0.5)]);
        let built = hardy::canonical_ay(&[f1, f2], 8).unwrap();
        let wres = wold_decompose(&built.tuple, 16, 1e-9).unwrap();
        let ext = extend_to_unitary(&wres, &built.tuple, 10).unwrap();
        assert!(
            ext.intertwine_devs.iter().all(|&d| d < 1e-9),
            "{:?}",
            ext.intertwine_devs
        );
        assert!(ext.leakage > 0.01, "leakage {}", ext.leakage);
    }

    #[test]
    fn transfer_through_identity_multiplier_is_identity() {
        let phi = scalar_symbol(-1, &[c(0.2, -0.1), cr(0.0), c(0.2, 0.1)]);
        let theta = LaurentSymbol::constant(mat::identity(1)).unwrap();
        let (psis, report) = symbol_transfer(&theta, &[phi.clone()], 12, 1e-9).unwrap();
        assert!(report.pass);
        assert!(psis[0].coeff_distance(&phi) < 1e-12);
    }

    #[test]
    fn transfer_through_shift_fixes_coanalytic_pair_symbol() {
        // theta = z, phi = conj(a) + a z: compression by the shift leaves
        // the symbol unchanged
        let a = c(0.4, 0.7);
        let phi = scalar_symbol(0, &[a.conj(), a]);
        let theta = LaurentSymbol::shift(1);
        let (psis, report) = symbol_transfer(&theta, &[phi.clone()], 12, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(psis[0].coeff_distance(&phi) < 1e-12);
    }

    #[test]
    fn transfer_through_z_squared_verifies_product_identity() {
        let a = c(0.25, -0.6);
        let phi = scalar_symbol(0, &[a.conj(), a]);
        let theta = scalar_symbol(2, &[cr(1.0)]);
        let (psis, report) = symbol_transfer(&theta, &[phi.clone()], 14, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(psis[0].coeff_distance(&phi) < 1e-12);
        // Laurent-product oracle, coefficientwise
        let lhs = phi.mul(&theta).unwrap();
        let rhs = theta.mul(&psis[0]).unwrap();
        assert!(lhs.coeff_distance(&rhs) < 1e-12);
    }

    #[test]
    fn transfer_with_matrix_multiplier_rotates_the_symbol() {
        // theta = diag(z, 1); an upper-triangular constant X keeps the
        // multiplier range invariant and genuinely changes the symbol
        let x12 = c(0.3, 0.4);
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(0.2, 0.1), x12, cr(0.0), c(-0.3, 0.2)]);
        let phi = LaurentSymbol::new(2, 0, vec![x.adjoint(), x.clone()]).unwrap();
        let mut theta0 = mat::zeros(2, 2);
        theta0[(1, 1)] = cr(1.0);
        let mut theta1 = mat::zeros(2, 2);
        theta1[(0, 0)] = cr(1.0);
        let theta = LaurentSymbol::new(2, 0, vec![theta0, theta1]).unwrap();
        let (psis, report) = symbol_transfer(&theta, &[phi.clone()], 14, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(psis[0].coeff_distance(&phi) > 0.1, "psi should differ");
        // psi(1,2) picks up the rotated constant
        assert!((psis[0].coeff(0)[(0, 1)] - x12).norm() < 1e-10);
    }

    #[test]
    fn transfer_rejects_non_inner_multiplier() {
        let theta = scalar_symbol(0, &[cr(0.5)]);
        let phi = scalar_symbol(0, &[cr(1.0)]);
        assert!(matches!(
            symbol_transfer(&theta, &[phi], 10, 1e-9),
            Err(Error::NotInner { .. })
        ));
    }

    #[test]
    fn transfer_rejects_non_invariant_range() {
        // theta = z^2 but phi has a genuinely negative frequency: T_phi
        // pushes the multiplier range down and out
        let phi = scalar_symbol(-1, &[cr(0.8), cr(0.0), cr(0.8)]);
        let theta = scalar_symbol(2, &[cr(1.0)]);
        assert!(matches!(
            symbol_transfer(&theta, &[phi], 16, 1e-9),
            Err(Error::NotInvariant { index: 1, .. })
        ));
    }
}
