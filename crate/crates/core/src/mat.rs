//! Dense complex matrices and the handful of spectral primitives everything
//! else is built from.
//!
//! All operators live in `ComplexMatrix` (row-major dense, double precision).
//! Norms are Frobenius unless a function name says otherwise; the spectral
//! norm is only used for contraction tests.

use nalgebra::DMatrix;

pub type C64 = nalgebra::Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Complex scalar from real and imaginary parts.
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real scalar embedded in the complex field.
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

pub fn entries_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius norm.
pub fn fro_norm(m: &ComplexMatrix) -> f64 {
    m.norm()
}

/// Largest singular value; 0 for empty matrices.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    m.clone().singular_values().max()
}

/// Hermitian part `(M + M*)/2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * cr(0.5)
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending
/// with matching eigenvector columns. The input is hermitized first so tiny
/// asymmetries from accumulated rounding do not leak into the solver.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let values: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn lambda_max_hermitian(m: &ComplexMatrix) -> f64 {
    let eig = hermitize(m).symmetric_eigen();
    eig.eigenvalues.max()
}

pub fn lambda_min_hermitian(m: &ComplexMatrix) -> f64 {
    let eig = hermitize(m).symmetric_eigen();
    eig.eigenvalues.min()
}

/// Spectral radius via complex Schur form, falling back to the real
/// `[[X, -Y], [Y, X]]` embedding when the complex iteration stalls.
pub fn spectral_radius(m: &ComplexMatrix) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "spectral radius of a non-square matrix");
    if n == 0 {
        return 0.0;
    }
    if let Some(schur) = m.clone().try_schur(1e-14, 200 * n.max(10)) {
        let (_, t) = schur.unpack();
        return (0..n).map(|j| t[(j, j)].norm()).fold(0.0, f64::max);
    }
    let embed = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let (rb, ri) = (r / n, r % n);
        let (cb, ci) = (c / n, c % n);
        match (rb, cb) {
            (0, 0) | (1, 1) => m[(ri, ci)].re,
            (0, 1) => -m[(ri, ci)].im,
            _ => m[(ri, ci)].im,
        }
    });
    embed
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `‖B*B - I‖` for a matrix whose columns should be orthonormal.
pub fn orthonormality_defect(basis: &ComplexMatrix) -> f64 {
    let k = basis.ncols();
    (basis.adjoint() * basis - identity(k)).norm()
}

/// Multiply each column by a unimodular scalar so its largest-modulus entry
/// becomes positive real. Makes eigen- and null-space bases reproducible.
pub fn fix_column_phases(m: &mut ComplexMatrix) {
    for mut col in m.column_iter_mut() {
        let mut best = 0usize;
        let mut best_mod = -1.0f64;
        for (idx, z) in col.iter().enumerate() {
            if z.norm() > best_mod + 1e-14 {
                best_mod = z.norm();
                best = idx;
            }
        }
        if best_mod > 1e-300 {
            let phase = col[best] / cr(col[best].norm());
            let scale = phase.conj();
            for z in col.iter_mut() {
                *z *= scale;
            }
        }
    }
}

/// Orthonormal basis of the range of `m`: left singular vectors whose
/// singular value exceeds `cutoff`.
pub fn range_basis(m: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    if m.nrows() == 0 || m.ncols() == 0 {
        return zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.as_ref().unwrap();
    let kept: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&j| svd.singular_values[j] > cutoff)
        .collect();
    let mut basis = ComplexMatrix::from_fn(m.nrows(), kept.len(), |r, c| u[(r, kept[c])]);
    fix_column_phases(&mut basis);
    basis
}

/// Orthonormal basis of the kernel of `m`, computed as the orthogonal
/// complement of the range of `m*`.
pub fn kernel_basis(m: &ComplexMatrix, cutoff: f64) -> ComplexMatrix {
    let cols = m.ncols();
    if m.nrows() == 0 || cols == 0 {
        return identity(cols);
    }
    let row_space = range_basis(&m.adjoint(), cutoff);
    orthonormal_complement(&row_space)
}

/// Orthonormal basis of the orthogonal complement of the (orthonormal)
/// columns of `basis`.
pub fn orthonormal_complement(basis: &ComplexMatrix) -> ComplexMatrix {
    let dim = basis.nrows();
    let proj_out = identity(dim) - basis * basis.adjoint();
    range_basis(&proj_out, 0.5)
}

/// Writes `block` into `m` at block position `(row, col)` measured in units
/// of the block size.
pub fn set_block(m: &mut ComplexMatrix, row: usize, col: usize, block: &ComplexMatrix) {
    m.view_mut(
        (row * block.nrows(), col * block.ncols()),
        (block.nrows(), block.ncols()),
    )
    .copy_from(block);
}

/// Extracts the `size x size` block at block position `(row, col)`.
pub fn get_block(m: &ComplexMatrix, row: usize, col: usize, size: usize) -> ComplexMatrix {
    m.view((row * size, col * size), (size, size)).into_owned()
}

/// `count` equally spaced points on the unit circle starting at 1.
pub fn unit_circle(count: usize) -> Vec<C64> {
    (0..count)
        .map(|j| {
            let t = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            c(t.cos(), t.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_eigen_sorted_and_reconstructs() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[cr(2.0), c(0.0, 1.0), c(0.0, -1.0), cr(3.0)]);
        let (vals, vecs) = hermitian_eigen(&m);
        assert!(vals[0] >= vals[1]);
        let d = ComplexMatrix::from_fn(2, 2, |r, c_| if r == c_ { cr(vals[r]) } else { cr(0.0) });
        let rec = &vecs * d * vecs.adjoint();
        assert!((rec - m).norm() < 1e-12);
    }

    #[test]
    fn spectral_radius_of_nilpotent_is_zero() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(0.0), cr(0.0)]);
        assert!(spectral_radius(&m) < 1e-7);
    }

    #[test]
    fn spectral_radius_of_scaled_unitary() {
        let u = ComplexMatrix::from_row_slice(2, 2, &[cr(0.0), cr(-1.0), cr(1.0), cr(0.0)]);
        assert!((spectral_radius(&(u * cr(0.7))) - 0.7).abs() < 1e-10);
    }

    #[test]
    fn kernel_basis_of_shift() {
        // lower shift on C^3: kernel of its adjoint is e_0
        let mut s = zeros(3, 3);
        s[(1, 0)] = cr(1.0);
        s[(2, 1)] = cr(1.0);
        let k = kernel_basis(&s.adjoint(), 1e-12);
        assert_eq!(k.ncols(), 1);
        assert!((k[(0, 0)] - cr(1.0)).norm() < 1e-12);
    }

    #[test]
    fn complement_fills_dimension() {
        let mut b = zeros(3, 1);
        b[(0, 0)] = cr(1.0);
        let comp = orthonormal_complement(&b);
        assert_eq!(comp.ncols(), 2);
        assert!(orthonormality_defect(&comp) < 1e-12);
        assert!((b.adjoint() * &comp).norm() < 1e-12);
    }
}
