//! Finitely supported operator-valued Laurent symbols, block Toeplitz
//! truncations of Hardy-space operators, and the canonical Agler-Young
//! isometries built from fundamental-function tuples.
//!
//! Symbols are coefficient lists `{A_k}` for `k` in `[k_min, k_max]`; the
//! Toeplitz truncation of order `N` places `A_{j-k}` at block `(j, k)`.
//! Every product of truncations is exact on an interior window determined by
//! the bandwidths, which is what lets theorem checks assert exact equality
//! on interior blocks instead of approximate equality everywhere.

use crate::error::{Error, Result};
use crate::mat::{self, cr, ComplexMatrix, C64};
use crate::tuple::OperatorTuple;

/// Finitely supported Fourier coefficients of an operator-valued symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentSymbol {
    dim_e: usize,
    k_min: i64,
    coeffs: Vec<ComplexMatrix>,
}

impl LaurentSymbol {
    pub fn new(dim_e: usize, k_min: i64, coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        if dim_e == 0 {
            return Err(Error::InvalidInput("dim_e must be positive".into()));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "a symbol needs at least one coefficient".into(),
            ));
        }
        for (j, a) in coeffs.iter().enumerate() {
            if a.nrows() != dim_e || a.ncols() != dim_e {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "coefficient {} is {}x{}, expected {}x{}",
                        k_min + j as i64,
                        a.nrows(),
                        a.ncols(),
                        dim_e,
                        dim_e
                    ),
                });
            }
            if !mat::entries_finite(a) {
                return Err(Error::InvalidInput(format!(
                    "coefficient {} has non-finite entries",
                    k_min + j as i64
                )));
            }
        }
        Ok(Self {
            dim_e,
            k_min,
            coeffs,
        })
    }

    /// Analytic symbol with coefficients `A_0, A_1, ...`.
    pub fn analytic(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        let dim_e = coeffs
            .first()
            .map(|a| a.nrows())
            .ok_or_else(|| Error::InvalidInput("a symbol needs at least one coefficient".into()))?;
        Self::new(dim_e, 0, coeffs)
    }

    /// The constant symbol with value `a`.
    pub fn constant(a: ComplexMatrix) -> Result<Self> {
        let dim_e = a.nrows();
        Self::new(dim_e, 0, vec![a])
    }

    pub fn zero(dim_e: usize) -> Self {
        Self {
            dim_e,
            k_min: 0,
            coeffs: vec![mat::zeros(dim_e, dim_e)],
        }
    }

    /// The shift symbol `z` (A_1 = I).
    pub fn shift(dim_e: usize) -> Self {
        Self {
            dim_e,
            k_min: 1,
            coeffs: vec![mat::identity(dim_e)],
        }
    }

    pub fn dim_e(&self) -> usize {
        self.dim_e
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.coeffs.len() as i64 - 1
    }

    /// `max(|k_min|, |k_max|)` after trimming zero edge coefficients.
    pub fn bandwidth(&self) -> usize {
        let t = self.trimmed(0.0);
        t.k_min.unsigned_abs().max(t.k_max().unsigned_abs()) as usize
    }

    pub fn is_analytic(&self) -> bool {
        self.trimmed(0.0).k_min >= 0
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// Coefficient `A_k`, zero outside the stored support.
    pub fn coeff(&self, k: i64) -> ComplexMatrix {
        if k < self.k_min || k > self.k_max() {
            mat::zeros(self.dim_e, self.dim_e)
        } else {
            self.coeffs[(k - self.k_min) as usize].clone()
        }
    }

    /// Drops leading/trailing coefficients of norm at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let mut lo = 0usize;
        let mut hi = self.coeffs.len();
        while hi - lo > 1 && self.coeffs[lo].norm() <= tol {
            lo += 1;
        }
        while hi - lo > 1 && self.coeffs[hi - 1].norm() <= tol {
            hi -= 1;
        }
        Self {
            dim_e: self.dim_e,
            k_min: self.k_min + lo as i64,
            coeffs: self.coeffs[lo..hi].to_vec(),
        }
    }

    /// `phi*(z) = sum A_k^* z^{-k}`, the symbol of the adjoint operator.
    pub fn adjoint(&self) -> Self {
        let k_min = -self.k_max();
        let coeffs = self.coeffs.iter().rev().map(|a| a.adjoint()).collect();
        Self {
            dim_e: self.dim_e,
            k_min,
            coeffs,
        }
    }

    /// Multiplies by `z^power` (shifts all exponents).
    pub fn times_z(&self, power: i64) -> Self {
        Self {
            dim_e: self.dim_e,
            k_min: self.k_min + power,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Pointwise Laurent product `(self * rhs)(z)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim_e != rhs.dim_e {
            return Err(Error::DimensionMismatch {
                context: format!("symbol product: dim_e {} vs {}", self.dim_e, rhs.dim_e),
            });
        }
        let k_min = self.k_min + rhs.k_min;
        let len = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut coeffs = vec![mat::zeros(self.dim_e, self.dim_e); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(Self {
            dim_e: self.dim_e,
            k_min,
            coeffs,
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim_e != rhs.dim_e {
            return Err(Error::DimensionMismatch {
                context: format!("symbol sum: dim_e {} vs {}", self.dim_e, rhs.dim_e),
            });
        }
        let k_min = self.k_min.min(rhs.k_min);
        let k_max = self.k_max().max(rhs.k_max());
        let coeffs = (k_min..=k_max)
            .map(|k| self.coeff(k) + rhs.coeff(k))
            .collect();
        Ok(Self {
            dim_e: self.dim_e,
            k_min,
            coeffs,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim_e: self.dim_e,
            k_min: self.k_min,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Evaluates the symbol at a point of the circle.
    pub fn eval(&self, z: C64) -> ComplexMatrix {
        let mut acc = mat::zeros(self.dim_e, self.dim_e);
        for (j, a) in self.coeffs.iter().enumerate() {
            let k = self.k_min + j as i64;
            acc += a * z.powi(k as i32);
        }
        acc
    }

    /// Max over k of `‖A_k - B_k‖_F`, over the union of supports.
    pub fn coeff_distance(&self, rhs: &Self) -> f64 {
        let k_min = self.k_min.min(rhs.k_min);
        let k_max = self.k_max().max(rhs.k_max());
        (k_min..=k_max)
            .map(|k| (self.coeff(k) - rhs.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

/// Block Toeplitz truncation of `T_phi` at order `N`; block `(j, k)` holds
/// `A_{j-k}`. `exact_cols` is the number of leading block columns on which
/// products against other truncations reproduce the infinite operators.
#[derive(Debug, Clone)]
pub struct TruncatedToeplitz {
    pub symbol: LaurentSymbol,
    pub order: usize,
    pub matrix: ComplexMatrix,
    pub exact_cols: usize,
}

/// Builds the order-`N` block Toeplitz truncation of a symbol.
pub fn toeplitz_truncate(symbol: &LaurentSymbol, order: usize) -> Result<TruncatedToeplitz> {
    let band = symbol.bandwidth();
    if order <= band {
        return Err(Error::OrderTooSmall {
            order,
            required: band + 1,
        });
    }
    let matrix = toeplitz_matrix(symbol, order);
    Ok(TruncatedToeplitz {
        symbol: symbol.clone(),
        order,
        matrix,
        exact_cols: order - band,
    })
}

/// The raw block Toeplitz matrix of a symbol at order `N` (no bandwidth
/// check).
pub fn toeplitz_matrix(symbol: &LaurentSymbol, order: usize) -> ComplexMatrix {
    let e = symbol.dim_e();
    let mut m = mat::zeros(order * e, order * e);
    for d in symbol.k_min()..=symbol.k_max() {
        let a = symbol.coeff(d);
        if a.norm() == 0.0 {
            continue;
        }
        for k in 0..order {
            let j = k as i64 + d;
            if j >= 0 && (j as usize) < order {
                mat::set_block(&mut m, j as usize, k, &a);
            }
        }
    }
    m
}

/// Truncated block shift `T_z` at order `N` with block size `dim_e`.
pub fn block_shift(dim_e: usize, order: usize) -> ComplexMatrix {
    toeplitz_matrix(&LaurentSymbol::shift(dim_e), order)
}

/// Co-analytic extension of an analytic tuple:
/// `phi_i(z) = z f_i(z) + f_{n-i}(z)^*`.
pub fn coanalytic_extension(f: &[LaurentSymbol]) -> Result<Vec<LaurentSymbol>> {
    if f.is_empty() {
        return Err(Error::InvalidInput(
            "co-analytic extension needs at least one function".into(),
        ));
    }
    let dim_e = f[0].dim_e();
    for (j, fi) in f.iter().enumerate() {
        if fi.dim_e() != dim_e {
            return Err(Error::DimensionMismatch {
                context: format!("f_{} has dim_e {}, expected {}", j + 1, fi.dim_e(), dim_e),
            });
        }
        if !fi.is_analytic() {
            return Err(Error::InvalidInput(format!(
                "f_{} is not analytic (k_min = {})",
                j + 1,
                fi.k_min()
            )));
        }
    }
    let m = f.len(); // m = n - 1
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let partner = m - 1 - i; // f_{n-i} in zero-based indexing
        let phi = f[i].times_z(1).add(&f[partner].adjoint())?;
        out.push(phi);
    }
    Ok(out)
}

/// A canonical Agler-Young isometry truncated at order `N`, together with
/// its exactness metadata.
#[derive(Debug, Clone)]
pub struct CanonicalAy {
    pub tuple: OperatorTuple,
    pub order: usize,
    pub dim_e: usize,
    /// Scalar columns on which the isometry relations hold exactly
    /// (all but the last block column).
    pub window_cols: usize,
    pub bandwidth: usize,
    pub symbols: Vec<LaurentSymbol>,
}

/// Builds the truncated canonical Agler-Young isometry
/// `(T_{phi_1}, ..., T_{phi_{n-1}}, T_z)` from an analytic tuple `f`.
pub fn canonical_ay(f: &[LaurentSymbol], order: usize) -> Result<CanonicalAy> {
    let symbols = coanalytic_extension(f)?;
    let dim_e = symbols[0].dim_e();
    let band = symbols
        .iter()
        .map(|s| s.bandwidth())
        .max()
        .unwrap_or(0)
        .max(1);
    if order <= 2 * band {
        return Err(Error::OrderTooSmall {
            order,
            required: 2 * band + 1,
        });
    }
    let mut ops: Vec<ComplexMatrix> = symbols
        .iter()
        .map(|s| toeplitz_matrix(s, order))
        .collect();
    ops.push(block_shift(dim_e, order));
    Ok(CanonicalAy {
        tuple: OperatorTuple::new(ops)?,
        order,
        dim_e,
        window_cols: (order - 1) * dim_e,
        bandwidth: band,
        symbols,
    })
}

/// Reads a symbol back from a block Toeplitz matrix by averaging block
/// diagonals over the interior window (blocks `(j, k)` with
/// `j, k < N - band`).
///
/// Fails with `NotToeplitz` if an interior diagonal varies by more than
/// `tol`, and with `BandExceeded` if interior mass is found beyond the
/// declared band.
pub fn symbol_from_toeplitz(
    t: &ComplexMatrix,
    dim_e: usize,
    band: usize,
    tol: f64,
) -> Result<LaurentSymbol> {
    if t.nrows() != t.ncols() {
        return Err(Error::NonSquare {
            rows: t.nrows(),
            cols: t.ncols(),
        });
    }
    if dim_e == 0 || t.nrows() % dim_e != 0 {
        return Err(Error::DimensionMismatch {
            context: format!("matrix size {} is not a multiple of dim_e {}", t.nrows(), dim_e),
        });
    }
    let order = t.nrows() / dim_e;
    if order < 2 * band + 1 {
        return Err(Error::OrderTooSmall {
            order,
            required: 2 * band + 1,
        });
    }
    let window = order - band; // interior blocks have j, k < window
    let b = band as i64;

    // mass beyond the declared band inside the interior window
    let mut beyond = 0.0f64;
    for j in 0..window {
        for k in 0..window {
            let d = j as i64 - k as i64;
            if d.abs() > b {
                beyond = beyond.max(mat::get_block(t, j, k, dim_e).norm());
            }
        }
    }
    if beyond > tol {
        return Err(Error::BandExceeded {
            band,
            mass: beyond,
        });
    }

    let mut coeffs = Vec::with_capacity(2 * band + 1);
    let mut worst = 0.0f64;
    for d in -b..=b {
        let mut blocks: Vec<ComplexMatrix> = Vec::new();
        for k in 0..window {
            let j = k as i64 + d;
            if j >= 0 && (j as usize) < window {
                blocks.push(mat::get_block(t, j as usize, k, dim_e));
            }
        }
        let count = blocks.len();
        let mut mean = mat::zeros(dim_e, dim_e);
        for blk in &blocks {
            mean += blk;
        }
        mean /= cr(count as f64);
        for blk in &blocks {
            worst = worst.max((blk - &mean).norm());
        }
        coeffs.push(mean);
    }
    if worst > tol {
        return Err(Error::NotToeplitz { deviation: worst });
    }
    Ok(LaurentSymbol::new(dim_e, -b, coeffs)?.trimmed(0.0))
}

/// Variant of [`symbol_from_toeplitz`] that discovers the smallest band for
/// which the matrix is Toeplitz-within-window.
pub fn symbol_from_toeplitz_auto(
    t: &ComplexMatrix,
    dim_e: usize,
    tol: f64,
) -> Result<LaurentSymbol> {
    let order = t.nrows() / dim_e.max(1);
    if order == 0 {
        return Err(Error::DimensionMismatch {
            context: "empty matrix".into(),
        });
    }
    let max_band = (order - 1) / 2;
    let mut last_err = Error::NotToeplitz { deviation: f64::NAN };
    for band in 0..=max_band {
        match symbol_from_toeplitz(t, dim_e, band, tol) {
            Ok(sym) => return Ok(sym),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}
