//! JSON wire formats shared by the CLI and the fixture files.
//!
//! Matrices are `{"rows": r, "cols": c, "data": [[re, im], ...]}` row-major;
//! parsers reject length mismatches and non-finite entries.

use serde::{Deserialize, Serialize};

use crate::ay::{HereditaryMonomial, HereditaryPolynomial};
use crate::error::{Error, Result};
use crate::hardy::LaurentSymbol;
use crate::mat::{c, ComplexMatrix};
use crate::ttoeplitz::BlaschkeProduct;
use crate::tuple::OperatorTuple;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixDto {
    fn from(m: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.nrows() * m.ncols());
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                let z = m[(r, col)];
                data.push([z.re, z.im]);
            }
        }
        MatrixDto {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl TryFrom<&MatrixDto> for ComplexMatrix {
    type Error = Error;

    fn try_from(dto: &MatrixDto) -> Result<ComplexMatrix> {
        if dto.rows == 0 || dto.cols == 0 {
            return Err(Error::InvalidInput("matrix dimensions must be positive".into()));
        }
        if dto.data.len() != dto.rows * dto.cols {
            return Err(Error::InvalidInput(format!(
                "matrix data length {} does not match {}x{}",
                dto.data.len(),
                dto.rows,
                dto.cols
            )));
        }
        for entry in &dto.data {
            if !entry[0].is_finite() || !entry[1].is_finite() {
                return Err(Error::InvalidInput("matrix entries must be finite".into()));
            }
        }
        Ok(ComplexMatrix::from_fn(dto.rows, dto.cols, |r, col| {
            let entry = dto.data[r * dto.cols + col];
            c(entry[0], entry[1])
        }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolDto {
    pub dim_e: usize,
    pub k_min: i64,
    pub k_max: i64,
    pub coeffs: Vec<MatrixDto>,
}

impl From<&LaurentSymbol> for SymbolDto {
    fn from(sym: &LaurentSymbol) -> Self {
        SymbolDto {
            dim_e: sym.dim_e(),
            k_min: sym.k_min(),
            k_max: sym.k_max(),
            coeffs: sym.coeffs().iter().map(MatrixDto::from).collect(),
        }
    }
}

impl TryFrom<&SymbolDto> for LaurentSymbol {
    type Error = Error;

    fn try_from(dto: &SymbolDto) -> Result<LaurentSymbol> {
        if dto.k_max - dto.k_min + 1 != dto.coeffs.len() as i64 {
            return Err(Error::InvalidInput(format!(
                "symbol has {} coefficients but support [{}, {}]",
                dto.coeffs.len(),
                dto.k_min,
                dto.k_max
            )));
        }
        let coeffs: Result<Vec<ComplexMatrix>> =
            dto.coeffs.iter().map(ComplexMatrix::try_from).collect();
        LaurentSymbol::new(dto.dim_e, dto.k_min, coeffs?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TupleDto {
    pub n: usize,
    pub ops: Vec<MatrixDto>,
}

impl From<&OperatorTuple> for TupleDto {
    fn from(t: &OperatorTuple) -> Self {
        TupleDto {
            n: t.n(),
            ops: t.ops().iter().map(MatrixDto::from).collect(),
        }
    }
}

impl TryFrom<&TupleDto> for OperatorTuple {
    type Error = Error;

    fn try_from(dto: &TupleDto) -> Result<OperatorTuple> {
        if dto.n != dto.ops.len() {
            return Err(Error::InvalidInput(format!(
                "tuple declares n = {} but has {} operators",
                dto.n,
                dto.ops.len()
            )));
        }
        let ops: Result<Vec<ComplexMatrix>> =
            dto.ops.iter().map(ComplexMatrix::try_from).collect();
        OperatorTuple::new(ops?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialDto {
    pub coeff: [f64; 2],
    pub star: Vec<usize>,
    pub plain: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HereditaryDto {
    pub monomials: Vec<MonomialDto>,
}

impl From<&HereditaryPolynomial> for HereditaryDto {
    fn from(h: &HereditaryPolynomial) -> Self {
        HereditaryDto {
            monomials: h
                .monomials
                .iter()
                .map(|m| MonomialDto {
                    coeff: [m.coeff.re, m.coeff.im],
                    star: m.star.clone(),
                    plain: m.plain.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&HereditaryDto> for HereditaryPolynomial {
    type Error = Error;

    fn try_from(dto: &HereditaryDto) -> Result<HereditaryPolynomial> {
        let monomials = dto
            .monomials
            .iter()
            .map(|m| {
                if !m.coeff[0].is_finite() || !m.coeff[1].is_finite() {
                    return Err(Error::InvalidInput("monomial coefficient not finite".into()));
                }
                Ok(HereditaryMonomial {
                    coeff: c(m.coeff[0], m.coeff[1]),
                    star: m.star.clone(),
                    plain: m.plain.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HereditaryPolynomial::new(monomials))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlaschkeDto {
    pub zeros: Vec<[f64; 2]>,
    #[serde(default = "default_constant")]
    pub constant: [f64; 2],
}

fn default_constant() -> [f64; 2] {
    [1.0, 0.0]
}

impl From<&BlaschkeProduct> for BlaschkeDto {
    fn from(u: &BlaschkeProduct) -> Self {
        BlaschkeDto {
            zeros: u.zeros().iter().map(|z| [z.re, z.im]).collect(),
            constant: [u.constant().re, u.constant().im],
        }
    }
}

impl TryFrom<&BlaschkeDto> for BlaschkeProduct {
    type Error = Error;

    fn try_from(dto: &BlaschkeDto) -> Result<BlaschkeProduct> {
        let zeros = dto.zeros.iter().map(|z| c(z[0], z[1])).collect();
        BlaschkeProduct::new(zeros, c(dto.constant[0], dto.constant[1]))
    }
}
