//! Operator tuples `(S_1, ..., S_n)` acting on one finite-dimensional space.

use crate::error::{Error, Result};
use crate::mat::{self, ComplexMatrix};

/// An n-tuple of square matrices of equal size, n >= 2. Indexing follows the
/// mathematical convention: `op(1)` through `op(n)`, with `op(n)` the
/// distinguished contraction slot.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorTuple {
    ops: Vec<ComplexMatrix>,
    dim: usize,
}

impl OperatorTuple {
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        if ops.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "an operator tuple needs n >= 2 components, got {}",
                ops.len()
            )));
        }
        let dim = ops[0].nrows();
        for (k, op) in ops.iter().enumerate() {
            if op.nrows() != op.ncols() {
                return Err(Error::NonSquare {
                    rows: op.nrows(),
                    cols: op.ncols(),
                });
            }
            if op.nrows() != dim {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "tuple component {} is {}x{}, expected {}x{}",
                        k + 1,
                        op.nrows(),
                        op.ncols(),
                        dim,
                        dim
                    ),
                });
            }
            if !mat::entries_finite(op) {
                return Err(Error::InvalidInput(format!(
                    "tuple component {} has non-finite entries",
                    k + 1
                )));
            }
        }
        Ok(Self { ops, dim })
    }

    pub fn n(&self) -> usize {
        self.ops.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// 1-based component access; `op(n)` is the last component.
    pub fn op(&self, index: usize) -> &ComplexMatrix {
        assert!(index >= 1 && index <= self.ops.len(), "tuple index {index}");
        &self.ops[index - 1]
    }

    pub fn last(&self) -> &ComplexMatrix {
        self.ops.last().unwrap()
    }

    pub fn ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// The adjoint tuple `(S_1*, ..., S_n*)`.
    pub fn adjoint(&self) -> OperatorTuple {
        OperatorTuple {
            ops: self.ops.iter().map(|m| m.adjoint()).collect(),
            dim: self.dim,
        }
    }

    /// Product `S_{i_1} S_{i_2} ... S_{i_k}`; the empty word is the identity.
    pub fn word_product(&self, word: &[usize]) -> Result<ComplexMatrix> {
        let mut acc = mat::identity(self.dim);
        for &letter in word {
            if letter < 1 || letter > self.ops.len() {
                return Err(Error::IndexOutOfRange {
                    index: letter,
                    n: self.ops.len(),
                });
            }
            acc = acc * &self.ops[letter - 1];
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::cr;

    fn fixture() -> OperatorTuple {
        let a = ComplexMatrix::from_row_slice(2, 2, &[cr(1.0), cr(2.0), cr(0.0), cr(1.0)]);
        let b = ComplexMatrix::from_row_slice(2, 2, &[cr(0.0), cr(0.0), cr(1.0), cr(0.0)]);
        OperatorTuple::new(vec![a, b]).unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let t = fixture();
        assert_eq!(t.word_product(&[]).unwrap(), mat::identity(2));
    }

    #[test]
    fn single_letter_word_is_the_operator() {
        let t = fixture();
        assert_eq!(&t.word_product(&[2]).unwrap(), t.op(2));
    }

    #[test]
    fn two_letter_word_matches_direct_multiplication() {
        let t = fixture();
        let direct = t.op(1) * t.op(2);
        assert_eq!(t.word_product(&[1, 2]).unwrap(), direct);
    }

    #[test]
    fn out_of_range_letter_rejected() {
        let t = fixture();
        assert!(matches!(
            t.word_product(&[3]),
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        ));
        assert!(matches!(
            t.word_product(&[0]),
            Err(Error::IndexOutOfRange { index: 0, n: 2 })
        ));
    }

    #[test]
    fn tuple_needs_two_components() {
        let a = mat::identity(2);
        assert!(OperatorTuple::new(vec![a]).is_err());
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let a = mat::identity(2);
        let b = mat::identity(3);
        assert!(matches!(
            OperatorTuple::new(vec![a, b]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
