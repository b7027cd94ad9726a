//! Derivative matrices and jets.
//!
//! The order-`l` derivative of `g: ℝ^{n_x} → ℝ^{n_y}` is the `n_y × n_x^l`
//! matrix `g_{x^l} = g ⊗ (∂/∂x')^{⊗l}`. Column `c` holds the partial with
//! respect to `x_{i_1} ⋯ x_{i_l}` where `c = Σ_t i_t · n_x^{l-t}` (zero-based,
//! first differentiation variable most significant).

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct JetMatrix {
    order: usize,
    n_y: usize,
    n_x: usize,
    data: DenseMatrix,
}

impl JetMatrix {
    pub fn new(order: usize, n_y: usize, n_x: usize, data: DenseMatrix) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid("jet matrices start at order 1"));
        }
        let cols = n_x
            .checked_pow(order as u32)
            .ok_or_else(|| Error::invalid("n_x^order overflows"))?;
        if data.shape() != (n_y, cols) {
            return Err(Error::mismatch(format!(
                "order-{order} derivative of R^{n_x} -> R^{n_y} must be {n_y}x{cols}, got {}x{}",
                data.rows(),
                data.cols()
            )));
        }
        Ok(Self {
            order,
            n_y,
            n_x,
            data,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.data
    }
}

/// Value of a function at a point together with its derivative matrices of
/// orders `1..=max_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    n_y: usize,
    n_x: usize,
    value: Vec<f64>,
    matrices: Vec<JetMatrix>,
}

impl Jet {
    /// `matrices[l - 1]` must be the order-`l` derivative.
    pub fn new(n_y: usize, n_x: usize, value: Vec<f64>, matrices: Vec<DenseMatrix>) -> Result<Self> {
        if n_y == 0 || n_x == 0 {
            return Err(Error::invalid("jet dimensions must be positive"));
        }
        if value.len() != n_y {
            return Err(Error::mismatch(format!(
                "jet value has length {}, expected n_y = {n_y}",
                value.len()
            )));
        }
        if value.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("jet value".into()));
        }
        let matrices = matrices
            .into_iter()
            .enumerate()
            .map(|(l, m)| JetMatrix::new(l + 1, n_y, n_x, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n_y,
            n_x,
            value,
            matrices,
        })
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn value(&self) -> &[f64] {
        &self.value
    }

    pub fn max_order(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[JetMatrix] {
        &self.matrices
    }

    /// The order-`l` derivative matrix `g_{x^l}`.
    pub fn derivative(&self, order: usize) -> Result<&DenseMatrix> {
        if order == 0 {
            return Err(Error::invalid("derivative order must be at least 1"));
        }
        self.matrices
            .get(order - 1)
            .map(JetMatrix::matrix)
            .ok_or(Error::MissingOrder {
                needed: order,
                available: self.matrices.len(),
            })
    }

    pub(crate) fn require_order(&self, order: usize) -> Result<()> {
        if order > self.matrices.len() {
            return Err(Error::MissingOrder {
                needed: order,
                available: self.matrices.len(),
            });
        }
        Ok(())
    }
}

/// Zero-based digits of a composite index, most significant first.
pub fn composite_digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for slot in digits.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    digits
}

/// Inverse of [`composite_digits`].
pub fn composite_index(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_round_trip() {
        assert_eq!(composite_digits(5, 2, 3), vec![1, 0, 1]);
        assert_eq!(composite_index(&[1, 0, 1], 2), 5);
        for i in 0..27 {
            assert_eq!(composite_index(&composite_digits(i, 3, 3), 3), i);
        }
    }

    #[test]
    fn jet_shape_checks() {
        let g1 = DenseMatrix::zeros(2, 3).unwrap();
        let g2 = DenseMatrix::zeros(2, 9).unwrap();
        let jet = Jet::new(2, 3, vec![0.0, 1.0], vec![g1.clone(), g2]).unwrap();
        assert_eq!(jet.max_order(), 2);
        assert!(matches!(
            jet.derivative(3),
            Err(Error::MissingOrder { needed: 3, available: 2 })
        ));
        assert!(Jet::new(2, 3, vec![0.0, 1.0], vec![g1.clone(), g1]).is_err());
    }
}
