//! Partial Bell polynomials, scalar and Kronecker-valued.
//!
//! `B_{n,k}(g_x, g_{x²}, …)` is the `n_y^k × n_x^n` matrix
//! `Σ_j α_j · g_x^{⊗j_1} ⊗ g_{x²}^{⊗j_2} ⊗ ⋯` summed over the Bell indices of
//! [`crate::partitions`]. The Kronecker product does not commute, so the
//! scalar recurrences fail for the raw matrices; they hold once both sides are
//! sandwiched as `D^{⊗k} · (…) · X^{⊗n}` for a row vector `D` and a column
//! vector `X`. This module exposes both the raw and the sandwiched forms so
//! the difference can be checked.
//!
//! `B_{n,0}` and `B_{0,k}` are zero. The recurrences below need a neutral
//! `B_{0,0}` for their `k = 1` terms; it only ever appears there, as the 1×1
//! factor `[1]` in front of `g_{x^n}` (resp. `g_{x^{n+1}}`).

use crate::error::{Error, Result};
use crate::kron_ops::{kron, kron_chain, kron_power_vec};
use crate::limits;
use crate::matrix::{CompensatedSum, DenseMatrix};
use crate::matrix_calculus::kron_chain_derivative;
use crate::partitions::{bell_coefficient_f64, enumerate_bell_indices, BellIndex};

pub use crate::jet::{Jet, JetMatrix};

/// Derivative values `(g', g'', …)` of a scalar function at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct UniDerivSeq(Vec<f64>);

impl UniDerivSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("derivative sequence".into()));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `l`-th derivative, `l ≥ 1`.
    pub fn get(&self, order: usize) -> Option<f64> {
        order.checked_sub(1).and_then(|i| self.0.get(i)).copied()
    }
}

/// Scalar partial Bell polynomial `B_{n,k}(g', g'', …, g^{(n-k+1)})`.
/// Zero when `k > n`, `n = 0` or `k = 0`.
pub fn bell_univariate(n: usize, k: usize, g: &UniDerivSeq) -> Result<f64> {
    if n == 0 || k == 0 || k > n {
        return Ok(0.0);
    }
    let needed = n - k + 1;
    if g.len() < needed {
        return Err(Error::MissingOrder {
            needed,
            available: g.len(),
        });
    }
    let mut sum = 0.0;
    let mut carry = 0.0;
    for idx in enumerate_bell_indices(n, k)? {
        let term = idx
            .factor_orders()
            .iter()
            .fold(bell_coefficient_f64(&idx), |acc, &l| acc * g.0[l - 1]);
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// The base polynomial of one Bell index: the coefficient-free chain
/// `g_x^{⊗j_1} ⊗ g_{x²}^{⊗j_2} ⊗ ⋯`, of shape `n_y^k × n_x^n`.
pub fn base_polynomial(idx: &BellIndex, g: &Jet) -> Result<DenseMatrix> {
    let orders = idx.factor_orders();
    base_chain(&orders, g)
}

/// The base polynomial with its `k` factors reordered: position `t` of the
/// result holds factor `σ⁻¹(t)` of the canonical chain.
pub fn base_polynomial_permuted(idx: &BellIndex, g: &Jet, sigma: &[usize]) -> Result<DenseMatrix> {
    crate::kron_ops::validate_permutation(sigma)?;
    let orders = idx.factor_orders();
    if sigma.len() != orders.len() {
        return Err(Error::mismatch(format!(
            "permutation of {} factors for a base polynomial with {}",
            sigma.len(),
            orders.len()
        )));
    }
    let inv = crate::kron_ops::invert_permutation(sigma);
    let reordered: Vec<usize> = inv.iter().map(|&s| orders[s]).collect();
    base_chain(&reordered, g)
}

fn base_chain(orders: &[usize], g: &Jet) -> Result<DenseMatrix> {
    let max = orders.iter().copied().max().unwrap_or(0);
    g.require_order(max)?;
    let factors = orders
        .iter()
        .map(|&l| g.derivative(l))
        .collect::<Result<Vec<_>>>()?;
    kron_chain(factors)
}

fn output_shape(n: usize, k: usize, g: &Jet) -> Result<(usize, usize)> {
    let rows = limits::checked_pow("Bell polynomial rows", g.n_y(), k)?;
    let cols = limits::checked_pow("Bell polynomial columns", g.n_x(), n)?;
    limits::check_entries("Bell polynomial", rows, cols)?;
    Ok((rows, cols))
}

/// Kronecker-valued partial Bell polynomial `B_{n,k}`, shape `n_y^k × n_x^n`.
/// The zero matrix of that shape when `k > n`, `n = 0` or `k = 0`.
pub fn bell_multivariate(n: usize, k: usize, g: &Jet) -> Result<DenseMatrix> {
    let (rows, cols) = output_shape(n, k, g)?;
    if n == 0 || k == 0 || k > n {
        return DenseMatrix::zeros(rows, cols);
    }
    g.require_order(n - k + 1)?;
    let mut acc = CompensatedSum::new(rows, cols)?;
    let mut indices = enumerate_bell_indices(n, k)?;
    // Accumulate in increasing lexicographic order of j.
    indices.reverse();
    for idx in &indices {
        acc.add_scaled(&base_polynomial(idx, g)?, bell_coefficient_f64(idx))?;
    }
    Ok(acc.finish())
}

/// `∂B_{n,k}/∂x'`, shape `n_y^k × n_x^{n+1}`, by differentiating every base
/// polynomial with the Kronecker chain rule (`∂g_{x^l}/∂x' = g_{x^{l+1}}`).
/// Needs derivatives of `g` up to order `n - k + 2`.
pub fn bell_derivative(n: usize, k: usize, g: &Jet) -> Result<DenseMatrix> {
    let (rows, cols) = output_shape(n + 1, k, g)?;
    if n == 0 || k == 0 || k > n {
        return DenseMatrix::zeros(rows, cols);
    }
    g.require_order(n - k + 2)?;
    let mut acc = CompensatedSum::new(rows, cols)?;
    let mut indices = enumerate_bell_indices(n, k)?;
    indices.reverse();
    for idx in &indices {
        let factors = idx
            .factor_orders()
            .into_iter()
            .map(|l| Ok((g.derivative(l)?.clone(), g.derivative(l + 1)?.clone())))
            .collect::<Result<Vec<_>>>()?;
        acc.add_scaled(&kron_chain_derivative(&factors)?, bell_coefficient_f64(idx))?;
    }
    Ok(acc.finish())
}

/// `D^{⊗k} · M · X^{⊗n}` where `M` is `len(D)^k × len(X)^n`.
pub fn sandwich(d: &[f64], m: &DenseMatrix, x: &[f64], k: usize, n: usize) -> Result<f64> {
    let left = kron_power_vec(d, k)?;
    let right = kron_power_vec(x, n)?;
    if left.len() != m.rows() || right.len() != m.cols() {
        return Err(Error::mismatch(format!(
            "sandwich of a {}x{} matrix with D^{{⊗{k}}} (length {}) and X^{{⊗{n}}} (length {})",
            m.rows(),
            m.cols(),
            left.len(),
            right.len()
        )));
    }
    let mx = m.mul_vec(&right)?;
    Ok(left.iter().zip(&mx).map(|(a, b)| a * b).sum())
}

fn check_sandwich_vectors(g: &Jet, d: &[f64], x: &[f64]) -> Result<()> {
    if d.len() != g.n_y() || x.len() != g.n_x() {
        return Err(Error::mismatch(format!(
            "sandwich vectors have lengths {} and {}, expected n_y = {} and n_x = {}",
            d.len(),
            x.len(),
            g.n_y(),
            g.n_x()
        )));
    }
    Ok(())
}

/// `B_{m,j}` with `B_{0,0}` taken as the neutral 1×1 factor.
fn bell_or_unit(m: usize, j: usize, g: &Jet) -> Result<DenseMatrix> {
    if m == 0 && j == 0 {
        Ok(DenseMatrix::scalar(1.0))
    } else {
        bell_multivariate(m, j, g)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as f64
}

/// Raw matrix `Σ_{i=1}^{n-k+1} C(n-1, i-1) (B_{n-i,k-1} ⊗ g_{x^i})`, the
/// scalar recurrence transplanted verbatim. It differs from `B_{n,k}` as a
/// matrix but agrees with it under sandwiching.
pub fn bell_recursion_matrix(n: usize, k: usize, g: &Jet) -> Result<DenseMatrix> {
    let (rows, cols) = output_shape(n, k, g)?;
    if n == 0 || k == 0 || k > n {
        return DenseMatrix::zeros(rows, cols);
    }
    g.require_order(n - k + 1)?;
    let mut acc = CompensatedSum::new(rows, cols)?;
    for i in 1..=n - k + 1 {
        if k == 1 && i != n {
            continue;
        }
        let term = kron(&bell_or_unit(n - i, k - 1, g)?, g.derivative(i)?)?;
        acc.add_scaled(&term, binomial(n - 1, i - 1))?;
    }
    Ok(acc.finish())
}

/// Sandwiched right side of the first recurrence,
/// `D^{⊗k} [Σ_i C(n-1,i-1) (B_{n-i,k-1} ⊗ g_{x^i})] X^{⊗n}`.
pub fn bell_recursion_sandwich_rhs(n: usize, k: usize, g: &Jet, d: &[f64], x: &[f64]) -> Result<f64> {
    check_sandwich_vectors(g, d, x)?;
    sandwich(d, &bell_recursion_matrix(n, k, g)?, x, k, n)
}

/// Sandwiched right side of the derivative recurrence,
/// `D^{⊗k} [Σ_{i=1}^{n-k+1} C(n,i) (B_{n-i,k-1} ⊗ g_{x^{i+1}})] X^{⊗(n+1)}`.
/// For `k = 1` only the `i = n` term survives and reduces to
/// `D · g_{x^{n+1}} · X^{⊗(n+1)}`. Needs `g` up to order `n - k + 2`.
pub fn bell_dx_sandwich_rhs(n: usize, k: usize, g: &Jet, d: &[f64], x: &[f64]) -> Result<f64> {
    check_sandwich_vectors(g, d, x)?;
    if n == 0 || k == 0 || k > n {
        return Ok(0.0);
    }
    g.require_order(n - k + 2)?;
    let (rows, cols) = output_shape(n + 1, k, g)?;
    let mut acc = CompensatedSum::new(rows, cols)?;
    for i in 1..=n - k + 1 {
        if k == 1 && i != n {
            continue;
        }
        let term = kron(&bell_or_unit(n - i, k - 1, g)?, g.derivative(i + 1)?)?;
        acc.add_scaled(&term, binomial(n, i))?;
    }
    sandwich(d, &acc.finish(), x, k, n + 1)
}

/// Both sides of `D_k B_{n+1,k} X_{n+1} = D_k [(B_{n,k-1} ⊗ g_x) + ∂B_{n,k}/∂x'] X_{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceSides {
    pub lhs: f64,
    pub rhs: f64,
}

impl RecurrenceSides {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }

    /// `|lhs - rhs| / (1 + |lhs|)`.
    pub fn relative_residual(&self) -> f64 {
        self.residual() / (1.0 + self.lhs.abs())
    }
}

/// Evaluates both sandwiched sides of the order-raising recurrence; the
/// derivative term is the true derivative of `B_{n,k}`.
pub fn recurrence_sides(n: usize, k: usize, g: &Jet, d: &[f64], x: &[f64]) -> Result<RecurrenceSides> {
    check_sandwich_vectors(g, d, x)?;
    if n == 0 || k == 0 || k > n + 1 {
        return Err(Error::invalid(format!(
            "order-raising recurrence needs n >= 1 and 1 <= k <= n + 1, got n = {n}, k = {k}"
        )));
    }
    g.require_order(n + 2 - k)?;
    let lhs = sandwich(d, &bell_multivariate(n + 1, k, g)?, x, k, n + 1)?;
    let shifted = kron(&bell_multivariate(n, k - 1, g)?, g.derivative(1)?)?;
    let rhs = sandwich(d, &shifted, x, k, n + 1)? + sandwich(d, &bell_derivative(n, k, g)?, x, k, n + 1)?;
    Ok(RecurrenceSides { lhs, rhs })
}

/// Absolute residual of [`recurrence_sides`].
pub fn recurrence_check(n: usize, k: usize, g: &Jet, d: &[f64], x: &[f64]) -> Result<f64> {
    Ok(recurrence_sides(n, k, g, d, x)?.residual())
}
