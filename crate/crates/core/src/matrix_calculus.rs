//! Jets of polynomial, exponential and black-box functions, and the
//! derivative of a Kronecker chain.
//!
//! Polynomial jets are exact: every mixed partial comes from formal
//! differentiation of monomials. Black-box jets use recursive central
//! differences and are meant as a verification oracle.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{composite_digits, Jet};
use crate::kron_ops::{apply_perm_right, commutation_matrix, kron_chain, PermOperator};
use crate::limits;
use crate::matrix::DenseMatrix;

/// A vector-valued function `ℝ^{n_x} → ℝ^{n_y}` that can be evaluated.
pub trait VectorFunction {
    fn n_x(&self) -> usize;
    fn n_y(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(coeff: f64, exponents: Vec<u32>) -> Self {
        Self { coeff, exponents }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(x)
            .fold(self.coeff, |acc, (&e, &v)| acc * v.powi(e as i32))
    }

    /// `∂^{|counts|} / ∏ ∂x_v^{counts_v}` evaluated at `x`.
    fn eval_partial(&self, counts: &[u32], x: &[f64]) -> f64 {
        let mut acc = self.coeff;
        for ((&e, &c), &v) in self.exponents.iter().zip(counts).zip(x) {
            if c > e {
                return 0.0;
            }
            for t in 0..c {
                acc *= f64::from(e - t);
            }
            acc *= v.powi((e - c) as i32);
        }
        acc
    }
}

#[derive(Deserialize)]
struct RawPolyFn {
    n_x: usize,
    n_y: usize,
    components: Vec<Vec<Monomial>>,
}

impl TryFrom<RawPolyFn> for PolyFn {
    type Error = Error;

    fn try_from(raw: RawPolyFn) -> Result<Self> {
        PolyFn::new(raw.n_x, raw.n_y, raw.components)
    }
}

/// A polynomial map `ℝ^{n_x} → ℝ^{n_y}`, one monomial list per output.
///
/// JSON form: `{"n_x": 2, "n_y": 1, "components": [[{"coeff": 1.0, "exponents": [2, 0]}]]}`.
/// Duplicate exponent vectors are merged and zero terms dropped, with the
/// surviving monomials ordered by exponent vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolyFn")]
pub struct PolyFn {
    n_x: usize,
    n_y: usize,
    components: Vec<Vec<Monomial>>,
}

impl PolyFn {
    pub fn new(n_x: usize, n_y: usize, components: Vec<Vec<Monomial>>) -> Result<Self> {
        if n_x == 0 || n_y == 0 {
            return Err(Error::invalid("polynomial dimensions must be positive"));
        }
        if components.len() != n_y {
            return Err(Error::mismatch(format!(
                "{} components supplied for n_y = {n_y}",
                components.len()
            )));
        }
        let components = components
            .into_iter()
            .enumerate()
            .map(|(i, monomials)| {
                let mut merged: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
                for m in monomials {
                    if m.exponents.len() != n_x {
                        return Err(Error::mismatch(format!(
                            "component {i}: exponent vector {:?} has length {}, expected n_x = {n_x}",
                            m.exponents,
                            m.exponents.len()
                        )));
                    }
                    if !m.coeff.is_finite() {
                        return Err(Error::NonFinite(format!("component {i}: coefficient {}", m.coeff)));
                    }
                    *merged.entry(m.exponents).or_insert(0.0) += m.coeff;
                }
                Ok(merged
                    .into_iter()
                    .filter(|(_, c)| *c != 0.0)
                    .map(|(exponents, coeff)| Monomial { coeff, exponents })
                    .collect())
            })
            .collect::<Result<Vec<Vec<Monomial>>>>()?;
        Ok(Self {
            n_x,
            n_y,
            components,
        })
    }

    /// The identity map on `ℝⁿ`.
    pub fn identity(n: usize) -> Result<Self> {
        let components = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                vec![Monomial::new(1.0, e)]
            })
            .collect();
        Self::new(n, n, components)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("polynomial JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomials serialize")
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn components(&self) -> &[Vec<Monomial>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.components
            .iter()
            .flatten()
            .map(Monomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n_x {
            return Err(Error::mismatch(format!(
                "point of length {} for a polynomial in {} variables",
                x.len(),
                self.n_x
            )));
        }
        Ok(self.eval_unchecked(x))
    }

    fn eval_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.iter().map(|m| m.eval(x)).sum())
            .collect()
    }
}

impl VectorFunction for PolyFn {
    fn n_x(&self) -> usize {
        self.n_x
    }

    fn n_y(&self) -> usize {
        self.n_y
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.eval_unchecked(x)
    }
}

/// A closure-backed function, treated as opaque.
pub struct BlackBoxFn<F> {
    n_x: usize,
    n_y: usize,
    f: F,
}

impl<F> BlackBoxFn<F>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    pub fn new(n_x: usize, n_y: usize, f: F) -> Self {
        Self { n_x, n_y, f }
    }
}

impl<F> VectorFunction for BlackBoxFn<F>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    fn n_x(&self) -> usize {
        self.n_x
    }

    fn n_y(&self) -> usize {
        self.n_y
    }

    fn eval(&self, x: &[f64]) -> Vec<f64> {
        (self.f)(x)
    }
}

/// Exact jet of a polynomial at `x` up to `max_order`.
pub fn poly_jet(p: &PolyFn, x: &[f64], max_order: usize) -> Result<Jet> {
    if max_order == 0 {
        return Err(Error::invalid("max_order must be at least 1"));
    }
    let value = p.eval(x)?;
    let n_x = p.n_x;
    let mut matrices = Vec::with_capacity(max_order);
    for order in 1..=max_order {
        let cols = limits::checked_pow("polynomial jet columns", n_x, order)?;
        limits::check_entries("polynomial jet", p.n_y, cols)?;
        let mut data = vec![0.0; p.n_y * cols];
        // Columns sharing a variable multiset share a value.
        let mut cache: HashMap<Vec<u32>, Vec<f64>> = HashMap::new();
        for col in 0..cols {
            let mut counts = vec![0u32; n_x];
            for d in composite_digits(col, n_x, order) {
                counts[d] += 1;
            }
            let values = cache.entry(counts).or_insert_with_key(|counts| {
                p.components
                    .iter()
                    .map(|c| c.iter().map(|m| m.eval_partial(counts, x)).sum())
                    .collect()
            });
            for (row, v) in values.iter().enumerate() {
                data[row * cols + col] = *v;
            }
        }
        matrices.push(DenseMatrix::new(p.n_y, cols, data)?);
    }
    Jet::new(p.n_y, n_x, value, matrices)
}

/// Jet of `exp` at the scalar `y`: every derivative equals `e^y`.
pub fn exp_scalar_jet(y: f64, max_order: usize) -> Result<Jet> {
    if max_order == 0 {
        return Err(Error::invalid("max_order must be at least 1"));
    }
    let e = y.exp();
    if !e.is_finite() {
        return Err(Error::NonFinite(format!("exp({y}) overflows")));
    }
    Jet::new(1, 1, vec![e], vec![DenseMatrix::scalar(e); max_order])
}

/// Step sizes for [`finite_diff_jet_with`]: `first` for the order-1 matrix,
/// `higher` for every level of the order ≥ 2 stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSteps {
    pub first: f64,
    pub higher: f64,
}

impl Default for FdSteps {
    fn default() -> Self {
        Self {
            first: 1e-5,
            higher: 1e-2,
        }
    }
}

pub const FD_MAX_ORDER: usize = 4;

/// Central-difference jet with a single step for every order.
pub fn finite_diff_jet<F: VectorFunction + ?Sized>(
    f: &F,
    x: &[f64],
    max_order: usize,
    step: f64,
) -> Result<Jet> {
    finite_diff_jet_with(f, x, max_order, FdSteps { first: step, higher: step })
}

/// Central-difference jet. Each mixed partial applies the five-point stencil
/// `(-f(+2h) + 8f(+h) - 8f(-h) + f(-2h)) / 12h` once per differentiation
/// variable, so the truncation error is `O(h⁴)` per level (zero for
/// polynomials of degree ≤ 4) and the order-`l` entry costs `4^l`
/// evaluations.
pub fn finite_diff_jet_with<F: VectorFunction + ?Sized>(
    f: &F,
    x: &[f64],
    max_order: usize,
    steps: FdSteps,
) -> Result<Jet> {
    if max_order == 0 || max_order > FD_MAX_ORDER {
        return Err(Error::invalid(format!(
            "finite-difference jets support orders 1..={FD_MAX_ORDER}, got {max_order}"
        )));
    }
    if !(steps.first > 0.0 && steps.higher > 0.0) {
        return Err(Error::invalid("finite-difference steps must be positive"));
    }
    let (n_x, n_y) = (f.n_x(), f.n_y());
    if x.len() != n_x {
        return Err(Error::mismatch(format!(
            "point of length {} for a function of {n_x} variables",
            x.len()
        )));
    }
    let value = checked_eval(f, x)?;
    let mut matrices = Vec::with_capacity(max_order);
    let mut point = x.to_vec();
    for order in 1..=max_order {
        let h = if order == 1 { steps.first } else { steps.higher };
        let cols = limits::checked_pow("finite-difference jet columns", n_x, order)?;
        limits::check_entries("finite-difference jet", n_y, cols)?;
        let mut data = vec![0.0; n_y * cols];
        for col in 0..cols {
            let vars = composite_digits(col, n_x, order);
            let column = central_difference(f, &mut point, &vars, h)?;
            for (row, v) in column.into_iter().enumerate() {
                data[row * cols + col] = v;
            }
        }
        matrices.push(DenseMatrix::new(n_y, cols, data)?);
    }
    Jet::new(n_y, n_x, value, matrices)
}

fn checked_eval<F: VectorFunction + ?Sized>(f: &F, x: &[f64]) -> Result<Vec<f64>> {
    let y = f.eval(x);
    if y.len() != f.n_y() {
        return Err(Error::mismatch(format!(
            "function returned {} values, declared n_y = {}",
            y.len(),
            f.n_y()
        )));
    }
    if let Some(v) = y.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("function value {v} at {x:?}")));
    }
    Ok(y)
}

fn central_difference<F: VectorFunction + ?Sized>(
    f: &F,
    point: &mut [f64],
    vars: &[usize],
    h: f64,
) -> Result<Vec<f64>> {
    let Some((&v, rest)) = vars.split_first() else {
        return checked_eval(f, point);
    };
    let orig = point[v];
    let mut total = vec![0.0; f.n_y()];
    for (offset, weight) in [(2.0, -1.0), (1.0, 8.0), (-1.0, -8.0), (-2.0, 1.0)] {
        point[v] = orig + offset * h;
        let inner = central_difference(f, point, rest, h);
        point[v] = orig;
        for (t, y) in total.iter_mut().zip(inner?) {
            *t += weight * y;
        }
    }
    Ok(total.into_iter().map(|t| t / (12.0 * h)).collect())
}

/// Derivative `∂(A_1 ⊗ ⋯ ⊗ A_n)/∂x'` of a Kronecker chain, given each factor
/// `A_i` (`r_i × s_i`) with its derivative `∂A_i/∂x'` (`r_i × s_i·n_x`).
///
/// Term `k` differentiates factor `k` and then moves the new differentiation
/// digit past the remaining factors' column digits with
/// `I_{s_1⋯s_k} ⊗ K_{n_x, s_{k+1}⋯s_n}`.
pub fn kron_chain_derivative(factors: &[(DenseMatrix, DenseMatrix)]) -> Result<DenseMatrix> {
    let Some((first_val, first_der)) = factors.first() else {
        return Err(Error::invalid("Kronecker chain derivative needs at least one factor"));
    };
    let n_x = derivative_width(first_val, first_der, 0)?;
    for (i, (val, der)) in factors.iter().enumerate().skip(1) {
        let w = derivative_width(val, der, i)?;
        if w != n_x {
            return Err(Error::mismatch(format!(
                "factor {i} is differentiated w.r.t. {w} variables, factor 0 w.r.t. {n_x}"
            )));
        }
    }
    let rows: usize = factors.iter().map(|(v, _)| v.rows()).product();
    let col_dims: Vec<usize> = factors.iter().map(|(v, _)| v.cols()).collect();
    let cols: usize = col_dims.iter().product::<usize>() * n_x;
    limits::check_entries("Kronecker chain derivative", rows, cols)?;

    let mut total = DenseMatrix::zeros(rows, cols)?;
    for k in 0..factors.len() {
        let chain = kron_chain(
            factors
                .iter()
                .enumerate()
                .map(|(i, (val, der))| if i == k { der } else { val }),
        )?;
        let leading: usize = col_dims[..=k].iter().product();
        let trailing: usize = col_dims[k + 1..].iter().product();
        let shift = PermOperator::identity(leading).kron(&commutation_matrix(n_x, trailing)?)?;
        total = total.add(&apply_perm_right(&chain, &shift)?)?;
    }
    Ok(total)
}

fn derivative_width(val: &DenseMatrix, der: &DenseMatrix, i: usize) -> Result<usize> {
    if der.rows() != val.rows() || !der.cols().is_multiple_of(val.cols()) {
        return Err(Error::mismatch(format!(
            "factor {i}: derivative {}x{} does not fit value {}x{}",
            der.rows(),
            der.cols(),
            val.rows(),
            val.cols()
        )));
    }
    Ok(der.cols() / val.cols())
}
