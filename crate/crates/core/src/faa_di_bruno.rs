//! Higher-order chain rule for `f ∘ g`.
//!
//! The n-th derivative array of the composite is `Σ_{k=1}^{n} f_{g^k} · B_{n,k}`,
//! an `n_f × n_x^n` matrix. As a matrix it is only one of many valid
//! representations (Kronecker factors can be reordered without changing the
//! differential); [`faa_symmetrized`] picks the symmetric one, which is the
//! array of mixed partials.

use crate::bell_poly::{bell_multivariate, bell_univariate, UniDerivSeq};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::kron_ops::{kron_power_vec, Symmetrizer};
use crate::limits;
use crate::matrix::{CompensatedSum, DenseMatrix};
use crate::matrix_calculus::VectorFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct CompositeDerivative {
    order: usize,
    n_f: usize,
    n_x: usize,
    matrix: DenseMatrix,
    symmetrized: bool,
}

impl CompositeDerivative {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn n_f(&self) -> usize {
        self.n_f
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    pub fn is_symmetrized(&self) -> bool {
        self.symmetrized
    }
}

/// `dⁿ/dxⁿ f(g(x)) = Σ_k f^{(k)}(g(x)) · B_{n,k}(g', g'', …)`.
pub fn faa_univariate(n: usize, f: &UniDerivSeq, g: &UniDerivSeq) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("derivative order must be at least 1"));
    }
    for (name, seq) in [("f", f), ("g", g)] {
        if seq.len() < n {
            return Err(Error::invalid(format!(
                "{name} supplies {} derivatives, order {n} needs {n}",
                seq.len()
            )));
        }
    }
    let mut total = 0.0;
    for k in (1..=n).rev() {
        total += f.values()[k - 1] * bell_univariate(n, k, g)?;
    }
    Ok(total)
}

fn check_jets(n: usize, f: &Jet, g: &Jet) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("derivative order must be at least 1"));
    }
    if f.n_x() != g.n_y() {
        return Err(Error::mismatch(format!(
            "f takes {} inputs but g produces {} outputs",
            f.n_x(),
            g.n_y()
        )));
    }
    f.require_order(n)?;
    g.require_order(n)
}

/// `Σ_{k=1}^{n} f_{g^k} · B_{n,k}`, where `f` is the jet of the outer function
/// at `g(x)` and `g` the jet of the inner function at `x`. The terms are
/// built from `k = n` down so the largest Bell matrix is attempted first.
pub fn faa_total_derivative(n: usize, f: &Jet, g: &Jet) -> Result<CompositeDerivative> {
    check_jets(n, f, g)?;
    let cols = limits::checked_pow("composite derivative columns", g.n_x(), n)?;
    let mut acc = CompensatedSum::new(f.n_y(), cols)?;
    for k in (1..=n).rev() {
        let bell = bell_multivariate(n, k, g)?;
        let term = f.derivative(k)?.matmul(&bell)?;
        acc.add_scaled(&term, 1.0)?;
    }
    Ok(CompositeDerivative {
        order: n,
        n_f: f.n_y(),
        n_x: g.n_x(),
        matrix: acc.finish(),
        symmetrized: false,
    })
}

/// [`faa_total_derivative`] with every row averaged over column digit
/// permutations: the unique symmetric representative.
pub fn faa_symmetrized(n: usize, f: &Jet, g: &Jet) -> Result<CompositeDerivative> {
    check_jets(n, f, g)?;
    let sym = Symmetrizer::new(g.n_x(), n)?;
    let raw = faa_total_derivative(n, f, g)?;
    Ok(CompositeDerivative {
        matrix: sym.symmetrize_matrix(&raw.matrix)?,
        symmetrized: true,
        ..raw
    })
}

/// `dⁿ(f∘g) = D · (dx)^{⊗n}`.
pub fn apply_differential(d: &CompositeDerivative, dx: &[f64]) -> Result<Vec<f64>> {
    if dx.len() != d.n_x {
        return Err(Error::mismatch(format!(
            "dx has length {}, expected n_x = {}",
            dx.len(),
            d.n_x
        )));
    }
    d.matrix.mul_vec(&kron_power_vec(dx, d.order)?)
}

/// Step used for the `n`-th central difference along a ray, balancing the
/// `O(h²)` truncation error against `ε/hⁿ` rounding.
pub fn ray_step(n: usize) -> f64 {
    f64::EPSILON.powf(1.0 / (n as f64 + 2.0))
}

/// Result of [`directional_taylor_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RayComparison {
    /// `dⁿ(f∘g)` from the Bell formula.
    pub analytic: Vec<f64>,
    /// n-th central difference of `t ↦ (f∘g)(x + t·dx)` at `t = 0`.
    pub numeric: Vec<f64>,
}

impl RayComparison {
    pub fn residual(&self) -> f64 {
        self.analytic
            .iter()
            .zip(&self.numeric)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|analytic - numeric| / (1 + |numeric|)`.
    pub fn relative_residual(&self) -> f64 {
        self.analytic
            .iter()
            .zip(&self.numeric)
            .map(|(a, b)| (a - b).abs() / (1.0 + b.abs()))
            .fold(0.0, f64::max)
    }
}

/// Compares the Bell-formula differential against a one-dimensional finite
/// difference of the composite along `dx`. `f` and `g` are the jets at
/// `g(x)` and `x`; `composite` evaluates `f ∘ g`. With the default
/// [`ray_step`], polynomial composites of moderate degree agree to about
/// `1e-6` relative for `n ≤ 3`.
pub fn directional_taylor_check<C: VectorFunction + ?Sized>(
    f: &Jet,
    g: &Jet,
    composite: &C,
    x: &[f64],
    dx: &[f64],
    n: usize,
) -> Result<RayComparison> {
    if composite.n_x() != x.len() || composite.n_y() != f.n_y() || g.n_x() != x.len() {
        return Err(Error::mismatch(
            "composite, jets and evaluation point disagree on dimensions",
        ));
    }
    let analytic = apply_differential(&faa_total_derivative(n, f, g)?, dx)?;
    let h = ray_step(n);
    let mut numeric = vec![0.0; f.n_y()];
    let mut binom = 1.0;
    for i in 0..=n {
        let t = (n as f64 / 2.0 - i as f64) * h;
        let point: Vec<f64> = x.iter().zip(dx).map(|(a, d)| a + t * d).collect();
        let value = composite.eval(&point);
        if value.len() != numeric.len() || value.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("composite at t = {t}")));
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        for (acc, v) in numeric.iter_mut().zip(&value) {
            *acc += sign * binom * v;
        }
        binom = binom * (n - i) as f64 / (i + 1) as f64;
    }
    let scale = h.powi(n as i32);
    for v in &mut numeric {
        *v /= scale;
    }
    Ok(RayComparison { analytic, numeric })
}
