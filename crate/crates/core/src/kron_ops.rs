//! Kronecker products, commutation and shuffle permutations, and the
//! symmetrizer.
//!
//! Composite indices of a Kronecker chain `A_1 ⊗ ⋯ ⊗ A_m` are mixed-radix
//! numbers with the first factor as the most significant digit, so entry
//! `((i_1,…,i_m), (j_1,…,j_m))` of the chain is `∏ A_t[i_t, j_t]`.
//!
//! Permutation matrices are never stored densely unless asked for: a
//! [`PermOperator`] `P` keeps an index map with `P[i, map[i]] = 1`, so
//! `(P·v)[i] = v[map[i]]`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::jet::{composite_digits, composite_index};
use crate::limits;
use crate::matrix::DenseMatrix;

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    limits::check_entries("Kronecker product", rows, cols)?;
    let mut data = vec![0.0; rows * cols];
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let s = a[(ia, ja)];
            if s == 0.0 {
                continue;
            }
            for ib in 0..b.rows() {
                let row = ia * b.rows() + ib;
                let dst = &mut data[row * cols + ja * b.cols()..row * cols + (ja + 1) * b.cols()];
                for (d, &v) in dst.iter_mut().zip(b.row(ib)) {
                    *d = s * v;
                }
            }
        }
    }
    Ok(DenseMatrix::from_raw(rows, cols, data))
}

/// `a ⊗ a ⊗ ⋯ ⊗ a` (`k` factors); `k = 0` gives the 1×1 matrix `[1]`.
pub fn kron_power(a: &DenseMatrix, k: usize) -> Result<DenseMatrix> {
    limits::checked_pow("Kronecker power rows", a.rows(), k)?;
    limits::checked_pow("Kronecker power columns", a.cols(), k)?;
    let mut out = DenseMatrix::scalar(1.0);
    for _ in 0..k {
        out = kron(&out, a)?;
    }
    Ok(out)
}

/// Kronecker product of a chain of factors; the empty chain is `[1]`.
pub fn kron_chain<'a, I>(factors: I) -> Result<DenseMatrix>
where
    I: IntoIterator<Item = &'a DenseMatrix>,
{
    factors
        .into_iter()
        .try_fold(DenseMatrix::scalar(1.0), |acc, f| kron(&acc, f))
}

/// `v^{⊗k}` for a plain vector.
pub fn kron_power_vec(v: &[f64], k: usize) -> Result<Vec<f64>> {
    limits::checked_pow("Kronecker vector power", v.len(), k)?;
    let mut out = vec![1.0];
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|&a| v.iter().map(move |&b| a * b))
            .collect();
    }
    Ok(out)
}

/// A permutation matrix stored as an index map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermOperator {
    map: Vec<usize>,
}

impl PermOperator {
    pub fn identity(size: usize) -> Self {
        Self {
            map: (0..size).collect(),
        }
    }

    /// Checks that `map` is a bijection on `0..map.len()`.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        validate_permutation(&map)?;
        Ok(Self { map })
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// The inverse permutation, which is also the transpose.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        Self { map: inv }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &PermOperator) -> Result<Self> {
        if self.size() != rhs.size() {
            return Err(Error::mismatch(format!(
                "cannot multiply permutations of size {} and {}",
                self.size(),
                rhs.size()
            )));
        }
        Ok(Self {
            map: self.map.iter().map(|&m| rhs.map[m]).collect(),
        })
    }

    /// Kronecker product `self ⊗ rhs`, itself a permutation.
    pub fn kron(&self, rhs: &PermOperator) -> Result<Self> {
        limits::check_entries("permutation Kronecker product", self.size(), rhs.size())?;
        let n = rhs.size();
        let map = self
            .map
            .iter()
            .flat_map(|&a| rhs.map.iter().map(move |&b| a * n + b))
            .collect();
        Ok(Self { map })
    }

    /// `P · v` for a column vector.
    pub fn apply_to_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.size() {
            return Err(Error::mismatch(format!(
                "permutation of size {} applied to a vector of length {}",
                self.size(),
                v.len()
            )));
        }
        Ok(self.map.iter().map(|&m| v[m]).collect())
    }

    /// `v · P` for a row vector.
    pub fn apply_to_row(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.size() {
            return Err(Error::mismatch(format!(
                "row vector of length {} against a permutation of size {}",
                v.len(),
                self.size()
            )));
        }
        let mut out = vec![0.0; v.len()];
        for (i, &m) in self.map.iter().enumerate() {
            out[m] = v[i];
        }
        Ok(out)
    }

    /// Explicit 0/1 matrix; bounded by the dense cap.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        check_dense("permutation", self.size())?;
        let n = self.size();
        let mut m = DenseMatrix::zeros(n, n)?;
        for (i, &j) in self.map.iter().enumerate() {
            m[(i, j)] = 1.0;
        }
        Ok(m)
    }

    pub fn to_exact(&self) -> Result<ExactMatrix> {
        check_dense("permutation", self.size())?;
        let n = self.size();
        let mut m = ExactMatrix::zeros(n, n);
        for (i, &j) in self.map.iter().enumerate() {
            m.set(i, j, BigRational::one());
        }
        Ok(m)
    }
}

fn check_dense(what: &str, size: usize) -> Result<()> {
    let cap = limits::dense_cap();
    if size > cap {
        return Err(Error::SizeCap {
            what: format!("dense {what} of side {size} (dense cap)"),
            requested: size as u128 * size as u128,
            cap,
        });
    }
    limits::check_entries(&format!("dense {what}"), size, size)?;
    Ok(())
}

/// Validates a zero-based permutation of `0..sigma.len()`.
pub fn validate_permutation(sigma: &[usize]) -> Result<()> {
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s >= sigma.len() || seen[s] {
            return Err(Error::invalid(format!("{sigma:?} is not a permutation")));
        }
        seen[s] = true;
    }
    Ok(())
}

pub fn invert_permutation(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

/// All permutations of `0..m` in lexicographic order.
pub fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..m).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..m).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// The commutation matrix `K_{mn}`: `K_{mn} vec(A) = vec(A')` for an `m × n`
/// matrix `A`. Acting on `x ⊗ y` with `x ∈ ℝⁿ`, `y ∈ ℝᵐ` it yields `y ⊗ x`,
/// and `K_{r₂r₁}(A₁ ⊗ A₂)K_{c₁c₂} = A₂ ⊗ A₁`.
pub fn commutation_matrix(m: usize, n: usize) -> Result<PermOperator> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("commutation matrix dimensions must be positive"));
    }
    limits::check_entries("commutation matrix", m, n)?;
    let mut map = vec![0; m * n];
    for a in 0..m {
        for b in 0..n {
            map[a * n + b] = b * m + a;
        }
    }
    Ok(PermOperator { map })
}

/// The shuffle matrix `K^σ_r` for a chain with factor dimensions `dims`.
///
/// `sigma[s]` is the zero-based image of factor `s`. The operator maps the
/// composite index `(i_1,…,i_m)` over `dims` to `(i_{σ⁻¹(1)},…,i_{σ⁻¹(m)})`
/// over the permuted dimensions `(dims_{σ⁻¹(1)},…)`, so that
/// `K^σ_r (a_1 ⊗ ⋯ ⊗ a_m) = a_{σ⁻¹(1)} ⊗ ⋯ ⊗ a_{σ⁻¹(m)}`.
pub fn shuffle_operator(sigma: &[usize], dims: &[usize]) -> Result<PermOperator> {
    validate_permutation(sigma)?;
    if sigma.len() != dims.len() {
        return Err(Error::mismatch(format!(
            "permutation of {} factors with {} dimensions",
            sigma.len(),
            dims.len()
        )));
    }
    if dims.contains(&0) {
        return Err(Error::invalid("shuffle dimensions must be positive"));
    }
    let size = dims.iter().try_fold(1usize, |acc, &d| {
        let next = acc as u128 * d as u128;
        if next > limits::size_cap() as u128 {
            Err(Error::SizeCap {
                what: format!("shuffle operator over dims {dims:?}"),
                requested: next,
                cap: limits::size_cap(),
            })
        } else {
            Ok(next as usize)
        }
    })?;
    let inv = invert_permutation(sigma);
    let out_dims: Vec<usize> = inv.iter().map(|&s| dims[s]).collect();
    let m = dims.len();
    let mut out_digits = vec![0; m];
    let mut in_digits = vec![0; m];
    let mut map = vec![0; size];
    for (out, slot) in map.iter_mut().enumerate() {
        let mut rem = out;
        for t in (0..m).rev() {
            out_digits[t] = rem % out_dims[t];
            rem /= out_dims[t];
        }
        for s in 0..m {
            in_digits[s] = out_digits[sigma[s]];
        }
        *slot = in_digits.iter().zip(dims).fold(0, |acc, (&d, &r)| acc * r + d);
    }
    Ok(PermOperator { map })
}

/// Shuffle pair `(L, R)` with `L (A_1 ⊗ ⋯ ⊗ A_m) R = A_{σ⁻¹(1)} ⊗ ⋯ ⊗ A_{σ⁻¹(m)}`,
/// where `L = K^σ_r` and `R = K^{σ⁻¹}_{c_{σ⁻¹}}`.
pub fn kron_shuffle_pair(
    sigma: &[usize],
    row_dims: &[usize],
    col_dims: &[usize],
) -> Result<(PermOperator, PermOperator)> {
    validate_permutation(sigma)?;
    if col_dims.len() != sigma.len() {
        return Err(Error::mismatch("column dimensions do not match the permutation"));
    }
    let inv = invert_permutation(sigma);
    let left = shuffle_operator(sigma, row_dims)?;
    let permuted_cols: Vec<usize> = inv.iter().map(|&s| col_dims[s]).collect();
    let right = shuffle_operator(&inv, &permuted_cols)?;
    Ok((left, right))
}

/// `P · A`: row `i` of the result is row `map[i]` of `a`.
pub fn apply_perm_left(p: &PermOperator, a: &DenseMatrix) -> Result<DenseMatrix> {
    if p.size() != a.rows() {
        return Err(Error::mismatch(format!(
            "permutation of size {} against a matrix with {} rows",
            p.size(),
            a.rows()
        )));
    }
    let data = p.map.iter().flat_map(|&m| a.row(m).iter().copied()).collect();
    Ok(DenseMatrix::from_raw(a.rows(), a.cols(), data))
}

/// `A · P`: column `map[i]` of the result is column `i` of `a`.
pub fn apply_perm_right(a: &DenseMatrix, p: &PermOperator) -> Result<DenseMatrix> {
    if p.size() != a.cols() {
        return Err(Error::mismatch(format!(
            "matrix with {} columns against a permutation of size {}",
            a.cols(),
            p.size()
        )));
    }
    let mut out = DenseMatrix::zeros_unchecked(a.rows(), a.cols());
    let cols = a.cols();
    for r in 0..a.rows() {
        let src = a.row(r);
        let dst = &mut out.data_mut()[r * cols..(r + 1) * cols];
        for (i, &m) in p.map.iter().enumerate() {
            dst[m] = src[i];
        }
    }
    Ok(out)
}

/// The symmetrizer `S_{n,m}` for `m`-fold Kronecker powers of `ℝⁿ`:
/// `S (x_1 ⊗ ⋯ ⊗ x_m) = (1/m!) Σ_σ x_{σ(1)} ⊗ ⋯ ⊗ x_{σ(m)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symmetrizer {
    base_dim: usize,
    arity: usize,
    size: usize,
}

impl Symmetrizer {
    pub fn new(base_dim: usize, arity: usize) -> Result<Self> {
        if base_dim == 0 || arity == 0 {
            return Err(Error::invalid("symmetrizer dimension and arity must be positive"));
        }
        let cap = limits::sym_arity_cap();
        if arity > cap {
            return Err(Error::ArityCap { arity, cap });
        }
        let size = limits::checked_pow("symmetrizer index space", base_dim, arity)?;
        Ok(Self {
            base_dim,
            arity,
            size,
        })
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `base_dim^arity`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `v · S` for a row vector `v`: each entry is replaced by the average of
    /// `v` over all digit permutations of its composite index.
    ///
    /// Averaging over all `m!` permutations visits every distinct
    /// rearrangement of a digit multiset equally often, so the result is the
    /// plain mean over the orbit; orbits are keyed by the sorted digits.
    pub fn symmetrize_rows(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.size {
            return Err(Error::mismatch(format!(
                "vector of length {} for a symmetrizer of size {}",
                v.len(),
                self.size
            )));
        }
        let keys: Vec<usize> = (0..self.size).map(|i| self.orbit_key(i)).collect();
        let mut sums: HashMap<usize, (f64, f64, usize)> = HashMap::new();
        for (&key, &x) in keys.iter().zip(v) {
            // Kahan-compensated running sum per orbit.
            let entry = sums.entry(key).or_insert((0.0, 0.0, 0));
            let y = x - entry.1;
            let t = entry.0 + y;
            entry.1 = (t - entry.0) - y;
            entry.0 = t;
            entry.2 += 1;
        }
        Ok(keys
            .iter()
            .map(|k| {
                let (sum, _, count) = sums[k];
                sum / count as f64
            })
            .collect())
    }

    /// Applies [`Self::symmetrize_rows`] to every row of `a`.
    pub fn symmetrize_matrix(&self, a: &DenseMatrix) -> Result<DenseMatrix> {
        let mut data = Vec::with_capacity(a.rows() * a.cols());
        for r in 0..a.rows() {
            data.extend(self.symmetrize_rows(a.row(r))?);
        }
        Ok(DenseMatrix::from_raw(a.rows(), a.cols(), data))
    }

    /// True if `v` is a fixed point of the symmetrizer within `tol`.
    pub fn is_fixed_point(&self, v: &[f64], tol: f64) -> Result<bool> {
        let s = self.symmetrize_rows(v)?;
        Ok(s.iter().zip(v).all(|(a, b)| (a - b).abs() <= tol * 1f64.max(b.abs())))
    }

    fn orbit_key(&self, index: usize) -> usize {
        let mut digits = composite_digits(index, self.base_dim, self.arity);
        digits.sort_unstable();
        composite_index(&digits, self.base_dim)
    }

    /// Dense `S` built from the operator action: row `i` is `e_i · S`.
    pub fn to_dense(&self) -> Result<DenseMatrix> {
        check_dense("symmetrizer", self.size)?;
        let mut m = DenseMatrix::zeros(self.size, self.size)?;
        let mut unit = vec![0.0; self.size];
        for i in 0..self.size {
            unit[i] = 1.0;
            let row = self.symmetrize_rows(&unit)?;
            unit[i] = 0.0;
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// Exact `S = (1/m!) Σ_σ K^σ` summed over all shuffle matrices of the
    /// uniform chain.
    pub fn to_dense_exact(&self) -> Result<ExactMatrix> {
        check_dense("symmetrizer", self.size)?;
        let dims = vec![self.base_dim; self.arity];
        let perms = all_permutations(self.arity);
        let mut counts = vec![0u64; self.size * self.size];
        for sigma in &perms {
            let p = shuffle_operator(sigma, &dims)?;
            for (i, &j) in p.map().iter().enumerate() {
                counts[i * self.size + j] += 1;
            }
        }
        let total = BigInt::from(perms.len());
        let data = counts
            .into_iter()
            .map(|c| BigRational::new(BigInt::from(c), total.clone()))
            .collect();
        Ok(ExactMatrix {
            rows: self.size,
            cols: self.size,
            data,
        })
    }
}

/// Dense matrix of exact rationals, for identities that must hold exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::mismatch("exact matrix product shapes do not conform"));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(t, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = &out.data[idx] + a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::mismatch("exact matrix sum shapes differ"));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, factor: &BigRational) -> ExactMatrix {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn to_f64(&self) -> DenseMatrix {
        DenseMatrix::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
        let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
        DenseMatrix::new(rows, cols, data).unwrap()
    }

    /// Small integer entries, so every product is exact regardless of the
    /// order the factors are multiplied in.
    fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
        let data = (0..rows * cols).map(|_| rng.random_range(-9..=9) as f64).collect();
        DenseMatrix::new(rows, cols, data).unwrap()
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn kron_examples() {
        let i2 = DenseMatrix::identity(2).unwrap();
        let i3 = DenseMatrix::identity(3).unwrap();
        assert_eq!(kron(&i2, &i3).unwrap(), DenseMatrix::identity(6).unwrap());

        let a = DenseMatrix::row_vector(&[1.0, 2.0]).unwrap();
        let b = DenseMatrix::row_vector(&[3.0, 4.0]).unwrap();
        assert_eq!(kron(&a, &b).unwrap().data(), &[3.0, 4.0, 6.0, 8.0]);

        assert_eq!(kron(&i2, &DenseMatrix::scalar(1.0)).unwrap(), i2);
    }

    #[test]
    fn kron_power_examples() {
        let v = DenseMatrix::col_vector(&[1.0, 2.0]).unwrap();
        assert_eq!(kron_power(&v, 0).unwrap(), DenseMatrix::scalar(1.0));
        assert_eq!(kron_power(&v, 1).unwrap(), v);
        let sq = kron_power(&v, 2).unwrap();
        assert_eq!(sq.shape(), (4, 1));
        assert_eq!(sq.data(), &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(kron_power_vec(&[1.0, 2.0], 2).unwrap(), vec![1.0, 2.0, 2.0, 4.0]);
    }

    #[test]
    fn kron_respects_size_cap() {
        let v = DenseMatrix::col_vector(&[1.0; 10]).unwrap();
        let err = kron_power(&v, 8).unwrap_err();
        assert!(err.is_cap(), "{err}");
    }

    #[test]
    fn mixed_product_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (p, q, r, s, t, u) = (
                rng.random_range(1..4),
                rng.random_range(1..4),
                rng.random_range(1..4),
                rng.random_range(1..4),
                rng.random_range(1..4),
                rng.random_range(1..4),
            );
            let a = random_matrix(&mut rng, p, q);
            let b = random_matrix(&mut rng, r, s);
            let c = random_matrix(&mut rng, q, t);
            let d = random_matrix(&mut rng, s, u);
            let lhs = kron(&a, &b).unwrap().matmul(&kron(&c, &d).unwrap()).unwrap();
            let rhs = kron(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn commutation_properties() {
        assert!(commutation_matrix(1, 5).unwrap().is_identity());
        assert!(commutation_matrix(5, 1).unwrap().is_identity());
        for m in 1..=6 {
            for n in 1..=6 {
                let kmn = commutation_matrix(m, n).unwrap();
                let knm = commutation_matrix(n, m).unwrap();
                assert!(kmn.mul(&knm).unwrap().is_identity());
                assert_eq!(kmn.to_dense().unwrap().transpose(), knm.to_dense().unwrap());
            }
        }
    }

    #[test]
    fn commutation_vec_transpose() {
        // A is 2x3; vec stacks columns.
        let a = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]];
        let vec_a: Vec<f64> = (0..3).flat_map(|j| (0..2).map(move |i| a[i][j])).collect();
        let vec_at: Vec<f64> = (0..2).flat_map(|i| (0..3).map(move |j| a[i][j])).collect();
        let k = commutation_matrix(2, 3).unwrap();
        assert_eq!(k.apply_to_vec(&vec_a).unwrap(), vec_at);
    }

    #[test]
    fn commutation_swaps_factors() {
        let x = [1.0, 0.0];
        let y = [0.0, 1.0];
        let xy = kron_power_vec(&x, 1).unwrap();
        let xy: Vec<f64> = xy.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect();
        let yx: Vec<f64> = y.iter().flat_map(|a| x.iter().map(move |b| a * b)).collect();
        assert_eq!(commutation_matrix(2, 2).unwrap().apply_to_vec(&xy).unwrap(), yx);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (m, n) = (3, 2);
        let x: Vec<f64> = (0..n).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..m).map(|_| rng.random()).collect();
        let xy: Vec<f64> = x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect();
        let yx: Vec<f64> = y.iter().flat_map(|a| x.iter().map(move |b| a * b)).collect();
        assert_eq!(commutation_matrix(m, n).unwrap().apply_to_vec(&xy).unwrap(), yx);
    }

    #[test]
    fn commutation_dense_2x2() {
        let dense = commutation_matrix(2, 2).unwrap().to_dense().unwrap();
        let expected = DenseMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(dense, expected);
    }

    #[test]
    fn commutation_swaps_matrix_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a1 = random_matrix(&mut rng, 2, 3);
        let a2 = random_matrix(&mut rng, 4, 2);
        let lhs = apply_perm_right(
            &apply_perm_left(&commutation_matrix(4, 2).unwrap(), &kron(&a1, &a2).unwrap()).unwrap(),
            &commutation_matrix(3, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, kron(&a2, &a1).unwrap());
    }

    #[test]
    fn shuffle_identity_and_transposition() {
        assert!(shuffle_operator(&[0, 1, 2], &[2, 3, 2]).unwrap().is_identity());
        for m in 1..=4 {
            for n in 1..=4 {
                assert_eq!(
                    shuffle_operator(&[1, 0], &[n, m]).unwrap(),
                    commutation_matrix(m, n).unwrap()
                );
            }
        }
        assert!(shuffle_operator(&[0, 0], &[2, 2]).is_err());
        assert!(shuffle_operator(&[0, 1], &[2]).is_err());
    }

    #[test]
    fn shuffle_inverse_corollary() {
        let dims = [2, 3, 1, 2];
        for sigma in all_permutations(4) {
            let inv = invert_permutation(&sigma);
            let permuted: Vec<usize> = inv.iter().map(|&s| dims[s]).collect();
            let k = shuffle_operator(&sigma, &dims).unwrap();
            let k_back = shuffle_operator(&inv, &permuted).unwrap();
            assert!(k_back.mul(&k).unwrap().is_identity(), "sigma = {sigma:?}");
        }
    }

    #[test]
    fn shuffle_reorders_vector_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dims = [2, 3, 2];
        let vs: Vec<Vec<f64>> = dims
            .iter()
            .map(|&d| (0..d).map(|_| rng.random_range(-9..=9) as f64).collect())
            .collect();
        let chain = |order: &[usize]| {
            order.iter().fold(vec![1.0], |acc, &i| {
                acc.iter().flat_map(|a| vs[i].iter().map(move |b| a * b)).collect()
            })
        };
        for sigma in all_permutations(3) {
            let inv = invert_permutation(&sigma);
            let k = shuffle_operator(&sigma, &dims).unwrap();
            assert_eq!(k.apply_to_vec(&chain(&[0, 1, 2])).unwrap(), chain(&inv));
        }
    }

    #[test]
    fn shuffle_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let m = rng.random_range(1..=5);
            let dims: Vec<usize> = (0..m).map(|_| rng.random_range(1..=3)).collect();
            let perms = all_permutations(m);
            let sigma = &perms[rng.random_range(0..perms.len())];
            let tau = &perms[rng.random_range(0..perms.len())];
            let tau_inv = invert_permutation(tau);
            let dims_after_tau: Vec<usize> = tau_inv.iter().map(|&s| dims[s]).collect();
            let composed: Vec<usize> = (0..m).map(|s| sigma[tau[s]]).collect();
            let lhs = shuffle_operator(&composed, &dims).unwrap();
            let rhs = shuffle_operator(sigma, &dims_after_tau)
                .unwrap()
                .mul(&shuffle_operator(tau, &dims).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn shuffle_pair_reorders_matrix_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for m in 1..=4 {
            for sigma in all_permutations(m) {
                let shapes: Vec<(usize, usize)> = (0..m)
                    .map(|_| (rng.random_range(1..=3), rng.random_range(1..=3)))
                    .collect();
                let mats: Vec<DenseMatrix> = shapes
                    .iter()
                    .map(|&(r, c)| random_int_matrix(&mut rng, r, c))
                    .collect();
                let rows: Vec<usize> = shapes.iter().map(|s| s.0).collect();
                let cols: Vec<usize> = shapes.iter().map(|s| s.1).collect();
                let (l, r) = kron_shuffle_pair(&sigma, &rows, &cols).unwrap();
                let chain = kron_chain(&mats).unwrap();
                let shuffled = apply_perm_right(&apply_perm_left(&l, &chain).unwrap(), &r).unwrap();
                let inv = invert_permutation(&sigma);
                let expected = kron_chain(inv.iter().map(|&s| &mats[s])).unwrap();
                assert_eq!(shuffled, expected, "sigma = {sigma:?}");
            }
        }
    }

    #[test]
    fn perm_application_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let perms = all_permutations(4);
            let p = PermOperator::from_map(perms[rng.random_range(0..24)].clone()).unwrap();
            let a = random_matrix(&mut rng, 4, 4);
            let dense = p.to_dense().unwrap();
            assert_eq!(apply_perm_left(&p, &a).unwrap(), dense.matmul(&a).unwrap());
            assert_eq!(apply_perm_right(&a, &p).unwrap(), a.matmul(&dense).unwrap());
            let back = apply_perm_left(&p.inverse(), &apply_perm_left(&p, &a).unwrap()).unwrap();
            assert_eq!(back, a);
            assert_eq!(apply_perm_left(&PermOperator::identity(4), &a).unwrap(), a);
        }
        let a = DenseMatrix::zeros(3, 3).unwrap();
        assert!(apply_perm_left(&PermOperator::identity(4), &a).is_err());
        assert!(PermOperator::from_map(vec![0, 2]).is_err());
    }

    #[test]
    fn symmetrizer_two_by_two() {
        let s = Symmetrizer::new(2, 2).unwrap();
        let exact = s.to_dense_exact().unwrap();
        let mut expected = ExactMatrix::identity(4);
        expected.set(1, 1, half());
        expected.set(1, 2, half());
        expected.set(2, 1, half());
        expected.set(2, 2, half());
        assert_eq!(exact, expected);

        // ½ (I + K_{2,2})
        let k = commutation_matrix(2, 2).unwrap().to_exact().unwrap();
        let half_sum = ExactMatrix::identity(4).add(&k).unwrap().scale(&half());
        assert_eq!(exact, half_sum);
        assert_eq!(s.to_dense().unwrap(), exact.to_f64());

        let row = s.symmetrize_rows(&[1.0, 2.0, 5.0, 4.0]).unwrap();
        assert_eq!(row, vec![1.0, 3.5, 3.5, 4.0]);
    }

    #[test]
    fn symmetrizer_idempotent_and_symmetric_exact() {
        for base in 1..=3 {
            for arity in 1..=4 {
                let s = Symmetrizer::new(base, arity).unwrap().to_dense_exact().unwrap();
                assert_eq!(s.matmul(&s).unwrap(), s, "base {base}, arity {arity}");
                assert_eq!(s.transpose(), s);
            }
        }
    }

    #[test]
    fn symmetrizer_action_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for (base, arity) in [(2, 3), (3, 3), (2, 4)] {
            let s = Symmetrizer::new(base, arity).unwrap();
            let dense = s.to_dense_exact().unwrap().to_f64();
            let v: Vec<f64> = (0..s.size()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let via_dense = dense.left_mul_vec(&v).unwrap();
            let via_action = s.symmetrize_rows(&v).unwrap();
            for (a, b) in via_dense.iter().zip(&via_action) {
                assert!((a - b).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn symmetrizer_matches_brute_force_permutation_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let (base, arity) = (3, 4);
        let s = Symmetrizer::new(base, arity).unwrap();
        let v: Vec<f64> = (0..s.size()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let perms = all_permutations(arity);
        let brute: Vec<f64> = (0..s.size())
            .map(|i| {
                let digits = composite_digits(i, base, arity);
                let total: f64 = perms
                    .iter()
                    .map(|p| {
                        let permuted: Vec<usize> = p.iter().map(|&t| digits[t]).collect();
                        v[composite_index(&permuted, base)]
                    })
                    .sum();
                total / perms.len() as f64
            })
            .collect();
        let fast = s.symmetrize_rows(&v).unwrap();
        for (a, b) in fast.iter().zip(&brute) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn symmetrizer_caps() {
        assert!(matches!(Symmetrizer::new(2, 11), Err(Error::ArityCap { .. })));
        assert!(Symmetrizer::new(100, 10).unwrap_err().is_cap());
        let s = Symmetrizer::new(2, 2).unwrap();
        assert!(s.symmetrize_rows(&[1.0; 3]).is_err());
    }

    proptest! {
        #[test]
        fn kron_powers_of_a_vector_are_symmetric(
            x in proptest::collection::vec(-2.0f64..2.0, 1..4),
            arity in 1usize..5,
        ) {
            let s = Symmetrizer::new(x.len(), arity).unwrap();
            let v = kron_power_vec(&x, arity).unwrap();
            prop_assert!(s.is_fixed_point(&v, 1e-14).unwrap());
        }

        #[test]
        fn perm_round_trip(seed in 0u64..1000, n in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut map: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.random_range(0..=i);
                map.swap(i, j);
            }
            let p = PermOperator::from_map(map).unwrap();
            let v: Vec<f64> = (0..n).map(|i| i as f64).collect();
            let there = p.apply_to_vec(&v).unwrap();
            prop_assert_eq!(p.inverse().apply_to_vec(&there).unwrap(), v.clone());
            prop_assert!(p.mul(&p.inverse()).unwrap().is_identity());
            let row = p.apply_to_row(&v).unwrap();
            prop_assert_eq!(p.inverse().apply_to_vec(&v).unwrap(), row);
        }
    }
}
