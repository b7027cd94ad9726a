//! Bell index sequences and their coefficients.
//!
//! A Bell index for `B_{n,k}` is a sequence `j = (j_1, …, j_{n-k+1})` of
//! nonnegative integers with `Σ j_l = k` and `Σ l·j_l = n`. Each one is the
//! block-size profile of a family of set partitions of `n` elements into `k`
//! blocks (`j_l` blocks of size `l`), and contributes the term
//!
//! ```text
//! α_j · (g_x/1!)^{⊗j_1} ⊗ (g_{x²}/2!)^{⊗j_2} ⊗ …,   α_j = n! / ∏ j_l!
//! ```
//!
//! to the partial Bell polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`count_set_partitions`].
pub const SET_PARTITION_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BellIndex {
    n: usize,
    k: usize,
    j: Vec<usize>,
}

impl BellIndex {
    /// Validates both Bell constraints and the sequence length `n - k + 1`.
    pub fn new(n: usize, k: usize, j: Vec<usize>) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::invalid(format!(
                "Bell index needs 1 <= k <= n, got n = {n}, k = {k}"
            )));
        }
        if j.len() != n - k + 1 {
            return Err(Error::invalid(format!(
                "Bell index for n = {n}, k = {k} must have length {}, got {}",
                n - k + 1,
                j.len()
            )));
        }
        let blocks: usize = j.iter().sum();
        let weight: usize = j.iter().enumerate().map(|(l, &c)| (l + 1) * c).sum();
        if blocks != k || weight != n {
            return Err(Error::invalid(format!(
                "sequence {j:?} has block count {blocks} and weight {weight}, expected {k} and {n}"
            )));
        }
        Ok(Self { n, k, j })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> &[usize] {
        &self.j
    }

    /// Derivative orders of the Kronecker factors in chain order, e.g.
    /// `j = (1, 1)` gives `[1, 2]` for `g_x ⊗ g_{x²}`.
    pub fn factor_orders(&self) -> Vec<usize> {
        self.j
            .iter()
            .enumerate()
            .flat_map(|(l, &count)| std::iter::repeat_n(l + 1, count))
            .collect()
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.j.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All Bell indices of `B_{n,k}`, in lexicographically decreasing order of
/// `j` (the term with the most `g_x` factors first). Empty when `k > n`.
pub fn enumerate_bell_indices(n: usize, k: usize) -> Result<Vec<BellIndex>> {
    if n == 0 || k == 0 {
        return Err(Error::invalid(format!(
            "Bell indices need n >= 1 and k >= 1 (got n = {n}, k = {k}); B_{{n,0}} and B_{{0,k}} are zero"
        )));
    }
    if k > n {
        return Ok(Vec::new());
    }
    let len = n - k + 1;
    let mut out = Vec::new();
    let mut current = vec![0; len];
    fill_positions(0, k, n, &mut current, &mut out, n, k);
    Ok(out)
}

fn fill_positions(
    pos: usize,
    blocks_left: usize,
    weight_left: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<BellIndex>,
    n: usize,
    k: usize,
) {
    if pos == current.len() {
        if blocks_left == 0 && weight_left == 0 {
            out.push(BellIndex {
                n,
                k,
                j: current.clone(),
            });
        }
        return;
    }
    let size = pos + 1;
    let max = blocks_left.min(weight_left / size);
    for count in (0..=max).rev() {
        let blocks = blocks_left - count;
        let weight = weight_left - count * size;
        // Remaining blocks each weigh at least `size + 1` and at most `len`.
        let len = current.len();
        if blocks * (size + 1) > weight && !(blocks == 0 && weight == 0) {
            continue;
        }
        if blocks * len < weight {
            continue;
        }
        current[pos] = count;
        fill_positions(pos + 1, blocks, weight, current, out, n, k);
    }
    current[pos] = 0;
}

fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

/// Exact coefficient `n! / ∏_l (j_l! · (l!)^{j_l})`, reduced.
pub fn bell_coefficient(idx: &BellIndex) -> BigRational {
    let denominator = idx
        .j
        .iter()
        .enumerate()
        .fold(BigInt::one(), |acc, (l, &count)| {
            acc * factorial(count) * factorial(l + 1).pow(count as u32)
        });
    BigRational::new(factorial(idx.n), denominator)
}

/// [`bell_coefficient`] rounded to the nearest `f64`.
pub fn bell_coefficient_f64(idx: &BellIndex) -> f64 {
    bell_coefficient(idx)
        .to_f64()
        .expect("Bell coefficients are finite rationals")
}

/// Number of partitions of an `n`-element set into `k` nonempty blocks,
/// counted by walking restricted-growth strings (no closed formula).
pub fn count_set_partitions(n: usize, k: usize) -> Result<u64> {
    if n == 0 || k == 0 || k > n || n > SET_PARTITION_CAP {
        return Err(Error::invalid(format!(
            "set partitions are enumerated for 1 <= k <= n <= {SET_PARTITION_CAP}, got n = {n}, k = {k}"
        )));
    }
    // Element 0 always opens block 0; each later element joins an open block
    // or opens the next one.
    fn walk(next: usize, open: usize, n: usize, k: usize) -> u64 {
        if open + (n - next) < k {
            return 0;
        }
        if next == n {
            return u64::from(open == k);
        }
        let mut total = 0;
        for _ in 0..open {
            total += walk(next + 1, open, n, k);
        }
        if open < k {
            total += walk(next + 1, open + 1, n, k);
        }
        total
    }
    Ok(walk(1, 1, n, k))
}
