//! Reference computations that avoid the Bell and Kronecker code paths:
//! Isserlis (Wick) moments, Monte Carlo moments and exact polynomial
//! composition.
//!
//! Monte Carlo draws come from `ChaCha8Rng::seed_from_u64(seed)`. Each sample
//! consumes `dim` standard normals (`rand_distr::StandardNormal`) in
//! coordinate order, and samples are drawn one after another, so a seed pins
//! the whole stream.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix_calculus::{Monomial, PolyFn};
use crate::normal_moments::GaussianSpec;

/// Largest total exponent accepted by [`isserlis_moment`].
pub const ISSERLIS_CAP: usize = 10;
/// Smallest sample count accepted by [`monte_carlo_moment`].
pub const MIN_SAMPLES: usize = 10_000;
/// Largest number of monomials [`compose_poly`] will hold in one component.
pub const COMPOSE_TERM_CAP: usize = 200_000;

/// A split of `{0, …, m-1}` into singletons and unordered pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingPartition {
    pub singletons: Vec<usize>,
    pub pairs: Vec<(usize, usize)>,
}

/// Every singleton/pair partition of `m` elements. The lowest unplaced
/// element is either left alone or paired with a later one.
pub fn enumerate_pairings(m: usize) -> Vec<PairingPartition> {
    fn go(rest: &[usize], current: &mut PairingPartition, out: &mut Vec<PairingPartition>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(current.clone());
            return;
        };
        current.singletons.push(first);
        go(tail, current, out);
        current.singletons.pop();
        for (i, &partner) in tail.iter().enumerate() {
            let remaining: Vec<usize> = tail[..i].iter().chain(&tail[i + 1..]).copied().collect();
            current.pairs.push((first, partner));
            go(&remaining, current, out);
            current.pairs.pop();
        }
    }
    let elements: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    go(
        &elements,
        &mut PairingPartition {
            singletons: Vec::new(),
            pairs: Vec::new(),
        },
        &mut out,
    );
    out
}

fn expand_labels(spec: &GaussianSpec, exponents: &[u32]) -> Result<Vec<usize>> {
    if exponents.len() != spec.dim() {
        return Err(Error::mismatch(format!(
            "{} exponents for a {}-dimensional distribution",
            exponents.len(),
            spec.dim()
        )));
    }
    Ok(exponents
        .iter()
        .enumerate()
        .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
        .collect())
}

/// `E[∏ X_i^{e_i}]` for `X ~ N(μ, Σ)` as a sum over singleton/pair
/// partitions of the index multiset: singletons contribute `μ_i`, pairs
/// contribute `σ_ij`.
pub fn isserlis_moment(spec: &GaussianSpec, exponents: &[u32]) -> Result<f64> {
    let labels = expand_labels(spec, exponents)?;
    if labels.len() > ISSERLIS_CAP {
        return Err(Error::invalid(format!(
            "total exponent {} exceeds the Isserlis cap of {ISSERLIS_CAP}",
            labels.len()
        )));
    }
    let mu = spec.mean();
    let cov = spec.cov();
    Ok(enumerate_pairings(labels.len())
        .iter()
        .map(|p| {
            let singles: f64 = p.singletons.iter().map(|&s| mu[labels[s]]).product();
            let pairs: f64 = p.pairs.iter().map(|&(a, b)| cov[(labels[a], labels[b])]).product();
            singles * pairs
        })
        .sum())
}

/// Lower-triangular `L` with `L L' = Σ`. Pivots within a small tolerance of
/// zero are treated as zero so singular covariances factor too.
pub fn cholesky_psd(spec: &GaussianSpec) -> Result<Vec<Vec<f64>>> {
    let k = spec.dim();
    let cov = spec.cov();
    let scale = (0..k).map(|i| cov[(i, i)].abs()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-10 * scale;
    let mut l = vec![vec![0.0; k]; k];
    for j in 0..k {
        let d = cov[(j, j)] - (0..j).map(|t| l[j][t] * l[j][t]).sum::<f64>();
        if d < -tol {
            return Err(Error::InvalidCovariance(format!(
                "Cholesky pivot {j} is {d}; the matrix is not positive semidefinite"
            )));
        }
        if d <= tol {
            for i in j + 1..k {
                let r = cov[(i, j)] - (0..j).map(|t| l[i][t] * l[j][t]).sum::<f64>();
                if r.abs() > 1e-8 * scale {
                    return Err(Error::InvalidCovariance(format!(
                        "zero Cholesky pivot {j} with nonzero off-diagonal remainder {r}"
                    )));
                }
            }
            continue;
        }
        let root = d.sqrt();
        l[j][j] = root;
        for i in j + 1..k {
            l[i][j] = (cov[(i, j)] - (0..j).map(|t| l[i][t] * l[j][t]).sum::<f64>()) / root;
        }
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// `|estimate - target|` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.estimate - target).abs();
        if self.stderr == 0.0 {
            if diff == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            diff / self.stderr
        }
    }
}

/// Sample mean of `∏ X_i^{e_i}` over `samples` draws `X = μ + L z`.
pub fn monte_carlo_moment(
    spec: &GaussianSpec,
    exponents: &[u32],
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if exponents.len() != spec.dim() {
        return Err(Error::mismatch(format!(
            "{} exponents for a {}-dimensional distribution",
            exponents.len(),
            spec.dim()
        )));
    }
    if samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "Monte Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let l = cholesky_psd(spec)?;
    let k = spec.dim();
    let mu = spec.mean();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![0.0; k];
    // Welford running mean and sum of squared deviations.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for count in 1..=samples {
        for zi in z.iter_mut() {
            *zi = StandardNormal.sample(&mut rng);
        }
        let mut value = 1.0;
        for (i, &e) in exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let x = mu[i] + (0..=i).map(|t| l[i][t] * z[t]).sum::<f64>();
            value *= x.powi(e as i32);
        }
        let delta = value - mean;
        mean += delta / count as f64;
        m2 += delta * (value - mean);
    }
    let variance = m2 / (samples - 1) as f64;
    Ok(MonteCarloEstimate {
        estimate: mean,
        stderr: (variance / samples as f64).sqrt(),
        samples,
    })
}

type Sparse = BTreeMap<Vec<u32>, f64>;

fn sparse_mul(a: &Sparse, b: &Sparse) -> Result<Sparse> {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert(0.0) += ca * cb;
        }
        if out.len() > COMPOSE_TERM_CAP {
            return Err(Error::SizeCap {
                what: "composed polynomial".into(),
                requested: out.len() as u128,
                cap: COMPOSE_TERM_CAP,
            });
        }
    }
    Ok(out)
}

/// Exact monomial expansion of `f ∘ g`.
pub fn compose_poly(f: &PolyFn, g: &PolyFn) -> Result<PolyFn> {
    if f.n_x() != g.n_y() {
        return Err(Error::mismatch(format!(
            "f takes {} inputs but g produces {} outputs",
            f.n_x(),
            g.n_y()
        )));
    }
    let n_x = g.n_x();
    let one: Sparse = [(vec![0; n_x], 1.0)].into_iter().collect();
    let inner: Vec<Sparse> = g
        .components()
        .iter()
        .map(|c| c.iter().map(|m| (m.exponents.clone(), m.coeff)).collect())
        .collect();
    // powers[v][p] = g_v^p, grown on demand
    let mut powers: Vec<Vec<Sparse>> = vec![vec![one.clone()]; g.n_y()];
    let mut components = Vec::with_capacity(f.n_y());
    for comp in f.components() {
        let mut total = Sparse::new();
        for m in comp {
            let mut term: Sparse = [(vec![0; n_x], m.coeff)].into_iter().collect();
            for (v, &e) in m.exponents.iter().enumerate() {
                while powers[v].len() <= e as usize {
                    let next = sparse_mul(powers[v].last().expect("non-empty"), &inner[v])?;
                    powers[v].push(next);
                }
                term = sparse_mul(&term, &powers[v][e as usize])?;
            }
            for (e, c) in term {
                *total.entry(e).or_insert(0.0) += c;
            }
        }
        components.push(total.into_iter().map(|(e, c)| Monomial::new(c, e)).collect());
    }
    PolyFn::new(n_x, f.n_y(), components)
}
