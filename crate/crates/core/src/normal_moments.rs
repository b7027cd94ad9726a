//! Moment vectors `m_n = E[(X')^{⊗n}]` of `X ~ N(μ, Σ)`.
//!
//! The closed form expands the MGF `exp(t'μ + ½ t'Σt)`:
//!
//! ```text
//! m_n = Σ_{j=0}^{⌊n/2⌋} n! / ((n-2j)! j! 2^j) · (μ')^{⊗(n-2j)} ⊗ (vec(Σ)')^{⊗j}
//! ```
//!
//! This raw vector is a valid but non-symmetric representation; entry `c` of
//! the symmetrized vector is `E[X_{i_1} ⋯ X_{i_n}]` for the digits of `c`.
//! [`moment_via_faa`] reaches the same vector through the generic chain rule.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::faa_di_bruno::faa_total_derivative;
use crate::jet::composite_index;
use crate::kron_ops::{kron_power_vec, Symmetrizer};
use crate::limits;
use crate::matrix::DenseMatrix;
use crate::matrix_calculus::{exp_scalar_jet, poly_jet, Monomial, PolyFn};

/// Smallest eigenvalue of `Σ` accepted as positive semidefinite.
pub const PSD_TOLERANCE: f64 = -1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    mean: Vec<f64>,
    cov: DenseMatrix,
}

impl GaussianSpec {
    /// `cov` must be exactly symmetric as stored and positive semidefinite.
    pub fn new(mean: Vec<f64>, cov: DenseMatrix) -> Result<Self> {
        let k = mean.len();
        if k == 0 {
            return Err(Error::invalid("the distribution needs at least one dimension"));
        }
        if cov.shape() != (k, k) {
            return Err(Error::InvalidCovariance(format!(
                "covariance is {}x{}, expected {k}x{k} to match the mean",
                cov.rows(),
                cov.cols()
            )));
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mean".into()));
        }
        for i in 0..k {
            for j in 0..i {
                if cov[(i, j)] != cov[(j, i)] {
                    return Err(Error::InvalidCovariance(format!(
                        "not symmetric: entry ({i},{j}) = {} but ({j},{i}) = {}",
                        cov[(i, j)],
                        cov[(j, i)]
                    )));
                }
            }
        }
        let eig = SymmetricEigen::new(DMatrix::from_row_slice(k, k, cov.data()));
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min < PSD_TOLERANCE {
            return Err(Error::InvalidCovariance(format!(
                "not positive semidefinite: smallest eigenvalue {min}"
            )));
        }
        Ok(Self { mean, cov })
    }

    /// `N(μ, Σ)` from nested rows.
    pub fn from_rows(mean: Vec<f64>, cov: &[Vec<f64>]) -> Result<Self> {
        let cov = DenseMatrix::from_rows(cov).map_err(|e| Error::InvalidCovariance(e.to_string()))?;
        Self::new(mean, cov)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &DenseMatrix {
        &self.cov
    }

    /// `vec(Σ)'`, row-major: `(σ₁₁, σ₁₂, σ₂₁, σ₂₂)` for `k = 2`.
    pub fn vec_cov(&self) -> &[f64] {
        self.cov.data()
    }

    pub fn is_centered(&self) -> bool {
        self.mean.iter().all(|&m| m == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    order: usize,
    dim: usize,
    data: Vec<f64>,
    symmetrized: bool,
}

impl MomentVector {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn is_symmetrized(&self) -> bool {
        self.symmetrized
    }

    /// The digit-permutation average of this vector.
    pub fn symmetrize(self) -> Result<MomentVector> {
        symmetrize(self)
    }

    /// Entry at the zero-based digits `(i_1, …, i_n)`.
    pub fn at(&self, digits: &[usize]) -> Result<f64> {
        if digits.len() != self.order || digits.iter().any(|&d| d >= self.dim) {
            return Err(Error::invalid(format!(
                "digits {digits:?} do not index an order-{} moment in dimension {}",
                self.order, self.dim
            )));
        }
        Ok(self.data[composite_index(digits, self.dim)])
    }
}

fn check_vector(spec: &GaussianSpec, t: &[f64]) -> Result<()> {
    if t.len() != spec.dim() {
        return Err(Error::mismatch(format!(
            "argument has length {}, expected {}",
            t.len(),
            spec.dim()
        )));
    }
    Ok(())
}

/// `exp(t'μ + ½ t'Σt)`.
pub fn mgf(spec: &GaussianSpec, t: &[f64]) -> Result<f64> {
    check_vector(spec, t)?;
    let linear: f64 = t.iter().zip(&spec.mean).map(|(a, b)| a * b).sum();
    let sigma_t = spec.cov.mul_vec(t)?;
    let quad: f64 = t.iter().zip(&sigma_t).map(|(a, b)| a * b).sum();
    Ok((linear + 0.5 * quad).exp())
}

fn check_order(spec: &GaussianSpec, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::invalid("moment order must be at least 1"));
    }
    let len = limits::checked_pow("moment vector", spec.dim(), n)?;
    limits::check_entries("moment vector", 1, len)?;
    Ok(len)
}

fn factorial(n: usize) -> f64 {
    (2..=n).map(|v| v as f64).product()
}

fn kron_vec(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// The closed-form raw moment vector (not symmetrized).
pub fn raw_moment_vector(spec: &GaussianSpec, n: usize) -> Result<MomentVector> {
    let len = check_order(spec, n)?;
    let mut data = vec![0.0; len];
    for j in 0..=n / 2 {
        let coeff = factorial(n) / (factorial(n - 2 * j) * factorial(j) * 2f64.powi(j as i32));
        let term = kron_vec(
            &kron_power_vec(&spec.mean, n - 2 * j)?,
            &kron_power_vec(spec.vec_cov(), j)?,
        );
        for (d, t) in data.iter_mut().zip(&term) {
            *d += coeff * t;
        }
    }
    Ok(MomentVector {
        order: n,
        dim: spec.dim(),
        data,
        symmetrized: false,
    })
}

/// `n! / ((n/2)! 2^{n/2}) · vec(Σ)'^{⊗ n/2}` for a centered distribution.
pub fn central_even_moment(spec: &GaussianSpec, n: usize) -> Result<MomentVector> {
    if !spec.is_centered() {
        return Err(Error::invalid("central moments need a zero mean"));
    }
    if n == 0 || n % 2 == 1 {
        return Err(Error::invalid(format!("central even moment of odd or zero order {n}")));
    }
    check_order(spec, n)?;
    let half = n / 2;
    let coeff = factorial(n) / (factorial(half) * 2f64.powi(half as i32));
    let data = kron_power_vec(spec.vec_cov(), half)?
        .into_iter()
        .map(|v| coeff * v)
        .collect();
    Ok(MomentVector {
        order: n,
        dim: spec.dim(),
        data,
        symmetrized: false,
    })
}

fn symmetrize(m: MomentVector) -> Result<MomentVector> {
    let sym = Symmetrizer::new(m.dim, m.order)?;
    Ok(MomentVector {
        data: sym.symmetrize_rows(&m.data)?,
        symmetrized: true,
        ..m
    })
}

/// [`raw_moment_vector`] averaged over digit permutations: every entry is
/// the scalar product moment of its composite index.
pub fn symmetrized_moment_vector(spec: &GaussianSpec, n: usize) -> Result<MomentVector> {
    symmetrize(raw_moment_vector(spec, n)?)
}

/// The cumulant generating function `t'μ + ½ t'Σt` as a polynomial.
pub fn cumulant_polynomial(spec: &GaussianSpec) -> Result<PolyFn> {
    let k = spec.dim();
    let unit = |i: usize, j: Option<usize>| {
        let mut e = vec![0u32; k];
        e[i] += 1;
        if let Some(j) = j {
            e[j] += 1;
        }
        e
    };
    let mut terms: Vec<Monomial> = (0..k).map(|i| Monomial::new(spec.mean[i], unit(i, None))).collect();
    for i in 0..k {
        for j in 0..k {
            terms.push(Monomial::new(0.5 * spec.cov[(i, j)], unit(i, Some(j))));
        }
    }
    PolyFn::new(k, 1, vec![terms])
}

/// `m_n` as the n-th derivative of `exp ∘ g` at `t = 0` with
/// `g(t) = t'μ + ½ t'Σt`, through the generic chain rule. Equal to
/// [`raw_moment_vector`] after symmetrization.
pub fn moment_via_faa(spec: &GaussianSpec, n: usize) -> Result<MomentVector> {
    check_order(spec, n)?;
    let g = cumulant_polynomial(spec)?;
    let g_jet = poly_jet(&g, &vec![0.0; spec.dim()], n)?;
    let f_jet = exp_scalar_jet(g_jet.value()[0], n)?;
    let d = faa_total_derivative(n, &f_jet, &g_jet)?;
    Ok(MomentVector {
        order: n,
        dim: spec.dim(),
        data: d.into_matrix().into_data(),
        symmetrized: false,
    })
}

/// `E[∏ X_i^{e_i}]`, read off the symmetrized moment vector. The empty
/// product (all exponents zero) is 1.
pub fn scalar_moment(spec: &GaussianSpec, exponents: &[u32]) -> Result<f64> {
    if exponents.len() != spec.dim() {
        return Err(Error::mismatch(format!(
            "{} exponents for a {}-dimensional distribution",
            exponents.len(),
            spec.dim()
        )));
    }
    let digits: Vec<usize> = exponents
        .iter()
        .enumerate()
        .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
        .collect();
    if digits.is_empty() {
        return Ok(1.0);
    }
    let cap = limits::sym_arity_cap();
    if digits.len() > cap {
        return Err(Error::ArityCap {
            arity: digits.len(),
            cap,
        });
    }
    symmetrized_moment_vector(spec, digits.len())?.at(&digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_vec;
    use crate::verification::isserlis_moment;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example() -> GaussianSpec {
        GaussianSpec::from_rows(vec![0.0, 0.0], &[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap()
    }

    /// `A A'` plus a small ridge, with a random mean.
    fn random_spec(rng: &mut ChaCha8Rng, k: usize, centered: bool) -> GaussianSpec {
        let a: Vec<f64> = random_vec(rng, k * k);
        let mut cov = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                cov[i][j] = (0..k).map(|l| a[i * k + l] * a[j * k + l]).sum::<f64>();
            }
            cov[i][i] += 0.1;
        }
        let mean = if centered { vec![0.0; k] } else { random_vec(rng, k) };
        GaussianSpec::from_rows(mean, &cov).unwrap()
    }

    fn all_exponents(k: usize, n: u32) -> Vec<Vec<u32>> {
        if k == 1 {
            return vec![vec![n]];
        }
        (0..=n)
            .flat_map(|first| {
                all_exponents(k - 1, n - first).into_iter().map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
            })
            .collect()
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            GaussianSpec::from_rows(vec![0.0, 0.0], &[vec![1.0, 0.5], vec![0.4, 1.0]]),
            Err(Error::InvalidCovariance(_))
        ));
        assert!(matches!(
            GaussianSpec::from_rows(vec![0.0, 0.0], &[vec![1.0, 2.0], vec![2.0, 1.0]]),
            Err(Error::InvalidCovariance(_))
        ));
        assert!(GaussianSpec::from_rows(vec![0.0], &[vec![1.0, 0.0], vec![0.0, 1.0]]).is_err());
        // singular but PSD
        assert!(GaussianSpec::from_rows(vec![0.0, 0.0], &[vec![1.0, 1.0], vec![1.0, 1.0]]).is_ok());
    }

    #[test]
    fn mgf_values() {
        let spec = example();
        assert_eq!(mgf(&spec, &[0.0, 0.0]).unwrap(), 1.0);
        let std = GaussianSpec::from_rows(vec![0.0, 0.0], &[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((mgf(&std, &[1.0, 0.0]).unwrap() - 0.5f64.exp()).abs() < 1e-15);
        let one = GaussianSpec::from_rows(vec![0.3], &[vec![2.0]]).unwrap();
        let t: f64 = -0.7;
        assert!((mgf(&one, &[t]).unwrap() - (0.3 * t + t * t).exp()).abs() < 1e-15);
        assert!(mgf(&spec, &[0.0]).is_err());
    }

    #[test]
    fn low_order_raw_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = random_spec(&mut rng, 3, false);
        assert_eq!(raw_moment_vector(&spec, 1).unwrap().data(), spec.mean());
        let m2 = raw_moment_vector(&spec, 2).unwrap();
        let mu = spec.mean();
        for i in 0..3 {
            for j in 0..3 {
                let expected = spec.cov()[(i, j)] + mu[i] * mu[j];
                assert!((m2.at(&[i, j]).unwrap() - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fourth_moment_structure() {
        let spec = example();
        let m4 = raw_moment_vector(&spec, 4).unwrap();
        let v = spec.vec_cov();
        for (c, x) in m4.data().iter().enumerate() {
            assert_eq!(*x, 3.0 * v[c / 4] * v[c % 4]);
        }
        assert_eq!(central_even_moment(&spec, 4).unwrap(), m4);
    }

    #[test]
    fn central_even_closed_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = random_spec(&mut rng, 2, true);
        let v = spec.vec_cov().to_vec();
        assert_eq!(central_even_moment(&spec, 2).unwrap().data(), &v[..]);
        let m6 = central_even_moment(&spec, 6).unwrap();
        let cube = kron_power_vec(&v, 3).unwrap();
        for (a, b) in m6.data().iter().zip(&cube) {
            assert_eq!(*a, 15.0 * b);
        }
        for n in [2, 4, 6] {
            let raw = raw_moment_vector(&spec, n).unwrap();
            assert!(raw.data().iter().zip(central_even_moment(&spec, n).unwrap().data()).all(|(a, b)| (a - b).abs() < 1e-14));
        }
        assert!(central_even_moment(&spec, 3).is_err());
        let shifted = random_spec(&mut rng, 2, false);
        assert!(central_even_moment(&shifted, 2).is_err());
    }

    #[test]
    fn odd_central_moments_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let spec = random_spec(&mut rng, 3, true);
        for n in [1, 3, 5] {
            assert!(raw_moment_vector(&spec, n).unwrap().data().iter().all(|&x| x == 0.0));
        }
        assert_eq!(scalar_moment(&spec, &[1, 2, 0]).unwrap(), 0.0);
    }

    #[test]
    fn symmetrized_fourth_moment_entries() {
        let spec = example();
        let m4 = symmetrized_moment_vector(&spec, 4).unwrap();
        assert!(m4.is_symmetrized());
        assert!((m4.at(&[0, 0, 1, 1]).unwrap() - 2.5).abs() < 1e-15);
        assert!((m4.at(&[0, 1, 0, 1]).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(m4.at(&[0, 0, 0, 0]).unwrap(), 12.0);
        assert!((scalar_moment(&spec, &[2, 2]).unwrap() - 2.5).abs() < 1e-15);
        let sym = Symmetrizer::new(2, 4).unwrap();
        assert!(sym.is_fixed_point(m4.data(), 1e-15).unwrap());
        let m1 = symmetrized_moment_vector(&spec, 1).unwrap();
        assert_eq!(m1.data(), spec.mean());
    }

    #[test]
    fn scalar_moment_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = random_spec(&mut rng, 3, false);
        assert_eq!(scalar_moment(&spec, &[0, 0, 0]).unwrap(), 1.0);
        assert!((scalar_moment(&spec, &[1, 0, 0]).unwrap() - spec.mean()[0]).abs() < 1e-15);
        assert!(scalar_moment(&spec, &[1, 0]).is_err());
        assert!(matches!(
            scalar_moment(&spec, &[11, 0, 0]),
            Err(Error::ArityCap { .. })
        ));
    }

    #[test]
    fn chain_rule_path_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 1..=3 {
            let spec = random_spec(&mut rng, k, false);
            for n in 1..=6 {
                let via = symmetrize(moment_via_faa(&spec, n).unwrap()).unwrap();
                let closed = symmetrized_moment_vector(&spec, n).unwrap();
                for (a, b) in via.data().iter().zip(closed.data()) {
                    assert!((a - b).abs() <= 1e-10 * 1f64.max(b.abs()), "k={k} n={n}");
                }
            }
        }
        assert_eq!(moment_via_faa(&example(), 1).unwrap().data(), &[0.0, 0.0]);
        let centered = example();
        let m4 = moment_via_faa(&centered, 4).unwrap();
        assert_eq!(m4, raw_moment_vector(&centered, 4).unwrap());
    }

    #[test]
    fn matches_isserlis() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for k in 1..=3 {
            for centered in [true, false] {
                let spec = random_spec(&mut rng, k, centered);
                for n in 1..=6u32 {
                    for e in all_exponents(k, n) {
                        let a = scalar_moment(&spec, &e).unwrap();
                        let b = isserlis_moment(&spec, &e).unwrap();
                        assert!((a - b).abs() <= 1e-10 * 1f64.max(b.abs()), "{e:?}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn mgf_finite_differences_match_moments() {
        // Central differences of the MGF at 0 along each digit.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let spec = random_spec(&mut rng, 2, false);
        let h = 1e-3;
        for i in 0..2 {
            let at = |s: f64| {
                let mut t = [0.0; 2];
                t[i] = s;
                mgf(&spec, &t).unwrap()
            };
            let d1 = (at(h) - at(-h)) / (2.0 * h);
            let d2 = (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
            let h3 = 1e-3;
            let d3 = (at(2.0 * h3) - 2.0 * at(h3) + 2.0 * at(-h3) - at(-2.0 * h3)) / (2.0 * h3.powi(3));
            let mut e = [0u32; 2];
            for (order, fd) in [(1u32, d1), (2, d2), (3, d3)] {
                e[i] = order;
                let m = scalar_moment(&spec, &e).unwrap();
                assert!((fd - m).abs() <= 1e-4 * 1f64.max(m.abs()), "order {order}: {fd} vs {m}");
            }
        }
        // mixed second partial
        let f = |a: f64, b: f64| mgf(&spec, &[a, b]).unwrap();
        let mixed = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
        let m = scalar_moment(&spec, &[1, 1]).unwrap();
        assert!((mixed - m).abs() <= 1e-4 * 1f64.max(m.abs()));
    }
}
