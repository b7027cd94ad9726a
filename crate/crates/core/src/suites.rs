//! Seeded property suites, as run by `bellkron verify`.
//!
//! Each check reports the worst residual it saw and the tolerance it was held
//! to. Instances are drawn from `ChaCha8Rng::seed_from_u64(seed)`, so a seed
//! reproduces a report exactly.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bell_poly::{
    base_polynomial, base_polynomial_permuted, bell_multivariate, bell_recursion_matrix,
    bell_recursion_sandwich_rhs, recurrence_sides, sandwich,
};
use crate::error::{Error, Result};
use crate::faa_di_bruno::faa_symmetrized;
use crate::jet::Jet;
use crate::kron_ops::{all_permutations, commutation_matrix, kron_power_vec, ExactMatrix, Symmetrizer};
use crate::matrix::DenseMatrix;
use crate::matrix_calculus::{finite_diff_jet_with, poly_jet, FdSteps, Monomial, PolyFn};
use crate::normal_moments::{
    moment_via_faa, raw_moment_vector, scalar_moment, symmetrized_moment_vector, GaussianSpec,
};
use crate::partitions::enumerate_bell_indices;
use crate::verification::{compose_poly, isserlis_moment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Recurrence,
    Symmetrizer,
    Moments,
    Compose,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Recurrence => "recurrence",
            Suite::Symmetrizer => "symmetrizer",
            Suite::Moments => "moments",
            Suite::Compose => "compose",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recurrence" => Ok(Suite::Recurrence),
            "symmetrizer" => Ok(Suite::Symmetrizer),
            "moments" => Ok(Suite::Moments),
            "compose" => Ok(Suite::Compose),
            "all" => Ok(Suite::All),
            other => Err(Error::invalid(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SuiteOptions {
    pub seed: u64,
    pub fd_steps: FdSteps,
}

pub fn run_suite(suite: Suite, options: SuiteOptions) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let wanted = |s: Suite| suite == Suite::All || suite == s;
    if wanted(Suite::Recurrence) {
        checks.extend(recurrence_checks(options.seed)?);
    }
    if wanted(Suite::Symmetrizer) {
        checks.extend(symmetrizer_checks(options.seed)?);
    }
    if wanted(Suite::Moments) {
        checks.extend(moment_checks(options.seed)?);
    }
    if wanted(Suite::Compose) {
        checks.extend(compose_checks(options)?);
    }
    Ok(SuiteReport {
        suite,
        seed: options.seed,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

/// Running maximum of a residual against a fixed tolerance.
struct Tracker {
    suite: &'static str,
    name: &'static str,
    tolerance: f64,
    worst: f64,
    instances: usize,
}

impl Tracker {
    fn new(suite: &'static str, name: &'static str, tolerance: f64) -> Self {
        Self {
            suite,
            name,
            tolerance,
            worst: 0.0,
            instances: 0,
        }
    }

    fn record(&mut self, residual: f64) {
        // A NaN residual sticks and fails the check.
        if !self.worst.is_nan() && (residual.is_nan() || residual > self.worst) {
            self.worst = residual;
        }
        self.instances += 1;
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            suite: self.suite,
            name: self.name,
            passed: self.worst <= self.tolerance,
            residual: self.worst,
            tolerance: self.tolerance,
            instances: self.instances,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn uniform_jet(rng: &mut ChaCha8Rng, n_y: usize, n_x: usize, orders: usize) -> Result<Jet> {
    let mats = (1..=orders)
        .map(|l| {
            let cols = n_x.pow(l as u32);
            DenseMatrix::new(n_y, cols, uniform_vec(rng, n_y * cols))
        })
        .collect::<Result<Vec<_>>>()?;
    Jet::new(n_y, n_x, vec![0.0; n_y], mats)
}

fn recurrence_checks(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order_raising = Tracker::new("recurrence", "order_raising_sandwiched", 1e-10);
    let mut first = Tracker::new("recurrence", "first_recurrence_sandwiched", 1e-10);
    let mut invariance = Tracker::new("recurrence", "factor_order_invariance", 1e-10);
    for _ in 0..60 {
        let (n_y, n_x) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let n = rng.random_range(1..=4);
        let k = rng.random_range(1..=n);
        let g = uniform_jet(&mut rng, n_y, n_x, n + 1)?;
        let d = uniform_vec(&mut rng, n_y);
        let x = uniform_vec(&mut rng, n_x);
        order_raising.record(recurrence_sides(n, k, &g, &d, &x)?.relative_residual());
        let lhs = sandwich(&d, &bell_multivariate(n, k, &g)?, &x, k, n)?;
        first.record(rel(lhs, bell_recursion_sandwich_rhs(n, k, &g, &d, &x)?));
        for idx in enumerate_bell_indices(n, k)? {
            let base = sandwich(&d, &base_polynomial(&idx, &g)?, &x, k, n)?;
            for sigma in all_permutations(k) {
                let permuted = sandwich(&d, &base_polynomial_permuted(&idx, &g, &sigma)?, &x, k, n)?;
                invariance.record(rel(base, permuted));
            }
        }
    }

    // Without the sandwich the same recurrence fails as a matrix identity;
    // residual 0 means the raw matrices differ as expected.
    let mut witness = Tracker::new("recurrence", "raw_matrices_differ", 0.0);
    let g = uniform_jet(&mut rng, 2, 2, 3)?;
    let raw_gap = bell_multivariate(3, 2, &g)?.max_abs_diff(&bell_recursion_matrix(3, 2, &g)?)?;
    witness.record(if raw_gap > 1e-6 { 0.0 } else { 1.0 });

    Ok(vec![
        order_raising.finish(),
        first.finish(),
        invariance.finish(),
        witness.finish(),
    ])
}

fn exact_mismatch(a: &ExactMatrix, b: &ExactMatrix) -> f64 {
    let mut different = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a.get(i, j) != b.get(i, j) {
                different = 1.0;
            }
        }
    }
    different
}

fn symmetrizer_checks(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut explicit = Tracker::new("symmetrizer", "s22_half_identity_plus_commutation", 0.0);
    let s22 = Symmetrizer::new(2, 2)?.to_dense_exact()?;
    let half = BigRational::new(1.into(), 2.into());
    let expected = ExactMatrix::identity(4)
        .add(&commutation_matrix(2, 2)?.to_exact()?)?
        .scale(&half);
    explicit.record(exact_mismatch(&s22, &expected));

    let mut idempotent = Tracker::new("symmetrizer", "idempotent_exact", 0.0);
    let mut symmetric = Tracker::new("symmetrizer", "symmetric_exact", 0.0);
    let mut stochastic = Tracker::new("symmetrizer", "rows_sum_to_one_exact", 0.0);
    for base in 1..=3 {
        for arity in 1..=3 {
            let s = Symmetrizer::new(base, arity)?.to_dense_exact()?;
            idempotent.record(exact_mismatch(&s.matmul(&s)?, &s));
            symmetric.record(exact_mismatch(&s.transpose(), &s));
            let mut off = 0.0;
            for i in 0..s.rows() {
                let mut sum = BigRational::zero();
                for j in 0..s.cols() {
                    sum += s.get(i, j);
                }
                if !sum.is_one() {
                    off = 1.0;
                }
            }
            stochastic.record(off);
        }
    }

    let mut fixed = Tracker::new("symmetrizer", "kron_powers_are_fixed_points", 1e-14);
    for _ in 0..20 {
        let base = rng.random_range(1..=3);
        let arity = rng.random_range(1..=5);
        let v = uniform_vec(&mut rng, base);
        let power = kron_power_vec(&v, arity)?;
        let s = Symmetrizer::new(base, arity)?.symmetrize_rows(&power)?;
        let worst = s.iter().zip(&power).map(|(a, b)| rel(*a, *b)).fold(0.0, f64::max);
        fixed.record(worst);
    }
    Ok(vec![
        explicit.finish(),
        idempotent.finish(),
        symmetric.finish(),
        stochastic.finish(),
        fixed.finish(),
    ])
}

fn random_gaussian(rng: &mut ChaCha8Rng, k: usize) -> Result<GaussianSpec> {
    let a = uniform_vec(rng, k * k);
    let mut cov = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..=i {
            let v: f64 = (0..k).map(|l| a[i * k + l] * a[j * k + l]).sum();
            cov[i][j] = v;
            cov[j][i] = v;
        }
        cov[i][i] += 0.1;
    }
    GaussianSpec::from_rows(uniform_vec(rng, k), &cov)
}

fn exponent_vectors(k: usize, n: u32) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in exponent_vectors(k - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn moment_checks(seed: u64) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fourth = Tracker::new("moments", "centered_fourth_moment_closed_form", 1e-12);
    let mut two_path = Tracker::new("moments", "chain_rule_matches_closed_form", 1e-10);
    let mut isserlis = Tracker::new("moments", "closed_form_matches_isserlis", 1e-10);

    let centered = GaussianSpec::from_rows(vec![0.0, 0.0], &[vec![2.0, 0.5], vec![0.5, 1.0]])?;
    let m4 = raw_moment_vector(&centered, 4)?;
    let v = centered.vec_cov();
    for (c, x) in m4.data().iter().enumerate() {
        fourth.record(rel(*x, 3.0 * v[c / 4] * v[c % 4]));
    }
    fourth.record(rel(scalar_moment(&centered, &[2, 2])?, 2.5));

    for k in 1..=3 {
        let spec = random_gaussian(&mut rng, k)?;
        for n in 1..=6 {
            let via = moment_via_faa(&spec, n)?.symmetrize()?;
            let closed = symmetrized_moment_vector(&spec, n)?;
            for (a, b) in via.data().iter().zip(closed.data()) {
                two_path.record(rel(*a, *b));
            }
            for e in exponent_vectors(k, n as u32) {
                isserlis.record(rel(scalar_moment(&spec, &e)?, isserlis_moment(&spec, &e)?));
            }
        }
    }
    Ok(vec![fourth.finish(), two_path.finish(), isserlis.finish()])
}

fn random_poly(rng: &mut ChaCha8Rng, n_x: usize, n_y: usize, max_deg: u32) -> Result<PolyFn> {
    let components = (0..n_y)
        .map(|_| {
            (0..rng.random_range(1..=5))
                .map(|_| {
                    let mut e = vec![0u32; n_x];
                    for _ in 0..rng.random_range(0..=max_deg) {
                        e[rng.random_range(0..n_x)] += 1;
                    }
                    Monomial::new(rng.random_range(-1.0..1.0), e)
                })
                .collect()
        })
        .collect();
    PolyFn::new(n_x, n_y, components)
}

fn compose_checks(options: SuiteOptions) -> Result<Vec<CheckOutcome>> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut exact = Tracker::new("compose", "symmetrized_matches_composed_polynomial", 1e-10);
    let mut fd = Tracker::new("compose", "jets_match_finite_differences", 1e-5);
    for _ in 0..20 {
        let (n_f, n_y, n_x) = (
            rng.random_range(1..=3),
            rng.random_range(1..=3),
            rng.random_range(1..=3),
        );
        let f = random_poly(&mut rng, n_y, n_f, 3)?;
        let g = random_poly(&mut rng, n_x, n_y, 3)?;
        let x = uniform_vec(&mut rng, n_x);
        let g_jet = poly_jet(&g, &x, 4)?;
        let f_jet = poly_jet(&f, g_jet.value(), 4)?;
        let composite = compose_poly(&f, &g)?;
        let truth = poly_jet(&composite, &x, 4)?;
        for n in 1..=4 {
            let d = faa_symmetrized(n, &f_jet, &g_jet)?;
            exact.record(d.matrix().max_rel_diff(truth.derivative(n)?)?);
        }
        let approx = finite_diff_jet_with(&composite, &x, 2, options.fd_steps)?;
        for n in 1..=2 {
            fd.record(approx.derivative(n)?.max_rel_diff(truth.derivative(n)?)?);
        }
    }
    Ok(vec![exact.finish(), fd.finish()])
}
