use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::matrix_calculus::{Monomial, PolyFn};

/// Up to five monomials per component with uniform(-1, 1) coefficients.
pub(crate) fn random_poly(rng: &mut ChaCha8Rng, n_x: usize, n_y: usize, max_deg: u32) -> PolyFn {
    let components = (0..n_y)
        .map(|_| {
            (0..rng.random_range(1..=5))
                .map(|_| {
                    let mut e = vec![0u32; n_x];
                    let deg = rng.random_range(0..=max_deg);
                    for _ in 0..deg {
                        e[rng.random_range(0..n_x)] += 1;
                    }
                    Monomial::new(rng.random_range(-1.0..1.0), e)
                })
                .collect()
        })
        .collect();
    PolyFn::new(n_x, n_y, components).unwrap()
}

pub(crate) fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}
