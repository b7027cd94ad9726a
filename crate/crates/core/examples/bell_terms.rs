//! Partial Bell polynomials: their terms, the univariate values and the
//! Kronecker-valued multivariate form.

use bellkron::bell_poly::{base_polynomial, bell_multivariate, bell_univariate, UniDerivSeq};
use bellkron::matrix_calculus::{poly_jet, Monomial, PolyFn};
use bellkron::partitions::{bell_coefficient, count_set_partitions, enumerate_bell_indices};

fn main() -> bellkron::Result<()> {
    for (n, k) in [(3, 2), (4, 2), (5, 3)] {
        let terms: Vec<String> = enumerate_bell_indices(n, k)?
            .iter()
            .map(|j| format!("{} x {j} (factors {:?})", bell_coefficient(j), j.factor_orders()))
            .collect();
        println!("B_{{{n},{k}}}: {}", terms.join(" + "));
    }

    let ones = UniDerivSeq::new(vec![1.0; 6])?;
    for k in 1..=6 {
        println!("B_{{6,{k}}}(1,...,1) = {}  S(6,{k}) = {}", bell_univariate(6, k, &ones)?, count_set_partitions(6, k)?);
    }

    // g(x, y) = (x^2 y, x + y^3) at (1, 2)
    let g = PolyFn::new(
        2,
        2,
        vec![vec![Monomial::new(1.0, vec![2, 1])], vec![Monomial::new(1.0, vec![1, 0]), Monomial::new(1.0, vec![0, 3])]],
    )?;
    let jet = poly_jet(&g, &[1.0, 2.0], 2)?;
    let b32 = bell_multivariate(3, 2, &jet)?;
    println!("B_{{3,2}} has shape {:?}", b32.shape());
    let j = &enumerate_bell_indices(3, 2)?[0];
    let base = base_polynomial(j, &jet)?;
    println!("B_{{3,2}} equals 3 x (g_x (x) g_xx): {}", b32.max_abs_diff(&base.scale(3.0))? == 0.0);
    Ok(())
}
