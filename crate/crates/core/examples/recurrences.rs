//! The Bell recurrences hold for Kronecker-valued polynomials only after
//! sandwiching between D^{(x)k} and X^{(x)n}.

use bellkron::bell_poly::{bell_multivariate, bell_recursion_matrix, bell_recursion_sandwich_rhs, recurrence_sides, sandwich};
use bellkron::matrix_calculus::{poly_jet, Monomial, PolyFn};

fn main() -> bellkron::Result<()> {
    let g = PolyFn::new(
        2,
        2,
        vec![
            vec![Monomial::new(1.0, vec![3, 1]), Monomial::new(-0.5, vec![1, 2])],
            vec![Monomial::new(2.0, vec![2, 2]), Monomial::new(1.0, vec![0, 4])],
        ],
    )?;
    let jet = poly_jet(&g, &[0.6, -0.4], 5)?;
    let (n, k) = (3, 2);

    let direct = bell_multivariate(n, k, &jet)?;
    let recursive = bell_recursion_matrix(n, k, &jet)?;
    println!("raw matrices differ by {:e}", direct.max_abs_diff(&recursive)?);

    let d = [0.8, -1.1];
    let x = [0.3, 0.9];
    let lhs = sandwich(&d, &direct, &x, k, n)?;
    println!("sandwiched: {lhs} vs {}", bell_recursion_sandwich_rhs(n, k, &jet, &d, &x)?);

    for n in 1..=4 {
        for k in 1..=n + 1 {
            let sides = recurrence_sides(n, k, &jet, &d, &x)?;
            println!("order raising n={n} k={k}: lhs {:+.6e} residual {:.1e}", sides.lhs, sides.residual());
        }
    }
    Ok(())
}
