//! Higher derivatives of a composite f(g(x)) from the jets of f and g.

use bellkron::faa_di_bruno::{apply_differential, directional_taylor_check, faa_symmetrized, faa_total_derivative};
use bellkron::matrix_calculus::{exp_scalar_jet, poly_jet, Monomial, PolyFn};
use bellkron::verification::compose_poly;

fn main() -> bellkron::Result<()> {
    // g: R^2 -> R^2, f: R^2 -> R
    let g = PolyFn::new(
        2,
        2,
        vec![
            vec![Monomial::new(1.0, vec![1, 1]), Monomial::new(0.5, vec![0, 2])],
            vec![Monomial::new(2.0, vec![1, 0]), Monomial::new(-1.0, vec![0, 1])],
        ],
    )?;
    let f = PolyFn::new(2, 1, vec![vec![Monomial::new(1.0, vec![2, 1]), Monomial::new(-3.0, vec![0, 2])]])?;
    let x = [0.4, -0.7];
    let n = 3;

    let g_jet = poly_jet(&g, &x, n)?;
    let f_jet = poly_jet(&f, g_jet.value(), n)?;
    let raw = faa_total_derivative(n, &f_jet, &g_jet)?;
    let sym = faa_symmetrized(n, &f_jet, &g_jet)?;
    println!("raw third derivative:         {:?}", raw.matrix().row(0));
    println!("symmetrized third derivative: {:?}", sym.matrix().row(0));

    let composed = compose_poly(&f, &g)?;
    let truth = poly_jet(&composed, &x, n)?;
    println!("max relative gap to the composed polynomial: {:e}", sym.matrix().max_rel_diff(truth.derivative(n)?)?);

    // Both representations give the same differential.
    let dx = [1.0, 0.5];
    println!("d^3 (raw) = {:?}, d^3 (sym) = {:?}", apply_differential(&raw, &dx)?, apply_differential(&sym, &dx)?);
    let ray = directional_taylor_check(&f_jet, &g_jet, &composed, &x, &dx, n)?;
    println!("finite difference along dx: {:?} (relative residual {:e})", ray.numeric, ray.relative_residual());

    // exp of a scalar inner function: d^4/dt^4 exp(t^2) at t = 0 is 12.
    let inner = PolyFn::new(1, 1, vec![vec![Monomial::new(1.0, vec![2])]])?;
    let t_jet = poly_jet(&inner, &[0.0], 4)?;
    let e_jet = exp_scalar_jet(t_jet.value()[0], 4)?;
    println!("d^4 exp(t^2) at 0 = {}", faa_total_derivative(4, &e_jet, &t_jet)?.matrix()[(0, 0)]);
    Ok(())
}
