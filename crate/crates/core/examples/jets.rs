//! Exact derivative jets of a polynomial map, compared with finite
//! differences, and the PolyFn JSON format.

use bellkron::kron_ops::kron_power_vec;
use bellkron::matrix_calculus::{finite_diff_jet_with, poly_jet, BlackBoxFn, FdSteps, Monomial, PolyFn};

fn main() -> bellkron::Result<()> {
    let p = PolyFn::new(
        2,
        1,
        vec![vec![Monomial::new(1.0, vec![2, 1]), Monomial::new(-2.0, vec![0, 3]), Monomial::new(0.5, vec![1, 0])]],
    )?;
    println!("{}", p.to_json());
    let x = [0.5, 1.5];
    let jet = poly_jet(&p, &x, 3)?;
    for l in 1..=3 {
        println!("g_x^{l} = {:?}", jet.derivative(l)?.row(0));
    }

    let opaque = BlackBoxFn::new(2, 1, |v: &[f64]| vec![v[0] * v[0] * v[1] - 2.0 * v[1].powi(3) + 0.5 * v[0]]);
    let fd = finite_diff_jet_with(&opaque, &x, 3, FdSteps::default())?;
    for l in 1..=3 {
        println!("order {l}: finite differences within {:e}", jet.derivative(l)?.max_rel_diff(fd.derivative(l)?)?);
    }

    // Third differential along dx.
    let dx = [1.0, -1.0];
    let d3 = jet.derivative(3)?.mul_vec(&kron_power_vec(&dx, 3)?)?;
    println!("d^3 p[dx] = {d3:?}");
    Ok(())
}
