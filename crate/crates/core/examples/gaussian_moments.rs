//! Moments of a bivariate normal: the fourth-moment structure, a scalar
//! query, the chain-rule path and two independent cross-checks.

use bellkron::kron_ops::kron_power_vec;
use bellkron::normal_moments::{moment_via_faa, raw_moment_vector, scalar_moment, GaussianSpec};
use bellkron::verification::{isserlis_moment, monte_carlo_moment};

fn main() -> bellkron::Result<()> {
    let spec = GaussianSpec::from_rows(vec![0.0, 0.0], &[vec![2.0, 0.5], vec![0.5, 1.0]])?;

    let m4 = raw_moment_vector(&spec, 4)?;
    let three_vec_sq: Vec<f64> = kron_power_vec(spec.vec_cov(), 2)?.iter().map(|v| 3.0 * v).collect();
    println!("m4            = {:?}", m4.data());
    println!("3 vec(S)'^{{x2}} = {three_vec_sq:?}");

    // The raw vector is not symmetric; E[x1^2 x2^2] lives in the symmetrized one.
    let sym = m4.clone().symmetrize()?;
    println!("raw (1,1,2,2) = {}, symmetrized = {}", m4.at(&[0, 0, 1, 1])?, sym.at(&[0, 0, 1, 1])?);
    println!("E[x1^2 x2^2]  = {}", scalar_moment(&spec, &[2, 2])?);

    let via_faa = moment_via_faa(&spec, 4)?.symmetrize()?;
    let gap = via_faa.data().iter().zip(sym.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("chain-rule path differs by at most {gap:e}");

    let shifted = GaussianSpec::from_rows(vec![0.3, -1.0], &[vec![2.0, 0.5], vec![0.5, 1.0]])?;
    for exps in [[3, 0], [2, 1], [1, 3], [2, 2]] {
        println!(
            "mu = (0.3, -1): E[x^{exps:?}] = {:.10}  Isserlis {:.10}",
            scalar_moment(&shifted, &exps)?,
            isserlis_moment(&shifted, &exps)?
        );
    }

    let mc = monte_carlo_moment(&spec, &[2, 2], 200_000, 7)?;
    println!("Monte Carlo: {:.4} +- {:.4} ({:.2} standard errors off)", mc.estimate, mc.stderr, mc.z_score(2.5));
    Ok(())
}
