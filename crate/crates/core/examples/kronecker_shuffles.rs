//! Commutation and shuffle operators, and the symmetrizer.

use bellkron::kron_ops::{
    apply_perm_left, apply_perm_right, commutation_matrix, kron, kron_chain, kron_power_vec, kron_shuffle_pair,
    shuffle_operator, Symmetrizer,
};
use bellkron::DenseMatrix;

fn main() -> bellkron::Result<()> {
    let x = [1.0, 2.0];
    let y = [3.0, 4.0, 5.0];
    let xy = kron(&DenseMatrix::col_vector(&x)?, &DenseMatrix::col_vector(&y)?)?.into_data();
    let k = commutation_matrix(3, 2)?;
    println!("K (x (x) y) = {:?}", k.apply_to_vec(&xy)?);

    // Move the last of three factors to the front.
    let a = DenseMatrix::from_rows(&[vec![1.0, 2.0]])?;
    let b = DenseMatrix::from_rows(&[vec![3.0], vec![4.0]])?;
    let c = DenseMatrix::from_rows(&[vec![5.0, 6.0], vec![7.0, 8.0]])?;
    let sigma = [1, 2, 0];
    let (left, right) = kron_shuffle_pair(&sigma, &[1, 2, 2], &[2, 1, 2])?;
    let shuffled = apply_perm_right(&apply_perm_left(&left, &kron_chain([&a, &b, &c])?)?, &right)?;
    println!("reordered chain equals C (x) A (x) B: {}", shuffled == kron_chain([&c, &a, &b])?);
    println!("shuffle of three 2-vectors: {:?}", shuffle_operator(&sigma, &[2, 2, 2])?.map());

    let s22 = Symmetrizer::new(2, 2)?;
    println!("S_22 =");
    for row in s22.to_dense()?.to_rows() {
        println!("  {row:?}");
    }
    let s = Symmetrizer::new(2, 3)?;
    println!("x^(x)3 is a fixed point of S: {}", s.is_fixed_point(&kron_power_vec(&x, 3)?, 1e-15)?);
    println!("symmetrized columns of A (x) B': {:?}", s22.symmetrize_matrix(&kron(&a, &b.transpose())?)?.to_rows());
    Ok(())
}
