// QSVD of a random quaternion matrix through its complex adjoint, plus the
// pseudoinverse.

use quatdmd::linalg::{complex_adjoint, pseudoinverse, qsvd};
use quatdmd::{Quaternion, QuaternionMatrix};

fn lcg(state: &mut u64) -> f64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    ((*state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut s = 7u64;
    let q = QuaternionMatrix::from_fn(6, 4, |_, _| {
        Quaternion::new(lcg(&mut s), lcg(&mut s), lcg(&mut s), lcg(&mut s))
    });

    let chi = complex_adjoint(&q);
    println!("adjoint is {}x{}", chi.rows(), chi.cols());

    let svd = qsvd(&q)?;
    println!("sigma = {:?}", svd.sigma);
    println!("adjoint singular values (paired) = {:?}", svd.adjoint_sigma);
    let residual = svd.reconstruct().sub(&q)?.frobenius_norm() / q.frobenius_norm();
    println!("relative reconstruction residual = {residual:.2e}");

    let pinv = pseudoinverse(&q)?;
    let left = pinv.matmul(&q)?;
    println!(
        "|pinv(Q) Q - I|_max = {:.2e}",
        left.max_abs_diff(&QuaternionMatrix::identity(4))
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
