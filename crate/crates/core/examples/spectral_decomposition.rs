// Right eigenvalues in standard form and the spectral decomposition
// `Q = Φ Λ Φ†`.

use quatdmd::linalg::{spectral_decomposition, standard_eigen};
use quatdmd::{Error, Quaternion, QuaternionMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let q = QuaternionMatrix::new(
        3,
        3,
        vec![
            Quaternion::new(1.0, 0.5, 0.0, 0.2),
            Quaternion::J,
            Quaternion::real(0.3),
            Quaternion::new(0.0, 0.0, 1.0, 0.0),
            Quaternion::new(2.0, 0.0, 0.3, 0.0),
            Quaternion::K,
            Quaternion::real(0.1),
            Quaternion::new(0.0, 0.2, 0.0, 0.4),
            Quaternion::real(-1.0),
        ],
    )?;

    let eig = standard_eigen(&q)?;
    for (n, l) in eig.values.iter().enumerate() {
        println!("lambda_{n} = {l:.6}");
    }
    println!("max |Qv - v lambda| = {:.2e}", eig.max_residual(&q));

    let spec = spectral_decomposition(&q)?;
    let err = spec.reconstruct().max_abs_diff(&q);
    println!(
        "condition of Phi = {:.3}, |Phi L Phi+ - Q|_max = {err:.2e}",
        spec.condition
    );

    let jordan = QuaternionMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0])?;
    match spectral_decomposition(&jordan) {
        Err(e @ Error::NonDiagonalizable { .. }) => println!("Jordan block: {e}"),
        other => println!("Jordan block unexpectedly gave {other:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
