// Hamilton products, conjugates, inverses, exp and log on single quaternions.

use quatdmd::Quaternion;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    println!("i*j = {}   j*i = {}", i * j, j * i);
    println!("i*j*k = {}", i * j * k);

    let q = Quaternion::new(1.0, 2.0, 3.0, 4.0);
    println!("q = {q}, conj = {}, |q| = {:.6}", q.conj(), q.norm());
    let inv = q.inverse()?;
    println!("q * q^-1 = {:.12}", q * inv);

    let p = Quaternion::pure(0.3, -0.2, 0.9);
    let e = p.exp();
    println!("exp({p}) = {e:.6}, back through ln: {:.12}", e.ln()?);

    // the exponential does not turn sums into products here
    let a = Quaternion::pure(1.0, 0.0, 0.0);
    let b = Quaternion::pure(0.0, 1.0, 0.0);
    let gap = (a.exp() * b.exp()).max_abs_diff((a + b).exp());
    println!("|exp(i)exp(j) - exp(i+j)|_max = {gap:.4}");

    match Quaternion::real(-2.0).ln() {
        Err(e) => println!("ln(-2): {e}"),
        Ok(v) => println!("ln(-2) = {v}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
