// Exact real DMD on a damped rotation.

use quatdmd::dmd::{dmd_reconstruct, exact_dmd, snapshot_pairs};
use quatdmd::faer::Mat;
use quatdmd::Rank;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (c, s) = (0.1f64.cos(), 0.1f64.sin());
    let m = 10;
    let mut data = Mat::<f64>::zeros(3, m);
    let mut x = [1.0, 0.0, 2.0];
    for l in 0..m {
        for (i, v) in x.iter().enumerate() {
            data[(i, l)] = *v;
        }
        x = [
            0.95 * (c * x[0] - s * x[1]),
            0.95 * (s * x[0] + c * x[1]),
            0.5 * x[2],
        ];
    }

    let (xs, ys) = snapshot_pairs(data.as_ref())?;
    let model = exact_dmd(xs.as_ref(), ys.as_ref(), Rank::Auto, 1.0)?;
    for (l, w) in model.eigenvalues.iter().zip(&model.omegas) {
        println!("lambda = {l:.6}   omega = {w:.6}");
    }
    let times: Vec<f64> = (0..m).map(|l| l as f64).collect();
    let rec = dmd_reconstruct(&model, &times);
    let err = (&rec - &data).norm_l2() / data.norm_l2();
    println!("relative reconstruction error = {err:.2e}");
    println!(
        "background mode (min |omega|) = {}",
        model.background_index()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
