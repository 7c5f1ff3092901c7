// Frame folder to background PNG and JSON report, the same path the
// `extract` subcommand takes.

use quatdmd::cli::{cmd_extract, Method, RunConfig};
use quatdmd::image::Rgb;
use quatdmd::synthetic::{gradient_background, moving_square, SquareMotion};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let input = dir.path().join("frames");
    std::fs::create_dir(&input)?;
    let truth = gradient_background(64, 64);
    for (l, frame) in moving_square(&truth, 40, SquareMotion::diagonal(8, Rgb([20, 20, 230])))
        .iter()
        .enumerate()
    {
        frame.save(input.join(format!("in{:06}.png", l + 1)))?;
    }
    truth.save(dir.path().join("gt.png"))?;

    let config = RunConfig {
        input: input.display().to_string(),
        frames: Some("2..33".into()),
        stride: 1,
        downsample: 2,
        trim_tol: None,
        rank: None,
        method: Method::Qdmd,
        dt: 1.0,
        out: Some(dir.path().join("out")),
        gt: Some(dir.path().join("gt.png")),
        tau: 20.0,
        dump_foreground: false,
        dump_spectrum: true,
        stable_output: true,
    };
    let report = cmd_extract(&config)?;
    println!(
        "frames {}..={} ({} used) at {}x{}",
        report.frames.first_index,
        report.frames.last_index,
        report.frames.count,
        report.frames.width,
        report.frames.height
    );
    println!("outputs: {:?}", report.outputs);
    if let Some(m) = &report.metrics {
        println!("AGE {:.3}  pEPs {:.4}  CQM {:.2}", m.age, m.peps, m.cqm);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
