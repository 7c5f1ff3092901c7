// The six background-quality metrics on a few image pairs.

use quatdmd::image::{Rgb, RgbImage};
use quatdmd::metrics::{evaluate, DEFAULT_TAU};
use quatdmd::synthetic::gradient_background;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let gt = gradient_background(64, 64);
    let brighter = RgbImage::from_fn(64, 64, |x, y| {
        let p = gt.get_pixel(x, y).0;
        Rgb([p[0] + 5, p[1] + 5, p[2] + 5])
    });
    let mut blotched = gt.clone();
    for y in 20..30 {
        for x in 20..30 {
            blotched.put_pixel(x, y, Rgb([255, 255, 255]));
        }
    }

    for (name, cb) in [
        ("identical", &gt),
        ("offset +5", &brighter),
        ("white blotch", &blotched),
    ] {
        let m = evaluate(&gt, cb, DEFAULT_TAU)?;
        println!(
            "{name:13} AGE {:6.3}  pEPs {:.4}  pCEPs {:.4}  MS-SSIM {:.4}  PSNR {:6.2}  CQM {:6.2}",
            m.age, m.peps, m.pceps, m.msssim, m.psnr, m.cqm
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
