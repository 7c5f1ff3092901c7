#![allow(dead_code)]

use std::path::Path;

use quatdmd::image::{Rgb, RgbImage};
use quatdmd::{Quaternion, QuaternionMatrix};
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_quaternion(rng: &mut StdRng) -> Quaternion {
    Quaternion::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> QuaternionMatrix {
    QuaternionMatrix::from_fn(rows, cols, |_, _| random_quaternion(rng))
}

pub fn random_image(rng: &mut StdRng, w: u32, h: u32) -> RgbImage {
    RgbImage::from_fn(w, h, |_, _| Rgb([rng.random(), rng.random(), rng.random()]))
}

/// `‖AᴴA − I‖_max` by explicit quaternion sums.
pub fn unitarity_defect(a: &QuaternionMatrix) -> f64 {
    let (m, n) = a.shape();
    let mut worst: f64 = 0.0;
    for p in 0..n {
        for q in 0..n {
            let mut s = Quaternion::ZERO;
            for i in 0..m {
                s += a[(i, p)].conj() * a[(i, q)];
            }
            let target = if p == q {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            };
            worst = worst.max(s.max_abs_diff(target));
        }
    }
    worst
}

pub fn write_frames(dir: &Path, frames: &[RgbImage]) {
    std::fs::create_dir_all(dir).unwrap();
    for (l, f) in frames.iter().enumerate() {
        f.save(dir.join(format!("in{:06}.png", l + 1))).unwrap();
    }
}

/// Straightforward per-pixel reimplementations of the six metrics.
pub mod oracle {
    use quatdmd::image::RgbImage;

    fn gray(img: &RgbImage) -> Vec<Vec<f64>> {
        let (w, h) = img.dimensions();
        (0..h)
            .map(|y| {
                (0..w)
                    .map(|x| {
                        let p = img.get_pixel(x, y).0;
                        0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64
                    })
                    .collect()
            })
            .collect()
    }

    fn errors(gt: &RgbImage, cb: &RgbImage, tau: f64) -> Vec<Vec<bool>> {
        let (a, b) = (gray(gt), gray(cb));
        a.iter()
            .zip(&b)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(x, y)| (x - y).abs() > tau)
                    .collect()
            })
            .collect()
    }

    pub fn age(gt: &RgbImage, cb: &RgbImage) -> f64 {
        let (a, b) = (gray(gt), gray(cb));
        let mut sum = 0.0;
        let mut n = 0.0;
        for y in 0..a.len() {
            for x in 0..a[0].len() {
                sum += (a[y][x] - b[y][x]).abs();
                n += 1.0;
            }
        }
        sum / n
    }

    pub fn peps(gt: &RgbImage, cb: &RgbImage, tau: f64) -> f64 {
        let e = errors(gt, cb, tau);
        let total = (e.len() * e[0].len()) as f64;
        e.iter().flatten().filter(|&&v| v).count() as f64 / total
    }

    pub fn pceps(gt: &RgbImage, cb: &RgbImage, tau: f64) -> f64 {
        let e = errors(gt, cb, tau);
        let (h, w) = (e.len() as i64, e[0].len() as i64);
        let mut count = 0;
        for y in 0..h {
            for x in 0..w {
                if !e[y as usize][x as usize] {
                    continue;
                }
                let neighbors = [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)];
                let all = neighbors
                    .iter()
                    .filter(|(u, v)| *u >= 0 && *v >= 0 && *u < w && *v < h)
                    .all(|&(u, v)| e[v as usize][u as usize]);
                if all {
                    count += 1;
                }
            }
        }
        count as f64 / (w * h) as f64
    }

    fn psnr_of(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
        let mut se = 0.0;
        let mut n = 0.0;
        for (ra, rb) in a.iter().zip(b) {
            for (x, y) in ra.iter().zip(rb) {
                se += (x - y) * (x - y);
                n += 1.0;
            }
        }
        let mse = se / n;
        if mse == 0.0 {
            100.0
        } else {
            f64::min(100.0, 10.0 * (255.0 * 255.0 / mse).log10())
        }
    }

    pub fn psnr(gt: &RgbImage, cb: &RgbImage) -> f64 {
        psnr_of(&gray(gt), &gray(cb))
    }

    fn yuv(img: &RgbImage) -> [Vec<Vec<f64>>; 3] {
        let (w, h) = img.dimensions();
        let band = |c: [f64; 3]| -> Vec<Vec<f64>> {
            (0..h)
                .map(|y| {
                    (0..w)
                        .map(|x| {
                            let p = img.get_pixel(x, y).0;
                            c[0] * p[0] as f64 + c[1] * p[1] as f64 + c[2] * p[2] as f64
                        })
                        .collect()
                })
                .collect()
        };
        [
            band([0.299, 0.587, 0.114]),
            band([-0.14713, -0.28886, 0.436]),
            band([0.615, -0.51499, -0.10001]),
        ]
    }

    pub fn cqm(gt: &RgbImage, cb: &RgbImage) -> f64 {
        let (a, b) = (yuv(gt), yuv(cb));
        let y = psnr_of(&a[0], &b[0]);
        let u = psnr_of(&a[1], &b[1]);
        let v = psnr_of(&a[2], &b[2]);
        0.9449 * y + 0.0551 * (u + v) / 2.0
    }

    /// Full 2-D window weights, normalized over all 121 taps.
    fn window() -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; 11]; 11];
        let mut s = 0.0;
        for (dy, row) in w.iter_mut().enumerate() {
            for (dx, v) in row.iter_mut().enumerate() {
                let (a, b) = (dx as f64 - 5.0, dy as f64 - 5.0);
                *v = (-(a * a + b * b) / (2.0 * 1.5 * 1.5)).exp();
                s += *v;
            }
        }
        w.iter_mut().flatten().for_each(|v| *v /= s);
        w
    }

    /// Mean SSIM and mean contrast-structure over all valid window positions.
    fn ssim_cs(a: &[Vec<f64>], b: &[Vec<f64>]) -> (f64, f64) {
        let win = window();
        let (c1, c2) = ((0.01f64 * 255.0).powi(2), (0.03f64 * 255.0).powi(2));
        let (h, w) = (a.len(), a[0].len());
        let (mut ssim, mut cs, mut n) = (0.0, 0.0, 0.0);
        for y0 in 0..=h - 11 {
            for x0 in 0..=w - 11 {
                let (mut ma, mut mb) = (0.0, 0.0);
                for dy in 0..11 {
                    for dx in 0..11 {
                        ma += win[dy][dx] * a[y0 + dy][x0 + dx];
                        mb += win[dy][dx] * b[y0 + dy][x0 + dx];
                    }
                }
                let (mut va, mut vb, mut cov) = (0.0, 0.0, 0.0);
                for dy in 0..11 {
                    for dx in 0..11 {
                        let (p, q) = (a[y0 + dy][x0 + dx] - ma, b[y0 + dy][x0 + dx] - mb);
                        va += win[dy][dx] * p * p;
                        vb += win[dy][dx] * q * q;
                        cov += win[dy][dx] * p * q;
                    }
                }
                let l = (2.0 * ma * mb + c1) / (ma * ma + mb * mb + c1);
                let c = (2.0 * cov + c2) / (va + vb + c2);
                ssim += l * c;
                cs += c;
                n += 1.0;
            }
        }
        (ssim / n, cs / n)
    }

    fn halve(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
        (0..a.len() / 2)
            .map(|y| {
                (0..a[0].len() / 2)
                    .map(|x| {
                        (a[2 * y][2 * x]
                            + a[2 * y][2 * x + 1]
                            + a[2 * y + 1][2 * x]
                            + a[2 * y + 1][2 * x + 1])
                            / 4.0
                    })
                    .collect()
            })
            .collect()
    }

    pub fn msssim(gt: &RgbImage, cb: &RgbImage) -> f64 {
        let weights = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];
        let (mut a, mut b) = (gray(gt), gray(cb));
        let mut levels = Vec::new();
        while levels.len() < 5 && a.len() >= 11 && a[0].len() >= 11 {
            levels.push(ssim_cs(&a, &b));
            a = halve(&a);
            b = halve(&b);
        }
        let total: f64 = weights[..levels.len()].iter().sum();
        let last = levels.len() - 1;
        levels
            .iter()
            .enumerate()
            .map(|(s, &(ssim, cs))| {
                let term = if s == last { ssim } else { cs };
                term.max(0.0).powf(weights[s] / total)
            })
            .product()
    }
}
