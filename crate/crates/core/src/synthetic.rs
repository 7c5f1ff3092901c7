//! Synthetic color sequences with a known background.

use image::{Rgb, RgbImage};

/// Smooth color gradient with a low-frequency ripple in blue.
pub fn gradient_background(width: u32, height: u32) -> RgbImage {
    RgbImage::from_fn(width, height, |x, y| {
        let u = x as f64 / width.max(1) as f64;
        let v = y as f64 / height.max(1) as f64;
        let r = 40.0 + 150.0 * u;
        let g = 60.0 + 120.0 * v;
        let b = 110.0 + 50.0 * (6.0 * u + 4.0 * v).sin();
        Rgb([r.round() as u8, g.round() as u8, b.round() as u8])
    })
}

/// `frames` copies of `background`.
pub fn static_sequence(background: &RgbImage, frames: usize) -> Vec<RgbImage> {
    vec![background.clone(); frames]
}

/// Constant-velocity motion of a solid square, in pixels per frame.
#[derive(Debug, Clone, Copy)]
pub struct SquareMotion {
    pub size: u32,
    pub color: Rgb<u8>,
    pub start: (i64, i64),
    pub velocity: (i64, i64),
}

impl SquareMotion {
    /// Starts at the top-left corner and moves one pixel right and one
    /// pixel down per frame.
    pub fn diagonal(size: u32, color: Rgb<u8>) -> Self {
        Self {
            size,
            color,
            start: (0, 0),
            velocity: (1, 1),
        }
    }

    pub fn corner(&self, frame: usize) -> (i64, i64) {
        let l = frame as i64;
        (
            self.start.0 + l * self.velocity.0,
            self.start.1 + l * self.velocity.1,
        )
    }
}

/// Paints the square over `background` at every frame; parts outside the
/// image are clipped.
pub fn moving_square(background: &RgbImage, frames: usize, motion: SquareMotion) -> Vec<RgbImage> {
    let (w, h) = (background.width() as i64, background.height() as i64);
    let size = motion.size as i64;
    (0..frames)
        .map(|l| {
            let (x0, y0) = motion.corner(l);
            let mut img = background.clone();
            for y in y0.max(0)..(y0 + size).min(h) {
                for x in x0.max(0)..(x0 + size).min(w) {
                    img.put_pixel(x as u32, y as u32, motion.color);
                }
            }
            img
        })
        .collect()
}
