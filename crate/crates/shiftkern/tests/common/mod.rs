//! Shared helpers for the integration suites: deterministic image synthesis
//! and brute-force oracles kept independent of the library's fast paths.
#![allow(dead_code)] // each test binary uses its own subset

use shiftkern::ImageBuffer;

pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

pub fn random_image(width: usize, height: usize, seed: u64) -> ImageBuffer {
    let mut rng = SplitMix64::new(seed);
    let data = (0..width * height)
        .map(|_| rng.uniform(0.0, 255.0))
        .collect();
    ImageBuffer::from_vec(width, height, data).expect("finite samples")
}

pub fn random_integer_image(width: usize, height: usize, seed: u64) -> ImageBuffer {
    let mut rng = SplitMix64::new(seed);
    let data = (0..width * height)
        .map(|_| (rng.next_u64() % 256) as f64)
        .collect();
    ImageBuffer::from_vec(width, height, data).expect("finite samples")
}

/// Brute-force clipped-window sum; the oracle for the recursive moving sum.
pub fn brute_force_window_sum(f: &ImageBuffer, radius: usize) -> ImageBuffer {
    let (w, h) = (f.width(), f.height());
    let r = radius as isize;
    let mut out = ImageBuffer::new(w, h);
    for row in 0..h as isize {
        for col in 0..w as isize {
            let mut sum = 0.0;
            for dy in -r..=r {
                for dx in -r..=r {
                    let (y, x) = (row + dy, col + dx);
                    if y >= 0 && y < h as isize && x >= 0 && x < w as isize {
                        sum += f.get(y as usize, x as usize);
                    }
                }
            }
            out.set(row as usize, col as usize, sum);
        }
    }
    out
}

pub fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    samples[samples.len() / 2]
}
