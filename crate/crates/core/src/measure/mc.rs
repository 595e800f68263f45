//! Rejection-sampling oracle for ball volumes.
//!
//! Sample `i` uses words `4i..4i+4` of a ChaCha8 stream seeded with the
//! user seed, so any chunking of the index range gives identical numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::MeasureContext;
use crate::geometry::Vec2;
use crate::metric::hilbert_distance;

const CHUNK: u64 = 1 << 14;

pub(crate) fn ball_volume_mc(ctx: &MeasureContext, r: f64, samples: u64, seed: u64, lod_tol: f64) -> (f64, f64) {
    let (lo, hi) = ctx.domain().bounding_box();
    let span = hi - lo;
    let box_area = span.x * span.y;
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(samples);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(4 * start as u128);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in start..end {
                let x = lo.x + span.x * rng.gen::<f64>();
                let y = lo.y + span.y * rng.gen::<f64>();
                let p = Vec2::new(x, y);
                if !ctx.domain().contains(p) {
                    continue;
                }
                match hilbert_distance(ctx.domain(), Vec2::zero(), p) {
                    Ok(d) if d < r => {
                        let v = ctx.density_fast(p, lod_tol);
                        s += v;
                        s2 += v * v;
                    }
                    _ => {}
                }
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = partial.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples as f64;
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    (box_area * mean, box_area * (var / n).sqrt())
}
