//! Fixture builders shared by the integration tests: smooth synthetic
//! textures and sequences with known motion.

#![allow(dead_code)] // each test binary uses its own subset

use mebench::Frame;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth value-noise texture: bilinear interpolation of a coarse random
/// lattice. Unlike white noise it gives block matching a well-behaved
/// error surface, closer to camera footage.
pub fn smooth_texture(seed: u64, width: u32, height: u32) -> Frame {
    let cell = 8u32;
    let gw = width / cell + 2;
    let gh = height / cell + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid: Vec<f64> = (0..gw * gh).map(|_| rng.gen_range(0.0..255.0)).collect();
    Frame::from_fn(width, height, |x, y| {
        let gx = x / cell;
        let gy = y / cell;
        let fx = (x % cell) as f64 / cell as f64;
        let fy = (y % cell) as f64 / cell as f64;
        let at = |i: u32, j: u32| grid[(j * gw + i) as usize];
        let top = at(gx, gy) * (1.0 - fx) + at(gx + 1, gy) * fx;
        let bottom = at(gx, gy + 1) * (1.0 - fx) + at(gx + 1, gy + 1) * fx;
        (top * (1.0 - fy) + bottom * fy).round() as u8
    })
}

/// Crops a `width` x `height` view out of `tex` at the given corner.
pub fn crop(tex: &Frame, left: u32, top: u32, width: u32, height: u32) -> Frame {
    assert!(left + width <= tex.width() && top + height <= tex.height());
    Frame::from_fn(width, height, |x, y| tex.sample(left + x, top + y))
}

/// Sequence of crops out of one texture whose content translates by the
/// given per-frame deltas. The first frame sits at `margin`; deltas are
/// what the crop origin does from one frame to the next, so the matcher's
/// vector for frame t against frame t-1 is `deltas[t-1]` wherever the
/// true displacement is reachable.
pub fn translation_sequence(
    seed: u64,
    width: u32,
    height: u32,
    margin: u32,
    deltas: &[(i32, i32)],
) -> Vec<Frame> {
    let tex = smooth_texture(seed, width + 2 * margin, height + 2 * margin);
    let mut frames = Vec::with_capacity(deltas.len() + 1);
    let (mut x, mut y) = (margin as i32, margin as i32);
    frames.push(crop(&tex, x as u32, y as u32, width, height));
    for &(dx, dy) in deltas {
        x += dx;
        y += dy;
        assert!(x >= 0 && y >= 0, "deltas walked off the texture");
        frames.push(crop(&tex, x as u32, y as u32, width, height));
    }
    frames
}

/// Static background with a square foreground object that translates
/// rigidly by the given per-frame deltas: the low-motion regime of real
/// footage, where most blocks are still and a few carry pure translation.
/// The object's content rides with it, so blocks fully inside it match
/// exactly at the delta displacement, while blocks straddling its edge
/// (covered/uncovered background) have no perfect match anywhere.
pub fn moving_object_sequence(
    seed: u64,
    width: u32,
    height: u32,
    object_edge: u32,
    start: (i32, i32),
    deltas: &[(i32, i32)],
) -> Vec<Frame> {
    let background = smooth_texture(seed, width, height);
    let foreground = smooth_texture(seed ^ 0x5eed, object_edge, object_edge);
    let mut frames = Vec::with_capacity(deltas.len() + 1);
    let (mut px, mut py) = start;
    let mut stamp = |px: i32, py: i32| {
        assert!(
            px >= 0 && py >= 0 && px + object_edge as i32 <= width as i32
                && py + object_edge as i32 <= height as i32,
            "object walked out of frame"
        );
        frames.push(Frame::from_fn(width, height, |x, y| {
            let fx = x as i32 - px;
            let fy = y as i32 - py;
            if (0..object_edge as i32).contains(&fx) && (0..object_edge as i32).contains(&fy) {
                foreground.sample(fx as u32, fy as u32)
            } else {
                background.sample(x, y)
            }
        }));
    };
    stamp(px, py);
    for &(dx, dy) in deltas {
        px += dx;
        py += dy;
        stamp(px, py);
    }
    frames
}

/// Sequence mixing a global sinusoidal pan with a locally moving bright
/// patch, a rough stand-in for camera motion plus a foreground object.
pub fn mixed_motion_sequence(seed: u64, width: u32, height: u32, count: usize) -> Vec<Frame> {
    let margin = 24u32;
    let tex = smooth_texture(seed, width + 2 * margin, height + 2 * margin);
    (0..count)
        .map(|t| {
            let phase = t as f64 * 0.45;
            let pan_x = (margin as f64 + 10.0 * phase.sin()).round() as u32;
            let pan_y = (margin as f64 + 7.0 * (phase * 0.8).cos()).round() as u32;
            let background = crop(&tex, pan_x, pan_y, width, height);
            // A 24-pixel patch drifting diagonally, brighter than the scene.
            let px = (8 + t * 3) as u32 % (width - 24);
            let py = (12 + t * 2) as u32 % (height - 24);
            Frame::from_fn(width, height, |x, y| {
                let s = background.sample(x, y);
                if x >= px && x < px + 24 && y >= py && y < py + 24 {
                    s.saturating_add(60)
                } else {
                    s
                }
            })
        })
        .collect()
}
