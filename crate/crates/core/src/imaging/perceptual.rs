use image::RgbImage;
use serde::{Deserialize, Serialize};

use super::raster::BinaryRaster;
use super::{check_nonempty, match_dims};
use crate::error::Result;
use crate::model::BoundingBox;

/// Channel weights of the luminance-weighted distance; they sum to 1 so the
/// distance stays within [0, 1].
const WEIGHTS: [f32; 3] = [0.299, 0.587, 0.114];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerceptualConfig {
    /// A pixel is flagged when its normalized distance exceeds this.
    pub sensitivity: f64,
    /// Radius of the binomial pre-blur; 0 disables it.
    pub blur_radius: u32,
}

impl Default for PerceptualConfig {
    fn default() -> Self {
        PerceptualConfig {
            sensitivity: 0.05,
            blur_radius: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffResult {
    pub mask: BinaryRaster,
    pub diff_percent: f64,
    /// Bounding boxes of the 8-connected components of `mask`, in raster
    /// order of their first pixel.
    pub diff_regions: Vec<BoundingBox>,
}

impl DiffResult {
    pub fn is_identical(&self) -> bool {
        self.diff_regions.is_empty()
    }
}

/// Flags pixels whose luminance-weighted RGB distance exceeds the
/// sensitivity both at full resolution and after the pre-blur. The blurred
/// check suppresses isolated single-pixel noise, the full-resolution check
/// keeps the mask from bleeding past the changed area.
pub fn perceptual_diff(a: &RgbImage, b: &RgbImage, config: &PerceptualConfig) -> Result<DiffResult> {
    check_nonempty(a)?;
    check_nonempty(b)?;
    let b = match_dims(a, b);
    let (w, h) = a.dimensions();
    let pa = planes(a);
    let pb = planes(&b);
    let raw = distance_map(&pa, &pb);
    let threshold = config.sensitivity as f32;
    let mask = if config.blur_radius == 0 {
        BinaryRaster::from_fn(w, h, |x, y| raw[(y * w + x) as usize] > threshold)
    } else {
        let ba = blur(&pa, w, h, config.blur_radius);
        let bb = blur(&pb, w, h, config.blur_radius);
        let blurred = distance_map(&ba, &bb);
        BinaryRaster::from_fn(w, h, |x, y| {
            let i = (y * w + x) as usize;
            raw[i] > threshold && blurred[i] > threshold
        })
    };
    let diff_percent = 100.0 * mask.count_ones() as f64 / mask.pixel_count() as f64;
    let diff_regions = connected_regions(&mask);
    Ok(DiffResult {
        mask,
        diff_percent,
        diff_regions,
    })
}

type Planes = [Vec<f32>; 3];

fn planes(img: &RgbImage) -> Planes {
    let n = img.width() as usize * img.height() as usize;
    let mut out: Planes = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for (i, p) in img.pixels().enumerate() {
        for c in 0..3 {
            out[c][i] = p.0[c] as f32 / 255.0;
        }
    }
    out
}

fn distance_map(a: &Planes, b: &Planes) -> Vec<f32> {
    (0..a[0].len())
        .map(|i| {
            (0..3)
                .map(|c| WEIGHTS[c] * (a[c][i] - b[c][i]).powi(2))
                .sum::<f32>()
                .sqrt()
        })
        .collect()
}

/// Binomial kernel of width `2r + 1`, a discrete Gaussian approximation.
fn binomial_kernel(radius: u32) -> Vec<f32> {
    let n = 2 * radius as usize;
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    let total: f64 = row.iter().sum();
    row.iter().map(|v| (v / total) as f32).collect()
}

fn blur(p: &Planes, w: u32, h: u32, radius: u32) -> Planes {
    let k = binomial_kernel(radius);
    let r = radius as i64;
    let (w, h) = (w as i64, h as i64);
    p.clone().map(|plane| {
        let mut tmp = vec![0.0f32; plane.len()];
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for (j, kv) in k.iter().enumerate() {
                    let sx = (x + j as i64 - r).clamp(0, w - 1);
                    acc += kv * plane[(y * w + sx) as usize];
                }
                tmp[(y * w + x) as usize] = acc;
            }
        }
        let mut out = vec![0.0f32; plane.len()];
        for y in 0..h {
            for x in 0..w {
                let mut acc = 0.0;
                for (j, kv) in k.iter().enumerate() {
                    let sy = (y + j as i64 - r).clamp(0, h - 1);
                    acc += kv * tmp[(sy * w + x) as usize];
                }
                out[(y * w + x) as usize] = acc;
            }
        }
        out
    })
}

/// Bounding boxes of 8-connected foreground components.
pub fn connected_regions(mask: &BinaryRaster) -> Vec<BoundingBox> {
    let (w, h) = mask.dimensions();
    let mut seen = vec![false; mask.pixel_count()];
    let mut regions = Vec::new();
    let mut stack = Vec::new();
    for (start, &on) in mask.as_slice().iter().enumerate() {
        if !on || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let (mut x0, mut y0, mut x1, mut y1) = (u32::MAX, u32::MAX, 0, 0);
        while let Some(i) = stack.pop() {
            let (x, y) = ((i as u32) % w, (i as u32) / w);
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let j = (ny as u32 * w + nx as u32) as usize;
                    if mask.as_slice()[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        regions.push(BoundingBox::new(
            x0 as i32,
            y0 as i32,
            x1 - x0 + 1,
            y1 - y0 + 1,
        ));
    }
    regions
}
