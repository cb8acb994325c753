use std::collections::BTreeMap;

use image::RgbImage;

use crate::error::{Error, Result};

/// Channel values are quantized to this many levels before counting.
pub const HISTOGRAM_LEVELS: u32 = 32;
const SHIFT: u32 = 8 - HISTOGRAM_LEVELS.trailing_zeros();

/// Census of quantized RGB values.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColorHistogram {
    pub bins: BTreeMap<[u8; 3], u64>,
    pub total: u64,
}

impl ColorHistogram {
    pub fn quantize(rgb: [u8; 3]) -> [u8; 3] {
        rgb.map(|c| c >> SHIFT)
    }
}

pub fn color_histogram(img: &RgbImage) -> ColorHistogram {
    let mut h = ColorHistogram::default();
    for p in img.pixels() {
        *h.bins.entry(ColorHistogram::quantize(p.0)).or_insert(0) += 1;
        h.total += 1;
    }
    h
}

/// `1 - ||p_a - p_b|| / sqrt(2)` over frequency-normalized bins: 1 for
/// identical distributions, 0 for disjoint ones.
pub fn histogram_similarity(a: &ColorHistogram, b: &ColorHistogram) -> Result<f64> {
    if a.total == 0 || b.total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let (ta, tb) = (a.total as f64, b.total as f64);
    let mut sum = 0.0;
    let mut ia = a.bins.iter().peekable();
    let mut ib = b.bins.iter().peekable();
    loop {
        let (pa, pb) = match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some((ka, &ca)), Some((kb, &cb))) => match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    ia.next();
                    (ca as f64 / ta, 0.0)
                }
                std::cmp::Ordering::Greater => {
                    ib.next();
                    (0.0, cb as f64 / tb)
                }
                std::cmp::Ordering::Equal => {
                    ia.next();
                    ib.next();
                    (ca as f64 / ta, cb as f64 / tb)
                }
            },
            (Some((_, &ca)), None) => {
                ia.next();
                (ca as f64 / ta, 0.0)
            }
            (None, Some((_, &cb))) => {
                ib.next();
                (0.0, cb as f64 / tb)
            }
        };
        sum += (pa - pb) * (pa - pb);
    }
    Ok((1.0 - sum.sqrt() / std::f64::consts::SQRT_2).clamp(0.0, 1.0))
}
