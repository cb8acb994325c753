use image::RgbImage;

use super::raster::BinaryRaster;

/// Integer Rec. 601 luma.
pub fn luminance(rgb: [u8; 3]) -> u8 {
    let [r, g, b] = rgb.map(u32::from);
    ((299 * r + 587 * g + 114 * b + 500) / 1000) as u8
}

/// Otsu threshold over a 256-bin luminance histogram. Pixels strictly above
/// the returned level belong to the bright class. Returns `None` when the
/// image has a single luminance level.
pub fn otsu_threshold(hist: &[u64; 256]) -> Option<u8> {
    let total: u64 = hist.iter().sum();
    if hist.iter().filter(|&&c| c > 0).count() < 2 {
        return None;
    }
    let sum_all: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, &c)| i as f64 * c as f64)
        .sum();
    let mut weight_bg = 0u64;
    let mut sum_bg = 0.0;
    let mut best = (f64::NEG_INFINITY, 0u8);
    for t in 0..255usize {
        weight_bg += hist[t];
        sum_bg += t as f64 * hist[t] as f64;
        let weight_fg = total - weight_bg;
        if weight_bg == 0 || weight_fg == 0 {
            continue;
        }
        let mean_bg = sum_bg / weight_bg as f64;
        let mean_fg = (sum_all - sum_bg) / weight_fg as f64;
        let between = weight_bg as f64 * weight_fg as f64 * (mean_bg - mean_fg).powi(2);
        // strict comparison keeps the lowest level among ties
        if between > best.0 {
            best = (between, t as u8);
        }
    }
    Some(best.1)
}

/// Luminance thresholded at Otsu's level. A single-level image maps to all
/// zeros.
pub fn binarize(img: &RgbImage) -> BinaryRaster {
    let mut hist = [0u64; 256];
    for p in img.pixels() {
        hist[luminance(p.0) as usize] += 1;
    }
    match otsu_threshold(&hist) {
        None => BinaryRaster::new(img.width(), img.height()),
        Some(t) => BinaryRaster::from_fn(img.width(), img.height(), |x, y| {
            luminance(img.get_pixel(x, y).0) > t
        }),
    }
}
