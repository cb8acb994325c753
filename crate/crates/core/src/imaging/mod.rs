//! Pixel-level primitives: color distance, bounding-box silhouettes,
//! perceptual differencing, color histograms and binarization.
//!
//! Whenever two rasters of different sizes are compared, the second is
//! resampled (nearest neighbour) to the dimensions of the first.

mod binarize;
mod histogram;
mod perceptual;
mod raster;

use std::borrow::Cow;

use image::imageops::{self, FilterType};
use image::RgbImage;

pub use binarize::{binarize, luminance, otsu_threshold};
pub use histogram::{color_histogram, histogram_similarity, ColorHistogram, HISTOGRAM_LEVELS};
pub use perceptual::{connected_regions, perceptual_diff, DiffResult, PerceptualConfig};
pub use raster::BinaryRaster;

use crate::error::{Error, Result};
use crate::model::{BoundingBox, ScreenCapture};

/// Leaves at least this large are left off silhouettes.
pub const DEFAULT_AREA_CAP: u64 = 100_000;

const MAX_RGB_DISTANCE: f64 = 441.672_955_930_063_7; // sqrt(3) * 255

pub(crate) fn check_nonempty(img: &RgbImage) -> Result<()> {
    if img.width() == 0 || img.height() == 0 {
        Err(Error::EmptyImage)
    } else {
        Ok(())
    }
}

/// `b` resampled to the dimensions of `a`, borrowed when they already agree.
pub(crate) fn match_dims<'a>(a: &RgbImage, b: &'a RgbImage) -> Cow<'a, RgbImage> {
    if a.dimensions() == b.dimensions() {
        Cow::Borrowed(b)
    } else {
        Cow::Owned(imageops::resize(b, a.width(), a.height(), FilterType::Nearest))
    }
}

/// Mean per-pixel Euclidean RGB distance, normalized by `sqrt(3) * 255`.
pub fn color_distance(a: &RgbImage, b: &RgbImage) -> Result<f64> {
    check_nonempty(a)?;
    check_nonempty(b)?;
    let b = match_dims(a, b);
    let sum: f64 = a
        .pixels()
        .zip(b.pixels())
        .map(|(p, q)| {
            let d: i32 = (0..3)
                .map(|c| {
                    let v = p.0[c] as i32 - q.0[c] as i32;
                    v * v
                })
                .sum();
            (d as f64).sqrt()
        })
        .sum();
    let n = a.width() as f64 * a.height() as f64;
    Ok(sum / n / MAX_RGB_DISTANCE)
}

/// Black raster of the screen with a white filled rectangle per matchable
/// leaf whose area is below `area_cap`.
pub fn bbox_silhouette(capture: &ScreenCapture, area_cap: u64) -> BinaryRaster {
    let (w, h) = capture.dims();
    let mut sil = BinaryRaster::new(w, h);
    for leaf in capture.hierarchy.leaves() {
        if !leaf.excluded_from_matching() && leaf.bounds.area() < area_cap {
            sil.fill_rect(&leaf.bounds);
        }
    }
    sil
}

/// Fraction of pixels at which two silhouettes disagree.
pub fn bbox_diff(a: &BinaryRaster, b: &BinaryRaster) -> Result<f64> {
    if a.pixel_count() == 0 || b.pixel_count() == 0 {
        return Err(Error::EmptyImage);
    }
    let resized;
    let b = if a.dimensions() == b.dimensions() {
        b
    } else {
        resized = b.resized(a.width(), a.height());
        &resized
    };
    let differing = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .filter(|(p, q)| p != q)
        .count();
    Ok(differing as f64 / a.pixel_count() as f64)
}

/// Sub-image covering `bounds` (clipped to the image).
pub fn crop(img: &RgbImage, bounds: &BoundingBox) -> Result<RgbImage> {
    let b = bounds.clamp_to(img.width(), img.height());
    if b.area() == 0 {
        return Err(Error::ZeroAreaCrop);
    }
    Ok(imageops::crop_imm(img, b.x as u32, b.y as u32, b.width, b.height).to_image())
}
