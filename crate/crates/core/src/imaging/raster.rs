use image::{Rgb, RgbImage};

use crate::model::BoundingBox;

/// Two-level raster; `true` is white / set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRaster {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl BinaryRaster {
    pub fn new(width: u32, height: u32) -> Self {
        BinaryRaster {
            width,
            height,
            data: vec![false; width as usize * height as usize],
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut r = BinaryRaster::new(width, height);
        for y in 0..height {
            for x in 0..width {
                r.data[(y * width + x) as usize] = f(x, y);
            }
        }
        r
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dimensions(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixel_count(&self) -> usize {
        self.data.len()
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.data[(y * self.width + x) as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        self.data[(y * self.width + x) as usize] = v;
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.data
    }

    /// Sets every pixel of `b` that lies inside the raster.
    pub fn fill_rect(&mut self, b: &BoundingBox) {
        let b = b.clamp_to(self.width, self.height);
        for y in b.y as u32..b.y as u32 + b.height {
            let row = (y * self.width) as usize;
            self.data[row + b.x as usize..row + b.x as usize + b.width as usize].fill(true);
        }
    }

    /// Nearest-neighbour resample to `width` x `height`.
    pub fn resized(&self, width: u32, height: u32) -> BinaryRaster {
        if (width, height) == self.dimensions() {
            return self.clone();
        }
        BinaryRaster::from_fn(width, height, |x, y| {
            let sx = (x as u64 * self.width as u64 / width as u64) as u32;
            let sy = (y as u64 * self.height as u64 / height as u64) as u32;
            self.get(sx, sy)
        })
    }

    /// Black/white RGB rendering.
    pub fn to_rgb(&self) -> RgbImage {
        RgbImage::from_fn(self.width, self.height, |x, y| {
            if self.get(x, y) {
                Rgb([255, 255, 255])
            } else {
                Rgb([0, 0, 0])
            }
        })
    }
}
