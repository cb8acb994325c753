use image::{Rgb, RgbImage};

use crate::detect::{ChangeType, GuiChange};
use crate::model::{BoundingBox, ScreenPair};

pub const HIGHLIGHT: Rgb<u8> = Rgb([255, 0, 0]);
pub const BORDER_WIDTH: u32 = 3;
/// Dash length and gap of the outline drawn for added components.
pub const DASH: u32 = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedScreens {
    pub old: RgbImage,
    /// Old screenshot with every change outlined.
    pub highlight: RgbImage,
    pub new: RgbImage,
}

/// Pixels of the `BORDER_WIDTH`-wide inward border of `b`, clipped to a
/// `w x h` image. With `dashed`, pixels alternate in runs of [`DASH`]
/// along each edge.
pub fn border_pixels(b: &BoundingBox, w: u32, h: u32, dashed: bool) -> Vec<(u32, u32)> {
    let b = b.clamp_to(w, h);
    let mut out = Vec::new();
    if b.area() == 0 {
        return out;
    }
    let (x0, y0) = (b.x as u32, b.y as u32);
    let (x1, y1) = (x0 + b.width, y0 + b.height);
    for y in y0..y1 {
        for x in x0..x1 {
            let (dl, dr) = (x - x0, x1 - 1 - x);
            let (dt, db) = (y - y0, y1 - 1 - y);
            let on_vertical = dl < BORDER_WIDTH || dr < BORDER_WIDTH;
            let on_horizontal = dt < BORDER_WIDTH || db < BORDER_WIDTH;
            if !(on_vertical || on_horizontal) {
                continue;
            }
            if dashed {
                let along_h = on_horizontal && ((x - x0) / DASH).is_multiple_of(2);
                let along_v = on_vertical && ((y - y0) / DASH).is_multiple_of(2);
                if !(along_h || along_v) {
                    continue;
                }
            }
            out.push((x, y));
        }
    }
    out
}

/// Left and right are the screenshots unchanged; the middle is the old
/// screenshot with a red border per change: solid at the old bounds,
/// dashed at the new bounds for additions.
pub fn annotate_screens(pair: &ScreenPair, changes: &[GuiChange]) -> AnnotatedScreens {
    let mut highlight = pair.old.image.clone();
    let (w, h) = highlight.dimensions();
    for c in changes {
        let (bounds, dashed) = match c.specific {
            ChangeType::Added => (c.new_bounds(), true),
            _ => (c.old_bounds(), false),
        };
        if let Some(b) = bounds {
            for (x, y) in border_pixels(&b, w, h, dashed) {
                highlight.put_pixel(x, y, HIGHLIGHT);
            }
        }
    }
    AnnotatedScreens {
        old: pair.old.image.clone(),
        highlight,
        new: pair.new.image.clone(),
    }
}
