//! Deterministic rendering of layout specs into captures.
//!
//! Text uses the bundled 8x8 bitmap font at 2x scale, so output is identical
//! on every machine. Widget content (text, icon) is anchored at the top-left
//! of the widget plus a fixed padding and never scales with the widget, so
//! resizing or moving a widget leaves its content pixels unchanged.

use font8x8::UnicodeFonts;
use image::{Rgb, RgbImage};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundingBox, GuiHierarchy, ScreenCapture, TreeBuilder};

pub const FONT_SCALE: u32 = 2;
pub const GLYPH_SIZE: u32 = 8 * FONT_SCALE;
pub const CONTENT_PADDING: u32 = 2;

pub type Color = [u8; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IconShape {
    Square,
    Disc,
    Cross,
    Triangle,
    Ring,
    Bars,
}

impl IconShape {
    pub const ALL: [IconShape; 6] = [
        IconShape::Square,
        IconShape::Disc,
        IconShape::Cross,
        IconShape::Triangle,
        IconShape::Ring,
        IconShape::Bars,
    ];

    /// Whether pixel `(u, v)` of a `size x size` icon is inked.
    pub fn covers(self, u: u32, v: u32, size: u32) -> bool {
        let s = size as f64;
        let (cu, cv) = (u as f64 + 0.5 - s / 2.0, v as f64 + 0.5 - s / 2.0);
        let r2 = cu * cu + cv * cv;
        match self {
            IconShape::Square => true,
            IconShape::Disc => r2 <= (s / 2.0).powi(2),
            IconShape::Cross => cu.abs() < s / 6.0 || cv.abs() < s / 6.0,
            IconShape::Triangle => cu.abs() <= (v as f64 + 0.5) / 2.0,
            IconShape::Ring => r2 <= (s / 2.0).powi(2) && r2 >= (s / 4.0).powi(2),
            IconShape::Bars => (v * 4 / size).is_multiple_of(2),
        }
    }

    /// Number of pixels where two icons of the same size disagree.
    pub fn disagreement(self, other: IconShape, size: u32) -> u32 {
        let mut n = 0;
        for v in 0..size {
            for u in 0..size {
                n += (self.covers(u, v, size) != other.covers(u, v, size)) as u32;
            }
        }
        n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextSpec {
    pub content: String,
    pub color: Color,
    pub bold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IconSpec {
    pub shape: IconShape,
    pub color: Color,
    pub size: u32,
}

/// A leaf widget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidgetSpec {
    pub component_type: String,
    pub resource_id: String,
    pub bounds: BoundingBox,
    pub fill: Option<Color>,
    pub text: Option<TextSpec>,
    pub icon: Option<IconSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainerSpec {
    pub component_type: String,
    pub resource_id: String,
    pub bounds: BoundingBox,
    pub children: Vec<ElementSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ElementSpec {
    Container(ContainerSpec),
    Widget(WidgetSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutSpec {
    pub width: u32,
    pub height: u32,
    pub background: Color,
    pub activity: String,
    pub window_name: String,
    pub window_type: String,
    pub root: ContainerSpec,
}

impl LayoutSpec {
    pub fn widgets(&self) -> Vec<&WidgetSpec> {
        fn go<'a>(c: &'a ContainerSpec, out: &mut Vec<&'a WidgetSpec>) {
            for e in &c.children {
                match e {
                    ElementSpec::Container(k) => go(k, out),
                    ElementSpec::Widget(w) => out.push(w),
                }
            }
        }
        let mut out = Vec::new();
        go(&self.root, &mut out);
        out
    }

    pub fn containers(&self) -> Vec<&ContainerSpec> {
        fn go<'a>(c: &'a ContainerSpec, out: &mut Vec<&'a ContainerSpec>) {
            out.push(c);
            for e in &c.children {
                if let ElementSpec::Container(k) = e {
                    go(k, out);
                }
            }
        }
        let mut out = Vec::new();
        go(&self.root, &mut out);
        out
    }

    /// Nesting depth counting the root container and the leaf level.
    pub fn depth(&self) -> usize {
        fn go(c: &ContainerSpec) -> usize {
            1 + c
                .children
                .iter()
                .map(|e| match e {
                    ElementSpec::Container(k) => go(k),
                    ElementSpec::Widget(_) => 1,
                })
                .max()
                .unwrap_or(0)
        }
        go(&self.root)
    }
}

/// Size of a widget that holds `chars` characters of text.
pub fn text_box(chars: usize) -> (u32, u32) {
    (
        GLYPH_SIZE * chars as u32 + 2 * CONTENT_PADDING + 1,
        GLYPH_SIZE + 2 * CONTENT_PADDING,
    )
}

/// Size of a widget that holds an icon of `icon_size`.
pub fn icon_box(icon_size: u32) -> (u32, u32) {
    (icon_size + 2 * CONTENT_PADDING, icon_size + 2 * CONTENT_PADDING)
}

fn validate(spec: &LayoutSpec) -> Result<()> {
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::Layout("screen has zero size".into()));
    }
    let screen = BoundingBox::new(0, 0, spec.width, spec.height);
    let widgets = spec.widgets();
    for w in &widgets {
        if w.bounds.area() == 0 || w.bounds.clamp_to(spec.width, spec.height) != w.bounds {
            return Err(Error::Layout(format!(
                "widget {} at {} is empty or leaves the screen {}",
                w.resource_id, w.bounds, screen
            )));
        }
        if w.text.is_some() && w.icon.is_some() {
            return Err(Error::Layout(format!(
                "widget {} has both text and icon",
                w.resource_id
            )));
        }
    }
    for (i, a) in widgets.iter().enumerate() {
        for b in &widgets[i + 1..] {
            if a.bounds.intersection(&b.bounds).is_some() {
                return Err(Error::Layout(format!(
                    "widgets {} and {} overlap",
                    a.resource_id, b.resource_id
                )));
            }
        }
    }
    for c in spec.containers() {
        if c.children.is_empty() {
            return Err(Error::Layout(format!(
                "container {} has no children",
                c.resource_id
            )));
        }
    }
    Ok(())
}

fn fill_rect(img: &mut RgbImage, b: &BoundingBox, color: Color) {
    let b = b.clamp_to(img.width(), img.height());
    for y in b.y as u32..b.y as u32 + b.height {
        for x in b.x as u32..b.x as u32 + b.width {
            img.put_pixel(x, y, Rgb(color));
        }
    }
}

fn put_clipped(img: &mut RgbImage, clip: &BoundingBox, x: i64, y: i64, color: Color) {
    if clip.contains_point(x, y) && x >= 0 && y >= 0 && x < img.width() as i64 && y < img.height() as i64 {
        img.put_pixel(x as u32, y as u32, Rgb(color));
    }
}

/// Draws `text` with its top-left glyph corner at `(x, y)`, clipped to
/// `clip`. Characters missing from the font render as blanks.
pub fn draw_text(img: &mut RgbImage, clip: &BoundingBox, x: i64, y: i64, text: &TextSpec) {
    let strokes: &[i64] = if text.bold { &[0, 1] } else { &[0] };
    for (k, ch) in text.content.chars().enumerate() {
        let Some(rows) = font8x8::BASIC_FONTS.get(ch) else {
            continue;
        };
        let gx = x + (k as u32 * GLYPH_SIZE) as i64;
        for (row, bits) in rows.iter().enumerate() {
            for col in 0..8 {
                if bits & (1 << col) == 0 {
                    continue;
                }
                for sy in 0..FONT_SCALE as i64 {
                    for sx in 0..FONT_SCALE as i64 {
                        for &dx in strokes {
                            put_clipped(
                                img,
                                clip,
                                gx + col * FONT_SCALE as i64 + sx + dx,
                                y + row as i64 * FONT_SCALE as i64 + sy,
                                text.color,
                            );
                        }
                    }
                }
            }
        }
    }
}

fn draw_icon(img: &mut RgbImage, clip: &BoundingBox, x: i64, y: i64, icon: &IconSpec) {
    for v in 0..icon.size {
        for u in 0..icon.size {
            if icon.shape.covers(u, v, icon.size) {
                put_clipped(img, clip, x + u as i64, y + v as i64, icon.color);
            }
        }
    }
}

fn draw_widget(img: &mut RgbImage, w: &WidgetSpec) {
    if let Some(fill) = w.fill {
        fill_rect(img, &w.bounds, fill);
    }
    let x = w.bounds.x as i64 + CONTENT_PADDING as i64;
    let y = w.bounds.y as i64 + CONTENT_PADDING as i64;
    if let Some(t) = &w.text {
        draw_text(img, &w.bounds, x, y, t);
    }
    if let Some(i) = &w.icon {
        draw_icon(img, &w.bounds, x, y, i);
    }
}

fn to_tree(c: &ContainerSpec) -> TreeBuilder {
    let mut t = TreeBuilder::new(&c.component_type, c.bounds)
        .text("")
        .resource_id(&c.resource_id);
    for e in &c.children {
        t = t.child(match e {
            ElementSpec::Container(k) => to_tree(k),
            ElementSpec::Widget(w) => TreeBuilder::new(&w.component_type, w.bounds)
                .text(w.text.as_ref().map_or("", |t| t.content.as_str()))
                .resource_id(&w.resource_id),
        });
    }
    t
}

/// Renders a layout into a capture with index `capture_index` and source id
/// `NNN`. The raster and hierarchy depend only on the spec.
pub fn render_screen(spec: &LayoutSpec, capture_index: usize) -> Result<ScreenCapture> {
    validate(spec)?;
    let mut image = RgbImage::from_pixel(spec.width, spec.height, Rgb(spec.background));
    for w in spec.widgets() {
        draw_widget(&mut image, w);
    }
    Ok(ScreenCapture {
        image,
        hierarchy: GuiHierarchy::from_tree(to_tree(&spec.root)),
        activity: spec.activity.clone(),
        window_name: spec.window_name.clone(),
        window_type: spec.window_type.clone(),
        capture_index,
        source_id: format!("{capture_index:03}"),
    })
}
