//! Change detection and classification for one matched screen pair.
//!
//! Layout changes come from hierarchy metadata alone and are checked for
//! every matched component pair. Font and image changes need pixel
//! evidence: a full-screen perceptual diff nominates the component pairs
//! that overlap a changed region, and only those are cropped and analyzed.

use std::fmt;

use image::RgbImage;
use serde::{Deserialize, Serialize};

use crate::component_match::{match_components, ComponentMatching, DEFAULT_GAMMA_CUTOFF_RATIO};
use crate::error::Result;
use crate::imaging::{
    binarize, color_histogram, crop, histogram_similarity, perceptual_diff, DiffResult,
    PerceptualConfig,
};
use crate::ingest::matchable_leaves;
use crate::model::{BoundingBox, GuiComponent, ScreenCapture, ScreenPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChangeCategory {
    TextChange,
    LayoutChange,
    ResourceChange,
}

impl ChangeCategory {
    pub fn name(self) -> &'static str {
        match self {
            ChangeCategory::TextChange => "Text change",
            ChangeCategory::LayoutChange => "Layout change",
            ChangeCategory::ResourceChange => "Resource change",
        }
    }
}

/// The twelve specific change types, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChangeType {
    TextContent,
    FontStyle,
    FontColor,
    VerticalTranslation,
    HorizontalTranslation,
    VerticalSize,
    HorizontalSize,
    ImageColor,
    Removed,
    Added,
    ImageChange,
    ComponentType,
}

impl ChangeType {
    pub const ALL: [ChangeType; 12] = [
        ChangeType::TextContent,
        ChangeType::FontStyle,
        ChangeType::FontColor,
        ChangeType::VerticalTranslation,
        ChangeType::HorizontalTranslation,
        ChangeType::VerticalSize,
        ChangeType::HorizontalSize,
        ChangeType::ImageColor,
        ChangeType::Removed,
        ChangeType::Added,
        ChangeType::ImageChange,
        ChangeType::ComponentType,
    ];

    pub fn category(self) -> ChangeCategory {
        use ChangeType::*;
        match self {
            TextContent | FontStyle | FontColor => ChangeCategory::TextChange,
            VerticalTranslation | HorizontalTranslation | VerticalSize | HorizontalSize => {
                ChangeCategory::LayoutChange
            }
            ImageColor | Removed | Added | ImageChange | ComponentType => {
                ChangeCategory::ResourceChange
            }
        }
    }

    pub fn name(self) -> &'static str {
        use ChangeType::*;
        match self {
            TextContent => "TextContent",
            FontStyle => "FontStyle",
            FontColor => "FontColor",
            VerticalTranslation => "VerticalTranslation",
            HorizontalTranslation => "HorizontalTranslation",
            VerticalSize => "VerticalSize",
            HorizontalSize => "HorizontalSize",
            ImageColor => "ImageColor",
            Removed => "Removed",
            Added => "Added",
            ImageChange => "ImageChange",
            ComponentType => "ComponentType",
        }
    }

    pub fn from_name(s: &str) -> Option<ChangeType> {
        ChangeType::ALL.into_iter().find(|t| t.name() == s)
    }
}

impl fmt::Display for ChangeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One classified change.
///
/// `Removed` carries only the old component, `Added` only the new one,
/// every other type carries both.
#[derive(Debug, Clone, PartialEq)]
pub struct GuiChange {
    pub category: ChangeCategory,
    pub specific: ChangeType,
    pub old_component: Option<GuiComponent>,
    pub new_component: Option<GuiComponent>,
    /// Signed pixel delta for layout changes, histogram similarity for font
    /// changes, binary diff percent for image changes.
    pub magnitude: Option<f64>,
    pub detail: String,
}

impl GuiChange {
    pub fn new(
        specific: ChangeType,
        old: Option<&GuiComponent>,
        new: Option<&GuiComponent>,
        magnitude: Option<f64>,
        detail: String,
    ) -> Self {
        GuiChange {
            category: specific.category(),
            specific,
            old_component: old.cloned(),
            new_component: new.cloned(),
            magnitude,
            detail,
        }
    }

    pub fn old_bounds(&self) -> Option<BoundingBox> {
        self.old_component.as_ref().map(|c| c.bounds)
    }

    pub fn new_bounds(&self) -> Option<BoundingBox> {
        self.new_component.as_ref().map(|c| c.bounds)
    }

    /// Bounds used to place the change on screen: the new side for
    /// additions, the old side otherwise.
    pub fn anchor_bounds(&self) -> Option<BoundingBox> {
        match self.specific {
            ChangeType::Added => self.new_bounds(),
            _ => self.old_bounds().or_else(|| self.new_bounds()),
        }
    }

    fn sort_key(&self) -> (usize, usize, ChangeType) {
        (
            self.old_component.as_ref().map_or(usize::MAX, |c| c.node_index),
            self.new_component.as_ref().map_or(usize::MAX, |c| c.node_index),
            self.specific,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    /// Layout threshold in pixels; a delta must exceed it.
    pub lc: f64,
    /// Histogram similarity at or above which font colors are considered
    /// unchanged.
    pub fc: f64,
    /// Binary diff percent at or below which image shapes are considered
    /// unchanged.
    pub ic: f64,
    /// Maps "shapes match" to ImageChange and "shapes differ" to
    /// ImageColor instead of the other way round.
    pub swapped_image_rule: bool,
    /// Component gamma cutoff as a fraction of screen width + height.
    pub gamma_cutoff_ratio: f64,
    /// Fraction of a component's area that must intersect a diff region for
    /// pixel-level analysis.
    pub candidate_overlap: f64,
    pub perceptual: PerceptualConfig,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            lc: 5.0,
            fc: 0.85,
            ic: 20.0,
            swapped_image_rule: false,
            gamma_cutoff_ratio: DEFAULT_GAMMA_CUTOFF_RATIO,
            candidate_overlap: 0.01,
            perceptual: PerceptualConfig::default(),
        }
    }
}

impl DetectConfig {
    pub fn gamma_cutoff(&self, screen_dims: (u32, u32)) -> f64 {
        self.gamma_cutoff_ratio * (screen_dims.0 as f64 + screen_dims.1 as f64)
    }
}

/// Screenshot region under a component's bounds.
pub fn crop_component(capture: &ScreenCapture, c: &GuiComponent) -> Result<RgbImage> {
    crop(&capture.image, &c.bounds)
}

/// Crops of two components cut to their common top-left-anchored extent.
/// A size difference is already a layout change; comparing only the shared
/// extent keeps it from also showing up as a pixel change.
fn aligned(a: &RgbImage, b: &RgbImage) -> (RgbImage, RgbImage) {
    if a.dimensions() == b.dimensions() {
        return (a.clone(), b.clone());
    }
    let w = a.width().min(b.width());
    let h = a.height().min(b.height());
    let cut = |img: &RgbImage| image::imageops::crop_imm(img, 0, 0, w, h).to_image();
    (cut(a), cut(b))
}

/// Layout changes of one matched pair: one change per bounds delta whose
/// absolute value exceeds `lc`.
pub fn detect_layout_changes(old: &GuiComponent, new: &GuiComponent, lc: f64) -> Vec<GuiChange> {
    let (a, b) = (&old.bounds, &new.bounds);
    let deltas = [
        (ChangeType::HorizontalTranslation, b.x as i64 - a.x as i64, "dx"),
        (ChangeType::VerticalTranslation, b.y as i64 - a.y as i64, "dy"),
        (ChangeType::HorizontalSize, b.width as i64 - a.width as i64, "dw"),
        (ChangeType::VerticalSize, b.height as i64 - a.height as i64, "dh"),
    ];
    deltas
        .into_iter()
        .filter(|(_, d, _)| d.abs() as f64 > lc)
        .map(|(t, d, label)| {
            GuiChange::new(t, Some(old), Some(new), Some(d as f64), format!("{label}={d}"))
        })
        .collect()
}

/// Lowercased with all whitespace removed.
pub fn normalize_text(s: &str) -> String {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

/// A component pair is analyzed as text when either side has non-empty text.
pub fn carries_text(old: &GuiComponent, new: &GuiComponent) -> bool {
    old.visible_text().is_some() || new.visible_text().is_some()
}

fn text_content_change(old: &GuiComponent, new: &GuiComponent) -> Option<GuiChange> {
    let a = old.text.as_deref().unwrap_or("");
    let b = new.text.as_deref().unwrap_or("");
    (normalize_text(a) != normalize_text(b)).then(|| {
        GuiChange::new(
            ChangeType::TextContent,
            Some(old),
            Some(new),
            None,
            format!("{a:?} -> {b:?}"),
        )
    })
}

fn font_change(
    old: &GuiComponent,
    new: &GuiComponent,
    old_crop: &RgbImage,
    new_crop: &RgbImage,
    config: &DetectConfig,
) -> Result<Option<GuiChange>> {
    let (a, b) = aligned(old_crop, new_crop);
    if perceptual_diff(&a, &b, &config.perceptual)?.is_identical() {
        return Ok(None);
    }
    let similarity = histogram_similarity(&color_histogram(&a), &color_histogram(&b))?;
    let specific = if similarity < config.fc {
        ChangeType::FontColor
    } else {
        ChangeType::FontStyle
    };
    Ok(Some(GuiChange::new(
        specific,
        Some(old),
        Some(new),
        Some(similarity),
        format!("histogram similarity {similarity:.3}"),
    )))
}

/// Text changes of one matched text pair: a content change when the
/// normalized strings differ, otherwise a font color or font style change
/// when the crops differ perceptually.
pub fn detect_text_changes(
    old: &GuiComponent,
    new: &GuiComponent,
    old_crop: &RgbImage,
    new_crop: &RgbImage,
    config: &DetectConfig,
) -> Result<Vec<GuiChange>> {
    if let Some(c) = text_content_change(old, new) {
        return Ok(vec![c]);
    }
    Ok(font_change(old, new, old_crop, new_crop, config)?
        .into_iter()
        .collect())
}

/// Classifies a perceptually different non-text crop pair by comparing the
/// binarized crops. `None` when the crops do not differ at all.
pub fn classify_image_change(
    old_crop: &RgbImage,
    new_crop: &RgbImage,
    config: &DetectConfig,
) -> Result<Option<(ChangeType, f64)>> {
    let (a, b) = aligned(old_crop, new_crop);
    if perceptual_diff(&a, &b, &config.perceptual)?.is_identical() {
        return Ok(None);
    }
    let binary = perceptual_diff(
        &binarize(&a).to_rgb(),
        &binarize(&b).to_rgb(),
        &config.perceptual,
    )?;
    let shapes_match = binary.diff_percent <= config.ic;
    let specific = if shapes_match != config.swapped_image_rule {
        ChangeType::ImageColor
    } else {
        ChangeType::ImageChange
    };
    Ok(Some((specific, binary.diff_percent)))
}

/// Resource changes: added and removed components, image recolors and
/// replacements among pixel candidates, and component type changes.
pub fn detect_resource_changes(
    matching: &ComponentMatching,
    pair: &ScreenPair,
    full_diff: &DiffResult,
    config: &DetectConfig,
) -> Result<Vec<GuiChange>> {
    let mut out = Vec::new();
    for c in &matching.removed {
        out.push(GuiChange::new(
            ChangeType::Removed,
            Some(c),
            None,
            None,
            format!("{} removed", c.short_type()),
        ));
    }
    for c in &matching.added {
        out.push(GuiChange::new(
            ChangeType::Added,
            None,
            Some(c),
            None,
            format!("{} added", c.short_type()),
        ));
    }
    for (old, new, _) in &matching.matched {
        if old.component_type != new.component_type {
            out.push(GuiChange::new(
                ChangeType::ComponentType,
                Some(old),
                Some(new),
                None,
                format!("{} -> {}", old.component_type, new.component_type),
            ));
        }
        if carries_text(old, new) || !is_candidate(old, new, full_diff, config) {
            continue;
        }
        let (a, b) = (crop_component(&pair.old, old)?, crop_component(&pair.new, new)?);
        if let Some((specific, percent)) = classify_image_change(&a, &b, config)? {
            out.push(GuiChange::new(
                specific,
                Some(old),
                Some(new),
                Some(percent),
                format!("binary diff {percent:.2}%"),
            ));
        }
    }
    Ok(out)
}

/// Whether the diff regions together cover more than `min_fraction` of
/// `b`. Thin strokes (a bold toggle) fragment into many small regions, so
/// the overlap is summed rather than taken per region.
fn overlaps_diff(b: &BoundingBox, diff: &DiffResult, min_fraction: f64) -> bool {
    let area = b.area() as f64;
    let covered: u64 = diff
        .diff_regions
        .iter()
        .map(|r| b.overlap(r).intersection_area)
        .sum();
    area > 0.0 && covered as f64 > min_fraction * area
}

fn is_candidate(
    old: &GuiComponent,
    new: &GuiComponent,
    diff: &DiffResult,
    config: &DetectConfig,
) -> bool {
    overlaps_diff(&old.bounds, diff, config.candidate_overlap)
        || overlaps_diff(&new.bounds, diff, config.candidate_overlap)
}

/// Everything detected for one pair, kept together for reporting.
#[derive(Debug, Clone)]
pub struct PairAnalysis {
    pub matching: ComponentMatching,
    pub full_diff: DiffResult,
    pub changes: Vec<GuiChange>,
}

pub fn detect_changes(pair: &ScreenPair, config: &DetectConfig) -> Result<Vec<GuiChange>> {
    Ok(analyze_pair(pair, config)?.changes)
}

/// Full detection for one pair: component matching, full-screen diff and
/// the ordered, deduplicated change list.
pub fn analyze_pair(pair: &ScreenPair, config: &DetectConfig) -> Result<PairAnalysis> {
    let old_leaves = matchable_leaves(&pair.old.hierarchy);
    let new_leaves = matchable_leaves(&pair.new.hierarchy);
    let matching = match_components(
        &old_leaves,
        &new_leaves,
        config.gamma_cutoff(pair.old.dims()),
    );
    let full_diff = perceptual_diff(&pair.old.image, &pair.new.image, &config.perceptual)?;

    let mut changes = Vec::new();
    for (old, new, _) in &matching.matched {
        changes.extend(detect_layout_changes(old, new, config.lc));
        if !carries_text(old, new) {
            continue;
        }
        if let Some(c) = text_content_change(old, new) {
            changes.push(c);
        } else if is_candidate(old, new, &full_diff, config) {
            let (a, b) = (crop_component(&pair.old, old)?, crop_component(&pair.new, new)?);
            changes.extend(font_change(old, new, &a, &b, config)?);
        }
    }
    changes.extend(detect_resource_changes(&matching, pair, &full_diff, config)?);

    changes.sort_by_key(GuiChange::sort_key);
    changes.dedup_by(|a, b| a.sort_key() == b.sort_key());
    Ok(PairAnalysis {
        matching,
        full_diff,
        changes,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::imaging::{color_histogram, histogram_similarity};
    use crate::synth::{generate_layout, render_screen, IconShape};
    use crate::testutil::{icon_widget, layout, render_pair, text_widget};

    const BLACK: [u8; 3] = [0, 0, 0];
    const RED: [u8; 3] = [220, 20, 20];
    const BLUE: [u8; 3] = [20, 40, 220];

    fn comp(x: i32, y: i32, w: u32, h: u32) -> GuiComponent {
        GuiComponent {
            component_type: "android.widget.TextView".into(),
            bounds: BoundingBox::new(x, y, w, h),
            text: None,
            resource_id: None,
            is_leaf: true,
            node_index: 1,
        }
    }

    fn with_text(mut c: GuiComponent, t: &str) -> GuiComponent {
        c.text = Some(t.into());
        c
    }

    fn types(changes: &[GuiChange]) -> Vec<ChangeType> {
        changes.iter().map(|c| c.specific).collect()
    }

    fn crop_of(spec: &crate::synth::LayoutSpec) -> RgbImage {
        let cap = render_screen(spec, 0).unwrap();
        let w = spec.widgets()[0].clone();
        crop(&cap.image, &w.bounds).unwrap()
    }

    #[test]
    fn taxonomy_groups_types() {
        use ChangeCategory::*;
        let expect = [
            (ChangeType::TextContent, TextChange),
            (ChangeType::FontStyle, TextChange),
            (ChangeType::FontColor, TextChange),
            (ChangeType::VerticalTranslation, LayoutChange),
            (ChangeType::HorizontalTranslation, LayoutChange),
            (ChangeType::VerticalSize, LayoutChange),
            (ChangeType::HorizontalSize, LayoutChange),
            (ChangeType::ImageColor, ResourceChange),
            (ChangeType::Removed, ResourceChange),
            (ChangeType::Added, ResourceChange),
            (ChangeType::ImageChange, ResourceChange),
            (ChangeType::ComponentType, ResourceChange),
        ];
        for (t, c) in expect {
            assert_eq!(t.category(), c);
            assert_eq!(ChangeType::from_name(t.name()), Some(t));
        }
        assert_eq!(ChangeType::ALL.len(), 12);
    }

    #[test]
    fn crop_component_fixtures() {
        let spec = layout(vec![text_widget("id/a", 10, 10, "Hello", BLACK, false)]);
        let cap = render_screen(&spec, 0).unwrap();
        let full = comp(0, 0, 240, 200);
        assert_eq!(crop_component(&cap, &full).unwrap(), cap.image);
        let small = crop_component(&cap, &comp(10, 10, 5, 5)).unwrap();
        assert_eq!(small.dimensions(), (5, 5));
        for (x, y, p) in small.enumerate_pixels() {
            assert_eq!(p, cap.image.get_pixel(x + 10, y + 10));
        }
        // off-screen bounds clamp to the visible part
        let off = crop_component(&cap, &comp(230, 190, 30, 30)).unwrap();
        assert_eq!(off.dimensions(), (10, 10));
        assert!(crop_component(&cap, &comp(10, 10, 0, 5)).is_err());
    }

    #[test]
    fn layout_rule_fixtures() {
        let a = comp(10, 10, 100, 40);
        assert!(detect_layout_changes(&a, &a, 5.0).is_empty());
        let moved = detect_layout_changes(&a, &comp(22, 10, 100, 40), 5.0);
        assert_eq!(types(&moved), [ChangeType::HorizontalTranslation]);
        assert_eq!(moved[0].magnitude, Some(12.0));
        let two = detect_layout_changes(&a, &comp(22, 10, 100, 70), 5.0);
        assert_eq!(
            types(&two),
            [ChangeType::HorizontalTranslation, ChangeType::VerticalSize]
        );
        let all = detect_layout_changes(&a, &comp(0, 0, 50, 90), 5.0);
        assert_eq!(all.len(), 4);
        assert_eq!(all[2].magnitude, Some(-50.0));
    }

    #[test]
    fn layout_threshold_is_strict() {
        for lc in [5.0, 2.0, 12.0] {
            let a = comp(50, 50, 60, 20);
            let at = comp(50 + lc as i32, 50, 60, 20);
            let over = comp(51 + lc as i32, 50, 60, 20);
            assert!(detect_layout_changes(&a, &at, lc).is_empty());
            assert_eq!(
                types(&detect_layout_changes(&a, &over, lc)),
                [ChangeType::HorizontalTranslation]
            );
        }
    }

    #[test]
    fn text_normalization() {
        assert_eq!(normalize_text(" Sign In "), "signin");
        let c = comp(0, 0, 10, 10);
        assert!(text_content_change(&with_text(c.clone(), "Sign In"), &with_text(c.clone(), "sign in")).is_none());
        let t = text_content_change(&with_text(c.clone(), "Access Token"), &with_text(c.clone(), "Token"));
        assert_eq!(t.unwrap().specific, ChangeType::TextContent);
        // text removed with the bounds kept reads as a content change
        let gone = text_content_change(&with_text(c.clone(), "Token"), &c);
        assert_eq!(gone.unwrap().specific, ChangeType::TextContent);
    }

    #[test]
    fn recolored_text_is_font_color() {
        let a = crop_of(&layout(vec![text_widget("id/t", 10, 10, "Sign in", BLACK, false)]));
        let b = crop_of(&layout(vec![text_widget("id/t", 10, 10, "Sign in", RED, false)]));
        let sim = histogram_similarity(&color_histogram(&a), &color_histogram(&b)).unwrap();
        assert!(sim < 0.85, "{sim}");
        let c = with_text(comp(10, 10, a.width(), a.height()), "Sign in");
        let got = detect_text_changes(&c, &c, &a, &b, &DetectConfig::default()).unwrap();
        assert_eq!(types(&got), [ChangeType::FontColor]);
    }

    #[test]
    fn bold_text_is_font_style() {
        let a = crop_of(&layout(vec![text_widget("id/t", 10, 10, "Sign in", BLACK, false)]));
        let b = crop_of(&layout(vec![text_widget("id/t", 10, 10, "Sign in", BLACK, true)]));
        let sim = histogram_similarity(&color_histogram(&a), &color_histogram(&b)).unwrap();
        assert!(sim >= 0.85, "{sim}");
        let c = with_text(comp(10, 10, a.width(), a.height()), "Sign in");
        let got = detect_text_changes(&c, &c, &a, &b, &DetectConfig::default()).unwrap();
        assert_eq!(types(&got), [ChangeType::FontStyle]);
        // identical crops are not a font change
        assert!(detect_text_changes(&c, &c, &a, &a, &DetectConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn image_branch_fixtures() {
        let red = crop_of(&layout(vec![icon_widget("id/i", 10, 10, IconShape::Disc, RED)]));
        let blue = crop_of(&layout(vec![icon_widget("id/i", 10, 10, IconShape::Disc, BLUE)]));
        let cross = crop_of(&layout(vec![icon_widget("id/i", 10, 10, IconShape::Bars, RED)]));
        let config = DetectConfig::default();
        let (t, pct) = classify_image_change(&red, &blue, &config).unwrap().unwrap();
        assert_eq!((t, pct), (ChangeType::ImageColor, 0.0));
        let (t, pct) = classify_image_change(&red, &cross, &config).unwrap().unwrap();
        assert_eq!(t, ChangeType::ImageChange);
        // oracle: every disagreeing binary pixel is flagged
        let expected = 100.0 * IconShape::Disc.disagreement(IconShape::Bars, 24) as f64
            / (red.width() * red.height()) as f64;
        assert!((pct - expected).abs() < 1e-9, "{pct} vs {expected}");
        assert!(classify_image_change(&red, &red, &config).unwrap().is_none());

        let literal = DetectConfig {
            swapped_image_rule: true,
            ..config
        };
        assert_eq!(
            classify_image_change(&red, &blue, &literal).unwrap().unwrap().0,
            ChangeType::ImageChange
        );
        assert_eq!(
            classify_image_change(&red, &cross, &literal).unwrap().unwrap().0,
            ChangeType::ImageColor
        );
    }

    #[test]
    fn identical_screens_have_no_changes() {
        let spec = generate_layout(1, 0);
        let pair = render_pair(&spec, &spec);
        assert!(detect_changes(&pair, &DetectConfig::default()).unwrap().is_empty());
    }

    #[test]
    fn moved_component_is_one_translation() {
        let old = layout(vec![
            text_widget("id/a", 10, 10, "Login", BLACK, false),
            icon_widget("id/b", 10, 100, IconShape::Ring, RED),
        ]);
        let mut new = old.clone();
        new.root.children[0] = crate::synth::ElementSpec::Widget(text_widget("id/a", 30, 10, "Login", BLACK, false));
        let changes = detect_changes(&render_pair(&old, &new), &DetectConfig::default()).unwrap();
        assert_eq!(types(&changes), [ChangeType::HorizontalTranslation]);
        assert_eq!(changes[0].magnitude, Some(20.0));
    }

    #[test]
    fn edited_resized_and_added() {
        let old = layout(vec![text_widget("id/a", 10, 10, "Sign in", BLACK, false)]);
        let mut edited = text_widget("id/a", 10, 10, "Log in", BLACK, false);
        edited.bounds.height += 30;
        let new = layout(vec![edited, icon_widget("id/n", 10, 120, IconShape::Square, BLUE)]);
        let changes = detect_changes(&render_pair(&old, &new), &DetectConfig::default()).unwrap();
        let got = types(&changes);
        for t in [
            ChangeType::TextContent,
            ChangeType::HorizontalSize,
            ChangeType::VerticalSize,
            ChangeType::Added,
        ] {
            assert!(got.contains(&t), "{got:?} lacks {t}");
        }
        let added = changes.iter().find(|c| c.specific == ChangeType::Added).unwrap();
        assert!(added.old_component.is_none() && added.new_component.is_some());
    }

    #[test]
    fn type_change_is_reported_alongside_others() {
        let old = layout(vec![icon_widget("id/i", 10, 10, IconShape::Disc, RED)]);
        let mut w = icon_widget("id/i", 10, 10, IconShape::Disc, BLUE);
        w.component_type = "android.widget.ImageButton".into();
        let new = layout(vec![w]);
        let changes = detect_changes(&render_pair(&old, &new), &DetectConfig::default()).unwrap();
        assert_eq!(
            types(&changes),
            [ChangeType::ImageColor, ChangeType::ComponentType]
        );
    }

    #[test]
    fn pixel_only_change_is_never_layout() {
        let old = layout(vec![icon_widget("id/i", 10, 10, IconShape::Disc, RED)]);
        let new = layout(vec![icon_widget("id/i", 10, 10, IconShape::Bars, BLUE)]);
        let changes = detect_changes(&render_pair(&old, &new), &DetectConfig::default()).unwrap();
        assert!(changes.iter().all(|c| c.category != ChangeCategory::LayoutChange));
        assert_eq!(types(&changes), [ChangeType::ImageChange]);
    }

    #[test]
    fn added_and_removed_mirror_matching() {
        let old = layout(vec![
            text_widget("id/a", 10, 10, "Keep", BLACK, false),
            icon_widget("id/x", 200, 170, IconShape::Disc, RED),
        ]);
        let new = layout(vec![
            text_widget("id/a", 10, 10, "Keep", BLACK, false),
            icon_widget("id/y", 10, 120, IconShape::Disc, RED),
        ]);
        let pair = render_pair(&old, &new);
        let a = analyze_pair(&pair, &DetectConfig { gamma_cutoff_ratio: 0.1, ..Default::default() }).unwrap();
        let removed = a.changes.iter().filter(|c| c.specific == ChangeType::Removed).count();
        let added = a.changes.iter().filter(|c| c.specific == ChangeType::Added).count();
        assert_eq!((removed, added), (a.matching.removed.len(), a.matching.added.len()));
        assert_eq!((removed, added), (1, 1));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn self_pairs_are_change_free(seed in 0u64..1000, index in 0usize..50) {
            let spec = generate_layout(seed, index);
            let pair = render_pair(&spec, &spec);
            prop_assert!(detect_changes(&pair, &DetectConfig::default()).unwrap().is_empty());
        }

        #[test]
        fn classification_is_deterministic(seed in 0u64..1000) {
            let spec = generate_layout(seed, 0);
            let other = generate_layout(seed, 1);
            let pair = render_pair(&spec, &other);
            let a = detect_changes(&pair, &DetectConfig::default()).unwrap();
            let b = detect_changes(&pair, &DetectConfig::default()).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
