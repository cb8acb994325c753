//! Natural-language summaries of a pair's changes and per-change
//! descriptions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::detect::{ChangeType, GuiChange};
use crate::error::{Error, Result};
use crate::imaging::DiffResult;
use crate::model::GuiComponent;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Row {
    Top,
    Middle,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Column {
    Left,
    Center,
    Right,
}

/// Where most changes of a pair sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    /// One ninth of a 3x3 grid.
    Cell(Row, Column),
    /// One quarter of a 2x2 grid; `Middle`/`Center` never occur here.
    Quadrant(Row, Column),
    AcrossTheScreen,
}

fn cell_name(row: Row, col: Column) -> &'static str {
    match (row, col) {
        (Row::Top, Column::Left) => "top-left",
        (Row::Top, Column::Center) => "top-center",
        (Row::Top, Column::Right) => "top-right",
        (Row::Middle, Column::Left) => "middle-left",
        (Row::Middle, Column::Center) => "center",
        (Row::Middle, Column::Right) => "middle-right",
        (Row::Bottom, Column::Left) => "bottom-left",
        (Row::Bottom, Column::Center) => "bottom-center",
        (Row::Bottom, Column::Right) => "bottom-right",
    }
}

impl Location {
    /// Short name: a cell or quadrant name such as `top-left`, or
    /// `across-the-screen`.
    pub fn name(&self) -> &'static str {
        match *self {
            Location::Cell(r, c) | Location::Quadrant(r, c) => cell_name(r, c),
            Location::AcrossTheScreen => "across-the-screen",
        }
    }

    /// Phrase used inside the summary sentence.
    pub fn phrase(&self) -> String {
        match self {
            Location::Quadrant(..) => format!("{} quadrant", self.name()),
            _ => self.name().to_string(),
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.phrase())
    }
}

/// Index `0..parts` of the grid band holding coordinate `v` of an axis of
/// length `len`; coordinates outside the screen fall into the edge bands.
fn band(v: f64, len: u32, parts: usize) -> usize {
    let k = (v * parts as f64 / len as f64).floor();
    k.clamp(0.0, (parts - 1) as f64) as usize
}

const ROWS3: [Row; 3] = [Row::Top, Row::Middle, Row::Bottom];
const COLS3: [Column; 3] = [Column::Left, Column::Center, Column::Right];
const ROWS2: [Row; 2] = [Row::Top, Row::Bottom];
const COLS2: [Column; 2] = [Column::Left, Column::Right];

/// Location of a set of change centers: the 3x3 cell holding a strict
/// majority, else the 2x2 quadrant holding one, else across the screen.
pub fn localize_points(points: &[(f64, f64)], screen_dims: (u32, u32)) -> Result<Location> {
    if points.is_empty() {
        return Err(Error::NothingToLocalize);
    }
    let (w, h) = screen_dims;
    let majority = |parts: usize| -> Option<(usize, usize)> {
        let mut tally = vec![0usize; parts * parts];
        for &(x, y) in points {
            tally[band(y, h, parts) * parts + band(x, w, parts)] += 1;
        }
        tally
            .iter()
            .position(|&n| 2 * n > points.len())
            .map(|k| (k / parts, k % parts))
    };
    if let Some((r, c)) = majority(3) {
        return Ok(Location::Cell(ROWS3[r], COLS3[c]));
    }
    if let Some((r, c)) = majority(2) {
        return Ok(Location::Quadrant(ROWS2[r], COLS2[c]));
    }
    Ok(Location::AcrossTheScreen)
}

/// Localizes changes by the center of their anchor bounds: the new side
/// for additions, the old side otherwise.
pub fn localize_changes(changes: &[GuiChange], screen_dims: (u32, u32)) -> Result<Location> {
    let points: Vec<(f64, f64)> = changes
        .iter()
        .filter_map(|c| c.anchor_bounds().map(|b| b.center()))
        .collect();
    localize_points(&points, screen_dims)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Subtle,
    Moderate,
    Significant,
}

impl Level {
    /// Below 5% subtle, 5% to 20% moderate, above 20% significant.
    pub fn from_diff_percent(p: f64) -> Level {
        if p < 5.0 {
            Level::Subtle
        } else if p <= 20.0 {
            Level::Moderate
        } else {
            Level::Significant
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Subtle => "subtle",
            Level::Moderate => "moderate",
            Level::Significant => "significant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Amount {
    AFew,
    Several,
    Many,
}

impl Amount {
    /// Up to 3 a few, 4 to 10 several, more than 10 many.
    pub fn from_count(n: usize) -> Amount {
        match n {
            0..=3 => Amount::AFew,
            4..=10 => Amount::Several,
            _ => Amount::Many,
        }
    }

    pub fn phrase(self) -> &'static str {
        match self {
            Amount::AFew => "a few",
            Amount::Several => "several",
            Amount::Many => "many",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryCharacteristics {
    pub level: Level,
    /// `None` only when there are no changes.
    pub location: Option<Location>,
    pub amount: Amount,
    pub change_count: usize,
    pub diff_percent: f64,
}

pub fn characterize(
    changes: &[GuiChange],
    full_screen_diff: &DiffResult,
) -> SummaryCharacteristics {
    let dims = full_screen_diff.mask.dimensions();
    SummaryCharacteristics {
        level: Level::from_diff_percent(full_screen_diff.diff_percent),
        location: localize_changes(changes, dims).ok(),
        amount: Amount::from_count(changes.len()),
        change_count: changes.len(),
        diff_percent: full_screen_diff.diff_percent,
    }
}

pub const NO_CHANGE_SUMMARY: &str = "No GUI changes were detected between these screens.";

pub fn generate_summary(sc: &SummaryCharacteristics) -> String {
    if sc.change_count == 0 {
        return NO_CHANGE_SUMMARY.to_string();
    }
    let first = format!(
        "There were {} changes between versions, representing a {} visual difference.",
        sc.amount.phrase(),
        sc.level.name()
    );
    match sc.location {
        Some(Location::AcrossTheScreen) | None => {
            format!("{first} Changes are distributed across the screen.")
        }
        Some(loc) => format!("{first} Most changes occurred in the {} of the screen.", loc.phrase()),
    }
}

/// `"Login"` for text components, else the resource id, else the short
/// type with the node index.
pub fn component_name(c: &GuiComponent) -> String {
    if let Some(t) = c.visible_text() {
        format!("{t:?}")
    } else if let Some(id) = &c.resource_id {
        id.clone()
    } else {
        format!("{} #{}", c.short_type(), c.node_index)
    }
}

fn px(m: Option<f64>) -> String {
    format!("{:.0}", m.unwrap_or(0.0))
}

/// One sentence describing a change; every change type has its own
/// template.
pub fn describe_change(c: &GuiChange) -> String {
    use ChangeType::*;
    let comp = c
        .old_component
        .as_ref()
        .or(c.new_component.as_ref())
        .expect("a change carries at least one component");
    let name = component_name(comp);
    let text_of = |x: &Option<GuiComponent>| {
        x.as_ref()
            .and_then(|k| k.text.clone())
            .unwrap_or_default()
    };
    match c.specific {
        TextContent => format!(
            "Text changed from {:?} to {:?}.",
            text_of(&c.old_component),
            text_of(&c.new_component)
        ),
        FontStyle => format!("The font style of the {name} component changed."),
        FontColor => format!("The font color of the {name} component changed."),
        HorizontalTranslation => {
            format!("The {name} component moved {} px horizontally.", px(c.magnitude))
        }
        VerticalTranslation => {
            format!("The {name} component moved {} px vertically.", px(c.magnitude))
        }
        HorizontalSize => format!("The width of the {name} component changed by {} px.", px(c.magnitude)),
        VerticalSize => format!("The height of the {name} component changed by {} px.", px(c.magnitude)),
        ImageColor => format!("The image colors of the {name} component changed."),
        ImageChange => format!("The image of the {name} component was replaced."),
        Removed => format!("The {name} component was removed."),
        Added => format!("A new {} component was added.", comp.short_type()),
        ComponentType => format!(
            "The {name} component changed type from {} to {}.",
            c.old_component.as_ref().map_or("", |k| k.short_type()),
            c.new_component.as_ref().map_or("", |k| k.short_type())
        ),
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use proptest::prelude::*;

    use super::*;
    use crate::imaging::BinaryRaster;
    use crate::model::BoundingBox;

    const DIMS: (u32, u32) = (300, 600);

    fn comp(text: Option<&str>, id: Option<&str>, ty: &str, b: BoundingBox) -> GuiComponent {
        GuiComponent {
            component_type: ty.into(),
            bounds: b,
            text: text.map(Into::into),
            resource_id: id.map(Into::into),
            is_leaf: true,
            node_index: 7,
        }
    }

    fn at(x: i32, y: i32) -> GuiChange {
        let c = comp(None, None, "View", BoundingBox::new(x - 5, y - 5, 10, 10));
        GuiChange::new(ChangeType::ImageColor, Some(&c), Some(&c), None, String::new())
    }

    fn diff(percent: f64) -> DiffResult {
        DiffResult {
            mask: BinaryRaster::new(DIMS.0, DIMS.1),
            diff_percent: percent,
            diff_regions: vec![],
        }
    }

    #[test]
    fn localization_examples() {
        let tl = [at(20, 20), at(50, 80), at(90, 150)];
        assert_eq!(
            localize_changes(&tl, DIMS).unwrap(),
            Location::Cell(Row::Top, Column::Left)
        );
        let corners = [at(20, 20), at(280, 20), at(20, 580), at(280, 580)];
        assert_eq!(localize_changes(&corners, DIMS).unwrap(), Location::AcrossTheScreen);
        // 3 of 5 in the lower-left quarter, split over three ninths
        let five = [
            at(30, 350),
            at(130, 450),
            at(30, 550),
            at(280, 20),
            at(280, 580),
        ];
        let loc = localize_changes(&five, DIMS).unwrap();
        assert_eq!(loc, Location::Quadrant(Row::Bottom, Column::Left));
        assert_eq!(loc.name(), "bottom-left");
        assert!(matches!(
            localize_changes(&[], DIMS),
            Err(Error::NothingToLocalize)
        ));
    }

    #[test]
    fn added_and_removed_anchor_on_their_own_side() {
        let old = comp(None, None, "View", BoundingBox::new(0, 0, 10, 10));
        let new = comp(None, None, "View", BoundingBox::new(280, 580, 10, 10));
        let added = GuiChange::new(ChangeType::Added, None, Some(&new), None, String::new());
        let removed = GuiChange::new(ChangeType::Removed, Some(&old), None, None, String::new());
        assert_eq!(
            localize_changes(&[added], DIMS).unwrap(),
            Location::Cell(Row::Bottom, Column::Right)
        );
        assert_eq!(
            localize_changes(&[removed], DIMS).unwrap(),
            Location::Cell(Row::Top, Column::Left)
        );
    }

    #[test]
    fn characterize_table() {
        let mk = |n: usize| vec![at(20, 20); n];
        let c = characterize(&mk(2), &diff(2.0));
        assert_eq!((c.level, c.amount), (Level::Subtle, Amount::AFew));
        let c = characterize(&mk(7), &diff(12.0));
        assert_eq!((c.level, c.amount), (Level::Moderate, Amount::Several));
        let c = characterize(&mk(14), &diff(35.0));
        assert_eq!((c.level, c.amount), (Level::Significant, Amount::Many));
        assert_eq!(Level::from_diff_percent(5.0), Level::Moderate);
        assert_eq!(Level::from_diff_percent(20.0), Level::Moderate);
        assert_eq!(Amount::from_count(3), Amount::AFew);
        assert_eq!(Amount::from_count(10), Amount::Several);
        assert_eq!(characterize(&[], &diff(0.0)).location, None);
    }

    #[test]
    fn summary_templates() {
        let zero = characterize(&[], &diff(0.0));
        assert_eq!(generate_summary(&zero), NO_CHANGE_SUMMARY);
        let sc = SummaryCharacteristics {
            level: Level::Subtle,
            location: Some(Location::Cell(Row::Top, Column::Left)),
            amount: Amount::AFew,
            change_count: 2,
            diff_percent: 1.0,
        };
        assert_eq!(
            generate_summary(&sc),
            "There were a few changes between versions, representing a subtle visual difference. \
             Most changes occurred in the top-left of the screen."
        );
        let across = SummaryCharacteristics {
            level: Level::Significant,
            location: Some(Location::AcrossTheScreen),
            amount: Amount::Many,
            change_count: 20,
            diff_percent: 40.0,
        };
        assert!(generate_summary(&across).ends_with("Changes are distributed across the screen."));
        let quad = SummaryCharacteristics {
            location: Some(Location::Quadrant(Row::Bottom, Column::Right)),
            ..sc
        };
        assert!(generate_summary(&quad).contains("in the bottom-right quadrant of the screen."));
    }

    #[test]
    fn description_examples() {
        let login = comp(Some("Login"), None, "android.widget.Button", BoundingBox::new(0, 0, 50, 20));
        let moved = GuiChange::new(
            ChangeType::HorizontalTranslation,
            Some(&login),
            Some(&login),
            Some(24.0),
            String::new(),
        );
        assert_eq!(describe_change(&moved), r#"The "Login" component moved 24 px horizontally."#);
        let ib = comp(None, None, "android.widget.ImageButton", BoundingBox::new(0, 0, 5, 5));
        let added = GuiChange::new(ChangeType::Added, None, Some(&ib), None, String::new());
        assert_eq!(describe_change(&added), "A new ImageButton component was added.");
        let a = comp(Some("Sign in"), None, "TextView", BoundingBox::new(0, 0, 5, 5));
        let b = comp(Some("Sign up"), None, "TextView", BoundingBox::new(0, 0, 5, 5));
        let t = GuiChange::new(ChangeType::TextContent, Some(&a), Some(&b), None, String::new());
        assert_eq!(describe_change(&t), r#"Text changed from "Sign in" to "Sign up"."#);
    }

    #[test]
    fn naming_falls_back_to_id_then_type() {
        let b = BoundingBox::new(0, 0, 5, 5);
        assert_eq!(component_name(&comp(Some("OK"), Some("id/x"), "a.B", b)), "\"OK\"");
        assert_eq!(component_name(&comp(Some(""), Some("id/x"), "a.B", b)), "id/x");
        assert_eq!(component_name(&comp(None, None, "a.ImageView", b)), "ImageView #7");
    }

    #[test]
    fn every_type_has_its_own_template() {
        let c = comp(Some("X"), None, "android.widget.TextView", BoundingBox::new(0, 0, 5, 5));
        let d = comp(Some("Y"), None, "android.widget.Button", BoundingBox::new(0, 0, 5, 5));
        let texts: HashSet<String> = ChangeType::ALL
            .iter()
            .map(|&t| {
                let (o, n) = match t {
                    ChangeType::Added => (None, Some(&d)),
                    ChangeType::Removed => (Some(&c), None),
                    _ => (Some(&c), Some(&d)),
                };
                describe_change(&GuiChange::new(t, o, n, Some(3.0), String::new()))
            })
            .collect();
        assert_eq!(texts.len(), 12);
    }

    proptest! {
        #[test]
        fn location_matches_brute_force_tally(
            points in proptest::collection::vec((0.0f64..300.0, 0.0f64..600.0), 1..12)
        ) {
            let loc = localize_points(&points, DIMS).unwrap();
            let count = |parts: usize, r: usize, c: usize| {
                points.iter().filter(|(x, y)| {
                    let cr = ((y * parts as f64 / 600.0) as usize).min(parts - 1);
                    let cc = ((x * parts as f64 / 300.0) as usize).min(parts - 1);
                    cr == r && cc == c
                }).count()
            };
            let n = points.len();
            let cell3 = (0..9).find(|k| 2 * count(3, k / 3, k % 3) > n);
            let cell2 = (0..4).find(|k| 2 * count(2, k / 2, k % 2) > n);
            match loc {
                Location::Cell(r, c) => {
                    prop_assert_eq!(cell3, Some(r as usize * 3 + c as usize));
                }
                Location::Quadrant(r, c) => {
                    prop_assert!(cell3.is_none());
                    let (ri, ci) = (if r == Row::Top { 0 } else { 1 }, if c == Column::Left { 0 } else { 1 });
                    prop_assert_eq!(cell2, Some(ri * 2 + ci));
                }
                Location::AcrossTheScreen => prop_assert!(cell3.is_none() && cell2.is_none()),
            }
        }
    }
}
