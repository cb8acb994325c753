//! Capture-directory ingestion: screenshots, hierarchy dumps and metadata
//! sidecars.
//!
//! A capture directory holds triples `NNN.png`, `NNN.xml` and `NNN.json`
//! sharing a zero-padded decimal basename. The sidecar is a JSON object
//! `{"activity": .., "window_name": .., "window_type": ..}`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundingBox, GuiComponent, GuiHierarchy, ScreenCapture, TreeBuilder};

/// Parses the `[x1,y1][x2,y2]` bounds wire format.
pub fn parse_bounds(bounds_text: &str) -> Result<BoundingBox> {
    let err = |reason| Error::Bounds {
        text: bounds_text.to_string(),
        reason,
    };
    let s = bounds_text.trim();
    let (first, rest) = parse_point(s).ok_or_else(|| err("expected [x1,y1][x2,y2]"))?;
    let (second, rest) = parse_point(rest).ok_or_else(|| err("expected [x1,y1][x2,y2]"))?;
    if !rest.is_empty() {
        return Err(err("trailing characters"));
    }
    let (x1, y1) = first;
    let (x2, y2) = second;
    if x2 < x1 {
        return Err(err("negative width"));
    }
    if y2 < y1 {
        return Err(err("negative height"));
    }
    let to_i32 = |v: i64| i32::try_from(v).map_err(|_| err("coordinate out of range"));
    Ok(BoundingBox::new(
        to_i32(x1)?,
        to_i32(y1)?,
        (x2 - x1) as u32,
        (y2 - y1) as u32,
    ))
}

fn parse_point(s: &str) -> Option<((i64, i64), &str)> {
    let s = s.strip_prefix('[')?;
    let close = s.find(']')?;
    let (inner, rest) = (&s[..close], &s[close + 1..]);
    let (a, b) = inner.split_once(',')?;
    Some(((a.trim().parse().ok()?, b.trim().parse().ok()?), rest))
}

/// A hierarchy together with the non-fatal problems found while parsing it.
#[derive(Debug, Clone)]
pub struct ParsedHierarchy {
    pub hierarchy: GuiHierarchy,
    pub warnings: Vec<String>,
}

/// Parses a uiautomator-style dump, clamping every node to the image.
pub fn parse_hierarchy(xml_text: &str, image_dims: (u32, u32)) -> Result<GuiHierarchy> {
    let parsed = parse_hierarchy_with_warnings(xml_text, image_dims)?;
    for w in &parsed.warnings {
        log::warn!("{w}");
    }
    Ok(parsed.hierarchy)
}

pub fn parse_hierarchy_with_warnings(
    xml_text: &str,
    image_dims: (u32, u32),
) -> Result<ParsedHierarchy> {
    let doc = roxmltree::Document::parse(xml_text)?;
    let mut warnings = Vec::new();
    let root = doc.root_element();
    let mut tops = Vec::new();
    if root.has_tag_name("node") {
        tops.extend(convert(root, image_dims, &mut warnings)?);
    } else {
        for child in root.children().filter(|n| n.has_tag_name("node")) {
            tops.extend(convert(child, image_dims, &mut warnings)?);
        }
    }
    let tree = match tops.len() {
        0 => return Err(Error::NoGuiNodes),
        1 => tops.pop().unwrap(),
        _ => {
            // several windows in one dump: hang them under a synthetic root
            let (w, h) = image_dims;
            let mut root = TreeBuilder::new("hierarchy", BoundingBox::new(0, 0, w, h));
            root.children = tops;
            root
        }
    };
    Ok(ParsedHierarchy {
        hierarchy: GuiHierarchy::from_tree(tree),
        warnings,
    })
}

fn convert(
    node: roxmltree::Node<'_, '_>,
    (w, h): (u32, u32),
    warnings: &mut Vec<String>,
) -> Result<Vec<TreeBuilder>> {
    let mut children = Vec::new();
    for child in node.children().filter(|n| n.has_tag_name("node")) {
        children.extend(convert(child, (w, h), warnings)?);
    }
    let class = node.attribute("class").unwrap_or("");
    let Some(bounds_text) = node.attribute("bounds") else {
        warnings.push(format!(
            "dropping {class:?} node without bounds (line {})",
            node.document().text_pos_at(node.range().start).row
        ));
        return Ok(children);
    };
    let bounds = parse_bounds(bounds_text)?.clamp_to(w, h);
    Ok(vec![TreeBuilder {
        component_type: class.to_string(),
        bounds,
        text: node.attribute("text").map(str::to_string),
        resource_id: node
            .attribute("resource-id")
            .filter(|s| !s.is_empty())
            .map(str::to_string),
        children,
    }])
}

/// All leaf components in preorder. Zero-area leaves are included; check
/// [`GuiComponent::excluded_from_matching`].
pub fn leaf_components(h: &GuiHierarchy) -> Vec<GuiComponent> {
    h.leaves().cloned().collect()
}

/// Leaves that take part in matching and diffing.
pub fn matchable_leaves(h: &GuiHierarchy) -> Vec<GuiComponent> {
    h.leaves()
        .filter(|c| !c.excluded_from_matching())
        .cloned()
        .collect()
}

/// Sidecar metadata recorded alongside each screenshot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaptureMetadata {
    pub activity: String,
    pub window_name: String,
    pub window_type: String,
}

/// One app version's observed screens, ordered by capture index.
#[derive(Debug, Clone)]
pub struct CaptureSet {
    pub label: String,
    pub captures: Vec<Arc<ScreenCapture>>,
    /// Skipped files and other non-fatal ingest problems.
    pub warnings: Vec<String>,
}

impl CaptureSet {
    pub fn new(label: impl Into<String>, captures: Vec<ScreenCapture>) -> Self {
        CaptureSet {
            label: label.into(),
            captures: captures.into_iter().map(Arc::new).collect(),
            warnings: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.captures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.captures.is_empty()
    }
}

#[derive(Default)]
struct Triple {
    png: Option<PathBuf>,
    xml: Option<PathBuf>,
    json: Option<PathBuf>,
}

/// Loads every complete `NNN.{png,xml,json}` triple in `dir`.
///
/// Incomplete triples and captures whose files fail to parse are skipped
/// and reported in [`CaptureSet::warnings`]. Fails only when nothing usable
/// remains.
pub fn load_capture_set(dir: impl AsRef<Path>, label: &str) -> Result<CaptureSet> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut triples: BTreeMap<(u64, String), Triple> = BTreeMap::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        let (Some(stem), Some(ext)) = (
            path.file_stem().and_then(|s| s.to_str()),
            path.extension().and_then(|s| s.to_str()),
        ) else {
            continue;
        };
        if stem.is_empty() || !stem.bytes().all(|b| b.is_ascii_digit()) {
            continue;
        }
        let Ok(number) = stem.parse::<u64>() else {
            continue;
        };
        let slot = triples.entry((number, stem.to_string())).or_default();
        match ext {
            "png" => slot.png = Some(path),
            "xml" => slot.xml = Some(path),
            "json" => slot.json = Some(path),
            _ => {}
        }
    }

    let mut warnings = Vec::new();
    let mut complete = Vec::new();
    for ((number, stem), t) in triples {
        match (t.png, t.xml, t.json) {
            (Some(png), Some(xml), Some(json)) => complete.push((number, stem, png, xml, json)),
            (png, xml, json) => {
                let missing: Vec<_> = [("png", png), ("xml", xml), ("json", json)]
                    .into_iter()
                    .filter(|(_, p)| p.is_none())
                    .map(|(e, _)| e)
                    .collect();
                warnings.push(format!(
                    "{}: skipping incomplete capture {stem} (missing {})",
                    dir.display(),
                    missing.join(", ")
                ));
            }
        }
    }
    if complete.is_empty() {
        return Err(Error::NoCaptures {
            path: dir.to_path_buf(),
        });
    }

    let loaded: Vec<_> = complete
        .into_par_iter()
        .map(|(number, stem, png, xml, json)| load_one(number as usize, &stem, &png, &xml, &json))
        .collect();
    let mut captures = Vec::new();
    for r in loaded {
        match r {
            Ok((capture, w)) => {
                warnings.extend(w);
                captures.push(Arc::new(capture));
            }
            Err(e) => warnings.push(format!("{}: skipping capture: {e}", dir.display())),
        }
    }
    if captures.is_empty() {
        return Err(Error::NoCaptures {
            path: dir.to_path_buf(),
        });
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(CaptureSet {
        label: label.to_string(),
        captures,
        warnings,
    })
}

fn load_one(
    index: usize,
    stem: &str,
    png: &Path,
    xml: &Path,
    json: &Path,
) -> Result<(ScreenCapture, Vec<String>)> {
    let image = image::open(png)
        .map_err(|source| Error::Image {
            path: png.to_path_buf(),
            source,
        })?
        .to_rgb8();
    if image.width() == 0 || image.height() == 0 {
        return Err(Error::EmptyImage);
    }
    let xml_text = fs::read_to_string(xml).map_err(|e| Error::io(xml, e))?;
    let parsed =
        parse_hierarchy_with_warnings(&xml_text, image.dimensions()).map_err(|e| Error::InFile {
            path: xml.to_path_buf(),
            source: Box::new(e),
        })?;
    let meta_text = fs::read_to_string(json).map_err(|e| Error::io(json, e))?;
    let meta: CaptureMetadata =
        serde_json::from_str(&meta_text).map_err(|source| Error::Metadata {
            path: json.to_path_buf(),
            source,
        })?;
    let warnings = parsed
        .warnings
        .into_iter()
        .map(|w| format!("{}: {w}", xml.display()))
        .collect();
    Ok((
        ScreenCapture {
            image,
            hierarchy: parsed.hierarchy,
            activity: meta.activity,
            window_name: meta.window_name,
            window_type: meta.window_type,
            capture_index: index,
            source_id: stem.to_string(),
        },
        warnings,
    ))
}

/// Writes one capture as an `NNN.{png,xml,json}` triple.
pub fn write_capture(dir: impl AsRef<Path>, capture: &ScreenCapture) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let png = dir.join(format!("{}.png", capture.source_id));
    capture
        .image
        .save_with_format(&png, image::ImageFormat::Png)
        .map_err(|source| Error::Image {
            path: png.clone(),
            source,
        })?;
    let xml = dir.join(format!("{}.xml", capture.source_id));
    fs::write(&xml, capture.hierarchy.to_xml()).map_err(|e| Error::io(&xml, e))?;
    let json = dir.join(format!("{}.json", capture.source_id));
    let meta = CaptureMetadata {
        activity: capture.activity.clone(),
        window_name: capture.window_name.clone(),
        window_type: capture.window_type.clone(),
    };
    fs::write(&json, serde_json::to_string_pretty(&meta)?).map_err(|e| Error::io(&json, e))?;
    Ok(())
}
