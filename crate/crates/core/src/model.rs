//! Shared domain types: boxes, components, hierarchies and captures.

use std::fmt;
use std::sync::Arc;

use image::RgbImage;
use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle in absolute screen pixels.
///
/// Serialized as `[x, y, width, height]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 4]", into = "[i64; 4]")]
pub struct BoundingBox {
    pub x: i32,
    pub y: i32,
    pub width: u32,
    pub height: u32,
}

impl From<[i64; 4]> for BoundingBox {
    fn from(v: [i64; 4]) -> Self {
        BoundingBox {
            x: v[0] as i32,
            y: v[1] as i32,
            width: v[2].max(0) as u32,
            height: v[3].max(0) as u32,
        }
    }
}

impl From<BoundingBox> for [i64; 4] {
    fn from(b: BoundingBox) -> Self {
        [b.x as i64, b.y as i64, b.width as i64, b.height as i64]
    }
}

/// Overlap between two boxes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    pub intersection_area: u64,
    pub iou: f64,
}

impl BoundingBox {
    pub const fn new(x: i32, y: i32, width: u32, height: u32) -> Self {
        BoundingBox {
            x,
            y,
            width,
            height,
        }
    }

    pub fn area(&self) -> u64 {
        self.width as u64 * self.height as u64
    }

    pub fn right(&self) -> i64 {
        self.x as i64 + self.width as i64
    }

    pub fn bottom(&self) -> i64 {
        self.y as i64 + self.height as i64
    }

    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + self.width as f64 / 2.0,
            self.y as f64 + self.height as f64 / 2.0,
        )
    }

    pub fn intersection(&self, other: &BoundingBox) -> Option<BoundingBox> {
        let left = (self.x as i64).max(other.x as i64);
        let top = (self.y as i64).max(other.y as i64);
        let right = self.right().min(other.right());
        let bottom = self.bottom().min(other.bottom());
        (right > left && bottom > top).then(|| {
            BoundingBox::new(
                left as i32,
                top as i32,
                (right - left) as u32,
                (bottom - top) as u32,
            )
        })
    }

    /// Intersection area and intersection-over-union. IoU is 0 when the
    /// union is empty.
    pub fn overlap(&self, other: &BoundingBox) -> Overlap {
        let inter = self.intersection(other).map_or(0, |b| b.area());
        let union = self.area() + other.area() - inter;
        let iou = if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        };
        Overlap {
            intersection_area: inter,
            iou,
        }
    }

    /// Clamp into `[0, width] x [0, height]`.
    pub fn clamp_to(&self, width: u32, height: u32) -> BoundingBox {
        let cl = |v: i64, hi: u32| v.clamp(0, hi as i64);
        let x1 = cl(self.x as i64, width);
        let y1 = cl(self.y as i64, height);
        let x2 = cl(self.right(), width);
        let y2 = cl(self.bottom(), height);
        BoundingBox::new(x1 as i32, y1 as i32, (x2 - x1) as u32, (y2 - y1) as u32)
    }

    pub fn translate(&self, dx: i32, dy: i32) -> BoundingBox {
        BoundingBox::new(self.x + dx, self.y + dy, self.width, self.height)
    }

    pub fn contains_point(&self, px: i64, py: i64) -> bool {
        px >= self.x as i64 && px < self.right() && py >= self.y as i64 && py < self.bottom()
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}][{},{}]",
            self.x,
            self.y,
            self.right(),
            self.bottom()
        )
    }
}

/// Intersection area and IoU of two boxes.
pub fn bbox_geometry(a: &BoundingBox, b: &BoundingBox) -> Overlap {
    a.overlap(b)
}

/// One GUI element as reported by a hierarchy dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuiComponent {
    pub component_type: String,
    pub bounds: BoundingBox,
    pub text: Option<String>,
    pub resource_id: Option<String>,
    pub is_leaf: bool,
    /// Preorder position within the owning hierarchy.
    pub node_index: usize,
}

impl GuiComponent {
    /// Zero-area components stay in the model but never take part in
    /// matching or diffing.
    pub fn excluded_from_matching(&self) -> bool {
        self.bounds.area() == 0
    }

    /// Text that is present and non-empty.
    pub fn visible_text(&self) -> Option<&str> {
        self.text.as_deref().filter(|t| !t.is_empty())
    }

    /// Class name without its package prefix.
    pub fn short_type(&self) -> &str {
        short_type_name(&self.component_type)
    }
}

pub fn short_type_name(component_type: &str) -> &str {
    component_type
        .rsplit('.')
        .next()
        .unwrap_or(component_type)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HierarchyNode {
    pub component: GuiComponent,
    /// Indices into [`GuiHierarchy::nodes`].
    pub children: Vec<usize>,
}

/// Rooted, ordered tree stored in preorder; node `i` has `node_index == i`
/// and the root is node 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuiHierarchy {
    nodes: Vec<HierarchyNode>,
}

impl GuiHierarchy {
    /// Builds a hierarchy from nodes already laid out in preorder.
    ///
    /// Panics if the layout is not a preorder tree rooted at 0; callers in
    /// this crate construct nodes by traversal, so a violation is a bug.
    pub fn from_preorder(nodes: Vec<HierarchyNode>) -> Self {
        assert!(!nodes.is_empty(), "hierarchy needs a root");
        let mut expected = 1;
        check_preorder(&nodes, 0, &mut expected);
        assert_eq!(expected, nodes.len(), "unreachable nodes in hierarchy");
        for (i, n) in nodes.iter().enumerate() {
            assert_eq!(n.component.node_index, i);
            assert_eq!(n.component.is_leaf, n.children.is_empty());
        }
        GuiHierarchy { nodes }
    }

    /// Builds a hierarchy from a nested tree, assigning preorder indices and
    /// leaf flags.
    pub fn from_tree(root: TreeBuilder) -> Self {
        let mut nodes = Vec::new();
        flatten(root, &mut nodes);
        GuiHierarchy { nodes }
    }

    pub fn root(&self) -> &HierarchyNode {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[HierarchyNode] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &HierarchyNode {
        &self.nodes[index]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn depth(&self) -> usize {
        fn go(h: &GuiHierarchy, i: usize) -> usize {
            1 + h.nodes[i]
                .children
                .iter()
                .map(|&c| go(h, c))
                .max()
                .unwrap_or(0)
        }
        go(self, 0)
    }

    /// All leaves in preorder.
    pub fn leaves(&self) -> impl Iterator<Item = &GuiComponent> {
        self.nodes
            .iter()
            .filter(|n| n.children.is_empty())
            .map(|n| &n.component)
    }

    /// Serializes to a uiautomator-style dump.
    pub fn to_xml(&self) -> String {
        let mut out = String::from(
            "<?xml version='1.0' encoding='UTF-8' standalone='yes' ?>\n<hierarchy rotation=\"0\">\n",
        );
        self.write_node(0, 1, 0, &mut out);
        out.push_str("</hierarchy>\n");
        out
    }

    fn write_node(&self, i: usize, depth: usize, sibling: usize, out: &mut String) {
        let node = &self.nodes[i];
        let c = &node.component;
        let indent = "  ".repeat(depth);
        out.push_str(&format!("{indent}<node index=\"{sibling}\""));
        if let Some(text) = &c.text {
            out.push_str(&format!(" text=\"{}\"", xml_escape(text)));
        }
        out.push_str(&format!(
            " resource-id=\"{}\" class=\"{}\" bounds=\"{}\"",
            xml_escape(c.resource_id.as_deref().unwrap_or("")),
            xml_escape(&c.component_type),
            c.bounds,
        ));
        if node.children.is_empty() {
            out.push_str(" />\n");
        } else {
            out.push_str(">\n");
            for (k, &child) in node.children.iter().enumerate() {
                self.write_node(child, depth + 1, k, out);
            }
            out.push_str(&format!("{indent}</node>\n"));
        }
    }
}

fn check_preorder(nodes: &[HierarchyNode], i: usize, expected: &mut usize) {
    for &c in &nodes[i].children {
        assert_eq!(c, *expected, "children must follow preorder");
        *expected += 1;
        check_preorder(nodes, c, expected);
    }
}

/// Nested form used to build hierarchies.
#[derive(Debug, Clone)]
pub struct TreeBuilder {
    pub component_type: String,
    pub bounds: BoundingBox,
    pub text: Option<String>,
    pub resource_id: Option<String>,
    pub children: Vec<TreeBuilder>,
}

impl TreeBuilder {
    pub fn new(component_type: impl Into<String>, bounds: BoundingBox) -> Self {
        TreeBuilder {
            component_type: component_type.into(),
            bounds,
            text: None,
            resource_id: None,
            children: Vec::new(),
        }
    }

    pub fn text(mut self, text: impl Into<String>) -> Self {
        self.text = Some(text.into());
        self
    }

    pub fn resource_id(mut self, id: impl Into<String>) -> Self {
        self.resource_id = Some(id.into());
        self
    }

    pub fn child(mut self, child: TreeBuilder) -> Self {
        self.children.push(child);
        self
    }
}

fn flatten(t: TreeBuilder, nodes: &mut Vec<HierarchyNode>) -> usize {
    let index = nodes.len();
    let is_leaf = t.children.is_empty();
    nodes.push(HierarchyNode {
        component: GuiComponent {
            component_type: t.component_type,
            bounds: t.bounds,
            text: t.text,
            resource_id: t.resource_id,
            is_leaf,
            node_index: index,
        },
        children: Vec::new(),
    });
    let mut children = Vec::with_capacity(t.children.len());
    for c in t.children {
        children.push(flatten(c, nodes));
    }
    nodes[index].children = children;
    index
}

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            _ => out.push(ch),
        }
    }
    out
}

/// One observed screen of one app version.
#[derive(Debug, Clone)]
pub struct ScreenCapture {
    pub image: RgbImage,
    pub hierarchy: GuiHierarchy,
    pub activity: String,
    pub window_name: String,
    pub window_type: String,
    pub capture_index: usize,
    pub source_id: String,
}

impl ScreenCapture {
    pub fn dims(&self) -> (u32, u32) {
        self.image.dimensions()
    }

    /// Identity used for redundancy filtering.
    pub fn screen_key(&self) -> (&str, &str, &str) {
        (&self.activity, &self.window_name, &self.window_type)
    }
}

/// A matched (old, new) pair of screens.
#[derive(Debug, Clone)]
pub struct ScreenPair {
    pub old: Arc<ScreenCapture>,
    pub new: Arc<ScreenCapture>,
    pub assignment_cost: f64,
}

impl ScreenPair {
    /// Stable identifier used for report directories and truth files.
    pub fn pair_id(&self) -> String {
        pair_id(&self.old.source_id, &self.new.source_id)
    }
}

pub fn pair_id(old_source: &str, new_source: &str) -> String {
    format!("{old_source}_{new_source}")
}
