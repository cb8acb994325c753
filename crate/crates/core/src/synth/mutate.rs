use serde::{Deserialize, Serialize};

use super::render::{Color, ContainerSpec, ElementSpec, IconShape, LayoutSpec, WidgetSpec};
use crate::detect::ChangeType;
use crate::error::{Error, Result};
use crate::metrics::GroundTruthChange;

/// Type-specific mutation arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MutationParams {
    Text(String),
    ToggleBold,
    TextColor(Color),
    /// Signed pixel offset along the mutation's axis.
    Shift(i32),
    /// Signed pixel change of the mutation's dimension.
    Grow(i32),
    IconColor(Color),
    IconShape(IconShape),
    Remove,
    /// New widget appended to the target container.
    Add(WidgetSpec),
    Retype(String),
}

/// One injected change: `target` is the resource id of the widget (or, for
/// additions, of the container receiving the new widget).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MutationSpec {
    pub specific: ChangeType,
    pub target: String,
    pub params: MutationParams,
}

fn find_widget<'a>(c: &'a mut ContainerSpec, id: &str) -> Option<&'a mut WidgetSpec> {
    for e in &mut c.children {
        match e {
            ElementSpec::Widget(w) if w.resource_id == id => return Some(w),
            ElementSpec::Container(k) => {
                if let Some(w) = find_widget(k, id) {
                    return Some(w);
                }
            }
            _ => {}
        }
    }
    None
}

fn find_container<'a>(c: &'a mut ContainerSpec, id: &str) -> Option<&'a mut ContainerSpec> {
    if c.resource_id == id {
        return Some(c);
    }
    for e in &mut c.children {
        if let ElementSpec::Container(k) = e {
            if let Some(found) = find_container(k, id) {
                return Some(found);
            }
        }
    }
    None
}

/// Removes the widget and returns it; refuses to empty its container.
fn remove_widget(c: &mut ContainerSpec, id: &str) -> Result<Option<WidgetSpec>> {
    if let Some(pos) = c
        .children
        .iter()
        .position(|e| matches!(e, ElementSpec::Widget(w) if w.resource_id == id))
    {
        if c.children.len() == 1 {
            return Err(Error::Mutation(format!(
                "removing {id} would leave container {} empty",
                c.resource_id
            )));
        }
        let ElementSpec::Widget(w) = c.children.remove(pos) else {
            unreachable!()
        };
        return Ok(Some(w));
    }
    for e in &mut c.children {
        if let ElementSpec::Container(k) = e {
            if let Some(w) = remove_widget(k, id)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn bad(m: &MutationSpec, why: &str) -> Error {
    Error::Mutation(format!("{} on {}: {why}", m.specific, m.target))
}

/// Applies one mutation to a layout, returning the mutated layout and the
/// ground-truth record describing it. Only the targeted widget changes.
pub fn apply_mutation(
    spec: &LayoutSpec,
    m: &MutationSpec,
) -> Result<(LayoutSpec, GroundTruthChange)> {
    use ChangeType::*;
    let mut out = spec.clone();

    if m.specific == Added {
        let MutationParams::Add(w) = &m.params else {
            return Err(bad(m, "expected Add parameters"));
        };
        let parent = find_container(&mut out.root, &m.target)
            .ok_or_else(|| bad(m, "no such container"))?;
        parent.children.push(ElementSpec::Widget(w.clone()));
        let truth = GroundTruthChange {
            specific: Added,
            bounds_old: None,
            bounds_new: Some(w.bounds),
        };
        super::render::render_screen(&out, 0)?;
        return Ok((out, truth));
    }
    if m.specific == Removed {
        if m.params != MutationParams::Remove {
            return Err(bad(m, "expected Remove parameters"));
        }
        let w = remove_widget(&mut out.root, &m.target)?
            .ok_or_else(|| bad(m, "no such widget"))?;
        let truth = GroundTruthChange {
            specific: Removed,
            bounds_old: Some(w.bounds),
            bounds_new: None,
        };
        return Ok((out, truth));
    }

    let w = find_widget(&mut out.root, &m.target).ok_or_else(|| bad(m, "no such widget"))?;
    let before = w.bounds;
    match (m.specific, &m.params) {
        (TextContent, MutationParams::Text(s)) => {
            let t = w.text.as_mut().ok_or_else(|| bad(m, "widget has no text"))?;
            if crate::detect::normalize_text(s) == crate::detect::normalize_text(&t.content) {
                return Err(bad(m, "replacement text normalizes to the same string"));
            }
            t.content = s.clone();
        }
        (FontStyle, MutationParams::ToggleBold) => {
            let t = w.text.as_mut().ok_or_else(|| bad(m, "widget has no text"))?;
            t.bold = !t.bold;
        }
        (FontColor, MutationParams::TextColor(c)) => {
            let t = w.text.as_mut().ok_or_else(|| bad(m, "widget has no text"))?;
            if t.color == *c {
                return Err(bad(m, "color unchanged"));
            }
            t.color = *c;
        }
        (HorizontalTranslation, MutationParams::Shift(d)) => w.bounds = w.bounds.translate(*d, 0),
        (VerticalTranslation, MutationParams::Shift(d)) => w.bounds = w.bounds.translate(0, *d),
        (HorizontalSize, MutationParams::Grow(d)) => {
            w.bounds.width = w
                .bounds
                .width
                .checked_add_signed(*d)
                .filter(|&v| v > 0)
                .ok_or_else(|| bad(m, "width would vanish"))?;
        }
        (VerticalSize, MutationParams::Grow(d)) => {
            w.bounds.height = w
                .bounds
                .height
                .checked_add_signed(*d)
                .filter(|&v| v > 0)
                .ok_or_else(|| bad(m, "height would vanish"))?;
        }
        (ImageColor, MutationParams::IconColor(c)) => {
            let i = w.icon.as_mut().ok_or_else(|| bad(m, "widget has no image"))?;
            if i.color == *c {
                return Err(bad(m, "color unchanged"));
            }
            i.color = *c;
        }
        (ImageChange, MutationParams::IconShape(s)) => {
            let i = w.icon.as_mut().ok_or_else(|| bad(m, "widget has no image"))?;
            if i.shape == *s {
                return Err(bad(m, "shape unchanged"));
            }
            i.shape = *s;
        }
        (ComponentType, MutationParams::Retype(t)) => {
            if w.component_type == *t {
                return Err(bad(m, "type unchanged"));
            }
            w.component_type = t.clone();
        }
        _ => return Err(bad(m, "parameters do not fit the change type")),
    }
    let after = w.bounds;
    super::render::render_screen(&out, 0)?;
    Ok((
        out,
        GroundTruthChange {
            specific: m.specific,
            bounds_old: Some(before),
            bounds_new: Some(after),
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BoundingBox;
    use crate::synth::render::{render_screen, IconSpec, TextSpec};

    fn widget(id: &str, x: i32, y: i32, text: Option<&str>) -> WidgetSpec {
        WidgetSpec {
            component_type: if text.is_some() { "android.widget.Button" } else { "android.widget.ImageView" }.into(),
            resource_id: id.into(),
            bounds: BoundingBox::new(x, y, 100, 50),
            fill: Some([230, 230, 240]),
            text: text.map(|t| TextSpec {
                content: t.into(),
                color: [30, 60, 200],
                bold: false,
            }),
            icon: text.is_none().then_some(IconSpec {
                shape: IconShape::Disc,
                color: [200, 30, 30],
                size: 24,
            }),
        }
    }

    fn layout() -> LayoutSpec {
        LayoutSpec {
            width: 240,
            height: 300,
            background: [255, 255, 255],
            activity: "A".into(),
            window_name: "W".into(),
            window_type: "FRAGMENT".into(),
            root: ContainerSpec {
                component_type: "android.widget.FrameLayout".into(),
                resource_id: "id/content".into(),
                bounds: BoundingBox::new(0, 0, 240, 300),
                children: vec![
                    ElementSpec::Widget(widget("id/ok", 10, 10, Some("OK"))),
                    ElementSpec::Container(ContainerSpec {
                        component_type: "android.widget.LinearLayout".into(),
                        resource_id: "id/row".into(),
                        bounds: BoundingBox::new(0, 100, 240, 100),
                        children: vec![
                            ElementSpec::Widget(widget("id/icon", 10, 110, None)),
                            ElementSpec::Widget(widget("id/label", 120, 110, Some("Label"))),
                        ],
                    }),
                ],
            },
        }
    }

    fn m(specific: ChangeType, target: &str, params: MutationParams) -> MutationSpec {
        MutationSpec {
            specific,
            target: target.into(),
            params,
        }
    }

    #[test]
    fn vertical_translation_moves_only_the_target() {
        let base = layout();
        let (out, truth) = apply_mutation(
            &base,
            &m(ChangeType::VerticalTranslation, "id/ok", MutationParams::Shift(30)),
        )
        .unwrap();
        assert_eq!(truth.specific, ChangeType::VerticalTranslation);
        assert_eq!(truth.bounds_old, Some(BoundingBox::new(10, 10, 100, 50)));
        assert_eq!(truth.bounds_new, Some(BoundingBox::new(10, 40, 100, 50)));
        let (a, b) = (render_screen(&base, 0).unwrap(), render_screen(&out, 0).unwrap());
        let la: Vec<_> = a.hierarchy.leaves().collect();
        let lb: Vec<_> = b.hierarchy.leaves().collect();
        assert_eq!(la.len(), lb.len());
        for (ca, cb) in la.into_iter().zip(lb) {
            if ca.resource_id.as_deref() == Some("id/ok") {
                assert_eq!(cb.bounds, ca.bounds.translate(0, 30));
            } else {
                assert_eq!(ca, cb);
            }
        }
        // pixels outside the union of old and new bounds are untouched
        let affected = BoundingBox::new(10, 10, 100, 80);
        for (x, y, p) in a.image.enumerate_pixels() {
            if !affected.contains_point(x as i64, y as i64) {
                assert_eq!(p, b.image.get_pixel(x, y));
            }
        }
    }

    #[test]
    fn removed_leaf_is_gone() {
        let (out, truth) =
            apply_mutation(&layout(), &m(ChangeType::Removed, "id/icon", MutationParams::Remove))
                .unwrap();
        assert!(out.widgets().iter().all(|w| w.resource_id != "id/icon"));
        assert_eq!(out.widgets().len(), 2);
        assert_eq!(truth.bounds_new, None);
    }

    #[test]
    fn retype_changes_hierarchy_type_only() {
        let base = layout();
        let (out, _) = apply_mutation(
            &base,
            &m(
                ChangeType::ComponentType,
                "id/icon",
                MutationParams::Retype("android.widget.ImageButton".into()),
            ),
        )
        .unwrap();
        let (a, b) = (render_screen(&base, 0).unwrap(), render_screen(&out, 0).unwrap());
        assert_eq!(a.image.as_raw(), b.image.as_raw());
        let t = |c: &crate::model::ScreenCapture| {
            c.hierarchy
                .nodes()
                .iter()
                .find(|n| n.component.resource_id.as_deref() == Some("id/icon"))
                .unwrap()
                .component
                .component_type
                .clone()
        };
        assert_eq!(t(&a), "android.widget.ImageView");
        assert_eq!(t(&b), "android.widget.ImageButton");
    }

    #[test]
    fn inapplicable_mutations_fail() {
        let base = layout();
        let bad = [
            m(ChangeType::FontColor, "id/icon", MutationParams::TextColor([0, 0, 0])),
            m(ChangeType::ImageColor, "id/ok", MutationParams::IconColor([0, 0, 0])),
            m(ChangeType::TextContent, "id/ok", MutationParams::Text("o k".into())),
            m(ChangeType::VerticalTranslation, "id/missing", MutationParams::Shift(5)),
            m(ChangeType::HorizontalSize, "id/ok", MutationParams::Grow(-100)),
            m(ChangeType::HorizontalTranslation, "id/ok", MutationParams::Text("x".into())),
            // would overlap the label
            m(ChangeType::HorizontalTranslation, "id/icon", MutationParams::Shift(20)),
            m(ChangeType::Removed, "id/ok", MutationParams::Remove).clone(),
        ];
        for (k, mm) in bad.iter().enumerate() {
            let r = apply_mutation(&base, mm);
            // removing id/ok is legal: its container keeps other children
            if k == bad.len() - 1 {
                assert!(r.is_ok());
            } else {
                assert!(matches!(r, Err(Error::Mutation(_)) | Err(Error::Layout(_))), "{mm:?}");
            }
        }
        let mut single = base.clone();
        single.root.children.truncate(1);
        assert!(apply_mutation(&single, &m(ChangeType::Removed, "id/ok", MutationParams::Remove)).is_err());
    }

    #[test]
    fn added_widget_lands_in_target_container() {
        let mut w = widget("id/new", 10, 220, Some("New"));
        w.bounds = BoundingBox::new(10, 220, 60, 30);
        let (out, truth) = apply_mutation(
            &layout(),
            &m(ChangeType::Added, "id/content", MutationParams::Add(w.clone())),
        )
        .unwrap();
        assert_eq!(out.widgets().len(), 4);
        assert_eq!(truth.bounds_old, None);
        assert_eq!(truth.bounds_new, Some(w.bounds));
    }
}
