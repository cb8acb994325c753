#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use guidiff_core::detect::{analyze_pair, ChangeType, DetectConfig};
use guidiff_core::model::{BoundingBox, ScreenPair};
use guidiff_core::report::{build_report, report_html, ChangeReport};
use guidiff_core::synth::{
    apply_mutation, generate_layout, icon_box, pick_mutation, render_screen, text_box,
    ContainerSpec, ElementSpec, IconShape, IconSpec, LayoutSpec, MutationParams, MutationSpec,
    TextSpec, WidgetSpec,
};

pub const GOLDEN_TIMESTAMP: &str = "2024-06-01T09:30:00Z";

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn pair(old: &LayoutSpec, new: &LayoutSpec, index: usize) -> ScreenPair {
    ScreenPair {
        old: Arc::new(render_screen(old, index).unwrap()),
        new: Arc::new(render_screen(new, index).unwrap()),
        assignment_cost: 0.0,
    }
}

pub fn text(id: &str, x: i32, y: i32, content: &str) -> WidgetSpec {
    let (w, h) = text_box(content.chars().count());
    WidgetSpec {
        component_type: "android.widget.TextView".into(),
        resource_id: id.into(),
        bounds: BoundingBox::new(x, y, w, h),
        fill: Some([240, 240, 240]),
        text: Some(TextSpec {
            content: content.into(),
            color: [20, 20, 20],
            bold: false,
        }),
        icon: None,
    }
}

pub fn icon(id: &str, x: i32, y: i32, shape: IconShape, color: [u8; 3]) -> WidgetSpec {
    let (w, h) = icon_box(24);
    WidgetSpec {
        component_type: "android.widget.ImageButton".into(),
        resource_id: id.into(),
        bounds: BoundingBox::new(x, y, w, h),
        fill: Some([250, 250, 250]),
        text: None,
        icon: Some(IconSpec {
            shape,
            color,
            size: 24,
        }),
    }
}

pub fn screen(width: u32, height: u32, widgets: Vec<WidgetSpec>) -> LayoutSpec {
    LayoutSpec {
        width,
        height,
        background: [255, 255, 255],
        activity: "org.example.app.MainActivity".into(),
        window_name: "main".into(),
        window_type: "FRAGMENT".into(),
        root: ContainerSpec {
            component_type: "android.widget.FrameLayout".into(),
            resource_id: "id/content".into(),
            bounds: BoundingBox::new(0, 0, width, height),
            children: widgets.into_iter().map(ElementSpec::Widget).collect(),
        },
    }
}

/// Named report fixtures: no change, three hand-placed changes, and a
/// generated screen with two stacked mutations.
pub fn report_fixtures() -> Vec<(&'static str, ScreenPair)> {
    let base = generate_layout(100, 0);

    let old = screen(
        240,
        320,
        vec![
            text("id/title", 10, 10, "Sign in"),
            icon("id/menu", 200, 10, IconShape::Bars, [30, 30, 30]),
            text("id/user", 10, 80, "User"),
        ],
    );
    let new = screen(
        240,
        320,
        vec![
            text("id/title", 10, 10, "Sign up"),
            icon("id/menu", 200, 10, IconShape::Bars, [30, 30, 30]),
            text("id/user", 34, 80, "User"),
            icon("id/help", 10, 250, IconShape::Ring, [20, 60, 200]),
        ],
    );

    let mixed = generate_layout(100, 1);
    let (_, step, _) = pick_mutation(&mixed, ChangeType::VerticalTranslation, 100, 1).unwrap();
    let (_, step, _) = pick_mutation(&step, ChangeType::ImageChange, 100, 1).unwrap();
    let target = step.widgets().iter().find(|w| w.text.is_some()).unwrap().resource_id.clone();
    let (step, _) = apply_mutation(
        &step,
        &MutationSpec {
            specific: ChangeType::ComponentType,
            target,
            params: MutationParams::Retype("android.widget.EditText".into()),
        },
    )
    .unwrap();

    vec![
        ("no_change", pair(&base, &base, 0)),
        ("three_changes", pair(&old, &new, 1)),
        ("mixed", pair(&mixed, &step, 2)),
    ]
}

pub fn fixture_report(p: &ScreenPair) -> (ChangeReport, usize) {
    let analysis = analyze_pair(p, &DetectConfig::default()).unwrap();
    let n = analysis.changes.len();
    (build_report(p, &analysis, GOLDEN_TIMESTAMP), n)
}

pub fn fixture_html(p: &ScreenPair) -> String {
    report_html(&fixture_report(p).0)
}
