use image::{Rgb, RgbImage};

use crate::model::{BoundingBox, GuiHierarchy, ScreenCapture, TreeBuilder};

pub fn capture(
    image: RgbImage,
    leaves: &[BoundingBox],
    activity: &str,
    index: usize,
) -> ScreenCapture {
    let (w, h) = image.dimensions();
    let mut root = TreeBuilder::new("FrameLayout", BoundingBox::new(0, 0, w, h));
    for b in leaves {
        root = root.child(TreeBuilder::new("View", *b));
    }
    ScreenCapture {
        image,
        hierarchy: GuiHierarchy::from_tree(root),
        activity: activity.to_string(),
        window_name: "main".into(),
        window_type: "FRAGMENT".into(),
        capture_index: index,
        source_id: format!("{index:03}"),
    }
}

pub fn solid(w: u32, h: u32, c: [u8; 3]) -> RgbImage {
    RgbImage::from_pixel(w, h, Rgb(c))
}

use crate::synth::{
    icon_box, text_box, ContainerSpec, ElementSpec, IconShape, IconSpec, LayoutSpec, TextSpec,
    WidgetSpec,
};

pub fn text_widget(id: &str, x: i32, y: i32, text: &str, color: [u8; 3], bold: bool) -> WidgetSpec {
    let (w, h) = text_box(text.chars().count());
    WidgetSpec {
        component_type: "android.widget.TextView".into(),
        resource_id: id.into(),
        bounds: BoundingBox::new(x, y, w, h),
        fill: None,
        text: Some(TextSpec {
            content: text.into(),
            color,
            bold,
        }),
        icon: None,
    }
}

pub fn icon_widget(id: &str, x: i32, y: i32, shape: IconShape, color: [u8; 3]) -> WidgetSpec {
    let (w, h) = icon_box(24);
    WidgetSpec {
        component_type: "android.widget.ImageView".into(),
        resource_id: id.into(),
        bounds: BoundingBox::new(x, y, w, h),
        fill: None,
        text: None,
        icon: Some(IconSpec {
            shape,
            color,
            size: 24,
        }),
    }
}

/// White 240x200 screen holding `widgets` directly under the root.
pub fn layout(widgets: Vec<WidgetSpec>) -> LayoutSpec {
    LayoutSpec {
        width: 240,
        height: 200,
        background: [255, 255, 255],
        activity: "org.example.Main".into(),
        window_name: "main".into(),
        window_type: "FRAGMENT".into(),
        root: ContainerSpec {
            component_type: "android.widget.FrameLayout".into(),
            resource_id: "id/content".into(),
            bounds: BoundingBox::new(0, 0, 240, 200),
            children: widgets.into_iter().map(ElementSpec::Widget).collect(),
        },
    }
}

pub fn render_pair(old: &LayoutSpec, new: &LayoutSpec) -> crate::model::ScreenPair {
    crate::model::ScreenPair {
        old: std::sync::Arc::new(crate::synth::render_screen(old, 0).unwrap()),
        new: std::sync::Arc::new(crate::synth::render_screen(new, 0).unwrap()),
        assignment_cost: 0.0,
    }
}
