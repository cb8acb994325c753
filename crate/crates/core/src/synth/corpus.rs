use std::fs;
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mutate::{apply_mutation, MutationParams, MutationSpec};
use super::render::{
    icon_box, render_screen, text_box, Color, ContainerSpec, ElementSpec, IconShape, IconSpec,
    LayoutSpec, TextSpec, WidgetSpec,
};
use crate::detect::ChangeType;
use crate::error::{Error, Result};
use crate::ingest::write_capture;
use crate::metrics::{write_jsonl, GroundTruthChange};
use crate::model::{pair_id, BoundingBox};

pub const SCREEN_WIDTH: u32 = 240;
pub const SCREEN_HEIGHT: u32 = 480;
pub const ROW_HEIGHT: u32 = 80;
pub const ROWS: u32 = SCREEN_HEIGHT / ROW_HEIGHT;
pub const ICON_SIZE: u32 = 24;
/// Left edge of the free slot that every single-widget row keeps open.
pub const FREE_SLOT_X: i32 = 140;
/// Left edge range of the right-hand widget in a split row.
const SPLIT_RIGHT_X: std::ops::RangeInclusive<i32> = 170..=200;
pub const DEFAULT_PAIRS_PER_TYPE: usize = 9;

/// Words with enough glyph ink that a recolor moves the histogram well
/// past the font-color threshold.
pub const WORDS: [&str; 24] = [
    "OK", "Go", "Save", "Open", "Menu", "Send", "Back", "Next", "Edit", "Done", "Home", "Mode",
    "Share", "Apply", "Reset", "Login", "Start", "Sound", "Search", "Submit", "Update", "Cancel",
    "Browse", "Accept",
];

const FILLS: [Color; 8] = [
    [236, 240, 244],
    [250, 236, 214],
    [222, 244, 226],
    [232, 226, 248],
    [248, 224, 232],
    [214, 236, 250],
    [244, 244, 210],
    [255, 255, 255],
];

const INKS: [Color; 6] = [
    [200, 30, 30],
    [30, 60, 200],
    [20, 120, 40],
    [40, 40, 40],
    [120, 30, 140],
    [150, 80, 0],
];

const BACKGROUNDS: [Color; 6] = [
    [180, 190, 200],
    [160, 170, 150],
    [190, 170, 160],
    [150, 160, 190],
    [200, 200, 180],
    [170, 150, 180],
];

const TEXT_TYPES: [&str; 3] = ["android.widget.TextView", "android.widget.Button", "android.widget.CheckBox"];
const ICON_TYPES: [&str; 3] = [
    "android.widget.ImageView",
    "android.widget.ImageButton",
    "android.widget.RadioButton",
];

/// Screen `index` of a corpus with the given seed.
fn rng_for(seed: u64, index: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.wrapping_mul(1 << 32) ^ index as u64);
    rng
}

fn text_widget(rng: &mut impl Rng, id: String, x: i32, y: i32) -> WidgetSpec {
    let word = *WORDS.choose(rng).unwrap();
    let (w, h) = text_box(word.chars().count());
    WidgetSpec {
        component_type: TEXT_TYPES.choose(rng).unwrap().to_string(),
        resource_id: id,
        bounds: BoundingBox::new(x, y, w, h),
        fill: Some(*FILLS.choose(rng).unwrap()),
        text: Some(TextSpec {
            content: word.into(),
            color: *INKS.choose(rng).unwrap(),
            bold: rng.random_bool(0.3),
        }),
        icon: None,
    }
}

fn icon_widget(rng: &mut impl Rng, id: String, x: i32, y: i32) -> WidgetSpec {
    let (w, h) = icon_box(ICON_SIZE);
    WidgetSpec {
        component_type: ICON_TYPES.choose(rng).unwrap().to_string(),
        resource_id: id,
        bounds: BoundingBox::new(x, y, w, h),
        fill: Some(*FILLS.choose(rng).unwrap()),
        text: None,
        icon: Some(IconSpec {
            shape: *IconShape::ALL.choose(rng).unwrap(),
            color: *INKS.choose(rng).unwrap(),
            size: ICON_SIZE,
        }),
    }
}

/// Random screen made of six rows. Each row holds a text widget, an icon
/// widget, or both side by side, and each kind occurs at least once; single-widget rows keep the slot right of
/// [`FREE_SLOT_X`] empty so a widget can be added there.
pub fn generate_layout(seed: u64, index: usize) -> LayoutSpec {
    let mut rng = rng_for(seed, index, 0);
    let mut next_id = 0;
    let mut id = || {
        next_id += 1;
        format!("id/w{next_id}")
    };
    // every kind of row appears at least once so any mutation type applies
    let mut kinds: Vec<u8> = (0..ROWS).map(|r| if r < 3 { r as u8 } else { rng.random_range(0..3) }).collect();
    kinds.shuffle(&mut rng);
    let mut rows = Vec::new();
    for (r, kind) in (0..ROWS).zip(kinds) {
        let top = (r * ROW_HEIGHT) as i32;
        let x = rng.random_range(4..=24);
        let y = top + rng.random_range(6..=14);
        let children = match kind {
            0 => vec![text_widget(&mut rng, id(), x, y)],
            1 => vec![icon_widget(&mut rng, id(), x, y)],
            _ => {
                let left = text_widget(&mut rng, id(), x, y);
                let rx = rng.random_range(SPLIT_RIGHT_X);
                let ry = top + rng.random_range(6..=14);
                vec![left, icon_widget(&mut rng, id(), rx, ry)]
            }
        };
        rows.push(ElementSpec::Container(ContainerSpec {
            component_type: "android.widget.LinearLayout".into(),
            resource_id: format!("id/row{r}"),
            bounds: BoundingBox::new(0, top, SCREEN_WIDTH, ROW_HEIGHT),
            children: children.into_iter().map(ElementSpec::Widget).collect(),
        }));
    }
    LayoutSpec {
        width: SCREEN_WIDTH,
        height: SCREEN_HEIGHT,
        background: *BACKGROUNDS.choose(&mut rng).unwrap(),
        activity: format!("org.example.synth.Screen{index:03}Activity"),
        window_name: format!("Screen{index:03}"),
        window_type: "FRAGMENT".into(),
        root: ContainerSpec {
            component_type: "android.widget.FrameLayout".into(),
            resource_id: "id/content".into(),
            bounds: BoundingBox::new(0, 0, SCREEN_WIDTH, SCREEN_HEIGHT),
            children: rows,
        },
    }
}

fn other<T: Copy + PartialEq>(rng: &mut impl Rng, pool: &[T], not: T) -> T {
    let rest: Vec<T> = pool.iter().copied().filter(|v| *v != not).collect();
    *rest.choose(rng).unwrap()
}

/// Icon shape that disagrees with `shape` on the most pixels.
pub fn most_different_shape(shape: IconShape, size: u32) -> IconShape {
    IconShape::ALL
        .into_iter()
        .filter(|s| *s != shape)
        .max_by_key(|s| (shape.disagreement(*s, size), std::cmp::Reverse(*s as u8)))
        .unwrap()
}

/// Candidate mutations of `specific` on `layout`, in a seeded order. Each
/// candidate still has to pass [`apply_mutation`] validation.
fn candidates(layout: &LayoutSpec, specific: ChangeType, rng: &mut impl Rng) -> Vec<MutationSpec> {
    use ChangeType::*;
    let mut out = Vec::new();
    let mk = |w: &WidgetSpec, params| MutationSpec {
        specific,
        target: w.resource_id.clone(),
        params,
    };
    for w in layout.widgets() {
        let d = rng.random_range(8..=30);
        let sign = if rng.random_bool(0.5) { 1 } else { -1 };
        match (specific, &w.text, &w.icon) {
            (TextContent, Some(t), _) => {
                let n = t.content.chars().count();
                let same_len: Vec<&str> = WORDS
                    .iter()
                    .copied()
                    .filter(|s| s.chars().count() == n && !s.eq_ignore_ascii_case(&t.content))
                    .collect();
                if let Some(s) = same_len.choose(rng) {
                    out.push(mk(w, MutationParams::Text(s.to_string())));
                }
            }
            (FontStyle, Some(_), _) => out.push(mk(w, MutationParams::ToggleBold)),
            (FontColor, Some(t), _) => {
                out.push(mk(w, MutationParams::TextColor(other(rng, &INKS, t.color))))
            }
            (ImageColor, _, Some(i)) => {
                out.push(mk(w, MutationParams::IconColor(other(rng, &INKS, i.color))))
            }
            (ImageChange, _, Some(i)) => out.push(mk(
                w,
                MutationParams::IconShape(most_different_shape(i.shape, i.size)),
            )),
            (HorizontalTranslation | VerticalTranslation, _, _) => {
                out.push(mk(w, MutationParams::Shift(sign * d)));
                out.push(mk(w, MutationParams::Shift(-sign * d)));
            }
            (HorizontalSize | VerticalSize, _, _) => out.push(mk(w, MutationParams::Grow(d))),
            (ComponentType, Some(_), _) => out.push(mk(
                w,
                MutationParams::Retype(other(rng, &TEXT_TYPES, w.component_type.as_str()).into()),
            )),
            (ComponentType, _, Some(_)) => out.push(mk(
                w,
                MutationParams::Retype(other(rng, &ICON_TYPES, w.component_type.as_str()).into()),
            )),
            (Removed, _, _) => out.push(mk(w, MutationParams::Remove)),
            _ => {}
        }
    }
    if specific == Added {
        for c in layout.containers() {
            let [ElementSpec::Widget(only)] = c.children.as_slice() else {
                continue;
            };
            let top = c.bounds.y;
            let y = top + rng.random_range(6..=14);
            let x = FREE_SLOT_X + rng.random_range(0..=20);
            let mut w = if only.text.is_some() {
                icon_widget(rng, "id/added".into(), x, y)
            } else {
                let mut t = text_widget(rng, "id/added".into(), x, y);
                // keep the word short enough for the free slot
                let word = *WORDS[..12].choose(rng).unwrap();
                let (bw, bh) = text_box(word.chars().count());
                t.bounds = BoundingBox::new(x, y, bw, bh);
                t.text.as_mut().unwrap().content = word.into();
                t
            };
            w.resource_id = "id/added".into();
            out.push(MutationSpec {
                specific,
                target: c.resource_id.clone(),
                params: MutationParams::Add(w),
            });
        }
    }
    out.shuffle(rng);
    out
}

/// First applicable mutation of `specific` for screen `index`.
pub fn pick_mutation(
    layout: &LayoutSpec,
    specific: ChangeType,
    seed: u64,
    index: usize,
) -> Result<(MutationSpec, LayoutSpec, GroundTruthChange)> {
    let mut rng = rng_for(seed, index, 1);
    for m in candidates(layout, specific, &mut rng) {
        if let Ok((mutated, truth)) = apply_mutation(layout, &m) {
            return Ok((m, mutated, truth));
        }
    }
    Err(Error::Mutation(format!(
        "no applicable {specific} mutation for screen {index}"
    )))
}

/// One generated pair: old and new share capture index and thus pair id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub index: usize,
    pub pair_id: String,
    pub mutation: MutationSpec,
    pub truth: GroundTruthChange,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub seed: u64,
    pub entries: Vec<CorpusEntry>,
}

/// Generates `per_type` pairs for every type in `types` and writes them as
/// `old/`, `new/` capture sets plus `truth/<pair id>.truth.jsonl` and a
/// `manifest.json`. Output depends only on the arguments.
pub fn generate_corpus(
    out_dir: impl AsRef<Path>,
    seed: u64,
    types: &[ChangeType],
    per_type: usize,
) -> Result<CorpusManifest> {
    let out = out_dir.as_ref();
    let (old_dir, new_dir, truth_dir) = (out.join("old"), out.join("new"), out.join("truth"));
    for d in [&old_dir, &new_dir, &truth_dir] {
        fs::create_dir_all(d).map_err(|e| Error::io(d, e))?;
    }
    let jobs: Vec<(usize, ChangeType)> = types
        .iter()
        .flat_map(|&t| std::iter::repeat_n(t, per_type))
        .enumerate()
        .collect();
    let entries = jobs
        .par_iter()
        .map(|&(index, specific)| {
            let layout = generate_layout(seed, index);
            let (mutation, mutated, truth) = pick_mutation(&layout, specific, seed, index)?;
            let old = render_screen(&layout, index)?;
            let new = render_screen(&mutated, index)?;
            write_capture(&old_dir, &old)?;
            write_capture(&new_dir, &new)?;
            let id = pair_id(&old.source_id, &new.source_id);
            write_jsonl(
                truth_dir.join(format!("{id}.truth.jsonl")),
                std::slice::from_ref(&truth),
            )?;
            Ok(CorpusEntry {
                index,
                pair_id: id,
                mutation,
                truth,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = CorpusManifest { seed, entries };
    let path = out.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)?).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::{color_histogram, crop, histogram_similarity};

    #[test]
    fn layouts_are_valid_and_seeded() {
        for i in 0..50 {
            let l = generate_layout(3, i);
            render_screen(&l, i).unwrap();
            assert_eq!(l, generate_layout(3, i));
            assert_eq!(l.root.children.len(), ROWS as usize);
        }
        assert_ne!(generate_layout(3, 0), generate_layout(4, 0));
        assert_ne!(generate_layout(3, 0), generate_layout(3, 1));
    }

    #[test]
    fn every_type_has_a_mutation_on_every_layout() {
        for i in 0..40 {
            let l = generate_layout(9, i);
            for t in ChangeType::ALL {
                let (m, _, truth) = pick_mutation(&l, t, 9, i).unwrap();
                assert_eq!(m.specific, t);
                assert_eq!(truth.specific, t);
            }
        }
    }

    #[test]
    fn word_list_recolor_stays_below_font_threshold() {
        // a recolor swaps the ink bins, so similarity is 1 - ink fraction
        for word in WORDS {
            let (w, h) = text_box(word.chars().count());
            let spec = |color| WidgetSpec {
                component_type: "t".into(),
                resource_id: "id/t".into(),
                bounds: BoundingBox::new(0, 0, w, h),
                fill: Some(FILLS[0]),
                text: Some(TextSpec {
                    content: word.into(),
                    color,
                    bold: false,
                }),
                icon: None,
            };
            let render = |color| {
                let l = LayoutSpec {
                    width: w,
                    height: h,
                    background: [0, 0, 0],
                    activity: String::new(),
                    window_name: String::new(),
                    window_type: String::new(),
                    root: ContainerSpec {
                        component_type: "c".into(),
                        resource_id: "id/c".into(),
                        bounds: BoundingBox::new(0, 0, w, h),
                        children: vec![ElementSpec::Widget(spec(color))],
                    },
                };
                let cap = render_screen(&l, 0).unwrap();
                color_histogram(&crop(&cap.image, &BoundingBox::new(0, 0, w, h)).unwrap())
            };
            let sim = histogram_similarity(&render(INKS[0]), &render(INKS[1])).unwrap();
            assert!(sim < 0.80, "{word}: {sim}");
        }
    }

    #[test]
    fn image_swaps_disagree_on_a_third_of_the_crop() {
        let (w, h) = icon_box(ICON_SIZE);
        for s in IconShape::ALL {
            let t = most_different_shape(s, ICON_SIZE);
            assert!(s.disagreement(t, ICON_SIZE) as f64 > 0.3 * (w * h) as f64, "{s:?}");
        }
    }

    #[test]
    fn corpus_is_reproducible() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let types = [ChangeType::Added, ChangeType::FontColor];
        let ma = generate_corpus(a.path(), 5, &types, 2).unwrap();
        let mb = generate_corpus(b.path(), 5, &types, 2).unwrap();
        assert_eq!(ma, mb);
        assert_eq!(ma.entries.len(), 4);
        for sub in ["old", "new", "truth"] {
            let mut names: Vec<_> = fs::read_dir(a.path().join(sub))
                .unwrap()
                .map(|e| e.unwrap().file_name())
                .collect();
            names.sort();
            for n in &names {
                assert_eq!(
                    fs::read(a.path().join(sub).join(n)).unwrap(),
                    fs::read(b.path().join(sub).join(n)).unwrap()
                );
            }
            assert_eq!(names.len(), if sub == "truth" { 4 } else { 12 });
        }
        let truth = crate::metrics::read_jsonl(a.path().join("truth/000_000.truth.jsonl")).unwrap();
        assert_eq!(truth, vec![ma.entries[0].truth.clone()]);
    }
}
