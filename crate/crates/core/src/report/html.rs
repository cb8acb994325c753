use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use image::RgbImage;
use serde::Serialize;

use super::annotate::{annotate_screens, AnnotatedScreens};
use super::subtree::{common_subtree, CommonNode};
use crate::detect::{crop_component, GuiChange, PairAnalysis};
use crate::error::{Error, Result};
use crate::model::{ScreenCapture, ScreenPair};
use crate::summary::{characterize, describe_change, generate_summary, SummaryCharacteristics};

#[derive(Debug, Clone)]
pub struct ReportEntry {
    pub change: GuiChange,
    pub description: String,
    pub old_crop: Option<RgbImage>,
    pub new_crop: Option<RgbImage>,
}

/// Everything shown on one pair's report page.
#[derive(Debug, Clone)]
pub struct ChangeReport {
    pub pair_id: String,
    pub old_source: String,
    pub new_source: String,
    pub activity: String,
    pub assignment_cost: f64,
    pub summary: String,
    pub characteristics: SummaryCharacteristics,
    pub entries: Vec<ReportEntry>,
    pub screens: AnnotatedScreens,
    pub common_subtree: Option<CommonNode>,
    pub generated_at: String,
}

fn side_crop(capture: &ScreenCapture, c: Option<&crate::model::GuiComponent>) -> Option<RgbImage> {
    c.and_then(|c| crop_component(capture, c).ok())
}

pub fn build_report(pair: &ScreenPair, analysis: &PairAnalysis, generated_at: &str) -> ChangeReport {
    let characteristics = characterize(&analysis.changes, &analysis.full_diff);
    let entries = analysis
        .changes
        .iter()
        .map(|c| ReportEntry {
            change: c.clone(),
            description: describe_change(c),
            old_crop: side_crop(&pair.old, c.old_component.as_ref()),
            new_crop: side_crop(&pair.new, c.new_component.as_ref()),
        })
        .collect();
    ChangeReport {
        pair_id: pair.pair_id(),
        old_source: pair.old.source_id.clone(),
        new_source: pair.new.source_id.clone(),
        activity: pair.old.activity.clone(),
        assignment_cost: pair.assignment_cost,
        summary: generate_summary(&characteristics),
        characteristics,
        entries,
        screens: annotate_screens(pair, &analysis.changes),
        common_subtree: common_subtree(&pair.old.hierarchy, &pair.new.hierarchy),
        generated_at: generated_at.to_string(),
    }
}

/// Escapes text for use in element content and quoted attributes.
pub fn escape(s: &str) -> String {
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

const STYLE: &str = "body{font-family:sans-serif;margin:1.5em;color:#222}\
.screens{display:flex;gap:1em;align-items:flex-start}\
figure{margin:0}figure img{max-width:320px;border:1px solid #999}\
.crops{display:flex;gap:1em;margin:.5em 0}.crops img{border:1px solid #999}\
summary{cursor:pointer}.meta{color:#555}\
table{border-collapse:collapse}td,th{border:1px solid #bbb;padding:.3em .6em}";

fn head(out: &mut String, title: &str) {
    out.push_str("<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\"/>\n");
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, "<style>{STYLE}</style>\n</head>\n<body>");
}

fn tree(out: &mut String, node: &CommonNode, depth: usize) {
    let pad = "  ".repeat(depth);
    let _ = write!(
        out,
        "{pad}<li>{} <span class=\"meta\">(old #{}, new #{})</span>",
        escape(node.label()),
        node.old_index,
        node.new_index
    );
    if node.children.is_empty() {
        out.push_str("</li>\n");
        return;
    }
    let _ = writeln!(out, "\n{pad}<ul>");
    for c in &node.children {
        tree(out, c, depth + 1);
    }
    let _ = writeln!(out, "{pad}</ul></li>");
}

fn figure(out: &mut String, src: &str, caption: &str) {
    let _ = writeln!(
        out,
        "<figure><img src=\"{src}\" alt=\"{c}\"/><figcaption>{c}</figcaption></figure>",
        c = escape(caption)
    );
}

/// Page markup for a report whose assets are written under `assets/`.
pub fn report_html(report: &ChangeReport) -> String {
    let mut out = String::new();
    head(&mut out, &format!("GUI changes for pair {}", report.pair_id));
    let _ = writeln!(out, "<h1>GUI changes for pair {}</h1>", escape(&report.pair_id));
    let _ = writeln!(
        out,
        "<p class=\"meta\">Previous capture {} and subsequent capture {} of {}; assignment cost {:.4}; generated {}.</p>",
        escape(&report.old_source),
        escape(&report.new_source),
        escape(&report.activity),
        report.assignment_cost,
        escape(&report.generated_at)
    );

    out.push_str("<section id=\"screens\">\n<h2>Screens</h2>\n<div class=\"screens\">\n");
    figure(&mut out, "assets/old.png", "Previous version");
    figure(&mut out, "assets/highlight.png", "Changes highlighted on the previous version");
    figure(&mut out, "assets/new.png", "Subsequent version");
    out.push_str("</div>\n</section>\n");

    let _ = writeln!(
        out,
        "<section id=\"summary\">\n<h2>Summary</h2>\n<p class=\"summary\">{}</p>\n</section>",
        escape(&report.summary)
    );

    let _ = writeln!(
        out,
        "<section id=\"changes\">\n<h2>Changes ({})</h2>",
        report.entries.len()
    );
    if report.entries.is_empty() {
        out.push_str("<p>None.</p>\n");
    } else {
        out.push_str("<ol class=\"changes\">\n");
        for (k, e) in report.entries.iter().enumerate() {
            let _ = writeln!(
                out,
                "<li><details class=\"change\" data-type=\"{}\">\n<summary>{}: {}</summary>\n<div class=\"crops\">",
                e.change.specific,
                e.change.category.name(),
                escape(&e.description)
            );
            if e.old_crop.is_some() {
                figure(&mut out, &format!("assets/change-{k}-old.png"), "Previous");
            }
            if e.new_crop.is_some() {
                figure(&mut out, &format!("assets/change-{k}-new.png"), "Subsequent");
            }
            let _ = writeln!(
                out,
                "</div>\n<p class=\"meta\">{}</p>\n</details></li>",
                escape(&e.change.detail)
            );
        }
        out.push_str("</ol>\n");
    }
    out.push_str("</section>\n");

    out.push_str("<section id=\"hierarchy\">\n<h2>Common GUI hierarchy</h2>\n");
    match &report.common_subtree {
        Some(root) => {
            out.push_str("<ul class=\"tree\">\n");
            tree(&mut out, root, 0);
            out.push_str("</ul>\n");
        }
        None => out.push_str("<p>The hierarchies share no common root.</p>\n"),
    }
    out.push_str("</section>\n</body>\n</html>\n");
    out
}

fn save_png(img: &RgbImage, path: &Path) -> Result<()> {
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })
}

/// Writes `<out_dir>/<pair id>/report.html` and its `assets/` images;
/// returns the report path.
pub fn render_report(report: &ChangeReport, out_dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = out_dir.as_ref().join(&report.pair_id);
    let assets = dir.join("assets");
    fs::create_dir_all(&assets).map_err(|e| Error::io(&assets, e))?;
    save_png(&report.screens.old, &assets.join("old.png"))?;
    save_png(&report.screens.highlight, &assets.join("highlight.png"))?;
    save_png(&report.screens.new, &assets.join("new.png"))?;
    for (k, e) in report.entries.iter().enumerate() {
        if let Some(c) = &e.old_crop {
            save_png(c, &assets.join(format!("change-{k}-old.png")))?;
        }
        if let Some(c) = &e.new_crop {
            save_png(c, &assets.join(format!("change-{k}-new.png")))?;
        }
    }
    let path = dir.join("report.html");
    fs::write(&path, report_html(report)).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// One row of the run index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexEntry {
    pub pair_id: String,
    pub change_count: usize,
    pub summary: String,
    /// Set when the pair's analysis failed; such pairs have no report.
    pub error: Option<String>,
}

pub fn index_html(
    entries: &[IndexEntry],
    unmatched: Option<(&[String], &[String])>,
    generated_at: &str,
) -> String {
    let mut out = String::new();
    head(&mut out, "GUI change reports");
    out.push_str("<h1>GUI change reports</h1>\n");
    let _ = writeln!(
        out,
        "<p class=\"meta\">{} screen pairs; generated {}.</p>",
        entries.len(),
        escape(generated_at)
    );
    out.push_str("<table>\n<tr><th>Pair</th><th>Changes</th><th>Summary</th></tr>\n");
    for e in entries {
        match &e.error {
            None => {
                let _ = writeln!(
                    out,
                    "<tr><td><a href=\"{id}/report.html\">{id}</a></td><td>{}</td><td>{}</td></tr>",
                    e.change_count,
                    escape(&e.summary),
                    id = escape(&e.pair_id)
                );
            }
            Some(err) => {
                let _ = writeln!(
                    out,
                    "<tr><td>{}</td><td>-</td><td>Analysis failed: {}</td></tr>",
                    escape(&e.pair_id),
                    escape(err)
                );
            }
        }
    }
    out.push_str("</table>\n");
    if let Some((old, new)) = unmatched {
        out.push_str("<h2>Unmatched screens</h2>\n");
        for (label, ids) in [("Previous version", old), ("Subsequent version", new)] {
            let _ = writeln!(out, "<h3>{label} ({})</h3>", ids.len());
            if ids.is_empty() {
                out.push_str("<p>None.</p>\n");
            } else {
                out.push_str("<ul>\n");
                for id in ids {
                    let _ = writeln!(out, "<li>{}</li>", escape(id));
                }
                out.push_str("</ul>\n");
            }
        }
    }
    out.push_str("</body>\n</html>\n");
    out
}
