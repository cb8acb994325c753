//! End-to-end comparison of two capture sets: filter, match screens,
//! detect changes per pair, then write reports, an index and `run.json`.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{analyze_pair, DetectConfig};
use crate::error::{Error, Result};
use crate::imaging::{PerceptualConfig, DEFAULT_AREA_CAP};
use crate::ingest::load_capture_set;
use crate::metrics::{write_jsonl, GroundTruthChange};
use crate::model::ScreenPair;
use crate::report::{build_report, index_html, render_report, IndexEntry};
use crate::screen_match::{filter_screens, match_screens, MatchConfig};

/// Every tunable of a run, flat so it maps one-to-one onto a
/// `key = value` config file. Missing keys take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Layout threshold in pixels.
    pub lc: f64,
    /// Font color threshold as a histogram similarity in `[0, 1]`.
    pub fc: f64,
    /// Image threshold as a binary diff percentage in `[0, 100]`.
    pub ic: f64,
    pub swapped_image_rule: bool,
    /// Component match cutoff as a fraction of `width + height`.
    pub gamma_cutoff_ratio: f64,
    /// Screen pairs costlier than this (in `[0, 2]`) stay unmatched.
    pub cost_cutoff: f64,
    pub sensitivity: f64,
    pub blur_radius: u32,
    pub area_cap: u64,
    /// Fraction of a component's area that diff regions must cover before
    /// its pixels are analyzed.
    pub candidate_overlap: f64,
    pub output_dir: PathBuf,
    pub include_unmatched: bool,
    /// Worker threads; 0 uses every available core.
    pub parallelism: usize,
    /// Fixed report timestamp; empty means the current time.
    pub timestamp: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        let d = DetectConfig::default();
        let m = MatchConfig::default();
        RunConfig {
            lc: d.lc,
            fc: d.fc,
            ic: d.ic,
            swapped_image_rule: d.swapped_image_rule,
            gamma_cutoff_ratio: d.gamma_cutoff_ratio,
            cost_cutoff: m.cost_cutoff,
            sensitivity: d.perceptual.sensitivity,
            blur_radius: d.perceptual.blur_radius,
            area_cap: DEFAULT_AREA_CAP,
            candidate_overlap: d.candidate_overlap,
            output_dir: PathBuf::from("guidiff-report"),
            include_unmatched: false,
            parallelism: 0,
            timestamp: String::new(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Config(what.to_string()))
            }
        };
        check(self.lc >= 0.0, "lc must be a non-negative pixel count")?;
        check((0.0..=1.0).contains(&self.fc), "fc must lie in [0, 1]")?;
        check((0.0..=100.0).contains(&self.ic), "ic must lie in [0, 100]")?;
        check(self.gamma_cutoff_ratio >= 0.0, "gamma_cutoff_ratio must be non-negative")?;
        check(self.cost_cutoff >= 0.0, "cost_cutoff must be non-negative")?;
        check((0.0..=1.0).contains(&self.sensitivity), "sensitivity must lie in [0, 1]")?;
        check(self.blur_radius <= 16, "blur_radius must be at most 16")?;
        check(self.area_cap > 0, "area_cap must be positive")?;
        check(
            (0.0..=1.0).contains(&self.candidate_overlap),
            "candidate_overlap must lie in [0, 1]",
        )
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config always serializes")
    }

    pub fn detect_config(&self) -> DetectConfig {
        DetectConfig {
            lc: self.lc,
            fc: self.fc,
            ic: self.ic,
            swapped_image_rule: self.swapped_image_rule,
            gamma_cutoff_ratio: self.gamma_cutoff_ratio,
            candidate_overlap: self.candidate_overlap,
            perceptual: PerceptualConfig {
                sensitivity: self.sensitivity,
                blur_radius: self.blur_radius,
            },
        }
    }

    pub fn match_config(&self) -> MatchConfig {
        MatchConfig {
            cost_cutoff: self.cost_cutoff,
            area_cap: self.area_cap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub pair_id: String,
    pub assignment_cost: f64,
    pub change_count: usize,
    pub summary: String,
    pub error: Option<String>,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub screens_old: usize,
    pub screens_new: usize,
    pub kept_old: usize,
    pub kept_new: usize,
    pub pairs_analyzed: usize,
    pub pairs_failed: usize,
    pub changes_total: usize,
    pub unmatched_old: Vec<String>,
    pub unmatched_new: Vec<String>,
    pub warnings: Vec<String>,
    pub report_index: PathBuf,
    pub generated_at: String,
    pub total_millis: f64,
    pub pairs: Vec<PairOutcome>,
    pub config: RunConfig,
}

fn now_rfc3339() -> String {
    humantime::format_rfc3339_seconds(SystemTime::now()).to_string()
}

fn analyze_one(
    pair: &ScreenPair,
    config: &RunConfig,
    generated_at: &str,
) -> Result<(usize, String)> {
    let analysis = analyze_pair(pair, &config.detect_config())?;
    let report = build_report(pair, &analysis, generated_at);
    render_report(&report, &config.output_dir)?;
    let records: Vec<GroundTruthChange> = analysis.changes.iter().map(Into::into).collect();
    write_jsonl(
        config.output_dir.join(&report.pair_id).join("changes.jsonl"),
        &records,
    )?;
    Ok((analysis.changes.len(), report.summary))
}

/// Runs the whole comparison. Capture-set loading errors abort the run;
/// a failing pair is logged, listed in the index and skipped.
pub fn run(old_dir: impl AsRef<Path>, new_dir: impl AsRef<Path>, config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let (old_dir, new_dir) = (old_dir.as_ref(), new_dir.as_ref());
    pool.install(|| run_in_pool(old_dir, new_dir, config))
}

fn run_in_pool(old_dir: &Path, new_dir: &Path, config: &RunConfig) -> Result<RunSummary> {
    let start = Instant::now();
    let generated_at = if config.timestamp.is_empty() {
        now_rfc3339()
    } else {
        config.timestamp.clone()
    };
    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let old_all = load_capture_set(old_dir, "old")?;
    let new_all = load_capture_set(new_dir, "new")?;
    let mut warnings = old_all.warnings.clone();
    warnings.extend(new_all.warnings.iter().cloned());
    let (old, new) = (filter_screens(&old_all), filter_screens(&new_all));
    info!(
        "kept {}/{} old and {}/{} new screens",
        old.len(),
        old_all.len(),
        new.len(),
        new_all.len()
    );
    let matching = match_screens(&old, &new, &config.match_config())?;

    let pairs: Vec<PairOutcome> = matching
        .pairs
        .par_iter()
        .map(|pair| {
            let t = Instant::now();
            let result = analyze_one(pair, config, &generated_at);
            let millis = t.elapsed().as_secs_f64() * 1000.0;
            let pair_id = pair.pair_id();
            match result {
                Ok((change_count, summary)) => PairOutcome {
                    pair_id,
                    assignment_cost: pair.assignment_cost,
                    change_count,
                    summary,
                    error: None,
                    millis,
                },
                Err(e) => {
                    warn!("pair {pair_id}: {e}");
                    PairOutcome {
                        pair_id,
                        assignment_cost: pair.assignment_cost,
                        change_count: 0,
                        summary: String::new(),
                        error: Some(e.to_string()),
                        millis,
                    }
                }
            }
        })
        .collect();

    let ids = |v: &[std::sync::Arc<crate::model::ScreenCapture>]| -> Vec<String> {
        v.iter().map(|c| c.source_id.clone()).collect()
    };
    let unmatched_old = ids(&matching.unmatched_old);
    let unmatched_new = ids(&matching.unmatched_new);
    let entries: Vec<IndexEntry> = pairs
        .iter()
        .map(|p| IndexEntry {
            pair_id: p.pair_id.clone(),
            change_count: p.change_count,
            summary: p.summary.clone(),
            error: p.error.clone(),
        })
        .collect();
    let index = out.join("index.html");
    let html = index_html(
        &entries,
        config
            .include_unmatched
            .then_some((unmatched_old.as_slice(), unmatched_new.as_slice())),
        &generated_at,
    );
    fs::write(&index, html).map_err(|e| Error::io(&index, e))?;

    let summary = RunSummary {
        screens_old: old_all.len(),
        screens_new: new_all.len(),
        kept_old: old.len(),
        kept_new: new.len(),
        pairs_analyzed: pairs.iter().filter(|p| p.error.is_none()).count(),
        pairs_failed: pairs.iter().filter(|p| p.error.is_some()).count(),
        changes_total: pairs.iter().map(|p| p.change_count).sum(),
        unmatched_old,
        unmatched_new,
        warnings,
        report_index: index,
        generated_at,
        total_millis: start.elapsed().as_secs_f64() * 1000.0,
        pairs,
        config: config.clone(),
    };
    let run_json = out.join("run.json");
    fs::write(&run_json, serde_json::to_string_pretty(&summary)?)
        .map_err(|e| Error::io(&run_json, e))?;
    Ok(summary)
}
