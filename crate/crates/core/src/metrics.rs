//! Evaluation formulas and scoring of reported changes against ground truth.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detect::{ChangeType, GuiChange};
use crate::error::{Error, Result};
use crate::model::BoundingBox;

/// One change as recorded in `.truth.jsonl` / `changes.jsonl` files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruthChange {
    pub specific: ChangeType,
    pub bounds_old: Option<BoundingBox>,
    pub bounds_new: Option<BoundingBox>,
}

impl From<&GuiChange> for GroundTruthChange {
    fn from(c: &GuiChange) -> Self {
        GroundTruthChange {
            specific: c.specific,
            bounds_old: c.old_bounds(),
            bounds_new: c.new_bounds(),
        }
    }
}

impl GroundTruthChange {
    /// IoU over the sides both records carry; the weaker side decides.
    /// Zero when they share no side.
    pub fn iou(&self, other: &GroundTruthChange) -> f64 {
        let sides = [
            (self.bounds_old, other.bounds_old),
            (self.bounds_new, other.bounds_new),
        ];
        sides
            .iter()
            .filter_map(|(a, b)| Some(a.as_ref()?.overlap(b.as_ref()?).iou))
            .reduce(f64::min)
            .unwrap_or(0.0)
    }
}

pub fn write_jsonl(path: impl AsRef<Path>, records: &[GroundTruthChange]) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Vec<GroundTruthChange>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

/// Percentage of screens filtered out: `100 * (total - kept) / total`.
pub fn fs_metric(total: usize, kept: usize) -> Result<f64> {
    if total == 0 {
        return Err(Error::Config("total screen count is zero".into()));
    }
    if kept > total {
        return Err(Error::Config(format!("kept {kept} exceeds total {total}")));
    }
    Ok(100.0 * (total - kept) as f64 / total as f64)
}

/// `(Tp / (Tp + Fp), Tp / (Tp + Fn))`, each 1.0 when its denominator is 0.
pub fn precision_recall(tp: usize, fp: usize, fn_: usize) -> (f64, f64) {
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            1.0
        } else {
            num as f64 / den as f64
        }
    };
    (ratio(tp, tp + fp), ratio(tp, tp + fn_))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreCounts {
    pub tp_detect: usize,
    pub fp_detect: usize,
    pub tp_classify: usize,
    pub fp_classify: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl std::ops::AddAssign for ScoreCounts {
    fn add_assign(&mut self, o: Self) {
        self.tp_detect += o.tp_detect;
        self.fp_detect += o.fp_detect;
        self.tp_classify += o.tp_classify;
        self.fp_classify += o.fp_classify;
        self.fn_ += o.fn_;
    }
}

pub const DEFAULT_IOU_MIN: f64 = 0.5;

/// Greedy highest-IoU one-to-one correspondence between reported and truth
/// records. A correspondence with IoU at least `iou_min` is a detection; a
/// detection with the right specific type is also a classification.
/// Among equal IoUs, same-type pairs are taken first.
pub fn score_against_truth(
    reported: &[GroundTruthChange],
    truth: &[GroundTruthChange],
    iou_min: f64,
) -> ScoreCounts {
    let mut candidates = Vec::new();
    for (i, r) in reported.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            let iou = r.iou(t);
            if iou >= iou_min && iou > 0.0 {
                candidates.push((iou, r.specific == t.specific, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(b.1.cmp(&a.1))
            .then(a.2.cmp(&b.2))
            .then(a.3.cmp(&b.3))
    });
    let mut rep_used = vec![false; reported.len()];
    let mut truth_used = vec![false; truth.len()];
    let mut counts = ScoreCounts::default();
    for (_, same, i, j) in candidates {
        if rep_used[i] || truth_used[j] {
            continue;
        }
        rep_used[i] = true;
        truth_used[j] = true;
        counts.tp_detect += 1;
        counts.tp_classify += same as usize;
    }
    counts.fp_detect = reported.len() - counts.tp_detect;
    counts.fp_classify = reported.len() - counts.tp_classify;
    counts.fn_ = truth.len() - counts.tp_detect;
    counts
}

/// [`score_against_truth`] for detector output.
pub fn score_changes(
    reported: &[GuiChange],
    truth: &[GroundTruthChange],
    iou_min: f64,
) -> ScoreCounts {
    let reported: Vec<GroundTruthChange> = reported.iter().map(Into::into).collect();
    score_against_truth(&reported, truth, iou_min)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricCounts {
    pub ts: usize,
    pub kept: usize,
    pub matched_pairs: usize,
    pub correct_pairs: usize,
    #[serde(flatten)]
    pub changes: ScoreCounts,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    #[serde(rename = "FS")]
    pub fs: f64,
    #[serde(rename = "MP")]
    pub mp: f64,
    #[serde(rename = "DP")]
    pub dp: f64,
    #[serde(rename = "CP")]
    pub cp: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub counts: MetricCounts,
}

impl MetricReport {
    pub fn from_counts(counts: MetricCounts) -> Self {
        let c = &counts.changes;
        let (dp, r) = precision_recall(c.tp_detect, c.fp_detect, c.fn_);
        let (cp, _) = precision_recall(c.tp_classify, c.fp_classify, 0);
        let fs = fs_metric(counts.ts, counts.kept).unwrap_or(0.0);
        let (mp, _) = precision_recall(
            counts.correct_pairs,
            counts.matched_pairs - counts.correct_pairs,
            0,
        );
        MetricReport {
            fs,
            mp,
            dp,
            cp,
            r,
            counts,
        }
    }
}

/// The parts of a run's `run.json` that scoring needs.
#[derive(Debug, Deserialize)]
struct RunCounts {
    screens_old: usize,
    kept_old: usize,
    pairs: Vec<RunPair>,
}

#[derive(Debug, Deserialize)]
struct RunPair {
    pair_id: String,
}

const TRUTH_SUFFIX: &str = ".truth.jsonl";

/// Scores a run output directory against a directory of
/// `<pair id>.truth.jsonl` files.
///
/// Each truth file is compared with `<reported>/<pair id>/changes.jsonl`
/// (absent means nothing was reported); reported pairs without a truth file
/// count entirely as false positives. When `<reported>/run.json` exists it
/// supplies the screen counts, and a matched pair is correct when a truth
/// file exists for its id.
pub fn score_directory(
    reported: impl AsRef<Path>,
    truth: impl AsRef<Path>,
    iou_min: f64,
) -> Result<MetricReport> {
    let (reported, truth) = (reported.as_ref(), truth.as_ref());
    let mut truth_ids = Vec::new();
    for entry in fs::read_dir(truth).map_err(|e| Error::io(truth, e))? {
        let name = entry.map_err(|e| Error::io(truth, e))?.file_name();
        if let Some(id) = name.to_string_lossy().strip_suffix(TRUTH_SUFFIX) {
            truth_ids.push(id.to_string());
        }
    }
    truth_ids.sort();

    let read_reported = |id: &str| -> Result<Vec<GroundTruthChange>> {
        let p = reported.join(id).join("changes.jsonl");
        if p.is_file() {
            read_jsonl(&p)
        } else {
            Ok(Vec::new())
        }
    };
    let mut changes = ScoreCounts::default();
    for id in &truth_ids {
        let t = read_jsonl(truth.join(format!("{id}{TRUTH_SUFFIX}")))?;
        changes += score_against_truth(&read_reported(id)?, &t, iou_min);
    }
    let mut reported_ids = Vec::new();
    for entry in fs::read_dir(reported).map_err(|e| Error::io(reported, e))? {
        let entry = entry.map_err(|e| Error::io(reported, e))?;
        if entry.path().join("changes.jsonl").is_file() {
            reported_ids.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    reported_ids.sort();
    for id in reported_ids.iter().filter(|id| truth_ids.binary_search(id).is_err()) {
        let extra = read_reported(id)?.len();
        changes.fp_detect += extra;
        changes.fp_classify += extra;
    }

    let run_json = reported.join("run.json");
    let mut counts = MetricCounts {
        changes,
        ..Default::default()
    };
    if run_json.is_file() {
        let text = fs::read_to_string(&run_json).map_err(|e| Error::io(&run_json, e))?;
        let run: RunCounts = serde_json::from_str(&text)?;
        counts.ts = run.screens_old;
        counts.kept = run.kept_old;
        counts.matched_pairs = run.pairs.len();
        counts.correct_pairs = run
            .pairs
            .iter()
            .filter(|p| truth_ids.binary_search(&p.pair_id).is_ok())
            .count();
    } else {
        counts.matched_pairs = reported_ids.len();
        counts.correct_pairs = reported_ids
            .iter()
            .filter(|id| truth_ids.binary_search(id).is_ok())
            .count();
    }
    Ok(MetricReport::from_counts(counts))
}
