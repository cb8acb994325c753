//! Redundant-screen filtering and optimal screen correspondence between two
//! versions.
//!
//! The cost of pairing two screens is the normalized color distance of the
//! screenshots plus the pixel disagreement of their leaf-bounding-box
//! silhouettes, so it lies in `[0, 2]`.

use std::collections::HashSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assignment::min_cost_assignment;
use crate::error::Result;
use crate::imaging::{bbox_diff, bbox_silhouette, color_distance, BinaryRaster, DEFAULT_AREA_CAP};
use crate::ingest::CaptureSet;
use crate::model::{ScreenCapture, ScreenPair};

/// Keeps the first capture of every distinct (activity, window name,
/// window type) triple, preserving order.
pub fn filter_screens(set: &CaptureSet) -> CaptureSet {
    let mut seen = HashSet::new();
    let captures = set
        .captures
        .iter()
        .filter(|c| seen.insert(c.screen_key()))
        .cloned()
        .collect();
    CaptureSet {
        label: set.label.clone(),
        captures,
        warnings: set.warnings.clone(),
    }
}

pub fn screen_cost(s1: &ScreenCapture, s2: &ScreenCapture, area_cap: u64) -> Result<f64> {
    let cd = color_distance(&s1.image, &s2.image)?;
    let bd = bbox_diff(&bbox_silhouette(s1, area_cap), &bbox_silhouette(s2, area_cap))?;
    Ok(cd + bd)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    /// Pairs costlier than this are reported unmatched. `f64::INFINITY`
    /// forces a complete assignment.
    pub cost_cutoff: f64,
    pub area_cap: u64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            cost_cutoff: 1.0,
            area_cap: DEFAULT_AREA_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatchingResult {
    /// Ordered by old capture position.
    pub pairs: Vec<ScreenPair>,
    pub unmatched_old: Vec<Arc<ScreenCapture>>,
    pub unmatched_new: Vec<Arc<ScreenCapture>>,
    pub total_cost: f64,
}

/// Full `old x new` cost matrix, computed in parallel.
pub fn cost_matrix(old: &CaptureSet, new: &CaptureSet, area_cap: u64) -> Result<Vec<Vec<f64>>> {
    let sil = |set: &CaptureSet| -> Vec<BinaryRaster> {
        set.captures
            .par_iter()
            .map(|c| bbox_silhouette(c, area_cap))
            .collect()
    };
    let (old_sil, new_sil) = (sil(old), sil(new));
    old.captures
        .par_iter()
        .zip(old_sil.par_iter())
        .map(|(o, os)| {
            new.captures
                .iter()
                .zip(&new_sil)
                .map(|(n, ns)| Ok(color_distance(&o.image, &n.image)? + bbox_diff(os, ns)?))
                .collect()
        })
        .collect()
}

/// Minimum-total-cost one-to-one correspondence between two filtered sets.
pub fn match_screens(
    old: &CaptureSet,
    new: &CaptureSet,
    config: &MatchConfig,
) -> Result<MatchingResult> {
    let costs = cost_matrix(old, new, config.area_cap)?;
    Ok(match_with_costs(old, new, &costs, config.cost_cutoff))
}

/// Assignment over a precomputed cost matrix.
pub fn match_with_costs(
    old: &CaptureSet,
    new: &CaptureSet,
    costs: &[Vec<f64>],
    cost_cutoff: f64,
) -> MatchingResult {
    let assignment = if old.is_empty() || new.is_empty() {
        vec![None; old.len()]
    } else {
        min_cost_assignment(costs)
    };
    let mut pairs = Vec::new();
    let mut unmatched_old = Vec::new();
    let mut new_used = vec![false; new.len()];
    let mut total_cost = 0.0;
    for (i, slot) in assignment.into_iter().enumerate() {
        match slot {
            Some(j) if costs[i][j] <= cost_cutoff => {
                new_used[j] = true;
                total_cost += costs[i][j];
                pairs.push(ScreenPair {
                    old: old.captures[i].clone(),
                    new: new.captures[j].clone(),
                    assignment_cost: costs[i][j],
                });
            }
            _ => unmatched_old.push(old.captures[i].clone()),
        }
    }
    let unmatched_new = new
        .captures
        .iter()
        .zip(new_used)
        .filter(|(_, used)| !used)
        .map(|(c, _)| c.clone())
        .collect();
    MatchingResult {
        pairs,
        unmatched_old,
        unmatched_new,
        total_cost,
    }
}
