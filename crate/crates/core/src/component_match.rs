//! Leaf-component correspondence within a matched screen pair.
//!
//! Components are compared purely by geometry: the score `gamma` is the L1
//! distance between `(x, y, width, height)` tuples, smaller being closer.
//! Component type is deliberately ignored so that a type change on an
//! otherwise stable component can be reported as such.

use crate::model::GuiComponent;

/// L1 distance between the bounds tuples of two components.
pub fn gamma(m: &GuiComponent, r: &GuiComponent) -> f64 {
    let (a, b) = (&m.bounds, &r.bounds);
    ((a.x as i64 - b.x as i64).abs()
        + (a.y as i64 - b.y as i64).abs()
        + (a.width as i64 - b.width as i64).abs()
        + (a.height as i64 - b.height as i64).abs()) as f64
}

/// Default cutoff as a fraction of `screen width + screen height`.
pub const DEFAULT_GAMMA_CUTOFF_RATIO: f64 = 0.25;

pub fn default_gamma_cutoff(screen_dims: (u32, u32)) -> f64 {
    DEFAULT_GAMMA_CUTOFF_RATIO * (screen_dims.0 as f64 + screen_dims.1 as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMatching {
    /// `(old, new, gamma)` in old preorder.
    pub matched: Vec<(GuiComponent, GuiComponent, f64)>,
    /// Old-only leaves in preorder.
    pub removed: Vec<GuiComponent>,
    /// New-only leaves in preorder.
    pub added: Vec<GuiComponent>,
}

/// Greedy one-to-one matching: repeatedly takes the globally smallest gamma
/// among still-unmatched cross pairs, as long as it does not exceed
/// `gamma_cutoff`. Ties go to the lowest `(old node_index, new node_index)`.
///
/// Zero-area leaves are skipped entirely.
pub fn match_components(
    old_leaves: &[GuiComponent],
    new_leaves: &[GuiComponent],
    gamma_cutoff: f64,
) -> ComponentMatching {
    let old: Vec<&GuiComponent> = old_leaves
        .iter()
        .filter(|c| !c.excluded_from_matching())
        .collect();
    let new: Vec<&GuiComponent> = new_leaves
        .iter()
        .filter(|c| !c.excluded_from_matching())
        .collect();

    let mut candidates = Vec::new();
    for (i, o) in old.iter().enumerate() {
        for (j, n) in new.iter().enumerate() {
            let g = gamma(o, n);
            if g <= gamma_cutoff {
                candidates.push((g, o.node_index, n.node_index, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });

    let mut old_match = vec![None; old.len()];
    let mut new_taken = vec![false; new.len()];
    for (g, _, _, i, j) in candidates {
        if old_match[i].is_none() && !new_taken[j] {
            old_match[i] = Some((j, g));
            new_taken[j] = true;
        }
    }

    let mut matched = Vec::new();
    let mut removed = Vec::new();
    for (i, slot) in old_match.into_iter().enumerate() {
        match slot {
            Some((j, g)) => matched.push((old[i].clone(), new[j].clone(), g)),
            None => removed.push(old[i].clone()),
        }
    }
    let added = new
        .iter()
        .zip(&new_taken)
        .filter(|(_, &t)| !t)
        .map(|(c, _)| (*c).clone())
        .collect();
    ComponentMatching {
        matched,
        removed,
        added,
    }
}
