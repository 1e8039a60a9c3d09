//! Budgeted exhaustive enumeration backing the audit suites.
//!
//! Scenes are small by design: a scene with `r` regions has `2^r` selections,
//! and the audits sweep all of them (and all pairs) rather than sampling.
//! Every enumeration is therefore guarded by an explicit budget on `2^r`, and
//! everything is visited in one canonical order — regions as numbered by the
//! scene, selections as ascending bitmasks — so reports are deterministic and
//! independent of scheduling.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::surface::{DiskAnchor, DiskNode, PantsGraph, Scene, VertexId};

/// Enumeration refused because the case space exceeds the budget.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("enumeration needs 2^{exponent} cases, exceeding the budget of {budget}")]
    BudgetExceeded { exponent: usize, budget: u64 },
}

/// Verdict of an audit sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Pass,
    Fail,
}

/// Number of selections over the scene, if it fits in a `u64`.
pub fn selection_count(scene: &Scene) -> Option<u64> {
    let regions = scene.region_map().region_count();
    (regions < 64).then(|| 1u64 << regions)
}

/// Checks `2^exponent <= budget` and returns the case count.
pub fn check_count_budget(exponent: usize, budget: u64) -> Result<u64, EnumerationError> {
    if exponent < 64 {
        let count = 1u64 << exponent;
        if count <= budget {
            return Ok(count);
        }
    }
    Err(EnumerationError::BudgetExceeded { exponent, budget })
}

/// Checks `2^regions <= budget` and returns the selection count.
pub fn check_budget(scene: &Scene, budget: u64) -> Result<u64, EnumerationError> {
    check_count_budget(scene.region_map().region_count(), budget)
}

/// Vertex subset as a bitmask over the graph's sorted vertex order.
pub fn vertex_mask(graph: &PantsGraph, members: &BTreeSet<VertexId>) -> u64 {
    assert!(graph.pants_count() <= 64);
    let mut mask = 0;
    for (i, v) in graph.vertices().iter().enumerate() {
        if members.contains(v) {
            mask |= 1 << i;
        }
    }
    mask
}

/// Inverse of [`vertex_mask`].
pub fn members_from_mask(graph: &PantsGraph, mask: u64) -> BTreeSet<VertexId> {
    graph
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &v)| v)
        .collect()
}

/// Region ids selected by a mask, in region order; used in audit reports.
pub fn mask_region_ids(scene: &Scene, mask: u64) -> Vec<String> {
    scene
        .region_map()
        .regions()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, r)| r.region.id_string())
        .collect()
}

/// Shape of a finite scene family: per-edge stack depths with at most one
/// edge allowed to exceed the shallow bound, plus small disk forests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SceneFamily {
    /// Stack depth allowed on at most one edge.
    pub deep_stack_max: usize,
    /// Stack depth allowed everywhere else.
    pub shallow_stack_max: usize,
    /// Disk forest size (at most 2 supported).
    pub max_disk_nodes: usize,
}

impl SceneFamily {
    /// One deep edge up to 3 copies, single copies elsewhere, forests of at
    /// most two disks: the family the standard audits sweep.
    pub fn standard() -> Self {
        Self { deep_stack_max: 3, shallow_stack_max: 1, max_disk_nodes: 2 }
    }
}

/// All scenes of the family over the graph, in deterministic order.
pub fn enumerate_scenes(graph: &Arc<PantsGraph>, family: &SceneFamily) -> Vec<Arc<Scene>> {
    assert!(family.max_disk_nodes <= 2, "forests of more than two disks are not enumerated");
    let edge_ids: Vec<String> = graph.edges().iter().map(|e| e.id.clone()).collect();
    let mut scenes = Vec::new();
    for profile in stack_profiles(edge_ids.len(), family) {
        let stack_sizes: Vec<(&str, usize)> = edge_ids
            .iter()
            .zip(&profile)
            .filter(|(_, &m)| m > 0)
            .map(|(e, &m)| (e.as_str(), m))
            .collect();
        let mut anchors: Vec<DiskAnchor> =
            graph.vertices().iter().map(|&v| DiskAnchor::Pants(v)).collect();
        for (edge, &m) in edge_ids.iter().zip(&profile) {
            for i in 1..m {
                anchors.push(DiskAnchor::Gap(edge.clone(), i));
            }
        }
        for forest in forests(&anchors, family.max_disk_nodes) {
            let scene = Scene::with_auto_stacks(Arc::clone(graph), &stack_sizes, forest)
                .expect("generated scenes are valid");
            scenes.push(Arc::new(scene));
        }
    }
    scenes
}

/// Stack depth vectors with at most one entry above the shallow bound.
fn stack_profiles(edge_count: usize, family: &SceneFamily) -> Vec<Vec<usize>> {
    let mut profiles = vec![Vec::new()];
    for _ in 0..edge_count {
        let mut next = Vec::new();
        for profile in &profiles {
            for m in 0..=family.deep_stack_max {
                let mut extended = profile.clone();
                extended.push(m);
                next.push(extended);
            }
        }
        profiles = next;
    }
    profiles.retain(|p| {
        p.iter().filter(|&&m| m > family.shallow_stack_max).count() <= 1
            && p.iter().all(|&m| m <= family.deep_stack_max)
    });
    profiles
}

/// Forests of up to two disks over the given base anchors, deduplicated up
/// to relabeling of the nodes.
fn forests(anchors: &[DiskAnchor], max_nodes: usize) -> Vec<Vec<DiskNode>> {
    let node = |id: &str, anchor: &DiskAnchor| DiskNode { id: id.into(), anchor: anchor.clone() };
    let mut result = vec![Vec::new()];
    if max_nodes >= 1 {
        for anchor in anchors {
            result.push(vec![node("d0", anchor)]);
        }
    }
    if max_nodes >= 2 {
        for (i, first) in anchors.iter().enumerate() {
            // Two roots: anchor order fixed to avoid the d0/d1 relabeling.
            for second in &anchors[i..] {
                result.push(vec![node("d0", first), node("d1", second)]);
            }
            // A root with one nested disk.
            result.push(vec![
                node("d0", first),
                DiskNode { id: "d1".into(), anchor: DiskAnchor::InsideDisk("d0".into()) },
            ]);
        }
    }
    result
}
