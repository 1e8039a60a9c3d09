//! Compact subsurfaces assembled from scene regions.
//!
//! A subsurface is the closure of a union of regions: every region of a scene
//! is either `In` (part of the subsurface) or `Out`.  The same subsurface can
//! be presented over many scenes; the *canonical* presentation is the one in
//! which every curve genuinely separates, i.e. has an `In` region on one side
//! and an `Out` region on the other.  Canonicalization deletes every
//! redundant curve at once, merges the regions it separated, and rebuilds the
//! scene; it is idempotent and commutes with inversion.
//!
//! A subsurface with cooriented boundary is determined by that boundary:
//! [`from_cooriented_boundary`] reconstructs the unique selection whose
//! outward sides match a given assignment, which is the model-level form of
//! the fact that mutually dominating subsurfaces with equal non-empty
//! boundary coincide.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::graph::{EdgeId, NormalClass, PantsGraph};
use super::scene::{
    CurveId, CurveRef, DiskAnchor, DiskId, Region, Scene,
};

/// Witness produced when two subsurfaces fail to be disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DisjointnessWitness {
    /// A region selected by both operands.
    SharedRegion(Region),
    /// A curve with one operand on each side.
    SharedBoundaryCurve(CurveId),
}

impl fmt::Display for DisjointnessWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DisjointnessWitness::SharedRegion(r) => write!(f, "region {r} lies in both"),
            DisjointnessWitness::SharedBoundaryCurve(c) => {
                write!(f, "curve {c:?} is a boundary curve of both")
            }
        }
    }
}

/// Failures of subsurface constructors and binary operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubmanifoldError {
    #[error("selection references region {0} which is not part of the scene")]
    UnknownRegion(Region),
    #[error("operands live over different scenes")]
    SceneMismatch,
    #[error("subsurfaces are not disjoint: {0}")]
    DisjointnessViolation(DisjointnessWitness),
    #[error("coorientations force region {0} to be both inside and outside")]
    InconsistentCoorientation(Region),
    #[error("an empty scene has no boundary to reconstruct from: both the empty subsurface and the whole surface qualify")]
    AmbiguousEmptyBoundary,
    #[error("no outward side given for curve {0:?}")]
    MissingCoorientation(CurveId),
    #[error("outward map references unknown curve {0:?}")]
    UnknownCoorientationCurve(CurveId),
    #[error("region {region} is not a side of curve {curve:?}")]
    SideNotAdjacent { curve: CurveId, region: Region },
}

/// A compact subsurface: a total In/Out selection over a scene's regions,
/// stored as the set of `In` regions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submanifold {
    scene: Arc<Scene>,
    in_regions: BTreeSet<Region>,
}

impl Submanifold {
    pub fn new(
        scene: Arc<Scene>,
        in_regions: BTreeSet<Region>,
    ) -> Result<Self, SubmanifoldError> {
        let map = scene.region_map();
        if let Some(bad) = in_regions.iter().find(|r| map.index_of(r).is_none()) {
            return Err(SubmanifoldError::UnknownRegion(bad.clone()));
        }
        Ok(Self { scene, in_regions })
    }

    /// The empty subsurface over the given scene (every region Out).
    pub fn empty(scene: Arc<Scene>) -> Self {
        Self { scene, in_regions: BTreeSet::new() }
    }

    /// The whole surface over the given scene (every region In).
    pub fn full(scene: Arc<Scene>) -> Self {
        let in_regions =
            scene.region_map().regions().iter().map(|r| r.region.clone()).collect();
        Self { scene, in_regions }
    }

    /// Selection by bitmask over the scene's region order; enumeration helper.
    pub fn from_mask(scene: &Arc<Scene>, mask: u64) -> Self {
        let map = scene.region_map();
        assert!(map.region_count() <= 64, "mask selections support at most 64 regions");
        let in_regions = map
            .regions()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, r)| r.region.clone())
            .collect();
        Self { scene: Arc::clone(scene), in_regions }
    }

    /// The selection as a bitmask over the scene's region order.
    pub fn in_mask(&self) -> u64 {
        let map = self.scene.region_map();
        assert!(map.region_count() <= 64, "mask selections support at most 64 regions");
        let mut mask = 0;
        for region in &self.in_regions {
            mask |= 1 << map.index_of(region).expect("selection regions belong to the scene");
        }
        mask
    }

    pub fn scene(&self) -> &Arc<Scene> {
        &self.scene
    }

    pub fn graph(&self) -> &Arc<PantsGraph> {
        self.scene.graph()
    }

    pub fn in_regions(&self) -> &BTreeSet<Region> {
        &self.in_regions
    }

    pub fn contains(&self, region: &Region) -> bool {
        self.in_regions.contains(region)
    }

    fn contains_index(&self, index: usize) -> bool {
        self.contains(&self.scene.region_map().regions()[index].region)
    }

    pub fn is_empty_selection(&self) -> bool {
        self.in_regions.is_empty()
    }

    /// True when every curve of the scene has an In side and an Out side.
    pub fn is_canonical(&self) -> bool {
        self.scene
            .region_map()
            .curves()
            .iter()
            .all(|c| self.contains_index(c.sides[0]) != self.contains_index(c.sides[1]))
    }

    /// Euler characteristic: the sum of the In regions' contributions.
    pub fn euler_characteristic(&self) -> i64 {
        let map = self.scene.region_map();
        map.regions()
            .iter()
            .filter(|r| self.in_regions.contains(&r.region))
            .map(|r| r.chi)
            .sum()
    }

    /// The closure of the complement: flip every region.
    pub fn invert(&self) -> Self {
        let in_regions = self
            .scene
            .region_map()
            .regions()
            .iter()
            .map(|r| r.region.clone())
            .filter(|r| !self.in_regions.contains(r))
            .collect();
        Self { scene: Arc::clone(&self.scene), in_regions }
    }

    /// Deletes every curve whose two sides agree and rebuilds the scene.
    ///
    /// All deletions happen in one pass: merged regions inherit the common
    /// value of their parts, so no new redundancies appear and the result is
    /// canonical.  A selection that is already canonical is returned as-is.
    pub fn canonicalize(&self) -> Self {
        let map = self.scene.region_map();
        let mut kept_curves: BTreeSet<CurveRef> = BTreeSet::new();
        for curve in map.curves() {
            if self.contains_index(curve.sides[0]) != self.contains_index(curve.sides[1]) {
                kept_curves.insert(curve.curve.clone());
            }
        }
        if kept_curves.len() == map.curve_count() {
            return self.clone();
        }

        // Surviving stack copies, per edge, by their old 1-based index.
        let mut kept_stacks: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
        let mut new_stacks: BTreeMap<EdgeId, Vec<CurveId>> = BTreeMap::new();
        for (edge, ids) in self.scene.stacks() {
            let mut old_indices = Vec::new();
            let mut new_ids = Vec::new();
            for (offset, id) in ids.iter().enumerate() {
                if kept_curves.contains(&CurveRef::Stack(edge.clone(), offset + 1)) {
                    old_indices.push(offset + 1);
                    new_ids.push(id.clone());
                }
            }
            if !new_ids.is_empty() {
                kept_stacks.insert(edge.clone(), old_indices);
                new_stacks.insert(edge.clone(), new_ids);
            }
        }

        let kept_disks: BTreeSet<DiskId> = self
            .scene
            .disks()
            .iter()
            .filter(|d| kept_curves.contains(&CurveRef::Disk(d.id.clone())))
            .map(|d| d.id.clone())
            .collect();
        let resolve = |anchor: &DiskAnchor| -> DiskAnchor {
            resolve_anchor(&self.scene, &kept_disks, &kept_stacks, anchor)
        };
        let new_disks = self
            .scene
            .disks()
            .iter()
            .filter(|d| kept_disks.contains(&d.id))
            .map(|d| super::scene::DiskNode { id: d.id.clone(), anchor: resolve(&d.anchor) })
            .collect();

        let new_scene = Arc::new(
            Scene::new(Arc::clone(self.scene.graph()), new_stacks, new_disks)
                .expect("deleting curves preserves scene validity"),
        );

        // Carry each old region to the region it merged into.
        let old_to_new = |region: &Region| -> Region {
            match region {
                Region::Surface(root) => new_scene.surface_region_of(*root),
                Region::Gap(edge, index) => {
                    let anchor = resolve(&DiskAnchor::Gap(edge.clone(), *index));
                    anchor_region(&new_scene, &anchor)
                }
                Region::Disk(id) => {
                    if kept_disks.contains(id) {
                        Region::Disk(id.clone())
                    } else {
                        let node = self.scene.disk(id).expect("selection regions belong to the scene");
                        anchor_region(&new_scene, &resolve(&node.anchor))
                    }
                }
            }
        };
        let mut new_in = BTreeSet::new();
        for info in map.regions() {
            if self.in_regions.contains(&info.region) {
                new_in.insert(old_to_new(&info.region));
            }
        }
        if cfg!(debug_assertions) {
            for info in map.regions() {
                if !self.in_regions.contains(&info.region) {
                    debug_assert!(
                        !new_in.contains(&old_to_new(&info.region)),
                        "merged regions must carry one value"
                    );
                }
            }
        }

        let result = Self { scene: new_scene, in_regions: new_in };
        debug_assert!(result.is_canonical());
        result
    }

    /// Whether this subsurface is contained in `other` (same scene required;
    /// selections over a shared scene nest exactly when their In sets do).
    pub fn is_contained_in(&self, other: &Self) -> Result<bool, SubmanifoldError> {
        if self.scene != other.scene {
            return Err(SubmanifoldError::SceneMismatch);
        }
        Ok(self.in_regions.is_subset(&other.in_regions))
    }

    /// Checks the disjointness of two selections over a shared scene.
    ///
    /// Two closures meet exactly when they share an In region or when some
    /// curve has one operand In on each side.
    pub fn disjointness_witness(&self, other: &Self) -> Result<Option<DisjointnessWitness>, SubmanifoldError> {
        if self.scene != other.scene {
            return Err(SubmanifoldError::SceneMismatch);
        }
        if let Some(shared) = self.in_regions.intersection(&other.in_regions).next() {
            return Ok(Some(DisjointnessWitness::SharedRegion(shared.clone())));
        }
        for curve in self.scene.region_map().curves() {
            let [a, b] = curve.sides;
            let crossed = (self.contains_index(a) && other.contains_index(b))
                || (self.contains_index(b) && other.contains_index(a));
            if crossed {
                return Ok(Some(DisjointnessWitness::SharedBoundaryCurve(curve.id.clone())));
            }
        }
        Ok(None)
    }

    /// Union of two disjoint subsurfaces over a shared scene, canonicalized.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self, SubmanifoldError> {
        if let Some(witness) = self.disjointness_witness(other)? {
            return Err(SubmanifoldError::DisjointnessViolation(witness));
        }
        let in_regions = self.in_regions.union(&other.in_regions).cloned().collect();
        Ok(Self { scene: Arc::clone(&self.scene), in_regions }.canonicalize())
    }

    /// The outward side of every curve, for canonical selections: the map
    /// sending each curve to the adjacent region outside the subsurface.
    /// Returns `None` when some curve does not separate.
    pub fn boundary_coorientation(&self) -> Option<BTreeMap<CurveId, Region>> {
        let map = self.scene.region_map();
        let mut outward = BTreeMap::new();
        for curve in map.curves() {
            let [a, b] = curve.sides;
            let out_index = match (self.contains_index(a), self.contains_index(b)) {
                (true, false) => b,
                (false, true) => a,
                _ => return None,
            };
            outward.insert(curve.id.clone(), map.regions()[out_index].region.clone());
        }
        Some(outward)
    }
}

/// Reconstructs the unique subsurface whose outward coorientation matches
/// `outward`, which must name the Out side of every curve of the scene.
///
/// Every curve forces both of its sides; the scene's region adjacency then
/// propagates a total assignment (in a non-empty scene every region touches a
/// curve).  Conflicting forces witness an inconsistent coorientation.
pub fn from_cooriented_boundary(
    scene: &Arc<Scene>,
    outward: &BTreeMap<CurveId, Region>,
) -> Result<Submanifold, SubmanifoldError> {
    if scene.is_empty() {
        return Err(SubmanifoldError::AmbiguousEmptyBoundary);
    }
    let map = scene.region_map();
    for id in outward.keys() {
        if map.curve_by_id(id).is_none() {
            return Err(SubmanifoldError::UnknownCoorientationCurve(id.clone()));
        }
    }
    let mut assigned: Vec<Option<bool>> = vec![None; map.region_count()];
    let mut force = |index: usize, value: bool| -> Result<(), SubmanifoldError> {
        match assigned[index] {
            Some(prev) if prev != value => Err(SubmanifoldError::InconsistentCoorientation(
                map.regions()[index].region.clone(),
            )),
            _ => {
                assigned[index] = Some(value);
                Ok(())
            }
        }
    };
    for curve in map.curves() {
        let region = outward
            .get(&curve.id)
            .ok_or_else(|| SubmanifoldError::MissingCoorientation(curve.id.clone()))?;
        let [a, b] = curve.sides;
        let out_index = if *region == map.regions()[a].region {
            a
        } else if *region == map.regions()[b].region {
            b
        } else {
            return Err(SubmanifoldError::SideNotAdjacent {
                curve: curve.id.clone(),
                region: region.clone(),
            });
        };
        let in_index = if out_index == a { b } else { a };
        force(out_index, false)?;
        force(in_index, true)?;
    }
    let in_regions = map
        .regions()
        .iter()
        .zip(&assigned)
        .filter(|(_, v)| {
            v.expect("every region of a non-empty scene is adjacent to a curve")
        })
        .map(|(r, _)| r.region.clone())
        .collect();
    let result = Submanifold { scene: Arc::clone(scene), in_regions };
    debug_assert!(result.is_canonical());
    Ok(result)
}

impl NormalClass {
    /// The standard representative: one copy on every boundary edge, member
    /// components In.
    pub fn realize(&self) -> Submanifold {
        let boundary: Vec<(&str, usize)> =
            self.boundary_edges().iter().map(|e| (e.id.as_str(), 1)).collect();
        let scene = Arc::new(
            Scene::with_auto_stacks(Arc::clone(self.graph()), &boundary, Vec::new())
                .expect("boundary stacks are always a valid scene"),
        );
        let in_regions = scene
            .region_map()
            .regions()
            .iter()
            .map(|r| r.region.clone())
            .filter(|r| match r {
                Region::Surface(root) => self.contains(*root),
                _ => false,
            })
            .collect();
        let result = Submanifold { scene, in_regions };
        debug_assert!(result.is_canonical());
        result
    }
}

fn resolve_anchor(
    scene: &Scene,
    kept_disks: &BTreeSet<DiskId>,
    kept_stacks: &BTreeMap<EdgeId, Vec<usize>>,
    anchor: &DiskAnchor,
) -> DiskAnchor {
    let mut anchor = anchor.clone();
    loop {
        match anchor {
            DiskAnchor::InsideDisk(parent) if kept_disks.contains(&parent) => {
                return DiskAnchor::InsideDisk(parent);
            }
            DiskAnchor::InsideDisk(parent) => {
                anchor = scene
                    .disk(&parent)
                    .expect("forest parents exist by scene validation")
                    .anchor
                    .clone();
            }
            DiskAnchor::Pants(v) => return DiskAnchor::Pants(v),
            DiskAnchor::Gap(edge, index) => {
                let kept = kept_stacks.get(&edge).map_or(&[][..], Vec::as_slice);
                let ends = scene.graph().edge(&edge).expect("validated").ends;
                let below = kept.partition_point(|&j| j <= index);
                return if below >= 1 && below < kept.len() {
                    // Still a gap: between surviving copies `below` and
                    // `below + 1` in the new numbering.
                    DiskAnchor::Gap(edge, below)
                } else if below == 0 {
                    // Everything below was deleted: merged toward the first
                    // endpoint's region.
                    DiskAnchor::Pants(ends.0)
                } else {
                    DiskAnchor::Pants(ends.1)
                };
            }
        }
    }
}

fn anchor_region(scene: &Scene, anchor: &DiskAnchor) -> Region {
    match anchor {
        DiskAnchor::Pants(v) => scene.surface_region_of(*v),
        DiskAnchor::Gap(edge, index) => Region::Gap(edge.clone(), *index),
        DiskAnchor::InsideDisk(parent) => Region::Disk(parent.clone()),
    }
}
