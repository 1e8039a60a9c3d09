//! Multicurve scenes and their complementary regions.
//!
//! A scene places a finite system of disjoint circles on the surface, in a
//! form adapted to the pants decomposition:
//!
//! * per decomposition curve (edge `e`), a *stack* of `m_e >= 0` parallel
//!   copies, ordered from the first endpoint of the edge toward the second;
//! * a forest of *disk* curves, each bounding an embedded disk, anchored
//!   either in a pair of pants, in a gap between consecutive stack copies, or
//!   inside another disk.
//!
//! Cutting the surface along all curves of the scene produces the *regions*:
//! one `Surface` region per connected union of pants not separated by any
//! stack, one `Gap` annulus between consecutive copies in a stack, and one
//! `Disk` region per forest node (a disk with one hole per child).  Every
//! curve has exactly two region sides.  Regions carry their Euler
//! characteristic, so subsurfaces assembled from regions can be measured
//! without ever leaving the combinatorial model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::graph::{EdgeId, PantsGraph, VertexId};

/// Identifier of one circle in a stack.
pub type CurveId = String;
/// Identifier of a disk node in the forest.
pub type DiskId = String;

/// Where a disk curve sits on the surface.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiskAnchor {
    /// In the surface region containing this pair of pants.
    Pants(VertexId),
    /// In gap `i` (1-based) between copies `i` and `i+1` of the edge's stack.
    Gap(EdgeId, usize),
    /// Nested inside another disk node.
    InsideDisk(DiskId),
}

/// One node of the disk forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiskNode {
    pub id: DiskId,
    pub anchor: DiskAnchor,
}

/// A complementary region of the scene.
///
/// The derived ordering (surface regions by smallest member pants, then gaps
/// by edge and index, then disks by id) fixes the deterministic region
/// numbering used everywhere: enumeration masks, JSON ids, reports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Region {
    /// Union of pants glued along stack-free edges, named by its smallest
    /// vertex.
    Surface(VertexId),
    /// Annulus between copies `i` and `i+1` of a stack (1-based).
    Gap(EdgeId, usize),
    /// Interior of a disk node, punctured once per child.
    Disk(DiskId),
}

impl Region {
    /// Stable textual id: `surface:v`, `gap:e:i`, `disk:d`.
    pub fn id_string(&self) -> String {
        match self {
            Region::Surface(v) => format!("surface:{v}"),
            Region::Gap(e, i) => format!("gap:{e}:{i}"),
            Region::Disk(d) => format!("disk:{d}"),
        }
    }

    /// Parses the textual form produced by [`Region::id_string`].
    pub fn parse_id(text: &str) -> Option<Region> {
        let (kind, rest) = text.split_once(':')?;
        match kind {
            "surface" => rest.parse().ok().map(Region::Surface),
            "gap" => {
                let (edge, index) = rest.rsplit_once(':')?;
                let index: usize = index.parse().ok()?;
                Some(Region::Gap(edge.to_owned(), index))
            }
            "disk" => Some(Region::Disk(rest.to_owned())),
            _ => None,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id_string())
    }
}

/// A curve of the scene, addressed structurally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurveRef {
    /// Copy `i` (1-based) of the stack on the given edge.
    Stack(EdgeId, usize),
    /// The boundary circle of a disk node.
    Disk(DiskId),
}

/// A region together with its Euler characteristic contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionInfo {
    pub region: Region,
    pub chi: i64,
}

/// A curve together with its two region sides (indices into the region list).
///
/// For stack curves the sides are `[toward first endpoint, toward second]`;
/// for disk curves they are `[inside, outside]`.  The two sides may name the
/// same region (e.g. a single copy on an edge that does not separate).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveInfo {
    pub curve: CurveRef,
    pub id: CurveId,
    pub sides: [usize; 2],
}

/// The full region decomposition of a scene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMap {
    regions: Vec<RegionInfo>,
    region_index: BTreeMap<Region, usize>,
    curves: Vec<CurveInfo>,
    curve_index: BTreeMap<CurveId, usize>,
    component_of: BTreeMap<VertexId, VertexId>,
}

impl RegionMap {
    pub fn regions(&self) -> &[RegionInfo] {
        &self.regions
    }

    pub fn curves(&self) -> &[CurveInfo] {
        &self.curves
    }

    pub fn region_count(&self) -> usize {
        self.regions.len()
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn index_of(&self, region: &Region) -> Option<usize> {
        self.region_index.get(region).copied()
    }

    pub fn curve_by_id(&self, id: &str) -> Option<&CurveInfo> {
        self.curve_index.get(id).map(|&i| &self.curves[i])
    }

    /// Smallest vertex of the surface component containing `vertex`.
    pub fn component_of(&self, vertex: VertexId) -> VertexId {
        self.component_of[&vertex]
    }
}

/// Structural defects rejected when building a [`Scene`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("stack references unknown edge {0:?}")]
    UnknownEdge(EdgeId),
    #[error("invalid id {0:?}: ids must be non-empty and free of ':' and whitespace")]
    InvalidId(String),
    #[error("curve id {0:?} is used more than once")]
    DuplicateCurveId(CurveId),
    #[error("disk id {0:?} is used more than once")]
    DuplicateDiskId(DiskId),
    #[error("disk {disk:?} is anchored at unknown vertex {vertex}")]
    UnknownAnchorVertex { disk: DiskId, vertex: VertexId },
    #[error(
        "disk {disk:?} is anchored in gap {index} of edge {edge:?}, but that stack has {stack_len} copies"
    )]
    InvalidGapAnchor { disk: DiskId, edge: EdgeId, index: usize, stack_len: usize },
    #[error("disk {disk:?} is nested inside unknown disk {parent:?}")]
    UnknownAnchorDisk { disk: DiskId, parent: DiskId },
    #[error("disk nesting contains a cycle through {0:?}")]
    ForestCycle(DiskId),
}

/// An immutable multicurve scene over a pants graph.
#[derive(Debug, Clone)]
pub struct Scene {
    graph: Arc<PantsGraph>,
    stacks: BTreeMap<EdgeId, Vec<CurveId>>,
    disks: Vec<DiskNode>,
    children: BTreeMap<DiskId, Vec<DiskId>>,
    map: RegionMap,
}

impl PartialEq for Scene {
    fn eq(&self, other: &Self) -> bool {
        // The region map is derived data; graph, stacks and forest determine
        // the scene.
        *self.graph == *other.graph && self.stacks == other.stacks && self.disks == other.disks
    }
}

impl Eq for Scene {}

impl Scene {
    /// Validates the stacks and the disk forest and computes the region
    /// decomposition.  Empty stack entries are dropped, so a scene has one
    /// canonical representation.
    pub fn new(
        graph: Arc<PantsGraph>,
        stacks: BTreeMap<EdgeId, Vec<CurveId>>,
        mut disks: Vec<DiskNode>,
    ) -> Result<Self, SceneError> {
        let stacks: BTreeMap<EdgeId, Vec<CurveId>> =
            stacks.into_iter().filter(|(_, curves)| !curves.is_empty()).collect();
        for edge in stacks.keys() {
            if graph.edge(edge).is_none() {
                return Err(SceneError::UnknownEdge(edge.clone()));
            }
        }
        disks.sort_by(|a, b| a.id.cmp(&b.id));

        let mut seen_ids: BTreeSet<&str> = BTreeSet::new();
        for id in stacks.values().flatten() {
            check_id(id)?;
            if !seen_ids.insert(id) {
                return Err(SceneError::DuplicateCurveId(id.clone()));
            }
        }
        let disk_ids: BTreeSet<&str> = disks.iter().map(|d| d.id.as_str()).collect();
        if disk_ids.len() != disks.len() {
            let dup = disks
                .iter()
                .enumerate()
                .find(|(i, d)| disks[..*i].iter().any(|e| e.id == d.id))
                .map(|(_, d)| d.id.clone())
                .unwrap();
            return Err(SceneError::DuplicateDiskId(dup));
        }
        for disk in &disks {
            check_id(&disk.id)?;
            // Disk boundary circles are curves too, so their ids share the
            // curve namespace.
            if !seen_ids.insert(&disk.id) {
                return Err(SceneError::DuplicateCurveId(disk.id.clone()));
            }
            match &disk.anchor {
                DiskAnchor::Pants(v) => {
                    if !graph.has_vertex(*v) {
                        return Err(SceneError::UnknownAnchorVertex {
                            disk: disk.id.clone(),
                            vertex: *v,
                        });
                    }
                }
                DiskAnchor::Gap(edge, index) => {
                    let stack_len = stacks.get(edge).map_or(0, Vec::len);
                    if *index == 0 || *index + 1 > stack_len {
                        return Err(SceneError::InvalidGapAnchor {
                            disk: disk.id.clone(),
                            edge: edge.clone(),
                            index: *index,
                            stack_len,
                        });
                    }
                }
                DiskAnchor::InsideDisk(parent) => {
                    if !disk_ids.contains(parent.as_str()) {
                        return Err(SceneError::UnknownAnchorDisk {
                            disk: disk.id.clone(),
                            parent: parent.clone(),
                        });
                    }
                }
            }
        }

        // Reject cycles in the nesting relation by walking parent chains.
        let anchor_of: BTreeMap<&str, &DiskAnchor> =
            disks.iter().map(|d| (d.id.as_str(), &d.anchor)).collect();
        for disk in &disks {
            let mut cursor = disk.id.as_str();
            for _ in 0..=disks.len() {
                match anchor_of[cursor] {
                    DiskAnchor::InsideDisk(parent) => cursor = parent.as_str(),
                    _ => break,
                }
            }
            if matches!(anchor_of[cursor], DiskAnchor::InsideDisk(_)) {
                return Err(SceneError::ForestCycle(disk.id.clone()));
            }
        }

        let mut children: BTreeMap<DiskId, Vec<DiskId>> =
            disks.iter().map(|d| (d.id.clone(), Vec::new())).collect();
        for disk in &disks {
            if let DiskAnchor::InsideDisk(parent) = &disk.anchor {
                children.get_mut(parent).unwrap().push(disk.id.clone());
            }
        }

        let map = build_region_map(&graph, &stacks, &disks, &children);
        Ok(Self { graph, stacks, disks, children, map })
    }

    /// The empty scene: no curves, one region covering the whole surface.
    pub fn bare(graph: Arc<PantsGraph>) -> Self {
        Self::new(graph, BTreeMap::new(), Vec::new()).expect("empty scene is always valid")
    }

    /// Convenience constructor naming stack copies `e.1`, `e.2`, ...
    pub fn with_auto_stacks(
        graph: Arc<PantsGraph>,
        stack_sizes: &[(&str, usize)],
        disks: Vec<DiskNode>,
    ) -> Result<Self, SceneError> {
        let stacks = stack_sizes
            .iter()
            .map(|(edge, len)| {
                let ids = (1..=*len).map(|i| format!("{edge}.{i}")).collect();
                (edge.to_string(), ids)
            })
            .collect();
        Self::new(graph, stacks, disks)
    }

    pub fn graph(&self) -> &Arc<PantsGraph> {
        &self.graph
    }

    pub fn stacks(&self) -> &BTreeMap<EdgeId, Vec<CurveId>> {
        &self.stacks
    }

    pub fn stack_len(&self, edge: &str) -> usize {
        self.stacks.get(edge).map_or(0, Vec::len)
    }

    pub fn disks(&self) -> &[DiskNode] {
        &self.disks
    }

    pub fn disk(&self, id: &str) -> Option<&DiskNode> {
        self.disks.iter().find(|d| d.id == id)
    }

    pub fn children_of(&self, id: &str) -> &[DiskId] {
        self.children.get(id).map_or(&[], Vec::as_slice)
    }

    /// True when the scene carries no curves at all.
    pub fn is_empty(&self) -> bool {
        self.stacks.is_empty() && self.disks.is_empty()
    }

    pub fn region_map(&self) -> &RegionMap {
        &self.map
    }

    /// The surface region containing the given pair of pants.
    pub fn surface_region_of(&self, vertex: VertexId) -> Region {
        Region::Surface(self.map.component_of(vertex))
    }

    /// Region index an anchor resolves to.
    pub fn anchor_region_index(&self, anchor: &DiskAnchor) -> usize {
        let region = match anchor {
            DiskAnchor::Pants(v) => self.surface_region_of(*v),
            DiskAnchor::Gap(edge, index) => Region::Gap(edge.clone(), *index),
            DiskAnchor::InsideDisk(parent) => Region::Disk(parent.clone()),
        };
        self.map.index_of(&region).expect("anchor regions exist by scene validation")
    }
}

fn check_id(id: &str) -> Result<(), SceneError> {
    if id.is_empty() || id.contains(':') || id.chars().any(char::is_whitespace) {
        return Err(SceneError::InvalidId(id.to_owned()));
    }
    Ok(())
}

fn build_region_map(
    graph: &PantsGraph,
    stacks: &BTreeMap<EdgeId, Vec<CurveId>>,
    disks: &[DiskNode],
    children: &BTreeMap<DiskId, Vec<DiskId>>,
) -> RegionMap {
    // Surface components: glue pants along every edge whose stack is empty.
    let component_of = graph.components_without(|e| stacks.contains_key(&e.id));
    let mut component_sizes: BTreeMap<VertexId, i64> = BTreeMap::new();
    for root in component_of.values() {
        *component_sizes.entry(*root).or_insert(0) += 1;
    }

    // Punctures: disks anchored directly in a surface region or a gap.
    let mut surface_roots: BTreeMap<VertexId, i64> = BTreeMap::new();
    let mut gap_roots: BTreeMap<(EdgeId, usize), i64> = BTreeMap::new();
    for disk in disks {
        match &disk.anchor {
            DiskAnchor::Pants(v) => {
                *surface_roots.entry(component_of[v]).or_insert(0) += 1;
            }
            DiskAnchor::Gap(edge, index) => {
                *gap_roots.entry((edge.clone(), *index)).or_insert(0) += 1;
            }
            DiskAnchor::InsideDisk(_) => {}
        }
    }

    // Regions in canonical order: surfaces, then gaps, then disks.  A union
    // of k pants has chi = -k; each puncture lowers chi by one; a disk with
    // k holes has chi = 1 - k.
    let mut regions = Vec::new();
    for (&root, &size) in &component_sizes {
        let punctures = surface_roots.get(&root).copied().unwrap_or(0);
        regions.push(RegionInfo { region: Region::Surface(root), chi: -size - punctures });
    }
    for (edge, curves) in stacks {
        for index in 1..curves.len() {
            let punctures = gap_roots.get(&(edge.clone(), index)).copied().unwrap_or(0);
            regions.push(RegionInfo { region: Region::Gap(edge.clone(), index), chi: -punctures });
        }
    }
    for disk in disks {
        let holes = children[&disk.id].len() as i64;
        regions.push(RegionInfo { region: Region::Disk(disk.id.clone()), chi: 1 - holes });
    }
    debug_assert!(regions.windows(2).all(|w| w[0].region < w[1].region));
    let region_index: BTreeMap<Region, usize> =
        regions.iter().enumerate().map(|(i, r)| (r.region.clone(), i)).collect();

    let surface_index = |vertex: VertexId| region_index[&Region::Surface(component_of[&vertex])];

    let mut curves = Vec::new();
    for (edge, ids) in stacks {
        let ends = graph.edge(edge).expect("validated").ends;
        let m = ids.len();
        for (offset, id) in ids.iter().enumerate() {
            let i = offset + 1;
            let below = if i == 1 {
                surface_index(ends.0)
            } else {
                region_index[&Region::Gap(edge.clone(), i - 1)]
            };
            let above = if i == m {
                surface_index(ends.1)
            } else {
                region_index[&Region::Gap(edge.clone(), i)]
            };
            curves.push(CurveInfo {
                curve: CurveRef::Stack(edge.clone(), i),
                id: id.clone(),
                sides: [below, above],
            });
        }
    }
    for disk in disks {
        let inside = region_index[&Region::Disk(disk.id.clone())];
        let outside = match &disk.anchor {
            DiskAnchor::Pants(v) => surface_index(*v),
            DiskAnchor::Gap(edge, index) => region_index[&Region::Gap(edge.clone(), *index)],
            DiskAnchor::InsideDisk(parent) => region_index[&Region::Disk(parent.clone())],
        };
        curves.push(CurveInfo {
            curve: CurveRef::Disk(disk.id.clone()),
            id: disk.id.clone(),
            sides: [inside, outside],
        });
    }
    let curve_index: BTreeMap<CurveId, usize> =
        curves.iter().enumerate().map(|(i, c)| (c.id.clone(), i)).collect();

    RegionMap { regions, region_index, curves, curve_index, component_of }
}
