//! Reduction of subsurfaces to normal form.
//!
//! A subsurface in normal form is a union of pants pieces: no disk curves,
//! at most one copy per edge, every copy separating.  The reduction runs in
//! two stages.  [`eliminate_disks`] removes the disk forest by flooding each
//! root's interior with the value found just outside it.  The stack stage
//! ([`classify_stacks`] / [`associated_normals`]) then looks at each edge's
//! parallel copies: in canonical form the region values along a stack
//! alternate, so the stack is determined by its two end values.  Stacks with
//! equal end values bound annuli that get filled (both ends selected) or
//! dropped (neither); stacks with differing end values keep exactly one copy,
//! and any odd copy may be the one kept — all choices land in the same class
//! of pants, which [`normalize`] returns.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{self, AuditStatus, EnumerationError};
use crate::surface::{
    DiskAnchor, DiskId, EdgeId, NormalClass, PantsGraph, Region, Scene, Submanifold, VertexId,
};

/// Which end of an edge a feature sits at, in the edge's `(first, second)`
/// endpoint order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackEnd {
    First,
    Second,
}

/// How a stack of parallel copies sits relative to a selection.
///
/// Reading the region values along a stack — first end side, the gaps in
/// order, second end side — canonical selections alternate, so the whole
/// pattern is fixed by the two end values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StackKind {
    /// Both end sides selected: the copies pair up into annular holes.
    /// Forces an even copy count.
    Inner,
    /// Neither end side selected: the copies pair up into annuli of the
    /// selection.  Forces an even copy count.
    Outer,
    /// End sides differ: an odd copy count, with one essential boundary
    /// circle worth of the stack.  `inner_end` is the end whose side is
    /// selected.
    Intermediate { inner_end: StackEnd },
    /// No copies on the edge.
    Absent,
}

/// Classification of the copies on one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackClassification {
    pub edge: EdgeId,
    /// Number of copies on the edge.
    pub count: usize,
    pub kind: StackKind,
}

/// Stack reduction failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("stack reduction needs a disk-free subsurface, but disk {0:?} is present")]
    NotDiskFree(DiskId),
    #[error("region values along edge {0:?} fail to alternate; the selection is not canonical")]
    AlternationViolation(EdgeId),
}

/// One representative of the class associated to a disk-free subsurface.
#[derive(Debug, Clone)]
pub struct NormalVariant {
    /// Index of the copy kept on each edge with differing end values
    /// (1-based from the first end; always odd).
    pub kept: BTreeMap<EdgeId, usize>,
    /// The representative as a selection over the input's scene: every gap
    /// flooded with the end value on its side of the kept copy.
    pub flooded: Submanifold,
    /// Canonical form of `flooded`: one copy per remaining edge, no gaps.
    pub normal: Submanifold,
}

/// All normal representatives of a subsurface, with the class they share.
#[derive(Debug, Clone)]
pub struct AssociatedNormals {
    /// The class of pants every variant reduces to.
    pub class: NormalClass,
    /// Canonical form of the variant whose flooded selection is smallest.
    pub minimal: Submanifold,
    /// Canonical form of the variant whose flooded selection is largest.
    pub maximal: Submanifold,
    /// Every variant, ordered so flooded selections grow along the list's
    /// ends: the first is the minimal variant and the last the maximal.
    pub variants: Vec<NormalVariant>,
}

/// Removes the disk forest from a subsurface.
///
/// The input is canonicalized first.  Each root disk's subtree — every
/// region strictly inside its boundary circle — is then overwritten with the
/// value of the region the root is anchored in: holes get filled, floating
/// disk pieces get dropped.  That makes every disk curve redundant, so the
/// final canonicalization deletes exactly the forest and nothing else: the
/// result keeps the input's stacks, surface values, and gap values.
pub fn eliminate_disks(w: &Submanifold) -> Submanifold {
    let canonical = w.canonicalize();
    if canonical.scene().disks().is_empty() {
        return canonical;
    }
    let scene = Arc::clone(canonical.scene());
    let mut in_regions = canonical.in_regions().clone();
    for disk in scene.disks() {
        if matches!(disk.anchor, DiskAnchor::InsideDisk(_)) {
            continue;
        }
        let anchor_index = scene.anchor_region_index(&disk.anchor);
        let fill = in_regions.contains(&scene.region_map().regions()[anchor_index].region);
        let mut pending = vec![disk.id.clone()];
        while let Some(id) = pending.pop() {
            pending.extend(scene.children_of(&id).iter().cloned());
            let region = Region::Disk(id);
            if fill {
                in_regions.insert(region);
            } else {
                in_regions.remove(&region);
            }
        }
    }
    let flooded =
        Submanifold::new(scene, in_regions).expect("flooded regions come from the same scene");
    let result = flooded.canonicalize();
    debug_assert!(result.scene().disks().is_empty());
    debug_assert_eq!(result.scene().stacks(), canonical.scene().stacks());
    result
}

/// Classifies the copies on every edge that carries any.
///
/// The input must be canonical and disk-free; [`NormalizeError::AlternationViolation`]
/// reports the first edge whose values fail to alternate (which is exactly a
/// non-canonical stack curve).  Edges without copies are omitted — their
/// kind would be [`StackKind::Absent`].
pub fn classify_stacks(w: &Submanifold) -> Result<Vec<StackClassification>, NormalizeError> {
    let scene = w.scene();
    let map = scene.region_map();
    let selected: Vec<bool> =
        map.regions().iter().map(|info| w.contains(&info.region)).collect();
    let mut classes = Vec::new();
    for (edge, curve_ids) in scene.stacks() {
        let first = map.curve_by_id(&curve_ids[0]).expect("stack curves are indexed");
        let mut values = vec![selected[first.sides[0]]];
        for id in curve_ids {
            let curve = map.curve_by_id(id).expect("stack curves are indexed");
            values.push(selected[curve.sides[1]]);
        }
        if values.windows(2).any(|pair| pair[0] == pair[1]) {
            return Err(NormalizeError::AlternationViolation(edge.clone()));
        }
        let count = curve_ids.len();
        let kind = match (values[0], values[count]) {
            (true, true) => StackKind::Inner,
            (false, false) => StackKind::Outer,
            (true, false) => StackKind::Intermediate { inner_end: StackEnd::First },
            (false, true) => StackKind::Intermediate { inner_end: StackEnd::Second },
        };
        // Alternation ties the copy count's parity to the end values.
        debug_assert_eq!(
            count % 2 == 0,
            matches!(kind, StackKind::Inner | StackKind::Outer)
        );
        classes.push(StackClassification { edge: edge.clone(), count, kind });
    }
    Ok(classes)
}

/// Enumerates the normal representatives of a canonical disk-free subsurface.
///
/// Stacks with equal end values are resolved outright (filled or emptied);
/// every edge with differing end values contributes one choice of kept copy
/// per odd index, and the variants are the products of those choices.  All
/// variants canonicalize to realizations of one class of pants, which is
/// returned along with the minimal and maximal variants.
pub fn associated_normals(w: &Submanifold) -> Result<AssociatedNormals, NormalizeError> {
    if let Some(disk) = w.scene().disks().first() {
        return Err(NormalizeError::NotDiskFree(disk.id.clone()));
    }
    let classes = classify_stacks(w)?;
    let scene = w.scene();

    let mut base = w.in_regions().clone();
    let mut intermediates: Vec<(&StackClassification, bool, Vec<usize>)> = Vec::new();
    for class in &classes {
        match class.kind {
            StackKind::Inner | StackKind::Outer => {
                let fill = class.kind == StackKind::Inner;
                for i in 1..class.count {
                    let gap = Region::Gap(class.edge.clone(), i);
                    if fill {
                        base.insert(gap);
                    } else {
                        base.remove(&gap);
                    }
                }
            }
            StackKind::Intermediate { inner_end } => {
                let first_in = inner_end == StackEnd::First;
                // Odd kept indices, ordered so the first choice floods the
                // fewest gaps In and the last the most.
                let mut options: Vec<usize> = (1..=class.count).step_by(2).collect();
                if !first_in {
                    options.reverse();
                }
                intermediates.push((class, first_in, options));
            }
            StackKind::Absent => unreachable!("classify_stacks omits empty edges"),
        }
    }

    let combos: Vec<Vec<usize>> = if intermediates.is_empty() {
        vec![Vec::new()]
    } else {
        intermediates
            .iter()
            .map(|(_, _, options)| options.iter().copied())
            .multi_cartesian_product()
            .collect()
    };

    let mut variants = Vec::with_capacity(combos.len());
    for combo in combos {
        let mut in_regions = base.clone();
        let mut kept = BTreeMap::new();
        for ((class, first_in, _), &index) in intermediates.iter().zip(&combo) {
            kept.insert(class.edge.clone(), index);
            for j in 1..class.count {
                let gap = Region::Gap(class.edge.clone(), j);
                // Gaps below the kept copy take the first-end value, the
                // rest the second-end value.
                let value = if j < index { *first_in } else { !first_in };
                if value {
                    in_regions.insert(gap);
                } else {
                    in_regions.remove(&gap);
                }
            }
        }
        let flooded = Submanifold::new(Arc::clone(scene), in_regions)
            .expect("flooded regions come from the same scene");
        let normal = flooded.canonicalize();
        variants.push(NormalVariant { kept, flooded, normal });
    }

    let class = normal_members(&variants[0].normal);
    let class = NormalClass::new(Arc::clone(scene.graph()), class)
        .expect("members come from the scene's graph");
    debug_assert!(variants
        .iter()
        .all(|v| normal_members(&v.normal) == *class.members()));
    debug_assert!(variants
        .iter()
        .all(|v| variants[0].flooded.in_regions().is_subset(v.flooded.in_regions())
            && v.flooded.in_regions().is_subset(variants.last().unwrap().flooded.in_regions())));

    Ok(AssociatedNormals {
        class,
        minimal: variants.first().unwrap().normal.clone(),
        maximal: variants.last().unwrap().normal.clone(),
        variants,
    })
}

/// The class of pants a subsurface reduces to.
///
/// Composition of the two stages: the input is canonicalized, its disk
/// forest eliminated, and its stacks resolved (using the minimal variant —
/// the choice is unobservable since every variant lands in the same class).
pub fn normalize(w: &Submanifold) -> NormalClass {
    let disk_free = eliminate_disks(w);
    associated_normals(&disk_free)
        .expect("disk elimination yields a canonical disk-free subsurface")
        .class
}

/// The class realized by a subsurface that is already in normal form, if it
/// is one: canonicalizing must leave no disks and at most one copy per edge.
pub fn normal_form_class(w: &Submanifold) -> Option<NormalClass> {
    let canonical = w.canonicalize();
    let scene = canonical.scene();
    let reduced = scene.disks().is_empty() && scene.stacks().values().all(|s| s.len() == 1);
    reduced.then(|| {
        NormalClass::new(Arc::clone(scene.graph()), normal_members(&canonical))
            .expect("members come from the scene's graph")
    })
}

/// In pants of a selection in normal form (each pants region is a single
/// vertex's piece, possibly merged with neighbours along uncut edges).
fn normal_members(normal: &Submanifold) -> BTreeSet<VertexId> {
    debug_assert!(normal.scene().disks().is_empty());
    debug_assert!(normal.scene().stacks().values().all(|s| s.len() == 1));
    normal
        .graph()
        .vertices()
        .iter()
        .copied()
        .filter(|&v| normal.contains(&normal.scene().surface_region_of(v)))
        .collect()
}

/// First failure found by [`audit_normalization`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalizationCounterexample {
    /// Which law failed.
    pub property: String,
    /// Selected region ids of the first subsurface involved.
    pub witness: Vec<String>,
    /// Selected region ids of the second subsurface, for pairwise laws.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_witness: Option<Vec<String>>,
    /// Human-readable account of the violation.
    pub detail: String,
}

/// Outcome of [`audit_normalization`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalizationAuditReport {
    pub status: AuditStatus,
    /// Individual law instances checked.
    pub checked_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<NormalizationCounterexample>,
}

/// Exhaustively checks the defining laws of the reduction over one scene.
///
/// Sweeps every selection of the scene's regions (all `2^r`, canonical or
/// not) and checks, in a fixed order: complement compatibility
/// `Φ(wⁱ) = Φ(w)ⁱ` on each selection; that selections already in normal
/// form map to their own class; monotonicity and complexity monotonicity on
/// each nested pair; and additivity `Φ(w ⊎ w') = Φ(w) + Φ(w')` on each pair
/// of disjoint subsurfaces.  Reports the first violation found.
pub fn audit_normalization(
    scene: &Arc<Scene>,
    budget: u64,
) -> Result<NormalizationAuditReport, EnumerationError> {
    let count = enumerate::check_budget(scene, budget)?;
    let graph = scene.graph();
    let region_count = scene.region_map().region_count();
    let full_mask: u64 =
        if region_count == 64 { u64::MAX } else { (1u64 << region_count) - 1 };
    let vertex_full = if graph.pants_count() == 64 {
        u64::MAX
    } else {
        (1u64 << graph.pants_count()) - 1
    };

    // Curve sides as region-bit pairs, for the disjointness test.
    let curve_sides: Vec<[usize; 2]> =
        scene.region_map().curves().iter().map(|c| c.sides).collect();

    // Reduce every selection once up front; pair sweeps then work on plain
    // bitmasks.
    let mut class_of: Vec<u64> = Vec::with_capacity(count as usize);
    let mut fixed_class: Vec<Option<u64>> = Vec::with_capacity(count as usize);
    for mask in 0..count {
        let w = Submanifold::from_mask(scene, mask);
        class_of.push(enumerate::vertex_mask(graph, normalize(&w).members()));
        fixed_class
            .push(normal_form_class(&w).map(|c| enumerate::vertex_mask(graph, c.members())));
    }

    let mut checked = 0u64;
    let mut counterexample = None;
    let witness = |mask: u64| enumerate::mask_region_ids(scene, mask);
    let members = |class: u64| {
        let set = enumerate::members_from_mask(graph, class);
        format!("{{{}}}", set.iter().join(","))
    };

    for mask in 0..count {
        checked += 1;
        let inverted = class_of[(!mask & full_mask) as usize];
        if inverted != !class_of[mask as usize] & vertex_full {
            counterexample = Some(NormalizationCounterexample {
                property: "complement".into(),
                witness: witness(mask),
                second_witness: None,
                detail: format!(
                    "complement reduces to {} but the class complement is {}",
                    members(inverted),
                    members(!class_of[mask as usize] & vertex_full)
                ),
            });
            break;
        }
        if let Some(expected) = fixed_class[mask as usize] {
            checked += 1;
            if class_of[mask as usize] != expected {
                counterexample = Some(NormalizationCounterexample {
                    property: "fixes-normal".into(),
                    witness: witness(mask),
                    second_witness: None,
                    detail: format!(
                        "selection in normal form of class {} reduces to {}",
                        members(expected),
                        members(class_of[mask as usize])
                    ),
                });
                break;
            }
        }
    }

    if counterexample.is_none() {
        'pairs: for a in 0..count {
            for b in 0..count {
                if a == b || a & !b != 0 {
                    continue;
                }
                checked += 1;
                let (ca, cb) = (class_of[a as usize], class_of[b as usize]);
                // Class containment also settles complexity monotonicity:
                // nested classes of equal size are equal.
                if ca & !cb != 0 {
                    counterexample = Some(NormalizationCounterexample {
                        property: "monotone".into(),
                        witness: witness(a),
                        second_witness: Some(witness(b)),
                        detail: format!(
                            "nested selections reduce to non-nested classes {} and {}",
                            members(ca),
                            members(cb)
                        ),
                    });
                    break 'pairs;
                }
            }
        }
    }

    if counterexample.is_none() {
        'disjoint: for a in 0..count {
            for b in a..count {
                if a & b != 0
                    || curve_sides.iter().any(|&[s0, s1]| {
                        (a >> s0 & 1 == 1 && b >> s1 & 1 == 1)
                            || (a >> s1 & 1 == 1 && b >> s0 & 1 == 1)
                    })
                {
                    continue;
                }
                checked += 1;
                let (ca, cb) = (class_of[a as usize], class_of[b as usize]);
                let union = class_of[(a | b) as usize];
                if ca & cb != 0 || union != ca | cb {
                    counterexample = Some(NormalizationCounterexample {
                        property: "disjoint-additivity".into(),
                        witness: witness(a),
                        second_witness: Some(witness(b)),
                        detail: format!(
                            "disjoint selections reduce to {} and {} but their union to {}",
                            members(ca),
                            members(cb),
                            members(union)
                        ),
                    });
                    break 'disjoint;
                }
            }
        }
    }

    Ok(NormalizationAuditReport {
        status: if counterexample.is_none() { AuditStatus::Pass } else { AuditStatus::Fail },
        checked_count: checked,
        counterexample,
    })
}

/// Convenience for the common audit entry point: every selection over the
/// bare scene of a graph cut along all edges (one copy each, no disks).
pub fn audit_graph(
    graph: &Arc<PantsGraph>,
    budget: u64,
) -> Result<NormalizationAuditReport, EnumerationError> {
    let sizes: Vec<(&str, usize)> =
        graph.edges().iter().map(|e| (e.id.as_str(), 1)).collect();
    let scene = Arc::new(
        Scene::with_auto_stacks(Arc::clone(graph), &sizes, Vec::new())
            .expect("single copies on every edge form a valid scene"),
    );
    audit_normalization(&scene, budget)
}
