//! JSON formats and file loading for all domain objects.
//!
//! Every object on disk is a single JSON document.  A scene either embeds
//! its graph (`"graph"`) or points at a graph file (`"graphRef"`), and
//! subsurfaces and filtrations do the same with `"scene"`/`"sceneRef"`;
//! references are resolved relative to the directory of the file that
//! contains them.  Rationals travel as strings (`"3/10"`, `"2"`), never as
//! floats, and all maps are emitted in sorted order so serialization is
//! byte-stable.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::additive::{AdditiveFunction, AdditiveKind, Coorientation, MeasureWeights};
use crate::quasistate::{Filtration, FiltrationStep};
use crate::rational::{format_rational, parse_rational};
use crate::surface::{
    DiskAnchor, DiskNode, EdgeRecord, PantsGraph, Region, Scene, Submanifold, VertexId,
};

/// Failure to load a domain object from disk.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed JSON; the message carries the line and column.
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    /// Well-formed JSON describing an invalid object; the message names the
    /// violated invariant.
    #[error("{path}: {message}")]
    Validation { path: PathBuf, message: String },
}

fn invalid(path: &Path, message: impl Into<String>) -> IoError {
    IoError::Validation { path: path.to_owned(), message: message.into() }
}

fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.to_owned(), source })
}

fn parse_doc<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text)
        .map_err(|source| IoError::Parse { path: path.to_owned(), source })
}

/// Resolves a reference found in the file at `origin`.
fn sibling(origin: &Path, reference: &str) -> PathBuf {
    match origin.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => dir.join(reference),
        _ => PathBuf::from(reference),
    }
}

// ---------------------------------------------------------------------------
// Graphs

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    genus: u32,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: String,
    ends: [VertexId; 2],
}

fn graph_from_doc(doc: GraphDoc) -> Result<PantsGraph, String> {
    let edges = doc
        .edges
        .into_iter()
        .map(|e| EdgeRecord { id: e.id, ends: (e.ends[0], e.ends[1]) })
        .collect();
    PantsGraph::new(doc.genus, doc.vertices, edges).map_err(|e| e.to_string())
}

fn graph_to_doc(graph: &PantsGraph) -> GraphDoc {
    GraphDoc {
        genus: graph.genus(),
        vertices: graph.vertices().to_vec(),
        edges: graph
            .edges()
            .iter()
            .map(|e| EdgeDoc { id: e.id.clone(), ends: [e.ends.0, e.ends.1] })
            .collect(),
    }
}

pub fn load_graph(path: &Path) -> Result<Arc<PantsGraph>, IoError> {
    let doc: GraphDoc = parse_doc(path, &read_text(path)?)?;
    graph_from_doc(doc).map(Arc::new).map_err(|m| invalid(path, m))
}

pub fn graph_json(graph: &PantsGraph) -> serde_json::Value {
    serde_json::to_value(graph_to_doc(graph)).expect("graph documents serialize")
}

// ---------------------------------------------------------------------------
// Scenes

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SceneDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph_ref: Option<String>,
    stacks: BTreeMap<String, StackDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    disks: Vec<DiskDoc>,
}

/// A stack is either spelled out as curve ids or abbreviated to a copy
/// count, in which case the curves are named `edge.1`, `edge.2`, ….
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StackDoc {
    Count(usize),
    Ids(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskDoc {
    id: String,
    anchor: AnchorDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AnchorDoc {
    Pants(VertexId),
    Gap(String, usize),
    Inside(String),
}

fn scene_from_doc(doc: SceneDoc, origin: &Path) -> Result<Arc<Scene>, IoError> {
    let graph = match (doc.graph, doc.graph_ref) {
        (Some(inline), None) => {
            Arc::new(graph_from_doc(inline).map_err(|m| invalid(origin, m))?)
        }
        (None, Some(reference)) => load_graph(&sibling(origin, &reference))?,
        _ => {
            return Err(invalid(
                origin,
                "a scene needs exactly one of \"graph\" and \"graphRef\"",
            ))
        }
    };
    let stacks = doc
        .stacks
        .into_iter()
        .map(|(edge, stack)| {
            let ids = match stack {
                StackDoc::Ids(ids) => ids,
                StackDoc::Count(m) => (1..=m).map(|i| format!("{edge}.{i}")).collect(),
            };
            (edge, ids)
        })
        .collect();
    let disks = doc
        .disks
        .into_iter()
        .map(|d| DiskNode {
            id: d.id,
            anchor: match d.anchor {
                AnchorDoc::Pants(v) => DiskAnchor::Pants(v),
                AnchorDoc::Gap(edge, index) => DiskAnchor::Gap(edge, index),
                AnchorDoc::Inside(parent) => DiskAnchor::InsideDisk(parent),
            },
        })
        .collect();
    Scene::new(graph, stacks, disks)
        .map(Arc::new)
        .map_err(|e| invalid(origin, e.to_string()))
}

fn scene_to_doc(scene: &Scene) -> SceneDoc {
    SceneDoc {
        graph: Some(graph_to_doc(scene.graph())),
        graph_ref: None,
        stacks: scene
            .stacks()
            .iter()
            .map(|(edge, ids)| (edge.clone(), StackDoc::Ids(ids.clone())))
            .collect(),
        disks: scene
            .disks()
            .iter()
            .map(|d| DiskDoc {
                id: d.id.clone(),
                anchor: match &d.anchor {
                    DiskAnchor::Pants(v) => AnchorDoc::Pants(*v),
                    DiskAnchor::Gap(edge, index) => AnchorDoc::Gap(edge.clone(), *index),
                    DiskAnchor::InsideDisk(parent) => AnchorDoc::Inside(parent.clone()),
                },
            })
            .collect(),
    }
}

pub fn load_scene(path: &Path) -> Result<Arc<Scene>, IoError> {
    let doc: SceneDoc = parse_doc(path, &read_text(path)?)?;
    scene_from_doc(doc, path)
}

pub fn scene_json(scene: &Scene) -> serde_json::Value {
    serde_json::to_value(scene_to_doc(scene)).expect("scene documents serialize")
}

/// A file accepted by the audit command: either a bare graph or a scene.
pub enum GraphOrScene {
    Graph(Arc<PantsGraph>),
    Scene(Arc<Scene>),
}

/// Loads a graph or a scene, telling them apart by the `stacks` field.
pub fn load_graph_or_scene(path: &Path) -> Result<GraphOrScene, IoError> {
    let text = read_text(path)?;
    let probe: serde_json::Value = parse_doc(path, &text)?;
    if probe.get("stacks").is_some() {
        let doc: SceneDoc = parse_doc(path, &text)?;
        Ok(GraphOrScene::Scene(scene_from_doc(doc, path)?))
    } else {
        let doc: GraphDoc = parse_doc(path, &text)?;
        Ok(GraphOrScene::Graph(
            graph_from_doc(doc).map(Arc::new).map_err(|m| invalid(path, m))?,
        ))
    }
}

// ---------------------------------------------------------------------------
// Subsurfaces

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SubmanifoldDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scene: Option<SceneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scene_ref: Option<String>,
    #[serde(rename = "in")]
    in_regions: Vec<String>,
}

fn resolve_scene(
    inline: Option<SceneDoc>,
    reference: Option<String>,
    origin: &Path,
) -> Result<Arc<Scene>, IoError> {
    match (inline, reference) {
        (Some(doc), None) => scene_from_doc(doc, origin),
        (None, Some(reference)) => load_scene(&sibling(origin, &reference)),
        _ => Err(invalid(origin, "exactly one of \"scene\" and \"sceneRef\" is required")),
    }
}

fn submanifold_from_ids(
    scene: &Arc<Scene>,
    ids: &[String],
) -> Result<Submanifold, String> {
    let mut regions = BTreeSet::new();
    for id in ids {
        let region =
            Region::parse_id(id).ok_or_else(|| format!("malformed region id {id:?}"))?;
        regions.insert(region);
    }
    Submanifold::new(Arc::clone(scene), regions).map_err(|e| e.to_string())
}

pub fn load_submanifold(path: &Path) -> Result<Submanifold, IoError> {
    let doc: SubmanifoldDoc = parse_doc(path, &read_text(path)?)?;
    let scene = resolve_scene(doc.scene, doc.scene_ref, path)?;
    submanifold_from_ids(&scene, &doc.in_regions).map_err(|m| invalid(path, m))
}

pub fn submanifold_json(w: &Submanifold) -> serde_json::Value {
    let doc = SubmanifoldDoc {
        scene: Some(scene_to_doc(w.scene())),
        scene_ref: None,
        in_regions: w.in_regions().iter().map(Region::id_string).collect(),
    };
    serde_json::to_value(doc).expect("subsurface documents serialize")
}

// ---------------------------------------------------------------------------
// Additive functions

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct WeightsDoc {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    a: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    b: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    w: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    c: BTreeMap<String, CoorientationDoc>,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum CoorientationDoc {
    First,
    Second,
}

/// The function part of a measure: the built-in complexity function, a mass
/// distribution, or a raw value table keyed by comma-joined pants ids (the
/// empty key is the empty class).
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NuDoc {
    Complexity,
    Weighted(WeightsDoc),
    Table(BTreeMap<String, String>),
}

fn weights_from_doc(doc: WeightsDoc) -> Result<MeasureWeights, String> {
    let mut weights = MeasureWeights::default();
    for (vertex, text) in doc.a {
        let v: VertexId = vertex
            .parse()
            .map_err(|_| format!("bad pants id {vertex:?} in \"a\""))?;
        weights.a.insert(v, parse_rational(&text).map_err(|e| format!("a[{vertex}]: {e}"))?);
    }
    for (edge, text) in doc.b {
        weights
            .b
            .insert(edge.clone(), parse_rational(&text).map_err(|e| format!("b[{edge}]: {e}"))?);
    }
    for (edge, text) in doc.w {
        weights
            .w
            .insert(edge.clone(), parse_rational(&text).map_err(|e| format!("w[{edge}]: {e}"))?);
    }
    for (edge, c) in doc.c {
        weights.c.insert(
            edge,
            match c {
                CoorientationDoc::First => Coorientation::TowardFirst,
                CoorientationDoc::Second => Coorientation::TowardSecond,
            },
        );
    }
    Ok(weights)
}

fn weights_to_doc(weights: &MeasureWeights) -> WeightsDoc {
    WeightsDoc {
        a: weights.a.iter().map(|(v, m)| (v.to_string(), format_rational(m))).collect(),
        b: weights.b.iter().map(|(e, m)| (e.clone(), format_rational(m))).collect(),
        w: weights.w.iter().map(|(e, m)| (e.clone(), format_rational(m))).collect(),
        c: weights
            .c
            .iter()
            .map(|(e, c)| {
                let doc = match c {
                    Coorientation::TowardFirst => CoorientationDoc::First,
                    Coorientation::TowardSecond => CoorientationDoc::Second,
                };
                (e.clone(), doc)
            })
            .collect(),
    }
}

fn member_key(members: &BTreeSet<VertexId>) -> String {
    members.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_member_key(key: &str) -> Result<BTreeSet<VertexId>, String> {
    if key.trim().is_empty() {
        return Ok(BTreeSet::new());
    }
    key.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| format!("bad pants id {part:?} in table key {key:?}"))
        })
        .collect()
}

fn nu_from_doc(doc: NuDoc, graph: &Arc<PantsGraph>) -> Result<AdditiveFunction, String> {
    match doc {
        NuDoc::Complexity => Ok(AdditiveFunction::complexity(Arc::clone(graph))),
        NuDoc::Weighted(weights) => {
            AdditiveFunction::from_weights(Arc::clone(graph), weights_from_doc(weights)?)
                .map_err(|e| e.to_string())
        }
        NuDoc::Table(entries) => {
            let mut table = BTreeMap::new();
            for (key, text) in entries {
                let value = parse_rational(&text)
                    .map_err(|e| format!("table[{key:?}]: {e}"))?;
                table.insert(parse_member_key(&key)?, value);
            }
            AdditiveFunction::from_table(Arc::clone(graph), table)
                .map_err(|e| e.to_string())
        }
    }
}

fn nu_to_doc(nu: &AdditiveFunction) -> NuDoc {
    match nu.kind() {
        AdditiveKind::Complexity => NuDoc::Complexity,
        AdditiveKind::Weighted(weights) => NuDoc::Weighted(weights_to_doc(weights)),
        AdditiveKind::Table(entries) => NuDoc::Table(
            entries
                .iter()
                .map(|(members, value)| (member_key(members), format_rational(value)))
                .collect(),
        ),
    }
}

/// Loads a function document and binds it to the given graph.
pub fn load_nu(path: &Path, graph: &Arc<PantsGraph>) -> Result<AdditiveFunction, IoError> {
    let doc: NuDoc = parse_doc(path, &read_text(path)?)?;
    nu_from_doc(doc, graph).map_err(|m| invalid(path, m))
}

pub fn nu_json(nu: &AdditiveFunction) -> serde_json::Value {
    serde_json::to_value(nu_to_doc(nu)).expect("function documents serialize")
}

// ---------------------------------------------------------------------------
// Filtrations

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct FiltrationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scene: Option<SceneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scene_ref: Option<String>,
    t_min: String,
    t_max: String,
    steps: Vec<StepDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDoc {
    t: String,
    #[serde(rename = "in")]
    in_regions: Vec<String>,
}

pub fn load_filtration(path: &Path) -> Result<Filtration, IoError> {
    let doc: FiltrationDoc = parse_doc(path, &read_text(path)?)?;
    let scene = resolve_scene(doc.scene, doc.scene_ref, path)?;
    let t_min =
        parse_rational(&doc.t_min).map_err(|e| invalid(path, format!("tMin: {e}")))?;
    let t_max =
        parse_rational(&doc.t_max).map_err(|e| invalid(path, format!("tMax: {e}")))?;
    let mut steps = Vec::with_capacity(doc.steps.len());
    for (index, step) in doc.steps.into_iter().enumerate() {
        let time = parse_rational(&step.t)
            .map_err(|e| invalid(path, format!("steps[{index}].t: {e}")))?;
        let part = submanifold_from_ids(&scene, &step.in_regions)
            .map_err(|m| invalid(path, format!("steps[{index}]: {m}")))?;
        steps.push(FiltrationStep { time, part });
    }
    Filtration::new(scene, t_min, t_max, steps).map_err(|e| invalid(path, e.to_string()))
}

pub fn filtration_json(f: &Filtration) -> serde_json::Value {
    let doc = FiltrationDoc {
        scene: Some(scene_to_doc(f.scene())),
        scene_ref: None,
        t_min: format_rational(f.t_min()),
        t_max: format_rational(f.t_max()),
        steps: f
            .steps()
            .iter()
            .map(|step| StepDoc {
                t: format_rational(&step.time),
                in_regions: step.part.in_regions().iter().map(Region::id_string).collect(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("filtration documents serialize")
}
