//! Trivalent pants graphs and normal isotopy classes.
//!
//! A pants decomposition of a closed orientable genus-g surface (g >= 2) cuts
//! it into 2g-2 pairs of pants along 3g-3 curves.  Its combinatorics form a
//! connected trivalent multigraph: one vertex per pair of pants, one edge per
//! decomposition curve, where a loop contributes twice to the degree of its
//! vertex.  Up to isotopy, a normal subsurface (no contractible and no
//! mutually parallel boundary components) is determined by the set of pants
//! it covers, so isotopy classes are plain vertex subsets here.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

/// Pair-of-pants identifier (a vertex of the pants graph).
pub type VertexId = u32;
/// Decomposition-curve identifier (an edge of the pants graph).
pub type EdgeId = String;

/// A decomposition curve joining two (possibly equal) pairs of pants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub ends: (VertexId, VertexId),
}

impl EdgeRecord {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }
}

/// Structural defects rejected when building a [`PantsGraph`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),
    #[error("genus {genus} needs {expected} pants, got {actual}")]
    WrongVertexCount { genus: u32, expected: usize, actual: usize },
    #[error("genus {genus} needs {expected} curves, got {actual}")]
    WrongEdgeCount { genus: u32, expected: usize, actual: usize },
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(EdgeId),
    #[error("invalid edge id {0:?}: ids must be non-empty and free of ':' and whitespace")]
    InvalidEdgeId(EdgeId),
    #[error("edge {edge:?} references unknown vertex {vertex}")]
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("degree != 3 at vertex {vertex} (loops count twice): got {degree}")]
    BadDegree { vertex: VertexId, degree: usize },
    #[error("graph is not connected")]
    Disconnected,
}

/// Connected trivalent multigraph encoding a pants decomposition.
///
/// Vertices are kept sorted and edges sorted by id, so two graphs with the
/// same combinatorics compare equal regardless of input order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PantsGraph {
    genus: u32,
    vertices: Vec<VertexId>,
    edges: Vec<EdgeRecord>,
}

impl PantsGraph {
    /// Validates and builds a pants graph for the given genus.
    pub fn new(
        genus: u32,
        mut vertices: Vec<VertexId>,
        mut edges: Vec<EdgeRecord>,
    ) -> Result<Self, GraphError> {
        if genus < 2 {
            return Err(GraphError::GenusTooSmall(genus));
        }
        let expected_vertices = 2 * genus as usize - 2;
        let expected_edges = 3 * genus as usize - 3;
        if vertices.len() != expected_vertices {
            return Err(GraphError::WrongVertexCount {
                genus,
                expected: expected_vertices,
                actual: vertices.len(),
            });
        }
        if edges.len() != expected_edges {
            return Err(GraphError::WrongEdgeCount {
                genus,
                expected: expected_edges,
                actual: edges.len(),
            });
        }
        vertices.sort_unstable();
        if let Some(dup) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(dup[0]));
        }
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(dup) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateEdge(dup[0].id.clone()));
        }
        let vertex_set: BTreeSet<VertexId> = vertices.iter().copied().collect();
        for edge in &edges {
            if edge.id.is_empty() || edge.id.contains(':') || edge.id.chars().any(char::is_whitespace) {
                return Err(GraphError::InvalidEdgeId(edge.id.clone()));
            }
            for vertex in [edge.ends.0, edge.ends.1] {
                if !vertex_set.contains(&vertex) {
                    return Err(GraphError::UnknownEndpoint { edge: edge.id.clone(), vertex });
                }
            }
        }
        let graph = Self { genus, vertices, edges };
        for &vertex in &graph.vertices {
            let degree = graph.degree(vertex);
            if degree != 3 {
                return Err(GraphError::BadDegree { vertex, degree });
            }
        }
        if !graph.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(graph)
    }

    /// Builds the canonical genus-g graph: vertices 0..2g-3 arranged on a
    /// cycle, plus the perfect matching i <-> i + (g-1) mod (2g-2).  Edges
    /// are lettered A, B, C, ... (cycle edges first, then matching edges).
    /// For g = 2 this is the theta graph: two vertices joined by A, B, C.
    pub fn canonical(genus: u32) -> Result<Self, GraphError> {
        if genus < 2 {
            return Err(GraphError::GenusTooSmall(genus));
        }
        let n = 2 * genus - 2;
        let vertices: Vec<VertexId> = (0..n).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push(EdgeRecord {
                id: edge_name(edges.len()),
                ends: (i, (i + 1) % n),
            });
        }
        for i in 0..genus - 1 {
            edges.push(EdgeRecord {
                id: edge_name(edges.len()),
                ends: (i, (i + genus - 1) % n),
            });
        }
        Self::new(genus, vertices, edges)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Number of pairs of pants, 2g - 2.
    pub fn pants_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn edge(&self, id: &str) -> Option<&EdgeRecord> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn has_vertex(&self, vertex: VertexId) -> bool {
        self.vertices.binary_search(&vertex).is_ok()
    }

    /// Degree with loops counted twice; 3 for every vertex by construction.
    pub fn degree(&self, vertex: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| {
                usize::from(e.ends.0 == vertex) + usize::from(e.ends.1 == vertex)
            })
            .sum()
    }

    /// Connected components of the graph after deleting the edges for which
    /// `cut` holds, as a map vertex -> smallest vertex of its component.
    pub fn components_without<F: Fn(&EdgeRecord) -> bool>(
        &self,
        cut: F,
    ) -> BTreeMap<VertexId, VertexId> {
        let mut parent: BTreeMap<VertexId, VertexId> =
            self.vertices.iter().map(|&v| (v, v)).collect();
        fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
            let p = parent[&v];
            if p == v {
                return v;
            }
            let root = find(parent, p);
            parent.insert(v, root);
            root
        }
        for edge in &self.edges {
            if cut(edge) {
                continue;
            }
            let (a, b) = (find(&mut parent, edge.ends.0), find(&mut parent, edge.ends.1));
            // Union by value keeps the smallest vertex as the root, which is
            // what names the component.
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent.insert(hi, lo);
            }
        }
        let roots: Vec<VertexId> = self.vertices.clone();
        roots.into_iter().map(|v| (v, find(&mut parent, v))).collect()
    }

    fn is_connected(&self) -> bool {
        let components = self.components_without(|_| false);
        let mut roots: BTreeSet<VertexId> = BTreeSet::new();
        roots.extend(components.values());
        roots.len() == 1
    }
}

/// Deterministic edge names for generated graphs: A..Z, then E26, E27, ...
fn edge_name(index: usize) -> EdgeId {
    if index < 26 {
        char::from(b'A' + index as u8).to_string()
    } else {
        format!("E{index}")
    }
}

/// Isotopy class of a normal subsurface: the set of pants it covers.
///
/// The empty set is the class of the empty subsurface; the full vertex set is
/// the class of the whole surface.  Complexity counts pants, i.e. equals the
/// negative Euler characteristic of any representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalClass {
    graph: Arc<PantsGraph>,
    members: BTreeSet<VertexId>,
}

/// Defects rejected when building or combining [`NormalClass`] values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("class member {0} is not a vertex of the graph")]
    UnknownMember(VertexId),
    #[error("classes live over different graphs")]
    GraphMismatch,
    #[error("classes are not disjoint: both contain pants {0}")]
    NotDisjoint(VertexId),
}

impl NormalClass {
    pub fn new(graph: Arc<PantsGraph>, members: BTreeSet<VertexId>) -> Result<Self, ClassError> {
        if let Some(&bad) = members.iter().find(|&&v| !graph.has_vertex(v)) {
            return Err(ClassError::UnknownMember(bad));
        }
        Ok(Self { graph, members })
    }

    pub fn empty(graph: Arc<PantsGraph>) -> Self {
        Self { graph, members: BTreeSet::new() }
    }

    pub fn full(graph: Arc<PantsGraph>) -> Self {
        let members = graph.vertices().iter().copied().collect();
        Self { graph, members }
    }

    pub fn graph(&self) -> &Arc<PantsGraph> {
        &self.graph
    }

    pub fn members(&self) -> &BTreeSet<VertexId> {
        &self.members
    }

    pub fn contains(&self, vertex: VertexId) -> bool {
        self.members.contains(&vertex)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.graph.pants_count()
    }

    /// Number of pants covered; equals -chi of any representative.
    pub fn complexity(&self) -> usize {
        self.members.len()
    }

    /// The class of the closure of the complement.
    pub fn invert(&self) -> Self {
        let members = self
            .graph
            .vertices()
            .iter()
            .copied()
            .filter(|v| !self.members.contains(v))
            .collect();
        Self { graph: Arc::clone(&self.graph), members }
    }

    /// Edges with exactly one endpoint in the class; loops never qualify.
    pub fn boundary_edges(&self) -> Vec<&EdgeRecord> {
        self.graph
            .edges()
            .iter()
            .filter(|e| self.members.contains(&e.ends.0) != self.members.contains(&e.ends.1))
            .collect()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.graph == other.graph && self.members.is_subset(&other.members)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.graph == other.graph && self.members.is_disjoint(&other.members)
    }

    /// Disjoint sum of classes: the union of their pants sets.
    pub fn sum(&self, other: &Self) -> Result<Self, ClassError> {
        if self.graph != other.graph {
            return Err(ClassError::GraphMismatch);
        }
        if let Some(&shared) = self.members.intersection(&other.members).next() {
            return Err(ClassError::NotDisjoint(shared));
        }
        let members = self.members.union(&other.members).copied().collect();
        Ok(Self { graph: Arc::clone(&self.graph), members })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_genus_2_is_the_theta_graph() {
        let g = PantsGraph::canonical(2).unwrap();
        assert_eq!(g.vertices(), &[0, 1]);
        let ids: Vec<&str> = g.edges().iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, ["A", "B", "C"]);
        for edge in g.edges() {
            let mut ends = [edge.ends.0, edge.ends.1];
            ends.sort_unstable();
            assert_eq!(ends, [0, 1]);
        }
    }

    #[test]
    fn canonical_graphs_validate_for_a_range_of_genera() {
        for genus in 2..=9 {
            let g = PantsGraph::canonical(genus).unwrap();
            assert_eq!(g.pants_count(), 2 * genus as usize - 2);
            assert_eq!(g.edges().len(), 3 * genus as usize - 3);
            for &v in g.vertices() {
                assert_eq!(g.degree(v), 3, "vertex {v} at genus {genus}");
            }
        }
    }

    #[test]
    fn canonical_genus_3_matches_the_cycle_plus_matching_layout() {
        let g = PantsGraph::canonical(3).unwrap();
        assert_eq!(g.vertices(), &[0, 1, 2, 3]);
        let by_id: BTreeMap<&str, (u32, u32)> =
            g.edges().iter().map(|e| (e.id.as_str(), e.ends)).collect();
        assert_eq!(by_id["A"], (0, 1));
        assert_eq!(by_id["B"], (1, 2));
        assert_eq!(by_id["C"], (2, 3));
        assert_eq!(by_id["D"], (3, 0));
        assert_eq!(by_id["E"], (0, 2));
        assert_eq!(by_id["F"], (1, 3));
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(matches!(PantsGraph::canonical(1), Err(GraphError::GenusTooSmall(1))));
        // Wrong degree: a loop at vertex 0 plus two parallel bars gives
        // degree 4 at one end and degree 2 at the other.
        let err = PantsGraph::new(
            2,
            vec![0, 1],
            vec![
                EdgeRecord { id: "A".into(), ends: (0, 0) },
                EdgeRecord { id: "B".into(), ends: (0, 1) },
                EdgeRecord { id: "C".into(), ends: (0, 1) },
            ],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::BadDegree { vertex: 0, degree: 4 });
        // Two disjoint theta graphs satisfy every counting constraint for
        // genus 3 but do not describe a connected surface.
        let err = PantsGraph::new(
            3,
            vec![0, 1, 2, 3],
            vec![
                EdgeRecord { id: "A".into(), ends: (0, 1) },
                EdgeRecord { id: "B".into(), ends: (0, 1) },
                EdgeRecord { id: "C".into(), ends: (0, 1) },
                EdgeRecord { id: "D".into(), ends: (2, 3) },
                EdgeRecord { id: "E".into(), ends: (2, 3) },
                EdgeRecord { id: "F".into(), ends: (2, 3) },
            ],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::Disconnected);
        let err = PantsGraph::new(
            2,
            vec![0, 1],
            vec![
                EdgeRecord { id: "A".into(), ends: (0, 1) },
                EdgeRecord { id: "B".into(), ends: (1, 0) },
            ],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::WrongEdgeCount { genus: 2, expected: 3, actual: 2 });
        let err = PantsGraph::new(
            2,
            vec![0, 1],
            vec![
                EdgeRecord { id: "A".into(), ends: (0, 1) },
                EdgeRecord { id: "A".into(), ends: (0, 1) },
                EdgeRecord { id: "C".into(), ends: (0, 1) },
            ],
        )
        .unwrap_err();
        assert_eq!(err, GraphError::DuplicateEdge("A".into()));
    }

    #[test]
    fn loops_count_twice_toward_degree() {
        // Genus-2 graph with a loop: dumbbell (loop at each vertex plus a bar).
        let g = PantsGraph::new(
            2,
            vec![0, 1],
            vec![
                EdgeRecord { id: "bar".into(), ends: (0, 1) },
                EdgeRecord { id: "left".into(), ends: (0, 0) },
                EdgeRecord { id: "right".into(), ends: (1, 1) },
            ],
        )
        .unwrap();
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 3);
        assert!(g.edge("left").unwrap().is_loop());
    }

    #[test]
    fn class_inversion_and_boundary() {
        let g = Arc::new(PantsGraph::canonical(2).unwrap());
        let class = NormalClass::new(Arc::clone(&g), BTreeSet::from([0])).unwrap();
        assert_eq!(class.complexity(), 1);
        assert_eq!(class.invert().members(), &BTreeSet::from([1]));
        assert_eq!(class.invert().invert(), class);
        assert_eq!(class.boundary_edges().len(), 3);
        let sum = class.sum(&class.invert()).unwrap();
        assert!(sum.is_full());
        assert!(class.sum(&class).is_err());
    }

    #[test]
    fn components_without_cut_edges() {
        let g = PantsGraph::canonical(3).unwrap();
        // Cutting A, B, C, D (the cycle) leaves the matching E: 0-2, F: 1-3.
        let comps = g.components_without(|e| ["A", "B", "C", "D"].contains(&e.id.as_str()));
        assert_eq!(comps[&0], 0);
        assert_eq!(comps[&2], 0);
        assert_eq!(comps[&1], 1);
        assert_eq!(comps[&3], 1);
    }
}
