//! The combinatorial surface model: pants graphs, multicurve scenes, and
//! compact subsurfaces assembled from scene regions.

pub mod graph;
pub mod scene;
pub mod submanifold;

pub use graph::{ClassError, EdgeId, EdgeRecord, GraphError, NormalClass, PantsGraph, VertexId};
pub use scene::{
    CurveId, CurveInfo, CurveRef, DiskAnchor, DiskId, DiskNode, Region, RegionInfo, RegionMap,
    Scene, SceneError,
};
pub use submanifold::{
    from_cooriented_boundary, DisjointnessWitness, Submanifold, SubmanifoldError,
};
