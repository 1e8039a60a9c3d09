//! Additive functions on classes of pants.
//!
//! An additive function assigns a rational in `[0,1]` to every class of
//! pants, takes the value 1 on the whole surface, and splits as a sum over
//! disjoint classes.  Three shapes are supported: the normalized complexity
//! `|S| / (2g-2)`; functions derived from a rational mass distribution on
//! pants interiors and decomposition curves, where a curve's mass is split
//! between its two sides by a crossing weight and coorientation; and raw
//! value tables, which exist chiefly so the audits have something that can
//! fail.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use num::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{self, AuditStatus, EnumerationError};
use crate::rational::{rat, Rational};
use crate::surface::{EdgeId, NormalClass, PantsGraph, VertexId};

/// Side of an edge a coorientation points toward, in the edge's stored
/// `(first, second)` endpoint order.  Loops keep the stack-order convention:
/// their two ends are distinguished by position, not by vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Coorientation {
    TowardFirst,
    TowardSecond,
}

/// Rational mass distribution on a pants decomposition.
///
/// `a` carries the mass of each open pants piece and `b` the mass of each
/// decomposition curve; together they must total 1.  Each massive curve
/// additionally carries a crossing weight `w` in `[0,1]` and a coorientation
/// `c`: when the curve lies on the boundary of a class, the class receives
/// the share `w` of the curve's mass if the outward direction (toward the
/// endpoint outside the class) agrees with `c`, and `1-w` otherwise.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MeasureWeights {
    pub a: BTreeMap<VertexId, Rational>,
    pub b: BTreeMap<EdgeId, Rational>,
    pub w: BTreeMap<EdgeId, Rational>,
    pub c: BTreeMap<EdgeId, Coorientation>,
}

impl MeasureWeights {
    /// Affine combination `lambda*self + (1-lambda)*other` in the space of
    /// mass distributions.  Masses mix componentwise; each mixed curve's
    /// crossing data is renormalized so the share flowing toward the first
    /// endpoint is the mass-weighted mix of the operands' first-endpoint
    /// shares (expressed with a `TowardFirst` coorientation).
    pub fn mix(&self, other: &Self, lambda: &Rational) -> Self {
        let rest = Rational::one() - lambda;
        let mut mixed = MeasureWeights::default();
        for vertex in self.a.keys().chain(other.a.keys()) {
            let value = lambda * value_or_zero(&self.a, vertex)
                + &rest * value_or_zero(&other.a, vertex);
            if !value.is_zero() {
                mixed.a.insert(*vertex, value);
            }
        }
        for edge in self.b.keys().chain(other.b.keys()) {
            let left_mass = value_or_zero(&self.b, edge);
            let right_mass = value_or_zero(&other.b, edge);
            let mass = lambda * &left_mass + &rest * &right_mass;
            if mass.is_zero() {
                continue;
            }
            let flow = lambda * left_mass * self.first_end_share(edge)
                + &rest * right_mass * other.first_end_share(edge);
            mixed.w.insert(edge.clone(), flow / &mass);
            mixed.c.insert(edge.clone(), Coorientation::TowardFirst);
            mixed.b.insert(edge.clone(), mass);
        }
        mixed
    }

    /// Share of the edge's mass that flows to a class whose outward
    /// direction points toward the first endpoint.  Zero for massless edges
    /// (where no crossing data is required).
    fn first_end_share(&self, edge: &EdgeId) -> Rational {
        match (self.w.get(edge), self.c.get(edge)) {
            (Some(w), Some(Coorientation::TowardFirst)) => w.clone(),
            (Some(w), Some(Coorientation::TowardSecond)) => Rational::one() - w,
            _ => Rational::zero(),
        }
    }
}

fn value_or_zero<K: Ord>(map: &BTreeMap<K, Rational>, key: &K) -> Rational {
    map.get(key).cloned().unwrap_or_else(Rational::zero)
}

/// Construction or evaluation failure for an additive function.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdditiveError {
    #[error("pants and curve masses sum to {0}, expected exactly 1")]
    MassNotNormalized(Rational),
    #[error("{name} = {value} is outside its allowed range")]
    WeightOutOfRange { name: String, value: Rational },
    #[error("edge {0:?} carries mass but lacks a crossing weight or coorientation")]
    MissingCrossingData(EdgeId),
    #[error("weights reference unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("weights reference unknown edge {0:?}")]
    UnknownEdge(EdgeId),
    #[error("no table entry for the class {{{0}}}")]
    MissingEntry(String),
    #[error("the operands live over different graphs")]
    GraphMismatch,
    #[error("graph too large to tabulate: {0} pants pieces")]
    GraphTooLarge(usize),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// The three supported shapes of an additive function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdditiveKind {
    /// `|S| / (2g-2)`.
    Complexity,
    /// Derived from a mass distribution (validated, hence always additive).
    Weighted(MeasureWeights),
    /// Explicit values per class; not validated beyond key sanity, so it can
    /// encode broken candidates for negative testing.  A missing empty class
    /// evaluates to 0.
    Table(BTreeMap<BTreeSet<VertexId>, Rational>),
}

/// A rational-valued function on classes of pants over a fixed graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveFunction {
    graph: Arc<PantsGraph>,
    kind: AdditiveKind,
}

impl AdditiveFunction {
    /// The normalized complexity `S -> |S| / (2g-2)`.
    pub fn complexity(graph: Arc<PantsGraph>) -> Self {
        Self { graph, kind: AdditiveKind::Complexity }
    }

    /// Validates a mass distribution against the graph and wraps it.
    ///
    /// Requires known vertices and edges, nonnegative masses totalling 1,
    /// crossing weights in `[0,1]`, and crossing data on every massive edge.
    /// Zero masses are dropped, as is crossing data for massless edges, so
    /// equal functions compare equal.
    pub fn from_weights(
        graph: Arc<PantsGraph>,
        weights: MeasureWeights,
    ) -> Result<Self, AdditiveError> {
        for vertex in weights.a.keys() {
            if !graph.has_vertex(*vertex) {
                return Err(AdditiveError::UnknownVertex(*vertex));
            }
        }
        for edge in weights.b.keys().chain(weights.w.keys()).chain(weights.c.keys()) {
            if graph.edge(edge).is_none() {
                return Err(AdditiveError::UnknownEdge(edge.clone()));
            }
        }
        for (vertex, value) in &weights.a {
            if value < &Rational::zero() {
                return Err(AdditiveError::WeightOutOfRange {
                    name: format!("a[{vertex}]"),
                    value: value.clone(),
                });
            }
        }
        for (edge, value) in &weights.b {
            if value < &Rational::zero() {
                return Err(AdditiveError::WeightOutOfRange {
                    name: format!("b[{edge}]"),
                    value: value.clone(),
                });
            }
        }
        for (edge, value) in &weights.w {
            if value < &Rational::zero() || value > &Rational::one() {
                return Err(AdditiveError::WeightOutOfRange {
                    name: format!("w[{edge}]"),
                    value: value.clone(),
                });
            }
        }
        let total: Rational =
            weights.a.values().chain(weights.b.values()).sum();
        if !total.is_one() {
            return Err(AdditiveError::MassNotNormalized(total));
        }
        let mut normalized = MeasureWeights {
            a: weights.a.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            ..MeasureWeights::default()
        };
        for (edge, mass) in weights.b {
            if mass.is_zero() {
                continue;
            }
            match (weights.w.get(&edge), weights.c.get(&edge)) {
                (Some(w), Some(c)) => {
                    normalized.w.insert(edge.clone(), w.clone());
                    normalized.c.insert(edge.clone(), *c);
                }
                _ => return Err(AdditiveError::MissingCrossingData(edge)),
            }
            normalized.b.insert(edge, mass);
        }
        Ok(Self { graph, kind: AdditiveKind::Weighted(normalized) })
    }

    /// Wraps explicit per-class values.  Keys must use the graph's vertices;
    /// the values themselves are deliberately unchecked.
    pub fn from_table(
        graph: Arc<PantsGraph>,
        entries: BTreeMap<BTreeSet<VertexId>, Rational>,
    ) -> Result<Self, AdditiveError> {
        for class in entries.keys() {
            for vertex in class {
                if !graph.has_vertex(*vertex) {
                    return Err(AdditiveError::UnknownVertex(*vertex));
                }
            }
        }
        Ok(Self { graph, kind: AdditiveKind::Table(entries) })
    }

    pub fn graph(&self) -> &Arc<PantsGraph> {
        &self.graph
    }

    pub fn kind(&self) -> &AdditiveKind {
        &self.kind
    }

    /// Value on a class of pants.
    pub fn eval(&self, class: &NormalClass) -> Result<Rational, AdditiveError> {
        if class.graph().as_ref() != self.graph.as_ref() {
            return Err(AdditiveError::GraphMismatch);
        }
        let members = class.members();
        match &self.kind {
            AdditiveKind::Complexity => {
                Ok(rat(members.len() as i64, self.graph.pants_count() as i64))
            }
            AdditiveKind::Weighted(weights) => {
                let mut total: Rational =
                    members.iter().map(|v| value_or_zero(&weights.a, v)).sum();
                for (edge, mass) in &weights.b {
                    let ends = self.graph.edge(edge).expect("validated edge").ends;
                    match (members.contains(&ends.0), members.contains(&ends.1)) {
                        (true, true) => total += mass,
                        (false, false) => {}
                        (first_in, _) => {
                            // Boundary edge: outward points toward the
                            // endpoint outside the class.
                            let share = if first_in {
                                Rational::one() - weights.first_end_share(edge)
                            } else {
                                weights.first_end_share(edge)
                            };
                            total += share * mass;
                        }
                    }
                }
                Ok(total)
            }
            AdditiveKind::Table(entries) => match entries.get(members) {
                Some(value) => Ok(value.clone()),
                None if members.is_empty() => Ok(Rational::zero()),
                None => Err(AdditiveError::MissingEntry(members.iter().join(","))),
            },
        }
    }

    /// True when every class evaluates to 0 or 1.
    pub fn is_simple(&self, budget: u64) -> Result<bool, AdditiveError> {
        let count = enumerate::check_count_budget(self.graph.pants_count(), budget)?;
        for mask in 0..count {
            let class = self.class_from_mask(mask);
            let value = self.eval(&class)?;
            if !value.is_zero() && !value.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Affine combination `lambda*left + (1-lambda)*right` as a function.
    ///
    /// Two weighted operands mix at the mass level, exercising the fact that
    /// deriving a function from masses is affine; any other combination is
    /// tabulated valuewise.
    pub fn mix(
        left: &Self,
        right: &Self,
        lambda: &Rational,
    ) -> Result<Self, AdditiveError> {
        if left.graph.as_ref() != right.graph.as_ref() {
            return Err(AdditiveError::GraphMismatch);
        }
        if lambda < &Rational::zero() || lambda > &Rational::one() {
            return Err(AdditiveError::WeightOutOfRange {
                name: "lambda".into(),
                value: lambda.clone(),
            });
        }
        if let (AdditiveKind::Weighted(lw), AdditiveKind::Weighted(rw)) =
            (&left.kind, &right.kind)
        {
            return Self::from_weights(Arc::clone(&left.graph), lw.mix(rw, lambda));
        }
        let pants = left.graph.pants_count();
        if pants > 20 {
            return Err(AdditiveError::GraphTooLarge(pants));
        }
        let rest = Rational::one() - lambda;
        let mut entries = BTreeMap::new();
        for mask in 0..1u64 << pants {
            let class = left.class_from_mask(mask);
            let value = lambda * left.eval(&class)? + &rest * right.eval(&class)?;
            entries.insert(class.members().clone(), value);
        }
        Self::from_table(Arc::clone(&left.graph), entries)
    }

    fn class_from_mask(&self, mask: u64) -> NormalClass {
        NormalClass::new(
            Arc::clone(&self.graph),
            enumerate::members_from_mask(&self.graph, mask),
        )
        .expect("mask members come from the graph")
    }

    /// Exhaustively checks the defining laws over every class.
    ///
    /// In order: value 1 on the whole surface; additivity over each disjoint
    /// pair; monotonicity over each nested pair; complement values summing
    /// to 1; all values within `[0,1]`.  A value the function cannot produce
    /// (a table miss) is itself reported as a counterexample.
    pub fn validate(&self, budget: u64) -> Result<AdditiveValidationReport, EnumerationError> {
        let count = enumerate::check_count_budget(self.graph.pants_count(), budget)?;
        let full = count - 1;
        let values: Vec<Option<Rational>> = (0..count)
            .map(|mask| self.eval(&self.class_from_mask(mask)).ok())
            .collect();
        let members =
            |mask: u64| -> Vec<VertexId> { enumerate::members_from_mask(&self.graph, mask).into_iter().collect() };

        let mut checked = 0u64;
        let mut counterexample = None;
        let fail = |law: &str, first: u64, second: Option<u64>, detail: String| {
            Some(AdditiveCounterexample {
                law: law.into(),
                first: members(first),
                second: second.map(members),
                detail,
            })
        };
        let value_of = |mask: u64| -> Result<&Rational, AdditiveCounterexample> {
            values[mask as usize].as_ref().ok_or_else(|| AdditiveCounterexample {
                law: "totality".into(),
                first: members(mask),
                second: None,
                detail: "the function has no value for this class".into(),
            })
        };

        'checks: {
            checked += 1;
            match value_of(full) {
                Err(missing) => {
                    counterexample = Some(missing);
                    break 'checks;
                }
                Ok(value) if !value.is_one() => {
                    counterexample =
                        fail("normalized", full, None, format!("the whole surface maps to {value}"));
                    break 'checks;
                }
                Ok(_) => {}
            }
            for a in 0..count {
                for b in a..count {
                    if a & b != 0 {
                        continue;
                    }
                    checked += 1;
                    let (va, vb, vu) = match (value_of(a), value_of(b), value_of(a | b)) {
                        (Ok(va), Ok(vb), Ok(vu)) => (va, vb, vu),
                        (Err(m), _, _) | (_, Err(m), _) | (_, _, Err(m)) => {
                            counterexample = Some(m);
                            break 'checks;
                        }
                    };
                    if &(va + vb) != vu {
                        counterexample = fail(
                            "additive",
                            a,
                            Some(b),
                            format!("{va} + {vb} differs from the union's value {vu}"),
                        );
                        break 'checks;
                    }
                }
            }
            for a in 0..count {
                for b in 0..count {
                    if a == b || a & !b != 0 {
                        continue;
                    }
                    checked += 1;
                    let (va, vb) = match (value_of(a), value_of(b)) {
                        (Ok(va), Ok(vb)) => (va, vb),
                        (Err(m), _) | (_, Err(m)) => {
                            counterexample = Some(m);
                            break 'checks;
                        }
                    };
                    if va > vb {
                        counterexample = fail(
                            "monotone",
                            a,
                            Some(b),
                            format!("{va} exceeds the containing class's value {vb}"),
                        );
                        break 'checks;
                    }
                }
            }
            for mask in 0..count {
                checked += 1;
                let (v, vi) = match (value_of(mask), value_of(!mask & full)) {
                    (Ok(v), Ok(vi)) => (v, vi),
                    (Err(m), _) | (_, Err(m)) => {
                        counterexample = Some(m);
                        break 'checks;
                    }
                };
                if !(v + vi).is_one() {
                    counterexample = fail(
                        "complement",
                        mask,
                        Some(!mask & full),
                        format!("{v} + {vi} differs from 1"),
                    );
                    break 'checks;
                }
            }
            for mask in 0..count {
                checked += 1;
                let value = match value_of(mask) {
                    Ok(value) => value,
                    Err(m) => {
                        counterexample = Some(m);
                        break 'checks;
                    }
                };
                if value < &Rational::zero() || value > &Rational::one() {
                    counterexample =
                        fail("range", mask, None, format!("value {value} lies outside [0,1]"));
                    break 'checks;
                }
            }
        }

        Ok(AdditiveValidationReport {
            status: if counterexample.is_none() { AuditStatus::Pass } else { AuditStatus::Fail },
            checked_count: checked,
            counterexample,
        })
    }
}

/// First failure found by [`AdditiveFunction::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdditiveCounterexample {
    /// Which law failed.
    pub law: String,
    /// Members of the first class involved.
    pub first: Vec<VertexId>,
    /// Members of the second class, for pairwise laws.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second: Option<Vec<VertexId>>,
    /// Human-readable account of the violation.
    pub detail: String,
}

/// Outcome of [`AdditiveFunction::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdditiveValidationReport {
    pub status: AuditStatus,
    /// Individual law instances checked.
    pub checked_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<AdditiveCounterexample>,
}
