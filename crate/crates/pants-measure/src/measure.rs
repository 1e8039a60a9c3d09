//! Topological measures on subsurfaces.
//!
//! An additive function on classes of pants induces a measure on all
//! subsurfaces by composing with the reduction to normal form: the measure
//! of a subsurface is the function's value on its class.  This module
//! evaluates that composite, tabulates it back into an additive function,
//! and audits the axioms it is supposed to satisfy — normalization,
//! monotonicity, additivity over disjoint unions, and the regularity pairing
//! with the complement.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::One;
use serde::Serialize;

use crate::additive::{AdditiveError, AdditiveFunction};
use crate::enumerate::{self, AuditStatus, EnumerationError};
use crate::normalize::normalize;
use crate::rational::Rational;
use crate::surface::{NormalClass, PantsGraph, Scene, Submanifold};

/// Value of the measure induced by `nu` on one subsurface.
pub fn tau(nu: &AdditiveFunction, w: &Submanifold) -> Result<Rational, AdditiveError> {
    if w.graph().as_ref() != nu.graph().as_ref() {
        return Err(AdditiveError::GraphMismatch);
    }
    nu.eval(&normalize(w))
}

/// A measure on subsurfaces, induced by an additive function on classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalMeasure {
    nu: AdditiveFunction,
}

impl TopologicalMeasure {
    pub fn new(nu: AdditiveFunction) -> Self {
        Self { nu }
    }

    pub fn nu(&self) -> &AdditiveFunction {
        &self.nu
    }

    pub fn graph(&self) -> &Arc<PantsGraph> {
        self.nu.graph()
    }

    /// Measure of a subsurface: the underlying function's value on its
    /// class.  Isotopy invariance is structural — the encoding already
    /// identifies isotopic subsurfaces.
    pub fn value(&self, w: &Submanifold) -> Result<Rational, AdditiveError> {
        tau(&self.nu, w)
    }

    /// Reads the measure back into an explicit table: each class of pants is
    /// realized as a subsurface and measured.  For a lawful measure this
    /// recovers the underlying function exactly.
    pub fn tabulate(&self) -> Result<AdditiveFunction, AdditiveError> {
        let graph = self.graph();
        let pants = graph.pants_count();
        if pants > 20 {
            return Err(AdditiveError::GraphTooLarge(pants));
        }
        let mut entries = BTreeMap::new();
        for mask in 0..1u64 << pants {
            let class =
                NormalClass::new(Arc::clone(graph), enumerate::members_from_mask(graph, mask))
                    .expect("mask members come from the graph");
            let value = self.value(&class.realize())?;
            entries.insert(class.members().clone(), value);
        }
        AdditiveFunction::from_table(Arc::clone(graph), entries)
    }

    /// Exhaustively checks the measure axioms over one scene.
    ///
    /// Sweeps every selection of the scene's regions and verifies, per
    /// axiom: the whole surface measures 1; nested selections have
    /// nondecreasing values; disjoint selections add; and regularity — each
    /// selection's value plus the function's value on its class's complement
    /// is exactly 1, with that complement value dominating the measure of
    /// every disjoint selection in the scene.  All four axiom flags are
    /// computed; the counterexample reported is the first failure in the
    /// order above.
    pub fn audit(
        &self,
        scene: &Arc<Scene>,
        budget: u64,
    ) -> Result<TauAuditReport, EnumerationError> {
        let count = enumerate::check_budget(scene, budget)?;
        let graph = self.graph();
        let vertex_full: u64 = if graph.pants_count() == 64 {
            u64::MAX
        } else {
            (1u64 << graph.pants_count()) - 1
        };
        let curve_sides: Vec<[usize; 2]> =
            scene.region_map().curves().iter().map(|c| c.sides).collect();
        let witness = |mask: u64| enumerate::mask_region_ids(scene, mask);

        // One reduction per selection, one evaluation per distinct class.
        let mut class_of: Vec<u64> = Vec::with_capacity(count as usize);
        let mut class_values: BTreeMap<u64, Option<Rational>> = BTreeMap::new();
        for mask in 0..count {
            let class = normalize(&Submanifold::from_mask(scene, mask));
            let class_mask = enumerate::vertex_mask(graph, class.members());
            for needed in [class_mask, !class_mask & vertex_full] {
                class_values.entry(needed).or_insert_with(|| {
                    let members = enumerate::members_from_mask(graph, needed);
                    let class = NormalClass::new(Arc::clone(graph), members)
                        .expect("mask members come from the graph");
                    self.nu.eval(&class).ok()
                });
            }
            class_of.push(class_mask);
        }
        if let Some((&class_mask, _)) =
            class_values.iter().find(|(_, value)| value.is_none())
        {
            // The function cannot even be evaluated everywhere (a partial
            // table); nothing meaningful can pass.
            let mask = (0..count)
                .find(|&m| {
                    class_of[m as usize] == class_mask
                        || !class_of[m as usize] & vertex_full == class_mask
                })
                .expect("missing classes arise from some selection");
            return Ok(TauAuditReport {
                status: AuditStatus::Fail,
                checked_count: 0,
                axioms: TauAxioms {
                    normalized: false,
                    monotone: false,
                    additive: false,
                    regular: false,
                },
                counterexample: Some(TauCounterexample {
                    axiom: "defined".into(),
                    witness: witness(mask),
                    second_witness: None,
                    detail: format!(
                        "the function has no value for class {{{}}}",
                        enumerate::members_from_mask(graph, class_mask)
                            .iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                }),
            });
        }
        let value = |mask: u64| -> &Rational {
            class_values[&class_of[mask as usize]].as_ref().expect("checked total")
        };
        let complement_value = |mask: u64| -> &Rational {
            class_values[&(!class_of[mask as usize] & vertex_full)]
                .as_ref()
                .expect("checked total")
        };
        let disjoint = |a: u64, b: u64| {
            a & b == 0
                && !curve_sides.iter().any(|&[s0, s1]| {
                    (a >> s0 & 1 == 1 && b >> s1 & 1 == 1)
                        || (a >> s1 & 1 == 1 && b >> s0 & 1 == 1)
                })
        };

        let mut checked = 0u64;
        let mut axioms =
            TauAxioms { normalized: true, monotone: true, additive: true, regular: true };
        let mut counterexample: Option<TauCounterexample> = None;
        let mut record = |slot: &mut bool, cex: TauCounterexample| {
            *slot = false;
            if counterexample.is_none() {
                counterexample = Some(cex);
            }
        };

        let full_selection = count - 1;
        checked += 1;
        if !value(full_selection).is_one() {
            record(
                &mut axioms.normalized,
                TauCounterexample {
                    axiom: "normalized".into(),
                    witness: witness(full_selection),
                    second_witness: None,
                    detail: format!("the whole surface measures {}", value(full_selection)),
                },
            );
        }

        'monotone: for a in 0..count {
            for b in 0..count {
                if a == b || a & !b != 0 {
                    continue;
                }
                checked += 1;
                if value(a) > value(b) {
                    record(
                        &mut axioms.monotone,
                        TauCounterexample {
                            axiom: "monotone".into(),
                            witness: witness(a),
                            second_witness: Some(witness(b)),
                            detail: format!(
                                "{} exceeds the containing selection's measure {}",
                                value(a),
                                value(b)
                            ),
                        },
                    );
                    break 'monotone;
                }
            }
        }

        'additive: for a in 0..count {
            for b in a..count {
                if !disjoint(a, b) {
                    continue;
                }
                checked += 1;
                if &(value(a) + value(b)) != value(a | b) {
                    record(
                        &mut axioms.additive,
                        TauCounterexample {
                            axiom: "additive".into(),
                            witness: witness(a),
                            second_witness: Some(witness(b)),
                            detail: format!(
                                "{} + {} differs from the union's measure {}",
                                value(a),
                                value(b),
                                value(a | b)
                            ),
                        },
                    );
                    break 'additive;
                }
            }
        }

        'regular: for a in 0..count {
            checked += 1;
            if !(value(a) + complement_value(a)).is_one() {
                record(
                    &mut axioms.regular,
                    TauCounterexample {
                        axiom: "regular".into(),
                        witness: witness(a),
                        second_witness: None,
                        detail: format!(
                            "measure {} plus the complement class's value {} differs from 1",
                            value(a),
                            complement_value(a)
                        ),
                    },
                );
                break 'regular;
            }
            for b in 0..count {
                if !disjoint(a, b) {
                    continue;
                }
                checked += 1;
                if value(b) > complement_value(a) {
                    record(
                        &mut axioms.regular,
                        TauCounterexample {
                            axiom: "regular".into(),
                            witness: witness(a),
                            second_witness: Some(witness(b)),
                            detail: format!(
                                "a disjoint selection measures {}, above the complement bound {}",
                                value(b),
                                complement_value(a)
                            ),
                        },
                    );
                    break 'regular;
                }
            }
        }

        let pass = axioms.normalized && axioms.monotone && axioms.additive && axioms.regular;
        Ok(TauAuditReport {
            status: if pass { AuditStatus::Pass } else { AuditStatus::Fail },
            checked_count: checked,
            axioms,
            counterexample,
        })
    }
}

/// Per-axiom outcome of [`TopologicalMeasure::audit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TauAxioms {
    pub normalized: bool,
    pub monotone: bool,
    pub additive: bool,
    pub regular: bool,
}

/// First failure found by a measure audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TauCounterexample {
    /// Which axiom failed.
    pub axiom: String,
    /// Selected region ids of the first subsurface involved.
    pub witness: Vec<String>,
    /// Selected region ids of the second subsurface, for pairwise axioms.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub second_witness: Option<Vec<String>>,
    /// Human-readable account of the violation.
    pub detail: String,
}

/// Outcome of [`TopologicalMeasure::audit`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TauAuditReport {
    pub status: AuditStatus,
    /// Individual axiom instances checked.
    pub checked_count: u64,
    pub axioms: TauAxioms,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<TauCounterexample>,
}

/// Outcome of [`check_affinity`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AffinityReport {
    pub status: AuditStatus,
    pub checked_count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<TauCounterexample>,
}

/// Verifies that inducing a measure is affine in the function.
///
/// For every selection of the scene, the measure induced by the mixture
/// `lambda*nu1 + (1-lambda)*nu2` must equal the pointwise mixture of the two
/// induced measures.  When both operands are weighted, the mixture is formed
/// at the mass level, so the check exercises affinity of the whole
/// mass-to-measure chain.
pub fn check_affinity(
    nu1: &AdditiveFunction,
    nu2: &AdditiveFunction,
    lambda: &Rational,
    scene: &Arc<Scene>,
    budget: u64,
) -> Result<AffinityReport, AdditiveError> {
    let mixed = AdditiveFunction::mix(nu1, nu2, lambda)?;
    let count = enumerate::check_budget(scene, budget)?;
    let rest = Rational::one() - lambda;
    let mut checked = 0u64;
    let mut counterexample = None;
    for mask in 0..count {
        checked += 1;
        let w = Submanifold::from_mask(scene, mask);
        let class = normalize(&w);
        let mixed_value = mixed.eval(&class)?;
        let split_value = lambda * nu1.eval(&class)? + &rest * nu2.eval(&class)?;
        if mixed_value != split_value {
            counterexample = Some(TauCounterexample {
                axiom: "affine".into(),
                witness: enumerate::mask_region_ids(scene, mask),
                second_witness: None,
                detail: format!(
                    "the mixed function gives {mixed_value}, the mixed measures {split_value}"
                ),
            });
            break;
        }
    }
    Ok(AffinityReport {
        status: if counterexample.is_none() { AuditStatus::Pass } else { AuditStatus::Fail },
        checked_count: checked,
        counterexample,
    })
}
