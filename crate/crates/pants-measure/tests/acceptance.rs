//! Exhaustive end-to-end audits over small enumerated instances.
//!
//! Each test is one numbered criterion of the suite and prints a single
//! `[acceptance] criterion N (...): PASS` line with the number of individual
//! checks and the runtime (visible under `--nocapture`), so the suite doubles
//! as a smoke report.  All arithmetic is exact; every equality below is an
//! identity, not an approximation.
//!
//! The genus-2 scene family and the reduced class of every selection in it
//! are shared through `OnceLock` caches.  Cache warm-up happens before each
//! criterion's clock starts; the clocks time the checks themselves.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::AssertUnwindSafe;
use std::sync::{Arc, OnceLock};
use std::time::{Duration, Instant};

use num::{One, Zero};
use pants_measure::additive::{AdditiveFunction, Coorientation, MeasureWeights};
use pants_measure::enumerate::{self, AuditStatus, SceneFamily};
use pants_measure::measure::{check_affinity, tau, TopologicalMeasure};
use pants_measure::normalize::{audit_normalization, normalize};
use pants_measure::quasistate::{essential_values, zeta, Filtration, FiltrationStep};
use pants_measure::rational::{rat, Rational};
use pants_measure::surface::{
    from_cooriented_boundary, NormalClass, PantsGraph, Region, Scene, Submanifold, VertexId,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generous ceiling for exhaustive sweeps; every scene here is far smaller.
const BUDGET: u64 = 1 << 20;

/// Runs one criterion body, prints its pass/fail line, and enforces its
/// runtime bound.  The body returns how many individual checks it made.
fn criterion(number: u32, label: &str, bound: Duration, body: impl FnOnce() -> u64) {
    let start = Instant::now();
    let result = std::panic::catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    match result {
        Ok(checks) => {
            println!(
                "[acceptance] criterion {number} ({label}): PASS — {checks} checks in {elapsed:.2?}"
            );
            assert!(
                elapsed < bound,
                "criterion {number} took {elapsed:?}, expected under {bound:?}"
            );
        }
        Err(payload) => {
            println!("[acceptance] criterion {number} ({label}): FAIL after {elapsed:.2?}");
            std::panic::resume_unwind(payload);
        }
    }
}

fn graph(genus: u32) -> Arc<PantsGraph> {
    Arc::new(PantsGraph::canonical(genus).unwrap())
}

/// The simplest scene over a canonical graph: one curve on every edge.
fn cut_everywhere(genus: u32) -> Arc<Scene> {
    let graph = graph(genus);
    let sizes: Vec<(&str, usize)> = graph.edges().iter().map(|e| (e.id.as_str(), 1)).collect();
    Arc::new(Scene::with_auto_stacks(Arc::clone(&graph), &sizes, Vec::new()).unwrap())
}

/// Genus-2 scenes with stacks of up to three copies on one edge, up to one
/// elsewhere, and disk forests of up to two nodes.
fn family() -> &'static [Arc<Scene>] {
    static FAMILY: OnceLock<Vec<Arc<Scene>>> = OnceLock::new();
    FAMILY.get_or_init(|| enumerate::enumerate_scenes(&graph(2), &SceneFamily::standard()))
}

/// Vertex mask of the reduced class of every selection of every family
/// scene, indexed as `family_classes()[scene][selection_mask]`.
fn family_classes() -> &'static [Vec<u64>] {
    static CLASSES: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    CLASSES.get_or_init(|| {
        family()
            .iter()
            .map(|scene| {
                let count = enumerate::selection_count(scene).unwrap();
                (0..count)
                    .map(|mask| {
                        let class = normalize(&Submanifold::from_mask(scene, mask));
                        enumerate::vertex_mask(scene.graph(), class.members())
                    })
                    .collect()
            })
            .collect()
    })
}

fn class_from(graph: &Arc<PantsGraph>, mask: u64) -> NormalClass {
    NormalClass::new(Arc::clone(graph), enumerate::members_from_mask(graph, mask)).unwrap()
}

fn nu0(graph: &Arc<PantsGraph>) -> AdditiveFunction {
    AdditiveFunction::complexity(Arc::clone(graph))
}

/// All mass on one pants: the indicator of classes containing `vertex`.
fn dirac(graph: &Arc<PantsGraph>, vertex: VertexId) -> AdditiveFunction {
    let mut weights = MeasureWeights::default();
    weights.a.insert(vertex, Rational::one());
    AdditiveFunction::from_weights(Arc::clone(graph), weights).unwrap()
}

/// Genus-2 weighted function with curve mass split unevenly: 1/3 on each
/// pants, 1/3 on curve A flowing 1/4 toward its first end.  Its values on
/// the singleton classes are 7/12 and 5/12.
fn lopsided(graph2: &Arc<PantsGraph>) -> AdditiveFunction {
    let mut weights = MeasureWeights::default();
    weights.a.insert(0, rat(1, 3));
    weights.a.insert(1, rat(1, 3));
    weights.b.insert("A".into(), rat(1, 3));
    weights.w.insert("A".into(), rat(1, 4));
    weights.c.insert("A".into(), Coorientation::TowardFirst);
    AdditiveFunction::from_weights(Arc::clone(graph2), weights).unwrap()
}

/// Half the mass spread over the pants, half over the curves.
fn spread(graph: &Arc<PantsGraph>) -> AdditiveFunction {
    let mut weights = MeasureWeights::default();
    let pants_share = rat(1, 2 * graph.vertices().len() as i64);
    let curve_share = rat(1, 2 * graph.edges().len() as i64);
    for &vertex in graph.vertices() {
        weights.a.insert(vertex, pants_share.clone());
    }
    for edge in graph.edges() {
        weights.b.insert(edge.id.clone(), curve_share.clone());
        weights.w.insert(edge.id.clone(), rat(1, 3));
        weights.c.insert(edge.id.clone(), Coorientation::TowardFirst);
    }
    AdditiveFunction::from_weights(Arc::clone(graph), weights).unwrap()
}

/// All mass on the curves, split evenly across and along them.
fn edge_split(graph: &Arc<PantsGraph>) -> AdditiveFunction {
    let mut weights = MeasureWeights::default();
    let share = rat(1, graph.edges().len() as i64);
    for edge in graph.edges() {
        weights.b.insert(edge.id.clone(), share.clone());
        weights.w.insert(edge.id.clone(), rat(1, 2));
        weights.c.insert(edge.id.clone(), Coorientation::TowardFirst);
    }
    AdditiveFunction::from_weights(Arc::clone(graph), weights).unwrap()
}

/// Uniform rational in `[0, 1]` with denominator at most 1000.
fn random_unit(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.gen_range(1..=1000i64);
    rat(rng.gen_range(0..=q), q)
}

/// Uniform rational in `(0, 1]` with denominator at most 1000.
fn random_positive_unit(rng: &mut ChaCha8Rng) -> Rational {
    let q = rng.gen_range(1..=1000i64);
    rat(rng.gen_range(1..=q), q)
}

/// Random mass distribution over pants and curves, with random crossing
/// data on every massive curve.
fn random_weighted(rng: &mut ChaCha8Rng, graph: &Arc<PantsGraph>) -> AdditiveFunction {
    let slots = graph.vertices().len() + graph.edges().len();
    let numerators: Vec<i64> = loop {
        let draw: Vec<i64> = (0..slots).map(|_| rng.gen_range(0..=6)).collect();
        if draw.iter().sum::<i64>() > 0 {
            break draw;
        }
    };
    let total: i64 = numerators.iter().sum();
    let mut weights = MeasureWeights::default();
    for (i, &vertex) in graph.vertices().iter().enumerate() {
        weights.a.insert(vertex, rat(numerators[i], total));
    }
    for (j, edge) in graph.edges().iter().enumerate() {
        let mass = numerators[graph.vertices().len() + j];
        if mass > 0 {
            weights.b.insert(edge.id.clone(), rat(mass, total));
            weights.w.insert(edge.id.clone(), random_unit(rng));
            let c = if rng.gen_bool(0.5) {
                Coorientation::TowardFirst
            } else {
                Coorientation::TowardSecond
            };
            weights.c.insert(edge.id.clone(), c);
        }
    }
    AdditiveFunction::from_weights(Arc::clone(graph), weights).unwrap()
}

/// Random additive function given as an explicit table: random per-pants
/// masses summing to 1, extended additively to every class.
fn random_table(rng: &mut ChaCha8Rng, graph: &Arc<PantsGraph>) -> AdditiveFunction {
    let pants = graph.pants_count();
    let numerators: Vec<i64> = loop {
        let draw: Vec<i64> = (0..pants).map(|_| rng.gen_range(0..=6)).collect();
        if draw.iter().sum::<i64>() > 0 {
            break draw;
        }
    };
    let total: i64 = numerators.iter().sum();
    let mut entries = BTreeMap::new();
    for mask in 0..1u64 << pants {
        let members = enumerate::members_from_mask(graph, mask);
        let value: Rational = graph
            .vertices()
            .iter()
            .enumerate()
            .filter(|(_, vertex)| members.contains(vertex))
            .map(|(i, _)| rat(numerators[i], total))
            .sum();
        entries.insert(members, value);
    }
    AdditiveFunction::from_table(Arc::clone(graph), entries).unwrap()
}

#[test]
fn criterion_1_reduction_laws_hold_over_the_genus_2_family() {
    let scenes = family();
    criterion(1, "normalization law audit", Duration::from_secs(10), || {
        assert!(scenes.len() > 400, "scene family unexpectedly small: {}", scenes.len());
        let mut checked = 0;
        for scene in scenes {
            let report = audit_normalization(scene, BUDGET).unwrap();
            assert_eq!(
                report.status,
                AuditStatus::Pass,
                "stacks {:?}, disks {:?}: {:?}",
                scene.stacks(),
                scene.disks(),
                report.counterexample
            );
            checked += report.checked_count;
        }
        checked
    });
}

#[test]
fn criterion_2_disks_and_annuli_measure_zero() {
    let scenes = family();
    family_classes();
    criterion(2, "disks and annuli vanish", Duration::from_secs(1), || {
        let graph2 = graph(2);
        let functions = [
            nu0(&graph2),
            lopsided(&graph2),
            spread(&graph2),
            edge_split(&graph2),
            dirac(&graph2, 0),
        ];
        let mut checked = 0;
        for scene in scenes {
            let map = scene.region_map();
            let count = enumerate::selection_count(scene).unwrap();
            for mask in 1..count {
                // Keep only selections made of disk pieces alone (single
                // disks and disks-with-holes chains) or a single gap
                // annulus; anything containing a pants carries complexity.
                let mut disks = 0usize;
                let mut gaps = 0usize;
                let mut surfaces = 0usize;
                for (index, info) in map.regions().iter().enumerate() {
                    if mask >> index & 1 == 1 {
                        match info.region {
                            Region::Surface(_) => surfaces += 1,
                            Region::Gap(..) => gaps += 1,
                            Region::Disk(_) => disks += 1,
                        }
                    }
                }
                let degenerate = surfaces == 0 && ((disks > 0 && gaps == 0) || (disks == 0 && gaps == 1));
                if !degenerate {
                    continue;
                }
                let w = Submanifold::from_mask(scene, mask);
                for nu in &functions {
                    assert!(
                        tau(nu, &w).unwrap().is_zero(),
                        "a degenerate selection {:?} got nonzero measure",
                        enumerate::mask_region_ids(scene, mask)
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 1_000, "too few degenerate selections swept: {checked}");
        checked
    });
}

#[test]
fn criterion_3_measure_axioms_hold_exactly_at_genus_2_and_3() {
    criterion(3, "measure axiom audit", Duration::from_secs(30), || {
        let mut checked = 0;
        for genus in [2u32, 3] {
            let scene = cut_everywhere(genus);
            let graph = Arc::clone(scene.graph());
            let weighted = if genus == 2 { lopsided(&graph) } else { spread(&graph) };
            if genus == 2 {
                // Pin the uneven example's singleton values before trusting it.
                assert_eq!(weighted.eval(&class_from(&graph, 0b01)).unwrap(), rat(7, 12));
                assert_eq!(weighted.eval(&class_from(&graph, 0b10)).unwrap(), rat(5, 12));
            }
            for nu in [nu0(&graph), dirac(&graph, 0), weighted] {
                let report = TopologicalMeasure::new(nu).audit(&scene, BUDGET).unwrap();
                assert_eq!(report.status, AuditStatus::Pass, "{:?}", report.counterexample);
                assert!(report.axioms.normalized, "whole surface must measure 1");
                assert!(report.axioms.monotone, "nested selections must not shrink");
                assert!(report.axioms.additive, "disjoint selections must add");
                assert!(report.axioms.regular, "value plus complement value must be 1");
                checked += report.checked_count;
            }
        }
        checked
    });
}

#[test]
fn criterion_4_function_and_measure_determine_each_other() {
    let scenes = family();
    let classes = family_classes();
    criterion(4, "function/measure round trip", Duration::from_secs(30), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0f0e_1d2c);
        let mut checked = 0;
        // Function -> measure -> function, on named and random functions.
        for genus in [2u32, 3] {
            let graph = graph(genus);
            let mut functions = vec![nu0(&graph), dirac(&graph, 0), spread(&graph)];
            if genus == 2 {
                functions.push(lopsided(&graph));
            }
            for _ in 0..5 {
                functions.push(random_weighted(&mut rng, &graph));
            }
            for _ in 0..5 {
                functions.push(random_table(&mut rng, &graph));
            }
            for nu in &functions {
                let table = TopologicalMeasure::new(nu.clone()).tabulate().unwrap();
                for mask in 0..1u64 << graph.pants_count() {
                    let class = class_from(&graph, mask);
                    assert_eq!(table.eval(&class).unwrap(), nu.eval(&class).unwrap());
                    checked += 1;
                }
            }
        }
        // Measure -> function -> measure, over every audited scene.  The
        // reduced class of each selection is precomputed, so the comparison
        // evaluates both measures exactly as `tau` would.
        let graph2 = graph(2);
        for nu in [nu0(&graph2), dirac(&graph2, 1), lopsided(&graph2)] {
            let measure = TopologicalMeasure::new(nu);
            let rebuilt = TopologicalMeasure::new(measure.tabulate().unwrap());
            for class_masks in classes {
                for &class_mask in class_masks {
                    let class = class_from(&graph2, class_mask);
                    assert_eq!(
                        rebuilt.nu().eval(&class).unwrap(),
                        measure.nu().eval(&class).unwrap()
                    );
                    checked += 1;
                }
            }
        }
        assert_eq!(scenes.len(), classes.len());
        let scene3 = cut_everywhere(3);
        let graph3 = Arc::clone(scene3.graph());
        for nu in [nu0(&graph3), dirac(&graph3, 2), spread(&graph3)] {
            let measure = TopologicalMeasure::new(nu);
            let rebuilt = TopologicalMeasure::new(measure.tabulate().unwrap());
            for mask in 0..enumerate::selection_count(&scene3).unwrap() {
                let w = Submanifold::from_mask(&scene3, mask);
                assert_eq!(rebuilt.value(&w).unwrap(), measure.value(&w).unwrap());
                checked += 1;
            }
        }
        checked
    });
}

#[test]
fn criterion_5_measures_mix_affinely() {
    family();
    let classes = family_classes();
    criterion(5, "measure mixing is affine", Duration::from_secs(10), || {
        let graph2 = graph(2);
        let probe = cut_everywhere(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_aff1);
        let mut checked = 0;
        for trial in 0..20 {
            let first = if trial % 2 == 0 {
                random_weighted(&mut rng, &graph2)
            } else {
                random_table(&mut rng, &graph2)
            };
            let second = if trial % 3 == 0 {
                random_table(&mut rng, &graph2)
            } else {
                random_weighted(&mut rng, &graph2)
            };
            let lambda = random_unit(&mut rng);
            let mixed = AdditiveFunction::mix(&first, &second, &lambda).unwrap();
            let rest = Rational::one() - &lambda;
            // One verdict per distinct class, applied to every enumerated
            // selection through the precomputed class masks.
            let mut verdict: BTreeMap<u64, bool> = BTreeMap::new();
            for class_masks in classes {
                for &class_mask in class_masks {
                    let ok = *verdict.entry(class_mask).or_insert_with(|| {
                        let class = class_from(&graph2, class_mask);
                        mixed.eval(&class).unwrap()
                            == &lambda * first.eval(&class).unwrap()
                                + &rest * second.eval(&class).unwrap()
                    });
                    assert!(ok, "mixing at {lambda} fails on class mask {class_mask:#b}");
                    checked += 1;
                }
            }
            let report = check_affinity(&first, &second, &lambda, &probe, BUDGET).unwrap();
            assert_eq!(report.status, AuditStatus::Pass, "{:?}", report.counterexample);
            checked += report.checked_count;
        }
        checked
    });
}

#[test]
fn criterion_6_one_pants_masses_give_simple_measures() {
    family();
    let classes = family_classes();
    criterion(6, "simple measures", Duration::from_secs(5), || {
        let mut checked = 0;
        // Every Dirac function at genus 2, over the whole enumerated family.
        let graph2 = graph(2);
        for &vertex in graph2.vertices() {
            let nu = dirac(&graph2, vertex);
            let mut seen = [false, false];
            for class_masks in classes {
                for &class_mask in class_masks {
                    let value = nu.eval(&class_from(&graph2, class_mask)).unwrap();
                    if value.is_zero() {
                        seen[0] = true;
                    } else {
                        assert!(value.is_one(), "a one-pants mass produced {value}");
                        seen[1] = true;
                    }
                    checked += 1;
                }
            }
            assert!(seen[0] && seen[1], "both simple values must occur");
        }
        // Every Dirac function at genus 3, over the everywhere-cut scene.
        let scene3 = cut_everywhere(3);
        let graph3 = Arc::clone(scene3.graph());
        for &vertex in graph3.vertices() {
            let measure = TopologicalMeasure::new(dirac(&graph3, vertex));
            let mut seen = [false, false];
            for mask in 0..enumerate::selection_count(&scene3).unwrap() {
                let value = measure.value(&Submanifold::from_mask(&scene3, mask)).unwrap();
                if value.is_zero() {
                    seen[0] = true;
                } else {
                    assert!(value.is_one(), "a one-pants mass produced {value}");
                    seen[1] = true;
                }
                checked += 1;
            }
            assert!(seen[0] && seen[1], "both simple values must occur");
        }
        // The uniform function gives a single genus-2 pants exactly half.
        let scene2 = cut_everywhere(2);
        let single =
            Submanifold::new(Arc::clone(&scene2), BTreeSet::from([Region::Surface(0)])).unwrap();
        assert_eq!(TopologicalMeasure::new(nu0(&graph2)).value(&single).unwrap(), rat(1, 2));
        checked + 1
    });
}

#[test]
fn criterion_7_quasi_state_averages_the_essential_values() {
    criterion(7, "quasi-state spectral identity", Duration::from_secs(10), || {
        let scenes = [
            cut_everywhere(2),
            Arc::new(
                Scene::with_auto_stacks(graph(2), &[("A", 3), ("B", 1), ("C", 1)], Vec::new())
                    .unwrap(),
            ),
            cut_everywhere(3),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0x0f11_7a57);
        let mut checked = 0;
        let mut generic_runs = 0usize;
        let mut clustered_runs = 0usize;
        for trial in 0..100 {
            let scene = &scenes[trial % scenes.len()];
            let graph = scene.graph();
            let regions: Vec<Region> =
                scene.region_map().regions().iter().map(|r| r.region.clone()).collect();
            let mut order = regions;
            order.shuffle(&mut rng);
            // Even trials grow one region at a time; odd trials grow in
            // random blocks so several pants can appear at a single time.
            let cuts: Vec<usize> = if trial % 2 == 0 {
                (1..=order.len()).collect()
            } else {
                let mut cuts: Vec<usize> =
                    (1..order.len()).filter(|_| rng.gen_bool(0.4)).collect();
                cuts.push(order.len());
                cuts
            };
            let mut times = BTreeSet::new();
            while times.len() < cuts.len() {
                times.insert(random_positive_unit(&mut rng));
            }
            let steps: Vec<FiltrationStep> = cuts
                .iter()
                .zip(&times)
                .map(|(&take, time)| FiltrationStep {
                    time: time.clone(),
                    part: Submanifold::new(
                        Arc::clone(scene),
                        order[..take].iter().cloned().collect(),
                    )
                    .unwrap(),
                })
                .collect();
            let f = Filtration::new(Arc::clone(scene), Rational::zero(), Rational::one(), steps)
                .unwrap();
            assert!(f.reaches_full_surface());
            let spectrum = essential_values(&f);
            assert_eq!(
                spectrum.values.len(),
                graph.pants_count(),
                "a filtration reaching the whole surface has one essential \
                 value per pants, with multiplicity"
            );
            let total: Rational = spectrum.values.iter().sum();
            assert_eq!(
                zeta(&f, &nu0(graph)).unwrap(),
                total / rat(graph.pants_count() as i64, 1),
                "the quasi-state value must equal the mean essential value"
            );
            if spectrum.morse_generic {
                generic_runs += 1;
            } else {
                clustered_runs += 1;
            }
            checked += 1 + spectrum.values.len() as u64;
        }
        assert!(generic_runs > 0, "no run had all single-pants jumps");
        assert!(clustered_runs > 0, "no run had a multi-pants jump");
        // The worked two-step example: jumps at 3/10 and 7/10 average to 1/2.
        let scene = &scenes[0];
        let f = Filtration::new(
            Arc::clone(scene),
            Rational::zero(),
            Rational::one(),
            vec![
                FiltrationStep {
                    time: rat(3, 10),
                    part: Submanifold::new(
                        Arc::clone(scene),
                        BTreeSet::from([Region::Surface(0)]),
                    )
                    .unwrap(),
                },
                FiltrationStep { time: rat(7, 10), part: Submanifold::full(Arc::clone(scene)) },
            ],
        )
        .unwrap();
        assert_eq!(zeta(&f, &nu0(scene.graph())).unwrap(), rat(1, 2));
        checked + 1
    });
}

#[test]
fn criterion_8_cooriented_boundaries_determine_canonical_selections() {
    let scenes = family();
    criterion(8, "cooriented boundary round trip", Duration::from_secs(5), || {
        let mut checked = 0;
        for scene in scenes {
            if scene.is_empty() {
                // No curves, no boundary data to reconstruct from.
                continue;
            }
            let count = enumerate::selection_count(scene).unwrap();
            for mask in 1..count {
                let w = Submanifold::from_mask(scene, mask);
                if !w.is_canonical() {
                    continue;
                }
                let outward = w
                    .boundary_coorientation()
                    .expect("every curve of a canonical proper selection separates");
                assert_eq!(from_cooriented_boundary(scene, &outward).unwrap(), w);
                checked += 1;
            }
        }
        assert!(checked > 100, "too few canonical selections swept: {checked}");
        checked
    });
}
