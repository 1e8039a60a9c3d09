//! Sublevel-set filtrations and the quasi-state value they determine.
//!
//! A filtration records how a subsurface grows through a time window: empty
//! below the first jump, then a nested chain of subsurfaces, each in force
//! from its jump time until the next.  Integrating the induced measure of
//! the sublevel subsurface over the window gives a single rational — the
//! quasi-state value — and for the complexity function that value is exactly
//! the mean of the jump times at which the reduced subsurface gains pants,
//! counted with multiplicity.

use std::sync::Arc;

use num::Zero;
use thiserror::Error;

use crate::additive::{AdditiveError, AdditiveFunction};
use crate::measure::tau;
use crate::normalize::normalize;
use crate::rational::Rational;
use crate::surface::{Scene, Submanifold};

/// One jump: from `time` on, the sublevel subsurface is `part` (until the
/// next step takes over).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationStep {
    pub time: Rational,
    pub part: Submanifold,
}

/// Structural defects rejected when building a [`Filtration`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("the time window [{t_min}, {t_max}] is empty")]
    EmptyWindow { t_min: Rational, t_max: Rational },
    #[error("step {0} lives on a different scene than the filtration")]
    SceneMismatch(usize),
    #[error("step {index} jumps at {time}, outside the half-open window")]
    StepOutOfWindow { index: usize, time: Rational },
    #[error("step {0} does not jump strictly after its predecessor")]
    TimesNotIncreasing(usize),
    #[error("step {0} is not contained in its successor")]
    NestingViolation(usize),
}

/// A nested chain of subsurfaces indexed by jump times in a window.
///
/// The encoded step function is empty on `[t_min, t_1)`, equals step `i`'s
/// subsurface on `[t_i, t_{i+1})`, and holds the last subsurface up to
/// `t_max`.  Jump times must satisfy `t_min < t_1 < … < t_m <= t_max`, and
/// the selected region sets must be nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    scene: Arc<Scene>,
    t_min: Rational,
    t_max: Rational,
    steps: Vec<FiltrationStep>,
}

impl Filtration {
    // The error variants carry exact rational witnesses, which outweighs
    // keeping the cold construction-failure path pointer-sized.
    #[allow(clippy::result_large_err)]
    pub fn new(
        scene: Arc<Scene>,
        t_min: Rational,
        t_max: Rational,
        steps: Vec<FiltrationStep>,
    ) -> Result<Self, FiltrationError> {
        if t_min >= t_max {
            return Err(FiltrationError::EmptyWindow { t_min, t_max });
        }
        for (index, step) in steps.iter().enumerate() {
            if step.part.scene().as_ref() != scene.as_ref() {
                return Err(FiltrationError::SceneMismatch(index));
            }
        }
        for (index, step) in steps.iter().enumerate() {
            if step.time <= t_min || step.time > t_max {
                return Err(FiltrationError::StepOutOfWindow {
                    index,
                    time: step.time.clone(),
                });
            }
        }
        for index in 1..steps.len() {
            if steps[index - 1].time >= steps[index].time {
                return Err(FiltrationError::TimesNotIncreasing(index));
            }
        }
        for index in 0..steps.len().saturating_sub(1) {
            let (earlier, later) = (&steps[index], &steps[index + 1]);
            if !earlier.part.in_regions().is_subset(later.part.in_regions()) {
                return Err(FiltrationError::NestingViolation(index));
            }
        }
        Ok(Self { scene, t_min, t_max, steps })
    }

    pub fn scene(&self) -> &Arc<Scene> {
        &self.scene
    }

    pub fn t_min(&self) -> &Rational {
        &self.t_min
    }

    pub fn t_max(&self) -> &Rational {
        &self.t_max
    }

    pub fn steps(&self) -> &[FiltrationStep] {
        &self.steps
    }

    /// Whether the final sublevel subsurface reduces to the whole surface.
    pub fn reaches_full_surface(&self) -> bool {
        self.steps.last().is_some_and(|step| normalize(&step.part).is_full())
    }

    /// Advisory findings that do not invalidate the filtration.
    pub fn warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if !self.reaches_full_surface() {
            warnings.push(
                "the sublevel subsurfaces never grow to cover the whole surface, \
                 so the top of the window still describes a proper subsurface"
                    .into(),
            );
        }
        warnings
    }
}

/// One breakpoint of the measure profile: from `time` on, the sublevel
/// subsurface measures `value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfilePoint {
    pub time: Rational,
    pub value: Rational,
}

/// Right-continuous step data of the sublevel measure over the window.
///
/// Starts at `t_min` with the measure of the empty subsurface and records a
/// breakpoint at each jump time where the measure changes.  The values are
/// nondecreasing because the chain is nested and the measure monotone.
pub fn b_function(
    f: &Filtration,
    nu: &AdditiveFunction,
) -> Result<Vec<ProfilePoint>, AdditiveError> {
    let mut profile = Vec::with_capacity(f.steps.len() + 1);
    let mut current = tau(nu, &Submanifold::empty(Arc::clone(&f.scene)))?;
    profile.push(ProfilePoint { time: f.t_min.clone(), value: current.clone() });
    for step in &f.steps {
        let value = tau(nu, &step.part)?;
        if value != current {
            current = value.clone();
            profile.push(ProfilePoint { time: step.time.clone(), value });
        }
    }
    Ok(profile)
}

/// The quasi-state value of the filtration: the top of the window minus the
/// exact integral of the sublevel measure profile across the window.
pub fn zeta(f: &Filtration, nu: &AdditiveFunction) -> Result<Rational, AdditiveError> {
    let profile = b_function(f, nu)?;
    let mut integral = Rational::zero();
    for (i, point) in profile.iter().enumerate() {
        let end = profile.get(i + 1).map_or(&f.t_max, |next| &next.time);
        integral += (end - &point.time) * &point.value;
    }
    Ok(&f.t_max - integral)
}

/// Jump times of a filtration weighted by how many pants the reduced
/// subsurface gains there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EssentialSpectrum {
    /// Each jump time, repeated once per pants gained at that time.
    pub values: Vec<Rational>,
    /// Whether every jump gains at most one pants.
    pub morse_generic: bool,
}

/// Detects the essential jumps of a filtration: the times where the reduced
/// sublevel subsurface grows by one or more pants.
///
/// For a filtration that ends at the whole surface the total multiplicity is
/// the pants count, and the mean of the returned values equals the
/// quasi-state value of the complexity function — the profile integral and
/// the jump count weigh each time identically.
pub fn essential_values(f: &Filtration) -> EssentialSpectrum {
    let mut values = Vec::new();
    let mut morse_generic = true;
    let mut covered = 0usize;
    for step in &f.steps {
        let count = normalize(&step.part).members().len();
        assert!(count >= covered, "nested sublevel subsurfaces cannot lose pants");
        let jump = count - covered;
        if jump > 1 {
            morse_generic = false;
        }
        values.extend(std::iter::repeat_with(|| step.time.clone()).take(jump));
        covered = count;
    }
    EssentialSpectrum { values, morse_generic }
}
