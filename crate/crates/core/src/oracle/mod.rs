//! Brute-force verification that never consults the exponentiability formulas: probes,
//! universal-property checks, a search for partial products over arbitrary hom
//! assignments, adjunction bijections in the slice, and the enumerated corpora used to
//! compare all of it against the condition checkers.

mod bijection;
mod brute;
mod corpus;
mod probes;
mod universal;

use serde::Serialize;

pub use bijection::{check_adjunction_bijection, slice_probes, SliceProbe};
pub use brute::{brute_force_exponentiable, target_corpus, BruteForceVerdict, Evidence, SearchOptions, Target};
pub use corpus::{
    enumerate_qcategories, enumerate_qcategories_up_to, preorder_equivalence, preorder_functor_corpus, preorders,
    AgreementMatrix, CategorySearch,
};
pub use probes::{Probe, ProbeFamily};
pub use universal::{replay, verify_universal_property};

/// An upper bound on units of work (cones, candidate assignments, probe maps) an oracle
/// run may spend before giving up with an inconclusive verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_work: u64,
}

impl Budget {
    pub const DEFAULT_WORK: u64 = 50_000_000;

    pub fn new(max_work: u64) -> Self {
        Self { max_work }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_work: Self::DEFAULT_WORK }
    }
}

/// Work counter shared by one oracle run.
#[derive(Debug)]
pub(crate) struct Meter {
    used: u64,
    limit: u64,
}

/// Raised when the work budget runs out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted;

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Self { used: 0, limit: budget.max_work }
    }

    pub(crate) fn tick(&mut self) -> Result<(), Exhausted> {
        self.used += 1;
        if self.used > self.limit {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    pub(crate) fn charge(&mut self, units: u64) -> Result<(), Exhausted> {
        self.used = self.used.saturating_add(units);
        if self.used > self.limit {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Passed,
    Failed,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FailureReason {
    NoMediator,
    NonUniqueMediator,
    EquationFails,
    CurryFails,
    UncurryFails,
    RoundTrip,
    InvalidStructure,
}

/// One failed check, with enough data to run it again.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleFailure {
    pub probe: usize,
    pub label: String,
    /// The probe's structure map into `B`.
    pub p_map: Vec<usize>,
    /// The second cone leg (an evaluation or a slice morphism), when the check started
    /// from a cone.
    pub cone: Option<Vec<usize>>,
    /// The functor into the candidate object, when the check started from one.
    pub mediator: Option<Vec<usize>>,
    pub reason: FailureReason,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub outcome: Outcome,
    pub failures: Vec<OracleFailure>,
    pub work: u64,
    pub budget: u64,
}

impl OracleVerdict {
    /// At most this many failures are collected before a run stops.
    pub const MAX_FAILURES: usize = 16;

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Passed
    }

    pub fn is_inconclusive(&self) -> bool {
        self.outcome == Outcome::Inconclusive
    }

    pub(crate) fn finish(failures: Vec<OracleFailure>, meter: &Meter, budget: Budget, exhausted: bool) -> Self {
        let outcome = if !failures.is_empty() {
            Outcome::Failed
        } else if exhausted {
            Outcome::Inconclusive
        } else {
            Outcome::Passed
        };
        Self { outcome, failures, work: meter.used(), budget: budget.max_work }
    }
}
