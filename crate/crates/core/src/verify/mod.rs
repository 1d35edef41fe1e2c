//! Executable checks for every amortized bound, oracle model and timing
//! mirror, aggregated into serializable [`VerifyReport`]s.
//!
//! Four suites run per structure:
//!
//! * [`run_bound_suite`]: each amortized inequality on every generated
//!   instance (at every recursion depth where the operation recurses), the
//!   telescoping identity on every trace, and for stacks the banker's account.
//! * [`oracle_check`]: each structure against a naive model after every
//!   operation: stack vs list, heap vs sorted multiset and binary counter,
//!   finger tree vs list.
//! * [`timing_crosscheck`]: metered unit counts against the timing functions.
//! * [`run_contract_suite`]: length contracts and arithmetic helper laws
//!   used by the finger-tree analysis.
//!
//! Every suite is a pure function of its [`GenConfig`], so two runs with the
//! same configuration produce identical reports apart from `elapsed_ms`.

mod contracts;
mod finger_suite;
pub mod gen;
mod heap_suite;
pub mod script;
mod stack_suite;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cost::Potential;
use crate::finger_tree::{self, Seq};
use crate::heap::{self, Forest};
use crate::stack::{self, Stack};

pub use contracts::run_contract_suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Structure {
    #[serde(rename = "stack")]
    Stack,
    #[serde(rename = "heap")]
    Heap,
    #[serde(rename = "fingertree")]
    FingerTree,
}

impl Structure {
    pub const ALL: [Structure; 3] = [Structure::Stack, Structure::Heap, Structure::FingerTree];

    pub fn name(self) -> &'static str {
        match self {
            Structure::Stack => "stack",
            Structure::Heap => "heap",
            Structure::FingerTree => "fingertree",
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Structure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Structure::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown structure `{s}` (expected stack, heap or fingertree)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub structure: Structure,
    /// Largest heap built by sequential inserts; finger-tree glue pairs are
    /// limited to `2 * max_size` elements in total.
    pub max_size: usize,
    pub num_traces: usize,
    pub trace_len: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            structure: Structure::Stack,
            max_size: 64,
            num_traces: 1000,
            trace_len: 50,
            seed: 42,
        }
    }
}

impl GenConfig {
    pub fn for_structure(structure: Structure) -> Self {
        GenConfig {
            structure,
            ..GenConfig::default()
        }
    }
}

/// Potential functions used by the suites. Swapping one in lets tests
/// confirm that a wrong potential is caught.
#[derive(Clone, Copy)]
pub struct PotentialFns {
    pub stack: fn(&Stack<i64>) -> Potential,
    pub heap: fn(&Forest<i64>) -> Potential,
    pub seq: fn(&Seq<i64>) -> Potential,
}

impl Default for PotentialFns {
    fn default() -> Self {
        PotentialFns {
            stack: stack::potential,
            heap: heap::potential,
            seq: finger_tree::potential,
        }
    }
}

impl fmt::Debug for PotentialFns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PotentialFns")
    }
}

/// An instance where an amortized cost exceeded its bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub input: String,
    pub operation: String,
    pub bound: i64,
    pub observed: i64,
}

/// An instance where two routes that must agree did not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: String,
    pub input: String,
    pub operation: String,
    pub expected: String,
    pub observed: String,
}

/// Findings kept per report; the counts stay exact.
pub const MAX_RECORDED: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub structure: Structure,
    pub prng: String,
    pub seed: u64,
    pub cases_run: u64,
    /// Cases per named check.
    pub checks: BTreeMap<String, u64>,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub mismatch_count: u64,
    pub oracle_mismatches: Vec<Mismatch>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.mismatch_count == 0
    }

    /// Copy with timing metadata cleared, for replay comparison.
    pub fn without_timing(&self) -> Self {
        VerifyReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub fn cases(&self, check: &str) -> u64 {
        self.checks.get(check).copied().unwrap_or(0)
    }

    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {}/{}: {} cases, {} violations, {} mismatches ({} ms)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.structure,
            self.suite,
            self.cases_run,
            self.violation_count,
            self.mismatch_count,
            self.elapsed_ms
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = self.summary_line();
        out.push('\n');
        for (check, n) in &self.checks {
            out.push_str(&format!("    {check:<24} {n}\n"));
        }
        for v in &self.violations {
            out.push_str(&format!(
                "    violation {}: {} on {} -> amortized {} > bound {}\n",
                v.check, v.operation, v.input, v.observed, v.bound
            ));
        }
        for m in &self.oracle_mismatches {
            out.push_str(&format!(
                "    mismatch {}: {} on {} -> expected {}, observed {}\n",
                m.check, m.operation, m.input, m.expected, m.observed
            ));
        }
        out
    }
}

pub(crate) struct Recorder {
    report: VerifyReport,
    started: Instant,
}

impl Recorder {
    pub(crate) fn new(suite: &str, cfg: &GenConfig) -> Self {
        Recorder {
            report: VerifyReport {
                suite: suite.to_string(),
                structure: cfg.structure,
                prng: gen::PRNG_NAME.to_string(),
                seed: cfg.seed,
                cases_run: 0,
                checks: BTreeMap::new(),
                violation_count: 0,
                violations: Vec::new(),
                mismatch_count: 0,
                oracle_mismatches: Vec::new(),
                elapsed_ms: 0,
            },
            started: Instant::now(),
        }
    }

    fn case(&mut self, check: &str) {
        self.report.cases_run += 1;
        *self.report.checks.entry(check.to_string()).or_default() += 1;
    }

    /// Records one case of `observed <= bound`. `repro` yields (input, operation).
    pub(crate) fn bound(
        &mut self,
        check: &str,
        observed: i64,
        bound: i64,
        repro: impl FnOnce() -> (String, String),
    ) {
        self.case(check);
        if observed > bound {
            self.report.violation_count += 1;
            if self.report.violations.len() < MAX_RECORDED {
                let (input, operation) = repro();
                self.report.violations.push(Violation {
                    check: check.to_string(),
                    input,
                    operation,
                    bound,
                    observed,
                });
            }
        }
    }

    /// Records one case of `expected == observed`.
    pub(crate) fn agree<V: PartialEq + fmt::Debug>(
        &mut self,
        check: &str,
        expected: V,
        observed: V,
        repro: impl FnOnce() -> (String, String),
    ) {
        self.case(check);
        if expected != observed {
            self.report.mismatch_count += 1;
            if self.report.oracle_mismatches.len() < MAX_RECORDED {
                let (input, operation) = repro();
                self.report.oracle_mismatches.push(Mismatch {
                    check: check.to_string(),
                    input,
                    operation,
                    expected: format!("{expected:?}"),
                    observed: format!("{observed:?}"),
                });
            }
        }
    }

    /// Counts `n` passing cases at once (for exhaustive sweeps whose
    /// failures are recorded individually).
    pub(crate) fn bulk(&mut self, check: &str, n: u64) {
        self.report.cases_run += n;
        *self.report.checks.entry(check.to_string()).or_default() += n;
    }

    pub(crate) fn finish(mut self) -> VerifyReport {
        self.report.elapsed_ms = self.started.elapsed().as_millis() as u64;
        self.report
    }
}

/// Exhaustive and random instances for one structure.
#[derive(Debug, Clone)]
pub enum Instance {
    Stack(Stack<i64>),
    Heap(Forest<i64>),
    FingerTree(Seq<i64>),
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Stack(s) => write!(f, "{:?}", s.to_vec()),
            Instance::Heap(h) => write!(f, "{h}"),
            Instance::FingerTree(q) => write!(f, "{q}"),
        }
    }
}

/// The exhaustive instances of `cfg.structure` followed by the final state of
/// each random trace. Deterministic in `cfg`.
pub fn enumerate_structures(cfg: &GenConfig) -> Vec<Instance> {
    let mut out: Vec<Instance> = match cfg.structure {
        Structure::Stack => gen::exhaustive_stacks(cfg)
            .into_iter()
            .map(Instance::Stack)
            .collect(),
        Structure::Heap => gen::exhaustive_forests(cfg)
            .into_iter()
            .map(Instance::Heap)
            .collect(),
        Structure::FingerTree => gen::structural_seqs(gen::FINGER_ENUM_DEPTH)
            .into_iter()
            .map(Instance::FingerTree)
            .collect(),
    };
    for ops in gen::random_traces(cfg) {
        let phis = PotentialFns::default();
        match cfg.structure {
            Structure::Stack => {
                let mut d = script::StackDriver::new(phis);
                ops.iter()
                    .for_each(|op| drop(script::Driver::apply(&mut d, op)));
                out.push(Instance::Stack(d.stack));
            }
            Structure::Heap => {
                let mut d = script::HeapDriver::new(phis);
                ops.iter()
                    .for_each(|op| drop(script::Driver::apply(&mut d, op)));
                out.push(Instance::Heap(d.forest));
            }
            Structure::FingerTree => {
                let mut d = script::FingerDriver::new(phis);
                ops.iter()
                    .for_each(|op| drop(script::Driver::apply(&mut d, op)));
                out.push(Instance::FingerTree(d.main));
            }
        }
    }
    out
}

pub fn run_bound_suite(structure: Structure, cfg: &GenConfig) -> VerifyReport {
    run_bound_suite_with(structure, cfg, PotentialFns::default())
}

pub fn run_bound_suite_with(
    structure: Structure,
    cfg: &GenConfig,
    phis: PotentialFns,
) -> VerifyReport {
    let cfg = GenConfig {
        structure,
        ..cfg.clone()
    };
    match structure {
        Structure::Stack => stack_suite::bounds(&cfg, phis),
        Structure::Heap => heap_suite::bounds(&cfg, phis),
        Structure::FingerTree => finger_suite::bounds(&cfg, phis),
    }
}

pub fn oracle_check(structure: Structure, cfg: &GenConfig) -> VerifyReport {
    let cfg = GenConfig {
        structure,
        ..cfg.clone()
    };
    match structure {
        Structure::Stack => stack_suite::oracle(&cfg),
        Structure::Heap => heap_suite::oracle(&cfg),
        Structure::FingerTree => finger_suite::oracle(&cfg),
    }
}

pub fn timing_crosscheck(structure: Structure, cfg: &GenConfig) -> VerifyReport {
    let cfg = GenConfig {
        structure,
        ..cfg.clone()
    };
    match structure {
        Structure::Stack => stack_suite::timing(&cfg),
        Structure::Heap => heap_suite::timing(&cfg),
        Structure::FingerTree => finger_suite::timing(&cfg),
    }
}

/// Checks shared by every structure's random traces: the telescoping
/// identity and its corollary that the actual total stays within the sum of
/// the per-step bounds.
pub(crate) fn check_trace_identities(
    rec: &mut Recorder,
    trace: &crate::cost::Trace,
    describe: &dyn Fn() -> String,
) {
    match crate::cost::telescope_check(trace) {
        Ok(t) => {
            rec.agree("telescope", true, t.holds, || {
                (describe(), "telescope".into())
            });
            let bound_total: i64 = trace.steps.iter().map(|s| s.claimed_bound).sum();
            rec.bound("actual_within_bounds", t.actual_total, bound_total, || {
                (describe(), "sum of actual costs".into())
            });
        }
        Err(e) => rec.agree(
            "telescope",
            "well-formed trace".to_string(),
            e.to_string(),
            || (describe(), "telescope".into()),
        ),
    }
}

/// Every suite for `cfg.structure`, in a fixed order.
pub fn verify_structure(cfg: &GenConfig) -> Vec<VerifyReport> {
    let s = cfg.structure;
    let mut reports = vec![
        run_bound_suite(s, cfg),
        oracle_check(s, cfg),
        timing_crosscheck(s, cfg),
    ];
    if s == Structure::FingerTree {
        reports.push(run_contract_suite(cfg));
    }
    reports
}

/// A complete verification run over several structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRun {
    pub prng: String,
    pub seed: u64,
    pub max_size: usize,
    pub trials: usize,
    pub trace_len: usize,
    pub structures: Vec<Structure>,
    pub passed: bool,
    pub reports: Vec<VerifyReport>,
}

impl VerifyRun {
    /// Runs every suite of each structure, one thread per structure.
    pub fn execute(base: &GenConfig, structures: &[Structure]) -> VerifyRun {
        let reports: Vec<VerifyReport> = std::thread::scope(|scope| {
            let handles: Vec<_> = structures
                .iter()
                .map(|&s| {
                    let cfg = GenConfig {
                        structure: s,
                        ..base.clone()
                    };
                    scope.spawn(move || verify_structure(&cfg))
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite thread panicked"))
                .collect()
        });
        VerifyRun {
            prng: gen::PRNG_NAME.to_string(),
            seed: base.seed,
            max_size: base.max_size,
            trials: base.num_traces,
            trace_len: base.trace_len,
            structures: structures.to_vec(),
            passed: reports.iter().all(VerifyReport::passed),
            reports,
        }
    }

    pub fn without_timing(&self) -> Self {
        VerifyRun {
            reports: self
                .reports
                .iter()
                .map(VerifyReport::without_timing)
                .collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "seed {} ({}), max_size {}, trials {}, trace_len {}\n",
            self.seed, self.prng, self.max_size, self.trials, self.trace_len
        );
        for r in &self.reports {
            out.push_str(&r.to_text());
        }
        out.push_str(if self.passed {
            "all suites passed\n"
        } else {
            "FAILED\n"
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(structure: Structure) -> GenConfig {
        GenConfig {
            structure,
            max_size: 16,
            num_traces: 20,
            trace_len: 30,
            seed: 3,
        }
    }

    #[test]
    fn stack_enumeration_small() {
        let cfg = GenConfig {
            max_size: 2,
            num_traces: 0,
            ..small(Structure::Stack)
        };
        let got: Vec<String> = enumerate_structures(&cfg)
            .iter()
            .map(|i| i.to_string())
            .collect();
        assert_eq!(got, vec!["[]", "[0]", "[0, 1]"]);
    }

    #[test]
    fn heap_enumeration_contains_three_element_forest() {
        let cfg = GenConfig {
            max_size: 3,
            num_traces: 0,
            ..small(Structure::Heap)
        };
        let instances = enumerate_structures(&cfg);
        assert!(instances.iter().any(
            |i| matches!(i, Instance::Heap(f) if f.len() == 3 && f.occupancy() == vec![true, true])
        ));
        assert!(instances
            .iter()
            .all(|i| matches!(i, Instance::Heap(f) if f.len() <= 3)));
    }

    #[test]
    fn enumeration_replays() {
        for s in Structure::ALL {
            let cfg = small(s);
            let a: Vec<String> = enumerate_structures(&cfg)
                .iter()
                .map(|i| i.to_string())
                .collect();
            let b: Vec<String> = enumerate_structures(&cfg)
                .iter()
                .map(|i| i.to_string())
                .collect();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn small_suites_pass() {
        for s in Structure::ALL {
            for report in verify_structure(&small(s)) {
                assert!(report.passed(), "{}", report.to_text());
                assert!(report.cases_run > 0);
            }
        }
    }

    #[test]
    fn off_by_one_stack_potential_is_caught() {
        fn inflated(s: &Stack<i64>) -> Potential {
            match s {
                Stack::Empty => Potential(0),
                _ => Potential(stack::potential(s).value() + 1),
            }
        }
        let phis = PotentialFns {
            stack: inflated,
            ..PotentialFns::default()
        };
        let report = run_bound_suite_with(Structure::Stack, &small(Structure::Stack), phis);
        assert!(report.violation_count >= 1);
        assert!(!report.violations.is_empty());
        assert!(!report.passed());
    }

    #[test]
    fn structure_names_round_trip() {
        for s in Structure::ALL {
            assert_eq!(s.name().parse::<Structure>().unwrap(), s);
            assert_eq!(
                serde_json::to_string(&s).unwrap(),
                format!("\"{}\"", s.name())
            );
        }
        assert!("queue".parse::<Structure>().is_err());
    }
}
