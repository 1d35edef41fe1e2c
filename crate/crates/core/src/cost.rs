//! Structure-agnostic amortized-cost accounting.
//!
//! Costs and potentials are exact integers. A [`Trace`] records one executed
//! operation per [`StepRecord`], starting from an empty structure, and can be
//! checked against the telescoping identity
//! `sum(actual) = sum(amortized) - phi(last) + phi(first)`, against the
//! per-step claimed bounds, or replayed through a banker's account.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Abstract time units charged by an operation.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Cost(pub u64);

impl Cost {
    pub const ONE: Cost = Cost(1);

    pub fn units(self) -> u64 {
        self.0
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Stored work of a structure state. Zero exactly on the empty structure.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Potential(pub u64);

impl Potential {
    pub const ZERO: Potential = Potential(0);

    pub fn value(self) -> u64 {
        self.0
    }
}

impl Add for Potential {
    type Output = Potential;

    fn add(self, rhs: Potential) -> Potential {
        Potential(self.0 + rhs.0)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unit counter threaded through an operation; one tick per clause entry.
pub trait Meter {
    fn tick(&mut self);
}

/// Meter that discards ticks.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoMeter;

impl Meter for NoMeter {
    #[inline]
    fn tick(&mut self) {}
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnitCounter {
    units: u64,
}

impl UnitCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cost(&self) -> Cost {
        Cost(self.units)
    }
}

impl Meter for UnitCounter {
    #[inline]
    fn tick(&mut self) {
        self.units += 1;
    }
}

/// The fixed vocabulary of traced operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpLabel {
    Push,
    Multipop,
    Insert,
    Cons,
    Snoc,
    Append,
}

impl OpLabel {
    pub const ALL: [OpLabel; 6] = [
        OpLabel::Push,
        OpLabel::Multipop,
        OpLabel::Insert,
        OpLabel::Cons,
        OpLabel::Snoc,
        OpLabel::Append,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OpLabel::Push => "push",
            OpLabel::Multipop => "multipop",
            OpLabel::Insert => "insert",
            OpLabel::Cons => "cons",
            OpLabel::Snoc => "snoc",
            OpLabel::Append => "append",
        }
    }
}

impl fmt::Display for OpLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OpLabel {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OpLabel::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| TraceError::Malformed(format!("unknown operation label `{s}`")))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("malformed trace: {0}")]
    Malformed(String),
    #[error("no deposit rule for operation `{0}`")]
    NoCharge(OpLabel),
}

/// One executed operation.
///
/// Serialized as `{"op", "actual", "phi_before", "phi_after", "bound"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    #[serde(rename = "op")]
    pub op_label: OpLabel,
    pub actual: Cost,
    pub phi_before: Potential,
    pub phi_after: Potential,
    #[serde(rename = "bound")]
    pub claimed_bound: i64,
}

impl StepRecord {
    pub fn amortized(&self) -> i64 {
        amortized_step(self.actual, self.phi_before, self.phi_after)
    }
}

/// `actual + phi_after - phi_before`. May be negative.
pub fn amortized_step(actual: Cost, phi_before: Potential, phi_after: Potential) -> i64 {
    actual.0 as i64 + phi_after.0 as i64 - phi_before.0 as i64
}

/// A sequence of steps starting from the empty structure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub initial_phi: Potential,
    pub steps: Vec<StepRecord>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_steps(steps: Vec<StepRecord>) -> Self {
        Trace {
            initial_phi: Potential::ZERO,
            steps,
        }
    }

    pub fn push(&mut self, step: StepRecord) {
        self.steps.push(step);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_phi(&self) -> Potential {
        self.steps.last().map_or(self.initial_phi, |s| s.phi_after)
    }

    /// Checks the trace invariants: zero initial potential, every step costs
    /// at least one unit, and potentials chain from step to step.
    pub fn validate(&self) -> Result<(), TraceError> {
        if self.initial_phi != Potential::ZERO {
            return Err(TraceError::Malformed(format!(
                "initial potential is {}, traces start from the empty structure",
                self.initial_phi
            )));
        }
        let mut phi = self.initial_phi;
        for (i, step) in self.steps.iter().enumerate() {
            if step.actual.0 < 1 {
                return Err(TraceError::Malformed(format!("step {i}: actual cost 0")));
            }
            if step.phi_before != phi {
                return Err(TraceError::Malformed(format!(
                    "step {i}: phi_before {} does not match previous phi_after {}",
                    step.phi_before, phi
                )));
            }
            phi = step.phi_after;
        }
        Ok(())
    }

    /// Serializes as JSON lines, one object per step.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("step records always serialize"));
            out.push('\n');
        }
        out
    }

    /// Parses JSON lines produced by [`Trace::to_json_lines`]. Blank lines
    /// are skipped; the result is validated.
    pub fn from_json_lines(text: &str) -> Result<Trace, TraceError> {
        let mut steps = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let step: StepRecord = serde_json::from_str(line)
                .map_err(|e| TraceError::Malformed(format!("line {}: {e}", n + 1)))?;
            steps.push(step);
        }
        let trace = Trace::from_steps(steps);
        trace.validate()?;
        Ok(trace)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Telescope {
    pub holds: bool,
    pub actual_total: i64,
    pub amortized_total: i64,
    /// Potential left in the final structure: the overestimate of the
    /// amortized total over the actual total.
    pub residual: Potential,
}

/// Verifies `sum(actual) = sum(amortized) - phi(last) + phi(first)` exactly.
pub fn telescope_check(trace: &Trace) -> Result<Telescope, TraceError> {
    trace.validate()?;
    let actual_total: i64 = trace.steps.iter().map(|s| s.actual.0 as i64).sum();
    let amortized_total: i64 = trace.steps.iter().map(StepRecord::amortized).sum();
    let residual = trace.final_phi();
    let holds = actual_total == amortized_total - residual.0 as i64 + trace.initial_phi.0 as i64;
    Ok(Telescope {
        holds,
        actual_total,
        amortized_total,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundViolation {
    pub step: usize,
    pub op: OpLabel,
    pub amortized: i64,
    pub bound: i64,
}

/// Every step whose amortized cost exceeds its claimed bound.
pub fn bound_check(trace: &Trace) -> Vec<BoundViolation> {
    trace
        .steps
        .iter()
        .enumerate()
        .filter(|(_, s)| s.amortized() > s.claimed_bound)
        .map(|(step, s)| BoundViolation {
            step,
            op: s.op_label,
            amortized: s.amortized(),
            bound: s.claimed_bound,
        })
        .collect()
}

/// What an operation deposits into the bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Charge {
    Fixed(i64),
    /// The step's own claimed bound (for operations with size-dependent bounds).
    ClaimedBound,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepositRule {
    charges: BTreeMap<OpLabel, Charge>,
}

impl DepositRule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, op: OpLabel, charge: Charge) -> Self {
        self.charges.insert(op, charge);
        self
    }

    /// Push pays 2 (its own unit plus one credit), multipop pays 1 for its
    /// base clause and withdraws the rest.
    pub fn stack() -> Self {
        DepositRule::new()
            .with(OpLabel::Push, Charge::Fixed(2))
            .with(OpLabel::Multipop, Charge::Fixed(1))
    }

    /// Every operation deposits its claimed bound.
    pub fn claimed_bounds() -> Self {
        OpLabel::ALL
            .into_iter()
            .fold(DepositRule::new(), |rule, op| {
                rule.with(op, Charge::ClaimedBound)
            })
    }

    pub fn charge_for(&self, step: &StepRecord) -> Result<i64, TraceError> {
        match self.charges.get(&step.op_label) {
            Some(Charge::Fixed(c)) => Ok(*c),
            Some(Charge::ClaimedBound) => Ok(step.claimed_bound),
            None => Err(TraceError::NoCharge(step.op_label)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankLedger {
    /// Account balance after each step.
    pub balance_history: Vec<i64>,
    /// Steps after which the balance was negative.
    pub negative_steps: Vec<usize>,
}

impl BankLedger {
    pub fn is_solvent(&self) -> bool {
        self.negative_steps.is_empty()
    }

    pub fn final_balance(&self) -> i64 {
        self.balance_history.last().copied().unwrap_or(0)
    }
}

/// Replays a trace through the banker's account:
/// `balance_i = balance_{i-1} + charge_i - actual_i`.
pub fn banker_simulate(trace: &Trace, rule: &DepositRule) -> Result<BankLedger, TraceError> {
    let mut ledger = BankLedger::default();
    let mut balance = 0i64;
    for (i, step) in trace.steps.iter().enumerate() {
        balance += rule.charge_for(step)? - step.actual.0 as i64;
        if balance < 0 {
            ledger.negative_steps.push(i);
        }
        ledger.balance_history.push(balance);
    }
    Ok(ledger)
}
