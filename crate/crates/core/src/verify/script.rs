//! Operation scripts and the drivers that execute them into traces.
//!
//! A script is newline-delimited `op arg...` lines; `#` starts a comment.
//!
//! | line          | structure  | effect                                       |
//! |---------------|------------|----------------------------------------------|
//! | `push X`      | stack      | push X                                       |
//! | `multipop K`  | stack      | pop up to K >= 0 elements                    |
//! | `insert X`    | heap       | insert X                                     |
//! | `cons X`      | fingertree | prepend X to the main sequence               |
//! | `snoc X`      | fingertree | append X to the main sequence                |
//! | `stage X`     | fingertree | append X to the staged sequence (a `snoc` step) |
//! | `append`      | fingertree | concatenate main ++ staged, emptying staged  |
//!
//! The finger-tree state is the pair (main, staged) and its potential is the
//! sum of both potentials, so an `append` step is charged exactly the
//! glue amortized cost `glueT + phi(result) - phi(main) - phi(staged)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cost::{
    amortized_step, banker_simulate, Cost, DepositRule, OpLabel, Potential, StepRecord, Trace,
    TraceError, UnitCounter,
};
use crate::finger_tree::{self as ft, Node, Seq};
use crate::heap::{self, Forest, Tree};
use crate::stack::{self, Stack};

use super::{PotentialFns, Structure};

pub const PUSH_BOUND: i64 = 2;
pub const MULTIPOP_BOUND: i64 = 2;
pub const INSERT_BOUND: i64 = 2;
pub const CONS_BOUND: i64 = 3;
pub const SNOC_BOUND: i64 = 3;
pub const GLUE_CONSTANT: i64 = 14;

/// `log2(max(n, 2)) + 14`.
pub fn glue_bound(n: usize) -> i64 {
    ft::log2(n.max(2) as i64).expect("argument is at least 2") as i64 + GLUE_CONSTANT
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "op", content = "arg", rename_all = "lowercase")]
pub enum Op {
    Push(i64),
    Multipop(i64),
    Insert(i64),
    Cons(i64),
    Snoc(i64),
    Stage(i64),
    Append,
}

impl Op {
    pub fn structure(&self) -> Structure {
        match self {
            Op::Push(_) | Op::Multipop(_) => Structure::Stack,
            Op::Insert(_) => Structure::Heap,
            Op::Cons(_) | Op::Snoc(_) | Op::Stage(_) | Op::Append => Structure::FingerTree,
        }
    }

    pub fn label(&self) -> OpLabel {
        match self {
            Op::Push(_) => OpLabel::Push,
            Op::Multipop(_) => OpLabel::Multipop,
            Op::Insert(_) => OpLabel::Insert,
            Op::Cons(_) => OpLabel::Cons,
            Op::Snoc(_) | Op::Stage(_) => OpLabel::Snoc,
            Op::Append => OpLabel::Append,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Push(x) => write!(f, "push {x}"),
            Op::Multipop(k) => write!(f, "multipop {k}"),
            Op::Insert(x) => write!(f, "insert {x}"),
            Op::Cons(x) => write!(f, "cons {x}"),
            Op::Snoc(x) => write!(f, "snoc {x}"),
            Op::Stage(x) => write!(f, "stage {x}"),
            Op::Append => f.write_str("append"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScriptError {
    #[error("malformed script, line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("step {step} ({op}) rejected: {message}")]
    Rejected {
        step: usize,
        op: String,
        message: String,
    },
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    /// `None` for a script without operations.
    pub structure: Option<Structure>,
    pub ops: Vec<Op>,
}

pub fn parse_script(text: &str) -> Result<Script, ScriptError> {
    let mut script = Script::default();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: String| ScriptError::Malformed { line, message };
        let mut words = content.split_whitespace();
        let name = words.next().expect("nonempty line has a word");
        let args: Vec<&str> = words.collect();
        let int_arg = || -> Result<i64, ScriptError> {
            match args.as_slice() {
                [a] => a
                    .parse::<i64>()
                    .map_err(|e| bad(format!("`{name}` argument `{a}`: {e}"))),
                _ => Err(bad(format!("`{name}` takes exactly one integer argument"))),
            }
        };
        let op = match name {
            "push" => Op::Push(int_arg()?),
            "multipop" => {
                let k = int_arg()?;
                if k < 0 {
                    return Err(bad(format!("multipop count must be nonnegative, got {k}")));
                }
                Op::Multipop(k)
            }
            "insert" => Op::Insert(int_arg()?),
            "cons" => Op::Cons(int_arg()?),
            "snoc" => Op::Snoc(int_arg()?),
            "stage" => Op::Stage(int_arg()?),
            "append" if args.is_empty() => Op::Append,
            "append" => {
                return Err(bad(
                    "`append` takes no arguments; stage elements first".into()
                ))
            }
            other => return Err(bad(format!("unknown operation `{other}`"))),
        };
        match script.structure {
            None => script.structure = Some(op.structure()),
            Some(s) if s != op.structure() => {
                return Err(bad(format!(
                    "`{name}` is a {} operation in a {s} script",
                    op.structure()
                )));
            }
            Some(_) => {}
        }
        script.ops.push(op);
    }
    Ok(script)
}

/// One executed operation: its trace record and the unit count observed by
/// the metered implementation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Executed {
    pub record: StepRecord,
    pub metered: Cost,
}

/// Executes operations of one structure starting from the empty state.
pub trait Driver {
    fn structure(&self) -> Structure;
    fn potential(&self) -> Potential;
    fn apply(&mut self, op: &Op) -> Result<Executed, String>;
    /// Reproducer text for the current state.
    fn describe(&self) -> String;
}

pub fn driver(structure: Structure, phis: PotentialFns) -> Box<dyn Driver + Send> {
    match structure {
        Structure::Stack => Box::new(StackDriver::new(phis)),
        Structure::Heap => Box::new(HeapDriver::new(phis)),
        Structure::FingerTree => Box::new(FingerDriver::new(phis)),
    }
}

fn record(
    op: OpLabel,
    actual: Cost,
    before: Potential,
    after: Potential,
    bound: i64,
) -> StepRecord {
    StepRecord {
        op_label: op,
        actual,
        phi_before: before,
        phi_after: after,
        claimed_bound: bound,
    }
}

fn wrong_structure(op: &Op, expected: Structure) -> String {
    format!("`{op}` is not a {expected} operation")
}

pub struct StackDriver {
    pub stack: Stack<i64>,
    phis: PotentialFns,
}

impl StackDriver {
    pub fn new(phis: PotentialFns) -> Self {
        StackDriver {
            stack: Stack::Empty,
            phis,
        }
    }
}

impl Driver for StackDriver {
    fn structure(&self) -> Structure {
        Structure::Stack
    }

    fn potential(&self) -> Potential {
        (self.phis.stack)(&self.stack)
    }

    fn apply(&mut self, op: &Op) -> Result<Executed, String> {
        let before = self.potential();
        let mut meter = UnitCounter::new();
        let (actual, next, bound) = match *op {
            Op::Push(x) => {
                let t = stack::push_time(&x, &self.stack);
                (
                    t,
                    stack::push_metered(x, &self.stack, &mut meter),
                    PUSH_BOUND,
                )
            }
            Op::Multipop(k) => {
                let t = stack::multipop_time(k, &self.stack).map_err(|e| e.to_string())?;
                let (_, rest) = stack::multipop_metered(k, &self.stack, &mut meter)
                    .map_err(|e| e.to_string())?;
                (t, rest, MULTIPOP_BOUND)
            }
            _ => return Err(wrong_structure(op, Structure::Stack)),
        };
        self.stack = next;
        let after = self.potential();
        Ok(Executed {
            record: record(op.label(), actual, before, after, bound),
            metered: meter.cost(),
        })
    }

    fn describe(&self) -> String {
        format!("stack {:?}", self.stack.to_vec())
    }
}

pub struct HeapDriver {
    pub forest: Forest<i64>,
    phis: PotentialFns,
}

impl HeapDriver {
    pub fn new(phis: PotentialFns) -> Self {
        HeapDriver {
            forest: Forest::End,
            phis,
        }
    }
}

impl Driver for HeapDriver {
    fn structure(&self) -> Structure {
        Structure::Heap
    }

    fn potential(&self) -> Potential {
        (self.phis.heap)(&self.forest)
    }

    fn apply(&mut self, op: &Op) -> Result<Executed, String> {
        let Op::Insert(x) = *op else {
            return Err(wrong_structure(op, Structure::Heap));
        };
        let before = self.potential();
        let t = Tree::singleton(x);
        let actual = heap::insert_time(&t, &self.forest).map_err(|e| e.to_string())?;
        let mut meter = UnitCounter::new();
        self.forest =
            heap::insert_tree_metered(t, &self.forest, &mut meter).map_err(|e| e.to_string())?;
        let after = self.potential();
        Ok(Executed {
            record: record(OpLabel::Insert, actual, before, after, INSERT_BOUND),
            metered: meter.cost(),
        })
    }

    fn describe(&self) -> String {
        format!("heap {}", self.forest)
    }
}

pub struct FingerDriver {
    pub main: Seq<i64>,
    pub staged: Seq<i64>,
    phis: PotentialFns,
}

impl FingerDriver {
    pub fn new(phis: PotentialFns) -> Self {
        FingerDriver {
            main: Seq::Nil,
            staged: Seq::Nil,
            phis,
        }
    }
}

impl Driver for FingerDriver {
    fn structure(&self) -> Structure {
        Structure::FingerTree
    }

    fn potential(&self) -> Potential {
        (self.phis.seq)(&self.main) + (self.phis.seq)(&self.staged)
    }

    fn apply(&mut self, op: &Op) -> Result<Executed, String> {
        let before = self.potential();
        let mut meter = UnitCounter::new();
        let (actual, bound) = match *op {
            Op::Cons(x) => {
                let x = Node::Leaf(x);
                let t = ft::cons_time(&x, &self.main);
                self.main = ft::cons_metered(x, &self.main, &mut meter);
                (t, CONS_BOUND)
            }
            Op::Snoc(x) => {
                let x = Node::Leaf(x);
                let t = ft::snoc_time(&self.main, &x);
                self.main = ft::snoc_metered(&self.main, x, &mut meter);
                (t, SNOC_BOUND)
            }
            Op::Stage(x) => {
                let x = Node::Leaf(x);
                let t = ft::snoc_time(&self.staged, &x);
                self.staged = ft::snoc_metered(&self.staged, x, &mut meter);
                (t, SNOC_BOUND)
            }
            Op::Append => {
                let n = self.main.len() + self.staged.len();
                let t = ft::glue_time(&self.main, &[], &self.staged).map_err(|e| e.to_string())?;
                self.main = ft::glue_metered(&self.main, &[], &self.staged, &mut meter)
                    .map_err(|e| e.to_string())?;
                self.staged = Seq::Nil;
                (t, glue_bound(n))
            }
            _ => return Err(wrong_structure(op, Structure::FingerTree)),
        };
        let after = self.potential();
        Ok(Executed {
            record: record(op.label(), actual, before, after, bound),
            metered: meter.cost(),
        })
    }

    fn describe(&self) -> String {
        format!("main {} staged {}", self.main, self.staged)
    }
}

/// `op; op; ...` for reproducers.
pub fn render_ops(ops: &[Op]) -> String {
    ops.iter().map(Op::to_string).collect::<Vec<_>>().join("; ")
}

/// Runs `ops` from the empty structure and returns the trace.
pub fn run_ops(structure: Structure, ops: &[Op], phis: PotentialFns) -> Result<Trace, ScriptError> {
    let mut d = driver(structure, phis);
    let mut trace = Trace::new();
    for (step, op) in ops.iter().enumerate() {
        let executed = d.apply(op).map_err(|message| ScriptError::Rejected {
            step,
            op: op.to_string(),
            message,
        })?;
        trace.push(executed.record);
    }
    Ok(trace)
}

/// Deposit rule used for ledgers: the stack rule for stacks, each step's
/// claimed bound otherwise.
pub fn deposit_rule(structure: Structure) -> DepositRule {
    match structure {
        Structure::Stack => DepositRule::stack(),
        _ => DepositRule::claimed_bounds(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerRow {
    pub step: usize,
    pub op: OpLabel,
    pub command: String,
    pub actual: Cost,
    pub phi_before: Potential,
    pub phi_after: Potential,
    pub amortized: i64,
    pub bound: i64,
    pub balance: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ledger {
    pub structure: Structure,
    pub rows: Vec<LedgerRow>,
    pub actual_total: i64,
    pub amortized_total: i64,
    pub residual: Potential,
    pub telescope_holds: bool,
    pub bound_violations: usize,
    pub bank_solvent: bool,
}

pub fn ledger(structure: Structure, ops: &[Op], phis: PotentialFns) -> Result<Ledger, ScriptError> {
    let trace = run_ops(structure, ops, phis)?;
    let telescope = crate::cost::telescope_check(&trace)?;
    let bank = banker_simulate(&trace, &deposit_rule(structure))?;
    let rows = trace
        .steps
        .iter()
        .zip(ops)
        .zip(&bank.balance_history)
        .enumerate()
        .map(|(step, ((s, op), &balance))| LedgerRow {
            step,
            op: s.op_label,
            command: op.to_string(),
            actual: s.actual,
            phi_before: s.phi_before,
            phi_after: s.phi_after,
            amortized: amortized_step(s.actual, s.phi_before, s.phi_after),
            bound: s.claimed_bound,
            balance,
        })
        .collect();
    Ok(Ledger {
        structure,
        rows,
        actual_total: telescope.actual_total,
        amortized_total: telescope.amortized_total,
        residual: telescope.residual,
        telescope_holds: telescope.holds,
        bound_violations: crate::cost::bound_check(&trace).len(),
        bank_solvent: bank.is_solvent(),
    })
}

impl Ledger {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:>4}  {:<14} {:>6} {:>6} {:>6} {:>9} {:>5} {:>7}\n",
            "step", "command", "actual", "phi", "phi'", "amortized", "bound", "balance"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>4}  {:<14} {:>6} {:>6} {:>6} {:>9} {:>5} {:>7}\n",
                r.step,
                r.command,
                r.actual,
                r.phi_before,
                r.phi_after,
                r.amortized,
                r.bound,
                r.balance
            ));
        }
        out.push_str(&format!(
            "total actual {} = amortized {} - residual {} ({})\n",
            self.actual_total,
            self.amortized_total,
            self.residual,
            if self.telescope_holds {
                "holds"
            } else {
                "BROKEN"
            }
        ));
        out.push_str(&format!(
            "bound violations: {}, bank {}\n",
            self.bound_violations,
            if self.bank_solvent {
                "solvent"
            } else {
                "overdrawn"
            }
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scripts() {
        let s = parse_script("push 5\n# comment\n\nmultipop 3  # trailing\n").unwrap();
        assert_eq!(s.structure, Some(Structure::Stack));
        assert_eq!(s.ops, vec![Op::Push(5), Op::Multipop(3)]);

        let s = parse_script("cons 1\nstage 2\nappend\nsnoc 3").unwrap();
        assert_eq!(
            s.ops,
            vec![Op::Cons(1), Op::Stage(2), Op::Append, Op::Snoc(3)]
        );

        assert_eq!(parse_script("").unwrap(), Script::default());
    }

    #[test]
    fn rejects_bad_scripts() {
        for (text, line) in [
            ("push 1\nmultipop -2", 2),
            ("pop 3", 1),
            ("push", 1),
            ("push x", 1),
            ("push 1 2", 1),
            ("append 4", 1),
            ("push 1\ninsert 2", 2),
        ] {
            match parse_script(text) {
                Err(ScriptError::Malformed { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn ledger_for_pushes_then_multipop() {
        let ops = [Op::Push(1), Op::Push(2), Op::Push(3), Op::Multipop(3)];
        let l = ledger(Structure::Stack, &ops, PotentialFns::default()).unwrap();
        let amortized: Vec<i64> = l.rows.iter().map(|r| r.amortized).collect();
        assert_eq!(amortized, vec![2, 2, 2, 1]);
        assert_eq!(l.actual_total, 7);
        assert_eq!(l.amortized_total, 7);
        assert_eq!(l.residual, Potential(0));
        assert!(l.telescope_holds && l.bank_solvent);
        let balances: Vec<i64> = l.rows.iter().map(|r| r.balance).collect();
        assert_eq!(balances, vec![1, 2, 3, 0]);

        let empty = ledger(Structure::Stack, &[], PotentialFns::default()).unwrap();
        assert!(empty.rows.is_empty());
        assert!(empty.telescope_holds);
    }

    #[test]
    fn append_step_charges_both_potentials() {
        let ops = [
            Op::Cons(0),
            Op::Snoc(1),
            Op::Stage(2),
            Op::Stage(3),
            Op::Append,
        ];
        let trace = run_ops(Structure::FingerTree, &ops, PotentialFns::default()).unwrap();
        let last = trace.steps.last().unwrap();
        assert_eq!(last.op_label, OpLabel::Append);
        // More [0] Nil [1] and More [2] Nil [3]: phi 2 each
        assert_eq!(last.phi_before, Potential(4));
        assert_eq!(last.claimed_bound, glue_bound(4));
        assert!(crate::cost::bound_check(&trace).is_empty());
    }

    #[test]
    fn drivers_reject_foreign_ops() {
        let err = run_ops(Structure::Heap, &[Op::Push(1)], PotentialFns::default()).unwrap_err();
        assert!(matches!(err, ScriptError::Rejected { step: 0, .. }));
        let err = run_ops(
            Structure::Stack,
            &[Op::Multipop(-1)],
            PotentialFns::default(),
        )
        .unwrap_err();
        assert!(matches!(err, ScriptError::Rejected { .. }));
    }

    #[test]
    fn glue_bound_values() {
        assert_eq!(glue_bound(0), 15);
        assert_eq!(glue_bound(2), 15);
        assert_eq!(glue_bound(3), 15);
        assert_eq!(glue_bound(128), 21);
    }
}
