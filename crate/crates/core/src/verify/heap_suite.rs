use std::sync::Arc;

use crate::cost::{amortized_step, Cost, Potential, Trace, UnitCounter};
use crate::heap::{self, Forest, Tree};

use super::gen;
use super::script::{self, render_ops, Driver, HeapDriver, Op, INSERT_BOUND};
use super::{check_trace_identities, GenConfig, PotentialFns, Recorder, VerifyReport};

/// Values inserted into every enumerated forest besides the order's own:
/// below, above and equal to everything present.
const PROBES: [i64; 3] = [-1, 1000, 0];

fn show(f: &Forest<i64>) -> String {
    format!("heap {f}")
}

/// Least-significant-first bits of `n`.
fn bits(mut n: usize) -> Vec<bool> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % 2 == 1);
        n /= 2;
    }
    out
}

fn leading_ones(f: &Forest<i64>) -> u64 {
    f.occupancy().iter().take_while(|&&b| b).count() as u64
}

pub(super) fn bounds(cfg: &GenConfig, phis: PotentialFns) -> VerifyReport {
    let mut rec = Recorder::new("bounds", cfg);
    let phi = phis.heap;

    for f in gen::exhaustive_forests(cfg) {
        for x in PROBES {
            // every recursive call of the carry chain is itself an insertTree
            let mut t = Tree::singleton(x);
            let mut cur = f.clone();
            let mut depth = 0;
            loop {
                let t_cost = heap::insert_time(&t, &cur).expect("carry ranks match");
                let out = heap::insert_tree(t.clone(), &cur).expect("carry ranks match");
                let a = amortized_step(t_cost, phi(&cur), phi(&out));
                rec.bound("insert", a, INSERT_BOUND, || {
                    (show(&f), format!("insert {x} (carry depth {depth})"))
                });
                match cur {
                    Forest::One(other, rest) => {
                        t = heap::merge_tree(&Arc::new(t), &other).expect("carry ranks match");
                        cur = (*rest).clone();
                        depth += 1;
                    }
                    _ => break,
                }
            }
        }
    }

    for ops in gen::random_traces(cfg) {
        let mut d = HeapDriver::new(phis);
        let mut steps = Vec::with_capacity(ops.len());
        for op in &ops {
            let before = show(&d.forest);
            let e = d.apply(op).expect("generated heap ops are valid");
            rec.bound(
                "insert",
                e.record.amortized(),
                e.record.claimed_bound,
                || (before, op.to_string()),
            );
            steps.push(e.record);
        }
        let trace = Trace::from_steps(steps);
        check_trace_identities(&mut rec, &trace, &|| format!("trace {}", render_ops(&ops)));
    }
    rec.finish()
}

fn check_state(
    rec: &mut Recorder,
    f: &Forest<i64>,
    prev: &Forest<i64>,
    model: &[i64],
    repro: &dyn Fn() -> (String, String),
) {
    let mut got: Vec<i64> = f.elements().into_iter().copied().collect();
    got.sort_unstable();
    rec.agree("multiset", model, &got[..], repro);
    rec.agree("counter_bits", bits(model.len()), f.occupancy(), repro);
    rec.agree(
        "binary_increment",
        heap::binary_increment(&prev.occupancy()),
        f.occupancy(),
        repro,
    );
    rec.agree("shape", Vec::new(), heap::validate(f), repro);
    rec.agree(
        "popcount",
        Potential(bits(model.len()).iter().filter(|&&b| b).count() as u64),
        heap::potential(f),
        repro,
    );
    rec.agree("min", model.first(), f.min(), repro);
}

pub(super) fn oracle(cfg: &GenConfig) -> VerifyReport {
    let mut rec = Recorder::new("oracle", cfg);

    let mut sequences: Vec<(String, Vec<i64>)> = gen::heap_orders(cfg)
        .into_iter()
        .map(|(name, order)| (name.to_string(), order))
        .collect();
    for ops in gen::random_traces(cfg) {
        let values = ops
            .iter()
            .map(|op| match *op {
                Op::Insert(x) => x,
                _ => unreachable!("heap traces hold inserts"),
            })
            .collect();
        sequences.push((format!("trace {}", render_ops(&ops)), values));
    }

    for (name, order) in &sequences {
        let mut f = Forest::End;
        let mut model: Vec<i64> = Vec::new();
        for (i, &x) in order.iter().enumerate() {
            let prev = f;
            f = heap::insert(x, &prev).expect("insert-built forests are valid");
            let at = model.partition_point(|&y| y <= x);
            model.insert(at, x);
            let repro = || (format!("{name}, prefix {i}"), format!("insert {x}"));
            check_state(&mut rec, &f, &prev, &model, &repro);
        }
    }
    rec.finish()
}

pub(super) fn timing(cfg: &GenConfig) -> VerifyReport {
    let mut rec = Recorder::new("timing", cfg);

    for f in gen::exhaustive_forests(cfg) {
        for x in PROBES {
            let t = Tree::singleton(x);
            let mut m = UnitCounter::new();
            heap::insert_tree_metered(t.clone(), &f, &mut m).expect("carry ranks match");
            let mirrored = heap::insert_time(&t, &f).expect("carry ranks match");
            let repro = || (show(&f), format!("insert {x}"));
            rec.agree("insert_time", mirrored, m.cost(), repro);
            rec.agree(
                "insert_time_is_carry_length",
                Cost(1 + leading_ones(&f)),
                mirrored,
                repro,
            );
            rec.bound("cost_at_least_one", 1, mirrored.units() as i64, repro);
        }
    }

    for ops in gen::random_traces(cfg) {
        let mut d = script::driver(cfg.structure, PotentialFns::default());
        for op in &ops {
            let before = d.describe();
            let e = d.apply(op).expect("generated heap ops are valid");
            rec.agree("trace_metered", e.record.actual, e.metered, || {
                (before, op.to_string())
            });
        }
    }
    rec.finish()
}
