use crate::cost::{amortized_step, banker_simulate, DepositRule, Potential, UnitCounter};
use crate::stack::{self, Stack};

use super::gen::{self, MAX_MULTIPOP};
use super::script::{self, render_ops, Driver, Op, StackDriver, MULTIPOP_BOUND, PUSH_BOUND};
use super::{check_trace_identities, GenConfig, PotentialFns, Recorder, VerifyReport};

const PUSH_VALUES: [i64; 3] = [0, -1, 1000];

fn show(s: &Stack<i64>) -> String {
    format!("stack {:?}", s.to_vec())
}

pub(super) fn bounds(cfg: &GenConfig, phis: PotentialFns) -> VerifyReport {
    let mut rec = Recorder::new("bounds", cfg);
    let phi = phis.stack;

    for s in gen::exhaustive_stacks(cfg) {
        for x in PUSH_VALUES {
            let pushed = stack::push(x, &s);
            let a = amortized_step(stack::push_time(&x, &s), phi(&s), phi(&pushed));
            rec.bound("push", a, PUSH_BOUND, || (show(&s), format!("push {x}")));
        }
        for k in 0..=MAX_MULTIPOP {
            let (_, rest) = stack::multipop(k, &s).expect("k is nonnegative");
            let t = stack::multipop_time(k, &s).expect("k is nonnegative");
            let a = amortized_step(t, phi(&s), phi(&rest));
            rec.bound("multipop", a, MULTIPOP_BOUND, || {
                (show(&s), format!("multipop {k}"))
            });
        }
    }

    for ops in gen::random_traces(cfg) {
        let mut d = StackDriver::new(phis);
        let mut steps = Vec::with_capacity(ops.len());
        let mut heights = Vec::with_capacity(ops.len());
        for op in &ops {
            let before = show(&d.stack);
            let e = d.apply(op).expect("generated stack ops are valid");
            let check = match op {
                Op::Push(_) => "push",
                _ => "multipop",
            };
            rec.bound(check, e.record.amortized(), e.record.claimed_bound, || {
                (before, op.to_string())
            });
            steps.push(e.record);
            heights.push(d.stack.height() as i64);
        }
        let trace = crate::cost::Trace::from_steps(steps);
        let describe = || format!("trace {}", render_ops(&ops));
        check_trace_identities(&mut rec, &trace, &describe);

        let ledger =
            banker_simulate(&trace, &DepositRule::stack()).expect("stack ops have charges");
        rec.agree(
            "banker_equals_height",
            &heights,
            &ledger.balance_history,
            || (describe(), "banker account".into()),
        );
        rec.agree("banker_solvent", true, ledger.is_solvent(), || {
            (describe(), "banker account".into())
        });
    }
    rec.finish()
}

pub(super) fn oracle(cfg: &GenConfig) -> VerifyReport {
    let mut rec = Recorder::new("oracle", cfg);

    for s in gen::exhaustive_stacks(cfg) {
        let model = s.to_vec();
        for x in PUSH_VALUES {
            let mut expected = vec![x];
            expected.extend(&model);
            rec.agree("push_model", expected, stack::push(x, &s).to_vec(), || {
                (show(&s), format!("push {x}"))
            });
        }
        for k in 0..=MAX_MULTIPOP {
            let (popped, rest) = stack::multipop(k, &s).expect("k is nonnegative");
            let cut = (k as usize).min(model.len());
            rec.agree(
                "multipop_model",
                (model[..cut].to_vec(), model[cut..].to_vec()),
                (popped, rest.to_vec()),
                || (show(&s), format!("multipop {k}")),
            );
        }
        rec.agree(
            "potential_is_height",
            Potential(model.len() as u64),
            stack::potential(&s),
            || (show(&s), "potential".into()),
        );
    }

    for ops in gen::random_traces(cfg) {
        let mut s = Stack::Empty;
        let mut model: Vec<i64> = Vec::new();
        for op in &ops {
            let before = show(&s);
            match *op {
                Op::Push(x) => {
                    let shared = s.clone();
                    s = stack::push(x, &s);
                    model.insert(0, x);
                    rec.agree("sharing", &model[1..], &shared.to_vec()[..], || {
                        (before.clone(), op.to_string())
                    });
                }
                Op::Multipop(k) => {
                    let (popped, rest) =
                        stack::multipop(k, &s).expect("generated counts are nonnegative");
                    let cut = (k as usize).min(model.len());
                    let expected: Vec<i64> = model.drain(..cut).collect();
                    rec.agree("multipop_model", expected, popped, || {
                        (before.clone(), op.to_string())
                    });
                    s = rest;
                }
                _ => unreachable!("stack traces hold stack ops"),
            }
            rec.agree("trace_model", &model, &s.to_vec(), || {
                (before, op.to_string())
            });
        }
    }
    rec.finish()
}

pub(super) fn timing(cfg: &GenConfig) -> VerifyReport {
    let mut rec = Recorder::new("timing", cfg);

    for s in gen::exhaustive_stacks(cfg) {
        for x in PUSH_VALUES {
            let mut m = UnitCounter::new();
            stack::push_metered(x, &s, &mut m);
            rec.agree("push_time", stack::push_time(&x, &s), m.cost(), || {
                (show(&s), format!("push {x}"))
            });
        }
        for k in 0..=MAX_MULTIPOP {
            let mut m = UnitCounter::new();
            stack::multipop_metered(k, &s, &mut m).expect("k is nonnegative");
            let t = stack::multipop_time(k, &s).expect("k is nonnegative");
            rec.agree("multipop_time", t, m.cost(), || {
                (show(&s), format!("multipop {k}"))
            });
            rec.bound("cost_at_least_one", 1, t.units() as i64, || {
                (show(&s), format!("multipop {k}"))
            });
        }
    }

    for ops in gen::random_traces(cfg) {
        let mut d = script::driver(cfg.structure, PotentialFns::default());
        for op in &ops {
            let before = d.describe();
            let e = d.apply(op).expect("generated stack ops are valid");
            rec.agree("trace_metered", e.record.actual, e.metered, || {
                (before, op.to_string())
            });
        }
    }
    rec.finish()
}
