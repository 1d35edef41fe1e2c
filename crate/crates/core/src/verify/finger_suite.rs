use crate::cost::{Cost, Meter, Potential, Trace, UnitCounter};
use crate::finger_tree::{self as ft, Digit, Node, Seq};

use super::gen::{self, Stream, FINGER_ENUM_DEPTH, GLUE_ENUM_DEPTH};
use super::script::{
    self, glue_bound, render_ops, Driver, FingerDriver, Op, CONS_BOUND, SNOC_BOUND,
};
use super::{check_trace_identities, GenConfig, PotentialFns, Recorder, VerifyReport};

/// Largest loose middle passed to glue.
const MAX_MIDDLE: usize = 3;
/// Labels of inserted elements, outside every generated tree's `0..n`.
const FRONT_LABEL: i64 = -1;
const BACK_LABEL: i64 = 1_000_000;
const MIDDLE_LABEL: i64 = 2_000_000;

fn leaves(k: usize, base: i64) -> Vec<Node<i64>> {
    (0..k as i64).map(|i| Node::Leaf(base + i)).collect()
}

/// A node of nesting height `h` built from pairs, labelled from `label`.
fn node_of_height(h: usize, label: i64) -> Node<i64> {
    if h == 0 {
        Node::Leaf(label)
    } else {
        let step = 1i64 << (h - 1);
        Node::pair(
            node_of_height(h - 1, label),
            node_of_height(h - 1, label + step),
        )
    }
}

fn node_leaves(xs: &[Node<i64>]) -> Vec<i64> {
    let mut out = Vec::new();
    for x in xs {
        x.push_leaves(&mut out);
    }
    out.into_iter().copied().collect()
}

/// The spine levels of `q`: `q` itself, then each nested spine, with the
/// nesting height of their items.
fn levels(q: &Seq<i64>) -> Vec<(usize, Seq<i64>)> {
    let mut out = vec![(0, q.clone())];
    let mut cur = q.clone();
    while let Seq::More(d) = &cur {
        let next = d.spine.clone();
        out.push((out.len(), next.clone()));
        cur = next;
    }
    out
}

fn pair(q1: &Seq<i64>, middle: &[Node<i64>], q2: &Seq<i64>) -> String {
    format!("q1 {q1}, as [{}], q2 {q2}", middle.len())
}

#[derive(Clone)]
struct GlueCase {
    q1: Seq<i64>,
    middle: Vec<Node<i64>>,
    q2: Seq<i64>,
}

/// Structural pairs of spine depth at most two (sampled when the product
/// space is too large) and every pair of snoc/cons-built ladders, each with
/// a middle of 0..=3 leaves; pairs above `2 * max_size` elements are dropped.
fn glue_cases(cfg: &GenConfig) -> Vec<GlueCase> {
    let limit = 2 * cfg.max_size;
    let mut out = Vec::new();
    let mut push_from = |pool: &[Seq<i64>], picked: Vec<usize>| {
        let per_pair = MAX_MIDDLE + 1;
        for i in picked {
            let (p, k) = (i / per_pair, i % per_pair);
            let (q1, q2) = (&pool[p / pool.len()], &pool[p % pool.len()]);
            if q1.len() + q2.len() <= limit {
                out.push(GlueCase {
                    q1: q1.clone(),
                    middle: leaves(k, MIDDLE_LABEL),
                    q2: q2.clone(),
                });
            }
        }
    };
    let mut rng = gen::rng(cfg, Stream::GluePairs);
    let structural = gen::structural_seqs(GLUE_ENUM_DEPTH);
    let space = structural.len() * structural.len() * (MAX_MIDDLE + 1);
    push_from(&structural, gen::sample_or_all(space, &mut rng));
    let ladders = gen::ladder_seqs(cfg.max_size);
    let space = ladders.len() * ladders.len() * (MAX_MIDDLE + 1);
    push_from(&ladders, gen::sample_or_all(space, &mut rng));
    out
}

fn cons_step(q: &Seq<i64>) -> Option<(Node<i64>, Seq<i64>)> {
    match q {
        Seq::More(d) => match &d.front {
            Digit::Three(_, z, w) => Some((Node::pair(z.clone(), w.clone()), d.spine.clone())),
            _ => None,
        },
        _ => None,
    }
}

fn snoc_step(q: &Seq<i64>) -> Option<(Node<i64>, Seq<i64>)> {
    match q {
        Seq::More(d) => match &d.back {
            Digit::Three(x, y, _) => Some((Node::pair(x.clone(), y.clone()), d.spine.clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Arguments of the recursive glue call, if there is one.
fn glue_step(c: &GlueCase) -> Option<GlueCase> {
    match (&c.q1, &c.q2) {
        (Seq::More(l), Seq::More(r)) => Some(GlueCase {
            q1: l.spine.clone(),
            middle: ft::regroup(&l.back, &c.middle, &r.front)
                .expect("digits and middle hold 2..=9 items"),
            q2: r.spine.clone(),
        }),
        _ => None,
    }
}

fn phi_i(phi: fn(&Seq<i64>) -> Potential, q: &Seq<i64>) -> i64 {
    phi(q).value() as i64
}

fn cons_fold(x: &Node<i64>, q: Seq<i64>) -> Seq<i64> {
    ft::cons(x.clone(), &q)
}

fn snoc_fold(q: Seq<i64>, x: &Node<i64>) -> Seq<i64> {
    ft::snoc(&q, x.clone())
}

fn cons_cost(x: &Node<i64>, q: &Seq<i64>) -> Cost {
    ft::cons_time(x, q)
}

fn snoc_cost(q: &Seq<i64>, x: &Node<i64>) -> Cost {
    ft::snoc_time(q, x)
}

pub(super) fn bounds(cfg: &GenConfig, phis: PotentialFns) -> VerifyReport {
    let mut rec = Recorder::new("bounds", cfg);
    let phi = phis.seq;
    let structural = gen::structural_seqs(FINGER_ENUM_DEPTH);

    for q in &structural {
        // cons and snoc at the top and at every spine level they recurse into
        let (mut x, mut cur, mut depth) = (Node::Leaf(FRONT_LABEL), q.clone(), 0);
        loop {
            let a = ft::cons_time(&x, &cur).units() as i64 + phi_i(phi, &ft::cons(x.clone(), &cur))
                - phi_i(phi, &cur);
            rec.bound("cons", a, CONS_BOUND, || {
                (format!("seq {q}"), format!("cons (spine level {depth})"))
            });
            let Some((next_x, next)) = cons_step(&cur) else {
                break;
            };
            (x, cur, depth) = (next_x, next, depth + 1);
        }
        let (mut x, mut cur, mut depth) = (Node::Leaf(BACK_LABEL), q.clone(), 0);
        loop {
            let a = ft::snoc_time(&cur, &x).units() as i64 + phi_i(phi, &ft::snoc(&cur, x.clone()))
                - phi_i(phi, &cur);
            rec.bound("snoc", a, SNOC_BOUND, || {
                (format!("seq {q}"), format!("snoc (spine level {depth})"))
            });
            let Some((next_x, next)) = snoc_step(&cur) else {
                break;
            };
            (x, cur, depth) = (next_x, next, depth + 1);
        }
    }

    let mut fold_inputs: Vec<Seq<i64>> = structural.clone();
    fold_inputs.extend(gen::ladder_seqs(cfg.max_size));
    for q in &fold_inputs {
        for (h, level) in levels(q) {
            for k in 0..=MAX_MIDDLE {
                let xs: Vec<Node<i64>> = (0..k)
                    .map(|i| node_of_height(h, MIDDLE_LABEL + (i << h) as i64))
                    .collect();
                let bound = 3 * k as i64 + 1;
                let t = ft::foldr_time(&cons_fold, &cons_cost, &level, &xs);
                let out = ft::foldr(&cons_fold, level.clone(), &xs);
                let a = t.units() as i64 + phi_i(phi, &out) - phi_i(phi, &level);
                rec.bound("fold_cons", a, bound, || {
                    (
                        format!("seq {q}"),
                        format!("foldr cons of {k} items at level {h}"),
                    )
                });
                let t = ft::foldl_time(&snoc_fold, &snoc_cost, &level, &xs);
                let out = ft::foldl(&snoc_fold, level.clone(), &xs);
                let a = t.units() as i64 + phi_i(phi, &out) - phi_i(phi, &level);
                rec.bound("fold_snoc", a, bound, || {
                    (
                        format!("seq {q}"),
                        format!("foldl snoc of {k} items at level {h}"),
                    )
                });
            }
        }
    }

    for case in glue_cases(cfg) {
        let (mut cur, mut depth) = (case.clone(), 0);
        loop {
            let t = ft::glue_time(&cur.q1, &cur.middle, &cur.q2)
                .expect("middle holds at most three items");
            let out =
                ft::glue(&cur.q1, &cur.middle, &cur.q2).expect("middle holds at most three items");
            let a = t.units() as i64 + phi_i(phi, &out) - phi_i(phi, &cur.q1) - phi_i(phi, &cur.q2);
            let n = ft::seq_to_list(&cur.q1).len() + ft::seq_to_list(&cur.q2).len();
            rec.bound("glue", a, glue_bound(n), || {
                (
                    pair(&case.q1, &case.middle, &case.q2),
                    format!("glue (spine level {depth})"),
                )
            });
            let Some(next) = glue_step(&cur) else { break };
            (cur, depth) = (next, depth + 1);
        }
    }

    for ops in gen::random_traces(cfg) {
        let mut d = FingerDriver::new(phis);
        let mut steps = Vec::with_capacity(ops.len());
        for op in &ops {
            let before = d.describe();
            let e = d.apply(op).expect("generated finger-tree ops are valid");
            let check = match op {
                Op::Cons(_) => "cons",
                Op::Append => "glue",
                _ => "snoc",
            };
            rec.bound(check, e.record.amortized(), e.record.claimed_bound, || {
                (before, op.to_string())
            });
            steps.push(e.record);
        }
        let trace = Trace::from_steps(steps);
        check_trace_identities(&mut rec, &trace, &|| format!("trace {}", render_ops(&ops)));
    }
    rec.finish()
}

fn check_valid(rec: &mut Recorder, q: &Seq<i64>, repro: impl FnOnce() -> (String, String)) {
    let found = ft::validate_seq(q);
    rec.agree("valid", 0, found.len(), repro);
}

pub(super) fn oracle(cfg: &GenConfig) -> VerifyReport {
    let mut rec = Recorder::new("oracle", cfg);

    for q in gen::structural_seqs(FINGER_ENUM_DEPTH) {
        let model = q.to_vec();
        let repro = |op: &str| (format!("seq {q}"), op.to_string());
        rec.agree(
            "seq_to_list",
            model.clone(),
            node_leaves(&ft::seq_to_list(&q)),
            || repro("seq_to_list"),
        );
        check_valid(&mut rec, &q, || repro("validate"));

        let consed = ft::cons(Node::Leaf(FRONT_LABEL), &q);
        let expected = ft::list_append(&[FRONT_LABEL], &model);
        rec.agree("cons_model", expected, consed.to_vec(), || repro("cons"));
        check_valid(&mut rec, &consed, || repro("cons"));

        let snoced = ft::snoc(&q, Node::Leaf(BACK_LABEL));
        let expected = ft::list_append(&model, &[BACK_LABEL]);
        rec.agree("snoc_model", expected, snoced.to_vec(), || repro("snoc"));
        check_valid(&mut rec, &snoced, || repro("snoc"));
    }

    for case in glue_cases(cfg) {
        let repro = || (pair(&case.q1, &case.middle, &case.q2), "glue".to_string());
        let out =
            ft::glue(&case.q1, &case.middle, &case.q2).expect("middle holds at most three items");
        let mut expected = case.q1.to_vec();
        expected.extend(node_leaves(&case.middle));
        expected.extend(case.q2.to_vec());
        rec.agree("glue_model", expected, out.to_vec(), repro);
        check_valid(&mut rec, &out, repro);
    }

    for ops in gen::random_traces(cfg) {
        let mut d = FingerDriver::new(PotentialFns::default());
        let (mut main, mut staged): (Vec<i64>, Vec<i64>) = (Vec::new(), Vec::new());
        for op in &ops {
            let before = d.describe();
            d.apply(op).expect("generated finger-tree ops are valid");
            match *op {
                Op::Cons(x) => main.insert(0, x),
                Op::Snoc(x) => main.push(x),
                Op::Stage(x) => staged.push(x),
                Op::Append => main.append(&mut staged),
                _ => unreachable!("finger-tree traces hold finger-tree ops"),
            }
            let repro = || (before.clone(), op.to_string());
            rec.agree(
                "trace_model",
                (&main, &staged),
                (&d.main.to_vec(), &d.staged.to_vec()),
                repro,
            );
            check_valid(&mut rec, &d.main, repro);
            check_valid(&mut rec, &d.staged, repro);
        }
    }
    rec.finish()
}

pub(super) fn timing(cfg: &GenConfig) -> VerifyReport {
    let mut rec = Recorder::new("timing", cfg);

    for q in gen::structural_seqs(FINGER_ENUM_DEPTH) {
        let repro = |op: &str| (format!("seq {q}"), op.to_string());
        let x = Node::Leaf(FRONT_LABEL);
        let mut m = UnitCounter::new();
        ft::cons_metered(x.clone(), &q, &mut m);
        rec.agree("cons_time", ft::cons_time(&x, &q), m.cost(), || {
            repro("cons")
        });

        let x = Node::Leaf(BACK_LABEL);
        let mut m = UnitCounter::new();
        ft::snoc_metered(&q, x.clone(), &mut m);
        rec.agree("snoc_time", ft::snoc_time(&q, &x), m.cost(), || {
            repro("snoc")
        });

        for k in 0..=MAX_MIDDLE {
            let xs = leaves(k, MIDDLE_LABEL);
            // one unit for the empty-list clause, then each step meters itself
            let mut m = UnitCounter::new();
            m.tick();
            xs.iter().rev().fold(q.clone(), |acc, x| {
                ft::cons_metered(x.clone(), &acc, &mut m)
            });
            let t = ft::foldr_time(&cons_fold, &cons_cost, &q, &xs);
            rec.agree("foldr_time", t, m.cost(), || {
                repro(&format!("foldr cons of {k} items"))
            });

            let mut m = UnitCounter::new();
            m.tick();
            xs.iter().fold(q.clone(), |acc, x| {
                ft::snoc_metered(&acc, x.clone(), &mut m)
            });
            let t = ft::foldl_time(&snoc_fold, &snoc_cost, &q, &xs);
            rec.agree("foldl_time", t, m.cost(), || {
                repro(&format!("foldl snoc of {k} items"))
            });
        }
    }

    for case in glue_cases(cfg) {
        let repro = || (pair(&case.q1, &case.middle, &case.q2), "glue".to_string());
        let mut m = UnitCounter::new();
        ft::glue_metered(&case.q1, &case.middle, &case.q2, &mut m)
            .expect("middle holds at most three items");
        let t = ft::glue_time(&case.q1, &case.middle, &case.q2)
            .expect("middle holds at most three items");
        rec.agree("glue_time", t, m.cost(), repro);
        rec.bound("cost_at_least_one", 1, t.units() as i64, repro);
    }

    for ops in gen::random_traces(cfg) {
        let mut d = script::driver(cfg.structure, PotentialFns::default());
        for op in &ops {
            let before = d.describe();
            let e = d.apply(op).expect("generated finger-tree ops are valid");
            rec.agree("trace_metered", e.record.actual, e.metered, || {
                (before, op.to_string())
            });
        }
    }
    rec.finish()
}
