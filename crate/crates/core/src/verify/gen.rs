//! Instance generators: exhaustive small structures and seeded random
//! operation sequences.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(cfg.seed)`; each consumer draws from its own ChaCha stream
//! so adding a generator never shifts another's output.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::finger_tree::{Digit, Node, Seq};
use crate::heap::{self, Forest};
use crate::stack::Stack;

use super::script::Op;
use super::{GenConfig, Structure};

/// Stack heights enumerated exhaustively.
pub const MAX_STACK_HEIGHT: usize = 8;
/// Multipop counts enumerated exhaustively.
pub const MAX_MULTIPOP: i64 = 10;
/// Spine depth of the structural finger-tree enumeration.
pub const FINGER_ENUM_DEPTH: usize = 3;
/// Spine depth of the trees paired up for the glue checks.
pub const GLUE_ENUM_DEPTH: usize = 2;
/// Instance spaces larger than this are sampled instead of enumerated.
pub const EXHAUSTIVE_LIMIT: usize = 100_000;

pub const PRNG_NAME: &str = "ChaCha8";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub(crate) enum Stream {
    Traces = 1,
    HeapOrders = 2,
    GluePairs = 3,
    Contracts = 4,
}

pub(crate) fn rng(cfg: &GenConfig, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream as u64);
    rng
}

/// `limit` distinct indices of `0..space` in increasing order, or all of
/// them when the space is small enough.
pub(crate) fn sample_or_all(space: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if space <= EXHAUSTIVE_LIMIT {
        (0..space).collect()
    } else {
        let mut picked = index::sample(rng, space, EXHAUSTIVE_LIMIT).into_vec();
        picked.sort_unstable();
        picked
    }
}

/// Stacks `[0]`, `[0, 1]`, ... (top first) up to the enumeration height.
pub fn exhaustive_stacks(cfg: &GenConfig) -> Vec<Stack<i64>> {
    let top = cfg.max_size.min(MAX_STACK_HEIGHT);
    (0..=top as i64)
        .map(|h| Stack::from_top_down(&(0..h).collect::<Vec<_>>()))
        .collect()
}

/// Insertion orders of length `max_size`: sorted, reversed, constant,
/// sawtooth, alternating extremes and random small values with duplicates.
pub fn heap_orders(cfg: &GenConfig) -> Vec<(&'static str, Vec<i64>)> {
    let n = cfg.max_size as i64;
    let mut rng = rng(cfg, Stream::HeapOrders);
    vec![
        ("ascending", (0..n).collect()),
        ("descending", (0..n).rev().collect()),
        ("constant", vec![0; n as usize]),
        ("sawtooth", (0..n).map(|i| i % 3).collect()),
        (
            "alternating",
            (0..n)
                .map(|i| if i % 2 == 0 { i / 2 } else { n - 1 - i / 2 })
                .collect(),
        ),
        ("random", (0..n).map(|_| rng.gen_range(0..4)).collect()),
    ]
}

/// Every prefix forest of every insertion order.
pub fn exhaustive_forests(cfg: &GenConfig) -> Vec<Forest<i64>> {
    let mut out = vec![Forest::End];
    for (_, order) in heap_orders(cfg) {
        let mut f = Forest::End;
        for &x in &order {
            f = heap::insert(x, &f).expect("insert into an insert-built forest");
            out.push(f.clone());
        }
    }
    out
}

/// How spine tuples are chosen when materializing a shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fill {
    Pairs,
    Triples,
    Mixed,
}

/// Digit arities per `More` level, ending in `Unit` or `Nil`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub levels: Vec<(usize, usize)>,
    pub unit: bool,
}

pub fn shapes(max_depth: usize) -> Vec<Shape> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for depth in 0..=max_depth {
        for levels in &frontier {
            for unit in [false, true] {
                out.push(Shape {
                    levels: levels.clone(),
                    unit,
                });
            }
        }
        if depth == max_depth {
            break;
        }
        frontier = frontier
            .iter()
            .flat_map(|levels| {
                (1..=3).flat_map(move |f| {
                    (1..=3).map(move |b| {
                        let mut next = levels.clone();
                        next.push((f, b));
                        next
                    })
                })
            })
            .collect();
    }
    out
}

struct Labeler {
    fill: Fill,
    next: i64,
    toggle: bool,
}

impl Labeler {
    fn node(&mut self, height: usize) -> Node<i64> {
        if height == 0 {
            self.next += 1;
            return Node::Leaf(self.next - 1);
        }
        let arity = match self.fill {
            Fill::Pairs => 2,
            Fill::Triples => 3,
            Fill::Mixed => {
                self.toggle = !self.toggle;
                if self.toggle {
                    2
                } else {
                    3
                }
            }
        };
        if arity == 2 {
            let a = self.node(height - 1);
            let b = self.node(height - 1);
            Node::pair(a, b)
        } else {
            let a = self.node(height - 1);
            let b = self.node(height - 1);
            let c = self.node(height - 1);
            Node::triple(a, b, c)
        }
    }

    fn digit(&mut self, arity: usize, height: usize) -> Digit<Node<i64>> {
        match arity {
            1 => Digit::One(self.node(height)),
            2 => {
                let a = self.node(height);
                Digit::Two(a, self.node(height))
            }
            _ => {
                let a = self.node(height);
                let b = self.node(height);
                Digit::Three(a, b, self.node(height))
            }
        }
    }

    fn seq(&mut self, levels: &[(usize, usize)], unit: bool, height: usize) -> Seq<i64> {
        match levels.split_first() {
            None if unit => Seq::Unit(self.node(height)),
            None => Seq::Nil,
            Some((&(f, b), rest)) => {
                let front = self.digit(f, height);
                let spine = self.seq(rest, unit, height + 1);
                let back = self.digit(b, height);
                Seq::more(front, spine, back)
            }
        }
    }
}

/// Builds a valid tree of the given shape whose elements are `0..n` in order.
pub fn materialize(shape: &Shape, fill: Fill) -> Seq<i64> {
    Labeler {
        fill,
        next: 0,
        toggle: false,
    }
    .seq(&shape.levels, shape.unit, 0)
}

/// All shapes up to `max_depth` under every fill, without duplicates.
pub fn structural_seqs(max_depth: usize) -> Vec<Seq<i64>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for shape in shapes(max_depth) {
        for fill in [Fill::Pairs, Fill::Triples, Fill::Mixed] {
            let q = materialize(&shape, fill);
            if seen.insert(q.clone()) {
                out.push(q);
            }
        }
    }
    out
}

/// Sequences of `0..n` built by repeated snoc and by repeated cons.
pub fn ladder_seqs(max_len: usize) -> Vec<Seq<i64>> {
    let mut out = Vec::new();
    for n in 0..=max_len as i64 {
        out.push((0..n).collect::<Seq<i64>>());
        out.push((0..n).rev().fold(Seq::Nil, |q, x| q.push_front(x)));
    }
    out
}

/// One random operation sequence. Finger-tree and stack values are fresh
/// increasing labels so order checks see every permutation; heap values are
/// small so duplicates are common.
pub fn random_ops(structure: Structure, len: usize, rng: &mut ChaCha8Rng) -> Vec<Op> {
    let mut label = 0i64;
    let mut fresh = || {
        label += 1;
        label - 1
    };
    (0..len)
        .map(|_| match structure {
            Structure::Stack => {
                if rng.gen_bool(0.6) {
                    Op::Push(fresh())
                } else {
                    Op::Multipop(rng.gen_range(0..=6))
                }
            }
            Structure::Heap => Op::Insert(rng.gen_range(0..8)),
            Structure::FingerTree => match rng.gen_range(0..20) {
                0..=6 => Op::Cons(fresh()),
                7..=12 => Op::Snoc(fresh()),
                13..=16 => Op::Stage(fresh()),
                _ => Op::Append,
            },
        })
        .collect()
}

/// `cfg.num_traces` random operation sequences of length `cfg.trace_len`.
pub fn random_traces(cfg: &GenConfig) -> Vec<Vec<Op>> {
    let mut rng = rng(cfg, Stream::Traces);
    (0..cfg.num_traces)
        .map(|_| random_ops(cfg.structure, cfg.trace_len, &mut rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finger_tree::validate_seq;

    #[test]
    fn shape_counts() {
        assert_eq!(shapes(0).len(), 2);
        assert_eq!(shapes(1).len(), 2 + 18);
        assert_eq!(shapes(3).len(), 2 * (1 + 9 + 81 + 729));
    }

    #[test]
    fn materialized_shapes_are_valid_and_labelled_in_order() {
        for q in structural_seqs(FINGER_ENUM_DEPTH) {
            assert!(validate_seq(&q).is_empty(), "{q}");
            let items = q.to_vec();
            assert_eq!(items, (0..items.len() as i64).collect::<Vec<_>>());
            assert!(q.depth() <= FINGER_ENUM_DEPTH);
        }
    }

    #[test]
    fn fills_differ_below_the_top_level() {
        let shape = Shape {
            levels: vec![(1, 1)],
            unit: true,
        };
        assert_eq!(materialize(&shape, Fill::Pairs).len(), 4);
        assert_eq!(materialize(&shape, Fill::Triples).len(), 5);
    }

    #[test]
    fn random_traces_replay() {
        let cfg = GenConfig {
            structure: Structure::FingerTree,
            seed: 9,
            ..GenConfig::default()
        };
        assert_eq!(random_traces(&cfg), random_traces(&cfg));
        let other = GenConfig {
            seed: 10,
            ..cfg.clone()
        };
        assert_ne!(random_traces(&cfg), random_traces(&other));
    }

    #[test]
    fn sampling_is_exhaustive_below_limit() {
        let cfg = GenConfig::default();
        let mut r = rng(&cfg, Stream::GluePairs);
        assert_eq!(sample_or_all(10, &mut r), (0..10).collect::<Vec<_>>());
        let picked = sample_or_all(EXHAUSTIVE_LIMIT * 3, &mut r);
        assert_eq!(picked.len(), EXHAUSTIVE_LIMIT);
        assert!(picked.windows(2).all(|w| w[0] < w[1]));
    }
}
