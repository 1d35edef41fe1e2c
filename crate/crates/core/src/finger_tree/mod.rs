//! Finger tree with 1-3 element digits and a spine of pairs and triples.
//!
//! Level `d` of the spine stores items that are `d`-fold nested tuples of
//! elements. Rust cannot monomorphize the polymorphically recursive
//! `Seq<Tuple<A>>` spine, so every level holds [`Node`]s and the uniform
//! nesting depth is a runtime invariant, checked by [`validate_seq`]. All
//! operations below work on nodes, so they apply unchanged at any level; the
//! inherent methods on [`Seq`] wrap plain elements as leaves.

mod glue;
mod list;
mod ops;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub use glue::{append, glue, glue_metered, glue_time, regroup, to_tuples, to_tuples_prime};
pub use list::{
    digit_to_list, foldl, foldl_time, foldr, foldr_time, list_append, log2, tuples_to_list,
};
pub use ops::{cons, cons_metered, cons_time, danger, potential, snoc, snoc_metered, snoc_time};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FingerError {
    #[error("{function}: list of length {len} violates its length contract")]
    LengthContract { function: &'static str, len: usize },
    #[error("log2 is undefined for {0}")]
    Domain(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Digit<A> {
    One(A),
    Two(A, A),
    Three(A, A, A),
}

impl<A> Digit<A> {
    /// Digits are never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            Digit::One(..) => 1,
            Digit::Two(..) => 2,
            Digit::Three(..) => 3,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &A> {
        let items: [Option<&A>; 3] = match self {
            Digit::One(a) => [Some(a), None, None],
            Digit::Two(a, b) => [Some(a), Some(b), None],
            Digit::Three(a, b, c) => [Some(a), Some(b), Some(c)],
        };
        items.into_iter().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tuple<A> {
    Pair(A, A),
    Triple(A, A, A),
}

impl<A> Tuple<A> {
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        match self {
            Tuple::Pair(..) => 2,
            Tuple::Triple(..) => 3,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &A> {
        let items: [Option<&A>; 3] = match self {
            Tuple::Pair(a, b) => [Some(a), Some(b), None],
            Tuple::Triple(a, b, c) => [Some(a), Some(b), Some(c)],
        };
        items.into_iter().flatten()
    }
}

/// An item at some spine level: an element, or a tuple of next-lower items.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node<T> {
    Leaf(T),
    Branch(Arc<Tuple<Node<T>>>),
}

impl<T> Node<T> {
    pub fn pair(a: Node<T>, b: Node<T>) -> Self {
        Node::Branch(Arc::new(Tuple::Pair(a, b)))
    }

    pub fn triple(a: Node<T>, b: Node<T>, c: Node<T>) -> Self {
        Node::Branch(Arc::new(Tuple::Triple(a, b, c)))
    }

    pub fn from_tuple(t: Tuple<Node<T>>) -> Self {
        Node::Branch(Arc::new(t))
    }

    /// Nesting depth, or `None` when the children disagree.
    pub fn height(&self) -> Option<usize> {
        match self {
            Node::Leaf(_) => Some(0),
            Node::Branch(t) => {
                let mut heights = t.iter().map(Node::height);
                let first = heights.next()??;
                heights.all(|h| h == Some(first)).then_some(first + 1)
            }
        }
    }

    pub fn push_leaves<'a>(&'a self, out: &mut Vec<&'a T>) {
        match self {
            Node::Leaf(x) => out.push(x),
            Node::Branch(t) => t.iter().for_each(|n| n.push_leaves(out)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Deep<T> {
    pub front: Digit<Node<T>>,
    pub spine: Seq<T>,
    pub back: Digit<Node<T>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub enum Seq<T> {
    #[default]
    Nil,
    Unit(Node<T>),
    More(Arc<Deep<T>>),
}

impl<T> Seq<T> {
    pub fn more(front: Digit<Node<T>>, spine: Seq<T>, back: Digit<Node<T>>) -> Self {
        Seq::More(Arc::new(Deep { front, spine, back }))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Seq::Nil)
    }

    /// Number of `More` levels.
    pub fn depth(&self) -> usize {
        match self {
            Seq::Nil | Seq::Unit(_) => 0,
            Seq::More(d) => 1 + d.spine.depth(),
        }
    }

    /// Number of elements (leaves).
    pub fn len(&self) -> usize {
        self.leaves().len()
    }

    pub fn leaves(&self) -> Vec<&T> {
        let mut out = Vec::new();
        self.push_leaves(&mut out);
        out
    }

    fn push_leaves<'a>(&'a self, out: &mut Vec<&'a T>) {
        match self {
            Seq::Nil => {}
            Seq::Unit(x) => x.push_leaves(out),
            Seq::More(d) => {
                d.front.iter().for_each(|n| n.push_leaves(out));
                d.spine.push_leaves(out);
                d.back.iter().for_each(|n| n.push_leaves(out));
            }
        }
    }
}

impl<T: Clone> Seq<T> {
    pub fn push_front(&self, x: T) -> Self {
        cons(Node::Leaf(x), self)
    }

    pub fn push_back(&self, x: T) -> Self {
        snoc(self, Node::Leaf(x))
    }

    pub fn concat(&self, other: &Seq<T>) -> Self {
        append(self, other)
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.leaves().into_iter().cloned().collect()
    }

    /// Items at this level, in order.
    pub fn items(&self) -> Vec<Node<T>> {
        seq_to_list(self)
    }
}

impl<T: Clone> FromIterator<T> for Seq<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        iter.into_iter().fold(Seq::Nil, |q, x| q.push_back(x))
    }
}

/// Items of a sequence at its own level. Spine items are expanded one
/// level; a leaf found in a spine (a nesting violation) is passed through.
pub fn seq_to_list<T: Clone>(q: &Seq<T>) -> Vec<Node<T>> {
    match q {
        Seq::Nil => Vec::new(),
        Seq::Unit(x) => vec![x.clone()],
        Seq::More(d) => {
            let mut middle = Vec::new();
            for item in seq_to_list(&d.spine) {
                match item {
                    Node::Branch(t) => middle.extend(tuples_to_list(std::slice::from_ref(&*t))),
                    leaf @ Node::Leaf(_) => middle.push(leaf),
                }
            }
            list_append(
                &list_append(&digit_to_list(&d.front), &middle),
                &digit_to_list(&d.back),
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeqViolation {
    pub level: usize,
    pub detail: String,
}

/// Checks that every item at level `d` is a uniformly nested node of height `d`.
pub fn validate_seq<T>(q: &Seq<T>) -> Vec<SeqViolation> {
    let mut out = Vec::new();
    validate_level(q, 0, &mut out);
    out
}

fn validate_level<T>(q: &Seq<T>, level: usize, out: &mut Vec<SeqViolation>) {
    let mut check = |where_: &str, n: &Node<T>| match n.height() {
        Some(h) if h == level => {}
        Some(h) => out.push(SeqViolation {
            level,
            detail: format!("{where_} item has nesting depth {h}"),
        }),
        None => out.push(SeqViolation {
            level,
            detail: format!("{where_} item is unevenly nested"),
        }),
    };
    match q {
        Seq::Nil => {}
        Seq::Unit(x) => check("unit", x),
        Seq::More(d) => {
            d.front.iter().for_each(|n| check("front", n));
            d.back.iter().for_each(|n| check("back", n));
            validate_level(&d.spine, level + 1, out);
        }
    }
}

impl<T: fmt::Display> fmt::Display for Node<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(x) => write!(f, "{x}"),
            Node::Branch(t) => write!(f, "{t}"),
        }
    }
}

fn write_items<'a, A: fmt::Display + 'a>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = &'a A>,
) -> fmt::Result {
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl<A: fmt::Display> fmt::Display for Tuple<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_items(f, self.iter())?;
        f.write_str(")")
    }
}

impl<A: fmt::Display> fmt::Display for Digit<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_items(f, self.iter())?;
        f.write_str("]")
    }
}

impl<T: fmt::Display> fmt::Display for Seq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Nil => f.write_str("Nil"),
            Seq::Unit(x) => write!(f, "Unit {x}"),
            Seq::More(d) => write!(f, "More {} ({}) {}", d.front, d.spine, d.back),
        }
    }
}
