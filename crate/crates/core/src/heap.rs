//! Binomial min-heap as a positional forest of binomial trees.
//!
//! Position `i` of a [`Forest`] is either empty (`Zero`) or holds a tree of
//! rank `i` (`One`), so the occupancy pattern read front to back is the
//! binary representation of the element count and inserting a singleton is
//! a binary increment. The potential is the number of trees.
//!
//! The rank and shape discipline is not enforced by the types; run
//! [`validate`] to check a forest.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cost::{Cost, Meter, NoMeter, Potential};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeapError {
    #[error("cannot merge trees of rank {left} and {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("invalid forest at position {position}: expected a rank {position} tree, found rank {found}")]
    InvalidForest { position: usize, found: usize },
}

/// Binomial tree. Children are stored in descending rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree<T> {
    root: T,
    children: Vec<Arc<Tree<T>>>,
}

impl<T> Tree<T> {
    pub fn singleton(root: T) -> Self {
        Tree {
            root,
            children: Vec::new(),
        }
    }

    /// Assembles a tree without checking any invariant.
    pub fn from_parts(root: T, children: Vec<Tree<T>>) -> Self {
        Tree {
            root,
            children: children.into_iter().map(Arc::new).collect(),
        }
    }

    pub fn root(&self) -> &T {
        &self.root
    }

    pub fn children(&self) -> &[Arc<Tree<T>>] {
        &self.children
    }

    pub fn rank(&self) -> usize {
        self.children.len()
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn elements(&self) -> Vec<&T> {
        let mut out = vec![&self.root];
        for child in &self.children {
            out.extend(child.elements());
        }
        out
    }
}

impl<T: fmt::Display> fmt::Display for Tree<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        if !self.children.is_empty() {
            f.write_str("[")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

/// Links two trees of equal rank; the larger root becomes the first child of
/// the smaller. Ties keep the left root.
pub fn merge_tree<T: Ord + Clone>(
    l: &Arc<Tree<T>>,
    r: &Arc<Tree<T>>,
) -> Result<Tree<T>, HeapError> {
    if l.rank() != r.rank() {
        return Err(HeapError::RankMismatch {
            left: l.rank(),
            right: r.rank(),
        });
    }
    let (winner, loser) = if l.root <= r.root { (l, r) } else { (r, l) };
    let mut children = Vec::with_capacity(winner.children.len() + 1);
    children.push(Arc::clone(loser));
    children.extend(winner.children.iter().cloned());
    Ok(Tree {
        root: winner.root.clone(),
        children,
    })
}

/// Positional list of optional trees; also used as the heap itself.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum Forest<T> {
    #[default]
    End,
    Zero(Arc<Forest<T>>),
    One(Arc<Tree<T>>, Arc<Forest<T>>),
}

pub type Heap<T> = Forest<T>;

impl<T> Forest<T> {
    pub fn new() -> Self {
        Forest::End
    }

    pub fn is_empty(&self) -> bool {
        self.trees().next().is_none()
    }

    /// Trees with their positions, front to back.
    pub fn trees(&self) -> impl Iterator<Item = (usize, &Arc<Tree<T>>)> {
        let mut cursor = self;
        let mut position = 0;
        std::iter::from_fn(move || loop {
            match cursor {
                Forest::End => return None,
                Forest::Zero(rest) => {
                    cursor = rest;
                    position += 1;
                }
                Forest::One(t, rest) => {
                    let item = (position, t);
                    cursor = rest;
                    position += 1;
                    return Some(item);
                }
            }
        })
    }

    /// Occupancy bits, least significant (position 0) first.
    pub fn occupancy(&self) -> Vec<bool> {
        let mut bits = Vec::new();
        let mut cursor = self;
        loop {
            match cursor {
                Forest::End => return bits,
                Forest::Zero(rest) => {
                    bits.push(false);
                    cursor = rest;
                }
                Forest::One(_, rest) => {
                    bits.push(true);
                    cursor = rest;
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.trees().map(|(_, t)| t.size()).sum()
    }

    pub fn elements(&self) -> Vec<&T> {
        self.trees().flat_map(|(_, t)| t.elements()).collect()
    }

    /// Smallest root, if any. Only meaningful on a valid forest.
    pub fn min(&self) -> Option<&T>
    where
        T: Ord,
    {
        self.trees().map(|(_, t)| t.root()).min()
    }
}

impl<T: fmt::Display> fmt::Display for Forest<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forest::End => f.write_str("End"),
            Forest::Zero(rest) => write!(f, "F0 {rest}"),
            Forest::One(t, rest) => write!(f, "F1 <{t}> {rest}"),
        }
    }
}

/// Inserts a tree whose rank matches the first position of `f`.
///
/// Only the trees on the carry path are inspected; a rank mismatch there is
/// reported as [`HeapError::InvalidForest`]. Use [`validate`] for a full check.
pub fn insert_tree<T: Ord + Clone>(t: Tree<T>, f: &Forest<T>) -> Result<Forest<T>, HeapError> {
    insert_tree_metered(t, f, &mut NoMeter)
}

pub fn insert_tree_metered<T: Ord + Clone, M: Meter>(
    t: Tree<T>,
    f: &Forest<T>,
    meter: &mut M,
) -> Result<Forest<T>, HeapError> {
    meter.tick();
    match f {
        Forest::End => Ok(Forest::One(Arc::new(t), Arc::new(Forest::End))),
        Forest::Zero(rest) => Ok(Forest::One(Arc::new(t), Arc::clone(rest))),
        Forest::One(other, rest) => {
            let merged = merge_tree(&Arc::new(t), other).map_err(carry_error)?;
            let carried = insert_tree_metered(merged, rest, meter)?;
            Ok(Forest::Zero(Arc::new(carried)))
        }
    }
}

fn carry_error(e: HeapError) -> HeapError {
    match e {
        HeapError::RankMismatch { left, right } => HeapError::InvalidForest {
            position: left,
            found: right,
        },
        other => other,
    }
}

/// Inserts a single element as a rank-0 tree.
pub fn insert<T: Ord + Clone>(x: T, f: &Forest<T>) -> Result<Forest<T>, HeapError> {
    insert_tree(Tree::singleton(x), f)
}

/// Number of trees in the forest.
pub fn potential<T>(f: &Forest<T>) -> Potential {
    match f {
        Forest::End => Potential(0),
        Forest::Zero(rest) => potential(rest),
        Forest::One(_, rest) => Potential(1) + potential(rest),
    }
}

pub fn insert_time<T: Ord + Clone>(t: &Tree<T>, f: &Forest<T>) -> Result<Cost, HeapError> {
    match f {
        Forest::End | Forest::Zero(_) => Ok(Cost::ONE),
        Forest::One(other, rest) => {
            let merged = merge_tree(&Arc::new(t.clone()), other).map_err(carry_error)?;
            Ok(Cost::ONE + insert_time(&merged, rest)?)
        }
    }
}

/// Binary increment on least-significant-first bits.
pub fn binary_increment(bits: &[bool]) -> Vec<bool> {
    match bits.split_first() {
        None => vec![true],
        Some((false, rest)) => std::iter::once(true).chain(rest.iter().copied()).collect(),
        Some((true, rest)) => std::iter::once(false)
            .chain(binary_increment(rest))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeapViolation {
    /// A child at `index` of a rank-`rank` node does not have rank `rank - 1 - index`.
    ChildRank {
        path: Vec<usize>,
        index: usize,
        expected: usize,
        found: usize,
    },
    /// A child root is smaller than its parent's root.
    HeapOrder { path: Vec<usize> },
    /// The tree at `position` does not have rank `position`.
    PositionRank { position: usize, found: usize },
    /// A rank-`rank` tree does not hold `2^rank` elements.
    ElementCount {
        position: usize,
        expected: usize,
        found: usize,
    },
    /// The forest ends in an empty position, so occupancy is not a canonical binary number.
    TrailingZero { position: usize },
}

/// Checks rank discipline, heap order, positional ranks, element counts
/// and canonical occupancy. Returns every violation found.
pub fn validate<T: Ord>(f: &Forest<T>) -> Vec<HeapViolation> {
    let mut out = Vec::new();
    for (position, tree) in f.trees() {
        if tree.rank() != position {
            out.push(HeapViolation::PositionRank {
                position,
                found: tree.rank(),
            });
        }
        let size = tree.size();
        let expected = 1usize.checked_shl(tree.rank() as u32).unwrap_or(usize::MAX);
        if size != expected {
            out.push(HeapViolation::ElementCount {
                position,
                expected,
                found: size,
            });
        }
        validate_tree(tree, &mut vec![position], &mut out);
    }
    let bits = f.occupancy();
    if bits.last() == Some(&false) {
        out.push(HeapViolation::TrailingZero {
            position: bits.len() - 1,
        });
    }
    out
}

fn validate_tree<T: Ord>(tree: &Tree<T>, path: &mut Vec<usize>, out: &mut Vec<HeapViolation>) {
    let rank = tree.rank();
    for (index, child) in tree.children.iter().enumerate() {
        path.push(index);
        let expected = rank - 1 - index;
        if child.rank() != expected {
            out.push(HeapViolation::ChildRank {
                path: path.clone(),
                index,
                expected,
                found: child.rank(),
            });
        }
        if child.root < tree.root {
            out.push(HeapViolation::HeapOrder { path: path.clone() });
        }
        validate_tree(child, path, out);
        path.pop();
    }
}
