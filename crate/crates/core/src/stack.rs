//! Immutable stack with `push` and `multipop`.
//!
//! Potential is the stack height; `push` costs one unit and `multipop k`
//! costs one unit per popped element plus one for the base clause.

use std::sync::Arc;

use thiserror::Error;

use crate::cost::{Cost, Meter, NoMeter, Potential};

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum StackError {
    #[error("multipop count must be nonnegative, got {0}")]
    NegativeCount(i64),
}

#[derive(Debug)]
pub struct Cell<T> {
    head: T,
    tail: Stack<T>,
}

/// Persistent cons-list stack. Cloning is O(1) and shares all cells.
#[derive(Debug, Default)]
pub enum Stack<T> {
    #[default]
    Empty,
    Elem(Arc<Cell<T>>),
}

impl<T> Clone for Stack<T> {
    fn clone(&self) -> Self {
        match self {
            Stack::Empty => Stack::Empty,
            Stack::Elem(cell) => Stack::Elem(Arc::clone(cell)),
        }
    }
}

impl<T> Drop for Cell<T> {
    fn drop(&mut self) {
        // unlink iteratively so tall stacks don't recurse on drop
        let mut next = std::mem::replace(&mut self.tail, Stack::Empty);
        while let Stack::Elem(cell) = next {
            match Arc::try_unwrap(cell) {
                Ok(mut cell) => next = std::mem::replace(&mut cell.tail, Stack::Empty),
                Err(_) => break,
            }
        }
    }
}

impl<T: PartialEq> PartialEq for Stack<T> {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl<T: Eq> Eq for Stack<T> {}

impl<T> Stack<T> {
    pub fn new() -> Self {
        Stack::Empty
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Stack::Empty)
    }

    pub fn head(&self) -> Option<&T> {
        match self {
            Stack::Empty => None,
            Stack::Elem(cell) => Some(&cell.head),
        }
    }

    pub fn tail(&self) -> Option<&Stack<T>> {
        match self {
            Stack::Empty => None,
            Stack::Elem(cell) => Some(&cell.tail),
        }
    }

    pub fn height(&self) -> usize {
        self.iter().count()
    }

    /// Elements from the top down.
    pub fn iter(&self) -> Iter<'_, T> {
        Iter { next: self }
    }

    /// True when both stacks are the same allocation.
    pub fn ptr_eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Stack::Empty, Stack::Empty) => true,
            (Stack::Elem(a), Stack::Elem(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl<T: Clone> Stack<T> {
    /// Elements from the top down.
    pub fn to_vec(&self) -> Vec<T> {
        self.iter().cloned().collect()
    }

    /// Builds a stack whose top is the first element of `items`.
    pub fn from_top_down(items: &[T]) -> Self {
        items
            .iter()
            .rev()
            .fold(Stack::Empty, |s, x| push(x.clone(), &s))
    }
}

pub struct Iter<'a, T> {
    next: &'a Stack<T>,
}

impl<'a, T> Iterator for Iter<'a, T> {
    type Item = &'a T;

    fn next(&mut self) -> Option<&'a T> {
        match self.next {
            Stack::Empty => None,
            Stack::Elem(cell) => {
                self.next = &cell.tail;
                Some(&cell.head)
            }
        }
    }
}

pub fn push<T>(x: T, s: &Stack<T>) -> Stack<T> {
    Stack::Elem(Arc::new(Cell {
        head: x,
        tail: s.clone(),
    }))
}

pub fn push_metered<T, M: Meter>(x: T, s: &Stack<T>, meter: &mut M) -> Stack<T> {
    meter.tick();
    push(x, s)
}

/// Pops up to `k` elements, returning them top first together with the rest.
pub fn multipop<T: Clone>(k: i64, s: &Stack<T>) -> Result<(Vec<T>, Stack<T>), StackError> {
    multipop_metered(k, s, &mut NoMeter)
}

pub fn multipop_metered<T: Clone, M: Meter>(
    k: i64,
    s: &Stack<T>,
    meter: &mut M,
) -> Result<(Vec<T>, Stack<T>), StackError> {
    if k < 0 {
        return Err(StackError::NegativeCount(k));
    }
    let mut popped = Vec::new();
    let mut rest = s;
    let mut remaining = k;
    loop {
        meter.tick();
        match rest {
            Stack::Empty => break,
            Stack::Elem(_) if remaining == 0 => break,
            Stack::Elem(cell) => {
                popped.push(cell.head.clone());
                rest = &cell.tail;
                remaining -= 1;
            }
        }
    }
    Ok((popped, rest.clone()))
}

/// Stack height.
pub fn potential<T>(s: &Stack<T>) -> Potential {
    match s {
        Stack::Empty => Potential(0),
        Stack::Elem(cell) => Potential(1) + potential(&cell.tail),
    }
}

pub fn push_time<T>(_x: &T, _s: &Stack<T>) -> Cost {
    Cost::ONE
}

pub fn multipop_time<T>(k: i64, s: &Stack<T>) -> Result<Cost, StackError> {
    if k < 0 {
        return Err(StackError::NegativeCount(k));
    }
    Ok(match s {
        Stack::Empty => Cost::ONE,
        Stack::Elem(_) if k == 0 => Cost::ONE,
        Stack::Elem(cell) => Cost::ONE + multipop_time(k - 1, &cell.tail)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{amortized_step, UnitCounter};
    use proptest::prelude::*;

    fn unit_stack(h: usize) -> Stack<()> {
        (0..h).fold(Stack::Empty, |s, _| push((), &s))
    }

    #[test]
    fn push_examples() {
        let one = push(1, &Stack::Empty);
        assert_eq!(one.to_vec(), vec![1]);
        assert!(one.tail().unwrap().is_empty());
        let two = push(2, &one);
        assert_eq!(two.to_vec(), vec![2, 1]);
        assert!(two.tail().unwrap().ptr_eq(&one));
        assert_eq!(one.to_vec(), vec![1]);
    }

    #[test]
    fn push_grows_height_by_one() {
        for h in 0..=8 {
            let s = unit_stack(h);
            assert_eq!(push((), &s).height(), s.height() + 1);
        }
    }

    #[test]
    fn multipop_examples() {
        let s = Stack::from_top_down(&[3, 2, 1]);
        let (popped, rest) = multipop(0, &s).unwrap();
        assert!(popped.is_empty());
        assert!(rest.ptr_eq(&s));

        let (popped, rest) = multipop::<i32>(5, &Stack::Empty).unwrap();
        assert!(popped.is_empty() && rest.is_empty());

        let (popped, rest) = multipop(2, &s).unwrap();
        assert_eq!(popped, vec![3, 2]);
        assert_eq!(rest.to_vec(), vec![1]);

        assert_eq!(multipop(-1, &s), Err(StackError::NegativeCount(-1)));
        assert_eq!(multipop_time(-3, &s), Err(StackError::NegativeCount(-3)));
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(&Stack::<u8>::Empty), Potential(0));
        assert_eq!(potential(&unit_stack(1)), Potential(1));
        assert_eq!(potential(&unit_stack(7)), Potential(7));
    }

    #[test]
    fn timing_examples() {
        assert_eq!(push_time(&0, &Stack::Empty), Cost(1));
        assert_eq!(push_time(&0, &Stack::from_top_down(&[1, 2, 3])), Cost(1));
        assert_eq!(multipop_time(4, &Stack::<u8>::Empty).unwrap(), Cost(1));
        assert_eq!(multipop_time(0, &unit_stack(3)).unwrap(), Cost(1));
        assert_eq!(multipop_time(3, &unit_stack(5)).unwrap(), Cost(4));
    }

    #[test]
    fn exhaustive_bounds_and_instrumentation() {
        for h in 0..=8 {
            let s = unit_stack(h);
            let mut meter = UnitCounter::new();
            let pushed = push_metered((), &s, &mut meter);
            assert_eq!(meter.cost(), push_time(&(), &s));
            assert_eq!(
                amortized_step(push_time(&(), &s), potential(&s), potential(&pushed)),
                2
            );

            for k in 0..=10 {
                let mut meter = UnitCounter::new();
                let (_, rest) = multipop_metered(k, &s, &mut meter).unwrap();
                let t = multipop_time(k, &s).unwrap();
                assert_eq!(meter.cost(), t);
                assert_eq!(t.units() as usize, 1 + (k as usize).min(h));
                assert!(amortized_step(t, potential(&s), potential(&rest)) <= 2);
            }
        }
    }

    #[test]
    fn tall_stack_drops_without_overflow() {
        let s = unit_stack(1_000_000);
        assert_eq!(s.height(), 1_000_000);
        drop(s);
    }

    proptest! {
        #[test]
        fn multipop_matches_list_model(items in prop::collection::vec(any::<i16>(), 0..30), k in 0i64..40) {
            let s = Stack::from_top_down(&items);
            let (popped, rest) = multipop(k, &s).unwrap();
            let cut = (k as usize).min(items.len());
            prop_assert_eq!(popped, items[..cut].to_vec());
            prop_assert_eq!(rest.to_vec(), items[cut..].to_vec());
            prop_assert_eq!(s.to_vec(), items);
        }
    }
}
