//! List helpers mirrored by the cost functions. These follow their
//! recursive definitions literally and are meant for short lists.

use crate::cost::Cost;

use super::{Digit, FingerError, Tuple};

pub fn digit_to_list<A: Clone>(d: &Digit<A>) -> Vec<A> {
    match d {
        Digit::One(x) => vec![x.clone()],
        Digit::Two(x, y) => vec![x.clone(), y.clone()],
        Digit::Three(x, y, z) => vec![x.clone(), y.clone(), z.clone()],
    }
}

pub fn tuples_to_list<A: Clone>(xs: &[Tuple<A>]) -> Vec<A> {
    match xs.split_first() {
        None => Vec::new(),
        Some((Tuple::Pair(a, b), rest)) => {
            list_append(&[a.clone(), b.clone()], &tuples_to_list(rest))
        }
        Some((Tuple::Triple(a, b, c), rest)) => {
            list_append(&[a.clone(), b.clone(), c.clone()], &tuples_to_list(rest))
        }
    }
}

/// `xs ++ ys`.
pub fn list_append<A: Clone>(xs: &[A], ys: &[A]) -> Vec<A> {
    let mut out = Vec::with_capacity(xs.len() + ys.len());
    out.extend_from_slice(xs);
    out.extend_from_slice(ys);
    out
}

pub fn foldr<A, B>(f: &impl Fn(&A, B) -> B, init: B, xs: &[A]) -> B {
    match xs.split_first() {
        None => init,
        Some((x, rest)) => f(x, foldr(f, init, rest)),
    }
}

pub fn foldl<A, B>(f: &impl Fn(B, &A) -> B, init: B, xs: &[A]) -> B {
    match xs.split_first() {
        None => init,
        Some((x, rest)) => foldl(f, f(init, x), rest),
    }
}

/// Cost of `foldr f init xs`: one unit for the empty list, plus each
/// element's cost evaluated against the fold of the elements after it.
pub fn foldr_time<A, B: Clone>(
    f: &impl Fn(&A, B) -> B,
    f_time: &impl Fn(&A, &B) -> Cost,
    init: &B,
    xs: &[A],
) -> Cost {
    match xs.split_first() {
        None => Cost::ONE,
        Some((x, rest)) => {
            f_time(x, &foldr(f, init.clone(), rest)) + foldr_time(f, f_time, init, rest)
        }
    }
}

/// Cost of `foldl f init xs`, charging each step against the accumulator
/// it receives.
pub fn foldl_time<A, B: Clone>(
    f: &impl Fn(B, &A) -> B,
    f_time: &impl Fn(&B, &A) -> Cost,
    init: &B,
    xs: &[A],
) -> Cost {
    match xs.split_first() {
        None => Cost::ONE,
        Some((x, rest)) => f_time(init, x) + foldl_time(f, f_time, &f(init.clone(), x), rest),
    }
}

/// Floor of the base-2 logarithm by repeated halving.
pub fn log2(n: i64) -> Result<u32, FingerError> {
    match n {
        n if n < 1 => Err(FingerError::Domain(n)),
        1 => Ok(0),
        n => Ok(1 + log2(n / 2)?),
    }
}
