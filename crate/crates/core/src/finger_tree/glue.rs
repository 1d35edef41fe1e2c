//! Concatenation: `glue` joins two trees around at most three loose items.

use crate::cost::{Cost, Meter, NoMeter};

use super::list::{digit_to_list, foldl, foldl_time, foldr_time, list_append};
use super::ops::{cons, cons_metered, cons_time, snoc, snoc_metered, snoc_time};
use super::{FingerError, Node, Seq, Tuple};

/// Groups 2..=9 items into 1..=3 tuples.
pub fn to_tuples<A: Clone>(xs: &[A]) -> Result<Vec<Tuple<A>>, FingerError> {
    if !(2..=9).contains(&xs.len()) {
        return Err(FingerError::LengthContract {
            function: "to_tuples",
            len: xs.len(),
        });
    }
    to_tuples_prime(xs)
}

/// Groups items into pairs and triples, preferring triples. Accepts lengths
/// 0 and 2..=9; the output has 0, 1, 2 or 3 tuples for 0, 2..=3, 4..=6 and
/// 7..=9 items.
pub fn to_tuples_prime<A: Clone>(xs: &[A]) -> Result<Vec<Tuple<A>>, FingerError> {
    if xs.len() == 1 || xs.len() > 9 {
        return Err(FingerError::LengthContract {
            function: "to_tuples_prime",
            len: xs.len(),
        });
    }
    Ok(match xs {
        [] => Vec::new(),
        [x, y] => vec![Tuple::Pair(x.clone(), y.clone())],
        [x, y, z, w] => {
            vec![
                Tuple::Pair(x.clone(), y.clone()),
                Tuple::Pair(z.clone(), w.clone()),
            ]
        }
        [x, y, z, rest @ ..] => {
            let mut out = vec![Tuple::Triple(x.clone(), y.clone(), z.clone())];
            out.extend(to_tuples_prime(rest)?);
            out
        }
        [_] => unreachable!(),
    })
}

fn check_middle<T>(middle: &[Node<T>]) -> Result<(), FingerError> {
    if middle.len() > 3 {
        return Err(FingerError::LengthContract {
            function: "glue",
            len: middle.len(),
        });
    }
    Ok(())
}

/// `q1 ++ middle ++ q2`, with `middle` holding at most three items.
pub fn glue<T: Clone>(q1: &Seq<T>, middle: &[Node<T>], q2: &Seq<T>) -> Result<Seq<T>, FingerError> {
    glue_metered(q1, middle, q2, &mut NoMeter)
}

pub fn glue_metered<T: Clone, M: Meter>(
    q1: &Seq<T>,
    middle: &[Node<T>],
    q2: &Seq<T>,
    meter: &mut M,
) -> Result<Seq<T>, FingerError> {
    check_middle(middle)?;
    meter.tick();
    Ok(match (q1, q2) {
        (Seq::Nil, _) => cons_all(middle, q2.clone(), meter),
        (_, Seq::Nil) => snoc_all(q1.clone(), middle, meter),
        (Seq::Unit(x), _) => {
            let items = list_append(std::slice::from_ref(x), middle);
            cons_all(&items, q2.clone(), meter)
        }
        (_, Seq::Unit(x)) => {
            let left = snoc_all(q1.clone(), middle, meter);
            snoc_metered(&left, x.clone(), meter)
        }
        (Seq::More(l), Seq::More(r)) => {
            let inner = regroup(&l.back, middle, &r.front)?;
            let spine = glue_metered(&l.spine, &inner, &r.spine, meter)?;
            Seq::more(l.front.clone(), spine, r.back.clone())
        }
    })
}

/// Items of the spine call in the `More`/`More` case: the inner digits and
/// `middle` regrouped into 1..=3 tuples.
pub fn regroup<T: Clone>(
    back: &super::Digit<Node<T>>,
    middle: &[Node<T>],
    front: &super::Digit<Node<T>>,
) -> Result<Vec<Node<T>>, FingerError> {
    let loose = list_append(
        &list_append(&digit_to_list(back), middle),
        &digit_to_list(front),
    );
    Ok(to_tuples(&loose)?
        .into_iter()
        .map(Node::from_tuple)
        .collect())
}

// foldr cons: one unit for the empty-list clause, the conses meter themselves
fn cons_all<T: Clone, M: Meter>(xs: &[Node<T>], q: Seq<T>, meter: &mut M) -> Seq<T> {
    meter.tick();
    xs.iter()
        .rev()
        .fold(q, |acc, x| cons_metered(x.clone(), &acc, meter))
}

fn snoc_all<T: Clone, M: Meter>(q: Seq<T>, xs: &[Node<T>], meter: &mut M) -> Seq<T> {
    meter.tick();
    xs.iter()
        .fold(q, |acc, x| snoc_metered(&acc, x.clone(), meter))
}

pub fn append<T: Clone>(q1: &Seq<T>, q2: &Seq<T>) -> Seq<T> {
    glue(q1, &[], q2).expect("empty middle satisfies the glue contract")
}

fn cons_fn<T: Clone>(x: &Node<T>, q: Seq<T>) -> Seq<T> {
    cons(x.clone(), &q)
}

fn snoc_fn<T: Clone>(q: Seq<T>, x: &Node<T>) -> Seq<T> {
    snoc(&q, x.clone())
}

fn snoc_time_fn<T: Clone>(q: &Seq<T>, x: &Node<T>) -> Cost {
    snoc_time(q, x)
}

pub fn glue_time<T: Clone>(
    q1: &Seq<T>,
    middle: &[Node<T>],
    q2: &Seq<T>,
) -> Result<Cost, FingerError> {
    check_middle(middle)?;
    Ok(match (q1, q2) {
        (Seq::Nil, _) => Cost::ONE + foldr_time(&cons_fn, &cons_time, q2, middle),
        (_, Seq::Nil) => Cost::ONE + foldl_time(&snoc_fn, &snoc_time_fn, q1, middle),
        (Seq::Unit(x), _) => {
            let items = list_append(std::slice::from_ref(x), middle);
            Cost::ONE + foldr_time(&cons_fn, &cons_time, q2, &items)
        }
        (_, Seq::Unit(x)) => {
            Cost::ONE
                + snoc_time(&foldl(&snoc_fn, q1.clone(), middle), x)
                + foldl_time(&snoc_fn, &snoc_time_fn, q1, middle)
        }
        (Seq::More(l), Seq::More(r)) => {
            Cost::ONE + glue_time(&l.spine, &regroup(&l.back, middle, &r.front)?, &r.spine)?
        }
    })
}
