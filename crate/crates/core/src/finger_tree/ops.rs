use crate::cost::{Cost, Meter, NoMeter, Potential};

use super::{Digit, Node, Seq};

pub fn cons<T: Clone>(x: Node<T>, q: &Seq<T>) -> Seq<T> {
    cons_metered(x, q, &mut NoMeter)
}

pub fn cons_metered<T: Clone, M: Meter>(x: Node<T>, q: &Seq<T>, meter: &mut M) -> Seq<T> {
    meter.tick();
    match q {
        Seq::Nil => Seq::Unit(x),
        Seq::Unit(y) => Seq::more(Digit::One(x), Seq::Nil, Digit::One(y.clone())),
        Seq::More(d) => match &d.front {
            Digit::One(y) => Seq::more(Digit::Two(x, y.clone()), d.spine.clone(), d.back.clone()),
            Digit::Two(y, z) => Seq::more(
                Digit::Three(x, y.clone(), z.clone()),
                d.spine.clone(),
                d.back.clone(),
            ),
            Digit::Three(y, z, w) => {
                let spine = cons_metered(Node::pair(z.clone(), w.clone()), &d.spine, meter);
                Seq::more(Digit::Two(x, y.clone()), spine, d.back.clone())
            }
        },
    }
}

pub fn snoc<T: Clone>(q: &Seq<T>, x: Node<T>) -> Seq<T> {
    snoc_metered(q, x, &mut NoMeter)
}

pub fn snoc_metered<T: Clone, M: Meter>(q: &Seq<T>, w: Node<T>, meter: &mut M) -> Seq<T> {
    meter.tick();
    match q {
        Seq::Nil => Seq::Unit(w),
        Seq::Unit(x) => Seq::more(Digit::One(x.clone()), Seq::Nil, Digit::One(w)),
        Seq::More(d) => match &d.back {
            Digit::One(x) => Seq::more(d.front.clone(), d.spine.clone(), Digit::Two(x.clone(), w)),
            Digit::Two(x, y) => Seq::more(
                d.front.clone(),
                d.spine.clone(),
                Digit::Three(x.clone(), y.clone(), w),
            ),
            Digit::Three(x, y, z) => {
                let spine = snoc_metered(&d.spine, Node::pair(x.clone(), y.clone()), meter);
                Seq::more(d.front.clone(), spine, Digit::Two(z.clone(), w))
            }
        },
    }
}

/// One and Three digits are one step from forcing recursion.
pub fn danger<A>(d: &Digit<A>) -> Potential {
    match d {
        Digit::One(..) => Potential(1),
        Digit::Two(..) => Potential(0),
        Digit::Three(..) => Potential(1),
    }
}

/// Sum of digit dangers over all levels.
pub fn potential<T>(q: &Seq<T>) -> Potential {
    match q {
        Seq::Nil | Seq::Unit(_) => Potential(0),
        Seq::More(d) => danger(&d.front) + potential(&d.spine) + danger(&d.back),
    }
}

pub fn cons_time<T: Clone>(_x: &Node<T>, q: &Seq<T>) -> Cost {
    match q {
        Seq::Nil | Seq::Unit(_) => Cost::ONE,
        Seq::More(d) => match &d.front {
            Digit::One(_) | Digit::Two(..) => Cost::ONE,
            Digit::Three(_, z, w) => {
                Cost::ONE + cons_time(&Node::pair(z.clone(), w.clone()), &d.spine)
            }
        },
    }
}

pub fn snoc_time<T: Clone>(q: &Seq<T>, _x: &Node<T>) -> Cost {
    match q {
        Seq::Nil | Seq::Unit(_) => Cost::ONE,
        Seq::More(d) => match &d.back {
            Digit::One(_) | Digit::Two(..) => Cost::ONE,
            Digit::Three(x, y, _) => {
                Cost::ONE + snoc_time(&d.spine, &Node::pair(x.clone(), y.clone()))
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{amortized_step, UnitCounter};

    fn leaf(x: i32) -> Node<i32> {
        Node::Leaf(x)
    }

    fn three(a: i32) -> Digit<Node<i32>> {
        Digit::Three(leaf(a), leaf(a + 1), leaf(a + 2))
    }

    #[test]
    fn cons_examples() {
        assert_eq!(cons(leaf(1), &Seq::Nil), Seq::Unit(leaf(1)));
        assert_eq!(
            cons(leaf(1), &Seq::Unit(leaf(2))),
            Seq::more(Digit::One(leaf(1)), Seq::Nil, Digit::One(leaf(2)))
        );
        let q = Seq::more(three(1), Seq::Nil, Digit::One(leaf(4)));
        let r = cons(leaf(0), &q);
        assert_eq!(
            r,
            Seq::more(
                Digit::Two(leaf(0), leaf(1)),
                Seq::Unit(Node::pair(leaf(2), leaf(3))),
                Digit::One(leaf(4))
            )
        );
        assert_eq!(r.to_vec(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn snoc_examples() {
        assert_eq!(snoc(&Seq::Nil, leaf(1)), Seq::Unit(leaf(1)));
        assert_eq!(
            snoc(&Seq::Unit(leaf(1)), leaf(2)),
            Seq::more(Digit::One(leaf(1)), Seq::Nil, Digit::One(leaf(2)))
        );
        let q = Seq::more(Digit::One(leaf(0)), Seq::Nil, three(1));
        assert_eq!(
            snoc(&q, leaf(4)),
            Seq::more(
                Digit::One(leaf(0)),
                Seq::Unit(Node::pair(leaf(1), leaf(2))),
                Digit::Two(leaf(3), leaf(4))
            )
        );
    }

    #[test]
    fn danger_and_potential() {
        assert_eq!(danger(&Digit::One(0)), Potential(1));
        assert_eq!(danger(&Digit::Two(0, 1)), Potential(0));
        assert_eq!(danger(&Digit::Three(0, 1, 2)), Potential(1));

        assert_eq!(potential(&Seq::<i32>::Nil), Potential(0));
        assert_eq!(potential(&Seq::Unit(leaf(0))), Potential(0));
        let q = Seq::more(Digit::One(leaf(0)), Seq::Nil, Digit::Two(leaf(1), leaf(2)));
        assert_eq!(potential(&q), Potential(1));

        let two = |n: Node<i32>| Digit::Two(n.clone(), n);
        let l2 = Node::pair(Node::pair(leaf(0), leaf(0)), Node::pair(leaf(0), leaf(0)));
        let l1 = Node::pair(leaf(0), leaf(0));
        let q = Seq::more(
            two(leaf(0)),
            Seq::more(
                two(l1.clone()),
                Seq::more(two(l2.clone()), Seq::Nil, two(l2)),
                two(l1),
            ),
            two(leaf(0)),
        );
        assert_eq!(q.depth(), 3);
        assert_eq!(potential(&q), Potential(0));
    }

    #[test]
    fn timing_examples() {
        assert_eq!(cons_time(&leaf(0), &Seq::Nil), Cost(1));
        let q = Seq::more(three(1), Seq::Nil, Digit::One(leaf(4)));
        assert_eq!(cons_time(&leaf(0), &q), Cost(2));
        assert_eq!(snoc_time(&Seq::Nil, &leaf(0)), Cost(1));

        let mut meter = UnitCounter::new();
        cons_metered(leaf(0), &q, &mut meter);
        assert_eq!(meter.cost(), Cost(2));
    }

    #[test]
    fn sequential_cons_snoc_bounds() {
        let mut q = Seq::Nil;
        for i in 0..300 {
            let x = leaf(i);
            let (next, t) = if i % 3 == 0 {
                (snoc(&q, x.clone()), snoc_time(&q, &x))
            } else {
                (cons(x.clone(), &q), cons_time(&x, &q))
            };
            assert!(amortized_step(t, potential(&q), potential(&next)) <= 3);
            q = next;
        }
        assert_eq!(q.len(), 300);
    }
}
