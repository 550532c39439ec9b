//! Relation-algebra identities against naive pointwise oracles.

use proptest::prelude::*;
use reprkit::{FiniteSet, Rel};

/// Three carriers of size 0..=4 and four bit patterns to fill relations from.
fn shapes() -> impl Strategy<Value = ([usize; 3], [u32; 4])> {
    (prop::array::uniform3(0usize..=4), prop::array::uniform4(any::<u32>()))
}

fn rel(a: &FiniteSet, b: &FiniteSet, bits: u32) -> Rel {
    Rel::from_fn(a, b, |i, j| bits >> (i * b.len() + j) & 1 == 1)
}

fn sets(n: [usize; 3]) -> (FiniteSet, FiniteSet, FiniteSet) {
    (
        FiniteSet::indexed("A", "a", n[0]),
        FiniteSet::indexed("B", "b", n[1]),
        FiniteSet::indexed("C", "c", n[2]),
    )
}

fn naive_compose(x: &Rel, y: &Rel) -> Rel {
    Rel::from_fn(x.src(), y.tgt(), |a, c| {
        (0..x.tgt().len()).any(|b| x.contains(a, b) && y.contains(b, c))
    })
}

/// `(b, c) ∈ x\z` iff every `a` with `a x b` has `a z c`.
fn naive_under(x: &Rel, z: &Rel) -> Rel {
    Rel::from_fn(x.tgt(), z.tgt(), |b, c| {
        (0..x.src().len()).all(|a| !x.contains(a, b) || z.contains(a, c))
    })
}

/// `(a, b) ∈ z/y` iff every `c` with `b y c` has `a z c`.
fn naive_over(z: &Rel, y: &Rel) -> Rel {
    Rel::from_fn(z.src(), y.src(), |a, b| {
        (0..y.tgt().len()).all(|c| !y.contains(b, c) || z.contains(a, c))
    })
}

fn included(x: &Rel, y: &Rel) -> bool {
    x.is_included(y).unwrap().holds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn compose_matches_pointwise_definition((n, bits) in shapes()) {
        let (a, b, c) = sets(n);
        let (x, y) = (rel(&a, &b, bits[0]), rel(&b, &c, bits[1]));
        prop_assert_eq!(x.compose(&y).unwrap(), naive_compose(&x, &y));
    }

    #[test]
    fn residuals_match_pointwise_definition((n, bits) in shapes()) {
        let (a, b, c) = sets(n);
        let (x, z) = (rel(&a, &b, bits[0]), rel(&a, &c, bits[1]));
        prop_assert_eq!(x.under(&z).unwrap(), naive_under(&x, &z));
        let y = rel(&b, &c, bits[2]);
        prop_assert_eq!(z.over(&y).unwrap(), naive_over(&z, &y));
    }

    #[test]
    fn galois_connections((n, bits) in shapes()) {
        let (a, b, c) = sets(n);
        let (x, y, z) = (rel(&a, &b, bits[0]), rel(&b, &c, bits[1]), rel(&a, &c, bits[2]));
        let xy = x.compose(&y).unwrap();
        prop_assert_eq!(included(&xy, &z), included(&y, &x.under(&z).unwrap()));
        prop_assert_eq!(included(&xy, &z), included(&x, &z.over(&y).unwrap()));
        prop_assert!(included(&x.compose(&x.under(&z).unwrap()).unwrap(), &z));
    }

    #[test]
    fn converse_laws((n, bits) in shapes()) {
        let (a, b, c) = sets(n);
        let (x, y) = (rel(&a, &b, bits[0]), rel(&b, &c, bits[1]));
        prop_assert_eq!(x.converse().converse(), x.clone());
        prop_assert_eq!(
            x.compose(&y).unwrap().converse(),
            y.converse().compose(&x.converse()).unwrap()
        );
    }

    #[test]
    fn compose_is_associative_and_distributes((n, bits) in shapes()) {
        let (a, b, c) = sets(n);
        let (x, y, w) = (rel(&a, &b, bits[0]), rel(&b, &c, bits[1]), rel(&b, &c, bits[2]));
        let back = rel(&c, &a, bits[3]);
        prop_assert_eq!(
            x.compose(&y).unwrap().compose(&back).unwrap(),
            x.compose(&y.compose(&back).unwrap()).unwrap()
        );
        prop_assert_eq!(
            x.compose(&y.union(&w).unwrap()).unwrap(),
            x.compose(&y).unwrap().union(&x.compose(&w).unwrap()).unwrap()
        );
        prop_assert_eq!(x.compose(&Rel::identity(&b)).unwrap(), x.clone());
    }

    #[test]
    fn star_is_the_least_preorder_above((n, bits) in shapes()) {
        let (a, _, _) = sets(n);
        let (x, w) = (rel(&a, &a, bits[0]), rel(&a, &a, bits[1]));
        let s = x.star().unwrap();
        prop_assert!(included(&x, &s));
        prop_assert!(included(&Rel::identity(&a), &s));
        prop_assert_eq!(s.compose(&s).unwrap(), s.clone());
        prop_assert_eq!(s.star().unwrap(), s.clone());
        let p = x.union(&w).unwrap().star().unwrap();
        prop_assert!(included(&s, &p));
        // A preorder is its own self-residual.
        prop_assert_eq!(s.under(&s).unwrap(), s.clone());
    }
}
