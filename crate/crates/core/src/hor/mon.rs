//! The free monoid HOR: lists as traces, `{⊗, 1}` terms as expressions,
//! satisfaction by flattening.

use crate::error::Result;
use crate::functor::{Bound, Functor, Node, Shape, Signature, Term, TermCarrier};
use crate::natural::{approx_family, var_list_family};
use crate::rel::Rel;
use crate::relcore::rel_from_matrix;
use crate::report::{CheckReport, LawCheck};
use crate::set::FiniteSet;

use super::{tilde_lift, Hor, PreorderedSet};

/// Terms of depth at most `depth` over `{⊗, 1}`, satisfied by their
/// flattening; `≤` is `=_Mon`.
pub fn mon_hor(depth: usize) -> Result<Hor> {
    let e = Functor::term(Signature::monoid(), Bound::Depth(depth)).named(&format!("Mon{depth}"));
    let flatten = var_list_family(&e)?;
    Hor::new("mon", flatten.cographs(), approx_family(&e)?)
}

/// `I`, the left-to-right list of letters.
pub fn flatten(t: &Term) -> Vec<String> {
    crate::functor::var_list(t)
}

/// `u =_Mon v` iff the flattenings agree.
pub fn eq_mon(u: &Term, v: &Term) -> bool {
    flatten(u) == flatten(v)
}

fn mon_carrier(a: &FiniteSet, depth: usize) -> Result<(Functor, std::sync::Arc<crate::functor::Carrier>)> {
    let e = Functor::term(Signature::monoid(), Bound::Depth(depth));
    let c = e.carrier(a)?;
    Ok((e, c))
}

fn term_shape(c: &crate::functor::Carrier) -> &TermCarrier {
    match &c.shape {
        Shape::Term(t) => t,
        _ => unreachable!("term functor"),
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, i: usize, j: usize) -> bool {
        let (a, b) = (self.find(i), self.find(j));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
        a != b
    }
}

/// The least congruence on the bounded carrier containing the instances of
/// `u⊗(v⊗w) = (u⊗v)⊗w`, `u⊗1 = u` and `1⊗u = u` whose sides both lie in it.
pub fn mon_congruence_closure(a: &FiniteSet, depth: usize) -> Result<Rel> {
    let (_, c) = mon_carrier(a, depth)?;
    let t = term_shape(&c);
    let sig = Signature::monoid();
    let (tensor, unit) = (sig.op("⊗").unwrap(), sig.op("1").unwrap());
    let n = t.nodes.len();
    let mut uf = UnionFind((0..n).collect());
    let one = t.pos.get(&Node::Op(unit, vec![]));
    for (i, node) in t.nodes.iter().enumerate() {
        let Node::Op(o, cs) = node else { continue };
        if *o != tensor {
            continue;
        }
        let (l, r) = (cs[0], cs[1]);
        if Some(&r) == one {
            uf.union(i, l);
        }
        if Some(&l) == one {
            uf.union(i, r);
        }
        if let Node::Op(o2, inner) = &t.nodes[r] {
            if *o2 == tensor {
                let left = t.pos.get(&Node::Op(tensor, vec![l, inner[0]]));
                if let Some(&lv) = left {
                    if let Some(&j) = t.pos.get(&Node::Op(tensor, vec![lv, inner[1]])) {
                        uf.union(i, j);
                    }
                }
            }
        }
    }
    let products: Vec<(usize, usize, usize)> = t
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, n)| match n {
            Node::Op(o, cs) if *o == tensor => Some((i, cs[0], cs[1])),
            _ => None,
        })
        .collect();
    loop {
        let mut changed = false;
        for x in 0..products.len() {
            for y in x + 1..products.len() {
                let (i, l1, r1) = products[x];
                let (j, l2, r2) = products[y];
                if uf.find(l1) == uf.find(l2) && uf.find(r1) == uf.find(r2) {
                    changed |= uf.union(i, j);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
    Ok(Rel::from_fn(&c.set, &c.set, |i, j| roots[i] == roots[j]))
}

/// `=_Mon` on the bounded carrier, decided on term trees by flattening.
pub fn eq_mon_relation(a: &FiniteSet, depth: usize) -> Result<Rel> {
    let (_, c) = mon_carrier(a, depth)?;
    let t = term_shape(&c);
    let sig = Signature::monoid();
    let flat: Vec<Vec<String>> = (0..t.nodes.len()).map(|i| flatten(&t.term(&sig, a, i))).collect();
    Ok(Rel::from_fn(&c.set, &c.set, |i, j| flat[i] == flat[j]))
}

/// Certifies the flattening decision against the congruence-closure
/// oracle, and checks that it is an equivalence and a `⊗`-congruence.
pub fn eq_mon_report(a: &FiniteSet, depth: usize) -> Result<CheckReport> {
    let flat = eq_mon_relation(a, depth)?;
    let closure = mon_congruence_closure(a, depth)?;
    let (_, c) = mon_carrier(a, depth)?;
    let t = term_shape(&c);
    let tensor = Signature::monoid().op("⊗").unwrap();
    let mut report = CheckReport::new();
    report.push(LawCheck::equality("congruence closure = flattening", &closure, &flat));
    let sym = flat.is_included(&flat.converse())?;
    let refl = flat.is_reflexive();
    let trans = flat.compose(&flat)?.is_included(&flat)?;
    report.push(LawCheck::verdict("equivalence", refl && sym.holds && trans.holds));
    let mut congruence = LawCheck::pass("⊗-congruence");
    'outer: for (i, ni) in t.nodes.iter().enumerate() {
        for (j, nj) in t.nodes.iter().enumerate() {
            if let (Node::Op(o1, c1), Node::Op(o2, c2)) = (ni, nj) {
                if *o1 == tensor
                    && *o2 == tensor
                    && flat.contains(c1[0], c2[0])
                    && flat.contains(c1[1], c2[1])
                    && !flat.contains(i, j)
                {
                    congruence = LawCheck::fail("⊗-congruence", Some(crate::report::Witness::of(&flat, (i, j))));
                    break 'outer;
                }
            }
        }
    }
    report.push(congruence);
    report.scope(format!("terms of depth ≤ {depth} over {a}: {} terms", t.nodes.len()));
    Ok(report)
}

/// The least preorder on the bounded carrier closed under the `⊗`
/// congruence rule, containing `=_Mon` and the letter steps `a ⊴ b`.
pub fn mon_rule_closure(p: &PreorderedSet, depth: usize) -> Result<Rel> {
    let a = p.carrier();
    let (_, c) = mon_carrier(a, depth)?;
    let t = term_shape(&c);
    let tensor = Signature::monoid().op("⊗").unwrap();
    let eq = eq_mon_relation(a, depth)?;
    let mut m = eq.matrix().clone();
    for (i, ni) in t.nodes.iter().enumerate() {
        for (j, nj) in t.nodes.iter().enumerate() {
            if let (Node::Var(x), Node::Var(y)) = (ni, nj) {
                if p.order().contains(*x, *y) {
                    m.set(i, j);
                }
            }
        }
    }
    let products: Vec<(usize, usize, usize)> = t
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, n)| match n {
            Node::Op(o, cs) if *o == tensor => Some((i, cs[0], cs[1])),
            _ => None,
        })
        .collect();
    loop {
        let before = m.clone();
        for &(i, l1, r1) in &products {
            for &(j, l2, r2) in &products {
                if m.get(l1, l2) && m.get(r1, r2) {
                    m.set(i, j);
                }
            }
        }
        m = m.star();
        if m == before {
            break;
        }
    }
    rel_from_matrix(&c.set, &c.set, m)
}

/// Compares the rule-based order with the `≤'` component of the tilde lift
/// of `mon_hor(depth)`.
pub fn tilde_mon_rule_check(p: &PreorderedSet, depth: usize) -> Result<CheckReport> {
    let h = mon_hor(depth)?;
    let lifted = tilde_lift(&h, p)?;
    let rules = mon_rule_closure(p, depth)?;
    let mut report = CheckReport::new();
    report.push(LawCheck::equality(
        "rule closure = tilde order",
        &rules,
        lifted.rep.leq(),
    ));
    report.absorb("tilde lift ", lifted.report);
    report.scope(format!("terms of depth ≤ {depth} over {}", p.carrier()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::Term;
    use crate::natural::{is_natural_transformation, linearity_check, Mode, Probes, Side};

    fn set(labels: &[&str]) -> FiniteSet {
        FiniteSet::new("A", labels.iter().copied()).unwrap()
    }

    fn t(u: Term, v: Term) -> Term {
        Term::app("⊗", vec![u, v])
    }

    #[test]
    fn monoid_axioms_hold() {
        let (p, q, r) = (Term::var("p"), Term::var("q"), Term::var("r"));
        let one = Term::constant("1");
        assert!(eq_mon(
            &t(p.clone(), t(q.clone(), r.clone())),
            &t(t(p.clone(), q.clone()), r.clone())
        ));
        assert!(eq_mon(&t(p.clone(), one.clone()), &p));
        assert!(eq_mon(&t(one, p.clone()), &p));
        assert!(!eq_mon(&t(p.clone(), q.clone()), &t(q, p)));
    }

    #[test]
    fn oracle_agrees_with_flattening() {
        for (labels, depth) in [(vec!["p"], 2), (vec!["p", "q"], 2), (vec!["p"], 3), (vec!["p", "q"], 3)] {
            let r = eq_mon_report(&set(&labels), depth).unwrap();
            assert!(r.all_hold(), "{r}");
        }
    }

    #[test]
    fn mon_hor_validates() {
        let h = mon_hor(2).unwrap();
        let r = super::super::validate_hor(&h, &Probes::up_to(2), Some(8)).unwrap();
        assert!(r.all_hold(), "{r}");
    }

    #[test]
    fn flattening_is_natural_and_models_right_linear() {
        let h = mon_hor(2).unwrap();
        let e = h.exprs().clone();
        let p = Probes::up_to(2);
        assert!(is_natural_transformation(&var_list_family(&e).unwrap(), &p)
            .unwrap()
            .all_hold());
        assert!(linearity_check(h.models(), Side::Right, Mode::Relations, &p)
            .unwrap()
            .all_hold());
    }

    #[test]
    fn tilde_examples() {
        let a = set(&["p", "q"]);
        let p = PreorderedSet::new(Rel::from_pairs(&a, &a, [("p", "p"), ("q", "q"), ("p", "q")]).unwrap()).unwrap();
        let h = mon_hor(2).unwrap();
        let l = tilde_lift(&h, &p).unwrap();
        assert!(l.rep.is_validated(), "{}", l.report);
        assert!(l.report.all_hold(), "{}", l.report);
        assert!(l.rep.models().contains_labels("[p]", "q").unwrap());
        assert!(l.rep.leq().contains_labels("p⊗1", "q").unwrap());
        assert!(!l.rep.leq().contains_labels("q", "p").unwrap());
        let check = tilde_mon_rule_check(&p, 2).unwrap();
        assert!(check.all_hold(), "{check}");
    }

    #[test]
    fn tilde_discrete_is_instantiate() {
        let a = set(&["p", "q"]);
        let h = mon_hor(2).unwrap();
        let l = tilde_lift(&h, &PreorderedSet::discrete(&a)).unwrap();
        let i = super::super::instantiate(&h, &a).unwrap();
        assert_eq!(l.rep.models(), i.models());
        assert_eq!(l.rep.leq(), i.leq());
        let rules = mon_rule_closure(&PreorderedSet::discrete(&a), 2).unwrap();
        assert_eq!(&rules, i.leq());
    }

    #[test]
    fn chain_rule_check() {
        let a = set(&["p", "q", "r"]);
        let order = Rel::from_pairs(
            &a,
            &a,
            [("p", "p"), ("q", "q"), ("r", "r"), ("p", "q"), ("q", "r"), ("p", "r")],
        )
        .unwrap();
        let r = tilde_mon_rule_check(&PreorderedSet::new(order).unwrap(), 2).unwrap();
        assert!(r.all_hold(), "{r}");
    }
}
