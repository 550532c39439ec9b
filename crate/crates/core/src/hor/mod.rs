//! Higher-order representations: set-indexed representations that are
//! functorial in the index, and their lifts along preorders and
//! representations.

pub mod ka;
pub mod mon;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::functor::Functor;
use crate::gen;
use crate::morphism::{validate_morphism, Morphism};
use crate::natural::{
    is_natural_relation, is_natural_transformation, linearity_check, IndexedFunction, IndexedRelation, Mode, Probes,
    Side, Tally,
};
use crate::rel::{FuncTable, Rel};
use crate::relcore::is_preorder;
use crate::report::{CheckReport, LawCheck, Witness};
use crate::repr::{is_exact, validate_representation, Representation};
use crate::set::FiniteSet;

/// `⟨𝐓, 𝐄, ⊨, ≤⟩` with `⊨ : 𝐓 ⇒ 𝐄` and `≤ : 𝐄 ⇒ 𝐄`.
#[derive(Clone, Debug)]
pub struct Hor {
    name: String,
    models: IndexedRelation,
    leq: IndexedRelation,
}

impl Hor {
    pub fn new(name: &str, models: IndexedRelation, leq: IndexedRelation) -> Result<Self> {
        if !models.target().same(leq.source()) || !leq.source().same(leq.target()) {
            return Err(Error::mismatch("HOR", format!("{models:?}"), format!("{leq:?}")));
        }
        Ok(Hor {
            name: name.to_string(),
            models,
            leq,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `𝐓`.
    pub fn traces(&self) -> &Functor {
        self.models.source()
    }

    /// `𝐄`.
    pub fn exprs(&self) -> &Functor {
        self.leq.source()
    }

    pub fn models(&self) -> &IndexedRelation {
        &self.models
    }

    pub fn leq(&self) -> &IndexedRelation {
        &self.leq
    }

    fn raw(&self, a: &FiniteSet) -> Result<Representation> {
        Representation::new(self.models.at(a)?, self.leq.at(a)?)
    }
}

/// `⟨𝐓A, 𝐄A, ⊨_A, ≤_A⟩`, validated.
pub fn instantiate(h: &Hor, a: &FiniteSet) -> Result<Representation> {
    h.raw(a)?.validated()
}

/// `⟨𝐄f, (𝐓f)^*⟩`, unchecked.
pub fn arrow_components(h: &Hor, f: &FuncTable) -> Result<Morphism> {
    Ok(Morphism::new(
        h.exprs().apply_arrow(f)?,
        h.traces().apply_arrow(f)?.cograph(),
    ))
}

/// `⟨𝐄f, (𝐓f)^*⟩` and its validation as a morphism between instances.
pub fn hor_arrow(h: &Hor, f: &FuncTable) -> Result<(Morphism, CheckReport)> {
    let m = arrow_components(h, f)?;
    let report = validate_morphism(&instantiate(h, f.src())?, &instantiate(h, f.tgt())?, &m)?;
    Ok((m, report))
}

/// Per-set representation axioms, right-linearity of `⊨` and naturality of
/// `≤` on probes. With `interpretation_cap`, also checks that
/// `e ↦ I(e)` is a natural transformation `𝐄 ⇒ 𝒫𝐓`.
pub fn validate_hor(h: &Hor, probes: &Probes, interpretation_cap: Option<usize>) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut per_set: Vec<Tally> = vec![Tally::new("instances: preorder"), Tally::new("instances: sound")];
    for a in probes.sets() {
        let v = validate_representation(&h.raw(a)?)?;
        for (t, law) in per_set.iter_mut().zip(["preorder", "sound"]) {
            let l = v.get(law).cloned().unwrap_or_else(|| LawCheck::pass(law));
            t.record(l, || format!("at {a}"));
        }
    }
    for t in per_set {
        t.finish(&mut report);
    }
    report.absorb("⊨ ", linearity_check(h.models(), Side::Right, Mode::Functions, probes)?);
    report.absorb("≤ ", is_natural_relation(h.leq(), probes)?);
    if let Some(cap) = interpretation_cap {
        report.absorb(
            "interpretation ",
            is_natural_transformation(&interpretation_family(h, cap), probes)?,
        );
    }
    Ok(report)
}

/// `I : 𝐄 ⇒ 𝒫𝐓`, `e ↦ {t | t ⊨ e}`.
pub fn interpretation_family(h: &Hor, cap: usize) -> IndexedFunction {
    let p = Functor::powerset(cap);
    let pt = Functor::compose(p.clone(), h.traces().clone());
    let (hh, pp) = (h.clone(), p);
    IndexedFunction::new("I", h.exprs().clone(), pt, move |a| {
        let m = hh.models.at(a)?;
        let c = pp.carrier(m.src())?;
        let crate::functor::Shape::Powerset { pos, .. } = &c.shape else {
            unreachable!()
        };
        let t = m.converse();
        let table = (0..m.tgt().len())
            .map(|e| pos[&t.matrix().row_ones(e).fold(0u64, |acc, i| acc | 1 << i)])
            .collect();
        FuncTable::new(m.tgt(), &c.set, table)
    })
}

/// Identity preservation, validity of every probe arrow, and
/// `R(g∘f) = Rg∘Rf` by component equality.
pub fn hor_functoriality(h: &Hor, probes: &Probes) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let instances: HashMap<_, Representation> = probes
        .sets()
        .iter()
        .map(|a| Ok((a.id(), instantiate(h, a)?)))
        .collect::<Result<_>>()?;
    let funcs = probes.functions()?;
    let key = |f: &FuncTable| (f.src().id(), f.tgt().id(), f.table().to_vec());
    let mut arrows = HashMap::new();
    let mut valid = Tally::new("arrows are morphisms");
    for f in &funcs {
        let m = arrow_components(h, f)?;
        let r = validate_morphism(&instances[&f.src().id()], &instances[&f.tgt().id()], &m)?;
        let check = r.first_failure().cloned().unwrap_or_else(|| LawCheck::pass(""));
        valid.record(check, || format!("f = {}", f.describe()));
        arrows.insert(key(f), m);
    }
    valid.finish(&mut report);
    let mut ids = Tally::new("preserves identities");
    for a in probes.sets() {
        let m = &arrows[&key(&FuncTable::identity(a))];
        ids.record(
            LawCheck::verdict("", *m == Morphism::identity(&instances[&a.id()])),
            || format!("at {a}"),
        );
    }
    ids.finish(&mut report);
    let mut comp = Tally::new("preserves composition");
    for f in &funcs {
        for g in funcs.iter().filter(|g| g.src().same(f.tgt())) {
            let gf = &arrows[&key(&f.then(g)?)];
            let composed = crate::morphism::compose_unchecked(&arrows[&key(f)], &arrows[&key(g)])?;
            comp.record(LawCheck::verdict("", *gf == composed), || {
                format!("f = {}, g = {}", f.describe(), g.describe())
            });
        }
    }
    comp.finish(&mut report);
    report.scope(probes.scope());
    Ok(report)
}

/// One probe set of tabulated relational-HOR data: `⊨_A : 𝐓A → 𝐄A` and
/// `≤_A` on `𝐄A`.
#[derive(Clone, Debug)]
pub struct RelHorEntry {
    pub set: FiniteSet,
    pub models: Rel,
    pub leq: Rel,
}

/// `𝐓 : Set → Rel` given by tables on probes: an object per entry and a
/// relation `𝐓f : 𝐓B → 𝐓A` for every function `f : A → B` between them.
#[derive(Clone, Debug)]
pub struct RelationalHorData {
    pub exprs: Functor,
    pub entries: Vec<RelHorEntry>,
    pub arrows: Vec<(FuncTable, Rel)>,
}

/// Tabulates a HOR with `𝐓f := (𝐓f)^*`.
pub fn tabulate(h: &Hor, probes: &Probes) -> Result<RelationalHorData> {
    let entries = probes
        .sets()
        .iter()
        .map(|a| {
            Ok(RelHorEntry {
                set: a.clone(),
                models: h.models.at(a)?,
                leq: h.leq.at(a)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let arrows = probes
        .functions()?
        .into_iter()
        .map(|f| Ok((f.clone(), h.traces().apply_arrow(&f)?.cograph())))
        .collect::<Result<Vec<_>>>()?;
    Ok(RelationalHorData {
        exprs: h.exprs().clone(),
        entries,
        arrows,
    })
}

fn incomplete(detail: String) -> Error {
    Error::Invalid {
        what: "relational HOR tables",
        detail,
    }
}

/// `≤ = ≤\≤`, `⊨;≤ ⊑ ⊨` and `𝐓f;⊨_A = ⊨_B;𝐄f^*`, plus naturality of `≤`
/// and functoriality of the tabulated `𝐓`.
pub fn check_relational_hor_conditions(d: &RelationalHorData) -> Result<CheckReport> {
    let entry = |a: &FiniteSet| d.entries.iter().find(|e| e.set.same(a));
    for e in &d.entries {
        let ea = d.exprs.apply_object(&e.set)?;
        if !e.models.tgt().same(&ea) || !e.leq.src().same(&ea) || !e.leq.tgt().same(&ea) {
            return Err(Error::mismatch(
                "relational HOR entry",
                e.models.signature(),
                format!("𝐄{} = {ea}", e.set),
            ));
        }
    }
    let mut table: HashMap<(Vec<usize>, crate::set::SetId, crate::set::SetId), &Rel> = HashMap::new();
    for (f, t) in &d.arrows {
        let (ea, eb) = (
            entry(f.src()).ok_or_else(|| incomplete(format!("no entry for {}", f.src())))?,
            entry(f.tgt()).ok_or_else(|| incomplete(format!("no entry for {}", f.tgt())))?,
        );
        if !t.src().same(eb.models.src()) || !t.tgt().same(ea.models.src()) {
            return Err(Error::mismatch(
                "𝐓f",
                t.signature(),
                format!("{} -> {}", eb.models.src(), ea.models.src()),
            ));
        }
        table.insert((f.table().to_vec(), f.src().id(), f.tgt().id()), t);
    }
    let lookup = |f: &FuncTable| -> Result<&Rel> {
        table
            .get(&(f.table().to_vec(), f.src().id(), f.tgt().id()))
            .copied()
            .ok_or_else(|| incomplete(format!("no relation for f = {}", f.describe())))
    };
    let mut funcs = Vec::new();
    for a in &d.entries {
        for b in &d.entries {
            for f in gen::all_functions(&a.set, &b.set, 1 << 20)? {
                lookup(&f)?;
                funcs.push(f);
            }
        }
    }

    let mut report = CheckReport::new();
    let mut fix = Tally::new("≤ = ≤\\≤");
    let mut sound = Tally::new("⊨;≤ ⊑ ⊨");
    for e in &d.entries {
        fix.record(LawCheck::equality("", &e.leq, &e.leq.under(&e.leq)?), || {
            format!("at {}", e.set)
        });
        let ml = e.models.compose(&e.leq)?;
        sound.record(LawCheck::inclusion("", &ml, ml.is_included(&e.models)?), || {
            format!("at {}", e.set)
        });
    }
    fix.finish(&mut report);
    sound.finish(&mut report);

    let mut cond = Tally::new("𝐓f;⊨ = ⊨;𝐄f^*");
    let mut nat = Tally::new("≤ natural");
    let mut non_graph = Vec::new();
    for f in &funcs {
        let (ea, eb) = (entry(f.src()).unwrap(), entry(f.tgt()).unwrap());
        let t = lookup(f)?;
        let ef = d.exprs.apply_arrow(f)?.cograph();
        let lhs = t.compose(&ea.models)?;
        let rhs = eb.models.compose(&ef)?;
        cond.record(LawCheck::equality("", &lhs, &rhs), || format!("f = {}", f.describe()));
        let nl = ef.compose(&ea.leq)?;
        let nr = eb.leq.compose(&ef)?;
        nat.record(LawCheck::inclusion("", &nl, nl.is_included(&nr)?), || {
            format!("f = {}", f.describe())
        });
        if t.converse().to_function().is_none() && non_graph.len() < 3 {
            non_graph.push(f.describe());
        }
    }
    cond.finish(&mut report);
    nat.finish(&mut report);

    let mut ids = Tally::new("𝐓 preserves identities");
    for e in &d.entries {
        let t = lookup(&FuncTable::identity(&e.set))?;
        ids.record(LawCheck::equality("", t, &Rel::identity(e.models.src())), || {
            format!("at {}", e.set)
        });
    }
    ids.finish(&mut report);
    let mut comp = Tally::new("𝐓 preserves composition");
    for f in &funcs {
        for g in funcs.iter().filter(|g| g.src().same(f.tgt())) {
            let lhs = lookup(&f.then(g)?)?;
            let rhs = lookup(g)?.compose(lookup(f)?)?;
            comp.record(LawCheck::equality("", lhs, &rhs), || {
                format!("f = {}, g = {}", f.describe(), g.describe())
            });
        }
    }
    comp.finish(&mut report);

    if !non_graph.is_empty() {
        report.finding(format!(
            "𝐓f is not the converse of a function for f = {}: this functor is not the trace functor of any HOR",
            non_graph.join("; ")
        ));
    }
    let sizes: Vec<String> = d.entries.iter().map(|e| e.set.len().to_string()).collect();
    report.scope(format!(
        "tabulated probe sets of sizes {{{}}}, {} functions",
        sizes.join(","),
        funcs.len()
    ));
    Ok(report)
}

/// `⟨A, ≤_A⟩` with `≤_A` a preorder.
#[derive(Clone, Debug, PartialEq)]
pub struct PreorderedSet {
    order: Rel,
}

impl PreorderedSet {
    pub fn new(order: Rel) -> Result<Self> {
        if !order.is_square() {
            return Err(Error::NotSquare {
                op: "preordered set",
                src: order.src().to_string(),
                tgt: order.tgt().to_string(),
            });
        }
        let check = is_preorder(&order)?;
        if !check.holds {
            return Err(Error::Invalid {
                what: "preorder",
                detail: check.to_string(),
            });
        }
        Ok(PreorderedSet { order })
    }

    pub fn discrete(a: &FiniteSet) -> Self {
        PreorderedSet {
            order: Rel::identity(a),
        }
    }

    pub fn carrier(&self) -> &FiniteSet {
        self.order.src()
    }

    pub fn order(&self) -> &Rel {
        &self.order
    }
}

/// A lifted representation with the report of its validation.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub rep: Representation,
    pub report: CheckReport,
}

fn finish_lift(models: Rel, leq: Rel, mut report: CheckReport) -> Result<Lifted> {
    let (rep, v) = Representation::new(models, leq)?.validate()?;
    let mut out = v;
    out.absorb("", std::mem::take(&mut report));
    Ok(Lifted { rep, report: out })
}

/// `⟨𝐓A, 𝐄A, 𝐓̄≤_A;⊨, (𝐄̄≤_A ∪ ≤)*⟩`, with the soundness argument re-run
/// step by step.
pub fn tilde_lift(h: &Hor, p: &PreorderedSet) -> Result<Lifted> {
    let a = p.carrier();
    let le = p.order();
    let (models, leq) = (h.models.at(a)?, h.leq.at(a)?);
    let tl = h.traces().lift(le)?;
    let el = h.exprs().lift(le)?;
    let new_models = tl.compose(&models)?;
    let new_leq = el.union(&leq)?.star()?;

    let mut chain = CheckReport::new();
    let lhs = new_models.compose(&el)?;
    let tt = tl.compose(&tl)?;
    let mid = tt.compose(&models)?;
    chain.push(LawCheck::inclusion(
        "soundness step 1: 𝐓̄≤;⊨;𝐄̄≤ ⊑ 𝐓̄≤;𝐓̄≤;⊨",
        &lhs,
        lhs.is_included(&mid)?,
    ));
    let tll = h.traces().lift(&le.compose(le)?)?;
    chain.push(LawCheck::equality("soundness step 2: 𝐓̄≤;𝐓̄≤ = 𝐓̄(≤;≤)", &tt, &tll));
    let via = tll.compose(&models)?;
    chain.push(LawCheck::inclusion(
        "soundness step 3: 𝐓̄(≤;≤);⊨ ⊑ 𝐓̄≤;⊨",
        &via,
        via.is_included(&new_models)?,
    ));
    let second = new_models.compose(&leq)?;
    chain.push(LawCheck::inclusion(
        "soundness step 4: 𝐓̄≤;⊨;≤ ⊑ 𝐓̄≤;⊨",
        &second,
        second.is_included(&new_models)?,
    ));
    chain.scope(format!("{} lifted along a preorder on {a}", h.name));
    finish_lift(new_models, new_leq, chain)
}

/// `⟨𝐓T_R, 𝐄E_R, 𝐓̄⊨_R;⊨, (𝐄̄≤_R ∪ ≤)*⟩`. Exactness is reported, not
/// asserted.
pub fn hat_lift(h: &Hor, r: &Representation) -> Result<Lifted> {
    let (t, e) = (r.traces(), r.exprs());
    let new_models = h.traces().lift(r.models())?.compose(&h.models.at(e)?)?;
    let new_leq = h.exprs().lift(r.leq())?.union(&h.leq.at(e)?)?.star()?;
    let mut extra = CheckReport::new();
    extra.scope(format!(
        "{} lifted along a representation with |T| = {}, |E| = {}",
        h.name,
        t.len(),
        e.len()
    ));
    let mut lifted = finish_lift(new_models, new_leq, extra)?;
    if lifted.rep.is_validated() {
        let ex = is_exact(&lifted.rep)?;
        let text = match &ex.witness {
            None => "lift is exact".to_string(),
            Some(w) => format!("lift is not exact: {w}"),
        };
        lifted.report.finding(text);
    }
    Ok(lifted)
}

/// An exact input whose hat lift is not exact.
#[derive(Clone, Debug)]
pub struct HatCounterexample {
    pub input: Representation,
    pub lifted: Lifted,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug)]
pub struct HatSearch {
    pub found: Option<HatCounterexample>,
    pub examined: usize,
    pub scope: String,
}

/// Searches exact representations with `|T| ≤ max_traces`,
/// `|E| ≤ max_exprs` for one whose hat lift is not exact.
pub fn hat_exactness_search(h: &Hor, max_traces: usize, max_exprs: usize) -> Result<HatSearch> {
    let mut examined = 0;
    for ne in 1..=max_exprs {
        for nt in 0..=max_traces {
            let t = FiniteSet::indexed(&format!("T{nt}"), "t", nt);
            let e = FiniteSet::indexed(&format!("E{ne}"), "e", ne);
            for r in crate::reduction::valid_representations(&t, &e, 1 << 20)? {
                if !is_exact(&r)?.holds {
                    continue;
                }
                examined += 1;
                let lifted = hat_lift(h, &r)?;
                if !lifted.rep.is_validated() {
                    return Err(Error::TheoremInconsistency(format!(
                        "hat lift of a valid representation is not a representation: {}",
                        lifted.report
                    )));
                }
                let ex = is_exact(&lifted.rep)?;
                if !ex.holds {
                    return Ok(HatSearch {
                        found: Some(HatCounterexample {
                            input: r,
                            lifted,
                            witness: ex.witness,
                        }),
                        examined,
                        scope: format!("exact inputs up to |T| = {nt}, |E| = {ne}"),
                    });
                }
            }
        }
    }
    Ok(HatSearch {
        found: None,
        examined,
        scope: format!("all {examined} exact inputs with |T| ≤ {max_traces}, |E| ≤ {max_exprs}"),
    })
}

#[cfg(test)]
mod tests {
    use super::mon::mon_hor;
    use super::*;
    use crate::repr::membership_representation;
    use crate::set;

    fn powerset_data(max: usize) -> RelationalHorData {
        let probes = Probes::up_to(max);
        let entries = probes
            .sets()
            .iter()
            .map(|a| {
                let ni = crate::relcore::membership(a, 4).unwrap().converse();
                RelHorEntry {
                    set: a.clone(),
                    models: ni,
                    leq: Rel::identity(a),
                }
            })
            .collect();
        let arrows = probes
            .functions()
            .unwrap()
            .into_iter()
            .map(|f| {
                let (pa, pb) = (set::powerset(f.src(), 4).unwrap(), set::powerset(f.tgt(), 4).unwrap());
                let (ma, mb) = (set::powerset_masks(f.src()), set::powerset_masks(f.tgt()));
                let inv = Rel::from_fn(&pb, &pa, |y, x| {
                    (0..f.src().len()).all(|i| (ma[x] >> i & 1 == 1) == (mb[y] >> f.apply(i) & 1 == 1))
                });
                (f, inv)
            })
            .collect();
        RelationalHorData {
            exprs: Functor::identity(),
            entries,
            arrows,
        }
    }

    #[test]
    fn tabulated_hor_passes() {
        let h = mon_hor(2).unwrap();
        let r = check_relational_hor_conditions(&tabulate(&h, &Probes::up_to(2)).unwrap()).unwrap();
        assert!(r.all_hold(), "{r}");
        assert!(r.findings.is_empty());
    }

    #[test]
    fn non_preorder_fails_fixpoint() {
        let h = mon_hor(2).unwrap();
        let mut d = tabulate(&h, &Probes::up_to(1)).unwrap();
        let e = &mut d.entries[1];
        e.leq = e.leq.toggled(0, 0);
        let r = check_relational_hor_conditions(&d).unwrap();
        assert!(!r.holds("≤ = ≤\\≤"));
    }

    #[test]
    fn inverse_image_functor_goes_beyond_hors() {
        let r = check_relational_hor_conditions(&powerset_data(2)).unwrap();
        assert!(r.all_hold(), "{r}");
        assert!(r.findings.iter().any(|f| f.contains("not the converse of a function")));
    }

    #[test]
    fn missing_table_is_an_input_error() {
        let mut d = powerset_data(1);
        d.arrows.pop();
        assert!(matches!(
            check_relational_hor_conditions(&d),
            Err(Error::Invalid { .. })
        ));
    }

    #[test]
    fn corrupted_order_breaks_naturality() {
        let h = mon_hor(2).unwrap();
        let a = crate::natural::probe_set(1);
        let leq = h.leq().at(&a).unwrap();
        let bad = leq.union(&Rel::full(leq.src(), leq.tgt())).unwrap();
        let h2 = Hor::new("mutant", h.models().clone(), h.leq().patched(&a, bad)).unwrap();
        let r = validate_hor(&h2, &Probes::up_to(2), None).unwrap();
        let nat = r.get("≤ natural").unwrap();
        assert!(!nat.holds);
        assert!(nat.witness.as_ref().unwrap().detail.as_ref().unwrap().contains("f = "));
    }

    #[test]
    fn empty_index() {
        let h = mon_hor(2).unwrap();
        let r = instantiate(&h, &crate::natural::probe_set(0)).unwrap();
        assert_eq!(r.traces().labels(), ["[]"]);
        assert!(r.exprs().labels().iter().all(|l| !l.contains('a')));
    }

    #[test]
    fn mon_is_functorial() {
        let r = hor_functoriality(&mon_hor(2).unwrap(), &Probes::up_to(2)).unwrap();
        assert!(r.all_hold(), "{r}");
    }

    #[test]
    fn hat_lift_of_membership() {
        let a = FiniteSet::new("A", ["a"]).unwrap();
        let r = membership_representation(&a, 4).unwrap();
        let l = hat_lift(&mon_hor(2).unwrap(), &r).unwrap();
        assert!(l.rep.is_validated(), "{}", l.report);
        assert!(l.rep.models().contains_labels("[a]", "{a}").unwrap());
        assert!(l.rep.models().contains_labels("[a]", "{a}⊗1").unwrap());
        assert!(!l.rep.models().contains_labels("[a]", "{}").unwrap());
        assert!(l.report.findings.iter().any(|f| f.starts_with("lift is")));
    }

    #[test]
    fn hat_search_finds_inexact_lift() {
        let s = hat_exactness_search(&mon_hor(2).unwrap(), 2, 2).unwrap();
        let c = s.found.expect("inexact lift");
        assert!(is_exact(&c.input).unwrap().holds);
        assert!(!is_exact(&c.lifted.rep).unwrap().holds);
    }

    #[test]
    fn preordered_set_rejects_non_preorders() {
        let a = crate::natural::probe_set(2);
        assert!(PreorderedSet::new(Rel::empty(&a, &a)).is_err());
        assert!(PreorderedSet::new(Rel::full(&a, &a)).is_ok());
    }
}
