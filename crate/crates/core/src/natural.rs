//! Set-indexed families of relations and functions, and their
//! classification: natural, left-/right-linear, linear.
//!
//! Laws quantified over all sets are certified over a [`Probes`] universe:
//! every probe carrier and every function (or relation) between two of
//! them. Reports state that universe in their scope.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::functor::{Bound, Carrier, Functor, FunctorKind, Node, Shape, Signature, TermCarrier};
use crate::gen;
use crate::rel::{FuncTable, Rel};
use crate::relcore::membership;
use crate::report::{CheckReport, LawCheck, Witness};
use crate::set::{FiniteSet, SetId};

type RelGen = dyn Fn(&FiniteSet) -> Result<Rel> + Send + Sync;
type FunGen = dyn Fn(&FiniteSet) -> Result<FuncTable> + Send + Sync;

/// `ρ : F ⇒ G`, one relation `F A → G A` per set `A`. Generated relations
/// are memoized per carrier.
#[derive(Clone)]
pub struct IndexedRelation {
    name: String,
    source: Functor,
    target: Functor,
    gen: Arc<RelGen>,
    memo: Arc<Mutex<HashMap<SetId, Rel>>>,
}

impl IndexedRelation {
    pub fn new(
        name: &str,
        source: Functor,
        target: Functor,
        gen: impl Fn(&FiniteSet) -> Result<Rel> + Send + Sync + 'static,
    ) -> Self {
        IndexedRelation {
            name: name.to_string(),
            source,
            target,
            gen: Arc::new(gen),
            memo: Default::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    /// `ρ_A`, checked to run `F A → G A`.
    pub fn at(&self, a: &FiniteSet) -> Result<Rel> {
        if let Some(r) = self.memo.lock().unwrap().get(&a.id()) {
            return Ok(r.clone());
        }
        let r = (self.gen)(a)?;
        let (fa, ga) = (self.source.apply_object(a)?, self.target.apply_object(a)?);
        if !r.src().same(&fa) || !r.tgt().same(&ga) {
            return Err(Error::mismatch(
                "indexed relation",
                format!("{}_{a}: {}", self.name, r.signature()),
                format!("{fa} -> {ga}"),
            ));
        }
        self.memo.lock().unwrap().insert(a.id(), r.clone());
        Ok(r)
    }

    /// `ρ˘ : G ⇒ F`.
    pub fn converse(&self) -> IndexedRelation {
        let me = self.clone();
        IndexedRelation::new(
            &format!("{}˘", self.name),
            self.target.clone(),
            self.source.clone(),
            move |a| Ok(me.at(a)?.converse()),
        )
    }

    /// `ρ;σ : F ⇒ H` for `σ : G ⇒ H`.
    pub fn then(&self, other: &IndexedRelation) -> IndexedRelation {
        let (l, r) = (self.clone(), other.clone());
        IndexedRelation::new(
            &format!("{};{}", self.name, other.name),
            self.source.clone(),
            other.target.clone(),
            move |a| l.at(a)?.compose(&r.at(a)?),
        )
    }

    /// A copy with `ρ_A` replaced by `replacement` at one carrier.
    pub fn patched(&self, a: &FiniteSet, replacement: Rel) -> IndexedRelation {
        let me = self.clone();
        let id = a.id();
        IndexedRelation::new(
            &format!("{}'", self.name),
            self.source.clone(),
            self.target.clone(),
            move |b| {
                if b.id() == id {
                    Ok(replacement.clone())
                } else {
                    me.at(b)
                }
            },
        )
    }
}

impl fmt::Debug for IndexedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} ⇒ {}", self.name, self.source, self.target)
    }
}

/// `φ : F ⇒ G`, one function `F A → G A` per set `A`.
#[derive(Clone)]
pub struct IndexedFunction {
    name: String,
    source: Functor,
    target: Functor,
    gen: Arc<FunGen>,
    memo: Arc<Mutex<HashMap<SetId, FuncTable>>>,
}

impl IndexedFunction {
    pub fn new(
        name: &str,
        source: Functor,
        target: Functor,
        gen: impl Fn(&FiniteSet) -> Result<FuncTable> + Send + Sync + 'static,
    ) -> Self {
        IndexedFunction {
            name: name.to_string(),
            source,
            target,
            gen: Arc::new(gen),
            memo: Default::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Functor {
        &self.source
    }

    pub fn target(&self) -> &Functor {
        &self.target
    }

    pub fn at(&self, a: &FiniteSet) -> Result<FuncTable> {
        if let Some(f) = self.memo.lock().unwrap().get(&a.id()) {
            return Ok(f.clone());
        }
        let f = (self.gen)(a)?;
        let (fa, ga) = (self.source.apply_object(a)?, self.target.apply_object(a)?);
        if !f.src().same(&fa) || !f.tgt().same(&ga) {
            return Err(Error::mismatch(
                "indexed function",
                format!("{}_{a}: {}", self.name, f.describe()),
                format!("{fa} -> {ga}"),
            ));
        }
        self.memo.lock().unwrap().insert(a.id(), f.clone());
        Ok(f)
    }

    /// `φ_*`.
    pub fn graphs(&self) -> IndexedRelation {
        let me = self.clone();
        IndexedRelation::new(
            &format!("{}_*", self.name),
            self.source.clone(),
            self.target.clone(),
            move |a| Ok(me.at(a)?.graph()),
        )
    }

    /// `φ^*`.
    pub fn cographs(&self) -> IndexedRelation {
        let me = self.clone();
        IndexedRelation::new(
            &format!("{}^*", self.name),
            self.target.clone(),
            self.source.clone(),
            move |a| Ok(me.at(a)?.cograph()),
        )
    }
}

impl fmt::Debug for IndexedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} → {}", self.name, self.source, self.target)
    }
}

/// Probe carriers of sizes `min..=max` with labels `a, b, c, ...`. Probe
/// sets are shared process-wide so functor images stay cached.
#[derive(Clone, Debug)]
pub struct Probes {
    sets: Vec<FiniteSet>,
}

const PROBE_BUDGET: u128 = 1 << 20;

pub(crate) fn probe_set(n: usize) -> FiniteSet {
    static SETS: OnceLock<Mutex<HashMap<usize, FiniteSet>>> = OnceLock::new();
    let mut map = SETS.get_or_init(Default::default).lock().unwrap();
    map.entry(n)
        .or_insert_with(|| {
            let labels = (0..n).map(|i| {
                if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{i}")
                }
            });
            FiniteSet::new(&format!("S{n}"), labels).expect("distinct labels")
        })
        .clone()
}

impl Probes {
    /// Sizes `0..=max`.
    pub fn up_to(max: usize) -> Self {
        Self::sizes(0, max)
    }

    /// User-supplied probe carriers.
    pub fn from_sets(sets: Vec<FiniteSet>) -> Self {
        Probes { sets }
    }

    pub fn sizes(min: usize, max: usize) -> Self {
        Probes {
            sets: (min..=max).map(probe_set).collect(),
        }
    }

    pub fn sets(&self) -> &[FiniteSet] {
        &self.sets
    }

    pub fn max_size(&self) -> usize {
        self.sets.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Every function between two probe sets.
    pub fn functions(&self) -> Result<Vec<FuncTable>> {
        let mut out = Vec::new();
        for a in &self.sets {
            for b in &self.sets {
                out.extend(gen::all_functions(a, b, PROBE_BUDGET)?);
            }
        }
        Ok(out)
    }

    /// Every relation between two probe sets.
    pub fn relations(&self) -> Result<Vec<Rel>> {
        let mut out = Vec::new();
        for a in &self.sets {
            for b in &self.sets {
                out.extend(gen::all_relations(a, b, PROBE_BUDGET)?);
            }
        }
        Ok(out)
    }

    pub fn scope(&self) -> String {
        let sizes: Vec<String> = self.sets.iter().map(|s| s.len().to_string()).collect();
        let nf: u128 = self
            .sets
            .iter()
            .flat_map(|a| self.sets.iter().map(move |b| gen::function_count(a.len(), b.len())))
            .sum();
        let nr: u128 = self
            .sets
            .iter()
            .flat_map(|a| self.sets.iter().map(move |b| gen::relation_count(a.len(), b.len())))
            .sum();
        format!(
            "probe sets of sizes {{{}}}: {nf} functions, {nr} relations",
            sizes.join(",")
        )
    }
}

fn fn_detail(f: &FuncTable) -> String {
    format!("f = {}", f.describe())
}

fn rel_detail(x: &Rel) -> String {
    format!("x = {x:?}")
}

/// Accumulates per-probe verdicts into one law: first witness and the
/// number of failing probes.
pub(crate) struct Tally {
    law: String,
    first: Option<Witness>,
    failures: usize,
    checked: usize,
}

impl Tally {
    pub(crate) fn new(law: &str) -> Self {
        Tally {
            law: law.into(),
            first: None,
            failures: 0,
            checked: 0,
        }
    }

    pub(crate) fn record(&mut self, check: LawCheck, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !check.holds {
            self.failures += 1;
            if self.first.is_none() {
                let d = detail();
                self.first = Some(match check.witness {
                    Some(w) => {
                        let extra = w.detail.map(|x| format!("{x}, ")).unwrap_or_default();
                        Witness::pair(w.left, w.right).with_detail(format!("{extra}{d}"))
                    }
                    None => Witness::pair("", "").with_detail(d),
                });
            }
        }
    }

    pub(crate) fn finish(self, report: &mut CheckReport) -> bool {
        let holds = self.failures == 0;
        if !holds {
            report.finding(format!(
                "{}: {} of {} probes fail",
                self.law, self.failures, self.checked
            ));
        }
        report.push(LawCheck {
            law: self.law,
            holds,
            witness: self.first,
        });
        holds
    }
}

/// `F f^*;ρ_A ⊑ ρ_B;G f^*` for every probe function `f : A → B`.
pub fn is_natural_relation(rho: &IndexedRelation, probes: &Probes) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut t = Tally::new("natural");
    for f in probes.functions()? {
        let ff = rho.source().apply_arrow(&f)?.cograph();
        let gf = rho.target().apply_arrow(&f)?.cograph();
        let lhs = ff.compose(&rho.at(f.src())?)?;
        let rhs = rho.at(f.tgt())?.compose(&gf)?;
        t.record(LawCheck::inclusion("natural", &lhs, lhs.is_included(&rhs)?), || {
            fn_detail(&f)
        });
    }
    t.finish(&mut report);
    report.scope(probes.scope());
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Equalities against lifted function graphs.
    Functions,
    /// Inclusions against lifted probe relations.
    Relations,
}

pub const LAW_LEFT: &str = "left-linear";
pub const LAW_RIGHT: &str = "right-linear";
pub const LAW_LINEAR: &str = "linear";

/// Left: `F f_*;ρ_B = ρ_A;G f_*` (functions) or `F̄x;ρ_B ⊑ ρ_A;Ḡx`
/// (relations). Right: `F f^*;ρ_A = ρ_B;G f^*` or `ρ_A;Ḡx ⊑ F̄x;ρ_B`.
pub fn linearity_check(rho: &IndexedRelation, side: Side, mode: Mode, probes: &Probes) -> Result<CheckReport> {
    let (f_, g_) = (rho.source(), rho.target());
    let mut report = CheckReport::new();
    let want_left = side != Side::Right;
    let want_right = side != Side::Left;
    let mut left = Tally::new(LAW_LEFT);
    let mut right = Tally::new(LAW_RIGHT);
    match mode {
        Mode::Functions => {
            for f in probes.functions()? {
                let (ra, rb) = (rho.at(f.src())?, rho.at(f.tgt())?);
                let ff = f_.apply_arrow(&f)?;
                let gf = g_.apply_arrow(&f)?;
                if want_left {
                    let lhs = ff.graph().compose(&rb)?;
                    let rhs = ra.compose(&gf.graph())?;
                    left.record(LawCheck::equality(LAW_LEFT, &lhs, &rhs), || fn_detail(&f));
                }
                if want_right {
                    let lhs = ff.cograph().compose(&ra)?;
                    let rhs = rb.compose(&gf.cograph())?;
                    right.record(LawCheck::equality(LAW_RIGHT, &lhs, &rhs), || fn_detail(&f));
                }
            }
        }
        Mode::Relations => {
            for x in probes.relations()? {
                let (ra, rb) = (rho.at(x.src())?, rho.at(x.tgt())?);
                let fx = f_.lift(&x)?;
                let gx = g_.lift(&x)?;
                let fx_rb = fx.compose(&rb)?;
                let ra_gx = ra.compose(&gx)?;
                if want_left {
                    let inc = fx_rb.is_included(&ra_gx)?;
                    left.record(LawCheck::inclusion(LAW_LEFT, &fx_rb, inc), || rel_detail(&x));
                }
                if want_right {
                    let inc = ra_gx.is_included(&fx_rb)?;
                    right.record(LawCheck::inclusion(LAW_RIGHT, &ra_gx, inc), || rel_detail(&x));
                }
            }
        }
    }
    let l = !want_left || left.finish(&mut report);
    let r = !want_right || right.finish(&mut report);
    if side == Side::Both {
        report.push(LawCheck::verdict(LAW_LINEAR, l && r));
    }
    let mode_text = match mode {
        Mode::Functions => "against lifted probe functions",
        Mode::Relations => "against lifted probe relations",
    };
    report.scope(format!("{}, {mode_text}", probes.scope()));
    Ok(report)
}

/// Runs both modes on both sides and checks that the function-based and
/// relation-based characterizations give the same verdicts.
pub fn linearity_modes_agree(rho: &IndexedRelation, probes: &Probes) -> Result<CheckReport> {
    let f = linearity_check(rho, Side::Both, Mode::Functions, probes)?;
    let r = linearity_check(rho, Side::Both, Mode::Relations, probes)?;
    let mut report = CheckReport::new();
    for law in [LAW_LEFT, LAW_RIGHT] {
        let (a, b) = (f.holds(law), r.holds(law));
        let check = if a == b {
            LawCheck::pass(format!("{law}: modes agree"))
        } else {
            LawCheck::fail(
                format!("{law}: modes agree"),
                Some(Witness::pair(format!("functions: {a}"), format!("relations: {b}"))),
            )
        };
        report.push(check);
    }
    report.absorb("functions mode ", f);
    report.absorb("relations mode ", r);
    Ok(report)
}

/// `G f ∘ φ_A = φ_B ∘ F f` for every probe function.
pub fn is_natural_transformation(phi: &IndexedFunction, probes: &Probes) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut t = Tally::new("natural");
    for f in probes.functions()? {
        let (pa, pb) = (phi.at(f.src())?, phi.at(f.tgt())?);
        let ff = phi.source().apply_arrow(&f)?;
        let gf = phi.target().apply_arrow(&f)?;
        let mut check = LawCheck::pass("natural");
        for i in 0..ff.src().len() {
            let (l, r) = (gf.apply(pa.apply(i)), pb.apply(ff.apply(i)));
            if l != r {
                check = LawCheck::fail(
                    "natural",
                    Some(
                        Witness::pair(ff.src().label(i), gf.tgt().label(l))
                            .with_detail(format!("other side gives {}", gf.tgt().label(r))),
                    ),
                );
                break;
            }
        }
        t.record(check, || fn_detail(&f));
    }
    t.finish(&mut report);
    report.scope(probes.scope());
    Ok(report)
}

/// Naturality plus linearity of `φ_*` in relations mode.
pub fn is_linear_transformation(phi: &IndexedFunction, probes: &Probes) -> Result<CheckReport> {
    let mut report = is_natural_transformation(phi, probes)?;
    report.absorb("", linearity_check(&phi.graphs(), Side::Both, Mode::Relations, probes)?);
    Ok(report)
}

/// Functor laws, graph agreement and the lifting laws on probes.
/// Composition of liftings is checked on relations between sets of size
/// at most `compose_max`.
pub fn functor_law_report(f: &Functor, probes: &Probes, compose_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    let mut ids = Tally::new("preserves identities");
    for a in probes.sets() {
        let fid = f.apply_arrow(&FuncTable::identity(a))?;
        ids.record(
            LawCheck::verdict("", fid == FuncTable::identity(&f.apply_object(a)?)),
            || format!("at {a}"),
        );
    }
    ids.finish(&mut report);

    let funcs = probes.functions()?;
    let mut comp = Tally::new("preserves composition");
    let mut graphs = Tally::new("lifting agrees on graphs");
    for g1 in &funcs {
        let fg1 = f.apply_arrow(g1)?;
        graphs.record(LawCheck::equality("", &f.lift(&g1.graph())?, &fg1.graph()), || {
            fn_detail(g1)
        });
        for g2 in funcs.iter().filter(|g| g.src().same(g1.tgt())) {
            let lhs = f.apply_arrow(&g1.then(g2)?)?;
            let rhs = fg1.then(&f.apply_arrow(g2)?)?;
            comp.record(LawCheck::verdict("", lhs == rhs), || {
                format!("{} then {}", g1.describe(), g2.describe())
            });
        }
    }
    comp.finish(&mut report);
    graphs.finish(&mut report);

    let small = Probes {
        sets: probes
            .sets()
            .iter()
            .filter(|s| s.len() <= compose_max)
            .cloned()
            .collect(),
    };
    let rels = small.relations()?;
    let mut mono = Tally::new("lifting monotone");
    let mut lcomp = Tally::new("lifting preserves composition");
    for x in &rels {
        let fx = f.lift(x)?;
        for (a, b) in (0..x.src().len()).flat_map(|a| (0..x.tgt().len()).map(move |b| (a, b))) {
            if !x.contains(a, b) {
                let y = x.toggled(a, b);
                mono.record(LawCheck::inclusion("", &fx, fx.is_included(&f.lift(&y)?)?), || {
                    rel_detail(x)
                });
            }
        }
        for y in rels.iter().filter(|y| y.src().same(x.tgt())) {
            let lhs = f.lift(&x.compose(y)?)?;
            let rhs = fx.compose(&f.lift(y)?)?;
            lcomp.record(LawCheck::equality("", &lhs, &rhs), || {
                format!("{}, y = {y:?}", rel_detail(x))
            });
        }
    }
    mono.finish(&mut report);
    let composes = lcomp.finish(&mut report);
    if matches!(f.kind(), FunctorKind::Powerset { .. }) {
        report.finding(format!(
            "Egli–Milner lifting {} composition on relations between sets of size ≤ {compose_max}",
            if composes { "preserves" } else { "does not preserve" }
        ));
    }
    report.scope(probes.scope());
    Ok(report)
}

fn term_parts(f: &Functor) -> Result<(Signature, Bound)> {
    match f.kind() {
        FunctorKind::Term { sig, bound } => Ok((sig.clone(), *bound)),
        _ => Err(Error::Invalid {
            what: "functor",
            detail: format!("{f} is not a term functor"),
        }),
    }
}

fn term_carrier(c: &Carrier) -> &TermCarrier {
    match &c.shape {
        Shape::Term(t) => t,
        _ => unreachable!("term functor"),
    }
}

fn list_pos(c: &Carrier, l: &[usize]) -> usize {
    match &c.shape {
        Shape::List { pos, .. } => pos[l],
        _ => unreachable!("list functor"),
    }
}

/// `∈ : Id ⇒ 𝒫`.
pub fn membership_family(cap: usize) -> IndexedRelation {
    IndexedRelation::new("∈", Functor::identity(), Functor::powerset(cap), move |a| {
        membership(a, cap)
    })
}

/// `η_P : Id ⇒ 𝒫`, `a ↦ {a}`.
pub fn eta_p(cap: usize) -> IndexedFunction {
    let p = Functor::powerset(cap);
    let pp = p.clone();
    IndexedFunction::new("η_P", Functor::identity(), p, move |a| {
        let c = pp.carrier(a)?;
        let Shape::Powerset { pos, .. } = &c.shape else {
            unreachable!()
        };
        FuncTable::new(a, &c.set, (0..a.len()).map(|i| pos[&(1u64 << i)]).collect())
    })
}

/// `μ_P : 𝒫∘𝒫 ⇒ 𝒫`, union. `outer_cap` bounds `|𝒫 A|`.
pub fn mu_p(cap: usize, outer_cap: usize) -> IndexedFunction {
    let inner = Functor::powerset(cap);
    let outer = Functor::powerset(outer_cap);
    let pp = Functor::compose(outer.clone(), inner.clone());
    IndexedFunction::new("μ_P", pp, inner.clone(), move |a| {
        let ci = inner.carrier(a)?;
        let co = outer.carrier(&ci.set)?;
        let (Shape::Powerset { masks: mi, pos }, Shape::Powerset { masks: mo, .. }) = (&ci.shape, &co.shape) else {
            unreachable!()
        };
        let table = mo
            .iter()
            .map(|&outer_mask| {
                let union = (0..mi.len())
                    .filter(|&j| outer_mask >> j & 1 == 1)
                    .fold(0u64, |u, j| u | mi[j]);
                pos[&union]
            })
            .collect();
        FuncTable::new(&co.set, &ci.set, table)
    })
}

/// Longest variable list of a term within `bound`.
pub fn max_leaves(sig: &Signature, bound: Bound) -> usize {
    match bound {
        Bound::Depth(d) => sig.max_arity().max(1).pow(d.saturating_sub(1) as u32),
        Bound::Size(s) => s,
    }
}

/// `ℓ : T ⇒ List`, the left-to-right variable list.
pub fn var_list_family(term: &Functor) -> Result<IndexedFunction> {
    let (sig, bound) = term_parts(term)?;
    let list = Functor::list(max_leaves(&sig, bound));
    let (t, l) = (term.clone(), list.clone());
    Ok(IndexedFunction::new("ℓ", term.clone(), list, move |a| {
        let ct = t.carrier(a)?;
        let cl = l.carrier(a)?;
        let tc = term_carrier(&ct);
        FuncTable::new(&ct.set, &cl.set, tc.vars.iter().map(|v| list_pos(&cl, v)).collect())
    }))
}

/// `≈ = ℓ_*;ℓ^*`: same variable list.
pub fn approx_family(term: &Functor) -> Result<IndexedRelation> {
    let l = var_list_family(term)?;
    Ok(l.graphs().then(&l.cographs()))
}

/// `η_T : Id ⇒ T`, `a ↦ a` as a variable.
pub fn eta_t(term: &Functor) -> Result<IndexedFunction> {
    term_parts(term)?;
    let t = term.clone();
    Ok(IndexedFunction::new(
        "η_T",
        Functor::identity(),
        term.clone(),
        move |a| {
            let c = t.carrier(a)?;
            let tc = term_carrier(&c);
            FuncTable::new(a, &c.set, (0..a.len()).map(|i| tc.pos[&Node::Var(i)]).collect())
        },
    ))
}

/// `μ_T : T_outer ∘ T_inner ⇒ T_result`, substitution of terms for
/// variables, for depth bounds (`result = outer + inner - 1`).
pub fn mu_t(sig: &Signature, outer_depth: usize, inner_depth: usize) -> IndexedFunction {
    let inner = Functor::term(sig.clone(), Bound::Depth(inner_depth));
    let outer = Functor::term(sig.clone(), Bound::Depth(outer_depth));
    let result = Functor::term(sig.clone(), Bound::Depth(outer_depth + inner_depth - 1));
    let source = Functor::compose(outer.clone(), inner.clone());
    let res = result.clone();
    IndexedFunction::new("μ_T", source, result, move |a| {
        let ci = inner.carrier(a)?;
        let co = outer.carrier(&ci.set)?;
        let cr = res.carrier(a)?;
        let (ti, to, tr) = (term_carrier(&ci), term_carrier(&co), term_carrier(&cr));
        // inner terms embed into the result carrier
        let mut embed = Vec::with_capacity(ti.nodes.len());
        for n in &ti.nodes {
            let image = match n {
                Node::Var(v) => Node::Var(*v),
                Node::Op(o, cs) => Node::Op(*o, cs.iter().map(|&c| embed[c]).collect()),
            };
            embed.push(tr.pos[&image]);
        }
        let mut out: Vec<usize> = Vec::with_capacity(to.nodes.len());
        for n in &to.nodes {
            let idx = match n {
                Node::Var(v) => embed[*v],
                Node::Op(o, cs) => tr.pos[&Node::Op(*o, cs.iter().map(|&c| out[c]).collect())],
            };
            out.push(idx);
        }
        FuncTable::new(&co.set, &cr.set, out)
    })
}

/// `head : List[1..k] ⇒ Id`.
pub fn head_family(k: usize) -> IndexedFunction {
    let l = Functor::list_range(1, k);
    let lc = l.clone();
    IndexedFunction::new("head", l, Functor::identity(), move |a| {
        let c = lc.carrier(a)?;
        let Shape::List { items, .. } = &c.shape else {
            unreachable!()
        };
        FuncTable::new(&c.set, a, items.iter().map(|l| l[0]).collect())
    })
}

/// Uniform base relations available on every set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseOrder {
    Identity,
    Full,
}

/// Pointwise list order over a uniform base order: same length, related
/// letter by letter.
pub fn list_pointwise(max_len: usize, base: BaseOrder) -> IndexedRelation {
    let l = Functor::list(max_len);
    let lc = l.clone();
    IndexedRelation::new("pointwise", l.clone(), l, move |a| {
        let b = match base {
            BaseOrder::Identity => Rel::identity(a),
            BaseOrder::Full => Rel::full(a, a),
        };
        lc.lift(&b)
    })
}

/// Prefix order on bounded lists.
pub fn list_prefix(max_len: usize) -> IndexedRelation {
    let l = Functor::list(max_len);
    let lc = l.clone();
    IndexedRelation::new("prefix", l.clone(), l, move |a| {
        let c = lc.carrier(a)?;
        let Shape::List { items, .. } = &c.shape else {
            unreachable!()
        };
        Ok(Rel::from_fn(&c.set, &c.set, |i, j| items[j].starts_with(&items[i])))
    })
}

/// `1 : F ⇒ F`.
pub fn identity_family(f: &Functor) -> IndexedRelation {
    let fc = f.clone();
    IndexedRelation::new("1", f.clone(), f.clone(), move |a| {
        Ok(Rel::identity(&fc.apply_object(a)?))
    })
}

/// An unstructured family: `ρ_A` drawn at random from `(seed, |A|)`.
pub fn random_family(f: &Functor, g: &Functor, seed: u64, density: f64) -> IndexedRelation {
    let (fc, gc) = (f.clone(), g.clone());
    IndexedRelation::new("random", f.clone(), g.clone(), move |a| {
        let mut rng = gen::rng(seed, a.len() as u64);
        Ok(gen::random_rel(
            &mut rng,
            &fc.apply_object(a)?,
            &gc.apply_object(a)?,
            density,
        ))
    })
}

/// A linearity failure of a specific family.
#[derive(Clone, Debug)]
pub struct LinearityWitness {
    pub family: String,
    pub law: &'static str,
    pub x: Rel,
    pub pair: Witness,
}

impl fmt::Display for LinearityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails {} at x = {:?}: {}",
            self.family, self.law, self.x, self.pair
        )
    }
}

#[derive(Clone, Debug)]
pub struct MuPSearch {
    pub witness: Option<LinearityWitness>,
    /// Relations examined for `μ_P` before stopping.
    pub examined: usize,
    pub report: CheckReport,
}

/// First relation `x : A → B` (in enumeration order) at which the family
/// fails a linearity inclusion.
fn first_linearity_failure(
    rho: &IndexedRelation,
    a: &FiniteSet,
    b: &FiniteSet,
    examined: &mut usize,
) -> Result<Option<LinearityWitness>> {
    let (ra, rb) = (rho.at(a)?, rho.at(b)?);
    for x in gen::all_relations(a, b, PROBE_BUDGET)? {
        *examined += 1;
        let fx_rb = rho.source().lift(&x)?.compose(&rb)?;
        let ra_gx = ra.compose(&rho.target().lift(&x)?)?;
        for (law, lhs, rhs) in [(LAW_LEFT, &fx_rb, &ra_gx), (LAW_RIGHT, &ra_gx, &fx_rb)] {
            if let Some(p) = lhs.is_included(rhs)?.witness {
                return Ok(Some(LinearityWitness {
                    family: rho.name().to_string(),
                    law,
                    x,
                    pair: Witness::of(lhs, p),
                }));
            }
        }
    }
    Ok(None)
}

/// Searches for a linearity failure of `μ_P : 𝒫𝒫 ⇒ 𝒫` under the Egli–Milner
/// lifting: all relations between 2-element sets first, then every pair of
/// sizes up to `max_size`. `η_P` is searched alongside as a control.
pub fn mu_p_search(max_size: usize) -> Result<MuPSearch> {
    if max_size < 2 {
        return Err(Error::Precondition {
            name: "probe sizes ≥ 2",
            detail: format!("max probe size is {max_size}"),
        });
    }
    let outer_cap = 1usize << max_size;
    let mu = mu_p(max_size, outer_cap).graphs();
    let mut order: Vec<(usize, usize)> = vec![(2, 2)];
    for m in 0..=max_size {
        for a in 0..=m {
            for b in 0..=m {
                if a.max(b) == m && (a, b) != (2, 2) {
                    order.push((a, b));
                }
            }
        }
    }
    order[1..].sort_by_key(|&(a, b)| (a.max(b) < 2, a.max(b), a, b));
    let mut report = CheckReport::new();
    let mut examined = 0usize;
    let mut witness = None;
    for &(a, b) in &order {
        if let Some(w) = first_linearity_failure(&mu, &probe_set(a), &probe_set(b), &mut examined)? {
            witness = Some(w);
            break;
        }
    }
    match &witness {
        Some(w) => {
            report.push(LawCheck::fail(
                format!("μ_P {}", w.law),
                Some(w.pair.clone().with_detail(rel_detail(&w.x))),
            ));
        }
        None => {
            report.push(LawCheck::pass(format!("μ_P {LAW_LEFT}")));
            report.push(LawCheck::pass(format!("μ_P {LAW_RIGHT}")));
            report.finding(format!(
                "μ_P satisfies both linearity inclusions for all {examined} relations between sets of size ≤ {max_size}"
            ));
        }
    }
    let eta = eta_p(max_size).graphs();
    let mut eta_examined = 0usize;
    let mut eta_w = None;
    for &(a, b) in &order {
        if let Some(w) = first_linearity_failure(&eta, &probe_set(a), &probe_set(b), &mut eta_examined)? {
            eta_w = Some(w);
            break;
        }
    }
    if let Some(w) = eta_w {
        report.finding(format!("control: {w}"));
    }
    report.scope(format!(
        "relations between probe sets, sizes in order {:?}; powerset caps {max_size} and {outer_cap}; Egli–Milner lifting",
        order
    ));
    Ok(MuPSearch {
        witness,
        examined,
        report,
    })
}

/// Like [`mu_p_search`], but exhausting the bound without a witness is an
/// error.
pub fn mu_p_counterexample_search(max_size: usize) -> Result<LinearityWitness> {
    let s = mu_p_search(max_size)?;
    s.witness.ok_or_else(|| {
        Error::TheoremInconsistency(format!(
            "no linearity counterexample for μ_P among {} relations up to size {max_size}",
            s.examined
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_universe_sizes() {
        let p = Probes::up_to(3);
        assert_eq!(p.functions().unwrap().len(), 60);
        assert_eq!(p.relations().unwrap().len(), 689);
        assert!(p.scope().contains("60 functions, 689 relations"));
    }

    #[test]
    fn membership_is_right_not_left_linear() {
        let p = Probes::up_to(2);
        let rho = membership_family(4);
        for mode in [Mode::Functions, Mode::Relations] {
            let r = linearity_check(&rho, Side::Both, mode, &p).unwrap();
            assert!(r.holds(LAW_RIGHT), "{mode:?}\n{r}");
            assert!(!r.holds(LAW_LEFT), "{mode:?}");
            assert!(r.get(LAW_LEFT).unwrap().witness.is_some());
        }
    }

    #[test]
    fn modes_agree_on_builtin_families() {
        let p = Probes::up_to(2);
        let t = Functor::term(Signature::monoid(), Bound::Depth(2));
        for rho in [
            membership_family(4),
            approx_family(&t).unwrap(),
            list_prefix(2),
            random_family(&Functor::list(1), &Functor::list(1), 3, 0.4),
        ] {
            let r = linearity_modes_agree(&rho, &p).unwrap();
            assert!(
                r.holds("left-linear: modes agree") && r.holds("right-linear: modes agree"),
                "{rho:?}\n{r}"
            );
        }
    }

    #[test]
    fn approx_is_linear() {
        let t = Functor::term(Signature::monoid(), Bound::Depth(2));
        let r = linearity_check(
            &approx_family(&t).unwrap(),
            Side::Both,
            Mode::Relations,
            &Probes::up_to(2),
        )
        .unwrap();
        assert!(r.holds(LAW_LINEAR), "{r}");
    }

    #[test]
    fn approx_relates_equal_var_lists() {
        let t = Functor::term(Signature::monoid(), Bound::Depth(3));
        let a = probe_set(2);
        let rel = approx_family(&t).unwrap().at(&a).unwrap();
        let c = t.carrier(&a).unwrap();
        let tc = term_carrier(&c);
        for i in 0..tc.nodes.len() {
            for j in 0..tc.nodes.len() {
                assert_eq!(rel.contains(i, j), tc.vars[i] == tc.vars[j]);
            }
        }
    }

    #[test]
    fn random_family_is_not_natural() {
        let l = Functor::list(1);
        let r = is_natural_relation(&random_family(&l, &l, 5, 0.3), &Probes::up_to(2)).unwrap();
        assert!(!r.all_hold());
        assert!(r.get("natural").unwrap().witness.as_ref().unwrap().detail.is_some());
    }

    #[test]
    fn list_orders_are_natural() {
        let p = Probes::up_to(2);
        for rho in [
            list_pointwise(2, BaseOrder::Identity),
            list_pointwise(2, BaseOrder::Full),
            list_prefix(2),
            identity_family(&Functor::list(2)),
        ] {
            assert!(is_natural_relation(&rho, &p).unwrap().all_hold(), "{rho:?}");
        }
    }

    #[test]
    fn head_is_natural() {
        assert!(is_natural_transformation(&head_family(2), &Probes::up_to(2))
            .unwrap()
            .all_hold());
    }

    #[test]
    fn eta_and_mu_p_are_natural() {
        let p = Probes::up_to(2);
        assert!(is_natural_transformation(&eta_p(2), &p).unwrap().all_hold());
        assert!(is_natural_transformation(&mu_p(2, 4), &p).unwrap().all_hold());
    }

    #[test]
    fn term_monad_is_linear() {
        let p = Probes::up_to(2);
        let sig = Signature::monoid();
        let t = Functor::term(sig.clone(), Bound::Depth(2));
        assert!(is_linear_transformation(&eta_t(&t).unwrap(), &p).unwrap().all_hold());
        let mu = is_linear_transformation(&mu_t(&sig, 2, 2), &p).unwrap();
        assert!(mu.all_hold(), "{mu}");
        assert!(is_linear_transformation(&var_list_family(&t).unwrap(), &p)
            .unwrap()
            .all_hold());
    }

    #[test]
    fn functor_laws_on_small_probes() {
        let p = Probes::up_to(2);
        for f in [
            Functor::identity(),
            Functor::powerset(4),
            Functor::list(2),
            Functor::term(Signature::monoid(), Bound::Depth(2)),
        ] {
            let r = functor_law_report(&f, &p, 2).unwrap();
            assert!(r.all_hold(), "{f}\n{r}");
        }
    }

    #[test]
    fn mismatched_generator_is_rejected() {
        let rho = IndexedRelation::new("bad", Functor::identity(), Functor::list(1), |a| Ok(Rel::identity(a)));
        assert!(matches!(rho.at(&probe_set(1)), Err(Error::CarrierMismatch { .. })));
    }
}
