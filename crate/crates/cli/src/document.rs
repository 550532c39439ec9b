//! Parsing, name resolution and printing of documents.

use std::collections::HashMap;

use reprkit::functor::{Bound, Functor, Signature};
use reprkit::hor::ka::{ka_hor, shipped_axioms, KaConfig, LeqMode};
use reprkit::hor::mon::mon_hor;
use reprkit::hor::{Hor, PreorderedSet};
use reprkit::morphism::Morphism;
use reprkit::natural::{self, BaseOrder, IndexedFunction, IndexedRelation, Probes};
use reprkit::reduction::Reduction;
use reprkit::repr::Representation;
use reprkit::{FiniteSet, FuncTable, Rel};

use crate::error::CliError;
use crate::syntax::{lex, print_decls, Arg, Body, Call, Decl, Pos, Tok, Value};

/// A configured higher-order representation.
#[derive(Clone, Debug, PartialEq)]
pub enum HorSpec {
    Mon { depth: usize },
    Ka(KaConfig),
}

impl HorSpec {
    pub fn build(&self) -> reprkit::Result<Hor> {
        match self {
            HorSpec::Mon { depth } => mon_hor(*depth),
            HorSpec::Ka(cfg) => ka_hor(cfg),
        }
    }
}

/// A family of relations or functions indexed by sets. Powerset caps left
/// open are filled from the command-line flag.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    Membership { cap: Option<usize> },
    EtaP { cap: Option<usize> },
    MuP { cap: Option<usize>, outer: Option<usize> },
    VarList { depth: usize },
    Approx { depth: usize },
    EtaT { depth: usize },
    MuT { outer: usize, inner: usize },
    Head { k: usize },
    ListPointwise { len: usize, base: BaseOrder },
    ListPrefix { len: usize },
    Graph(Box<FamilySpec>),
    Cograph(Box<FamilySpec>),
    Converse(Box<FamilySpec>),
    Then(Box<FamilySpec>, Box<FamilySpec>),
}

#[derive(Clone, Debug)]
pub enum Family {
    Relation(IndexedRelation),
    Function(IndexedFunction),
}

impl Family {
    pub fn as_relation(&self) -> IndexedRelation {
        match self {
            Family::Relation(r) => r.clone(),
            Family::Function(f) => f.graphs(),
        }
    }

    pub fn functors(&self) -> (&Functor, &Functor) {
        match self {
            Family::Relation(r) => (r.source(), r.target()),
            Family::Function(f) => (f.source(), f.target()),
        }
    }
}

fn mon_term(depth: usize) -> Functor {
    Functor::term(Signature::monoid(), Bound::Depth(depth)).named(&format!("Mon{depth}"))
}

/// Largest powerset cap whose outer default `2^cap` stays addressable.
const MAX_DEFAULT_OUTER: usize = 6;

impl FamilySpec {
    pub fn build(&self, powerset_cap: usize) -> reprkit::Result<Family> {
        let cap = |c: &Option<usize>| c.unwrap_or(powerset_cap);
        Ok(match self {
            FamilySpec::Membership { cap: c } => Family::Relation(natural::membership_family(cap(c))),
            FamilySpec::EtaP { cap: c } => Family::Function(natural::eta_p(cap(c))),
            FamilySpec::MuP { cap: c, outer } => {
                let inner = cap(c);
                let outer = outer.unwrap_or(1 << inner.min(MAX_DEFAULT_OUTER));
                Family::Function(natural::mu_p(inner, outer))
            }
            FamilySpec::VarList { depth } => Family::Function(natural::var_list_family(&mon_term(*depth))?),
            FamilySpec::Approx { depth } => Family::Relation(natural::approx_family(&mon_term(*depth))?),
            FamilySpec::EtaT { depth } => Family::Function(natural::eta_t(&mon_term(*depth))?),
            FamilySpec::MuT { outer, inner } => Family::Function(natural::mu_t(&Signature::monoid(), *outer, *inner)),
            FamilySpec::Head { k } => Family::Function(natural::head_family(*k)),
            FamilySpec::ListPointwise { len, base } => Family::Relation(natural::list_pointwise(*len, *base)),
            FamilySpec::ListPrefix { len } => Family::Relation(natural::list_prefix(*len)),
            FamilySpec::Graph(f) => Family::Relation(f.build(powerset_cap)?.as_relation()),
            FamilySpec::Cograph(f) => Family::Relation(f.build(powerset_cap)?.as_relation().converse()),
            FamilySpec::Converse(f) => Family::Relation(f.build(powerset_cap)?.as_relation().converse()),
            FamilySpec::Then(f, g) => {
                let (f, g) = (
                    f.build(powerset_cap)?.as_relation(),
                    g.build(powerset_cap)?.as_relation(),
                );
                if !f.target().same(g.source()) {
                    return Err(reprkit::Error::CarrierMismatch {
                        op: "then",
                        left: format!("{f:?}"),
                        right: format!("{g:?}"),
                    });
                }
                Family::Relation(f.then(&g))
            }
        })
    }
}

#[derive(Clone, Debug)]
pub enum Object {
    Set(FiniteSet),
    Relation(Rel),
    Function(FuncTable),
    Rep(Representation),
    Morphism { src: String, tgt: String, m: Morphism },
    Reduction { src: String, tgt: String, r: Reduction },
    Closure { src: String, tgt: String, down: FuncTable },
    Preorder(PreorderedSet),
    Hor { spec: HorSpec, hor: Box<Hor> },
    Family(FamilySpec),
    Probes(Probes),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Set(_) => "set",
            Object::Relation(_) => "relation",
            Object::Function(_) => "function",
            Object::Rep(_) => "rep",
            Object::Morphism { .. } => "morphism",
            Object::Reduction { .. } => "reduction",
            Object::Closure { .. } => "closure",
            Object::Preorder(_) => "preorder",
            Object::Hor { .. } => "hor",
            Object::Family(_) => "family",
            Object::Probes(_) => "probes",
        }
    }
}

/// A parsed, name-checked document. Equality compares declarations only.
#[derive(Clone, Debug, Default)]
pub struct Document {
    decls: Vec<Decl>,
    positions: Vec<Pos>,
    objects: Vec<Object>,
    index: HashMap<String, usize>,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl Document {
    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Object> {
        self.index.get(name).map(|&i| &self.objects[i])
    }

    pub fn position(&self, name: &str) -> Option<Pos> {
        self.index.get(name).map(|&i| self.positions[i])
    }

    /// Declared objects of one kind, in declaration order.
    pub fn of_kind(&self, kind: &str) -> Vec<(&str, &Object)> {
        self.decls
            .iter()
            .zip(&self.objects)
            .filter(|(_, o)| o.kind() == kind)
            .map(|(d, o)| (d.name.as_str(), o))
            .collect()
    }

    pub fn print(&self) -> String {
        print_decls(&self.decls)
    }
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let toks = lex(text)?;
    let end = match toks.last() {
        Some((_, p)) => Pos {
            line: p.line,
            col: p.col + 1,
        },
        None => Pos { line: 1, col: 1 },
    };
    let mut p = Parser {
        toks,
        i: 0,
        end,
        doc: Document::default(),
    };
    while p.i < p.toks.len() {
        p.decl()?;
    }
    Ok(p.doc)
}

/// A declared name together with the object it resolves to.
type Named<T> = (String, T);

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    end: Pos,
    doc: Document,
}

fn found(t: Option<&(Tok, Pos)>) -> String {
    match t {
        Some((t, _)) => t.to_string(),
        None => "end of input".into(),
    }
}

impl Parser {
    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.1)
    }

    fn peek_punct(&self, c: char) -> bool {
        matches!(self.toks.get(self.i), Some((Tok::Punct(d), _)) if *d == c)
    }

    fn punct(&mut self, c: char) -> Result<Pos, CliError> {
        if self.peek_punct(c) {
            self.i += 1;
            Ok(self.toks[self.i - 1].1)
        } else {
            Err(CliError::syntax(
                self.pos(),
                format!("expected `{c}`, found {}", found(self.toks.get(self.i))),
            ))
        }
    }

    fn arrow(&mut self) -> Result<(), CliError> {
        match self.toks.get(self.i) {
            Some((Tok::Arrow, _)) => {
                self.i += 1;
                Ok(())
            }
            t => Err(CliError::syntax(
                self.pos(),
                format!("expected `->`, found {}", found(t)),
            )),
        }
    }

    fn word(&mut self) -> Result<(String, Pos), CliError> {
        match self.toks.get(self.i) {
            Some((Tok::Word(w), p)) => {
                self.i += 1;
                Ok((w.clone(), *p))
            }
            t => Err(CliError::syntax(
                self.pos(),
                format!("expected a word, found {}", found(t)),
            )),
        }
    }

    /// `{ item, item, ... }`.
    fn braced<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
        self.punct('{')?;
        let mut out = Vec::new();
        if self.peek_punct('}') {
            self.i += 1;
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.peek_punct(',') {
                self.i += 1;
            } else {
                self.punct('}')?;
                return Ok(out);
            }
        }
    }

    fn lookup(&self, name: &str, pos: Pos) -> Result<&Object, CliError> {
        self.doc.get(name).ok_or_else(|| CliError::Dangling {
            pos,
            name: name.to_string(),
        })
    }

    fn wrong_kind(name: &str, pos: Pos, got: &Object, want: &str) -> CliError {
        CliError::invalid(pos, format!("`{name}` is a {}, expected a {want}", got.kind()))
    }

    fn set_ref(&mut self) -> Result<(String, FiniteSet), CliError> {
        let (n, p) = self.word()?;
        match self.lookup(&n, p)? {
            Object::Set(s) => Ok((n, s.clone())),
            o => Err(Self::wrong_kind(&n, p, o, "set")),
        }
    }

    fn rel_ref(&mut self) -> Result<(String, Rel, Pos), CliError> {
        let (n, p) = self.word()?;
        match self.lookup(&n, p)? {
            Object::Relation(r) => Ok((n, r.clone(), p)),
            o => Err(Self::wrong_kind(&n, p, o, "relation")),
        }
    }

    fn fn_ref(&mut self) -> Result<(String, FuncTable, Pos), CliError> {
        let (n, p) = self.word()?;
        match self.lookup(&n, p)? {
            Object::Function(f) => Ok((n, f.clone(), p)),
            o => Err(Self::wrong_kind(&n, p, o, "function")),
        }
    }

    fn rep_ref(&mut self) -> Result<(String, Representation), CliError> {
        let (n, p) = self.word()?;
        match self.lookup(&n, p)? {
            Object::Rep(r) => Ok((n, r.clone())),
            o => Err(Self::wrong_kind(&n, p, o, "rep")),
        }
    }

    fn element(&mut self, set: &FiniteSet) -> Result<(String, usize), CliError> {
        let (w, p) = self.word()?;
        match set.index_of(&w) {
            Some(i) => Ok((w, i)),
            None => Err(CliError::invalid(
                p,
                format!("unknown element `{w}` of set {}", set.name()),
            )),
        }
    }

    /// `: Src -> Tgt`.
    fn signature(&mut self) -> Result<(Named<FiniteSet>, Named<FiniteSet>), CliError> {
        self.punct(':')?;
        let src = self.set_ref()?;
        self.arrow()?;
        let tgt = self.set_ref()?;
        Ok((src, tgt))
    }

    fn rep_signature(&mut self) -> Result<(Named<Representation>, Named<Representation>), CliError> {
        self.punct(':')?;
        let src = self.rep_ref()?;
        self.arrow()?;
        let tgt = self.rep_ref()?;
        Ok((src, tgt))
    }

    fn value(&mut self) -> Result<Value, CliError> {
        let (w, _) = self.word()?;
        if self.peek_punct('(') {
            Ok(Value::Call(self.call_args(w)?))
        } else {
            Ok(Value::Word(w))
        }
    }

    fn call_args(&mut self, head: String) -> Result<Call, CliError> {
        self.punct('(')?;
        let mut args = Vec::new();
        if !self.peek_punct(')') {
            loop {
                let v = self.value()?;
                let arg = match (v, self.peek_punct('=')) {
                    (Value::Word(k), true) => {
                        self.i += 1;
                        Arg {
                            key: Some(k),
                            value: self.value()?,
                        }
                    }
                    (v, _) => Arg { key: None, value: v },
                };
                args.push(arg);
                if self.peek_punct(',') {
                    self.i += 1;
                } else {
                    break;
                }
            }
        }
        self.punct(')')?;
        Ok(Call { head, args })
    }

    fn call(&mut self) -> Result<(Call, Pos), CliError> {
        let (head, p) = self.word()?;
        Ok((self.call_args(head)?, p))
    }

    fn decl(&mut self) -> Result<(), CliError> {
        let (kw, kw_pos) = self.word()?;
        let (name, name_pos) = self.word()?;
        if self.doc.index.contains_key(&name) {
            return Err(CliError::invalid(name_pos, format!("`{name}` is already declared")));
        }
        let at = |e: reprkit::Error| CliError::invalid(name_pos, e.to_string());
        let (body, object) = match kw.as_str() {
            "set" => {
                self.punct('=')?;
                let elems = self.braced(|p| Ok(p.word()?.0))?;
                let set = FiniteSet::new(&name, elems.clone()).map_err(at)?;
                (Body::Set(elems), Object::Set(set))
            }
            "relation" => {
                let ((sn, s), (tn, t)) = self.signature()?;
                self.punct('=')?;
                let items = self.braced(|p| {
                    p.punct('(')?;
                    let a = p.element(&s)?;
                    p.punct(',')?;
                    let b = p.element(&t)?;
                    p.punct(')')?;
                    Ok((a, b))
                })?;
                let rel = Rel::from_index_pairs(&s, &t, items.iter().map(|(a, b)| (a.1, b.1))).map_err(at)?;
                let pairs = items.into_iter().map(|(a, b)| (a.0, b.0)).collect();
                (
                    Body::Relation {
                        src: sn,
                        tgt: tn,
                        pairs,
                    },
                    Object::Relation(rel),
                )
            }
            "function" => {
                let ((sn, s), (tn, t)) = self.signature()?;
                self.punct('=')?;
                let mut table: Vec<Option<usize>> = vec![None; s.len()];
                let items = self.braced(|p| {
                    let (a_pos, a) = (p.pos(), p.element(&s)?);
                    p.arrow()?;
                    let b = p.element(&t)?;
                    if table[a.1].replace(b.1).is_some() {
                        return Err(CliError::invalid(a_pos, format!("`{}` is mapped twice", a.0)));
                    }
                    Ok((a.0, b.0))
                })?;
                let table = table
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        t.ok_or_else(|| {
                            CliError::invalid(name_pos, format!("function `{name}` has no image for `{}`", s.label(i)))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let f = FuncTable::new(&s, &t, table).map_err(at)?;
                (
                    Body::Function {
                        src: sn,
                        tgt: tn,
                        map: items,
                    },
                    Object::Function(f),
                )
            }
            "rep" => {
                self.punct('=')?;
                self.punct('(')?;
                let (mn, m, _) = self.rel_ref()?;
                self.punct(',')?;
                let (ln, l, _) = self.rel_ref()?;
                self.punct(')')?;
                let rep = Representation::new(m, l).map_err(at)?;
                (Body::Rep { models: mn, leq: ln }, Object::Rep(rep))
            }
            "morphism" => {
                let ((sn, r1), (tn, r2)) = self.rep_signature()?;
                self.punct('=')?;
                self.punct('(')?;
                let (phin, phi, phip) = self.fn_ref()?;
                self.punct(',')?;
                let (psin, psi, psip) = self.rel_ref()?;
                self.punct(')')?;
                expect_fn(&phi, phip, r1.exprs(), r2.exprs())?;
                expect_rel(&psi, psip, r2.traces(), r1.traces())?;
                (
                    Body::Morphism {
                        src: sn.clone(),
                        tgt: tn.clone(),
                        phi: phin,
                        psi: psin,
                    },
                    Object::Morphism {
                        src: sn,
                        tgt: tn,
                        m: Morphism::new(phi, psi),
                    },
                )
            }
            "reduction" => {
                let ((sn, r1), (tn, r2)) = self.rep_signature()?;
                self.punct('=')?;
                self.punct('(')?;
                let (phin, phi, phip) = self.fn_ref()?;
                self.punct(',')?;
                let (taun, tau, taup) = self.fn_ref()?;
                self.punct(',')?;
                let (psin, psi, psip) = self.rel_ref()?;
                self.punct(')')?;
                expect_fn(&phi, phip, r1.exprs(), r2.exprs())?;
                expect_fn(&tau, taup, r2.exprs(), r1.exprs())?;
                expect_rel(&psi, psip, r2.traces(), r1.traces())?;
                (
                    Body::Reduction {
                        src: sn.clone(),
                        tgt: tn.clone(),
                        phi: phin,
                        tau: taun,
                        psi: psin,
                    },
                    Object::Reduction {
                        src: sn,
                        tgt: tn,
                        r: Reduction::new(phi, tau, psi),
                    },
                )
            }
            "closure" => {
                let ((sn, r1), (tn, r2)) = self.rep_signature()?;
                self.punct('=')?;
                let (dn, down, dp) = self.fn_ref()?;
                if !r1.traces().same(r2.traces()) || !r1.exprs().same(r2.exprs()) {
                    return Err(CliError::invalid(
                        name_pos,
                        format!("closure `{name}` needs representations over the same carriers"),
                    ));
                }
                expect_fn(&down, dp, r1.exprs(), r1.exprs())?;
                (
                    Body::Closure {
                        src: sn.clone(),
                        tgt: tn.clone(),
                        down: dn,
                    },
                    Object::Closure { src: sn, tgt: tn, down },
                )
            }
            "preorder" => {
                self.punct('=')?;
                let (on, order, op) = self.rel_ref()?;
                let p = PreorderedSet::new(order).map_err(|e| CliError::invalid(op, e.to_string()))?;
                (Body::Preorder { order: on }, Object::Preorder(p))
            }
            "hor" => {
                self.punct('=')?;
                let (call, p) = self.call()?;
                let spec = hor_spec(&call, p)?;
                let hor = spec.build().map_err(|e| CliError::invalid(p, e.to_string()))?;
                (
                    Body::Hor(call),
                    Object::Hor {
                        spec,
                        hor: Box::new(hor),
                    },
                )
            }
            "family" => {
                self.punct('=')?;
                let (call, p) = self.call()?;
                let spec = self.family_spec(&call, p)?;
                (Body::Family(call), Object::Family(spec))
            }
            "probes" => {
                self.punct('=')?;
                let (call, p) = self.call()?;
                let probes = self.probes(&call, p)?;
                (Body::Probes(call), Object::Probes(probes))
            }
            _ => return Err(CliError::syntax(kw_pos, format!("unknown declaration keyword `{kw}`"))),
        };
        self.doc.index.insert(name.clone(), self.doc.decls.len());
        self.doc.decls.push(Decl { name, body });
        self.doc.positions.push(kw_pos);
        self.doc.objects.push(object);
        Ok(())
    }

    fn family_spec(&self, call: &Call, pos: Pos) -> Result<FamilySpec, CliError> {
        let a = Params::new(call, pos)?;
        let nested = |v: &Value| -> Result<Box<FamilySpec>, CliError> {
            match v {
                Value::Word(n) => match self.lookup(n, pos)? {
                    Object::Family(f) => Ok(Box::new(f.clone())),
                    o => Err(Self::wrong_kind(n, pos, o, "family")),
                },
                Value::Call(c) => Ok(Box::new(self.family_spec(c, pos)?)),
            }
        };
        let spec = match call.head.as_str() {
            "membership" => FamilySpec::Membership {
                cap: a.opt_num(&["cap"])?,
            },
            "eta-p" => FamilySpec::EtaP {
                cap: a.opt_num(&["cap"])?,
            },
            "mu-p" => FamilySpec::MuP {
                cap: a.opt_num(&["cap", "outer"])?,
                outer: a.opt_num_at(&["cap", "outer"], 1)?,
            },
            "var-list" => FamilySpec::VarList {
                depth: a.positive(&["depth"])?,
            },
            "approx" => FamilySpec::Approx {
                depth: a.positive(&["depth"])?,
            },
            "eta-t" => FamilySpec::EtaT {
                depth: a.positive(&["depth"])?,
            },
            "mu-t" => FamilySpec::MuT {
                outer: a.positive_at(&["outer", "inner"], 0)?,
                inner: a.positive_at(&["outer", "inner"], 1)?,
            },
            "head" => FamilySpec::Head { k: a.positive(&["k"])? },
            "list-prefix" => FamilySpec::ListPrefix { len: a.num(&["len"])? },
            "list-pointwise" => {
                let keys = ["len", "base"];
                let base = match a.opt_word_at(&keys, 1)?.as_deref() {
                    None | Some("identity") => BaseOrder::Identity,
                    Some("full") => BaseOrder::Full,
                    Some(b) => return Err(CliError::invalid(pos, format!("unknown base order `{b}`"))),
                };
                FamilySpec::ListPointwise {
                    len: a.num_at(&keys, 0)?,
                    base,
                }
            }
            "graph" => FamilySpec::Graph(nested(a.value_at(&["of"], 0)?)?),
            "cograph" => FamilySpec::Cograph(nested(a.value_at(&["of"], 0)?)?),
            "converse" => FamilySpec::Converse(nested(a.value_at(&["of"], 0)?)?),
            "then" => {
                let keys = ["first", "second"];
                FamilySpec::Then(nested(a.value_at(&keys, 0)?)?, nested(a.value_at(&keys, 1)?)?)
            }
            h => return Err(CliError::invalid(pos, format!("unknown family `{h}`"))),
        };
        // constructors are lazy, so this only checks shapes
        spec.build(1).map_err(|e| CliError::invalid(pos, e.to_string()))?;
        Ok(spec)
    }

    fn probes(&self, call: &Call, pos: Pos) -> Result<Probes, CliError> {
        match call.head.as_str() {
            "sizes" => {
                let a = Params::new(call, pos)?;
                let keys = ["min", "max"];
                let (min, max) = (a.num_at(&keys, 0)?, a.num_at(&keys, 1)?);
                if min > max {
                    return Err(CliError::invalid(pos, format!("empty probe range {min}..{max}")));
                }
                Ok(Probes::sizes(min, max))
            }
            "sets" => {
                let mut sets = Vec::new();
                for arg in &call.args {
                    match (&arg.key, &arg.value) {
                        (None, Value::Word(n)) => match self.lookup(n, pos)? {
                            Object::Set(s) => sets.push(s.clone()),
                            o => return Err(Self::wrong_kind(n, pos, o, "set")),
                        },
                        _ => return Err(CliError::invalid(pos, "`sets` takes set names")),
                    }
                }
                Ok(Probes::from_sets(sets))
            }
            h => Err(CliError::invalid(pos, format!("unknown probe configuration `{h}`"))),
        }
    }
}

fn expect_fn(f: &FuncTable, pos: Pos, src: &FiniteSet, tgt: &FiniteSet) -> Result<(), CliError> {
    if f.src().same(src) && f.tgt().same(tgt) {
        return Ok(());
    }
    Err(CliError::invalid(
        pos,
        format!(
            "expected a function {} -> {}, found {} -> {}",
            src,
            tgt,
            f.src(),
            f.tgt()
        ),
    ))
}

fn expect_rel(r: &Rel, pos: Pos, src: &FiniteSet, tgt: &FiniteSet) -> Result<(), CliError> {
    if r.src().same(src) && r.tgt().same(tgt) {
        return Ok(());
    }
    Err(CliError::invalid(
        pos,
        format!("expected a relation {} -> {}, found {}", src, tgt, r.signature()),
    ))
}

fn hor_spec(call: &Call, pos: Pos) -> Result<HorSpec, CliError> {
    let a = Params::new(call, pos)?;
    match call.head.as_str() {
        "mon" => Ok(HorSpec::Mon {
            depth: a.positive(&["depth"])?,
        }),
        "ka" => {
            let keys = ["size", "words", "mode"];
            let mode = match a.opt_word_at(&keys, 2)?.as_deref() {
                None | Some("semantic") => LeqMode::Semantic,
                Some("axiomatic") => LeqMode::Axiomatic(shipped_axioms()),
                Some(m) => return Err(CliError::invalid(pos, format!("unknown KA order mode `{m}`"))),
            };
            Ok(HorSpec::Ka(KaConfig {
                expr_size: a.positive_at(&keys, 0)?,
                word_len: a.num_at(&keys, 1)?,
                mode,
            }))
        }
        h => Err(CliError::invalid(pos, format!("unknown HOR `{h}`"))),
    }
}

/// Call arguments addressed by keyword or by position.
struct Params<'a> {
    call: &'a Call,
    pos: Pos,
}

impl<'a> Params<'a> {
    fn new(call: &'a Call, pos: Pos) -> Result<Self, CliError> {
        let mut seen_key = false;
        for a in &call.args {
            match &a.key {
                Some(_) => seen_key = true,
                None if seen_key => {
                    return Err(CliError::invalid(pos, "positional argument after a keyword argument"));
                }
                None => {}
            }
        }
        Ok(Params { call, pos })
    }

    fn check_keys(&self, keys: &[&str]) -> Result<(), CliError> {
        if self.call.args.len() > keys.len() {
            return Err(CliError::invalid(
                self.pos,
                format!("`{}` takes at most {} arguments", self.call.head, keys.len()),
            ));
        }
        for a in &self.call.args {
            if let Some(k) = &a.key {
                if !keys.contains(&k.as_str()) {
                    return Err(CliError::invalid(
                        self.pos,
                        format!("`{}` has no parameter `{k}`", self.call.head),
                    ));
                }
            }
        }
        Ok(())
    }

    fn opt_value_at(&self, keys: &[&str], i: usize) -> Result<Option<&'a Value>, CliError> {
        self.check_keys(keys)?;
        let by_key = self.call.args.iter().find(|a| a.key.as_deref() == Some(keys[i]));
        let by_pos = self.call.args.get(i).filter(|a| a.key.is_none());
        Ok(by_key.or(by_pos).map(|a| &a.value))
    }

    fn value_at(&self, keys: &[&str], i: usize) -> Result<&'a Value, CliError> {
        self.opt_value_at(keys, i)?
            .ok_or_else(|| CliError::invalid(self.pos, format!("`{}` needs `{}`", self.call.head, keys[i])))
    }

    fn opt_word_at(&self, keys: &[&str], i: usize) -> Result<Option<String>, CliError> {
        match self.opt_value_at(keys, i)? {
            None => Ok(None),
            Some(Value::Word(w)) => Ok(Some(w.clone())),
            Some(Value::Call(_)) => Err(CliError::invalid(self.pos, format!("`{}` must be a word", keys[i]))),
        }
    }

    fn opt_num_at(&self, keys: &[&str], i: usize) -> Result<Option<usize>, CliError> {
        match self.opt_word_at(keys, i)? {
            None => Ok(None),
            Some(w) => w.parse().map(Some).map_err(|_| {
                CliError::invalid(self.pos, format!("`{}` must be a natural number, found `{w}`", keys[i]))
            }),
        }
    }

    fn opt_num(&self, keys: &[&str]) -> Result<Option<usize>, CliError> {
        self.opt_num_at(keys, 0)
    }

    fn num_at(&self, keys: &[&str], i: usize) -> Result<usize, CliError> {
        self.value_at(keys, i)?;
        Ok(self.opt_num_at(keys, i)?.expect("present"))
    }

    fn num(&self, keys: &[&str]) -> Result<usize, CliError> {
        self.num_at(keys, 0)
    }

    fn positive_at(&self, keys: &[&str], i: usize) -> Result<usize, CliError> {
        let n = self.num_at(keys, i)?;
        if n == 0 {
            return Err(CliError::invalid(self.pos, format!("`{}` must be at least 1", keys[i])));
        }
        Ok(n)
    }

    fn positive(&self, keys: &[&str]) -> Result<usize, CliError> {
        self.positive_at(keys, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_SETS: &str = "set A = {a, b}\nset B = {x}\nrelation r : A -> B = {(a, x)}\n";

    #[test]
    fn two_sets_and_a_relation_round_trip() {
        let d = parse_document(TWO_SETS).unwrap();
        assert_eq!(d.print(), TWO_SETS);
        assert_eq!(parse_document(&d.print()).unwrap(), d);
        let Some(Object::Relation(r)) = d.get("r") else {
            panic!()
        };
        assert!(r.contains_labels("a", "x").unwrap());
        assert!(!r.contains_labels("b", "x").unwrap());
    }

    #[test]
    fn undeclared_set_is_named() {
        let e = parse_document("set A = {a}\nrelation r : A -> X = {}").unwrap_err();
        assert!(matches!(&e, CliError::Dangling { name, .. } if name == "X"));
        assert_eq!(e.to_string(), "2:19: undeclared name `X`");
    }

    #[test]
    fn unknown_element_is_located() {
        let e = parse_document("set A = {a}\nrelation r : A -> A = {(a, z)}").unwrap_err();
        assert_eq!(e.to_string(), "2:28: unknown element `z` of set A");
    }

    #[test]
    fn syntax_errors_carry_line_and_column() {
        let e = parse_document("set A = {a b}").unwrap_err();
        assert_eq!(e.to_string(), "1:12: syntax error: expected `}`, found `b`");
        let e = parse_document("sett A = {}").unwrap_err();
        assert_eq!(e.to_string(), "1:1: syntax error: unknown declaration keyword `sett`");
    }

    #[test]
    fn functions_must_be_total_and_single_valued() {
        let e = parse_document("set A = {a, b}\nfunction f : A -> A = {a -> a}").unwrap_err();
        assert!(e.to_string().contains("no image for `b`"), "{e}");
        let e = parse_document("set A = {a}\nfunction f : A -> A = {a -> a, a -> a}").unwrap_err();
        assert!(e.to_string().contains("mapped twice"), "{e}");
    }

    #[test]
    fn kinds_are_checked() {
        let e = parse_document("set A = {a}\nrelation r : A -> A = {}\nrep R = (A, r)").unwrap_err();
        assert_eq!(e.to_string(), "3:10: `A` is a set, expected a relation");
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let e = parse_document("set A = {a}\nset A = {b}").unwrap_err();
        assert!(e.to_string().contains("already declared"));
    }

    #[test]
    fn configuration_calls_round_trip() {
        let text = "hor H = mon(depth = 2)\nhor K = ka(3, 2, mode = axiomatic)\nfamily m = membership()\n\
                    family l = var-list(2)\nfamily c = cograph(l)\nfamily n = then(graph(l), c)\n\
                    probes P = sizes(0, 2)\n";
        let d = parse_document(text).unwrap();
        assert_eq!(d.print(), text);
        let Some(Object::Hor {
            spec: HorSpec::Ka(cfg), ..
        }) = d.get("K")
        else {
            panic!()
        };
        assert_eq!((cfg.expr_size, cfg.word_len), (3, 2));
        assert!(matches!(cfg.mode, LeqMode::Axiomatic(_)));
    }

    #[test]
    fn bad_configuration_is_rejected() {
        for (text, msg) in [
            ("hor H = mon()", "needs `depth`"),
            ("hor H = mon(depth = 0)", "at least 1"),
            ("hor H = mon(height = 2)", "no parameter `height`"),
            ("hor H = ka(3, 2, mode = fuzzy)", "unknown KA order mode"),
            ("family f = graph(g)", "undeclared name `g`"),
            ("probes P = sizes(3, 1)", "empty probe range"),
        ] {
            let e = parse_document(text).unwrap_err();
            assert!(e.to_string().contains(msg), "{text}: {e}");
        }
    }

    #[test]
    fn quoted_labels_survive_printing() {
        let text = "set \"P(A)\" = {\"{}\", \"{a}\", \"a->b\"}\n";
        let d = parse_document(text).unwrap();
        assert_eq!(d.print(), text);
    }
}
