//! Bounded endofunctors on finite sets and their relation liftings.
//!
//! Each functor kind comes with a structural lifting that agrees with the
//! arrow map on function graphs: identity, Egli–Milner for powersets,
//! same-length pointwise for lists, same-shape pointwise for terms. Carriers
//! are bounded (powerset cap, list length, term depth or size) and every
//! construction fails loudly when a bound would be crossed, so no law is
//! ever checked on a silently truncated carrier.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::rel::{FuncTable, Rel};
use crate::set::{self, FiniteSet, SetId};

/// Default cap on the size of any functor image.
pub const CARRIER_BUDGET: u128 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fixity {
    Prefix,
    Infix,
    Postfix,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpSym {
    pub name: String,
    pub arity: usize,
    pub fixity: Fixity,
}

impl OpSym {
    pub fn prefix(name: &str, arity: usize) -> Self {
        OpSym {
            name: name.into(),
            arity,
            fixity: Fixity::Prefix,
        }
    }

    pub fn constant(name: &str) -> Self {
        Self::prefix(name, 0)
    }

    pub fn infix(name: &str) -> Self {
        OpSym {
            name: name.into(),
            arity: 2,
            fixity: Fixity::Infix,
        }
    }

    pub fn postfix(name: &str) -> Self {
        OpSym {
            name: name.into(),
            arity: 1,
            fixity: Fixity::Postfix,
        }
    }
}

/// Operator symbols with arities, in a fixed order that drives term
/// enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    ops: Vec<OpSym>,
}

impl Signature {
    pub fn new(ops: Vec<OpSym>) -> Result<Self> {
        for (i, o) in ops.iter().enumerate() {
            if ops[..i].iter().any(|p| p.name == o.name) {
                return Err(Error::DuplicateLabel(o.name.clone()));
            }
            let ok = match o.fixity {
                Fixity::Prefix => true,
                Fixity::Infix => o.arity == 2,
                Fixity::Postfix => o.arity == 1,
            };
            if !ok || o.name.is_empty() {
                return Err(Error::Invalid {
                    what: "signature",
                    detail: format!("operator `{}` has arity {} but fixity {:?}", o.name, o.arity, o.fixity),
                });
            }
        }
        Ok(Signature { ops })
    }

    /// Prefix operators from `(name, arity)` pairs.
    pub fn prefix<'a>(ops: impl IntoIterator<Item = (&'a str, usize)>) -> Result<Self> {
        Self::new(ops.into_iter().map(|(n, a)| OpSym::prefix(n, a)).collect())
    }

    /// `{⊗ : 2 (infix), 1 : 0}`.
    pub fn monoid() -> Self {
        Self::new(vec![OpSym::infix("⊗"), OpSym::constant("1")]).expect("well formed")
    }

    pub fn ops(&self) -> &[OpSym] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.arity).max().unwrap_or(0)
    }

    fn key(&self) -> String {
        let parts: Vec<String> = self
            .ops
            .iter()
            .map(|o| {
                let fx = match o.fixity {
                    Fixity::Prefix => "",
                    Fixity::Infix => "i",
                    Fixity::Postfix => "p",
                };
                format!("{}/{}{}", o.name, o.arity, fx)
            })
            .collect();
        parts.join(",")
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ops.iter().map(|o| format!("{}/{}", o.name, o.arity)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    /// Variables and constants have depth 1.
    Depth(usize),
    /// Node count.
    Size(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorKind {
    Identity,
    Powerset {
        cap: usize,
    },
    List {
        min_len: usize,
        max_len: usize,
    },
    Term {
        sig: Signature,
        bound: Bound,
    },
    /// `outer ∘ inner`: `A ↦ outer(inner(A))`.
    Compose(Box<Functor>, Box<Functor>),
}

/// A bounded endofunctor: object map, arrow map, relation lifting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    name: String,
    kind: FunctorKind,
    budget: u128,
}

impl Functor {
    pub fn identity() -> Self {
        Self::make("Id", FunctorKind::Identity)
    }

    pub fn powerset(cap: usize) -> Self {
        Self::make("P", FunctorKind::Powerset { cap })
    }

    pub fn list(max_len: usize) -> Self {
        Self::list_range(0, max_len)
    }

    pub fn list_range(min_len: usize, max_len: usize) -> Self {
        let name = if min_len == 0 {
            format!("List≤{max_len}")
        } else {
            format!("List{min_len}..{max_len}")
        };
        Self::make(&name, FunctorKind::List { min_len, max_len })
    }

    pub fn term(sig: Signature, bound: Bound) -> Self {
        let name = match bound {
            Bound::Depth(d) => format!("T{sig}≤depth{d}"),
            Bound::Size(s) => format!("T{sig}≤size{s}"),
        };
        Self::make(&name, FunctorKind::Term { sig, bound })
    }

    pub fn compose(outer: Functor, inner: Functor) -> Self {
        let name = format!("{}∘{}", outer.name, inner.name);
        let budget = outer.budget.max(inner.budget);
        Functor {
            name,
            kind: FunctorKind::Compose(Box::new(outer), Box::new(inner)),
            budget,
        }
    }

    fn make(name: &str, kind: FunctorKind) -> Self {
        Functor {
            name: name.to_string(),
            kind,
            budget: CARRIER_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        if let FunctorKind::Compose(o, i) = &mut self.kind {
            **o = o.as_ref().clone().with_budget(budget);
            **i = i.as_ref().clone().with_budget(budget);
        }
        self
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &FunctorKind {
        &self.kind
    }

    /// Recipe key; determines carriers completely.
    /// Structural equality: same kind and parameters, ignoring names.
    pub fn same(&self, other: &Functor) -> bool {
        self.key() == other.key()
    }

    fn key(&self) -> String {
        match &self.kind {
            FunctorKind::Identity => "Id".into(),
            FunctorKind::Powerset { .. } => "P".into(),
            FunctorKind::List { min_len, max_len } => format!("List[{min_len}..{max_len}]"),
            FunctorKind::Term { sig, bound } => format!("T[{}]{:?}", sig.key(), bound),
            FunctorKind::Compose(o, i) => format!("({})∘({})", o.key(), i.key()),
        }
    }

    /// `|F A|` for `|A| = n`, saturating; computed without enumeration.
    pub fn size_at(&self, n: usize) -> u128 {
        match &self.kind {
            FunctorKind::Identity => n as u128,
            FunctorKind::Powerset { .. } => 1u128.checked_shl(n as u32).unwrap_or(u128::MAX),
            FunctorKind::List { min_len, max_len } => (*min_len..=*max_len)
                .map(|k| (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX))
                .fold(0u128, |s, c| s.saturating_add(c)),
            FunctorKind::Term { sig, bound } => term_count(sig, *bound, n),
            FunctorKind::Compose(o, i) => o.size_at(usize::try_from(i.size_at(n)).unwrap_or(usize::MAX)),
        }
    }

    pub fn apply_object(&self, a: &FiniteSet) -> Result<FiniteSet> {
        match &self.kind {
            FunctorKind::Identity => Ok(a.clone()),
            FunctorKind::Compose(o, i) => o.apply_object(&i.apply_object(a)?),
            _ => Ok(self.carrier(a)?.set.clone()),
        }
    }

    /// Structure of `F A` for the non-composite kinds.
    pub fn carrier(&self, a: &FiniteSet) -> Result<Arc<Carrier>> {
        if let FunctorKind::Powerset { cap } = self.kind {
            if a.len() > cap {
                return Err(Error::budget(
                    format!("{} of {a}", self.name),
                    a.len() as u128,
                    cap as u128,
                ));
            }
        }
        let key = (self.key(), a.id());
        if let Some(c) = carrier_cache().lock().unwrap().get(&key) {
            if c.set.len() as u128 > self.budget {
                return Err(Error::budget(
                    format!("{} of {a}", self.name),
                    c.set.len() as u128,
                    self.budget,
                ));
            }
            return Ok(c.clone());
        }
        let c = Arc::new(self.build_carrier(a)?);
        let mut cache = carrier_cache().lock().unwrap();
        Ok(cache.entry(key).or_insert(c).clone())
    }

    fn build_carrier(&self, a: &FiniteSet) -> Result<Carrier> {
        let shape = match &self.kind {
            FunctorKind::Identity | FunctorKind::Compose(..) => {
                return Err(Error::Invalid {
                    what: "functor",
                    detail: format!("{} has no carrier of its own", self.name),
                })
            }
            FunctorKind::Powerset { cap } => {
                // Shares the carrier of `set::powerset`, so membership
                // relations and functor images line up.
                let masks = set::powerset_masks(a);
                let pos = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
                return Ok(Carrier {
                    set: set::powerset(a, *cap)?,
                    base: a.clone(),
                    shape: Shape::Powerset { masks, pos },
                });
            }
            FunctorKind::List { min_len, max_len } => {
                let n = a.len() as u128;
                let count: u128 = (*min_len..=*max_len)
                    .map(|k| n.checked_pow(k as u32).unwrap_or(u128::MAX))
                    .fold(0u128, |s, c| s.saturating_add(c));
                if count > self.budget {
                    return Err(Error::budget(format!("{} of {a}", self.name), count, self.budget));
                }
                let items = enumerate_lists(a.len(), *min_len, *max_len);
                let labels = items.iter().map(|l| list_label(a, l)).collect();
                let pos = items.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
                (Shape::List { items, pos }, labels)
            }
            FunctorKind::Term { sig, bound } => {
                let count = term_count(sig, *bound, a.len());
                if count > self.budget {
                    return Err(Error::budget(format!("{} of {a}", self.name), count, self.budget));
                }
                let terms = TermCarrier::enumerate(sig, *bound, a.len());
                let labels = (0..terms.nodes.len()).map(|i| terms.render(sig, a, i)).collect();
                (Shape::Term(terms), labels)
            }
        };
        let (shape, labels) = shape;
        let name = format!("{}({a})", self.name);
        let set = FiniteSet::derived(&self.key(), &[a], || Ok((name, labels)))?;
        Ok(Carrier {
            set,
            base: a.clone(),
            shape,
        })
    }

    /// `F f`.
    pub fn apply_arrow(&self, f: &FuncTable) -> Result<FuncTable> {
        match &self.kind {
            FunctorKind::Identity => Ok(f.clone()),
            FunctorKind::Compose(o, i) => o.apply_arrow(&i.apply_arrow(f)?),
            _ => {
                let src = self.carrier(f.src())?;
                let tgt = self.carrier(f.tgt())?;
                let table = src.shape.map_arrow(f, &tgt.shape);
                FuncTable::new(&src.set, &tgt.set, table)
            }
        }
    }

    /// `F̄ x`.
    pub fn lift(&self, x: &Rel) -> Result<Rel> {
        match &self.kind {
            FunctorKind::Identity => Ok(x.clone()),
            FunctorKind::Compose(o, i) => o.lift(&i.lift(x)?),
            _ => {
                let src = self.carrier(x.src())?;
                let tgt = self.carrier(x.tgt())?;
                let m = src.shape.lift(x, &tgt.shape);
                Rel::from_matrix(&src.set, &tgt.set, m)
            }
        }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

type CarrierKey = (String, SetId);

fn carrier_cache() -> &'static Mutex<HashMap<CarrierKey, Arc<Carrier>>> {
    static CACHE: OnceLock<Mutex<HashMap<CarrierKey, Arc<Carrier>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `F A` with the structure of its elements.
#[derive(Debug)]
pub struct Carrier {
    pub set: FiniteSet,
    pub base: FiniteSet,
    pub shape: Shape,
}

#[derive(Debug)]
pub enum Shape {
    Powerset {
        masks: Vec<u64>,
        pos: HashMap<u64, usize>,
    },
    List {
        items: Vec<Vec<usize>>,
        pos: HashMap<Vec<usize>, usize>,
    },
    Term(TermCarrier),
}

impl Shape {
    fn map_arrow(&self, f: &FuncTable, tgt: &Shape) -> Vec<usize> {
        match (self, tgt) {
            (Shape::Powerset { masks, .. }, Shape::Powerset { pos, .. }) => masks
                .iter()
                .map(|&m| {
                    let img = (0..f.src().len())
                        .filter(|&i| m >> i & 1 == 1)
                        .fold(0u64, |acc, i| acc | 1 << f.apply(i));
                    pos[&img]
                })
                .collect(),
            (Shape::List { items, .. }, Shape::List { pos, .. }) => items
                .iter()
                .map(|l| pos[&l.iter().map(|&i| f.apply(i)).collect::<Vec<_>>()])
                .collect(),
            (Shape::Term(s), Shape::Term(t)) => {
                let mut out = Vec::with_capacity(s.nodes.len());
                for n in &s.nodes {
                    let image = match n {
                        Node::Var(a) => Node::Var(f.apply(*a)),
                        Node::Op(o, cs) => Node::Op(*o, cs.iter().map(|&c| out[c]).collect()),
                    };
                    out.push(t.pos[&image]);
                }
                out
            }
            _ => unreachable!("carriers of one functor share a shape"),
        }
    }

    fn lift(&self, x: &Rel, tgt: &Shape) -> BitMatrix {
        match (self, tgt) {
            (Shape::Powerset { masks: ms, .. }, Shape::Powerset { masks: mt, .. }) => {
                let (na, nb) = (x.src().len(), x.tgt().len());
                let succ: Vec<u64> = (0..na)
                    .map(|a| x.matrix().row_ones(a).fold(0u64, |m, b| m | 1 << b))
                    .collect();
                let pred: Vec<u64> = (0..nb)
                    .map(|b| (0..na).filter(|&a| x.contains(a, b)).fold(0u64, |m, a| m | 1 << a))
                    .collect();
                let mut m = BitMatrix::zeros(ms.len(), mt.len());
                for (i, &xs) in ms.iter().enumerate() {
                    for (j, &ys) in mt.iter().enumerate() {
                        let fwd = (0..na).all(|a| xs >> a & 1 == 0 || succ[a] & ys != 0);
                        let bwd = fwd && (0..nb).all(|b| ys >> b & 1 == 0 || pred[b] & xs != 0);
                        if bwd {
                            m.set(i, j);
                        }
                    }
                }
                m
            }
            (Shape::List { items: s, .. }, Shape::List { items: t, .. }) => {
                let mut by_len: HashMap<usize, Vec<usize>> = HashMap::new();
                for (j, l) in t.iter().enumerate() {
                    by_len.entry(l.len()).or_default().push(j);
                }
                let mut m = BitMatrix::zeros(s.len(), t.len());
                for (i, u) in s.iter().enumerate() {
                    for &j in by_len.get(&u.len()).into_iter().flatten() {
                        if u.iter().zip(&t[j]).all(|(&a, &b)| x.contains(a, b)) {
                            m.set(i, j);
                        }
                    }
                }
                m
            }
            (Shape::Term(s), Shape::Term(t)) => {
                let mut by_skel: HashMap<&[u32], Vec<usize>> = HashMap::new();
                for (j, sk) in t.skeleton.iter().enumerate() {
                    by_skel.entry(sk.as_slice()).or_default().push(j);
                }
                let mut m = BitMatrix::zeros(s.nodes.len(), t.nodes.len());
                for (i, sk) in s.skeleton.iter().enumerate() {
                    for &j in by_skel.get(sk.as_slice()).into_iter().flatten() {
                        if s.vars[i].iter().zip(&t.vars[j]).all(|(&a, &b)| x.contains(a, b)) {
                            m.set(i, j);
                        }
                    }
                }
                m
            }
            _ => unreachable!("carriers of one functor share a shape"),
        }
    }
}

/// Lists of lengths `min..=max` over `n` letters, by length then
/// lexicographically.
fn enumerate_lists(n: usize, min: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for len in 0..=max {
        if len > 0 {
            layer = layer
                .iter()
                .flat_map(|l| {
                    (0..n).map(move |a| {
                        let mut l2 = l.clone();
                        l2.push(a);
                        l2
                    })
                })
                .collect();
        }
        if len >= min {
            out.extend(layer.iter().cloned());
        }
    }
    out
}

/// A variable label as it appears inside a term. Labels that could be read
/// as term structure (a symbol name, brackets, commas) are quoted `⟦l⟧`, so
/// rendering stays injective on nested carriers.
pub fn var_label(sig: &Signature, l: &str) -> String {
    let structural = l.is_empty()
        || l.contains(['(', ')', ',', '⟦', '⟧'])
        || sig.ops.iter().any(|o| {
            if o.arity == 0 {
                o.name == l
            } else {
                l.contains(o.name.as_str())
            }
        });
    if structural {
        format!("⟦{l}⟧")
    } else {
        l.to_string()
    }
}

pub fn list_label(a: &FiniteSet, l: &[usize]) -> String {
    let parts: Vec<&str> = l.iter().map(|&i| a.label(i)).collect();
    format!("[{}]", parts.join(","))
}

/// A term node; children are indices into the same carrier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(usize),
    Op(usize, Vec<usize>),
}

/// The terms of a bounded term carrier. Children always precede parents.
#[derive(Debug)]
pub struct TermCarrier {
    pub nodes: Vec<Node>,
    pub pos: HashMap<Node, usize>,
    pub depth: Vec<usize>,
    pub size: Vec<usize>,
    /// Left-to-right variable occurrences.
    pub vars: Vec<Vec<usize>>,
    /// Preorder operator sequence with variables erased.
    pub skeleton: Vec<Vec<u32>>,
}

const SKEL_VAR: u32 = u32::MAX;

impl TermCarrier {
    fn empty() -> Self {
        TermCarrier {
            nodes: Vec::new(),
            pos: HashMap::new(),
            depth: Vec::new(),
            size: Vec::new(),
            vars: Vec::new(),
            skeleton: Vec::new(),
        }
    }

    fn push(&mut self, n: Node) {
        let (depth, size, vars, skel) = match &n {
            Node::Var(a) => (1, 1, vec![*a], vec![SKEL_VAR]),
            Node::Op(o, cs) => {
                let depth = 1 + cs.iter().map(|&c| self.depth[c]).max().unwrap_or(0);
                let size = 1 + cs.iter().map(|&c| self.size[c]).sum::<usize>();
                let vars = cs.iter().flat_map(|&c| self.vars[c].iter().copied()).collect();
                let mut skel = vec![*o as u32];
                for &c in cs {
                    skel.extend_from_slice(&self.skeleton[c]);
                }
                (depth, size, vars, skel)
            }
        };
        self.pos.insert(n.clone(), self.nodes.len());
        self.nodes.push(n);
        self.depth.push(depth);
        self.size.push(size);
        self.vars.push(vars);
        self.skeleton.push(skel);
    }

    /// Layer 1 is variables then constants; later layers go by operator
    /// index, then lexicographically by child indices.
    fn enumerate(sig: &Signature, bound: Bound, n_vars: usize) -> Self {
        let mut t = TermCarrier::empty();
        let limit = match bound {
            Bound::Depth(d) | Bound::Size(d) => d,
        };
        if limit == 0 {
            return t;
        }
        for a in 0..n_vars {
            t.push(Node::Var(a));
        }
        for (o, op) in sig.ops.iter().enumerate() {
            if op.arity == 0 {
                t.push(Node::Op(o, Vec::new()));
            }
        }
        let mut layer_start = vec![0usize, 0, t.nodes.len()];
        for level in 2..=limit {
            let mut fresh = Vec::new();
            for (o, op) in sig.ops.iter().enumerate() {
                if op.arity == 0 {
                    continue;
                }
                let mut kids = Vec::with_capacity(op.arity);
                match bound {
                    Bound::Depth(_) => {
                        let prev = layer_start[level - 1];
                        let all = t.nodes.len();
                        tuples_depth(op.arity, all, prev, &mut kids, false, &mut |cs| {
                            fresh.push(Node::Op(o, cs.to_vec()))
                        });
                    }
                    Bound::Size(_) => {
                        tuples_size(&t.size, op.arity, level - 1, &mut kids, &mut |cs| {
                            fresh.push(Node::Op(o, cs.to_vec()))
                        });
                    }
                }
            }
            for n in fresh {
                t.push(n);
            }
            layer_start.push(t.nodes.len());
        }
        t
    }

    fn render(&self, sig: &Signature, a: &FiniteSet, i: usize) -> String {
        match &self.nodes[i] {
            Node::Var(v) => var_label(sig, a.label(*v)),
            Node::Op(o, cs) => {
                let op = &sig.ops[*o];
                let wrap = |c: usize| -> String {
                    let s = self.render(sig, a, c);
                    match &self.nodes[c] {
                        Node::Op(p, k) if !k.is_empty() && sig.ops[*p].fixity != Fixity::Prefix => {
                            format!("({s})")
                        }
                        _ => s,
                    }
                };
                match op.fixity {
                    Fixity::Prefix if cs.is_empty() => op.name.clone(),
                    Fixity::Prefix => {
                        let args: Vec<String> = cs.iter().map(|&c| self.render(sig, a, c)).collect();
                        format!("{}({})", op.name, args.join(","))
                    }
                    Fixity::Infix => format!("{}{}{}", wrap(cs[0]), op.name, wrap(cs[1])),
                    Fixity::Postfix => format!("{}{}", wrap(cs[0]), op.name),
                }
            }
        }
    }

    /// The term at index `i` as a tree over labels of `a`.
    pub fn term(&self, sig: &Signature, a: &FiniteSet, i: usize) -> Term {
        match &self.nodes[i] {
            Node::Var(v) => Term::Var(a.label(*v).to_string()),
            Node::Op(o, cs) => Term::App(
                sig.ops[*o].name.clone(),
                cs.iter().map(|&c| self.term(sig, a, c)).collect(),
            ),
        }
    }

    /// Index of a term tree, if it lies in the carrier.
    pub fn index_of(&self, sig: &Signature, a: &FiniteSet, t: &Term) -> Option<usize> {
        let node = match t {
            Term::Var(l) => Node::Var(a.index_of(l)?),
            Term::App(name, args) => {
                let o = sig.op(name)?;
                if sig.ops[o].arity != args.len() {
                    return None;
                }
                let cs = args
                    .iter()
                    .map(|c| self.index_of(sig, a, c))
                    .collect::<Option<Vec<_>>>()?;
                Node::Op(o, cs)
            }
        };
        self.pos.get(&node).copied()
    }
}

/// Tuples over `0..all` with at least one entry in `prev..all`, lexicographic.
fn tuples_depth(
    arity: usize,
    all: usize,
    prev: usize,
    kids: &mut Vec<usize>,
    hit: bool,
    emit: &mut dyn FnMut(&[usize]),
) {
    if kids.len() == arity {
        if hit {
            emit(kids);
        }
        return;
    }
    for c in 0..all {
        kids.push(c);
        tuples_depth(arity, all, prev, kids, hit || c >= prev, emit);
        kids.pop();
    }
}

/// Tuples whose sizes sum to exactly `budget`, lexicographic.
fn tuples_size(sizes: &[usize], arity: usize, budget: usize, kids: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    let left = arity - kids.len();
    if left == 0 {
        if budget == 0 {
            emit(kids);
        }
        return;
    }
    for (c, &s) in sizes.iter().enumerate() {
        if s + (left - 1) <= budget {
            kids.push(c);
            tuples_size(sizes, arity, budget - s, kids, emit);
            kids.pop();
        }
    }
}

/// Number of terms within `bound`, saturating.
pub fn term_count(sig: &Signature, bound: Bound, n_vars: usize) -> u128 {
    let consts = sig.ops.iter().filter(|o| o.arity == 0).count() as u128;
    match bound {
        Bound::Depth(d) => {
            if d == 0 {
                return 0;
            }
            // total[k] = terms of depth ≤ k
            let mut total = n_vars as u128 + consts;
            for _ in 2..=d {
                let mut next = n_vars as u128 + consts;
                for o in &sig.ops {
                    if o.arity > 0 {
                        next = next.saturating_add(total.checked_pow(o.arity as u32).unwrap_or(u128::MAX));
                    }
                }
                total = next;
            }
            total
        }
        Bound::Size(s) => {
            // by_size[k] = terms of size exactly k
            let mut by_size = vec![0u128; s + 1];
            if s >= 1 {
                by_size[1] = n_vars as u128 + consts;
            }
            for k in 2..=s {
                let mut c = 0u128;
                for o in &sig.ops {
                    if o.arity > 0 {
                        c = c.saturating_add(compositions(&by_size, o.arity, k - 1));
                    }
                }
                by_size[k] = c;
            }
            by_size.iter().fold(0u128, |a, &b| a.saturating_add(b))
        }
    }
}

/// Number of `arity`-tuples of terms with total size `budget`.
fn compositions(by_size: &[u128], arity: usize, budget: usize) -> u128 {
    if arity == 0 {
        return u128::from(budget == 0);
    }
    let mut c = 0u128;
    for s in 1..=budget.min(by_size.len() - 1) {
        if by_size[s] == 0 {
            continue;
        }
        let rest = compositions(by_size, arity - 1, budget - s);
        c = c.saturating_add(by_size[s].saturating_mul(rest));
    }
    c
}

/// A term as a tree over element labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(l: &str) -> Self {
        Term::Var(l.into())
    }

    pub fn app(op: &str, args: Vec<Term>) -> Self {
        Term::App(op.into(), args)
    }

    pub fn constant(op: &str) -> Self {
        Term::App(op.into(), Vec::new())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(l) => f.write_str(l),
            Term::App(o, args) if args.is_empty() => f.write_str(o),
            Term::App(o, args) => {
                write!(f, "{o}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Left-to-right list of variable occurrences.
pub fn var_list(t: &Term) -> Vec<String> {
    let mut out = Vec::new();
    fn walk(t: &Term, out: &mut Vec<String>) {
        match t {
            Term::Var(v) => out.push(v.clone()),
            Term::App(_, args) => args.iter().for_each(|a| walk(a, out)),
        }
    }
    walk(t, &mut out);
    out
}
