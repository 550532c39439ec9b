//! Finite carriers with stable identity.
//!
//! Atomic sets get a fresh id on every construction. Derived sets (sums,
//! products, powersets and functor images) are interned by their recipe, so
//! building `A + B` twice yields the very same carrier and relations over it
//! stay comparable.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Opaque carrier identity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SetId(u64);

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Provenance {
    Atomic,
    Sum(SetId, SetId),
    Product(SetId, SetId),
    Powerset(SetId),
    /// Built by a named recipe (functor images and the like).
    Derived(String),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Recipe {
    Sum(SetId, SetId),
    Product(SetId, SetId),
    Powerset(SetId),
    Derived(String, Vec<SetId>),
}

struct SetData {
    id: SetId,
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    provenance: Provenance,
}

/// An ordered carrier of distinct labels. Cheap to clone.
#[derive(Clone)]
pub struct FiniteSet(Arc<SetData>);

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn interner() -> &'static Mutex<HashMap<Recipe, FiniteSet>> {
    static INTERNER: OnceLock<Mutex<HashMap<Recipe, FiniteSet>>> = OnceLock::new();
    INTERNER.get_or_init(Default::default)
}

fn build(name: String, labels: Vec<String>, provenance: Provenance) -> Result<FiniteSet> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(FiniteSet(Arc::new(SetData {
        id: SetId(NEXT_ID.fetch_add(1, Ordering::Relaxed)),
        name,
        labels,
        index,
        provenance,
    })))
}

fn interned(recipe: Recipe, make: impl FnOnce() -> Result<(String, Vec<String>, Provenance)>) -> Result<FiniteSet> {
    if let Some(s) = interner().lock().unwrap().get(&recipe) {
        return Ok(s.clone());
    }
    // Built outside the lock: `make` may itself intern sub-carriers.
    let (name, labels, prov) = make()?;
    let set = build(name, labels, prov)?;
    let mut map = interner().lock().unwrap();
    Ok(map.entry(recipe).or_insert(set).clone())
}

impl FiniteSet {
    /// A fresh atomic carrier.
    pub fn new<S: Into<String>>(name: &str, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        build(
            name.to_string(),
            labels.into_iter().map(Into::into).collect(),
            Provenance::Atomic,
        )
    }

    /// A fresh atomic carrier with labels `prefix0, prefix1, ...`.
    pub fn indexed(name: &str, prefix: &str, n: usize) -> Self {
        Self::new(name, (0..n).map(|i| format!("{prefix}{i}"))).expect("generated labels are distinct")
    }

    /// Interns a carrier built by a named recipe over `inputs`. The `key`
    /// must determine the labels completely.
    pub fn derived(
        key: &str,
        inputs: &[&FiniteSet],
        make: impl FnOnce() -> Result<(String, Vec<String>)>,
    ) -> Result<Self> {
        let recipe = Recipe::Derived(key.to_string(), inputs.iter().map(|s| s.id()).collect());
        interned(recipe, || {
            let (name, labels) = make()?;
            Ok((name, labels, Provenance::Derived(key.to_string())))
        })
    }

    pub fn id(&self) -> SetId {
        self.0.id
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    pub fn provenance(&self) -> &Provenance {
        &self.0.provenance
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.0.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownElement {
            set: self.name().to_string(),
            label: label.to_string(),
        })
    }

    pub fn same(&self, other: &FiniteSet) -> bool {
        self.id() == other.id()
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for FiniteSet {}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{{{}}}", self.name(), self.id(), self.labels().join(","))
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Disjoint union `A + B`: the elements of `A` tagged `inl`, then those of
/// `B` tagged `inr`.
pub fn sum(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    interned(Recipe::Sum(a.id(), b.id()), || {
        let labels = a
            .labels()
            .iter()
            .map(|l| format!("inl({l})"))
            .chain(b.labels().iter().map(|l| format!("inr({l})")))
            .collect();
        Ok((format!("({a}+{b})"), labels, Provenance::Sum(a.id(), b.id())))
    })
    .expect("tagged labels are distinct")
}

/// Cartesian product in row-major order: `(a_i, b_j)` has index `i·|B| + j`.
pub fn product(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    interned(Recipe::Product(a.id(), b.id()), || {
        let mut labels = Vec::with_capacity(a.len() * b.len());
        for x in a.labels() {
            for y in b.labels() {
                labels.push(format!("({x},{y})"));
            }
        }
        Ok((format!("({a}×{b})"), labels, Provenance::Product(a.id(), b.id())))
    })
    .expect("pair labels are distinct")
}

/// Subsets of `a` as bitmasks over `a`'s indices, ordered by size and then
/// lexicographically by their label-sorted member lists.
pub fn powerset_masks(a: &FiniteSet) -> Vec<u64> {
    let n = a.len();
    assert!(n < 64, "powerset base too large");
    let mut by_label: Vec<usize> = (0..n).collect();
    by_label.sort_by(|&i, &j| a.label(i).cmp(a.label(j)));
    let key = |m: u64| -> (u32, Vec<&str>) {
        let members = by_label
            .iter()
            .filter(|&&i| m >> i & 1 == 1)
            .map(|&i| a.label(i))
            .collect();
        (m.count_ones(), members)
    };
    let mut masks: Vec<u64> = (0..1u64 << n).collect();
    masks.sort_by_cached_key(|&m| key(m));
    masks
}

/// Label of the subset `mask` of `a`: members sorted by label, braces.
pub fn subset_label(a: &FiniteSet, mask: u64) -> String {
    let mut members: Vec<&str> = (0..a.len())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| a.label(i))
        .collect();
    members.sort();
    format!("{{{}}}", members.join(","))
}

/// `𝒫(A)`. Fails when `|A|` exceeds `cap`.
pub fn powerset(a: &FiniteSet, cap: usize) -> Result<FiniteSet> {
    if a.len() > cap {
        return Err(Error::budget(format!("powerset of {a}"), a.len() as u128, cap as u128));
    }
    interned(Recipe::Powerset(a.id()), || {
        let labels = powerset_masks(a).into_iter().map(|m| subset_label(a, m)).collect();
        Ok((format!("P({a})"), labels, Provenance::Powerset(a.id())))
    })
}
