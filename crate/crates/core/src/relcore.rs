//! Canonical constructions over carriers (coproducts, membership) and the
//! law suites for the relation-algebra kernel.

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::gen;
use crate::rel::{FuncTable, Rel};
use crate::report::{CheckReport, LawCheck, Witness};
use crate::set::{self, FiniteSet};

/// `A + B` together with its two injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub set: FiniteSet,
    pub inl: FuncTable,
    pub inr: FuncTable,
}

pub fn sum_set(a: &FiniteSet, b: &FiniteSet) -> Coproduct {
    let s = set::sum(a, b);
    let inl = FuncTable::new(a, &s, (0..a.len()).collect()).expect("in range");
    let inr = FuncTable::new(b, &s, (a.len()..a.len() + b.len()).collect()).expect("in range");
    Coproduct { set: s, inl, inr }
}

/// `A × B` together with its two projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: FiniteSet,
    pub fst: FuncTable,
    pub snd: FuncTable,
}

pub fn product_set(a: &FiniteSet, b: &FiniteSet) -> Product {
    let p = set::product(a, b);
    let nb = b.len();
    let fst = FuncTable::new(&p, a, (0..p.len()).map(|i| i / nb).collect()).expect("in range");
    let snd = FuncTable::new(&p, b, (0..p.len()).map(|i| i % nb).collect()).expect("in range");
    Product { set: p, fst, snd }
}

/// Index of `(i, j)` in `product_set(a, b)`.
pub fn pair_index(b_len: usize, i: usize, j: usize) -> usize {
    i * b_len + j
}

/// The membership relation `∈ : A → 𝒫(A)`.
pub fn membership(a: &FiniteSet, powerset_cap: usize) -> Result<Rel> {
    let p = set::powerset(a, powerset_cap)?;
    let masks = set::powerset_masks(a);
    Ok(Rel::from_fn(a, &p, |x, s| masks[s] >> x & 1 == 1))
}

/// Checks the three relational coproduct axioms for injection graphs
/// `i1 : A₁ → S` and `i2 : A₂ → S`:
/// injectivity `1 = ι_*;ι^*`, disjointness `ι₁_*;ι₂^* = 0`, and cover
/// `1_S ⊑ ι₁^*;ι₁_* ∪ ι₂^*;ι₂_*`.
pub fn coproduct_axioms(i1: &Rel, i2: &Rel) -> Result<CheckReport> {
    if !i1.tgt().same(i2.tgt()) {
        return Err(Error::mismatch("coproduct_axioms", i1.signature(), i2.signature()));
    }
    let s = i1.tgt();
    let mut r = CheckReport::new();
    for (name, i) in [("inl", i1), ("inr", i2)] {
        let back = i.compose(&i.converse())?;
        r.push(LawCheck::equality(
            format!("{name} injective"),
            &Rel::identity(i.src()),
            &back,
        ));
    }
    let cross = i1.compose(&i2.converse())?;
    r.push(LawCheck::equality("disjoint", &cross, &Rel::empty(i1.src(), i2.src())));
    let cover = i1.converse().compose(i1)?.union(&i2.converse().compose(i2)?)?;
    let id = Rel::identity(s);
    r.push(LawCheck::inclusion("cover", &id, id.is_included(&cover)?));
    Ok(r)
}

pub fn check_coproduct_axioms(a: &FiniteSet, b: &FiniteSet) -> Result<CheckReport> {
    let c = sum_set(a, b);
    let mut r = coproduct_axioms(&c.inl.graph(), &c.inr.graph())?;
    r.scope(format!("{} + {} ({} + {} elements)", a, b, a.len(), b.len()));
    Ok(r)
}

/// `1 ⊑ x ∧ x;x ⊑ x`.
pub fn is_preorder(x: &Rel) -> Result<LawCheck> {
    require_square("is_preorder", x)?;
    let id = Rel::identity(x.src());
    let refl = id.is_included(x)?;
    if !refl.holds {
        return Ok(LawCheck::inclusion("preorder", &id, refl));
    }
    Ok(match x.matrix().first_intransitive() {
        None => LawCheck::pass("preorder"),
        Some(p) => LawCheck::fail("preorder", Some(Witness::of(x, p).with_detail("in x;x only"))),
    })
}

fn require_square(op: &'static str, x: &Rel) -> Result<()> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            op,
            src: x.src().to_string(),
            tgt: x.tgt().to_string(),
        });
    }
    Ok(())
}

/// The three preorder characterizations (reflexive and transitive,
/// fixpoint of `*`, fixpoint of the self-residual) and whether they agree.
pub fn preorder_characterizations(x: &Rel) -> Result<CheckReport> {
    require_square("preorder_characterizations", x)?;
    let rt = is_preorder(x)?;
    let star = LawCheck::equality("x = x*", x, &x.star()?);
    let res = LawCheck::equality("x = x\\x", x, &x.under(x)?);
    let agree = rt.holds == star.holds && star.holds == res.holds;
    let mut r = CheckReport::new();
    r.push(LawCheck {
        law: "reflexive and transitive".into(),
        ..rt
    })
    .push(star)
    .push(res)
    .push(LawCheck::verdict("characterizations agree", agree));
    Ok(r)
}

/// Configuration of [`check_relcore_laws`].
#[derive(Clone, Debug)]
pub struct LawConfig {
    /// Every carrier size in `1..=exhaustive_max` is enumerated exhaustively.
    pub exhaustive_max: usize,
    /// Carrier size of the random samples.
    pub sample_size: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            exhaustive_max: 2,
            sample_size: 4,
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    /// Debug dumps of every operand.
    pub operands: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct LawSuiteReport {
    pub checked: usize,
    pub violations: Vec<LawViolation>,
    pub scope: Vec<String>,
}

impl LawSuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const GALOIS: &str = "galois: y ⊑ x\\z iff x;y ⊑ z";
const DUAL_GALOIS: &str = "dual galois: x ⊑ z/y iff x;y ⊑ z";
const FUN_RES: &str = "function residual: f_*;(x\\y);g^* = (x;f^*)\\(y;g^*)";

/// Law names used by [`check_relcore_laws`], in report order.
pub const RELCORE_LAWS: [&str; 3] = [GALOIS, DUAL_GALOIS, FUN_RES];

fn galois_ok(x: &Rel, y: &Rel, z: &Rel) -> Result<bool> {
    let lhs = y.is_included(&x.under(z)?)?.holds;
    let rhs = x.compose(y)?.is_included(z)?.holds;
    Ok(lhs == rhs)
}

/// `x : A→B`, `y : B→C`, `z : A→C`; checks `x ⊑ z/y iff x;y ⊑ z`.
fn dual_galois_ok(x: &Rel, y: &Rel, z: &Rel) -> Result<bool> {
    let lhs = x.is_included(&z.over(y)?)?.holds;
    let rhs = x.compose(y)?.is_included(z)?.holds;
    Ok(lhs == rhs)
}

/// `x : A→B`, `y : A→C`, `f : D→B`, `g : E→C`.
fn fun_res_ok(x: &Rel, y: &Rel, f: &FuncTable, g: &FuncTable) -> Result<bool> {
    let lhs = f.graph().compose(&x.under(y)?)?.compose(&g.cograph())?;
    let rhs = x.compose(&f.cograph())?.under(&y.compose(&g.cograph())?)?;
    Ok(lhs == rhs)
}

/// Checks the residual Galois connection (both sides) and the
/// function/residual identity, exhaustively at small sizes and on seeded
/// random samples. Violations are report content, not errors.
pub fn check_relcore_laws(cfg: &LawConfig) -> Result<LawSuiteReport> {
    if cfg.exhaustive_max == 0 || cfg.sample_size == 0 {
        return Err(Error::Precondition {
            name: "probe sizes",
            detail: "probe sizes must be at least 1".into(),
        });
    }
    let mut rep = LawSuiteReport::default();
    let sets: Vec<FiniteSet> = (1..=cfg.exhaustive_max)
        .flat_map(|n| {
            ["A", "B", "C"]
                .into_iter()
                .map(move |name| FiniteSet::indexed(name, &name.to_lowercase(), n))
        })
        .collect();
    let by_size = |name: &str, n: usize| -> &FiniteSet {
        sets.iter()
            .find(|s| s.name() == name && s.len() == n)
            .expect("built above")
    };
    let budget = 1u128 << 16;
    let sizes: Vec<usize> = (1..=cfg.exhaustive_max).collect();
    for &na in &sizes {
        for &nb in &sizes {
            for &nc in &sizes {
                let (a, b, c) = (by_size("A", na), by_size("B", nb), by_size("C", nc));
                let xs = gen::all_relations(a, b, budget)?;
                let ys = gen::all_relations(b, c, budget)?;
                let zs = gen::all_relations(a, c, budget)?;
                for x in &xs {
                    for y in &ys {
                        for z in &zs {
                            rep.checked += 2;
                            if !galois_ok(x, y, z)? {
                                rep.violations.push(violation(GALOIS, &[x, y, z]));
                            }
                            if !dual_galois_ok(x, y, z)? {
                                rep.violations.push(violation(DUAL_GALOIS, &[x, y, z]));
                            }
                        }
                    }
                }
                // function residual: x : A→B, y : A→C, f : C'→B, g : C→C
                let ys_ac = gen::all_relations(a, c, budget)?;
                let fs = gen::all_functions(c, b, budget)?;
                let gs = gen::all_functions(c, c, budget)?;
                for x in &xs {
                    for y in &ys_ac {
                        for f in &fs {
                            for g in &gs {
                                rep.checked += 1;
                                if !fun_res_ok(x, y, f, g)? {
                                    rep.violations.push(fun_violation(x, y, f, g));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rep.scope.push(format!(
        "exhaustive: all relations and functions between carriers of sizes 1..={}",
        cfg.exhaustive_max
    ));

    let n = cfg.sample_size;
    let (a, b, c) = (
        FiniteSet::indexed("A", "a", n),
        FiniteSet::indexed("B", "b", n),
        FiniteSet::indexed("C", "c", n),
    );
    for i in 0..cfg.samples {
        let mut rng = gen::rng(cfg.seed, i as u64);
        let x = gen::random_rel(&mut rng, &a, &b, 0.5);
        let y = gen::random_rel(&mut rng, &b, &c, 0.5);
        let y2 = gen::random_rel(&mut rng, &a, &c, 0.5);
        // dense z makes the Galois inclusions hold often enough to matter
        let z = gen::random_rel(&mut rng, &a, &c, 0.8);
        let f = gen::random_function(&mut rng, &c, &b).expect("nonempty");
        let g = gen::random_function(&mut rng, &c, &c).expect("nonempty");
        rep.checked += 3;
        if !galois_ok(&x, &y, &z)? {
            rep.violations.push(violation(GALOIS, &[&x, &y, &z]));
        }
        if !dual_galois_ok(&x, &y, &z)? {
            rep.violations.push(violation(DUAL_GALOIS, &[&x, &y, &z]));
        }
        if !fun_res_ok(&x, &y2, &f, &g)? {
            rep.violations.push(fun_violation(&x, &y2, &f, &g));
        }
    }
    rep.scope.push(format!(
        "sampled: {} random instances at size {} (seed {})",
        cfg.samples, n, cfg.seed
    ));
    Ok(rep)
}

fn violation(law: &'static str, rels: &[&Rel]) -> LawViolation {
    LawViolation {
        law,
        operands: rels.iter().map(|r| format!("{r:?}")).collect(),
    }
}

fn fun_violation(x: &Rel, y: &Rel, f: &FuncTable, g: &FuncTable) -> LawViolation {
    LawViolation {
        law: FUN_RES,
        operands: vec![format!("{x:?}"), format!("{y:?}"), format!("{f:?}"), format!("{g:?}")],
    }
}

/// A relation given by its matrix over the canonical carriers of
/// `src`/`tgt`; convenience for suites that build matrices directly.
pub fn rel_from_matrix(src: &FiniteSet, tgt: &FiniteSet, m: BitMatrix) -> Result<Rel> {
    Rel::from_matrix(src, tgt, m)
}
