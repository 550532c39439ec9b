//! Reductions between representations, exactness transfer, and syntactic
//! closures.
//!
//! A reduction `⟨φ, τ, ψ⟩ : R₁ ⇝ R₂` transports exactness backwards: if `R₂`
//! is exact, so is `R₁`. [`transfer_exactness`] re-executes that argument
//! step by step on concrete matrices and compares its conclusion with a
//! direct exactness computation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gen::{self, SuiteRng};
use crate::morphism::{validate_morphism, Morphism};
use crate::rel::{FuncTable, Rel};
use crate::report::{CheckReport, LawCheck};
use crate::repr::{is_exact, semantic_containment, trivial_representation, Representation};
use crate::set::FiniteSet;

/// `φ : E₁ → E₂`, `τ : E₂ → E₁`, `ψ : T₂ → T₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub phi: FuncTable,
    pub tau: FuncTable,
    pub psi: Rel,
}

impl Reduction {
    pub fn new(phi: FuncTable, tau: FuncTable, psi: Rel) -> Self {
        Reduction { phi, tau, psi }
    }

    /// `⟨id, id, 1⟩` on `R`.
    pub fn identity(r: &Representation) -> Self {
        Reduction {
            phi: FuncTable::identity(r.exprs()),
            tau: FuncTable::identity(r.exprs()),
            psi: Rel::identity(r.traces()),
        }
    }
}

fn check_shape(r1: &Representation, r2: &Representation, r: &Reduction) -> Result<()> {
    let ok = r.phi.src().same(r1.exprs())
        && r.phi.tgt().same(r2.exprs())
        && r.tau.src().same(r2.exprs())
        && r.tau.tgt().same(r1.exprs())
        && r.psi.src().same(r2.traces())
        && r.psi.tgt().same(r1.traces());
    if ok {
        Ok(())
    } else {
        Err(Error::mismatch(
            "reduction",
            format!("{} / {} / {}", r.phi.describe(), r.tau.describe(), r.psi.signature()),
            format!("{} -> {}", r1.exprs(), r2.exprs()),
        ))
    }
}

pub const LAW_TAU_MONOTONE: &str = "tau monotone";
pub const LAW_MODELS: &str = "models";
pub const LAW_ROUND_TRIP_BELOW: &str = "tau(phi e) ≤ e";
pub const LAW_ROUND_TRIP_ABOVE: &str = "e ≤ tau(phi e)";

/// The four reduction laws: `τ^*;≤₂ ⊑ ≤₁;τ^*`, `⊨₂;φ^* = ψ;⊨₁`,
/// `τ^*;φ^* ⊑ ≤₁` and `φ_*;τ_* ⊑ ≤₁`.
pub fn validate_reduction(r1: &Representation, r2: &Representation, r: &Reduction) -> Result<CheckReport> {
    check_shape(r1, r2, r)?;
    let tau_c = r.tau.cograph();
    let phi_c = r.phi.cograph();
    let mut rep = CheckReport::new();
    let lhs = tau_c.compose(r2.leq())?;
    let rhs = r1.leq().compose(&tau_c)?;
    rep.push(LawCheck::inclusion(LAW_TAU_MONOTONE, &lhs, lhs.is_included(&rhs)?));
    rep.push(LawCheck::equality(
        LAW_MODELS,
        &r2.models().compose(&phi_c)?,
        &r.psi.compose(r1.models())?,
    ));
    let below = tau_c.compose(&phi_c)?;
    rep.push(LawCheck::inclusion(
        LAW_ROUND_TRIP_BELOW,
        &below,
        below.is_included(r1.leq())?,
    ));
    let above = r.phi.graph().compose(&r.tau.graph())?;
    rep.push(LawCheck::inclusion(
        LAW_ROUND_TRIP_ABOVE,
        &above,
        above.is_included(r1.leq())?,
    ));
    Ok(rep)
}

fn require_valid(r1: &Representation, r2: &Representation, r: &Reduction, name: &'static str) -> Result<()> {
    match validate_reduction(r1, r2, r)?.first_failure() {
        None => Ok(()),
        Some(l) => Err(Error::Precondition {
            name,
            detail: l.to_string(),
        }),
    }
}

/// `⟨φ'∘φ, τ∘τ', ψ';ψ⟩ : R₁ ⇝ R₃`; both inputs must validate.
pub fn compose_reductions(
    r1: &Representation,
    r2: &Representation,
    r3: &Representation,
    a: &Reduction,
    b: &Reduction,
) -> Result<Reduction> {
    require_valid(r1, r2, a, "first reduction valid")?;
    require_valid(r2, r3, b, "second reduction valid")?;
    Ok(Reduction {
        phi: a.phi.then(&b.phi)?,
        tau: b.tau.then(&a.tau)?,
        psi: b.psi.compose(&a.psi)?,
    })
}

/// `⟨id, id, 1⟩ : R ⇝ trivial(⊨_R)`. Fails, naming the violated law, when
/// `R` is not exact.
pub fn self_reduction(r: &Representation) -> Result<(Reduction, Representation)> {
    r.require_validated("representation")?;
    let target = trivial_representation(r.models());
    let red = Reduction::identity(r);
    match validate_reduction(r, &target, &red)?.first_failure() {
        None => Ok((red, target)),
        Some(l) => Err(Error::Precondition {
            name: "exact",
            detail: format!("self-reduction breaks {l}"),
        }),
    }
}

/// Outcome of [`transfer_exactness`].
#[derive(Clone, Debug)]
pub struct Transfer {
    /// One verdict per step of the derivation of `⊨₁\⊨₁ ⊑ ≤₁`.
    pub chain: CheckReport,
    /// `is_exact(R₁)` computed directly.
    pub direct: LawCheck,
}

impl Transfer {
    pub fn exact(&self) -> bool {
        self.direct.holds
    }
}

/// Given a valid reduction into an exact `R₂`, derives exactness of `R₁`
/// along
///
/// ```text
/// ⊨₁\⊨₁ ⊑ (⊨₂;φ^*)\(⊨₂;φ^*) = φ_*;(⊨₂\⊨₂);φ^* = φ_*;≤₂;φ^*
///       ⊑ φ_*;τ_*;τ^*;≤₂;φ^* ⊑ φ_*;τ_*;≤₁;τ^*;φ^* ⊑ ≤₁
/// ```
///
/// and cross-checks against `is_exact(R₁)`. Any failed step or a
/// disagreement is a [`Error::TheoremInconsistency`].
pub fn transfer_exactness(r1: &Representation, r2: &Representation, r: &Reduction) -> Result<Transfer> {
    require_valid(r1, r2, r, "reduction valid")?;
    r2.require_validated("target representation")?;
    let target = is_exact(r2)?;
    if !target.holds {
        return Err(Error::Precondition {
            name: "target exact",
            detail: target.to_string(),
        });
    }
    let r1 = if r1.is_validated() {
        r1.clone()
    } else {
        r1.clone().validated()?
    };

    let (phi_g, phi_c) = (r.phi.graph(), r.phi.cograph());
    let (tau_g, tau_c) = (r.tau.graph(), r.tau.cograph());
    let sc1 = semantic_containment(&r1);
    let m2phi = r2.models().compose(&phi_c)?;
    let s1 = m2phi.under(&m2phi)?;
    let s2 = phi_g.compose(&semantic_containment(r2))?.compose(&phi_c)?;
    let s3 = phi_g.compose(r2.leq())?.compose(&phi_c)?;
    let phi_tau = phi_g.compose(&tau_g)?;
    let s4 = phi_tau.compose(&tau_c)?.compose(r2.leq())?.compose(&phi_c)?;
    let s5 = phi_tau.compose(r1.leq())?.compose(&tau_c)?.compose(&phi_c)?;

    let mut chain = CheckReport::new();
    chain.push(LawCheck::inclusion(
        "step 1: residual of ψ-image",
        &sc1,
        sc1.is_included(&s1)?,
    ));
    chain.push(LawCheck::equality("step 2: function residual", &s1, &s2));
    chain.push(LawCheck::equality("step 3: target exact", &s2, &s3));
    chain.push(LawCheck::inclusion("step 4: tau total", &s3, s3.is_included(&s4)?));
    chain.push(LawCheck::inclusion("step 5: tau monotone", &s4, s4.is_included(&s5)?));
    chain.push(LawCheck::inclusion(
        "step 6: round trips",
        &s5,
        s5.is_included(r1.leq())?,
    ));

    let direct = is_exact(&r1)?;
    if let Some(step) = chain.first_failure() {
        return Err(Error::TheoremInconsistency(format!(
            "exactness transfer failed at {step}; direct verdict {}",
            direct.holds
        )));
    }
    if !direct.holds {
        return Err(Error::TheoremInconsistency(format!(
            "derivation concluded exactness but direct check found {direct}"
        )));
    }
    Ok(Transfer { chain, direct })
}

pub const LAW_CLOSURE_COVER: &str = "models covered by down";
pub const LAW_CLOSURE_BELOW: &str = "down below";

fn require_shared(r1: &Representation, r2: &Representation, down: &FuncTable) -> Result<()> {
    if !r1.traces().same(r2.traces()) || !r1.exprs().same(r2.exprs()) {
        return Err(Error::mismatch(
            "syntactic closure",
            format!("{} / {}", r1.traces(), r1.exprs()),
            format!("{} / {}", r2.traces(), r2.exprs()),
        ));
    }
    if !down.src().same(r1.exprs()) || !down.tgt().same(r1.exprs()) {
        return Err(Error::mismatch("syntactic closure", down.describe(), r1.exprs()));
    }
    Ok(())
}

/// `⊨₁ ⊑ ⊨₂;↓^*` and `↓^* ⊑ ≤₁`, over shared carriers.
pub fn validate_syntactic_closure(r1: &Representation, r2: &Representation, down: &FuncTable) -> Result<CheckReport> {
    require_shared(r1, r2, down)?;
    let dc = down.cograph();
    let mut rep = CheckReport::new();
    let cover = r2.models().compose(&dc)?;
    rep.push(LawCheck::inclusion(
        LAW_CLOSURE_COVER,
        r1.models(),
        r1.models().is_included(&cover)?,
    ));
    rep.push(LawCheck::inclusion(LAW_CLOSURE_BELOW, &dc, dc.is_included(r1.leq())?));
    Ok(rep)
}

/// The side conditions under which closures and reductions coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureHypotheses {
    pub leq_included: LawCheck,
    pub models_included: LawCheck,
    pub target_exact: LawCheck,
}

impl ClosureHypotheses {
    pub fn check(r1: &Representation, r2: &Representation) -> Result<Self> {
        if !r1.traces().same(r2.traces()) || !r1.exprs().same(r2.exprs()) {
            return Err(Error::mismatch(
                "closure hypotheses",
                format!("{} / {}", r1.traces(), r1.exprs()),
                format!("{} / {}", r2.traces(), r2.exprs()),
            ));
        }
        let target_exact = if r2.is_validated() {
            is_exact(r2)?
        } else {
            LawCheck::fail("target exact", None)
        };
        Ok(ClosureHypotheses {
            leq_included: LawCheck::inclusion("leq2 ⊑ leq1", r2.leq(), r2.leq().is_included(r1.leq())?),
            models_included: LawCheck::inclusion(
                "models2 ⊑ models1",
                r2.models(),
                r2.models().is_included(r1.models())?,
            ),
            target_exact: LawCheck {
                law: "target exact".into(),
                ..target_exact
            },
        })
    }

    pub fn all_hold(&self) -> bool {
        self.leq_included.holds && self.models_included.holds && self.target_exact.holds
    }
}

/// `⟨↓, id, 1⟩`.
pub fn closure_as_reduction(r: &Representation, down: &FuncTable) -> Reduction {
    Reduction {
        phi: down.clone(),
        tau: FuncTable::identity(r.exprs()),
        psi: Rel::identity(r.traces()),
    }
}

#[derive(Clone, Debug)]
pub struct ClosureEquivalence {
    pub hypotheses: ClosureHypotheses,
    pub reduction: CheckReport,
    pub closure: CheckReport,
}

impl ClosureEquivalence {
    /// `Some(agree)` when the hypotheses hold, `None` when the claim is refused.
    pub fn equivalent(&self) -> Option<bool> {
        self.hypotheses
            .all_hold()
            .then(|| self.reduction.all_hold() == self.closure.all_hold())
    }

    pub fn report(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let h = &self.hypotheses;
        r.push(h.leq_included.clone())
            .push(h.models_included.clone())
            .push(h.target_exact.clone());
        r.absorb("reduction: ", self.reduction.clone());
        r.absorb("closure: ", self.closure.clone());
        match self.equivalent() {
            Some(e) => {
                r.push(LawCheck::verdict("reduction iff closure", e));
            }
            None => {
                r.finding(format!(
                    "hypotheses fail; equivalence not claimed (reduction valid: {}, closure valid: {})",
                    self.reduction.all_hold(),
                    self.closure.all_hold()
                ));
            }
        }
        r
    }
}

/// Compares reduction-validity of `⟨↓, id, 1⟩` with closure-validity of `↓`.
/// Under the hypotheses a disagreement is a theorem inconsistency.
pub fn closure_reduction_equivalence(
    r1: &Representation,
    r2: &Representation,
    down: &FuncTable,
) -> Result<ClosureEquivalence> {
    let hypotheses = ClosureHypotheses::check(r1, r2)?;
    let reduction = validate_reduction(r1, r2, &closure_as_reduction(r1, down))?;
    let closure = validate_syntactic_closure(r1, r2, down)?;
    let out = ClosureEquivalence {
        hypotheses,
        reduction,
        closure,
    };
    if out.equivalent() == Some(false) {
        return Err(Error::TheoremInconsistency(format!(
            "closure and reduction verdicts differ for {}: reduction {}, closure {}",
            down.describe(),
            out.reduction.all_hold(),
            out.closure.all_hold()
        )));
    }
    Ok(out)
}

/// Evaluates `⟨φ, ψ⟩ : R₁ → R₂` and `⟨τ, ψ˘⟩ : R₂ → R₁` as morphism
/// candidates. When both sides are exact, `⟨φ, ψ⟩` must be a morphism.
pub fn reduction_morphism_candidates(r1: &Representation, r2: &Representation, r: &Reduction) -> Result<CheckReport> {
    require_valid(r1, r2, r, "reduction valid")?;
    let fwd = Morphism::new(r.phi.clone(), r.psi.clone());
    let bwd = Morphism::new(r.tau.clone(), r.psi.converse());
    let mut rep = CheckReport::new();
    let f = validate_morphism(r1, r2, &fwd)?;
    let f_ok = f.all_hold();
    rep.absorb("⟨phi,psi⟩ ", f);
    rep.absorb("⟨tau,psi˘⟩ ", validate_morphism(r2, r1, &bwd)?);
    let exact = |r: &Representation| -> Result<bool> { Ok(r.is_validated() && is_exact(r)?.holds) };
    if exact(r1)? && exact(r2)? {
        if !f_ok {
            return Err(Error::TheoremInconsistency(
                "both sides exact but ⟨phi,psi⟩ is not a morphism".into(),
            ));
        }
        rep.finding("both representations exact: ⟨phi,psi⟩ is a morphism");
    }
    Ok(rep)
}

/// A reduction together with its endpoints.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub source: Representation,
    pub target: Representation,
    pub reduction: Reduction,
}

/// Sizes for [`generate_reduction_instance`]. The source carriers are at
/// least as large as the target ones. With no target traces there is no
/// surjection from a nonempty source, so `traces = 0` needs `extra_traces = 0`.
#[derive(Clone, Copy, Debug)]
pub struct InstanceShape {
    pub traces: usize,
    pub exprs: usize,
    pub extra_traces: usize,
    pub extra_exprs: usize,
}

/// Builds `(R₁, r, R₂)` backwards from a random exact `R₂ = trivial(x)`:
/// `ψ = h^*` for a surjection `h : T₁ → T₂`, `⊨₁ = h_*;⊨₂;φ^*`, `τ`
/// injective with `φ(τ e)` equivalent to `e`, and `≤₁` the closure of the
/// `τ`-image of `≤₂`, the round-trip pairs and random sound pairs.
pub fn generate_reduction_instance(rng: &mut SuiteRng, shape: InstanceShape) -> ReductionInstance {
    let t2 = FiniteSet::indexed("T2", "s", shape.traces);
    let e2 = FiniteSet::indexed("E2", "f", shape.exprs);
    let t1 = FiniteSet::indexed("T1", "t", shape.traces + shape.extra_traces);
    let e1 = FiniteSet::indexed("E1", "e", shape.exprs + shape.extra_exprs);
    let x2 = gen::random_rel(rng, &t2, &e2, 0.5);
    let target = trivial_representation(&x2);
    let leq2 = target.leq().clone();

    let h = gen::random_surjection(rng, &t1, &t2).expect("traces = 0 needs extra_traces = 0");
    let psi = h.cograph();

    // τ: a random injection E2 → E1.
    let mut slots: Vec<usize> = (0..e1.len()).collect();
    for i in (1..slots.len()).rev() {
        let j = rng.gen_range(0..=i);
        slots.swap(i, j);
    }
    let tau = FuncTable::new(&e2, &e1, slots[..e2.len()].to_vec()).expect("in range");
    let mut phi_table: Vec<usize> = (0..e1.len()).map(|_| rng.gen_range(0..e2.len())).collect();
    for f in 0..e2.len() {
        let class: Vec<usize> = (0..e2.len())
            .filter(|&g| leq2.contains(f, g) && leq2.contains(g, f))
            .collect();
        phi_table[tau.apply(f)] = class[rng.gen_range(0..class.len())];
    }
    let phi = FuncTable::new(&e1, &e2, phi_table).expect("in range");
    let models1 = h
        .graph()
        .compose(&x2)
        .and_then(|m| m.compose(&phi.cograph()))
        .expect("chainable");

    let sound = models1.under(&models1).expect("same source");
    let mut seed_pairs: Vec<(usize, usize)> = leq2.pairs().map(|(a, b)| (tau.apply(a), tau.apply(b))).collect();
    for e in 0..e1.len() {
        let back = tau.apply(phi.apply(e));
        seed_pairs.push((e, back));
        seed_pairs.push((back, e));
    }
    seed_pairs.extend(sound.pairs().filter(|_| rng.gen_bool(0.3)));
    let leq1 = Rel::from_index_pairs(&e1, &e1, seed_pairs)
        .and_then(|r| r.star())
        .expect("square");
    let source = Representation::new(models1, leq1).expect("shaped");
    ReductionInstance {
        source,
        target,
        reduction: Reduction::new(phi, tau, psi),
    }
}

/// Two representations on shared carriers satisfying the closure
/// hypotheses: `R₂ = trivial(x)`, `≤₁ = (≤₂ ∪ random)*`,
/// `⊨₁ = (⊨₂ ∪ random);≤₁`.
pub fn generate_closure_pair(rng: &mut SuiteRng, traces: usize, exprs: usize) -> (Representation, Representation) {
    let t = FiniteSet::indexed("T", "t", traces);
    let e = FiniteSet::indexed("E", "e", exprs);
    let x2 = gen::random_rel(rng, &t, &e, 0.4);
    let r2 = trivial_representation(&x2);
    let leq1 = r2
        .leq()
        .union(&gen::random_rel(rng, &e, &e, 0.15))
        .and_then(|r| r.star())
        .expect("square");
    let models1 = x2
        .union(&gen::random_rel(rng, &t, &e, 0.15))
        .and_then(|m| m.compose(&leq1))
        .expect("chainable");
    let r1 = Representation::new(models1, leq1).expect("shaped");
    (r1, r2)
}

/// Smallest instance (in enumeration order) of a valid reduction whose
/// `⟨φ, ψ⟩` is not monotone. Searches all representations with at most
/// `max_traces` traces and `max_exprs` expressions.
pub fn search_non_morphism_reduction(max_traces: usize, max_exprs: usize) -> Result<Option<ReductionInstance>> {
    const BUDGET: u128 = 1 << 16;
    for ne in 1..=max_exprs {
        for nt in 0..=max_traces {
            let t = FiniteSet::indexed("T", "t", nt);
            let e = FiniteSet::indexed("E", "e", ne);
            let reps = valid_representations(&t, &e, BUDGET)?;
            let phis = gen::all_functions(&e, &e, BUDGET)?;
            let psis = gen::all_relations(&t, &t, BUDGET)?;
            for r1 in &reps {
                for r2 in &reps {
                    for phi in &phis {
                        for tau in &phis {
                            for psi in &psis {
                                let red = Reduction::new(phi.clone(), tau.clone(), psi.clone());
                                if !validate_reduction(r1, r2, &red)?.all_hold() {
                                    continue;
                                }
                                let m = Morphism::new(phi.clone(), psi.clone());
                                if !validate_morphism(r1, r2, &m)?.holds("monotone") {
                                    return Ok(Some(ReductionInstance {
                                        source: r1.clone(),
                                        target: r2.clone(),
                                        reduction: red,
                                    }));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Every valid representation over the given carriers.
pub fn valid_representations(t: &FiniteSet, e: &FiniteSet, budget: u128) -> Result<Vec<Representation>> {
    let mut out = Vec::new();
    let preorders: Vec<Rel> = gen::all_relations(e, e, budget)?
        .into_iter()
        .filter(|r| r.star().map(|s| s == *r).unwrap_or(false))
        .collect();
    let models = gen::all_relations(t, e, budget)?;
    for leq in &preorders {
        for m in &models {
            let r = Representation::new(m.clone(), leq.clone())?;
            let (r, rep) = r.validate()?;
            if rep.all_hold() {
                out.push(r);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::membership_representation;

    /// `T = {t}`, `E = {e0, e1}`, `⊨₂ = {(t, e1)}`, `≤₁` full, `↓ = const e1`.
    fn two_element() -> (Representation, Representation, FuncTable) {
        let t = FiniteSet::new("T", ["t"]).unwrap();
        let e = FiniteSet::new("E", ["e0", "e1"]).unwrap();
        let m2 = Rel::from_pairs(&t, &e, [("t", "e1")]).unwrap();
        let r2 = trivial_representation(&m2);
        let r1 = Representation::new(Rel::full(&t, &e), Rel::full(&e, &e))
            .unwrap()
            .validated()
            .unwrap();
        let down = FuncTable::from_labels(&e, &e, [("e0", "e1"), ("e1", "e1")]).unwrap();
        (r1, r2, down)
    }

    #[test]
    fn two_element_closure() {
        let (r1, r2, down) = two_element();
        assert!(validate_syntactic_closure(&r1, &r2, &down).unwrap().all_hold());
        let red = closure_as_reduction(&r1, &down);
        assert!(validate_reduction(&r1, &r2, &red).unwrap().all_hold());
        let eq = closure_reduction_equivalence(&r1, &r2, &down).unwrap();
        assert_eq!(eq.equivalent(), Some(true));
        let tr = transfer_exactness(&r1, &r2, &red).unwrap();
        assert!(tr.exact());
        assert!(tr.chain.all_hold());
    }

    #[test]
    fn closure_mutation_witness() {
        let (r1, r2, down) = two_element();
        let leq = r1.leq().toggled(1, 0);
        let r1 = Representation::new(r1.models().clone(), leq)
            .unwrap()
            .validated()
            .unwrap();
        let rep = validate_syntactic_closure(&r1, &r2, &down).unwrap();
        let l = rep.get(LAW_CLOSURE_BELOW).unwrap();
        assert!(!l.holds);
        let w = l.witness.as_ref().unwrap();
        assert_eq!((w.left.as_str(), w.right.as_str()), ("e1", "e0"));
    }

    #[test]
    fn identity_closure() {
        let (_, r2, _) = two_element();
        let id = FuncTable::identity(r2.exprs());
        assert!(validate_syntactic_closure(&r2, &r2, &id).unwrap().all_hold());
    }

    #[test]
    fn refused_equivalence_when_models_not_included() {
        let (r1, r2, down) = two_element();
        // swap roles: ⊨₂ is now full, ⊨₁ is not above it
        let eq = closure_reduction_equivalence(&r2, &r1, &down);
        let eq = match eq {
            Ok(eq) => eq,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(eq.equivalent(), None);
        assert!(!eq.report().findings.is_empty());
    }

    #[test]
    fn self_reduction_of_membership() {
        let a = FiniteSet::new("A", ["a", "b"]).unwrap();
        let r = membership_representation(&a, 4).unwrap();
        let (red, target) = self_reduction(&r).unwrap();
        assert!(validate_reduction(&r, &target, &red).unwrap().all_hold());
    }

    #[test]
    fn self_reduction_of_non_exact_names_law() {
        let t = FiniteSet::new("T", ["t"]).unwrap();
        let e = FiniteSet::new("E", ["e0", "e1"]).unwrap();
        let r = Representation::new(Rel::full(&t, &e), Rel::identity(&e))
            .unwrap()
            .validated()
            .unwrap();
        match self_reduction(&r).unwrap_err() {
            Error::Precondition { name, detail } => {
                assert_eq!(name, "exact");
                assert!(detail.contains(LAW_TAU_MONOTONE), "{detail}");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn broken_tau_monotonicity() {
        let a = FiniteSet::new("A", ["a", "b"]).unwrap();
        let r = membership_representation(&a, 4).unwrap();
        let (red, target) = self_reduction(&r).unwrap();
        // drop {} ⊆ {a} from ≤₁
        let leq = r.leq().toggled(0, 1);
        let r1 = Representation::new(r.models().clone(), leq).unwrap();
        let rep = validate_reduction(&r1, &target, &red).unwrap();
        assert!(!rep.holds(LAW_TAU_MONOTONE));
        assert!(rep.get(LAW_TAU_MONOTONE).unwrap().witness.is_some());
    }

    #[test]
    fn generated_instances_are_valid_reductions() {
        for s in 0..30 {
            let inst = generate_reduction_instance(
                &mut gen::rng(3, s),
                InstanceShape {
                    traces: 3,
                    exprs: 3,
                    extra_traces: 1,
                    extra_exprs: 2,
                },
            );
            let rep = validate_reduction(&inst.source, &inst.target, &inst.reduction).unwrap();
            assert!(rep.all_hold(), "{rep}");
            assert!(transfer_exactness(&inst.source, &inst.target, &inst.reduction)
                .unwrap()
                .exact());
        }
    }

    #[test]
    fn composition_with_identity() {
        let inst = generate_reduction_instance(
            &mut gen::rng(9, 0),
            InstanceShape {
                traces: 2,
                exprs: 2,
                extra_traces: 1,
                extra_exprs: 1,
            },
        );
        let src = inst.source.clone().validated().unwrap();
        let id = Reduction::identity(&inst.target);
        let c = compose_reductions(&src, &inst.target, &inst.target, &inst.reduction, &id).unwrap();
        assert_eq!(c, inst.reduction);
    }

    #[test]
    fn non_morphism_reduction_exists() {
        let inst = search_non_morphism_reduction(1, 2).unwrap().expect("found");
        let rep = reduction_morphism_candidates(&inst.source, &inst.target, &inst.reduction).unwrap();
        assert!(!rep.holds("⟨phi,psi⟩ monotone"));
    }
}
