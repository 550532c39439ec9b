//! Morphisms of representations and the cartesian product.

use crate::error::{Error, Result};
use crate::gen;
use crate::rel::{FuncTable, Rel};
use crate::relcore::{product_set, sum_set, Coproduct, Product};
use crate::report::{CheckReport, LawCheck};
use crate::repr::Representation;

/// `⟨φ, ψ⟩ : R₁ → R₂` with `φ : E₁ → E₂` and `ψ : T₂ → T₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub phi: FuncTable,
    pub psi: Rel,
}

impl Morphism {
    pub fn new(phi: FuncTable, psi: Rel) -> Self {
        Morphism { phi, psi }
    }

    pub fn identity(r: &Representation) -> Self {
        Morphism {
            phi: FuncTable::identity(r.exprs()),
            psi: Rel::identity(r.traces()),
        }
    }
}

fn check_shape(r1: &Representation, r2: &Representation, m: &Morphism) -> Result<()> {
    let ok = m.phi.src().same(r1.exprs())
        && m.phi.tgt().same(r2.exprs())
        && m.psi.src().same(r2.traces())
        && m.psi.tgt().same(r1.traces());
    if ok {
        Ok(())
    } else {
        Err(Error::mismatch(
            "morphism",
            format!("{} / {}", m.phi.describe(), m.psi.signature()),
            format!("{} -> {} / {} -> {}", r1.exprs(), r2.exprs(), r2.traces(), r1.traces()),
        ))
    }
}

/// `φ^*;≤₁ ⊑ ≤₂;φ^*` and `⊨₂;φ^* = ψ;⊨₁`.
pub fn validate_morphism(r1: &Representation, r2: &Representation, m: &Morphism) -> Result<CheckReport> {
    check_shape(r1, r2, m)?;
    let phi_c = m.phi.cograph();
    let lhs = phi_c.compose(r1.leq())?;
    let rhs = r2.leq().compose(&phi_c)?;
    let mut report = CheckReport::new();
    report.push(LawCheck::inclusion("monotone", &lhs, lhs.is_included(&rhs)?));
    report.push(LawCheck::equality(
        "models",
        &r2.models().compose(&phi_c)?,
        &m.psi.compose(r1.models())?,
    ));
    Ok(report)
}

fn require_valid(r1: &Representation, r2: &Representation, m: &Morphism, name: &'static str) -> Result<()> {
    let rep = validate_morphism(r1, r2, m)?;
    match rep.first_failure() {
        None => Ok(()),
        Some(l) => Err(Error::Precondition {
            name,
            detail: l.to_string(),
        }),
    }
}

/// `m' ∘ m = ⟨φ'∘φ, ψ';ψ⟩`; both inputs must validate.
pub fn compose_morphisms(
    r1: &Representation,
    r2: &Representation,
    r3: &Representation,
    m: &Morphism,
    m2: &Morphism,
) -> Result<Morphism> {
    require_valid(r1, r2, m, "first morphism valid")?;
    require_valid(r2, r3, m2, "second morphism valid")?;
    Ok(Morphism {
        phi: m.phi.then(&m2.phi)?,
        psi: m2.psi.compose(&m.psi)?,
    })
}

/// Composition without validation, for equational checks on arbitrary data.
pub fn compose_unchecked(m: &Morphism, m2: &Morphism) -> Result<Morphism> {
    Ok(Morphism {
        phi: m.phi.then(&m2.phi)?,
        psi: m2.psi.compose(&m.psi)?,
    })
}

/// `R₁ × R₂` with its projections.
#[derive(Clone, Debug)]
pub struct ProductRep {
    pub rep: Representation,
    pub pi1: Morphism,
    pub pi2: Morphism,
    pub traces: Coproduct,
    pub exprs: Product,
}

/// `T₁+T₂`, `E₁×E₂`, `⊨⊨ = ι₁^*;⊨₁;π₁^* ∪ ι₂^*;⊨₂;π₂^*`,
/// `≤≤ = π₁_*;≤₁;π₁^* ∩ π₂_*;≤₂;π₂^*`.
pub fn product(r1: &Representation, r2: &Representation) -> Result<ProductRep> {
    r1.require_validated("first factor")?;
    r2.require_validated("second factor")?;
    let traces = sum_set(r1.traces(), r2.traces());
    let exprs = product_set(r1.exprs(), r2.exprs());
    let (i1, i2) = (traces.inl.graph(), traces.inr.graph());
    let (p1, p2) = (exprs.fst.graph(), exprs.snd.graph());
    let models = i1
        .converse()
        .compose(r1.models())?
        .compose(&p1.converse())?
        .union(&i2.converse().compose(r2.models())?.compose(&p2.converse())?)?;
    let leq = p1
        .compose(r1.leq())?
        .compose(&p1.converse())?
        .intersection(&p2.compose(r2.leq())?.compose(&p2.converse())?)?;
    let rep = Representation::new(models, leq)?.validated()?;
    Ok(ProductRep {
        pi1: Morphism::new(exprs.fst.clone(), i1),
        pi2: Morphism::new(exprs.snd.clone(), i2),
        rep,
        traces,
        exprs,
    })
}

/// Default cap on candidate morphisms in the uniqueness search.
pub const UNIQUENESS_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct Pairing {
    pub g: Morphism,
    pub report: CheckReport,
}

/// `Πᵢ ∘ g' = fᵢ` as component equalities.
fn projections_agree(p: &ProductRep, g: &Morphism, f1: &Morphism, f2: &Morphism) -> Result<(bool, bool)> {
    let c1 = compose_unchecked(g, &p.pi1)?;
    let c2 = compose_unchecked(g, &p.pi2)?;
    Ok((
        c1.phi == f1.phi && c2.phi == f2.phi,
        c1.psi == f1.psi && c2.psi == f2.psi,
    ))
}

/// The pairing `g = ⟨φ₁ × φ₂, ι₁^*;ψ₁ ∪ ι₂^*;ψ₂⟩ : R → R₁×R₂` of the legs
/// `fᵢ : R → Rᵢ`, and a report on `Πᵢ∘g = fᵢ` and uniqueness. Uniqueness
/// is exhaustive when the candidate space fits `budget`; otherwise only the
/// supplied `others` are refuted.
pub fn product_universal(
    r: &Representation,
    p: &ProductRep,
    [(r1, f1), (r2, f2)]: [(&Representation, &Morphism); 2],
    budget: u128,
    others: &[Morphism],
) -> Result<Pairing> {
    require_valid(r, r1, f1, "first morphism valid")?;
    require_valid(r, r2, f2, "second morphism valid")?;
    let nb = r2.exprs().len();
    let table = (0..r.exprs().len())
        .map(|e| f1.phi.apply(e) * nb + f2.phi.apply(e))
        .collect();
    let phi = FuncTable::new(r.exprs(), &p.exprs.set, table)?;
    let (i1, i2) = (p.traces.inl.graph(), p.traces.inr.graph());
    let psi = i1
        .converse()
        .compose(&f1.psi)?
        .union(&i2.converse().compose(&f2.psi)?)?;
    let g = Morphism::new(phi, psi);

    let mut report = CheckReport::new();
    report.absorb("pairing ", validate_morphism(r, &p.rep, &g)?);
    let c1 = compose_unchecked(&g, &p.pi1)?;
    let c2 = compose_unchecked(&g, &p.pi2)?;
    report.push(LawCheck::verdict("Π1∘g = f1", c1 == *f1));
    report.push(LawCheck::verdict("Π2∘g = f2", c2 == *f2));

    let n_phi = gen::function_count(r.exprs().len(), p.exprs.set.len());
    let n_psi = gen::relation_count(p.traces.set.len(), r.traces().len());
    let total = n_phi.saturating_mul(n_psi);
    if total <= budget {
        // The equations split by component, so the product space is covered
        // by enumerating each factor once.
        let phis = gen::all_functions(r.exprs(), &p.exprs.set, budget)?;
        let psis = gen::all_relations(&p.traces.set, r.traces(), budget)?;
        let mut phi_ok = Vec::new();
        for ph in &phis {
            let probe = Morphism::new(ph.clone(), g.psi.clone());
            if projections_agree(p, &probe, f1, f2)?.0 {
                phi_ok.push(ph.clone());
            }
        }
        let mut psi_ok = Vec::new();
        for ps in &psis {
            let probe = Morphism::new(g.phi.clone(), ps.clone());
            if projections_agree(p, &probe, f1, f2)?.1 {
                psi_ok.push(ps.clone());
            }
        }
        let mut rivals = 0usize;
        let mut solutions = 0usize;
        for ph in &phi_ok {
            for ps in &psi_ok {
                let cand = Morphism::new(ph.clone(), ps.clone());
                if validate_morphism(r, &p.rep, &cand)?.all_hold() {
                    solutions += 1;
                    if cand != g {
                        rivals += 1;
                    }
                }
            }
        }
        report.push(LawCheck::verdict("unique", solutions == 1 && rivals == 0));
        report.scope(format!(
            "uniqueness exhaustive over {total} candidates ({n_phi} expression maps × {n_psi} trace relations)"
        ));
    } else {
        let mut all = true;
        for o in others {
            let (a, b) = projections_agree(p, o, f1, f2)?;
            if a && b && *o != g {
                all = false;
            }
        }
        report.push(LawCheck::verdict("unique", all));
        report.scope(format!(
            "uniqueness refutation only: {} supplied candidates ({total} exceed budget {budget})",
            others.len()
        ));
    }
    Ok(Pairing { g, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::{is_exact, membership_representation, validate_representation};
    use crate::set::FiniteSet;

    fn rep_a() -> Representation {
        membership_representation(&FiniteSet::new("A", ["a"]).unwrap(), 4).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        let r = rep_a();
        assert!(validate_morphism(&r, &r, &Morphism::identity(&r)).unwrap().all_hold());
    }

    #[test]
    fn product_of_memberships() {
        let (r1, r2) = (rep_a(), rep_a());
        let p = product(&r1, &r2).unwrap();
        assert_eq!(p.rep.traces().len(), 2);
        assert_eq!(p.rep.exprs().len(), 4);
        assert!(validate_representation(&p.rep).unwrap().all_hold());
        assert!(validate_morphism(&p.rep, &r1, &p.pi1).unwrap().all_hold());
        assert!(validate_morphism(&p.rep, &r2, &p.pi2).unwrap().all_hold());
        assert!(is_exact(&p.rep).unwrap().holds);
    }

    #[test]
    fn corrupt_psi_breaks_models_law() {
        let (r1, r2) = (rep_a(), rep_a());
        let p = product(&r1, &r2).unwrap();
        let bad = Morphism::new(p.pi1.phi.clone(), p.pi1.psi.toggled(0, 0));
        let rep = validate_morphism(&p.rep, &r1, &bad).unwrap();
        assert!(rep.holds("monotone"));
        let m = rep.get("models").unwrap();
        assert!(!m.holds);
        assert!(m.witness.is_some());
    }

    #[test]
    fn pairing_with_identity_is_unique() {
        let r = rep_a();
        let p = product(&r, &r).unwrap();
        let id = Morphism::identity(&r);
        let out = product_universal(&r, &p, [(&r, &id), (&r, &id)], UNIQUENESS_BUDGET, &[]).unwrap();
        assert!(out.report.all_hold(), "{}", out.report);
        let back = compose_morphisms(&r, &p.rep, &r, &out.g, &p.pi1).unwrap();
        assert_eq!(back, id);
    }

    #[test]
    fn composition_with_identity() {
        let (r1, r2) = (rep_a(), rep_a());
        let p = product(&r1, &r2).unwrap();
        let id = Morphism::identity(&p.rep);
        let c = compose_morphisms(&p.rep, &p.rep, &r1, &id, &p.pi1).unwrap();
        assert_eq!(c, p.pi1);
    }
}
