//! Representations `⟨T, E, ⊨, ≤⟩` and their canonical constructions.
//!
//! Validity is checked, not assumed: a [`Representation`] can hold any
//! well-shaped data, and carries a flag recording whether the preorder and
//! soundness axioms were verified.

use crate::error::{Error, Result};
use crate::rel::{FuncTable, Rel};
use crate::relcore::{is_preorder, membership};
use crate::report::{CheckReport, LawCheck, Witness};
use crate::set::{self, FiniteSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    models: Rel,
    leq: Rel,
    validated: bool,
}

impl Representation {
    /// Shape check only: `leq` must be a square relation on `models.tgt`.
    pub fn new(models: Rel, leq: Rel) -> Result<Self> {
        if !leq.src().same(models.tgt()) || !leq.tgt().same(models.tgt()) {
            return Err(Error::mismatch("representation", models.signature(), leq.signature()));
        }
        Ok(Representation {
            models,
            leq,
            validated: false,
        })
    }

    pub fn traces(&self) -> &FiniteSet {
        self.models.src()
    }

    pub fn exprs(&self) -> &FiniteSet {
        self.models.tgt()
    }

    pub fn models(&self) -> &Rel {
        &self.models
    }

    pub fn leq(&self) -> &Rel {
        &self.leq
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// Runs [`validate_representation`]; the flag is set iff every axiom held.
    pub fn validate(mut self) -> Result<(Self, CheckReport)> {
        let report = validate_representation(&self)?;
        self.validated = report.all_hold();
        Ok((self, report))
    }

    /// Like [`validate`](Self::validate) but fails on the first violated axiom.
    pub fn validated(self) -> Result<Self> {
        let (r, report) = self.validate()?;
        match report.first_failure() {
            None => Ok(r),
            Some(l) => Err(Error::Invalid {
                what: "representation",
                detail: l.to_string(),
            }),
        }
    }

    pub(crate) fn trusted(models: Rel, leq: Rel) -> Self {
        Representation {
            models,
            leq,
            validated: true,
        }
    }

    pub(crate) fn require_validated(&self, what: &'static str) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::NotValidated(what))
        }
    }
}

/// Preorder and soundness (`⊨;≤ ⊑ ⊨`). A soundness witness `(t, e)` carries
/// the link `e' ≤ e` with `t ⊨ e'` that produced it.
pub fn validate_representation(r: &Representation) -> Result<CheckReport> {
    let mut report = CheckReport::new();
    report.push(is_preorder(&r.leq)?);
    let reach = r.models.compose(&r.leq)?;
    let inc = reach.is_included(&r.models)?;
    let sound = match inc.witness {
        None => LawCheck::pass("sound"),
        Some((t, e)) => {
            let via = r
                .models
                .matrix()
                .row_ones(t)
                .find(|&e2| r.leq.contains(e2, e))
                .expect("pair came from a composite");
            let w = Witness::of(&reach, (t, e)).with_detail(format!(
                "via {} ≤ {}",
                r.exprs().label(via),
                r.exprs().label(e)
            ));
            LawCheck::fail("sound", Some(w))
        }
    };
    report.push(sound);
    report.scope(format!("|T| = {}, |E| = {}", r.traces().len(), r.exprs().len()));
    Ok(report)
}

/// `⊨\⊨ ⊑ ≤`; the witness `(e, f)` has `I(e) ⊆ I(f)` but not `e ≤ f`.
pub fn is_exact(r: &Representation) -> Result<LawCheck> {
    r.require_validated("representation")?;
    let sc = semantic_containment(r);
    Ok(LawCheck::inclusion("exact", &sc, sc.is_included(&r.leq)?))
}

/// `I(e) = {t | t ⊨ e}`, by label.
pub fn interpret(r: &Representation, e: &str) -> Result<Vec<String>> {
    let j = r.exprs().require(e)?;
    Ok((0..r.traces().len())
        .filter(|&t| r.models.contains(t, j))
        .map(|t| r.traces().label(t).to_string())
        .collect())
}

/// `I` as a function `E → 𝒫(T)`.
pub fn interpretation(r: &Representation, powerset_cap: usize) -> Result<FuncTable> {
    let pt = set::powerset(r.traces(), powerset_cap)?;
    let masks = set::powerset_masks(r.traces());
    let pos: std::collections::HashMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let table = (0..r.exprs().len())
        .map(|e| {
            let m = (0..r.traces().len())
                .filter(|&t| r.models.contains(t, e))
                .fold(0u64, |m, t| m | 1 << t);
            pos[&m]
        })
        .collect();
    FuncTable::new(r.exprs(), &pt, table)
}

/// `∈_T ; (graph I)˘ = ⊨`.
pub fn check_interpretation_identity(r: &Representation, powerset_cap: usize) -> Result<LawCheck> {
    let i = interpretation(r, powerset_cap)?;
    let lhs = membership(r.traces(), powerset_cap)?.compose(&i.cograph())?;
    Ok(LawCheck::equality("interpretation identity", &lhs, &r.models))
}

/// `⊨\⊨`: `(e, f)` iff `I(e) ⊆ I(f)`.
pub fn semantic_containment(r: &Representation) -> Rel {
    r.models.under(&r.models).expect("same source")
}

/// `⊨/⊨`: `(s, t)` iff every expression satisfied by `t` is satisfied by `s`.
pub fn trace_preorder(r: &Representation) -> Rel {
    r.models.over(&r.models).expect("same target")
}

/// `⟨A, B, x, x\x⟩`, exact by construction.
pub fn trivial_representation(x: &Rel) -> Representation {
    let leq = x.under(x).expect("same source");
    Representation::trusted(x.clone(), leq)
}

/// `⟨A, 𝒫(A), ∈, ⊆⟩`.
pub fn membership_representation(a: &FiniteSet, powerset_cap: usize) -> Result<Representation> {
    let m = membership(a, powerset_cap)?;
    Ok(trivial_representation(&m))
}

/// A specification theory: each trace has a characteristic expression.
#[derive(Clone, Debug)]
pub struct SpecTheory {
    chi: FuncTable,
    leq: Rel,
}

impl SpecTheory {
    pub fn new(chi: FuncTable, leq: Rel) -> Result<Self> {
        if !leq.src().same(chi.tgt()) || !leq.tgt().same(chi.tgt()) {
            return Err(Error::mismatch("spec theory", chi.describe(), leq.signature()));
        }
        let p = is_preorder(&leq)?;
        if !p.holds {
            return Err(Error::Invalid {
                what: "spec theory",
                detail: p.to_string(),
            });
        }
        Ok(SpecTheory { chi, leq })
    }

    pub fn chi(&self) -> &FuncTable {
        &self.chi
    }

    pub fn leq(&self) -> &Rel {
        &self.leq
    }
}

/// `⟨T, E, χ_*;≤, ≤⟩`; sound because `≤` is transitive.
pub fn spec_theory_to_representation(s: &SpecTheory) -> Result<Representation> {
    let models = s.chi.graph().compose(&s.leq)?;
    Representation::new(models, s.leq.clone())?.validated()
}
