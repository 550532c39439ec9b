//! The acceptance criteria, each run against its own time bound.

use std::process::ExitCode;
use std::time::Duration;

use rand::Rng;
use reprkit::functor::{Bound, Functor, Signature};
use reprkit::gen::{self, SuiteRng};
use reprkit::hor::ka::{ka_gap_report, ka_hor, shipped_axioms, KaConfig, LeqMode, LAW_AX_SOUND};
use reprkit::hor::mon::{mon_hor, tilde_mon_rule_check};
use reprkit::hor::{hor_functoriality, instantiate, tilde_lift, Hor, PreorderedSet};
use reprkit::morphism::{product, product_universal, validate_morphism, Morphism, UNIQUENESS_BUDGET};
use reprkit::natural::{
    approx_family, eta_p, eta_t, is_linear_transformation, linearity_check, linearity_modes_agree, membership_family,
    mu_p, mu_p_counterexample_search, mu_t, IndexedRelation, Mode, Probes, Side, LAW_LEFT, LAW_LINEAR, LAW_RIGHT,
};
use reprkit::reduction::{
    closure_reduction_equivalence, generate_closure_pair, generate_reduction_instance, self_reduction,
    transfer_exactness, validate_reduction, InstanceShape,
};
use reprkit::relcore::{check_coproduct_axioms, check_relcore_laws, membership, preorder_characterizations, LawConfig};
use reprkit::repr::{
    is_exact, membership_representation, semantic_containment, trivial_representation, validate_representation,
    Representation,
};
use reprkit::set::{self, FiniteSet};
use reprkit::{Error, FuncTable, Rel};
use reprkit_suite::{ensure, run_all, Context, Criterion, Outcome};

const CRITERIA: &[Criterion] = &[
    Criterion {
        name: "relation-algebra laws",
        bound: Duration::from_secs(10),
        run: relation_algebra_laws,
    },
    Criterion {
        name: "membership residual is inclusion",
        bound: Duration::from_secs(1),
        run: membership_residual,
    },
    Criterion {
        name: "coproduct axioms",
        bound: Duration::from_secs(1),
        run: coproduct_axioms,
    },
    Criterion {
        name: "preorder characterizations",
        bound: Duration::from_secs(5),
        run: preorder_characterizations_agree,
    },
    Criterion {
        name: "trivial representations exact",
        bound: Duration::from_secs(5),
        run: trivial_exact,
    },
    Criterion {
        name: "product theorems",
        bound: Duration::from_secs(30),
        run: product_theorems,
    },
    Criterion {
        name: "reduction theorem",
        bound: Duration::from_secs(30),
        run: reduction_theorem,
    },
    Criterion {
        name: "closure lemma",
        bound: Duration::from_secs(10),
        run: closure_lemma,
    },
    Criterion {
        name: "linearity classification",
        bound: Duration::from_secs(60),
        run: linearity_classification,
    },
    Criterion {
        name: "hor functoriality",
        bound: Duration::from_secs(60),
        run: hor_functoriality_and_lifts,
    },
    Criterion {
        name: "bounded kleene algebra",
        bound: Duration::from_secs(60),
        run: bounded_ka,
    },
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if run_all(CRITERIA, &filters) == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn relation_algebra_laws() -> Outcome {
    let cfg = LawConfig::default();
    let r = check_relcore_laws(&cfg).ctx("law suite")?;
    ensure(r.passed(), || {
        let v = &r.violations[0];
        format!(
            "{} violations; first: {} with {:?}",
            r.violations.len(),
            v.law,
            v.operands
        )
    })?;
    Ok(format!(
        "{} instances, exhaustive to size {}, {} samples at size {}",
        r.checked, cfg.exhaustive_max, cfg.samples, cfg.sample_size
    ))
}

fn membership_residual() -> Outcome {
    for n in 0..=4 {
        let a = FiniteSet::indexed("A", "a", n);
        let m = membership(&a, 4).ctx("membership")?;
        let res = m.under(&m).ctx("residual")?;
        // Subset inclusion read straight off the bitmasks.
        let masks = set::powerset_masks(&a);
        let subset = Rel::from_fn(m.tgt(), m.tgt(), |i, j| masks[i] & !masks[j] == 0);
        ensure(res == subset, || format!("∈\\∈ differs from ⊆ at |A| = {n}"))?;
    }
    Ok("matrix equality for |A| = 0..4".into())
}

fn coproduct_axioms() -> Outcome {
    let mut pairs = 0;
    for n in 0..=4 {
        for m in 0..=4 {
            let (a, b) = (FiniteSet::indexed("A", "a", n), FiniteSet::indexed("B", "b", m));
            let r = check_coproduct_axioms(&a, &b).ctx("coproduct")?;
            ensure(r.all_hold(), || format!("|A| = {n}, |B| = {m}: {r}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} carrier pairs with sizes 0..4"))
}

fn preorder_characterizations_agree() -> Outcome {
    // Labelled preorder counts on 0..3 points.
    const PREORDERS: [usize; 4] = [1, 1, 4, 29];
    let mut total = 0;
    for (n, &expected) in PREORDERS.iter().enumerate() {
        let a = FiniteSet::indexed("A", "a", n);
        let mut preorders = 0;
        for x in gen::all_relations(&a, &a, 1 << 9).ctx("enumeration")? {
            let r = preorder_characterizations(&x).ctx("characterizations")?;
            ensure(r.holds("characterizations agree"), || {
                format!("disagreement at {x:?}: {r}")
            })?;
            preorders += usize::from(r.holds("reflexive and transitive"));
            total += 1;
        }
        ensure(preorders == expected, || {
            format!("{preorders} preorders on {n} points, expected {expected}")
        })?;
    }
    Ok(format!("{total} square relations, zero disagreements"))
}

fn random_rel(rng: &mut SuiteRng, max_src: usize, max_tgt: usize) -> Rel {
    let t = FiniteSet::indexed("T", "t", rng.gen_range(0..=max_src));
    let e = FiniteSet::indexed("E", "e", rng.gen_range(0..=max_tgt));
    let density = rng.gen_range(0.1..0.9);
    gen::random_rel(rng, &t, &e, density)
}

fn trivial_exact() -> Outcome {
    let mut rng = gen::rng(0, 5);
    for i in 0..500 {
        let x = random_rel(&mut rng, 6, 6);
        let ex = is_exact(&trivial_representation(&x)).ctx("is_exact")?;
        ensure(ex.holds, || format!("instance {i} not exact: {ex}"))?;
    }
    Ok("500 seeded relations up to 6 × 6".into())
}

/// A valid representation with a random preorder and `⊨ = x;≤`.
fn random_valid_rep(rng: &mut SuiteRng, max_t: usize, max_e: usize, min_e: usize) -> Result<Representation, String> {
    let t = FiniteSet::indexed("T", "t", rng.gen_range(0..=max_t));
    let e = FiniteSet::indexed("E", "e", rng.gen_range(min_e..=max_e));
    let density = rng.gen_range(0.0..0.5);
    let leq = gen::random_preorder(rng, &e, density);
    let models = gen::random_rel(rng, &t, &e, 0.4).compose(&leq).ctx("compose")?;
    Representation::new(models, leq)
        .and_then(|r| r.validated())
        .ctx("random representation")
}

/// All valid morphisms `r → s` by exhaustive enumeration.
fn morphisms(r: &Representation, s: &Representation) -> Result<Vec<Morphism>, String> {
    let mut out = Vec::new();
    for phi in gen::all_functions(r.exprs(), s.exprs(), 1 << 12).ctx("functions")? {
        for psi in gen::all_relations(s.traces(), r.traces(), 1 << 12).ctx("relations")? {
            let m = Morphism::new(phi.clone(), psi);
            if validate_morphism(r, s, &m).ctx("morphism")?.all_hold() {
                out.push(m);
            }
        }
    }
    Ok(out)
}

fn product_theorems() -> Outcome {
    let mut rng = gen::rng(0, 6);
    for i in 0..200 {
        let (r1, r2) = (
            random_valid_rep(&mut rng, 3, 3, 0)?,
            random_valid_rep(&mut rng, 3, 3, 0)?,
        );
        let p = product(&r1, &r2).ctx("product")?;
        let v = validate_representation(&p.rep).ctx("validate")?;
        ensure(v.all_hold(), || format!("valid pair {i}: product invalid: {v}"))?;
        for (proj, target) in [(&p.pi1, &r1), (&p.pi2, &r2)] {
            let v = validate_morphism(&p.rep, target, proj).ctx("projection")?;
            ensure(v.all_hold(), || format!("valid pair {i}: projection invalid: {v}"))?;
        }
    }
    for i in 0..200 {
        let (x1, x2) = (random_rel(&mut rng, 3, 3), random_rel(&mut rng, 3, 3));
        let p = product(&trivial_representation(&x1), &trivial_representation(&x2)).ctx("product")?;
        let ex = is_exact(&p.rep).ctx("is_exact")?;
        ensure(ex.holds, || format!("exact pair {i}: product not exact: {ex}"))?;
    }
    let mut pairings = 0;
    let mut tries = 0;
    while pairings < 50 {
        tries += 1;
        ensure(tries < 5000, || format!("only {pairings} pairing instances found"))?;
        let r = random_valid_rep(&mut rng, 2, 2, 1)?;
        let (r1, r2) = (
            random_valid_rep(&mut rng, 2, 2, 1)?,
            random_valid_rep(&mut rng, 2, 2, 1)?,
        );
        let (m1, m2) = (morphisms(&r, &r1)?, morphisms(&r, &r2)?);
        if m1.is_empty() || m2.is_empty() {
            continue;
        }
        let f1 = &m1[rng.gen_range(0..m1.len())];
        let f2 = &m2[rng.gen_range(0..m2.len())];
        let p = product(&r1, &r2).ctx("product")?;
        let out = product_universal(&r, &p, [(&r1, f1), (&r2, f2)], UNIQUENESS_BUDGET, &[]).ctx("pairing")?;
        ensure(out.report.all_hold(), || format!("pairing {pairings}: {}", out.report))?;
        ensure(
            out.report.scope.iter().any(|s| s.starts_with("uniqueness exhaustive")),
            || format!("pairing {pairings} was not exhaustive: {:?}", out.report.scope),
        )?;
        pairings += 1;
    }
    Ok("200 valid pairs, 200 exact pairs, 50 pairings unique by exhaustion".into())
}

fn reduction_theorem() -> Outcome {
    let mut rng = gen::rng(0, 7);
    for i in 0..100 {
        let r = if i < 5 {
            membership_representation(&FiniteSet::indexed("A", "a", i), 4).ctx("membership")?
        } else {
            trivial_representation(&random_rel(&mut rng, 4, 4))
        };
        let (red, target) = self_reduction(&r).ctx("self reduction")?;
        let v = validate_reduction(&r, &target, &red).ctx("validate")?;
        ensure(v.all_hold(), || format!("instance {i}: {v}"))?;
    }
    let mut alarms = Vec::new();
    for i in 0..200 {
        let shape = InstanceShape {
            traces: rng.gen_range(1..=3),
            exprs: rng.gen_range(1..=3),
            extra_traces: rng.gen_range(0..=2),
            extra_exprs: rng.gen_range(0..=2),
        };
        let inst = generate_reduction_instance(&mut rng, shape);
        match transfer_exactness(&inst.source, &inst.target, &inst.reduction) {
            Ok(t) => ensure(t.exact() && t.chain.all_hold(), || format!("triple {i}: {}", t.chain))?,
            Err(Error::TheoremInconsistency(m)) => alarms.push(format!("triple {i}: {m}")),
            Err(e) => return Err(format!("triple {i}: {e}")),
        }
    }
    ensure(alarms.is_empty(), || {
        format!("{} alarms; first: {}", alarms.len(), alarms[0])
    })?;
    Ok("100 self-reductions valid; 200 transfers agree, zero alarms".into())
}

/// `T = {t}`, `E = {e0, e1}`, `⊨₁` and `≤₁` full, `⊨₂ = {(t, e1)}`, `↓ = const e1`.
fn two_element_instance() -> Result<(Representation, Representation, FuncTable), String> {
    let t = FiniteSet::new("T", ["t"]).ctx("set")?;
    let e = FiniteSet::new("E", ["e0", "e1"]).ctx("set")?;
    let r1 = Representation::new(Rel::full(&t, &e), Rel::full(&e, &e))
        .and_then(|r| r.validated())
        .ctx("R1")?;
    let r2 = trivial_representation(&Rel::from_pairs(&t, &e, [("t", "e1")]).ctx("models")?);
    let down = FuncTable::from_labels(&e, &e, [("e0", "e1"), ("e1", "e1")]).ctx("down")?;
    Ok((r1, r2, down))
}

fn closure_lemma() -> Outcome {
    let mut rng = gen::rng(0, 8);
    let mut instances = vec![two_element_instance()?];
    while instances.len() < 200 {
        let (traces, exprs) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
        let (r1, r2) = generate_closure_pair(&mut rng, traces, exprs);
        let e = r1.exprs().clone();
        // Half the candidates satisfy `↓ ⊑ ≤₁` by construction.
        let table = (0..e.len())
            .map(|x| {
                let below: Vec<usize> = (0..e.len()).filter(|&y| r1.leq().contains(y, x)).collect();
                if instances.len() % 2 == 0 {
                    below[rng.gen_range(0..below.len())]
                } else {
                    rng.gen_range(0..e.len())
                }
            })
            .collect();
        let down = FuncTable::new(&e, &e, table).ctx("down")?;
        instances.push((r1, r2, down));
    }
    let mut agree_valid = 0;
    for (i, (r1, r2, down)) in instances.iter().enumerate() {
        let eq = closure_reduction_equivalence(r1, r2, down).ctx(&format!("instance {i}"))?;
        ensure(eq.hypotheses.all_hold(), || format!("instance {i}: hypotheses fail"))?;
        ensure(eq.equivalent() == Some(true), || {
            format!("instance {i}: verdicts differ")
        })?;
        agree_valid += usize::from(eq.closure.all_hold());
        if i == 0 {
            ensure(eq.closure.all_hold(), || "two-element instance is not a closure".into())?;
        }
    }
    Ok(format!("200 instances agree ({agree_valid} valid on both sides)"))
}

fn linearity_classification() -> Outcome {
    let p3 = Probes::up_to(3);
    let p2 = Probes::up_to(2);
    let monoid = Signature::monoid();
    let term = Functor::term(monoid.clone(), Bound::Depth(2));
    let mut failures = Vec::new();
    let mut agreed = 0;
    let mut agree = |rho: &IndexedRelation, probes: &Probes, failures: &mut Vec<String>| -> Result<(), String> {
        let r = linearity_modes_agree(rho, probes).ctx("modes")?;
        match r.laws.iter().find(|l| l.law.ends_with("modes agree") && !l.holds) {
            None => agreed += 1,
            Some(l) => failures.push(format!("{} on {}", l.law, rho.name())),
        }
        Ok(())
    };

    let member = membership_family(4);
    let r = linearity_check(&member, Side::Both, Mode::Relations, &p3).ctx("∈")?;
    if !(r.holds(LAW_RIGHT) && !r.holds(LAW_LEFT)) {
        failures.push(format!("∈ misclassified: {r}"));
    }
    agree(&member, &p3, &mut failures)?;

    let approx = approx_family(&term).ctx("≈")?;
    let r = linearity_check(&approx, Side::Both, Mode::Relations, &p3).ctx("≈")?;
    if !r.holds(LAW_LINEAR) {
        failures.push(format!("≈ not linear: {r}"));
    }
    agree(&approx, &p3, &mut failures)?;

    let eta = eta_t(&term).ctx("η_T")?;
    let mu = mu_t(&monoid, 2, 2);
    for (phi, probes) in [(&eta, &p3), (&mu, &p2)] {
        let r = is_linear_transformation(phi, probes).ctx(phi.name())?;
        if !r.all_hold() {
            failures.push(format!("{} not linear: {r}", phi.name()));
        }
        agree(&phi.graphs(), probes, &mut failures)?;
        agree(&phi.cographs(), probes, &mut failures)?;
    }
    for phi in [eta_p(4), mu_p(3, 1 << 3)] {
        agree(&phi.graphs(), &p2, &mut failures)?;
        agree(&phi.cographs(), &p2, &mut failures)?;
    }

    let mu_p_verdict = match mu_p_counterexample_search(3) {
        Ok(w) => format!("μ_P witness: {w}"),
        Err(e @ Error::TheoremInconsistency(_)) => {
            failures.push(format!("μ_P search: {e}"));
            String::new()
        }
        Err(e) => return Err(format!("μ_P search: {e}")),
    };
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok(format!(
        "∈, ≈, η_T, μ_T classified; modes agree on {agreed} families; {mu_p_verdict}"
    ))
}

fn two_point_preorders() -> Result<Vec<PreorderedSet>, String> {
    let a = FiniteSet::new("A", ["p", "q"]).ctx("set")?;
    let mut out = Vec::new();
    for x in gen::all_relations(&a, &a, 16).ctx("enumeration")? {
        if x.star().ctx("star")? == x {
            out.push(PreorderedSet::new(x).ctx("preorder")?);
        }
    }
    Ok(out)
}

fn hor_functoriality_and_lifts() -> Outcome {
    let probes = Probes::up_to(2);
    let semantic = KaConfig {
        expr_size: 7,
        word_len: 3,
        mode: LeqMode::Semantic,
    };
    let hors: Vec<Hor> = vec![mon_hor(2).ctx("mon")?, ka_hor(&semantic).ctx("ka")?];
    let preorders = two_point_preorders()?;
    for h in &hors {
        let r = hor_functoriality(h, &probes).ctx(h.name())?;
        ensure(r.all_hold(), || format!("{}: {r}", h.name()))?;
        for p in &preorders {
            let l = tilde_lift(h, p).ctx("tilde lift")?;
            ensure(l.report.all_hold() && l.rep.is_validated(), || {
                format!("{} tilde lift along {:?}: {}", h.name(), p.order(), l.report)
            })?;
        }
    }
    let chain = preorders
        .iter()
        .find(|p| p.order().len() == 3)
        .ok_or("no two-point chain")?;
    let r = tilde_mon_rule_check(chain, 2).ctx("rule closure")?;
    ensure(r.holds("rule closure = tilde order"), || format!("{r}"))?;
    Ok(format!(
        "Mon and semantic KA functorial on {}; {} tilde lifts each valid; rule closure matches",
        probes.scope(),
        preorders.len()
    ))
}

fn bounded_ka() -> Outcome {
    let a = FiniteSet::new("A", ["a", "b"]).ctx("set")?;
    let cfg = |mode| KaConfig {
        expr_size: 7,
        word_len: 3,
        mode,
    };
    let sem = instantiate(&ka_hor(&cfg(LeqMode::Semantic)).ctx("ka")?, &a).ctx("instance")?;
    ensure(semantic_containment(&sem) == *sem.leq(), || {
        "semantic containment differs from ≤".into()
    })?;
    let ex = is_exact(&sem).ctx("exact")?;
    ensure(ex.holds, || format!("semantic instance not exact: {ex}"))?;

    let axioms = shipped_axioms();
    let gap = ka_gap_report(&axioms, 7, 3, &a).ctx("gap report")?;
    ensure(gap.holds(LAW_AX_SOUND), || format!("axiomatic order unsound: {gap}"))?;
    let ax = ka_hor(&cfg(LeqMode::Axiomatic(axioms)))
        .ctx("ka")?
        .leq()
        .at(&a)
        .ctx("axiomatic order")?;
    let derived = ax.intersection(sem.leq()).ctx("intersection")?.len();
    let missing = sem.leq().len() - derived;
    ensure(missing > 0, || "axiomatic order has no gap".into())?;
    Ok(format!(
        "{} expressions; semantic exact; axiomatic sound, {missing} of {} inclusions underived",
        sem.exprs().len(),
        sem.leq().len()
    ))
}
