//! The sixteen commands and their execution against a document.

use reprkit::functor::{Functor, CARRIER_BUDGET};
use reprkit::hor::mon::tilde_mon_rule_check;
use reprkit::hor::{hat_lift, hor_arrow, tilde_lift, Hor};
use reprkit::morphism::{product, validate_morphism};
use reprkit::natural::{
    is_linear_transformation, is_natural_relation, is_natural_transformation, linearity_check, linearity_modes_agree,
    Mode, Probes, Side,
};
use reprkit::reduction::{closure_reduction_equivalence, compose_reductions, transfer_exactness, validate_reduction};
use reprkit::relcore::{check_relcore_laws, LawConfig, RELCORE_LAWS};
use reprkit::repr::{is_exact, membership_representation, trivial_representation, Representation};
use reprkit::{CheckReport, Error, LawCheck, Witness};

use crate::document::{Document, Family, HorSpec, Object};
use crate::emit::Emitter;
use crate::error::CliError;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckRep,
    CheckExact,
    CheckMorphism,
    CheckReduction,
    CheckClosure,
    CheckNaturality,
    CheckLinearity,
    BuildTrivial,
    BuildMembership,
    BuildProduct,
    ReduceCompose,
    HorInstantiate,
    HorArrow,
    HorLiftPreorder,
    HorLiftRep,
    LawsRelcore,
}

/// `(command, words, operands)`.
const TABLE: [(Command, &str, &str, &str); 16] = [
    (Command::CheckRep, "check", "rep", "[REP...]"),
    (Command::CheckExact, "check", "exact", "[REP...]"),
    (Command::CheckMorphism, "check", "morphism", "[MORPHISM...]"),
    (Command::CheckReduction, "check", "reduction", "[REDUCTION...]"),
    (Command::CheckClosure, "check", "closure", "[CLOSURE...]"),
    (Command::CheckNaturality, "check", "naturality", "[FAMILY...]"),
    (Command::CheckLinearity, "check", "linearity", "[FAMILY...]"),
    (Command::BuildTrivial, "build", "trivial", "RELATION"),
    (Command::BuildMembership, "build", "membership", "SET"),
    (Command::BuildProduct, "build", "product", "REP REP"),
    (Command::ReduceCompose, "reduce", "compose", "REDUCTION REDUCTION"),
    (Command::HorInstantiate, "hor", "instantiate", "[HOR] SET"),
    (Command::HorArrow, "hor", "arrow", "[HOR] FUNCTION"),
    (Command::HorLiftPreorder, "hor", "lift-preorder", "[HOR] PREORDER"),
    (Command::HorLiftRep, "hor", "lift-rep", "[HOR] REP"),
    (Command::LawsRelcore, "laws", "relcore", ""),
];

impl Command {
    pub fn parse(group: &str, name: &str) -> Result<Self, CliError> {
        TABLE
            .iter()
            .find(|(_, g, n, _)| *g == group && *n == name)
            .map(|t| t.0)
            .ok_or_else(|| CliError::UnknownCommand(format!("{group} {name}")))
    }

    fn row(self) -> &'static (Command, &'static str, &'static str, &'static str) {
        TABLE.iter().find(|t| t.0 == self).expect("every command is tabled")
    }

    pub fn words(self) -> String {
        let (_, g, n, _) = self.row();
        format!("{g} {n}")
    }

    /// One usage line per command.
    pub fn usage() -> String {
        TABLE
            .iter()
            .map(|(c, g, n, ops)| {
                let file = if *c == Command::LawsRelcore { "[FILE]" } else { "FILE" };
                format!("  {g} {n} {file} {ops}").trim_end().to_string()
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn needs_document(self) -> bool {
        self != Command::LawsRelcore
    }
}

/// Which characterization `check linearity` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearityMode {
    Relations,
    Functions,
    /// Both, plus agreement of their verdicts.
    Agree,
}

/// Every finite-certification knob.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flags {
    pub probe_max: usize,
    pub powerset_cap: usize,
    pub seed: u64,
    pub samples: usize,
    pub budget: u128,
    pub mode: LinearityMode,
    /// Include constructed HOR objects in the report document.
    pub emit: bool,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            probe_max: 3,
            powerset_cap: 4,
            seed: 0,
            samples: 1000,
            budget: CARRIER_BUDGET,
            mode: LinearityMode::Relations,
            emit: false,
        }
    }
}

/// A command with its document label and operand names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Request {
    pub command: Command,
    pub file: Option<String>,
    pub names: Vec<String>,
}

impl Request {
    pub fn new(command: Command, file: Option<&str>, names: &[&str]) -> Self {
        Request {
            command,
            file: file.map(str::to_string),
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn echo(&self) -> String {
        let mut parts = vec![self.command.words()];
        parts.extend(self.file.clone());
        parts.extend(self.names.iter().cloned());
        parts.join(" ")
    }
}

pub fn run_command(req: &Request, doc: Option<&Document>, flags: &Flags) -> Result<Report, CliError> {
    let cmd = req.command;
    match doc {
        Some(d) if d.is_empty() => return Err(CliError::EmptyDocument),
        None if cmd.needs_document() => {
            return Err(CliError::Usage(format!("`{}` needs a document", cmd.words())));
        }
        _ => {}
    }
    let mut run = Run {
        doc: doc.unwrap_or(&EMPTY),
        flags,
        names: &req.names,
        report: Report::new(req.echo(), flags.seed),
    };
    match cmd {
        Command::CheckRep => run.check_rep(false)?,
        Command::CheckExact => run.check_rep(true)?,
        Command::CheckMorphism => run.check_morphism()?,
        Command::CheckReduction => run.check_reduction()?,
        Command::CheckClosure => run.check_closure()?,
        Command::CheckNaturality => run.check_families(false)?,
        Command::CheckLinearity => run.check_families(true)?,
        Command::BuildTrivial => run.build_trivial()?,
        Command::BuildMembership => run.build_membership()?,
        Command::BuildProduct => run.build_product()?,
        Command::ReduceCompose => run.reduce_compose()?,
        Command::HorInstantiate => run.hor_instantiate()?,
        Command::HorArrow => run.hor_arrow()?,
        Command::HorLiftPreorder => run.hor_lift_preorder()?,
        Command::HorLiftRep => run.hor_lift_rep()?,
        Command::LawsRelcore => run.laws_relcore()?,
    }
    Ok(run.report)
}

static EMPTY: std::sync::LazyLock<Document> = std::sync::LazyLock::new(Document::default);

struct Run<'a> {
    doc: &'a Document,
    flags: &'a Flags,
    names: &'a [String],
    report: Report,
}

fn rep_scope(name: &str, r: &Representation) -> String {
    format!("{name}: {} traces, {} expressions", r.traces().len(), r.exprs().len())
}

impl<'a> Run<'a> {
    /// Named objects of `kind`, or all of them when no names are given.
    fn select(&self, kind: &str) -> Result<Vec<(String, &'a Object)>, CliError> {
        if self.names.is_empty() {
            let all: Vec<_> = self
                .doc
                .of_kind(kind)
                .into_iter()
                .map(|(n, o)| (n.to_string(), o))
                .collect();
            if all.is_empty() {
                return Err(CliError::Usage(format!("the document declares no {kind}")));
            }
            return Ok(all);
        }
        self.names
            .iter()
            .map(|n| Ok((n.clone(), self.object(n, kind)?)))
            .collect()
    }

    fn object(&self, name: &str, kind: &str) -> Result<&'a Object, CliError> {
        match self.doc.get(name) {
            Some(o) if o.kind() == kind => Ok(o),
            Some(o) => Err(CliError::Usage(format!(
                "`{name}` is a {}, expected a {kind}",
                o.kind()
            ))),
            None => Err(CliError::Usage(format!(
                "the document declares no {kind} named `{name}`"
            ))),
        }
    }

    fn operands(&self, n: usize) -> Result<&'a [String], CliError> {
        if self.names.len() != n {
            return Err(CliError::Usage(format!(
                "expected {n} operand names, got {}",
                self.names.len()
            )));
        }
        Ok(self.names)
    }

    fn rep(&self, name: &str) -> Result<&'a Representation, CliError> {
        match self.object(name, "rep")? {
            Object::Rep(r) => Ok(r),
            _ => unreachable!("kind checked"),
        }
    }

    /// Validates a declared representation. Failing laws go into the report
    /// and the result is `None`.
    fn validated(&mut self, name: &str) -> Result<Option<Representation>, CliError> {
        let (r, v) = self.rep(name)?.clone().validate()?;
        self.report.scope(rep_scope(name, &r));
        if r.is_validated() {
            Ok(Some(r))
        } else {
            self.report.absorb(name, "", &v);
            Ok(None)
        }
    }

    fn budget(&self, f: &Functor, n: usize) -> Result<(), CliError> {
        let needed = f.size_at(n);
        if needed > self.flags.budget {
            return Err(Error::BudgetExceeded {
                what: format!("{} of a set of size {n}", f.name()),
                needed,
                cap: self.flags.budget,
            }
            .into());
        }
        Ok(())
    }

    fn budget_scope(&mut self) {
        self.report.scope(format!("carrier budget {}", self.flags.budget));
    }

    fn probes(&self) -> Probes {
        match self.doc.of_kind("probes").last() {
            Some((_, Object::Probes(p))) => p.clone(),
            _ => Probes::up_to(self.flags.probe_max),
        }
    }

    fn check_rep(&mut self, exact: bool) -> Result<(), CliError> {
        for (name, obj) in self.select("rep")? {
            let Object::Rep(r) = obj else { unreachable!() };
            let (r, v) = r.clone().validate()?;
            self.report.absorb(&name, "", &v);
            if exact && r.is_validated() {
                let ex = is_exact(&r)?;
                self.report.law(
                    &name,
                    &LawCheck {
                        law: "exact".into(),
                        ..ex
                    },
                );
            }
        }
        Ok(())
    }

    fn check_morphism(&mut self) -> Result<(), CliError> {
        for (name, obj) in self.select("morphism")? {
            let Object::Morphism { src, tgt, m } = obj else {
                unreachable!()
            };
            let (r1, r2) = (self.validated(src)?, self.validated(tgt)?);
            if let (Some(r1), Some(r2)) = (r1, r2) {
                self.report.absorb(&name, "", &validate_morphism(&r1, &r2, m)?);
            }
        }
        Ok(())
    }

    fn check_reduction(&mut self) -> Result<(), CliError> {
        for (name, obj) in self.select("reduction")? {
            let Object::Reduction { src, tgt, r } = obj else {
                unreachable!()
            };
            let (Some(r1), Some(r2)) = (self.validated(src)?, self.validated(tgt)?) else {
                continue;
            };
            let v = validate_reduction(&r1, &r2, r)?;
            self.report.absorb(&name, "", &v);
            if v.all_hold() && is_exact(&r2)?.holds {
                let t = transfer_exactness(&r1, &r2, r)?;
                self.report
                    .finding(&name, format!("{tgt} is exact, so {src} is exact: {}", t.exact()));
            }
        }
        Ok(())
    }

    fn check_closure(&mut self) -> Result<(), CliError> {
        for (name, obj) in self.select("closure")? {
            let Object::Closure { src, tgt, down } = obj else {
                unreachable!()
            };
            let (Some(r1), Some(r2)) = (self.validated(src)?, self.validated(tgt)?) else {
                continue;
            };
            let eq = closure_reduction_equivalence(&r1, &r2, down)?;
            self.report.absorb(&name, "", &eq.closure);
            let h = &eq.hypotheses;
            for l in [&h.leq_included, &h.models_included, &h.target_exact] {
                self.report.finding(&name, format!("hypothesis {}: {}", l.law, l.holds));
            }
            let text = match eq.equivalent() {
                Some(_) => format!(
                    "as the reduction ⟨down, id, 1⟩ it is {}, in agreement",
                    if eq.reduction.all_hold() { "valid" } else { "invalid" }
                ),
                None => "hypotheses fail, so reduction validity is not compared".to_string(),
            };
            self.report.finding(&name, text);
        }
        Ok(())
    }

    fn check_families(&mut self, linearity: bool) -> Result<(), CliError> {
        let probes = self.probes();
        for (name, obj) in self.select("family")? {
            let Object::Family(spec) = obj else { unreachable!() };
            let fam = spec.build(self.flags.powerset_cap)?;
            let (f, g) = fam.functors();
            self.budget(f, probes.max_size())?;
            self.budget(g, probes.max_size())?;
            let rep = match (&fam, linearity, self.flags.mode) {
                (Family::Relation(r), false, _) => is_natural_relation(r, &probes)?,
                (Family::Function(phi), false, _) => is_natural_transformation(phi, &probes)?,
                (Family::Function(phi), true, LinearityMode::Relations) => is_linear_transformation(phi, &probes)?,
                (_, true, LinearityMode::Agree) => linearity_modes_agree(&fam.as_relation(), &probes)?,
                (_, true, m) => {
                    let mode = if m == LinearityMode::Functions {
                        Mode::Functions
                    } else {
                        Mode::Relations
                    };
                    linearity_check(&fam.as_relation(), Side::Both, mode, &probes)?
                }
            };
            self.report.absorb(&name, "", &rep);
            self.report.scope(probes.scope());
        }
        self.report.scope(format!("powerset cap {}", self.flags.powerset_cap));
        self.budget_scope();
        Ok(())
    }

    fn build_trivial(&mut self) -> Result<(), CliError> {
        let [x] = self.operands(1)? else { unreachable!() };
        let Object::Relation(rel) = self.object(x, "relation")? else {
            unreachable!()
        };
        let name = format!("trivial({x})");
        let (r, v) = trivial_representation(rel).validate()?;
        self.finish_built(&name, r, v)
    }

    fn build_membership(&mut self) -> Result<(), CliError> {
        let [a] = self.operands(1)? else { unreachable!() };
        let Object::Set(set) = self.object(a, "set")? else {
            unreachable!()
        };
        let name = format!("membership({a})");
        let (r, v) = membership_representation(set, self.flags.powerset_cap)?.validate()?;
        self.report.scope(format!("powerset cap {}", self.flags.powerset_cap));
        self.finish_built(&name, r, v)
    }

    /// Reports validation and exactness of a constructed representation and
    /// emits it.
    fn finish_built(&mut self, name: &str, r: Representation, v: CheckReport) -> Result<(), CliError> {
        self.report.absorb(name, "", &v);
        if r.is_validated() {
            let ex = is_exact(&r)?;
            self.report.law(
                name,
                &LawCheck {
                    law: "exact".into(),
                    ..ex
                },
            );
        }
        let mut e = Emitter::new();
        e.rep(name, &r);
        self.report.document = Some(e.finish());
        Ok(())
    }

    fn build_product(&mut self) -> Result<(), CliError> {
        let [a, b] = self.operands(2)? else { unreachable!() };
        let (ra, rb) = (self.rep(a)?, self.rep(b)?);
        let traces = ra.traces().len() as u128 + rb.traces().len() as u128;
        let exprs = ra.exprs().len() as u128 * rb.exprs().len() as u128;
        for (what, needed) in [("product traces", traces), ("product expressions", exprs)] {
            if needed > self.flags.budget {
                return Err(Error::BudgetExceeded {
                    what: what.into(),
                    needed,
                    cap: self.flags.budget,
                }
                .into());
            }
        }
        let (Some(r1), Some(r2)) = (self.validated(a)?, self.validated(b)?) else {
            return Ok(());
        };
        let p = product(&r1, &r2)?;
        let name = format!("{a}×{b}");
        self.report.scope(rep_scope(&name, &p.rep));
        let v = reprkit::repr::validate_representation(&p.rep)?;
        self.report.absorb(&name, "", &v);
        self.report
            .absorb(&name, "π1: ", &validate_morphism(&p.rep, &r1, &p.pi1)?);
        self.report
            .absorb(&name, "π2: ", &validate_morphism(&p.rep, &r2, &p.pi2)?);
        let (e1, e2) = (is_exact(&r1)?.holds, is_exact(&r2)?.holds);
        let ep = is_exact(&p.rep)?;
        if e1 && e2 {
            self.report.law(
                &name,
                &LawCheck {
                    law: "exact".into(),
                    ..ep
                },
            );
        } else {
            self.report
                .finding(&name, format!("factors exact: {e1}, {e2}; product exact: {}", ep.holds));
        }
        let mut e = Emitter::new();
        let n1 = e.rep(a, &r1);
        let n2 = e.rep(b, &r2);
        let np = e.rep(&name, &p.rep);
        e.morphism(&format!("{name}.π1"), &np, &n1, &p.pi1);
        e.morphism(&format!("{name}.π2"), &np, &n2, &p.pi2);
        self.report.document = Some(e.finish());
        Ok(())
    }

    fn reduce_compose(&mut self) -> Result<(), CliError> {
        let [x, y] = self.operands(2)? else { unreachable!() };
        let Object::Reduction { src: s1, tgt: t1, r: a } = self.object(x, "reduction")? else {
            unreachable!()
        };
        let Object::Reduction { src: s2, tgt: t2, r: b } = self.object(y, "reduction")? else {
            unreachable!()
        };
        if t1 != s2 {
            return Err(CliError::Usage(format!(
                "`{x}` ends at `{t1}` but `{y}` starts at `{s2}`"
            )));
        }
        let (Some(r1), Some(r2), Some(r3)) = (self.validated(s1)?, self.validated(t1)?, self.validated(t2)?) else {
            return Ok(());
        };
        let (va, vb) = (validate_reduction(&r1, &r2, a)?, validate_reduction(&r2, &r3, b)?);
        if !va.all_hold() || !vb.all_hold() {
            self.report.absorb(x, "", &va);
            self.report.absorb(y, "", &vb);
            return Ok(());
        }
        let c = compose_reductions(&r1, &r2, &r3, a, b)?;
        let name = format!("{y}∘{x}");
        self.report.absorb(&name, "", &validate_reduction(&r1, &r3, &c)?);
        let mut e = Emitter::new();
        let n1 = e.rep(s1, &r1);
        let n3 = e.rep(t2, &r3);
        e.reduction(&name, &n1, &n3, &c);
        self.report.document = Some(e.finish());
        Ok(())
    }

    /// `[HOR] X`: the HOR may be omitted when the document declares one.
    fn hor_operands(&self) -> Result<(String, &'a HorSpec, &'a Hor, String), CliError> {
        let (h, x) = match self.names {
            [x] => {
                let hs = self.doc.of_kind("hor");
                match hs.as_slice() {
                    [(h, _)] => (h.to_string(), x.clone()),
                    _ => return Err(CliError::Usage("name the HOR to use".into())),
                }
            }
            [h, x] => (h.clone(), x.clone()),
            _ => {
                return Err(CliError::Usage(format!(
                    "expected [HOR] OBJECT, got {} names",
                    self.names.len()
                )))
            }
        };
        let Object::Hor { spec, hor } = self.object(&h, "hor")? else {
            unreachable!()
        };
        Ok((h, spec, hor, x))
    }

    fn hor_budget(&mut self, h: &Hor, traces: usize, exprs: usize) -> Result<(), CliError> {
        self.budget(h.traces(), traces)?;
        self.budget(h.exprs(), exprs)?;
        self.budget_scope();
        Ok(())
    }

    fn hor_instance(&mut self, h: &Hor, a: &reprkit::FiniteSet) -> Result<(Representation, CheckReport), CliError> {
        self.hor_budget(h, a.len(), a.len())?;
        Ok(Representation::new(h.models().at(a)?, h.leq().at(a)?)?.validate()?)
    }

    fn exactness_finding(&mut self, subject: &str, r: &Representation) -> Result<(), CliError> {
        if r.is_validated() {
            let ex = is_exact(r)?;
            let text = match &ex.witness {
                None => "exact".to_string(),
                Some(w) => format!("not exact: {w}"),
            };
            self.report.finding(subject, text);
        }
        Ok(())
    }

    fn hor_instantiate(&mut self) -> Result<(), CliError> {
        let (hn, _, h, a) = self.hor_operands()?;
        let Object::Set(set) = self.object(&a, "set")? else {
            unreachable!()
        };
        let (r, v) = self.hor_instance(h, set)?;
        let name = format!("{hn}({a})");
        self.report.absorb(&name, "", &v);
        self.report.scope(rep_scope(&name, &r));
        self.exactness_finding(&name, &r)?;
        if self.flags.emit {
            let mut e = Emitter::new();
            e.rep(&name, &r);
            self.report.document = Some(e.finish());
        }
        Ok(())
    }

    fn hor_arrow(&mut self) -> Result<(), CliError> {
        let (hn, _, h, f) = self.hor_operands()?;
        let Object::Function(func) = self.object(&f, "function")? else {
            unreachable!()
        };
        let (a, b) = (func.src().clone(), func.tgt().clone());
        self.hor_budget(h, a.len().max(b.len()), a.len().max(b.len()))?;
        let (m, v) = hor_arrow(h, func)?;
        let name = format!("{hn}({f})");
        self.report.absorb(&name, "", &v);
        if self.flags.emit {
            let (ra, _) = self.hor_instance(h, &a)?;
            let (rb, _) = self.hor_instance(h, &b)?;
            let mut e = Emitter::new();
            let na = e.rep(&format!("{hn}({a})"), &ra);
            let nb = e.rep(&format!("{hn}({b})"), &rb);
            e.morphism(&name, &na, &nb, &m);
            self.report.document = Some(e.finish());
        }
        Ok(())
    }

    fn hor_lift_preorder(&mut self) -> Result<(), CliError> {
        let (hn, spec, h, p) = self.hor_operands()?;
        let Object::Preorder(pre) = self.object(&p, "preorder")? else {
            unreachable!()
        };
        let n = pre.carrier().len();
        self.hor_budget(h, n, n)?;
        let lifted = tilde_lift(h, pre)?;
        let name = format!("{hn}~({p})");
        self.report.absorb(&name, "", &lifted.report);
        if let HorSpec::Mon { depth } = spec {
            // its tilde-lift validation repeats the laws absorbed above
            let mut rules = tilde_mon_rule_check(pre, *depth)?;
            rules.laws.retain(|l| !l.law.starts_with("tilde lift "));
            self.report.absorb(&name, "", &rules);
        }
        self.exactness_finding(&name, &lifted.rep)?;
        if self.flags.emit {
            let mut e = Emitter::new();
            e.rep(&name, &lifted.rep);
            self.report.document = Some(e.finish());
        }
        Ok(())
    }

    fn hor_lift_rep(&mut self) -> Result<(), CliError> {
        let (hn, _, h, rn) = self.hor_operands()?;
        let raw = self.rep(&rn)?;
        self.hor_budget(h, raw.traces().len(), raw.exprs().len())?;
        let Some(r) = self.validated(&rn)? else {
            return Ok(());
        };
        let lifted = hat_lift(h, &r)?;
        let name = format!("{hn}^({rn})");
        self.report.absorb(&name, "", &lifted.report);
        if self.flags.emit {
            let mut e = Emitter::new();
            e.rep(&name, &lifted.rep);
            self.report.document = Some(e.finish());
        }
        Ok(())
    }

    fn laws_relcore(&mut self) -> Result<(), CliError> {
        let cfg = LawConfig {
            samples: self.flags.samples,
            seed: self.flags.seed,
            ..LawConfig::default()
        };
        let out = check_relcore_laws(&cfg)?;
        for law in RELCORE_LAWS {
            let first = out.violations.iter().find(|v| v.law == law);
            let check = match first {
                None => LawCheck::pass(law),
                Some(v) => {
                    let op = |i: usize| v.operands.get(i).cloned().unwrap_or_default();
                    let rest = v.operands.get(2..).unwrap_or_default().join("; ");
                    let mut w = Witness::pair(op(0), op(1));
                    if !rest.is_empty() {
                        w = w.with_detail(rest);
                    }
                    LawCheck::fail(law, Some(w))
                }
            };
            self.report.law("relcore", &check);
        }
        self.report
            .finding("relcore", format!("{} instances checked", out.checked));
        for s in &out.scope {
            self.report.scope(s);
        }
        Ok(())
    }
}
