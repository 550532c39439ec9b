//! Verdicts and counterexample witnesses shared by every checker.

use std::fmt;

use crate::rel::{Inclusion, Rel};

/// A counterexample: a pair of element labels plus optional context (the
/// link that produced the pair, the probe function, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub left: String,
    pub right: String,
    pub detail: Option<String>,
}

impl Witness {
    pub fn pair(left: impl Into<String>, right: impl Into<String>) -> Self {
        Witness {
            left: left.into(),
            right: right.into(),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Labels a row-major index pair of `r`'s carriers.
    pub fn of(r: &Rel, (a, b): (usize, usize)) -> Self {
        Witness::pair(r.src().label(a), r.tgt().label(b))
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)?;
        if let Some(d) = &self.detail {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

/// One named law and whether it held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl LawCheck {
    pub fn pass(law: impl Into<String>) -> Self {
        LawCheck {
            law: law.into(),
            holds: true,
            witness: None,
        }
    }

    pub fn fail(law: impl Into<String>, witness: Option<Witness>) -> Self {
        LawCheck {
            law: law.into(),
            holds: false,
            witness,
        }
    }

    pub fn verdict(law: impl Into<String>, holds: bool) -> Self {
        LawCheck {
            law: law.into(),
            holds,
            witness: None,
        }
    }

    /// `lhs ⊑ rhs` as a law; the witness is labelled over `lhs`'s carriers.
    pub fn inclusion(law: impl Into<String>, lhs: &Rel, inc: Inclusion) -> Self {
        LawCheck {
            law: law.into(),
            holds: inc.holds,
            witness: inc.witness.map(|p| Witness::of(lhs, p)),
        }
    }

    /// `lhs = rhs` as a law, checked as two inclusions.
    pub fn equality(law: impl Into<String>, lhs: &Rel, rhs: &Rel) -> Self {
        let law = law.into();
        let fwd = lhs.matrix().first_not_in(rhs.matrix());
        if let Some(p) = fwd {
            return LawCheck::fail(law, Some(Witness::of(lhs, p).with_detail("in left side only")));
        }
        match rhs.matrix().first_not_in(lhs.matrix()) {
            Some(p) => LawCheck::fail(law, Some(Witness::of(rhs, p).with_detail("in right side only"))),
            None => LawCheck::pass(law),
        }
    }
}

impl fmt::Display for LawCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.law, if self.holds { "pass" } else { "FAIL" })?;
        if let Some(w) = &self.witness {
            write!(f, " witness {w}")?;
        }
        Ok(())
    }
}

/// The outcome of a checker: law verdicts, free-form findings that are not
/// pass/fail (e.g. "no counterexample within bound"), and the finite scope
/// the verdicts are certified over.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub laws: Vec<LawCheck>,
    pub findings: Vec<String>,
    pub scope: Vec<String>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, law: LawCheck) -> &mut Self {
        self.laws.push(law);
        self
    }

    pub fn finding(&mut self, text: impl Into<String>) -> &mut Self {
        self.findings.push(text.into());
        self
    }

    pub fn scope(&mut self, text: impl Into<String>) -> &mut Self {
        self.scope.push(text.into());
        self
    }

    pub fn all_hold(&self) -> bool {
        self.laws.iter().all(|l| l.holds)
    }

    pub fn get(&self, law: &str) -> Option<&LawCheck> {
        self.laws.iter().find(|l| l.law == law)
    }

    pub fn holds(&self, law: &str) -> bool {
        self.get(law).is_some_and(|l| l.holds)
    }

    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.laws.iter().find(|l| !l.holds)
    }

    /// Appends `other`'s content, prefixing its law names.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut l in other.laws {
            l.law = format!("{prefix}{}", l.law);
            self.laws.push(l);
        }
        self.findings.extend(other.findings);
        for s in other.scope {
            if !self.scope.contains(&s) {
                self.scope.push(s);
            }
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.laws {
            writeln!(f, "{l}")?;
        }
        for x in &self.findings {
            writeln!(f, "finding: {x}")?;
        }
        for s in &self.scope {
            writeln!(f, "scope: {s}")?;
        }
        Ok(())
    }
}
