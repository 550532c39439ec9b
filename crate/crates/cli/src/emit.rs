//! Serializes constructed objects back into declarations.

use std::collections::HashSet;

use reprkit::morphism::Morphism;
use reprkit::reduction::Reduction;
use reprkit::repr::Representation;
use reprkit::{FiniteSet, FuncTable, Rel};

use crate::syntax::{print_decls, Body, Decl};

/// Collects declarations, emitting every carrier once and keeping names
/// unique.
#[derive(Default)]
pub struct Emitter {
    decls: Vec<Decl>,
    sets: Vec<(FiniteSet, String)>,
    names: HashSet<String>,
}

impl Emitter {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self, hint: &str) -> String {
        let mut name = hint.to_string();
        while self.names.contains(&name) {
            name.push('\'');
        }
        self.names.insert(name.clone());
        name
    }

    pub fn set(&mut self, s: &FiniteSet) -> String {
        if let Some((_, n)) = self.sets.iter().find(|(t, _)| t.same(s)) {
            return n.clone();
        }
        let name = self.fresh(s.name());
        self.sets.push((s.clone(), name.clone()));
        self.decls.push(Decl {
            name: name.clone(),
            body: Body::Set(s.labels().to_vec()),
        });
        name
    }

    pub fn relation(&mut self, hint: &str, r: &Rel) -> String {
        let (src, tgt) = (self.set(r.src()), self.set(r.tgt()));
        let name = self.fresh(hint);
        self.decls.push(Decl {
            name: name.clone(),
            body: Body::Relation {
                src,
                tgt,
                pairs: r.label_pairs(),
            },
        });
        name
    }

    pub fn function(&mut self, hint: &str, f: &FuncTable) -> String {
        let (src, tgt) = (self.set(f.src()), self.set(f.tgt()));
        let name = self.fresh(hint);
        let map = (0..f.src().len())
            .map(|i| (f.src().label(i).to_string(), f.tgt().label(f.apply(i)).to_string()))
            .collect();
        self.decls.push(Decl {
            name: name.clone(),
            body: Body::Function { src, tgt, map },
        });
        name
    }

    pub fn rep(&mut self, hint: &str, r: &Representation) -> String {
        let models = self.relation(&format!("{hint}.models"), r.models());
        let leq = self.relation(&format!("{hint}.leq"), r.leq());
        let name = self.fresh(hint);
        self.decls.push(Decl {
            name: name.clone(),
            body: Body::Rep { models, leq },
        });
        name
    }

    pub fn morphism(&mut self, hint: &str, src: &str, tgt: &str, m: &Morphism) -> String {
        let phi = self.function(&format!("{hint}.phi"), &m.phi);
        let psi = self.relation(&format!("{hint}.psi"), &m.psi);
        let name = self.fresh(hint);
        self.decls.push(Decl {
            name: name.clone(),
            body: Body::Morphism {
                src: src.to_string(),
                tgt: tgt.to_string(),
                phi,
                psi,
            },
        });
        name
    }

    pub fn reduction(&mut self, hint: &str, src: &str, tgt: &str, r: &Reduction) -> String {
        let phi = self.function(&format!("{hint}.phi"), &r.phi);
        let tau = self.function(&format!("{hint}.tau"), &r.tau);
        let psi = self.relation(&format!("{hint}.psi"), &r.psi);
        let name = self.fresh(hint);
        self.decls.push(Decl {
            name: name.clone(),
            body: Body::Reduction {
                src: src.to_string(),
                tgt: tgt.to_string(),
                phi,
                tau,
                psi,
            },
        });
        name
    }

    pub fn finish(self) -> String {
        print_decls(&self.decls)
    }
}
