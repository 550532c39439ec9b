//! Binary relations between finite carriers and the operators of the
//! relation-algebra kernel: composition, converse, union and intersection,
//! both residuals, reflexive-transitive closure, inclusion, function graphs.
//!
//! The public algebra is negation-free; residuals are computed by a direct
//! "for all predecessors" scan rather than through complements.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bits::{BitMatrix, BitSet};
use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// A relation `src → tgt` stored as a dense bit matrix.
#[derive(Clone)]
pub struct Rel {
    src: FiniteSet,
    tgt: FiniteSet,
    matrix: Arc<BitMatrix>,
}

/// Outcome of an inclusion test. `witness` is the row-major first pair of
/// the left operand missing from the right one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inclusion {
    pub holds: bool,
    pub witness: Option<(usize, usize)>,
}

impl Inclusion {
    fn from_witness(witness: Option<(usize, usize)>) -> Self {
        Inclusion {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Union,
    Intersection,
}

/// Univalence (`f^*;f_* ⊑ 1`) and totality (`1 ⊑ f_*;f^*`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionProps {
    pub univalent: bool,
    pub total: bool,
}

impl FunctionProps {
    pub fn is_function(&self) -> bool {
        self.univalent && self.total
    }
}

fn same_carriers(op: &'static str, x: &Rel, y: &Rel) -> Result<()> {
    if !x.src.same(&y.src) || !x.tgt.same(&y.tgt) {
        return Err(Error::mismatch(op, x.signature(), y.signature()));
    }
    Ok(())
}

impl Rel {
    pub fn from_matrix(src: &FiniteSet, tgt: &FiniteSet, matrix: BitMatrix) -> Result<Self> {
        if matrix.rows() != src.len() || matrix.cols() != tgt.len() {
            return Err(Error::Invalid {
                what: "relation",
                detail: format!(
                    "matrix is {}×{} but carriers are {}×{}",
                    matrix.rows(),
                    matrix.cols(),
                    src.len(),
                    tgt.len()
                ),
            });
        }
        Ok(Rel {
            src: src.clone(),
            tgt: tgt.clone(),
            matrix: Arc::new(matrix),
        })
    }

    pub(crate) fn wrap(src: &FiniteSet, tgt: &FiniteSet, matrix: BitMatrix) -> Self {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (src.len(), tgt.len()));
        Rel {
            src: src.clone(),
            tgt: tgt.clone(),
            matrix: Arc::new(matrix),
        }
    }

    /// The empty relation `0`.
    pub fn empty(src: &FiniteSet, tgt: &FiniteSet) -> Self {
        Self::wrap(src, tgt, BitMatrix::zeros(src.len(), tgt.len()))
    }

    /// The full relation `src × tgt`.
    pub fn full(src: &FiniteSet, tgt: &FiniteSet) -> Self {
        Self::wrap(src, tgt, BitMatrix::ones(src.len(), tgt.len()))
    }

    /// `1_A`.
    pub fn identity(a: &FiniteSet) -> Self {
        Self::wrap(a, a, BitMatrix::identity(a.len()))
    }

    pub fn from_index_pairs(
        src: &FiniteSet,
        tgt: &FiniteSet,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = BitMatrix::zeros(src.len(), tgt.len());
        for (a, b) in pairs {
            if a >= src.len() || b >= tgt.len() {
                return Err(Error::Invalid {
                    what: "relation",
                    detail: format!("pair ({a},{b}) out of range for {src} -> {tgt}"),
                });
            }
            m.set(a, b);
        }
        Ok(Self::wrap(src, tgt, m))
    }

    pub fn from_pairs<'a>(
        src: &FiniteSet,
        tgt: &FiniteSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut m = BitMatrix::zeros(src.len(), tgt.len());
        for (a, b) in pairs {
            m.set(src.require(a)?, tgt.require(b)?);
        }
        Ok(Self::wrap(src, tgt, m))
    }

    /// Builds a relation from a predicate on index pairs.
    pub fn from_fn(src: &FiniteSet, tgt: &FiniteSet, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zeros(src.len(), tgt.len());
        for a in 0..src.len() {
            for b in 0..tgt.len() {
                if f(a, b) {
                    m.set(a, b);
                }
            }
        }
        Self::wrap(src, tgt, m)
    }

    pub fn src(&self) -> &FiniteSet {
        &self.src
    }

    pub fn tgt(&self) -> &FiniteSet {
        &self.tgt
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.matrix.get(a, b)
    }

    pub fn contains_labels(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.contains(self.src.require(a)?, self.tgt.require(b)?))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.matrix.ones_iter()
    }

    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.pairs()
            .map(|(a, b)| (self.src.label(a).to_string(), self.tgt.label(b).to_string()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.matrix.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_square(&self) -> bool {
        self.src.same(&self.tgt)
    }

    /// `src -> tgt`, for messages.
    pub fn signature(&self) -> String {
        format!("{} -> {}", self.src, self.tgt)
    }

    /// A copy with one pair toggled; used to build negative instances.
    pub fn toggled(&self, a: usize, b: usize) -> Self {
        let mut m = (*self.matrix).clone();
        if m.get(a, b) {
            m.clear(a, b);
        } else {
            m.set(a, b);
        }
        Self::wrap(&self.src, &self.tgt, m)
    }

    /// `x;y`.
    pub fn compose(&self, y: &Rel) -> Result<Rel> {
        if !self.tgt.same(&y.src) {
            return Err(Error::mismatch("compose", self.signature(), y.signature()));
        }
        Ok(Self::wrap(&self.src, &y.tgt, self.matrix.compose(&y.matrix)))
    }

    /// `x˘`.
    pub fn converse(&self) -> Rel {
        Self::wrap(&self.tgt, &self.src, self.matrix.transpose())
    }

    pub fn combine(&self, y: &Rel, mode: Combine) -> Result<Rel> {
        same_carriers("combine", self, y)?;
        let m = match mode {
            Combine::Union => self.matrix.or(&y.matrix),
            Combine::Intersection => self.matrix.and(&y.matrix),
        };
        Ok(Self::wrap(&self.src, &self.tgt, m))
    }

    pub fn union(&self, y: &Rel) -> Result<Rel> {
        self.combine(y, Combine::Union)
    }

    pub fn intersection(&self, y: &Rel) -> Result<Rel> {
        self.combine(y, Combine::Intersection)
    }

    /// Left residual `x\z`: `(b, c)` iff every `a` with `a x b` has `a z c`.
    pub fn under(&self, z: &Rel) -> Result<Rel> {
        if !self.src.same(&z.src) {
            return Err(Error::mismatch("under", self.signature(), z.signature()));
        }
        let xt = self.matrix.transpose();
        let zt = z.matrix.transpose();
        let (xclass, xreps) = xt.row_classes();
        let (zclass, zreps) = zt.row_classes();
        let n_tgt = z.tgt.len();
        let mut class_rows = Vec::with_capacity(xreps.len());
        for &xr in &xreps {
            let col_x = xt.row(xr);
            let ok: Vec<bool> = zreps
                .iter()
                .map(|&zr| col_x.iter().zip(zt.row(zr)).all(|(a, c)| a & !c == 0))
                .collect();
            let mut row = BitSet::new(n_tgt);
            for (c, &k) in zclass.iter().enumerate() {
                if ok[k] {
                    row.set(c);
                }
            }
            class_rows.push(row);
        }
        let mut m = BitMatrix::zeros(self.tgt.len(), n_tgt);
        for (b, &k) in xclass.iter().enumerate() {
            m.set_row(b, &class_rows[k]);
        }
        Ok(Self::wrap(&self.tgt, &z.tgt, m))
    }

    /// Right residual `z/y = (y˘\z˘)˘`; `(a, b)` iff `b y c` implies `a z c`.
    pub fn over(&self, y: &Rel) -> Result<Rel> {
        if !self.tgt.same(&y.tgt) {
            return Err(Error::mismatch("over", self.signature(), y.signature()));
        }
        Ok(y.converse().under(&self.converse())?.converse())
    }

    /// Reflexive-transitive closure `s*`.
    pub fn star(&self) -> Result<Rel> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                op: "star",
                src: self.src.to_string(),
                tgt: self.tgt.to_string(),
            });
        }
        Ok(Self::wrap(&self.src, &self.tgt, self.matrix.star()))
    }

    /// `x ⊑ y`, with the first violating pair on failure.
    pub fn is_included(&self, y: &Rel) -> Result<Inclusion> {
        same_carriers("is_included", self, y)?;
        Ok(Inclusion::from_witness(self.matrix.first_not_in(&y.matrix)))
    }

    /// Univalence and totality of `self` read as a candidate function graph.
    pub fn function_props(&self) -> FunctionProps {
        let mut univalent = true;
        let mut total = true;
        for a in 0..self.src.len() {
            match self.matrix.row_ones(a).take(2).count() {
                0 => total = false,
                1 => {}
                _ => univalent = false,
            }
        }
        FunctionProps { univalent, total }
    }

    /// The function whose graph this is, if any.
    pub fn to_function(&self) -> Option<FuncTable> {
        if !self.function_props().is_function() {
            return None;
        }
        let table = (0..self.src.len())
            .map(|a| self.matrix.row_ones(a).next().unwrap())
            .collect();
        Some(FuncTable {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            table: Arc::new(table),
        })
    }

    pub fn is_reflexive(&self) -> bool {
        self.is_square() && (0..self.src.len()).all(|i| self.contains(i, i))
    }
}

impl PartialEq for Rel {
    fn eq(&self, other: &Self) -> bool {
        self.src.same(&other.src) && self.tgt.same(&other.tgt) && self.matrix == other.matrix
    }
}

impl Eq for Rel {}

impl fmt::Debug for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {{", self.signature())?;
        for (i, (a, b)) in self.label_pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

/// A total function between finite carriers, as an index table.
#[derive(Clone)]
pub struct FuncTable {
    src: FiniteSet,
    tgt: FiniteSet,
    table: Arc<Vec<usize>>,
}

impl FuncTable {
    pub fn new(src: &FiniteSet, tgt: &FiniteSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != src.len() {
            return Err(Error::InvalidFunction(format!(
                "{} entries for a domain of {} elements",
                table.len(),
                src.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= tgt.len()) {
            return Err(Error::InvalidFunction(format!("image index {bad} outside {tgt}")));
        }
        Ok(FuncTable {
            src: src.clone(),
            tgt: tgt.clone(),
            table: Arc::new(table),
        })
    }

    pub fn from_labels<'a>(
        src: &FiniteSet,
        tgt: &FiniteSet,
        entries: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut table = vec![None; src.len()];
        for (a, b) in entries {
            let i = src.require(a)?;
            if table[i].replace(tgt.require(b)?).is_some() {
                return Err(Error::InvalidFunction(format!("`{a}` mapped twice")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, t)| t.ok_or_else(|| Error::InvalidFunction(format!("`{}` is unmapped", src.label(i)))))
            .collect::<Result<_>>()?;
        Self::new(src, tgt, table)
    }

    pub fn identity(a: &FiniteSet) -> Self {
        FuncTable {
            src: a.clone(),
            tgt: a.clone(),
            table: Arc::new((0..a.len()).collect()),
        }
    }

    pub fn src(&self) -> &FiniteSet {
        &self.src
    }

    pub fn tgt(&self) -> &FiniteSet {
        &self.tgt
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `g ∘ self` (apply `self` first).
    pub fn then(&self, g: &FuncTable) -> Result<FuncTable> {
        if !self.tgt.same(&g.src) {
            return Err(Error::mismatch(
                "function composition",
                format!("{} -> {}", self.src, self.tgt),
                format!("{} -> {}", g.src, g.tgt),
            ));
        }
        Ok(FuncTable {
            src: self.src.clone(),
            tgt: g.tgt.clone(),
            table: Arc::new(self.table.iter().map(|&b| g.table[b]).collect()),
        })
    }

    /// The graph `f_*`.
    pub fn graph(&self) -> Rel {
        let mut m = BitMatrix::zeros(self.src.len(), self.tgt.len());
        for (a, &b) in self.table.iter().enumerate() {
            m.set(a, b);
        }
        Rel::wrap(&self.src, &self.tgt, m)
    }

    /// The converse graph `f^*`.
    pub fn cograph(&self) -> Rel {
        self.graph().converse()
    }

    /// `a↦b, ...` with labels, for witnesses.
    pub fn describe(&self) -> String {
        let body: Vec<String> = self
            .table
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{}↦{}", self.src.label(a), self.tgt.label(b)))
            .collect();
        format!("{} -> {} [{}]", self.src, self.tgt, body.join(", "))
    }

    /// Label-keyed view of the table.
    pub fn label_map(&self) -> HashMap<&str, &str> {
        self.table
            .iter()
            .enumerate()
            .map(|(a, &b)| (self.src.label(a), self.tgt.label(b)))
            .collect()
    }
}

impl PartialEq for FuncTable {
    fn eq(&self, other: &Self) -> bool {
        self.src.same(&other.src) && self.tgt.same(&other.tgt) && self.table == other.table
    }
}

impl Eq for FuncTable {}

impl fmt::Debug for FuncTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> FiniteSet {
        FiniteSet::new("A", ["a", "b"]).unwrap()
    }

    fn two() -> FiniteSet {
        FiniteSet::new("N", ["0", "1"]).unwrap()
    }

    #[test]
    fn compose_with_identity_and_zero() {
        let (a, n) = (ab(), two());
        let x = Rel::from_pairs(&a, &n, [("a", "1")]).unwrap();
        assert_eq!(Rel::identity(&a).compose(&x).unwrap(), x);
        let zero = Rel::empty(&n, &n);
        assert_eq!(x.compose(&zero).unwrap(), Rel::empty(&a, &n));
    }

    #[test]
    fn compose_by_witness() {
        let (a, n) = (ab(), two());
        let z = FiniteSet::new("Z", ["z"]).unwrap();
        let x = Rel::from_pairs(&a, &n, [("a", "0"), ("b", "1")]).unwrap();
        let y = Rel::from_pairs(&n, &z, [("0", "z")]).unwrap();
        let xy = x.compose(&y).unwrap();
        assert_eq!(xy.label_pairs(), vec![("a".into(), "z".into())]);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let (a, n) = (ab(), two());
        let x = Rel::empty(&a, &n);
        let err = x.compose(&x).unwrap_err();
        assert!(matches!(err, Error::CarrierMismatch { op: "compose", .. }));
        assert!(err.to_string().contains("A -> N"));
    }

    #[test]
    fn converse_basics() {
        let (a, n) = (ab(), two());
        let x = Rel::from_pairs(&a, &n, [("a", "0")]).unwrap();
        assert_eq!(x.converse().label_pairs(), vec![("0".into(), "a".into())]);
        assert_eq!(x.converse().converse(), x);
        assert_eq!(Rel::identity(&a).converse(), Rel::identity(&a));
    }

    #[test]
    fn union_and_intersection() {
        let (a, n) = (ab(), two());
        let x = Rel::from_pairs(&a, &n, [("a", "0")]).unwrap();
        let y = Rel::from_pairs(&a, &n, [("b", "1")]).unwrap();
        assert_eq!(x.union(&Rel::empty(&a, &n)).unwrap(), x);
        assert_eq!(x.intersection(&Rel::full(&a, &n)).unwrap(), x);
        assert_eq!(
            x.union(&y).unwrap(),
            Rel::from_pairs(&a, &n, [("a", "0"), ("b", "1")]).unwrap()
        );
        assert!(x.union(&Rel::empty(&n, &a)).is_err());
    }

    #[test]
    fn residual_degenerate_cases() {
        let (a, n) = (ab(), two());
        let z = Rel::from_pairs(&a, &n, [("a", "0")]).unwrap();
        assert_eq!(Rel::empty(&a, &a).under(&z).unwrap(), Rel::full(&a, &n));
        assert_eq!(Rel::identity(&a).under(&z).unwrap(), z);
        assert_eq!(z.over(&Rel::identity(&n)).unwrap(), z);
        assert_eq!(z.over(&Rel::empty(&a, &n)).unwrap(), Rel::full(&a, &a));
    }

    #[test]
    fn over_agrees_with_definition() {
        // Over two-element sets: (a, b) ∈ z/y iff ∀c. b y c ⇒ a z c.
        let a = ab();
        let n = two();
        let z = Rel::from_pairs(&a, &n, [("a", "0")]).unwrap();
        let y = Rel::from_pairs(&a, &n, [("b", "0")]).unwrap();
        let by_def = Rel::from_fn(&a, &a, |i, j| (0..2).all(|c| !y.contains(j, c) || z.contains(i, c)));
        assert_eq!(z.over(&y).unwrap(), by_def);
    }

    #[test]
    fn star_laws() {
        let s3 = FiniteSet::new("C", ["a", "b", "c"]).unwrap();
        assert_eq!(Rel::empty(&s3, &s3).star().unwrap(), Rel::identity(&s3));
        let s = Rel::from_pairs(&s3, &s3, [("a", "b"), ("b", "c")]).unwrap();
        let st = s.star().unwrap();
        assert!(st.contains_labels("a", "c").unwrap());
        assert!(st.is_reflexive());
        assert_eq!(st.star().unwrap(), st);
        assert!(Rel::empty(&s3, &two()).star().is_err());
    }

    #[test]
    fn inclusion_witness_is_first_violation() {
        let a = ab();
        let r = Rel::full(&a, &a).is_included(&Rel::identity(&a)).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some((0, 1)));
        assert!(Rel::empty(&a, &a).is_included(&Rel::identity(&a)).unwrap().holds);
    }

    #[test]
    fn function_properties() {
        let one = FiniteSet::new("A", ["a"]).unwrap();
        let x = Rel::from_pairs(&one, &two(), [("a", "0"), ("a", "1")]).unwrap();
        assert_eq!(
            x.function_props(),
            FunctionProps {
                univalent: false,
                total: true
            }
        );
        let a = ab();
        assert_eq!(FuncTable::identity(&a).graph(), Rel::identity(&a));
        assert!(FuncTable::new(&a, &two(), vec![0]).is_err());
        assert!(FuncTable::new(&a, &two(), vec![0, 2]).is_err());
    }
}
