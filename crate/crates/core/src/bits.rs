//! Dense row-major bit matrices, the storage behind [`crate::Rel`].
//!
//! Every row is padded to a whole number of `u64` words; padding bits are
//! always zero so rows can be compared and hashed word-wise.

use std::collections::HashMap;

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// A growable-free bit vector used for single rows and scratch sets.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones::new(&self.words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Iterator over the set bit positions of a word slice.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    fn new(words: &'a [u64]) -> Self {
        Ones {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// An `rows × cols` boolean matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] >> (c % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] |= 1 << (c % WORD);
    }

    #[inline]
    pub fn clear(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] &= !(1 << (c % WORD));
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_ones(&self, r: usize) -> Ones<'_> {
        Ones::new(self.row(r))
    }

    pub fn row_set(&self, r: usize) -> BitSet {
        BitSet {
            len: self.cols,
            words: self.row(r).to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, bits: &BitSet) {
        debug_assert_eq!(bits.len, self.cols);
        self.row_mut(r).copy_from_slice(&bits.words);
    }

    /// All set positions in row-major order.
    pub fn ones_iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| self.row_ones(r).map(move |c| (r, c)))
    }

    pub fn count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, c) in self.ones_iter() {
            t.set(c, r);
        }
        t
    }

    pub fn or(&self, other: &BitMatrix) -> BitMatrix {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn and(&self, other: &BitMatrix) -> BitMatrix {
        self.zip_with(other, |a, b| a & b)
    }

    fn zip_with(&self, other: &BitMatrix, f: impl Fn(u64, u64) -> u64) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        BitMatrix {
            rows: self.rows,
            cols: self.cols,
            stride: self.stride,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// First position (row-major) set in `self` but not in `other`.
    pub fn first_not_in(&self, other: &BitMatrix) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for r in 0..self.rows {
            for (w, (a, b)) in self.row(r).iter().zip(other.row(r)).enumerate() {
                let d = a & !b;
                if d != 0 {
                    return Some((r, w * WORD + d.trailing_zeros() as usize));
                }
            }
        }
        None
    }

    /// Boolean matrix product. Identical left rows are computed once; a right
    /// factor with at most one entry per column is gathered by columns, and
    /// dense left rows go through the classes of identical right rows.
    pub fn compose(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        if self.rows == 0 || other.cols == 0 {
            return out;
        }
        let (xclass, xreps) = self.row_classes();
        let class_rows: Vec<Vec<u64>> = match other.column_sources() {
            // every column of `other` has at most one entry, as for the
            // converse of a function: (x;y)(i,k) = x(i, src k)
            Some(src) => xreps
                .iter()
                .map(|&xr| {
                    let mut acc = vec![0u64; out.stride];
                    for (k, j) in src.iter().enumerate() {
                        if matches!(j, Some(j) if self.get(xr, *j)) {
                            acc[k / WORD] |= 1 << (k % WORD);
                        }
                    }
                    acc
                })
                .collect(),
            None => {
                let (yclass, yreps) = other.row_classes();
                let mut hit = vec![false; yreps.len()];
                xreps
                    .iter()
                    .map(|&xr| {
                        let mut acc = vec![0u64; out.stride];
                        let ones = self.row(xr).iter().map(|w| w.count_ones() as usize).sum::<usize>();
                        if ones <= yreps.len() {
                            for b in self.row_ones(xr) {
                                for (a, w) in acc.iter_mut().zip(other.row(b)) {
                                    *a |= w;
                                }
                            }
                        } else {
                            hit.iter_mut().for_each(|h| *h = false);
                            for b in self.row_ones(xr) {
                                hit[yclass[b]] = true;
                            }
                            for (c, &yr) in yreps.iter().enumerate() {
                                if hit[c] {
                                    for (a, w) in acc.iter_mut().zip(other.row(yr)) {
                                        *a |= w;
                                    }
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            }
        };
        for r in 0..self.rows {
            out.row_mut(r).copy_from_slice(&class_rows[xclass[r]]);
        }
        out
    }

    /// For each column, its unique set row; `None` if some column has two.
    fn column_sources(&self) -> Option<Vec<Option<usize>>> {
        let mut src = vec![None; self.cols];
        for (r, c) in self.ones_iter() {
            if src[c].replace(r).is_some() {
                return None;
            }
        }
        Some(src)
    }

    /// First position (row-major) of `self;self` missing from `self`, on a
    /// square matrix. Indices with identical rows and identical columns are
    /// interchangeable, so the check runs on that quotient.
    pub fn first_intransitive(&self) -> Option<(usize, usize)> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let t = self.transpose();
        let mut seen: HashMap<(&[u64], &[u64]), usize> = HashMap::new();
        let mut class = Vec::with_capacity(n);
        let mut reps = Vec::new();
        for i in 0..n {
            let next = reps.len();
            let c = *seen.entry((self.row(i), t.row(i))).or_insert(next);
            if c == next {
                reps.push(i);
            }
            class.push(c);
        }
        let d = reps.len();
        let mut q = BitMatrix::zeros(d, d);
        for (ci, &ri) in reps.iter().enumerate() {
            for (cj, &rj) in reps.iter().enumerate() {
                if self.get(ri, rj) {
                    q.set(ci, cj);
                }
            }
        }
        // classes are numbered by first member, so the first failing row
        // and the smallest missing class give the row-major first witness
        let mut first: Option<(usize, usize)> = None;
        for c in 0..d {
            let mut acc = vec![0u64; q.stride];
            for m in q.row_ones(c) {
                for (a, w) in acc.iter_mut().zip(q.row(m)) {
                    *a |= w;
                }
            }
            let missing = acc.iter().zip(q.row(c)).enumerate().find_map(|(w, (a, b))| {
                let x = a & !b;
                (x != 0).then(|| w * WORD + x.trailing_zeros() as usize)
            });
            if let Some(k) = missing {
                let cand = (reps[c], reps[k]);
                if first.is_none_or(|f| cand < f) {
                    first = Some(cand);
                }
            }
        }
        first
    }

    /// Groups identical rows: returns the class of every row and one
    /// representative row index per class, in order of first appearance.
    pub fn row_classes(&self) -> (Vec<usize>, Vec<usize>) {
        let mut seen: HashMap<&[u64], usize> = HashMap::new();
        let mut class = Vec::with_capacity(self.rows);
        let mut reps = Vec::new();
        for r in 0..self.rows {
            let next = reps.len();
            let c = *seen.entry(self.row(r)).or_insert(next);
            if c == next {
                reps.push(r);
            }
            class.push(c);
        }
        (class, reps)
    }

    /// Reflexive-transitive closure. Warshall then reflexive fill on small
    /// matrices; above [`WARSHALL_MAX`] rows, reachability over the
    /// condensation of strongly connected components.
    pub fn star(&self) -> BitMatrix {
        assert_eq!(self.rows, self.cols);
        if self.rows > WARSHALL_MAX {
            self.star_by_components()
        } else {
            self.star_warshall()
        }
    }

    pub(crate) fn star_warshall(&self) -> BitMatrix {
        let n = self.rows;
        let mut m = self.clone();
        let stride = m.stride;
        let mut pivot = vec![0u64; stride];
        for k in 0..n {
            pivot.copy_from_slice(m.row(k));
            let (kw, kb) = (k / WORD, 1u64 << (k % WORD));
            for i in 0..n {
                let base = i * stride;
                if m.data[base + kw] & kb != 0 {
                    for (a, p) in m.data[base..base + stride].iter_mut().zip(&pivot) {
                        *a |= p;
                    }
                }
            }
        }
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub(crate) fn star_by_components(&self) -> BitMatrix {
        let n = self.rows;
        let comps = tarjan(self);
        let mut comp_of = vec![0usize; n];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                comp_of[v] = c;
            }
        }
        // Tarjan emits a component only after every component it reaches.
        let mut reach: Vec<BitSet> = Vec::with_capacity(comps.len());
        let mut mark = vec![usize::MAX; comps.len()];
        for (c, members) in comps.iter().enumerate() {
            let mut r = BitSet::new(n);
            for &v in members {
                r.set(v);
            }
            for &v in members {
                for w in self.row_ones(v) {
                    let d = comp_of[w];
                    if d != c && mark[d] != c {
                        mark[d] = c;
                        r.union_with(&reach[d]);
                    }
                }
            }
            reach.push(r);
        }
        let mut out = BitMatrix::zeros(n, n);
        for v in 0..n {
            out.set_row(v, &reach[comp_of[v]]);
        }
        out
    }
}

/// Row count above which `star` switches from Warshall to components.
pub const WARSHALL_MAX: usize = 1024;

/// Strongly connected components in reverse topological order (iterative).
fn tarjan(m: &BitMatrix) -> Vec<Vec<usize>> {
    let n = m.rows;
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    let succ: Vec<Vec<usize>> = (0..n).map(|v| m.row_ones(v).collect()).collect();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = work.last_mut() {
            let v = top.0;
            if top.1 < succ[v].len() {
                let w = succ[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("nonempty");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
            }
        }
    }
    comps
}
