//! Enumeration of relations and functions between small carriers, and
//! seeded random instances for the law suites.
//!
//! Every random stream is a ChaCha8 generator keyed by `(seed, stream)`, so
//! sample `i` of a suite is reproducible on its own, independent of how
//! the suite is partitioned.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::rel::{FuncTable, Rel};
use crate::set::FiniteSet;

pub type SuiteRng = ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> SuiteRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Number of relations `src → tgt`, saturating.
pub fn relation_count(src: usize, tgt: usize) -> u128 {
    let cells = (src * tgt) as u32;
    if cells >= 127 {
        u128::MAX
    } else {
        1u128 << cells
    }
}

/// Number of functions `src → tgt`, saturating.
pub fn function_count(src: usize, tgt: usize) -> u128 {
    (tgt as u128).checked_pow(src as u32).unwrap_or(u128::MAX)
}

/// Every relation `src → tgt`, in binary-counter order over row-major cells.
pub fn all_relations(src: &FiniteSet, tgt: &FiniteSet, budget: u128) -> Result<Vec<Rel>> {
    let n = relation_count(src.len(), tgt.len());
    if n > budget {
        return Err(Error::budget(format!("relations {src} -> {tgt}"), n, budget));
    }
    let cols = tgt.len();
    Ok((0..n as u64)
        .map(|code| {
            let mut m = BitMatrix::zeros(src.len(), cols);
            for cell in 0..src.len() * cols {
                if code >> cell & 1 == 1 {
                    m.set(cell / cols, cell % cols);
                }
            }
            Rel::wrap(src, tgt, m)
        })
        .collect())
}

/// Every function `src → tgt`, in lexicographic order of tables.
pub fn all_functions(src: &FiniteSet, tgt: &FiniteSet, budget: u128) -> Result<Vec<FuncTable>> {
    let n = function_count(src.len(), tgt.len());
    if n > budget {
        return Err(Error::budget(format!("functions {src} -> {tgt}"), n, budget));
    }
    let mut out = Vec::with_capacity(n as usize);
    let mut table = vec![0usize; src.len()];
    if tgt.is_empty() && !src.is_empty() {
        return Ok(out);
    }
    loop {
        out.push(FuncTable::new(src, tgt, table.clone()).expect("in range"));
        // odometer, last position fastest
        let mut pos = src.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            table[pos] += 1;
            if table[pos] < tgt.len() {
                break;
            }
            table[pos] = 0;
        }
    }
}

pub fn random_rel(rng: &mut SuiteRng, src: &FiniteSet, tgt: &FiniteSet, density: f64) -> Rel {
    let mut m = BitMatrix::zeros(src.len(), tgt.len());
    for a in 0..src.len() {
        for b in 0..tgt.len() {
            if rng.gen_bool(density) {
                m.set(a, b);
            }
        }
    }
    Rel::wrap(src, tgt, m)
}

/// A uniformly random function; `None` when `tgt` is empty but `src` is not.
pub fn random_function(rng: &mut SuiteRng, src: &FiniteSet, tgt: &FiniteSet) -> Option<FuncTable> {
    if tgt.is_empty() && !src.is_empty() {
        return None;
    }
    let table = (0..src.len()).map(|_| rng.gen_range(0..tgt.len())).collect();
    Some(FuncTable::new(src, tgt, table).expect("in range"))
}

/// A random surjection `src → tgt`; requires `|src| ≥ |tgt|`.
pub fn random_surjection(rng: &mut SuiteRng, src: &FiniteSet, tgt: &FiniteSet) -> Option<FuncTable> {
    if src.len() < tgt.len() || (tgt.is_empty() && !src.is_empty()) {
        return None;
    }
    let mut table: Vec<usize> = (0..tgt.len()).collect();
    while table.len() < src.len() {
        table.push(rng.gen_range(0..tgt.len()));
    }
    // Fisher-Yates
    for i in (1..table.len()).rev() {
        let j = rng.gen_range(0..=i);
        table.swap(i, j);
    }
    Some(FuncTable::new(src, tgt, table).expect("in range"))
}

/// A random preorder: the closure of a random relation.
pub fn random_preorder(rng: &mut SuiteRng, a: &FiniteSet, density: f64) -> Rel {
    random_rel(rng, a, a, density).star().expect("square")
}

/// A random subrelation of `x`, keeping each pair with probability `keep`.
pub fn random_subrelation(rng: &mut SuiteRng, x: &Rel, keep: f64) -> Rel {
    let pairs: Vec<_> = x.pairs().filter(|_| rng.gen_bool(keep)).collect();
    Rel::from_index_pairs(x.src(), x.tgt(), pairs).expect("subset of a valid relation")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let a = FiniteSet::indexed("A", "a", 2);
        let b = FiniteSet::indexed("B", "b", 3);
        assert_eq!(all_relations(&a, &b, 1 << 20).unwrap().len(), 64);
        assert_eq!(all_functions(&a, &b, 100).unwrap().len(), 9);
        let e = FiniteSet::indexed("E", "e", 0);
        assert_eq!(all_functions(&e, &b, 100).unwrap().len(), 1);
        assert_eq!(all_functions(&a, &e, 100).unwrap().len(), 0);
        assert!(all_relations(&b, &b, 10).is_err());
    }

    #[test]
    fn streams_are_reproducible() {
        let a = FiniteSet::indexed("A", "a", 4);
        let x = random_rel(&mut rng(7, 3), &a, &a, 0.5);
        let y = random_rel(&mut rng(7, 3), &a, &a, 0.5);
        assert_eq!(x, y);
    }

    #[test]
    fn surjections_cover() {
        let a = FiniteSet::indexed("A", "a", 5);
        let b = FiniteSet::indexed("B", "b", 3);
        for s in 0..20 {
            let f = random_surjection(&mut rng(1, s), &a, &b).unwrap();
            let mut hit = [false; 3];
            f.table().iter().for_each(|&i| hit[i] = true);
            assert!(hit.iter().all(|&h| h));
        }
    }
}
