//! Brute-force reference solvers. Everything here enumerates permutations
//! in lexicographic order and evaluates pointwise, so results are exact and
//! deterministic: ties keep the lexicographically smallest permutation (for
//! prefix problems, the smallest prefix length wins first).
//!
//! The size guard exists because n! explodes; raise it consciously via the
//! `*_with_limit` variants.

use crate::functions::MonotonePwlFn;
use crate::numeric::Rational;
use crate::solvers::Solution;
use itertools::Itertools;

/// Largest n the convenience wrappers accept.
pub const DEFAULT_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance has {n} functions, oracle limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("k = {k} out of range for {n} functions")]
    InvalidK { k: usize, n: usize },
}

fn check(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        Err(OracleError::TooLarge { n, limit })
    } else {
        Ok(())
    }
}

fn fold(fs: &[MonotonePwlFn], order: &[usize], start: &Rational) -> Rational {
    order.iter().fold(start.clone(), |x, &i| fs[i].eval(&x))
}

pub fn brute_total(fs: &[MonotonePwlFn], start: &Rational) -> Result<Solution, OracleError> {
    brute_total_with_limit(fs, start, DEFAULT_LIMIT)
}

/// Maximum over all n! full compositions.
pub fn brute_total_with_limit(
    fs: &[MonotonePwlFn],
    start: &Rational,
    limit: usize,
) -> Result<Solution, OracleError> {
    check(fs.len(), limit)?;
    let n = fs.len();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for perm in (0..n).permutations(n) {
        let v = fold(fs, &perm, start);
        if best.as_ref().is_none_or(|(bv, _)| &v > bv) {
            best = Some((v, perm));
        }
    }
    let (value, permutation) = best.unwrap_or_else(|| (start.clone(), vec![]));
    Ok(Solution { value, permutation, prefix_len: n, rotation_index: None })
}

/// Minimum over all n! full compositions (for schedule-style objectives).
pub fn brute_total_min(fs: &[MonotonePwlFn], start: &Rational) -> Result<Solution, OracleError> {
    brute_total_min_with_limit(fs, start, DEFAULT_LIMIT)
}

pub fn brute_total_min_with_limit(
    fs: &[MonotonePwlFn],
    start: &Rational,
    limit: usize,
) -> Result<Solution, OracleError> {
    check(fs.len(), limit)?;
    let n = fs.len();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for perm in (0..n).permutations(n) {
        let v = fold(fs, &perm, start);
        if best.as_ref().is_none_or(|(bv, _)| &v < bv) {
            best = Some((v, perm));
        }
    }
    let (value, permutation) = best.unwrap_or_else(|| (start.clone(), vec![]));
    Ok(Solution { value, permutation, prefix_len: n, rotation_index: None })
}

pub fn brute_partial(fs: &[MonotonePwlFn], start: &Rational) -> Result<Solution, OracleError> {
    brute_partial_with_limit(fs, start, DEFAULT_LIMIT)
}

/// Maximum over all permutations and all prefix lengths 0..=n.
pub fn brute_partial_with_limit(
    fs: &[MonotonePwlFn],
    start: &Rational,
    limit: usize,
) -> Result<Solution, OracleError> {
    check(fs.len(), limit)?;
    let n = fs.len();
    let mut best_value = start.clone();
    let mut best_k = 0usize;
    let mut best_perm: Vec<usize> = (0..n).collect();
    for perm in (0..n).permutations(n) {
        let mut cur = start.clone();
        for k in 1..=n {
            cur = fs[perm[k - 1]].eval(&cur);
            if cur > best_value || (cur == best_value && k < best_k) {
                best_value = cur.clone();
                best_k = k;
                best_perm = perm.clone();
            }
        }
    }
    Ok(Solution {
        value: best_value,
        permutation: best_perm,
        prefix_len: best_k,
        rotation_index: None,
    })
}

pub fn brute_exact_k(
    fs: &[MonotonePwlFn],
    start: &Rational,
    k: usize,
) -> Result<Solution, OracleError> {
    brute_exact_k_with_limit(fs, start, k, DEFAULT_LIMIT)
}

/// Maximum over all ordered selections of exactly k functions.
pub fn brute_exact_k_with_limit(
    fs: &[MonotonePwlFn],
    start: &Rational,
    k: usize,
    limit: usize,
) -> Result<Solution, OracleError> {
    check(fs.len(), limit)?;
    let n = fs.len();
    if k > n {
        return Err(OracleError::InvalidK { k, n });
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for sel in (0..n).permutations(k) {
        let v = fold(fs, &sel, start);
        if best.as_ref().is_none_or(|(bv, _)| &v > bv) {
            best = Some((v, sel));
        }
    }
    let (value, chosen) = best.unwrap_or_else(|| (start.clone(), vec![]));
    let mut permutation = chosen.clone();
    permutation.extend((0..n).filter(|i| !chosen.contains(i)));
    Ok(Solution { value, permutation, prefix_len: k, rotation_index: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::AffineFn;
    use crate::numeric::{int, rat};

    fn pwl(fs: &[AffineFn]) -> Vec<MonotonePwlFn> {
        fs.iter().cloned().map(MonotonePwlFn::from_affine).collect()
    }

    fn aff(n: i64, d: i64, bn: i64, bd: i64) -> AffineFn {
        AffineFn::new(rat(n, d), rat(bn, bd)).unwrap()
    }

    fn intro() -> Vec<MonotonePwlFn> {
        pwl(&[aff(2, 1, -6, 1), aff(1, 2, 2, 1), aff(1, 1, 2, 1)])
    }

    #[test]
    fn intro_values() {
        let fs = intro();
        let t = brute_total(&fs, &int(2)).unwrap();
        assert_eq!(t.value, int(4));
        assert_eq!(t.permutation, vec![1, 2, 0]);
        let p = brute_partial(&fs, &int(2)).unwrap();
        assert_eq!(p.value, int(5));
        assert_eq!(p.prefix_len, 2);
        assert_eq!(&p.permutation[..2], &[1, 2]);
        let e = brute_exact_k(&fs, &int(2), 2).unwrap();
        assert_eq!(e.value, int(5));
        assert_eq!(&e.permutation[..2], &[1, 2]);
    }

    #[test]
    fn partial_prefers_smaller_prefix_on_ties() {
        // applying the identity-like translation by 0 never improves
        let fs = pwl(&[aff(1, 1, 0, 1), aff(1, 1, 3, 1)]);
        let p = brute_partial(&fs, &int(0)).unwrap();
        assert_eq!(p.value, int(3));
        assert_eq!(p.prefix_len, 1);
        assert_eq!(p.permutation, vec![1, 0]);
    }

    #[test]
    fn exact_k_counts_every_function() {
        // a decreasing function must still be applied when k forces it
        let fs = pwl(&[aff(1, 1, -5, 1), aff(1, 1, 1, 1)]);
        assert_eq!(brute_exact_k(&fs, &int(0), 0).unwrap().value, int(0));
        assert_eq!(brute_exact_k(&fs, &int(0), 1).unwrap().value, int(1));
        assert_eq!(brute_exact_k(&fs, &int(0), 2).unwrap().value, int(-4));
        assert!(brute_exact_k(&fs, &int(0), 3).is_err());
    }

    #[test]
    fn min_total_reflection_duality() {
        let fs = intro();
        let reflected: Vec<MonotonePwlFn> = fs.iter().map(|f| f.reflect()).collect();
        let direct = brute_total_min(&fs, &int(2)).unwrap();
        let via = brute_total(&reflected, &int(-2)).unwrap();
        assert_eq!(direct.value, -via.value);
        assert_eq!(direct.permutation, via.permutation);
    }

    #[test]
    fn size_guard() {
        let fs = pwl(&vec![aff(1, 1, 1, 1); 9]);
        assert_eq!(
            brute_total(&fs, &int(0)),
            Err(OracleError::TooLarge { n: 9, limit: 8 })
        );
        assert!(brute_total_with_limit(&fs[..2], &int(0), 2).is_ok());
    }

    #[test]
    fn empty_instance() {
        let t = brute_total(&[], &int(7)).unwrap();
        assert_eq!(t.value, int(7));
        assert!(t.permutation.is_empty());
    }
}
