//! Polynomial-time composition-ordering solvers.
//!
//! Conventions shared by every entry point:
//! * `permutation[p]` is the (0-based) index of the function applied at step
//!   p+1, so the composite value is f_{perm[last]} ∘ … ∘ f_{perm[0]} (start).
//! * `prefix_len` is how many leading entries of the permutation are actually
//!   applied; Total mode always applies all of them.
//! * identity functions are value-neutral: they are stripped before solving
//!   and re-appended after the counted prefix (for exact-k they may also pad
//!   the prefix, since applying the identity costs nothing).
//! * every returned value is re-derivable by folding the original functions
//!   along the prefix; `Solution` ties break deterministically as documented
//!   per solver.

use crate::functions::{AffineFn, ClampedFn, Function};
use crate::numeric::Rational;
use crate::ordering::lex_sort;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Max,
    Min,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Total,
    Partial,
    ExactK(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("k = {k} out of range for {n} functions")]
    InvalidK { k: usize, n: usize },
    #[error("unsupported instance: {0}")]
    Unsupported(String),
}

/// A problem as read from an instance file.
#[derive(Debug, Clone)]
pub struct Instance {
    pub functions: Vec<Function>,
    pub start: Rational,
    pub objective: Objective,
    pub mode: Mode,
}

impl Instance {
    pub fn new(
        functions: Vec<Function>,
        start: Rational,
        objective: Objective,
        mode: Mode,
    ) -> Result<Self, SolverError> {
        if let Mode::ExactK(k) = mode {
            if k > functions.len() {
                return Err(SolverError::InvalidK { k, n: functions.len() });
            }
        }
        Ok(Instance { functions, start, objective, mode })
    }
}

/// Result of a solve. `rotation_index` is set by the total solver: the
/// 0-based offset into the sorted order at which the winning rotation starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub value: Rational,
    pub permutation: Vec<usize>,
    pub prefix_len: usize,
    pub rotation_index: Option<usize>,
}

fn split_identities(fs: &[AffineFn]) -> (Vec<usize>, Vec<usize>) {
    let mut non = Vec::new();
    let mut ids = Vec::new();
    for (i, f) in fs.iter().enumerate() {
        if f.is_identity() {
            ids.push(i);
        } else {
            non.push(i);
        }
    }
    (non, ids)
}

/// Sorted (delta, gamma)-order of the non-identity functions, as indices
/// into `fs`.
fn sorted_non_identities(fs: &[AffineFn]) -> (Vec<usize>, Vec<usize>) {
    let (non, ids) = split_identities(fs);
    let keyed: Vec<AffineFn> = non.iter().map(|&i| fs[i].clone()).collect();
    let order = lex_sort(&keyed).expect("identities already removed");
    (order.into_iter().map(|p| non[p]).collect(), ids)
}

/// Folds hulls max{f(x), x} through `sorted` (skipping `skip`), recording
/// which applications strictly improved the running value.
fn hull_fold(
    fs: &[AffineFn],
    sorted: &[usize],
    skip: Option<usize>,
    start: &Rational,
) -> (Rational, Vec<usize>) {
    let mut cur = start.clone();
    let mut improving = Vec::new();
    for &i in sorted {
        if Some(i) == skip {
            continue;
        }
        let v = fs[i].eval(&cur);
        if v > cur {
            improving.push(i);
            cur = v;
        }
    }
    (cur, improving)
}

/// Maximize over permutations and prefix lengths simultaneously: fold the
/// hulls in sorted order and keep exactly the strictly improving steps.
/// Ties never arise in the value; the improving steps are unique given the
/// sorted order, and equal-key functions keep input order.
pub fn solve_partial_linear(fs: &[AffineFn], start: &Rational) -> Solution {
    let (sorted, ids) = sorted_non_identities(fs);
    let (value, improving) = hull_fold(fs, &sorted, None, start);
    let prefix_len = improving.len();
    let mut in_prefix = vec![false; fs.len()];
    for &i in &improving {
        in_prefix[i] = true;
    }
    let mut permutation = improving;
    permutation.extend(sorted.iter().copied().filter(|&i| !in_prefix[i]));
    permutation.extend(ids);
    Solution { value, permutation, prefix_len, rotation_index: None }
}

/// Rotation values d_1..d_n for functions already in sorted order:
/// d_t is the composite value of the rotation starting at position t.
/// d_1 folds directly; the rest follow the exact one-step recurrence
/// d_{t+1} = a_t (d_t - a·start) - b_t (a - 1) + a·start, a = ∏ a_i,
/// which stays valid for zero slopes.
pub fn rotation_values(fs_sorted: &[AffineFn], start: &Rational) -> Vec<Rational> {
    let n = fs_sorted.len();
    if n == 0 {
        return Vec::new();
    }
    let a: Rational = fs_sorted
        .iter()
        .fold(crate::numeric::int(1), |acc, f| acc * f.slope());
    let ac = &a * start;
    let a_minus_1 = &a - crate::numeric::int(1);
    let mut ds = Vec::with_capacity(n);
    let mut d = fs_sorted.iter().fold(start.clone(), |x, f| f.eval(&x));
    ds.push(d.clone());
    for f in &fs_sorted[..n - 1] {
        d = f.slope() * (&d - &ac) - f.intercept() * &a_minus_1 + &ac;
        ds.push(d.clone());
    }
    ds
}

/// Maximize the full composition: the optimum is a rotation of the sorted
/// order. Ties take the smallest rotation offset.
pub fn solve_total_linear(fs: &[AffineFn], start: &Rational) -> Solution {
    let n = fs.len();
    let (sorted, ids) = sorted_non_identities(fs);
    if sorted.is_empty() {
        return Solution {
            value: start.clone(),
            permutation: ids,
            prefix_len: n,
            rotation_index: None,
        };
    }
    let in_order: Vec<AffineFn> = sorted.iter().map(|&i| fs[i].clone()).collect();
    let ds = rotation_values(&in_order, start);
    let (mut best_t, mut best) = (0, ds[0].clone());
    for (t, d) in ds.iter().enumerate().skip(1) {
        if d > &best {
            best_t = t;
            best = d.clone();
        }
    }
    let mut permutation = Vec::with_capacity(n);
    permutation.extend_from_slice(&sorted[best_t..]);
    permutation.extend_from_slice(&sorted[..best_t]);
    permutation.extend(ids);
    Solution { value: best, permutation, prefix_len: n, rotation_index: Some(best_t) }
}

/// Last DP column (values for every count l ≤ lmax) for the window starting
/// at sorted position `i`; optionally records take/skip decisions.
fn dp_window(
    fs: &[AffineFn],
    window: usize,
    lmax: usize,
    start: &Rational,
    mut parents: Option<&mut Vec<Vec<bool>>>,
) -> Vec<Rational> {
    let m = fs.len();
    let mut prev: Vec<Rational> = vec![start.clone()];
    for j in 1..=m {
        let f = &fs[(window + j - 1) % m];
        let hi = lmax.min(j);
        let mut cur = Vec::with_capacity(hi + 1);
        cur.push(start.clone());
        let mut took = vec![false; hi + 1];
        for l in 1..=hi {
            let take = f.eval(&prev[l - 1]);
            if l == j {
                took[l] = true;
                cur.push(take);
            } else {
                let skip = prev[l].clone();
                if take > skip {
                    took[l] = true;
                    cur.push(take);
                } else {
                    cur.push(skip);
                }
            }
        }
        if let Some(par) = parents.as_deref_mut() {
            par.push(took);
        }
        prev = cur;
    }
    prev
}

/// Maximize over compositions of exactly k of the functions. The optimal
/// selection applies a subsequence of some rotation of the sorted order, so
/// an O(n²k) DP over all rotation windows finds it. Identity functions may
/// pad the selection. Ties prefer skipping a candidate, then the smallest
/// applied-function count, then the smallest window offset.
pub fn solve_exact_k(fs: &[AffineFn], start: &Rational, k: usize) -> Result<Solution, SolverError> {
    let n = fs.len();
    if k > n {
        return Err(SolverError::InvalidK { k, n });
    }
    let (sorted, ids) = sorted_non_identities(fs);
    let m = sorted.len();
    let lmin = k.saturating_sub(ids.len());
    let lmax = k.min(m);
    debug_assert!(lmin <= lmax);
    let in_order: Vec<AffineFn> = sorted.iter().map(|&i| fs[i].clone()).collect();

    if m == 0 {
        let mut permutation = ids;
        permutation.extend(sorted);
        return Ok(Solution {
            value: start.clone(),
            permutation,
            prefix_len: k,
            rotation_index: None,
        });
    }

    let columns: Vec<Vec<Rational>> = (0..m)
        .map(|i| dp_window(&in_order, i, lmax, start, None))
        .collect();
    let (mut best_l, mut best_i) = (lmin, 0);
    let mut best = columns[0][lmin].clone();
    for l in lmin..=lmax {
        for (i, col) in columns.iter().enumerate() {
            if col[l] > best {
                best = col[l].clone();
                best_l = l;
                best_i = i;
            }
        }
    }

    // Second pass over the winning window to recover the chosen positions.
    let mut parents: Vec<Vec<bool>> = Vec::with_capacity(m);
    let rerun = dp_window(&in_order, best_i, lmax, start, Some(&mut parents));
    debug_assert_eq!(rerun[best_l], best);
    let mut chosen_rev: Vec<usize> = Vec::with_capacity(best_l);
    let (mut j, mut l) = (m, best_l);
    while l > 0 {
        if parents[j - 1][l] {
            chosen_rev.push((best_i + j - 1) % m);
            l -= 1;
        }
        j -= 1;
    }
    let chosen: Vec<usize> = chosen_rev.iter().rev().map(|&p| sorted[p]).collect();

    let mut permutation = chosen.clone();
    permutation.extend(ids.iter().copied().take(k - best_l));
    permutation.extend(sorted.iter().copied().filter(|i| !chosen.contains(i)));
    permutation.extend(ids.iter().copied().skip(k - best_l));
    Ok(Solution { value: best, permutation, prefix_len: k, rotation_index: Some(best_i) })
}

/// Maximize a prefix composition of clamped functions max{a_i x + b_i, c_i}.
///
/// Only the first applied function can profit from its floor, so the optimum
/// is the best of: the purely affine prefix problem from `start`, and for
/// each candidate first function kᵒ the affine prefix problem over the
/// others started from c_{kᵒ}. All n+1 sub-instances share one sorted order.
/// Ties prefer the no-floor base instance, then the smallest kᵒ.
pub fn solve_partial_clamped(hs: &[ClampedFn], start: &Rational) -> Solution {
    let affs: Vec<AffineFn> = hs.iter().map(|h| h.affine_part().clone()).collect();
    let (sorted, ids) = sorted_non_identities(&affs);

    let (base_value, base_improving) = hull_fold(&affs, &sorted, None, start);
    let mut best_value = base_value;
    let mut best_first: Option<usize> = None;
    let mut best_improving = base_improving;
    for (ko, h) in hs.iter().enumerate() {
        let (v, improving) = hull_fold(&affs, &sorted, Some(ko), h.floor());
        if v > best_value {
            best_value = v;
            best_first = Some(ko);
            best_improving = improving;
        }
    }

    let mut permutation = Vec::with_capacity(hs.len());
    if let Some(ko) = best_first {
        permutation.push(ko);
    }
    permutation.extend(best_improving.iter().copied());
    let prefix_len = permutation.len();
    let taken = permutation.clone();
    permutation.extend(
        sorted
            .iter()
            .chain(ids.iter())
            .copied()
            .filter(|i| !taken.contains(i)),
    );

    // The claimed value must be reproducible by applying the clamped
    // functions along the prefix; anything else is a solver bug.
    let refold = permutation[..prefix_len]
        .iter()
        .fold(start.clone(), |x, &i| hs[i].eval(&x));
    assert_eq!(refold, best_value, "clamped prefix failed re-evaluation");

    Solution { value: best_value, permutation, prefix_len, rotation_index: None }
}

/// Minimize instead of maximize, by solving the reflected instance
/// (a, b) ↦ (a, -b) from -start and negating the result. Total and Partial
/// affine instances only.
pub fn solve_min(instance: &Instance) -> Result<Solution, SolverError> {
    if instance.objective != Objective::Min {
        return Err(SolverError::Unsupported(
            "solve_min expects a minimization instance".into(),
        ));
    }
    let mut reflected = Vec::with_capacity(instance.functions.len());
    for f in &instance.functions {
        match f {
            Function::Affine(a) => reflected.push(a.reflect()),
            _ => {
                return Err(SolverError::Unsupported(
                    "minimization is only supported for affine functions".into(),
                ))
            }
        }
    }
    let neg_start = -&instance.start;
    let solved = match instance.mode {
        Mode::Total => solve_total_linear(&reflected, &neg_start),
        Mode::Partial => solve_partial_linear(&reflected, &neg_start),
        Mode::ExactK(_) => {
            return Err(SolverError::Unsupported(
                "minimization supports Total and Partial modes only".into(),
            ))
        }
    };
    let Solution { value, permutation, prefix_len, rotation_index } = solved;
    Ok(Solution { value: -value, permutation, prefix_len, rotation_index })
}

/// Route an instance to a matching polynomial solver by objective, mode and
/// function class; general piecewise-linear instances have no polynomial
/// solver here and must go to the brute-force oracle instead.
pub fn solve(instance: &Instance) -> Result<Solution, SolverError> {
    if instance.objective == Objective::Min {
        return solve_min(instance);
    }
    let all_affine: Option<Vec<AffineFn>> = instance
        .functions
        .iter()
        .map(|f| f.as_affine().cloned())
        .collect();
    if let Some(affs) = all_affine {
        return match instance.mode {
            Mode::Total => Ok(solve_total_linear(&affs, &instance.start)),
            Mode::Partial => Ok(solve_partial_linear(&affs, &instance.start)),
            Mode::ExactK(k) => solve_exact_k(&affs, &instance.start, k),
        };
    }
    let all_clamped: Option<Vec<ClampedFn>> = instance
        .functions
        .iter()
        .map(|f| f.as_clamped().cloned())
        .collect();
    match (all_clamped, instance.mode) {
        (Some(hs), Mode::Partial) => Ok(solve_partial_clamped(&hs, &instance.start)),
        (Some(_), _) => Err(SolverError::Unsupported(
            "clamped functions are only supported in partial mode".into(),
        )),
        (None, _) => Err(SolverError::Unsupported(
            "piecewise-linear instances require the brute-force oracle".into(),
        )),
    }
}
