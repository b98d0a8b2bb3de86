//! Approximate f64 backend for very large affine instances.
//!
//! Same algorithms as the exact solvers — sort by (δ, γ), then either scan
//! all rotations (total) or keep the improving hull steps (partial) — but
//! every number is an f64, so results carry rounding error and long products
//! can overflow to ±∞. Use it for speed on bulk data, never to certify a
//! value; the exact solvers are the reference.

use crate::functions::AffineFn;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatAffine {
    pub slope: f64,
    pub intercept: f64,
}

impl FloatAffine {
    pub fn new(slope: f64, intercept: f64) -> Self {
        debug_assert!(slope >= 0.0, "monotone functions only");
        FloatAffine { slope, intercept }
    }

    pub fn from_rational(f: &AffineFn) -> Self {
        FloatAffine {
            slope: f.slope().to_f64().unwrap_or(f64::NAN),
            intercept: f.intercept().to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// self ∘ other (other applied first).
    pub fn compose(&self, other: &FloatAffine) -> FloatAffine {
        FloatAffine {
            slope: self.slope * other.slope,
            intercept: self.slope * other.intercept + self.intercept,
        }
    }

    fn gamma(&self) -> f64 {
        if self.slope == 1.0 {
            if self.intercept < 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            self.intercept / (1.0 - self.slope)
        }
    }

    fn delta(&self) -> i8 {
        if self.slope >= 1.0 {
            1
        } else {
            -1
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatSolution {
    pub value: f64,
    pub permutation: Vec<usize>,
    pub prefix_len: usize,
}

fn sorted_order(fs: &[FloatAffine]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fs.len()).collect();
    order.sort_by(|&i, &j| {
        fs[i]
            .delta()
            .cmp(&fs[j].delta())
            .then_with(|| fs[i].gamma().total_cmp(&fs[j].gamma()))
            .then_with(|| i.cmp(&j))
    });
    order
}

/// Approximate maximum total composition: try every rotation of the sorted
/// order. Each rotation's value comes from two precomposed affine blocks, so
/// the whole scan is linear after sorting. NaN values (from ∞ − ∞ in
/// degenerate overflows) lose against every finite candidate.
pub fn solve_total_float(fs: &[FloatAffine], start: f64) -> FloatSolution {
    let n = fs.len();
    if n == 0 {
        return FloatSolution { value: start, permutation: vec![], prefix_len: 0 };
    }
    let order = sorted_order(fs);
    // suffix[t] = f_{order[n-1]} ∘ … ∘ f_{order[t]}, the block applied first
    // in rotation t; prefix[t] = f_{order[t-1]} ∘ … ∘ f_{order[0]}, applied
    // after it.
    let id = FloatAffine::new(1.0, 0.0);
    let mut suffix = vec![id; n + 1];
    for t in (0..n).rev() {
        suffix[t] = suffix[t + 1].compose(&fs[order[t]]);
    }
    let mut prefix = id;
    let mut best_t = 0;
    let mut best = suffix[0].eval(start);
    for t in 1..n {
        prefix = fs[order[t - 1]].compose(&prefix);
        let v = prefix.eval(suffix[t].eval(start));
        if v > best {
            best = v;
            best_t = t;
        }
    }
    let permutation: Vec<usize> = order[best_t..]
        .iter()
        .chain(order[..best_t].iter())
        .copied()
        .collect();
    FloatSolution { value: best, permutation, prefix_len: n }
}

/// Approximate maximum partial composition: fold the hulls max{f(x), x} in
/// sorted order and keep the strictly improving steps.
pub fn solve_partial_float(fs: &[FloatAffine], start: f64) -> FloatSolution {
    let order = sorted_order(fs);
    let mut cur = start;
    let mut improving = Vec::new();
    for &i in &order {
        let v = fs[i].eval(cur);
        if v > cur {
            improving.push(i);
            cur = v;
        }
    }
    let prefix_len = improving.len();
    let mut in_prefix = vec![false; fs.len()];
    for &i in &improving {
        in_prefix[i] = true;
    }
    let mut permutation = improving;
    permutation.extend(order.iter().copied().filter(|&i| !in_prefix[i]));
    FloatSolution { value: cur, permutation, prefix_len }
}
