//! Hardness gadgets: families of two-piece functions on which composition
//! ordering encodes NP-complete partition problems.
//!
//! Each construction turns an input (integer weights, or integer factors)
//! into n+2 monotone piecewise-linear functions started at 0 such that the
//! optimal composition value jumps by a factor ≥ α exactly when the input
//! has a perfect split. A desk-scale verifier re-derives the dichotomy with
//! the brute-force oracle on the first n+1 functions.
//!
//! These instances are deliberately outside the class the polynomial solvers
//! accept (two genuine pieces), so they can only be solved by enumeration.

use crate::functions::{lower_envelope, upper_envelope, AffineFn, MonotonePwlFn};
use crate::numeric::Rational;
use crate::oracle::{brute_partial_with_limit, OracleError, DEFAULT_LIMIT};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::One;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error("weights sum to {sum}, which is odd; an even sum is required")]
    NotEvenSum { sum: u64 },
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn ru(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Functions plus the start value they are meant to be composed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub functions: Vec<MonotonePwlFn>,
    pub start: Rational,
}

/// What the desk-scale verifier found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    /// Does a perfect split exist? (decided by direct enumeration)
    pub has_partition: bool,
    /// Brute-force optimum over the first n+1 gadget functions from 0.
    pub oracle_value: Rational,
    /// True when the oracle value sits on the correct side of the gap.
    pub dichotomy_ok: bool,
}

// ---------------------------------------------------------------------------
// Integer partition (concave two-piece functions)
// ---------------------------------------------------------------------------

/// Positive integer weights with even sum 2T, plus the gap factor α > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInput {
    weights: Vec<u64>,
    half_sum: u64,
    alpha: Rational,
}

impl PartitionInput {
    pub fn new(weights: Vec<u64>, alpha: Rational) -> Result<Self, GadgetError> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(GadgetError::BadInput(
                "weights must be a nonempty list of positive integers".into(),
            ));
        }
        if alpha <= Rational::one() {
            return Err(GadgetError::BadInput("alpha must exceed 1".into()));
        }
        let sum: u64 = weights.iter().sum();
        if !sum.is_multiple_of(2) {
            return Err(GadgetError::NotEvenSum { sum });
        }
        Ok(PartitionInput { weights, half_sum: sum / 2, alpha })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// T, half the total weight.
    pub fn half_sum(&self) -> u64 {
        self.half_sum
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Is there a subset of weights summing to exactly T?
    pub fn has_partition(&self) -> bool {
        let target = self.half_sum as usize;
        let mut reachable = vec![false; target + 1];
        reachable[0] = true;
        for &w in &self.weights {
            let w = w as usize;
            if w > target {
                continue;
            }
            for s in (0..=target - w).rev() {
                if reachable[s] {
                    reachable[s + w] = true;
                }
            }
        }
        reachable[target]
    }
}

/// n+2 functions from weights a_1..a_n with Σ = 2T, started at 0:
///   f_i      = x + a_i                      (i ≤ n)
///   f_{n+1}  = min{2x, x/2 + 3T/2}          (breakpoint at T)
///   f_{n+2}  = 6αT·(x − (3T−1/2)) + (3T−1/2)
/// Composing all of them optimally yields ≥ 3αT when a perfect split
/// exists and ≤ 3T otherwise; already over the first n+1 the value is 3T
/// versus ≤ 3T − 1/2.
pub fn partition_gadget(inp: &PartitionInput) -> GadgetInstance {
    let t = ru(inp.half_sum);
    let mut functions: Vec<MonotonePwlFn> = inp
        .weights
        .iter()
        .map(|&a| {
            MonotonePwlFn::from_affine(
                AffineFn::new(Rational::one(), ru(a)).expect("slope 1"),
            )
        })
        .collect();
    let three_halves_t = Rational::new(BigInt::from(3), BigInt::from(2)) * &t;
    functions.push(
        lower_envelope(&[
            AffineFn::new(ru(2), ru(0)).expect("slope 2"),
            AffineFn::new(Rational::new(BigInt::from(1), BigInt::from(2)), three_halves_t)
                .expect("slope 1/2"),
        ])
        .expect("two distinct lines"),
    );
    // point-slope form around the fixpoint 3T − 1/2
    let fix = ru(3) * &t - Rational::new(BigInt::from(1), BigInt::from(2));
    let slope = ru(6) * inp.alpha.clone() * &t;
    let intercept = &fix - &slope * &fix;
    functions.push(MonotonePwlFn::from_affine(
        AffineFn::new(slope, intercept).expect("positive slope"),
    ));
    GadgetInstance { functions, start: ru(0) }
}

pub fn gap_check_partition(inp: &PartitionInput) -> Result<GapReport, GadgetError> {
    gap_check_partition_with_limit(inp, DEFAULT_LIMIT)
}

/// Brute-force the first n+1 functions and test the claimed dichotomy:
/// optimum = 3T exactly when a perfect split exists, otherwise ≤ 3T − 1/2.
pub fn gap_check_partition_with_limit(
    inp: &PartitionInput,
    limit: usize,
) -> Result<GapReport, GadgetError> {
    let gadget = partition_gadget(inp);
    let n1 = gadget.functions.len() - 1;
    let solution = brute_partial_with_limit(&gadget.functions[..n1], &gadget.start, limit)?;
    let has_partition = inp.has_partition();
    let three_t = ru(3) * ru(inp.half_sum);
    let cutoff = &three_t - Rational::new(BigInt::from(1), BigInt::from(2));
    let dichotomy_ok = if has_partition {
        solution.value == three_t
    } else {
        solution.value <= cutoff
    };
    Ok(GapReport { has_partition, oracle_value: solution.value, dichotomy_ok })
}

// ---------------------------------------------------------------------------
// Product partition (convex two-piece functions)
// ---------------------------------------------------------------------------

/// Integer factors, all > 1, whose product is a perfect square T², plus the
/// gap factor α > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductPartitionInput {
    factors: Vec<u64>,
    root: u64,
    alpha: Rational,
}

impl ProductPartitionInput {
    pub fn new(factors: Vec<u64>, alpha: Rational) -> Result<Self, GadgetError> {
        if factors.is_empty() || factors.iter().any(|&a| a <= 1) {
            return Err(GadgetError::BadInput(
                "factors must be a nonempty list of integers greater than 1".into(),
            ));
        }
        if alpha <= Rational::one() {
            return Err(GadgetError::BadInput("alpha must exceed 1".into()));
        }
        let mut product: u128 = 1;
        for &a in &factors {
            product = product
                .checked_mul(a as u128)
                .ok_or_else(|| GadgetError::BadInput("factor product overflows".into()))?;
        }
        let root = product.sqrt();
        if root * root != product {
            return Err(GadgetError::BadInput(format!(
                "product {product} is not a perfect square"
            )));
        }
        let root = u64::try_from(root)
            .map_err(|_| GadgetError::BadInput("square root exceeds u64".into()))?;
        Ok(ProductPartitionInput { factors, root, alpha })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// T, the square root of the factor product.
    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Is there a subset of factors whose product is exactly T?
    pub fn has_partition(&self) -> bool {
        let target = self.root as u128;
        (0..self.factors.len())
            .powerset()
            .any(|subset| {
                subset
                    .iter()
                    .try_fold(1u128, |p, &i| p.checked_mul(self.factors[i] as u128))
                    == Some(target)
            })
    }
}

/// n+2 functions from factors a_1..a_n with ∏ = T², started at 0:
///   f_i      = max{(1/a_i)(x − T²) + T², a_i(x − T²) + T²}   (i ≤ n)
///   f_{n+1}  = x + 2T
///   f_{n+2}  = 4α(T+1)²·(x − d) − d,  d = 2T² − (T/(T+1))²
/// Over the first n+1 functions the optimum is 2T² exactly when some
/// subset of factors multiplies to T, and at most d otherwise.
pub fn product_partition_gadget(inp: &ProductPartitionInput) -> GadgetInstance {
    let t = ru(inp.root);
    let t2 = &t * &t;
    let mut functions: Vec<MonotonePwlFn> = inp
        .factors
        .iter()
        .map(|&a| {
            let lines: Vec<AffineFn> = [Rational::new(BigInt::one(), BigInt::from(a)), ru(a)]
                .into_iter()
                .map(|slope| {
                    let intercept = &t2 - &slope * &t2;
                    AffineFn::new(slope, intercept).expect("positive slope")
                })
                .collect();
            upper_envelope(&lines).expect("two distinct lines")
        })
        .collect();
    functions.push(MonotonePwlFn::from_affine(
        AffineFn::new(Rational::one(), ru(2) * &t).expect("slope 1"),
    ));
    let ratio = &t / (&t + Rational::one());
    let d = ru(2) * &t2 - &ratio * &ratio;
    let t_plus_1 = &t + Rational::one();
    let slope = ru(4) * inp.alpha.clone() * &t_plus_1 * &t_plus_1;
    let intercept = -(&slope * &d) - &d;
    functions.push(MonotonePwlFn::from_affine(
        AffineFn::new(slope, intercept).expect("positive slope"),
    ));
    GadgetInstance { functions, start: ru(0) }
}

pub fn gap_check_product(inp: &ProductPartitionInput) -> Result<GapReport, GadgetError> {
    gap_check_product_with_limit(inp, DEFAULT_LIMIT)
}

/// Brute-force the first n+1 functions and test the claimed dichotomy:
/// optimum = 2T² exactly when a perfect multiplicative split exists,
/// otherwise ≤ 2T² − (T/(T+1))².
pub fn gap_check_product_with_limit(
    inp: &ProductPartitionInput,
    limit: usize,
) -> Result<GapReport, GadgetError> {
    let gadget = product_partition_gadget(inp);
    let n1 = gadget.functions.len() - 1;
    let solution = brute_partial_with_limit(&gadget.functions[..n1], &gadget.start, limit)?;
    let has_partition = inp.has_partition();
    let t = ru(inp.root);
    let two_t2 = ru(2) * &t * &t;
    let ratio = &t / (&t + Rational::one());
    let cutoff = &two_t2 - &ratio * &ratio;
    let dichotomy_ok = if has_partition {
        solution.value == two_t2
    } else {
        solution.value <= cutoff
    };
    Ok(GapReport { has_partition, oracle_value: solution.value, dichotomy_ok })
}
