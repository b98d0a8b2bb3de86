//! Monotone nondecreasing function classes closed under the operations the
//! solvers need: affine maps ax+b with a ≥ 0, clamped maps max{ax+b, c}, and
//! continuous piecewise-linear maps given by explicit pieces.
//!
//! Two derived quantities drive all ordering decisions:
//! * gamma(f): the fixpoint of ax+b when a ≠ 1, +inf when a = 1 and b < 0,
//!   -inf when a = 1 and b ≥ 0;
//! * delta(f): +1 when a ≥ 1, -1 otherwise.
//!
//! The reflection f~(x) = -f(-x) swaps minimization and maximization; the
//! hull max{f(x), x} turns "apply a prefix" into "apply everything".

use crate::numeric::{int, ExtReal, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctionError {
    #[error("slope must be nonnegative, got {0}")]
    NegativeSlope(Rational),
    #[error("the identity function has no hull")]
    IdentityFunction,
    #[error("invalid piecewise function: {0}")]
    BadPieces(String),
}

/// Sign class of the slope: `Minus` for a < 1, `Plus` for a ≥ 1.
/// Orders as -1 < +1, which is exactly the sort-key order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Delta {
    Minus,
    Plus,
}

impl Delta {
    pub fn sign(self) -> i32 {
        match self {
            Delta::Minus => -1,
            Delta::Plus => 1,
        }
    }
}

/// x ↦ slope·x + intercept with slope ≥ 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineFn {
    slope: Rational,
    intercept: Rational,
}

impl AffineFn {
    pub fn new(slope: Rational, intercept: Rational) -> Result<Self, FunctionError> {
        if slope.is_negative() {
            return Err(FunctionError::NegativeSlope(slope));
        }
        Ok(AffineFn { slope, intercept })
    }

    pub fn identity() -> Self {
        AffineFn { slope: int(1), intercept: int(0) }
    }

    pub fn constant(c: Rational) -> Self {
        AffineFn { slope: int(0), intercept: c }
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn intercept(&self) -> &Rational {
        &self.intercept
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }

    /// self ∘ other: first `other`, then `self`.
    pub fn compose(&self, other: &AffineFn) -> AffineFn {
        AffineFn {
            slope: &self.slope * &other.slope,
            intercept: &self.slope * &other.intercept + &self.intercept,
        }
    }

    /// f~(x) = -f(-x); keeps the slope, negates the intercept.
    pub fn reflect(&self) -> AffineFn {
        AffineFn { slope: self.slope.clone(), intercept: -&self.intercept }
    }

    pub fn is_identity(&self) -> bool {
        self.slope.is_one() && self.intercept.is_zero()
    }

    /// Fixpoint b/(1-a) for a ≠ 1; +inf if f sits strictly below the
    /// identity everywhere (a = 1, b < 0), -inf if weakly above (a = 1, b ≥ 0).
    pub fn gamma(&self) -> ExtReal {
        if self.slope.is_one() {
            if self.intercept.is_negative() {
                ExtReal::PosInf
            } else {
                ExtReal::NegInf
            }
        } else {
            ExtReal::Finite(&self.intercept / (int(1) - &self.slope))
        }
    }

    pub fn delta(&self) -> Delta {
        if self.slope >= int(1) {
            Delta::Plus
        } else {
            Delta::Minus
        }
    }

    /// max{f(x), x} as an explicit piecewise function. The identity has no
    /// meaningful hull and is rejected.
    pub fn hull(&self) -> Result<MonotonePwlFn, FunctionError> {
        if self.is_identity() {
            return Err(FunctionError::IdentityFunction);
        }
        upper_envelope(&[self.clone(), AffineFn::identity()])
    }
}

impl fmt::Display for AffineFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intercept.is_negative() {
            write!(f, "{}x{}", self.slope, self.intercept)
        } else {
            write!(f, "{}x+{}", self.slope, self.intercept)
        }
    }
}

/// x ↦ max{slope·x + intercept, floor}: an affine map that never reports
/// less than a fixed constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClampedFn {
    affine: AffineFn,
    floor: Rational,
}

impl ClampedFn {
    pub fn new(slope: Rational, intercept: Rational, floor: Rational) -> Result<Self, FunctionError> {
        Ok(ClampedFn { affine: AffineFn::new(slope, intercept)?, floor })
    }

    pub fn from_parts(affine: AffineFn, floor: Rational) -> Self {
        ClampedFn { affine, floor }
    }

    pub fn affine_part(&self) -> &AffineFn {
        &self.affine
    }

    pub fn floor(&self) -> &Rational {
        &self.floor
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.affine.eval(x).max(self.floor.clone())
    }

    /// max{ax+b, floor} as a piecewise function.
    pub fn to_pwl(&self) -> MonotonePwlFn {
        upper_envelope(&[self.affine.clone(), AffineFn::constant(self.floor.clone())]).unwrap()
    }

    /// max{ax+b, floor, x}: the hull used when a clamped prefix problem is
    /// rewritten as a total problem.
    pub fn hull(&self) -> MonotonePwlFn {
        upper_envelope(&[
            self.affine.clone(),
            AffineFn::constant(self.floor.clone()),
            AffineFn::identity(),
        ])
        .unwrap()
    }
}

/// Continuous monotone nondecreasing piecewise-linear function.
///
/// `pieces[i]` applies on the interval bounded by `breakpoints[i-1]` and
/// `breakpoints[i]` (the outermost pieces extend to ∓inf). Invariants:
/// strictly increasing breakpoints, `pieces.len() == breakpoints.len() + 1`,
/// continuity at each breakpoint, every slope ≥ 0, no two adjacent pieces
/// equal. Equal values therefore mean equal functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotonePwlFn {
    breakpoints: Vec<Rational>,
    pieces: Vec<AffineFn>,
}

impl MonotonePwlFn {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<AffineFn>) -> Result<Self, FunctionError> {
        if pieces.is_empty() || pieces.len() != breakpoints.len() + 1 {
            return Err(FunctionError::BadPieces(format!(
                "{} breakpoints require {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        for w in breakpoints.windows(2) {
            if w[0] >= w[1] {
                return Err(FunctionError::BadPieces(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        for (i, t) in breakpoints.iter().enumerate() {
            if pieces[i].eval(t) != pieces[i + 1].eval(t) {
                return Err(FunctionError::BadPieces(format!(
                    "discontinuity at breakpoint {t}"
                )));
            }
            if pieces[i] == pieces[i + 1] {
                return Err(FunctionError::BadPieces(format!(
                    "redundant breakpoint {t} between equal pieces"
                )));
            }
        }
        Ok(MonotonePwlFn { breakpoints, pieces })
    }

    pub fn from_affine(f: AffineFn) -> Self {
        MonotonePwlFn { breakpoints: vec![], pieces: vec![f] }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[AffineFn] {
        &self.pieces
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let idx = self.breakpoints.partition_point(|t| t < x);
        self.pieces[idx].eval(x)
    }

    /// f~(x) = -f(-x): breakpoints negate and reverse, pieces reflect and
    /// reverse. An involution.
    pub fn reflect(&self) -> MonotonePwlFn {
        MonotonePwlFn {
            breakpoints: self.breakpoints.iter().rev().map(|t| -t).collect(),
            pieces: self.pieces.iter().rev().map(AffineFn::reflect).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].is_identity()
    }

    pub fn as_affine(&self) -> Option<&AffineFn> {
        if self.pieces.len() == 1 {
            Some(&self.pieces[0])
        } else {
            None
        }
    }
}

/// Pointwise maximum of affine functions (slopes ≥ 0): the convex upper
/// envelope, built by the classic sweep over lines sorted by slope.
pub fn upper_envelope(fns: &[AffineFn]) -> Result<MonotonePwlFn, FunctionError> {
    if fns.is_empty() {
        return Err(FunctionError::BadPieces("empty envelope".into()));
    }
    let mut lines: Vec<AffineFn> = fns.to_vec();
    // Ascending slope; for equal slopes descending intercept so that dedup
    // keeps the dominating line.
    lines.sort_by(|p, q| {
        p.slope()
            .cmp(q.slope())
            .then_with(|| q.intercept().cmp(p.intercept()))
    });
    lines.dedup_by(|next, prev| next.slope() == prev.slope());

    let mut kept: Vec<AffineFn> = Vec::new();
    let mut starts: Vec<Rational> = Vec::new(); // starts[i-1] = where kept[i] takes over
    for line in lines {
        while let Some(top) = kept.last() {
            // Overtaking point of `line` versus `top`; slopes are distinct.
            let x = (top.intercept() - line.intercept()) / (line.slope() - top.slope());
            match starts.last() {
                Some(s) if &x <= s => {
                    // `top` never gets a nonempty interval: drop it.
                    kept.pop();
                    starts.pop();
                }
                _ => {
                    starts.push(x);
                    break;
                }
            }
        }
        kept.push(line);
    }
    MonotonePwlFn::new(starts, kept)
}

/// Pointwise minimum of affine functions, via the reflection identity
/// min_i f_i = (max_i f_i~)~.
pub fn lower_envelope(fns: &[AffineFn]) -> Result<MonotonePwlFn, FunctionError> {
    let reflected: Vec<AffineFn> = fns.iter().map(AffineFn::reflect).collect();
    Ok(upper_envelope(&reflected)?.reflect())
}

/// Any of the three supported function classes, as read from an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Function {
    Affine(AffineFn),
    Clamped(ClampedFn),
    Pwl(MonotonePwlFn),
}

impl Function {
    pub fn eval(&self, x: &Rational) -> Rational {
        match self {
            Function::Affine(f) => f.eval(x),
            Function::Clamped(f) => f.eval(x),
            Function::Pwl(f) => f.eval(x),
        }
    }

    /// The function itself in piecewise form (no hulling).
    pub fn to_pwl(&self) -> MonotonePwlFn {
        match self {
            Function::Affine(f) => MonotonePwlFn::from_affine(f.clone()),
            Function::Clamped(f) => f.to_pwl(),
            Function::Pwl(f) => f.clone(),
        }
    }

    pub fn as_affine(&self) -> Option<&AffineFn> {
        match self {
            Function::Affine(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_clamped(&self) -> Option<&ClampedFn> {
        match self {
            Function::Clamped(f) => Some(f),
            _ => None,
        }
    }
}
