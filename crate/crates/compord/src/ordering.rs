//! Pairwise precedence of monotone functions under composition.
//!
//! "f before g" means f∘g(x) ≤ g∘f(x) for every x, i.e. applying f first
//! never hurts. For affine pairs this reduces to one exact cross-product
//! comparison; for hulls max{f(x), x} it reduces to comparing (delta, gamma)
//! keys. Neither relation is transitive in general — the solvers rely on the
//! key order being consistent, not on transitivity.

use crate::functions::{AffineFn, Delta, FunctionError, MonotonePwlFn};
use crate::numeric::{int, ExtReal, Rational};
use num_traits::Zero;
use std::cmp::Ordering;

/// Outcome of comparing f against g.
///
/// `Before`: f∘g ≤ g∘f everywhere with strict inequality somewhere.
/// `After`: the mirror image. `Equivalent`: the compositions agree
/// everywhere. `Incomparable` is only produced by sampling instruments,
/// never by the exact affine/hull rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecedenceVerdict {
    Before,
    After,
    Equivalent,
    Incomparable,
}

/// Sort key: delta block first (-1 before +1), then gamma (with -inf first),
/// then the original position for stability.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    pub delta: Delta,
    pub gamma: ExtReal,
    pub index: usize,
}

pub fn order_key(f: &AffineFn, index: usize) -> OrderKey {
    OrderKey { delta: f.delta(), gamma: f.gamma(), index }
}

/// Exact affine precedence: f before g iff b_f(1-a_g) ≤ b_g(1-a_f),
/// with equality meaning the compositions coincide (their difference is the
/// constant b_f(1-a_g) - b_g(1-a_f)).
pub fn precedes_affine(f: &AffineFn, g: &AffineFn) -> PrecedenceVerdict {
    let lhs = f.intercept() * (int(1) - g.slope());
    let rhs = g.intercept() * (int(1) - f.slope());
    match lhs.cmp(&rhs) {
        Ordering::Less => PrecedenceVerdict::Before,
        Ordering::Equal => PrecedenceVerdict::Equivalent,
        Ordering::Greater => PrecedenceVerdict::After,
    }
}

/// Precedence of the hulls max{f(x), x} and max{g(x), x}, decided from the
/// (delta, gamma) keys of the underlying non-identity affine functions.
///
/// The case split:
/// * a hull that is the identity (a = 1, b < 0) commutes with everything;
/// * within a delta block, smaller gamma goes first, equal gamma commutes —
///   except that in the a < 1 block a constant function (slope 0) with the
///   larger gamma absorbs the other hull, so the pair commutes;
/// * across blocks, the a < 1 hull with gamma not above the a ≥ 1 hull's
///   gamma commutes with it; otherwise the a < 1 hull goes first.
pub fn precedes_hull(f: &AffineFn, g: &AffineFn) -> PrecedenceVerdict {
    use PrecedenceVerdict::*;
    debug_assert!(!f.is_identity() && !g.is_identity());
    let (gf, gg) = (f.gamma(), g.gamma());
    // Identity hulls: f(x) ≤ x everywhere.
    if gf == ExtReal::PosInf || gg == ExtReal::PosInf {
        return Equivalent;
    }
    match (f.delta(), g.delta()) {
        (Delta::Plus, Delta::Plus) => match gf.cmp(&gg) {
            Ordering::Less => Before,
            Ordering::Equal => Equivalent,
            Ordering::Greater => After,
        },
        (Delta::Minus, Delta::Minus) => match gf.cmp(&gg) {
            Ordering::Less if g.slope().is_zero() => Equivalent,
            Ordering::Less => Before,
            Ordering::Equal => Equivalent,
            Ordering::Greater if f.slope().is_zero() => Equivalent,
            Ordering::Greater => After,
        },
        (Delta::Minus, Delta::Plus) => {
            if gf <= gg {
                Equivalent
            } else {
                Before
            }
        }
        (Delta::Plus, Delta::Minus) => {
            if gf >= gg {
                Equivalent
            } else {
                After
            }
        }
    }
}

/// Sorts indices of `fs` by (delta, gamma, index). Rejects identity
/// functions — strip them before sorting.
pub fn lex_sort(fs: &[AffineFn]) -> Result<Vec<usize>, FunctionError> {
    if fs.iter().any(AffineFn::is_identity) {
        return Err(FunctionError::IdentityFunction);
    }
    let mut idx: Vec<usize> = (0..fs.len()).collect();
    idx.sort_by_key(|&i| order_key(&fs[i], i));
    Ok(idx)
}

/// True iff f∘g(x) ≤ g∘f(x) at every sample point.
pub fn pointwise_precedes_check(
    f: &MonotonePwlFn,
    g: &MonotonePwlFn,
    samples: &[Rational],
) -> bool {
    samples
        .iter()
        .all(|x| f.eval(&g.eval(x)) <= g.eval(&f.eval(x)))
}

/// Sampling-based verdict; `Incomparable` when the two compositions cross.
/// An instrument for tests and exploration — equality of sampled values does
/// not prove equivalence.
pub fn sampled_verdict(
    f: &MonotonePwlFn,
    g: &MonotonePwlFn,
    samples: &[Rational],
) -> PrecedenceVerdict {
    let mut below = false;
    let mut above = false;
    for x in samples {
        let fg = f.eval(&g.eval(x));
        let gf = g.eval(&f.eval(x));
        match fg.cmp(&gf) {
            Ordering::Less => below = true,
            Ordering::Greater => above = true,
            Ordering::Equal => {}
        }
    }
    match (below, above) {
        (true, true) => PrecedenceVerdict::Incomparable,
        (true, false) => PrecedenceVerdict::Before,
        (false, true) => PrecedenceVerdict::After,
        (false, false) => PrecedenceVerdict::Equivalent,
    }
}

/// Sample points that expose every strict region of a hull pair: the two
/// fixpoints, each function's preimage of the other's fixpoint, midpoints of
/// consecutive critical points, and points beyond both ends.
pub fn hull_samples(f: &AffineFn, g: &AffineFn) -> Vec<Rational> {
    let mut crit: Vec<Rational> = Vec::new();
    let mut push_gamma = |h: &AffineFn| {
        if let ExtReal::Finite(v) = h.gamma() {
            crit.push(v);
        }
    };
    push_gamma(f);
    push_gamma(g);
    // preimage of the partner's fixpoint, where invertible
    for (p, q) in [(f, g), (g, f)] {
        if !p.slope().is_zero() {
            if let ExtReal::Finite(v) = q.gamma() {
                crit.push((v - p.intercept()) / p.slope());
            }
        }
    }
    crit.push(int(0));
    crit.sort();
    crit.dedup();
    let mut xs = Vec::with_capacity(2 * crit.len() + 1);
    xs.push(crit.first().unwrap() - int(1));
    for w in crit.windows(2) {
        xs.push((&w[0] + &w[1]) / int(2));
    }
    xs.extend(crit.iter().cloned());
    xs.push(crit.last().unwrap() + int(1));
    xs.sort();
    xs.dedup();
    xs
}

/// Which of the seven gamma-composition cases applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaCase {
    /// equal gammas: the composite keeps the common fixpoint
    EqualGamma,
    /// both slopes ≥ 1: composite gamma between the two
    BothExpand,
    /// both slopes < 1: composite gamma between the two
    BothContract,
    /// small-gamma contracts, large-gamma expands, product ≥ 1: composite gamma ≥ larger
    MixedExpandWins,
    /// small-gamma contracts, large-gamma expands, product < 1: composite gamma ≤ smaller
    MixedContractWins,
    /// small-gamma expands, large-gamma contracts, product ≥ 1: composite gamma ≤ smaller
    SwappedExpandWins,
    /// small-gamma expands, large-gamma contracts, product < 1: composite gamma ≥ larger
    SwappedContractWins,
}

/// Where gamma of a composition lands relative to the operands' gammas.
#[derive(Debug, Clone)]
pub struct GammaComposeReport {
    pub case: GammaCase,
    /// gamma of the analyzed composite
    pub gamma: ExtReal,
    pub lower: Option<ExtReal>,
    pub upper: Option<ExtReal>,
    /// true when the analyzed composite is hi∘lo for (lo, hi) = (g, f),
    /// i.e. the inputs arrived with gamma(f) > gamma(g)
    pub swapped: bool,
    pub holds: bool,
}

/// Classifies gamma(g∘f) against gamma(f) ≤ gamma(g) per the seven cases.
/// When gamma(f) > gamma(g) the roles swap and the report concerns f∘g.
/// `holds` must come back true for every affine pair; a false value would
/// falsify the case analysis.
pub fn classify_gamma_compose(f: &AffineFn, g: &AffineFn) -> GammaComposeReport {
    let swapped = f.gamma() > g.gamma();
    let (lo, hi) = if swapped { (g, f) } else { (f, g) };
    let (glo, ghi) = (lo.gamma(), hi.gamma());
    let comp = hi.compose(lo); // apply lo first
    let gamma = comp.gamma();

    if glo == ghi {
        // Common fixpoint; if the slopes multiply to 1 the composite is the
        // identity and every point is a fixpoint.
        let holds = comp.is_identity() || gamma == glo;
        return GammaComposeReport {
            case: GammaCase::EqualGamma,
            gamma,
            lower: Some(glo.clone()),
            upper: Some(ghi),
            swapped,
            holds,
        };
    }

    let one = int(1);
    let (case, lower, upper) = match (lo.slope() >= &one, hi.slope() >= &one) {
        (true, true) => (GammaCase::BothExpand, Some(glo), Some(ghi)),
        (false, false) => (GammaCase::BothContract, Some(glo), Some(ghi)),
        (false, true) => {
            if lo.slope() * hi.slope() >= one {
                (GammaCase::MixedExpandWins, Some(ghi), None)
            } else {
                (GammaCase::MixedContractWins, None, Some(glo))
            }
        }
        (true, false) => {
            if lo.slope() * hi.slope() >= one {
                (GammaCase::SwappedExpandWins, None, Some(glo))
            } else {
                (GammaCase::SwappedContractWins, Some(ghi), None)
            }
        }
    };
    let holds = lower.as_ref().is_none_or(|l| &gamma >= l)
        && upper.as_ref().is_none_or(|u| &gamma <= u);
    GammaComposeReport { case, gamma, lower, upper, swapped, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use proptest::prelude::*;
    use PrecedenceVerdict::*;

    fn aff(n: i64, d: i64, bn: i64, bd: i64) -> AffineFn {
        AffineFn::new(rat(n, d), rat(bn, bd)).unwrap()
    }

    #[test]
    fn affine_verdicts() {
        // worked pairs
        assert_eq!(precedes_affine(&aff(2, 1, 1, 1), &aff(2, 1, -1, 1)), Before);
        assert_eq!(precedes_affine(&aff(2, 1, -1, 1), &aff(1, 2, 0, 1)), Before);
        assert_eq!(precedes_affine(&aff(1, 2, 0, 1), &aff(2, 1, 1, 1)), Before);
        // translations commute
        assert_eq!(precedes_affine(&aff(1, 1, 3, 1), &aff(1, 1, -5, 1)), Equivalent);
    }

    #[test]
    fn affine_cycle_is_not_transitive() {
        // f1 = 2x+1, f2 = 2x-1, f3 = x/2: a strict cycle
        let f1 = aff(2, 1, 1, 1);
        let f2 = aff(2, 1, -1, 1);
        let f3 = aff(1, 2, 0, 1);
        assert_eq!(precedes_affine(&f1, &f2), Before);
        assert_eq!(precedes_affine(&f2, &f3), Before);
        assert_eq!(precedes_affine(&f3, &f1), Before);
        // and reversed arguments agree
        assert_eq!(precedes_affine(&f2, &f1), After);
        assert_eq!(precedes_affine(&f3, &f2), After);
        assert_eq!(precedes_affine(&f1, &f3), After);
    }

    #[test]
    fn hull_verdicts_worked_pairs() {
        // gamma 6 vs 0, both expanding: larger fixpoint goes after
        assert_eq!(precedes_hull(&aff(2, 1, -6, 1), &aff(3, 1, 0, 1)), After);
        // contracting gamma 4 vs expanding gamma 6: absorbed, commutes
        assert_eq!(precedes_hull(&aff(1, 2, 2, 1), &aff(2, 1, -6, 1)), Equivalent);
        // expanding gamma 0 vs contracting gamma 4: expanding goes after
        assert_eq!(precedes_hull(&aff(2, 1, 0, 1), &aff(1, 2, 2, 1)), After);
    }

    #[test]
    fn hull_cycle_weakens_to_equivalence_in_the_middle() {
        let f1 = aff(2, 1, 1, 1); // gamma -1, expands
        let f2 = aff(2, 1, -1, 1); // gamma 1, expands
        let f3 = aff(1, 2, 0, 1); // gamma 0, contracts
        assert_eq!(precedes_hull(&f1, &f2), Before);
        // hull of f3 absorbs hull of f2 (gamma 0 ≤ 1): they commute
        assert_eq!(precedes_hull(&f2, &f3), Equivalent);
        assert_eq!(precedes_hull(&f3, &f1), Before);
    }

    #[test]
    fn hull_identity_hull_commutes() {
        let sink = aff(1, 1, -4, 1); // below identity everywhere: hull is x
        assert_eq!(precedes_hull(&sink, &aff(2, 1, 0, 1)), Equivalent);
        assert_eq!(precedes_hull(&aff(3, 1, 5, 1), &sink), Equivalent);
        assert_eq!(precedes_hull(&sink, &aff(1, 2, 2, 1)), Equivalent);
    }

    #[test]
    fn hull_constant_absorbs_in_contracting_block() {
        // both slopes < 1, larger gamma is a constant: hulls commute
        let low = aff(1, 2, 0, 1); // gamma 0
        let high = aff(0, 1, 5, 1); // constant 5
        assert_eq!(precedes_hull(&low, &high), Equivalent);
        assert_eq!(precedes_hull(&high, &low), Equivalent);
        // larger gamma with positive slope: strict
        assert_eq!(precedes_hull(&low, &aff(1, 2, 5, 2)), Before);
        // smaller gamma constant, larger gamma sloped: still strict
        assert_eq!(precedes_hull(&aff(0, 1, 0, 1), &aff(1, 2, 1, 1)), Before);
    }

    #[test]
    fn lex_sort_intro_order() {
        let fs = vec![aff(2, 1, -6, 1), aff(1, 2, 2, 1), aff(1, 1, 2, 1)];
        assert_eq!(lex_sort(&fs).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn lex_sort_rejects_identity_and_is_stable() {
        assert!(lex_sort(&[AffineFn::identity()]).is_err());
        // two equal-key functions keep input order
        let fs = vec![aff(1, 1, 3, 1), aff(1, 1, 3, 1), aff(1, 2, 0, 1)];
        assert_eq!(lex_sort(&fs).unwrap(), vec![2, 0, 1]);
    }

    #[test]
    fn pointwise_check_examples() {
        let f = aff(2, 1, 0, 1).hull().unwrap();
        let g = aff(3, 1, 0, 1).hull().unwrap();
        let xs = [rat(-1, 1), rat(0, 1), rat(1, 1)];
        assert!(pointwise_precedes_check(&f, &g, &xs));
    }

    #[test]
    fn sampled_verdict_detects_incomparable_pair() {
        // max{2x,3x} and max{2x-1,3x+1} cross: neither order dominates
        let f = crate::functions::upper_envelope(&[aff(2, 1, 0, 1), aff(3, 1, 0, 1)]).unwrap();
        let g =
            crate::functions::upper_envelope(&[aff(2, 1, -1, 1), aff(3, 1, 1, 1)]).unwrap();
        assert_eq!(f.eval(&g.eval(&rat(0, 1))), rat(3, 1));
        assert_eq!(g.eval(&f.eval(&rat(0, 1))), rat(1, 1));
        assert_eq!(f.eval(&g.eval(&rat(-2, 1))), rat(-10, 1));
        assert_eq!(g.eval(&f.eval(&rat(-2, 1))), rat(-9, 1));
        let xs = [rat(-2, 1), rat(0, 1)];
        assert_eq!(sampled_verdict(&f, &g, &xs), Incomparable);
    }

    #[test]
    fn gamma_compose_examples() {
        // both expanding: bracket membership
        let r = classify_gamma_compose(&aff(2, 1, 0, 1), &aff(3, 1, -6, 1));
        assert_eq!(r.case, GammaCase::BothExpand);
        assert_eq!(r.gamma, ExtReal::Finite(rat(6, 5)));
        assert!(r.holds && !r.swapped);
        // contract-then-expand with product ≥ 1 pushes gamma up
        let r = classify_gamma_compose(&aff(1, 2, 0, 1), &aff(4, 1, -3, 1));
        assert_eq!(r.case, GammaCase::MixedExpandWins);
        assert_eq!(r.gamma, ExtReal::Finite(rat(3, 1)));
        assert!(r.holds);
        // equal gammas whose slopes cancel: composite is the identity
        let r = classify_gamma_compose(&aff(2, 1, -1, 1), &aff(1, 2, 1, 2));
        assert_eq!(r.case, GammaCase::EqualGamma);
        assert!(r.holds);
    }

    fn arb_affine() -> impl Strategy<Value = AffineFn> {
        ((0i64..=8, 1i64..=2), (-16i64..=16, 1i64..=2))
            .prop_map(|((an, ad), (bn, bd))| AffineFn::new(rat(an, ad), rat(bn, bd)).unwrap())
    }

    fn non_identity() -> impl Strategy<Value = AffineFn> {
        arb_affine().prop_filter("identity", |f| !f.is_identity())
    }

    proptest! {
        /// Affine verdicts agree with the (constant) pointwise difference.
        #[test]
        fn prop_affine_verdict_sound(f in arb_affine(), g in arb_affine()) {
            let v = precedes_affine(&f, &g);
            let x = rat(3, 7);
            let diff = f.eval(&g.eval(&x)) - g.eval(&f.eval(&x));
            match v {
                Before => prop_assert!(diff < int(0)),
                After => prop_assert!(diff > int(0)),
                Equivalent => prop_assert_eq!(diff, int(0)),
                Incomparable => prop_assert!(false, "affine pairs are always comparable"),
            }
            // antisymmetry
            let w = precedes_affine(&g, &f);
            let expected = match v { Before => After, After => Before, other => other };
            prop_assert_eq!(w, expected);
        }

        /// Hull verdicts agree with dense pointwise sampling, including
        /// strictness for Before/After.
        #[test]
        fn prop_hull_verdict_sound(f in non_identity(), g in non_identity()) {
            let hf = f.hull().unwrap();
            let hg = g.hull().unwrap();
            let xs = hull_samples(&f, &g);
            let sampled = sampled_verdict(&hf, &hg, &xs);
            prop_assert_eq!(precedes_hull(&f, &g), sampled);
            // and the mirrored call agrees
            let mirrored = match sampled { Before => After, After => Before, other => other };
            prop_assert_eq!(precedes_hull(&g, &f), mirrored);
        }

        /// Sorted order is pairwise consistent: an earlier key never has to
        /// go strictly after a later one.
        #[test]
        fn prop_lex_sort_pairwise(fs in prop::collection::vec(non_identity(), 1..7)) {
            let order = lex_sort(&fs).unwrap();
            for i in 0..order.len() {
                for j in (i + 1)..order.len() {
                    let v = precedes_hull(&fs[order[i]], &fs[order[j]]);
                    prop_assert!(v == Before || v == Equivalent,
                        "positions {i},{j}: verdict {v:?}");
                }
            }
        }

        /// The seven-case gamma landing zones are never violated.
        #[test]
        fn prop_gamma_compose_holds(f in arb_affine(), g in arb_affine()) {
            let r = classify_gamma_compose(&f, &g);
            prop_assert!(r.holds, "case {:?}: gamma {} outside [{:?}, {:?}]",
                r.case, r.gamma, r.lower, r.upper);
        }
    }
}
