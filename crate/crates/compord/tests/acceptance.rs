//! Acceptance gate: one test per criterion, named `criterion_NN_*` so the
//! harness prints one pass/fail line for each. Every test also prints an
//! `ACCEPTANCE n: PASS` summary (visible with `--nocapture`).
//!
//! All randomness is seeded, so the whole gate is deterministic.

use compord::adapters::{
    simulate_secretary, solve_makespan, solve_secretary_two_valued, Applicant, Job,
};
use compord::float::{solve_total_float, FloatAffine};
use compord::functions::{AffineFn, ClampedFn, MonotonePwlFn};
use compord::gadgets::{
    gap_check_partition, gap_check_product, PartitionInput, ProductPartitionInput,
};
use compord::numeric::{int, rat, Rational};
use compord::oracle::{brute_exact_k, brute_partial, brute_total, brute_total_min};
use compord::ordering::{
    classify_gamma_compose, hull_samples, precedes_affine, precedes_hull, sampled_verdict,
    PrecedenceVerdict,
};
use compord::solvers::{
    solve_exact_k, solve_partial_clamped, solve_partial_linear, solve_total_linear,
};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational in [lo, hi] with denominator ≤ max_den.
fn rand_rational(r: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> Rational {
    let den = r.random_range(1..=max_den);
    let num = r.random_range(lo * den..=hi * den);
    rat(num, den)
}

/// Slope in [0, 4], intercept in [−8, 8].
fn rand_affine(r: &mut ChaCha8Rng) -> AffineFn {
    let slope = rand_rational(r, 0, 4, 4);
    let intercept = rand_rational(r, -8, 8, 4);
    AffineFn::new(slope, intercept).expect("slope is nonnegative")
}

fn rand_corpus(seed: u64, count: usize, n_lo: usize, n_hi: usize) -> Vec<(Vec<AffineFn>, Rational)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(n_lo..=n_hi);
            let fs: Vec<AffineFn> = (0..n).map(|_| rand_affine(&mut r)).collect();
            let c = rand_rational(&mut r, -4, 4, 2);
            (fs, c)
        })
        .collect()
}

fn to_pwl(fs: &[AffineFn]) -> Vec<MonotonePwlFn> {
    fs.iter().cloned().map(MonotonePwlFn::from_affine).collect()
}

/// max{f(x), x}; the identity is its own hull.
fn hull_or_identity(f: &AffineFn) -> MonotonePwlFn {
    if f.is_identity() {
        MonotonePwlFn::from_affine(f.clone())
    } else {
        f.hull().expect("non-identity function")
    }
}

fn intro_instance() -> (Vec<AffineFn>, Rational) {
    (
        vec![
            AffineFn::new(int(2), int(-6)).unwrap(),  // 2x − 6
            AffineFn::new(rat(1, 2), int(2)).unwrap(), // x/2 + 2
            AffineFn::new(int(1), int(2)).unwrap(),    // x + 2
        ],
        int(2),
    )
}

#[test]
fn criterion_01_worked_example() {
    let (fs, c) = intro_instance();
    let started = Instant::now();
    let total = solve_total_linear(&fs, &c);
    let partial = solve_partial_linear(&fs, &c);
    let elapsed = started.elapsed();

    assert_eq!(total.value, int(4), "total composition value");
    assert_eq!(total.permutation, vec![1, 2, 0], "second, third, then first");
    assert_eq!(partial.value, int(5), "partial composition value");
    assert_eq!(partial.prefix_len, 2, "two functions applied");
    assert_eq!(&partial.permutation[..2], &[1, 2], "second then third");
    assert!(
        elapsed < Duration::from_millis(1),
        "solves took {elapsed:?}, budget 1 ms"
    );
    println!(
        "ACCEPTANCE 1: PASS — worked example: total 4 via (2,3,1), partial 5 with k=2, in {elapsed:?}"
    );
}

#[test]
fn criterion_02_oracle_equivalence_total() {
    let started = Instant::now();
    let corpus = rand_corpus(0xACC2, 500, 2, 7);
    for (i, (fs, c)) in corpus.iter().enumerate() {
        let fast = solve_total_linear(fs, c);
        let brute = brute_total(&to_pwl(fs), c).expect("n ≤ 7");
        assert_eq!(fast.value, brute.value, "instance {i}: {fs:?} from {c}");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "took {elapsed:?}, budget 60 s"
    );
    println!(
        "ACCEPTANCE 2: PASS — total solver = brute force on 500 random instances (n ≤ 7) in {elapsed:?}"
    );
}

#[test]
fn criterion_03_oracle_equivalence_partial() {
    let started = Instant::now();
    let corpus = rand_corpus(0xACC2, 500, 2, 7); // same corpus as criterion 2
    for (i, (fs, c)) in corpus.iter().enumerate() {
        let fast = solve_partial_linear(fs, c);
        let brute = brute_partial(&to_pwl(fs), c).expect("n ≤ 7");
        assert_eq!(fast.value, brute.value, "instance {i}: solver vs oracle");
        // prefix problems reduce to total problems on the hulls
        let hulls: Vec<MonotonePwlFn> = fs.iter().map(hull_or_identity).collect();
        let hull_total = brute_total(&hulls, c).expect("n ≤ 7");
        assert_eq!(
            brute.value, hull_total.value,
            "instance {i}: partial vs total-on-hulls"
        );
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(60),
        "took {elapsed:?}, budget 60 s"
    );
    println!(
        "ACCEPTANCE 3: PASS — partial solver = brute force = total-on-hulls on the same 500 instances in {elapsed:?}"
    );
}

#[test]
fn criterion_04_oracle_equivalence_exact_k() {
    let started = Instant::now();
    let corpus = rand_corpus(0xACC4, 200, 2, 6);
    let mut checked = 0usize;
    for (i, (fs, c)) in corpus.iter().enumerate() {
        let pwl = to_pwl(fs);
        for k in 0..=fs.len() {
            let fast = solve_exact_k(fs, c, k).expect("k ≤ n");
            let brute = brute_exact_k(&pwl, c, k).expect("k ≤ n ≤ 6");
            assert_eq!(fast.value, brute.value, "instance {i}, k={k}");
            checked += 1;
        }
    }
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 4: PASS — exact-k solver = brute force on 200 instances, all k ({checked} solves) in {elapsed:?}"
    );
}

#[test]
fn criterion_05_oracle_equivalence_clamped() {
    let started = Instant::now();
    let mut r = rng(0xACC5);
    for i in 0..300 {
        let n = r.random_range(1..=6);
        let hs: Vec<ClampedFn> = (0..n)
            .map(|_| {
                let slope = rand_rational(&mut r, 0, 4, 4);
                let intercept = rand_rational(&mut r, -8, 8, 4);
                let floor = rand_rational(&mut r, -8, 8, 4);
                ClampedFn::new(slope, intercept, floor).expect("slope is nonnegative")
            })
            .collect();
        let c = rand_rational(&mut r, -4, 4, 2);
        let fast = solve_partial_clamped(&hs, &c);
        let hulls: Vec<MonotonePwlFn> = hs.iter().map(ClampedFn::hull).collect();
        let brute = brute_partial(&hulls, &c).expect("n ≤ 6");
        assert_eq!(fast.value, brute.value, "instance {i}: solver vs hull oracle");
        let direct: Vec<MonotonePwlFn> = hs.iter().map(ClampedFn::to_pwl).collect();
        let brute_direct = brute_partial(&direct, &c).expect("n ≤ 6");
        assert_eq!(fast.value, brute_direct.value, "instance {i}: solver vs direct oracle");
    }
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 5: PASS — clamped solver = brute force (hulls and direct) on 300 instances in {elapsed:?}"
    );
}

#[test]
fn criterion_06_complexity_smoke() {
    // exact solvers, n = 10⁴, small integer coefficients
    let mut r = rng(0xACC6);
    let slopes = [0i64, 1, 1, 2, 3];
    let fs: Vec<AffineFn> = (0..10_000)
        .map(|_| {
            let a = slopes[r.random_range(0..slopes.len())];
            let b = r.random_range(-8..=8);
            AffineFn::new(int(a), int(b)).unwrap()
        })
        .collect();
    let c = int(1);
    let started = Instant::now();
    let total = solve_total_linear(&fs, &c);
    let partial = solve_partial_linear(&fs, &c);
    let exact_elapsed = started.elapsed();
    assert!(partial.value >= total.value, "a prefix can only do better");
    assert!(
        exact_elapsed < Duration::from_secs(10),
        "exact n=10⁴ took {exact_elapsed:?}, budget 10 s"
    );

    // exact-k DP, n = 300, k = 100
    let fs_k: Vec<AffineFn> = (0..300)
        .map(|_| {
            let a = 1 + r.random_range(0..=1i64);
            let b = r.random_range(-8..=8);
            AffineFn::new(int(a), int(b)).unwrap()
        })
        .collect();
    let started = Instant::now();
    let dp = solve_exact_k(&fs_k, &int(0), 100).expect("k ≤ n");
    let dp_elapsed = started.elapsed();
    assert_eq!(dp.prefix_len, 100);
    assert!(
        dp_elapsed < Duration::from_secs(30),
        "exact-k n=300 k=100 took {dp_elapsed:?}, budget 30 s"
    );

    // float backend, n = 10⁵; a thin expanding block (1 in 1000) keeps both
    // slope classes present while every composite stays inside f64 range
    let fl: Vec<FloatAffine> = (0..100_000)
        .map(|i| {
            let slope = if i % 1000 == 0 {
                1.0 + 0.2 * r.random::<f64>()
            } else {
                0.8 + 0.2 * r.random::<f64>()
            };
            FloatAffine::new(slope, 2.0 * r.random::<f64>() - 1.0)
        })
        .collect();
    let started = Instant::now();
    let approx = solve_total_float(&fl, 1.0);
    let float_elapsed = started.elapsed();
    assert!(approx.value.is_finite());
    assert!(
        float_elapsed < Duration::from_secs(2),
        "float n=10⁵ took {float_elapsed:?}, budget 2 s"
    );
    println!(
        "ACCEPTANCE 6: PASS — exact n=10⁴ in {exact_elapsed:?}, exact-k 300/100 in {dp_elapsed:?}, float n=10⁵ in {float_elapsed:?}"
    );
}

#[test]
fn criterion_07_ordering_rule_properties() {
    let started = Instant::now();
    let mut r = rng(0xACC7);

    // affine precedence rule vs pointwise sampling (constant difference, so
    // three spread-out points decide the verdict exactly)
    let samples: Vec<Rational> = vec![int(-9), int(0), int(9)];
    for _ in 0..10_000 {
        let f = rand_affine(&mut r);
        let g = rand_affine(&mut r);
        let exact = precedes_affine(&f, &g);
        let sampled = sampled_verdict(
            &MonotonePwlFn::from_affine(f.clone()),
            &MonotonePwlFn::from_affine(g.clone()),
            &samples,
        );
        assert_eq!(exact, sampled, "affine pair {f} vs {g}");
    }

    // hull precedence rule vs pointwise sampling at the critical points;
    // all four verdict kinds must agree, Equivalent included
    let mut equivalents = 0usize;
    let mut done = 0usize;
    while done < 10_000 {
        let f = rand_affine(&mut r);
        let g = rand_affine(&mut r);
        if f.is_identity() || g.is_identity() {
            continue; // the hull of the identity is not a comparison case
        }
        done += 1;
        let exact = precedes_hull(&f, &g);
        let sampled = sampled_verdict(
            &f.hull().unwrap(),
            &g.hull().unwrap(),
            &hull_samples(&f, &g),
        );
        assert_eq!(exact, sampled, "hull pair {f} vs {g}");
        if exact == PrecedenceVerdict::Equivalent {
            equivalents += 1;
        }
    }
    assert!(equivalents > 100, "Equivalent case exercised ({equivalents} seen)");

    // fixpoint of a composition is bracketed as classified
    for _ in 0..10_000 {
        let f = rand_affine(&mut r);
        let g = rand_affine(&mut r);
        let report = classify_gamma_compose(&f, &g);
        assert!(report.holds, "gamma bracket violated for {f} vs {g}: {report:?}");
    }

    // the documented non-transitive cycle, exactly
    let f1 = AffineFn::new(int(2), int(1)).unwrap();
    let f2 = AffineFn::new(int(2), int(-1)).unwrap();
    let f3 = AffineFn::new(rat(1, 2), int(0)).unwrap();
    assert_eq!(precedes_affine(&f1, &f2), PrecedenceVerdict::Before);
    assert_eq!(precedes_affine(&f2, &f3), PrecedenceVerdict::Before);
    assert_eq!(precedes_affine(&f3, &f1), PrecedenceVerdict::Before);

    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 7: PASS — 3 ordering-rule suites × 10⁴ pairs agree with sampling, cycle reproduced, in {elapsed:?}"
    );
}

#[test]
fn criterion_08_gadget_dichotomy() {
    let started = Instant::now();
    let alpha = int(2);

    // every weight list with n ≤ 4, weights ≤ 6, even sum
    let mut partition_cases = 0usize;
    let mut with_partition = 0usize;
    let mut stack: Vec<Vec<u64>> = (1..=6u64).map(|w| vec![w]).collect();
    while let Some(ws) = stack.pop() {
        if ws.len() < 4 {
            for w in 1..=6u64 {
                let mut next = ws.clone();
                next.push(w);
                stack.push(next);
            }
        }
        if ws.iter().sum::<u64>() % 2 != 0 {
            continue;
        }
        let inp = PartitionInput::new(ws.clone(), alpha.clone()).expect("even sum");
        let report = gap_check_partition(&inp).expect("n + 1 ≤ 5");
        assert!(report.dichotomy_ok, "weights {ws:?}: {report:?}");
        partition_cases += 1;
        with_partition += report.has_partition as usize;
    }
    assert!(partition_cases > 700, "exhaustive enumeration ran ({partition_cases})");
    assert!(with_partition > 0 && with_partition < partition_cases, "both sides seen");

    // every factor list with length ≤ 4, factors in 2..=8, square product
    let mut product_cases = 0usize;
    let mut product_with = 0usize;
    let mut stack: Vec<Vec<u64>> = (2..=8u64).map(|f| vec![f]).collect();
    while let Some(fsx) = stack.pop() {
        if fsx.len() < 4 {
            for f in 2..=8u64 {
                let mut next = fsx.clone();
                next.push(f);
                stack.push(next);
            }
        }
        let Ok(inp) = ProductPartitionInput::new(fsx.clone(), alpha.clone()) else {
            continue; // product is not a perfect square
        };
        let report = gap_check_product(&inp).expect("n + 1 ≤ 5");
        assert!(report.dichotomy_ok, "factors {fsx:?}: {report:?}");
        product_cases += 1;
        product_with += report.has_partition as usize;
    }
    assert!(product_cases > 50, "enough square products found ({product_cases})");
    assert!(product_with > 0 && product_with < product_cases, "both sides seen");

    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(120),
        "took {elapsed:?}, budget 120 s"
    );
    println!(
        "ACCEPTANCE 8: PASS — dichotomy holds on {partition_cases} partition and {product_cases} product inputs in {elapsed:?}"
    );
}

#[test]
fn criterion_09_secretary_end_to_end() {
    let started = Instant::now();

    // fixture: X₁ ∈ {10, 0} each with probability 1/2, X₂ ≡ 6
    let apps = [
        Applicant::new(vec![int(10), int(0)], vec![rat(1, 2), rat(1, 2)]).unwrap(),
        Applicant::new(vec![int(6)], vec![int(1)]).unwrap(),
    ];
    let plan = solve_secretary_two_valued(&apps).unwrap();
    assert_eq!(plan.expected_value, int(8), "expected hired value");
    assert_eq!(plan.interview_order, vec![0, 1], "see the risky applicant first");
    assert_eq!(plan.thresholds, vec![int(6)], "stop iff X₁ beats the fallback");

    // 10⁵-trial simulation lands within 3 standard errors
    let sim = simulate_secretary(&apps, &plan.interview_order, &plan.thresholds, 100_000, 2024);
    let gap = (&sim.mean - &plan.expected_value).to_f64().unwrap().abs();
    assert!(
        gap <= 3.0 * sim.stderr,
        "mean {} is {gap} away from 8, stderr {}",
        sim.mean,
        sim.stderr
    );

    // random two-valued applicant sets match the brute-force oracle
    let mut r = rng(0xACC9);
    for i in 0..100 {
        let n = r.random_range(1..=6);
        let apps: Vec<Applicant> = (0..n)
            .map(|_| {
                let a = rand_rational(&mut r, 0, 12, 2);
                let b = rand_rational(&mut r, 0, 12, 2);
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                let den = r.random_range(1..=6);
                let p_hi = rat(r.random_range(0..=den), den);
                let p_lo = Rational::one() - &p_hi;
                Applicant::new(vec![hi, lo], vec![p_hi, p_lo]).unwrap()
            })
            .collect();
        let plan = solve_secretary_two_valued(&apps).unwrap();
        let pwl: Vec<MonotonePwlFn> = apps
            .iter()
            .map(compord::adapters::applicant_to_function)
            .collect();
        let oracle = brute_total(&pwl, &Rational::zero()).expect("n ≤ 6");
        assert_eq!(plan.expected_value, oracle.value, "set {i}");
    }

    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 9: PASS — fixture = 8 with order (X₁, X₂), θ = 6; simulation within 3σ; 100 random sets match oracle; in {elapsed:?}"
    );
}

#[test]
fn criterion_10_scheduling_end_to_end() {
    let started = Instant::now();

    // fixture: p₁(t) = t + 2, p₂(t) = 2t + 1 from t₀ = 0
    let jobs = [
        Job::new(int(1), int(2)).unwrap(),
        Job::new(int(2), int(1)).unwrap(),
    ];
    let report = solve_makespan(&jobs, &int(0)).unwrap();
    assert_eq!(report.makespan, int(4), "fixture makespan");
    assert_eq!(report.order, vec![1, 0], "second job first");

    let mut r = rng(0xACCA);
    for i in 0..100 {
        // all-deterioration: rate > 0
        let n = r.random_range(1..=6);
        let jobs: Vec<Job> = (0..n)
            .map(|_| {
                let den = r.random_range(1..=3);
                let rate = rat(r.random_range(1..=4 * den), den);
                let base = rand_rational(&mut r, 1, 8, 2);
                Job::new(rate, base).unwrap()
            })
            .collect();
        let t0 = rand_rational(&mut r, 0, 3, 2);
        let report = solve_makespan(&jobs, &t0).unwrap();
        let pwl: Vec<MonotonePwlFn> = jobs
            .iter()
            .map(|j| MonotonePwlFn::from_affine(j.clock_map()))
            .collect();
        let oracle = brute_total_min(&pwl, &t0).expect("n ≤ 6");
        assert_eq!(report.makespan, oracle.value, "deterioration set {i}");

        // all-shortening: −1 < rate < 0
        let jobs: Vec<Job> = (0..n)
            .map(|_| {
                let den = r.random_range(2..=5);
                let rate = rat(-r.random_range(1..den), den);
                let base = rand_rational(&mut r, 1, 8, 2);
                Job::new(rate, base).unwrap()
            })
            .collect();
        let report = solve_makespan(&jobs, &t0).unwrap();
        let pwl: Vec<MonotonePwlFn> = jobs
            .iter()
            .map(|j| MonotonePwlFn::from_affine(j.clock_map()))
            .collect();
        let oracle = brute_total_min(&pwl, &t0).expect("n ≤ 6");
        assert_eq!(report.makespan, oracle.value, "shortening set {i}");
    }

    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE 10: PASS — fixture makespan 4 with job 2 first; 100 deterioration + 100 shortening sets match the min oracle; in {elapsed:?}"
    );
}
