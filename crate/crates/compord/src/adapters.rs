//! Application front ends.
//!
//! Two problems reduce directly to composition ordering:
//!
//! * **Time-dependent scheduling.** A job whose processing time depends
//!   linearly on its start time t (p(t) = rate·t + base) advances the clock
//!   by f(t) = t + p(t) = (1+rate)·t + base. Minimizing the makespan over
//!   orders of n such jobs is a minimum total composition problem.
//!
//! * **Free-order secretary.** An applicant with random value X contributes
//!   f(x) = E[max{X, x}], the expected best-so-far after seeing them with
//!   current best x. Choosing the interview order to maximize the expected
//!   hired value (hire the first applicant whose value beats what the rest
//!   would yield) is a maximum composition problem over these f's, which are
//!   nondecreasing convex piecewise-linear with f(x) ≥ x.

use crate::functions::{upper_envelope, AffineFn, ClampedFn, Function, FunctionError, MonotonePwlFn};
use crate::numeric::{to_f64 as rational_to_f64, Rational};
use crate::solvers::{solve_min, solve_partial_clamped, Instance, Mode, Objective, SolverError};
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn one_plus(r: &Rational) -> Rational {
    Rational::one() + r
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AdapterError {
    #[error("job {index}: slope 1 + rate = {slope} is not positive, the clock map is not monotone")]
    NonMonotone { index: usize, slope: Rational },
    #[error("job {index}: base processing time must be positive")]
    NonPositiveBase { index: usize },
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

// ---------------------------------------------------------------------------
// Scheduling
// ---------------------------------------------------------------------------

/// A job with start-time-dependent processing time p(t) = rate·t + base.
/// rate > 0 models deterioration, −1 < rate < 0 shortening.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    rate: Rational,
    base: Rational,
}

impl Job {
    pub fn new(rate: Rational, base: Rational) -> Result<Self, AdapterError> {
        let slope = one_plus(&rate);
        if slope <= Rational::zero() {
            return Err(AdapterError::NonMonotone { index: 0, slope });
        }
        if base <= Rational::zero() {
            return Err(AdapterError::NonPositiveBase { index: 0 });
        }
        Ok(Job { rate, base })
    }

    pub fn rate(&self) -> &Rational {
        &self.rate
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    /// The clock map t ↦ t + p(t).
    pub fn clock_map(&self) -> AffineFn {
        AffineFn::new(one_plus(&self.rate), self.base.clone())
            .expect("Job guarantees a positive slope")
    }
}

/// Minimum-total instance whose optimal value is the minimum makespan.
pub fn jobs_to_instance(jobs: &[Job], t0: &Rational) -> Instance {
    let functions = jobs
        .iter()
        .map(|j| Function::Affine(j.clock_map()))
        .collect();
    Instance::new(functions, t0.clone(), Objective::Min, Mode::Total)
        .expect("total mode never rejects")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleRow {
    /// 0-based index into the input job list.
    pub job: usize,
    pub start: Rational,
    pub finish: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleReport {
    /// Jobs in processing order (first entry is processed first).
    pub order: Vec<usize>,
    pub rows: Vec<ScheduleRow>,
    pub makespan: Rational,
}

/// Order the jobs to minimize the completion time of the last one.
pub fn solve_makespan(jobs: &[Job], t0: &Rational) -> Result<ScheduleReport, AdapterError> {
    let instance = jobs_to_instance(jobs, t0);
    let solution = solve_min(&instance)?;
    let mut rows = Vec::with_capacity(jobs.len());
    let mut clock = t0.clone();
    for &j in &solution.permutation {
        let finish = jobs[j].clock_map().eval(&clock);
        rows.push(ScheduleRow { job: j, start: clock, finish: finish.clone() });
        clock = finish;
    }
    debug_assert_eq!(clock, solution.value);
    Ok(ScheduleReport { order: solution.permutation, rows, makespan: solution.value })
}

// ---------------------------------------------------------------------------
// Secretary
// ---------------------------------------------------------------------------

/// A finitely supported nonnegative random value: takes values[j] with
/// probability probs[j]. Values are kept nonincreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applicant {
    values: Vec<Rational>,
    probs: Vec<Rational>,
}

impl Applicant {
    pub fn new(values: Vec<Rational>, probs: Vec<Rational>) -> Result<Self, AdapterError> {
        if values.is_empty() || values.len() != probs.len() {
            return Err(AdapterError::BadDistribution(
                "values and probs must be nonempty lists of equal length".into(),
            ));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(AdapterError::BadDistribution(
                "values must be nonincreasing".into(),
            ));
        }
        if values.last().unwrap() < &Rational::zero() {
            return Err(AdapterError::BadDistribution("values must be nonnegative".into()));
        }
        if probs.iter().any(|p| p < &Rational::zero()) {
            return Err(AdapterError::BadDistribution(
                "probabilities must be nonnegative".into(),
            ));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(AdapterError::BadDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        Ok(Applicant { values, probs })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn expected_value(&self) -> Rational {
        self.values
            .iter()
            .zip(&self.probs)
            .map(|(v, p)| v * p)
            .sum()
    }
}

/// f(x) = E[max{X, x}] as an explicit convex piecewise-linear function: the
/// upper envelope over l of the lines Σ_{j≤l} p_j·v_j + (Σ_{j>l} p_j)·x.
/// The l = 0 line is the identity, so f(x) ≥ x everywhere; the l = m line is
/// the constant E[X].
pub fn applicant_to_function(app: &Applicant) -> MonotonePwlFn {
    let m = app.values.len();
    let mut lines = Vec::with_capacity(m + 1);
    let mut head = Rational::zero(); // Σ_{j≤l} p_j v_j
    let mut tail: Rational = app.probs.iter().sum(); // Σ_{j>l} p_j
    for l in 0..=m {
        lines.push(AffineFn::new(tail.clone(), head.clone()).expect("probabilities are nonnegative"));
        if l < m {
            head += &app.values[l] * &app.probs[l];
            tail -= &app.probs[l];
        }
    }
    upper_envelope(&lines).expect("at least the identity line is present")
}

/// How to run the interviews: who to see in what order, and the value
/// threshold at which to stop and hire (the last applicant is always hired).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecretaryPlan {
    /// 0-based applicant indices; entry 0 is interviewed first.
    pub interview_order: Vec<usize>,
    /// thresholds[i] is θ for interview position i; hire if the observed
    /// value is ≥ θ. One entry per position except the last.
    pub thresholds: Vec<Rational>,
    pub expected_value: Rational,
}

/// θ_i = f_{i+1} ∘ … ∘ f_{n-1} (0) for each interview position i < n−1:
/// the expected outcome of continuing past position i, which is exactly the
/// value a rational interviewer must beat to stop. `fs_ordered` is in
/// interview order.
pub fn stopping_thresholds(fs_ordered: &[MonotonePwlFn]) -> Vec<Rational> {
    let n = fs_ordered.len();
    if n <= 1 {
        return Vec::new();
    }
    let mut acc = Rational::zero();
    let mut thresholds = Vec::with_capacity(n - 1);
    for f in fs_ordered[1..].iter().rev() {
        acc = f.eval(&acc);
        thresholds.push(acc.clone());
    }
    thresholds.reverse();
    thresholds
}

/// Optimal interview order and stopping rule for applicants with (at most)
/// two-point value distributions, via the clamped-function solver.
///
/// Writing v_hi ≥ v_lo for the two values and p_hi + p_lo = 1 for their
/// probabilities, E[max{X, x}] = max{p_lo·x + p_hi·v_hi, E[X]} for
/// v_lo ≤ x ≤ v_hi, which is a clamped function; its hull restores the
/// identity line, giving back the true f. Because every f satisfies
/// f(x) ≥ x, the best prefix solution found by the clamped solver has the
/// same value as the best total order, so the full returned permutation
/// (reversed: first interviewed = outermost composition) is an optimal
/// interview order.
pub fn solve_secretary_two_valued(apps: &[Applicant]) -> Result<SecretaryPlan, AdapterError> {
    let mut clamped = Vec::with_capacity(apps.len());
    for (i, app) in apps.iter().enumerate() {
        let (v_hi, p_hi, p_lo) = match app.values.len() {
            1 => (app.values[0].clone(), app.probs[0].clone(), Rational::zero()),
            2 => (
                app.values[0].clone(),
                app.probs[0].clone(),
                app.probs[1].clone(),
            ),
            m => {
                return Err(AdapterError::Unsupported(format!(
                    "applicant {i} has {m} values; the fast solver handles at most two"
                )))
            }
        };
        clamped.push(ClampedFn::new(p_lo, p_hi * v_hi, app.expected_value())?);
    }
    let solution = solve_partial_clamped(&clamped, &Rational::zero());
    let mut interview_order = solution.permutation;
    interview_order.reverse();
    let fs_ordered: Vec<MonotonePwlFn> = interview_order
        .iter()
        .map(|&i| applicant_to_function(&apps[i]))
        .collect();
    let thresholds = stopping_thresholds(&fs_ordered);
    Ok(SecretaryPlan {
        interview_order,
        thresholds,
        expected_value: solution.value,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    /// Exact mean of the hired values over all trials.
    pub mean: Rational,
    /// Standard error of the mean, estimated from the sample variance.
    pub stderr: f64,
    pub trials: usize,
}

/// Monte-Carlo check of a plan: draw every applicant's value independently,
/// interview in order, hire the first whose value meets its threshold (the
/// last applicant is always hired), and average the hired value.
/// Deterministic for a fixed seed.
pub fn simulate_secretary(
    apps: &[Applicant],
    interview_order: &[usize],
    thresholds: &[Rational],
    trials: usize,
    seed: u64,
) -> SimulationReport {
    assert!(trials >= 1, "at least one trial is required");
    assert_eq!(interview_order.len(), apps.len(), "order must cover every applicant");
    assert_eq!(
        thresholds.len(),
        apps.len().saturating_sub(1),
        "one threshold per non-final interview position"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // f64 cumulative weights are only used to pick an outcome; the values
    // averaged below stay exact.
    let cumulative: Vec<Vec<f64>> = apps
        .iter()
        .map(|a| {
            let mut acc = 0.0;
            a.probs
                .iter()
                .map(|p| {
                    acc += rational_to_f64(p);
                    acc
                })
                .collect()
        })
        .collect();
    let mut sum = Rational::zero();
    let mut sum_sq = Rational::zero();
    for _ in 0..trials {
        let mut hired: Option<&Rational> = None;
        for (pos, &i) in interview_order.iter().enumerate() {
            let r: f64 = rng.random();
            let j = cumulative[i].iter().position(|&c| r < c).unwrap_or(apps[i].values.len() - 1);
            let x = &apps[i].values[j];
            let last = pos + 1 == interview_order.len();
            if last || x >= &thresholds[pos] {
                hired = Some(x);
                break;
            }
        }
        let x = hired.expect("the last applicant is always hired");
        sum += x;
        sum_sq += x * x;
    }
    let n = Rational::from_integer(trials.into());
    let mean = &sum / &n;
    let stderr = if trials > 1 {
        let var = rational_to_f64(&(&sum_sq / &n - &mean * &mean)) * trials as f64
            / (trials as f64 - 1.0);
        (var.max(0.0) / trials as f64).sqrt()
    } else {
        0.0
    };
    SimulationReport { mean, stderr, trials }
}
