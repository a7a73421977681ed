//! Monte-Carlo experiment harness.
//!
//! Everything here is concrete `f64`: the generic core does the math, this
//! module wires it into reproducible experiment runs. Trials are independent
//! and run in parallel; every per-trial seed is derived from the master seed
//! by stable mixing, so results are identical regardless of thread count or
//! scheduling.
//!
//! Every sampled trial — whatever the experiment — computes the full
//! spectral summary and re-checks the eigenvalue stability chain
//! (`max_i |mu_i - mubar_i| <= (||D-Dbar|| + ||A-Abar||)/N` plus solver
//! slack). That inequality is a theorem, not a statistic: a violation means
//! a defect in the pipeline, so it aborts the run as an internal error
//! instead of being tallied.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    compute_bounds, deg_assumption_holds, deterministic_degree_floor, stochastic_degree_floor,
};
use crate::error::{invalid_input, Error, Result};
use crate::graphon::{make_catalog_graphon, CatalogSpec, Graphon};
use crate::num::Real;
use crate::sampling::{mix_seed, GraphPair, LatentMode};
use crate::spectra::{row_sums, summarize};

/// Two-sided 95% normal quantile used by the Wilson score intervals.
pub const WILSON_Z: f64 = 1.959963984540054;

/// Absolute tolerance for the slice integrals behind the uniform-convergence
/// sweep; far below the 1/N-scale quantities being measured.
const SWEEP_QUAD_TOL: f64 = 1e-10;

/// Probes per axis when checking that a kernel really dominates `eta` on the
/// claimed box.
const ETA_BOX_PROBES: usize = 33;

/// Slack for floating-point degree sums when testing the floor criterion.
const FLOOR_SLACK: f64 = 1e-9;

/// Upper end of the Wilson score interval for `successes` out of `trials`.
///
/// Returns 1 for an empty sample: no data bounds nothing.
pub fn wilson_upper(successes: usize, trials: usize) -> f64 {
    if trials == 0 || successes >= trials {
        // At full success the algebraic limit is exactly 1; skipping the
        // formula avoids returning one rounding step below it.
        return 1.0;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let center = p + z2 / (2.0 * n);
    let half = WILSON_Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center + half) / (1.0 + z2 / n)).min(1.0)
}

/// Shared parameters of a Monte-Carlo run.
#[derive(Debug, Clone)]
pub struct McConfig {
    pub graphon: CatalogSpec,
    pub n_list: Vec<usize>,
    pub nu: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub mode: LatentMode,
    /// Accuracy handed to the eigensolver, relative to the matrix norm.
    pub eigentol: f64,
}

impl McConfig {
    /// Validates the scalar fields and builds the kernel.
    pub fn build_graphon(&self) -> Result<Graphon<f64>> {
        if self.n_list.is_empty() {
            return Err(invalid_input!("n_list must not be empty"));
        }
        for &n in &self.n_list {
            if n < 2 {
                return Err(invalid_input!("node counts must be at least 2, got {n}"));
            }
        }
        if self.trials == 0 {
            return Err(invalid_input!("trial count must be at least 1"));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(invalid_input!(
                "failure budget nu must lie in (0,1), got {}",
                self.nu
            ));
        }
        if !self.eigentol.is_finite() || self.eigentol < f64::EPSILON {
            return Err(invalid_input!(
                "eigentol must be a finite value of at least {}, got {}",
                f64::EPSILON,
                self.eigentol
            ));
        }
        make_catalog_graphon(&self.graphon)
    }
}

/// Everything measured on one sampled graph pair. One row of the trials CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    /// The exact seed this trial's graph pair was generated from.
    pub seed: u64,
    /// `max_i` gap between sorted normalized degrees and their expectations.
    pub max_deg_gap: f64,
    /// `max_i |mu_i - mubar_i|` over the normalized Laplacian spectra.
    pub max_mu_gap: f64,
    /// Gap at the second-smallest normalized eigenvalue.
    pub mu2_gap: f64,
    /// Largest expected degree of the trial (unnormalized).
    pub d_bar_max: f64,
    /// `||A - Abar||_2`.
    pub diff_norm_adj: f64,
    /// Whether `d_bar_max` clears the degree threshold `(4/9) log(2N/nu)`.
    pub deg_assumption: bool,
    /// Nodes whose degree strayed beyond `sqrt(log(2N/nu) * d_bar_max)`.
    pub chernoff_violations: usize,
    /// Eigenvalue stability re-check; always true in emitted records, since a
    /// violation aborts the run.
    pub weyl_ok: bool,
}

/// Per-size aggregate over all trial records. One row of the aggregate CSV.
///
/// `freq_a` counts degree-gap bound violations, `freq_b` eigenvalue-gap bound
/// violations (among trials satisfying the degree assumption), `freq_c`
/// per-node degree tail violations over all `trials * n` node observations,
/// `freq_e` adjacency-norm bound violations (again conditional on the degree
/// assumption). The `deg_lb_*` and `prob_lb_lemma2` fields are NaN except in
/// degree-floor verification runs.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRecord {
    pub n: usize,
    pub freq_a: f64,
    pub freq_b: f64,
    pub freq_c: f64,
    pub freq_e: f64,
    pub wilson_a_hi: f64,
    pub wilson_b_hi: f64,
    pub wilson_c_hi: f64,
    pub wilson_e_hi: f64,
    /// Trials attempted at this size (including any eigensolver failures).
    pub trials: usize,
    /// Trials whose `d_bar_max` cleared the degree threshold.
    pub deg_assumption_trials: usize,
    /// Trials dropped because the eigensolver did not converge.
    pub eigen_failures: usize,
    pub median_max_mu_gap: f64,
    /// Fraction of trials whose max expected degree reached the floor.
    pub deg_lb_success_freq: f64,
    /// The floor the successes were counted against (diagonal-corrected).
    pub deg_lb_threshold: f64,
    /// Closed-form lower bound on the success probability (stochastic mode).
    pub prob_lb_lemma2: f64,
}

fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("gaps are finite"));
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        (values[m / 2 - 1] + values[m / 2]) / 2.0
    }
}

/// Folds trial records into the per-size aggregate row.
pub fn aggregate_records(
    n: usize,
    nu: f64,
    trials_attempted: usize,
    eigen_failures: usize,
    records: &[TrialRecord],
) -> Result<AggregateRecord> {
    let bounds = compute_bounds::<f64>(n, nu, None)?;
    let log_term = (2.0 * n as f64 / nu).ln();

    let done = records.len();
    let mut viol_a = 0usize;
    let mut viol_b = 0usize;
    let mut chernoff_total = 0usize;
    let mut viol_e = 0usize;
    let mut deg_trials = 0usize;
    for r in records {
        if r.max_deg_gap > bounds.gamma {
            viol_a += 1;
        }
        chernoff_total += r.chernoff_violations;
        if r.deg_assumption {
            deg_trials += 1;
            if r.max_mu_gap > bounds.phi {
                viol_b += 1;
            }
            if r.diff_norm_adj > (4.0 * r.d_bar_max * log_term).sqrt() {
                viol_e += 1;
            }
        }
    }
    let freq = |hits: usize, total: usize| {
        if total == 0 {
            f64::NAN
        } else {
            hits as f64 / total as f64
        }
    };
    Ok(AggregateRecord {
        n,
        freq_a: freq(viol_a, done),
        freq_b: freq(viol_b, deg_trials),
        freq_c: freq(chernoff_total, done * n),
        freq_e: freq(viol_e, deg_trials),
        wilson_a_hi: wilson_upper(viol_a, done),
        wilson_b_hi: wilson_upper(viol_b, deg_trials),
        wilson_c_hi: wilson_upper(chernoff_total, done * n),
        wilson_e_hi: wilson_upper(viol_e, deg_trials),
        trials: trials_attempted,
        deg_assumption_trials: deg_trials,
        eigen_failures,
        median_max_mu_gap: median(records.iter().map(|r| r.max_mu_gap).collect()),
        deg_lb_success_freq: f64::NAN,
        deg_lb_threshold: f64::NAN,
        prob_lb_lemma2: f64::NAN,
    })
}

/// Samples one pair, summarizes it, and enforces the stability chain.
///
/// `Ok(None)` flags an eigensolver non-convergence (counted by the caller);
/// every other failure is a hard error.
fn run_trial(
    g: &Graphon<f64>,
    n: usize,
    nu: f64,
    trial: usize,
    seed: u64,
    mode: LatentMode,
    eigentol: f64,
) -> Result<Option<TrialRecord>> {
    let pair = GraphPair::generate(g, n, mode, seed)?;
    let summary = match summarize(&pair, eigentol) {
        Ok(s) => s,
        Err(Error::EigenNoConvergence { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let n_f = n as f64;

    let max_deg_gap = summary
        .deg_sorted
        .iter()
        .zip(&summary.deg_bar_sorted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let max_mu_gap = summary
        .mu
        .iter()
        .zip(&summary.mu_bar)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let mu2_gap = (summary.mu[1] - summary.mu_bar[1]).abs();

    // Per-node tail check against the trial's own degree scale.
    let chernoff_threshold = ((2.0 * n_f / nu).ln() * summary.d_bar_max).sqrt();
    let deg = row_sums(&pair.a_random);
    let deg_bar = row_sums(&pair.a_expected);
    let chernoff_violations = deg
        .iter()
        .zip(&deg_bar)
        .filter(|(a, b)| (**a - **b).abs() > chernoff_threshold)
        .count();

    let weyl_rhs = (summary.diff_norm_deg + summary.diff_norm_adj) / n_f + 2.0 * eigentol;
    if max_mu_gap > weyl_rhs {
        return Err(Error::Internal(format!(
            "eigenvalue stability chain violated at n={n}, trial={trial}, seed={seed}: \
             gap {max_mu_gap:e} exceeds {weyl_rhs:e}"
        )));
    }

    Ok(Some(TrialRecord {
        n,
        trial,
        seed,
        max_deg_gap,
        max_mu_gap,
        mu2_gap,
        d_bar_max: summary.d_bar_max,
        diff_norm_adj: summary.diff_norm_adj,
        deg_assumption: deg_assumption_holds(&summary, n, nu),
        chernoff_violations,
        weyl_ok: true,
    }))
}

/// Runs all trials for one size in parallel and aggregates them.
///
/// The per-trial seed is `mix(mix(master, n), trial)`, so any
/// `(master_seed, n, trial)` triple pins its graph pair exactly.
fn run_block(
    g: &Graphon<f64>,
    n: usize,
    nu: f64,
    cfg: &McConfig,
) -> Result<(Vec<TrialRecord>, AggregateRecord)> {
    let size_seed = mix_seed(cfg.master_seed, n as u64);
    let outcomes: Vec<Result<Option<TrialRecord>>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = mix_seed(size_seed, trial as u64);
            run_trial(g, n, nu, trial, seed, cfg.mode, cfg.eigentol)
        })
        .collect();
    let mut records = Vec::with_capacity(cfg.trials);
    let mut eigen_failures = 0usize;
    for outcome in outcomes {
        match outcome? {
            Some(record) => records.push(record),
            None => eigen_failures += 1,
        }
    }
    let aggregate = aggregate_records(n, nu, cfg.trials, eigen_failures, &records)?;
    Ok((records, aggregate))
}

/// Concentration experiment: samples `trials` pairs at every size in
/// `n_list` and tallies how often each bound is violated.
pub fn run_concentration(cfg: &McConfig) -> Result<(Vec<TrialRecord>, Vec<AggregateRecord>)> {
    let g = cfg.build_graphon()?;
    let mut records = Vec::new();
    let mut aggregates = Vec::new();
    for &n in &cfg.n_list {
        let (mut block_records, aggregate) = run_block(&g, n, cfg.nu, cfg)?;
        records.append(&mut block_records);
        aggregates.push(aggregate);
    }
    Ok((records, aggregates))
}

/// Parameters of a degree-floor verification run: the kernel must dominate
/// `eta` on the box `j1 x j2`, whose sides both have length `ell`.
#[derive(Debug, Clone)]
pub struct DegreeBoundConfig {
    pub mc: McConfig,
    pub eta: f64,
    pub ell: f64,
    pub j1: (f64, f64),
    pub j2: (f64, f64),
}

fn validate_eta_box(g: &Graphon<f64>, cfg: &DegreeBoundConfig) -> Result<()> {
    for (name, v) in [("eta", cfg.eta), ("ell", cfg.ell)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(invalid_input!("{name} must lie in (0,1], got {v}"));
        }
    }
    for (name, (lo, hi)) in [("j1", cfg.j1), ("j2", cfg.j2)] {
        if !(0.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(invalid_input!(
                "{name} must be an interval inside [0,1], got [{lo}, {hi}]"
            ));
        }
        if ((hi - lo) - cfg.ell).abs() > 1e-12 {
            return Err(invalid_input!(
                "{name} has length {}, which does not match ell = {}",
                hi - lo,
                cfg.ell
            ));
        }
    }
    // The floor argument needs W >= eta almost everywhere on the box; probe
    // a grid that treats the box as right-open. Block kernels assign a
    // shared right edge to the *next* block, and that zero-measure edge has
    // no bearing on the bound, so the last probe is nudged inside.
    let probe = |interval: (f64, f64), u: usize| {
        let frac = (u as f64 / (ETA_BOX_PROBES - 1) as f64).min(1.0 - 1e-12);
        interval.0 + (interval.1 - interval.0) * frac
    };
    for u in 0..ETA_BOX_PROBES {
        for v in 0..ETA_BOX_PROBES {
            let (x, y) = (probe(cfg.j1, u), probe(cfg.j2, v));
            let w = g.kernel(x, y);
            if w < cfg.eta - 1e-12 {
                return Err(invalid_input!(
                    "kernel value {w} at ({x}, {y}) falls below eta = {} on the claimed box",
                    cfg.eta
                ));
            }
        }
    }
    Ok(())
}

/// Degree-floor verification: samples pairs and counts how often the maximum
/// expected degree reaches its guaranteed floor.
///
/// Both floors are stated for degrees that would include the self-pair, so
/// the comparison value is lowered by one kernel unit (`eta`) to match the
/// zero-diagonal sampling convention: stochastic trials must reach
/// `eta*N*ell/4 - eta`, deterministic ones `eta*(floor(ell*N) - 1)`.
pub fn run_degree_bound(
    cfg: &DegreeBoundConfig,
) -> Result<(Vec<TrialRecord>, Vec<AggregateRecord>)> {
    let g = cfg.mc.build_graphon()?;
    validate_eta_box(&g, cfg)?;
    let mut records = Vec::new();
    let mut aggregates = Vec::new();
    for &n in &cfg.mc.n_list {
        let (floor, prob_lb) = match cfg.mc.mode {
            LatentMode::Stochastic => {
                let f = stochastic_degree_floor(n, cfg.eta, cfg.ell)?;
                (f.threshold - cfg.eta, f.prob_lb)
            }
            LatentMode::Deterministic => (
                deterministic_degree_floor(n, cfg.eta, cfg.ell)? - cfg.eta,
                f64::NAN,
            ),
        };
        let (mut block_records, mut aggregate) = run_block(&g, n, cfg.mc.nu, &cfg.mc)?;
        let successes = block_records
            .iter()
            .filter(|r| r.d_bar_max >= floor - FLOOR_SLACK)
            .count();
        aggregate.deg_lb_success_freq = if block_records.is_empty() {
            f64::NAN
        } else {
            successes as f64 / block_records.len() as f64
        };
        aggregate.deg_lb_threshold = floor;
        aggregate.prob_lb_lemma2 = prob_lb;
        records.append(&mut block_records);
        aggregates.push(aggregate);
    }
    Ok((records, aggregates))
}

/// Least-squares fit of the eigenvalue-gap decay rate.
#[derive(Debug, Clone)]
pub struct RateFit {
    /// Slope of `ln(median gap)` against `ln(sqrt(ln N / N))`; 1 means the
    /// observed decay matches the bound's rate exactly.
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// Regressor values `ln(sqrt(ln N / N))`, one per size.
    pub xs: Vec<f64>,
    /// Response values `ln(median max eigenvalue gap)`, one per size.
    pub ys: Vec<f64>,
}

/// Fits `ln(median) ~ intercept + slope * ln(sqrt(ln N / N))` by ordinary
/// least squares. Needs at least three sizes and strictly positive medians.
pub fn fit_power_law(n_list: &[usize], medians: &[f64]) -> Result<RateFit> {
    if n_list.len() != medians.len() {
        return Err(invalid_input!(
            "got {} sizes but {} medians",
            n_list.len(),
            medians.len()
        ));
    }
    if n_list.len() < 3 {
        return Err(invalid_input!(
            "rate fit needs at least 3 sizes, got {}",
            n_list.len()
        ));
    }
    let mut xs = Vec::with_capacity(n_list.len());
    let mut ys = Vec::with_capacity(n_list.len());
    for (&n, &med) in n_list.iter().zip(medians) {
        if n < 2 {
            return Err(invalid_input!("node counts must be at least 2, got {n}"));
        }
        if !(med.is_finite() && med > 0.0) {
            return Err(invalid_input!(
                "median gap at n={n} is {med}; a positive value is needed to fit a rate"
            ));
        }
        let n_f = n as f64;
        xs.push((n_f.ln() / n_f).sqrt().ln());
        ys.push(med.ln());
    }
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx <= 1e-12 {
        return Err(invalid_input!(
            "sizes are too close together to identify a rate"
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_stderr = (ss_res / (m - 2.0) / sxx).sqrt();
    Ok(RateFit {
        slope,
        intercept,
        slope_stderr,
        xs,
        ys,
    })
}

/// Rate experiment: per-size runs with the failure budget tied to the size
/// (`nu = N^-alpha`), then a log-log fit of the median gap decay.
///
/// `cfg.nu` is ignored here; `alpha > 1` keeps the per-size budgets summable.
pub fn run_rate_fit(
    cfg: &McConfig,
    alpha: f64,
) -> Result<(Vec<TrialRecord>, Vec<AggregateRecord>, RateFit)> {
    if !(alpha > 1.0) {
        return Err(invalid_input!("alpha must exceed 1, got {alpha}"));
    }
    let g = cfg.build_graphon()?;
    if cfg.n_list.len() < 3 {
        return Err(invalid_input!(
            "rate fit needs at least 3 sizes, got {}",
            cfg.n_list.len()
        ));
    }
    let mut records = Vec::new();
    let mut aggregates = Vec::new();
    let mut medians = Vec::new();
    for &n in &cfg.n_list {
        let nu_n = (n as f64).powf(-alpha);
        let (mut block_records, aggregate) = run_block(&g, n, nu_n, cfg)?;
        medians.push(aggregate.median_max_mu_gap);
        records.append(&mut block_records);
        aggregates.push(aggregate);
    }
    let fit = fit_power_law(&cfg.n_list, &medians)?;
    Ok((records, aggregates, fit))
}

/// Weight function for the uniform-convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunction {
    /// Constant 1; the sweep then measures the degree function itself.
    One,
    /// `f(y) = y`.
    Identity,
    /// `f(y) = cos(pi y)`.
    Cospi,
}

impl TestFunction {
    pub fn apply(self, y: f64) -> f64 {
        match self {
            TestFunction::One => 1.0,
            TestFunction::Identity => y,
            TestFunction::Cospi => (std::f64::consts::PI * y).cos(),
        }
    }

    fn sup_abs(self) -> f64 {
        1.0
    }

    fn lipschitz(self) -> f64 {
        match self {
            TestFunction::One => 0.0,
            TestFunction::Identity => 1.0,
            TestFunction::Cospi => std::f64::consts::PI,
        }
    }
}

/// One size of the uniform-convergence sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformConvergencePoint {
    pub n: usize,
    /// `sup_x` over the probe grid of the discretization error.
    pub sup_error: f64,
    /// The proved envelope `C / N`.
    pub bound: f64,
}

/// Result of sweeping the kernel-slice discretization error over sizes.
#[derive(Debug, Clone)]
pub struct UniformConvergenceResult {
    /// Envelope constant `C = L (1 + sup|f| + Lip(f))`.
    pub c_constant: f64,
    pub x_grid_points: usize,
    pub points: Vec<UniformConvergencePoint>,
}

/// Measures `sup_x |1/N sum_j W(x, j/N) f(j/N) - integral W(x,y) f(y) dy|`
/// on a uniform `x` grid, for each size, against its `C/N` envelope.
///
/// The grid-latent Riemann sum only converges uniformly for continuous
/// kernels, so kernels with interior breakpoints are rejected. A missing `f`
/// means the constant weight, i.e. the sweep compares empirical and
/// continuum degree functions.
pub fn run_uniform_convergence(
    spec: &CatalogSpec,
    n_list: &[usize],
    f: Option<TestFunction>,
    x_grid_points: usize,
) -> Result<UniformConvergenceResult> {
    let g = make_catalog_graphon::<f64>(spec)?;
    if !g.is_continuous() {
        return Err(invalid_input!(
            "kernel '{}' has interior breakpoints; the uniform sweep needs a continuous kernel",
            g.name()
        ));
    }
    if n_list.is_empty() {
        return Err(invalid_input!("n_list must not be empty"));
    }
    for &n in n_list {
        if n < 2 {
            return Err(invalid_input!("node counts must be at least 2, got {n}"));
        }
    }
    if x_grid_points < 2 {
        return Err(invalid_input!(
            "x grid needs at least 2 points, got {x_grid_points}"
        ));
    }
    let f = f.unwrap_or(TestFunction::One);
    let c_constant = g.lipschitz().as_f64() * (1.0 + f.sup_abs() + f.lipschitz());

    let points: Vec<Result<UniformConvergencePoint>> = n_list
        .par_iter()
        .map(|&n| {
            let n_f = n as f64;
            let mut sup_error = 0.0f64;
            for u in 0..x_grid_points {
                let x = u as f64 / (x_grid_points - 1) as f64;
                let discrete = (1..=n)
                    .map(|j| {
                        let y = j as f64 / n_f;
                        g.kernel(x, y) * f.apply(y)
                    })
                    .sum::<f64>()
                    / n_f;
                let continuum = g.integrate_slice(x, |y| f.apply(y), SWEEP_QUAD_TOL)?;
                sup_error = sup_error.max((discrete - continuum).abs());
            }
            Ok(UniformConvergencePoint {
                n,
                sup_error,
                bound: c_constant / n_f,
            })
        })
        .collect();
    let points = points.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(UniformConvergenceResult {
        c_constant,
        x_grid_points,
        points,
    })
}
