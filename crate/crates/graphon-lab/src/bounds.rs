//! Finite-sample concentration bounds and the predicates built on them.
//!
//! Everything here is closed-form arithmetic on `(N, nu)` and kernel
//! metadata; no randomness. Logs are natural throughout. The quantities:
//!
//! * `gamma(N) = sqrt(log(2N/nu) / N)` — degree-gap bound,
//! * `phi(N) = 3 * gamma(N)` — eigenvalue-gap bound,
//! * `b_N = 1/N + sqrt(8 * log(N/nu) / (N+1))` — latent-spacing bound,
//! * `deg_threshold = (4/9) * log(2N/nu)` — minimum expected degree for the
//!   adjacency-norm tail bound to apply,
//!
//! each holding with probability at least `1 - nu` in its respective sense.
//! The superseded kernel-infimum-dependent variants (`gamma_old`, `phi_old`)
//! are kept for side-by-side comparison.

use crate::error::{invalid_input, Result};
use crate::graphon::{DegreeFunction, Graphon};
use crate::num::Real;
use crate::spectra::SpectralSummary;

fn validate_n_nu<T: Real>(n: usize, nu: T) -> Result<()> {
    if n == 0 {
        return Err(invalid_input!("node count must be at least 1"));
    }
    if !(nu > T::zero() && nu < T::one()) {
        return Err(invalid_input!(
            "failure budget nu must lie in (0,1), got {nu}"
        ));
    }
    Ok(())
}

fn validate_unit_interval<T: Real>(what: &str, v: T) -> Result<()> {
    if !(v > T::zero() && v <= T::one()) {
        return Err(invalid_input!("{what} must lie in (0,1], got {v}"));
    }
    Ok(())
}

/// `log(2N/nu)`, the exponent shared by most of the bounds.
fn log_2n_over_nu<T: Real>(n: usize, nu: T) -> T {
    (T::of(2.0) * T::of_usize(n) / nu).ln()
}

/// The concentration bounds for one `(N, nu)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundSet<T> {
    pub n: usize,
    pub nu: T,
    /// Bound on the sorted normalized degree gap.
    pub gamma: T,
    /// Bound on the normalized Laplacian eigenvalue gap; always `3 * gamma`.
    pub phi: T,
    /// Bound on the largest gap between sorted latent positions.
    pub b_n: T,
    /// Expected-degree level above which the adjacency tail bound applies.
    pub deg_threshold: T,
    /// Superseded degree bound `sqrt(1/eta_W) * gamma`; needs `eta_W > 0`.
    pub gamma_old: Option<T>,
    /// Superseded eigenvalue bound `(1/eta_W + 2) * gamma`; needs `eta_W > 0`.
    pub phi_old: Option<T>,
}

/// Evaluates the bound set; `eta_w` (the kernel infimum) is only needed for
/// the superseded comparison bounds.
pub fn compute_bounds<T: Real>(n: usize, nu: T, eta_w: Option<T>) -> Result<BoundSet<T>> {
    validate_n_nu(n, nu)?;
    if let Some(eta) = eta_w {
        validate_unit_interval("eta_w", eta)?;
    }
    let n_t = T::of_usize(n);
    let gamma = (log_2n_over_nu(n, nu) / n_t).sqrt();
    let phi = T::of(3.0) * gamma;
    let b_n = n_t.recip() + (T::of(8.0) * (n_t / nu).ln() / (n_t + T::one())).sqrt();
    let deg_threshold = T::of(4.0 / 9.0) * log_2n_over_nu(n, nu);
    let gamma_old = eta_w.map(|eta| eta.recip().sqrt() * gamma);
    let phi_old = eta_w.map(|eta| (eta.recip() + T::of(2.0)) * gamma);
    Ok(BoundSet {
        n,
        nu,
        gamma,
        phi,
        b_n,
        deg_threshold,
        gamma_old,
        phi_old,
    })
}

/// Outcome of the "is N large enough" check for a kernel at `(N, nu)`.
#[derive(Debug, Clone)]
pub struct SizeConditions<T> {
    pub b_n: T,
    /// Narrowest partition cell of the kernel.
    pub min_cell_width: T,
    /// Latent spacings resolve every cell: `2 b_N < min_cell_width`.
    pub cond_i: bool,
    /// Left side of the degree-resolution condition.
    pub lhs_ii: T,
    /// `max_x d_W(x)` over the degree-function probe grid.
    pub max_degree: T,
    /// Degree resolution: `log(2N/nu)/N + b_N (2K + 3L) < max_x d_W`.
    pub cond_ii: bool,
    /// Whether `nu` sits in `(N e^{-N/5}, e^{-1})`, the window where the
    /// latent-spacing bound is meaningful. Reported as a warning flag, not
    /// enforced.
    pub nu_in_guarantee_range: bool,
}

/// Checks both size conditions for kernel `g` with its precomputed degree
/// function.
pub fn large_enough_n<T: Real>(
    g: &Graphon<T>,
    n: usize,
    nu: T,
    deg: &DegreeFunction<T>,
) -> Result<SizeConditions<T>> {
    validate_n_nu(n, nu)?;
    let bounds = compute_bounds(n, nu, None)?;
    let b_n = bounds.b_n;
    let n_t = T::of_usize(n);
    let min_cell_width = g.min_cell_width();
    let k = T::of_usize(g.interior_breakpoint_count());
    let lhs_ii = log_2n_over_nu(n, nu) / n_t + b_n * (T::of(2.0) * k + T::of(3.0) * g.lipschitz());
    let max_degree = deg.max_value;
    let nu_in_guarantee_range =
        nu > n_t * (-n_t / T::of(5.0)).exp() && nu < T::of(std::f64::consts::E).recip();
    Ok(SizeConditions {
        b_n,
        min_cell_width,
        cond_i: T::of(2.0) * b_n < min_cell_width,
        lhs_ii,
        max_degree,
        cond_ii: lhs_ii < max_degree,
        nu_in_guarantee_range,
    })
}

/// Whether the observed maximum expected degree clears the threshold the
/// adjacency-norm tail bound requires.
pub fn deg_assumption_holds<T: Real>(summary: &SpectralSummary<T>, n: usize, nu: T) -> bool {
    summary.d_bar_max > T::of(4.0 / 9.0) * log_2n_over_nu(n, nu)
}

/// Which form of the kernel-infimum condition to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaConditionVariant {
    /// `sqrt(log(2N/nu)/N) < eta_W^2 / (1 + 2 eta_W)`.
    Corrected,
    /// `log(2N/nu)/N < eta_W^2 / 9`, the simpler sufficient form.
    Simplified,
}

/// Evaluates the condition tying the sample size to the kernel infimum.
pub fn eta_condition<T: Real>(
    n: usize,
    nu: T,
    eta_w: T,
    variant: EtaConditionVariant,
) -> Result<bool> {
    validate_n_nu(n, nu)?;
    validate_unit_interval("eta_w", eta_w)?;
    let lhs = log_2n_over_nu(n, nu) / T::of_usize(n);
    Ok(match variant {
        EtaConditionVariant::Corrected => {
            lhs.sqrt() < eta_w * eta_w / (T::one() + T::of(2.0) * eta_w)
        }
        EtaConditionVariant::Simplified => lhs < eta_w * eta_w / T::of(9.0),
    })
}

/// Probabilistic floor on the maximum expected degree under stochastic
/// latents, for a kernel that is at least `eta` on a box of side `ell`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeFloor<T> {
    /// The guaranteed level: `eta * N * ell / 4`.
    pub threshold: T,
    /// `(1 - exp(-N ell^2 / 4)) * (1 - (1-ell)^floor(N/2))`, a lower bound
    /// on the probability that the floor holds.
    pub prob_lb: T,
}

/// Degree floor and its probability bound for stochastic latents.
pub fn stochastic_degree_floor<T: Real>(n: usize, eta: T, ell: T) -> Result<DegreeFloor<T>> {
    if n == 0 {
        return Err(invalid_input!("node count must be at least 1"));
    }
    validate_unit_interval("eta", eta)?;
    validate_unit_interval("ell", ell)?;
    let n_t = T::of_usize(n);
    let threshold = eta * n_t * ell / T::of(4.0);
    let occupancy = T::one() - (T::one() - ell).powi((n / 2) as i32);
    let tail = T::one() - (-n_t * ell * ell / T::of(4.0)).exp();
    Ok(DegreeFloor {
        threshold,
        prob_lb: tail * occupancy,
    })
}

/// Hoeffding bound on the lower tail of a binomial: for `Z ~ Bin(trials, p)`
/// and `k < trials * p`, `Pr[Z <= k] <= exp(-2 (trials*p - k)^2 / trials)`.
pub fn hoeffding_lower_tail<T: Real>(trials: usize, p: T, k: T) -> Result<T> {
    if trials == 0 {
        return Err(invalid_input!("trial count must be at least 1"));
    }
    validate_unit_interval("p", p)?;
    let n_t = T::of_usize(trials);
    let mean = n_t * p;
    if !(k < mean) {
        return Err(invalid_input!(
            "hoeffding lower tail needs k < trials*p, got k={k} with mean {mean}"
        ));
    }
    let gap = mean - k;
    Ok((-T::of(2.0) * gap * gap / n_t).exp())
}

/// Caps the exact binomial tail computation; log-space summation keeps the
/// absolute error under 1e-12 up to this size.
pub const BINOMIAL_MAX_TRIALS: usize = 2000;

/// Exact lower tail `Pr[Z <= k]` for `Z ~ Bin(trials, p)`, by stable
/// summation of the probability mass in log space.
pub fn binomial_tail_exact<T: Real>(trials: usize, p: T, k: usize) -> Result<T> {
    if trials == 0 || trials > BINOMIAL_MAX_TRIALS {
        return Err(invalid_input!(
            "trial count must be in 1..={BINOMIAL_MAX_TRIALS}, got {trials}"
        ));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(invalid_input!(
            "success probability must lie in [0,1], got {p}"
        ));
    }
    if k > trials {
        return Err(invalid_input!(
            "k must be at most trials, got k={k} > {trials}"
        ));
    }
    if k == trials || p == T::zero() {
        return Ok(T::one());
    }
    if p == T::one() {
        // k < trials here, and all mass sits at Z = trials.
        return Ok(T::zero());
    }
    let lp = p.ln();
    let lq = (T::one() - p).ln();
    let n_t = T::of_usize(trials);
    // ln C(trials, z), advanced by ln((trials-z)/(z+1)) each step; Kahan
    // summation keeps the accumulated tail tight.
    let mut log_choose = T::zero();
    let mut sum = T::zero();
    let mut comp = T::zero();
    for z in 0..=k {
        let z_t = T::of_usize(z);
        let term = (log_choose + z_t * lp + (n_t - z_t) * lq).exp();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        log_choose += ((n_t - z_t) / (z_t + T::one())).ln();
    }
    Ok(sum.min(T::one()))
}

/// Guaranteed maximum expected degree under deterministic grid latents:
/// `eta * floor(ell * N)`, valid once `N >= 1/ell`.
///
/// This is the floor for degrees that count self-pairs; with the zero
/// diagonal convention used by the samplers, the verification harness
/// compares against `eta * (floor(ell * N) - 1)` instead.
pub fn deterministic_degree_floor<T: Real>(n: usize, eta: T, ell: T) -> Result<T> {
    validate_unit_interval("eta", eta)?;
    validate_unit_interval("ell", ell)?;
    let n_t = T::of_usize(n);
    if n_t < ell.recip() {
        return Err(invalid_input!(
            "deterministic degree floor needs N >= 1/ell, got N={n} with ell={ell}"
        ));
    }
    Ok(eta * (ell * n_t).floor())
}
