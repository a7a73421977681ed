//! One-dimensional quadrature used for kernel degree integrals.
//!
//! Composite midpoint with panel tripling: each refinement keeps every
//! previous evaluation (the old points are the centers of the surviving
//! middle thirds), a Richardson step cancels the leading error term, and
//! iteration stops when two successive extrapolated values agree to the
//! requested absolute tolerance. The rule is open -- interval endpoints are
//! never evaluated -- so integrands whose value at a cell edge belongs to
//! the neighbouring piece (block kernels at a block boundary) are still
//! integrated at full order. Integrands with known jump locations are
//! integrated cell by cell so every panel sees a smooth function.

use crate::error::{invalid_input, Error, Result};
use crate::num::Real;

/// Hard cap on step triplings (3^12 subintervals at the final level).
const MAX_TRIPLINGS: u32 = 12;

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, abs_tol: T) -> Result<T> {
    if !(a <= b) {
        return Err(invalid_input!(
            "integration bounds must satisfy a <= b, got [{a}, {b}]"
        ));
    }
    if !(abs_tol > T::zero()) {
        return Err(invalid_input!(
            "quadrature tolerance must be positive, got {abs_tol}"
        ));
    }
    if a == b {
        return Ok(T::zero());
    }

    let half = T::of(0.5);
    let two = T::of(2.0);
    let width = b - a;
    // Midpoint value at the current level, starting from a single panel.
    let mut mid = width * f(a + width * half);
    let mut panels = 1usize;
    let mut rich_prev: Option<T> = None;

    for _ in 1..=MAX_TRIPLINGS {
        panels *= 3;
        let h = width / T::of_usize(panels);
        // The previous grid survives as the centers of the middle thirds;
        // only the outer thirds of each old panel need new evaluations.
        let mut new_sum = T::zero();
        for i in 0..panels / 3 {
            let base = T::of_usize(3 * i);
            new_sum += f(a + h * (base + half));
            new_sum += f(a + h * (base + two + half));
        }
        let mid_next = mid / T::of(3.0) + h * new_sum;
        let rich = (T::of(9.0) * mid_next - mid) / T::of(8.0);
        if let Some(prev) = rich_prev {
            if (rich - prev).abs() < abs_tol {
                return Ok(rich);
            }
        }
        mid = mid_next;
        rich_prev = Some(rich);
    }

    Err(Error::Internal(format!(
        "quadrature did not reach tolerance {abs_tol} within {MAX_TRIPLINGS} refinements"
    )))
}

/// Integrates `f` over consecutive cells `[cells[0], cells[1]], ...`,
/// splitting the tolerance evenly across cells.
///
/// `cells` must be non-decreasing; zero-width cells contribute nothing. Use
/// this whenever the integrand is only piecewise smooth and the cell edges
/// are its jump locations.
pub fn integrate_cells<T: Real>(f: impl Fn(T) -> T, cells: &[T], abs_tol: T) -> Result<T> {
    if cells.len() < 2 {
        return Err(invalid_input!(
            "need at least two cell edges, got {}",
            cells.len()
        ));
    }
    if cells.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid_input!("cell edges must be non-decreasing"));
    }
    let per_cell = abs_tol / T::of_usize(cells.len() - 1);
    let mut total = T::zero();
    for w in cells.windows(2) {
        if w[0] < w[1] {
            total += integrate(&f, w[0], w[1], per_cell)?;
        }
    }
    Ok(total)
}
