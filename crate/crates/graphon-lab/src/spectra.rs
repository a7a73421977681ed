//! Dense symmetric eigenvalues, spectral norms, and graph-pair summaries.
//!
//! The production path is the classic two-stage dense solver: Householder
//! reduction to tridiagonal form followed by the implicit-shift QL iteration
//! (the EISPACK `tred1`/`tql1` pair, eigenvalues only). A cyclic Jacobi
//! solver with eigenvectors is kept alongside it as an independent
//! cross-check for small matrices; the two share no code beyond the input
//! validation, so agreement between them is meaningful evidence.
//!
//! Laplacians follow the unnormalized convention `L = D - A`, and "normalized
//! eigenvalues" always means eigenvalues of `L` divided by the matrix size.

use ndarray::Array2;

use crate::error::{invalid_input, Error, Result};
use crate::num::Real;
use crate::sampling::GraphPair;

/// Entrywise asymmetry beyond this absolute slack is rejected.
const SYMMETRY_SLACK: f64 = 1e-12;

/// QL sweeps allowed per eigenvalue before giving up. Convergence is cubic;
/// well-formed input needs two or three.
const QL_ITERATION_CAP: usize = 50;

/// Size cap for the Jacobi cross-check path; it is O(n^2) per rotation and
/// meant for oracle duty, not production sizes.
const JACOBI_MAX_N: usize = 256;
const JACOBI_MAX_SWEEPS: usize = 100;

fn validate_symmetric<T: Real>(m: &Array2<T>) -> Result<usize> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(invalid_input!("matrix must be square, got {rows}x{cols}"));
    }
    if rows == 0 {
        return Err(invalid_input!("matrix must be at least 1x1"));
    }
    let slack = T::of(SYMMETRY_SLACK);
    for i in 0..rows {
        for j in i..rows {
            if !m[[i, j]].is_finite() || !m[[j, i]].is_finite() {
                return Err(invalid_input!("matrix entry ({i}, {j}) is not finite"));
            }
            if (m[[i, j]] - m[[j, i]]).abs() > slack {
                return Err(invalid_input!(
                    "matrix is not symmetric at ({i}, {j}): {} vs {}",
                    m[[i, j]],
                    m[[j, i]]
                ));
            }
        }
    }
    Ok(rows)
}

/// Householder reduction of a symmetric matrix (row-major in `a`) to
/// tridiagonal form; diagonal lands in `d`, subdiagonal in `e[1..]`.
///
/// Only the lower triangle of `a` is read or written. This is the
/// eigenvalue-only variant of the classic `tred2` reduction.
fn tridiagonalize<T: Real>(a: &mut [T], n: usize, d: &mut [T], e: &mut [T]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let (low, rest) = a.split_at_mut(i * n);
        let row_i = &mut rest[..n];
        if l > 0 {
            let mut scale = T::zero();
            for v in row_i.iter().take(i) {
                scale += v.abs();
            }
            if scale == T::zero() {
                e[i] = row_i[l];
            } else {
                let mut h = T::zero();
                for v in row_i.iter_mut().take(i) {
                    *v /= scale;
                    h += *v * *v;
                }
                let f0 = row_i[l];
                let g0 = if f0 >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g0;
                h -= f0 * g0;
                row_i[l] = f0 - g0;
                // e[0..i] accumulates p = A*u / h for the rank-two update.
                let mut fsum = T::zero();
                for j in 0..i {
                    let mut g = T::zero();
                    let row_j = &low[j * n..j * n + j + 1];
                    for (k, v) in row_j.iter().enumerate() {
                        g += *v * row_i[k];
                    }
                    for k in (j + 1)..i {
                        g += low[k * n + j] * row_i[k];
                    }
                    e[j] = g / h;
                    fsum += e[j] * row_i[j];
                }
                let hh = fsum / (h + h);
                for j in 0..i {
                    let fj = row_i[j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    let row_j = &mut low[j * n..j * n + j + 1];
                    for (k, v) in row_j.iter_mut().enumerate() {
                        *v -= fj * e[k] + gj * row_i[k];
                    }
                }
            }
        } else {
            e[i] = row_i[l];
        }
    }
    e[0] = T::zero();
    for i in 0..n {
        d[i] = a[i * n + i];
    }
}

/// Implicit-shift QL iteration on a tridiagonal matrix (`d` diagonal, `e[i]`
/// the entry below `d[i]`); overwrites `d` with the eigenvalues.
fn ql_implicit_shift<T: Real>(d: &mut [T], e: &mut [T], n: usize) -> Result<()> {
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();

    let eps = T::epsilon();
    let two = T::of(2.0);
    let mut f = T::zero();
    let mut tst1 = T::zero();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        // Find the first decoupled subdiagonal at or after l; e[n-1] is zero
        // so the scan always stops in range.
        let mut m = l;
        while e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > QL_ITERATION_CAP {
                    return Err(Error::EigenNoConvergence {
                        row: l,
                        iterations: QL_ITERATION_CAP,
                    });
                }
                // Implicit shift from the leading 2x2 block.
                let g = d[l];
                let mut p = (d[l + 1] - g) / (two * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;
                // One QL sweep of Givens rotations from m back to l.
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let gi = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * gi;
                    d[i + 1] = h + s * (c * gi + s * d[i]);
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix, sorted ascending.
///
/// `tol` is the accuracy the caller requires: each returned value is within
/// `tol * ||m||_2` of an exact eigenvalue. The QL iteration converges to
/// machine precision regardless, so any `tol >= epsilon` is honored;
/// anything smaller is rejected as unachievable. Asymmetry beyond an
/// absolute 1e-12 is rejected.
pub fn symmetric_eigenvalues<T: Real>(m: &Array2<T>, tol: T) -> Result<Vec<T>> {
    if !(tol >= T::epsilon()) {
        return Err(invalid_input!(
            "eigenvalue tolerance {tol} below achievable machine precision {}",
            T::epsilon()
        ));
    }
    let n = validate_symmetric(m)?;
    let mut a: Vec<T> = m.iter().copied().collect();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tridiagonalize(&mut a, n, &mut d, &mut e);
    ql_implicit_shift(&mut d, &mut e, n)?;
    d.sort_unstable_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(d)
}

/// Spectral norm (largest absolute eigenvalue) of a symmetric matrix.
pub fn spectral_norm<T: Real>(m: &Array2<T>) -> Result<T> {
    let eig = symmetric_eigenvalues(m, T::epsilon())?;
    Ok(eig.iter().fold(T::zero(), |acc, v| acc.max(v.abs())))
}

/// Eigenvalues and eigenvectors by cyclic Jacobi rotations, sorted ascending.
///
/// Runs sweeps until the off-diagonal Frobenius norm falls below 1e-14 of
/// the matrix scale (or 4 ulps for narrow scalar types). Column `k` of the
/// returned matrix is the eigenvector for eigenvalue `k`. Capped at
/// 256x256: this is the independent cross-check path, kept deliberately
/// simple, not the production solver.
pub fn jacobi_eigen<T: Real>(m: &Array2<T>) -> Result<(Vec<T>, Array2<T>)> {
    let n = validate_symmetric(m)?;
    if n > JACOBI_MAX_N {
        return Err(invalid_input!(
            "jacobi cross-check is limited to {JACOBI_MAX_N}x{JACOBI_MAX_N}, got {n}x{n}"
        ));
    }
    let mut a: Vec<T> = m.iter().copied().collect();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }

    let frob = a.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt();
    let scale = frob.max(T::one());
    let target = scale * T::of(1e-14).max(T::epsilon() * T::of(4.0));
    let one = T::one();
    let two = T::of(2.0);

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        if off.sqrt() <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (two * apq);
                // t = sign(theta) / (|theta| + sqrt(1 + theta^2)), guarded
                // against overflow of theta^2.
                let t = if theta.abs() > T::of(1e150) {
                    (two * theta).recip()
                } else {
                    let root = (one + theta * theta).sqrt();
                    if theta >= T::zero() {
                        (theta + root).recip()
                    } else {
                        (theta - root).recip()
                    }
                };
                let c = (one + t * t).sqrt().recip();
                let s = t * c;

                let app = a[p * n + p];
                let aqq = a[q * n + q];
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[p * n + r] = a[r * n + p];
                    a[r * n + q] = s * arp + c * arq;
                    a[q * n + r] = a[r * n + q];
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::Internal(format!(
            "jacobi did not reach its off-diagonal target in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .expect("eigenvalues are finite")
    });
    let values: Vec<T> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Array2::<T>::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[[r, col]] = v[r * n + src];
        }
    }
    Ok((values, vectors))
}

/// Row sums of a square matrix (degrees, when the matrix is an adjacency).
pub fn row_sums<T: Real>(m: &Array2<T>) -> Vec<T> {
    m.rows()
        .into_iter()
        .map(|row| row.iter().copied().sum())
        .collect()
}

/// Unnormalized Laplacian `L = D - A` with `D = diag(row sums of A)`.
pub fn laplacian<T: Real>(adj: &Array2<T>) -> Array2<T> {
    let n = adj.nrows();
    let degrees = row_sums(adj);
    let mut l = adj.mapv(|v| -v);
    for i in 0..n {
        l[[i, i]] += degrees[i];
    }
    l
}

/// Spectral and degree summary of a sampled/expected graph pair.
///
/// All vectors are ascending; `mu` entries are Laplacian eigenvalues divided
/// by the number of nodes, degree entries are degrees divided by the number
/// of nodes.
#[derive(Debug, Clone)]
pub struct SpectralSummary<T> {
    /// Sorted normalized degrees of the sampled graph.
    pub deg_sorted: Vec<T>,
    /// Sorted normalized expected degrees.
    pub deg_bar_sorted: Vec<T>,
    /// Normalized Laplacian spectrum of the sampled graph.
    pub mu: Vec<T>,
    /// Normalized Laplacian spectrum of the expected graph.
    pub mu_bar: Vec<T>,
    /// Largest unnormalized expected degree.
    pub d_bar_max: T,
    /// `||A - Abar||_2`.
    pub diff_norm_adj: T,
    /// `||L - Lbar||_2`.
    pub diff_norm_lap: T,
    /// `max_i |d_i - dbar_i|`, the spectral norm of `D - Dbar`.
    pub diff_norm_deg: T,
}

/// Computes the full summary for a pair; `tol` is handed to the eigensolver.
pub fn summarize<T: Real>(pair: &GraphPair<T>, tol: T) -> Result<SpectralSummary<T>> {
    let n = pair.n();
    let n_t = T::of_usize(n);

    let deg = row_sums(&pair.a_random);
    let deg_bar = row_sums(&pair.a_expected);
    let d_bar_max = deg_bar.iter().copied().fold(T::neg_infinity(), T::max);
    let diff_norm_deg = deg
        .iter()
        .zip(&deg_bar)
        .map(|(a, b)| (*a - *b).abs())
        .fold(T::zero(), T::max);

    let sort = |mut v: Vec<T>| {
        v.sort_unstable_by(|a, b| a.partial_cmp(b).expect("degrees are finite"));
        v
    };
    let deg_sorted = sort(deg.iter().map(|d| *d / n_t).collect());
    let deg_bar_sorted = sort(deg_bar.iter().map(|d| *d / n_t).collect());

    let mut mu = symmetric_eigenvalues(&laplacian(&pair.a_random), tol)?;
    for v in &mut mu {
        *v /= n_t;
    }
    let mut mu_bar = symmetric_eigenvalues(&laplacian(&pair.a_expected), tol)?;
    for v in &mut mu_bar {
        *v /= n_t;
    }

    // A - Abar, reused in place for L - Lbar = diag(d - dbar) - (A - Abar).
    let mut diff = &pair.a_random - &pair.a_expected;
    let diff_norm_adj = spectral_norm(&diff)?;
    diff.mapv_inplace(|v| -v);
    for i in 0..n {
        diff[[i, i]] += deg[i] - deg_bar[i];
    }
    let diff_norm_lap = spectral_norm(&diff)?;

    Ok(SpectralSummary {
        deg_sorted,
        deg_bar_sorted,
        mu,
        mu_bar,
        d_bar_max,
        diff_norm_adj,
        diff_norm_lap,
        diff_norm_deg,
    })
}
