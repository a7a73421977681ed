//! Latent positions and graph pairs sampled from a kernel.
//!
//! All randomness flows through one documented construction so runs are
//! reproducible across platforms: sub-seeds are derived from a master seed
//! with the SplitMix64 mixer, each stream is a `ChaCha8` generator, and
//! uniforms on `[0,1)` take the top 53 bits of a `u64` draw. The combination
//! is identified by [`PRNG_ALGORITHM`] in every report.
//!
//! Sampled pairs keep a zero diagonal on both the Bernoulli and the expected
//! matrix, so the expected matrix is exactly the conditional mean of the
//! sampled one given the latent positions.

use ndarray::Array2;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, Result};
use crate::graphon::Graphon;
use crate::num::Real;

/// Identifier for the seed-derivation and generator scheme, recorded in
/// `run_meta.json`.
pub const PRNG_ALGORITHM: &str = "chacha8+splitmix64+u53";

/// How latent positions are placed on `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatentMode {
    /// `N` i.i.d. uniforms, reported in sorted order.
    Stochastic,
    /// The fixed grid `i/N`, `i = 1..=N`.
    Deterministic,
}

/// Sorted latent positions together with their provenance.
#[derive(Debug, Clone)]
pub struct LatentSample<T> {
    /// Positions in ascending order, each in `[0,1]`.
    pub values: Vec<T>,
    pub mode: LatentMode,
    /// Seed of the generating stream; `None` for the deterministic grid.
    pub seed: Option<u64>,
}

impl<T: Real> LatentSample<T> {
    /// Wraps externally chosen positions; they must already be sorted and
    /// inside the unit interval.
    pub fn from_sorted_values(values: Vec<T>, mode: LatentMode) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid_input!(
                "latent sample must contain at least one position"
            ));
        }
        if values.iter().any(|x| !(*x >= T::zero() && *x <= T::one())) {
            return Err(invalid_input!("latent positions must lie in [0,1]"));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(invalid_input!("latent positions must be sorted ascending"));
        }
        Ok(LatentSample {
            values,
            mode,
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// SplitMix64 step: derives the sub-seed for `stream` from `master`.
///
/// This is the standard finalizer from Steele, Lea and Flood's SplitMix
/// generator; consecutive stream indices give statistically independent
/// seeds, and the derivation is pure arithmetic so it is identical on every
/// platform.
pub fn mix_seed(master: u64, stream: u64) -> u64 {
    let mut z = master.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw on `[0,1)` from the top 53 bits of a `u64`.
fn uniform<T: Real>(rng: &mut ChaCha8Rng) -> T {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    T::of((rng.next_u64() >> 11) as f64 * SCALE)
}

/// Draws `n` latent positions.
///
/// In stochastic mode the positions are i.i.d. uniforms from the ChaCha8
/// stream seeded with `seed`, sorted ascending. In deterministic mode the
/// grid `i/n` is returned and `seed` is ignored.
pub fn sample_latent<T: Real>(n: usize, mode: LatentMode, seed: u64) -> Result<LatentSample<T>> {
    if n == 0 {
        return Err(invalid_input!("latent sample size must be at least 1"));
    }
    match mode {
        LatentMode::Deterministic => {
            let denom = T::of_usize(n);
            let values = (1..=n).map(|i| T::of_usize(i) / denom).collect();
            Ok(LatentSample {
                values,
                mode,
                seed: None,
            })
        }
        LatentMode::Stochastic => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut values: Vec<T> = (0..n).map(|_| uniform(&mut rng)).collect();
            values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("uniforms are ordered"));
            Ok(LatentSample {
                values,
                mode,
                seed: Some(seed),
            })
        }
    }
}

/// Expected adjacency matrix: `W(X_i, X_j)` off the diagonal, zeros on it.
///
/// The upper triangle is evaluated once and mirrored, so the result is
/// bitwise symmetric.
pub fn expected_adjacency<T: Real>(g: &Graphon<T>, latent: &LatentSample<T>) -> Array2<T> {
    let n = latent.len();
    let mut a = Array2::<T>::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let w = g.kernel(latent.values[i], latent.values[j]);
            a[[i, j]] = w;
            a[[j, i]] = w;
        }
    }
    a
}

/// Samples a simple graph: each upper-triangle entry is an independent
/// Bernoulli draw with the matching success probability, mirrored below.
///
/// Draws walk the upper triangle in row-major order from a fresh ChaCha8
/// stream, so a seed pins the graph exactly.
pub fn sample_adjacency<T: Real>(a_expected: &Array2<T>, seed: u64) -> Result<Array2<T>> {
    let (rows, cols) = a_expected.dim();
    if rows != cols {
        return Err(invalid_input!(
            "expected adjacency must be square, got {rows}x{cols}"
        ));
    }
    for i in 0..rows {
        if a_expected[[i, i]] != T::zero() {
            return Err(invalid_input!(
                "expected adjacency must have a zero diagonal (row {i})"
            ));
        }
        for j in (i + 1)..rows {
            let p = a_expected[[i, j]];
            if !(p >= T::zero() && p <= T::one()) {
                return Err(invalid_input!(
                    "edge probability at ({i}, {j}) = {p} outside [0,1]"
                ));
            }
            if a_expected[[j, i]] != p {
                return Err(invalid_input!(
                    "expected adjacency must be symmetric at ({i}, {j})"
                ));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Array2::<T>::zeros((rows, rows));
    for i in 0..rows {
        for j in (i + 1)..rows {
            let edge = uniform::<T>(&mut rng) < a_expected[[i, j]];
            let v = if edge { T::one() } else { T::zero() };
            a[[i, j]] = v;
            a[[j, i]] = v;
        }
    }
    Ok(a)
}

/// A sampled graph with its expected counterpart and the latent positions
/// that generated both.
#[derive(Debug, Clone)]
pub struct GraphPair<T> {
    pub latent: LatentSample<T>,
    /// Bernoulli adjacency with entries in `{0,1}` and a zero diagonal.
    pub a_random: Array2<T>,
    /// Expected adjacency `W(X_i, X_j)` with a zero diagonal.
    pub a_expected: Array2<T>,
}

impl<T: Real> GraphPair<T> {
    /// Draws a complete pair from one trial seed.
    ///
    /// The latent stream and the edge stream are split off the trial seed via
    /// [`mix_seed`] (streams 0 and 1), so trials with distinct seeds never
    /// share randomness.
    pub fn generate(g: &Graphon<T>, n: usize, mode: LatentMode, trial_seed: u64) -> Result<Self> {
        let latent = sample_latent(n, mode, mix_seed(trial_seed, 0))?;
        let a_expected = expected_adjacency(g, &latent);
        let a_random = sample_adjacency(&a_expected, mix_seed(trial_seed, 1))?;
        Ok(GraphPair {
            latent,
            a_random,
            a_expected,
        })
    }

    pub fn n(&self) -> usize {
        self.latent.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphon::{make_catalog_graphon, CatalogSpec};
    use std::collections::HashSet;

    fn sbm_half() -> Graphon<f64> {
        make_catalog_graphon(&CatalogSpec::Sbm {
            boundaries: vec![0.5],
            matrix: vec![vec![0.5, 0.0], vec![0.0, 0.5]],
        })
        .unwrap()
    }

    #[test]
    fn deterministic_grid_is_i_over_n() {
        let s = sample_latent::<f64>(4, LatentMode::Deterministic, 99).unwrap();
        assert_eq!(s.values, vec![0.25, 0.5, 0.75, 1.0]);
        assert_eq!(s.seed, None);
    }

    #[test]
    fn stochastic_values_are_the_sorted_53_bit_uniforms() {
        // Reconstruct the documented construction by hand, independently of
        // the sampler: top 53 bits of ChaCha8 output over 2^53, then sort.
        let n = 257;
        let seed = 0xC0FFEE;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut expected: Vec<f64> = (0..n)
            .map(|_| (rng.next_u64() >> 11) as f64 / 9007199254740992.0)
            .collect();
        expected.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());

        let s = sample_latent::<f64>(n, LatentMode::Stochastic, seed).unwrap();
        assert_eq!(s.values, expected);
        assert_eq!(s.seed, Some(seed));
    }

    #[test]
    fn latent_sample_is_sorted_and_in_range() {
        for seed in 0..50u64 {
            let s = sample_latent::<f64>(100, LatentMode::Stochastic, seed).unwrap();
            assert!(s.values.windows(2).all(|w| w[0] <= w[1]));
            assert!(s.values.iter().all(|x| (0.0..=1.0).contains(x)));
        }
    }

    #[test]
    fn same_seed_reproduces_different_seeds_differ() {
        let a = sample_latent::<f64>(64, LatentMode::Stochastic, 7).unwrap();
        let b = sample_latent::<f64>(64, LatentMode::Stochastic, 7).unwrap();
        let c = sample_latent::<f64>(64, LatentMode::Stochastic, 8).unwrap();
        assert_eq!(a.values, b.values);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn mixed_trial_seeds_are_distinct() {
        let master = 1234;
        let seeds: HashSet<u64> = (0..10_000).map(|t| mix_seed(master, t)).collect();
        assert_eq!(seeds.len(), 10_000);
    }

    /// Kolmogorov-Smirnov distance between the sample and the uniform CDF.
    fn ks_statistic(sorted: &[f64]) -> f64 {
        let n = sorted.len() as f64;
        sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let hi = (i as f64 + 1.0) / n - x;
                let lo = x - i as f64 / n;
                hi.max(lo)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn stochastic_latents_pass_ks_uniformity() {
        // Critical value 1.95/sqrt(n): the Kolmogorov tail 2*exp(-2*t^2) at
        // t = 1.95 is ~1e-3 (the higher series terms are negligible), so a
        // correct sampler fails for roughly one seed in a thousand.
        let tail = 2.0 * (-2.0 * 1.95f64 * 1.95).exp();
        assert!((0.0008..0.0012).contains(&tail), "tail={tail}");

        let n = 1000;
        let crit = 1.95 / (n as f64).sqrt();
        let passes = (0..100u64)
            .filter(|&seed| {
                let s =
                    sample_latent::<f64>(n, LatentMode::Stochastic, mix_seed(42, seed)).unwrap();
                ks_statistic(&s.values) < crit
            })
            .count();
        assert!(passes >= 99, "only {passes}/100 seeds passed KS");
    }

    #[test]
    fn expected_adjacency_matches_kernel_lookups() {
        // Constant kernel: all off-diagonal entries are p.
        let g = make_catalog_graphon::<f64>(&CatalogSpec::Constant { p: 0.5 }).unwrap();
        let latent = sample_latent::<f64>(3, LatentMode::Deterministic, 0).unwrap();
        let a = expected_adjacency(&g, &latent);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 0.0 } else { 0.5 };
                assert_eq!(a[[i, j]], want);
            }
        }

        // Product kernel on the deterministic 2-grid: X = (1/2, 1).
        let g = make_catalog_graphon::<f64>(&CatalogSpec::Product).unwrap();
        let latent = sample_latent::<f64>(2, LatentMode::Deterministic, 0).unwrap();
        let a = expected_adjacency(&g, &latent);
        assert_eq!(a[[0, 1]], 0.5);
        assert_eq!(a[[1, 0]], 0.5);
        assert_eq!(a[[0, 0]], 0.0);

        // Block kernel with hand-placed latents across the boundary.
        let g = sbm_half();
        let latent =
            LatentSample::from_sorted_values(vec![0.2, 0.4, 0.9], LatentMode::Stochastic).unwrap();
        let a = expected_adjacency(&g, &latent);
        assert_eq!(a[[0, 1]], 0.5);
        assert_eq!(a[[0, 2]], 0.0);
        assert_eq!(a[[1, 2]], 0.0);
    }

    #[test]
    fn sampled_adjacency_is_simple_and_symmetric() {
        let g = make_catalog_graphon::<f64>(&CatalogSpec::Mean).unwrap();
        let pair = GraphPair::generate(&g, 40, LatentMode::Stochastic, 5).unwrap();
        let a = &pair.a_random;
        for i in 0..40 {
            assert_eq!(a[[i, i]], 0.0);
            for j in 0..40 {
                assert!(a[[i, j]] == 0.0 || a[[i, j]] == 1.0);
                assert_eq!(a[[i, j]], a[[j, i]]);
            }
        }
    }

    #[test]
    fn sample_adjacency_is_seed_deterministic() {
        let g = sbm_half();
        let latent = sample_latent::<f64>(30, LatentMode::Stochastic, 11).unwrap();
        let exp = expected_adjacency(&g, &latent);
        let a = sample_adjacency(&exp, 21).unwrap();
        let b = sample_adjacency(&exp, 21).unwrap();
        let c = sample_adjacency(&exp, 22).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn zero_probability_rows_stay_isolated() {
        // Upper block never connects: any node landing there must be
        // isolated in every draw.
        let g = make_catalog_graphon::<f64>(&CatalogSpec::Sbm {
            boundaries: vec![0.5],
            matrix: vec![vec![0.8, 0.0], vec![0.0, 0.0]],
        })
        .unwrap();
        let latent =
            LatentSample::from_sorted_values(vec![0.1, 0.2, 0.6, 0.7, 0.9], LatentMode::Stochastic)
                .unwrap();
        let exp = expected_adjacency(&g, &latent);
        for seed in 0..20 {
            let a = sample_adjacency(&exp, seed).unwrap();
            for i in 2..5 {
                assert!(
                    (0..5).all(|j| a[[i, j]] == 0.0),
                    "seed {seed} row {i} not isolated"
                );
            }
        }
    }

    #[test]
    fn probability_one_edges_give_the_complete_graph() {
        let g = make_catalog_graphon::<f64>(&CatalogSpec::Constant { p: 1.0 }).unwrap();
        let pair = GraphPair::generate(&g, 12, LatentMode::Stochastic, 9).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                let want = if i == j { 0.0 } else { 1.0 };
                assert_eq!(pair.a_random[[i, j]], want);
            }
        }
    }

    #[test]
    fn empirical_edge_frequency_matches_probabilities() {
        // Fixed latents, many redraws: the entrywise mean of the Bernoulli
        // matrix must sit within 4 standard errors of the expected matrix.
        let g = make_catalog_graphon::<f64>(&CatalogSpec::Mean).unwrap();
        let latent = sample_latent::<f64>(12, LatentMode::Stochastic, 3).unwrap();
        let exp = expected_adjacency(&g, &latent);
        let redraws = 600;
        let mut freq = Array2::<f64>::zeros((12, 12));
        for t in 0..redraws {
            freq += &sample_adjacency(&exp, mix_seed(77, t)).unwrap();
        }
        freq /= redraws as f64;
        let band = 4.0 * (0.25f64 / redraws as f64).sqrt();
        for i in 0..12 {
            for j in 0..12 {
                assert!(
                    (freq[[i, j]] - exp[[i, j]]).abs() <= band,
                    "entry ({i},{j}): freq={} p={}",
                    freq[[i, j]],
                    exp[[i, j]]
                );
            }
        }
    }

    #[test]
    fn pooled_edge_density_matches_constant_half() {
        // 500 draws on 200 nodes pools 500 * C(200,2) Bernoulli(1/2) trials;
        // a four-sigma band around 1/2 is ~6.4e-4 wide.
        let g = make_catalog_graphon::<f64>(&CatalogSpec::Constant { p: 0.5 }).unwrap();
        let n = 200usize;
        let draws = 500u64;
        let latent = sample_latent::<f64>(n, LatentMode::Stochastic, 1).unwrap();
        let exp = expected_adjacency(&g, &latent);
        let mut edges = 0.0f64;
        for t in 0..draws {
            let a = sample_adjacency(&exp, mix_seed(4242, t)).unwrap();
            edges += a.sum() / 2.0;
        }
        let pairs = (n * (n - 1) / 2) as f64 * draws as f64;
        let density = edges / pairs;
        let band = 4.0 * (0.25 / pairs).sqrt();
        assert!(
            (density - 0.5).abs() <= band,
            "density={density} band={band}"
        );
    }

    #[test]
    fn rejects_malformed_expected_matrices() {
        let mut bad = Array2::<f64>::zeros((3, 3));
        bad[[0, 1]] = 1.2;
        bad[[1, 0]] = 1.2;
        assert!(sample_adjacency(&bad, 0).is_err());

        let mut asym = Array2::<f64>::zeros((3, 3));
        asym[[0, 1]] = 0.3;
        asym[[1, 0]] = 0.4;
        assert!(sample_adjacency(&asym, 0).is_err());

        let mut diag = Array2::<f64>::zeros((2, 2));
        diag[[0, 0]] = 0.5;
        assert!(sample_adjacency(&diag, 0).is_err());

        assert!(sample_latent::<f64>(0, LatentMode::Stochastic, 0).is_err());
        assert!(LatentSample::from_sorted_values(vec![0.4, 0.2], LatentMode::Stochastic).is_err());
        assert!(LatentSample::from_sorted_values(vec![-0.1], LatentMode::Stochastic).is_err());
    }
}
