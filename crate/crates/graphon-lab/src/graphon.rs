//! Symmetric kernels `W : [0,1]^2 -> [0,1]` and their degree functions.
//!
//! A [`Graphon`] bundles a kernel from a small catalog with the metadata the
//! rest of the crate needs: the ordered partition breakpoints between which
//! the kernel is Lipschitz, a Lipschitz constant valid on every cell, the
//! essential infimum of the kernel, and a display name. The degree function
//! `d_W(x) = ∫_0^1 W(x,y) dy` is evaluated by cell-wise Simpson quadrature so
//! block-model jumps never cross a panel.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, Result};
use crate::num::Real;
use crate::quad;

/// Configuration-facing description of a catalog kernel.
///
/// This is what appears under `"graphon"` in a JSON config, e.g.
/// `{"type":"sbm","boundaries":[0.5],"matrix":[[0.5,0.0],[0.0,0.5]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CatalogSpec {
    /// `W(x,y) = p`.
    Constant { p: f64 },
    /// `W(x,y) = x*y`.
    Product,
    /// `W(x,y) = (x+y)/2`.
    Mean,
    /// Step kernel: `matrix[a][b]` on block `a x b`, blocks split at
    /// `boundaries` (interior points, strictly increasing, inside `(0,1)`).
    Sbm {
        boundaries: Vec<f64>,
        matrix: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone)]
enum Kind<T> {
    Constant(T),
    Product,
    Mean,
    Sbm {
        boundaries: Vec<T>,
        matrix: Vec<Vec<T>>,
    },
}

/// A catalog kernel together with its smoothness metadata.
#[derive(Debug, Clone)]
pub struct Graphon<T> {
    kind: Kind<T>,
    /// Full ordered breakpoint list, always starting at 0 and ending at 1.
    breakpoints: Vec<T>,
    /// Lipschitz constant valid on every partition cell.
    lipschitz: T,
    /// Essential infimum of the kernel over the square.
    infimum: T,
    name: String,
}

/// Builds a [`Graphon`] from its catalog description, validating parameters.
pub fn make_catalog_graphon<T: Real>(spec: &CatalogSpec) -> Result<Graphon<T>> {
    match spec {
        CatalogSpec::Constant { p } => {
            if !p.is_finite() || !(0.0..=1.0).contains(p) {
                return Err(invalid_input!("constant graphon needs p in [0,1], got {p}"));
            }
            Ok(Graphon {
                kind: Kind::Constant(T::of(*p)),
                breakpoints: vec![T::zero(), T::one()],
                lipschitz: T::zero(),
                infimum: T::of(*p),
                name: format!("constant({p})"),
            })
        }
        CatalogSpec::Product => Ok(Graphon {
            kind: Kind::Product,
            breakpoints: vec![T::zero(), T::one()],
            lipschitz: T::one(),
            infimum: T::zero(),
            name: "product".to_owned(),
        }),
        CatalogSpec::Mean => Ok(Graphon {
            kind: Kind::Mean,
            breakpoints: vec![T::zero(), T::one()],
            lipschitz: T::one(),
            infimum: T::zero(),
            name: "mean".to_owned(),
        }),
        CatalogSpec::Sbm { boundaries, matrix } => {
            let blocks = boundaries.len() + 1;
            if matrix.len() != blocks || matrix.iter().any(|row| row.len() != blocks) {
                return Err(invalid_input!(
                    "sbm matrix must be {blocks}x{blocks} for {} boundaries",
                    boundaries.len()
                ));
            }
            if boundaries
                .iter()
                .any(|b| !b.is_finite() || *b <= 0.0 || *b >= 1.0)
            {
                return Err(invalid_input!(
                    "sbm boundaries must lie strictly inside (0,1)"
                ));
            }
            if boundaries.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid_input!("sbm boundaries must be strictly increasing"));
            }
            let mut infimum = 1.0f64;
            for (a, row) in matrix.iter().enumerate() {
                for (b, &v) in row.iter().enumerate() {
                    if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                        return Err(invalid_input!("sbm entry [{a}][{b}] = {v} outside [0,1]"));
                    }
                    if matrix[b][a] != v {
                        return Err(invalid_input!(
                            "sbm matrix must be symmetric, entries [{a}][{b}] and [{b}][{a}] differ"
                        ));
                    }
                    infimum = infimum.min(v);
                }
            }
            let mut breakpoints = Vec::with_capacity(blocks + 1);
            breakpoints.push(T::zero());
            breakpoints.extend(boundaries.iter().map(|&b| T::of(b)));
            breakpoints.push(T::one());
            Ok(Graphon {
                kind: Kind::Sbm {
                    boundaries: boundaries.iter().map(|&b| T::of(b)).collect(),
                    matrix: matrix
                        .iter()
                        .map(|row| row.iter().map(|&v| T::of(v)).collect())
                        .collect(),
                },
                breakpoints,
                lipschitz: T::zero(),
                infimum: T::of(infimum),
                name: format!("sbm({blocks} blocks)"),
            })
        }
    }
}

impl<T: Real> Graphon<T> {
    /// Evaluates `W(x, y)`.
    ///
    /// # Panics
    /// If `(x, y)` lies outside the unit square. Callers own the domain;
    /// latent positions and quadrature nodes are in `[0,1]` by construction.
    pub fn kernel(&self, x: T, y: T) -> T {
        assert!(
            x >= T::zero() && x <= T::one() && y >= T::zero() && y <= T::one(),
            "kernel evaluated outside the unit square at ({x}, {y})"
        );
        match &self.kind {
            Kind::Constant(p) => *p,
            Kind::Product => x * y,
            Kind::Mean => (x + y) / T::of(2.0),
            Kind::Sbm { boundaries, matrix } => {
                let a = boundaries.partition_point(|&b| b <= x);
                let b = boundaries.partition_point(|&b| b <= y);
                matrix[a][b]
            }
        }
    }

    /// Full breakpoint list including both endpoints.
    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    /// Number of interior breakpoints (jump locations).
    pub fn interior_breakpoint_count(&self) -> usize {
        self.breakpoints.len() - 2
    }

    /// Width of the narrowest partition cell.
    pub fn min_cell_width(&self) -> T {
        self.breakpoints
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::infinity(), T::min)
    }

    /// Lipschitz constant valid on every cell.
    pub fn lipschitz(&self) -> T {
        self.lipschitz
    }

    /// Essential infimum of the kernel.
    pub fn infimum(&self) -> T {
        self.infimum
    }

    /// Whether the kernel is continuous on the whole square (no interior
    /// jump locations).
    pub fn is_continuous(&self) -> bool {
        self.interior_breakpoint_count() == 0
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Integrates `y ↦ W(x, y) * g(y)` over `[0,1]`, cell by cell.
    pub fn integrate_slice(&self, x: T, g: impl Fn(T) -> T, abs_tol: T) -> Result<T> {
        quad::integrate_cells(|y| self.kernel(x, y) * g(y), &self.breakpoints, abs_tol)
    }
}

/// Degree function `d_W` sampled on a uniform probe grid.
#[derive(Debug, Clone)]
pub struct DegreeFunction<T> {
    /// Probe locations, `j/(G-1)` for `j = 0..G`.
    pub probes: Vec<T>,
    /// `d_W(x)` at each probe, same order as `probes`.
    pub values: Vec<T>,
    /// Maximum of `values`.
    pub max_value: T,
    /// Quadrature tolerance the values were computed to.
    pub quad_abs_tol: T,
}

/// Evaluates `d_W(x) = ∫_0^1 W(x,y) dy` on a uniform grid of `grid_points`
/// probes (endpoints included).
pub fn degree_function<T: Real>(
    g: &Graphon<T>,
    grid_points: usize,
    quad_abs_tol: T,
) -> Result<DegreeFunction<T>> {
    if grid_points < 2 {
        return Err(invalid_input!(
            "degree function needs at least 2 grid points, got {grid_points}"
        ));
    }
    if !(quad_abs_tol > T::zero()) {
        return Err(invalid_input!(
            "quadrature tolerance must be positive, got {quad_abs_tol}"
        ));
    }
    let denom = T::of_usize(grid_points - 1);
    let mut probes = Vec::with_capacity(grid_points);
    let mut values = Vec::with_capacity(grid_points);
    let mut max_value = T::neg_infinity();
    for j in 0..grid_points {
        let x = T::of_usize(j) / denom;
        let d = g.integrate_slice(x, |_| T::one(), quad_abs_tol)?;
        max_value = max_value.max(d);
        probes.push(x);
        values.push(d);
    }
    Ok(DegreeFunction {
        probes,
        values,
        max_value,
        quad_abs_tol,
    })
}
