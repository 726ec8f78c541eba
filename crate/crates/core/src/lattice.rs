//! Grids, complex lattice fields, discrete difference operators and the
//! `ℓʳ` norm family with optional `h`-weighting.

use crate::fmath::FloatExt;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Boundary rule of a finite lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Boundary {
    /// Indices wrap modulo `N`.
    Periodic,
    /// Nodes `0` and `N-1` are clamped to zero; off-lattice neighbours read
    /// as zero.
    Dirichlet,
}

/// Uniform one-dimensional lattice of `N` nodes with spacing `h`.
///
/// Node coordinates are centred: `x_n = (n - N/2) h` on periodic grids
/// (covering `[-L, L)` with `2L = N h`) and `x_n = (n - (N-1)/2) h` on
/// Dirichlet grids.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LatticeGrid {
    n_nodes: usize,
    spacing: f64,
    half_length: f64,
    boundary: Boundary,
    kappa: f64,
}

impl LatticeGrid {
    pub fn new(n_nodes: usize, spacing: f64, boundary: Boundary) -> Result<Self> {
        if n_nodes < 3 {
            return Err(Error::InvalidGrid("need at least 3 nodes"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidGrid("spacing must be positive and finite"));
        }
        Ok(Self {
            n_nodes,
            spacing,
            half_length: 0.5 * n_nodes as f64 * spacing,
            boundary,
            kappa: 1.0 / (spacing * spacing),
        })
    }

    /// Periodic lattice covering `[-L, L)` with `N = 2L/h` nodes.
    pub fn periodic(half_length: f64, spacing: f64) -> Result<Self> {
        if !(half_length > 0.0) || !(spacing > 0.0) {
            return Err(Error::InvalidGrid("half_length and spacing must be positive"));
        }
        let n = FloatExt::round(2.0 * half_length / spacing) as usize;
        Self::new(n, spacing, Boundary::Periodic)
    }

    /// Dirichlet lattice covering `[-L, L]` inclusive, `N = 2L/h + 1` nodes.
    pub fn dirichlet(half_length: f64, spacing: f64) -> Result<Self> {
        if !(half_length > 0.0) || !(spacing > 0.0) {
            return Err(Error::InvalidGrid("half_length and spacing must be positive"));
        }
        let n = FloatExt::round(2.0 * half_length / spacing) as usize + 1;
        Self::new(n, spacing, Boundary::Dirichlet)
    }

    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    #[inline]
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    #[inline]
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    #[inline]
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// `κ = h⁻²`, the discrete Laplacian prefactor.
    #[inline]
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Physical coordinate of node `n`.
    #[inline]
    pub fn node_coord(&self, n: usize) -> f64 {
        (n as f64 - self.center_offset()) * self.spacing
    }

    /// Integer-valued centred index `x_n / h` of node `n`.
    #[inline]
    pub fn centered_index(&self, n: usize) -> f64 {
        n as f64 - self.center_offset()
    }

    #[inline]
    fn center_offset(&self) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.n_nodes as f64 / 2.0,
            Boundary::Dirichlet => (self.n_nodes as f64 - 1.0) / 2.0,
        }
    }

    /// Number of oscillators in the finite-lattice counting convention
    /// (`N` periodic nodes, or `N+1` Dirichlet nodes over `[-L, L]`).
    #[inline]
    pub fn oscillator_count(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.n_nodes,
            Boundary::Dirichlet => self.n_nodes - 1,
        }
    }
}

/// Complex amplitudes on the nodes of a [`LatticeGrid`].
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComplexField {
    grid: LatticeGrid,
    values: Vec<Complex64>,
}

impl ComplexField {
    /// Builds a field, validating the length and (for Dirichlet grids) the
    /// clamped boundary nodes.
    pub fn new(grid: LatticeGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_nodes() {
            return Err(Error::InvalidField("length does not match grid"));
        }
        if grid.boundary() == Boundary::Dirichlet {
            let last = values[values.len() - 1];
            if values[0] != Complex64::new(0.0, 0.0) || last != Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidField("Dirichlet boundary nodes must be zero"));
            }
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for derived data (stencil outputs need not obey
    /// the Dirichlet clamp).
    pub(crate) fn from_values_unchecked(grid: LatticeGrid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.n_nodes());
        Self { grid, values }
    }

    pub fn zeroed(grid: LatticeGrid) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); grid.n_nodes()],
            grid,
        }
    }

    /// Samples `f` on each node; Dirichlet endpoints are clamped to zero.
    pub fn from_fn(grid: LatticeGrid, mut f: impl FnMut(usize) -> Complex64) -> Self {
        let n = grid.n_nodes();
        let mut values: Vec<Complex64> = (0..n).map(&mut f).collect();
        if grid.boundary() == Boundary::Dirichlet {
            values[0] = Complex64::new(0.0, 0.0);
            values[n - 1] = Complex64::new(0.0, 0.0);
        }
        Self { grid, values }
    }

    /// Constant field; on Dirichlet grids the endpoints are clamped.
    pub fn constant(grid: LatticeGrid, c: Complex64) -> Self {
        Self::from_fn(grid, |_| c)
    }

    #[inline]
    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_values_unchecked(self.grid, values))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_values_unchecked(self.grid, values))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let values = self.values.iter().map(|a| a * c).collect();
        Self::from_values_unchecked(self.grid, values)
    }

    /// Largest modulus over the lattice.
    pub fn sup_mod(&self) -> f64 {
        self.values
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max)
    }
}

/// Neighbour of node `n` at offset `±1` under the grid's boundary rule;
/// `None` marks an off-lattice Dirichlet neighbour (reads as zero).
#[inline]
pub(crate) fn neighbor(grid: &LatticeGrid, n: usize, step: isize) -> Option<usize> {
    let nn = grid.n_nodes() as isize;
    let j = n as isize + step;
    match grid.boundary() {
        Boundary::Periodic => Some(j.rem_euclid(nn) as usize),
        Boundary::Dirichlet => {
            if (0..nn).contains(&j) {
                Some(j as usize)
            } else {
                None
            }
        }
    }
}

/// Unscaled discrete Laplacian `(Δf)_n = f_{n+1} + f_{n-1} - 2 f_n`;
/// callers multiply by `κ` as needed.
pub fn laplacian(f: &ComplexField) -> ComplexField {
    let grid = *f.grid();
    let v = f.values();
    let zero = Complex64::new(0.0, 0.0);
    let values = (0..v.len())
        .map(|n| {
            let up = neighbor(&grid, n, 1).map_or(zero, |j| v[j]);
            let dn = neighbor(&grid, n, -1).map_or(zero, |j| v[j]);
            up + dn - 2.0 * v[n]
        })
        .collect();
    ComplexField::from_values_unchecked(grid, values)
}

/// Backward difference `(∇⁻f)_n = f_n - f_{n-1}`; applying it twice gives
/// the second difference `(Δf)_{n-1}`.
pub fn backward_diff(f: &ComplexField) -> ComplexField {
    let grid = *f.grid();
    let v = f.values();
    let zero = Complex64::new(0.0, 0.0);
    let values = (0..v.len())
        .map(|n| v[n] - neighbor(&grid, n, -1).map_or(zero, |j| v[j]))
        .collect();
    ComplexField::from_values_unchecked(grid, values)
}

/// Norm selector: a finite exponent `r ∈ [1, ∞)` with optional `h`-weight,
/// or the sup norm.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum NormKind {
    /// `(Σ w |f_n|^r)^{1/r}` with `w = h` if `h_weighted`, else `w = 1`.
    Finite { r: f64, h_weighted: bool },
    /// `sup_n |f_n|`; weighting does not apply.
    Sup,
}

impl NormKind {
    pub const fn l2() -> Self {
        NormKind::Finite {
            r: 2.0,
            h_weighted: false,
        }
    }

    pub const fn l2_weighted() -> Self {
        NormKind::Finite {
            r: 2.0,
            h_weighted: true,
        }
    }

    pub const fn lr(r: f64) -> Self {
        NormKind::Finite {
            r,
            h_weighted: false,
        }
    }

    pub const fn sup() -> Self {
        NormKind::Sup
    }
}

/// `ℓʳ` (or `h`-weighted `𝓛ʳ`) norm of a field.
///
/// Sums run over every node; on Dirichlet grids the clamped boundary nodes
/// contribute zero, so this coincides with the interior-only finite-lattice
/// convention.
pub fn norm(f: &ComplexField, kind: NormKind) -> f64 {
    match kind {
        NormKind::Sup => f.sup_mod(),
        NormKind::Finite { r, h_weighted } => {
            debug_assert!(r >= 1.0, "norm exponent must be >= 1");
            let w = if h_weighted { f.grid().spacing() } else { 1.0 };
            if r == 2.0 {
                let s: f64 = f.values().iter().map(|z| z.norm_sqr()).sum();
                FloatExt::sqrt(w * s)
            } else {
                let s: f64 = f
                    .values()
                    .iter()
                    .map(|z| FloatExt::powf(z.norm(), r))
                    .sum();
                FloatExt::powf(w * s, 1.0 / r)
            }
        }
    }
}

/// `norm(f - g, kind)`; the fields must share a grid.
pub fn distance(f: &ComplexField, g: &ComplexField, kind: NormKind) -> Result<f64> {
    Ok(norm(&f.sub(g)?, kind))
}
