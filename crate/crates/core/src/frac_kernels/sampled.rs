use crate::error::{Error, Result};

use super::grid::Grid;

/// Grid endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Left,
    Right,
}

/// Values of an R^dim-valued function at every node of a [`Grid`].
///
/// Values are stored node-major. Entries are finite except at an endpoint
/// flagged singular, where a fractional derivative blows up and the stored
/// value is NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    dim: usize,
    values: Vec<f64>,
    singular_left: bool,
    singular_right: bool,
}

impl SampledFunction {
    pub fn new(grid: Grid, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidSamples("dimension must be positive".into()));
        }
        if values.len() != grid.len() * dim {
            return Err(Error::DimensionMismatch {
                what: "sample count",
                expected: grid.len() * dim,
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples(format!(
                "non-finite value at node {}",
                i / dim
            )));
        }
        Ok(Self {
            grid,
            dim,
            values,
            singular_left: false,
            singular_right: false,
        })
    }

    pub fn scalar(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, 1, values)
    }

    pub fn zeros(grid: Grid, dim: usize) -> Self {
        Self {
            grid,
            dim,
            values: vec![0.0; grid.len() * dim],
            singular_left: false,
            singular_right: false,
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self {
            grid,
            dim: 1,
            values,
            singular_left: false,
            singular_right: false,
        }
    }

    /// Samples a vector-valued `f(t, out)`.
    pub fn from_vec_fn(grid: Grid, dim: usize, f: impl Fn(f64, &mut [f64])) -> Self {
        let mut values = vec![0.0; grid.len() * dim];
        for (i, chunk) in values.chunks_mut(dim).enumerate() {
            f(grid.node(i), chunk);
        }
        Self {
            grid,
            dim,
            values,
            singular_left: false,
            singular_right: false,
        }
    }

    /// Builds from raw values that may hold NaN at flagged endpoints.
    pub(crate) fn from_raw(
        grid: Grid,
        dim: usize,
        values: Vec<f64>,
        singular_left: bool,
        singular_right: bool,
    ) -> Self {
        debug_assert_eq!(values.len(), grid.len() * dim);
        Self {
            grid,
            dim,
            values,
            singular_left,
            singular_right,
        }
    }

    /// Stacks scalar functions into one vector-valued function.
    pub fn from_components(components: &[SampledFunction]) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidSamples("no components".into()))?;
        let grid = first.grid;
        let dim: usize = components.iter().map(|c| c.dim).sum();
        let mut values = vec![0.0; grid.len() * dim];
        let mut offset = 0;
        for c in components {
            if c.grid != grid {
                return Err(Error::GridMismatch);
            }
            for i in 0..grid.len() {
                values[i * dim + offset..i * dim + offset + c.dim].copy_from_slice(c.at(i));
            }
            offset += c.dim;
        }
        Ok(Self::from_raw(
            grid,
            dim,
            values,
            components.iter().any(|c| c.singular_left),
            components.iter().any(|c| c.singular_right),
        ))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Vector value at node `i`.
    pub fn at(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    /// Component 0 at node `i`; the natural accessor for scalar functions.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i * self.dim]
    }

    pub fn is_singular_at(&self, end: Endpoint) -> bool {
        match end {
            Endpoint::Left => self.singular_left,
            Endpoint::Right => self.singular_right,
        }
    }

    /// True if node `i` carries the not-a-value marker.
    pub fn is_singular_node(&self, i: usize) -> bool {
        (i == 0 && self.singular_left) || (i == self.grid.m() && self.singular_right)
    }

    pub fn component(&self, c: usize) -> SampledFunction {
        let values = (0..self.len()).map(|i| self.at(i)[c]).collect();
        Self::from_raw(self.grid, 1, values, self.singular_left, self.singular_right)
    }

    pub fn components(&self) -> Vec<SampledFunction> {
        (0..self.dim).map(|c| self.component(c)).collect()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SampledFunction {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Self::from_raw(self.grid, self.dim, values, self.singular_left, self.singular_right)
    }

    pub fn scale(&self, c: f64) -> SampledFunction {
        self.map(|v| c * v)
    }

    fn check_compatible(&self, other: &SampledFunction) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                what: "sampled function",
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// `c1·self + c2·other`.
    pub fn lin_comb(&self, c1: f64, other: &SampledFunction, c2: f64) -> Result<SampledFunction> {
        self.check_compatible(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| c1 * x + c2 * y)
            .collect();
        Ok(Self::from_raw(
            self.grid,
            self.dim,
            values,
            self.singular_left || other.singular_left,
            self.singular_right || other.singular_right,
        ))
    }

    pub fn sub(&self, other: &SampledFunction) -> Result<SampledFunction> {
        self.lin_comb(1.0, other, -1.0)
    }

    /// Node-wise dot product, giving a scalar function.
    pub fn dot(&self, other: &SampledFunction) -> Result<SampledFunction> {
        self.check_compatible(other)?;
        let values = (0..self.len())
            .map(|i| self.at(i).iter().zip(other.at(i)).map(|(x, y)| x * y).sum())
            .collect();
        Ok(Self::from_raw(
            self.grid,
            1,
            values,
            self.singular_left || other.singular_left,
            self.singular_right || other.singular_right,
        ))
    }

    /// Replaces values at singular endpoints by linear extrapolation from
    /// the two nearest nodes, clearing the flags.
    pub fn fill_singular(&self) -> SampledFunction {
        let mut values = self.values.clone();
        let d = self.dim;
        let m = self.grid.m();
        if self.singular_left {
            for c in 0..d {
                values[c] = 2.0 * values[d + c] - values[2 * d + c];
            }
        }
        if self.singular_right {
            for c in 0..d {
                values[m * d + c] = 2.0 * values[(m - 1) * d + c] - values[(m - 2) * d + c];
            }
        }
        Self::from_raw(self.grid, d, values, false, false)
    }

    /// Composite trapezoid ∫_a^b of every component. Singular endpoints are
    /// extrapolated first.
    pub fn trapezoid(&self) -> Vec<f64> {
        let filled = self.fill_singular();
        let m = self.grid.m();
        let h = self.grid.h();
        (0..self.dim)
            .map(|c| {
                let inner: f64 = (1..m).map(|i| filled.at(i)[c]).sum();
                h * (inner + 0.5 * (filled.at(0)[c] + filled.at(m)[c]))
            })
            .collect()
    }

    /// Cumulative trapezoid ∫_a^{t_i} of a scalar function, at every node.
    pub fn cumulative_trapezoid(&self) -> Vec<f64> {
        let filled = self.fill_singular();
        let h = self.grid.h();
        let mut out = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        out.push(0.0);
        for i in 1..self.len() {
            acc += 0.5 * h * (filled.value(i - 1) + filled.value(i));
            out.push(acc);
        }
        out
    }

    /// Values reversed in time (node i ↦ node m − i), flags swapped.
    pub fn reflected(&self) -> SampledFunction {
        let mut values = Vec::with_capacity(self.values.len());
        for i in (0..self.len()).rev() {
            values.extend_from_slice(self.at(i));
        }
        Self::from_raw(self.grid, self.dim, values, self.singular_right, self.singular_left)
    }

    /// Maximum absolute difference over nodes in `range`, skipping nothing.
    pub fn max_abs_diff(&self, other: &SampledFunction, range: std::ops::Range<usize>) -> f64 {
        range
            .flat_map(|i| {
                self.at(i)
                    .iter()
                    .zip(other.at(i))
                    .map(|(x, y)| (x - y).abs())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }
}
