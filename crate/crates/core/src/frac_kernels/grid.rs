use crate::error::{Error, Result};

/// Order α > 0 of a fractional integral or derivative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidOrder(alpha));
        }
        Ok(Self(alpha))
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    /// Integer n with α ∈ (n−1, n]; equals 1 for every α in (0, 1].
    pub fn n(self) -> u32 {
        self.0.ceil() as u32
    }

    pub fn is_integer(self) -> bool {
        self.0.fract() == 0.0
    }
}

/// Uniform mesh t_i = a + i·h, i = 0..=m, on [a, b].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    m: usize,
}

impl Grid {
    pub fn new(a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidGrid(format!("need finite a < b, got [{a}, {b}]")));
        }
        if m < 2 {
            return Err(Error::InvalidGrid(format!("need m >= 2 intervals, got {m}")));
        }
        Ok(Self { a, b, m })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of nodes, m + 1.
    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.m as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.m {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.m).map(move |i| self.node(i))
    }

    /// Same interval, `factor` times as many intervals.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.a, self.b, self.m * factor)
    }

    /// Reflection t ↦ a + b − t maps node i onto node m − i.
    pub fn reflect(&self, t: f64) -> f64 {
        self.a + self.b - t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_n() {
        assert_eq!(FracOrder::new(0.3).unwrap().n(), 1);
        assert_eq!(FracOrder::new(1.0).unwrap().n(), 1);
        assert_eq!(FracOrder::new(1.5).unwrap().n(), 2);
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn grid_nodes() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(Grid::new(1.0, 0.0, 4).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }
}
