use crate::frac_kernels::{FracOrder, Grid, SampledFunction};

/// Nodes excluded from residual norms at each end of the grid.
pub const DEFAULT_BAND: usize = 2;

/// Constant c in the certification tolerance c·h^{min(1, 2−α)}.
pub const DEFAULT_TOLERANCE_SCALE: f64 = 10.0;

/// Scheme-order tolerance for certifying that a residual vanishes.
pub fn certification_tolerance(grid: &Grid, order: FracOrder, scale: f64) -> f64 {
    let p = (2.0 - order.alpha()).min(1.0);
    scale * grid.h().powf(p)
}

/// A pointwise residual field and its norms over the band-excluded interior.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub grid: Grid,
    /// Residual components per node (NaN where undefined).
    pub pointwise: SampledFunction,
    /// Euclidean norm of the residual per node.
    pub magnitude: Vec<f64>,
    pub sup_norm: f64,
    /// Discrete L2 norm sqrt(h Σ |r_i|²) over the window.
    pub l2_norm: f64,
    pub excluded_band: usize,
}

impl ResidualReport {
    pub fn new(pointwise: SampledFunction, band: usize) -> Self {
        let grid = *pointwise.grid();
        let magnitude: Vec<f64> = (0..pointwise.len())
            .map(|i| pointwise.at(i).iter().map(|r| r * r).sum::<f64>().sqrt())
            .collect();
        let window = window(&grid, band);
        let mut sup: f64 = 0.0;
        let mut sq = 0.0;
        for &r in &magnitude[window] {
            // NaN must survive the max so that `passes` fails
            sup = if r.is_nan() || sup.is_nan() { f64::NAN } else { sup.max(r) };
            sq += r * r;
        }
        Self {
            grid,
            pointwise,
            magnitude,
            sup_norm: sup,
            l2_norm: (grid.h() * sq).sqrt(),
            excluded_band: band,
        }
    }

    /// Node range entering the norms.
    pub fn window(&self) -> std::ops::Range<usize> {
        window(&self.grid, self.excluded_band)
    }

    pub fn passes(&self, tolerance: f64) -> bool {
        self.sup_norm <= tolerance
    }
}

fn window(grid: &Grid, band: usize) -> std::ops::Range<usize> {
    let len = grid.len();
    band.min(len)..len.saturating_sub(band).max(band.min(len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_skip_band() {
        let g = Grid::new(0.0, 1.0, 10).unwrap();
        let mut v = vec![0.5; 11];
        v[0] = 100.0;
        v[10] = -100.0;
        v[1] = 7.0;
        let report = ResidualReport::new(SampledFunction::scalar(g, v.clone()).unwrap(), 2);
        assert_eq!(report.window(), 2..9);
        assert_eq!(report.sup_norm, 0.5);
        assert!((report.l2_norm - (0.1f64 * 7.0 * 0.25).sqrt()).abs() < 1e-15);
        let report = ResidualReport::new(SampledFunction::scalar(g, v).unwrap(), 0);
        assert_eq!(report.sup_norm, 100.0);
    }

    #[test]
    fn tolerance_tracks_order() {
        let g = Grid::new(0.0, 1.0, 100).unwrap();
        let t = certification_tolerance(&g, FracOrder::new(0.5).unwrap(), 10.0);
        assert!((t - 0.1).abs() < 1e-15);
        let t = certification_tolerance(&g, FracOrder::new(1.0).unwrap(), 10.0);
        assert!((t - 0.1).abs() < 1e-15);
    }
}
