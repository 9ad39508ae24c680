//! Fractional Brownian motion on uniform grids.
//!
//! Two exact samplers (Cholesky and circulant embedding) generate fBm from
//! its stationary-increment covariance; a Volterra-kernel construction
//! builds the same process from an explicit Brownian driver so that a single
//! noise source can feed both the price equation and the volatility. The
//! module also provides the fractional-noise increments over a fixed
//! observation scale and an aggregated-variance Hurst estimator.

mod hurst;
mod kernel;
mod sampler;

pub use hurst::{estimate_hurst, HurstEstimate};
pub use kernel::{kernel_normalization, kernel_value, sample_fbm_from_bm, KernelFbmSampler};
pub use sampler::{sample_fbm, FbmSampler, SamplerMethod};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::rng::RngStream;

/// Hurst parameter, constrained to (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct HurstParameter(f64);

impl HurstParameter {
    pub fn new(h: f64) -> Result<Self> {
        if !h.is_finite() || h <= 0.0 || h >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "Hurst parameter must lie in (0, 1), got {h}"
            )));
        }
        Ok(Self(h))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn two_h(&self) -> f64 {
        2.0 * self.0
    }

    /// The Volterra-kernel representation is only available for h > 1/2.
    pub fn supports_kernel(&self) -> bool {
        self.0 > 0.5
    }

    pub fn require_kernel(&self) -> Result<()> {
        if self.supports_kernel() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "kernel representation requires h > 1/2, got {}",
                self.0
            )))
        }
    }
}

impl TryFrom<f64> for HurstParameter {
    type Error = Error;
    fn try_from(h: f64) -> Result<Self> {
        Self::new(h)
    }
}

impl From<HurstParameter> for f64 {
    fn from(h: HurstParameter) -> f64 {
        h.0
    }
}

/// Covariance of fractional Brownian motion started at 0:
/// Cov[B_H(s), B_H(t)] = (|s|^{2H} + |t|^{2H} - |t-s|^{2H}) / 2.
pub fn fbm_covariance(s: f64, t: f64, h: HurstParameter) -> Result<f64> {
    if !(s.is_finite() && t.is_finite()) || s < 0.0 || t < 0.0 {
        return Err(Error::Domain(format!(
            "fBm covariance requires nonnegative times, got ({s}, {t})"
        )));
    }
    let two_h = h.two_h();
    Ok(0.5 * (s.powf(two_h) + t.powf(two_h) - (t - s).abs().powf(two_h)))
}

/// Autocovariance of fractional noise: Cov[B_H(t+lag) - B_H(t+lag-delta),
/// B_H(t) - B_H(t-delta)] in closed form, valid for any lag >= 0.
pub fn fractional_noise_autocovariance(lag: f64, delta: f64, h: HurstParameter) -> f64 {
    let two_h = h.two_h();
    0.5 * ((lag + delta).abs().powf(two_h) + (lag - delta).abs().powf(two_h)
        - 2.0 * lag.abs().powf(two_h))
}

/// A realized Brownian path stored as per-step increments.
#[derive(Debug, Clone)]
pub struct BrownianPath {
    grid: TimeGrid,
    increments: Vec<f64>,
}

impl BrownianPath {
    pub fn new(grid: TimeGrid, increments: Vec<f64>) -> Result<Self> {
        if increments.len() != grid.n_steps() {
            return Err(Error::GridMismatch(format!(
                "Brownian path has {} increments for a grid with {} steps",
                increments.len(),
                grid.n_steps()
            )));
        }
        Ok(Self { grid, increments })
    }

    /// Sample a standard Brownian path on `grid` from `stream`.
    pub fn sample(grid: TimeGrid, stream: RngStream) -> Self {
        let sqrt_dt = grid.dt().sqrt();
        let increments = stream
            .standard_normals(grid.n_steps())
            .into_iter()
            .map(|z| sqrt_dt * z)
            .collect();
        Self { grid, increments }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// Path values with W(t_start) = 0.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.grid.n_points());
        out.push(0.0);
        let mut acc = 0.0;
        for &dw in &self.increments {
            acc += dw;
            out.push(acc);
        }
        out
    }
}

/// A realized fBm trajectory. `driver` holds the Brownian increments when
/// the path was built through the kernel, so the same noise can be reused to
/// drive the price equation.
#[derive(Debug, Clone)]
pub struct FbmPath {
    grid: TimeGrid,
    values: Vec<f64>,
    h: HurstParameter,
    driver: Option<Vec<f64>>,
}

impl FbmPath {
    pub(crate) fn new(
        grid: TimeGrid,
        values: Vec<f64>,
        h: HurstParameter,
        driver: Option<Vec<f64>>,
    ) -> Self {
        debug_assert_eq!(values.len(), grid.n_points());
        debug_assert_eq!(values[0], 0.0);
        Self {
            grid,
            values,
            h,
            driver,
        }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn h(&self) -> HurstParameter {
        self.h
    }

    /// Brownian increments of the kernel driver, when available.
    pub fn driver(&self) -> Option<&[f64]> {
        self.driver.as_deref()
    }
}

/// Fractional-noise increments over the observation scale `delta`, defined
/// on the tail of the fBm grid where a full look-back of delta exists.
#[derive(Debug, Clone)]
pub struct FractionalNoise {
    grid: TimeGrid,
    values: Vec<f64>,
    delta: f64,
    h: HurstParameter,
}

impl FractionalNoise {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn h(&self) -> HurstParameter {
        self.h
    }
}

/// Increments B_H(t_i) - B_H(t_i - delta) for every grid point with at
/// least delta of history behind it.
pub fn fractional_noise(path: &FbmPath, delta: f64) -> Result<FractionalNoise> {
    let grid = path.grid();
    let m = grid.steps_for(delta)?;
    let n = grid.n_points();
    if m >= n {
        return Err(Error::GridMismatch(format!(
            "grid has {n} points but delta spans {m} steps; insufficient pre-history"
        )));
    }
    let values: Vec<f64> = (m..n)
        .map(|i| path.values()[i] - path.values()[i - m])
        .collect();
    let noise_grid = TimeGrid::new(grid.t(m), grid.dt(), n - m)?;
    Ok(FractionalNoise {
        grid: noise_grid,
        values,
        delta,
        h: path.h(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn h(v: f64) -> HurstParameter {
        HurstParameter::new(v).unwrap()
    }

    #[test]
    fn hurst_domain_enforced() {
        assert!(HurstParameter::new(0.0).is_err());
        assert!(HurstParameter::new(1.0).is_err());
        assert!(HurstParameter::new(f64::NAN).is_err());
        assert!(HurstParameter::new(0.5).is_ok());
    }

    #[test]
    fn covariance_brownian_case() {
        // H = 1/2 reduces to min(s, t).
        assert_relative_eq!(fbm_covariance(1.0, 1.0, h(0.5)).unwrap(), 1.0);
        assert_relative_eq!(fbm_covariance(0.3, 1.7, h(0.5)).unwrap(), 0.3);
        assert_relative_eq!(fbm_covariance(2.5, 0.4, h(0.5)).unwrap(), 0.4);
    }

    #[test]
    fn covariance_persistent_case() {
        // Direct evaluation of the covariance formula: Cov(1, 2) at H = 0.8
        // equals 2^{0.6}.
        let c = fbm_covariance(1.0, 2.0, h(0.8)).unwrap();
        assert_relative_eq!(c, 1.515716566510398, epsilon = 1e-12);
    }

    #[test]
    fn covariance_is_symmetric_and_diagonal_matches_variance() {
        for hh in [0.55, 0.7, 0.85] {
            let hp = h(hh);
            let a = fbm_covariance(0.7, 1.9, hp).unwrap();
            let b = fbm_covariance(1.9, 0.7, hp).unwrap();
            assert_eq!(a, b);
            let v = fbm_covariance(1.3, 1.3, hp).unwrap();
            assert_relative_eq!(v, 1.3f64.powf(2.0 * hh), epsilon = 1e-12);
        }
    }

    #[test]
    fn covariance_rejects_negative_times() {
        assert!(fbm_covariance(-0.1, 1.0, h(0.7)).is_err());
        assert!(fbm_covariance(1.0, -2.0, h(0.7)).is_err());
    }

    #[test]
    fn noise_autocovariance_at_zero_lag_is_variance() {
        let hp = h(0.85);
        let delta = 0.25;
        assert_relative_eq!(
            fractional_noise_autocovariance(0.0, delta, hp),
            delta.powf(1.7),
            epsilon = 1e-14
        );
    }

    #[test]
    fn fractional_noise_full_span_is_single_increment() {
        let grid = TimeGrid::new(0.0, 0.5, 5).unwrap();
        let values = vec![0.0, 0.3, -0.2, 0.9, 1.1];
        let path = FbmPath::new(grid, values.clone(), h(0.7), None);
        let noise = fractional_noise(&path, 2.0).unwrap();
        assert_eq!(noise.values().len(), 1);
        assert_relative_eq!(noise.values()[0], values[4] - values[0]);
    }

    #[test]
    fn fractional_noise_requires_history() {
        let grid = TimeGrid::new(0.0, 0.5, 5).unwrap();
        let path = FbmPath::new(grid, vec![0.0; 5], h(0.7), None);
        assert!(fractional_noise(&path, 2.5).is_err());
        assert!(fractional_noise(&path, 0.3).is_err()); // off-grid delta
    }

    #[test]
    fn brownian_path_cumsum_matches_increments() {
        let grid = TimeGrid::new(0.0, 0.1, 4).unwrap();
        let bm = BrownianPath::new(grid, vec![0.5, -0.25, 1.0]).unwrap();
        assert_eq!(bm.values(), vec![0.0, 0.5, 0.25, 1.25]);
    }
}
