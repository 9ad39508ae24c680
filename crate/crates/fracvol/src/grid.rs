//! Uniform time grids with optional pre-history.
//!
//! The volatility construction reads fractional-noise increments over a
//! fixed observation scale delta, so a volatility value at time t requires
//! the driving fBm back to t - delta. Grids therefore may start at negative
//! times; [`TimeGrid::with_prehistory`] extends a grid backwards so that the
//! fBm origin sits delta before the first observation time.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const ON_GRID_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t_start: f64,
    dt: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n_points: usize) -> Result<Self> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive and finite, got {dt}"
            )));
        }
        if !t_start.is_finite() {
            return Err(Error::InvalidParameter("grid start must be finite".into()));
        }
        if n_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points, got {n_points}"
            )));
        }
        Ok(Self {
            t_start,
            dt,
            n_points,
        })
    }

    /// Grid over [0, horizon] with spacing `dt`; the horizon must sit on the
    /// grid to within a relative tolerance of 1e-9.
    pub fn from_horizon(horizon: f64, dt: f64) -> Result<Self> {
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        let steps = ratio_as_integer(horizon, dt).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "horizon {horizon} is not an integer multiple of dt {dt}"
            ))
        })?;
        Self::new(0.0, dt, steps + 1)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t(self.n_points - 1)
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_steps(&self) -> usize {
        self.n_points - 1
    }

    pub fn t(&self, i: usize) -> f64 {
        self.t_start + i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.t(i)).collect()
    }

    /// Number of grid steps spanned by `delta`, which must be a positive
    /// integer multiple of the spacing.
    pub fn steps_for(&self, delta: f64) -> Result<usize> {
        let m = ratio_as_integer(delta, self.dt).ok_or_else(|| {
            Error::Config(format!(
                "observation scale delta={delta} is not an integer multiple of grid dt={}",
                self.dt
            ))
        })?;
        if m == 0 {
            return Err(Error::Config(format!(
                "observation scale delta={delta} must be at least one grid step dt={}",
                self.dt
            )));
        }
        Ok(m)
    }

    /// Extend the grid backwards by ceil(delta/dt) points of pre-history.
    pub fn with_prehistory(&self, delta: f64) -> Result<Self> {
        let m = self.steps_for(delta)?;
        Self::new(
            self.t_start - m as f64 * self.dt,
            self.dt,
            self.n_points + m,
        )
    }

    /// Does this grid share spacing and alignment with `other`?
    pub fn compatible_with(&self, other: &TimeGrid) -> bool {
        let scale = self.dt.max(1.0);
        (self.dt - other.dt).abs() <= ON_GRID_REL_TOL * scale
            && ((self.t_start - other.t_start) / self.dt
                - ((self.t_start - other.t_start) / self.dt).round())
            .abs()
                <= ON_GRID_REL_TOL
    }
}

fn ratio_as_integer(num: f64, den: f64) -> Option<usize> {
    if !(num.is_finite() && den.is_finite()) || den <= 0.0 || num < 0.0 {
        return None;
    }
    let ratio = num / den;
    let rounded = ratio.round();
    if (ratio - rounded).abs() <= ON_GRID_REL_TOL * rounded.max(1.0) {
        Some(rounded as usize)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_must_sit_on_grid() {
        assert!(TimeGrid::from_horizon(1.0, 0.25).is_ok());
        assert!(TimeGrid::from_horizon(1.0, 0.3).is_err());
    }

    #[test]
    fn prehistory_extends_backwards() {
        let g = TimeGrid::from_horizon(1.0, 0.25).unwrap();
        let ext = g.with_prehistory(0.5).unwrap();
        assert_eq!(ext.n_points(), g.n_points() + 2);
        assert!((ext.t_start() + 0.5).abs() < 1e-12);
        assert!((ext.t_end() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_off_grid_rejected() {
        let g = TimeGrid::from_horizon(1.0, 0.25).unwrap();
        assert!(g.steps_for(0.4).is_err());
        assert_eq!(g.steps_for(0.5).unwrap(), 2);
    }

    #[test]
    fn fuzzy_ratio_tolerates_float_noise() {
        // 0.004 / (0.004/4) style ratios carry representation noise.
        let g = TimeGrid::from_horizon(1.0, 0.001).unwrap();
        assert_eq!(g.steps_for(0.004).unwrap(), 4);
        assert_eq!(g.n_points(), 1001);
    }
}
