//! Exact fBm samplers: dense Cholesky and circulant embedding.
//!
//! Both generate unit-spacing fractional Gaussian noise and integrate it;
//! self-similarity turns a unit-grid sample into one for spacing dt by
//! scaling the increments with dt^H. The expensive setup (factorization or
//! embedding eigenvalues) is done once per (grid, h, method) in
//! [`FbmSampler::new`] and shared across paths.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::numeric::KahanSum;
use crate::rng::{NormalSource, RngStream};

use super::{FbmPath, HurstParameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerMethod {
    Cholesky,
    Circulant,
}

/// Unit-spacing fGn autocovariance at integer lag k.
fn unit_fgn_autocov(k: usize, two_h: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let kf = k as f64;
    0.5 * ((kf + 1.0).powf(two_h) + (kf - 1.0).powf(two_h) - 2.0 * kf.powf(two_h))
}

enum SamplerState {
    Cholesky {
        // Lower-triangular factor of the unit-fGn covariance, stored row-major.
        lower: Vec<Vec<f64>>,
    },
    Circulant {
        // sqrt(lambda_k / m) per frequency.
        scale: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
        m: usize,
    },
}

pub struct FbmSampler {
    grid: TimeGrid,
    h: HurstParameter,
    state: SamplerState,
}

impl FbmSampler {
    pub fn new(grid: TimeGrid, h: HurstParameter, method: SamplerMethod) -> Result<Self> {
        let n_steps = grid.n_steps();
        let state = match method {
            SamplerMethod::Cholesky => SamplerState::Cholesky {
                lower: cholesky_factor(n_steps, h)?,
            },
            SamplerMethod::Circulant => {
                let m = 2 * n_steps;
                let mut planner = FftPlanner::new();
                let fft = planner.plan_fft_forward(m);
                let scale = embedding_scale(n_steps, h, fft.as_ref())?;
                SamplerState::Circulant { scale, fft, m }
            }
        };
        Ok(Self { grid, h, state })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn h(&self) -> HurstParameter {
        self.h
    }

    /// Draw one path from `stream`. Bit-identical for identical inputs.
    pub fn sample(&self, stream: RngStream) -> FbmPath {
        self.sample_from_source(&mut NormalSource::new(stream, false))
    }

    pub fn sample_from_source(&self, source: &mut NormalSource) -> FbmPath {
        let n_steps = self.grid.n_steps();
        let mut fgn = vec![0.0; n_steps];
        match &self.state {
            SamplerState::Cholesky { lower } => {
                let z: Vec<f64> = (0..n_steps).map(|_| source.next_normal()).collect();
                for (i, row) in lower.iter().enumerate() {
                    let mut acc = 0.0;
                    for (j, lij) in row.iter().enumerate() {
                        acc += lij * z[j];
                    }
                    fgn[i] = acc;
                }
            }
            SamplerState::Circulant { scale, fft, m } => {
                circulant_fgn(scale, fft.as_ref(), *m, source, &mut fgn);
            }
        }
        let step_scale = self.grid.dt().powf(self.h.value());
        let mut values = Vec::with_capacity(self.grid.n_points());
        values.push(0.0);
        let mut acc = KahanSum::new();
        for g in fgn {
            acc.add(step_scale * g);
            values.push(acc.value());
        }
        FbmPath::new(self.grid, values, self.h, None)
    }
}

/// One-shot convenience wrapper over [`FbmSampler`].
pub fn sample_fbm(
    grid: TimeGrid,
    h: HurstParameter,
    stream: RngStream,
    method: SamplerMethod,
) -> Result<FbmPath> {
    Ok(FbmSampler::new(grid, h, method)?.sample(stream))
}

fn cholesky_factor(n: usize, h: HurstParameter) -> Result<Vec<Vec<f64>>> {
    let two_h = h.two_h();
    let cov: Vec<f64> = (0..n).map(|k| unit_fgn_autocov(k, two_h)).collect();
    try_cholesky(&cov, n, 0.0).or_else(|_| try_cholesky(&cov, n, 1e-12))
}

fn try_cholesky(toeplitz: &[f64], n: usize, jitter: f64) -> Result<Vec<Vec<f64>>> {
    let mut lower: Vec<Vec<f64>> = (0..n).map(|i| vec![0.0; i + 1]).collect();
    for i in 0..n {
        for j in 0..=i {
            let mut sum = toeplitz[i - j];
            if i == j {
                sum += jitter;
            }
            for k in 0..j {
                sum -= lower[i][k] * lower[j][k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::Numerical(format!(
                        "fGn covariance not positive definite at pivot {i} (jitter {jitter:e})"
                    )));
                }
                lower[i][j] = sum.sqrt();
            } else {
                lower[i][j] = sum / lower[j][j];
            }
        }
    }
    Ok(lower)
}

/// Eigenvalue scaling of the circulant embedding of the unit-fGn covariance.
///
/// fGn embeds nonnegative-definitely; eigenvalues in [-tol, 0) with
/// tol = 1e-12 relative to the largest eigenvalue are clamped to zero
/// (floating-point noise from the FFT), anything more negative is an error.
fn embedding_scale(n_steps: usize, h: HurstParameter, fft: &dyn Fft<f64>) -> Result<Vec<f64>> {
    let m = 2 * n_steps;
    let two_h = h.two_h();
    let mut row: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); m];
    for (k, slot) in row.iter_mut().enumerate().take(n_steps + 1) {
        slot.re = unit_fgn_autocov(k, two_h);
    }
    for k in 1..n_steps {
        row[m - k].re = row[k].re;
    }
    fft.process(&mut row);
    let lambda_max = row.iter().fold(0.0_f64, |a, c| a.max(c.re));
    let tol = 1e-12 * lambda_max.max(1.0);
    let mut scale = Vec::with_capacity(m);
    for c in &row {
        if c.re < -tol {
            return Err(Error::Numerical(format!(
                "circulant embedding failed: eigenvalue {:.3e} below tolerance -{tol:.3e}",
                c.re
            )));
        }
        scale.push((c.re.max(0.0) / m as f64).sqrt());
    }
    Ok(scale)
}

fn circulant_fgn(
    scale: &[f64],
    fft: &dyn Fft<f64>,
    m: usize,
    source: &mut NormalSource,
    out: &mut [f64],
) {
    let half = m / 2;
    let mut spectrum: Vec<Complex<f64>> = vec![Complex::new(0.0, 0.0); m];
    spectrum[0] = Complex::new(scale[0] * source.next_normal(), 0.0);
    spectrum[half] = Complex::new(scale[half] * source.next_normal(), 0.0);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    for j in 1..half {
        let re = source.next_normal() * inv_sqrt2;
        let im = source.next_normal() * inv_sqrt2;
        spectrum[j] = Complex::new(scale[j] * re, scale[j] * im);
        spectrum[m - j] = spectrum[j].conj();
    }
    fft.process(&mut spectrum);
    for (slot, c) in out.iter_mut().zip(spectrum.iter()) {
        *slot = c.re;
    }
}
