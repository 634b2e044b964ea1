use super::grid::LogGrid;
use super::MassiveKernel;
use crate::error::{Error, Result};
use crate::qops::C64;

/// Minkowski profile `f(ω)` sampled at `ω_n = e^{x_n}` on a [`LogGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinkowskiSmearing {
    grid: LogGrid,
    values: Vec<C64>,
    quadrature_norm: f64,
}

impl MinkowskiSmearing {
    /// Takes samples of `f(ω_n)` as they are; no normalization.
    pub fn from_samples(grid: LogGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        let mut s = Self {
            grid,
            values,
            quadrature_norm: 0.0,
        };
        s.quadrature_norm = s.norm_sq().sqrt();
        Ok(s)
    }

    /// Builds from log-amplitude samples `F(x_n) = sqrt(ω_n) f(ω_n)`.
    pub fn from_log_amplitude(grid: LogGrid, amplitude: &[C64]) -> Result<Self> {
        let values = amplitude
            .iter()
            .enumerate()
            .map(|(n, a)| a * (-0.5 * grid.x(n)).exp())
            .collect();
        Self::from_samples(grid, values)
    }

    pub fn from_fn<F: Fn(f64) -> C64>(grid: LogGrid, f: F) -> Self {
        let values = grid.points().map(|x| f(x.exp())).collect();
        let mut s = Self {
            grid,
            values,
            quadrature_norm: 0.0,
        };
        s.quadrature_norm = s.norm_sq().sqrt();
        s
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn omega(&self, n: usize) -> f64 {
        self.grid.x(n).exp()
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        self.grid.points().map(f64::exp)
    }

    /// `F(x_n) = sqrt(ω_n) f(ω_n)`.
    pub fn log_amplitude(&self) -> Vec<C64> {
        self.values
            .iter()
            .enumerate()
            .map(|(n, v)| v * (0.5 * self.grid.x(n)).exp())
            .collect()
    }

    /// `∫ |f|^2 dω` on the grid.
    pub fn norm_sq(&self) -> f64 {
        self.log_amplitude().iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.step()
    }

    /// `sqrt(∫|f|^2 dω)` when the smearing was constructed, before any
    /// normalization.
    pub fn quadrature_norm(&self) -> f64 {
        self.quadrature_norm
    }

    /// Rescales to unit norm and returns the old norm.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm_sq().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter("cannot normalize a zero packet".into()));
        }
        for v in &mut self.values {
            *v /= norm;
        }
        Ok(norm)
    }

    /// `∫ conj(f) h dω` for two smearings on the same grid.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter("smearings live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(n, (a, b))| a.conj() * b * self.omega(n))
            .sum::<C64>()
            * self.grid.step())
    }

    /// Mean and standard deviation of `ln ω` under `|f|^2 dω`.
    pub fn log_moments(&self) -> (f64, f64) {
        let amp = self.log_amplitude();
        moments(self.grid.points().zip(amp.iter().map(|z| z.norm_sqr())))
    }

    /// Mean and standard deviation of `ω` under `|f|^2 dω`.
    pub fn omega_moments(&self) -> (f64, f64) {
        let amp = self.log_amplitude();
        moments(self.omegas().zip(amp.iter().map(|z| z.norm_sqr())))
    }
}

fn moments(weighted: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let (mut w0, mut w1, mut w2) = (0.0, 0.0, 0.0);
    for (x, w) in weighted {
        w0 += w;
        w1 += w * x;
        w2 += w * x * x;
    }
    let mean = w1 / w0;
    (mean, (w2 / w0 - mean * mean).max(0.0).sqrt())
}

/// Unruh profiles `(g_R(Ω_j), g_L(Ω_j))` on the conjugate grid
/// `Ω_j = j Δk`, `j = 0..=len/2`, of the source [`LogGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct UnruhSmearingPair {
    grid: LogGrid,
    g_r: Vec<C64>,
    g_l: Vec<C64>,
}

impl UnruhSmearingPair {
    pub fn new(grid: LogGrid, g_r: Vec<C64>, g_l: Vec<C64>) -> Result<Self> {
        let n = grid.spectral_len();
        for got in [g_r.len(), g_l.len()] {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        Ok(Self { grid, g_r, g_l })
    }

    pub fn from_fn<R, L>(grid: LogGrid, g_r: R, g_l: L) -> Self
    where
        R: Fn(f64) -> C64,
        L: Fn(f64) -> C64,
    {
        let omegas: Vec<f64> = (0..grid.spectral_len()).map(|j| grid.spectral_point(j)).collect();
        Self {
            grid,
            g_r: omegas.iter().map(|&w| g_r(w)).collect(),
            g_l: omegas.iter().map(|&w| g_l(w)).collect(),
        }
    }

    /// The `x` grid the pair is conjugate to.
    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn g_r(&self) -> &[C64] {
        &self.g_r
    }

    pub fn g_l(&self) -> &[C64] {
        &self.g_l
    }

    pub fn len(&self) -> usize {
        self.g_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g_r.is_empty()
    }

    pub fn omega(&self, j: usize) -> f64 {
        self.grid.spectral_point(j)
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|j| self.omega(j))
    }

    /// `(∫|g_R|^2 dΩ, ∫|g_L|^2 dΩ)` by the trapezoid rule on `[0, Ω_max]`.
    pub fn sector_norms(&self) -> (f64, f64) {
        let mut r = 0.0;
        let mut l = 0.0;
        for j in 0..self.len() {
            let w = self.grid.spectral_weight(j);
            r += w * self.g_r[j].norm_sqr();
            l += w * self.g_l[j].norm_sqr();
        }
        (r, l)
    }

    /// `∫(|g_R|^2 + |g_L|^2) dΩ`.
    pub fn norm_sq(&self) -> f64 {
        let (r, l) = self.sector_norms();
        r + l
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self {
            grid: self.grid,
            g_r: self.g_r.iter().map(|z| z * c).collect(),
            g_l: self.g_l.iter().map(|z| z * c).collect(),
        }
    }

    /// Maximum pointwise distance to another pair on the same grid.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidParameter("pairs live on different grids".into()));
        }
        Ok(self
            .g_r
            .iter()
            .zip(&other.g_r)
            .chain(self.g_l.iter().zip(&other.g_l))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Massive-field profile `f(k)` sampled at `k_n = m sinh x_n` on a rapidity
/// grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSmearing {
    grid: LogGrid,
    kernel: MassiveKernel,
    values: Vec<C64>,
}

impl MomentumSmearing {
    pub fn from_samples(grid: LogGrid, kernel: MassiveKernel, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self { grid, kernel, values })
    }

    pub fn from_fn<F: Fn(f64) -> C64>(grid: LogGrid, kernel: MassiveKernel, f: F) -> Self {
        let values = grid.points().map(|x| f(kernel.momentum(x))).collect();
        Self { grid, kernel, values }
    }

    /// Builds from rapidity amplitudes `F(x_n) = sqrt(ω_k) f(k)`.
    pub fn from_rapidity_amplitude(grid: LogGrid, kernel: MassiveKernel, amplitude: &[C64]) -> Result<Self> {
        let values = amplitude
            .iter()
            .enumerate()
            .map(|(n, a)| a / kernel.omega(kernel.momentum(grid.x(n))).sqrt())
            .collect();
        Self::from_samples(grid, kernel, values)
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn kernel(&self) -> &MassiveKernel {
        &self.kernel
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn momentum(&self, n: usize) -> f64 {
        self.kernel.momentum(self.grid.x(n))
    }

    /// `F(x_n) = sqrt(ω_k) f(k_n)`.
    pub fn rapidity_amplitude(&self) -> Vec<C64> {
        self.values
            .iter()
            .enumerate()
            .map(|(n, v)| v * self.kernel.omega(self.momentum(n)).sqrt())
            .collect()
    }

    /// Mean and standard deviation of the rapidity under `|f|^2 dk`.
    pub fn rapidity_moments(&self) -> (f64, f64) {
        let amp = self.rapidity_amplitude();
        moments(self.grid.points().zip(amp.iter().map(|z| z.norm_sqr())))
    }

    /// `∫ |f|^2 dk` on the grid (`dk = ω_k dx`).
    pub fn norm_sq(&self) -> f64 {
        self.rapidity_amplitude().iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.step()
    }
}
