use std::f64::consts::PI;

use serde::Serialize;

use super::grid::{adapt, sample_checked, GridOptions, LogGrid};
use super::smearing::{MinkowskiSmearing, MomentumSmearing, UnruhSmearingPair};
use super::{BogoliubovKernel, MassiveKernel};
use crate::error::{Error, Result};
use crate::qops::C64;
use crate::special;

/// Closed-form normalizations must hold on the grid to this accuracy.
const NORMALIZATION_TOL: f64 = 1e-8;

/// Width `λ`, frequency shift `μ` and centre `ω₀` of a packet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogGaussianParams {
    pub lambda: f64,
    pub mu: f64,
    pub omega0: f64,
}

impl LogGaussianParams {
    pub fn new(lambda: f64, mu: f64, omega0: f64) -> Result<Self> {
        let p = Self { lambda, mu, omega0 };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("λ = {} must be > 0", self.lambda)));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("μ = {} must be finite", self.mu)));
        }
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::InvalidParameter(format!("ω₀ = {} must be > 0", self.omega0)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlternateKind {
    /// `f ∝ (ω/ω₀)^{λ-iμ} e^{-ω/ω₀} / sqrt(ω)`.
    Gamma,
    /// `f ∝ (ω/ω₀)^{-iμ} e^{-λ(ω/ω₀ + ω₀/ω)/2} / sqrt(ω)`.
    Bessel,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "family")]
pub enum PacketFamily {
    LogGaussian,
    Gamma,
    Bessel,
    /// `cos θ f + sin θ conj(f)` for the log-Gaussian `f`, renormalized.
    Mixed {
        angle: f64,
    },
}

impl From<AlternateKind> for PacketFamily {
    fn from(kind: AlternateKind) -> Self {
        match kind {
            AlternateKind::Gamma => PacketFamily::Gamma,
            AlternateKind::Bessel => PacketFamily::Bessel,
        }
    }
}

/// Log-amplitude `F(x) = sqrt(ω) f(ω)` at `x = ln ω`, plus the centre of
/// `|F|^2`.
struct Profile {
    center: f64,
    amplitude: Box<dyn Fn(f64) -> C64 + Sync>,
}

fn profile(family: PacketFamily, p: LogGaussianParams) -> Result<Profile> {
    p.validate()?;
    let LogGaussianParams { lambda, mu, omega0 } = p;
    let x0 = omega0.ln();
    let log_gaussian = move |x: f64| {
        let y = x - x0;
        C64::from_polar((lambda / PI).powf(0.25) * (-0.5 * lambda * y * y).exp(), -mu * y)
    };
    Ok(match family {
        PacketFamily::LogGaussian => Profile {
            center: x0,
            amplitude: Box::new(log_gaussian),
        },
        PacketFamily::Mixed { angle } => {
            if !angle.is_finite() {
                return Err(Error::InvalidParameter(format!("mixing angle {angle} must be finite")));
            }
            let (s, c) = angle.sin_cos();
            Profile {
                center: x0,
                amplitude: Box::new(move |x| {
                    let f = log_gaussian(x);
                    c * f + s * f.conj()
                }),
            }
        }
        PacketFamily::Gamma => {
            let log_norm = lambda * 2f64.ln() - 0.5 * special::ln_gamma(2.0 * lambda)?;
            Profile {
                center: x0 + lambda.ln(),
                amplitude: Box::new(move |x| {
                    let y = x - x0;
                    C64::from_polar((log_norm + lambda * y - y.exp()).exp(), -mu * y)
                }),
            }
        }
        PacketFamily::Bessel => {
            let k0 = special::bessel_k0(2.0 * lambda)?;
            if k0 <= 0.0 {
                return Err(Error::SpecialFunction(format!("K0({}) underflows", 2.0 * lambda)));
            }
            let norm = (2.0 * k0).powf(-0.5);
            Profile {
                center: x0,
                amplitude: Box::new(move |x| {
                    let y = x - x0;
                    C64::from_polar(norm * (-lambda * y.cosh()).exp(), -mu * y)
                }),
            }
        }
    })
}

/// Starting grid sized from the packet's expected widths.
fn options_for(p: &LogGaussianParams) -> GridOptions {
    let defaults = GridOptions::default();
    let half_width = defaults.initial_half_width.max(8.0 / p.lambda.sqrt());
    let k_reach = 2.0 * (p.mu.abs() + 8.0 * p.lambda.sqrt() + 8.0);
    let wanted = (2.0 * half_width * k_reach / PI).ceil() as usize;
    GridOptions {
        initial_half_width: half_width,
        initial_len: wanted.next_power_of_two().max(defaults.initial_len),
        ..defaults
    }
}

fn finish(family: PacketFamily, grid: LogGrid, samples: &[C64]) -> Result<MinkowskiSmearing> {
    let mut f = MinkowskiSmearing::from_log_amplitude(grid, samples)?;
    match family {
        PacketFamily::LogGaussian => {}
        PacketFamily::Gamma | PacketFamily::Bessel => {
            let defect = (f.quadrature_norm() - 1.0).abs();
            if defect > NORMALIZATION_TOL {
                return Err(Error::SpecialFunction(format!(
                    "closed-form normalization misses by {defect:.3e} on the grid"
                )));
            }
            f.normalize()?;
        }
        PacketFamily::Mixed { .. } => {
            f.normalize()?;
        }
    }
    Ok(f)
}

/// Samples a packet family on an automatically chosen grid.
pub fn packet(family: PacketFamily, params: LogGaussianParams) -> Result<MinkowskiSmearing> {
    let prof = profile(family, params)?;
    let (grid, samples, _) = adapt(prof.center, &prof.amplitude, &options_for(&params))?;
    finish(family, grid, &samples)
}

/// Samples a packet family on a caller-supplied grid.
///
/// Fails with [`Error::GridTooNarrow`] or [`Error::Aliasing`] when the
/// packet or its spectrum does not fit.
pub fn packet_on(family: PacketFamily, params: LogGaussianParams, grid: &LogGrid) -> Result<MinkowskiSmearing> {
    let prof = profile(family, params)?;
    let (samples, _) = sample_checked(grid, &prof.amplitude, GridOptions::default().edge_tol)?;
    finish(family, *grid, &samples)
}

/// `f(ω) = (λ/(πω²))^{1/4} exp(-λ ln²(ω/ω₀)/2) (ω/ω₀)^{-iμ}`.
pub fn f_log_gaussian(params: LogGaussianParams) -> Result<MinkowskiSmearing> {
    packet(PacketFamily::LogGaussian, params)
}

pub fn f_log_gaussian_on(params: LogGaussianParams, grid: &LogGrid) -> Result<MinkowskiSmearing> {
    packet_on(PacketFamily::LogGaussian, params, grid)
}

/// Gamma or Bessel packet with its analytic normalization, confirmed on
/// the grid and then made exact.
pub fn alternate_packets(kind: AlternateKind, params: LogGaussianParams) -> Result<MinkowskiSmearing> {
    packet(kind.into(), params)
}

/// `cos θ f + sin θ conj(f)` for the log-Gaussian `f`, normalized.
pub fn mixed_log_gaussian(params: LogGaussianParams, angle: f64) -> Result<MinkowskiSmearing> {
    packet(PacketFamily::Mixed { angle }, params)
}

/// Analytic transform of the log-Gaussian at one `Ω ≥ 0`:
/// `g_R = (πλ)^{-1/4} (ω₀l)^{iεΩ} e^{-(εΩ-μ)²/(2λ)}`, `g_L` with `Ω → -Ω`.
pub fn closed_form_g_at(params: &LogGaussianParams, kernel: &BogoliubovKernel, big_omega: f64) -> (C64, C64) {
    let LogGaussianParams { lambda, mu, omega0 } = *params;
    let k = kernel.epsilon.sign() * big_omega;
    let pref = (PI * lambda).powf(-0.25);
    let phase = (omega0 * kernel.l).ln();
    let at = |k: f64| C64::from_polar(pref * (-(k - mu) * (k - mu) / (2.0 * lambda)).exp(), k * phase);
    (at(k), at(-k))
}

/// [`closed_form_g_at`] on the conjugate grid of `grid`.
pub fn closed_form_g(
    params: &LogGaussianParams,
    kernel: &BogoliubovKernel,
    grid: &LogGrid,
) -> Result<UnruhSmearingPair> {
    params.validate()?;
    let r = (0..grid.spectral_len()).map(|j| closed_form_g_at(params, kernel, grid.spectral_point(j)).0);
    let l = (0..grid.spectral_len()).map(|j| closed_form_g_at(params, kernel, grid.spectral_point(j)).1);
    UnruhSmearingPair::new(*grid, r.collect(), l.collect())
}

fn rapidity_profile(params: LogGaussianParams) -> Result<Profile> {
    profile(PacketFamily::LogGaussian, params)
}

/// Massive packet Gaussian in rapidity `x = asinh(k/m)`:
/// `sqrt(ω_k) f(k) = (λ/π)^{1/4} exp(-λ(x-x₀)²/2) e^{-iμ(x-x₀)}`, `x₀ = ln ω₀`.
pub fn rapidity_gaussian(params: LogGaussianParams, kernel: &MassiveKernel) -> Result<MomentumSmearing> {
    let prof = rapidity_profile(params)?;
    let (grid, samples, _) = adapt(prof.center, &prof.amplitude, &options_for(&params))?;
    MomentumSmearing::from_rapidity_amplitude(grid, *kernel, &samples)
}

pub fn rapidity_gaussian_on(
    params: LogGaussianParams,
    kernel: &MassiveKernel,
    grid: &LogGrid,
) -> Result<MomentumSmearing> {
    let prof = rapidity_profile(params)?;
    let (samples, _) = sample_checked(grid, &prof.amplitude, GridOptions::default().edge_tol)?;
    MomentumSmearing::from_rapidity_amplitude(*grid, *kernel, &samples)
}
