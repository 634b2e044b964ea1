//! Minkowski/Unruh smearing functions.
//!
//! A Minkowski packet `∫ f(ω) a_ω^dag dω` equals an Unruh packet
//! `∫ (g_R(Ω) A_R^dag + g_L(Ω) A_L^dag) dΩ` with
//!
//! ```text
//! g_R(Ω) = ∫ α^R_{ωΩ} f(ω) dω,   α^R_{ωΩ} = (2πω)^{-1/2} (ωl)^{+iεΩ}
//! g_L(Ω) = ∫ α^L_{ωΩ} f(ω) dω,   α^L_{ωΩ} = (2πω)^{-1/2} (ωl)^{-iεΩ}
//! ```
//!
//! In `x = ln(ωl)` and with `F(x) = sqrt(ω) f(ω)` this is a unitary Fourier
//! transform `Ĝ(k) = (2π)^{-1/2} ∫ F(x) e^{ikx} dx` with `g_R(Ω) = Ĝ(εΩ)`,
//! `g_L(Ω) = Ĝ(-εΩ)`. All transforms here run on a uniform `x` grid with
//! an FFT. The massive field is identical with `x` the rapidity
//! `ln((ω_k + k)/m)`, `F = sqrt(ω_k) f(k)` and no `ε`.
//!
//! Units: `l = 1` unless a kernel says otherwise, `m = 1` for the massive
//! kernel.

mod grid;
mod packets;
mod report;
mod smearing;
mod transform;

pub use grid::{GridOptions, LogGrid};
pub use packets::{
    alternate_packets, closed_form_g, closed_form_g_at, f_log_gaussian, f_log_gaussian_on, mixed_log_gaussian, packet,
    packet_on, rapidity_gaussian, rapidity_gaussian_on, AlternateKind, LogGaussianParams, PacketFamily,
};
pub use report::{
    massive_peaking_report, peaking_report, peaking_report_for, PeakingReport, Sector, DEFAULT_LEAKAGE_THRESHOLD,
};
pub use smearing::{MinkowskiSmearing, MomentumSmearing, UnruhSmearingPair};
pub use transform::{
    f_from_g, g_from_f, massive_f_from_g, massive_g_from_f, massive_round_trip_error, parseval_residual,
    round_trip_error,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qops::C64;

/// Direction of the massless Minkowski modes: `+1` right movers, `-1` left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Epsilon {
    Right,
    Left,
}

impl Epsilon {
    pub fn sign(self) -> f64 {
        match self {
            Epsilon::Right => 1.0,
            Epsilon::Left => -1.0,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Epsilon::Right),
            -1 => Ok(Epsilon::Left),
            _ => Err(Error::InvalidParameter(format!("epsilon must be ±1, got {sign}"))),
        }
    }
}

/// Minkowski-to-Unruh transform coefficients for the massless field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovKernel {
    pub epsilon: Epsilon,
    /// Overall length scale `l`.
    pub l: f64,
}

impl BogoliubovKernel {
    pub fn new(epsilon: Epsilon, l: f64) -> Result<Self> {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidParameter(format!("length scale l = {l} must be > 0")));
        }
        Ok(Self { epsilon, l })
    }

    pub fn with_epsilon(epsilon: Epsilon) -> Self {
        Self { epsilon, l: 1.0 }
    }
}

impl Default for BogoliubovKernel {
    fn default() -> Self {
        Self::with_epsilon(Epsilon::Right)
    }
}

fn check_frequencies(omega: f64, big_omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega.is_finite() && big_omega > 0.0 && big_omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need ω > 0 and Ω > 0 (got ω = {omega}, Ω = {big_omega})"
        )));
    }
    Ok(())
}

/// `α^R_{ωΩ} = (2πω)^{-1/2} (ωl)^{iεΩ}`.
pub fn alpha_r(omega: f64, big_omega: f64, kernel: &BogoliubovKernel) -> Result<C64> {
    check_frequencies(omega, big_omega)?;
    let phase = kernel.epsilon.sign() * big_omega * (omega * kernel.l).ln();
    Ok(C64::from_polar((2.0 * std::f64::consts::PI * omega).powf(-0.5), phase))
}

/// `α^L_{ωΩ} = (2πω)^{-1/2} (ωl)^{-iεΩ}`.
pub fn alpha_l(omega: f64, big_omega: f64, kernel: &BogoliubovKernel) -> Result<C64> {
    check_frequencies(omega, big_omega)?;
    let phase = -kernel.epsilon.sign() * big_omega * (omega * kernel.l).ln();
    Ok(C64::from_polar((2.0 * std::f64::consts::PI * omega).powf(-0.5), phase))
}

/// Minkowski-to-Unruh coefficients for a field of mass `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassiveKernel {
    pub mass: f64,
}

impl MassiveKernel {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass m = {mass} must be > 0")));
        }
        Ok(Self { mass })
    }

    pub fn omega(&self, k: f64) -> f64 {
        self.mass.hypot(k)
    }

    /// Momentum at rapidity `x`: `k = m sinh x`.
    pub fn momentum(&self, rapidity: f64) -> f64 {
        self.mass * rapidity.sinh()
    }

    /// Rapidity `ln((ω_k + k)/m)`.
    pub fn rapidity(&self, k: f64) -> f64 {
        (k / self.mass).asinh()
    }
}

impl Default for MassiveKernel {
    fn default() -> Self {
        Self { mass: 1.0 }
    }
}

/// `(α^R_{kΩ}, α^L_{kΩ}) = (2πω_k)^{-1/2} ((ω_k + k)/m)^{±iΩ}`.
pub fn massive_alpha(k: f64, big_omega: f64, kernel: &MassiveKernel) -> Result<(C64, C64)> {
    if !(big_omega > 0.0 && big_omega.is_finite() && k.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need Ω > 0 and finite k (got {big_omega}, {k})"
        )));
    }
    let modulus = (2.0 * std::f64::consts::PI * kernel.omega(k)).powf(-0.5);
    let phase = big_omega * kernel.rapidity(k);
    Ok((C64::from_polar(modulus, phase), C64::from_polar(modulus, -phase)))
}
