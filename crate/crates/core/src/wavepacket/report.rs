use serde::Serialize;

use super::grid::half_line_weights;
use super::smearing::{MinkowskiSmearing, MomentumSmearing, UnruhSmearingPair};
use super::transform::{g_from_f, massive_g_from_f};
use super::{BogoliubovKernel, Epsilon};
use crate::error::{Error, Result};

/// A packet counts as single-sector when less than this fraction of its
/// norm sits in the minority sector.
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sector {
    Right,
    Left,
}

/// How sharply a Minkowski packet maps onto one Unruh frequency and sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakingReport {
    /// Location of the maximum of `|g|` in the dominant sector.
    pub peak_omega: f64,
    /// Spread of the signed Unruh frequency (`+Ω` for R, `-Ω` for L).
    pub delta_omega: f64,
    /// Spread of `ln ω` under `|f|^2 dω`.
    pub delta_log_omega: f64,
    /// `Δ(ln ω) ΔΩ`, at least `1/2`.
    pub uncertainty_product: f64,
    pub weight_r: f64,
    pub weight_l: f64,
    pub dominant: Sector,
    /// Minority-sector weight over the total.
    pub leakage: f64,
    pub leakage_threshold: f64,
    /// Single-mode approximation holds: `leakage < leakage_threshold`.
    pub sma_valid: bool,
}

fn parabolic_peak(pair: &UnruhSmearingPair, values: &[f64]) -> f64 {
    let (j, _) = values
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |best, (j, &v)| if v > best.1 { (j, v) } else { best });
    if j == 0 || j + 1 >= values.len() {
        return pair.omega(j);
    }
    // parabola through the logs is exact for a Gaussian peak
    let (a, b, c) = (values[j - 1].ln(), values[j].ln(), values[j + 1].ln());
    if !(a.is_finite() && c.is_finite()) {
        return pair.omega(j);
    }
    let denom = a - 2.0 * b + c;
    let shift = if denom < 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    pair.omega(j) + shift * pair.grid().spectral_step()
}

/// Peaking diagnostics for `pair = g_from_f(f, kernel)`.
pub fn peaking_report_for(
    f: &MinkowskiSmearing,
    kernel: &BogoliubovKernel,
    pair: &UnruhSmearingPair,
    threshold: f64,
) -> Result<PeakingReport> {
    let (pos, neg) = half_line_weights(f.grid(), &f.log_amplitude());
    let weights = match kernel.epsilon {
        Epsilon::Right => (pos, neg),
        Epsilon::Left => (neg, pos),
    };
    report_from(f.log_moments().1, pair, weights, threshold)
}

fn report_from(
    delta_log_omega: f64,
    pair: &UnruhSmearingPair,
    (weight_r, weight_l): (f64, f64),
    threshold: f64,
) -> Result<PeakingReport> {
    if !(threshold > 0.0 && threshold <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "leakage threshold {threshold} outside (0, 1/2]"
        )));
    }
    let total = pair.norm_sq();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::InvalidParameter("packet has zero norm".into()));
    }
    let grid = pair.grid();
    let (mut m1, mut m2) = (0.0, 0.0);
    for j in 0..pair.len() {
        let w = grid.spectral_weight(j);
        let om = pair.omega(j);
        let (r, l) = (pair.g_r()[j].norm_sqr() * w, pair.g_l()[j].norm_sqr() * w);
        m1 += om * (r - l);
        m2 += om * om * (r + l);
    }
    let mean = m1 / total;
    let delta_omega = (m2 / total - mean * mean).max(0.0).sqrt();

    let dominant = if weight_r >= weight_l {
        Sector::Right
    } else {
        Sector::Left
    };
    let dominant_values: Vec<f64> = match dominant {
        Sector::Right => pair.g_r().iter().map(|z| z.norm_sqr()).collect(),
        Sector::Left => pair.g_l().iter().map(|z| z.norm_sqr()).collect(),
    };
    let leakage = weight_r.min(weight_l) / (weight_r + weight_l);
    Ok(PeakingReport {
        peak_omega: parabolic_peak(pair, &dominant_values),
        delta_omega,
        delta_log_omega,
        uncertainty_product: delta_omega * delta_log_omega,
        weight_r,
        weight_l,
        dominant,
        leakage,
        leakage_threshold: threshold,
        sma_valid: leakage < threshold,
    })
}

/// Transforms `f` and reports its peaking and sector leakage.
pub fn peaking_report(f: &MinkowskiSmearing, kernel: &BogoliubovKernel, threshold: f64) -> Result<PeakingReport> {
    let pair = g_from_f(f, kernel)?;
    peaking_report_for(f, kernel, &pair, threshold)
}

/// [`peaking_report`] for a massive packet; the log spread is that of the
/// rapidity.
pub fn massive_peaking_report(f: &MomentumSmearing, threshold: f64) -> Result<PeakingReport> {
    let pair = massive_g_from_f(f)?;
    let weights = half_line_weights(f.grid(), &f.rapidity_amplitude());
    report_from(f.rapidity_moments().1, &pair, weights, threshold)
}
