use super::grid::{forward, inverse, Spectrum};
use super::smearing::{MinkowskiSmearing, MomentumSmearing, UnruhSmearingPair};
use super::{BogoliubovKernel, MassiveKernel};
use crate::error::{Error, Result};
use crate::qops::C64;

/// Spectral mass allowed near the Nyquist limit before a transform is
/// declared aliased.
const ALIASING_TOL: f64 = 1e-10;

fn checked_spectrum(grid: &super::LogGrid, amplitude: &[C64]) -> Result<Spectrum> {
    let spectrum = forward(grid, amplitude);
    let edge = spectrum.edge_fraction();
    if edge > ALIASING_TOL {
        return Err(Error::Aliasing(format!(
            "{edge:.3e} of the spectral mass lies near the Nyquist limit {}",
            grid.nyquist()
        )));
    }
    Ok(spectrum)
}

/// Reads `(g_R, g_L)` with `g_R(Ω) = Ĝ(sign Ω)` and `g_L(Ω) = Ĝ(-sign Ω)`,
/// after undoing a shift `x → x + shift` of the log variable.
fn split(spectrum: &Spectrum, sign: f64, shift: f64) -> UnruhSmearingPair {
    let grid = spectrum.grid;
    let half = (grid.len() / 2) as i64;
    let dk = grid.spectral_step();
    let read = |s: i64| spectrum.at_signed(s) * C64::from_polar(1.0, s as f64 * dk * shift);
    let (mut g_r, mut g_l) = (
        Vec::with_capacity(half as usize + 1),
        Vec::with_capacity(half as usize + 1),
    );
    for j in 0..=half {
        let s = if sign > 0.0 { j } else { -j };
        g_r.push(read(s));
        g_l.push(read(-s));
    }
    UnruhSmearingPair::new(grid, g_r, g_l).expect("lengths match the grid")
}

/// Inverse of [`split`]. The `Ω = 0` entries of the two sectors are
/// averaged; at the Nyquist bin only the negative-`k` sector is kept.
fn merge(pair: &UnruhSmearingPair, sign: f64, shift: f64) -> Spectrum {
    let grid = *pair.grid();
    let n = grid.len();
    let half = n / 2;
    let dk = grid.spectral_step();
    let (pos, neg) = if sign > 0.0 {
        (pair.g_r(), pair.g_l())
    } else {
        (pair.g_l(), pair.g_r())
    };
    let bins = (0..n)
        .map(|j| {
            let (s, value) = if j == 0 {
                (0i64, 0.5 * (pos[0] + neg[0]))
            } else if j < half {
                (j as i64, pos[j])
            } else {
                let m = n - j;
                (-(m as i64), neg[m])
            };
            value * C64::from_polar(1.0, -(s as f64) * dk * shift)
        })
        .collect();
    Spectrum { grid, bins }
}

/// `g_R(Ω) = ∫ α^R_{ωΩ} f(ω) dω` and `g_L` on the conjugate grid of `f`.
///
/// Fails with [`Error::Aliasing`] when the spectrum reaches the Nyquist
/// limit of the grid.
pub fn g_from_f(f: &MinkowskiSmearing, kernel: &BogoliubovKernel) -> Result<UnruhSmearingPair> {
    let spectrum = checked_spectrum(f.grid(), &f.log_amplitude())?;
    Ok(split(&spectrum, kernel.epsilon.sign(), kernel.l.ln()))
}

/// `f(ω) = ∫ (conj α^R_{ωΩ} g_R(Ω) + conj α^L_{ωΩ} g_L(Ω)) dΩ`, sampled on
/// the grid the pair is conjugate to.
pub fn f_from_g(pair: &UnruhSmearingPair, kernel: &BogoliubovKernel) -> Result<MinkowskiSmearing> {
    if !pair.norm_sq().is_finite() {
        return Err(Error::InvalidParameter("smearing pair has no finite norm".into()));
    }
    let amplitude = inverse(&merge(pair, kernel.epsilon.sign(), kernel.l.ln()));
    MinkowskiSmearing::from_log_amplitude(*pair.grid(), &amplitude)
}

/// Massive analogue of [`g_from_f`], with `x` the rapidity.
pub fn massive_g_from_f(f: &MomentumSmearing) -> Result<UnruhSmearingPair> {
    let spectrum = checked_spectrum(f.grid(), &f.rapidity_amplitude())?;
    Ok(split(&spectrum, 1.0, 0.0))
}

/// Massive analogue of [`f_from_g`].
pub fn massive_f_from_g(pair: &UnruhSmearingPair, kernel: &MassiveKernel) -> Result<MomentumSmearing> {
    if !pair.norm_sq().is_finite() {
        return Err(Error::InvalidParameter("smearing pair has no finite norm".into()));
    }
    let amplitude = inverse(&merge(pair, 1.0, 0.0));
    MomentumSmearing::from_rapidity_amplitude(*pair.grid(), *kernel, &amplitude)
}

/// `|∫|f|^2 dω - ∫(|g_R|^2 + |g_L|^2) dΩ|`.
pub fn parseval_residual(f: &MinkowskiSmearing, pair: &UnruhSmearingPair) -> f64 {
    (f.norm_sq() - pair.norm_sq()).abs()
}

fn relative_l2(a: &[C64], b: &[C64]) -> f64 {
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let base: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    (diff / base).sqrt()
}

/// Relative `L^2(dω)` error of `f → g → f`.
pub fn round_trip_error(f: &MinkowskiSmearing, kernel: &BogoliubovKernel) -> Result<f64> {
    let back = f_from_g(&g_from_f(f, kernel)?, kernel)?;
    Ok(relative_l2(&f.log_amplitude(), &back.log_amplitude()))
}

/// Relative `L^2(dk)` error of `f → g → f` for a massive packet.
pub fn massive_round_trip_error(f: &MomentumSmearing) -> Result<f64> {
    let back = massive_f_from_g(&massive_g_from_f(f)?, f.kernel())?;
    Ok(relative_l2(&f.rapidity_amplitude(), &back.rapidity_amplitude()))
}
