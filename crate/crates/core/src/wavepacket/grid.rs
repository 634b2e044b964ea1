use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qops::C64;

/// Uniform grid `x_n = x_min + n Δx`, `n < len`, in a logarithmic variable
/// (`ln(ωl)` for massless packets, rapidity for massive ones).
///
/// The grid is treated as periodic by the FFT, so the right end point
/// `x_min + len Δx` is not stored. The conjugate grid holds the
/// non-negative frequencies `Ω_j = j Δk`, `j = 0..=len/2`, with
/// `Δk = 2π / (len Δx)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogGrid {
    x_min: f64,
    step: f64,
    len: usize,
}

impl LogGrid {
    /// `len` points spanning `[x_min, x_max)`. `len` must be an even number ≥ 8.
    pub fn new(x_min: f64, x_max: f64, len: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter(format!("empty grid [{x_min}, {x_max})")));
        }
        if len < 8 || !len.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid length {len} must be even and ≥ 8"
            )));
        }
        Ok(Self {
            x_min,
            step: (x_max - x_min) / len as f64,
            len,
        })
    }

    /// Grid of `len` points centred on `center` with half width `half_width`.
    pub fn centered(center: f64, half_width: f64, len: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, len)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.step * self.len as f64
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn x(&self, n: usize) -> f64 {
        self.x_min + self.step * n as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(|n| self.x(n))
    }

    /// Spacing `Δk` of the conjugate grid.
    pub fn spectral_step(&self) -> f64 {
        2.0 * PI / (self.len as f64 * self.step)
    }

    /// Number of conjugate points `Ω_j`, `j = 0..=len/2`.
    pub fn spectral_len(&self) -> usize {
        self.len / 2 + 1
    }

    pub fn spectral_point(&self, j: usize) -> f64 {
        j as f64 * self.spectral_step()
    }

    /// Largest representable `|k|`.
    pub fn nyquist(&self) -> f64 {
        PI / self.step
    }

    /// Trapezoid weight of conjugate point `j` on `[0, Ω_max]`.
    pub(crate) fn spectral_weight(&self, j: usize) -> f64 {
        let dk = self.spectral_step();
        if j == 0 || j == self.len / 2 {
            0.5 * dk
        } else {
            dk
        }
    }

    /// Signed wavenumber of FFT bin `j`; the Nyquist bin counts as negative.
    pub(crate) fn bin_wavenumber(&self, j: usize) -> f64 {
        let s = if j < self.len / 2 {
            j as i64
        } else {
            j as i64 - self.len as i64
        };
        s as f64 * self.spectral_step()
    }

    fn bin_of(&self, signed: i64) -> usize {
        signed.rem_euclid(self.len as i64) as usize
    }
}

/// Settings for the adaptive grid search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridOptions {
    /// Relative mass allowed in the outer eighth of either end of the
    /// window, in `x` and in `k`.
    pub edge_tol: f64,
    pub initial_half_width: f64,
    pub initial_len: usize,
    pub max_len: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            edge_tol: 1e-10,
            initial_half_width: 8.0,
            initial_len: 256,
            max_len: 1 << 20,
        }
    }
}

/// Full-line transform `Ĝ(k) = (2π)^{-1/2} ∫ F(x) e^{ikx} dx` sampled at
/// the FFT bins of `grid`.
#[derive(Debug, Clone)]
pub(crate) struct Spectrum {
    pub grid: LogGrid,
    /// `Ĝ(k_j)` in FFT bin order.
    pub bins: Vec<C64>,
}

impl Spectrum {
    /// `Ĝ(s Δk)` for a signed bin index `|s| ≤ len/2`.
    pub fn at_signed(&self, signed: i64) -> C64 {
        let k = signed as f64 * self.grid.spectral_step();
        let raw = self.bins[self.grid.bin_of(signed)];
        // bins are stored with the phase of the canonical wavenumber; the
        // +Nyquist bin shares storage with -Nyquist.
        let canonical = self.grid.bin_wavenumber(self.grid.bin_of(signed));
        raw * C64::from_polar(1.0, (k - canonical) * self.grid.x_min)
    }

    /// Fraction of `Σ|Ĝ|^2` in bins with `|k| > 3/4` of Nyquist.
    pub fn edge_fraction(&self) -> f64 {
        let n = self.grid.len;
        let mut edge = 0.0;
        let mut total = 0.0;
        for (j, z) in self.bins.iter().enumerate() {
            let s = if j < n / 2 { j } else { n - j };
            let w = z.norm_sqr();
            total += w;
            if 8 * s > 3 * n {
                edge += w;
            }
        }
        if total > 0.0 {
            edge / total
        } else {
            0.0
        }
    }
}

/// Fraction of `Σ|F|^2` in the outer eighth of either end of the window.
pub(crate) fn edge_fraction(samples: &[C64]) -> f64 {
    let n = samples.len();
    let band = n / 8;
    let total: f64 = samples.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let edge: f64 = samples[..band]
        .iter()
        .chain(samples[n - band..].iter())
        .map(|z| z.norm_sqr())
        .sum();
    edge / total
}

/// Forward transform of log-amplitude samples `F(x_n)`.
pub(crate) fn forward(grid: &LogGrid, samples: &[C64]) -> Spectrum {
    let n = grid.len;
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = grid.step / (2.0 * PI).sqrt();
    for (j, z) in buf.iter_mut().enumerate() {
        let k = grid.bin_wavenumber(j);
        *z *= C64::from_polar(scale, k * grid.x_min);
    }
    Spectrum { grid: *grid, bins: buf }
}

/// Inverse transform `F(x_n) = (2π)^{-1/2} ∫ Ĝ(k) e^{-ikx_n} dk`.
pub(crate) fn inverse(spectrum: &Spectrum) -> Vec<C64> {
    let grid = &spectrum.grid;
    let n = grid.len;
    let scale = grid.spectral_step() / (2.0 * PI).sqrt();
    let mut buf: Vec<C64> = spectrum
        .bins
        .iter()
        .enumerate()
        .map(|(j, z)| z * C64::from_polar(scale, -grid.bin_wavenumber(j) * grid.x_min))
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf
}

/// `(∫_{k>0} |Ĝ|^2 dk, ∫_{k<0} |Ĝ|^2 dk)` for the band-limited transform
/// of the samples, integrated exactly over `|k| < π/h`.
///
/// With `C_d = Σ_m F_{m+d} conj(F_m)` the negative half is
/// `h/2 Σ|F|^2 + 2h/π Σ_{d odd} Im C_d / d`. A trapezoid sum over the
/// conjugate grid would instead carry an `O(Δk^2)` error from the kink at 0.
pub(crate) fn half_line_weights(grid: &LogGrid, samples: &[C64]) -> (f64, f64) {
    let n = samples.len();
    let m = 2 * n;
    let mut buf = samples.to_vec();
    buf.resize(m, C64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for z in buf.iter_mut() {
        *z = C64::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let energy = buf[0].re * scale;
    let odd: f64 = (1..n).step_by(2).map(|d| buf[d].im * scale / d as f64).sum();
    let h = grid.step;
    let negative = 0.5 * h * energy + 2.0 * h / PI * odd;
    (h * energy - negative, negative)
}

/// Samples `amplitude` on a fixed grid and checks both edge conditions.
pub(crate) fn sample_checked<F>(grid: &LogGrid, amplitude: &F, edge_tol: f64) -> Result<(Vec<C64>, Spectrum)>
where
    F: Fn(f64) -> C64,
{
    let samples: Vec<C64> = grid.points().map(amplitude).collect();
    if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParameter(
            "packet amplitude is not finite on the grid".into(),
        ));
    }
    let edge = edge_fraction(&samples);
    if edge > edge_tol {
        return Err(Error::GridTooNarrow(format!(
            "{edge:.3e} of the norm lies near the ends of [{}, {}]",
            grid.x_min(),
            grid.x_max()
        )));
    }
    let spectrum = forward(grid, &samples);
    let spectral_edge = spectrum.edge_fraction();
    if spectral_edge > edge_tol {
        return Err(Error::Aliasing(format!(
            "{spectral_edge:.3e} of the spectrum lies near the Nyquist limit {}",
            grid.nyquist()
        )));
    }
    Ok((samples, spectrum))
}

/// Widens the window until the `x` tails fit, then refines the step until
/// the spectrum fits.
pub(crate) fn adapt<F>(center: f64, amplitude: &F, opts: &GridOptions) -> Result<(LogGrid, Vec<C64>, Spectrum)>
where
    F: Fn(f64) -> C64,
{
    if !(opts.edge_tol > 0.0 && opts.initial_half_width > 0.0) {
        return Err(Error::InvalidParameter("grid options must be positive".into()));
    }
    let mut half_width = opts.initial_half_width;
    let mut len = opts.initial_len.max(8);
    loop {
        let grid = LogGrid::centered(center, half_width, len)?;
        match sample_checked(&grid, amplitude, opts.edge_tol) {
            Ok((samples, spectrum)) => return Ok((grid, samples, spectrum)),
            Err(err @ Error::GridTooNarrow(_)) => {
                if 2 * len > opts.max_len {
                    return Err(err);
                }
                half_width *= 2.0;
                len *= 2;
            }
            Err(err @ Error::Aliasing(_)) => {
                if 2 * len > opts.max_len {
                    return Err(err);
                }
                len *= 2;
            }
            Err(err) => return Err(err),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(x: f64, mu: f64) -> C64 {
        C64::from_polar(PI.powf(-0.25) * (-0.5 * x * x).exp(), -mu * x)
    }

    #[test]
    fn grid_geometry() {
        let g = LogGrid::new(-4.0, 4.0, 64).unwrap();
        assert_eq!(g.step(), 0.125);
        assert_eq!(g.x(64), g.x_max());
        assert_eq!(g.spectral_len(), 33);
        assert!((g.spectral_step() * g.step() * 64.0 - 2.0 * PI).abs() < 1e-14);
        assert_eq!(g.bin_wavenumber(32), -32.0 * g.spectral_step());
        assert!(LogGrid::new(1.0, 1.0, 64).is_err());
        assert!(LogGrid::new(0.0, 1.0, 7).is_err());
    }

    #[test]
    fn forward_matches_gaussian_transform() {
        let grid = LogGrid::new(-10.0, 12.0, 512).unwrap();
        let samples: Vec<C64> = grid.points().map(|x| gaussian(x, 3.0)).collect();
        let spec = forward(&grid, &samples);
        for s in -60i64..=60 {
            let k = s as f64 * grid.spectral_step();
            let want = PI.powf(-0.25) * (-0.5 * (k - 3.0) * (k - 3.0)).exp();
            assert!((spec.at_signed(s) - want).norm() < 1e-12, "k = {k}");
        }
        let back = inverse(&spec);
        for (a, b) in back.iter().zip(&samples) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn half_line_split_is_exact() {
        let grid = LogGrid::new(-10.0, 12.0, 256).unwrap();
        for mu in [0.0, 0.7, 2.0, -1.5] {
            let samples: Vec<C64> = grid.points().map(|x| gaussian(x, mu)).collect();
            let (pos, neg) = half_line_weights(&grid, &samples);
            assert!((neg - 0.5 * libm::erfc(mu)).abs() < 1e-13, "mu = {mu}");
            assert!((pos + neg - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn nyquist_bin_phase() {
        let grid = LogGrid::new(-3.3, 3.1, 16).unwrap();
        let samples: Vec<C64> = grid.points().map(|x| C64::new(x.cos(), 0.2 * x)).collect();
        let spec = forward(&grid, &samples);
        let half = 8i64;
        let direct = |k: f64| -> C64 {
            samples
                .iter()
                .enumerate()
                .map(|(n, f)| f * C64::from_polar(1.0, k * grid.x(n)))
                .sum::<C64>()
                * grid.step()
                / (2.0 * PI).sqrt()
        };
        for s in [-half, half, 3, -5] {
            let k = s as f64 * grid.spectral_step();
            assert!((spec.at_signed(s) - direct(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn adapt_widens_and_refines() {
        let opts = GridOptions {
            initial_half_width: 1.0,
            initial_len: 16,
            ..Default::default()
        };
        let (grid, _, spec) = adapt(0.0, &|x| gaussian(x, 20.0), &opts).unwrap();
        assert!(grid.x_max() >= 6.0);
        assert!(grid.nyquist() > 20.0);
        assert!(spec.edge_fraction() <= 1e-10);

        let tiny = GridOptions { max_len: 32, ..opts };
        assert!(matches!(
            adapt(0.0, &|x| gaussian(x, 0.0), &tiny),
            Err(Error::GridTooNarrow(_))
        ));
        let narrow_spectrum = GridOptions {
            initial_half_width: 8.0,
            initial_len: 16,
            max_len: 64,
            ..Default::default()
        };
        assert!(matches!(
            adapt(0.0, &|x| gaussian(x, 40.0), &narrow_spectrum),
            Err(Error::Aliasing(_))
        ));
    }
}
