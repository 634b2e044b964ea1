//! Bosonic Minkowski-Unruh entangled state in a truncated Rindler Fock basis.
//!
//! The state is `(|0>_M |0>_U + |1>_M a_U^dag |0>_U) / sqrt 2` where the
//! Unruh vacuum is the two-mode squeezed state `Σ_n f(n) |n>_I |n>_II`,
//! `f(n) = tanh^n r / cosh r`, and `a_U^dag = q_L A_L^dag + q_R A_R^dag`.
//! Wedges I and II are truncated at occupation `n_max`; each branch is
//! renormalized separately so Alice's marginal stays `diag(1/2, 1/2)`.
//!
//! Factor labels: `M` (Alice, dim 2), `I` (Rob), `II` (AntiRob).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qops::{DensityOperator, FockKet, TensorProduct, TensorSpace, C64};
use crate::weights::UnruhWeights;

pub const ALICE: &str = "M";
pub const ROB: &str = "I";
pub const ANTIROB: &str = "II";

pub const DEFAULT_N_MAX: usize = 30;
pub const N_MAX_CAP: usize = 120;
/// Largest accepted squeezed-vacuum tail `Σ_{n > n_max} f(n)^2`.
pub const TAIL_BOUND: f64 = 1e-8;
pub const CONVERGENCE_TOL: f64 = 1e-6;
pub const PROBE_STEP: usize = 5;
/// Squeezing derived from an acceleration is clamped here.
pub const R_CAP: f64 = 10.0;

const MAX_SERIES_TERMS: usize = 10_000_000;
const SERIES_TAIL_TOL: f64 = 1e-15;
const SERIES_ABS_TOL: f64 = 1e-18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BosonSqueezing {
    r: f64,
    infinite_acceleration: bool,
}

impl BosonSqueezing {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "squeezing r = {r} must be finite and >= 0"
            )));
        }
        Ok(Self {
            r,
            infinite_acceleration: false,
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Set when `r` was clamped to [`R_CAP`].
    pub fn infinite_acceleration(&self) -> bool {
        self.infinite_acceleration
    }
}

/// `r = artanh(exp(-π Ω_a / a))`, clamped to [`R_CAP`].
pub fn squeezing_from_acceleration(omega_a: f64, a: f64) -> Result<BosonSqueezing> {
    if !(omega_a > 0.0 && a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frequency and acceleration must be positive (got {omega_a}, {a})"
        )));
    }
    let r = (-std::f64::consts::PI * omega_a / a).exp().atanh();
    if r.is_finite() && r <= R_CAP {
        Ok(BosonSqueezing {
            r,
            infinite_acceleration: false,
        })
    } else {
        Ok(BosonSqueezing {
            r: R_CAP,
            infinite_acceleration: true,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BosonTruncation {
    n_max: usize,
}

impl BosonTruncation {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidParameter("n_max must be >= 1".into()));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Discarded squeezed-vacuum weight `tanh^{2(n_max+1)} r`.
    pub fn vacuum_tail(&self, r: f64) -> f64 {
        vacuum_tail(r, self.n_max)
    }
}

impl Default for BosonTruncation {
    fn default() -> Self {
        Self { n_max: DEFAULT_N_MAX }
    }
}

pub fn vacuum_tail(r: f64, n_max: usize) -> f64 {
    r.tanh().powi(2 * (n_max as i32 + 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VacuumCoefficients {
    pub f: Vec<f64>,
}

impl VacuumCoefficients {
    pub fn squared_sum(&self) -> f64 {
        self.f.iter().map(|x| x * x).sum()
    }
}

/// `f[n] = tanh^n r / cosh r` for `n = 0..=n_max`.
pub fn vacuum_coefficients(r: f64, n_max: usize) -> VacuumCoefficients {
    let (t, ch) = (r.tanh(), r.cosh());
    let mut f = Vec::with_capacity(n_max + 1);
    let mut x = 1.0 / ch;
    for _ in 0..=n_max {
        f.push(x);
        x *= t;
    }
    VacuumCoefficients { f }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonScenario {
    pub squeezing: BosonSqueezing,
    pub weights: UnruhWeights,
    pub truncation: BosonTruncation,
}

impl BosonScenario {
    pub fn new(r: f64, weights: UnruhWeights, n_max: usize) -> Result<Self> {
        Ok(Self {
            squeezing: BosonSqueezing::new(r)?,
            weights,
            truncation: BosonTruncation::new(n_max)?,
        })
    }

    pub fn r(&self) -> f64 {
        self.squeezing.r()
    }

    pub fn n_max(&self) -> usize {
        self.truncation.n_max()
    }
}

/// A renormalized truncated ket and the norm it had before rescaling.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedKet {
    pub ket: FockKet,
    pub norm_before: f64,
}

impl TruncatedKet {
    /// `1 - ‖ψ_truncated‖^2`.
    pub fn deficit(&self) -> f64 {
        1.0 - self.norm_before * self.norm_before
    }
}

fn rindler_space(n_max: usize) -> TensorSpace {
    TensorSpace::new([(ROB, n_max + 1), (ANTIROB, n_max + 1)]).expect("valid Rindler space")
}

fn raw_vacuum(r: f64, n_max: usize) -> FockKet {
    let f = vacuum_coefficients(r, n_max);
    let mut ket = FockKet::zeros(rindler_space(n_max));
    for (n, fn_) in f.f.iter().enumerate() {
        ket.add_amplitude(&[n, n], C64::new(*fn_, 0.0)).expect("in range");
    }
    ket
}

fn raw_excitation(r: f64, weights: &UnruhWeights, n_max: usize) -> FockKet {
    let f = vacuum_coefficients(r, n_max);
    let ch = r.cosh();
    let mut ket = FockKet::zeros(rindler_space(n_max));
    for n in 0..n_max {
        let c = f.f[n] * ((n + 1) as f64).sqrt() / ch;
        ket.add_amplitude(&[n, n + 1], weights.q_l() * c).expect("in range");
        ket.add_amplitude(&[n + 1, n], weights.q_r() * c).expect("in range");
    }
    ket
}

fn renormalized(mut ket: FockKet) -> Result<TruncatedKet> {
    let norm_before = ket.normalize()?;
    Ok(TruncatedKet { ket, norm_before })
}

/// Truncated two-mode squeezed Unruh vacuum on `I ⊗ II`.
pub fn unruh_vacuum_ket(r: f64, n_max: usize) -> Result<TruncatedKet> {
    BosonSqueezing::new(r)?;
    BosonTruncation::new(n_max)?;
    renormalized(raw_vacuum(r, n_max))
}

/// `a_U^dag |0>_U` truncated to occupations `<= n_max` on `I ⊗ II`.
pub fn unruh_excitation_ket(scenario: &BosonScenario) -> Result<TruncatedKet> {
    renormalized(raw_excitation(scenario.r(), &scenario.weights, scenario.n_max()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub ket: FockKet,
    pub vacuum_norm: f64,
    pub excitation_norm: f64,
}

fn alice_ket(occupation: usize) -> FockKet {
    FockKet::basis(TensorSpace::single(ALICE, 2).expect("valid"), &[occupation]).expect("valid")
}

fn assemble(vacuum: &FockKet, excitation: &FockKet) -> Result<FockKet> {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = alice_ket(0).tensor(vacuum)?;
    let one = alice_ket(1).tensor(excitation)?;
    let amplitudes = (zero.amplitudes() + one.amplitudes()) * h;
    FockKet::new(zero.space().clone(), amplitudes)
}

/// The joint state on `M ⊗ I ⊗ II` with each branch renormalized.
pub fn joint_state(scenario: &BosonScenario) -> Result<JointState> {
    let vac = unruh_vacuum_ket(scenario.r(), scenario.n_max())?;
    let exc = unruh_excitation_ket(scenario)?;
    Ok(JointState {
        ket: assemble(&vac.ket, &exc.ket)?,
        vacuum_norm: vac.norm_before,
        excitation_norm: exc.norm_before,
    })
}

/// The joint state with the truncated series left unnormalized.
pub fn joint_state_unnormalized(scenario: &BosonScenario) -> Result<FockKet> {
    let vac = raw_vacuum(scenario.r(), scenario.n_max());
    let exc = raw_excitation(scenario.r(), &scenario.weights, scenario.n_max());
    assemble(&vac, &exc)
}

/// Alice-Rob state, wedge II traced out.
pub fn rho_alice_rob(scenario: &BosonScenario) -> Result<DensityOperator> {
    joint_state(scenario)?.ket.reduced(&[ALICE, ROB])
}

/// Alice-AntiRob state, wedge I traced out.
pub fn rho_alice_antirob(scenario: &BosonScenario) -> Result<DensityOperator> {
    joint_state(scenario)?.ket.reduced(&[ALICE, ANTIROB])
}

/// `(N_AR, N_AAR)` at a single fixed truncation.
pub fn negativity_at(r: f64, weights: &UnruhWeights, n_max: usize) -> Result<(f64, f64)> {
    let scenario = BosonScenario::new(r, *weights, n_max)?;
    let joint = joint_state(&scenario)?.ket;
    let ar = joint.reduced(&[ALICE, ROB])?.negativity(ALICE)?.value;
    let aar = joint.reduced(&[ALICE, ANTIROB])?.negativity(ALICE)?.value;
    Ok((ar, aar))
}

/// Exact Alice-Rob negativity for weights with `|q_R| = 1` or `|q_L| = 1`.
///
/// For these weights the partial transpose is block diagonal with 2x2
/// blocks, so the untruncated negativity is a convergent series over
/// blocks. Returns the value and the number of blocks summed.
pub fn block_series_negativity(r: f64, weights: &UnruhWeights) -> Result<(f64, usize)> {
    BosonSqueezing::new(r)?;
    let right = if weights.q_l().norm() <= 1e-12 {
        true
    } else if weights.q_r().norm() <= 1e-12 {
        false
    } else {
        return Err(Error::InvalidParameter(
            "block series needs |q_R| = 1 or |q_L| = 1".into(),
        ));
    };
    let (t, ch) = (r.tanh(), r.cosh());
    let t2 = t * t;
    let f = |n: usize| t.powi(n as i32) / ch;
    let mut total = 0.0;
    for n in 0..MAX_SERIES_TERMS {
        let nf = n as f64;
        // right: block {|0,n+1>, |1,n>}; left: block {|0,n>, |1,n+1>}
        let (a, b, d) = if right {
            let b = if n == 0 {
                0.0
            } else {
                0.5 * nf * f(n - 1).powi(2) / (ch * ch)
            };
            (0.5 * f(n + 1).powi(2), b, 0.5 * f(n).powi(2) * (nf + 1.0).sqrt() / ch)
        } else {
            (
                0.5 * f(n).powi(2),
                0.5 * f(n + 1).powi(2) * (nf + 2.0) / (ch * ch),
                0.5 * f(n).powi(2) * (nf + 1.0).sqrt() * t / ch,
            )
        };
        let lambda_plus = 0.5 * (a + b) + (0.25 * (a - b).powi(2) + d * d).sqrt();
        if lambda_plus == 0.0 {
            return Ok((total, n + 1));
        }
        let lambda_minus = (a * b - d * d) / lambda_plus;
        let term = (-lambda_minus).max(0.0);
        total += term;
        // later blocks shrink at least geometrically with ratio tanh^2 r
        let tail = if t2 < 1.0 {
            lambda_plus * t2 / (1.0 - t2)
        } else {
            f64::INFINITY
        };
        if tail <= (SERIES_TAIL_TOL * total).max(SERIES_ABS_TOL) {
            return Ok((total, n + 1));
        }
    }
    Err(Error::NonConvergence(format!(
        "block series at r = {r} needs more than {MAX_SERIES_TERMS} terms"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub initial: usize,
    pub cap: usize,
    pub tail_bound: f64,
    pub tolerance: f64,
    pub probe_step: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            initial: DEFAULT_N_MAX,
            cap: N_MAX_CAP,
            tail_bound: TAIL_BOUND,
            tolerance: CONVERGENCE_TOL,
            probe_step: PROBE_STEP,
        }
    }
}

impl TruncationPolicy {
    /// Default policy starting from `n_max`; the cap grows to `n_max` if needed.
    pub fn starting_at(n_max: usize) -> Self {
        let d = Self::default();
        Self {
            initial: n_max.max(1),
            cap: d.cap.max(n_max),
            ..d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BosonMethod {
    DenseTruncated,
    BlockSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationAttempt {
    pub n_max: usize,
    pub vacuum_tail: f64,
    /// `max |N(n_max) - N(n_max + probe)|` over both bipartitions, when evaluated.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub method: BosonMethod,
    /// Truncation used for the dense method; number of blocks for the series.
    pub n_max_used: usize,
    pub delta: f64,
    pub vacuum_tail: f64,
    pub converged: bool,
    pub attempts: Vec<TruncationAttempt>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BosonicNegativity {
    pub n_ar: f64,
    pub n_aar: f64,
    pub report: ConvergenceReport,
}

/// Negativities with truncation control; never fails on non-convergence,
/// which is flagged in the report instead.
///
/// Truncations `initial, 2*initial, ...` up to `cap` are tried. A truncation
/// is accepted when the vacuum tail is below the bound and the negativities
/// move by less than the tolerance when `probe_step` more levels are kept.
/// If no truncation qualifies and the weights are extremal, the exact block
/// series is used instead.
pub fn evaluate_bosonic(r: f64, weights: &UnruhWeights, policy: &TruncationPolicy) -> Result<BosonicNegativity> {
    BosonSqueezing::new(r)?;
    if policy.initial == 0 || policy.cap < policy.initial {
        return Err(Error::InvalidParameter(format!("bad truncation policy {policy:?}")));
    }
    let mut attempts = Vec::new();
    let mut last: Option<(usize, f64, f64, f64)> = None;
    let mut n = policy.initial;
    loop {
        let tail = vacuum_tail(r, n);
        let mut attempt = TruncationAttempt {
            n_max: n,
            vacuum_tail: tail,
            delta: None,
        };
        if tail < policy.tail_bound {
            let (ar, aar) = negativity_at(r, weights, n)?;
            let (ar2, aar2) = negativity_at(r, weights, n + policy.probe_step)?;
            let delta = (ar - ar2).abs().max((aar - aar2).abs());
            attempt.delta = Some(delta);
            attempts.push(attempt);
            last = Some((n, ar, aar, delta));
            if delta < policy.tolerance {
                return Ok(BosonicNegativity {
                    n_ar: ar,
                    n_aar: aar,
                    report: ConvergenceReport {
                        method: BosonMethod::DenseTruncated,
                        n_max_used: n,
                        delta,
                        vacuum_tail: tail,
                        converged: true,
                        attempts,
                    },
                });
            }
        } else {
            attempts.push(attempt);
        }
        if n >= policy.cap {
            break;
        }
        n = (2 * n).min(policy.cap);
    }

    if weights.is_extremal(1e-12) {
        if let Ok((n_ar, terms)) = block_series_negativity(r, weights) {
            let (n_aar, _) = block_series_negativity(r, &weights.swapped())?;
            return Ok(BosonicNegativity {
                n_ar,
                n_aar,
                report: ConvergenceReport {
                    method: BosonMethod::BlockSeries,
                    n_max_used: terms,
                    delta: 0.0,
                    vacuum_tail: 0.0,
                    converged: true,
                    attempts,
                },
            });
        }
    }

    let (n_used, ar, aar, delta) = match last {
        Some(v) => v,
        None => {
            let n = policy.cap;
            let (ar, aar) = negativity_at(r, weights, n)?;
            let (ar2, aar2) = negativity_at(r, weights, n + policy.probe_step)?;
            (n, ar, aar, (ar - ar2).abs().max((aar - aar2).abs()))
        }
    };
    Ok(BosonicNegativity {
        n_ar: ar,
        n_aar: aar,
        report: ConvergenceReport {
            method: BosonMethod::DenseTruncated,
            n_max_used: n_used,
            delta,
            vacuum_tail: vacuum_tail(r, n_used),
            converged: false,
            attempts,
        },
    })
}

/// Alice-Rob and Alice-AntiRob negativities with convergence control,
/// starting from the scenario's truncation.
pub fn bosonic_negativity_pair(scenario: &BosonScenario) -> Result<BosonicNegativity> {
    let policy = TruncationPolicy::starting_at(scenario.n_max());
    let result = evaluate_bosonic(scenario.r(), &scenario.weights, &policy)?;
    if !result.report.converged {
        return Err(Error::NonConvergence(format!(
            "r = {}: no truncation up to n_max = {} met tail < {:e} and |ΔN| < {:e} (last ΔN = {:e})",
            scenario.r(),
            policy.cap,
            policy.tail_bound,
            policy.tolerance,
            result.report.delta
        )));
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BosonCurveRow {
    pub q_abs: f64,
    pub r: f64,
    pub n_ar: f64,
    pub n_aar: f64,
    pub n_max_used: usize,
    pub converged: bool,
}

/// One row per grid value of `r`, with real weights `q_R = q_abs`.
/// Rows are evaluated in parallel and returned in grid order.
pub fn bosonic_curve(q_abs: f64, r_grid: &[f64], n_max: usize) -> Result<Vec<BosonCurveRow>> {
    let weights = UnruhWeights::from_magnitude(q_abs)?;
    BosonTruncation::new(n_max)?;
    if let Some(bad) = r_grid.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Error::InvalidParameter(format!("grid value r = {bad} must be >= 0")));
    }
    let policy = TruncationPolicy::starting_at(n_max);
    r_grid
        .par_iter()
        .map(|&r| {
            let res = evaluate_bosonic(r, &weights, &policy)?;
            Ok(BosonCurveRow {
                q_abs,
                r,
                n_ar: res.n_ar,
                n_aar: res.n_aar,
                n_max_used: res.report.n_max_used,
                converged: res.report.converged,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn squeezing_limits() {
        assert!(squeezing_from_acceleration(1.0, 1e-3).unwrap().r() < 1e-300);
        let one = squeezing_from_acceleration(2.0, 2.0).unwrap();
        assert!((one.r() - 0.043_240_848).abs() < 1e-9);
        assert!((one.r().tanh() - (-PI).exp()).abs() < 1e-12);
        let inf = squeezing_from_acceleration(1.0, 1e12).unwrap();
        assert!(inf.infinite_acceleration());
        assert_eq!(inf.r(), R_CAP);
        assert!(squeezing_from_acceleration(0.0, 1.0).is_err());
        assert!(squeezing_from_acceleration(1.0, -1.0).is_err());
        assert!(BosonSqueezing::new(-0.1).is_err());
    }

    #[test]
    fn coefficients() {
        let f0 = vacuum_coefficients(0.0, 5);
        assert_eq!(f0.f, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let f1 = vacuum_coefficients(1.0, 4);
        assert!((f1.f[2] - 0.375_888_107).abs() < 1e-9);
        assert!(f1.f.windows(2).all(|w| w[1] < w[0]));
        // Σ f^2 = 1 - tanh^{2(n_max+1)}
        let big = vacuum_coefficients(0.7, 200);
        assert!((big.squared_sum() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_ket() {
        let v0 = unruh_vacuum_ket(0.0, 3).unwrap();
        assert_eq!(v0.ket.amplitude(&[0, 0]).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(v0.norm_before, 1.0);
        let v = unruh_vacuum_ket(0.5, 20).unwrap();
        assert!(v.deficit() < 1e-6);
        assert!((v.deficit() - vacuum_tail(0.5, 20)).abs() < 1e-15);
        // Schmidt coefficients f[n]/‖f‖
        let f = vacuum_coefficients(0.5, 20);
        for n in 0..=20 {
            let a = v.ket.amplitude(&[n, n]).unwrap();
            assert!((a.re - f.f[n] / v.norm_before).abs() < 1e-15);
        }
    }

    #[test]
    fn excitation_ket() {
        let s = BosonScenario::new(0.0, UnruhWeights::right(), 4).unwrap();
        let e = unruh_excitation_ket(&s).unwrap();
        assert_eq!(e.ket.amplitude(&[1, 0]).unwrap(), C64::new(1.0, 0.0));

        let w = UnruhWeights::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let s = BosonScenario::new(0.0, w, 4).unwrap();
        let e = unruh_excitation_ket(&s).unwrap();
        assert_eq!(e.ket.amplitude(&[1, 0]).unwrap(), w.q_r());
        assert_eq!(e.ket.amplitude(&[0, 1]).unwrap(), w.q_l());

        let s = BosonScenario::new(0.5, UnruhWeights::from_magnitude(0.7).unwrap(), 40).unwrap();
        let e = unruh_excitation_ket(&s).unwrap();
        assert!(e.deficit() < 1e-8);
    }

    #[test]
    fn joint_state_coefficients() {
        let w = UnruhWeights::from_magnitude(0.9).unwrap();
        let s = BosonScenario::new(0.4, w, 10).unwrap();
        let raw = joint_state_unnormalized(&s).unwrap();
        let f = vacuum_coefficients(0.4, 10);
        let ch = 0.4f64.cosh();
        for n in 0..10 {
            let expect = w.q_r() * f.f[n] * ((n + 1) as f64).sqrt() / (std::f64::consts::SQRT_2 * ch);
            let got = raw.amplitude(&[1, n + 1, n]).unwrap();
            assert!((got - expect).norm() < 1e-15);
        }
        let joint = joint_state(&s).unwrap();
        assert!((joint.ket.norm() - 1.0).abs() < 1e-14);

        let bell = joint_state(&BosonScenario::new(0.0, UnruhWeights::right(), 3).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((bell.ket.amplitude(&[0, 0, 0]).unwrap().re - h).abs() < 1e-15);
        assert!((bell.ket.amplitude(&[1, 1, 0]).unwrap().re - h).abs() < 1e-15);
    }

    #[test]
    fn block_series_matches_dense_truncation() {
        for r in [0.1, 0.5, 0.9] {
            let (series, _) = block_series_negativity(r, &UnruhWeights::right()).unwrap();
            let (dense, anti) = negativity_at(r, &UnruhWeights::right(), 60).unwrap();
            assert!((series - dense).abs() < 1e-9, "r={r}: {series} vs {dense}");
            assert!(anti.abs() < 1e-12);
            let (left, _) = block_series_negativity(r, &UnruhWeights::right().swapped()).unwrap();
            assert_eq!(left, 0.0);
        }
        assert!(block_series_negativity(0.3, &UnruhWeights::from_magnitude(0.8).unwrap()).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let w = UnruhWeights::from_magnitude(0.8).unwrap();
        let s = BosonScenario::new(2.5, w, 30).unwrap();
        assert!(matches!(bosonic_negativity_pair(&s), Err(Error::NonConvergence(_))));
        let policy = TruncationPolicy {
            cap: 30,
            ..TruncationPolicy::default()
        };
        let res = evaluate_bosonic(2.5, &w, &policy).unwrap();
        assert!(!res.report.converged);
    }

    #[test]
    fn curve_rejects_negative_r() {
        assert!(bosonic_curve(1.0, &[0.0, -0.1], 30).is_err());
        assert!(bosonic_curve(1.1, &[0.0], 30).is_err());
    }
}
