//! Grassmann-scalar Unruh states in the exact 16-dimensional Fock space.
//!
//! One Rindler frequency carries four fermionic slots, ordered
//! `(I+, II-, I-, II+)` (particle/antiparticle in each wedge), so a basis
//! ket `|n n' n'' n'''>` has index `8n + 4n' + 2n'' + n'''`. States are
//! written directly from their coefficient tables, which fixes the sign
//! conventions of the anticommuting operators once and for all:
//!
//! ```text
//! |0>   = C²|0000> - SC|0011> + SC|1100> - S²|1111>
//! |1>_U = q_R (C|1000> - S|1011>) + q_L (S|1101> + C|0001>)
//! ```
//!
//! with `C = cos r`, `S = sin r`, `tan r = exp(-π Ω_a / a)`.

use nalgebra::{DMatrix, Matrix3};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qops::{
    hermitian_eigenvalues, negativity_of_spectrum, DensityOperator, FockKet, TensorProduct, TensorSpace, C64,
};
use crate::weights::UnruhWeights;

pub const ALICE: &str = "M";
pub const I_PARTICLE: &str = "I+";
pub const II_ANTIPARTICLE: &str = "II-";
pub const I_ANTIPARTICLE: &str = "I-";
pub const II_PARTICLE: &str = "II+";

/// Slot labels in basis order.
pub const SLOTS: [&str; 4] = [I_PARTICLE, II_ANTIPARTICLE, I_ANTIPARTICLE, II_PARTICLE];

/// Largest tolerated gap between block and full-space negativities.
pub const METHOD_TOL: f64 = 1e-10;

const R_MAX: f64 = std::f64::consts::FRAC_PI_4;
const R_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermionSqueezing {
    r: f64,
}

impl FermionSqueezing {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..=R_MAX + R_SLACK).contains(&r) {
            return Err(Error::InvalidParameter(format!("fermionic r = {r} outside [0, π/4]")));
        }
        Ok(Self { r: r.min(R_MAX) })
    }

    /// `tan r = exp(-π E)` for a dimensionless Rindler energy `E`.
    pub fn from_rindler_energy(energy: f64) -> Result<Self> {
        if energy.is_nan() || energy < 0.0 {
            return Err(Error::InvalidParameter(format!("Rindler energy {energy} must be >= 0")));
        }
        Self::new((-std::f64::consts::PI * energy).exp().atan())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn cos(&self) -> f64 {
        self.r.cos()
    }

    pub fn sin(&self) -> f64 {
        self.r.sin()
    }
}

/// `r = arctan(exp(-π Ω_a / a))`; tends to π/4 as `a → ∞`.
pub fn fermion_squeezing_from_acceleration(omega_a: f64, a: f64) -> Result<FermionSqueezing> {
    if !(omega_a > 0.0 && a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "frequency and acceleration must be positive (got {omega_a}, {a})"
        )));
    }
    FermionSqueezing::from_rindler_energy(omega_a / a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionScenario {
    pub squeezing: FermionSqueezing,
    pub weights: UnruhWeights,
}

impl FermionScenario {
    pub fn new(r: f64, weights: UnruhWeights) -> Result<Self> {
        Ok(Self {
            squeezing: FermionSqueezing::new(r)?,
            weights,
        })
    }

    fn cs(&self) -> (f64, f64) {
        (self.squeezing.cos(), self.squeezing.sin())
    }
}

/// The 16-dimensional Grassmann space, one qubit per slot.
pub fn grassmann_space() -> TensorSpace {
    TensorSpace::new(SLOTS.map(|s| (s, 2))).expect("valid slot space")
}

fn ket_from_terms(terms: &[([usize; 4], C64)]) -> FockKet {
    let mut ket = FockKet::zeros(grassmann_space());
    for (digits, amp) in terms {
        ket.add_amplitude(digits, *amp).expect("slot digits in range");
    }
    ket
}

pub fn grassmann_vacuum(r: f64) -> Result<FockKet> {
    let s = FermionSqueezing::new(r)?;
    let (c, s) = (s.cos(), s.sin());
    let re = |x: f64| C64::new(x, 0.0);
    Ok(ket_from_terms(&[
        ([0, 0, 0, 0], re(c * c)),
        ([0, 0, 1, 1], re(-s * c)),
        ([1, 1, 0, 0], re(s * c)),
        ([1, 1, 1, 1], re(-s * s)),
    ]))
}

pub fn grassmann_one_particle(r: f64, weights: &UnruhWeights) -> Result<FockKet> {
    let s = FermionSqueezing::new(r)?;
    let (c, s) = (s.cos(), s.sin());
    let (qr, ql) = (weights.q_r(), weights.q_l());
    Ok(ket_from_terms(&[
        ([1, 0, 0, 0], qr * c),
        ([1, 0, 1, 1], -qr * s),
        ([1, 1, 0, 1], ql * s),
        ([0, 0, 0, 1], ql * c),
    ]))
}

/// `(|0>_M |0> + |1>_M |1>_U) / sqrt 2` on `M ⊗ (I+, II-, I-, II+)`.
pub fn fermion_joint_state(scenario: &FermionScenario) -> Result<FockKet> {
    let r = scenario.squeezing.r();
    let alice = TensorSpace::single(ALICE, 2)?;
    let zero = FockKet::basis(alice.clone(), &[0])?.tensor(&grassmann_vacuum(r)?)?;
    let one = FockKet::basis(alice, &[1])?.tensor(&grassmann_one_particle(r, &scenario.weights)?)?;
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    FockKet::new(zero.space().clone(), (zero.amplitudes() + one.amplitudes()) * h)
}

/// Alice-Rob state on `M ⊗ I+ ⊗ I-` (wedge II traced out).
pub fn rho_alice_rob_fermi(scenario: &FermionScenario) -> Result<DensityOperator> {
    fermion_joint_state(scenario)?.reduced(&[ALICE, I_PARTICLE, I_ANTIPARTICLE])
}

/// Alice-AntiRob state on `M ⊗ II- ⊗ II+` (wedge I traced out).
pub fn rho_alice_antirob_fermi(scenario: &FermionScenario) -> Result<DensityOperator> {
    fermion_joint_state(scenario)?.reduced(&[ALICE, II_ANTIPARTICLE, II_PARTICLE])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bipartition {
    /// Alice with wedge-I modes.
    AliceRob,
    /// Alice with wedge-II modes.
    AliceAntiRob,
}

/// One 3x3 block of a partial transpose (w.r.t. Alice) together with the
/// `|ijk>` digits of the states spanning it.
#[derive(Debug, Clone, PartialEq)]
pub struct PtBlock {
    pub basis: [[usize; 3]; 3],
    pub matrix: Matrix3<C64>,
}

impl PtBlock {
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&DMatrix::from_iterator(3, 3, self.matrix.iter().copied()))
    }
}

/// The two partial-transpose blocks that can carry negative eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct PtBlocks {
    pub bipartition: Bipartition,
    pub blocks: [PtBlock; 2],
}

impl PtBlocks {
    pub fn negativity(&self) -> Result<f64> {
        let mut spectrum = self.blocks[0].eigenvalues()?;
        spectrum.extend(self.blocks[1].eigenvalues()?);
        Ok(negativity_of_spectrum(&spectrum))
    }
}

/// Builds the two 3x3 blocks directly from `C`, `S`, `q_R`, `q_L`.
pub fn pt_blocks(scenario: &FermionScenario, bipartition: Bipartition) -> PtBlocks {
    let (c, s) = scenario.cs();
    let (qr, ql) = (scenario.weights.q_r(), scenario.weights.q_l());
    let re = |x: f64| C64::new(x, 0.0);
    let zero = re(0.0);
    let half = |m: Matrix3<C64>| m.map(|z| z * 0.5);
    let blocks = match bipartition {
        Bipartition::AliceRob => [
            PtBlock {
                basis: [[1, 0, 0], [0, 1, 0], [1, 1, 1]],
                matrix: half(Matrix3::new(
                    re(c * c * ql.norm_sqr()),
                    qr.conj() * c.powi(3),
                    -qr.conj() * ql * s * c,
                    qr * c.powi(3),
                    re(s * s * c * c),
                    -ql * s.powi(3),
                    -qr * ql.conj() * s * c,
                    -ql.conj() * s.powi(3),
                    re(qr.norm_sqr() * s * s),
                )),
            },
            PtBlock {
                basis: [[0, 0, 0], [1, 0, 1], [0, 1, 1]],
                matrix: half(Matrix3::new(
                    re(c.powi(4)),
                    -ql * c * c * s,
                    zero,
                    -ql.conj() * c * c * s,
                    zero,
                    qr.conj() * s * s * c,
                    zero,
                    qr * s * s * c,
                    re(s.powi(4)),
                )),
            },
        ],
        Bipartition::AliceAntiRob => [
            PtBlock {
                basis: [[1, 1, 1], [0, 0, 1], [1, 0, 0]],
                matrix: half(Matrix3::new(
                    re(s * s * ql.norm_sqr()),
                    qr.conj() * s.powi(3),
                    qr.conj() * ql * s * c,
                    qr * s.powi(3),
                    re(c * c * s * s),
                    ql * c.powi(3),
                    qr * ql.conj() * s * c,
                    ql.conj() * c.powi(3),
                    re(qr.norm_sqr() * c * c),
                )),
            },
            PtBlock {
                basis: [[0, 1, 1], [1, 1, 0], [0, 0, 0]],
                matrix: half(Matrix3::new(
                    re(s.powi(4)),
                    ql * s * s * c,
                    zero,
                    ql.conj() * s * s * c,
                    zero,
                    qr.conj() * c * c * s,
                    zero,
                    qr * c * c * s,
                    re(c.powi(4)),
                )),
            },
        ],
    };
    PtBlocks { bipartition, blocks }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FermionMethod {
    /// Negative eigenvalues of the two 3x3 blocks per bipartition.
    Blocks,
    /// Eigensolve of the full 8x8 partial transpose.
    Full,
}

fn full_negativity(scenario: &FermionScenario, bipartition: Bipartition) -> Result<f64> {
    let rho = match bipartition {
        Bipartition::AliceRob => rho_alice_rob_fermi(scenario)?,
        Bipartition::AliceAntiRob => rho_alice_antirob_fermi(scenario)?,
    };
    Ok(rho.negativity(ALICE)?.value)
}

/// `(N_AR, N_AAR)` by the chosen method.
pub fn fermionic_negativity_pair(scenario: &FermionScenario, method: FermionMethod) -> Result<(f64, f64)> {
    match method {
        FermionMethod::Blocks => Ok((
            pt_blocks(scenario, Bipartition::AliceRob).negativity()?,
            pt_blocks(scenario, Bipartition::AliceAntiRob).negativity()?,
        )),
        FermionMethod::Full => Ok((
            full_negativity(scenario, Bipartition::AliceRob)?,
            full_negativity(scenario, Bipartition::AliceAntiRob)?,
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermionicNegativity {
    pub n_ar: f64,
    pub n_aar: f64,
    /// Largest gap between the block and full-space values.
    pub residual: f64,
}

/// Block negativities cross-checked against the full partial transpose.
pub fn fermionic_negativity_checked(scenario: &FermionScenario) -> Result<FermionicNegativity> {
    let (ar, aar) = fermionic_negativity_pair(scenario, FermionMethod::Blocks)?;
    let (ar_full, aar_full) = fermionic_negativity_pair(scenario, FermionMethod::Full)?;
    let residual = (ar - ar_full).abs().max((aar - aar_full).abs());
    if residual > METHOD_TOL {
        return Err(Error::MethodDisagreement {
            residual,
            tolerance: METHOD_TOL,
        });
    }
    Ok(FermionicNegativity {
        n_ar: ar,
        n_aar: aar,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermionCurveRow {
    pub q_abs: f64,
    pub r: f64,
    pub n_ar: f64,
    pub n_aar: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FermionCurve {
    pub rows: Vec<FermionCurveRow>,
    /// `|q_R| < 1/sqrt 2`: the two bipartitions trade roles with the
    /// `|q_R| > |q_L|` curve of the swapped weights.
    pub swap_equivalent: bool,
}

pub fn fermionic_curve(q_abs: f64, r_grid: &[f64]) -> Result<FermionCurve> {
    let weights = UnruhWeights::from_magnitude(q_abs)?;
    let rows = r_grid
        .par_iter()
        .map(|&r| {
            let scenario = FermionScenario::new(r, weights)?;
            let n = fermionic_negativity_checked(&scenario)?;
            Ok(FermionCurveRow {
                q_abs,
                r: scenario.squeezing.r(),
                n_ar: n.n_ar,
                n_aar: n.n_aar,
                residual: n.residual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FermionCurve {
        rows,
        swap_equivalent: q_abs < std::f64::consts::FRAC_1_SQRT_2 - 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn squeezing_from_acceleration_limits() {
        assert!(fermion_squeezing_from_acceleration(1.0, 1e-3).unwrap().r() < 1e-300);
        let inf = fermion_squeezing_from_acceleration(1.0, 1e15).unwrap();
        assert!((inf.r() - PI / 4.0).abs() < 1e-12);
        let one = fermion_squeezing_from_acceleration(3.0, 3.0).unwrap();
        assert!((one.r() - 0.043187).abs() < 1e-6);
        assert!((one.r().tan() - (-PI).exp()).abs() < 1e-12);
        assert!(fermion_squeezing_from_acceleration(-1.0, 1.0).is_err());
        assert!(FermionSqueezing::new(0.8).is_err());
    }

    #[test]
    fn slot_order_matches_index_formula() {
        let s = grassmann_space();
        for n in 0..16usize {
            let d = [n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1];
            assert_eq!(s.index(&d).unwrap(), 8 * d[0] + 4 * d[1] + 2 * d[2] + d[3]);
        }
    }

    #[test]
    fn vacuum() {
        let v0 = grassmann_vacuum(0.0).unwrap();
        assert_eq!(v0.amplitude(&[0, 0, 0, 0]).unwrap(), re(1.0));
        let v = grassmann_vacuum(PI / 4.0).unwrap();
        let expect = [
            ([0, 0, 0, 0], 0.5),
            ([0, 0, 1, 1], -0.5),
            ([1, 1, 0, 0], 0.5),
            ([1, 1, 1, 1], -0.5),
        ];
        for (d, x) in expect {
            assert!((v.amplitude(&d).unwrap() - re(x)).norm() < 1e-15);
        }
        for r in [0.1, 0.3, 0.7] {
            assert!((grassmann_vacuum(r).unwrap().norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn one_particle() {
        let one = grassmann_one_particle(0.0, &UnruhWeights::right()).unwrap();
        assert_eq!(one.amplitude(&[1, 0, 0, 0]).unwrap(), re(1.0));
        let w = UnruhWeights::new(C64::new(0.6, 0.3), C64::new(0.2, -(1.0f64 - 0.49).sqrt())).unwrap();
        for r in [0.0, 0.2, 0.5, PI / 4.0] {
            let one = grassmann_one_particle(r, &w).unwrap();
            assert!((one.norm() - 1.0).abs() < 1e-14);
            let overlap = grassmann_vacuum(r).unwrap().inner(&one).unwrap();
            assert!(overlap.norm() < 1e-14);
        }
    }

    #[test]
    fn joint_state_coefficients() {
        let w = UnruhWeights::from_magnitude(0.8).unwrap().with_phase(0.4);
        let r = 0.3;
        let psi = fermion_joint_state(&FermionScenario::new(r, w).unwrap()).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-15);
        let got = psi.amplitude(&[1, 1, 0, 1, 1]).unwrap();
        let expect = -w.q_r() * r.sin() / std::f64::consts::SQRT_2;
        assert!((got - expect).norm() < 1e-15);

        let bell = fermion_joint_state(&FermionScenario::new(0.0, UnruhWeights::right()).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((bell.amplitude(&[0, 0, 0, 0, 0]).unwrap().re - h).abs() < 1e-15);
        assert!((bell.amplitude(&[1, 1, 0, 0, 0]).unwrap().re - h).abs() < 1e-15);
    }

    #[test]
    fn block_entries() {
        let w = UnruhWeights::from_magnitude(0.9).unwrap();
        let sc = FermionScenario::new(0.4, w).unwrap();
        let c = 0.4f64.cos();
        let ar = pt_blocks(&sc, Bipartition::AliceRob);
        let ql2 = w.q_l().norm_sqr();
        assert!((ar.blocks[0].matrix[(0, 0)].re - c * c * ql2 / 2.0).abs() < 1e-15);
        let aar = pt_blocks(&sc, Bipartition::AliceAntiRob);
        assert!((aar.blocks[1].matrix[(2, 2)].re - c.powi(4) / 2.0).abs() < 1e-15);
        for b in ar.blocks.iter().chain(aar.blocks.iter()) {
            let m = b.matrix;
            assert!((m - m.adjoint()).norm() < 1e-14);
        }
    }

    #[test]
    fn disagreement_is_an_error() {
        let err = Error::MethodDisagreement {
            residual: 1e-6,
            tolerance: METHOD_TOL,
        };
        assert!(err.to_string().contains("disagree"));
    }

    #[test]
    fn curve_flags_swap_equivalent_weights() {
        let c = fermionic_curve(0.5, &[0.0, 0.3]).unwrap();
        assert!(c.swap_equivalent);
        assert!(!fermionic_curve(0.9, &[0.0]).unwrap().swap_equivalent);
        assert!(fermionic_curve(0.9, &[1.0]).is_err());
    }
}
