use crate::error::{Error, Result};
use crate::qops::C64;

const NORM_TOL: f64 = 1e-12;

/// Right/left Unruh amplitudes `(q_R, q_L)` of a single-particle state,
/// `|q_R|^2 + |q_L|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhWeights {
    q_r: C64,
    q_l: C64,
}

impl UnruhWeights {
    pub fn new(q_r: C64, q_l: C64) -> Result<Self> {
        let norm = q_r.norm_sqr() + q_l.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "|q_R|^2 + |q_L|^2 = {norm}, expected 1"
            )));
        }
        Ok(Self { q_r, q_l })
    }

    /// Real weights `q_R = q_abs`, `q_L = sqrt(1 - q_abs^2)`.
    pub fn from_magnitude(q_abs: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q_abs) {
            return Err(Error::InvalidParameter(format!("|q_R| = {q_abs} outside [0, 1]")));
        }
        let q_l = (1.0 - q_abs * q_abs).max(0.0).sqrt();
        Ok(Self {
            q_r: C64::new(q_abs, 0.0),
            q_l: C64::new(q_l, 0.0),
        })
    }

    /// The canonical choice `q_R = 1`, `q_L = 0`.
    pub fn right() -> Self {
        Self {
            q_r: C64::new(1.0, 0.0),
            q_l: C64::new(0.0, 0.0),
        }
    }

    pub fn q_r(&self) -> C64 {
        self.q_r
    }

    pub fn q_l(&self) -> C64 {
        self.q_l
    }

    /// Multiplies `q_R` by `e^{i phi}`.
    pub fn with_phase(&self, phi: f64) -> Self {
        Self {
            q_r: self.q_r * C64::from_polar(1.0, phi),
            q_l: self.q_l,
        }
    }

    /// Exchanges the right and left amplitudes.
    pub fn swapped(&self) -> Self {
        Self {
            q_r: self.q_l,
            q_l: self.q_r,
        }
    }

    /// True when one of the two amplitudes vanishes (to `tol`).
    pub fn is_extremal(&self, tol: f64) -> bool {
        self.q_r.norm() <= tol || self.q_l.norm() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        assert!(UnruhWeights::new(C64::new(0.8, 0.0), C64::new(0.8, 0.0)).is_err());
        assert!(UnruhWeights::from_magnitude(1.2).is_err());
    }

    #[test]
    fn magnitude_parameterization() {
        let w = UnruhWeights::from_magnitude(0.8).unwrap();
        assert!((w.q_l().re - 0.6).abs() < 1e-15);
        let s = w.swapped();
        assert_eq!(s.q_r(), w.q_l());
        let p = w.with_phase(1.0);
        assert!((p.q_r().norm() - 0.8).abs() < 1e-15);
        assert!(UnruhWeights::right().is_extremal(0.0));
        assert!(!w.is_extremal(1e-12));
    }
}
