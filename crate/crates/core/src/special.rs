//! Special functions needed by the packet families.

use crate::error::{Error, Result};

/// `Γ(x)` for real `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::SpecialFunction(format!("Γ({x}) outside the supported domain")));
    }
    let g = libm::tgamma(x);
    if !g.is_finite() {
        return Err(Error::SpecialFunction(format!("Γ({x}) overflows")));
    }
    Ok(g)
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::SpecialFunction(format!(
            "ln Γ({x}) outside the supported domain"
        )));
    }
    Ok(libm::lgamma(x))
}

/// `K_{iν}(x) = ∫_0^∞ exp(-x cosh t) cos(ν t) dt` for `x > 0`.
///
/// The integrand is entire and decays double-exponentially, so the
/// trapezoid rule converges geometrically in the step.
pub fn bessel_k_imag_order(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite() && nu.is_finite()) {
        return Err(Error::SpecialFunction(format!(
            "K_(i{nu})({x}) outside the supported domain"
        )));
    }
    // exp(-x cosh t) < 1e-300 beyond here
    let t_max = (700.0 / x).max(1.0).acosh() + 1.0;
    let h = (0.05f64).min(0.5 / (1.0 + nu.abs()));
    let steps = (t_max / h).ceil() as usize;
    let mut sum = 0.5 * (-x).exp();
    for k in 1..=steps {
        let t = k as f64 * h;
        sum += (-x * t.cosh()).exp() * (nu * t).cos();
    }
    let value = sum * h;
    if !value.is_finite() {
        return Err(Error::SpecialFunction(format!("K_(i{nu})({x}) did not evaluate")));
    }
    Ok(value)
}

/// Modified Bessel function `K_0(x)` for `x > 0`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k_imag_order(0.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k0_reference_values() {
        // Abramowitz & Stegun table 9.8
        assert!((bessel_k0(1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-14);
        assert!((bessel_k0(2.0).unwrap() - 0.113_893_872_749_533_4).abs() < 1e-14);
        assert!((bessel_k0(0.1).unwrap() - 2.427_069_024_702_017).abs() < 1e-13);
        assert!(bessel_k0(0.0).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!(gamma(-1.0).is_err());
        assert!((ln_gamma(200.0).unwrap() - 857.933_669_825_857_5).abs() < 1e-9);
    }
}
