use std::f64::consts::PI;

use super::ExactError;

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Surface measure of the unit sphere `S^k ⊂ R^{k+1}`:
/// `ω_k = 2 π^{(k+1)/2} / Γ((k+1)/2)`.
pub fn sphere_volume(k: u32) -> f64 {
    let h = (k as f64 + 1.0) / 2.0;
    (std::f64::consts::LN_2 + h * PI.ln() - ln_gamma(h)).exp()
}

/// `B((n−1)/2, (n+1)/2)` through log-Gamma.
pub fn beta_unit(n: i64) -> Result<f64, ExactError> {
    if n < 3 {
        return Err(ExactError::Domain { n, min: 3 });
    }
    let x = (n as f64 - 1.0) / 2.0;
    let y = (n as f64 + 1.0) / 2.0;
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

/// The normalizing factor `ω_{n−2} · B((n−1)/2, (n+1)/2)`.
pub fn beta_value(n: i64) -> Result<f64, ExactError> {
    let b = beta_unit(n)?;
    Ok(sphere_volume((n - 2) as u32) * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Γ(k/2) by the recurrence from Γ(1/2) = √π and Γ(1) = 1.
    fn gamma_half(k: u32) -> f64 {
        let mut x = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
        let mut g = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
        while 2.0 * x < k as f64 {
            g *= x;
            x += 1.0;
        }
        g
    }

    fn beta_value_exact(n: i64) -> f64 {
        let k = n as u32;
        let omega = 2.0 * PI.powf((k - 1) as f64 / 2.0) / gamma_half(k - 1);
        omega * gamma_half(k - 1) * gamma_half(k + 1) / gamma_half(2 * k)
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_dimensions() {
        assert!(rel(beta_value(3).unwrap(), PI) < 1e-14);
        assert!(rel(beta_value(5).unwrap(), PI * PI / 6.0) < 1e-14);
    }

    #[test]
    fn sphere_volumes() {
        assert!(rel(sphere_volume(1), 2.0 * PI) < 1e-15);
        assert!(rel(sphere_volume(2), 4.0 * PI) < 1e-15);
        assert!(rel(sphere_volume(3), 2.0 * PI * PI) < 1e-14);
    }

    #[test]
    fn agrees_with_half_integer_recurrence() {
        for n in 3..=60 {
            let v = beta_value(n).unwrap();
            assert!(v > 0.0 && v.is_finite());
            assert!(rel(v, beta_value_exact(n)) < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn domain_error_below_three() {
        assert_eq!(beta_value(2), Err(ExactError::Domain { n: 2, min: 3 }));
    }
}
