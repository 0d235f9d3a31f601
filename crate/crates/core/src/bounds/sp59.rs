use std::f64::consts::{LN_2, PI};

use statrs::function::gamma::ln_gamma;

use super::quad::log_integrate;
use crate::{Error, Result};

const REL_TOL: f64 = 1e-10;

/// Cone half-angle whose cap covers a fraction `2^-k` of the unit sphere in `n` dimensions.
pub fn cone_half_angle(n: usize, k: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sp59 needs n >= 2, got {n}")));
    }
    let target = -(k as f64) * LN_2;
    let nn = n as f64;
    let ln_full = 0.5 * PI.ln() + ln_gamma((nn - 1.0) / 2.0) - ln_gamma(nn / 2.0);
    let ln_cap = |theta: f64| {
        if n == 2 {
            return theta.ln() - ln_full;
        }
        log_integrate(|phi| (nn - 2.0) * phi.sin().ln(), 0.0, theta, 1e-13) - ln_full
    };
    if k == 0 {
        return Ok(PI);
    }
    let (mut lo, mut hi) = (0.0f64, PI);
    if !(ln_cap(1e-9) < target && ln_cap(hi) >= target) {
        return Err(Error::Numeric(format!(
            "could not bracket the cone angle for n={n}, k={k}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_cap(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `ln P(noise carries the signal outside the cone)` for amplitude `amp = sqrt(Es/N0 * 2)` per dimension.
pub fn ln_outside_cone(n: usize, theta: f64, amp: f64) -> f64 {
    let nn = n as f64;
    let mu = amp * nn.sqrt();
    let c0 = (nn - 1.0).ln()
        - mu * mu / 2.0
        - nn / 2.0 * LN_2
        - 0.5 * PI.ln()
        - ln_gamma((nn + 1.0) / 2.0);
    let ln_radial = |phi: f64| {
        let b = mu * phi.cos();
        let s_star = 0.5 * (b + (b * b + 4.0 * (nn - 1.0)).sqrt());
        let width = 1.0 / (1.0 + (nn - 1.0) / (s_star * s_star)).sqrt();
        let lo = (s_star - 40.0 * width).max(0.0);
        let hi = s_star + 40.0 * width;
        log_integrate(
            |s| (nn - 1.0) * s.ln() - s * s / 2.0 + s * b,
            lo,
            hi,
            REL_TOL,
        )
    };
    let density = |phi: f64| {
        let angular = if n == 2 { 0.0 } else { (nn - 2.0) * phi.sin().ln() };
        c0 + angular + ln_radial(phi)
    };
    log_integrate(density, theta, PI, REL_TOL).min(0.0)
}

/// SP59 block error probability at a single Eb/N0 (dB), for rate `k/n`.
pub fn sp59_point(n: usize, k: usize, theta: f64, ebn0_db: f64) -> f64 {
    let rate = k as f64 / n as f64;
    let amp = (2.0 * rate * 10f64.powf(ebn0_db / 10.0)).sqrt();
    ln_outside_cone(n, theta, amp).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_angle_matches_reference() {
        let theta = cone_half_angle(128, 64).unwrap();
        assert!((theta - 0.80660106771002049).abs() < 1e-10);
        let theta = cone_half_angle(8, 4).unwrap();
        assert!((theta - 0.98846566982544229).abs() < 1e-10);
    }

    #[test]
    fn two_dimensional_cone() {
        let theta = cone_half_angle(2, 1).unwrap();
        assert!((theta - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_n_below_two() {
        assert!(cone_half_angle(1, 1).is_err());
    }
}
