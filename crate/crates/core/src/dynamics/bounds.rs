//! Closed-form bounds on the stationary mass of the optimal profile.
//!
//! Bounding `aᵀAa ≤ ‖a‖₁·K` for every profile and summing the binomial
//! expansion gives
//!
//! ```text
//! μ(a*|β) ≥ exp(β·Φ̂(a*)) · exp(βKθ) / (exp(β/2) + exp(βKθ/N))^N
//! ```
//!
//! and solving that bound for `μ = 1 − δ` gives the rationality level
//! [`beta_bound_closed_form`].

use crate::equilibrium::DEGENERACY_TOLERANCE;
use crate::error::{Error, Result};

fn log_add_exp(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    m + ((x - m).exp() + (y - m).exp()).ln()
}

/// `Φ̂(a*) = max(0, N/2 − Kθ)`.
pub fn optimal_normalized_potential(n: usize, k: usize, theta: f64) -> f64 {
    (n as f64 / 2.0 - k as f64 * theta).max(0.0)
}

/// Logarithm of the lower bound on `μ_K(a*|β)`.
pub fn log_gibbs_lower_bound(n: usize, k: usize, theta: f64, beta: f64) -> f64 {
    let nf = n as f64;
    let kt = k as f64 * theta;
    beta * optimal_normalized_potential(n, k, theta) + beta * kt
        - nf * log_add_exp(beta / 2.0, beta * kt / nf)
}

/// Lower bound on `μ_K(a*|β)`; exact at `β = 0` and tight as `β → ∞` off the
/// threshold.
pub fn gibbs_lower_bound(n: usize, k: usize, theta: f64, beta: f64) -> f64 {
    log_gibbs_lower_bound(n, k, theta, beta).exp()
}

/// Rationality level guaranteeing `μ(a*|β) ≥ 1 − δ`:
///
/// ```text
/// |Kθ/N − 1/2|⁻¹ · (log(1−δ)/N − log(1 − exp(log(1−δ)/N)))
/// ```
pub fn beta_bound_closed_form(n: usize, k: usize, theta: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    let threshold = n as f64 / (2.0 * k as f64);
    if (theta - threshold).abs() <= DEGENERACY_TOLERANCE {
        return Err(Error::DegenerateTheta { theta, threshold });
    }
    let margin = (k as f64 * theta / n as f64 - 0.5).abs();
    let l = (-delta).ln_1p() / n as f64;
    Ok((l - (-l.exp_m1()).ln()) / margin)
}
