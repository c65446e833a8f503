//! Small special-function helpers shared by the Bayes factor engines.

use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

/// Natural log of the Euler beta function B(a, b).
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Natural log of the Dirichlet normalizing constant B(α) = Π Γ(αᵢ) / Γ(Σ αᵢ).
pub fn ln_dirichlet_beta(alpha: &[f64]) -> f64 {
    let sum: f64 = alpha.iter().sum();
    alpha.iter().map(|&a| ln_gamma(a)).sum::<f64>() - ln_gamma(sum)
}

/// Upper tail P(Z ≥ x) of the standard normal distribution.
pub fn std_normal_tail(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// ln Γ(k + 1/2) for integer k ≥ 0, accumulated as an ordered sum of
/// ln(i - 1/2) terms. Summation order is fixed so that calls sharing a count
/// prefix round identically, which keeps one-step martingale identities at
/// the 1e-12 level.
pub fn ln_gamma_half_plus(k: u64) -> f64 {
    let mut acc = 0.5 * std::f64::consts::PI.ln(); // ln Γ(1/2) = ln √π
    for i in 1..=k {
        acc += (i as f64 - 0.5).ln();
    }
    acc
}

/// ln Γ(k + 1) = ln k! for integer k ≥ 0, same ordered accumulation.
pub fn ln_factorial(k: u64) -> f64 {
    let mut acc = 0.0;
    for i in 2..=k {
        acc += (i as f64).ln();
    }
    acc
}
