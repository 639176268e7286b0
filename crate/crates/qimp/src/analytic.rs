//! Closed-form coherence solutions for both master-equation constructions
//! and the crossover classification in `g = 2v/gamma`.
//!
//! These expressions are the oracle layer: the numerically propagated
//! dynamics are validated against them, and they in turn are validated
//! against each other through algebraic identities.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::model::{thermal_rates, SystemParams};

#[derive(Debug, Error)]
pub enum AnalyticError {
    #[error("oscillatory modulus requires g > 1, got g = {0}")]
    RequiresRevivals(f64),
}

/// Ingredients of the local-approach coherence solution.
///
/// `alpha` is the principal square root of `1 + 2 i g dp_bar - g^2` (branch
/// cut on the negative real axis, non-negative real part), and
/// `a = ((1 + alpha) + i g dp_0) / (2 alpha)`; the two exponential weights
/// `a` and `1 - a` sum to one by construction.
#[derive(Debug, Clone, Copy)]
pub struct LocalSolutionParams {
    pub a: C64,
    pub alpha: C64,
    pub g: f64,
    pub gamma: f64,
    pub delta_p_bar: f64,
    pub delta_p0: f64,
    pub epsilon: f64,
}

impl LocalSolutionParams {
    pub fn from_system(p: &SystemParams) -> Self {
        let g = p.g();
        let gamma = p.gamma();
        let delta_p_bar = p.delta_p_bar();
        let alpha = (C64::new(1.0 - g * g, 2.0 * g * delta_p_bar)).sqrt();
        let a = (C64::new(1.0, 0.0) + alpha + C64::new(0.0, g * p.delta_p0)) / (alpha * 2.0);
        LocalSolutionParams {
            a,
            alpha,
            g,
            gamma,
            delta_p_bar,
            delta_p0: p.delta_p0,
            epsilon: p.epsilon,
        }
    }
}

/// Local-approach coherence multiplier
/// `e^{i eps t} [A e^{-(gamma/2)(1-alpha)t} + (1-A) e^{-(gamma/2)(1+alpha)t}]`,
/// valid in the pure-dephasing limit Delta = 0.
pub fn lambda_local(t: f64, p: &SystemParams) -> C64 {
    let s = LocalSolutionParams::from_system(p);
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let phase = (i * s.epsilon * t).exp();
    let slow = (-(one - s.alpha) * (s.gamma / 2.0) * t).exp();
    let fast = (-(one + s.alpha) * (s.gamma / 2.0) * t).exp();
    phase * (s.a * slow + (one - s.a) * fast)
}

/// The g > 1 modulus expression
/// `[cos(gamma delta t / 2) + sin(gamma delta t / 2)/delta] e^{-gamma t/2}`
/// with `delta = sqrt(g^2 - 1)`, valid for `dp_bar = dp_0 = 0`.
///
/// Returned as written; between its zeros the expression goes negative, so
/// comparisons against `|lambda_local|` take its absolute value.
pub fn lambda_local_modulus_oscillatory(t: f64, g: f64, gamma: f64) -> Result<f64, AnalyticError> {
    if g <= 1.0 {
        return Err(AnalyticError::RequiresRevivals(g));
    }
    let delta = (g * g - 1.0).sqrt();
    let x = gamma * delta * t / 2.0;
    Ok((x.cos() + x.sin() / delta) * (-gamma * t / 2.0).exp())
}

/// Global-approach coherence multiplier, weighted by the initial impurity
/// populations so that it starts at one:
/// `e^{i eps t} [p_0 e^{i v t} e^{-gamma_+ t} + p_1 e^{-i v t} e^{-gamma_- t}]`.
///
/// At infinite temperature with balanced initial populations the modulus is
/// `e^{-gamma t / 2} |cos(v t)|`, with revivals every pi/v.
pub fn lambda_global(t: f64, p: &SystemParams) -> C64 {
    let (gamma_minus, gamma_plus) = thermal_rates(p);
    let p0 = (1.0 + p.delta_p0) / 2.0;
    let p1 = (1.0 - p.delta_p0) / 2.0;
    let i = C64::new(0.0, 1.0);
    let phase = (i * p.epsilon * t).exp();
    let up = (i * p.v * t).exp() * (-gamma_plus * t).exp();
    let down = (-i * p.v * t).exp() * (-gamma_minus * t).exp();
    phase * (up * p0 + down * p1)
}

/// Decoherence regime as a function of the crossover parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossoverClass {
    Monotonic,
    Revivals,
    Boundary,
}

/// Monotonic decay for g < 1, damped revivals for g > 1; `Boundary` within
/// 1e-12 of the measure-zero point g = 1.
pub fn crossover_class(g: f64) -> CrossoverClass {
    assert!(g >= 0.0, "crossover parameter must be non-negative");
    if (g - 1.0).abs() <= 1e-12 {
        CrossoverClass::Boundary
    } else if g < 1.0 {
        CrossoverClass::Monotonic
    } else {
        CrossoverClass::Revivals
    }
}
