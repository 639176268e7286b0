//! Physical parameters, the qubit-impurity Hamiltonian and initial states.
//!
//! # Basis convention
//!
//! The joint Hilbert space is ordered as the product basis |q> (x) |i> with
//! states |00>, |01>, |10>, |11>, where the first label is the qubit and the
//! second the impurity. Both Pauli z operators are diagonal with
//! `sigma_z|0> = +|0>` and `tau_z|0> = +|0>`, so |0> is the respective ground
//! state of `-(epsilon/2) sigma_z` and `-(epsilon_I/2) tau_z`. Every module in
//! this crate shares this convention. Units follow hbar = k_B = 1.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::densemath::{kron, matrix_re, CMatrix};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-physical qubit state: |coherence|^2 = {coh_sq:.3e} exceeds pop*(1-pop) = {bound:.3e}")]
    NonPhysicalQubit { coh_sq: f64, bound: f64 },
}

/// Inverse temperature; `Beta::Infinite` is the distinguished
/// infinite-temperature point (beta = 0) used throughout the crossover
/// figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Beta {
    /// Finite inverse temperature (1/energy), may be any finite real >= 0.
    Finite(f64),
    /// Infinite temperature: emission and absorption rates coincide exactly.
    Infinite,
}

impl Beta {
    /// The value of beta itself; infinite temperature maps to 0.
    pub fn value(self) -> f64 {
        match self {
            Beta::Finite(b) => b,
            Beta::Infinite => 0.0,
        }
    }
}

/// All physical inputs of the model.
///
/// `gamma_minus` is the impurity emission rate; the bath enters only through
/// it and through detailed balance, never through microscopic couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Qubit bias epsilon (energy).
    pub epsilon: f64,
    /// Qubit tunneling Delta (energy).
    pub delta: f64,
    /// Qubit-impurity coupling v (energy).
    pub v: f64,
    /// Impurity splitting epsilon_I (energy), > 0.
    pub epsilon_i: f64,
    /// Inverse bath temperature.
    pub beta: Beta,
    /// Impurity emission rate gamma_- (1/time), > 0.
    pub gamma_minus: f64,
    /// Initial impurity population imbalance, in [-1, 1].
    pub delta_p0: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        let finite = [self.epsilon, self.delta, self.v, self.epsilon_i, self.gamma_minus, self.delta_p0, self.beta.value()];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::InvalidParameter("all parameters must be finite".into()));
        }
        if self.gamma_minus <= 0.0 {
            return Err(ModelError::InvalidParameter(format!(
                "gamma_minus must be > 0, got {}",
                self.gamma_minus
            )));
        }
        if self.epsilon_i <= 0.0 {
            return Err(ModelError::InvalidParameter(format!(
                "epsilon_i must be > 0, got {}",
                self.epsilon_i
            )));
        }
        if !(-1.0..=1.0).contains(&self.delta_p0) {
            return Err(ModelError::InvalidParameter(format!(
                "delta_p0 must lie in [-1, 1], got {}",
                self.delta_p0
            )));
        }
        if let Beta::Finite(b) = self.beta {
            if b < 0.0 {
                return Err(ModelError::InvalidParameter(format!("beta must be >= 0, got {b}")));
            }
        }
        Ok(())
    }

    /// Qubit splitting Omega = sqrt(epsilon^2 + Delta^2).
    pub fn omega(&self) -> f64 {
        self.epsilon.hypot(self.delta)
    }

    /// Conditional qubit splitting Omega_tau for impurity state tau in {0, 1}.
    pub fn omega_tau(&self, tau: u8) -> f64 {
        let shift = self.v * (1.0 - 2.0 * f64::from(tau));
        (self.epsilon + shift).hypot(self.delta)
    }

    /// Total rate gamma = gamma_- + gamma_+.
    pub fn gamma(&self) -> f64 {
        let (gm, gp) = thermal_rates(self);
        gm + gp
    }

    /// Crossover parameter g = 2v / gamma.
    pub fn g(&self) -> f64 {
        2.0 * self.v / self.gamma()
    }

    /// Thermal impurity imbalance (gamma_- - gamma_+) / gamma.
    pub fn delta_p_bar(&self) -> f64 {
        let (gm, gp) = thermal_rates(self);
        (gm - gp) / (gm + gp)
    }
}

/// sigma_z = tau_z = diag(1, -1).
pub fn pauli_z() -> CMatrix {
    matrix_re(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

pub fn pauli_x() -> CMatrix {
    matrix_re(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

/// Impurity lowering operator |0><1| into the tau_z = +1 ground state.
pub fn tau_minus() -> CMatrix {
    matrix_re(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
}

pub fn tau_plus() -> CMatrix {
    matrix_re(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap()
}

pub fn identity2() -> CMatrix {
    crate::densemath::identity(2)
}

/// Joint Hamiltonian
/// `H = -(eps/2) sz (x) I - (Delta/2) sx (x) I - (v/2) sz (x) tz - (eps_I/2) I (x) tz`.
///
/// For Delta = 0 this is diagonal with entries
/// `E(s_q, s_i) = -(eps/2) s_q - (v/2) s_q s_i - (eps_I/2) s_i`, signs +1 for
/// state |0> of each factor.
pub fn build_hamiltonian(p: &SystemParams) -> Result<CMatrix, ModelError> {
    p.validate()?;
    let sz = pauli_z();
    let sx = pauli_x();
    let i2 = identity2();
    let h = kron(&sz, &i2).scale(-p.epsilon / 2.0)
        + kron(&sx, &i2).scale(-p.delta / 2.0)
        + kron(&sz, &sz).scale(-p.v / 2.0)
        + kron(&i2, &sz).scale(-p.epsilon_i / 2.0);
    Ok(h)
}

/// Emission/absorption rate pair related by detailed balance,
/// `gamma_+ = exp(-beta * eps_I) * gamma_-`. At infinite temperature the two
/// rates coincide exactly.
pub fn thermal_rates(p: &SystemParams) -> (f64, f64) {
    let gamma_plus = match p.beta {
        Beta::Infinite => p.gamma_minus,
        Beta::Finite(b) => (-b * p.epsilon_i).exp() * p.gamma_minus,
    };
    (p.gamma_minus, gamma_plus)
}

/// Product initial state `rho_Q(0) (x) diag((1+dp0)/2, (1-dp0)/2)`.
///
/// The qubit block is built from its excited-state population and coherence;
/// it must be positive semidefinite, i.e. `|coh|^2 <= pop (1 - pop)`.
pub fn initial_state(
    p: &SystemParams,
    qubit_coherence0: C64,
    qubit_pop0: f64,
) -> Result<crate::evolution::DensityMatrix4, ModelError> {
    p.validate()?;
    if !(0.0..=1.0).contains(&qubit_pop0) {
        return Err(ModelError::InvalidParameter(format!(
            "qubit population must lie in [0, 1], got {qubit_pop0}"
        )));
    }
    let bound = qubit_pop0 * (1.0 - qubit_pop0);
    let coh_sq = qubit_coherence0.norm_sqr();
    if coh_sq > bound + 1e-14 {
        return Err(ModelError::NonPhysicalQubit { coh_sq, bound });
    }
    let q = CMatrix::from_row_slice(2, 2, &[
        C64::new(qubit_pop0, 0.0),
        qubit_coherence0,
        qubit_coherence0.conj(),
        C64::new(1.0 - qubit_pop0, 0.0),
    ]);
    let imp = matrix_re(2, 2, &[
        (1.0 + p.delta_p0) / 2.0,
        0.0,
        0.0,
        (1.0 - p.delta_p0) / 2.0,
    ])
    .unwrap();
    let rho = kron(&q, &imp);
    crate::evolution::DensityMatrix4::new(rho)
        .map_err(|e| ModelError::InvalidParameter(format!("constructed state invalid: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemath::fro_dist;

    pub(crate) fn crossover_params(g: f64) -> SystemParams {
        SystemParams {
            epsilon: 20.0,
            delta: 0.0,
            v: 2.0,
            epsilon_i: 20.0,
            beta: Beta::Infinite,
            gamma_minus: 2.0 / g, // gamma = 2 gamma_- = 2v/g = 4/g
            delta_p0: 0.0,
        }
    }

    #[test]
    fn hamiltonian_uncoupled_is_fig1_diagonal() {
        let p = SystemParams { v: 0.0, gamma_minus: 1.0, ..crossover_params(1.0) };
        let h = build_hamiltonian(&p).unwrap();
        let expect = matrix_re(4, 4, &[
            -20.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 20.0,
        ])
        .unwrap();
        assert!(fro_dist(&h, &expect) < 1e-14);
    }

    #[test]
    fn hamiltonian_all_zero_params() {
        let p = SystemParams {
            epsilon: 0.0,
            delta: 0.0,
            v: 0.0,
            epsilon_i: 1.0,
            beta: Beta::Infinite,
            gamma_minus: 1.0,
            delta_p0: 0.0,
        };
        let mut h = build_hamiltonian(&p).unwrap();
        // remove the only nonzero piece to probe the all-zero construction
        h += kron(&identity2(), &pauli_z()).scale(p.epsilon_i / 2.0);
        assert!(crate::densemath::fro_norm(&h) < 1e-15);
    }

    #[test]
    fn hamiltonian_matches_sign_pair_formula_with_coupling() {
        // Brute-force over the four (s_q, s_i) sign pairs.
        let p = crossover_params(2.0);
        let h = build_hamiltonian(&p).unwrap();
        let energy = |sq: f64, si: f64| {
            -(p.epsilon / 2.0) * sq - (p.v / 2.0) * sq * si - (p.epsilon_i / 2.0) * si
        };
        let signs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
        for (k, (sq, si)) in signs.iter().enumerate() {
            assert!((h[(k, k)].re - energy(*sq, *si)).abs() < 1e-14);
            assert!(h[(k, k)].im.abs() < 1e-15);
        }
        // Explicit values for eps = eps_I = 20, v = 2:
        for (k, e) in [-21.0, 1.0, 1.0, 19.0].iter().enumerate() {
            assert!((h[(k, k)].re - e).abs() < 1e-13);
        }
    }

    #[test]
    fn hamiltonian_is_hermitian_and_commutes_with_sigma_z_at_zero_delta() {
        let p = crossover_params(6.0);
        let h = build_hamiltonian(&p).unwrap();
        assert!(fro_dist(&h, &h.adjoint()) == 0.0);
        let szi = kron(&pauli_z(), &identity2());
        let comm = &h * &szi - &szi * &h;
        assert!(crate::densemath::fro_norm(&comm) < 1e-14);
    }

    #[test]
    fn thermal_rates_cases() {
        let mut p = crossover_params(1.0);
        p.gamma_minus = 1.0;
        let (gm, gp) = thermal_rates(&p);
        assert_eq!((gm, gp), (1.0, 1.0));

        // beta * eps_I = ln 2  =>  gamma_+ = 1/2
        p.beta = Beta::Finite(2f64.ln() / p.epsilon_i);
        let (_, gp) = thermal_rates(&p);
        assert!((gp - 0.5).abs() < 1e-15);

        // numerically huge beta: absorption dies out
        p.beta = Beta::Finite(1e6);
        let (_, gp) = thermal_rates(&p);
        assert_eq!(gp, 0.0);
    }

    #[test]
    fn derived_quantities() {
        let p = crossover_params(6.0);
        assert!((p.omega() - 20.0).abs() < 1e-14);
        assert!((p.omega_tau(0) - 22.0).abs() < 1e-14);
        assert!((p.omega_tau(1) - 18.0).abs() < 1e-14);
        assert!((p.g() * p.gamma() - 2.0 * p.v).abs() < 1e-13);
        assert_eq!(p.delta_p_bar(), 0.0);
    }

    #[test]
    fn detailed_balance_gives_tanh_imbalance() {
        for beta in [1e-3, 0.05, 0.1, 1.0, 10.0] {
            let p = SystemParams { beta: Beta::Finite(beta), ..crossover_params(2.0) };
            let expect = (beta * p.epsilon_i / 2.0).tanh();
            assert!((p.delta_p_bar() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_state_product_cases() {
        let p = crossover_params(2.0);
        // |+> qubit with maximally mixed impurity.
        let rho = initial_state(&p, C64::new(0.5, 0.0), 0.5).unwrap();
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((m[(0, 2)].re - 0.25).abs() < 1e-15);

        // dp0 = 1: impurity exactly in |0>.
        let p1 = SystemParams { delta_p0: 1.0, ..p };
        let rho = initial_state(&p1, C64::new(0.0, 0.0), 1.0).unwrap();
        let m = rho.matrix();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-15);
        for k in 1..4 {
            assert!(m[(k, k)].norm() < 1e-15);
        }
    }

    #[test]
    fn initial_state_rejects_non_physical_inputs() {
        let p = crossover_params(2.0);
        assert!(matches!(
            initial_state(&p, C64::new(0.6, 0.0), 0.5),
            Err(ModelError::NonPhysicalQubit { .. })
        ));
        let bad = SystemParams { delta_p0: 1.5, ..p };
        assert!(initial_state(&bad, C64::new(0.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn eigensystem_of_coupled_hamiltonian_matches_diagonal_readoff() {
        // Delta = 0 makes H diagonal, so the spectrum is the brute-force
        // evaluation of E(s_q, s_i) over the four sign pairs, sorted.
        let p = crossover_params(2.0);
        let h = build_hamiltonian(&p).unwrap();
        let (vals, _) = crate::densemath::hermitian_eigensystem(&h).unwrap();
        let mut expect: Vec<f64> = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)]
            .iter()
            .map(|(sq, si)| {
                -(p.epsilon / 2.0) * sq - (p.v / 2.0) * sq * si - (p.epsilon_i / 2.0) * si
            })
            .collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, e) in vals.iter().zip(expect.iter()) {
            assert!((v - e).abs() < 1e-12);
        }
        assert_eq!(expect, vec![-21.0, 1.0, 1.0, 19.0]);
    }

    proptest::proptest! {
        #[test]
        fn initial_states_are_valid_products(
            pop in 0.0f64..=1.0,
            coh_frac in 0.0f64..=1.0,
            phase in 0.0f64..std::f64::consts::TAU,
            dp0 in -1.0f64..=1.0,
        ) {
            let p = SystemParams { delta_p0: dp0, ..crossover_params(2.0) };
            let radius = (pop * (1.0 - pop)).sqrt() * coh_frac;
            let coh = C64::from_polar(radius, phase);
            let rho = initial_state(&p, coh, pop).unwrap();
            // construction guarantees trace 1, Hermiticity, positivity
            proptest::prop_assert!(rho.trace_deviation() <= 1e-12);
            proptest::prop_assert!(rho.hermiticity_deviation() <= 1e-12);
            proptest::prop_assert!(rho.min_eigenvalue() >= -1e-12);
            // reductions recover the factors
            let q = crate::evolution::partial_trace_impurity(&rho);
            let i = crate::evolution::partial_trace_qubit(&rho);
            proptest::prop_assert!((q[(0, 0)].re - pop).abs() < 1e-12);
            proptest::prop_assert!((q[(0, 1)] - coh).norm() < 1e-12);
            proptest::prop_assert!((i[(0, 0)].re - (1.0 + dp0) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn params_validation_catches_bad_rates() {
        let mut p = crossover_params(2.0);
        p.gamma_minus = 0.0;
        assert!(p.validate().is_err());
        p.gamma_minus = 1.0;
        p.epsilon_i = -1.0;
        assert!(p.validate().is_err());
    }
}
