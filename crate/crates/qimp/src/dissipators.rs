//! Jump operators for the local and global master-equation constructions,
//! plus a generic full-secular decomposition used to cross-check the closed
//! forms.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::densemath::{
    dagger, fro_norm, hermitian_eigensystem, kron, CMatrix, DenseMathError,
};
use crate::model::{identity2, tau_minus, tau_plus, thermal_rates, SystemParams};

#[derive(Debug, Error)]
pub enum DissipatorError {
    #[error("mixing angle undefined for tau = {tau}: both Delta and epsilon + v(1-2tau) vanish")]
    DegenerateAngle { tau: u8 },
    #[error(
        "ambiguous Bohr-frequency clustering: |{w1} - {w2}| lies between tol_bohr = {tol:.3e} and 10x tol_bohr"
    )]
    AmbiguousClustering { w1: f64, w2: f64, tol: f64 },
    #[error(transparent)]
    DenseMath(#[from] DenseMathError),
    #[error("model error: {0}")]
    Model(#[from] crate::model::ModelError),
}

/// Where a jump operator came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JumpLabel {
    LocalEmission,
    LocalAbsorption,
    GlobalDecay1,
    GlobalDecay2,
    GlobalAbsorb1,
    GlobalAbsorb2,
    DerivedSecular,
}

/// A jump operator together with its rate and, for eigenoperators, the Bohr
/// frequency it lives at.
#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub matrix: CMatrix,
    pub rate: f64,
    pub label: JumpLabel,
    pub bohr_frequency: Option<f64>,
}

impl JumpOperator {
    pub fn new(matrix: CMatrix, rate: f64, label: JumpLabel, bohr_frequency: Option<f64>) -> Self {
        debug_assert!(rate > 0.0, "jump rates must be positive");
        debug_assert!(matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        JumpOperator { matrix, rate, label, bohr_frequency }
    }
}

/// Mixing angles of the impurity-conditioned qubit Hamiltonians and their
/// half-angle overlap `c = cos[(theta_0 - theta_1)/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngles {
    pub theta0: f64,
    pub theta1: f64,
    pub c: f64,
}

/// Local jump operators `I (x) tau_-` (rate gamma_-) and `I (x) tau_+`
/// (rate gamma_+).
///
/// When the absorption rate underflows to zero (numerically zero
/// temperature) the absorption operator is omitted, since a zero-rate
/// dissipator contributes nothing.
pub fn local_jump_operators(p: &SystemParams) -> Result<Vec<JumpOperator>, DissipatorError> {
    p.validate()?;
    let (gamma_minus, gamma_plus) = thermal_rates(p);
    let i2 = identity2();
    let mut ops = vec![JumpOperator::new(
        kron(&i2, &tau_minus()),
        gamma_minus,
        JumpLabel::LocalEmission,
        None,
    )];
    if gamma_plus > 0.0 {
        ops.push(JumpOperator::new(
            kron(&i2, &tau_plus()),
            gamma_plus,
            JumpLabel::LocalAbsorption,
            None,
        ));
    }
    Ok(ops)
}

/// Mixing angles `theta_tau = atan2(Delta, epsilon + v(1-2tau))`.
///
/// The two-argument arctangent keeps the angle continuous through negative
/// conditioned biases.
pub fn mixing_angles(p: &SystemParams) -> Result<MixingAngles, DissipatorError> {
    p.validate()?;
    let mut theta = [0.0f64; 2];
    for tau in 0u8..2 {
        let bias = p.epsilon + p.v * (1.0 - 2.0 * f64::from(tau));
        if p.delta == 0.0 && bias == 0.0 {
            return Err(DissipatorError::DegenerateAngle { tau });
        }
        theta[tau as usize] = p.delta.atan2(bias);
    }
    let c = ((theta[0] - theta[1]) / 2.0).cos();
    Ok(MixingAngles { theta0: theta[0], theta1: theta[1], c })
}

/// Qubit eigenvectors (|+_tau>, |-_tau>) of the impurity-conditioned qubit
/// Hamiltonian `-(1/2)[(eps + v(1-2tau)) sz + Delta sx]`, where |+_tau> is the
/// ground state `(cos(theta/2), sin(theta/2))`.
fn conditioned_qubit_states(theta: f64) -> (Vec<C64>, Vec<C64>) {
    let (s, c) = (theta / 2.0).sin_cos();
    let plus = vec![C64::new(c, 0.0), C64::new(s, 0.0)];
    let minus = vec![C64::new(-s, 0.0), C64::new(c, 0.0)];
    (plus, minus)
}

fn ket_bra(ket: &[C64], bra: &[C64], dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, dim, |i, j| ket[i] * bra[j].conj())
}

/// Joint ket |q_state, tau> in the product ordering.
fn joint_ket(qubit: &[C64], tau: u8) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 4];
    for (q, amp) in qubit.iter().enumerate() {
        v[2 * q + tau as usize] = *amp;
    }
    v
}

fn overlap(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Closed-form global jump operators: decay `c |+_0,0><+_1,1|` and
/// `c |-_0,0><-_1,1|` with rate gamma_-, plus their adjoints with rate
/// gamma_+. Bohr frequencies are attached as `eps_I -+ (Omega_1 - Omega_0)/2`
/// with the sign set by the +- branch.
///
/// Validity of the construction requires a non-degenerate spectrum,
/// `|Omega_0 - Omega_1| > gamma`; violations are only warned about here,
/// classification belongs to [`crate::regimes`].
pub fn global_jump_operators(p: &SystemParams) -> Result<Vec<JumpOperator>, DissipatorError> {
    let angles = mixing_angles(p)?;
    let gap = (p.omega_tau(0) - p.omega_tau(1)).abs();
    if gap <= p.gamma() {
        eprintln!(
            "warning: non-degeneracy condition |Omega_0 - Omega_1| > gamma fails \
             ({gap:.6} <= {:.6}); the global construction is outside its validity regime",
            p.gamma()
        );
    }
    let (gamma_minus, gamma_plus) = thermal_rates(p);
    let (plus0, minus0) = conditioned_qubit_states(angles.theta0);
    let (plus1, minus1) = conditioned_qubit_states(angles.theta1);

    // E(+-_tau, tau) = -+ Omega_tau/2 - (eps_I/2)(1-2tau); Bohr frequency is
    // E_initial - E_final of the impurity-lowering transition.
    let omega_plus = p.epsilon_i + (p.omega_tau(0) - p.omega_tau(1)) / 2.0;
    let omega_minus = p.epsilon_i - (p.omega_tau(0) - p.omega_tau(1)) / 2.0;

    let branches = [
        (&plus0, &plus1, omega_plus, JumpLabel::GlobalDecay1, JumpLabel::GlobalAbsorb1),
        (&minus0, &minus1, omega_minus, JumpLabel::GlobalDecay2, JumpLabel::GlobalAbsorb2),
    ];

    let mut ops = Vec::with_capacity(4);
    for (q0, q1, omega, decay_label, absorb_label) in branches {
        // Amplitude = <q_0|q_1> = cos[(theta_0 - theta_1)/2] on both branches.
        let amp = overlap(q0, q1);
        let ket = joint_ket(q0, 0);
        let bra = joint_ket(q1, 1);
        let decay = ket_bra(&ket, &bra, 4) * amp.conj();
        let absorb = dagger(&decay);
        ops.push(JumpOperator::new(decay, gamma_minus, decay_label, Some(omega)));
        if gamma_plus > 0.0 {
            ops.push(JumpOperator::new(absorb, gamma_plus, absorb_label, Some(-omega)));
        }
    }
    Ok(ops)
}

/// Full-secular decomposition of a coupling operator over the Bohr
/// frequencies of `h`.
///
/// Transition pairs are clustered with tolerance `tol_bohr`; each cluster
/// yields the eigenoperator component `sum Pi(E) A Pi(E')` at the cluster's
/// mean frequency with rate `rate_map(omega)`, followed by its adjoint at
/// `-omega` with rate `rate_map(-omega)`. Components of negligible Frobenius
/// norm are dropped.
pub fn secular_decompose(
    h: &CMatrix,
    coupling: &CMatrix,
    rate_map: &dyn Fn(f64) -> f64,
    tol_bohr: f64,
) -> Result<Vec<JumpOperator>, DissipatorError> {
    let direct = secular_components(h, coupling, tol_bohr)?;
    let mut ops = Vec::with_capacity(2 * direct.len());
    for (omega, component) in &direct {
        ops.push(JumpOperator::new(
            component.clone(),
            rate_map(*omega),
            JumpLabel::DerivedSecular,
            Some(*omega),
        ));
    }
    for (omega, component) in &direct {
        ops.push(JumpOperator::new(
            dagger(component),
            rate_map(-*omega),
            JumpLabel::DerivedSecular,
            Some(-*omega),
        ));
    }
    Ok(ops)
}

/// The direct frequency components `A(omega)` of `coupling`, without the
/// adjoint (absorption) side. Their sum over all omega reconstructs the
/// coupling exactly.
pub fn secular_components(
    h: &CMatrix,
    coupling: &CMatrix,
    tol_bohr: f64,
) -> Result<Vec<(f64, CMatrix)>, DissipatorError> {
    assert!(tol_bohr > 0.0, "tol_bohr must be positive");
    let (energies, vecs) = hermitian_eigensystem(h)?;
    let n = h.nrows();
    let coupling_eig = vecs.adjoint() * coupling * &vecs;

    // All transition frequencies with visibly nonzero amplitude.
    let amp_floor = 1e-14 * fro_norm(coupling).max(1.0);
    let mut transitions: Vec<(f64, usize, usize)> = Vec::new();
    for row in 0..n {
        for col in 0..n {
            if coupling_eig[(row, col)].norm() > amp_floor {
                // operator maps energy E_col down/up to E_row
                transitions.push((energies[col] - energies[row], row, col));
            }
        }
    }
    // Literal safety rule: any two frequencies separated by more than
    // tol_bohr but less than ten times it make the clustering unsafe.
    for i in 0..transitions.len() {
        for j in (i + 1)..transitions.len() {
            let gap = (transitions[i].0 - transitions[j].0).abs();
            if gap > tol_bohr && gap < 10.0 * tol_bohr {
                return Err(DissipatorError::AmbiguousClustering {
                    w1: transitions[i].0,
                    w2: transitions[j].0,
                    tol: tol_bohr,
                });
            }
        }
    }
    transitions.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut components: Vec<(f64, CMatrix)> = Vec::new();
    let mut idx = 0;
    while idx < transitions.len() {
        let mut end = idx + 1;
        while end < transitions.len() && transitions[end].0 - transitions[end - 1].0 <= tol_bohr {
            end += 1;
        }
        let cluster = &transitions[idx..end];
        let omega = cluster.iter().map(|t| t.0).sum::<f64>() / cluster.len() as f64;
        let mut component = CMatrix::zeros(n, n);
        for (_, row, col) in cluster {
            let term = CMatrix::from_fn(n, n, |i, j| {
                vecs[(i, *row)] * coupling_eig[(*row, *col)] * vecs[(j, *col)].conj()
            });
            component += term;
        }
        if fro_norm(&component) >= 1e-12 {
            components.push((omega, component));
        }
        idx = end;
    }
    Ok(components)
}

/// Default clustering tolerance, scale-free in the energy inputs.
pub fn default_tol_bohr(p: &SystemParams) -> f64 {
    1e-9 * (p.epsilon.abs() + p.delta.abs() + p.v.abs() + p.epsilon_i.abs()).max(1.0)
}

/// Rate map of this model: emission rate on positive Bohr frequencies of the
/// decay coupling, absorption rate otherwise.
pub fn model_rate_map(p: &SystemParams) -> impl Fn(f64) -> f64 {
    let (gamma_minus, gamma_plus) = thermal_rates(p);
    move |omega: f64| if omega > 0.0 { gamma_minus } else { gamma_plus }
}

/// Phase-align `candidate` to `target` and return the Frobenius distance
/// after removing one global phase.
pub fn phase_aligned_distance(target: &CMatrix, candidate: &CMatrix) -> f64 {
    let inner: C64 = target
        .iter()
        .zip(candidate.iter())
        .map(|(t, c)| t.conj() * c)
        .sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { C64::new(1.0, 0.0) };
    let aligned = candidate * phase.conj();
    crate::densemath::fro_dist(target, &aligned)
}
