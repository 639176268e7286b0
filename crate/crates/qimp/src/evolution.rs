//! GKSL generators, propagation, reduced states and complete-positivity
//! checks.
//!
//! Superoperators act on column-stacked density matrices: `vec(rho)` lists
//! the columns of `rho` in order, so `vec(A rho B) = (B^T (x) A) vec(rho)`.
//! Propagation defaults to the matrix exponential, which is exact for these
//! time-independent generators; an adaptive Runge-Kutta integrator exists as
//! an independent cross-check.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::densemath::{dagger, expm, fro_dist, hermitian_eigensystem, identity, CMatrix, DenseMathError};
use crate::dissipators::JumpOperator;

/// Tolerance for the density-matrix invariants (Hermiticity, trace,
/// positivity), one order above the matrix-exponential accuracy target.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum EvolutionError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("propagation time must be >= 0, got {0}")]
    NegativeTime(f64),
    #[error("time grid must be strictly increasing and non-negative")]
    BadGrid,
    #[error("state invariant violated at t = {time}: {detail} (min eigenvalue {min_eigenvalue:.3e})")]
    StateInvariant { time: f64, min_eigenvalue: f64, detail: String },
    #[error(transparent)]
    DenseMath(#[from] DenseMathError),
}

/// A 4x4 density matrix of the qubit-impurity pair: Hermitian, unit trace,
/// positive semidefinite, all to [`STATE_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix4 {
    matrix: CMatrix,
}

impl DensityMatrix4 {
    pub fn new(matrix: CMatrix) -> Result<Self, EvolutionError> {
        if matrix.nrows() != 4 || matrix.ncols() != 4 {
            return Err(EvolutionError::DimensionMismatch { expected: 4, got: matrix.nrows() });
        }
        let herm_dev = fro_dist(&matrix, &matrix.adjoint());
        if herm_dev > STATE_TOL {
            return Err(EvolutionError::StateInvariant {
                time: f64::NAN,
                min_eigenvalue: f64::NAN,
                detail: format!("Hermiticity deviation {herm_dev:.3e}"),
            });
        }
        let trace_dev = (matrix.trace().re - 1.0).abs() + matrix.trace().im.abs();
        if trace_dev > STATE_TOL {
            return Err(EvolutionError::StateInvariant {
                time: f64::NAN,
                min_eigenvalue: f64::NAN,
                detail: format!("trace deviation {trace_dev:.3e}"),
            });
        }
        let state = DensityMatrix4 { matrix };
        let min_eig = state.min_eigenvalue();
        if min_eig < -STATE_TOL {
            return Err(EvolutionError::StateInvariant {
                time: f64::NAN,
                min_eigenvalue: min_eig,
                detail: "negative eigenvalue".into(),
            });
        }
        Ok(state)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace_deviation(&self) -> f64 {
        (self.matrix.trace() - C64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        fro_dist(&self.matrix, &self.matrix.adjoint())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = (&self.matrix + self.matrix.adjoint()).scale(0.5);
        let (vals, _) = hermitian_eigensystem(&sym).expect("symmetrised state is Hermitian");
        vals[0]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuperopKind {
    Generator,
    Propagator,
}

/// A 16x16 superoperator in the column-stacking convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    pub matrix: CMatrix,
    pub kind: SuperopKind,
}

/// Column-stacking vectorisation.
pub fn vectorize(rho: &CMatrix) -> Vec<C64> {
    let n = rho.nrows();
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            v[i + n * j] = rho[(i, j)];
        }
    }
    v
}

pub fn unvectorize(v: &[C64], n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| v[i + n * j])
}

/// GKSL generator
/// `L = -i(I (x) H - H^T (x) I) + sum_k g_k [conj(L_k) (x) L_k
///      - (I (x) L_k'L_k + (L_k'L_k)^T (x) I) / 2]`
/// with the dissipator convention `D[L] rho = L rho L' - {L'L, rho}/2`.
pub fn build_liouvillian(
    h: &CMatrix,
    jumps: &[JumpOperator],
) -> Result<Superoperator, EvolutionError> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(EvolutionError::DimensionMismatch { expected: n, got: h.ncols() });
    }
    let eye = identity(n);
    let i = C64::new(0.0, 1.0);
    let mut gen = (eye.kronecker(h) - h.transpose().kronecker(&eye)) * (-i);
    for jump in jumps {
        if jump.matrix.nrows() != n || jump.matrix.ncols() != n {
            return Err(EvolutionError::DimensionMismatch { expected: n, got: jump.matrix.nrows() });
        }
        let l = &jump.matrix;
        let ldl = dagger(l) * l;
        let term = l.conjugate().kronecker(l)
            - (eye.kronecker(&ldl) + ldl.transpose().kronecker(&eye)).scale(0.5);
        gen += term.scale(jump.rate);
    }
    Ok(Superoperator { matrix: gen, kind: SuperopKind::Generator })
}

/// Solution operator `exp(t L)` of a generator.
pub fn propagate(gen: &Superoperator, t: f64) -> Result<Superoperator, EvolutionError> {
    assert_eq!(gen.kind, SuperopKind::Generator, "propagate expects a generator");
    if t < 0.0 || t.is_nan() {
        return Err(EvolutionError::NegativeTime(t));
    }
    let matrix = expm(&gen.matrix.scale(t))?;
    Ok(Superoperator { matrix, kind: SuperopKind::Propagator })
}

/// Apply a superoperator to a density matrix (no state validation).
pub fn apply(superop: &Superoperator, rho: &CMatrix) -> CMatrix {
    let n = rho.nrows();
    let v = vectorize(rho);
    let v = nalgebra::DVector::from_vec(v);
    let w = &superop.matrix * v;
    unvectorize(w.as_slice(), n)
}

/// Integration backend for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Fresh matrix exponential per grid point (default; exact).
    MatrixExponential,
    /// Adaptive embedded Runge-Kutta pair, rel. tol. 1e-10, abs. tol. 1e-12.
    RungeKutta,
}

/// States and derived observables along a time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix4>,
    /// Reduced qubit coherence rho^Q_01 at each time.
    pub coherence: Vec<C64>,
    pub qubit_populations: Vec<[f64; 2]>,
    pub impurity_populations: Vec<[f64; 2]>,
}

/// Evolve an initial state along `times` under a GKSL generator.
///
/// Every produced state is validated against the [`DensityMatrix4`]
/// invariants; a violation aborts with the offending time and eigenvalue.
pub fn evolve(
    rho0: &DensityMatrix4,
    gen: &Superoperator,
    times: &[f64],
    integrator: Integrator,
) -> Result<Trajectory, EvolutionError> {
    assert_eq!(gen.kind, SuperopKind::Generator, "evolve expects a generator");
    if times.is_empty()
        || times[0] < 0.0
        || times.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(EvolutionError::BadGrid);
    }

    let raw_states: Vec<CMatrix> = match integrator {
        Integrator::MatrixExponential => times
            .iter()
            .map(|&t| propagate(gen, t).map(|p| apply(&p, rho0.matrix())))
            .collect::<Result<_, _>>()?,
        Integrator::RungeKutta => rk_states(rho0, gen, times),
    };

    let mut traj = Trajectory {
        times: times.to_vec(),
        states: Vec::with_capacity(times.len()),
        coherence: Vec::with_capacity(times.len()),
        qubit_populations: Vec::with_capacity(times.len()),
        impurity_populations: Vec::with_capacity(times.len()),
    };
    for (&t, raw) in times.iter().zip(raw_states) {
        let state = DensityMatrix4::new(raw).map_err(|e| match e {
            EvolutionError::StateInvariant { min_eigenvalue, detail, .. } => {
                EvolutionError::StateInvariant { time: t, min_eigenvalue, detail }
            }
            other => other,
        })?;
        let q = partial_trace_impurity(&state);
        let imp = partial_trace_qubit(&state);
        traj.coherence.push(q[(0, 1)]);
        traj.qubit_populations.push([q[(0, 0)].re, q[(1, 1)].re]);
        traj.impurity_populations.push([imp[(0, 0)].re, imp[(1, 1)].re]);
        traj.states.push(state);
    }
    Ok(traj)
}

fn rk_states(rho0: &DensityMatrix4, gen: &Superoperator, times: &[f64]) -> Vec<CMatrix> {
    let mut y = nalgebra::DVector::from_vec(vectorize(rho0.matrix()));
    let mut t = 0.0f64;
    let mut h = 1e-2 / one_norm_bound(&gen.matrix).max(1.0);
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        if target > t {
            y = dopri5(&gen.matrix, y, t, target, &mut h);
            t = target;
        }
        out.push(unvectorize(y.as_slice(), rho0.matrix().nrows()));
    }
    out
}

/// Dormand-Prince 5(4) with proportional step control on the linear system
/// `y' = G y`. The suggested step `h` persists across calls.
fn dopri5(
    g: &CMatrix,
    mut y: nalgebra::DVector<C64>,
    t0: f64,
    t1: f64,
    suggested: &mut f64,
) -> nalgebra::DVector<C64> {
    const RTOL: f64 = 1e-10;
    const ATOL: f64 = 1e-12;
    let f = |y: &nalgebra::DVector<C64>| g * y;

    let mut t = t0;
    while t < t1 {
        let h = (*suggested).min(t1 - t);
        let k1 = f(&y);
        let k2 = f(&(&y + &k1 * C64::new(h / 5.0, 0.0)));
        let k3 = f(&(&y + &k1 * C64::new(3.0 * h / 40.0, 0.0) + &k2 * C64::new(9.0 * h / 40.0, 0.0)));
        let k4 = f(&(&y
            + &k1 * C64::new(44.0 * h / 45.0, 0.0)
            + &k2 * C64::new(-56.0 * h / 15.0, 0.0)
            + &k3 * C64::new(32.0 * h / 9.0, 0.0)));
        let k5 = f(&(&y
            + &k1 * C64::new(19372.0 * h / 6561.0, 0.0)
            + &k2 * C64::new(-25360.0 * h / 2187.0, 0.0)
            + &k3 * C64::new(64448.0 * h / 6561.0, 0.0)
            + &k4 * C64::new(-212.0 * h / 729.0, 0.0)));
        let k6 = f(&(&y
            + &k1 * C64::new(9017.0 * h / 3168.0, 0.0)
            + &k2 * C64::new(-355.0 * h / 33.0, 0.0)
            + &k3 * C64::new(46732.0 * h / 5247.0, 0.0)
            + &k4 * C64::new(49.0 * h / 176.0, 0.0)
            + &k5 * C64::new(-5103.0 * h / 18656.0, 0.0)));
        let y5 = &y
            + &k1 * C64::new(35.0 * h / 384.0, 0.0)
            + &k3 * C64::new(500.0 * h / 1113.0, 0.0)
            + &k4 * C64::new(125.0 * h / 192.0, 0.0)
            + &k5 * C64::new(-2187.0 * h / 6784.0, 0.0)
            + &k6 * C64::new(11.0 * h / 84.0, 0.0);
        let k7 = f(&y5);
        let y4 = &y
            + &k1 * C64::new(5179.0 * h / 57600.0, 0.0)
            + &k3 * C64::new(7571.0 * h / 16695.0, 0.0)
            + &k4 * C64::new(393.0 * h / 640.0, 0.0)
            + &k5 * C64::new(-92097.0 * h / 339200.0, 0.0)
            + &k6 * C64::new(187.0 * h / 2100.0, 0.0)
            + &k7 * C64::new(h / 40.0, 0.0);

        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            let scale = ATOL + RTOL * y[i].norm().max(y5[i].norm());
            err = err.max((y5[i] - y4[i]).norm() / scale);
        }
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        *suggested = h * factor.clamp(0.2, 5.0);
    }
    y
}

fn one_norm_bound(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Reduced qubit state `Tr_I rho`.
pub fn partial_trace_impurity(rho: &DensityMatrix4) -> CMatrix {
    let m = rho.matrix();
    CMatrix::from_fn(2, 2, |q, qp| m[(2 * q, 2 * qp)] + m[(2 * q + 1, 2 * qp + 1)])
}

/// Reduced impurity state `Tr_Q rho`.
pub fn partial_trace_qubit(rho: &DensityMatrix4) -> CMatrix {
    let m = rho.matrix();
    CMatrix::from_fn(2, 2, |i, ip| m[(i, ip)] + m[(2 + i, 2 + ip)])
}

/// Off-diagonal element `(Tr_I rho)_01`.
pub fn qubit_coherence(rho: &DensityMatrix4) -> C64 {
    partial_trace_impurity(rho)[(0, 1)]
}

/// Choi matrix of a propagator: block (j, l) holds the image of |j><l|.
pub fn choi_matrix(prop: &Superoperator) -> CMatrix {
    assert_eq!(prop.kind, SuperopKind::Propagator, "Choi matrix expects a propagator");
    let d = (prop.matrix.nrows() as f64).sqrt() as usize;
    let mut choi = CMatrix::zeros(d * d, d * d);
    for j in 0..d {
        for l in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e[(j, l)] = C64::new(1.0, 0.0);
            let image = apply(prop, &e);
            for a in 0..d {
                for b in 0..d {
                    choi[(d * j + a, d * l + b)] = image[(a, b)];
                }
            }
        }
    }
    choi
}

/// Outcome of a complete-positivity / trace-preservation check.
#[derive(Debug, Clone, Copy)]
pub struct CpReport {
    pub is_cp: bool,
    pub min_eigenvalue: f64,
    /// `||Tr_out J - I||_F`, zero for a trace-preserving map.
    pub tp_deviation: f64,
}

/// Complete positivity through the Choi spectrum; CP iff the smallest
/// eigenvalue is >= -tol.
pub fn is_completely_positive(prop: &Superoperator, tol: f64) -> CpReport {
    let choi = choi_matrix(prop);
    let d = (choi.nrows() as f64).sqrt() as usize;
    let sym = (&choi + choi.adjoint()).scale(0.5);
    let (vals, _) = hermitian_eigensystem(&sym).expect("symmetrised Choi matrix is Hermitian");
    let min_eigenvalue = vals[0];

    let trace_out = CMatrix::from_fn(d, d, |j, l| {
        (0..d).map(|a| choi[(d * j + a, d * l + a)]).sum()
    });
    let tp_deviation = fro_dist(&trace_out, &identity(d));

    CpReport { is_cp: min_eigenvalue >= -tol, min_eigenvalue, tp_deviation }
}

/// Default tolerance for CP checks.
pub const CP_TOL: f64 = 1e-10;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemath::{fro_norm, kron, matrix_re};
    use crate::dissipators::{local_jump_operators, JumpLabel};
    use crate::model::{build_hamiltonian, initial_state, Beta, SystemParams};

    fn crossover_params(g: f64) -> SystemParams {
        SystemParams {
            epsilon: 20.0,
            delta: 0.0,
            v: 2.0,
            epsilon_i: 20.0,
            beta: Beta::Infinite,
            gamma_minus: 2.0 / g,
            delta_p0: 0.0,
        }
    }

    fn plus_state(p: &SystemParams) -> DensityMatrix4 {
        initial_state(p, C64::new(0.5, 0.0), 0.5).unwrap()
    }

    fn grid(t_max: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn vec_unvec_column_stacking() {
        let a = matrix_re(2, 2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let v = vectorize(&a);
        // columns stacked: (1, 3, 2, 4)
        assert_eq!(v[0].re, 1.0);
        assert_eq!(v[1].re, 3.0);
        assert_eq!(v[2].re, 2.0);
        assert_eq!(v[3].re, 4.0);
        assert_eq!(unvectorize(&v, 2), a);
    }

    #[test]
    fn vectorization_identity_for_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let mut rand_m = || {
            CMatrix::from_fn(4, 4, |_, _| {
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
        };
        let (a, rho, b) = (rand_m(), rand_m(), rand_m());
        let lhs = vectorize(&(&a * &rho * &b));
        let super_m = b.transpose().kronecker(&a);
        let rhs = &super_m * nalgebra::DVector::from_vec(vectorize(&rho));
        for (x, y) in lhs.iter().zip(rhs.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_hamiltonian_no_jumps_gives_zero_generator() {
        let h = CMatrix::zeros(4, 4);
        let gen = build_liouvillian(&h, &[]).unwrap();
        assert!(fro_norm(&gen.matrix) == 0.0);
    }

    #[test]
    fn coherent_generator_preserves_spectrum() {
        let p = crossover_params(2.0);
        let h = build_hamiltonian(&p).unwrap();
        let gen = build_liouvillian(&h, &[]).unwrap();
        let rho0 = plus_state(&p);
        let traj = evolve(&rho0, &gen, &grid(1.0, 6), Integrator::MatrixExponential).unwrap();
        let (ref_vals, _) = hermitian_eigensystem(rho0.matrix()).unwrap();
        for s in &traj.states {
            let (vals, _) = hermitian_eigensystem(s.matrix()).unwrap();
            for (a, b) in vals.iter().zip(ref_vals.iter()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    /// Oracle: the matrix-form right-hand side -i[H, rho] + sum g D[L] rho.
    fn rhs_matrix_form(h: &CMatrix, jumps: &[JumpOperator], rho: &CMatrix) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        let mut out = (h * rho - rho * h) * (-i);
        for j in jumps {
            let l = &j.matrix;
            let ld = dagger(l);
            let ldl = &ld * l;
            out += ((l * rho * &ld) - (&ldl * rho + rho * &ldl).scale(0.5)).scale(j.rate);
        }
        out
    }

    #[test]
    fn liouvillian_action_matches_matrix_form_oracle() {
        let p = crossover_params(6.0);
        let h = build_hamiltonian(&p).unwrap();
        let jumps = local_jump_operators(&p).unwrap();
        let gen = build_liouvillian(&h, &jumps).unwrap();
        let rho = plus_state(&p);
        let via_super = apply(&gen, rho.matrix());
        let via_matrix = rhs_matrix_form(&h, &jumps, rho.matrix());
        assert!(fro_dist(&via_super, &via_matrix) < 1e-12);
    }

    #[test]
    fn propagate_time_zero_is_identity() {
        let p = crossover_params(2.0);
        let h = build_hamiltonian(&p).unwrap();
        let gen = build_liouvillian(&h, &local_jump_operators(&p).unwrap()).unwrap();
        let prop = propagate(&gen, 0.0).unwrap();
        assert!(fro_dist(&prop.matrix, &identity(16)) < 1e-14);
        assert!(matches!(propagate(&gen, -0.1), Err(EvolutionError::NegativeTime(_))));
    }

    #[test]
    fn propagators_compose_as_a_semigroup() {
        let p = crossover_params(2.0);
        let h = build_hamiltonian(&p).unwrap();
        let gen = build_liouvillian(&h, &local_jump_operators(&p).unwrap()).unwrap();
        let p1 = propagate(&gen, 0.7).unwrap();
        let p2 = propagate(&gen, 1.9).unwrap();
        let p12 = propagate(&gen, 2.6).unwrap();
        assert!(fro_dist(&(&p2.matrix * &p1.matrix), &p12.matrix) < 1e-10);
    }

    #[test]
    fn trace_preserved_along_trajectories() {
        let p = crossover_params(6.0);
        let h = build_hamiltonian(&p).unwrap();
        let gen = build_liouvillian(&h, &local_jump_operators(&p).unwrap()).unwrap();
        // dual action on the vectorized identity annihilates the generator
        let id_vec = nalgebra::DVector::from_vec(vectorize(&identity(4)));
        let dual = gen.matrix.adjoint() * &id_vec;
        assert!(dual.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);

        let traj = evolve(&plus_state(&p), &gen, &grid(15.0, 40), Integrator::MatrixExponential)
            .unwrap();
        for s in &traj.states {
            assert!(s.trace_deviation() <= 1e-10);
            assert!(s.hermiticity_deviation() <= 1e-10);
            assert!(s.min_eigenvalue() >= -1e-10);
        }
    }

    #[test]
    fn zero_generator_keeps_state_constant() {
        let p = crossover_params(2.0);
        let gen = Superoperator { matrix: CMatrix::zeros(16, 16), kind: SuperopKind::Generator };
        let rho0 = plus_state(&p);
        let traj = evolve(&rho0, &gen, &grid(3.0, 5), Integrator::MatrixExponential).unwrap();
        for s in &traj.states {
            assert!(fro_dist(s.matrix(), rho0.matrix()) < 1e-13);
        }
    }

    #[test]
    fn qubit_populations_frozen_in_pure_dephasing() {
        for g in [0.5, 2.0, 6.0] {
            let p = crossover_params(g);
            let h = build_hamiltonian(&p).unwrap();
            let gen = build_liouvillian(&h, &local_jump_operators(&p).unwrap()).unwrap();
            let traj = evolve(
                &plus_state(&p),
                &gen,
                &grid(10.0 / p.gamma(), 50),
                Integrator::MatrixExponential,
            )
            .unwrap();
            for pops in &traj.qubit_populations {
                assert!((pops[0] - 0.5).abs() < 1e-10);
                assert!((pops[1] - 0.5).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn integrators_agree() {
        let p = crossover_params(6.0);
        let h = build_hamiltonian(&p).unwrap();
        let gen = build_liouvillian(&h, &local_jump_operators(&p).unwrap()).unwrap();
        let rho0 = plus_state(&p);
        let times = grid(10.0 / p.gamma(), 60);
        let a = evolve(&rho0, &gen, &times, Integrator::MatrixExponential).unwrap();
        let b = evolve(&rho0, &gen, &times, Integrator::RungeKutta).unwrap();
        let worst = a
            .states
            .iter()
            .zip(b.states.iter())
            .map(|(x, y)| fro_dist(x.matrix(), y.matrix()))
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "integrator disagreement {worst:.3e}");
    }

    #[test]
    fn bad_grids_are_rejected() {
        let gen = Superoperator { matrix: CMatrix::zeros(16, 16), kind: SuperopKind::Generator };
        let p = crossover_params(2.0);
        let rho0 = plus_state(&p);
        for bad in [vec![], vec![-1.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.5]] {
            assert!(matches!(
                evolve(&rho0, &gen, &bad, Integrator::MatrixExponential),
                Err(EvolutionError::BadGrid)
            ));
        }
    }

    #[test]
    fn partial_traces_recover_product_factors() {
        let q = matrix_re(2, 2, &[0.7, 0.1, 0.1, 0.3]).unwrap();
        let i = matrix_re(2, 2, &[0.6, 0.0, 0.0, 0.4]).unwrap();
        let rho = DensityMatrix4::new(kron(&q, &i)).unwrap();
        assert!(fro_dist(&partial_trace_impurity(&rho), &q) < 1e-14);
        assert!(fro_dist(&partial_trace_qubit(&rho), &i) < 1e-14);

        let mixed = DensityMatrix4::new(identity(4).scale(0.25)).unwrap();
        assert!(fro_dist(&partial_trace_impurity(&mixed), &identity(2).scale(0.5)) < 1e-15);
        assert!(fro_dist(&partial_trace_qubit(&mixed), &identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn bell_state_reductions_are_maximally_mixed() {
        // (|00> + |11>)/sqrt(2) in the joint ordering has support on
        // indices 0 and 3.
        let mut m = CMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = C64::new(0.5, 0.0);
        }
        let rho = DensityMatrix4::new(m).unwrap();
        assert!(fro_dist(&partial_trace_impurity(&rho), &identity(2).scale(0.5)) < 1e-15);
        assert!(fro_dist(&partial_trace_qubit(&rho), &identity(2).scale(0.5)) < 1e-15);
    }

    #[test]
    fn qubit_coherence_reads_the_reduced_off_diagonal() {
        let p = crossover_params(2.0);
        let rho = plus_state(&p);
        assert!((qubit_coherence(&rho) - C64::new(0.5, 0.0)).norm() < 1e-15);

        let diag = DensityMatrix4::new(identity(4).scale(0.25)).unwrap();
        assert_eq!(qubit_coherence(&diag), C64::new(0.0, 0.0));
    }

    #[test]
    fn choi_of_identity_is_scaled_projector() {
        let prop = Superoperator { matrix: identity(16), kind: SuperopKind::Propagator };
        let choi = choi_matrix(&prop);
        let report = is_completely_positive(&prop, CP_TOL);
        assert!(report.is_cp);
        assert!(report.min_eigenvalue >= -1e-14);
        assert!(report.tp_deviation < 1e-14);
        let sym = (&choi + choi.adjoint()).scale(0.5);
        let (vals, _) = hermitian_eigensystem(&sym).unwrap();
        // rank-1 with eigenvalue 4 = d
        assert!((vals[15] - 4.0).abs() < 1e-12);
        assert!(vals[..15].iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn choi_of_unitary_propagator_is_rank_one() {
        let p = crossover_params(2.0);
        let h = build_hamiltonian(&p).unwrap();
        let gen = build_liouvillian(&h, &[]).unwrap();
        let prop = propagate(&gen, 0.8).unwrap();
        let report = is_completely_positive(&prop, CP_TOL);
        assert!(report.is_cp && report.tp_deviation < 1e-11);
        let choi = choi_matrix(&prop);
        let sym = (&choi + choi.adjoint()).scale(0.5);
        let (vals, _) = hermitian_eigensystem(&sym).unwrap();
        assert!((vals[15] - 4.0).abs() < 1e-10);
        assert!(vals[..15].iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn local_propagator_is_cptp() {
        let p = crossover_params(2.0);
        let h = build_hamiltonian(&p).unwrap();
        let gen = build_liouvillian(&h, &local_jump_operators(&p).unwrap()).unwrap();
        let prop = propagate(&gen, 1.0 / p.gamma()).unwrap();
        let report = is_completely_positive(&prop, CP_TOL);
        assert!(report.is_cp, "min eigenvalue {:.3e}", report.min_eigenvalue);
        assert!(report.tp_deviation < 1e-10);
    }

    #[test]
    fn state_invariant_violation_reports_time() {
        // A generator that inflates the trace.
        let gen = Superoperator {
            matrix: identity(16),
            kind: SuperopKind::Generator,
        };
        let p = crossover_params(2.0);
        let err = evolve(&plus_state(&p), &gen, &[0.0, 1.0], Integrator::MatrixExponential)
            .unwrap_err();
        match err {
            EvolutionError::StateInvariant { time, .. } => assert_eq!(time, 1.0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn jump_rate_labels_preserved() {
        let p = crossover_params(2.0);
        let jumps = local_jump_operators(&p).unwrap();
        assert_eq!(jumps[0].label, JumpLabel::LocalEmission);
        assert!(jumps.iter().all(|j| j.rate > 0.0));
    }
}
