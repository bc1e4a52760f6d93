//! Quantum Fisher information machinery: symmetric logarithmic derivatives,
//! QFI and the QFI matrix by three independent routes (SLD, Liouville-space
//! vectorization, Bloch/X-block closed forms), classical Fisher information
//! of a measurement, Cramér-Rao bounds, and the SLD-eigenbasis optimal
//! measurement.
//!
//! All QFI values are gauge-free: they are computed from the state
//! derivative d(rho)/d(theta), never from eigenvector derivatives.

use num_complex::Complex64 as C64;

use crate::matcore::{
    eigh, expi_hermitian, pinv_hermitian, ComplexMatrix, EigenDecomposition,
};
use crate::states::{validate_with, DensityMatrix, PureState};
use crate::{tol, Error, Result};

type Evaluator = Box<dyn Fn(&[f64]) -> Result<DensityMatrix> + Send + Sync>;

/// Differentiable map theta -> rho(theta).
pub enum FamilyMode {
    /// rho(t) = e^{-i t H} rho0 e^{i t H}; single parameter, exact derivative.
    Unitary { hamiltonian: ComplexMatrix, rho0: DensityMatrix },
    /// User-supplied evaluator differentiated by central finite differences.
    Evaluator { f: Evaluator, n_params: usize },
}

pub struct ParametricFamily {
    pub mode: FamilyMode,
    pub theta0: Vec<f64>,
    /// Central-difference step for evaluator mode.
    pub fd_step: f64,
}

impl ParametricFamily {
    pub fn unitary(hamiltonian: ComplexMatrix, rho0: DensityMatrix, t0: f64) -> Self {
        ParametricFamily {
            mode: FamilyMode::Unitary { hamiltonian, rho0 },
            theta0: vec![t0],
            fd_step: 1e-4,
        }
    }

    pub fn evaluator(
        f: impl Fn(&[f64]) -> Result<DensityMatrix> + Send + Sync + 'static,
        theta0: Vec<f64>,
        fd_step: f64,
    ) -> Self {
        let n_params = theta0.len();
        ParametricFamily { mode: FamilyMode::Evaluator { f: Box::new(f), n_params }, theta0, fd_step }
    }

    pub fn n_params(&self) -> usize {
        match &self.mode {
            FamilyMode::Unitary { .. } => 1,
            FamilyMode::Evaluator { n_params, .. } => *n_params,
        }
    }

    /// The state at theta0. Evaluator outputs are validated.
    pub fn state(&self) -> Result<DensityMatrix> {
        match &self.mode {
            FamilyMode::Unitary { hamiltonian, rho0 } => {
                let u = expi_hermitian(hamiltonian, self.theta0[0])?;
                let m = u.mul(rho0.mat()).mul(&u.adjoint());
                Ok(DensityMatrix::from_parts_unchecked(m, rho0.dims().to_vec()))
            }
            FamilyMode::Evaluator { f, .. } => {
                let rho = f(&self.theta0)?;
                validate_with(rho.mat(), rho.dims(), &tol::Tolerances::default())
                    .map_err(|v| Error::InvalidState(format!("evaluator output invalid: {v:?}")))
            }
        }
    }
}

/// Derivative of rho with respect to parameter `k` at theta0. Unitary mode
/// is exact (-i[H, rho]); evaluator mode uses central differences with a
/// Richardson h/2 consistency gate and symmetrizes the result.
pub fn d_rho(family: &ParametricFamily, k: usize) -> Result<ComplexMatrix> {
    if k >= family.n_params() {
        return Err(Error::BadSubsystem { index: k, count: family.n_params() });
    }
    match &family.mode {
        FamilyMode::Unitary { hamiltonian, .. } => {
            let rho = family.state()?;
            Ok(hamiltonian.commutator(rho.mat()).scale(C64::new(0.0, -1.0)))
        }
        FamilyMode::Evaluator { f, .. } => {
            let central = |h: f64| -> Result<ComplexMatrix> {
                let mut tp = family.theta0.clone();
                let mut tm = family.theta0.clone();
                tp[k] += h;
                tm[k] -= h;
                let rp = f(&tp)?;
                let rm = f(&tm)?;
                for r in [&rp, &rm] {
                    validate_with(r.mat(), r.dims(), &tol::Tolerances::default()).map_err(
                        |v| Error::InvalidState(format!("evaluator output at theta +- h: {v:?}")),
                    )?;
                }
                Ok(rp.mat().sub(rm.mat()).scale_re(0.5 / h))
            };
            let d1 = central(family.fd_step)?;
            let d2 = central(family.fd_step / 2.0)?;
            let gap = d1.sub(&d2).max_abs() / d1.max_abs().max(1.0);
            if gap > 1e-5 {
                return Err(Error::StepTooLarge { gap });
            }
            // Richardson extrapolation of the two central estimates.
            let refined = d2.scale_re(4.0 / 3.0).sub(&d1.scale_re(1.0 / 3.0));
            let herm = refined.hermitize();
            if refined.sub(&herm).max_abs() > 1e-8 * herm.max_abs().max(1.0) {
                return Err(Error::NonHermitian { defect: refined.sub(&herm).max_abs() });
            }
            Ok(herm)
        }
    }
}

/// Symmetric logarithmic derivative: the Hermitian solution of
/// d(rho) = (L rho + rho L)/2, assembled spectrally as
/// L_ij = 2 <i|d(rho)|j> / (lambda_i + lambda_j), kernel blocks zeroed.
pub fn sld(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if drho.rows() != rho.dim() {
        return Err(Error::DimMismatch("derivative size differs from the state".into()));
    }
    let eig = eigh(rho.mat())?;
    let n = rho.dim();
    let v = &eig.eigenvectors;
    let d_in_basis = v.adjoint().mul(drho).mul(v);
    let mut l_in_basis = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let denom = eig.eigenvalues[i] + eig.eigenvalues[j];
            if denom > tol::SPECTRAL_CUTOFF {
                l_in_basis[(i, j)] = d_in_basis[(i, j)].scale(2.0 / denom).into();
            }
        }
    }
    Ok(v.mul(&l_in_basis).mul(&v.adjoint()))
}

/// QFI via the SLD route: F_Q = Tr(rho L^2).
pub fn qfi(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<f64> {
    let l = sld(rho, drho)?;
    Ok(rho.mat().mul(&l).mul(&l).trace().re.max(0.0))
}

/// QFI via the spectral sum 2 sum_{ij} |<i|d(rho)|j>|^2 / (lambda_i + lambda_j),
/// the independent second route.
pub fn qfi_spectral(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<f64> {
    let eig = eigh(rho.mat())?;
    let n = rho.dim();
    let v = &eig.eigenvectors;
    let d_in_basis = v.adjoint().mul(drho).mul(v);
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let denom = eig.eigenvalues[i] + eig.eigenvalues[j];
            if denom > tol::SPECTRAL_CUTOFF {
                acc += 2.0 * d_in_basis[(i, j)].norm_sqr() / denom;
            }
        }
    }
    Ok(acc)
}

/// QFI of a pure state under e^{-i theta H}: F_Q = 4 Var(H).
pub fn qfi_pure_unitary(psi: &PureState, h: &ComplexMatrix) -> Result<f64> {
    let n: usize = psi.dims().iter().product();
    if h.rows() != n {
        return Err(Error::DimMismatch("generator size differs from the state".into()));
    }
    let hv = h.matvec(psi.amps());
    let mean: C64 = psi.amps().iter().zip(&hv).map(|(a, b)| a.conj() * b).sum();
    let h2v = h.matvec(&hv);
    let mean2: C64 = psi.amps().iter().zip(&h2v).map(|(a, b)| a.conj() * b).sum();
    Ok(4.0 * (mean2.re - mean.re * mean.re).max(0.0))
}

/// QFI matrix via per-parameter SLDs: F_{mu nu} = Tr(rho {L_mu, L_nu})/2.
pub fn qfim(family: &ParametricFamily) -> Result<Vec<Vec<f64>>> {
    let rho = family.state()?;
    let n = family.n_params();
    let mut slds = Vec::with_capacity(n);
    for k in 0..n {
        slds.push(sld(&rho, &d_rho(family, k)?)?);
    }
    qfim_from_slds(&rho, &slds)
}

/// QFI matrix from precomputed derivatives (shares the SLD route).
pub fn qfim_from_derivatives(
    rho: &DensityMatrix,
    drho_list: &[ComplexMatrix],
) -> Result<Vec<Vec<f64>>> {
    let slds: Vec<ComplexMatrix> =
        drho_list.iter().map(|d| sld(rho, d)).collect::<Result<_>>()?;
    qfim_from_slds(rho, &slds)
}

fn qfim_from_slds(rho: &DensityMatrix, slds: &[ComplexMatrix]) -> Result<Vec<Vec<f64>>> {
    let n = slds.len();
    let mut f = vec![vec![0.0f64; n]; n];
    for mu in 0..n {
        for nu in mu..n {
            let v = 0.5 * rho.mat().mul(&slds[mu].anticommutator(&slds[nu])).trace().re;
            f[mu][nu] = v;
            f[nu][mu] = v;
        }
    }
    Ok(f)
}

/// QFI matrix in Liouville space:
/// F_{mu nu} = 2 vec[d_mu rho]^dag (rho x 1 + 1 x rho*)^+ vec[d_nu rho],
/// with a pseudo-inverse cutoff of 1e-12 on the spectrum. Row-major vec
/// matches the Kronecker convention of this crate.
pub fn qfim_vectorized(
    rho: &DensityMatrix,
    drho_list: &[ComplexMatrix],
) -> Result<Vec<Vec<f64>>> {
    let d = rho.dim();
    let eye = ComplexMatrix::identity(d);
    let m = rho.mat().kron(&eye).add(&eye.kron(&rho.mat().conj()));
    let minv = pinv_hermitian(&m, tol::SPECTRAL_CUTOFF)?;
    let vecs: Vec<Vec<C64>> = drho_list.iter().map(|dm| dm.vec_row_major()).collect();
    let n = drho_list.len();
    let mut f = vec![vec![0.0f64; n]; n];
    for mu in 0..n {
        let mv = minv.matvec(&vecs[mu]);
        for nu in 0..n {
            let val: C64 = vecs[nu].iter().zip(&mv).map(|(a, b)| b.conj() * a).sum();
            f[mu][nu] = 2.0 * val.re;
        }
    }
    // Symmetrize away roundoff.
    for mu in 0..n {
        for nu in (mu + 1)..n {
            let v = 0.5 * (f[mu][nu] + f[nu][mu]);
            f[mu][nu] = v;
            f[nu][mu] = v;
        }
    }
    Ok(f)
}

/// Single-qubit Bloch-vector QFI matrix:
/// F_{mu nu} = dr_mu . dr_nu + (r . dr_mu)(r . dr_nu)/(1 - |r|^2) for mixed
/// states; the pure case |r| = 1 keeps only the first term.
pub fn qfim_bloch_qubit(r: [f64; 3], dr_list: &[[f64; 3]]) -> Result<Vec<Vec<f64>>> {
    let norm2 = r.iter().map(|x| x * x).sum::<f64>();
    let norm = norm2.sqrt();
    if norm > 1.0 + 1e-10 {
        return Err(Error::BlochOutOfBall { norm });
    }
    let pure = norm >= 1.0 - 1e-9;
    let n = dr_list.len();
    let mut f = vec![vec![0.0f64; n]; n];
    for mu in 0..n {
        for nu in mu..n {
            let dot: f64 = (0..3).map(|i| dr_list[mu][i] * dr_list[nu][i]).sum();
            let v = if pure {
                dot
            } else {
                let rm: f64 = (0..3).map(|i| r[i] * dr_list[mu][i]).sum();
                let rn: f64 = (0..3).map(|i| r[i] * dr_list[nu][i]).sum();
                dot + rm * rn / (1.0 - norm2)
            };
            f[mu][nu] = v;
            f[nu][mu] = v;
        }
    }
    Ok(f)
}

/// QFI matrix of an X-form family as the direct sum of the two 2x2 block
/// contributions: each block of rho and of every derivative lives in either
/// the outer {|00>,|11>} or inner {|01>,|10>} subspace, so the spectral sum
/// splits exactly.
pub fn qfim_xstate_block(
    rho: &DensityMatrix,
    drho_list: &[ComplexMatrix],
) -> Result<Vec<Vec<f64>>> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch("qfim_xstate_block needs dims [2,2]".into()));
    }
    let check_x = |m: &ComplexMatrix| -> bool {
        [(0usize, 1usize), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]
            .iter()
            .all(|&(i, j)| m[(i, j)].norm() < 1e-10)
    };
    if !check_x(rho.mat()) || !drho_list.iter().all(|d| check_x(d)) {
        return Err(Error::InvalidParams("family is not of X form".into()));
    }
    let outer = [0usize, 3];
    let inner = [1usize, 2];
    let n = drho_list.len();
    let mut f = vec![vec![0.0f64; n]; n];
    for idx in [outer, inner] {
        let block =
            ComplexMatrix::from_fn(2, 2, |i, j| rho.mat()[(idx[i], idx[j])]);
        let eig = eigh(&block)?;
        let dblocks: Vec<ComplexMatrix> = drho_list
            .iter()
            .map(|d| {
                let b = ComplexMatrix::from_fn(2, 2, |i, j| d[(idx[i], idx[j])]);
                eig.eigenvectors.adjoint().mul(&b).mul(&eig.eigenvectors)
            })
            .collect();
        for i in 0..2 {
            for j in 0..2 {
                let denom = eig.eigenvalues[i] + eig.eigenvalues[j];
                if denom <= tol::SPECTRAL_CUTOFF {
                    continue;
                }
                for mu in 0..n {
                    for nu in 0..n {
                        f[mu][nu] +=
                            2.0 * (dblocks[mu][(i, j)] * dblocks[nu][(j, i)]).re / denom;
                    }
                }
            }
        }
    }
    Ok(f)
}

/// Classical Fisher information of a POVM, per parameter:
/// F_k = sum_x (d_k p_x)^2 / p_x with p_x = Tr(rho Pi_x); outcomes below
/// 1e-14 are dropped.
pub fn cfi(family: &ParametricFamily, povm: &[ComplexMatrix]) -> Result<Vec<f64>> {
    let rho = family.state()?;
    let d = rho.dim();
    let mut sum = ComplexMatrix::zeros(d, d);
    for (i, e) in povm.iter().enumerate() {
        if e.rows() != d || e.cols() != d {
            return Err(Error::InvalidPOVM(format!("effect {i} has the wrong shape")));
        }
        let eig = eigh(&e.hermitize())?;
        if e.hermiticity_defect() > 1e-10 || eig.eigenvalues[0] < -1e-10 {
            return Err(Error::InvalidPOVM(format!("effect {i} is not PSD Hermitian")));
        }
        sum = sum.add(e);
    }
    if sum.sub(&ComplexMatrix::identity(d)).max_abs() > 1e-10 {
        return Err(Error::InvalidPOVM("effects do not sum to the identity".into()));
    }
    let n = family.n_params();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let drho = d_rho(family, k)?;
        let mut acc = 0.0;
        for e in povm {
            let p = e.mul(rho.mat()).trace().re;
            if p < 1e-14 {
                continue;
            }
            let dp = e.mul(&drho).trace().re;
            acc += dp * dp / p;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Projectors onto the SLD eigenbasis: the measurement that saturates the
/// single-parameter quantum Cramér-Rao bound.
pub fn optimal_measurement(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    let l = sld(rho, drho)?;
    let eig: EigenDecomposition = eigh(&l)?;
    Ok((0..rho.dim())
        .map(|k| {
            let v = eig.eigenvector(k);
            ComplexMatrix::outer(&v, &v)
        })
        .collect())
}

/// Cramér-Rao bound Var >= 1/(n F).
pub fn cramer_rao(fisher: f64, n_trials: usize) -> Result<f64> {
    if fisher <= 0.0 {
        return Err(Error::NonpositiveFisher(fisher));
    }
    if n_trials == 0 {
        return Err(Error::InvalidParams("n_trials must be positive".into()));
    }
    Ok(1.0 / (n_trials as f64 * fisher))
}
