//! Construction, validation, and decomposition of quantum states.
//!
//! Subsystem 0 is always the leftmost tensor factor. Random states are
//! deterministic in the seed (ChaCha8 with Box-Muller Gaussians).

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matcore::{
    self, eigh, lift_operator, partial_trace_mat, pauli, permute_systems_mat, ComplexMatrix, ONE,
    ZERO,
};
use crate::{tol, Error, Result};

/// Hermitian, PSD, unit-trace operator together with its tensor-factor
/// dimension list.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: ComplexMatrix,
}

/// One violated state invariant, with the measured magnitude.
#[derive(Debug, Clone)]
pub struct Violation {
    pub invariant: &'static str,
    pub magnitude: f64,
}

/// Outcome of [`validate`]: either the accepted state or the full list of
/// violated invariants.
pub type ValidationReport = Vec<Violation>;

/// Check Hermiticity, unit trace, and positivity against `tols`.
pub fn validate_with(
    mat: &ComplexMatrix,
    dims: &[usize],
    tols: &tol::Tolerances,
) -> std::result::Result<DensityMatrix, ValidationReport> {
    let mut violations = Vec::new();
    let total: usize = dims.iter().product();
    if !mat.is_square() || mat.rows() != total || dims.is_empty() {
        violations.push(Violation {
            invariant: "shape: square matrix of size prod(dims)",
            magnitude: mat.rows() as f64 - total as f64,
        });
        return Err(violations);
    }
    let scale = mat.max_abs().max(1.0);
    let herm = mat.hermiticity_defect();
    if herm > tols.hermiticity * scale {
        violations.push(Violation { invariant: "hermiticity", magnitude: herm });
    }
    let tr = mat.trace();
    let tr_err = (tr - ONE).norm();
    if tr_err > tols.trace {
        violations.push(Violation { invariant: "unit trace", magnitude: tr_err });
    }
    if violations.is_empty() {
        let eig = eigh(&mat.hermitize()).expect("hermitized matrix");
        let min = eig.eigenvalues[0];
        if min < tols.psd_floor {
            violations.push(Violation { invariant: "positive semidefinite", magnitude: min });
        }
    }
    if violations.is_empty() {
        Ok(DensityMatrix { dims: dims.to_vec(), mat: mat.clone() })
    } else {
        Err(violations)
    }
}

/// Validate against the default tolerances. Diagnostics are returned, not
/// thrown; `DensityMatrix::new` converts them into an error.
pub fn validate(
    mat: &ComplexMatrix,
    dims: &[usize],
) -> std::result::Result<DensityMatrix, ValidationReport> {
    validate_with(mat, dims, &tol::Tolerances::default())
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: &[usize]) -> Result<Self> {
        validate(&mat, dims).map_err(|v| {
            let msg = v
                .iter()
                .map(|x| format!("{} (magnitude {:.3e})", x.invariant, x.magnitude))
                .collect::<Vec<_>>()
                .join("; ");
            Error::InvalidState(msg)
        })
    }

    /// Internal constructor for matrices that are valid by construction.
    pub(crate) fn from_parts_unchecked(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { dims, mat }
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Reinterpret the same operator with a different factorization.
    pub fn with_dims(&self, dims: &[usize]) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() {
            return Err(Error::DimMismatch("with_dims: product differs".into()));
        }
        Ok(DensityMatrix { dims: dims.to_vec(), mat: self.mat.clone() })
    }

    pub fn purity(&self) -> f64 {
        self.mat.mul(&self.mat).trace().re
    }

    /// Reduced state on the subsystems in `keep` (ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let red = partial_trace_mat(&self.mat, &self.dims, keep)?;
        let mut keep_sorted = keep.to_vec();
        keep_sorted.sort_unstable();
        keep_sorted.dedup();
        let dims: Vec<usize> = keep_sorted.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityMatrix::from_parts_unchecked(red, dims))
    }

    pub fn partial_transpose(&self, subsystem: usize) -> Result<ComplexMatrix> {
        matcore::partial_transpose_mat(&self.mat, &self.dims, subsystem)
    }

    /// Reorder tensor factors; `perm[k]` is the old position of factor `k`.
    pub fn permute(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let mat = permute_systems_mat(&self.mat, &self.dims, perm)?;
        let dims = perm.iter().map(|&p| self.dims[p]).collect();
        Ok(DensityMatrix::from_parts_unchecked(mat, dims))
    }

    /// Conjugate by a unitary acting on one subsystem.
    pub fn apply_local_unitary(&self, u: &ComplexMatrix, target: usize) -> Result<DensityMatrix> {
        let lifted = lift_operator(u, &self.dims, target)?;
        let mat = lifted.mul(&self.mat).mul(&lifted.adjoint());
        Ok(DensityMatrix::from_parts_unchecked(mat, self.dims.clone()))
    }
}

/// Normalized pure state amplitudes with a dimension list.
#[derive(Debug, Clone)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(amps: Vec<C64>, dims: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::DimMismatch(format!(
                "{} amplitudes for dims product {}",
                amps.len(),
                total
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("norm {} != 1", norm)));
        }
        Ok(PureState { dims: dims.to_vec(), amps })
    }

    pub fn from_unnormalized(mut amps: Vec<C64>, dims: &[usize]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-15 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        for a in &mut amps {
            *a /= norm;
        }
        PureState::new(amps, dims)
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn to_density(&self) -> DensityMatrix {
        let mat = ComplexMatrix::outer(&self.amps, &self.amps);
        DensityMatrix::from_parts_unchecked(mat, self.dims.clone())
    }

    pub fn permute(&self, perm: &[usize]) -> Result<PureState> {
        let n = self.dims.len();
        if perm.len() != n {
            return Err(Error::BadSubsystem { index: perm.len(), count: n });
        }
        let new_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut amps = vec![ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let im = matcore::index_to_multi(i, &self.dims);
            let ni: Vec<usize> = perm.iter().map(|&p| im[p]).collect();
            amps[matcore::multi_to_index(&ni, &new_dims)] = a;
        }
        Ok(PureState { dims: new_dims, amps })
    }
}

/// The six defining parameters of a two-qubit X state: four real diagonals
/// and two complex anti-diagonals (rho14, rho23).
#[derive(Debug, Clone, Copy)]
pub struct XStateParams {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub a14: C64,
    pub a23: C64,
}

impl XStateParams {
    pub fn new(d: [f64; 4], a14: C64, a23: C64) -> Result<Self> {
        let x = XStateParams { d1: d[0], d2: d[1], d3: d[2], d4: d[3], a14, a23 };
        x.check()?;
        Ok(x)
    }

    pub fn check(&self) -> Result<()> {
        let s = self.d1 + self.d2 + self.d3 + self.d4;
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParams(format!("X-state diagonals sum to {s}, not 1")));
        }
        if self.d1.min(self.d2).min(self.d3).min(self.d4) < -1e-12 {
            return Err(Error::InvalidParams("negative diagonal entry".into()));
        }
        let slack = 1e-9;
        if self.a14.norm() > (self.d1 * self.d4).max(0.0).sqrt() + slack {
            return Err(Error::InvalidParams("|a14| > sqrt(d1 d4) breaks positivity".into()));
        }
        if self.a23.norm() > (self.d2 * self.d3).max(0.0).sqrt() + slack {
            return Err(Error::InvalidParams("|a23| > sqrt(d2 d3) breaks positivity".into()));
        }
        Ok(())
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        self.check()?;
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 0)] = C64::new(self.d1, 0.0);
        m[(1, 1)] = C64::new(self.d2, 0.0);
        m[(2, 2)] = C64::new(self.d3, 0.0);
        m[(3, 3)] = C64::new(self.d4, 0.0);
        m[(0, 3)] = self.a14;
        m[(3, 0)] = self.a14.conj();
        m[(1, 2)] = self.a23;
        m[(2, 1)] = self.a23.conj();
        DensityMatrix::new(m, &[2, 2])
    }

    /// Read X parameters off a density matrix, rejecting non-X entries.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dims() != [2, 2] {
            return Err(Error::DimMismatch("X states are two-qubit".into()));
        }
        let m = rho.mat();
        let mut off = 0.0f64;
        for (i, j) in [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)] {
            off = off.max(m[(i, j)].norm());
        }
        if off > 1e-10 {
            return Err(Error::InvalidParams(format!(
                "matrix is not of X form (off-pattern magnitude {off:.3e})"
            )));
        }
        XStateParams::new(
            [m[(0, 0)].re, m[(1, 1)].re, m[(2, 2)].re, m[(3, 3)].re],
            m[(0, 3)],
            m[(1, 2)],
        )
    }
}

/// Bell-diagonal state parameters (c1, c2, c3).
#[derive(Debug, Clone, Copy)]
pub struct BellDiagonalParams {
    pub c: [f64; 3],
}

impl BellDiagonalParams {
    pub fn new(c: [f64; 3]) -> Result<Self> {
        let p = BellDiagonalParams { c };
        let lam = p.bell_basis_eigenvalues();
        if lam.iter().any(|&l| l < -1e-12) {
            return Err(Error::InvalidParams(format!(
                "Bell-diagonal eigenvalues {:?} not all nonnegative",
                lam
            )));
        }
        Ok(p)
    }

    /// lambda_ij = (1 + (-1)^i c1 - (-1)^(i+j) c2 + (-1)^j c3) / 4,
    /// the spectrum in the Bell basis.
    pub fn bell_basis_eigenvalues(&self) -> [f64; 4] {
        let [c1, c2, c3] = self.c;
        let mut out = [0.0f64; 4];
        for i in 0..2 {
            for j in 0..2 {
                let si = if i == 0 { 1.0 } else { -1.0 };
                let sj = if j == 0 { 1.0 } else { -1.0 };
                let sij = si * sj;
                out[2 * i + j] = 0.25 * (1.0 + si * c1 - sij * c2 + sj * c3);
            }
        }
        out
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let [c1, c2, c3] = self.c;
        let mut m = ComplexMatrix::identity(4).scale_re(0.25);
        let terms = [(c1, pauli(1)), (c2, pauli(2)), (c3, pauli(3))];
        for (c, s) in terms {
            m = m.add(&s.kron(&s).scale_re(0.25 * c));
        }
        DensityMatrix::new(m, &[2, 2])
    }
}

/// Local Bloch vectors and the 3x3 correlation tensor of a two-qubit state.
#[derive(Debug, Clone)]
pub struct BlochTriple {
    pub x: [f64; 3],
    pub y: [f64; 3],
    pub t: [[f64; 3]; 3],
}

/// x_i = Tr(rho sigma_i x 1), y_i = Tr(rho 1 x sigma_i),
/// T_ij = Tr(rho sigma_i x sigma_j).
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochTriple> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch("bloch_decompose needs dims [2,2]".into()));
    }
    let mut out = BlochTriple { x: [0.0; 3], y: [0.0; 3], t: [[0.0; 3]; 3] };
    for i in 0..3 {
        out.x[i] = pauli(i + 1).kron(&pauli(0)).mul(rho.mat()).trace().re;
        out.y[i] = pauli(0).kron(&pauli(i + 1)).mul(rho.mat()).trace().re;
        for j in 0..3 {
            out.t[i][j] = pauli(i + 1).kron(&pauli(j + 1)).mul(rho.mat()).trace().re;
        }
    }
    Ok(out)
}

pub fn bloch_reconstruct(b: &BlochTriple) -> DensityMatrix {
    let mut m = ComplexMatrix::identity(4).scale_re(0.25);
    for i in 0..3 {
        m = m.add(&pauli(i + 1).kron(&pauli(0)).scale_re(0.25 * b.x[i]));
        m = m.add(&pauli(0).kron(&pauli(i + 1)).scale_re(0.25 * b.y[i]));
        for j in 0..3 {
            m = m.add(&pauli(i + 1).kron(&pauli(j + 1)).scale_re(0.25 * b.t[i][j]));
        }
    }
    DensityMatrix::from_parts_unchecked(m, vec![2, 2])
}

/// Bloch vector of a single-qubit state.
pub fn bloch_vector_qubit(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch("bloch_vector_qubit needs a qubit".into()));
    }
    let mut r = [0.0; 3];
    for i in 0..3 {
        r[i] = pauli(i + 1).mul(rho.mat()).trace().re;
    }
    Ok(r)
}

/// Fano-Bloch coefficients of a qudit-qubit state:
/// R_{alpha beta} = d * Tr(rho gamma^alpha x sigma^beta) with gamma^0 = 1_d
/// and gamma^{i>0} the su(d) generators, so that R_00 = d.
#[derive(Debug, Clone)]
pub struct FanoBlochTensor {
    pub d: usize,
    /// (d^2) x 4 coefficient array, row alpha, column beta.
    pub r: Vec<[f64; 4]>,
}

pub fn fano_bloch(rho: &DensityMatrix) -> Result<FanoBlochTensor> {
    if rho.dims().len() != 2 || rho.dims()[1] != 2 {
        return Err(Error::DimMismatch("fano_bloch needs dims [d, 2]".into()));
    }
    let d = rho.dims()[0];
    let gammas = gamma_basis(d);
    let mut r = vec![[0.0f64; 4]; d * d];
    for (alpha, g) in gammas.iter().enumerate() {
        for beta in 0..4 {
            let op = g.kron(&pauli(beta));
            let val = op.mul(rho.mat()).trace();
            r[alpha][beta] = d as f64 * val.re;
        }
    }
    Ok(FanoBlochTensor { d, r })
}

/// Inverse of [`fano_bloch`].
pub fn fano_reconstruct(t: &FanoBlochTensor) -> DensityMatrix {
    let d = t.d;
    let gammas = gamma_basis(d);
    let mut m = ComplexMatrix::zeros(2 * d, 2 * d);
    for (alpha, g) in gammas.iter().enumerate() {
        let na = if alpha == 0 { d as f64 } else { 2.0 };
        for beta in 0..4 {
            let coeff = t.r[alpha][beta] / (d as f64 * na * 2.0);
            if coeff == 0.0 {
                continue;
            }
            m = m.add(&g.kron(&pauli(beta)).scale_re(coeff));
        }
    }
    DensityMatrix::from_parts_unchecked(m, vec![d, 2])
}

/// [identity_d] ++ su_generators(d).
pub fn gamma_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut v = vec![ComplexMatrix::identity(d)];
    v.extend(su_generators(d));
    v
}

/// The d^2 - 1 Hermitian traceless su(d) generators, ordered as all
/// symmetric U_jk (j < k, lexicographic), then all antisymmetric V_jk, then
/// the diagonal W_1 .. W_{d-1}. For d = 2 this is (sigma_x, sigma_y,
/// sigma_z); for d = 3 the Gell-Mann matrices up to reordering.
pub fn su_generators(d: usize) -> Vec<ComplexMatrix> {
    assert!(d >= 2, "su(d) needs d >= 2");
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut u = ComplexMatrix::zeros(d, d);
            u[(j, k)] = ONE;
            u[(k, j)] = ONE;
            out.push(u);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut v = ComplexMatrix::zeros(d, d);
            v[(j, k)] = -matcore::I;
            v[(k, j)] = matcore::I;
            out.push(v);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let mut w = ComplexMatrix::zeros(d, d);
        for j in 0..l {
            w[(j, j)] = C64::new(norm, 0.0);
        }
        w[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(w);
    }
    out
}

// --- presets -----------------------------------------------------------------

/// Named state families. Parameter ranges are validated on construction.
#[derive(Debug, Clone)]
pub enum Preset {
    BellPhiPlus,
    BellPhiMinus,
    BellPsiPlus,
    BellPsiMinus,
    BellDiagonal { c1: f64, c2: f64, c3: f64 },
    /// rho_x family: (2-x)/6 |00><00| + (1+x)/6 |01><01| + (1+x)/6 |10><10|
    /// + (2-x)/6 |11><11| + (|01><10| + |10><01|)/6, x in [0, 2].
    XState { x: f64 },
    /// p |phi+><phi+| + (1-p) |00><00| with phi+ = (|01> + |10>)/sqrt(2).
    Horodecki { p: f64 },
    Ghz { n: usize },
    PlusState,
    Computational { dims: Vec<usize>, basis: Vec<usize> },
}

/// Pure state backing a preset, when one exists.
pub fn preset_pure(p: &Preset) -> Option<PureState> {
    let inv = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| C64::new(x, 0.0);
    match p {
        Preset::BellPhiPlus => {
            Some(PureState::new(vec![c(inv), ZERO, ZERO, c(inv)], &[2, 2]).unwrap())
        }
        Preset::BellPhiMinus => {
            Some(PureState::new(vec![c(inv), ZERO, ZERO, c(-inv)], &[2, 2]).unwrap())
        }
        Preset::BellPsiPlus => {
            Some(PureState::new(vec![ZERO, c(inv), c(inv), ZERO], &[2, 2]).unwrap())
        }
        Preset::BellPsiMinus => {
            Some(PureState::new(vec![ZERO, c(inv), c(-inv), ZERO], &[2, 2]).unwrap())
        }
        Preset::Ghz { n } => {
            let dims = vec![2usize; *n];
            let total = 1usize << n;
            let mut amps = vec![ZERO; total];
            amps[0] = c(inv);
            amps[total - 1] = c(inv);
            Some(PureState::new(amps, &dims).unwrap())
        }
        Preset::PlusState => Some(PureState::new(vec![c(inv), c(inv)], &[2]).unwrap()),
        Preset::Computational { dims, basis } => {
            let total: usize = dims.iter().product();
            let idx = matcore::multi_to_index(basis, dims);
            let mut amps = vec![ZERO; total];
            amps[idx] = ONE;
            Some(PureState::new(amps, dims).unwrap())
        }
        _ => None,
    }
}

pub fn preset(p: &Preset) -> Result<DensityMatrix> {
    match p {
        Preset::BellDiagonal { c1, c2, c3 } => BellDiagonalParams::new([*c1, *c2, *c3])?.to_density(),
        Preset::XState { x } => {
            if !(0.0..=2.0).contains(x) {
                return Err(Error::InvalidParams(format!("x_state needs x in [0,2], got {x}")));
            }
            let a = (2.0 - x) / 6.0;
            let b = (1.0 + x) / 6.0;
            XStateParams::new([a, b, b, a], ZERO, C64::new(1.0 / 6.0, 0.0))?.to_density()
        }
        Preset::Horodecki { p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParams(format!("horodecki needs p in [0,1], got {p}")));
            }
            XStateParams::new(
                [1.0 - p, p / 2.0, p / 2.0, 0.0],
                ZERO,
                C64::new(p / 2.0, 0.0),
            )?
            .to_density()
        }
        Preset::Ghz { n } => {
            if *n < 2 || *n > 6 {
                return Err(Error::InvalidParams(format!("ghz needs 2 <= n <= 6, got {n}")));
            }
            Ok(preset_pure(p).unwrap().to_density())
        }
        Preset::Computational { dims, basis } => {
            if basis.len() != dims.len() || basis.iter().zip(dims).any(|(b, d)| b >= d) {
                return Err(Error::InvalidParams("computational basis index out of range".into()));
            }
            Ok(preset_pure(p).unwrap().to_density())
        }
        _ => Ok(preset_pure(p).expect("pure preset").to_density()),
    }
}

// --- Schmidt decomposition and purification ----------------------------------

/// Schmidt data across the cut after the first `cut` factors. The stored
/// coefficients are the squared Schmidt weights (eigenvalues of rho_A),
/// descending and summing to 1; `rank` counts those above 1e-12.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<C64>>,
    pub right_basis: Vec<Vec<C64>>,
    pub rank: usize,
}

pub fn schmidt(psi: &PureState, cut: usize) -> Result<SchmidtDecomposition> {
    let nfac = psi.dims().len();
    if cut == 0 || cut >= nfac {
        return Err(Error::BadSubsystem { index: cut, count: nfac });
    }
    let dl: usize = psi.dims()[..cut].iter().product();
    let dr: usize = psi.dims()[cut..].iter().product();
    let m = ComplexMatrix::from_fn(dl, dr, |i, j| psi.amps()[i * dr + j]);
    let rho_a = m.mul(&m.adjoint());
    let eig = eigh(&rho_a)?;
    let k = dl.min(dr);
    // Take the k largest eigenpairs, descending.
    let mut coefficients = Vec::with_capacity(k);
    let mut left_basis = Vec::with_capacity(k);
    let mut right_basis = Vec::with_capacity(k);
    let mut rank = 0;
    for idx in 0..k {
        let col = dl - 1 - idx;
        let lam = eig.eigenvalues[col].max(0.0);
        let l = eig.eigenvector(col);
        let r: Vec<C64> = if lam > tol::RANK {
            rank += 1;
            // psi = sum_k s_k |l_k> (x) |r_k| with r_k = conj(M^dag l_k)/s_k.
            let mr = m.adjoint().matvec(&l);
            let s = lam.sqrt();
            mr.iter().map(|z| z.conj() / s).collect()
        } else {
            vec![ZERO; dr]
        };
        coefficients.push(lam);
        left_basis.push(l);
        right_basis.push(r);
    }
    Ok(SchmidtDecomposition { coefficients, left_basis, right_basis, rank })
}

/// Purify onto dims ++ [rank]: |psi> = sum_i sqrt(lambda_i) |phi_i> |i>.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let eig = eigh(rho.mat())?;
    let n = rho.dim();
    let kept: Vec<(f64, usize)> = (0..n)
        .rev()
        .map(|k| (eig.eigenvalues[k], k))
        .filter(|(l, _)| *l > tol::RANK)
        .collect();
    let rank = kept.len().max(1);
    let mut amps = vec![ZERO; n * rank];
    for (slot, (lam, k)) in kept.iter().enumerate() {
        let v = eig.eigenvector(*k);
        let s = lam.max(0.0).sqrt();
        for i in 0..n {
            amps[i * rank + slot] = v[i] * s;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(rank);
    PureState::from_unnormalized(amps, &dims)
}

// --- random states -----------------------------------------------------------

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Haar-like random pure state: complex Gaussian amplitudes, normalized.
pub fn random_pure(dims: &[usize], seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = dims.iter().product();
    let amps: Vec<C64> = (0..total).map(|_| gaussian_c64(&mut rng)).collect();
    PureState::from_unnormalized(amps, dims).expect("nonzero with probability 1")
}

/// Wishart-style random density matrix of the requested rank.
pub fn random_density(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if rank == 0 || rank > total {
        return Err(Error::InvalidParams(format!("rank {rank} not in 1..={total}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(total, rank, |_, _| gaussian_c64(&mut rng));
    let mut m = g.mul(&g.adjoint());
    let tr = m.trace().re;
    m = m.scale_re(1.0 / tr);
    Ok(DensityMatrix::from_parts_unchecked(m.hermitize(), dims.to_vec()))
}

/// Haar-like random unitary from Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| gaussian_c64(&mut rng));
    let mut cols: Vec<Vec<C64>> = (0..dim).map(|j| g.column(j)).collect();
    for j in 0..dim {
        for k in 0..j {
            let proj: C64 = (0..dim).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..dim {
                let d = proj * cols[k][i];
                cols[j][i] -= d;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}

/// Uhlmann fidelity between two states on the same dimension list.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimMismatch(format!(
            "fidelity needs equal dims, got {:?} and {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    matcore::fidelity_mats(rho.mat(), sigma.mat())
}

/// Random valid X-state parameters (real nonnegative anti-diagonals scaled
/// inside the positivity bounds, random phases optional).
pub fn random_x_state(seed: u64, complex_phases: bool) -> XStateParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = [0.0f64; 4];
    let mut s = 0.0;
    for v in &mut d {
        *v = rng.random::<f64>().max(1e-6);
        s += *v;
    }
    for v in &mut d {
        *v /= s;
    }
    let f14: f64 = rng.random();
    let f23: f64 = rng.random();
    let m14 = f14 * (d[0] * d[3]).sqrt() * 0.999;
    let m23 = f23 * (d[1] * d[2]).sqrt() * 0.999;
    let (p14, p23) = if complex_phases {
        (rng.random::<f64>() * std::f64::consts::TAU, rng.random::<f64>() * std::f64::consts::TAU)
    } else {
        (0.0, 0.0)
    };
    XStateParams::new(d, C64::from_polar(m14, p14), C64::from_polar(m23, p23)).expect("inside bounds")
}

/// Random valid Bell-diagonal parameters by rejection sampling.
pub fn random_bell_diagonal(seed: u64) -> BellDiagonalParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let c = [
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        ];
        if let Ok(p) = BellDiagonalParams::new(c) {
            return p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_phi_plus_matrix() {
        let rho = preset(&Preset::BellPhiPlus).unwrap();
        for (i, j) in [(0usize, 0usize), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.mat()[(i, j)].re - 0.5).abs() < 1e-15);
        }
        assert!(rho.mat()[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn horodecki_limits() {
        let h1 = preset(&Preset::Horodecki { p: 1.0 }).unwrap();
        let psi_plus = preset(&Preset::BellPsiPlus).unwrap();
        assert!(h1.mat().sub(psi_plus.mat()).max_abs() < 1e-15);
        let h0 = preset(&Preset::Horodecki { p: 0.0 }).unwrap();
        assert!((h0.mat()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(preset(&Preset::Horodecki { p: 1.5 }).is_err());
    }

    #[test]
    fn bell_diagonal_spectrum_and_validity() {
        // (0.3, 0, 0.2) carries the frozen spectrum {0.375, 0.275, 0.225, 0.125}.
        let p = BellDiagonalParams::new([0.3, 0.0, 0.2]).unwrap();
        let mut lam = p.bell_basis_eigenvalues().to_vec();
        lam.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let expect = [0.375, 0.275, 0.225, 0.125];
        for (a, b) in lam.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
        let rho = p.to_density().unwrap();
        let eig = eigh(rho.mat()).unwrap();
        for (a, b) in eig.eigenvalues.iter().rev().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
        // (0.8, 0.5, 0.2) is outside the Bell-diagonal positivity tetrahedron.
        assert!(BellDiagonalParams::new([0.8, 0.5, 0.2]).is_err());
    }

    #[test]
    fn validate_diagnostics() {
        let ok = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(validate(&ok, &[2]).is_ok());
        let bad = ComplexMatrix::diag(&[C64::new(1.2, 0.0), C64::new(-0.2, 0.0)]);
        let report = validate(&bad, &[2]).unwrap_err();
        assert!(report.iter().any(|v| v.invariant.contains("positive")));
        // Valid X-state params always produce a valid state.
        let x = random_x_state(9, true);
        assert!(x.to_density().is_ok());
    }

    #[test]
    fn bloch_round_trip_and_bell_tensor() {
        let id = DensityMatrix::new(ComplexMatrix::identity(4).scale_re(0.25), &[2, 2]).unwrap();
        let b = bloch_decompose(&id).unwrap();
        assert!(b.x.iter().chain(&b.y).all(|&v| v.abs() < 1e-14));

        let bell = preset(&Preset::BellPhiPlus).unwrap();
        let b = bloch_decompose(&bell).unwrap();
        let expect_t = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            assert!(b.x[i].abs() < 1e-14 && b.y[i].abs() < 1e-14);
            for j in 0..3 {
                assert!((b.t[i][j] - expect_t[i][j]).abs() < 1e-12);
            }
        }

        let bd = preset(&Preset::BellDiagonal { c1: 0.3, c2: -0.2, c3: 0.4 }).unwrap();
        let b = bloch_decompose(&bd).unwrap();
        assert!((b.t[0][0] - 0.3).abs() < 1e-12);
        assert!((b.t[1][1] + 0.2).abs() < 1e-12);
        assert!((b.t[2][2] - 0.4).abs() < 1e-12);

        let rnd = random_density(&[2, 2], 4, 21).unwrap();
        let recon = bloch_reconstruct(&bloch_decompose(&rnd).unwrap());
        assert!(recon.mat().sub(rnd.mat()).max_abs() < 1e-12);
    }

    #[test]
    fn fano_bloch_round_trip() {
        // Product of maximally mixed states: only R_00 nonzero.
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        let third = ComplexMatrix::identity(3).scale_re(1.0 / 3.0);
        let rho = DensityMatrix::new(third.kron(&half), &[3, 2]).unwrap();
        let t = fano_bloch(&rho).unwrap();
        assert!((t.r[0][0] - 3.0).abs() < 1e-12, "R_00 = d");
        for (alpha, row) in t.r.iter().enumerate() {
            for (beta, v) in row.iter().enumerate() {
                if (alpha, beta) != (0, 0) {
                    assert!(v.abs() < 1e-12);
                }
            }
        }

        // Qubit-qubit: R_ij = 2 T_ij relates the two representations.
        let bell = preset(&Preset::BellPhiPlus).unwrap();
        let t = fano_bloch(&bell).unwrap();
        let b = bloch_decompose(&bell).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.r[i + 1][j + 1] - 2.0 * b.t[i][j]).abs() < 1e-12);
            }
        }

        let rnd = random_density(&[3, 2], 6, 33).unwrap();
        let recon = fano_reconstruct(&fano_bloch(&rnd).unwrap());
        assert!(recon.mat().sub(rnd.mat()).max_abs() < 1e-10);
    }

    #[test]
    fn schmidt_worked_examples() {
        // |11>: squared weights (1, 0), rank 1.
        let psi = preset_pure(&Preset::Computational { dims: vec![2, 2], basis: vec![1, 1] }).unwrap();
        let s = schmidt(&psi, 1).unwrap();
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12 && s.coefficients[1].abs() < 1e-12);
        assert_eq!(s.rank, 1);

        // (|00>+|01>+|10>+|11>)/2 is a product state: rank 1.
        let amps = vec![C64::new(0.5, 0.0); 4];
        let psi = PureState::new(amps, &[2, 2]).unwrap();
        let s = schmidt(&psi, 1).unwrap();
        assert_eq!(s.rank, 1);
        assert!((s.coefficients[0] - 1.0).abs() < 1e-12);

        // Bell state: (1/2, 1/2), rank 2.
        let psi = preset_pure(&Preset::BellPhiPlus).unwrap();
        let s = schmidt(&psi, 1).unwrap();
        assert!((s.coefficients[0] - 0.5).abs() < 1e-12 && (s.coefficients[1] - 0.5).abs() < 1e-12);
        assert_eq!(s.rank, 2);
        assert!((s.coefficients.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        // Reconstruction and left/right spectrum symmetry on a random 2x3 state.
        let psi = random_pure(&[2, 3], 17);
        let s = schmidt(&psi, 1).unwrap();
        let mut recon = vec![ZERO; 6];
        for k in 0..s.coefficients.len() {
            let w = s.coefficients[k].sqrt();
            for i in 0..2 {
                for j in 0..3 {
                    recon[i * 3 + j] += C64::new(w, 0.0) * s.left_basis[k][i] * s.right_basis[k][j];
                }
            }
        }
        for (r, p) in recon.iter().zip(psi.amps()) {
            assert!((r - p).norm() < 1e-10);
        }

        let rho_l = psi.to_density().partial_trace(&[0]).unwrap();
        let rho_r = psi.to_density().partial_trace(&[1]).unwrap();
        let el = eigh(rho_l.mat()).unwrap();
        let er = eigh(rho_r.mat()).unwrap();
        // Nonzero parts of the two reduced spectra agree.
        for k in 0..2 {
            let a = el.eigenvalues[1 - k];
            let b = er.eigenvalues[2 - k];
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn purify_round_trip() {
        let pure = preset(&Preset::BellPhiPlus).unwrap();
        let p = purify(&pure).unwrap();
        assert_eq!(*p.dims().last().unwrap(), 1, "pure input appends a trivial factor");

        let half = DensityMatrix::new(ComplexMatrix::identity(2).scale_re(0.5), &[2]).unwrap();
        let p = purify(&half).unwrap();
        assert_eq!(p.dims(), &[2, 2]);
        let red = p.to_density().partial_trace(&[0]).unwrap();
        assert!(red.mat().sub(half.mat()).max_abs() < 1e-12);

        let rho = random_density(&[2, 2], 2, 8).unwrap();
        let p = purify(&rho).unwrap();
        assert_eq!(p.dims(), &[2, 2, 2]);
        let red = p.to_density().partial_trace(&[0, 1]).unwrap();
        assert!(red.mat().sub(rho.mat()).max_abs() < 1e-10);
    }

    #[test]
    fn su_generator_structure() {
        let p2 = su_generators(2);
        for (g, k) in p2.iter().zip(1..=3) {
            assert!(g.sub(&pauli(k)).max_abs() < 1e-15);
        }
        for d in [2usize, 3, 4] {
            let gens = su_generators(d);
            assert_eq!(gens.len(), d * d - 1);
            for (i, a) in gens.iter().enumerate() {
                assert!(a.trace().norm() < 1e-14, "traceless");
                assert!(a.hermiticity_defect() < 1e-14);
                for (j, b) in gens.iter().enumerate() {
                    let t = a.mul(b).trace().re;
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!((t - expect).abs() < 1e-12, "Tr(X{i} X{j}) = 2 delta");
                }
            }
        }
    }

    #[test]
    fn random_states_deterministic_and_ranked() {
        let a = random_pure(&[2, 2], 99);
        let b = random_pure(&[2, 2], 99);
        assert_eq!(a.amps(), b.amps());

        let pure = random_density(&[2, 2], 1, 5).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-12);

        let full = random_density(&[2, 2], 4, 5).unwrap();
        let eig = eigh(full.mat()).unwrap();
        assert!(eig.eigenvalues[0] > 0.0);

        let u = random_unitary(4, 3);
        assert!(u.adjoint().mul(&u).sub(&ComplexMatrix::identity(4)).max_abs() < 1e-12);
    }
}
