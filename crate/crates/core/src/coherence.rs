//! Basis-dependent coherence quantifiers and their relations to mixedness
//! and discord. Every operation takes the reference basis explicitly; the
//! default is the computational basis.

use num_complex::Complex64 as C64;

use crate::discord::{discord_fixed_computational, Side};
use crate::entropy::{normalized_mixedness, von_neumann, xlog2x};
use crate::matcore::{eigh, fidelity_mats, lift_operator, ComplexMatrix};
use crate::states::{bloch_vector_qubit, su_generators, DensityMatrix, PureState};
use crate::{Error, Result};

/// Orthonormal reference basis, stored as the unitary whose columns are the
/// basis vectors.
#[derive(Debug, Clone)]
pub struct ReferenceBasis {
    u: ComplexMatrix,
}

impl ReferenceBasis {
    pub fn computational(dim: usize) -> Self {
        ReferenceBasis { u: ComplexMatrix::identity(dim) }
    }

    pub fn new(u: ComplexMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimMismatch("basis matrix must be square".into()));
        }
        let defect = u.adjoint().mul(&u).sub(&ComplexMatrix::identity(u.rows())).max_abs();
        if defect > 1e-10 {
            return Err(Error::NonUnitary { defect });
        }
        Ok(ReferenceBasis { u })
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.u
    }

    /// Express an operator in this basis: U^dag M U.
    fn rotate(&self, m: &ComplexMatrix) -> ComplexMatrix {
        self.u.adjoint().mul(m).mul(&self.u)
    }
}

fn rotated(rho: &DensityMatrix, basis: &ReferenceBasis) -> Result<ComplexMatrix> {
    if basis.dim() != rho.dim() {
        return Err(Error::DimMismatch("basis dimension differs from the state".into()));
    }
    Ok(basis.rotate(rho.mat()))
}

/// Full dephasing in the reference basis: keep the diagonal.
pub fn dephase(rho: &DensityMatrix, basis: &ReferenceBasis) -> Result<DensityMatrix> {
    let m = rotated(rho, basis)?;
    let n = m.rows();
    let diag = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(m[(i, i)].re, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let back = basis.u.mul(&diag).mul(&basis.u.adjoint());
    Ok(DensityMatrix::from_parts_unchecked(back, rho.dims().to_vec()))
}

/// Relative entropy of coherence C_r = S(rho_diag) - S(rho).
pub fn c_rel_entropy(rho: &DensityMatrix, basis: &ReferenceBasis) -> Result<f64> {
    let m = rotated(rho, basis)?;
    let s_diag = -(0..m.rows()).map(|i| xlog2x(m[(i, i)].re.max(0.0))).sum::<f64>();
    Ok((s_diag - von_neumann(rho)).max(0.0))
}

/// Brute-force check of C_r on a qubit: minimize S(rho || delta) over
/// diagonal states delta = diag(q, 1-q) by grid + refinement. The oracle
/// route for the closed form.
pub fn c_rel_entropy_numeric_qubit(rho: &DensityMatrix, grid: usize) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch("numeric C_r oracle is for qubits".into()));
    }
    let objective = |q: f64| -> f64 {
        let delta = DensityMatrix::from_parts_unchecked(
            ComplexMatrix::diag(&[C64::new(q, 0.0), C64::new(1.0 - q, 0.0)]),
            vec![2],
        );
        crate::entropy::relative_entropy(rho, &delta).unwrap_or(f64::INFINITY)
    };
    let mut best = f64::INFINITY;
    let mut bq = 0.5;
    for i in 1..grid {
        let q = i as f64 / grid as f64;
        let v = objective(q);
        if v < best {
            best = v;
            bq = q;
        }
    }
    let mut step = 1.0 / grid as f64;
    for _ in 0..40 {
        for s in [-1.0, 1.0] {
            let q = (bq + s * step).clamp(1e-12, 1.0 - 1e-12);
            let v = objective(q);
            if v < best {
                best = v;
                bq = q;
            }
        }
        step *= 0.5;
    }
    Ok(best)
}

/// Product reference basis built from the Schmidt bases of a pure bipartite
/// state (missing columns completed by Gram-Schmidt). In this basis the
/// state reads sum_k sqrt(chi_k) |kk>, so its l1 coherence equals twice the
/// negativity.
pub fn schmidt_product_basis(psi: &PureState) -> Result<ReferenceBasis> {
    if psi.dims().len() != 2 {
        return Err(Error::DimMismatch("schmidt_product_basis needs two factors".into()));
    }
    let (da, db) = (psi.dims()[0], psi.dims()[1]);
    let s = crate::states::schmidt(psi, 1)?;
    let complete = |cols: &[Vec<C64>], dim: usize| -> ComplexMatrix {
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
        let push_orthonormalized = |v: &[C64], basis: &mut Vec<Vec<C64>>| {
            let mut w = v.to_vec();
            for b in basis.iter() {
                let ov: C64 = b.iter().zip(&w).map(|(a, c)| a.conj() * c).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= ov * bi;
                }
            }
            let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for z in &mut w {
                    *z /= norm;
                }
                basis.push(w);
            }
        };
        for c in cols {
            push_orthonormalized(c, &mut basis);
        }
        let mut unit = 0;
        while basis.len() < dim && unit < dim {
            let mut e = vec![crate::matcore::ZERO; dim];
            e[unit] = crate::matcore::ONE;
            push_orthonormalized(&e, &mut basis);
            unit += 1;
        }
        ComplexMatrix::from_fn(dim, dim, |i, j| basis[j][i])
    };
    let ua = complete(&s.left_basis, da);
    let ub = complete(&s.right_basis, db);
    ReferenceBasis::new(ua.kron(&ub))
}

/// l1-norm coherence: sum of the absolute off-diagonal entries.
pub fn c_l1(rho: &DensityMatrix, basis: &ReferenceBasis) -> Result<f64> {
    let m = rotated(rho, basis)?;
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm();
            }
        }
    }
    Ok(acc)
}

/// Coherence-mixedness complementarity:
/// C_l1^2/(d-1)^2 + M_l <= 1. Returns the left-hand side and whether the
/// bound holds within 1e-9.
pub fn complementarity_check(rho: &DensityMatrix) -> Result<(f64, bool)> {
    let d = rho.dim() as f64;
    let c = c_l1(rho, &ReferenceBasis::computational(rho.dim()))?;
    let lhs = c * c / ((d - 1.0) * (d - 1.0)) + normalized_mixedness(rho);
    Ok((lhs, lhs <= 1.0 + 1e-9))
}

/// Closed-form geometric coherence of a qubit:
/// C_g = 1 - (sqrt(2)/2) sqrt(1 + sqrt(1 - r_x^2 - r_y^2)).
pub fn c_geometric_qubit(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimMismatch("c_geometric_qubit needs a qubit".into()));
    }
    let r = bloch_vector_qubit(rho)?;
    let t = (1.0 - r[0] * r[0] - r[1] * r[1]).max(0.0).sqrt();
    Ok(1.0 - 0.5f64.sqrt() * (1.0 + t).sqrt())
}

/// Numeric geometric coherence: maximize fidelity with diagonal states over
/// the probability simplex (grid for d <= 3, then coordinate refinement).
pub fn c_geometric_numeric(
    rho: &DensityMatrix,
    basis: &ReferenceBasis,
    grid: usize,
) -> Result<f64> {
    let d = rho.dim();
    let m = rotated(rho, basis)?;
    let work = DensityMatrix::from_parts_unchecked(m, vec![d]);
    let fid = |p: &[f64]| -> f64 {
        let delta = ComplexMatrix::diag(&p.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
        fidelity_mats(work.mat(), &delta).unwrap_or(0.0)
    };
    let mut best = 0.0f64;
    let mut bp = vec![1.0 / d as f64; d];
    match d {
        2 => {
            for i in 0..=grid {
                let q = i as f64 / grid as f64;
                let v = fid(&[q, 1.0 - q]);
                if v > best {
                    best = v;
                    bp = vec![q, 1.0 - q];
                }
            }
        }
        3 => {
            for i in 0..=grid {
                for j in 0..=(grid - i) {
                    let p = [
                        i as f64 / grid as f64,
                        j as f64 / grid as f64,
                        (grid - i - j) as f64 / grid as f64,
                    ];
                    let v = fid(&p);
                    if v > best {
                        best = v;
                        bp = p.to_vec();
                    }
                }
            }
        }
        _ => {
            best = fid(&bp);
        }
    }
    // Coordinate refinement with renormalization.
    let mut step = 1.0 / grid as f64;
    for _ in 0..30 {
        let mut improved = false;
        for k in 0..d {
            for s in [1.0, -1.0] {
                let mut p = bp.clone();
                p[k] = (p[k] + s * step).max(0.0);
                let tot: f64 = p.iter().sum();
                if tot <= 0.0 {
                    continue;
                }
                for v in &mut p {
                    *v /= tot;
                }
                let v = fid(&p);
                if v > best {
                    best = v;
                    bp = p;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(1.0 - best.max(0.0).sqrt())
}

/// Trace-distance coherence of the uniform off-diagonal state
/// rho = (1/d) 1 + alpha (J - 1): C_Tr = 2 (d-1) |alpha|, valid while the
/// state is PSD (alpha in [-1/(d(d-1)), 1/d]).
pub fn c_trace_uniform(d: usize, alpha: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidParams("dimension must be >= 2".into()));
    }
    let lo = -1.0 / (d as f64 * (d as f64 - 1.0));
    let hi = 1.0 / d as f64;
    if !(lo - 1e-12..=hi + 1e-12).contains(&alpha) {
        return Err(Error::InvalidParams(format!(
            "alpha {alpha} outside PSD range [{lo:.6}, {hi:.6}] for d = {d}"
        )));
    }
    Ok(2.0 * (d as f64 - 1.0) * alpha.abs())
}

/// Coherence concurrence of a pure state:
/// C_c = sum_{j<k} |<psi| U_jk |psi*>| with U_jk the symmetric su(d)
/// generators; equals C_l1 of the projector.
pub fn coherence_concurrence_pure(psi: &PureState) -> f64 {
    let d: usize = psi.dims().iter().product();
    let gens = su_generators(d);
    let conj: Vec<C64> = psi.amps().iter().map(|a| a.conj()).collect();
    let mut acc = 0.0;
    // The first d(d-1)/2 generators are the symmetric U_jk.
    for g in gens.iter().take(d * (d - 1) / 2) {
        let gv = g.matvec(&conj);
        let overlap: C64 = psi.amps().iter().zip(&gv).map(|(a, b)| a.conj() * b).sum();
        acc += overlap.norm();
    }
    acc
}

/// Correlated coherence C_r^cc = C_r(rho_AB) - C_r(rho_A) - C_r(rho_B) in
/// the product reference basis.
pub fn correlated_coherence(
    rho: &DensityMatrix,
    basis_a: &ReferenceBasis,
    basis_b: &ReferenceBasis,
) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::DimMismatch("correlated_coherence needs a bipartite state".into()));
    }
    let joint = ReferenceBasis::new(basis_a.u.kron(&basis_b.u))?;
    let total = c_rel_entropy(rho, &joint)?;
    let ca = c_rel_entropy(&rho.partial_trace(&[0])?, basis_a)?;
    let cb = c_rel_entropy(&rho.partial_trace(&[1])?, basis_b)?;
    Ok(total - ca - cb)
}

/// Coherence-consumption identity in the computational basis:
/// lhs = C_r^cc(rho) - C_r^cc(Pi_B(rho)), rhs = the discord evaluated with
/// the fixed computational-basis measurement on B. The identity holds when
/// the optimal decomposition is discriminated by that basis; the deviation
/// is reported, not assumed zero.
pub fn discord_consumption(rho: &DensityMatrix) -> Result<(f64, f64)> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch("discord_consumption needs dims [2,2]".into()));
    }
    let ba = ReferenceBasis::computational(2);
    let cc = correlated_coherence(rho, &ba, &ba)?;
    // Dephase B in the computational basis.
    let p0 = lift_operator(
        &ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
        rho.dims(),
        1,
    )?;
    let p1 = lift_operator(
        &ComplexMatrix::diag(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]),
        rho.dims(),
        1,
    )?;
    let dephased = p0.mul(rho.mat()).mul(&p0).add(&p1.mul(rho.mat()).mul(&p1));
    let dephased = DensityMatrix::from_parts_unchecked(dephased, rho.dims().to_vec());
    let cc_after = correlated_coherence(&dephased, &ba, &ba)?;
    let lhs = cc - cc_after;
    let rhs = discord_fixed_computational(rho, Side::B)?.quantum;
    Ok((lhs, rhs))
}

/// Entropic uncertainty relation with quantum memory for observables P, Q on
/// subsystem A of a bipartite state:
/// U = S(P|B) + S(Q|B),
/// L = -log2 c + S(A|B) + max{0, Q_A - J_A}, c = max_ij |<p_i|q_j>|^2,
/// gap = U - L. The discord term uses the numeric optimizer on side A.
pub fn entropic_uncertainty_gap(
    rho: &DensityMatrix,
    p_obs: &ComplexMatrix,
    q_obs: &ComplexMatrix,
) -> Result<(f64, f64, f64)> {
    if rho.dims().len() != 2 {
        return Err(Error::DimMismatch("entropic_uncertainty_gap needs a bipartite state".into()));
    }
    let da = rho.dims()[0];
    if p_obs.rows() != da || q_obs.rows() != da {
        return Err(Error::DimMismatch("observables must act on subsystem A".into()));
    }
    let ep = eigh(p_obs)?;
    let eq = eigh(q_obs)?;
    for vals in [&ep.eigenvalues, &eq.eigenvalues] {
        for w in vals.windows(2) {
            let gap = w[1] - w[0];
            if gap.abs() < 1e-8 {
                return Err(Error::DegenerateObservable { gap });
            }
        }
    }
    let s_b = von_neumann(&rho.partial_trace(&[1])?);
    let dephased_entropy = |basis: &crate::matcore::EigenDecomposition| -> Result<f64> {
        let mut acc = ComplexMatrix::zeros(rho.dim(), rho.dim());
        for k in 0..da {
            let v = basis.eigenvector(k);
            let proj = ComplexMatrix::outer(&v, &v);
            let lifted = lift_operator(&proj, rho.dims(), 0)?;
            acc = acc.add(&lifted.mul(rho.mat()).mul(&lifted));
        }
        Ok(von_neumann(&DensityMatrix::from_parts_unchecked(acc, rho.dims().to_vec())))
    };
    let u = dephased_entropy(&ep)? - s_b + dephased_entropy(&eq)? - s_b;

    let mut c: f64 = 0.0;
    for i in 0..da {
        let pi = ep.eigenvector(i);
        for j in 0..da {
            let qj = eq.eigenvector(j);
            let ov: C64 = pi.iter().zip(&qj).map(|(a, b)| a.conj() * b).sum();
            c = c.max(ov.norm_sqr());
        }
    }
    let s_a_given_b = von_neumann(rho) - s_b;
    let disc = crate::discord::discord_numeric(rho, Side::A, 64, 20)?;
    let l = -c.log2() + s_a_given_b + (disc.quantum - disc.classical).max(0.0);
    Ok((u, l, u - l))
}
