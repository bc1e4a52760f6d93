//! Entanglement detection and quantification for two-qubit, 2xd, and
//! three-qubit systems: Wootters concurrence, entanglement of formation,
//! negativity, the three-qubit tangle, and the PPT criterion.

use crate::entropy::{binary_h, von_neumann};
use crate::matcore::{eigh, pauli, sqrt_psd, trace_norm, ComplexMatrix};
use crate::states::{DensityMatrix, PureState, XStateParams};
use crate::{Error, Result};

/// Wootters concurrence of a two-qubit state:
/// C = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)} with l_i the
/// descending eigenvalues of rho (sy x sy) rho* (sy x sy).
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch("concurrence_2q needs dims [2,2]".into()));
    }
    let yy = pauli(2).kron(&pauli(2));
    // sqrt(lambda_i) are the singular values of B = sqrt(rho) Y sqrt(rho)^T,
    // since B B^dag = sqrt(rho) Y rho^* Y sqrt(rho). The Hermitian embedding
    // [[0, B], [B^dag, 0]] delivers them additively, which keeps the small
    // ones at machine precision instead of sqrt(eps).
    let s = sqrt_psd(rho.mat())?;
    let b = s.mul(&yy).mul(&s.transpose());
    let mut emb = ComplexMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            emb[(i, 4 + j)] = b[(i, j)];
            emb[(4 + i, j)] = b[(j, i)].conj();
        }
    }
    let eig = eigh(&emb)?;
    // Top four eigenvalues are the singular values, ascending -> reverse.
    let roots: Vec<f64> = (4..8).rev().map(|k| eig.eigenvalues[k].max(0.0)).collect();
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Closed-form concurrence of an X state:
/// C = 2 max{0, |rho14| - sqrt(rho22 rho33), |rho23| - sqrt(rho11 rho44)}.
pub fn concurrence_x(x: &XStateParams) -> Result<f64> {
    x.check()?;
    let c1 = x.a14.norm() - (x.d2 * x.d3).max(0.0).sqrt();
    let c2 = x.a23.norm() - (x.d1 * x.d4).max(0.0).sqrt();
    Ok(2.0 * c1.max(c2).max(0.0))
}

/// Concurrence of a pure bipartite state across the cut after `cut`
/// factors: sqrt(2 (1 - Tr rho_A^2)).
pub fn concurrence_pure(psi: &PureState, cut: usize) -> Result<f64> {
    let nfac = psi.dims().len();
    if cut == 0 || cut >= nfac {
        return Err(Error::BadSubsystem { index: cut, count: nfac });
    }
    let keep: Vec<usize> = (0..cut).collect();
    let red = psi.to_density().partial_trace(&keep)?;
    Ok((2.0 * (1.0 - red.purity())).max(0.0).sqrt())
}

/// Entanglement of formation of a two-qubit state,
/// E_f = h((1 + sqrt(1 - C^2))/2).
pub fn eof_2q(rho: &DensityMatrix) -> Result<f64> {
    let c = concurrence_2q(rho)?;
    binary_h(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt()))
}

/// Entanglement entropy S(rho_A) of a pure bipartite state.
pub fn entanglement_entropy(psi: &PureState, cut: usize) -> Result<f64> {
    let nfac = psi.dims().len();
    if cut == 0 || cut >= nfac {
        return Err(Error::BadSubsystem { index: cut, count: nfac });
    }
    let keep: Vec<usize> = (0..cut).collect();
    Ok(von_neumann(&psi.to_density().partial_trace(&keep)?))
}

/// Negativity N = sum of |negative eigenvalues| of the partial transpose,
/// equal to (||rho^T_A||_1 - 1)/2.
pub fn negativity(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    let pt = rho.partial_transpose(subsystem)?;
    let eig = eigh(&pt)?;
    let neg: f64 = eig.eigenvalues.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    debug_assert!({
        let via_norm = 0.5 * (trace_norm(&pt).unwrap() - 1.0);
        (via_norm - neg).abs() < 1e-10
    });
    Ok(neg)
}

/// Logarithmic negativity log2(2N + 1).
pub fn log_negativity(rho: &DensityMatrix, subsystem: usize) -> Result<f64> {
    Ok((2.0 * negativity(rho, subsystem)? + 1.0).log2())
}

/// Tripartite negativity: cube root of the product of the three
/// one-vs-rest negativities of a three-qubit state.
pub fn tripartite_negativity(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims() != [2, 2, 2] {
        return Err(Error::DimMismatch("tripartite_negativity needs dims [2,2,2]".into()));
    }
    let mut prod = 1.0;
    for k in 0..3 {
        prod *= negativity(rho, k)?;
    }
    Ok(prod.max(0.0).cbrt())
}

/// PPT test for one bipartition; also reports the minimum eigenvalue of the
/// partial transpose. Exact separability witness at 2x2 and 2x3.
pub fn is_ppt(rho: &DensityMatrix, subsystem: usize) -> Result<(bool, f64)> {
    let pt = rho.partial_transpose(subsystem)?;
    let eig = eigh(&pt)?;
    let min = eig.eigenvalues[0];
    Ok((min >= -1e-10, min))
}

/// Three-qubit tangle of a pure state, evaluated as the maximum over the
/// three pivot labelings of C^2(i|jk) - C^2(i|j) - C^2(i|k). The per-pivot
/// values are returned alongside; for pure three-qubit states they agree up
/// to numerical error.
pub fn tangle_3q(psi: &PureState) -> Result<(f64, [f64; 3])> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::DimMismatch("tangle_3q needs a pure three-qubit state".into()));
    }
    let rho = psi.to_density();
    let mut per = [0.0f64; 3];
    for pivot in 0..3 {
        let others: Vec<usize> = (0..3).filter(|&k| k != pivot).collect();
        // C(i|jk) for the pure tripartite state.
        let perm = [pivot, others[0], others[1]];
        let moved = psi.permute(&perm)?;
        let c_one_rest = concurrence_pure(&moved, 1)?;
        let mut t = c_one_rest * c_one_rest;
        for &o in &others {
            let mut pair = [pivot, o];
            pair.sort_unstable();
            let red = rho.partial_trace(&pair)?;
            let c = concurrence_2q(&red)?;
            t -= c * c;
        }
        per[pivot] = t;
    }
    let max = per.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((max, per))
}
