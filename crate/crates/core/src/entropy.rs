//! Classical and quantum entropy functionals. All logarithms are base 2 and
//! 0 log 0 = 0 throughout.

use crate::matcore::eigh;
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// x log2(x) with the 0 log 0 = 0 convention.
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Shannon entropy of a probability vector (bits).
pub fn shannon(p: &[f64]) -> Result<f64> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParams(format!("probabilities sum to {sum}")));
    }
    if p.iter().any(|&x| x < -1e-12) {
        return Err(Error::InvalidParams("negative probability".into()));
    }
    Ok(-p.iter().map(|&x| xlog2x(x.max(0.0))).sum::<f64>())
}

/// Binary Shannon entropy h(x) = -x log2 x - (1-x) log2(1-x).
pub fn binary_h(x: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&x) {
        return Err(Error::DomainError { value: x });
    }
    let x = x.clamp(0.0, 1.0);
    Ok(-xlog2x(x) - xlog2x(1.0 - x))
}

/// Von Neumann entropy S(rho) = -Tr(rho log2 rho) in bits.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    let eig = eigh(rho.mat()).expect("density matrices are Hermitian");
    -eig.eigenvalues.iter().map(|&l| xlog2x(l.max(0.0))).sum::<f64>()
}

/// Linear entropy S2(rho) = 2 (1 - Tr rho^2).
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    2.0 * (1.0 - rho.purity())
}

/// Normalized mixedness M_l = d/(d-1) (1 - Tr rho^2), in [0, 1].
pub fn normalized_mixedness(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    (d / (d - 1.0)) * (1.0 - rho.purity())
}

/// Quantum Rényi entropy S_alpha = log2(Tr rho^alpha) / (1 - alpha).
pub fn renyi(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    if alpha <= 0.0 || (alpha - 1.0).abs() < 1e-12 {
        return Err(Error::DomainError { value: alpha });
    }
    let eig = eigh(rho.mat()).expect("hermitian");
    let s: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).powf(alpha)).sum();
    Ok(s.log2() / (1.0 - alpha))
}

/// Quantum relative entropy S(rho || sigma). Returns +infinity when the
/// support of rho leaks outside the support of sigma, so minimizations can
/// compare values across the boundary instead of unwinding.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch("relative_entropy needs equal dimensions".into()));
    }
    let er = eigh(rho.mat()).expect("hermitian");
    let es = eigh(sigma.mat()).expect("hermitian");
    let cutoff = 1e-12;
    // Support check: weight of rho on the kernel of sigma.
    let mut kernel_weight = 0.0;
    for k in 0..sigma.dim() {
        if es.eigenvalues[k] <= cutoff {
            let v = es.eigenvector(k);
            let rv = rho.mat().matvec(&v);
            let w: f64 = v.iter().zip(&rv).map(|(a, b)| (a.conj() * b).re).sum();
            kernel_weight += w.max(0.0);
        }
    }
    if kernel_weight > 1e-10 {
        return Ok(f64::INFINITY);
    }
    let tr_rho_log_rho: f64 = er.eigenvalues.iter().map(|&l| xlog2x(l.max(0.0))).sum();
    let mut tr_rho_log_sigma = 0.0;
    for k in 0..sigma.dim() {
        let l = es.eigenvalues[k];
        if l > cutoff {
            let v = es.eigenvector(k);
            let rv = rho.mat().matvec(&v);
            let w: f64 = v.iter().zip(&rv).map(|(a, b)| (a.conj() * b).re).sum();
            tr_rho_log_sigma += w * l.log2();
        }
    }
    Ok((tr_rho_log_rho - tr_rho_log_sigma).max(0.0))
}

/// Quantum mutual information I(A:B) = S_A + S_B - S_AB of a bipartite state.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::DimMismatch("mutual_information needs two factors".into()));
    }
    let sa = von_neumann(&rho.partial_trace(&[0])?);
    let sb = von_neumann(&rho.partial_trace(&[1])?);
    Ok(sa + sb - von_neumann(rho))
}

/// Conditional entropy S(rest | conditioned_on) = S_AB - S_cond.
pub fn conditional_entropy(rho: &DensityMatrix, conditioned_on: usize) -> Result<f64> {
    if conditioned_on >= rho.dims().len() {
        return Err(Error::BadSubsystem { index: conditioned_on, count: rho.dims().len() });
    }
    let s_cond = von_neumann(&rho.partial_trace(&[conditioned_on])?);
    Ok(von_neumann(rho) - s_cond)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{self, Preset};

    #[test]
    fn shannon_and_binary() {
        assert!((shannon(&[0.25; 4]).unwrap() - 2.0).abs() < 1e-14);
        assert!((binary_h(0.5).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(binary_h(0.0).unwrap(), 0.0);
        assert_eq!(binary_h(1.0).unwrap(), 0.0);
        // h(0.11) against the definition evaluated directly.
        let direct = -(0.11f64 * 0.11f64.log2()) - 0.89 * 0.89f64.log2();
        assert!((binary_h(0.11).unwrap() - direct).abs() < 1e-15);
        assert!(binary_h(1.5).is_err());
    }

    #[test]
    fn von_neumann_cases() {
        let zero = states::preset(&Preset::Computational { dims: vec![2], basis: vec![0] }).unwrap();
        assert!(von_neumann(&zero).abs() < 1e-12);

        for n in [2usize, 3, 4] {
            let m = crate::ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
            let rho = DensityMatrix::new(m, &[n]).unwrap();
            assert!((von_neumann(&rho) - (n as f64).log2()).abs() < 1e-12);
        }

        let bell = states::preset(&Preset::BellPhiPlus).unwrap();
        let red = bell.partial_trace(&[0]).unwrap();
        assert!((von_neumann(&red) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_entropy_cases() {
        let pure = states::random_pure(&[2, 2], 3).to_density();
        assert!(linear_entropy(&pure).abs() < 1e-12);
        assert!(normalized_mixedness(&pure).abs() < 1e-12);

        let half = DensityMatrix::new(crate::ComplexMatrix::identity(2).scale_re(0.5), &[2]).unwrap();
        assert!((linear_entropy(&half) - 1.0).abs() < 1e-14);
        assert!((normalized_mixedness(&half) - 1.0).abs() < 1e-14);

        let p = states::BellDiagonalParams::new([0.3, -0.2, 0.4]).unwrap();
        let rho = p.to_density().unwrap();
        let lam = p.bell_basis_eigenvalues();
        let expect = 2.0 * (1.0 - lam.iter().map(|l| l * l).sum::<f64>());
        assert!((linear_entropy(&rho) - expect).abs() < 1e-12);
    }

    #[test]
    fn renyi_and_relative() {
        let half = DensityMatrix::new(crate::ComplexMatrix::identity(2).scale_re(0.5), &[2]).unwrap();
        assert!((renyi(&half, 2.0).unwrap() - 1.0).abs() < 1e-12);
        // alpha -> 1 recovers von Neumann.
        let rho = states::random_density(&[2, 2], 3, 77).unwrap();
        let s = von_neumann(&rho);
        for alpha in [1.0 - 1e-4, 1.0 + 1e-4] {
            assert!((renyi(&rho, alpha).unwrap() - s).abs() < 1e-3);
        }
        assert!(renyi(&rho, 1.0).is_err());

        assert!(relative_entropy(&rho, &rho).unwrap().abs() < 1e-9);
        // Support violation: pure vs orthogonal pure.
        let zero = states::preset(&Preset::Computational { dims: vec![2], basis: vec![0] }).unwrap();
        let one = states::preset(&Preset::Computational { dims: vec![2], basis: vec![1] }).unwrap();
        assert!(relative_entropy(&zero, &one).unwrap().is_infinite());
    }

    #[test]
    fn mutual_information_cases() {
        let bell = states::preset(&Preset::BellPhiPlus).unwrap();
        assert!((mutual_information(&bell).unwrap() - 2.0).abs() < 1e-12);

        let a = states::random_density(&[2], 2, 1).unwrap();
        let b = states::random_density(&[2], 2, 2).unwrap();
        let prod = DensityMatrix::new(a.mat().kron(b.mat()), &[2, 2]).unwrap();
        assert!(mutual_information(&prod).unwrap().abs() < 1e-10);

        // S(A|B) of the Bell state is -1.
        assert!((conditional_entropy(&bell, 1).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_properties_random_sweep() {
        use crate::matcore::lift_operator;
        for seed in 0..200u64 {
            let rho = states::random_density(&[2, 2], (seed as usize % 4) + 1, 1000 + seed).unwrap();
            let sa = von_neumann(&rho.partial_trace(&[0]).unwrap());
            let sb = von_neumann(&rho.partial_trace(&[1]).unwrap());
            let sab = von_neumann(&rho);
            assert!(sab <= sa + sb + 1e-10, "subadditivity");
        }
        // Concavity on random mixtures.
        for seed in 0..50u64 {
            let r1 = states::random_density(&[2, 2], 3, 2000 + seed).unwrap();
            let r2 = states::random_density(&[2, 2], 2, 3000 + seed).unwrap();
            let mix = DensityMatrix::new(
                r1.mat().scale_re(0.5).add(&r2.mat().scale_re(0.5)),
                &[2, 2],
            )
            .unwrap();
            assert!(von_neumann(&mix) + 1e-10 >= 0.5 * von_neumann(&r1) + 0.5 * von_neumann(&r2));
        }
        // Unitary invariance.
        let rho = states::random_density(&[2, 2], 4, 11).unwrap();
        let u = states::random_unitary(2, 12);
        let lifted = lift_operator(&u, &[2, 2], 0).unwrap();
        let rot = DensityMatrix::new(lifted.mul(rho.mat()).mul(&lifted.adjoint()), &[2, 2]).unwrap();
        assert!((von_neumann(&rot) - von_neumann(&rho)).abs() < 1e-10);
    }
}
