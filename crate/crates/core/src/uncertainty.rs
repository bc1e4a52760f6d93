//! Skew-information quantifiers: Wigner-Yanase skew information, local
//! quantum uncertainty (2xd closed form, multiqubit average, d1xd2 generator
//! form, separable-X maximization), local quantum Fisher information, and the
//! U <= Q_F <= 2U precision bounds.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discord::sym3_max_eigenvalue;
use crate::matcore::{eigh, lift_operator, matrix_function, pauli, sqrt_psd, ComplexMatrix};
use crate::states::{su_generators, DensityMatrix, XStateParams};
use crate::{Error, Result};

/// Wigner-Yanase skew information
/// I(rho, K) = Tr(rho K^2) - Tr(sqrt(rho) K sqrt(rho) K).
pub fn skew_information(rho: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    skew_information_dyson(rho, k, 0.5)
}

/// Dyson generalization I_alpha = Tr(rho K^2) - Tr(rho^alpha K rho^(1-alpha) K),
/// alpha in (0, 1); alpha = 1/2 recovers the Wigner-Yanase form.
pub fn skew_information_dyson(rho: &DensityMatrix, k: &ComplexMatrix, alpha: f64) -> Result<f64> {
    if k.rows() != rho.dim() || k.cols() != rho.dim() {
        return Err(Error::DimMismatch("observable does not match the state dimension".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::DomainError { value: alpha });
    }
    let (ra, rb) = if (alpha - 0.5).abs() < 1e-15 {
        let s = sqrt_psd(rho.mat())?;
        (s.clone(), s)
    } else {
        let frac = |e: f64| {
            move |x: f64| if x <= crate::tol::RANK { 0.0 } else { x.powf(e) }
        };
        (
            matrix_function(rho.mat(), frac(alpha), true)?,
            matrix_function(rho.mat(), frac(1.0 - alpha), true)?,
        )
    };
    let t1 = rho.mat().mul(k).mul(k).trace().re;
    let t2 = ra.mul(k).mul(&rb).mul(k).trace().re;
    Ok((t1 - t2).max(0.0))
}

/// Variance Var(rho, K) = Tr(rho K^2) - Tr(rho K)^2.
pub fn variance(rho: &DensityMatrix, k: &ComplexMatrix) -> f64 {
    let mean = rho.mat().mul(k).trace().re;
    rho.mat().mul(k).mul(k).trace().re - mean * mean
}

/// 3x3 correlation matrix of the LQU closed form,
/// w_ij = Tr{sqrt(rho) (sigma_i x 1) sqrt(rho) (sigma_j x 1)}.
#[derive(Debug, Clone)]
pub struct WMatrix(pub [[f64; 3]; 3]);

/// Local quantum uncertainty of a [2, d] state with the qubit measured:
/// U = 1 - max eigenvalue of W. Zero on classically correlated states; for
/// pure states it equals the linear entropy of the qubit marginal.
pub fn lqu_2xd(rho: &DensityMatrix) -> Result<(f64, WMatrix)> {
    if rho.dims().len() != 2 || rho.dims()[0] != 2 {
        return Err(Error::DimMismatch("lqu_2xd needs dims [2, d]".into()));
    }
    let dims = rho.dims().to_vec();
    let s = sqrt_psd(rho.mat())?;
    let mut lifted = Vec::with_capacity(3);
    for i in 0..3 {
        lifted.push(lift_operator(&pauli(i + 1), &dims, 0)?);
    }
    let mut w = [[0.0f64; 3]; 3];
    for i in 0..3 {
        let si = s.mul(&lifted[i]).mul(&s);
        for j in i..3 {
            let v = si.mul(&lifted[j]).trace();
            debug_assert!(v.im.abs() < 1e-10);
            w[i][j] = v.re;
            w[j][i] = v.re;
        }
    }
    let value = (1.0 - sym3_max_eigenvalue(&w)).clamp(0.0, 1.0);
    Ok((value, WMatrix(w)))
}

/// Average LQU of an N-qubit state: each qubit is moved to the front and
/// treated as the measured side of a [2, 2^(N-1)] bipartition.
pub fn lqu_multiqubit_avg(rho: &DensityMatrix) -> Result<(f64, Vec<f64>)> {
    let n = rho.dims().len();
    if rho.dims().iter().any(|&d| d != 2) || n < 2 {
        return Err(Error::DimMismatch("lqu_multiqubit_avg needs >= 2 qubits".into()));
    }
    if n > 5 {
        return Err(Error::DimMismatch("lqu_multiqubit_avg supports up to 5 qubits".into()));
    }
    let mut per_cut = Vec::with_capacity(n);
    for k in 0..n {
        let mut perm: Vec<usize> = vec![k];
        perm.extend((0..n).filter(|&j| j != k));
        let fronted = rho.permute(&perm)?;
        let rest: usize = fronted.dims()[1..].iter().product();
        let bip = fronted.with_dims(&[2, rest])?;
        per_cut.push(lqu_2xd(&bip)?.0);
    }
    let avg = per_cut.iter().sum::<f64>() / n as f64;
    Ok((avg, per_cut))
}

/// LQU of a [d1, d2] state with measurements on the d1 side:
/// U = 2/d1 - max eigenvalue of what, where
/// what_ij = Tr{sqrt(rho)(lambda_i x 1) sqrt(rho)(lambda_j x 1)} - G_ij . P,
/// g_ijk = Tr(lambda_i lambda_j lambda_k + lambda_j lambda_i lambda_k)/4 and
/// P_k = Tr(rho lambda_k x 1). Reduces to `lqu_2xd` at d1 = 2, where the
/// correction term vanishes.
pub fn lqu_d1xd2(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::DimMismatch("lqu_d1xd2 needs a bipartite state".into()));
    }
    let d1 = rho.dims()[0];
    if d1 < 2 {
        return Err(Error::DimMismatch("first factor must have dimension >= 2".into()));
    }
    let gens = su_generators(d1);
    let m = gens.len();
    let dims = rho.dims().to_vec();
    let s = sqrt_psd(rho.mat())?;
    let lifted: Vec<ComplexMatrix> =
        gens.iter().map(|g| lift_operator(g, &dims, 0)).collect::<Result<_>>()?;
    let p: Vec<f64> = lifted.iter().map(|l| rho.mat().mul(l).trace().re).collect();
    let mut what = vec![vec![0.0f64; m]; m];
    for i in 0..m {
        let si = s.mul(&lifted[i]).mul(&s);
        for j in 0..m {
            let base = si.mul(&lifted[j]).trace().re;
            let mut corr = 0.0;
            let sym = gens[i].mul(&gens[j]).add(&gens[j].mul(&gens[i]));
            for k in 0..m {
                if p[k] == 0.0 {
                    continue;
                }
                let g_ijk = 0.25 * sym.mul(&gens[k]).trace().re;
                corr += g_ijk * p[k];
            }
            what[i][j] = base - corr;
        }
    }
    // Symmetrize and take the top eigenvalue through the Hermitian solver.
    let cm = ComplexMatrix::from_fn(m, m, |i, j| C64::new(0.5 * (what[i][j] + what[j][i]), 0.0));
    let eig = eigh(&cm)?;
    Ok((2.0 / d1 as f64 - eig.eigenvalues[m - 1]).max(0.0))
}

/// Diagonal and anti-diagonal entries of sqrt(rho_X): the Gamma parameters
/// of the separable-X maximization, read off the computed square root.
pub fn sqrt_x_gammas(x: &XStateParams) -> Result<[f64; 6]> {
    let rho = x.to_density()?;
    let s = sqrt_psd(rho.mat())?;
    Ok([s[(0, 0)].re, s[(1, 1)].re, s[(2, 2)].re, s[(3, 3)].re, s[(0, 3)].re, s[(1, 2)].re])
}

/// LQU of an X state from the Gamma parameters of sqrt(rho_X): the W matrix
/// is diagonal with
/// xi1 = 2(G1 G3 + G2 G4 + 2 G5 G6), xi2 = 2(G1 G3 + G2 G4 - 2 G5 G6),
/// xi3 = sum G_i^2 - 3(G5^2 + G6^2), so U = 1 - max{xi1, xi2, xi3}.
pub fn lqu_x_from_gammas(g: &[f64; 6]) -> f64 {
    let xi1 = 2.0 * (g[0] * g[2] + g[1] * g[3] + 2.0 * g[4] * g[5]);
    let xi2 = 2.0 * (g[0] * g[2] + g[1] * g[3] - 2.0 * g[4] * g[5]);
    let xi3 = g.iter().map(|v| v * v).sum::<f64>() - 3.0 * (g[4] * g[4] + g[5] * g[5]);
    (1.0 - xi1.max(xi2).max(xi3)).clamp(0.0, 1.0)
}

/// Result of the separable-X maximization: the best value found (a certified
/// lower bound on the true maximum) and the parameters achieving it.
#[derive(Debug, Clone)]
pub struct SeparableXMax {
    pub value: f64,
    pub argmax: XStateParams,
    /// Worst Gamma-branch vs W-matrix disagreement seen over the search.
    pub max_branch_gap: f64,
}

fn project_separable_x(d: [f64; 4], a14: f64, a23: f64) -> Option<XStateParams> {
    let s: f64 = d.iter().sum();
    if s <= 0.0 || d.iter().any(|&v| v < 0.0) {
        return None;
    }
    let d = [d[0] / s, d[1] / s, d[2] / s, d[3] / s];
    // Positivity and PPT cap both anti-diagonals at the same bound.
    let cap = (d[0] * d[3]).sqrt().min((d[1] * d[2]).sqrt());
    let a14 = a14.clamp(0.0, cap);
    let a23 = a23.clamp(0.0, cap);
    XStateParams::new(d, C64::new(a14, 0.0), C64::new(a23, 0.0)).ok()
}

/// Maximal LQU over separable two-qubit X states with nonnegative entries,
/// by randomized multi-start projected local search. Each candidate respects
/// rho14, rho23 <= min(sqrt(rho11 rho44), sqrt(rho22 rho33)) (positivity +
/// PPT), is evaluated through `lqu_2xd`, and is cross-checked against the
/// Gamma-branch closed form on every evaluation.
pub fn max_lqu_separable_x(search_budget: usize, seed: u64) -> Result<SeparableXMax> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_val = -1.0;
    let mut best: Option<XStateParams> = None;
    let mut max_gap = 0.0f64;
    let mut evals = 0usize;

    fn evaluate(x: &XStateParams, max_gap: &mut f64) -> Result<f64> {
        let rho = x.to_density()?;
        let (u, _) = lqu_2xd(&rho)?;
        let g = sqrt_x_gammas(x)?;
        let via_gamma = lqu_x_from_gammas(&g);
        let gap = (u - via_gamma).abs();
        *max_gap = max_gap.max(gap);
        debug_assert!(gap < 1e-8, "Gamma branch disagrees: {gap}");
        Ok(u)
    }

    while evals < search_budget {
        let d = [
            rng.random::<f64>().max(1e-4),
            rng.random::<f64>().max(1e-4),
            rng.random::<f64>().max(1e-4),
            rng.random::<f64>().max(1e-4),
        ];
        let f14: f64 = rng.random();
        let f23: f64 = rng.random();
        let Some(seed_x) = project_separable_x(d, 0.0, 0.0) else { continue };
        let cap = (seed_x.d1 * seed_x.d4).sqrt().min((seed_x.d2 * seed_x.d3).sqrt());
        let mut x = project_separable_x(
            [seed_x.d1, seed_x.d2, seed_x.d3, seed_x.d4],
            f14 * cap,
            f23 * cap,
        )
        .unwrap();
        let mut val = evaluate(&x, &mut max_gap)?;
        evals += 1;

        // Coordinate perturbations with shrinking step.
        let mut step = 0.15;
        while step > 1e-4 && evals < search_budget {
            let mut improved = false;
            for coord in 0..6 {
                for sign in [1.0f64, -1.0] {
                    if evals >= search_budget {
                        break;
                    }
                    let mut d = [x.d1, x.d2, x.d3, x.d4];
                    let mut a14 = x.a14.re;
                    let mut a23 = x.a23.re;
                    match coord {
                        0..=3 => d[coord] = (d[coord] + sign * step).max(0.0),
                        4 => a14 += sign * step,
                        _ => a23 += sign * step,
                    }
                    let Some(cand) = project_separable_x(d, a14, a23) else { continue };
                    let cand_val = evaluate(&cand, &mut max_gap)?;
                    evals += 1;
                    if cand_val > val {
                        val = cand_val;
                        x = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if val > best_val {
            best_val = val;
            best = Some(x);
        }
    }
    Ok(SeparableXMax {
        value: best_val,
        argmax: best.expect("budget >= 1 evaluates at least one candidate"),
        max_branch_gap: max_gap,
    })
}

/// 3x3 matrix of the LQFI closed form,
/// `M_lk = sum over eigenpairs with p_i + p_j > cutoff of
/// 2 p_i p_j / (p_i + p_j) <psi_i| sigma_l x 1 |psi_j><psi_j| sigma_k x 1 |psi_i>`.
/// Both orderings (including i = j) enter the sum; the diagonal terms carry
/// the mean-value contribution that makes Q_F vanish on product pure states.
#[derive(Debug, Clone)]
pub struct MMatrix(pub [[f64; 3]; 3]);

/// Local quantum Fisher information of a [2, d] state with the qubit probed:
/// Q_F = 1 - max eigenvalue of M.
pub fn lqfi(rho: &DensityMatrix) -> Result<(f64, MMatrix)> {
    if rho.dims().len() != 2 || rho.dims()[0] != 2 {
        return Err(Error::DimMismatch("lqfi needs dims [2, d]".into()));
    }
    let dims = rho.dims().to_vec();
    let n = rho.dim();
    let eig = eigh(rho.mat())?;
    let lifted: Vec<ComplexMatrix> =
        (0..3).map(|i| lift_operator(&pauli(i + 1), &dims, 0)).collect::<Result<_>>()?;
    // elems[l][i][j] = <psi_i| sigma_l x 1 |psi_j>
    let vectors: Vec<Vec<C64>> = (0..n).map(|i| eig.eigenvector(i)).collect();
    let mut elems = vec![vec![vec![C64::new(0.0, 0.0); n]; n]; 3];
    for l in 0..3 {
        for j in 0..n {
            let applied = lifted[l].matvec(&vectors[j]);
            for i in 0..n {
                elems[l][i][j] =
                    vectors[i].iter().zip(&applied).map(|(a, b)| a.conj() * b).sum();
            }
        }
    }
    let mut m = [[0.0f64; 3]; 3];
    let mut discarded_imag = 0.0f64;
    for l in 0..3 {
        for k in 0..3 {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let denom = eig.eigenvalues[i] + eig.eigenvalues[j];
                    if denom <= 1e-12 {
                        continue;
                    }
                    let w = 2.0 * eig.eigenvalues[i].max(0.0) * eig.eigenvalues[j].max(0.0) / denom;
                    acc += elems[l][i][j] * elems[k][j][i] * w;
                }
            }
            discarded_imag = discarded_imag.max(acc.im.abs());
            m[l][k] = acc.re;
        }
    }
    debug_assert!(discarded_imag < 1e-10, "M matrix imaginary part {discarded_imag}");
    // Symmetric part before the eigensolve.
    let mut symm = [[0.0f64; 3]; 3];
    for l in 0..3 {
        for k in 0..3 {
            symm[l][k] = 0.5 * (m[l][k] + m[k][l]);
        }
    }
    let value = (1.0 - sym3_max_eigenvalue(&symm)).clamp(0.0, 1.0);
    Ok((value, MMatrix(symm)))
}

/// Reciprocal variance bounds from the correlation quantifiers:
/// Var_min <= 1/U and Var_min <= 1/Q_F, returned as (1/U, 1/Q_F).
/// Since U <= Q_F, the Q_F bound is the tighter one.
pub fn cr_bounds_from_correlations(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let (u, _) = lqu_2xd(rho)?;
    let (qf, _) = lqfi(rho)?;
    if u < 1e-12 || qf < 1e-12 {
        return Err(Error::ZeroCorrelation);
    }
    Ok((1.0 / u, 1.0 / qf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::linear_entropy;
    use crate::matcore::expi_hermitian;
    use crate::states::{self, Preset};

    #[test]
    fn skew_information_cases() {
        // Commuting diagonal pair: zero.
        let rho = DensityMatrix::new(
            ComplexMatrix::diag(&[C64::new(0.7, 0.0), C64::new(0.3, 0.0)]),
            &[2],
        )
        .unwrap();
        assert!(skew_information(&rho, &pauli(3)).unwrap() < 1e-14);

        // Pure |+> with sigma_z: skew information equals the variance, 1.
        let plus = states::preset(&Preset::PlusState).unwrap();
        let i = skew_information(&plus, &pauli(3)).unwrap();
        assert!((i - 1.0).abs() < 1e-10);
        assert!((i - variance(&plus, &pauli(3))).abs() < 1e-10);

        // Maximally mixed commutes with everything.
        let half = DensityMatrix::new(ComplexMatrix::identity(2).scale_re(0.5), &[2]).unwrap();
        assert!(skew_information(&half, &pauli(3)).unwrap() < 1e-14);

        // I <= Var in general; convexity on mixtures.
        for seed in 0..40u64 {
            let rho = states::random_density(&[2], 2, 100 + seed).unwrap();
            let k = &pauli(1);
            let i = skew_information(&rho, k).unwrap();
            assert!(i <= variance(&rho, k) + 1e-10);
        }
        for seed in 0..20u64 {
            let r1 = states::random_density(&[2, 2], 2, 200 + seed).unwrap();
            let r2 = states::random_density(&[2, 2], 3, 300 + seed).unwrap();
            let mix =
                DensityMatrix::new(r1.mat().scale_re(0.5).add(&r2.mat().scale_re(0.5)), &[2, 2])
                    .unwrap();
            let k = pauli(1).kron(&pauli(3));
            let lhs = skew_information(&mix, &k).unwrap();
            let rhs =
                0.5 * skew_information(&r1, &k).unwrap() + 0.5 * skew_information(&r2, &k).unwrap();
            assert!(lhs <= rhs + 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn skew_information_unitary_invariance_when_commuting() {
        // U = exp(i alpha K) commutes with K.
        let k = pauli(3).kron(&pauli(0));
        let u = expi_hermitian(&k, -0.73).unwrap();
        for seed in 0..10u64 {
            let rho = states::random_density(&[2, 2], 3, 400 + seed).unwrap();
            let rot = DensityMatrix::new(u.mul(rho.mat()).mul(&u.adjoint()), &[2, 2]).unwrap();
            let a = skew_information(&rho, &k).unwrap();
            let b = skew_information(&rot, &k).unwrap();
            assert!((a - b).abs() < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn lqu_cases() {
        let bell = states::preset(&Preset::BellPhiPlus).unwrap();
        let (u, w) = lqu_2xd(&bell).unwrap();
        assert!((u - 1.0).abs() < 1e-10, "Bell LQU {u}");
        // W of a maximally entangled pure state has lambda_max ~ 0.
        assert!(sym3_max_eigenvalue(&w.0).abs() < 1e-10);

        let cc =
            XStateParams::new([0.5, 0.0, 0.0, 0.5], C64::new(0.0, 0.0), C64::new(0.0, 0.0))
                .unwrap();
        let (u, _) = lqu_2xd(&cc.to_density().unwrap()).unwrap();
        assert!(u.abs() < 1e-10, "classical state LQU {u}");

        // Pure-state identity: LQU = S2(rho_A) = C^2.
        for seed in 0..200u64 {
            let psi = states::random_pure(&[2, 2], 700 + seed);
            let rho = psi.to_density();
            let (u, _) = lqu_2xd(&rho).unwrap();
            let s2 = linear_entropy(&rho.partial_trace(&[0]).unwrap());
            let c = crate::entanglement::concurrence_pure(&psi, 1).unwrap();
            assert!((u - s2).abs() < 1e-9, "seed {seed}: {u} vs {s2}");
            assert!((u - c * c).abs() < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn lqu_local_unitary_invariance() {
        for seed in 0..25u64 {
            let rho = states::random_density(&[2, 2], 3, 800 + seed).unwrap();
            let (u0, _) = lqu_2xd(&rho).unwrap();
            let ua = states::random_unitary(2, 900 + seed);
            let ub = states::random_unitary(2, 1000 + seed);
            let rot =
                rho.apply_local_unitary(&ua, 0).unwrap().apply_local_unitary(&ub, 1).unwrap();
            let (u1, _) = lqu_2xd(&rot).unwrap();
            assert!((u0 - u1).abs() < 1e-8, "seed {seed}: {u0} vs {u1}");
        }
    }

    #[test]
    fn lqu_multiqubit_cases() {
        let ghz = states::preset(&Preset::Ghz { n: 3 }).unwrap();
        let (_, per) = lqu_multiqubit_avg(&ghz).unwrap();
        for v in &per {
            assert!((v - per[0]).abs() < 1e-10, "GHZ per-cut symmetry");
        }

        // Product of three pure qubits: average 0.
        let prod =
            states::preset(&Preset::Computational { dims: vec![2, 2, 2], basis: vec![0, 1, 1] })
                .unwrap();
        let (avg, _) = lqu_multiqubit_avg(&prod).unwrap();
        assert!(avg.abs() < 1e-10);

        // Per-cut value = S2 of the single-qubit reduction on pure states.
        let psi = states::random_pure(&[2, 2, 2], 3).to_density();
        let (_, per) = lqu_multiqubit_avg(&psi).unwrap();
        for (k, v) in per.iter().enumerate() {
            let s2 = linear_entropy(&psi.partial_trace(&[k]).unwrap());
            assert!((v - s2).abs() < 1e-9, "cut {k}");
        }
    }

    #[test]
    fn lqu_d1xd2_cases() {
        // d1 = 2 reduces to the Pauli route.
        for seed in 0..20u64 {
            let rho = states::random_density(&[2, 3], 4, 1100 + seed).unwrap();
            let a = lqu_d1xd2(&rho).unwrap();
            let (b, _) = lqu_2xd(&rho).unwrap();
            assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
        }

        // Qutrit-qubit product state: zero.
        let a = states::random_density(&[3], 2, 5).unwrap();
        let b = states::random_density(&[2], 2, 6).unwrap();
        let prod = DensityMatrix::new(a.mat().kron(b.mat()), &[3, 2]).unwrap();
        assert!(lqu_d1xd2(&prod).unwrap() < 1e-8);

        // Random qutrit-qubit pure state: value within [0, 2/d1].
        let psi = states::random_pure(&[3, 2], 31).to_density();
        let u = lqu_d1xd2(&psi).unwrap();
        assert!((0.0..=2.0 / 3.0 + 1e-12).contains(&u), "U = {u}");
    }

    #[test]
    fn separable_x_maximum() {
        let out = max_lqu_separable_x(400, 11).unwrap();
        assert!(out.value >= 0.0 && out.value <= 1.0);
        assert!(out.max_branch_gap < 1e-8, "branch gap {}", out.max_branch_gap);
        // Constraints hold at the argmax.
        let x = out.argmax;
        let cap = (x.d1 * x.d4).sqrt().min((x.d2 * x.d3).sqrt()) + 1e-12;
        assert!(x.a14.re <= cap && x.a23.re <= cap);
        let rho = x.to_density().unwrap();
        let (ppt, _) = crate::entanglement::is_ppt(&rho, 0).unwrap();
        assert!(ppt, "argmax stays separable");

        // Larger budgets never decrease the best value.
        let small = max_lqu_separable_x(150, 7).unwrap();
        let large = max_lqu_separable_x(1500, 7).unwrap();
        assert!(large.value >= small.value - 1e-12);
    }

    #[test]
    fn lqfi_cases() {
        let cc =
            XStateParams::new([0.5, 0.0, 0.0, 0.5], C64::new(0.0, 0.0), C64::new(0.0, 0.0))
                .unwrap();
        let (qf, _) = lqfi(&cc.to_density().unwrap()).unwrap();
        assert!(qf.abs() < 1e-10, "classical LQFI {qf}");

        let bell = states::preset(&Preset::BellPhiPlus).unwrap();
        let (qf, m) = lqfi(&bell).unwrap();
        assert!((qf - 1.0).abs() < 1e-10);
        for row in m.0 {
            for v in row {
                assert!(v.abs() < 1e-10, "Bell M = 0");
            }
        }

        // Product pure state carries no discord-type correlation.
        let prod = states::preset(&Preset::Computational { dims: vec![2, 2], basis: vec![0, 1] })
            .unwrap();
        let (qf, _) = lqfi(&prod).unwrap();
        assert!(qf.abs() < 1e-10, "product LQFI {qf}");
    }

    #[test]
    fn w_and_m_matrix_spectra_stay_in_range() {
        // W eigenvalues live in [0, 1]; M is PSD.
        let eig_range = |m: &[[f64; 3]; 3]| {
            let cm = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(m[i][j], 0.0));
            let e = eigh(&cm).unwrap();
            (e.eigenvalues[0], e.eigenvalues[2])
        };
        for seed in 0..40u64 {
            let rho = states::random_density(&[2, 2], (seed as usize % 4) + 1, 1200 + seed).unwrap();
            let (_, w) = lqu_2xd(&rho).unwrap();
            let (lo, hi) = eig_range(&w.0);
            assert!(lo >= -1e-10 && hi <= 1.0 + 1e-10, "seed {seed}: W in [{lo}, {hi}]");
            let (_, m) = lqfi(&rho).unwrap();
            let (lo, _) = eig_range(&m.0);
            assert!(lo >= -1e-10, "seed {seed}: M min {lo}");
        }
    }

    #[test]
    fn sandwich_bound() {
        for seed in 0..200u64 {
            let dims: &[usize] = if seed % 2 == 0 { &[2, 2] } else { &[2, 3] };
            let rank = (seed as usize % 3) + 1;
            let rho = states::random_density(dims, rank, 1300 + seed).unwrap();
            let (u, _) = lqu_2xd(&rho).unwrap();
            let (qf, _) = lqfi(&rho).unwrap();
            assert!(u <= qf + 1e-9, "seed {seed}: U {u} > QF {qf}");
            assert!(qf <= 2.0 * u + 1e-9, "seed {seed}: QF {qf} > 2U {u}");
        }
    }

    #[test]
    fn cr_bounds_cases() {
        let bell = states::preset(&Preset::BellPhiPlus).unwrap();
        let (inv_u, inv_qf) = cr_bounds_from_correlations(&bell).unwrap();
        assert!((inv_u - 1.0).abs() < 1e-9 && (inv_qf - 1.0).abs() < 1e-9);

        // Near-classical: both large, ordered.
        let x = XStateParams::new(
            [0.45, 0.05, 0.05, 0.45],
            C64::new(0.01, 0.0),
            C64::new(0.01, 0.0),
        )
        .unwrap();
        let (inv_u, inv_qf) = cr_bounds_from_correlations(&x.to_density().unwrap()).unwrap();
        assert!(inv_qf <= inv_u + 1e-9);
        assert!(inv_u > 10.0);

        let cc =
            XStateParams::new([0.5, 0.0, 0.0, 0.5], C64::new(0.0, 0.0), C64::new(0.0, 0.0))
                .unwrap();
        assert!(matches!(
            cr_bounds_from_correlations(&cc.to_density().unwrap()),
            Err(Error::ZeroCorrelation)
        ));
    }
}
