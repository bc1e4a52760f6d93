//! Discord-type correlation quantifiers.
//!
//! Entropic discord comes in four routes that cross-check each other:
//! the closed form for two-qubit X states, a grid+refine numeric optimizer
//! over local von Neumann measurements, a rank-2 formula built on the
//! Koashi-Winter relation, and the linear-entropy (channel reconstruction)
//! route. Geometric variants cover the Hilbert-Schmidt and trace distances.

use num_complex::Complex64 as C64;

use crate::entanglement::{concurrence_2q, eof_2q, negativity};
use crate::entropy::{binary_h, linear_entropy, mutual_information, von_neumann, xlog2x};
use crate::matcore::{eigh, pauli, solve, sqrt_psd, ComplexMatrix, ZERO};
use crate::states::{bloch_decompose, fano_bloch, DensityMatrix, PureState, XStateParams};
use crate::uncertainty::lqu_2xd;
use crate::{Error, Result};

/// Which subsystem the measurement acts on. `A` is factor 0, `B` factor 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    XClosed,
    Numeric,
    Rank2,
    Linear,
}

/// Quantum/classical split of the mutual information for one measured side.
#[derive(Debug, Clone)]
pub struct DiscordResult {
    pub quantum: f64,
    pub classical: f64,
    /// Quantum mutual information I(A:B).
    pub total: f64,
    pub measured: Side,
    pub method: Method,
}

/// Real 3 x (d^2 - 1) channel matrix of the qudit channel reconstructed from
/// the symmetric purification; row i pairs sigma_i with the target
/// generators.
#[derive(Debug, Clone)]
pub struct ChannelMatrixL {
    pub rows: usize,
    pub cols: usize,
    pub l: Vec<f64>,
}

impl ChannelMatrixL {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.l[i * self.cols + j]
    }

    /// Largest eigenvalue of L^T L (equivalently of L L^T).
    pub fn lambda_max(&self) -> f64 {
        let mut g = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = (0..self.cols).map(|k| self.get(i, k) * self.get(j, k)).sum();
            }
        }
        sym3_max_eigenvalue(&g)
    }
}

/// Largest eigenvalue of a real symmetric 3x3 matrix, via the Hermitian
/// eigensolver.
pub(crate) fn sym3_max_eigenvalue(m: &[[f64; 3]; 3]) -> f64 {
    let cm = ComplexMatrix::from_fn(3, 3, |i, j| C64::new(0.5 * (m[i][j] + m[j][i]), 0.0));
    let eig = eigh(&cm).expect("symmetric 3x3");
    eig.eigenvalues[2]
}

/// g(x) = h((1 + sqrt(1 - x))/2), the EoF of a two-qubit state with squared
/// concurrence x.
pub fn g_of_csquared(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    binary_h(0.5 * (1.0 + (1.0 - x).sqrt())).expect("argument in [1/2, 1]")
}

// --- Wang closed form for X states -------------------------------------------

/// Entropic discord of a two-qubit X state, measurement on B.
///
/// eta_12 = (rho11 + rho44 +- sqrt((rho11 - rho44)^2 + 4 |rho14|^2))/2 and
/// eta_34 likewise for the inner block; the two candidate conditional
/// entropies are
/// zeta_1 = h((1 + sqrt((1 - 2(rho33 + rho44))^2 + 4(|rho14| + |rho23|)^2))/2)
/// (theta = pi/2) and zeta_2 = -sum rho_ii log rho_ii - h(rho11 + rho33)
/// (theta = 0). Then Q = min_i [h(rho11 + rho33) + sum eta log eta + zeta_i]
/// and J = max_i [h(rho11 + rho22) - zeta_i].
pub fn discord_x(x: &XStateParams) -> Result<DiscordResult> {
    x.check()?;
    let (r11, r22, r33, r44) = (x.d1, x.d2, x.d3, x.d4);
    let (m14, m23) = (x.a14.norm(), x.a23.norm());

    let disc_out = ((r11 - r44).powi(2) + 4.0 * m14 * m14).max(0.0).sqrt();
    let disc_in = ((r22 - r33).powi(2) + 4.0 * m23 * m23).max(0.0).sqrt();
    let etas = [
        0.5 * (r11 + r44 + disc_out),
        0.5 * (r11 + r44 - disc_out),
        0.5 * (r22 + r33 + disc_in),
        0.5 * (r22 + r33 - disc_in),
    ];
    let sum_eta_log: f64 = etas.iter().map(|&e| xlog2x(e.max(0.0))).sum();

    let s_a = binary_h(r11 + r22)?;
    let s_b = binary_h(r11 + r33)?;
    let total = s_a + s_b + sum_eta_log; // S_AB = -sum eta log eta

    let zeta1 = {
        let t = (1.0 - 2.0 * (r33 + r44)).powi(2) + 4.0 * (m14 + m23).powi(2);
        binary_h(0.5 * (1.0 + t.max(0.0).sqrt().min(1.0)))?
    };
    let zeta2 = -(xlog2x(r11) + xlog2x(r22) + xlog2x(r33) + xlog2x(r44)) - s_b;

    let q = |zeta: f64| s_b + sum_eta_log + zeta;
    let j = |zeta: f64| s_a - zeta;
    let quantum = q(zeta1).min(q(zeta2)).max(0.0);
    let classical = j(zeta1).max(j(zeta2)).max(0.0);
    Ok(DiscordResult { quantum, classical, total, measured: Side::B, method: Method::XClosed })
}

// --- numeric optimizer --------------------------------------------------------

/// Conditional-entropy objective for projective measurements on the last
/// (qubit) factor of a [dA, 2] state, with the A-side blocks precomputed.
struct CondEntropy {
    da: usize,
    blocks: [ComplexMatrix; 4], // blocks[k*2 + l] = <.,k| rho |.,l> as an A-operator
}

impl CondEntropy {
    fn new(rho: &DensityMatrix) -> Self {
        let da = rho.dims()[0];
        let m = rho.mat();
        let block =
            |k: usize, l: usize| ComplexMatrix::from_fn(da, da, |r, s| m[(r * 2 + k, s * 2 + l)]);
        CondEntropy { da, blocks: [block(0, 0), block(0, 1), block(1, 0), block(1, 1)] }
    }

    /// Weight and entropy of the conditional A state for outcome vector w.
    fn outcome_entropy(&self, w: [C64; 2]) -> (f64, f64) {
        // unnormalized rho_A|w = sum_{kl} w_l conj(w_k) B_{kl}
        let da = self.da;
        let mut m = ComplexMatrix::zeros(da, da);
        for k in 0..2 {
            for l in 0..2 {
                let coeff = w[l] * w[k].conj();
                if coeff == ZERO {
                    continue;
                }
                m = m.add(&self.blocks[k * 2 + l].scale(coeff));
            }
        }
        let p = m.trace().re;
        if p < 1e-14 {
            return (0.0, 0.0);
        }
        let s = if da == 2 {
            let a = m[(0, 0)].re / p;
            let b = m[(1, 1)].re / p;
            let c = m[(0, 1)].norm() / p;
            let half_gap = (0.25 * (a - b) * (a - b) + c * c).max(0.0).sqrt();
            let mu = (0.5 * (a + b) + half_gap).clamp(0.0, 1.0);
            binary_h(mu).unwrap()
        } else {
            let eig = eigh(&m.hermitize()).expect("hermitian conditional state");
            -eig.eigenvalues.iter().map(|&l| xlog2x((l / p).max(0.0))).sum::<f64>()
        };
        (p, s)
    }

    /// sum_j p_j S(rho_A | j) for the measurement direction (theta, phi).
    fn eval(&self, theta: f64, phi: f64) -> f64 {
        let half = 0.5 * theta;
        let v = [C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), phi)];
        let v_perp = [-v[1].conj(), v[0].conj()];
        let (p1, s1) = self.outcome_entropy(v);
        let (p2, s2) = self.outcome_entropy(v_perp);
        p1 * s1 + p2 * s2
    }
}

/// Numeric entropic discord: minimizes the conditional entropy over
/// projective qubit measurements on `measured`, scanning a
/// (grid_n + 1) x grid_n grid in (theta, phi) and then halving steps around
/// the best grid point `refine_iters` times. Ties keep the earliest grid
/// point, so results are deterministic. The returned quantum value is an
/// upper bound on the true discord that tightens with grid_n.
pub fn discord_numeric(
    rho: &DensityMatrix,
    measured: Side,
    grid_n: usize,
    refine_iters: usize,
) -> Result<DiscordResult> {
    if rho.dims().len() != 2 {
        return Err(Error::DimMismatch("discord_numeric needs a bipartite state".into()));
    }
    let rho_ba;
    let work = match measured {
        Side::B => {
            if rho.dims()[1] != 2 {
                return Err(Error::DimMismatch("measured side must be a qubit".into()));
            }
            rho
        }
        Side::A => {
            if rho.dims()[0] != 2 {
                return Err(Error::DimMismatch("measured side must be a qubit".into()));
            }
            rho_ba = rho.permute(&[1, 0])?;
            &rho_ba
        }
    };

    let total = mutual_information(work)?;
    let s_unmeasured = von_neumann(&work.partial_trace(&[0])?);
    let obj = CondEntropy::new(work);

    let grid_n = grid_n.max(2);
    let pi = std::f64::consts::PI;
    let tau = std::f64::consts::TAU;
    let mut best = f64::INFINITY;
    let (mut bt, mut bp) = (0.0, 0.0);
    for i in 0..=grid_n {
        let theta = pi * i as f64 / grid_n as f64;
        for j in 0..grid_n {
            let phi = tau * j as f64 / grid_n as f64;
            let v = obj.eval(theta, phi);
            if v < best {
                best = v;
                bt = theta;
                bp = phi;
            }
        }
    }
    let mut dth = pi / grid_n as f64;
    let mut dph = tau / grid_n as f64;
    for _ in 0..refine_iters {
        for (di, dj) in [(-1i32, 0i32), (1, 0), (0, -1), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)]
        {
            let t = (bt + di as f64 * dth).clamp(0.0, pi);
            let p = (bp + dj as f64 * dph).rem_euclid(tau);
            let v = obj.eval(t, p);
            if v < best {
                best = v;
                bt = t;
                bp = p;
            }
        }
        dth *= 0.5;
        dph *= 0.5;
    }

    let classical = (s_unmeasured - best).max(0.0);
    let quantum = (total - classical).max(0.0);
    Ok(DiscordResult { quantum, classical, total, measured, method: Method::Numeric })
}

/// Entropic discord with the measurement fixed to the computational basis of
/// the measured qubit (no optimization). Used by the coherence-consumption
/// identity, which is stated for the reference basis.
pub fn discord_fixed_computational(rho: &DensityMatrix, measured: Side) -> Result<DiscordResult> {
    if rho.dims().len() != 2 {
        return Err(Error::DimMismatch("needs a bipartite state".into()));
    }
    let rho_ba;
    let work = match measured {
        Side::B => rho,
        Side::A => {
            rho_ba = rho.permute(&[1, 0])?;
            &rho_ba
        }
    };
    if work.dims()[1] != 2 {
        return Err(Error::DimMismatch("measured side must be a qubit".into()));
    }
    let total = mutual_information(work)?;
    let s_unmeasured = von_neumann(&work.partial_trace(&[0])?);
    let obj = CondEntropy::new(work);
    let cond = obj.eval(0.0, 0.0);
    let classical = s_unmeasured - cond;
    Ok(DiscordResult {
        quantum: total - classical,
        classical,
        total,
        measured,
        method: Method::Numeric,
    })
}

// --- rank-2 closed form -------------------------------------------------------

/// Entropic discord of a rank <= 2 two-qubit state through the
/// Koashi-Winter route: Q_B = S(rho_B) - S(rho_AB) + g(S2(rho_A) - J2_B),
/// with J2 from the linear-entropy channel reconstruction. A rank-1 input is
/// pure, where discord equals the entanglement entropy.
pub fn discord_rank2(rho: &DensityMatrix, measured: Side) -> Result<f64> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch("discord_rank2 needs dims [2,2]".into()));
    }
    let rho_ba;
    let work = match measured {
        Side::B => rho,
        Side::A => {
            rho_ba = rho.permute(&[1, 0])?;
            &rho_ba
        }
    };
    let eig = eigh(work.mat())?;
    let rank = eig.eigenvalues.iter().filter(|&&l| l > 1e-9).count();
    if rank > 2 {
        return Err(Error::RankTooHigh { rank });
    }
    if rank <= 1 {
        return Ok(von_neumann(&work.partial_trace(&[0])?));
    }
    let (j2, _) = classical_corr_linear_qubitqubit(work)?;
    let s_b = von_neumann(&work.partial_trace(&[1])?);
    let s_ab = von_neumann(work);
    let s2_a = linear_entropy(&work.partial_trace(&[0])?);
    Ok(s_b - s_ab + g_of_csquared(s2_a - j2))
}

// --- geometric discord ----------------------------------------------------------

/// Hilbert-Schmidt geometric discord of a two-qubit state:
/// Q_g2 = (||x||^2 + ||T||^2 - K_max)/4 with K = x x^T + T T^T.
pub fn geometric_discord_hs(rho: &DensityMatrix) -> Result<f64> {
    let b = bloch_decompose(rho)?;
    let mut k = [[0.0f64; 3]; 3];
    let mut norm_x = 0.0;
    let mut norm_t = 0.0;
    for i in 0..3 {
        norm_x += b.x[i] * b.x[i];
        for j in 0..3 {
            norm_t += b.t[i][j] * b.t[i][j];
            k[i][j] = b.x[i] * b.x[j] + (0..3).map(|m| b.t[i][m] * b.t[j][m]).sum::<f64>();
        }
    }
    Ok(0.25 * (norm_x + norm_t - sym3_max_eigenvalue(&k)).max(0.0))
}

/// Trace-distance discord of a two-qubit X state.
///
/// Complex anti-diagonal phases are first removed by local unitaries
/// diag(1, e^{i theta}), which leave the trace discord invariant; the
/// formula is stated for real entries. With
/// gamma1 = 2(rho32 + rho41), gamma2 = 2(rho32 - rho41),
/// gamma3 = 1 - 2(rho22 + rho33), x3 = 2(rho11 + rho22) - 1:
///
/// Q_T^2 = [g1^2 max{g3^2, g2^2 + x3^2} - g2^2 min{g3^2, g1^2}]
///       / [max{g3^2, g2^2 + x3^2} - min{g3^2, g1^2} + g1^2 - g2^2].
///
/// The denominator grouping is fixed by the Bell-diagonal limit (the
/// intermediate of |c1|, |c2|, |c3|).
pub fn trace_discord_x(x: &XStateParams) -> Result<f64> {
    x.check()?;
    // Local phase canonicalization: a14, a23 -> |a14|, |a23|.
    let (m14, m23) = (x.a14.norm(), x.a23.norm());
    let g1 = 2.0 * (m23 + m14);
    let g2 = 2.0 * (m23 - m14);
    let g3 = 1.0 - 2.0 * (x.d2 + x.d3);
    let x3 = 2.0 * (x.d1 + x.d2) - 1.0;
    let (g1s, g2s, g3s, x3s) = (g1 * g1, g2 * g2, g3 * g3, x3 * x3);
    let num = g1s * g3s.max(g2s + x3s) - g2s * g3s.min(g1s);
    let den = g3s.max(g2s + x3s) - g3s.min(g1s) + g1s - g2s;
    if den.abs() < 1e-15 {
        // Degenerate only when g1^2 = g2^2 (one anti-diagonal vanishes),
        // where the formula reduces to Q^2 = g1^2 identically.
        return Ok(g1s.sqrt());
    }
    Ok((num / den).max(0.0).sqrt())
}

// --- Bell-diagonal closed forms --------------------------------------------------

fn sorted_abs(c: [f64; 3]) -> [f64; 3] {
    let mut a = [c[0].abs(), c[1].abs(), c[2].abs()];
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    a
}

/// Entropic discord of a Bell-diagonal state:
/// Q = log2[4 prod lambda^lambda / ((1-c+)^{(1-c+)/2} (1+c+)^{(1+c+)/2})]
/// with c+ = max |c_i| and lambda the Bell-basis spectrum.
pub fn bell_diagonal_entropic_discord(c: [f64; 3]) -> f64 {
    let p = crate::states::BellDiagonalParams { c };
    let lam = p.bell_basis_eigenvalues();
    let cp = sorted_abs(c)[2];
    let log_prod: f64 = lam.iter().map(|&l| xlog2x(l.max(0.0))).sum();
    // log2 of (1 -+ c+)^{(1 -+ c+)/2} written via x log2 x.
    let den = 0.5 * (xlog2x(1.0 - cp) + xlog2x(1.0 + cp));
    (2.0 + log_prod - den).max(0.0)
}

/// Trace-distance discord of a Bell-diagonal state: the intermediate of
/// |c1|, |c2|, |c3|.
pub fn bell_diagonal_trace_discord(c: [f64; 3]) -> f64 {
    sorted_abs(c)[1]
}

/// Hilbert-Schmidt geometric discord of a Bell-diagonal state:
/// (c_-^2 + int^2)/4.
pub fn bell_diagonal_geometric_discord(c: [f64; 3]) -> f64 {
    let s = sorted_abs(c);
    0.25 * (s[0] * s[0] + s[1] * s[1])
}

/// Linear-entropy classical correlation of a Bell-diagonal state: max c_i^2.
pub fn bell_diagonal_j2(c: [f64; 3]) -> f64 {
    let s = sorted_abs(c);
    s[2] * s[2]
}

// --- linear-entropy classical correlation ----------------------------------------

/// Classical correlation J2 of a two-qubit state under the linear entropy,
/// through the symmetric-purification channel reconstruction.
///
/// With rho_B = sum_i lambda_i |phi_i><phi_i| and v_{mi} = (sqrt rho_B)_{im}
/// the purification amplitudes, the four block equations
/// B_ij = sum_mn v_{mi} conj(v_{nj}) Lambda(|m><n|) are solved for the
/// channel action, L_ij = Tr[Lambda(sigma_j) sigma_i]/2 is assembled, and
/// J2 = lambda_max(L^T L) S2(rho_B) (the 4/d^2 prefactor is 1 at d = 2).
pub fn classical_corr_linear_qubitqubit(rho: &DensityMatrix) -> Result<(f64, ChannelMatrixL)> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch("qubit-qubit route needs dims [2,2]".into()));
    }
    let rho_b = rho.partial_trace(&[1])?;
    let eig_b = eigh(rho_b.mat())?;
    let lam_min = eig_b.eigenvalues[0];
    if lam_min < 1e-9 {
        return Err(Error::SingularPurification {
            cond: eig_b.eigenvalues[1] / lam_min.max(1e-300),
        });
    }
    let s = sqrt_psd(rho_b.mat())?;
    // v_{mi} = (sqrt rho_B)_{im}; coefficients C_{(ij),(mn)} = v_mi conj(v_nj).
    let v = |m: usize, i: usize| s[(i, m)];
    let coeff = ComplexMatrix::from_fn(4, 4, |row, col| {
        let (i, j) = (row / 2, row % 2);
        let (m, n) = (col / 2, col % 2);
        v(m, i) * v(n, j).conj()
    });
    let mat = rho.mat();
    // One RHS column per A-matrix position (r, t).
    let rhs = ComplexMatrix::from_fn(4, 4, |row, col| {
        let (i, j) = (row / 2, row % 2);
        let (r, t) = (col / 2, col % 2);
        mat[(r * 2 + i, t * 2 + j)]
    });
    let (x, cond) =
        solve(&coeff, &rhs).map_err(|_| Error::SingularPurification { cond: f64::INFINITY })?;
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::SingularPurification { cond });
    }
    // Lambda(|m><n|) recovered from the solution rows.
    let lambda_mn =
        |m: usize, n: usize| ComplexMatrix::from_fn(2, 2, |r, t| x[(m * 2 + n, r * 2 + t)]);
    let lambda_of = |op: &ComplexMatrix| {
        let mut out = ComplexMatrix::zeros(2, 2);
        for m in 0..2 {
            for n in 0..2 {
                let c = op[(m, n)];
                if c == ZERO {
                    continue;
                }
                out = out.add(&lambda_mn(m, n).scale(c));
            }
        }
        out
    };
    let mut l = vec![0.0f64; 9];
    for j in 0..3 {
        let lam_sj = lambda_of(&pauli(j + 1));
        for i in 0..3 {
            let t = lam_sj.mul(&pauli(i + 1)).trace();
            debug_assert!(t.im.abs() < 1e-8, "channel image not Hermitian: {}", t.im);
            l[i * 3 + j] = 0.5 * t.re;
        }
    }
    let lmat = ChannelMatrixL { rows: 3, cols: 3, l };
    let j2 = lmat.lambda_max() * linear_entropy(&rho_b);
    Ok((j2, lmat))
}

/// Classical correlation J2 of a [d, 2] qudit-qubit state via the Fano-Bloch
/// route: cal L = (2/d) (cal R^T)^{-1} R^T relates the correlation tensors of
/// the state and of the symmetric purification of rho_B, the 3 x (d^2 - 1)
/// block of (d/4) cal L is the channel matrix, and
/// J2 = (4/d^2) lambda_max(L L^T) S2(rho_B).
pub fn classical_corr_linear_quditqubit(rho: &DensityMatrix) -> Result<(f64, ChannelMatrixL)> {
    if rho.dims().len() != 2 || rho.dims()[1] != 2 {
        return Err(Error::DimMismatch("qudit-qubit route needs dims [d, 2]".into()));
    }
    let d = rho.dims()[0];
    let rho_b = rho.partial_trace(&[1])?;
    let eig_b = eigh(rho_b.mat())?;
    if eig_b.eigenvalues[0] < 1e-9 {
        return Err(Error::SingularR {
            cond: eig_b.eigenvalues[1] / eig_b.eigenvalues[0].max(1e-300),
        });
    }
    let s = sqrt_psd(rho_b.mat())?;
    // |v> on B' (x) B with amplitudes v_{mi} = (sqrt rho_B)_{im}.
    let mut amps = vec![ZERO; 4];
    for m in 0..2 {
        for i in 0..2 {
            amps[m * 2 + i] = s[(i, m)];
        }
    }
    let pur = ComplexMatrix::outer(&amps, &amps);
    // cal R_{alpha beta} = Tr(rho_B'B sigma^alpha x sigma^beta).
    let r_pur = ComplexMatrix::from_fn(4, 4, |a, b| {
        C64::new(pauli(a).kron(&pauli(b)).mul(&pur).trace().re, 0.0)
    });
    // R_{alpha beta} = d Tr(rho gamma^alpha x sigma^beta), so R_00 = d.
    let tensor = fano_bloch(rho)?;
    let rt = ComplexMatrix::from_fn(4, d * d, |b, a| C64::new(tensor.r[a][b], 0.0));
    let (sol, cond) = solve(&r_pur.transpose(), &rt.scale_re(2.0 / d as f64))
        .map_err(|_| Error::SingularR { cond: f64::INFINITY })?;
    if !cond.is_finite() || cond > 1e12 {
        return Err(Error::SingularR { cond });
    }
    // Channel matrix: L_{i delta} = (d/4) cal L_{(i+1)(delta+1)}.
    let cols = d * d - 1;
    let mut l = vec![0.0f64; 3 * cols];
    for i in 0..3 {
        for delta in 0..cols {
            l[i * cols + delta] = 0.25 * d as f64 * sol[(i + 1, delta + 1)].re;
        }
    }
    let lmat = ChannelMatrixL { rows: 3, cols, l };
    let j2 = (4.0 / (d * d) as f64) * lmat.lambda_max() * linear_entropy(&rho_b);
    Ok((j2, lmat))
}

/// Linear discord Q2 = I(rho) - J2_B for a [d, 2] state, selecting the
/// applicable J2 route. Mixes von Neumann mutual information with the
/// linear-entropy classical correlation, as defined.
pub fn linear_discord(rho: &DensityMatrix) -> Result<f64> {
    let j2 = if rho.dims() == [2, 2] {
        classical_corr_linear_qubitqubit(rho)?.0
    } else {
        classical_corr_linear_quditqubit(rho)?.0
    };
    Ok(mutual_information(rho)? - j2)
}

// --- Koashi-Winter and conservation laws ------------------------------------------

/// |E_f(rho_AB) + J_B(rho_BE) - S(rho_B)| on a pure three-qubit state, with
/// the classical correlation taken from the numeric optimizer.
///
/// J_B(rho_BE) is the one-way classical correlation that MEASURES the
/// purifying side E and reduces the entropy of B: measuring E steers AB
/// into pure ensembles, which is what ties the minimum average entropy to
/// E_f(rho_AB). Measuring B instead breaks the identity on generic states.
pub fn koashi_winter_residual(psi: &PureState) -> Result<f64> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::DimMismatch("koashi_winter_residual needs dims [2,2,2]".into()));
    }
    let rho = psi.to_density();
    let rho_ab = rho.partial_trace(&[0, 1])?;
    let rho_be = rho.partial_trace(&[1, 2])?;
    let ef = eof_2q(&rho_ab)?;
    // rho_BE carries B at factor 0, E at factor 1; measure E.
    let j = discord_numeric(&rho_be, Side::B, 64, 20)?.classical;
    let s_b = von_neumann(&rho.partial_trace(&[1])?);
    Ok((ef + j - s_b).abs())
}

/// Residuals of the three-qubit conservation laws
/// E_AB + E_AC = Q_{A|B} + Q_{A|C} (central) and
/// E_AB + E_BC + E_CA = Q_{B|A} + Q_{C|B} + Q_{A|C} (cyclic).
///
/// Q_{X|Y} is the discord of the pair (X, Y) with the measurement on Y:
/// the laws descend from the Koashi-Winter relation, whose steering
/// argument fixes the measured side to the one named second. The central
/// law on generic states fails by O(0.1) under the opposite reading.
pub fn conservation_3q_residual(psi: &PureState) -> Result<(f64, f64)> {
    if psi.dims() != [2, 2, 2] {
        return Err(Error::DimMismatch("conservation_3q_residual needs dims [2,2,2]".into()));
    }
    let rho = psi.to_density();
    let rho_ab = rho.partial_trace(&[0, 1])?;
    let rho_ac = rho.partial_trace(&[0, 2])?;
    let rho_bc = rho.partial_trace(&[1, 2])?;
    let e_ab = eof_2q(&rho_ab)?;
    let e_ac = eof_2q(&rho_ac)?;
    let e_bc = eof_2q(&rho_bc)?;

    // Q_{A|B}: pair (A, B) measured on B; Q_{A|C}: pair (A, C) measured on C.
    let q_a_b = discord_numeric(&rho_ab, Side::B, 64, 20)?.quantum;
    let q_a_c = discord_numeric(&rho_ac, Side::B, 64, 20)?.quantum;
    let central = (e_ab + e_ac - q_a_b - q_a_c).abs();

    // Cyclic set: Q_{B|A} (measure A), Q_{C|B} (measure B), Q_{A|C} above.
    let q_b_a = discord_numeric(&rho_ab, Side::A, 64, 20)?.quantum;
    let q_c_b = discord_numeric(&rho_bc, Side::A, 64, 20)?.quantum;
    let cyclic = (e_ab + e_bc + e_ac - q_b_a - q_c_b - q_a_c).abs();
    Ok((central, cyclic))
}

/// Correlation measure used by the monogamy quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonogamyMeasure {
    Lqu,
    NegativitySq,
    ConcurrenceSq,
}

/// delta_Q = Q(pivot | rest) - sum_i Q(pivot, B_i) for a multiqubit state.
/// The sign is reported as computed; monogamy is measure-dependent.
pub fn monogamy_delta(rho: &DensityMatrix, measure: MonogamyMeasure, pivot: usize) -> Result<f64> {
    let n = rho.dims().len();
    if pivot >= n {
        return Err(Error::BadSubsystem { index: pivot, count: n });
    }
    if rho.dims().iter().any(|&d| d != 2) || n < 3 {
        return Err(Error::DimMismatch("monogamy_delta needs >= 3 qubits".into()));
    }
    let mut perm: Vec<usize> = vec![pivot];
    perm.extend((0..n).filter(|&k| k != pivot));
    let fronted = rho.permute(&perm)?;
    let rest_dim: usize = fronted.dims()[1..].iter().product();
    let bip = fronted.with_dims(&[2, rest_dim])?;
    let one_vs_rest = match measure {
        MonogamyMeasure::Lqu => lqu_2xd(&bip)?.0,
        MonogamyMeasure::NegativitySq => {
            let v = negativity(&bip, 0)?;
            v * v
        }
        MonogamyMeasure::ConcurrenceSq => {
            if (rho.purity() - 1.0).abs() > 1e-9 {
                return Err(Error::UnsupportedCut {
                    measure: "concurrence^2".into(),
                    cut: "one-vs-rest of a mixed state".into(),
                });
            }
            let red = bip.partial_trace(&[0])?;
            2.0 * (1.0 - red.purity())
        }
    };
    let mut pairwise = 0.0;
    for other in (0..n).filter(|&k| k != pivot) {
        let mut pair = [pivot, other];
        pair.sort_unstable();
        let mut red = rho.partial_trace(&pair)?;
        if pair[0] != pivot {
            red = red.permute(&[1, 0])?;
        }
        pairwise += match measure {
            MonogamyMeasure::Lqu => lqu_2xd(&red)?.0,
            MonogamyMeasure::NegativitySq => {
                let v = negativity(&red, 0)?;
                v * v
            }
            MonogamyMeasure::ConcurrenceSq => {
                let c = concurrence_2q(&red)?;
                c * c
            }
        };
    }
    Ok(one_vs_rest - pairwise)
}
