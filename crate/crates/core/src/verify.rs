//! Verification battery: every closed form is checked against its
//! independent numeric route at a pinned tolerance. The `acceptance`
//! integration test and `qcorr verify` both run these checks, so the CLI
//! and the test suite cannot drift apart.


use crate::coherence::{
    c_geometric_numeric, c_geometric_qubit, c_l1, c_rel_entropy, c_rel_entropy_numeric_qubit,
    coherence_concurrence_pure, complementarity_check, schmidt_product_basis, ReferenceBasis,
};
use crate::discord::{
    bell_diagonal_entropic_discord, bell_diagonal_geometric_discord, bell_diagonal_j2,
    bell_diagonal_trace_discord, classical_corr_linear_qubitqubit, discord_numeric, discord_rank2,
    discord_x, geometric_discord_hs, koashi_winter_residual, trace_discord_x, Side,
};
use crate::dynamics::{
    apply_channel, channel_preset, environment_evolution, kraus_from_environment, lindblad_evolve,
    ChannelPreset, LindbladModel,
};
use crate::entanglement::{
    concurrence_2q, concurrence_pure, concurrence_x, entanglement_entropy, eof_2q, log_negativity,
    negativity,
};
use crate::entropy::linear_entropy;
use crate::matcore::{lift_operator, pauli, ComplexMatrix};
use crate::metrology::{
    cfi, d_rho, optimal_measurement, qfi, qfim_bloch_qubit, qfim_from_derivatives,
    qfim_vectorized, qfim_xstate_block, qfi_pure_unitary, ParametricFamily,
};
use crate::states::{self, DensityMatrix, Preset, XStateParams};
use crate::uncertainty::{lqfi, lqu_2xd};
use crate::Result;

/// One acceptance check: pass iff residual <= tolerance.
#[derive(Debug, Clone)]
pub struct Check {
    pub criterion: &'static str,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn check(criterion: &'static str, name: impl Into<String>, residual: f64, tolerance: f64) -> Check {
    Check { criterion, name: name.into(), residual, tolerance }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ClosedForms,
    Oracles,
    Conservation,
    Metrology,
    All,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "closed_forms" => Some(Suite::ClosedForms),
            "oracles" => Some(Suite::Oracles),
            "conservation" => Some(Suite::Conservation),
            "metrology" => Some(Suite::Metrology),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

/// Run a suite with the given base seed; `n_override` rescales the sample
/// counts of the statistical batteries.
pub fn run_suite(suite: Suite, seed: u64, n_override: Option<usize>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    match suite {
        Suite::ClosedForms => {
            out.extend(criterion1_bell_golden()?);
            out.extend(criterion2_bell_diagonal(seed, n_override.unwrap_or(100))?);
            out.extend(criterion3_horodecki()?);
            out.extend(criterion9_coherence(seed, n_override)?);
        }
        Suite::Oracles => {
            out.extend(criterion4_x_battery(seed, n_override.unwrap_or(300))?);
            out.extend(criterion5_pure_identities(seed, n_override.unwrap_or(200))?);
            out.extend(criterion6_sandwich(seed, n_override.unwrap_or(200))?);
            out.extend(criterion10_dynamics(seed)?);
        }
        Suite::Conservation => {
            out.extend(criterion7_conservation(seed, n_override.unwrap_or(100))?);
        }
        Suite::Metrology => {
            out.extend(criterion8_metrology(seed, n_override.unwrap_or(50))?);
        }
        Suite::All => {
            for s in [Suite::ClosedForms, Suite::Oracles, Suite::Conservation, Suite::Metrology] {
                out.extend(run_suite(s, seed, n_override)?);
            }
        }
    }
    Ok(out)
}

/// Criterion 1: Bell-state golden values.
pub fn criterion1_bell_golden() -> Result<Vec<Check>> {
    const C: &str = "1";
    let bell = states::preset(&Preset::BellPhiPlus)?;
    let psi = states::preset_pure(&Preset::BellPhiPlus).expect("pure preset");
    let x = XStateParams::from_density(&bell)?;
    let mut out = vec![
        check(C, "bell.concurrence", (concurrence_2q(&bell)? - 1.0).abs(), 1e-9),
        check(C, "bell.eof", (eof_2q(&bell)? - 1.0).abs(), 1e-9),
        check(C, "bell.entanglement_entropy", (entanglement_entropy(&psi, 1)? - 1.0).abs(), 1e-9),
        check(C, "bell.negativity", (negativity(&bell, 0)? - 0.5).abs(), 1e-9),
        check(C, "bell.log_negativity", (log_negativity(&bell, 0)? - 1.0).abs(), 1e-9),
        check(C, "bell.lqu", (lqu_2xd(&bell)?.0 - 1.0).abs(), 1e-9),
        check(C, "bell.lqfi", (lqfi(&bell)?.0 - 1.0).abs(), 1e-9),
        check(C, "bell.discord_x", (discord_x(&x)?.quantum - 1.0).abs(), 1e-9),
    ];
    let numeric = discord_numeric(&bell, Side::B, 64, 20)?.quantum;
    out.push(check(C, "bell.discord_numeric", (numeric - 1.0).abs(), 2e-4));
    Ok(out)
}

/// Criterion 2: Bell-diagonal closed forms on random valid (c1, c2, c3).
pub fn criterion2_bell_diagonal(seed: u64, n: usize) -> Result<Vec<Check>> {
    const C: &str = "2";
    let mut r_trace: f64 = 0.0;
    let mut r_geo: f64 = 0.0;
    let mut r_j2: f64 = 0.0;
    let mut r_wang: f64 = 0.0;
    let mut r_num: f64 = 0.0;
    for k in 0..n as u64 {
        let bd = states::random_bell_diagonal(seed.wrapping_mul(31).wrapping_add(k));
        let rho = bd.to_density()?;
        let x = XStateParams::from_density(&rho)?;
        r_trace = r_trace.max((trace_discord_x(&x)? - bell_diagonal_trace_discord(bd.c)).abs());
        r_geo =
            r_geo.max((geometric_discord_hs(&rho)? - bell_diagonal_geometric_discord(bd.c)).abs());
        let (j2, _) = classical_corr_linear_qubitqubit(&rho)?;
        r_j2 = r_j2.max((j2 - bell_diagonal_j2(bd.c)).abs());
        let wang = discord_x(&x)?.quantum;
        r_wang = r_wang.max((wang - bell_diagonal_entropic_discord(bd.c)).abs());
        let numeric = discord_numeric(&rho, Side::B, 64, 20)?.quantum;
        r_num = r_num.max((wang - numeric).abs());
    }
    Ok(vec![
        check(C, format!("bd.trace_discord[{n}]"), r_trace, 1e-9),
        check(C, format!("bd.geometric_discord[{n}]"), r_geo, 1e-9),
        check(C, format!("bd.linear_classical_corr[{n}]"), r_j2, 1e-8),
        check(C, format!("bd.wang_vs_closed_form[{n}]"), r_wang, 1e-8),
        check(C, format!("bd.wang_vs_numeric[{n}]"), r_num, 2e-4),
    ])
}

/// Criterion 3: Horodecki family, 21 p-values, three discord routes and the
/// explicit channel matrix.
pub fn criterion3_horodecki() -> Result<Vec<Check>> {
    const C: &str = "3";
    let mut r_routes: f64 = 0.0;
    let mut r_l: f64 = 0.0;
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let rho = states::preset(&Preset::Horodecki { p })?;
        let rank2 = discord_rank2(&rho, Side::B)?;
        let wang = discord_x(&XStateParams::from_density(&rho)?)?.quantum;
        let numeric = discord_numeric(&rho, Side::B, 64, 20)?.quantum;
        r_routes = r_routes
            .max((rank2 - wang).abs())
            .max((rank2 - numeric).abs())
            .max((wang - numeric).abs());
        if p > 0.0 {
            let (_, l) = classical_corr_linear_qubitqubit(&rho)?;
            let r = (p / (2.0 - p)).sqrt();
            let expect = [[r, 0.0, 0.0], [0.0, -r, 0.0], [0.0, 0.0, -r * r]];
            for i in 0..3 {
                for j in 0..3 {
                    r_l = r_l.max((l.get(i, j) - expect[i][j]).abs());
                }
            }
        }
    }
    Ok(vec![
        check(C, "horodecki.route_agreement[21]", r_routes, 2e-4),
        check(C, "horodecki.channel_matrix[20]", r_l, 1e-9),
    ])
}

/// Criterion 4: X-state oracle battery.
pub fn criterion4_x_battery(seed: u64, n: usize) -> Result<Vec<Check>> {
    const C: &str = "4";
    let mut r_conc: f64 = 0.0;
    let mut r_disc: f64 = 0.0;
    for k in 0..n as u64 {
        let x = states::random_x_state(seed.wrapping_mul(97).wrapping_add(k), true);
        let rho = x.to_density()?;
        r_conc = r_conc.max((concurrence_x(&x)? - concurrence_2q(&rho)?).abs());
        let closed = discord_x(&x)?.quantum;
        let numeric = discord_numeric(&rho, Side::B, 64, 20)?.quantum;
        r_disc = r_disc.max((closed - numeric).abs());
    }
    // Trace discord reproduces the Bell-diagonal limit on the BD subfamily.
    let mut r_bd: f64 = 0.0;
    for k in 0..n as u64 {
        let bd = states::random_bell_diagonal(seed.wrapping_mul(131).wrapping_add(k));
        let x = XStateParams::from_density(&bd.to_density()?)?;
        r_bd = r_bd.max((trace_discord_x(&x)? - bell_diagonal_trace_discord(bd.c)).abs());
    }
    Ok(vec![
        check(C, format!("x.concurrence_closed_vs_wootters[{n}]"), r_conc, 1e-10),
        check(C, format!("x.discord_closed_vs_numeric[{n}]"), r_disc, 2e-4),
        check(C, format!("x.trace_discord_bd_limit[{n}]"), r_bd, 1e-9),
    ])
}

/// Criterion 5: pure-state identities on random two-qubit pure states.
pub fn criterion5_pure_identities(seed: u64, n: usize) -> Result<Vec<Check>> {
    const C: &str = "5";
    let mut r_lqu: f64 = 0.0;
    let mut r_cn: f64 = 0.0;
    let mut r_cc: f64 = 0.0;
    for k in 0..n as u64 {
        let psi = states::random_pure(&[2, 2], seed.wrapping_mul(7).wrapping_add(k));
        let rho = psi.to_density();
        let (u, _) = lqu_2xd(&rho)?;
        let s2 = linear_entropy(&rho.partial_trace(&[0])?);
        let conc = concurrence_pure(&psi, 1)?;
        r_lqu = r_lqu.max((u - s2).abs()).max((u - conc * conc).abs());
        // C_l1 in the Schmidt product basis equals twice the negativity.
        let basis = schmidt_product_basis(&psi)?;
        let cl1 = c_l1(&rho, &basis)?;
        r_cn = r_cn.max((cl1 - 2.0 * negativity(&rho, 0)?).abs());
        // Coherence concurrence equals C_l1 in the computational basis.
        let cl1_comp = c_l1(&rho, &ReferenceBasis::computational(4))?;
        r_cc = r_cc.max((coherence_concurrence_pure(&psi) - cl1_comp).abs());
    }
    Ok(vec![
        check(C, format!("pure.lqu_eq_s2_eq_c2[{n}]"), r_lqu, 1e-9),
        check(C, format!("pure.cl1_eq_2negativity[{n}]"), r_cn, 1e-9),
        check(C, format!("pure.coherence_concurrence_eq_cl1[{n}]"), r_cc, 1e-10),
    ])
}

/// Criterion 6: sandwich bound U <= Q_F <= 2U on random 2x2 and 2x3 states.
pub fn criterion6_sandwich(seed: u64, n: usize) -> Result<Vec<Check>> {
    const C: &str = "6";
    let mut worst: f64 = 0.0;
    for k in 0..n as u64 {
        let dims: &[usize] = if k % 2 == 0 { &[2, 2] } else { &[2, 3] };
        let rank = (k as usize % 3) + 1;
        let rho = states::random_density(dims, rank, seed.wrapping_mul(11).wrapping_add(k))?;
        let (u, _) = lqu_2xd(&rho)?;
        let (qf, _) = lqfi(&rho)?;
        worst = worst.max(u - qf).max(qf - 2.0 * u);
    }
    Ok(vec![check(C, format!("sandwich.u_le_qf_le_2u[{n}]"), worst.max(0.0), 1e-9)])
}

/// Criterion 7: conservation laws and the Koashi-Winter relation.
pub fn criterion7_conservation(seed: u64, n: usize) -> Result<Vec<Check>> {
    const C: &str = "7";
    let mut r_central: f64 = 0.0;
    let mut r_cyclic: f64 = 0.0;
    let mut r_kw: f64 = 0.0;
    let ghz = states::preset_pure(&Preset::Ghz { n: 3 }).expect("pure preset");
    let (c0, y0) = crate::discord::conservation_3q_residual(&ghz)?;
    r_central = r_central.max(c0);
    r_cyclic = r_cyclic.max(y0);
    r_kw = r_kw.max(koashi_winter_residual(&ghz)?);
    for k in 0..n as u64 {
        let psi = states::random_pure(&[2, 2, 2], seed.wrapping_mul(13).wrapping_add(k));
        let (c, y) = crate::discord::conservation_3q_residual(&psi)?;
        r_central = r_central.max(c);
        r_cyclic = r_cyclic.max(y);
        r_kw = r_kw.max(koashi_winter_residual(&psi)?);
    }
    Ok(vec![
        check(C, format!("conservation.central[{n}+ghz]"), r_central, 5e-3),
        check(C, format!("conservation.cyclic[{n}+ghz]"), r_cyclic, 5e-3),
        check(C, format!("conservation.koashi_winter[{n}+ghz]"), r_kw, 2e-3),
    ])
}

/// Criterion 8: metrology route consensus, Heisenberg scaling, and CFI/QFI.
pub fn criterion8_metrology(seed: u64, n_povm: usize) -> Result<Vec<Check>> {
    const C: &str = "8";
    let mut out = Vec::new();

    // Triple-route consensus on the single-qubit Bloch-angle family.
    let r0 = 0.8;
    let th = [0.7f64, 1.1f64];
    let r = [r0 * th[0].sin() * th[1].cos(), r0 * th[0].sin() * th[1].sin(), r0 * th[0].cos()];
    let dr = [
        [r0 * th[0].cos() * th[1].cos(), r0 * th[0].cos() * th[1].sin(), -r0 * th[0].sin()],
        [-r0 * th[0].sin() * th[1].sin(), r0 * th[0].sin() * th[1].cos(), 0.0],
    ];
    let mut m = ComplexMatrix::identity(2).scale_re(0.5);
    for i in 0..3 {
        m = m.add(&pauli(i + 1).scale_re(0.5 * r[i]));
    }
    let rho = DensityMatrix::new(m, &[2])?;
    let drho: Vec<ComplexMatrix> = dr
        .iter()
        .map(|d| {
            let mut m = ComplexMatrix::zeros(2, 2);
            for i in 0..3 {
                m = m.add(&pauli(i + 1).scale_re(0.5 * d[i]));
            }
            m
        })
        .collect();
    let f_sld = qfim_from_derivatives(&rho, &drho)?;
    let f_vec = qfim_vectorized(&rho, &drho)?;
    let f_bloch = qfim_bloch_qubit(r, &dr)?;
    let mut r_bloch_family: f64 = 0.0;
    for mu in 0..2 {
        for nu in 0..2 {
            r_bloch_family = r_bloch_family
                .max((f_sld[mu][nu] - f_vec[mu][nu]).abs())
                .max((f_sld[mu][nu] - f_bloch[mu][nu]).abs());
        }
    }
    out.push(check(C, "qfim.bloch_family_consensus", r_bloch_family, 1e-7));

    // Triple-route consensus on a full-rank Bell-diagonal X family.
    let rho_x = states::preset(&Preset::BellDiagonal { c1: 0.4, c2: -0.2, c3: 0.3 })?;
    let drho_x =
        vec![pauli(1).kron(&pauli(1)).scale_re(0.25), pauli(2).kron(&pauli(2)).scale_re(0.25)];
    let f_sld = qfim_from_derivatives(&rho_x, &drho_x)?;
    let f_vec = qfim_vectorized(&rho_x, &drho_x)?;
    let f_block = qfim_xstate_block(&rho_x, &drho_x)?;
    let mut r_x_family: f64 = 0.0;
    for mu in 0..2 {
        for nu in 0..2 {
            r_x_family = r_x_family
                .max((f_sld[mu][nu] - f_vec[mu][nu]).abs())
                .max((f_sld[mu][nu] - f_block[mu][nu]).abs());
        }
    }
    out.push(check(C, "qfim.x_family_consensus", r_x_family, 1e-7));

    // Heisenberg scaling: GHZ(n) with the collective sigma_z/2 generator.
    let mut r_ghz: f64 = 0.0;
    for n in [2usize, 3, 4] {
        let ghz = states::preset_pure(&Preset::Ghz { n }).expect("pure preset");
        let dims = vec![2usize; n];
        let mut h = ComplexMatrix::zeros(1 << n, 1 << n);
        for k in 0..n {
            h = h.add(&lift_operator(&pauli(3), &dims, k)?);
        }
        let f = qfi_pure_unitary(&ghz, &h.scale_re(0.5))?;
        r_ghz = r_ghz.max((f - (n * n) as f64).abs());
    }
    out.push(check(C, "qfi.ghz_heisenberg[n=2,3,4]", r_ghz, 1e-8));

    // SLD-eigenbasis measurement saturates the bound.
    let plus = states::preset(&Preset::PlusState)?;
    let fam = ParametricFamily::unitary(pauli(2).scale_re(0.5), plus, 0.3);
    let rho = fam.state()?;
    let drho1 = d_rho(&fam, 0)?;
    let fq = qfi(&rho, &drho1)?;
    let povm = optimal_measurement(&rho, &drho1)?;
    let fc = cfi(&fam, &povm)?[0];
    out.push(check(C, "cfi.sld_basis_saturates", (fc - fq).abs(), 1e-6));

    // CFI <= QFI on random POVM/family pairs.
    let mut r_order: f64 = 0.0;
    for k in 0..n_povm as u64 {
        let rho0 = states::random_density(&[2], 2, seed.wrapping_mul(17).wrapping_add(k))?;
        let fam = ParametricFamily::unitary(pauli(1).scale_re(0.5), rho0, 0.2);
        let u = states::random_unitary(2, seed.wrapping_mul(19).wrapping_add(k));
        let povm: Vec<ComplexMatrix> = (0..2)
            .map(|c| {
                let col = u.column(c);
                ComplexMatrix::outer(&col, &col)
            })
            .collect();
        let rho = fam.state()?;
        let drho = d_rho(&fam, 0)?;
        let fc = cfi(&fam, &povm)?[0];
        let fq = qfi(&rho, &drho)?;
        r_order = r_order.max(fc - fq);
    }
    out.push(check(C, format!("cfi.le_qfi[{n_povm}]"), r_order.max(0.0), 1e-7));
    Ok(out)
}

/// Criterion 9: coherence closed forms against numeric minimizations and the
/// complementarity bound.
pub fn criterion9_coherence(seed: u64, n_override: Option<usize>) -> Result<Vec<Check>> {
    const C: &str = "9";
    let mut out = Vec::new();

    let n_rel = n_override.unwrap_or(20).min(50);
    let mut r_rel: f64 = 0.0;
    for k in 0..n_rel as u64 {
        let rho = states::random_density(&[2], 2, seed.wrapping_mul(23).wrapping_add(k))?;
        let closed = c_rel_entropy(&rho, &ReferenceBasis::computational(2))?;
        let numeric = c_rel_entropy_numeric_qubit(&rho, 2000)?;
        r_rel = r_rel.max((closed - numeric).abs());
    }
    out.push(check(C, format!("coherence.c_r_vs_numeric[{n_rel}]"), r_rel, 1e-4));

    let n_comp = n_override.unwrap_or(1000);
    let mut excess: f64 = 0.0;
    for k in 0..n_comp as u64 {
        let d = 2 + (k as usize % 3);
        let rank = (k as usize % d) + 1;
        let rho = states::random_density(&[d], rank, seed.wrapping_mul(29).wrapping_add(k))?;
        let (lhs, _) = complementarity_check(&rho)?;
        excess = excess.max(lhs - 1.0);
    }
    out.push(check(C, format!("coherence.complementarity[{n_comp}]"), excess.max(0.0), 1e-9));
    let plus = states::preset(&Preset::PlusState)?;
    let (lhs, _) = complementarity_check(&plus)?;
    out.push(check(C, "coherence.complementarity_equality_plus", (lhs - 1.0).abs(), 1e-9));

    let n_geo = n_override.unwrap_or(15).min(30);
    let mut r_geo: f64 = 0.0;
    for k in 0..n_geo as u64 {
        let rho = states::random_density(&[2], 2, seed.wrapping_mul(37).wrapping_add(k))?;
        let closed = c_geometric_qubit(&rho)?;
        let numeric = c_geometric_numeric(&rho, &ReferenceBasis::computational(2), 400)?;
        r_geo = r_geo.max((closed - numeric).abs());
    }
    out.push(check(C, format!("coherence.geometric_vs_numeric[{n_geo}]"), r_geo, 1e-5));
    Ok(out)
}

/// Criterion 10: dynamics — channel completeness, analytic decay laws, RK4
/// order, and the environment-unitary dual route.
pub fn criterion10_dynamics(seed: u64) -> Result<Vec<Check>> {
    const C: &str = "10";
    let mut out = Vec::new();

    let mut r_complete: f64 = 0.0;
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for preset in [
            ChannelPreset::Dephasing(p),
            ChannelPreset::PhaseFlip(p),
            ChannelPreset::Depolarizing(p),
            ChannelPreset::AmplitudeDamping(p),
        ] {
            r_complete = r_complete.max(channel_preset(preset)?.completeness_defect());
        }
    }
    out.push(check(C, "dynamics.kraus_completeness", r_complete, 1e-12));

    let plus = states::preset(&Preset::PlusState)?;
    let full = channel_preset(ChannelPreset::Dephasing(1.0))?;
    let dephased = apply_channel(&plus, &full, 0)?;
    out.push(check(C, "dynamics.dephasing1_off_diagonal", dephased.mat()[(0, 1)].norm(), 1e-12));

    // Amplitude damping decay law.
    let one = states::preset(&Preset::Computational { dims: vec![2], basis: vec![1] })?;
    let mut sm = ComplexMatrix::zeros(2, 2);
    sm[(0, 1)] = crate::matcore::ONE;
    let gamma = 0.8;
    let model = LindbladModel::new(ComplexMatrix::zeros(2, 2), vec![(gamma, sm)])?;
    let traj = lindblad_evolve(&one, &model, 2.0, 0.002)?;
    let mut r_pop: f64 = 0.0;
    for (t, st) in traj.times.iter().zip(&traj.states) {
        r_pop = r_pop.max((st.mat()[(1, 1)].re - (-gamma * t).exp()).abs());
    }
    out.push(check(C, "dynamics.amplitude_damping_decay", r_pop, 1e-5));
    out.push(check(C, "dynamics.trace_drift", traj.max_trace_drift, 1e-8));

    // Empirical RK4 order on the dephasing family.
    let g = 1.0;
    let model = LindbladModel::new(pauli(3).scale_re(0.8), vec![(g, pauli(3))])?;
    let err_at = |dt: f64| -> Result<f64> {
        let traj = lindblad_evolve(&plus, &model, 1.0, dt)?;
        let m = traj.states.last().expect("nonempty").mat().clone();
        Ok((m[(0, 1)].norm() - 0.5 * (-2.0 * g).exp()).abs())
    };
    let order = (err_at(0.1)? / err_at(0.05)?).log2();
    out.push(check(C, "dynamics.rk4_order_ge_3.5", (3.5 - order).max(0.0), 0.0));

    // Environment-unitary dual route.
    let mut r_env: f64 = 0.0;
    for k in 0..10u64 {
        let u = states::random_unitary(4, seed.wrapping_mul(41).wrapping_add(k));
        let rho_e = states::random_density(&[2], 2, seed.wrapping_mul(43).wrapping_add(k))?;
        let rho_s = states::random_density(&[2], 2, seed.wrapping_mul(47).wrapping_add(k))?;
        let ch = kraus_from_environment(&u, &rho_e, 2)?;
        let via_channel = apply_channel(&rho_s, &ch, 0)?;
        let via_trace = environment_evolution(&u, &rho_s, &rho_e)?;
        r_env = r_env.max(via_channel.mat().sub(via_trace.mat()).max_abs());
    }
    out.push(check(C, "dynamics.kraus_env_dual_route[10]", r_env, 1e-9));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_and_run_small() {
        assert!(Suite::parse("closed_forms").is_some());
        assert!(Suite::parse("bogus").is_none());
        // A reduced run exercises the plumbing without the full budget.
        let checks = run_suite(Suite::Metrology, 1, Some(5)).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.pass(), "{}: residual {} > tol {}", c.name, c.residual, c.tolerance);
        }
    }
}
