//! Quantum channels in Kraus form, Lindblad evolution by fixed-step RK4,
//! and the measure-sweep harness that produces decay curves.

use num_complex::Complex64 as C64;

use crate::matcore::{eigh, lift_operator, partial_trace_mat, ComplexMatrix, ZERO};
use crate::measures;
use crate::states::{validate_with, DensityMatrix};
use crate::{tol, Error, Result};

/// Finite list of equal-shape Kraus operators with sum K^dag K = 1.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    pub operators: Vec<ComplexMatrix>,
    pub label: String,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let ch = KrausChannel { operators, label: label.into() };
        let defect = ch.completeness_defect();
        if defect > 1e-9 {
            return Err(Error::InvalidParams(format!(
                "Kraus completeness violated by {defect:.3e}"
            )));
        }
        Ok(ch)
    }

    pub fn dim(&self) -> usize {
        self.operators.first().map_or(0, |k| k.rows())
    }

    /// || sum K^dag K - 1 ||_max.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.dim();
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in &self.operators {
            sum = sum.add(&k.adjoint().mul(k));
        }
        sum.sub(&ComplexMatrix::identity(d)).max_abs()
    }

    /// Composition: apply `self` after `other` (Kraus products).
    pub fn compose_after(&self, other: &KrausChannel) -> Result<KrausChannel> {
        let mut ops = Vec::with_capacity(self.operators.len() * other.operators.len());
        for a in &self.operators {
            for b in &other.operators {
                ops.push(a.mul(b));
            }
        }
        KrausChannel::new(ops, format!("{} . {}", self.label, other.label))
    }
}

/// Named single-qubit channel presets with pinned Kraus conventions:
/// dephasing K0 = diag(1, sqrt(1-p)), K1 = diag(0, sqrt(p));
/// phase flip K0 = sqrt(1-p) 1, K1 = sqrt(p) sigma_z;
/// depolarizing K0 = sqrt(1-3p/4) 1, K_i = sqrt(p/4) sigma_i;
/// amplitude damping K0 = diag(1, sqrt(1-g)), K1 = sqrt(g) |0><1|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelPreset {
    Dephasing(f64),
    PhaseFlip(f64),
    Depolarizing(f64),
    AmplitudeDamping(f64),
}

impl ChannelPreset {
    pub fn name(&self) -> &'static str {
        match self {
            ChannelPreset::Dephasing(_) => "dephasing",
            ChannelPreset::PhaseFlip(_) => "phase_flip",
            ChannelPreset::Depolarizing(_) => "depolarizing",
            ChannelPreset::AmplitudeDamping(_) => "amplitude_damping",
        }
    }

    pub fn strength(&self) -> f64 {
        match self {
            ChannelPreset::Dephasing(p)
            | ChannelPreset::PhaseFlip(p)
            | ChannelPreset::Depolarizing(p)
            | ChannelPreset::AmplitudeDamping(p) => *p,
        }
    }

    pub fn with_strength(&self, p: f64) -> ChannelPreset {
        match self {
            ChannelPreset::Dephasing(_) => ChannelPreset::Dephasing(p),
            ChannelPreset::PhaseFlip(_) => ChannelPreset::PhaseFlip(p),
            ChannelPreset::Depolarizing(_) => ChannelPreset::Depolarizing(p),
            ChannelPreset::AmplitudeDamping(_) => ChannelPreset::AmplitudeDamping(p),
        }
    }
}

pub fn channel_preset(preset: ChannelPreset) -> Result<KrausChannel> {
    let p = preset.strength();
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParams(format!(
            "{} needs a parameter in [0,1], got {p}",
            preset.name()
        )));
    }
    let c = |x: f64| C64::new(x, 0.0);
    let ops = match preset {
        ChannelPreset::Dephasing(p) => vec![
            ComplexMatrix::diag(&[c(1.0), c((1.0 - p).sqrt())]),
            ComplexMatrix::diag(&[c(0.0), c(p.sqrt())]),
        ],
        ChannelPreset::PhaseFlip(p) => vec![
            ComplexMatrix::identity(2).scale_re((1.0 - p).sqrt()),
            crate::matcore::pauli(3).scale_re(p.sqrt()),
        ],
        ChannelPreset::Depolarizing(p) => {
            let mut v = vec![ComplexMatrix::identity(2).scale_re((1.0 - 0.75 * p).sqrt())];
            for k in 1..=3 {
                v.push(crate::matcore::pauli(k).scale_re((0.25 * p).sqrt()));
            }
            v
        }
        ChannelPreset::AmplitudeDamping(g) => {
            let mut k1 = ComplexMatrix::zeros(2, 2);
            k1[(0, 1)] = c(g.sqrt());
            vec![ComplexMatrix::diag(&[c(1.0), c((1.0 - g).sqrt())]), k1]
        }
    };
    KrausChannel::new(ops, preset.name())
}

/// Apply a channel to one subsystem (identity padding elsewhere).
pub fn apply_channel(
    rho: &DensityMatrix,
    channel: &KrausChannel,
    target: usize,
) -> Result<DensityMatrix> {
    if target >= rho.dims().len() {
        return Err(Error::BadSubsystem { index: target, count: rho.dims().len() });
    }
    if channel.dim() != rho.dims()[target] {
        return Err(Error::DimMismatch(format!(
            "channel dimension {} but subsystem {} has dimension {}",
            channel.dim(),
            target,
            rho.dims()[target]
        )));
    }
    let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for k in &channel.operators {
        let lifted = lift_operator(k, rho.dims(), target)?;
        out = out.add(&lifted.mul(rho.mat()).mul(&lifted.adjoint()));
    }
    Ok(DensityMatrix::from_parts_unchecked(out.hermitize(), rho.dims().to_vec()))
}

/// Apply a single-qubit channel to every qubit in turn.
pub fn apply_channel_per_qubit(rho: &DensityMatrix, channel: &KrausChannel) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    for target in 0..rho.dims().len() {
        out = apply_channel(&out, channel, target)?;
    }
    Ok(out)
}

/// Build the Kraus channel of a joint unitary on S (x) E with the
/// environment prepared in rho_E: K_{mu nu} = sqrt(theta_nu) <mu|U|nu>.
pub fn kraus_from_environment(
    u: &ComplexMatrix,
    rho_e: &DensityMatrix,
    dim_s: usize,
) -> Result<KrausChannel> {
    let de = rho_e.dim();
    if u.rows() != dim_s * de || !u.is_square() {
        return Err(Error::DimMismatch(format!(
            "unitary is {}x{} but S x E is {}",
            u.rows(),
            u.cols(),
            dim_s * de
        )));
    }
    let defect = u.adjoint().mul(u).sub(&ComplexMatrix::identity(u.rows())).max_abs();
    if defect > 1e-10 {
        return Err(Error::NonUnitary { defect });
    }
    let eig = eigh(rho_e.mat())?;
    let mut ops = Vec::new();
    for nu in 0..de {
        let weight = eig.eigenvalues[nu].max(0.0);
        if weight < 1e-14 {
            continue;
        }
        let nu_vec = eig.eigenvector(nu);
        for mu in 0..de {
            // (K_{mu nu})_{s s'} = sqrt(w) sum_{e'} <s mu| U |s' e'> nu_{e'}
            let mut k = ComplexMatrix::zeros(dim_s, dim_s);
            for s in 0..dim_s {
                for sp in 0..dim_s {
                    let mut acc = ZERO;
                    for (ep, amp) in nu_vec.iter().enumerate() {
                        acc += u[(s * de + mu, sp * de + ep)] * amp;
                    }
                    k[(s, sp)] = acc * C64::new(weight.sqrt(), 0.0);
                }
            }
            ops.push(k);
        }
    }
    KrausChannel::new(ops, "from_environment")
}

/// Reference route for `kraus_from_environment`: Tr_E[U (rho x rho_E) U^dag].
pub fn environment_evolution(
    u: &ComplexMatrix,
    rho_s: &DensityMatrix,
    rho_e: &DensityMatrix,
) -> Result<DensityMatrix> {
    let joint = rho_s.mat().kron(rho_e.mat());
    let evolved = u.mul(&joint).mul(&u.adjoint());
    let red = partial_trace_mat(&evolved, &[rho_s.dim(), rho_e.dim()], &[0])?;
    Ok(DensityMatrix::from_parts_unchecked(red, rho_s.dims().to_vec()))
}

/// Hamiltonian (hbar = 1) plus jump operators with nonnegative rates.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    pub hamiltonian: ComplexMatrix,
    pub jumps: Vec<(f64, ComplexMatrix)>,
}

impl LindbladModel {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        if jumps.iter().any(|(rate, _)| *rate < 0.0) {
            return Err(Error::InvalidParams("negative jump rate".into()));
        }
        Ok(LindbladModel { hamiltonian, jumps })
    }
}

/// Lindblad right-hand side:
/// d(rho)/dt = -i[H, rho] + sum_j gamma_j (L rho L^dag - {L^dag L, rho}/2).
pub fn lindblad_rhs(rho: &ComplexMatrix, model: &LindbladModel) -> ComplexMatrix {
    let mut out = model.hamiltonian.commutator(rho).scale(C64::new(0.0, -1.0));
    for (rate, l) in &model.jumps {
        if *rate == 0.0 {
            continue;
        }
        let ldag = l.adjoint();
        let gain = l.mul(rho).mul(&ldag);
        let decay = ldag.mul(l).anticommutator(rho).scale_re(0.5);
        out = out.add(&gain.sub(&decay).scale_re(*rate));
    }
    out
}

/// Fixed-step RK4 trajectory with end-of-step Hermitization. Trace drift is
/// a diagnostic: beyond 1e-6 the integration aborts as unstable.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub max_trace_drift: f64,
    pub min_eigenvalue: f64,
}

pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if dt <= 0.0 || t_end < 0.0 {
        return Err(Error::InvalidParams("need dt > 0 and t_end >= 0".into()));
    }
    if model.hamiltonian.rows() != rho0.dim() {
        return Err(Error::DimMismatch("Hamiltonian does not match the state".into()));
    }
    let steps = (t_end / dt).ceil() as usize;
    let mut m = rho0.mat().clone();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut max_drift = 0.0f64;
    times.push(0.0);
    states.push(rho0.clone());
    for step in 0..steps {
        let h = dt.min(t_end - step as f64 * dt);
        let k1 = lindblad_rhs(&m, model);
        let k2 = lindblad_rhs(&m.add(&k1.scale_re(0.5 * h)), model);
        let k3 = lindblad_rhs(&m.add(&k2.scale_re(0.5 * h)), model);
        let k4 = lindblad_rhs(&m.add(&k3.scale_re(h)), model);
        let incr = k1
            .add(&k2.scale_re(2.0))
            .add(&k3.scale_re(2.0))
            .add(&k4)
            .scale_re(h / 6.0);
        m = m.add(&incr).hermitize();
        let drift = (m.trace().re - 1.0).abs();
        max_drift = max_drift.max(drift);
        if drift > 1e-6 {
            return Err(Error::StepUnstable { drift });
        }
        times.push((step as f64 + 1.0) * dt.min(t_end));
        states.push(DensityMatrix::from_parts_unchecked(m.clone(), rho0.dims().to_vec()));
    }
    let min_eigenvalue = eigh(&m)?.eigenvalues[0];
    Ok(Trajectory { times, states, max_trace_drift: max_drift, min_eigenvalue })
}

/// Labeled grid of (parameter, measure ...) rows.
#[derive(Debug, Clone)]
pub struct MeasureTable {
    pub parameter: String,
    pub grid: Vec<f64>,
    pub columns: Vec<(String, Vec<f64>)>,
    /// Cells that failed to evaluate (stored as NaN) with their errors.
    pub errors: Vec<(usize, String, String)>,
}

impl MeasureTable {
    /// CSV with a `param,<m1>,...` header; values at 12 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("param");
        for (name, _) in &self.columns {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, p) in self.grid.iter().enumerate() {
            out.push_str(&format_sig(*p));
            for (_, col) in &self.columns {
                out.push(',');
                out.push_str(&format_sig(col[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// 12 significant digits, machine parsable, deterministic.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{:.11e}", x)
    }
}

/// Process swept by [`sweep`]: a per-qubit channel family over its strength,
/// or Lindblad evolution over time.
pub enum SweepProcess {
    Channel { family: ChannelPreset },
    Lindblad { model: LindbladModel, substeps: usize },
}

/// Evaluate the named measures on the processed state at every grid point.
/// Failed cells become NaN and are reported in the table's error list.
pub fn sweep(
    initial: &DensityMatrix,
    process: &SweepProcess,
    measure_names: &[String],
    grid: &[f64],
) -> Result<MeasureTable> {
    if measure_names.is_empty() {
        return Err(Error::UnknownMeasure("empty measure list".into()));
    }
    if grid.len() < 2 {
        return Err(Error::InvalidParams("sweep grid needs at least 2 points".into()));
    }
    let defs: Vec<&measures::MeasureDef> = measure_names
        .iter()
        .map(|n| measures::lookup(n).ok_or_else(|| Error::UnknownMeasure(n.clone())))
        .collect::<Result<_>>()?;
    for def in &defs {
        if !(def.applicable)(initial.dims()) {
            return Err(Error::DimMismatch(format!(
                "measure '{}' is not applicable to dims {:?}",
                def.name,
                initial.dims()
            )));
        }
    }

    let parameter = match process {
        SweepProcess::Channel { .. } => "p".to_string(),
        SweepProcess::Lindblad { .. } => "t".to_string(),
    };
    let mut columns: Vec<(String, Vec<f64>)> =
        defs.iter().map(|d| (d.name.to_string(), Vec::with_capacity(grid.len()))).collect();
    let mut errors = Vec::new();

    // For Lindblad sweeps the grid must be ascending; integrate incrementally.
    let mut lind_state = initial.clone();
    let mut lind_t = 0.0f64;

    for (row, &g) in grid.iter().enumerate() {
        let state = match process {
            SweepProcess::Channel { family } => {
                let ch = channel_preset(family.with_strength(g))?;
                apply_channel_per_qubit(initial, &ch)?
            }
            SweepProcess::Lindblad { model, substeps } => {
                if g < lind_t - 1e-12 {
                    return Err(Error::InvalidParams("time grid must be ascending".into()));
                }
                if g > lind_t {
                    let dt = (g - lind_t) / (*substeps).max(1) as f64;
                    let traj = lindblad_evolve(&lind_state, model, g - lind_t, dt)?;
                    lind_state = traj.states.last().expect("at least the initial state").clone();
                    lind_t = g;
                }
                lind_state.clone()
            }
        };
        // Integrator output satisfies the relaxed tolerances.
        debug_assert!(
            validate_with(state.mat(), state.dims(), &tol::Tolerances::integrator()).is_ok()
        );
        for (def, (_, col)) in defs.iter().zip(columns.iter_mut()) {
            match (def.eval)(&state) {
                Ok(v) => col.push(v),
                Err(e) => {
                    errors.push((row, def.name.to_string(), e.to_string()));
                    col.push(f64::NAN);
                }
            }
        }
    }
    Ok(MeasureTable { parameter, grid: grid.to_vec(), columns, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::pauli;
    use crate::states::{self, Preset};

    #[test]
    fn channel_presets_complete_and_act() {
        for p in [0.0, 0.3, 1.0] {
            for preset in [
                ChannelPreset::Dephasing(p),
                ChannelPreset::PhaseFlip(p),
                ChannelPreset::Depolarizing(p),
                ChannelPreset::AmplitudeDamping(p),
            ] {
                let ch = channel_preset(preset).unwrap();
                assert!(ch.completeness_defect() < 1e-12, "{}", ch.label);
            }
        }
        assert!(channel_preset(ChannelPreset::Dephasing(1.5)).is_err());

        // dephasing(0) is the identity channel.
        let plus = states::preset(&Preset::PlusState).unwrap();
        let id = channel_preset(ChannelPreset::Dephasing(0.0)).unwrap();
        let out = apply_channel(&plus, &id, 0).unwrap();
        assert!(out.mat().sub(plus.mat()).max_abs() < 1e-14);

        // dephasing(1) kills the off-diagonals of |+><+|.
        let full = channel_preset(ChannelPreset::Dephasing(1.0)).unwrap();
        let out = apply_channel(&plus, &full, 0).unwrap();
        assert!(out.mat()[(0, 1)].norm() < 1e-14);
        assert!((out.mat()[(0, 0)].re - 0.5).abs() < 1e-14);

        // depolarizing(p) maps rho to (1-p) rho + p I/2.
        for seed in 0..10u64 {
            let rho = states::random_density(&[2], 2, seed).unwrap();
            let p = 0.37;
            let ch = channel_preset(ChannelPreset::Depolarizing(p)).unwrap();
            let out = apply_channel(&rho, &ch, 0).unwrap();
            let expect = rho
                .mat()
                .scale_re(1.0 - p)
                .add(&ComplexMatrix::identity(2).scale_re(0.5 * p));
            assert!(out.mat().sub(&expect).max_abs() < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn channel_preserves_validity_and_bell_diagonal_orbit() {
        let bd = states::preset(&Preset::BellDiagonal { c1: 0.4, c2: -0.2, c3: 0.3 }).unwrap();
        let ch = channel_preset(ChannelPreset::PhaseFlip(0.2)).unwrap();
        let out = apply_channel_per_qubit(&bd, &ch).unwrap();
        // Still a valid state with unit trace.
        assert!(validate_with(out.mat(), out.dims(), &tol::Tolerances::default()).is_ok());
        // Phase flip on both qubits maps c -> ((1-2p)^2 c1, (1-2p)^2 c2, c3).
        let s = 1.0 - 2.0 * 0.2f64;
        let b = crate::states::bloch_decompose(&out).unwrap();
        assert!((b.t[0][0] - s * s * 0.4).abs() < 1e-12);
        assert!((b.t[1][1] + s * s * 0.2).abs() < 1e-12);
        assert!((b.t[2][2] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn channel_composition_associativity() {
        let rho = states::random_density(&[2], 2, 3).unwrap();
        let c1 = channel_preset(ChannelPreset::AmplitudeDamping(0.3)).unwrap();
        let c2 = channel_preset(ChannelPreset::Depolarizing(0.2)).unwrap();
        let seq = apply_channel(&apply_channel(&rho, &c1, 0).unwrap(), &c2, 0).unwrap();
        let composed = c2.compose_after(&c1).unwrap();
        let joint = apply_channel(&rho, &composed, 0).unwrap();
        assert!(seq.mat().sub(joint.mat()).max_abs() < 1e-10);
    }

    #[test]
    fn kraus_from_environment_routes() {
        // Product unitary: the channel is conjugation by U_S.
        let us = states::random_unitary(2, 21);
        let ue = states::random_unitary(2, 22);
        let rho_e = states::random_density(&[2], 2, 23).unwrap();
        let rho_s = states::random_density(&[2], 2, 24).unwrap();
        let ch = kraus_from_environment(&us.kron(&ue), &rho_e, 2).unwrap();
        let out = apply_channel(&rho_s, &ch, 0).unwrap();
        let expect = us.mul(rho_s.mat()).mul(&us.adjoint());
        assert!(out.mat().sub(&expect).max_abs() < 1e-10);

        // CNOT with |0><0| environment dephases the control.
        let mut cnot = ComplexMatrix::zeros(4, 4);
        cnot[(0, 0)] = crate::matcore::ONE;
        cnot[(1, 1)] = crate::matcore::ONE;
        cnot[(2, 3)] = crate::matcore::ONE;
        cnot[(3, 2)] = crate::matcore::ONE;
        let e0 = states::preset(&Preset::Computational { dims: vec![2], basis: vec![0] }).unwrap();
        let ch = kraus_from_environment(&cnot, &e0, 2).unwrap();
        let plus = states::preset(&Preset::PlusState).unwrap();
        let out = apply_channel(&plus, &ch, 0).unwrap();
        assert!(out.mat()[(0, 1)].norm() < 1e-12, "control coherence destroyed");

        // Random U, random environment: two-route equality.
        for seed in 0..10u64 {
            let u = states::random_unitary(6, 30 + seed);
            let rho_e = states::random_density(&[3], 3, 40 + seed).unwrap();
            let rho_s = states::random_density(&[2], 2, 50 + seed).unwrap();
            let ch = kraus_from_environment(&u, &rho_e, 2).unwrap();
            assert!(ch.completeness_defect() < 1e-9);
            let via_channel = apply_channel(&rho_s, &ch, 0).unwrap();
            let via_trace = environment_evolution(&u, &rho_s, &rho_e).unwrap();
            assert!(
                via_channel.mat().sub(via_trace.mat()).max_abs() < 1e-9,
                "seed {seed}"
            );
        }

        let not_unitary = ComplexMatrix::identity(4).scale_re(0.5);
        let rho_e = states::random_density(&[2], 2, 9).unwrap();
        assert!(matches!(
            kraus_from_environment(&not_unitary, &rho_e, 2),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn lindblad_basics() {
        // H = 0, no jumps: constant trajectory.
        let rho0 = states::random_density(&[2], 2, 1).unwrap();
        let model = LindbladModel::new(ComplexMatrix::zeros(2, 2), vec![]).unwrap();
        let traj = lindblad_evolve(&rho0, &model, 1.0, 0.01).unwrap();
        assert!(traj.states.last().unwrap().mat().sub(rho0.mat()).max_abs() < 1e-13);
        assert!(traj.max_trace_drift < 1e-12);

        // Amplitude damping from |1><1|: population decays as e^{-gamma t}.
        let one = states::preset(&Preset::Computational { dims: vec![2], basis: vec![1] }).unwrap();
        let mut sm = ComplexMatrix::zeros(2, 2);
        sm[(0, 1)] = crate::matcore::ONE; // sigma_minus = |0><1|
        let gamma = 0.8;
        let model = LindbladModel::new(ComplexMatrix::zeros(2, 2), vec![(gamma, sm)]).unwrap();
        let traj = lindblad_evolve(&one, &model, 2.0, 0.002).unwrap();
        for (t, st) in traj.times.iter().zip(&traj.states) {
            let pop = st.mat()[(1, 1)].re;
            assert!((pop - (-gamma * t).exp()).abs() < 1e-5, "t={t}");
        }
        assert!(traj.max_trace_drift < 1e-8);
        assert!(traj.min_eigenvalue > -1e-7);

        // Pure dephasing of |+><+|: off-diagonal decays as e^{-2 gamma t}.
        let plus = states::preset(&Preset::PlusState).unwrap();
        let model = LindbladModel::new(ComplexMatrix::zeros(2, 2), vec![(0.5, pauli(3))]).unwrap();
        let traj = lindblad_evolve(&plus, &model, 2.0, 0.002).unwrap();
        for (t, st) in traj.times.iter().zip(&traj.states) {
            let coh = st.mat()[(0, 1)].norm();
            assert!((coh - 0.5 * (-2.0 * 0.5 * t).exp()).abs() < 1e-5, "t={t}");
        }
    }

    #[test]
    fn lindblad_gamma_zero_matches_unitary_and_rk4_order() {
        use crate::matcore::expi_hermitian;
        let h = pauli(1).scale_re(0.9);
        let rho0 = states::preset(&Preset::Computational { dims: vec![2], basis: vec![0] }).unwrap();
        let model = LindbladModel::new(h.clone(), vec![]).unwrap();
        let t_end = 1.0;
        let traj = lindblad_evolve(&rho0, &model, t_end, 0.001).unwrap();
        let u = expi_hermitian(&h, t_end).unwrap();
        let exact = u.mul(rho0.mat()).mul(&u.adjoint());
        let err = traj.states.last().unwrap().mat().sub(&exact).max_abs();
        assert!(err < 1e-7, "unitary limit error {err}");

        // Empirical convergence order on the dephasing family (analytic
        // off-diagonal reference): err(dt)/err(dt/2) ~ 2^4.
        let plus = states::preset(&Preset::PlusState).unwrap();
        let gamma = 1.0;
        let model = LindbladModel::new(pauli(3).scale_re(0.8), vec![(gamma, pauli(3))]).unwrap();
        let err_at = |dt: f64| -> f64 {
            let traj = lindblad_evolve(&plus, &model, 1.0, dt).unwrap();
            let m = traj.states.last().unwrap().mat().clone();
            // With H = 0.8 sz the coherence also rotates; compare magnitudes.
            (m[(0, 1)].norm() - 0.5 * (-2.0 * gamma).exp()).abs()
        };
        let e1 = err_at(0.1);
        let e2 = err_at(0.05);
        let order = (e1 / e2).log2();
        assert!(order >= 3.5, "observed order {order} (err {e1} -> {e2})");
    }

    #[test]
    fn sweep_channel_and_lindblad() {
        let bell = states::preset(&Preset::BellPhiPlus).unwrap();
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let table = sweep(
            &bell,
            &SweepProcess::Channel { family: ChannelPreset::Dephasing(0.0) },
            &["concurrence".into(), "lqu".into(), "trace_discord_x".into()],
            &grid,
        )
        .unwrap();
        assert!(table.errors.is_empty());
        // Row 0 equals the measures of the initial state (all 1 for Bell).
        for (_, col) in &table.columns {
            assert!((col[0] - 1.0).abs() < 1e-9);
            // Monotone nonincreasing under per-qubit dephasing.
            for w in col.windows(2) {
                assert!(w[1] <= w[0] + 1e-9);
            }
        }

        // Empty measure list rejected.
        assert!(sweep(
            &bell,
            &SweepProcess::Channel { family: ChannelPreset::Dephasing(0.0) },
            &[],
            &grid
        )
        .is_err());

        // Lindblad sweep: local unitary H with no jumps leaves LQU constant.
        let h = pauli(3).scale_re(0.7).kron(&pauli(0)).add(&pauli(0).kron(&pauli(3).scale_re(0.4)));
        let model = LindbladModel::new(h, vec![]).unwrap();
        let tgrid: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let table = sweep(
            &bell,
            &SweepProcess::Lindblad { model, substeps: 50 },
            &["lqu".into()],
            &tgrid,
        )
        .unwrap();
        let (_, col) = &table.columns[0];
        for v in col {
            assert!((v - col[0]).abs() < 1e-6, "LQU constant under local unitaries");
        }

        // CSV format: header + one line per grid point, 12 significant digits.
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "param,lqu");
        assert_eq!(csv.lines().count(), 1 + tgrid.len());
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn sweep_marks_failed_cells_with_nan() {
        // A generic (non-X) state stays non-X under dephasing, so the
        // X-only trace discord fails per cell while purity still evaluates.
        let rho = states::random_density(&[2, 2], 4, 99).unwrap();
        let grid = [0.0, 0.5, 1.0];
        let table = sweep(
            &rho,
            &SweepProcess::Channel { family: ChannelPreset::Dephasing(0.0) },
            &["purity".into(), "trace_discord_x".into()],
            &grid,
        )
        .unwrap();
        let purity_col = &table.columns[0].1;
        assert!(purity_col.iter().all(|v| v.is_finite()));
        // Full dephasing (p = 1) leaves a diagonal state, which is X-form
        // again; the earlier rows are genuinely non-X and fail per cell.
        let trace_col = &table.columns[1].1;
        assert!(trace_col[0].is_nan() && trace_col[1].is_nan());
        assert!(trace_col[2].is_finite());
        assert_eq!(table.errors.len(), 2);
        // NaN cells serialize as a parsable marker.
        assert!(table.to_csv().contains(",nan"));
    }
}
