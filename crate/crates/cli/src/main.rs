//! Command-line front end: read state JSON or presets, compute measures,
//! run sweeps and Lindblad evolutions, query QFI, and run the verification
//! suites.
//!
//! Exit codes: 0 success; 1 verification failures; 2 invalid state, JSON, or
//! arguments; 3 inapplicable or empty measure list; 4 integrator
//! instability. Every error prints a single machine-parsable line starting
//! with `error_code=<name>`.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde::Deserialize;

use qcorr::dynamics::{format_sig, sweep, ChannelPreset, LindbladModel, SweepProcess};
use qcorr::matcore::{lift_operator, pauli, ComplexMatrix};
use qcorr::metrology::{cramer_rao, d_rho, qfi, ParametricFamily};
use qcorr::states::{self, DensityMatrix, Preset};
use qcorr::verify::{run_suite, Suite};
use qcorr::{measures, Error};

#[derive(Parser)]
#[command(name = "qcorr", about = "Quantum correlation, coherence, and Fisher-information toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StateArgs {
    /// Preset name: bell_phi_plus, bell_phi_minus, bell_psi_plus,
    /// bell_psi_minus, bell_diagonal, x_state, horodecki, ghz, plus,
    /// computational.
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated preset parameters (for example 0.3,0.0,0.2).
    #[arg(long)]
    params: Option<String>,
    /// JSON state file: `{"dims":[...],"re":[[...]],"im":[[...]]}` or
    /// `{"preset":"<name>","params":{...}}`.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate measures on a state and print name,value,method rows.
    Measure {
        #[command(flatten)]
        state: StateArgs,
        /// Comma-separated measure names (see `qcorr measure --list`).
        #[arg(long, default_value = "")]
        measures: String,
        /// List the registered measures and exit.
        #[arg(long)]
        list: bool,
        /// Write the rows to a CSV file instead of stdout.
        #[arg(long)]
        out: Option<String>,
    },
    /// Sweep a channel strength or Lindblad time grid and emit CSV.
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        /// Process: dephasing | phase_flip | depolarizing |
        /// amplitude_damping (grid = strength p), or
        /// `lindblad:amplitude_damping:<gamma>` | `lindblad:dephasing:<gamma>`
        /// (grid = time, per-qubit jumps).
        #[arg(long)]
        process: String,
        #[arg(long, default_value = "")]
        measures: String,
        /// Grid as start:stop:count with count >= 2.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: Option<String>,
        /// Seed recorded for reproducibility (sweeps are deterministic).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Integrate a Lindblad model and emit t, populations, purity as CSV.
    Evolve {
        #[command(flatten)]
        state: StateArgs,
        /// Hamiltonian: `none` | `sz:<omega>` (omega/2 sigma_z per qubit).
        #[arg(long, default_value = "none")]
        hamiltonian: String,
        /// Jump operator, repeatable: `sigma_minus:<gamma>` | `sigma_z:<gamma>`
        /// (applied to every qubit).
        #[arg(long)]
        jump: Vec<String>,
        /// Time grid start:stop:count.
        #[arg(long)]
        grid: String,
        /// RK4 substeps per grid interval.
        #[arg(long, default_value_t = 50)]
        substeps: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Quantum Fisher information of a state under a phase generator.
    Qfi {
        #[command(flatten)]
        state: StateArgs,
        /// Generator: `collective_z` (sum sigma_z/2) | `local_z:<k>` | `local_x:<k>`.
        #[arg(long, default_value = "collective_z")]
        generator: String,
        /// Number of trials in the reported Cramér-Rao bound.
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Run a verification suite and report residuals.
    Verify {
        /// closed_forms | oracles | conservation | metrology | all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Override the per-battery sample counts.
        #[arg(long)]
        n: Option<usize>,
    },
}

fn fail(code: &str, message: impl std::fmt::Display, exit: i32) -> ! {
    eprintln!("error_code={code} {message}");
    std::process::exit(exit);
}

fn fail_err(e: &Error, exit: i32) -> ! {
    fail(e.code(), e, exit)
}

// --- state loading ------------------------------------------------------------

#[derive(Deserialize)]
struct JsonState {
    dims: Option<Vec<usize>>,
    re: Option<Vec<Vec<f64>>>,
    im: Option<Vec<Vec<f64>>>,
    preset: Option<String>,
    params: Option<serde_json::Map<String, serde_json::Value>>,
}

fn parse_params(raw: &Option<String>) -> Vec<f64> {
    raw.as_deref()
        .unwrap_or("")
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().unwrap_or_else(|_| fail("InvalidParams", format!("cannot parse parameter '{s}'"), 2)))
        .collect()
}

fn preset_from_name(name: &str, params: &[f64]) -> Preset {
    let need = |n: usize| {
        if params.len() != n {
            fail("InvalidParams", format!("preset '{name}' needs {n} parameter(s), got {}", params.len()), 2);
        }
    };
    match name {
        "bell_phi_plus" => Preset::BellPhiPlus,
        "bell_phi_minus" => Preset::BellPhiMinus,
        "bell_psi_plus" => Preset::BellPsiPlus,
        "bell_psi_minus" => Preset::BellPsiMinus,
        "plus" | "plus_state" => Preset::PlusState,
        "bell_diagonal" => {
            need(3);
            Preset::BellDiagonal { c1: params[0], c2: params[1], c3: params[2] }
        }
        "x_state" => {
            need(1);
            Preset::XState { x: params[0] }
        }
        "horodecki" => {
            need(1);
            Preset::Horodecki { p: params[0] }
        }
        "ghz" => {
            need(1);
            Preset::Ghz { n: params[0] as usize }
        }
        "computational" => {
            if params.len() % 2 != 0 || params.is_empty() {
                fail("InvalidParams", "computational needs d0,..,dk,b0,..,bk", 2);
            }
            let half = params.len() / 2;
            Preset::Computational {
                dims: params[..half].iter().map(|&x| x as usize).collect(),
                basis: params[half..].iter().map(|&x| x as usize).collect(),
            }
        }
        other => fail("InvalidParams", format!("unknown preset '{other}'"), 2),
    }
}

fn json_param(map: &serde_json::Map<String, serde_json::Value>, key: &str) -> f64 {
    map.get(key)
        .and_then(|v| v.as_f64())
        .unwrap_or_else(|| fail("InvalidParams", format!("missing numeric field '{key}'"), 2))
}

fn state_from_json(text: &str) -> DensityMatrix {
    let parsed: JsonState = match serde_json::from_str(text) {
        Ok(p) => p,
        Err(e) => fail("InvalidState", format!("invalid JSON: {e}"), 2),
    };
    if let Some(name) = parsed.preset {
        let map = parsed.params.unwrap_or_default();
        let preset = match name.as_str() {
            "bell_diagonal" => Preset::BellDiagonal {
                c1: json_param(&map, "c1"),
                c2: json_param(&map, "c2"),
                c3: json_param(&map, "c3"),
            },
            "x_state" => Preset::XState { x: json_param(&map, "x") },
            "horodecki" => Preset::Horodecki { p: json_param(&map, "p") },
            "ghz" => Preset::Ghz { n: json_param(&map, "n") as usize },
            "bell_phi_plus" => Preset::BellPhiPlus,
            "bell_phi_minus" => Preset::BellPhiMinus,
            "bell_psi_plus" => Preset::BellPsiPlus,
            "bell_psi_minus" => Preset::BellPsiMinus,
            "plus" | "plus_state" => Preset::PlusState,
            "computational" => {
                let get_list = |key: &str| -> Vec<usize> {
                    map.get(key)
                        .and_then(|v| v.as_array())
                        .map(|a| a.iter().filter_map(|x| x.as_u64()).map(|x| x as usize).collect())
                        .unwrap_or_else(|| fail("InvalidParams", format!("missing list '{key}'"), 2))
                };
                Preset::Computational { dims: get_list("dims"), basis: get_list("basis") }
            }
            other => fail("InvalidParams", format!("unknown preset '{other}'"), 2),
        };
        return states::preset(&preset).unwrap_or_else(|e| fail_err(&e, 2));
    }
    let (Some(dims), Some(re)) = (parsed.dims, parsed.re) else {
        fail("InvalidState", "JSON needs either a preset or dims + re (+ im)", 2);
    };
    let n: usize = dims.iter().product();
    if re.len() != n || re.iter().any(|row| row.len() != n) {
        fail("InvalidState", format!("re must be {n}x{n} for dims {dims:?}"), 2);
    }
    let im = parsed.im.unwrap_or_else(|| vec![vec![0.0; n]; n]);
    if im.len() != n || im.iter().any(|row| row.len() != n) {
        fail("InvalidState", format!("im must be {n}x{n} for dims {dims:?}"), 2);
    }
    let mat = ComplexMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im[i][j]));
    match states::validate(&mat, &dims) {
        Ok(rho) => rho,
        Err(report) => {
            let detail = report
                .iter()
                .map(|v| format!("{} ({:.3e})", v.invariant, v.magnitude))
                .collect::<Vec<_>>()
                .join("; ");
            fail("InvalidState", detail, 2);
        }
    }
}

fn load_state(args: &StateArgs) -> DensityMatrix {
    match (&args.preset, &args.input) {
        (Some(name), None) => {
            let params = parse_params(&args.params);
            states::preset(&preset_from_name(name, &params)).unwrap_or_else(|e| fail_err(&e, 2))
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .unwrap_or_else(|e| fail("InvalidState", format!("cannot read {path}: {e}"), 2));
            state_from_json(&text)
        }
        _ => fail("InvalidParams", "provide exactly one of --preset or --input", 2),
    }
}

fn parse_grid(spec: &str) -> Vec<f64> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        fail("InvalidParams", format!("grid '{spec}' is not start:stop:count"), 2);
    }
    let start: f64 = parts[0].parse().unwrap_or_else(|_| fail("InvalidParams", "bad grid start", 2));
    let stop: f64 = parts[1].parse().unwrap_or_else(|_| fail("InvalidParams", "bad grid stop", 2));
    let count: usize = parts[2].parse().unwrap_or_else(|_| fail("InvalidParams", "bad grid count", 2));
    if count < 2 {
        fail("InvalidParams", "grid count must be >= 2", 2);
    }
    (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect()
}

fn parse_measures(spec: &str) -> Vec<String> {
    spec.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn write_output(out: &Option<String>, content: &str) {
    match out {
        Some(path) => std::fs::write(path, content)
            .unwrap_or_else(|e| fail("InvalidParams", format!("cannot write {path}: {e}"), 2)),
        None => print!("{content}"),
    }
}

// --- commands -----------------------------------------------------------------

fn cmd_measure(state: &StateArgs, measure_spec: &str, list: bool, out: &Option<String>) {
    if list {
        for def in measures::registry() {
            println!("{}\t{}\t{}", def.name, def.method, def.description);
        }
        return;
    }
    let names = parse_measures(measure_spec);
    if names.is_empty() {
        fail("UnknownMeasure", "empty measure list", 3);
    }
    let rho = load_state(state);
    let mut rows = String::from("measure,value,method\n");
    for name in &names {
        let def = measures::lookup(name)
            .unwrap_or_else(|| fail("UnknownMeasure", format!("unknown measure '{name}'"), 3));
        if !(def.applicable)(rho.dims()) {
            fail(
                "DimMismatch",
                format!("measure '{name}' is not applicable to dims {:?}", rho.dims()),
                3,
            );
        }
        let value = (def.eval)(&rho).unwrap_or_else(|e| fail_err(&e, 3));
        rows.push_str(&format!("{},{},{}\n", def.name, format_sig(value), def.method));
    }
    write_output(out, &rows);
}

fn parse_process(spec: &str) -> SweepProcess {
    if let Some(rest) = spec.strip_prefix("lindblad:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            fail("InvalidParams", "lindblad process is lindblad:<model>:<gamma>", 2);
        }
        let gamma: f64 = parts[1]
            .parse()
            .unwrap_or_else(|_| fail("InvalidParams", "bad lindblad rate", 2));
        let jump = match parts[0] {
            "amplitude_damping" => {
                let mut sm = ComplexMatrix::zeros(2, 2);
                sm[(0, 1)] = C64::new(1.0, 0.0);
                sm
            }
            "dephasing" => pauli(3),
            other => fail("InvalidParams", format!("unknown lindblad model '{other}'"), 2),
        };
        // The model is assembled per-state in cmd_sweep (needs the dims).
        return SweepProcess::Lindblad {
            model: LindbladModel::new(ComplexMatrix::zeros(2, 2), vec![(gamma, jump)])
                .unwrap_or_else(|e| fail_err(&e, 2)),
            substeps: 50,
        };
    }
    let family = match spec {
        "dephasing" => ChannelPreset::Dephasing(0.0),
        "phase_flip" => ChannelPreset::PhaseFlip(0.0),
        "depolarizing" => ChannelPreset::Depolarizing(0.0),
        "amplitude_damping" => ChannelPreset::AmplitudeDamping(0.0),
        other => fail("InvalidParams", format!("unknown process '{other}'"), 2),
    };
    SweepProcess::Channel { family }
}

/// Lift a single-qubit Lindblad model to every qubit of the state.
fn lift_model(model: &LindbladModel, dims: &[usize]) -> LindbladModel {
    let total: usize = dims.iter().product();
    let mut jumps = Vec::new();
    for (rate, l) in &model.jumps {
        for k in 0..dims.len() {
            jumps.push((
                *rate,
                lift_operator(l, dims, k).unwrap_or_else(|e| fail_err(&e, 2)),
            ));
        }
    }
    let mut h = ComplexMatrix::zeros(total, total);
    if model.hamiltonian.max_abs() > 0.0 {
        for k in 0..dims.len() {
            h = h.add(
                &lift_operator(&model.hamiltonian, dims, k).unwrap_or_else(|e| fail_err(&e, 2)),
            );
        }
    }
    LindbladModel::new(h, jumps).unwrap_or_else(|e| fail_err(&e, 2))
}

fn cmd_sweep(state: &StateArgs, process_spec: &str, measure_spec: &str, grid_spec: &str, out: &Option<String>) {
    let names = parse_measures(measure_spec);
    if names.is_empty() {
        fail("UnknownMeasure", "empty measure list", 3);
    }
    let rho = load_state(state);
    let grid = parse_grid(grid_spec);
    let process = match parse_process(process_spec) {
        SweepProcess::Lindblad { model, substeps } => {
            if rho.dims().iter().any(|&d| d != 2) {
                fail("DimMismatch", "lindblad sweeps support qubit registers", 2);
            }
            SweepProcess::Lindblad { model: lift_model(&model, rho.dims()), substeps }
        }
        ch => ch,
    };
    let table = sweep(&rho, &process, &names, &grid).unwrap_or_else(|e| match e {
        Error::StepUnstable { .. } => fail_err(&e, 4),
        Error::UnknownMeasure(_) | Error::DimMismatch(_) => fail_err(&e, 3),
        other => fail_err(&other, 2),
    });
    for (row, measure, err) in &table.errors {
        eprintln!("warning: row {row} measure {measure}: {err}");
    }
    write_output(out, &table.to_csv());
}

fn cmd_evolve(
    state: &StateArgs,
    hamiltonian: &str,
    jumps: &[String],
    grid_spec: &str,
    substeps: usize,
    out: &Option<String>,
) {
    let rho = load_state(state);
    if rho.dims().iter().any(|&d| d != 2) {
        fail("DimMismatch", "evolve supports qubit registers", 2);
    }
    let grid = parse_grid(grid_spec);
    let h1 = match hamiltonian {
        "none" => ComplexMatrix::zeros(2, 2),
        spec => {
            let Some(rest) = spec.strip_prefix("sz:") else {
                fail("InvalidParams", format!("unknown hamiltonian '{spec}'"), 2);
            };
            let w: f64 =
                rest.parse().unwrap_or_else(|_| fail("InvalidParams", "bad sz coefficient", 2));
            pauli(3).scale_re(0.5 * w)
        }
    };
    let mut jump_ops = Vec::new();
    for j in jumps {
        let parts: Vec<&str> = j.split(':').collect();
        if parts.len() != 2 {
            fail("InvalidParams", format!("jump '{j}' is not <name>:<gamma>"), 2);
        }
        let gamma: f64 =
            parts[1].parse().unwrap_or_else(|_| fail("InvalidParams", "bad jump rate", 2));
        let op = match parts[0] {
            "sigma_minus" => {
                let mut sm = ComplexMatrix::zeros(2, 2);
                sm[(0, 1)] = C64::new(1.0, 0.0);
                sm
            }
            "sigma_z" => pauli(3),
            other => fail("InvalidParams", format!("unknown jump '{other}'"), 2),
        };
        jump_ops.push((gamma, op));
    }
    let model = lift_model(
        &LindbladModel::new(h1, jump_ops).unwrap_or_else(|e| fail_err(&e, 2)),
        rho.dims(),
    );

    let n = rho.dim();
    let mut csv = String::from("t");
    for i in 0..n {
        csv.push_str(&format!(",p{i}"));
    }
    csv.push_str(",purity\n");
    let mut current = rho.clone();
    let mut t_now = 0.0;
    for &t in &grid {
        if t > t_now {
            let dt = (t - t_now) / substeps.max(1) as f64;
            let traj = qcorr::dynamics::lindblad_evolve(&current, &model, t - t_now, dt)
                .unwrap_or_else(|e| match e {
                    Error::StepUnstable { .. } => fail_err(&e, 4),
                    other => fail_err(&other, 2),
                });
            current = traj.states.last().expect("trajectory never empty").clone();
            t_now = t;
        }
        csv.push_str(&format_sig(t));
        for i in 0..n {
            csv.push(',');
            csv.push_str(&format_sig(current.mat()[(i, i)].re));
        }
        csv.push(',');
        csv.push_str(&format_sig(current.purity()));
        csv.push('\n');
    }
    write_output(out, &csv);
}

fn cmd_qfi(state: &StateArgs, generator: &str, n_trials: usize) {
    let rho = load_state(state);
    let dims = rho.dims().to_vec();
    let gen = if generator == "collective_z" {
        if dims.iter().any(|&d| d != 2) {
            fail("DimMismatch", "collective_z needs a qubit register", 2);
        }
        let mut h = ComplexMatrix::zeros(rho.dim(), rho.dim());
        for k in 0..dims.len() {
            h = h.add(&lift_operator(&pauli(3), &dims, k).unwrap_or_else(|e| fail_err(&e, 2)));
        }
        h.scale_re(0.5)
    } else if let Some(rest) = generator.strip_prefix("local_z:") {
        let k: usize = rest.parse().unwrap_or_else(|_| fail("InvalidParams", "bad qubit index", 2));
        lift_operator(&pauli(3).scale_re(0.5), &dims, k).unwrap_or_else(|e| fail_err(&e, 2))
    } else if let Some(rest) = generator.strip_prefix("local_x:") {
        let k: usize = rest.parse().unwrap_or_else(|_| fail("InvalidParams", "bad qubit index", 2));
        lift_operator(&pauli(1).scale_re(0.5), &dims, k).unwrap_or_else(|e| fail_err(&e, 2))
    } else {
        fail("InvalidParams", format!("unknown generator '{generator}'"), 2);
    };
    let fam = ParametricFamily::unitary(gen, rho, 0.0);
    let state_now = fam.state().unwrap_or_else(|e| fail_err(&e, 2));
    let drho = d_rho(&fam, 0).unwrap_or_else(|e| fail_err(&e, 2));
    let f = qfi(&state_now, &drho).unwrap_or_else(|e| fail_err(&e, 2));
    println!("qfi={}", format_sig(f));
    match cramer_rao(f, n_trials) {
        Ok(bound) => println!("cramer_rao_bound={}", format_sig(bound)),
        Err(e) => println!("cramer_rao_bound=inf ({})", e.code()),
    }
}

fn cmd_verify(suite_name: &str, seed: u64, n: Option<usize>) {
    let Some(suite) = Suite::parse(suite_name) else {
        fail("InvalidParams", format!("unknown suite '{suite_name}'"), 2);
    };
    let checks = run_suite(suite, seed, n).unwrap_or_else(|e| fail_err(&e, 2));
    let mut failures = 0usize;
    for c in &checks {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        println!(
            "[{status}] criterion {}: {} residual={:.3e} tol={:.3e}",
            c.criterion, c.name, c.residual, c.tolerance
        );
        if !c.pass() {
            failures += 1;
        }
    }
    println!("{} checks, {} failed (suite {suite_name}, seed {seed})", checks.len(), failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

fn main() {
    let cli = Cli::parse();
    match &cli.command {
        Command::Measure { state, measures, list, out } => cmd_measure(state, measures, *list, out),
        Command::Sweep { state, process, measures, grid, out, seed: _ } => {
            cmd_sweep(state, process, measures, grid, out)
        }
        Command::Evolve { state, hamiltonian, jump, grid, substeps, out } => {
            cmd_evolve(state, hamiltonian, jump, grid, *substeps, out)
        }
        Command::Qfi { state, generator, n } => cmd_qfi(state, generator, *n),
        Command::Verify { suite, seed, n } => cmd_verify(suite, *seed, *n),
    }
}
