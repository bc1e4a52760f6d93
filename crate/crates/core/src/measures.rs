//! Registry mapping measure names to operations, with applicability
//! predicates on the dimension list. The CLI and the sweep harness share it.

use crate::coherence::{c_l1, c_rel_entropy, ReferenceBasis};
use crate::discord::{self, Side};
use crate::entanglement;
use crate::entropy;
use crate::states::{DensityMatrix, XStateParams};
use crate::uncertainty;
use crate::Result;

pub struct MeasureDef {
    pub name: &'static str,
    pub description: &'static str,
    /// Short tag for the computation route, printed by the CLI.
    pub method: &'static str,
    pub applicable: fn(&[usize]) -> bool,
    pub eval: fn(&DensityMatrix) -> Result<f64>,
}

fn two_qubits(dims: &[usize]) -> bool {
    dims == [2, 2]
}

fn qubit_times_d(dims: &[usize]) -> bool {
    dims.len() == 2 && dims[0] == 2
}

fn d_times_qubit(dims: &[usize]) -> bool {
    dims.len() == 2 && dims[1] == 2
}

fn any(_: &[usize]) -> bool {
    true
}

fn x_params(rho: &DensityMatrix) -> Result<XStateParams> {
    XStateParams::from_density(rho)
}

/// All registered measures.
pub fn registry() -> &'static [MeasureDef] {
    &[
        MeasureDef {
            name: "concurrence",
            method: "wootters",
            description: "Wootters concurrence",
            applicable: two_qubits,
            eval: |rho| entanglement::concurrence_2q(rho),
        },
        MeasureDef {
            name: "eof",
            method: "h_of_concurrence",
            description: "entanglement of formation",
            applicable: two_qubits,
            eval: |rho| entanglement::eof_2q(rho),
        },
        MeasureDef {
            name: "negativity",
            method: "partial_transpose",
            description: "negativity across the first cut",
            applicable: |dims| dims.len() >= 2,
            eval: |rho| entanglement::negativity(rho, 0),
        },
        MeasureDef {
            name: "log_negativity",
            method: "partial_transpose",
            description: "logarithmic negativity across the first cut",
            applicable: |dims| dims.len() >= 2,
            eval: |rho| entanglement::log_negativity(rho, 0),
        },
        MeasureDef {
            name: "discord_x",
            method: "x_closed",
            description: "entropic discord (X-state closed form, measured B)",
            applicable: two_qubits,
            eval: |rho| Ok(discord::discord_x(&x_params(rho)?)?.quantum),
        },
        MeasureDef {
            name: "discord_numeric",
            method: "numeric",
            description: "entropic discord (numeric optimizer, measured B)",
            applicable: qubit_times_d_measured_b,
            eval: |rho| Ok(discord::discord_numeric(rho, Side::B, 64, 20)?.quantum),
        },
        MeasureDef {
            name: "trace_discord_x",
            method: "x_closed",
            description: "trace-distance discord (X states)",
            applicable: two_qubits,
            eval: |rho| discord::trace_discord_x(&x_params(rho)?),
        },
        MeasureDef {
            name: "geometric_discord",
            method: "bloch_closed",
            description: "Hilbert-Schmidt geometric discord",
            applicable: two_qubits,
            eval: |rho| discord::geometric_discord_hs(rho),
        },
        MeasureDef {
            name: "linear_discord",
            method: "linear",
            description: "linear-entropy discord",
            applicable: d_times_qubit,
            eval: |rho| discord::linear_discord(rho),
        },
        MeasureDef {
            name: "lqu",
            method: "w_matrix",
            description: "local quantum uncertainty (first factor measured)",
            applicable: qubit_times_d,
            eval: |rho| Ok(uncertainty::lqu_2xd(rho)?.0),
        },
        MeasureDef {
            name: "lqfi",
            method: "m_matrix",
            description: "local quantum Fisher information",
            applicable: qubit_times_d,
            eval: |rho| Ok(uncertainty::lqfi(rho)?.0),
        },
        MeasureDef {
            name: "c_l1",
            method: "off_diagonal_sum",
            description: "l1-norm coherence (computational basis)",
            applicable: any,
            eval: |rho| c_l1(rho, &ReferenceBasis::computational(rho.dim())),
        },
        MeasureDef {
            name: "c_rel_entropy",
            method: "spectral",
            description: "relative entropy of coherence (computational basis)",
            applicable: any,
            eval: |rho| c_rel_entropy(rho, &ReferenceBasis::computational(rho.dim())),
        },
        MeasureDef {
            name: "von_neumann",
            method: "spectral",
            description: "von Neumann entropy",
            applicable: any,
            eval: |rho| Ok(entropy::von_neumann(rho)),
        },
        MeasureDef {
            name: "linear_entropy",
            method: "purity",
            description: "linear entropy",
            applicable: any,
            eval: |rho| Ok(entropy::linear_entropy(rho)),
        },
        MeasureDef {
            name: "purity",
            method: "trace",
            description: "Tr rho^2",
            applicable: any,
            eval: |rho| Ok(rho.purity()),
        },
        MeasureDef {
            name: "mutual_information",
            method: "spectral",
            description: "quantum mutual information",
            applicable: |dims| dims.len() == 2,
            eval: |rho| entropy::mutual_information(rho),
        },
    ]
}

fn qubit_times_d_measured_b(dims: &[usize]) -> bool {
    dims.len() == 2 && dims[1] == 2
}

pub fn lookup(name: &str) -> Option<&'static MeasureDef> {
    // Common shorthand.
    let canonical = match name {
        "trace_discord" => "trace_discord_x",
        "discord" => "discord_x",
        other => other,
    };
    registry().iter().find(|d| d.name == canonical)
}

pub fn names() -> Vec<&'static str> {
    registry().iter().map(|d| d.name).collect()
}
