//! Property tests for the algebraic invariants that should hold on any
//! input, not just the seeded corpora.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use qcorr::matcore::{self, ComplexMatrix};
use qcorr::states::{self, DensityMatrix};

fn c64_strategy() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(c64_strategy(), n * n).prop_map(move |data| {
        ComplexMatrix::from_fn(n, n, |i, j| data[i * n + j])
    })
}

fn density_strategy(dims: &'static [usize]) -> impl Strategy<Value = DensityMatrix> {
    let total: usize = dims.iter().product();
    (1..=total, any::<u64>())
        .prop_map(move |(rank, seed)| states::random_density(dims, rank, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(a in matrix_strategy(2), b in matrix_strategy(2),
                          c in matrix_strategy(2), d in matrix_strategy(2)) {
        let lhs = a.kron(&b).mul(&c.kron(&d));
        let rhs = a.mul(&c).kron(&b.mul(&d));
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-10);
    }

    #[test]
    fn trace_norm_is_a_norm(a in matrix_strategy(3), b in matrix_strategy(3), s in -3.0f64..3.0) {
        let na = matcore::trace_norm(&a).unwrap();
        let nb = matcore::trace_norm(&b).unwrap();
        let nab = matcore::trace_norm(&a.add(&b)).unwrap();
        prop_assert!(nab <= na + nb + 1e-10, "triangle inequality");
        let nsa = matcore::trace_norm(&a.scale_re(s)).unwrap();
        prop_assert!((nsa - s.abs() * na).abs() < 1e-9, "absolute homogeneity");
    }

    #[test]
    fn partial_trace_of_product_recovers_factors(sa in any::<u64>(), sb in any::<u64>()) {
        let a = states::random_density(&[2], 2, sa).unwrap();
        let b = states::random_density(&[3], 3, sb).unwrap();
        let joint = DensityMatrix::new(a.mat().kron(b.mat()), &[2, 3]).unwrap();
        let ra = joint.partial_trace(&[0]).unwrap();
        prop_assert!(ra.mat().sub(a.mat()).max_abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_involutive(rho in density_strategy(&[2, 2])) {
        let pt = rho.partial_transpose(0).unwrap();
        let back = matcore::partial_transpose_mat(&pt, &[2, 2], 0).unwrap();
        prop_assert!(back.sub(rho.mat()).max_abs() == 0.0);
    }

    #[test]
    fn fidelity_is_symmetric_and_normalized(r1 in density_strategy(&[2, 2]),
                                            r2 in density_strategy(&[2, 2])) {
        let f12 = matcore::fidelity_mats(r1.mat(), r2.mat()).unwrap();
        let f21 = matcore::fidelity_mats(r2.mat(), r1.mat()).unwrap();
        prop_assert!((f12 - f21).abs() < 1e-10);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f12));
        let f11 = matcore::fidelity_mats(r1.mat(), r1.mat()).unwrap();
        prop_assert!((f11 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn channel_outputs_stay_valid(rho in density_strategy(&[2, 2]), p in 0.0f64..=1.0) {
        use qcorr::dynamics::{apply_channel_per_qubit, channel_preset, ChannelPreset};
        for preset in [
            ChannelPreset::Dephasing(p),
            ChannelPreset::PhaseFlip(p),
            ChannelPreset::Depolarizing(p),
            ChannelPreset::AmplitudeDamping(p),
        ] {
            let ch = channel_preset(preset).unwrap();
            let out = apply_channel_per_qubit(&rho, &ch).unwrap();
            prop_assert!(states::validate(out.mat(), out.dims()).is_ok());
        }
    }

    #[test]
    fn schmidt_weights_sum_to_one(seed in any::<u64>()) {
        let psi = states::random_pure(&[2, 3], seed);
        let s = states::schmidt(&psi, 1).unwrap();
        let total: f64 = s.coefficients.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for w in s.coefficients.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn purification_round_trips(rho in density_strategy(&[2, 2])) {
        let psi = states::purify(&rho).unwrap();
        let keep: Vec<usize> = (0..rho.dims().len()).collect();
        let back = psi.to_density().partial_trace(&keep).unwrap();
        prop_assert!(back.mat().sub(rho.mat()).max_abs() < 1e-10);
    }

    #[test]
    fn fidelity_matches_bloch_closed_form(sa in any::<u64>(), sb in any::<u64>()) {
        // Single-qubit pair: F = (1 + r.s + sqrt((1-|r|^2)(1-|s|^2)))/2.
        let r1 = states::random_density(&[2], 2, sa).unwrap();
        let r2 = states::random_density(&[2], 2, sb).unwrap();
        let f = matcore::fidelity_mats(r1.mat(), r2.mat()).unwrap();
        let br = states::bloch_vector_qubit(&r1).unwrap();
        let bs = states::bloch_vector_qubit(&r2).unwrap();
        let dot: f64 = (0..3).map(|i| br[i] * bs[i]).sum();
        let nr: f64 = 1.0 - br.iter().map(|x| x * x).sum::<f64>();
        let ns: f64 = 1.0 - bs.iter().map(|x| x * x).sum::<f64>();
        let closed = 0.5 * (1.0 + dot + (nr.max(0.0) * ns.max(0.0)).sqrt());
        prop_assert!((f - closed).abs() < 1e-9, "F {} vs closed {}", f, closed);
    }
}
