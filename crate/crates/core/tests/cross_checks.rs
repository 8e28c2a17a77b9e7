//! Agreement between independent routes through the public API.

use bspdc::devices::analytic::bs_binomial;
use bspdc::devices::{converged_element, pdc_amplitude, BeamSplitter, Device, ParametricAmplifier};
use bspdc::duality::{check_duality, duality_instances};
use bspdc::fock::FockState2;
use bspdc::linalg::max_abs_diff;
use bspdc::qpdc::{build_q1_circuit, run_qpdc, QpdcSpec, RunMode, Q1_INPUTS};
use bspdc::qubit::{Circuit, QubitState};
use proptest::prelude::*;

#[test]
fn duality_rhs_matches_binomial_expansion() {
    for g in [1.5, 3.0, 8.0] {
        let bs = BeamSplitter::new(1.0 / g).unwrap();
        for d in duality_instances(g, 4).unwrap() {
            let [l, s, n, m] = d.indices();
            let want = bs_binomial(bs, FockState2::new(n, s), FockState2::new(l, m)) / g.sqrt();
            assert!(
                (d.rhs.re - want).abs() < 1e-12 && d.rhs.im.abs() < 1e-12,
                "{:?}",
                d.indices()
            );
        }
    }
}

#[test]
fn disentangled_amplifier_matches_converged_oracle() {
    let cases = [
        ((0, 0), (2, 2)),
        ((1, 0), (3, 2)),
        ((2, 1), (1, 0)),
        ((1, 1), (1, 1)),
        ((0, 2), (1, 3)),
    ];
    for g in [1.25, 2.0] {
        let pa = ParametricAmplifier::new(g).unwrap();
        for ((n, m), (l, s)) in cases {
            let (input, out) = (FockState2::new(n, m), FockState2::new(l, s));
            let oracle = converged_element(Device::Pdc(pa), out, input, 40, 1e-10).unwrap();
            assert!(
                (pdc_amplitude(pa, input, out) - oracle).norm() < 1e-9,
                "{input} -> {out} at g = {g}"
            );
        }
    }
}

#[test]
fn built_circuits_survive_text_round_trip() {
    for input in Q1_INPUTS {
        for g in [1.0, 2.5] {
            let built = build_q1_circuit(&QpdcSpec::new(g, 1, input, RunMode::Exact).unwrap()).unwrap();
            let text = built.circuit.to_text();
            let parsed = Circuit::from_text(&text).unwrap();
            assert_eq!(parsed.to_text(), text);
            let zero = QubitState::zero(built.layout.num_qubits());
            let a = built.circuit.run_exact(&zero).unwrap();
            let b = parsed.run_exact(&zero).unwrap();
            assert_eq!(a.labels, b.labels);
            assert!((a.probability - b.probability).abs() < 1e-15);
            let (ua, ub) = (
                built.gates().unitary().unwrap(),
                Circuit::from_text(&built.gates().to_text()).unwrap().unitary().unwrap(),
            );
            assert!(max_abs_diff(&ua, &ub) < 1e-15);
        }
    }
}

#[test]
fn mirrored_inputs_give_equal_probabilities() {
    for g in [1.2, 2.0, 3.7] {
        let a = run_qpdc(&QpdcSpec::new(g, 1, FockState2::new(1, 0), RunMode::Exact).unwrap()).unwrap();
        let b = run_qpdc(&QpdcSpec::new(g, 1, FockState2::new(0, 1), RunMode::Exact).unwrap()).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(ra.output, rb.output.swapped());
            assert!((ra.probability - rb.probability).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn duality_holds_off_grid(g in 1.0f64..12.0, l in 0u32..6, s in 0u32..6, n in 0u32..6, m in 0u32..6) {
        let d = check_duality(g, l, s, n, m).unwrap();
        prop_assert!(d.residual < 1e-8, "{:?} at g = {}: {}", d.indices(), g, d.residual);
    }

    #[test]
    fn circuit_probabilities_track_amplifier(g in 1.0f64..6.0, k in 0usize..5) {
        let input = Q1_INPUTS[k];
        for row in run_qpdc(&QpdcSpec::new(g, 1, input, RunMode::Exact).unwrap()).unwrap() {
            let p = pdc_amplitude(ParametricAmplifier::new(g).unwrap(), input, row.output).norm_sqr();
            prop_assert!((row.probability - p).abs() < 1e-10);
        }
    }
}
