//! Scenario builders shared by the benchmarks.

use qenergy::*;

/// The measured-fold time-evolution workload document.
pub fn measured_workload_document() -> String {
    r#"{
        "name": "heisenberg-obc-100q",
        "regime": "nisq",
        "technology": "superconducting",
        "qpu_seconds": 991.0,
        "nisq": {
            "gate_counts": {"counts": {"cx": 2404}, "qubit_count": 100},
            "qem": {
                "zne_folds": [1, 3, 5],
                "pt_copies": 10,
                "shots": 100000,
                "fold_mode": "measured",
                "measured_fold_counts": {"1": 24040, "3": 49300, "5": 74560}
            }
        }
    }"#
    .to_string()
}

/// A partial-fold QEM stack over a mid-sized base circuit.
pub fn partial_fold_inputs() -> (GateCounts, QemStack) {
    let base = workload::gate_counts(&[("cx", 2404)], 100, 0);
    let qem = QemStack {
        zne_folds: vec![1, 3, 5, 7, 9],
        pt_copies: 10,
        shots: 100_000,
        fold_mode: FoldMode::Partial,
        folded_gate_count: Some(1263),
        measured_fold_counts: None,
        m3_cal_shots: 10_000,
        m3_amortize_over: 100,
    };
    (base, qem)
}

/// An FTQC configuration that exercises the solver, the interpolated
/// decoder lookup and the full composition.
pub fn ftqc_config() -> FtqcConfig {
    FtqcConfig {
        logical: LogicalCircuit {
            logical_qubits: 100,
            t_count: 1_000_000,
            clifford_count: 10_000_000,
            logical_depth: 100_000,
            spacetime_volume: None,
        },
        code: CodeParams {
            p: 1e-3,
            p_th: 1e-2,
            target_pl: Some(1e-12),
            prefactor_a: 1.0,
            d: None,
            margin_steps: 0,
        },
        factory: FactorySpec::distillation(),
        decoder: DecoderKind::Bposd,
        rho: 0.5,
        cycle_energy_override: None,
    }
}

/// A synthetic circuit program with `layers` alternating gate layers.
pub fn synthetic_circuit(qubits: u64, layers: usize) -> String {
    let mut text = format!("OPENQASM 2.0;\nqreg q[{qubits}];\ncreg c[{qubits}];\n");
    for layer in 0..layers {
        if layer % 2 == 0 {
            for q in 0..qubits {
                text.push_str(&format!("sx q[{q}];\n"));
            }
        } else {
            for q in (0..qubits - 1).step_by(2) {
                text.push_str(&format!("cx q[{q}],q[{}];\n", q + 1));
            }
        }
    }
    text.push_str("measure q -> c;\n");
    text
}
