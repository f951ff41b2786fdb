//! Workload descriptions: the file format, validation, and QEM expansion.
//!
//! A workload document names a technology profile, declares its regime
//! (`nisq` or `ftqc`) and carries exactly one matching payload. NISQ
//! payloads describe a base circuit (inline gate counts, a circuit file, or
//! a VQE shape) plus the error-mitigation stack; FTQC payloads carry the
//! logical circuit and code configuration consumed by the FTQC estimator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{data_to_error, json_to_error};
use crate::error::{positive, Error, Result};
use crate::ftqc::FtqcConfig;
use crate::overhead::ClassicalOverheadSpec;

/// Gate counts of one circuit, keyed by gate name.
///
/// Dynamical-decoupling pulses carry no separate term; include them here
/// as ordinary gate counts before expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateCounts {
    pub counts: BTreeMap<String, u64>,
    pub qubit_count: u64,
    /// Longest per-qubit statement chain; 0 means unknown.
    #[serde(default)]
    pub depth: u64,
}

impl GateCounts {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let total: u128 = self.counts.values().map(|&n| u128::from(n)).sum();
        if total > u128::from(u64::MAX) {
            return Err(Error::invalid("gate counts overflow"));
        }
        if total > 0 && self.qubit_count == 0 {
            return Err(Error::invalid(
                "qubit_count must be >= 1 when gate counts are non-zero",
            ));
        }
        Ok(())
    }
}

/// How ZNE gate folding expands the base circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldMode {
    /// Every gate is folded: N(alpha) = alpha * N.
    Global,
    /// A sub-circuit of `folded_gate_count` gates is folded:
    /// N(alpha) = N + (alpha - 1) * F.
    Partial,
    /// Per-fold totals were measured on the device and are used verbatim.
    Measured,
}

/// Error-mitigation stack: ZNE folds, Pauli-twirl copies, shots and the
/// M3 readout-calibration budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QemStack {
    /// ZNE noise scale factors, odd and strictly increasing.
    pub zne_folds: Vec<u32>,
    /// Pauli-twirl copies per fold.
    pub pt_copies: u32,
    /// Shots per executed circuit.
    pub shots: u64,
    pub fold_mode: FoldMode,
    /// Two-qubit-equivalent gates folded in `partial` mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub folded_gate_count: Option<u64>,
    /// Twirl-expanded gate totals per fold, for `measured` mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_fold_counts: Option<BTreeMap<u32, u64>>,
    /// One-time readout-calibration shots.
    #[serde(default)]
    pub m3_cal_shots: u64,
    /// Evaluations the calibration cost is amortized over.
    #[serde(default = "one")]
    pub m3_amortize_over: u64,
}

fn one() -> u64 {
    1
}

impl QemStack {
    pub fn validate(&self) -> Result<()> {
        if self.zne_folds.is_empty() {
            return Err(Error::invalid("zne_folds must not be empty"));
        }
        let mut prev: Option<u32> = None;
        for &alpha in &self.zne_folds {
            if alpha == 0 || alpha.is_multiple_of(2) {
                return Err(Error::invalid(format!(
                    "zne fold factor {alpha} is not a positive odd integer (gate folding only yields odd factors)"
                )));
            }
            if let Some(p) = prev {
                if alpha <= p {
                    return Err(Error::invalid("zne_folds must be strictly increasing"));
                }
            }
            prev = Some(alpha);
        }
        if self.pt_copies == 0 {
            return Err(Error::invalid("pt_copies must be >= 1"));
        }
        if self.shots == 0 {
            return Err(Error::invalid("shots must be >= 1"));
        }
        if self.m3_amortize_over == 0 {
            return Err(Error::invalid("m3_amortize_over must be >= 1"));
        }
        match self.fold_mode {
            FoldMode::Partial => {
                if self.folded_gate_count.is_none() {
                    return Err(Error::invalid(
                        "partial fold mode requires folded_gate_count",
                    ));
                }
            }
            FoldMode::Measured => {
                let Some(map) = &self.measured_fold_counts else {
                    return Err(Error::invalid(
                        "measured fold mode requires measured_fold_counts",
                    ));
                };
                for alpha in &self.zne_folds {
                    if !map.contains_key(alpha) {
                        return Err(Error::invalid(format!(
                            "measured_fold_counts missing fold {alpha}"
                        )));
                    }
                }
            }
            FoldMode::Global => {}
        }
        Ok(())
    }

    /// Sum of the ZNE fold factors, the idealized multiplier.
    pub fn fold_sum(&self) -> u64 {
        self.zne_folds.iter().map(|&a| u64::from(a)).sum()
    }
}

/// Shape of a VQE workload: ansatz size, measurement grouping, shots and
/// optimizer iterations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VqeSpec {
    pub ansatz_two_qubit_gates: u64,
    pub pauli_groups: u64,
    pub shots_per_circuit: u64,
    pub iterations: u64,
}

impl VqeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.ansatz_two_qubit_gates == 0 {
            return Err(Error::invalid("ansatz_two_qubit_gates must be >= 1"));
        }
        if self.pauli_groups == 0 {
            return Err(Error::invalid("pauli_groups must be >= 1"));
        }
        if self.shots_per_circuit == 0 {
            return Err(Error::invalid("shots_per_circuit must be >= 1"));
        }
        Ok(())
    }
}

/// A compiled logical circuit: qubits, non-Clifford and Clifford gate
/// counts, depth, and optionally the compiled spacetime volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogicalCircuit {
    pub logical_qubits: u64,
    pub t_count: u64,
    pub clifford_count: u64,
    pub logical_depth: u64,
    /// Compiled spacetime volume in cells; overrides the heuristic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacetime_volume: Option<f64>,
}

impl LogicalCircuit {
    pub fn validate(&self) -> Result<()> {
        if self.logical_qubits == 0 {
            return Err(Error::invalid("logical_qubits must be >= 1"));
        }
        if self.logical_depth == 0 {
            return Err(Error::invalid("logical_depth must be >= 1"));
        }
        if self.logical_depth > 0 && self.t_count + self.clifford_count == 0 {
            return Err(Error::invalid(
                "a circuit with depth > 0 needs at least one T or Clifford gate",
            ));
        }
        if let Some(v) = self.spacetime_volume {
            if !positive(v) {
                return Err(Error::invalid("spacetime_volume must be positive"));
            }
            if v < self.logical_qubits as f64 {
                return Err(Error::invalid(
                    "spacetime_volume must cover at least one step of every data patch",
                ));
            }
        }
        Ok(())
    }
}

/// Operating regime of a workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Nisq,
    Ftqc,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Nisq => "nisq",
            Regime::Ftqc => "ftqc",
        }
    }
}

/// NISQ payload: one base-circuit source plus the QEM stack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NisqSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate_counts: Option<GateCounts>,
    /// Path to a circuit-text file, resolved by the caller before estimation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vqe: Option<VqeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qem: Option<QemStack>,
}

impl NisqSection {
    pub fn validate(&self) -> Result<()> {
        let sources = [
            self.gate_counts.is_some(),
            self.circuit_file.is_some(),
            self.vqe.is_some(),
        ]
        .iter()
        .filter(|&&present| present)
        .count();
        if sources != 1 {
            return Err(Error::invalid(
                "nisq payload needs exactly one of gate_counts, circuit_file, vqe",
            ));
        }
        if self.vqe.is_none() && self.qem.is_none() {
            return Err(Error::invalid(
                "nisq payload with gate counts requires a qem stack",
            ));
        }
        if let Some(counts) = &self.gate_counts {
            counts.validate()?;
        }
        if let Some(vqe) = &self.vqe {
            vqe.validate()?;
        }
        if let Some(qem) = &self.qem {
            qem.validate()?;
        }
        Ok(())
    }
}

/// A declarative description of one quantum job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadSpec {
    pub name: String,
    pub regime: Regime,
    /// Technology profile key, resolved against the catalog.
    pub technology: String,
    /// Measured QPU wall time in seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qpu_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nisq: Option<NisqSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ftqc: Option<FtqcConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalOverheadSpec>,
}

impl WorkloadSpec {
    pub fn validate(&self) -> Result<()> {
        match (self.regime, self.nisq.is_some(), self.ftqc.is_some()) {
            (Regime::Nisq, true, false) | (Regime::Ftqc, false, true) => {}
            (regime, nisq, ftqc) => {
                return Err(Error::invalid(format!(
                    "regime/payload mismatch: regime is '{}' but nisq payload {} and ftqc payload {}",
                    regime.name(),
                    if nisq { "is present" } else { "is absent" },
                    if ftqc { "is present" } else { "is absent" },
                )));
            }
        }
        if let Some(t) = self.qpu_seconds {
            if !positive(t) {
                return Err(Error::invalid("qpu_seconds must be positive"));
            }
        }
        if let Some(nisq) = &self.nisq {
            nisq.validate()?;
        }
        if let Some(ftqc) = &self.ftqc {
            ftqc.validate()?;
        }
        if let Some(classical) = &self.classical {
            classical.validate()?;
        }
        Ok(())
    }
}

/// Parse and validate a workload document.
pub fn parse_workload(text: &str) -> Result<WorkloadSpec> {
    let spec: WorkloadSpec = serde_json::from_str(text).map_err(|err| {
        if matches!(
            err.classify(),
            serde_json::error::Category::Syntax | serde_json::error::Category::Eof
        ) {
            json_to_error(err)
        } else {
            data_to_error(err)
        }
    })?;
    spec.validate()?;
    Ok(spec)
}

/// Render a workload as its canonical document form.
///
/// `parse_workload(render_workload(spec))` returns a spec equal to the
/// input.
pub fn render_workload(spec: &WorkloadSpec) -> String {
    serde_json::to_string_pretty(spec).expect("workload specs serialize")
}

/// Expand a base circuit through the QEM stack into per-fold gate totals.
///
/// Returns one `(fold_factor, expanded_total)` per ZNE fold:
/// global mode folds every gate (`P * alpha * N`), partial mode folds a
/// sub-circuit of `F` gates (`P * (N + (alpha - 1) * F)`), measured mode
/// returns the recorded totals verbatim (they already include the twirl
/// copies).
pub fn expand_qem(base: &GateCounts, qem: &QemStack) -> Result<Vec<(u32, u64)>> {
    base.validate()?;
    qem.validate()?;
    let total = base.total();
    if total == 0 {
        return Err(Error::invalid("base circuit has no gates to expand"));
    }
    let copies = u64::from(qem.pt_copies);
    let mul = |a: u64, b: u64| -> Result<u64> {
        a.checked_mul(b)
            .ok_or_else(|| Error::invalid("expanded gate count overflows"))
    };
    let mut expanded = Vec::with_capacity(qem.zne_folds.len());
    for &alpha in &qem.zne_folds {
        let count = match qem.fold_mode {
            FoldMode::Global => mul(mul(copies, u64::from(alpha))?, total)?,
            FoldMode::Partial => {
                let folded = qem.folded_gate_count.expect("validated");
                if folded > total {
                    return Err(Error::invalid(format!(
                        "folded_gate_count {folded} exceeds the base gate total {total}"
                    )));
                }
                let grown = total
                    .checked_add(mul(u64::from(alpha - 1), folded)?)
                    .ok_or_else(|| Error::invalid("expanded gate count overflows"))?;
                mul(copies, grown)?
            }
            FoldMode::Measured => {
                let map = qem.measured_fold_counts.as_ref().expect("validated");
                let count = *map
                    .get(&alpha)
                    .ok_or_else(|| Error::invalid(format!("measured_fold_counts missing fold {alpha}")))?;
                if count < total {
                    return Err(Error::invalid(format!(
                        "measured fold total {count} at fold {alpha} is below the base gate total {total}"
                    )));
                }
                count
            }
        };
        expanded.push((alpha, count));
    }
    Ok(expanded)
}

/// Return a copy of the workload with one numeric field replaced.
///
/// `path` is a dot-separated route through the document, e.g.
/// `ftqc.logical.t_count` or `nisq.qem.shots`. The target must exist and be
/// numeric; integer fields accept only integral values.
pub fn with_numeric_field(spec: &WorkloadSpec, path: &str, value: f64) -> Result<WorkloadSpec> {
    let mut doc = serde_json::to_value(spec).expect("workload specs serialize");
    let mut cursor = &mut doc;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(Error::invalid(format!("unknown parameter path '{path}'")));
    }
    for segment in &segments {
        cursor = cursor
            .as_object_mut()
            .and_then(|map| map.get_mut(*segment))
            .ok_or_else(|| Error::invalid(format!("unknown parameter path '{path}'")))?;
    }
    let target = cursor
        .as_number()
        .ok_or_else(|| Error::invalid(format!("parameter path '{path}' is not numeric")))?
        .clone();
    *cursor = if target.is_f64() {
        serde_json::Number::from_f64(value)
            .map(serde_json::Value::Number)
            .ok_or_else(|| Error::invalid("replacement value must be finite"))?
    } else if value.fract() == 0.0 && value >= 0.0 && value <= u64::MAX as f64 {
        serde_json::Value::Number(serde_json::Number::from(value as u64))
    } else {
        return Err(Error::invalid(format!(
            "parameter path '{path}' holds an integer; {value} is not a non-negative integer"
        )));
    };
    let spec: WorkloadSpec = serde_json::from_value(doc).map_err(data_to_error)?;
    spec.validate()?;
    Ok(spec)
}

/// Convenience constructor used by tests and benches.
pub fn gate_counts(pairs: &[(&str, u64)], qubit_count: u64, depth: u64) -> GateCounts {
    GateCounts {
        counts: pairs
            .iter()
            .map(|(name, count)| (name.to_string(), *count))
            .collect(),
        qubit_count,
        depth,
    }
}
