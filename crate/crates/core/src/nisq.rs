//! NISQ execution energy: bare gate energy, QEM sampling multipliers,
//! the VQE cost model, M3 amortization and derived power.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::catalog::{GateClass, TechnologyProfile};
use crate::error::{positive, Error, Result};
use crate::workload::{expand_qem, GateCounts, QemStack, VqeSpec};

/// Itemized NISQ execution energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NisqBreakdown {
    /// Twirl-expanded gate total per ZNE fold.
    pub per_fold_gate_counts: BTreeMap<u32, u64>,
    /// Energy per ZNE fold in joules, shots included.
    pub per_fold_energy_joules: BTreeMap<u32, f64>,
    /// The no-mitigation reference: one fold, one copy, same shots.
    pub baseline_shot_energy_joules: f64,
    /// Extra joules attributable to the QEM stack.
    pub qem_overhead_joules: f64,
    /// Amortized M3 readout-calibration energy.
    pub m3_calibration_joules: f64,
    pub total_exec_joules: f64,
}

/// Bare per-circuit physical-gate energy: the sum over gate types of
/// per-gate energy times count.
pub fn gate_energy(counts: &GateCounts, profile: &TechnologyProfile) -> Result<f64> {
    let mut joules = 0.0;
    for (name, &count) in &counts.counts {
        if count == 0 {
            continue;
        }
        joules += profile.energy_for_gate(name)? * count as f64;
    }
    Ok(joules)
}

/// Count-weighted per-gate energy of a circuit. For single-class circuits
/// this is exactly the class energy.
pub fn effective_gate_energy(counts: &GateCounts, profile: &TechnologyProfile) -> Result<f64> {
    let total = counts.total();
    if total == 0 {
        return Ok(0.0);
    }
    let mut classes = counts
        .counts
        .iter()
        .filter(|(_, &count)| count > 0)
        .map(|(name, _)| profile.class_for(name));
    let first = classes.next().expect("total > 0");
    if classes.all(|class| class == first) {
        return profile.class_energy(first).ok_or_else(|| {
            Error::MissingEnergy(format!(
                "class '{}' has no energy in profile '{}'",
                first.name(),
                profile.key
            ))
        });
    }
    Ok(gate_energy(counts, profile)? / total as f64)
}

/// NISQ execution energy under the QEM stack.
///
/// Each fold contributes `expanded_gates * shots * E_g`; measured fold
/// totals are used verbatim (they already include the twirl copies), so a
/// measured campaign reproduces its recorded per-fold energies cell by
/// cell. The M3 calibration term prices `m3_cal_shots` readout shots over
/// every measured qubit, amortized over `m3_amortize_over` evaluations.
pub fn nisq_exec_energy(
    base: &GateCounts,
    qem: &QemStack,
    profile: &TechnologyProfile,
) -> Result<NisqBreakdown> {
    let expanded = expand_qem(base, qem)?;
    let e_gate = effective_gate_energy(base, profile)?;
    let shots = qem.shots as f64;

    let mut per_fold_gate_counts = BTreeMap::new();
    let mut per_fold_energy_joules = BTreeMap::new();
    let mut exec = 0.0;
    for (alpha, count) in expanded {
        let joules = count as f64 * shots * e_gate;
        per_fold_gate_counts.insert(alpha, count);
        per_fold_energy_joules.insert(alpha, joules);
        exec += joules;
    }

    let m3_calibration_joules = if qem.m3_cal_shots == 0 {
        0.0
    } else {
        let per_meas = profile.class_energy(GateClass::Measure).ok_or_else(|| {
            Error::MissingEnergy(format!(
                "class 'measure' has no energy in profile '{}' (needed for M3 calibration)",
                profile.key
            ))
        })?;
        let per_shot = per_meas * base.qubit_count as f64;
        m3_amortized_energy(qem.m3_cal_shots, per_shot, qem.m3_amortize_over)?
    };

    let baseline_shot_energy_joules = base.total() as f64 * shots * e_gate;
    let total_exec_joules = exec + m3_calibration_joules;
    let qem_overhead_joules =
        (total_exec_joules - baseline_shot_energy_joules - m3_calibration_joules).max(0.0);

    Ok(NisqBreakdown {
        per_fold_gate_counts,
        per_fold_energy_joules,
        baseline_shot_energy_joules,
        qem_overhead_joules,
        m3_calibration_joules,
        total_exec_joules,
    })
}

/// Amortized readout-calibration energy.
pub fn m3_amortized_energy(
    cal_shots: u64,
    per_shot_energy_joules: f64,
    amortize_over: u64,
) -> Result<f64> {
    if amortize_over == 0 {
        return Err(Error::invalid("m3_amortize_over must be >= 1"));
    }
    Ok(cal_shots as f64 * per_shot_energy_joules / amortize_over as f64)
}

/// VQE gate cost: ansatz gates x Pauli groups x shots x iterations x E_g,
/// multiplied by the idealized QEM factor `(sum of folds) * P` when a stack
/// is present. Partial-fold VQE campaigns should route through
/// [`nisq_exec_energy`] instead.
pub fn vqe_energy(
    spec: &VqeSpec,
    profile: &TechnologyProfile,
    qem: Option<&QemStack>,
) -> Result<f64> {
    spec.validate()?;
    let e_gate = profile.class_energy(GateClass::TwoQubit).ok_or_else(|| {
        Error::MissingEnergy(format!(
            "class '2q' has no energy in profile '{}'",
            profile.key
        ))
    })?;
    let bare = spec.ansatz_two_qubit_gates as f64
        * spec.pauli_groups as f64
        * spec.shots_per_circuit as f64
        * spec.iterations as f64
        * e_gate;
    match qem {
        None => Ok(bare),
        Some(stack) => {
            stack.validate()?;
            Ok(bare * stack.fold_sum() as f64 * f64::from(stack.pt_copies))
        }
    }
}

/// VQE energy itemized the same way as a gate-count workload.
pub fn vqe_breakdown(
    spec: &VqeSpec,
    profile: &TechnologyProfile,
    qem: Option<&QemStack>,
) -> Result<NisqBreakdown> {
    let baseline = vqe_energy(spec, profile, None)?;
    let mut per_fold_energy_joules = BTreeMap::new();
    let mut total = 0.0;
    match qem {
        None => {
            per_fold_energy_joules.insert(1, baseline);
            total += baseline;
        }
        Some(stack) => {
            stack.validate()?;
            for &alpha in &stack.zne_folds {
                let joules = baseline * f64::from(alpha) * f64::from(stack.pt_copies);
                per_fold_energy_joules.insert(alpha, joules);
                total += joules;
            }
        }
    }
    Ok(NisqBreakdown {
        per_fold_gate_counts: BTreeMap::new(),
        per_fold_energy_joules,
        baseline_shot_energy_joules: baseline,
        qem_overhead_joules: (total - baseline).max(0.0),
        m3_calibration_joules: 0.0,
        total_exec_joules: total,
    })
}

/// Average power over the measured QPU time.
pub fn nisq_power(total_energy_joules: f64, qpu_seconds: f64) -> Result<f64> {
    if !positive(qpu_seconds) {
        return Err(Error::invalid("qpu_seconds must be positive"));
    }
    Ok(total_energy_joules / qpu_seconds)
}

/// Optional duration model: critical path times the slowest gate, times
/// the number of executed shots. Disabled by default in reports because
/// per-gate durations are rarely published; callers opt in explicitly.
pub fn estimated_qpu_seconds(
    depth: u64,
    max_gate_duration_seconds: f64,
    executed_shots: u64,
) -> f64 {
    depth as f64 * max_gate_duration_seconds * executed_shots as f64
}
