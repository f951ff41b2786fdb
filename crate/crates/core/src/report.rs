//! Report assembly and rendering: runs the regime estimator over a
//! workload, composes the total, and renders either a human table or the
//! canonical machine document.

use serde::{Deserialize, Serialize};

use crate::catalog::{data_to_error, json_to_error, DecoderTable, ProfileCatalog, TechnologyProfile};
use crate::circuit::{count_gates, UnknownGatePolicy};
use crate::error::{Error, Result};
use crate::ftqc::{ftqc_exec_energy, FtqcBreakdown};
use crate::nisq::{nisq_exec_energy, nisq_power, vqe_breakdown, NisqBreakdown};
use crate::overhead::{classical_energy, maintenance_energy, total_energy};
use crate::workload::{Regime, WorkloadSpec};

/// Regime-specific execution breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecBreakdown {
    Nisq(NisqBreakdown),
    Ftqc(FtqcBreakdown),
}

impl ExecBreakdown {
    pub fn total_exec_joules(&self) -> f64 {
        match self {
            ExecBreakdown::Nisq(b) => b.total_exec_joules,
            ExecBreakdown::Ftqc(b) => b.total_exec_joules,
        }
    }
}

/// How maintenance energy enters the total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaintenancePolicy {
    /// Count it without comment.
    Include,
    /// Drop it from the total.
    Exclude,
    /// Count it, and advise when the profile also folds cooling into its
    /// gate energies.
    #[default]
    Flag,
}

/// Output form of a rendered report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Machine,
}

/// Estimation knobs beyond the workload itself.
#[derive(Debug, Clone, Default)]
pub struct EstimateOptions {
    pub maintenance: MaintenancePolicy,
}

/// The resolved inputs echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputsEcho {
    pub profile: TechnologyProfile,
    pub workload: WorkloadSpec,
    pub maintenance: MaintenancePolicy,
}

/// A full estimation result: every term of the total, itemized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub workload: String,
    pub regime: Regime,
    pub technology: String,
    pub e_sys_joules: f64,
    pub e_cls_joules: f64,
    pub exec: ExecBreakdown,
    pub e_tot_joules: f64,
    /// Wall time the maintenance and power figures refer to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_seconds: Option<f64>,
    /// Execution energy over the duration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_watts: Option<f64>,
    pub advisories: Vec<String>,
    pub inputs: InputsEcho,
}

/// Replace a `circuit_file` reference with gate counts taken from the
/// file's text. The caller reads the file; this keeps I/O at the edge.
pub fn resolve_circuit_text(
    spec: &WorkloadSpec,
    circuit_text: &str,
    policy: UnknownGatePolicy,
) -> Result<WorkloadSpec> {
    let mut resolved = spec.clone();
    let Some(nisq) = resolved.nisq.as_mut() else {
        return Err(Error::invalid("workload has no nisq payload to resolve"));
    };
    if nisq.circuit_file.is_none() {
        return Err(Error::invalid("workload does not reference a circuit file"));
    }
    nisq.gate_counts = Some(count_gates(circuit_text, policy)?);
    nisq.circuit_file = None;
    resolved.validate()?;
    Ok(resolved)
}

/// Run the estimation pipeline for one workload.
pub fn estimate(
    workload: &WorkloadSpec,
    catalog: &ProfileCatalog,
    decoders: &DecoderTable,
    options: &EstimateOptions,
) -> Result<EnergyReport> {
    workload.validate()?;
    let profile = catalog.get(&workload.technology)?;
    let mut advisories = Vec::new();

    let mut nisq_breakdown = None;
    let mut ftqc_breakdown = None;
    let duration_seconds;

    match workload.regime {
        Regime::Nisq => {
            let section = workload.nisq.as_ref().expect("validated");
            if section.circuit_file.is_some() {
                return Err(Error::invalid(
                    "circuit_file has not been resolved to gate counts",
                ));
            }
            let breakdown = if let Some(vqe) = &section.vqe {
                vqe_breakdown(vqe, profile, section.qem.as_ref())?
            } else {
                let counts = section.gate_counts.as_ref().expect("validated");
                let qem = section.qem.as_ref().expect("validated");
                nisq_exec_energy(counts, qem, profile)?
            };
            duration_seconds = workload.qpu_seconds;
            if duration_seconds.is_none() {
                advisories.push(
                    "no qpu_seconds supplied; maintenance energy not accrued and power not derived"
                        .to_string(),
                );
            }
            nisq_breakdown = Some(breakdown);
        }
        Regime::Ftqc => {
            let config = workload.ftqc.as_ref().expect("validated");
            let breakdown = ftqc_exec_energy(config, profile, decoders)?;
            if workload.qpu_seconds.is_some() {
                advisories.push(
                    "qpu_seconds ignored for ftqc workloads; the model wall time is used"
                        .to_string(),
                );
            }
            duration_seconds = Some(breakdown.wall_seconds);
            ftqc_breakdown = Some(breakdown);
        }
    }

    let wall = duration_seconds.unwrap_or(0.0);
    let maintenance = maintenance_energy(profile, wall)?;
    let e_sys_joules = match options.maintenance {
        MaintenancePolicy::Include => maintenance.joules,
        MaintenancePolicy::Exclude => {
            if maintenance.joules > 0.0 {
                advisories.push("maintenance energy excluded by policy".to_string());
            }
            0.0
        }
        MaintenancePolicy::Flag => {
            if maintenance.double_count_advisory {
                advisories.push(
                    "maintenance energy may double-count cooling absorbed in the profile's gate energies"
                        .to_string(),
                );
            }
            maintenance.joules
        }
    };

    let e_cls_joules = match &workload.classical {
        Some(spec) => {
            if spec.counter_file.is_some() {
                return Err(Error::invalid(
                    "classical.counter_file has not been resolved to power series",
                ));
            }
            classical_energy(spec)?
        }
        None => 0.0,
    };

    let total = total_energy(e_sys_joules, e_cls_joules, nisq_breakdown, ftqc_breakdown)?;
    let power_watts = match duration_seconds {
        Some(t) if t > 0.0 => Some(nisq_power(total.exec.total_exec_joules(), t)?),
        _ => None,
    };

    Ok(EnergyReport {
        workload: workload.name.clone(),
        regime: workload.regime,
        technology: workload.technology.clone(),
        e_sys_joules: total.e_sys_joules,
        e_cls_joules: total.e_cls_joules,
        exec: total.exec,
        e_tot_joules: total.e_tot_joules,
        duration_seconds,
        power_watts,
        advisories,
        inputs: InputsEcho {
            profile: profile.clone(),
            workload: workload.clone(),
            maintenance: options.maintenance,
        },
    })
}

/// The largest itemized term of the report.
pub fn dominant_term(report: &EnergyReport) -> &'static str {
    let mut terms: Vec<(&'static str, f64)> = match &report.exec {
        ExecBreakdown::Nisq(b) => vec![("sampling", b.total_exec_joules)],
        ExecBreakdown::Ftqc(b) => vec![
            ("lattice", b.lattice_energy_joules),
            ("magic", b.magic_energy_joules),
            ("decoder", b.e_dec_joules),
        ],
    };
    terms.push(("maintenance", report.e_sys_joules));
    terms.push(("classical", report.e_cls_joules));
    let mut best = terms[0];
    for term in &terms[1..] {
        if term.1 > best.1 {
            best = *term;
        }
    }
    best.0
}

/// Render a report. The machine form is the canonical serialization:
/// byte-identical for identical inputs and parseable with
/// [`parse_report`]. The table form mirrors the per-fold row structure for
/// NISQ and the three-term ledger for FTQC.
pub fn render_report(report: &EnergyReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Machine => {
            serde_json::to_string_pretty(report).expect("reports serialize")
        }
        ReportFormat::Table => render_table(report),
    }
}

/// Parse a machine-format report.
pub fn parse_report(text: &str) -> Result<EnergyReport> {
    serde_json::from_str(text).map_err(|err| {
        if matches!(
            err.classify(),
            serde_json::error::Category::Syntax | serde_json::error::Category::Eof
        ) {
            json_to_error(err)
        } else {
            data_to_error(err)
        }
    })
}

fn render_table(report: &EnergyReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(&mut out, format!("Workload   {}", report.workload));
    push(
        &mut out,
        format!("Regime     {} ({})", report.regime.name(), report.technology),
    );
    push(&mut out, String::new());

    match &report.exec {
        ExecBreakdown::Nisq(b) => {
            let folds: Vec<u32> = b.per_fold_energy_joules.keys().copied().collect();
            push(
                &mut out,
                row16("ZNE fold", folds.iter().map(|a| a.to_string())),
            );
            if !b.per_fold_gate_counts.is_empty() {
                push(
                    &mut out,
                    row16(
                        "Gates (with PT)",
                        folds
                            .iter()
                            .map(|a| fmt_grouped(b.per_fold_gate_counts[a] as f64, 0)),
                    ),
                );
            }
            push(
                &mut out,
                row16(
                    "Energy (kJ)",
                    folds
                        .iter()
                        .map(|a| fmt_grouped(b.per_fold_energy_joules[a] / 1e3, 3)),
                ),
            );
            push(&mut out, String::new());
            if b.m3_calibration_joules > 0.0 {
                push(
                    &mut out,
                    ledger("M3 calibration", human_joules(b.m3_calibration_joules)),
                );
            }
            // Exec total stays in kJ so it lines up with the per-fold rows.
            push(
                &mut out,
                ledger(
                    "Exec energy (E_nisq)",
                    format!("{} kJ", fmt_grouped(b.total_exec_joules / 1e3, 3)),
                ),
            );
        }
        ExecBreakdown::Ftqc(b) => {
            push(&mut out, ledger("Code distance", b.distance.to_string()));
            push(
                &mut out,
                ledger("Patches (data+routing)", fmt_grouped(b.n_patches as f64, 0)),
            );
            push(
                &mut out,
                ledger("Physical qubits", fmt_grouped(b.physical_qubits as f64, 0)),
            );
            push(
                &mut out,
                ledger(
                    "Spacetime volume",
                    format!("{} cells", fmt_grouped(b.v_ls_cells, 0)),
                ),
            );
            push(&mut out, ledger("Cycle energy", human_joules(b.e_cyc_joules)));
            push(
                &mut out,
                ledger("Magic state unit", human_joules(b.e_ms_joules)),
            );
            push(
                &mut out,
                ledger("Stall factor", format!("{:.3}", b.stall_factor)),
            );
            push(&mut out, ledger("Wall time", human_seconds(b.wall_seconds)));
            push(&mut out, String::new());
            push(
                &mut out,
                ledger("Lattice (V_ls x E_cyc)", human_joules(b.lattice_energy_joules)),
            );
            push(
                &mut out,
                ledger("Magic (N_T x E_ms)", human_joules(b.magic_energy_joules)),
            );
            push(&mut out, ledger("Decoder (E_dec)", human_joules(b.e_dec_joules)));
            push(
                &mut out,
                ledger("Exec energy (E_ftqc)", human_joules(b.total_exec_joules)),
            );
        }
    }

    push(
        &mut out,
        ledger("Maintenance (E_sys)", human_joules(report.e_sys_joules)),
    );
    push(
        &mut out,
        ledger("Classical (E_cls)", human_joules(report.e_cls_joules)),
    );
    push(&mut out, ledger("Total (E_tot)", human_joules(report.e_tot_joules)));
    if let Some(w) = report.power_watts {
        push(&mut out, ledger("Power", human_watts(w)));
    }
    for advisory in &report.advisories {
        push(&mut out, format!("note: {advisory}"));
    }
    out
}

fn row16(label: &str, cells: impl Iterator<Item = String>) -> String {
    let mut line = format!("{label:<24}");
    for cell in cells {
        line.push_str(&format!("{cell:>16}"));
    }
    line
}

fn ledger(label: &str, value: String) -> String {
    format!("{label:<24}{value:>20}")
}

/// Group the integer digits of a non-negative value in threes and keep up
/// to `decimals` fractional digits, trimming trailing zeros.
pub fn fmt_grouped(value: f64, decimals: usize) -> String {
    let formatted = format!("{value:.decimals$}");
    let (sign, rest) = match formatted.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", formatted.as_str()),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f.trim_end_matches('0')),
        None => (rest, ""),
    };
    let mut grouped = String::new();
    for (idx, ch) in int_part.chars().enumerate() {
        if idx > 0 && (int_part.len() - idx) % 3 == 0 {
            grouped.push(',');
        }
        grouped.push(ch);
    }
    if frac_part.is_empty() {
        format!("{sign}{grouped}")
    } else {
        format!("{sign}{grouped}.{frac_part}")
    }
}

/// Humanize joules: J, kJ, MJ or GJ by magnitude.
pub fn human_joules(joules: f64) -> String {
    let magnitude = joules.abs();
    let (scaled, unit) = if magnitude >= 1e9 {
        (joules / 1e9, "GJ")
    } else if magnitude >= 1e6 {
        (joules / 1e6, "MJ")
    } else if magnitude >= 1e3 {
        (joules / 1e3, "kJ")
    } else {
        (joules, "J")
    };
    format!("{} {}", fmt_grouped(scaled, 3), unit)
}

/// Humanize watts: W, kW or MW by magnitude, three decimals.
pub fn human_watts(watts: f64) -> String {
    let magnitude = watts.abs();
    let (scaled, unit) = if magnitude >= 1e6 {
        (watts / 1e6, "MW")
    } else if magnitude >= 1e3 {
        (watts / 1e3, "kW")
    } else {
        (watts, "W")
    };
    format!("{} {}", fmt_grouped(scaled, 3), unit)
}

/// Humanize seconds: s, ms, us or ns by magnitude.
pub fn human_seconds(seconds: f64) -> String {
    let magnitude = seconds.abs();
    let (scaled, unit) = if magnitude >= 1.0 || magnitude == 0.0 {
        (seconds, "s")
    } else if magnitude >= 1e-3 {
        (seconds * 1e3, "ms")
    } else if magnitude >= 1e-6 {
        (seconds * 1e6, "us")
    } else {
        (seconds * 1e9, "ns")
    };
    format!("{} {}", fmt_grouped(scaled, 3), unit)
}
