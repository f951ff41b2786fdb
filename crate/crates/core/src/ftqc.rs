//! FTQC execution energy: code-distance solving, surface-code sizing,
//! spacetime volume, cycle and magic-state energy, decoder energy with
//! backlog stall, and their composition.

use serde::{Deserialize, Serialize};

use crate::catalog::{decoder_lookup, DecoderEntry, DecoderKind, DecoderTable, GateClass, TechnologyProfile};
use crate::error::{non_negative, positive, unit_open, Error, Result};
use crate::workload::LogicalCircuit;

/// Relative slack when comparing a computed logical error rate against the
/// target, so that decade-aligned targets resolve the way exact arithmetic
/// would.
const TARGET_SLACK: f64 = 1e-9;

/// Default distillation magic-state cost in cycle-energy units, the
/// midpoint of the published 1e3..1e4 band on a log scale.
pub const DISTILLATION_RATIO_TO_CYCLE: f64 = 3162.2776601683795;
/// Cultivation costs one order of magnitude less than distillation.
pub const CULTIVATION_RATIO_TO_CYCLE: f64 = DISTILLATION_RATIO_TO_CYCLE / 10.0;
/// Default distillation factory cost in patch-rounds per output T state.
pub const DISTILLATION_PATCH_CYCLES_PER_T: f64 = 810.0;
/// Cultivation patch-rounds per output T state.
pub const CULTIVATION_PATCH_CYCLES_PER_T: f64 = DISTILLATION_PATCH_CYCLES_PER_T / 10.0;

/// Surface-code parameters: physical error rate, threshold, target logical
/// error rate and the solved or supplied distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeParams {
    /// Physical error rate, in (0, 1).
    pub p: f64,
    /// Code threshold, in (0, 1).
    #[serde(default = "default_p_th")]
    pub p_th: f64,
    /// Target logical error rate; required unless `d` is supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_pl: Option<f64>,
    /// Prefactor of the logical error-rate scaling law.
    #[serde(default = "default_prefactor")]
    pub prefactor_a: f64,
    /// Code distance; solved from the target when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    /// Safety margin added to a solved distance, in odd steps of 2.
    #[serde(default)]
    pub margin_steps: u32,
}

fn default_p_th() -> f64 {
    0.01
}

fn default_prefactor() -> f64 {
    1.0
}

impl CodeParams {
    pub fn validate(&self) -> Result<()> {
        if !unit_open(self.p) {
            return Err(Error::invalid("code.p must lie in (0, 1)"));
        }
        if !unit_open(self.p_th) {
            return Err(Error::invalid("code.p_th must lie in (0, 1)"));
        }
        if let Some(target) = self.target_pl {
            if !unit_open(target) {
                return Err(Error::invalid("code.target_pl must lie in (0, 1)"));
            }
        }
        if !positive(self.prefactor_a) {
            return Err(Error::invalid("code.prefactor_a must be positive"));
        }
        match self.d {
            Some(d) if d < 3 || d.is_multiple_of(2) => {
                Err(Error::invalid("code.d must be an odd integer >= 3"))
            }
            None if self.target_pl.is_none() => Err(Error::invalid(
                "code needs target_pl when d is not supplied",
            )),
            _ => Ok(()),
        }
    }

    /// The supplied distance, or the smallest odd distance meeting the
    /// target plus the configured safety margin.
    pub fn resolve_distance(&self) -> Result<u32> {
        match self.d {
            Some(d) => Ok(d),
            None => {
                let target = self.target_pl.ok_or_else(|| {
                    Error::invalid("code needs target_pl when d is not supplied")
                })?;
                let solved = solve_distance(self.p, self.p_th, target, self.prefactor_a)?;
                Ok(solved + 2 * self.margin_steps)
            }
        }
    }
}

/// Magic-state preparation protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactoryProtocol {
    Distillation,
    Cultivation,
}

/// How the per-T-state energy is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FactoryCostMode {
    /// E_ms as a multiple of the spacetime-cell energy.
    #[default]
    Ratio,
    /// E_ms as factory patch-rounds at the factory distance.
    PatchCycles,
}

/// Magic-state factory configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorySpec {
    pub protocol: FactoryProtocol,
    #[serde(default)]
    pub cost_mode: FactoryCostMode,
    /// Factory code distance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_f: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patch_cycles_per_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_to_cycle: Option<f64>,
    /// Output magic-state error rate, informational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_error: Option<f64>,
}

impl FactorySpec {
    pub fn distillation() -> Self {
        FactorySpec {
            protocol: FactoryProtocol::Distillation,
            cost_mode: FactoryCostMode::Ratio,
            d_f: None,
            patch_cycles_per_t: None,
            ratio_to_cycle: None,
            output_error: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d_f = self.factory_distance();
        if d_f < 3 || d_f.is_multiple_of(2) {
            return Err(Error::invalid("factory.d_f must be an odd integer >= 3"));
        }
        if !positive(self.patch_cycles()) {
            return Err(Error::invalid("factory.patch_cycles_per_t must be positive"));
        }
        if !positive(self.cycle_ratio()) {
            return Err(Error::invalid("factory.ratio_to_cycle must be positive"));
        }
        if let Some(err) = self.output_error {
            if !unit_open(err) {
                return Err(Error::invalid("factory.output_error must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    pub fn factory_distance(&self) -> u32 {
        self.d_f.unwrap_or(15)
    }

    pub fn patch_cycles(&self) -> f64 {
        self.patch_cycles_per_t.unwrap_or(match self.protocol {
            FactoryProtocol::Distillation => DISTILLATION_PATCH_CYCLES_PER_T,
            FactoryProtocol::Cultivation => CULTIVATION_PATCH_CYCLES_PER_T,
        })
    }

    pub fn cycle_ratio(&self) -> f64 {
        self.ratio_to_cycle.unwrap_or(match self.protocol {
            FactoryProtocol::Distillation => DISTILLATION_RATIO_TO_CYCLE,
            FactoryProtocol::Cultivation => CULTIVATION_RATIO_TO_CYCLE,
        })
    }

    pub fn output_error_rate(&self) -> f64 {
        self.output_error.unwrap_or(1e-8)
    }
}

/// FTQC section of a workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FtqcConfig {
    pub logical: LogicalCircuit,
    pub code: CodeParams,
    #[serde(default = "FactorySpec::distillation")]
    pub factory: FactorySpec,
    pub decoder: DecoderKind,
    /// Routing/ancilla patch overhead as a fraction of the data patches.
    #[serde(default = "default_rho")]
    pub rho: f64,
    /// Direct spacetime-cell energy, replacing the mechanistic model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_energy_override: Option<f64>,
}

fn default_rho() -> f64 {
    0.5
}

impl FtqcConfig {
    pub fn validate(&self) -> Result<()> {
        self.logical.validate()?;
        self.code.validate()?;
        self.factory.validate()?;
        if !non_negative(self.rho) {
            return Err(Error::invalid("rho must be finite and >= 0"));
        }
        if let Some(e) = self.cycle_energy_override {
            if !positive(e) {
                return Err(Error::invalid("cycle_energy_override must be positive"));
            }
        }
        Ok(())
    }
}

/// Physical footprint of the encoded computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceLayout {
    pub d: u32,
    pub physical_qubits_per_patch: u64,
    /// Data plus routing patches.
    pub n_patches: u64,
    pub routing_overhead_rho: f64,
}

impl SurfaceLayout {
    pub fn new(d: u32, logical_qubits: u64, rho: f64) -> Self {
        SurfaceLayout {
            d,
            physical_qubits_per_patch: physical_qubits_per_logical(d),
            n_patches: ((1.0 + rho) * logical_qubits as f64).ceil() as u64,
            routing_overhead_rho: rho,
        }
    }

    pub fn physical_qubits(&self) -> u64 {
        self.n_patches * self.physical_qubits_per_patch
    }
}

/// Itemized FTQC execution energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FtqcBreakdown {
    pub distance: u32,
    pub n_patches: u64,
    pub physical_qubits: u64,
    pub v_ls_cells: f64,
    pub e_cyc_joules: f64,
    /// Spacetime volume times cell energy.
    pub lattice_energy_joules: f64,
    /// Energy per magic state.
    pub e_ms_joules: f64,
    /// T count times per-state energy.
    pub magic_energy_joules: f64,
    pub e_dec_joules: f64,
    pub stall_factor: f64,
    pub wall_seconds: f64,
    pub total_exec_joules: f64,
}

/// Logical error rate of the surface code:
/// `A * (p / p_th) ^ ((d + 1) / 2)`.
pub fn logical_error_rate(p: f64, p_th: f64, d: u32, prefactor_a: f64) -> Result<f64> {
    if !positive(p) || !unit_open(p_th) {
        return Err(Error::invalid("p and p_th must be positive, p_th < 1"));
    }
    if p >= p_th {
        return Err(Error::AboveThreshold { p, p_th });
    }
    if d == 0 || d.is_multiple_of(2) {
        return Err(Error::invalid("d must be a positive odd integer"));
    }
    let exponent = d.div_ceil(2) as i32;
    Ok(prefactor_a * (p / p_th).powi(exponent))
}

/// Whether a computed logical error rate meets the target, with enough
/// slack to absorb floating-point rounding of decade-aligned rates.
pub fn meets_target(p_l: f64, target_pl: f64) -> bool {
    p_l <= target_pl * (1.0 + TARGET_SLACK)
}

/// Smallest odd distance `d >= 3` whose logical error rate meets the
/// target.
pub fn solve_distance(p: f64, p_th: f64, target_pl: f64, prefactor_a: f64) -> Result<u32> {
    if !unit_open(target_pl) {
        return Err(Error::invalid("target_pl must lie in (0, 1)"));
    }
    let mut d = 3;
    loop {
        let p_l = logical_error_rate(p, p_th, d, prefactor_a)?;
        if meets_target(p_l, target_pl) {
            return Ok(d);
        }
        d += 2;
        if d > 99_999 {
            return Err(Error::invalid(
                "no distance below 100000 meets the target logical error rate",
            ));
        }
    }
}

/// Physical qubits per logical qubit at distance `d`: `d^2` data qubits
/// plus `d^2 - 1` syndrome ancillas.
pub fn physical_qubits_per_logical(d: u32) -> u64 {
    let d = u64::from(d);
    2 * d * d - 1
}

/// Spacetime volume of the compiled program in cells: the compiled
/// override when present, otherwise patches (data plus routing) times
/// logical depth.
pub fn spacetime_volume(logical: &LogicalCircuit, rho: f64) -> f64 {
    if let Some(v) = logical.spacetime_volume {
        return v;
    }
    ((1.0 + rho) * logical.logical_qubits as f64).ceil() * logical.logical_depth as f64
}

/// Energy of one stabilizer round over one patch: every stabilizer runs
/// four two-qubit gates plus an ancilla measure and reset.
pub fn stabilizer_round_energy(d: u32, profile: &TechnologyProfile) -> Result<f64> {
    let class = |c: GateClass| {
        profile.class_energy(c).ok_or_else(|| {
            Error::MissingEnergy(format!(
                "class '{}' has no energy in profile '{}' (needed for the cycle-energy model)",
                c.name(),
                profile.key
            ))
        })
    };
    let e_2q = class(GateClass::TwoQubit)?;
    let e_meas = class(GateClass::Measure)?;
    let e_reset = class(GateClass::Reset)?;
    let d = d as f64;
    Ok((d * d - 1.0) * (4.0 * e_2q + e_meas + e_reset))
}

/// Energy of one spacetime cell: one logical time step spans `d` code
/// cycles of one patch.
pub fn cycle_energy(d: u32, profile: &TechnologyProfile) -> Result<f64> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::invalid("d must be an odd integer >= 3"));
    }
    Ok(f64::from(d) * stabilizer_round_energy(d, profile)?)
}

/// Energy per prepared magic state.
pub fn magic_state_energy(
    factory: &FactorySpec,
    e_cyc_joules: f64,
    profile: &TechnologyProfile,
) -> Result<f64> {
    factory.validate()?;
    match factory.cost_mode {
        FactoryCostMode::Ratio => Ok(factory.cycle_ratio() * e_cyc_joules),
        FactoryCostMode::PatchCycles => Ok(factory.patch_cycles()
            * stabilizer_round_energy(factory.factory_distance(), profile)?),
    }
}

/// Decoder energy over the run: one decoder instance per logical patch,
/// drawing continuously for the whole wall time.
pub fn decoder_energy(
    layout: &SurfaceLayout,
    entry: &DecoderEntry,
    wall_seconds: f64,
) -> Result<f64> {
    if !non_negative(wall_seconds) {
        return Err(Error::invalid("wall_seconds must be >= 0"));
    }
    Ok(layout.n_patches as f64 * entry.power_watts * wall_seconds)
}

/// Stall factor of the logical clock: 1 when decoding fits the budget,
/// otherwise the ratio by which decoding overruns it.
pub fn backlog_stall(decoder_latency_seconds: f64, budget_seconds: f64) -> Result<f64> {
    if !positive(decoder_latency_seconds) || !positive(budget_seconds) {
        return Err(Error::invalid("latency and budget must be positive"));
    }
    Ok((decoder_latency_seconds / budget_seconds).max(1.0))
}

/// Wall-clock time of the computation: each logical step takes `d` code
/// cycles, inflated by decoder stall; spatial cells run in parallel.
pub fn ftqc_wall_time(logical: &LogicalCircuit, d: u32, t_cycle_seconds: f64, stall: f64) -> f64 {
    logical.logical_depth as f64 * f64::from(d) * t_cycle_seconds * stall
}

/// Compose the FTQC pipeline into an itemized execution energy:
/// lattice cells, magic states and decoding.
pub fn ftqc_exec_energy(
    config: &FtqcConfig,
    profile: &TechnologyProfile,
    decoders: &DecoderTable,
) -> Result<FtqcBreakdown> {
    config.validate()?;
    let d = config.code.resolve_distance()?;
    let layout = SurfaceLayout::new(d, config.logical.logical_qubits, config.rho);

    let v_ls_cells = spacetime_volume(&config.logical, config.rho);
    let e_cyc_joules = match config.cycle_energy_override {
        Some(e) => e,
        None => cycle_energy(d, profile)?,
    };
    let lattice_energy_joules = v_ls_cells * e_cyc_joules;

    let e_ms_joules = magic_state_energy(&config.factory, e_cyc_joules, profile)?;
    let magic_energy_joules = config.logical.t_count as f64 * e_ms_joules;

    let entry = decoder_lookup(decoders, config.decoder, d)?;
    let stall_factor = backlog_stall(entry.latency_seconds, profile.decode_budget_seconds)?;
    let wall_seconds = ftqc_wall_time(&config.logical, d, profile.cycle_time_seconds, stall_factor);
    let e_dec_joules = decoder_energy(&layout, &entry, wall_seconds)?;

    let total_exec_joules = lattice_energy_joules + magic_energy_joules + e_dec_joules;
    Ok(FtqcBreakdown {
        distance: d,
        n_patches: layout.n_patches,
        physical_qubits: layout.physical_qubits(),
        v_ls_cells,
        e_cyc_joules,
        lattice_energy_joules,
        e_ms_joules,
        magic_energy_joules,
        e_dec_joules,
        stall_factor,
        wall_seconds,
        total_exec_joules,
    })
}
