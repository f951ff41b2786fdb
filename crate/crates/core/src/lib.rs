//! Full-system energy and power estimation for quantum workloads.
//!
//! The model splits a workload's joules into overhead common to both
//! operating regimes (continuous system maintenance, classical pre/post
//! processing scaled by facility efficiency) and a regime-specific
//! execution term: sampling multiplied by the error-mitigation stack for
//! NISQ devices, or surface-code encoding, magic states and real-time
//! decoding for FTQC machines. At most one regime term is active per
//! workload and every report itemizes the terms that sum to the total.
//!
//! The crate is organized around that split:
//!
//! - [`workload`]: workload documents, circuit-text gate counting, and the
//!   ZNE/PT fold expansion.
//! - [`catalog`]: technology profiles and the decoder hardware table.
//! - [`nisq`]: gate energy, QEM sampling cost, the VQE model and power.
//! - [`ftqc`]: distance solving, surface-code sizing, spacetime volume,
//!   magic-state and decoder energy.
//! - [`overhead`]: counter integration, PUE-scaled classical energy,
//!   maintenance, totals and the crossover speedup.
//! - [`report`]: the estimation pipeline and report rendering.
//!
//! Everything is pure and deterministic: identical inputs produce
//! byte-identical machine reports.

pub mod catalog;
pub mod circuit;
pub mod error;
pub mod ftqc;
pub mod nisq;
pub mod overhead;
pub mod report;
pub mod workload;

pub use catalog::{
    builtin_decoder_table, builtin_profiles, decoder_lookup, parse_decoder_table, parse_profiles,
    DecoderEntry, DecoderKind, DecoderTable, GateClass, InterpolationPolicy, ProfileCatalog,
    TechnologyProfile,
};
pub use circuit::{count_gates, UnknownGatePolicy};
pub use error::{Error, Result};
pub use ftqc::{
    backlog_stall, cycle_energy, decoder_energy, ftqc_exec_energy, ftqc_wall_time,
    logical_error_rate, magic_state_energy, physical_qubits_per_logical, solve_distance,
    spacetime_volume, CodeParams, FactoryCostMode, FactoryProtocol, FactorySpec, FtqcBreakdown,
    FtqcConfig, SurfaceLayout,
};
pub use nisq::{
    effective_gate_energy, gate_energy, m3_amortized_energy, nisq_exec_energy, nisq_power,
    vqe_energy, NisqBreakdown,
};
pub use overhead::{
    classical_energy, integrate_power, maintenance_energy, parse_counter_rows, required_speedup,
    total_energy, ClassicalOverheadSpec, EnergyTotal, MaintenanceEnergy, PowerSeries, PueProfile,
};
pub use report::{
    dominant_term, estimate, parse_report, render_report, resolve_circuit_text, EnergyReport,
    EstimateOptions, ExecBreakdown, InputsEcho, MaintenancePolicy, ReportFormat,
};
pub use workload::{
    expand_qem, parse_workload, render_workload, with_numeric_field, FoldMode, GateCounts,
    LogicalCircuit, NisqSection, QemStack, Regime, VqeSpec, WorkloadSpec,
};
