//! Technology profiles and the decoder hardware table.
//!
//! A [`TechnologyProfile`] carries the per-gate energies, maintenance power
//! and timing constants of one qubit technology. The [`DecoderTable`] holds
//! measured area/power/latency figures for hardware decoders at tabulated
//! code distances, with an interpolation policy for distances in between.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{non_negative, positive, Error, Result};

/// Energy class of a physical operation. Gate names are mapped onto these
/// classes by the profile so the circuit ingestion stays technology-agnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateClass {
    #[serde(rename = "1q")]
    OneQubit,
    #[serde(rename = "2q")]
    TwoQubit,
    #[serde(rename = "measure")]
    Measure,
    #[serde(rename = "reset")]
    Reset,
    #[serde(rename = "other")]
    Other,
}

impl GateClass {
    pub fn name(&self) -> &'static str {
        match self {
            GateClass::OneQubit => "1q",
            GateClass::TwoQubit => "2q",
            GateClass::Measure => "measure",
            GateClass::Reset => "reset",
            GateClass::Other => "other",
        }
    }
}

/// Per-technology energy and timing constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TechnologyProfile {
    pub key: String,
    /// Energy per gate in joules, keyed by gate class.
    pub gate_energy: BTreeMap<GateClass, f64>,
    /// Gate-name resolution; names absent here fall back to `other`.
    #[serde(default)]
    pub gate_name_to_class: BTreeMap<String, GateClass>,
    /// Continuous draw of cryogenics / vacuum / lasers, in watts.
    #[serde(default)]
    pub maintenance_power_watts: f64,
    /// Surface-code cycle time in seconds.
    #[serde(default = "default_cycle_time")]
    pub cycle_time_seconds: f64,
    /// Latency budget the decoder must meet to avoid backlog, in seconds.
    #[serde(default = "default_decode_budget")]
    pub decode_budget_seconds: f64,
    /// Whether the per-gate energies already absorb cooling overhead.
    #[serde(default)]
    pub cooling_included_in_gate_energy: bool,
}

fn default_cycle_time() -> f64 {
    1e-6
}

fn default_decode_budget() -> f64 {
    400e-9
}

impl TechnologyProfile {
    pub fn validate(&self) -> Result<()> {
        if self.key.is_empty() {
            return Err(Error::invalid("profile key must not be empty"));
        }
        for (class, energy) in &self.gate_energy {
            if !energy.is_finite() || *energy < 0.0 {
                return Err(Error::invalid(format!(
                    "profile '{}': gate energy for class '{}' must be finite and >= 0",
                    self.key,
                    class.name()
                )));
            }
        }
        match self.gate_energy.get(&GateClass::TwoQubit) {
            Some(e) if *e > 0.0 => {}
            _ => {
                return Err(Error::invalid(format!(
                    "profile '{}': a usable profile needs a positive 2q gate energy",
                    self.key
                )))
            }
        }
        if !non_negative(self.maintenance_power_watts) {
            return Err(Error::invalid(format!(
                "profile '{}': maintenance_power_watts must be finite and >= 0",
                self.key
            )));
        }
        if !positive(self.cycle_time_seconds) {
            return Err(Error::invalid(format!(
                "profile '{}': cycle_time_seconds must be positive",
                self.key
            )));
        }
        if !positive(self.decode_budget_seconds) {
            return Err(Error::invalid(format!(
                "profile '{}': decode_budget_seconds must be positive",
                self.key
            )));
        }
        Ok(())
    }

    /// Resolve a gate name to its class, falling back to `other`.
    pub fn class_for(&self, gate_name: &str) -> GateClass {
        self.gate_name_to_class
            .get(gate_name)
            .copied()
            .unwrap_or(GateClass::Other)
    }

    /// Energy of a gate class, if the profile defines one.
    pub fn class_energy(&self, class: GateClass) -> Option<f64> {
        self.gate_energy.get(&class).copied()
    }

    /// Energy of a named gate, resolving through the class map.
    pub fn energy_for_gate(&self, gate_name: &str) -> Result<f64> {
        let class = self.class_for(gate_name);
        self.class_energy(class).ok_or_else(|| {
            Error::MissingEnergy(format!(
                "gate '{}' resolves to class '{}' which has no energy in profile '{}'",
                gate_name,
                class.name(),
                self.key
            ))
        })
    }
}

/// Gate-name classification shared by the builtin profiles.
fn default_gate_classes() -> BTreeMap<String, GateClass> {
    let one_qubit = [
        "h", "x", "y", "z", "s", "sdg", "t", "tdg", "sx", "sxdg", "rx", "ry", "rz", "p", "u",
        "u1", "u2", "u3", "id",
    ];
    let two_qubit = [
        "cx", "cnot", "cy", "cz", "ch", "cp", "crx", "cry", "crz", "cu", "swap", "iswap", "ecr",
        "rxx", "ryy", "rzz", "rzx", "ms",
    ];
    let mut map = BTreeMap::new();
    for name in one_qubit {
        map.insert(name.to_string(), GateClass::OneQubit);
    }
    for name in two_qubit {
        map.insert(name.to_string(), GateClass::TwoQubit);
    }
    map.insert("measure".to_string(), GateClass::Measure);
    map.insert("reset".to_string(), GateClass::Reset);
    map
}

fn uniform_energy(joules: f64) -> BTreeMap<GateClass, f64> {
    [
        GateClass::OneQubit,
        GateClass::TwoQubit,
        GateClass::Measure,
        GateClass::Reset,
        GateClass::Other,
    ]
    .into_iter()
    .map(|class| (class, joules))
    .collect()
}

/// Builtin technology profiles.
///
/// The superconducting profile prices every counted gate at 0.18 J, the
/// published two-qubit figure that already absorbs cooling overhead, and
/// assumes a 25 kW dilution refrigerator, a 1 us cycle and a 400 ns decode
/// budget. The trapped-ion profile uses the published 15 J per gate; its
/// timing constants are placeholders at the millisecond scale.
pub fn builtin_profiles() -> BTreeMap<String, TechnologyProfile> {
    let mut profiles = BTreeMap::new();
    profiles.insert(
        "superconducting".to_string(),
        TechnologyProfile {
            key: "superconducting".to_string(),
            gate_energy: uniform_energy(0.18),
            gate_name_to_class: default_gate_classes(),
            maintenance_power_watts: 25e3,
            cycle_time_seconds: 1e-6,
            decode_budget_seconds: 400e-9,
            cooling_included_in_gate_energy: true,
        },
    );
    profiles.insert(
        "trapped_ion".to_string(),
        TechnologyProfile {
            key: "trapped_ion".to_string(),
            gate_energy: uniform_energy(15.0),
            gate_name_to_class: default_gate_classes(),
            maintenance_power_watts: 0.0,
            cycle_time_seconds: 1e-3,
            decode_budget_seconds: 1e-3,
            cooling_included_in_gate_energy: true,
        },
    );
    profiles
}

/// Catalog of technology profiles, builtin plus user-supplied.
#[derive(Debug, Clone)]
pub struct ProfileCatalog {
    profiles: BTreeMap<String, TechnologyProfile>,
    builtin_keys: Vec<String>,
}

impl ProfileCatalog {
    pub fn builtin() -> Self {
        let profiles = builtin_profiles();
        let builtin_keys = profiles.keys().cloned().collect();
        ProfileCatalog {
            profiles,
            builtin_keys,
        }
    }

    /// Add a user profile. Builtin keys are reserved.
    pub fn add(&mut self, profile: TechnologyProfile) -> Result<()> {
        profile.validate()?;
        if self.builtin_keys.contains(&profile.key) {
            return Err(Error::invalid(format!(
                "profile key '{}' is reserved for a builtin profile",
                profile.key
            )));
        }
        self.profiles.insert(profile.key.clone(), profile);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Result<&TechnologyProfile> {
        self.profiles
            .get(key)
            .ok_or_else(|| Error::invalid(format!("unknown technology key '{key}'")))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.profiles.keys().map(|k| k.as_str())
    }
}

/// Parse a profile file: one JSON profile object, or an array of them.
pub fn parse_profiles(text: &str) -> Result<Vec<TechnologyProfile>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_to_error)?;
    let profiles: Vec<TechnologyProfile> = if value.is_array() {
        serde_json::from_value(value).map_err(data_to_error)?
    } else {
        vec![serde_json::from_value(value).map_err(data_to_error)?]
    };
    for profile in &profiles {
        profile.validate()?;
    }
    Ok(profiles)
}

pub(crate) fn json_to_error(err: serde_json::Error) -> Error {
    match err.classify() {
        serde_json::error::Category::Syntax | serde_json::error::Category::Eof => {
            Error::syntax(err.line(), err.column(), err.to_string())
        }
        _ => Error::invalid(err.to_string()),
    }
}

pub(crate) fn data_to_error(err: serde_json::Error) -> Error {
    Error::invalid(err.to_string())
}

/// Hardware decoder families covered by the builtin table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DecoderKind {
    #[serde(rename = "BPOSD")]
    Bposd,
    #[serde(rename = "MWPM")]
    Mwpm,
}

impl DecoderKind {
    pub fn name(&self) -> &'static str {
        match self {
            DecoderKind::Bposd => "BPOSD",
            DecoderKind::Mwpm => "MWPM",
        }
    }
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BPOSD" | "B" => Ok(DecoderKind::Bposd),
            "MWPM" | "M" => Ok(DecoderKind::Mwpm),
            other => Err(Error::invalid(format!("unknown decoder kind '{other}'"))),
        }
    }
}

/// Measured metrics of one hardware decoder at one code distance,
/// per logical qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderEntry {
    pub decoder: DecoderKind,
    pub distance: u32,
    pub area_mm2: f64,
    pub power_watts: f64,
    pub latency_seconds: f64,
}

/// Lookup policy for distances between tabulated rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationPolicy {
    ExactOnly,
    PiecewiseLinear,
}

/// Decoder metrics table with an interpolation policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecoderTable {
    pub entries: Vec<DecoderEntry>,
    pub interpolation: InterpolationPolicy,
}

impl DecoderTable {
    pub fn validate(&self) -> Result<()> {
        for kind in [DecoderKind::Bposd, DecoderKind::Mwpm] {
            let mut last: Option<u32> = None;
            for entry in self.entries.iter().filter(|e| e.decoder == kind) {
                if entry.area_mm2 <= 0.0 || entry.power_watts <= 0.0 || entry.latency_seconds <= 0.0
                {
                    return Err(Error::invalid(format!(
                        "decoder entry ({}, d={}) must have positive metrics",
                        kind.name(),
                        entry.distance
                    )));
                }
                if let Some(prev) = last {
                    if entry.distance <= prev {
                        return Err(Error::invalid(format!(
                            "decoder table distances for {} must be strictly increasing",
                            kind.name()
                        )));
                    }
                }
                last = Some(entry.distance);
            }
        }
        Ok(())
    }
}

/// The builtin decoder hardware table: average area, power and latency of
/// BPOSD and MWPM decoders for one logical qubit across code distances.
pub fn builtin_decoder_table() -> DecoderTable {
    let rows: [(DecoderKind, u32, f64, f64, f64); 8] = [
        (DecoderKind::Bposd, 7, 0.90, 0.27, 19.6e-9),
        (DecoderKind::Bposd, 11, 1.62, 0.28, 26.6e-9),
        (DecoderKind::Bposd, 13, 4.35, 0.36, 32.8e-9),
        (DecoderKind::Bposd, 32, 57.45, 2.49, 145.0e-9),
        (DecoderKind::Mwpm, 7, 0.38, 0.19, 14.4e-9),
        (DecoderKind::Mwpm, 11, 1.76, 0.92, 35.5e-9),
        (DecoderKind::Mwpm, 13, 3.10, 1.62, 49.6e-9),
        (DecoderKind::Mwpm, 32, 59.09, 30.33, 300.5e-9),
    ];
    DecoderTable {
        entries: rows
            .into_iter()
            .map(
                |(decoder, distance, area_mm2, power_watts, latency_seconds)| DecoderEntry {
                    decoder,
                    distance,
                    area_mm2,
                    power_watts,
                    latency_seconds,
                },
            )
            .collect(),
        interpolation: InterpolationPolicy::PiecewiseLinear,
    }
}

/// Look up decoder metrics at a code distance.
///
/// Exact rows are returned verbatim. Between rows, the piecewise-linear
/// policy interpolates each metric in `d`. Extrapolation above the largest
/// tabulated distance is refused: decoder cost grows faster than linearly
/// there, so a linear guess would understate it.
pub fn decoder_lookup(table: &DecoderTable, decoder: DecoderKind, d: u32) -> Result<DecoderEntry> {
    let rows: Vec<&DecoderEntry> = table
        .entries
        .iter()
        .filter(|e| e.decoder == decoder)
        .collect();
    let Some(first) = rows.first() else {
        return Err(Error::DecoderRange(format!(
            "no table entries for decoder {}",
            decoder.name()
        )));
    };
    if d < first.distance {
        return Err(Error::DecoderRange(format!(
            "d={} below the smallest tabulated distance {} for {}",
            d,
            first.distance,
            decoder.name()
        )));
    }
    if let Some(entry) = rows.iter().find(|e| e.distance == d) {
        return Ok((*entry).clone());
    }
    let last = rows.last().expect("non-empty");
    if d > last.distance {
        return Err(Error::DecoderRange(format!(
            "extrapolation refused: d={} above the largest tabulated distance {} for {}",
            d,
            last.distance,
            decoder.name()
        )));
    }
    match table.interpolation {
        InterpolationPolicy::ExactOnly => Err(Error::DecoderRange(format!(
            "exact_only policy: d={} is not tabulated for {}",
            d,
            decoder.name()
        ))),
        InterpolationPolicy::PiecewiseLinear => {
            let hi_idx = rows
                .iter()
                .position(|e| e.distance > d)
                .expect("d below last row");
            let lo = rows[hi_idx - 1];
            let hi = rows[hi_idx];
            let frac = f64::from(d - lo.distance) / f64::from(hi.distance - lo.distance);
            let lerp = |a: f64, b: f64| a + (b - a) * frac;
            Ok(DecoderEntry {
                decoder,
                distance: d,
                area_mm2: lerp(lo.area_mm2, hi.area_mm2),
                power_watts: lerp(lo.power_watts, hi.power_watts),
                latency_seconds: lerp(lo.latency_seconds, hi.latency_seconds),
            })
        }
    }
}

/// Parse a decoder table file: comma-separated rows of
/// `decoder, d, area_mm2, power_watts, latency_ns`, `#` comments allowed.
pub fn parse_decoder_table(text: &str, interpolation: InterpolationPolicy) -> Result<DecoderTable> {
    let mut entries = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::syntax(
                line_no,
                1,
                format!("expected 5 fields (decoder, d, area_mm2, power_watts, latency_ns), got {}", fields.len()),
            ));
        }
        if idx == 0 && fields[0].eq_ignore_ascii_case("decoder") {
            continue; // header row
        }
        let decoder: DecoderKind = fields[0]
            .parse()
            .map_err(|e: Error| Error::syntax(line_no, 1, e.to_string()))?;
        let distance: u32 = fields[1]
            .parse()
            .map_err(|_| Error::syntax(line_no, 1, format!("bad distance '{}'", fields[1])))?;
        let metric = |field: &str, name: &str| -> Result<f64> {
            field
                .parse::<f64>()
                .map_err(|_| Error::syntax(line_no, 1, format!("bad {name} '{field}'")))
        };
        entries.push(DecoderEntry {
            decoder,
            distance,
            area_mm2: metric(fields[2], "area_mm2")?,
            power_watts: metric(fields[3], "power_watts")?,
            latency_seconds: metric(fields[4], "latency_ns")? * 1e-9,
        });
    }
    let table = DecoderTable {
        entries,
        interpolation,
    };
    table.validate()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_superconducting_constants() {
        let profiles = builtin_profiles();
        let sc = &profiles["superconducting"];
        assert_eq!(sc.class_energy(GateClass::TwoQubit), Some(0.18));
        assert_eq!(sc.maintenance_power_watts, 25e3);
        assert_eq!(sc.cycle_time_seconds, 1e-6);
        assert_eq!(sc.decode_budget_seconds, 400e-9);
        assert!(sc.cooling_included_in_gate_energy);
        assert!(sc.decode_budget_seconds <= 1e-3);
    }

    #[test]
    fn builtin_trapped_ion_two_qubit_energy() {
        let profiles = builtin_profiles();
        assert_eq!(
            profiles["trapped_ion"].class_energy(GateClass::TwoQubit),
            Some(15.0)
        );
    }

    #[test]
    fn gate_name_resolution() {
        let profiles = builtin_profiles();
        let sc = &profiles["superconducting"];
        assert_eq!(sc.class_for("cx"), GateClass::TwoQubit);
        assert_eq!(sc.class_for("ms"), GateClass::TwoQubit);
        assert_eq!(sc.class_for("h"), GateClass::OneQubit);
        assert_eq!(sc.class_for("no_such_gate"), GateClass::Other);
    }

    #[test]
    fn builtin_table_rows_round_trip() {
        let table = builtin_decoder_table();
        assert_eq!(table.entries.len(), 8);
        let entry = decoder_lookup(&table, DecoderKind::Bposd, 11).unwrap();
        assert_eq!(entry.area_mm2, 1.62);
        assert_eq!(entry.power_watts, 0.28);
        assert_eq!(entry.latency_seconds, 26.6e-9);
        let entry = decoder_lookup(&table, DecoderKind::Mwpm, 32).unwrap();
        assert_eq!(entry.area_mm2, 59.09);
        assert_eq!(entry.power_watts, 30.33);
        assert_eq!(entry.latency_seconds, 300.5e-9);
        let entry = decoder_lookup(&table, DecoderKind::Mwpm, 7).unwrap();
        assert_eq!(entry.area_mm2, 0.38);
        assert_eq!(entry.power_watts, 0.19);
        assert_eq!(entry.latency_seconds, 14.4e-9);
    }

    #[test]
    fn interpolated_midpoint() {
        let table = builtin_decoder_table();
        let entry = decoder_lookup(&table, DecoderKind::Bposd, 9).unwrap();
        assert!((entry.area_mm2 - 1.26).abs() < 1e-12);
        assert!((entry.power_watts - 0.275).abs() < 1e-12);
        assert!((entry.latency_seconds - 23.1e-9).abs() < 1e-21);
    }

    #[test]
    fn interpolation_bounded_by_brackets() {
        let table = builtin_decoder_table();
        for d in 14..32 {
            let entry = decoder_lookup(&table, DecoderKind::Mwpm, d).unwrap();
            assert!(entry.power_watts >= 1.62 && entry.power_watts <= 30.33);
            assert!(entry.area_mm2 >= 3.10 && entry.area_mm2 <= 59.09);
            assert!(entry.latency_seconds >= 49.6e-9 && entry.latency_seconds <= 300.5e-9);
        }
    }

    #[test]
    fn extrapolation_refused() {
        let table = builtin_decoder_table();
        let err = decoder_lookup(&table, DecoderKind::Mwpm, 33).unwrap_err();
        assert!(err.to_string().contains("extrapolation refused"));
        assert!(err.is_infeasibility());
    }

    #[test]
    fn below_range_refused() {
        let table = builtin_decoder_table();
        assert!(decoder_lookup(&table, DecoderKind::Bposd, 5).is_err());
    }

    #[test]
    fn exact_only_policy() {
        let mut table = builtin_decoder_table();
        table.interpolation = InterpolationPolicy::ExactOnly;
        assert!(decoder_lookup(&table, DecoderKind::Bposd, 13).is_ok());
        let err = decoder_lookup(&table, DecoderKind::Bposd, 9).unwrap_err();
        assert!(err.to_string().contains("exact_only"));
    }

    #[test]
    fn mwpm_power_gap_at_d32() {
        let table = builtin_decoder_table();
        let b = decoder_lookup(&table, DecoderKind::Bposd, 32).unwrap();
        let m = decoder_lookup(&table, DecoderKind::Mwpm, 32).unwrap();
        let ratio = m.power_watts / b.power_watts;
        assert!((ratio - 12.18).abs() <= 0.05);
    }

    #[test]
    fn all_latencies_meet_budget() {
        let table = builtin_decoder_table();
        let max = table
            .entries
            .iter()
            .map(|e| e.latency_seconds)
            .fold(0.0, f64::max);
        assert_eq!(max, 300.5e-9);
        assert!(table.entries.iter().all(|e| e.latency_seconds < 400e-9));
    }

    #[test]
    fn catalog_reserves_builtin_keys() {
        let mut catalog = ProfileCatalog::builtin();
        let clash = TechnologyProfile {
            key: "superconducting".to_string(),
            gate_energy: uniform_energy(1.0),
            gate_name_to_class: BTreeMap::new(),
            maintenance_power_watts: 0.0,
            cycle_time_seconds: 1e-6,
            decode_budget_seconds: 400e-9,
            cooling_included_in_gate_energy: false,
        };
        assert!(catalog.add(clash).is_err());
        assert!(catalog.get("no_such_key").is_err());
    }

    #[test]
    fn decoder_table_file_parse() {
        let text = "\
decoder, d, area_mm2, power_watts, latency_ns
BPOSD, 7, 0.9, 0.27, 19.6
BPOSD, 11, 1.62, 0.28, 26.6
# comment
MWPM, 7, 0.38, 0.19, 14.4
";
        let table = parse_decoder_table(text, InterpolationPolicy::PiecewiseLinear).unwrap();
        assert_eq!(table.entries.len(), 3);
        assert!((table.entries[1].latency_seconds - 26.6e-9).abs() < 1e-18);
        assert!(parse_decoder_table("BPOSD, 7, 0.9", InterpolationPolicy::ExactOnly).is_err());
    }

    #[test]
    fn profile_file_parse_and_validation() {
        let text = r#"{
            "key": "demo",
            "gate_energy": {"1q": 0.01, "2q": 0.5, "measure": 0.1, "reset": 0.1},
            "gate_name_to_class": {"zz": "2q"},
            "maintenance_power_watts": 100.0,
            "cycle_time_seconds": 1e-6
        }"#;
        let profiles = parse_profiles(text).unwrap();
        assert_eq!(profiles.len(), 1);
        assert_eq!(profiles[0].class_for("zz"), GateClass::TwoQubit);
        assert_eq!(profiles[0].decode_budget_seconds, 400e-9);

        let bad = r#"{"key": "demo", "gate_energy": {"1q": 0.01}}"#;
        assert!(parse_profiles(bad).is_err());
    }

    #[test]
    fn profile_serde_round_trip() {
        let profiles = builtin_profiles();
        let sc = &profiles["superconducting"];
        let text = serde_json::to_string(sc).unwrap();
        let back: TechnologyProfile = serde_json::from_str(&text).unwrap();
        assert_eq!(*sc, back);
    }
}
