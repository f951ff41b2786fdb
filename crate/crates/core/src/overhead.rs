//! Overhead common to both regimes: classical job-boundary energy with
//! time-varying facility efficiency, continuous maintenance draw, the
//! regime-exclusive total, and the crossover speedup ratio.

use serde::{Deserialize, Serialize};

use crate::catalog::TechnologyProfile;
use crate::error::{non_negative, positive, Error, Result};
use crate::ftqc::FtqcBreakdown;
use crate::nisq::NisqBreakdown;
use crate::report::ExecBreakdown;

/// Power counter samples for one labeled subsystem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSeries {
    pub label: String,
    /// `(t_seconds, power_watts)` pairs, timestamps strictly increasing.
    pub samples: Vec<(f64, f64)>,
}

impl PowerSeries {
    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::invalid(format!(
                "power series '{}' needs at least one sample",
                self.label
            )));
        }
        let mut prev = f64::NEG_INFINITY;
        for &(t, w) in &self.samples {
            if !t.is_finite() || t <= prev {
                return Err(Error::invalid(format!(
                    "power series '{}': timestamps must be finite and strictly increasing",
                    self.label
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::invalid(format!(
                    "power series '{}': power must be finite and >= 0",
                    self.label
                )));
            }
            prev = t;
        }
        Ok(())
    }

    fn t_first(&self) -> f64 {
        self.samples.first().map(|&(t, _)| t).unwrap_or(0.0)
    }

    fn t_last(&self) -> f64 {
        self.samples.last().map(|&(t, _)| t).unwrap_or(0.0)
    }
}

/// Facility efficiency as a step function over time: `(t_start, pue)`
/// intervals, each holding until the next start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PueProfile {
    pub intervals: Vec<(f64, f64)>,
}

impl Default for PueProfile {
    fn default() -> Self {
        PueProfile {
            intervals: vec![(0.0, 1.0)],
        }
    }
}

impl PueProfile {
    pub fn constant(pue: f64) -> Self {
        PueProfile {
            intervals: vec![(0.0, pue)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.intervals.is_empty() {
            return Err(Error::invalid("pue profile needs at least one interval"));
        }
        if self.intervals[0].0 != 0.0 {
            return Err(Error::invalid("pue profile must start at t = 0"));
        }
        let mut prev = f64::NEG_INFINITY;
        for &(t, pue) in &self.intervals {
            if !t.is_finite() || t <= prev {
                return Err(Error::invalid(
                    "pue interval starts must be finite and strictly increasing",
                ));
            }
            if !pue.is_finite() || pue < 1.0 {
                return Err(Error::invalid("pue values must be finite and >= 1"));
            }
            prev = t;
        }
        Ok(())
    }
}

/// Classical job-boundary energy: IT counter series scaled by PUE, plus
/// shared-infrastructure, WAN and storage constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalOverheadSpec {
    #[serde(default)]
    pub it_series: Vec<PowerSeries>,
    /// Optional counter file whose rows the caller appends to `it_series`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counter_file: Option<String>,
    #[serde(default)]
    pub pue: PueProfile,
    #[serde(default)]
    pub shared_joules: f64,
    #[serde(default)]
    pub net_wan_joules: f64,
    #[serde(default)]
    pub storage_joules: f64,
}

impl ClassicalOverheadSpec {
    pub fn validate(&self) -> Result<()> {
        for series in &self.it_series {
            series.validate()?;
            // The PUE step function starts at t = 0; earlier samples would
            // silently escape the facility scaling.
            if series.t_first() < 0.0 {
                return Err(Error::invalid(format!(
                    "power series '{}' starts before t = 0",
                    series.label
                )));
            }
        }
        self.pue.validate()?;
        for (name, value) in [
            ("shared_joules", self.shared_joules),
            ("net_wan_joules", self.net_wan_joules),
            ("storage_joules", self.storage_joules),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::invalid(format!("{name} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

/// Trapezoidal integral of a power series over a window, in joules.
///
/// Without a window the full sample range is integrated. The window must
/// lie inside the sample range; the signal is piecewise linear between
/// samples.
pub fn integrate_power(series: &PowerSeries, window: Option<(f64, f64)>) -> Result<f64> {
    series.validate()?;
    let (t0, t1) = match window {
        None => (series.t_first(), series.t_last()),
        Some((a, b)) => {
            if b < a {
                return Err(Error::invalid("window end precedes window start"));
            }
            if a < series.t_first() || b > series.t_last() {
                return Err(Error::invalid(format!(
                    "window [{a}, {b}] outside the sample range [{}, {}] of series '{}'",
                    series.t_first(),
                    series.t_last(),
                    series.label
                )));
            }
            (a, b)
        }
    };
    if t1 == t0 {
        return Ok(0.0);
    }
    if series.samples.len() < 2 {
        return Err(Error::invalid(format!(
            "series '{}' needs at least 2 samples to integrate a non-empty window",
            series.label
        )));
    }
    let value_at = |t: f64| -> f64 {
        // t is inside the sample range by construction.
        let idx = series.samples.partition_point(|&(ts, _)| ts <= t);
        if idx == 0 {
            return series.samples[0].1;
        }
        if idx == series.samples.len() {
            return series.samples[idx - 1].1;
        }
        let (ta, wa) = series.samples[idx - 1];
        let (tb, wb) = series.samples[idx];
        wa + (wb - wa) * (t - ta) / (tb - ta)
    };
    let mut joules = 0.0;
    let mut t_prev = t0;
    let mut w_prev = value_at(t0);
    for &(t, w) in series
        .samples
        .iter()
        .filter(|&&(t, _)| t > t0 && t < t1)
    {
        joules += (w_prev + w) * 0.5 * (t - t_prev);
        t_prev = t;
        w_prev = w;
    }
    let w_end = value_at(t1);
    joules += (w_prev + w_end) * 0.5 * (t1 - t_prev);
    Ok(joules)
}

/// Classical energy per the job-boundary model: each PUE interval scales
/// the IT energy that falls inside it, then the constant terms are added.
pub fn classical_energy(spec: &ClassicalOverheadSpec) -> Result<f64> {
    spec.validate()?;
    let mut joules = 0.0;
    for series in &spec.it_series {
        for (idx, &(start, pue)) in spec.pue.intervals.iter().enumerate() {
            let end = spec
                .pue
                .intervals
                .get(idx + 1)
                .map(|&(t, _)| t)
                .unwrap_or(f64::INFINITY);
            let lo = start.max(series.t_first());
            let hi = end.min(series.t_last());
            if lo < hi {
                joules += pue * integrate_power(series, Some((lo, hi)))?;
            }
        }
    }
    Ok(joules + spec.shared_joules + spec.net_wan_joules + spec.storage_joules)
}

/// Maintenance energy with its double-count advisory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaintenanceEnergy {
    pub joules: f64,
    /// Set when the profile also folds cooling into its gate energies, so
    /// counting both may double-charge the cooling overhead.
    pub double_count_advisory: bool,
}

/// Continuous maintenance draw (cryogenics, vacuum, lasers) over the wall
/// time.
pub fn maintenance_energy(profile: &TechnologyProfile, wall_seconds: f64) -> Result<MaintenanceEnergy> {
    if !non_negative(wall_seconds) {
        return Err(Error::invalid("wall_seconds must be >= 0"));
    }
    let joules = profile.maintenance_power_watts * wall_seconds;
    Ok(MaintenanceEnergy {
        joules,
        double_count_advisory: profile.cooling_included_in_gate_energy && joules > 0.0,
    })
}

/// Itemized total: maintenance, classical, and exactly one regime-specific
/// execution term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyTotal {
    pub e_sys_joules: f64,
    pub e_cls_joules: f64,
    pub exec: ExecBreakdown,
    pub e_tot_joules: f64,
}

/// Compose the total energy. Exactly one of the two regime-specific
/// execution terms may be active.
pub fn total_energy(
    e_sys_joules: f64,
    e_cls_joules: f64,
    nisq: Option<NisqBreakdown>,
    ftqc: Option<FtqcBreakdown>,
) -> Result<EnergyTotal> {
    let exec = match (nisq, ftqc) {
        (Some(breakdown), None) => ExecBreakdown::Nisq(breakdown),
        (None, Some(breakdown)) => ExecBreakdown::Ftqc(breakdown),
        (None, None) => {
            return Err(Error::invalid(
                "exactly one regime-specific execution term is required, got none",
            ))
        }
        (Some(_), Some(_)) => {
            return Err(Error::invalid(
                "exactly one regime-specific execution term is required, got both",
            ))
        }
    };
    let e_tot_joules = e_sys_joules + e_cls_joules + exec.total_exec_joules();
    Ok(EnergyTotal {
        e_sys_joules,
        e_cls_joules,
        exec,
        e_tot_joules,
    })
}

/// Runtime speedup at which equal-work energies break even under
/// constant-power models: the quantum machine's continuous draw over the
/// classical alternative's.
pub fn required_speedup(quantum_continuous_watts: f64, classical_watts: f64) -> Result<f64> {
    if !positive(quantum_continuous_watts) || !positive(classical_watts) {
        return Err(Error::invalid("both power figures must be positive"));
    }
    Ok(quantum_continuous_watts / classical_watts)
}

/// Parse counter-file rows of `label, t_seconds, power_watts` into one
/// series per label. `#` starts a comment.
pub fn parse_counter_rows(text: &str) -> Result<Vec<PowerSeries>> {
    let mut order: Vec<String> = Vec::new();
    let mut by_label: std::collections::BTreeMap<String, Vec<(f64, f64)>> = Default::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::syntax(
                line_no,
                1,
                format!("expected 3 fields (label, t_seconds, power_watts), got {}", fields.len()),
            ));
        }
        let t: f64 = fields[1]
            .parse()
            .map_err(|_| Error::syntax(line_no, 1, format!("bad timestamp '{}'", fields[1])))?;
        let w: f64 = fields[2]
            .parse()
            .map_err(|_| Error::syntax(line_no, 1, format!("bad power '{}'", fields[2])))?;
        let label = fields[0].to_string();
        if !by_label.contains_key(&label) {
            order.push(label.clone());
        }
        by_label.entry(label).or_default().push((t, w));
    }
    let series: Vec<PowerSeries> = order
        .into_iter()
        .map(|label| {
            let samples = by_label.remove(&label).expect("collected");
            PowerSeries { label, samples }
        })
        .collect();
    for s in &series {
        s.validate()?;
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_profiles;

    fn series(samples: &[(f64, f64)]) -> PowerSeries {
        PowerSeries {
            label: "it".to_string(),
            samples: samples.to_vec(),
        }
    }

    #[test]
    fn trapezoid_fixtures() {
        assert_eq!(
            integrate_power(&series(&[(0.0, 100.0), (10.0, 100.0)]), None).unwrap(),
            1000.0
        );
        assert_eq!(
            integrate_power(&series(&[(0.0, 0.0), (10.0, 100.0)]), None).unwrap(),
            500.0
        );
        assert_eq!(
            integrate_power(&series(&[(0.0, 100.0), (5.0, 200.0), (15.0, 100.0)]), None).unwrap(),
            2250.0
        );
    }

    #[test]
    fn windowed_integration() {
        let s = series(&[(0.0, 100.0), (10.0, 100.0)]);
        assert_eq!(integrate_power(&s, Some((2.0, 7.0))).unwrap(), 500.0);
        assert_eq!(integrate_power(&s, Some((3.0, 3.0))).unwrap(), 0.0);
        assert!(integrate_power(&s, Some((-1.0, 5.0))).is_err());
        assert!(integrate_power(&s, Some((0.0, 11.0))).is_err());
        let single = series(&[(5.0, 42.0)]);
        assert_eq!(integrate_power(&single, None).unwrap(), 0.0);
        assert!(integrate_power(&single, Some((5.0, 6.0))).is_err());
    }

    #[test]
    fn window_additivity() {
        let s = series(&[(0.0, 100.0), (5.0, 200.0), (15.0, 100.0)]);
        let whole = integrate_power(&s, Some((1.0, 12.0))).unwrap();
        let left = integrate_power(&s, Some((1.0, 7.0))).unwrap();
        let right = integrate_power(&s, Some((7.0, 12.0))).unwrap();
        assert!((whole - (left + right)).abs() < 1e-9);
    }

    #[test]
    fn classical_energy_constant_pue() {
        let spec = ClassicalOverheadSpec {
            it_series: vec![series(&[(0.0, 100.0), (10.0, 100.0)])],
            counter_file: None,
            pue: PueProfile::constant(1.5),
            shared_joules: 100.0,
            net_wan_joules: 50.0,
            storage_joules: 25.0,
        };
        assert_eq!(classical_energy(&spec).unwrap(), 1675.0);
    }

    #[test]
    fn classical_energy_interval_split() {
        let spec = ClassicalOverheadSpec {
            it_series: vec![series(&[(0.0, 100.0), (20.0, 100.0)])],
            counter_file: None,
            pue: PueProfile {
                intervals: vec![(0.0, 1.0), (10.0, 2.0)],
            },
            shared_joules: 0.0,
            net_wan_joules: 0.0,
            storage_joules: 0.0,
        };
        assert_eq!(classical_energy(&spec).unwrap(), 3000.0);
    }

    #[test]
    fn classical_energy_rejects_pre_job_samples() {
        let spec = ClassicalOverheadSpec {
            it_series: vec![series(&[(-5.0, 100.0), (5.0, 100.0)])],
            counter_file: None,
            pue: PueProfile::default(),
            shared_joules: 0.0,
            net_wan_joules: 0.0,
            storage_joules: 0.0,
        };
        assert!(classical_energy(&spec).is_err());
    }

    #[test]
    fn classical_energy_constants_only() {
        let spec = ClassicalOverheadSpec {
            it_series: vec![],
            counter_file: None,
            pue: PueProfile::default(),
            shared_joules: 10.0,
            net_wan_joules: 20.0,
            storage_joules: 30.0,
        };
        assert_eq!(classical_energy(&spec).unwrap(), 60.0);
    }

    #[test]
    fn maintenance_product_and_advisory() {
        let profiles = builtin_profiles();
        let sc = &profiles["superconducting"];
        let m = maintenance_energy(sc, 991.0).unwrap();
        assert_eq!(m.joules, 24_775_000.0);
        assert!(m.double_count_advisory);
        let zero = maintenance_energy(sc, 0.0).unwrap();
        assert_eq!(zero.joules, 0.0);
        assert!(!zero.double_count_advisory);
        assert!(maintenance_energy(sc, -1.0).is_err());

        let mut megawatt = sc.clone();
        megawatt.maintenance_power_watts = 1e6;
        assert_eq!(maintenance_energy(&megawatt, 3600.0).unwrap().joules, 3.6e9);
    }

    #[test]
    fn total_requires_exactly_one_exec_term() {
        use std::collections::BTreeMap;
        let nisq = NisqBreakdown {
            per_fold_gate_counts: BTreeMap::new(),
            per_fold_energy_joules: BTreeMap::new(),
            baseline_shot_energy_joules: 3.0,
            qem_overhead_joules: 0.0,
            m3_calibration_joules: 0.0,
            total_exec_joules: 3.0,
        };
        let total = total_energy(1.0, 2.0, Some(nisq.clone()), None).unwrap();
        assert_eq!(total.e_tot_joules, 6.0);
        assert!(total_energy(1.0, 2.0, None, None).is_err());
        let ftqc = FtqcBreakdown {
            distance: 3,
            n_patches: 1,
            physical_qubits: 17,
            v_ls_cells: 1.0,
            e_cyc_joules: 1.0,
            lattice_energy_joules: 1.0,
            e_ms_joules: 0.0,
            magic_energy_joules: 0.0,
            e_dec_joules: 0.0,
            stall_factor: 1.0,
            wall_seconds: 1.0,
            total_exec_joules: 1.0,
        };
        assert!(total_energy(1.0, 2.0, Some(nisq), Some(ftqc)).is_err());
    }

    #[test]
    fn speedup_ratio() {
        assert_eq!(required_speedup(25e3, 250.0).unwrap(), 100.0);
        assert_eq!(required_speedup(1e3, 1e3).unwrap(), 1.0);
        assert_eq!(required_speedup(10e3, 100.0).unwrap(), 100.0);
        assert!(required_speedup(0.0, 1.0).is_err());
    }

    #[test]
    fn counter_rows_group_by_label() {
        let text = "\
# label, t, watts
node0, 0.0, 100
node0, 10.0, 100
gpu0, 0.0, 250
gpu0, 5.0, 300
";
        let series = parse_counter_rows(text).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].label, "node0");
        assert_eq!(series[0].samples.len(), 2);
        assert_eq!(series[1].label, "gpu0");
        assert!(parse_counter_rows("a, 1.0\n").is_err());
        assert!(parse_counter_rows("a, 5.0, 1\na, 1.0, 1\n").is_err());
    }
}
