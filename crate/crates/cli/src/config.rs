//! Experiment configuration: a flat JSON object, every field optional.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use gravwit::{ExpectationMode, Geometry};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    /// Hold time in units of `πħD/(G m²)`, damping rates in `G m²/(πħD)`.
    #[default]
    Dimensionless,
    /// Hold time in seconds, damping rates in 1/s, geometry in SI.
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMode {
    #[default]
    Trace,
    PaperLiteral,
}

impl From<WitnessMode> for ExpectationMode {
    fn from(m: WitnessMode) -> Self {
        match m {
            WitnessMode::Trace => ExpectationMode::TraceDerived,
            WitnessMode::PaperLiteral => ExpectationMode::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMethodArg {
    #[default]
    Exact,
    LargeT,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// `[start, stop, steps]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range(pub f64, pub f64, pub usize);

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let Range(start, stop, steps) = *self;
        (0..steps)
            .map(|k| {
                if k + 1 == steps {
                    stop
                } else {
                    start + (stop - start) * k as f64 / (steps - 1) as f64
                }
            })
            .collect()
    }

    fn validate(&self, field: &str) -> Result<(), CliError> {
        let Range(start, stop, steps) = *self;
        if steps < 2 {
            return Err(CliError::Config(format!(
                "{field}: steps must be at least 2, got {steps}"
            )));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(CliError::Config(format!("{field}: range must be finite")));
        }
        Ok(())
    }
}

pub const DEFAULT_STEPS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: UnitMode,
    pub theta_range: Option<Range>,
    #[serde(rename = "T_range", alias = "t_range")]
    pub t_range: Option<Range>,
    /// L/D
    pub r: f64,
    pub coherences: Option<Vec<[f64; 2]>>,
    /// `(γ_A, γ_B)` pairs.
    pub dampings: Option<Vec<[f64; 2]>>,
    pub seed: u64,
    /// Separable channels drawn by `witness-check`.
    pub samples: usize,
    pub witness_mode: WitnessMode,
    pub phase_method: PhaseMethodArg,
    pub quadrature_steps: usize,
    /// SI geometry: D in m, τ in s, masses in kg.
    pub separation: f64,
    pub split_time: f64,
    pub mass_a: f64,
    pub mass_b: f64,
    pub gravitational_constant: f64,
    pub hbar: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: UnitMode::Dimensionless,
            theta_range: None,
            t_range: None,
            r: 0.5,
            coherences: None,
            dampings: None,
            seed: 0,
            samples: 10_000,
            witness_mode: WitnessMode::Trace,
            phase_method: PhaseMethodArg::Exact,
            quadrature_steps: 10_000,
            separation: 250e-6,
            split_time: 0.0,
            mass_a: 1e-14,
            mass_b: 1e-14,
            gravitational_constant: 6.674_30e-11,
            hbar: 1.054_571_817e-34,
            out: None,
            format: Format::Csv,
        }
    }
}

/// Flag values; each one set replaces the config value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub witness_mode: Option<WitnessMode>,
    pub phase_method: Option<PhaseMethodArg>,
    pub samples: Option<usize>,
}

/// Sweep axis after resolving ranges and units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    Theta(Range),
    PanelTime(Range),
    Seconds(Range),
}

impl Axis {
    pub fn header(&self) -> &'static str {
        match self {
            Axis::Theta(_) => "theta_rad",
            Axis::PanelTime(_) => "T_in_units_piħD_over_Gm2",
            Axis::Seconds(_) => "T_s",
        }
    }

    pub fn range(&self) -> Range {
        match *self {
            Axis::Theta(r) | Axis::PanelTime(r) | Axis::Seconds(r) => r,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!(
                "invalid config (line {}, column {}): {e}",
                e.line(),
                e.column()
            ))
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(m) = o.witness_mode {
            self.witness_mode = m;
        }
        if let Some(m) = o.phase_method {
            self.phase_method = m;
        }
        if let Some(n) = o.samples {
            self.samples = n;
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.r > 0.0 && self.r < 1.0) {
            return Err(CliError::Config(format!(
                "r: must lie in (0, 1), got {}",
                self.r
            )));
        }
        if let Some(r) = &self.theta_range {
            r.validate("theta_range")?;
        }
        if let Some(r) = &self.t_range {
            r.validate("T_range")?;
        }
        if self.theta_range.is_some() && self.t_range.is_some() {
            return Err(CliError::Config(
                "set only one of theta_range and T_range".into(),
            ));
        }
        if self.mode == UnitMode::Si && self.theta_range.is_some() {
            return Err(CliError::Config(
                "theta_range is dimensionless; use T_range in si mode".into(),
            ));
        }
        let axis = self.t_range.or(self.theta_range);
        if let Some(Range(start, stop, _)) = axis {
            if start < 0.0 || stop < 0.0 {
                return Err(CliError::Config("ranges must be non-negative".into()));
            }
        }
        for (k, [c1, c2]) in self.coherences.iter().flatten().enumerate() {
            if !(c1.abs() <= 1.0 && c2.abs() <= 1.0) {
                return Err(CliError::Config(format!(
                    "coherences[{k}]: entries must lie in [-1, 1], got ({c1}, {c2})"
                )));
            }
        }
        for (k, [ga, gb]) in self.dampings.iter().flatten().enumerate() {
            if !(ga.is_finite() && gb.is_finite() && *ga >= 0.0 && *gb >= 0.0) {
                return Err(CliError::Config(format!(
                    "dampings[{k}]: rates must be finite and non-negative"
                )));
            }
        }
        if self.quadrature_steps < 100 {
            return Err(CliError::Config(
                "quadrature_steps: must be at least 100".into(),
            ));
        }
        if self.mode == UnitMode::Si {
            self.geometry(self.axis(Range(0.0, 1.0, DEFAULT_STEPS)).range().1)
                .validate()
                .map_err(|e| CliError::Config(format!("geometry: {e}")))?;
        }
        Ok(())
    }

    /// Sweep axis, falling back to `default` (in panel units, or seconds in si mode).
    pub fn axis(&self, default: Range) -> Axis {
        match (self.mode, self.theta_range, self.t_range) {
            (UnitMode::Si, _, t) => Axis::Seconds(t.unwrap_or(default)),
            (UnitMode::Dimensionless, Some(th), _) => Axis::Theta(th),
            (UnitMode::Dimensionless, None, t) => Axis::PanelTime(t.unwrap_or(default)),
        }
    }

    /// Geometry for one hold time. In dimensionless mode the hold time is θ
    /// in natural units (`G = ħ = m = D = 1`).
    pub fn geometry(&self, hold_time: f64) -> Geometry {
        match self.mode {
            UnitMode::Dimensionless => Geometry::natural(self.r, hold_time, 0.0),
            UnitMode::Si => Geometry {
                separation: self.separation,
                span: self.r * self.separation,
                hold_time,
                split_time: self.split_time,
                mass_a: self.mass_a,
                mass_b: self.mass_b,
                gravitational_constant: self.gravitational_constant,
                hbar: self.hbar,
                v_x: None,
                v_y: 0.0,
            },
        }
    }

    pub fn coherences_or(&self, default: &[[f64; 2]]) -> Vec<[f64; 2]> {
        self.coherences.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn dampings_or(&self, default: &[[f64; 2]]) -> Vec<[f64; 2]> {
        self.dampings.clone().unwrap_or_else(|| default.to_vec())
    }
}

pub const DEFAULT_THETA_RANGE: Range = Range(0.0, 2.0 * PI, DEFAULT_STEPS);
pub const DEFAULT_PANEL_RANGE: Range = Range(0.0, 3.0, DEFAULT_STEPS);
pub const DEFAULT_SI_RANGE: Range = Range(0.0, 10.0, DEFAULT_STEPS);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let cfg = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.r, 0.5);
        assert_eq!(cfg.mode, UnitMode::Dimensionless);
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_field_reports_position() {
        let err = ExperimentConfig::from_json("{\n  \"r\": 0.5,\n  \"ratio\": 1\n}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("ratio"), "{msg}");
    }

    #[test]
    fn range_points_hit_endpoints() {
        let pts = Range(0.0, 3.0, 1001).points();
        assert_eq!(pts.len(), 1001);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[500], 1.5);
        assert_eq!(pts[1000], 3.0);
    }

    #[test]
    fn validation_failures() {
        let bad = [
            r#"{"r": 1.0}"#,
            r#"{"r": 0.0}"#,
            r#"{"T_range": [0, 3, 1]}"#,
            r#"{"theta_range": [0, 1, 10], "T_range": [0, 3, 10]}"#,
            r#"{"coherences": [[1.5, 0.2]]}"#,
            r#"{"dampings": [[-0.1, 0.0]]}"#,
            r#"{"mode": "si", "theta_range": [0, 1, 10]}"#,
            r#"{"mode": "si", "mass_a": -1}"#,
        ];
        for text in bad {
            let cfg = ExperimentConfig::from_json(text).unwrap();
            assert!(matches!(cfg.validate(), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut cfg = ExperimentConfig::from_json(r#"{"seed": 3, "format": "json"}"#).unwrap();
        cfg.apply(&Overrides {
            seed: Some(9),
            ..Default::default()
        });
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn axis_resolution() {
        let cfg = ExperimentConfig::default();
        assert_eq!(
            cfg.axis(DEFAULT_PANEL_RANGE),
            Axis::PanelTime(DEFAULT_PANEL_RANGE)
        );
        let th = ExperimentConfig::from_json(r#"{"theta_range": [0, 1, 5]}"#).unwrap();
        assert_eq!(
            th.axis(DEFAULT_PANEL_RANGE),
            Axis::Theta(Range(0.0, 1.0, 5))
        );
        let si = ExperimentConfig::from_json(r#"{"mode": "si"}"#).unwrap();
        assert_eq!(si.axis(DEFAULT_SI_RANGE).header(), "T_s");
    }
}
