//! Scenario files (TOML). Field names carry their units.
//!
//! Paths inside a scenario are resolved relative to the scenario file. The
//! value `"default"` selects the built-in topology or Raman table.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::topology_file::{parse_topology, DEFAULT_TOPOLOGY};
use crate::network::{build_topology, uniform_qkd_demands, QkdDemand};
use crate::physmodels::{CvQkdParams, Detection, FiberParams, RamanSpectrum, DEFAULT_TABLE};
use crate::planner::{PlanContext, PlannerConfig, QPlacement, WavelengthPolicy};
use crate::spectrum::WdmGrid;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub description: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub lambda_scale: f64,
    #[serde(default = "default_ref")]
    pub topology: String,
    #[serde(default = "default_ref")]
    pub raman_table: String,
    #[serde(default)]
    pub fiber: FiberSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub quantum: QuantumSection,
    #[serde(default)]
    pub cvqkd: CvQkdSection,
    #[serde(default)]
    pub qkd: QkdSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub planner: Vec<PlannerSection>,
    #[serde(default)]
    pub compare: CompareSection,
    #[serde(default)]
    pub placement_sweep: PlacementSection,
}

fn default_seed() -> u64 {
    1
}

fn default_ref() -> String {
    "default".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSection {
    pub alpha_db_per_km: f64,
}

impl Default for FiberSection {
    fn default() -> Self {
        FiberSection { alpha_db_per_km: 0.2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub f_start_thz: f64,
    pub spacing_ghz: f64,
    pub n_slots: usize,
    pub band_min_thz: f64,
    pub band_max_thz: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            f_start_thz: 191.6,
            spacing_ghz: 100.0,
            n_slots: 40,
            band_min_thz: crate::spectrum::C_BAND_THZ.0,
            band_max_thz: crate::spectrum::C_BAND_THZ.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumSection {
    pub placement: QPlacement,
}

impl Default for QuantumSection {
    fn default() -> Self {
        QuantumSection {
            placement: QPlacement::SweepOptimal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CvQkdSection {
    pub v_a_snu: f64,
    pub beta: f64,
    pub xi_base_snu: f64,
    pub eta_det: f64,
    pub v_el_snu: f64,
    pub detection: Detection,
    pub f_sym_baud: f64,
    pub b_q_ghz: f64,
}

impl Default for CvQkdSection {
    fn default() -> Self {
        let p = CvQkdParams::default();
        CvQkdSection {
            v_a_snu: p.v_a,
            beta: p.beta,
            xi_base_snu: p.xi_base,
            eta_det: p.eta_det,
            v_el_snu: p.v_el,
            detection: p.detection,
            f_sym_baud: p.f_sym,
            b_q_ghz: p.b_q_ghz,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QkdPattern {
    UniformAllPairs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QkdSection {
    pub total_bps: f64,
    pub pattern: QkdPattern,
}

impl Default for QkdSection {
    fn default() -> Self {
        QkdSection {
            total_bps: 0.0,
            pattern: QkdPattern::UniformAllPairs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub offered_lightpaths: Vec<usize>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection {
            offered_lightpaths: (1..=10).map(|i| i * 20).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerSection {
    #[serde(default)]
    pub margin: f64,
    pub policy: WavelengthPolicy,
    pub p_classical_dbm: f64,
    #[serde(default = "default_k")]
    pub k_paths: usize,
    #[serde(default)]
    pub classical_only: bool,
}

fn default_k() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSection {
    pub margin: f64,
    pub k_paths: usize,
}

impl Default for CompareSection {
    fn default() -> Self {
        CompareSection {
            margin: 0.12,
            k_paths: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlacementSection {
    pub length_km: f64,
    pub p_per_channel_dbm: f64,
}

impl Default for PlacementSection {
    fn default() -> Self {
        PlacementSection {
            length_km: 10.0,
            p_per_channel_dbm: 0.0,
        }
    }
}

/// A scenario with every referenced file loaded and every value checked.
#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub context: PlanContext,
    pub qkd_demands: Vec<QkdDemand>,
    pub planners: Vec<PlannerConfig>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl Scenario {
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((0, 0));
            Error::Parse {
                source_name: source_name.to_string(),
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Scenario::parse(&read(path)?, &path.display().to_string())
    }

    /// Loads referenced files (relative to `base_dir`) and validates everything.
    pub fn load(self, base_dir: &Path) -> Result<LoadedScenario> {
        let resolve = |r: &str| -> PathBuf { base_dir.join(r) };
        let topo_spec = if self.topology == "default" {
            parse_topology(DEFAULT_TOPOLOGY, "spain7.topo")?
        } else {
            let p = resolve(&self.topology);
            parse_topology(&read(&p)?, &p.display().to_string())?
        };
        let raman = if self.raman_table == "default" {
            RamanSpectrum::parse(DEFAULT_TABLE, "raman_default.txt")?
        } else {
            let p = resolve(&self.raman_table);
            RamanSpectrum::parse(&read(&p)?, &p.display().to_string())?
        };
        let topology = build_topology(&topo_spec, self.lambda_scale)?;
        let fiber = FiberParams::new(self.fiber.alpha_db_per_km, Arc::new(raman))?;
        let g = &self.grid;
        let grid = WdmGrid::new(
            g.f_start_thz,
            g.spacing_ghz,
            g.n_slots,
            (g.band_min_thz, g.band_max_thz),
        )?;
        let c = &self.cvqkd;
        let cvqkd = CvQkdParams {
            v_a: c.v_a_snu,
            beta: c.beta,
            xi_base: c.xi_base_snu,
            eta_det: c.eta_det,
            v_el: c.v_el_snu,
            detection: c.detection,
            f_sym: c.f_sym_baud,
            b_q_ghz: c.b_q_ghz,
            nu_q_thz: grid.slot_freq_thz(0),
        };
        cvqkd.validate()?;
        if !(self.qkd.total_bps >= 0.0 && self.qkd.total_bps.is_finite()) {
            return Err(Error::invalid("qkd.total_bps must be >= 0"));
        }
        if self.sweep.offered_lightpaths.is_empty() {
            return Err(Error::invalid("sweep.offered_lightpaths is empty"));
        }
        let len = self.placement_sweep.length_km;
        if len.is_nan() || len < 0.0 {
            return Err(Error::invalid("placement_sweep.length_km must be >= 0"));
        }
        let context = PlanContext {
            topology,
            grid,
            fiber,
            cvqkd,
        };
        context.resolve_q_slot(self.quantum.placement)?;
        let qkd_demands = match self.qkd.pattern {
            QkdPattern::UniformAllPairs => uniform_qkd_demands(&context.topology, self.qkd.total_bps),
        };
        let planners = self
            .planner
            .iter()
            .map(|p| {
                let cfg = PlannerConfig {
                    margin: p.margin,
                    wavelength_policy: p.policy,
                    p_classical_dbm: p.p_classical_dbm,
                    k_paths: p.k_paths,
                    q_placement: self.quantum.placement,
                    classical_only: p.classical_only,
                };
                cfg.validate().map(|_| cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        let compare = PlannerConfig {
            margin: self.compare.margin,
            k_paths: self.compare.k_paths,
            q_placement: self.quantum.placement,
            ..PlannerConfig::default()
        };
        compare.validate()?;
        Ok(LoadedScenario {
            scenario: self,
            context,
            qkd_demands,
            planners,
        })
    }
}

impl LoadedScenario {
    pub fn from_path(path: &Path) -> Result<Self> {
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Scenario::from_path(path)?.load(base)
    }

    /// Base configuration for the five-way comparison.
    pub fn compare_base(&self) -> PlannerConfig {
        PlannerConfig {
            k_paths: self.scenario.compare.k_paths,
            q_placement: self.scenario.quantum.placement,
            ..PlannerConfig::default()
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, column)
}
