//! C-band WDM grid, quantum channel placement, and quantum-aware
//! wavelength assignment (QAWA) ordering of classical slots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physmodels::{raman_coefficient, spurs_power_forward, FiberParams};

/// Uniform fixed grid of WDM slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WdmGrid {
    pub f_start_thz: f64,
    pub spacing_ghz: f64,
    pub n_slots: usize,
}

/// C band window used when none is configured, THz.
pub const C_BAND_THZ: (f64, f64) = (191.5, 196.0);

impl WdmGrid {
    pub fn new(f_start_thz: f64, spacing_ghz: f64, n_slots: usize, band_thz: (f64, f64)) -> Result<Self> {
        if n_slots < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 slots, got {n_slots}")));
        }
        if !(spacing_ghz > 0.0 && spacing_ghz.is_finite()) {
            return Err(Error::invalid(format!(
                "slot spacing must be > 0 GHz, got {spacing_ghz}"
            )));
        }
        let grid = WdmGrid {
            f_start_thz,
            spacing_ghz,
            n_slots,
        };
        let end = grid.f_start_thz + grid.n_slots as f64 * grid.spacing_ghz * 1e-3;
        if !(f_start_thz >= band_thz.0 && end <= band_thz.1 + 1e-9) {
            return Err(Error::invalid(format!(
                "grid [{f_start_thz}, {end}] THz leaves the band [{}, {}] THz",
                band_thz.0, band_thz.1
            )));
        }
        Ok(grid)
    }

    /// 40 slots at 100 GHz from 191.6 THz.
    pub fn c_band_default() -> Self {
        WdmGrid::new(191.6, 100.0, 40, C_BAND_THZ).unwrap()
    }

    pub fn slot_freq_thz(&self, slot: usize) -> f64 {
        self.f_start_thz + slot as f64 * self.spacing_ghz * 1e-3
    }

    fn check_slot(&self, slot: usize) -> Result<()> {
        if slot < self.n_slots {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "slot {slot} outside grid of {} slots",
                self.n_slots
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelAssignment {
    pub q_slot: usize,
    /// (slot, launch power dBm)
    pub classical_slots: Vec<(usize, f64)>,
}

impl ChannelAssignment {
    pub fn validate(&self, grid: &WdmGrid) -> Result<()> {
        grid.check_slot(self.q_slot)?;
        let mut seen = vec![false; grid.n_slots];
        for &(slot, p) in &self.classical_slots {
            grid.check_slot(slot)?;
            if slot == self.q_slot {
                return Err(Error::invalid(format!("classical slot {slot} is the quantum slot")));
            }
            if std::mem::replace(&mut seen[slot], true) {
                return Err(Error::invalid(format!("classical slot {slot} listed twice")));
            }
            if !p.is_finite() {
                return Err(Error::invalid(format!("launch power of slot {slot} is not finite")));
            }
        }
        Ok(())
    }
}

/// SpRS power collected at `q_slot` from one classical channel in `slot`.
pub fn slot_spurs(
    grid: &WdmGrid,
    q_slot: usize,
    slot: usize,
    p_launch_w: f64,
    fiber: &FiberParams,
    length_km: f64,
    b_q_ghz: f64,
) -> Result<f64> {
    let rho = raman_coefficient(&fiber.raman, grid.slot_freq_thz(slot), grid.slot_freq_thz(q_slot))?;
    spurs_power_forward(p_launch_w, length_km, fiber, rho, b_q_ghz)
}

pub fn aggregate_spurs(
    grid: &WdmGrid,
    assignment: &ChannelAssignment,
    fiber: &FiberParams,
    length_km: f64,
    b_q_ghz: f64,
) -> Result<f64> {
    assignment.validate(grid)?;
    assignment
        .classical_slots
        .iter()
        .map(|&(slot, dbm)| {
            slot_spurs(
                grid,
                assignment.q_slot,
                slot,
                crate::physmodels::dbm_to_w(dbm),
                fiber,
                length_km,
                b_q_ghz,
            )
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementSweep {
    /// (candidate quantum slot, aggregate SpRS W) ordered by slot.
    pub entries: Vec<(usize, f64)>,
    pub argmin: usize,
}

/// Aggregate SpRS at every candidate quantum slot with all other slots lit at `p_per_channel_dbm`.
pub fn placement_sweep(
    grid: &WdmGrid,
    fiber: &FiberParams,
    length_km: f64,
    p_per_channel_dbm: f64,
    b_q_ghz: f64,
) -> Result<PlacementSweep> {
    let mut entries = Vec::with_capacity(grid.n_slots);
    for q in 0..grid.n_slots {
        let assignment = ChannelAssignment {
            q_slot: q,
            classical_slots: (0..grid.n_slots)
                .filter(|&s| s != q)
                .map(|s| (s, p_per_channel_dbm))
                .collect(),
        };
        entries.push((q, aggregate_spurs(grid, &assignment, fiber, length_km, b_q_ghz)?));
    }
    let argmin = entries
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|e| e.0)
        .expect("grid has at least two slots");
    Ok(PlacementSweep { entries, argmin })
}

/// Non-quantum slots sorted by unit-power SpRS onto `q_slot`, ties by index.
pub fn qawa_order(
    grid: &WdmGrid,
    q_slot: usize,
    fiber: &FiberParams,
    length_km: f64,
    b_q_ghz: f64,
) -> Result<Vec<usize>> {
    grid.check_slot(q_slot)?;
    let mut keyed = Vec::with_capacity(grid.n_slots - 1);
    for slot in (0..grid.n_slots).filter(|&s| s != q_slot) {
        keyed.push((slot_spurs(grid, q_slot, slot, 1.0, fiber, length_km, b_q_ghz)?, slot));
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(keyed.into_iter().map(|(_, s)| s).collect())
}

/// Ascending slot index, skipping the quantum slot.
pub fn first_fit_order(grid: &WdmGrid, q_slot: usize) -> Vec<usize> {
    (0..grid.n_slots).filter(|&s| s != q_slot).collect()
}
