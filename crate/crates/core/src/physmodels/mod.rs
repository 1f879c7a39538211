//! Physical-layer models: fiber loss, forward spontaneous Raman scattering
//! onto the quantum channel, and the resulting CV-QKD key rate.

mod raman;
mod skr;

use std::sync::Arc;

pub use raman::{raman_coefficient, RamanSpectrum, DEFAULT_TABLE, MIN_HALF_SPAN_GHZ};
pub use skr::{
    entropy_of_mode, holevo_bound, mutual_information, skr_gg02, symplectic_eigenvalues, CvQkdParams, Detection,
    KeyRate, SymplecticSpectrum,
};

use crate::error::{Error, Result};

pub const PLANCK_J_S: f64 = 6.626_070_15e-34;

#[derive(Clone, Debug)]
pub struct FiberParams {
    pub alpha_db_per_km: f64,
    pub raman: Arc<RamanSpectrum>,
}

impl FiberParams {
    pub fn new(alpha_db_per_km: f64, raman: Arc<RamanSpectrum>) -> Result<Self> {
        if !(alpha_db_per_km > 0.0 && alpha_db_per_km.is_finite()) {
            return Err(Error::invalid(format!(
                "attenuation must be > 0 dB/km, got {alpha_db_per_km}"
            )));
        }
        Ok(FiberParams { alpha_db_per_km, raman })
    }

    /// Standard single-mode fiber at 0.2 dB/km with the shipped Raman table.
    pub fn standard() -> Self {
        FiberParams::new(0.2, Arc::new(RamanSpectrum::default_table())).unwrap()
    }
}

pub fn dbm_to_w(dbm: f64) -> f64 {
    1e-3 * 10f64.powf(dbm / 10.0)
}

pub fn transmittance(length_km: f64, alpha_db_per_km: f64) -> Result<f64> {
    if !(length_km >= 0.0 && length_km.is_finite()) {
        return Err(Error::invalid(format!("length must be >= 0 km, got {length_km}")));
    }
    Ok(10f64.powf(-alpha_db_per_km * length_km / 10.0))
}

/// Co-propagating SpRS power (W) collected in `b_q_ghz` at the far end of the span.
///
/// Pump and probe attenuation are taken equal, so the effective interaction
/// length is the span length itself.
pub fn spurs_power_forward(
    p_launch_w: f64,
    length_km: f64,
    fiber: &FiberParams,
    rho: f64,
    b_q_ghz: f64,
) -> Result<f64> {
    for (name, x) in [
        ("launch power", p_launch_w),
        ("length", length_km),
        ("Raman coefficient", rho),
        ("bandwidth", b_q_ghz),
    ] {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(Error::invalid(format!("{name} must be finite and >= 0, got {x}")));
        }
    }
    let t = transmittance(length_km, fiber.alpha_db_per_km)?;
    Ok(p_launch_w * rho * b_q_ghz * length_km * t)
}

/// Excess noise (SNU, channel input) caused by `p_raman_w` of noise reaching the receiver.
pub fn raman_to_excess_noise(p_raman_w: f64, t: f64, nu_q_thz: f64, b_q_ghz: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::Singular("transmittance is zero".into()));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::invalid(format!("transmittance {t} not in (0, 1]")));
    }
    if !(p_raman_w >= 0.0 && p_raman_w.is_finite()) {
        return Err(Error::invalid(format!("Raman power must be >= 0, got {p_raman_w}")));
    }
    let photon_flux_per_mode = PLANCK_J_S * nu_q_thz * 1e12 * b_q_ghz * 1e9;
    let n = p_raman_w / photon_flux_per_mode;
    Ok(2.0 * n / t)
}

/// Key rate (bits/s) for a span of `length_km` given the aggregate SpRS power at the receiver.
pub fn skr_with_raman_power(fiber: &FiberParams, length_km: f64, params: &CvQkdParams, p_raman_w: f64) -> Result<f64> {
    let t = transmittance(length_km, fiber.alpha_db_per_km)?;
    let xi = params.xi_base + raman_to_excess_noise(p_raman_w, t, params.nu_q_thz, params.b_q_ghz)?;
    Ok(skr_gg02(params, t, xi)?.bits_per_second)
}

/// Total forward SpRS power at the quantum channel from a set of classical
/// channels given as (launch power W, frequency THz).
pub fn raman_power_from_load(
    fiber: &FiberParams,
    length_km: f64,
    params: &CvQkdParams,
    classical_load: &[(f64, f64)],
) -> Result<f64> {
    let mut total = 0.0;
    for &(p_w, freq_thz) in classical_load {
        if freq_thz == params.nu_q_thz {
            return Err(Error::invalid(format!(
                "classical channel at {freq_thz} THz coincides with the quantum channel"
            )));
        }
        let rho = raman_coefficient(&fiber.raman, freq_thz, params.nu_q_thz)?;
        total += spurs_power_forward(p_w, length_km, fiber, rho, params.b_q_ghz)?;
    }
    Ok(total)
}

pub fn link_skr(
    fiber: &FiberParams,
    length_km: f64,
    params: &CvQkdParams,
    classical_load: &[(f64, f64)],
) -> Result<f64> {
    let p = raman_power_from_load(fiber, length_km, params, classical_load)?;
    skr_with_raman_power(fiber, length_km, params, p)
}
