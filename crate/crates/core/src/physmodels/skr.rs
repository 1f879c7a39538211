//! Asymptotic secret key rate of Gaussian-modulated coherent-state CV-QKD
//! under collective attacks, reverse reconciliation, trusted detector noise.
//!
//! All variances are in shot-noise units. `T` is the channel transmittance
//! and `xi` the excess noise referred to the channel input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detection {
    Homodyne,
    Heterodyne,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvQkdParams {
    /// Modulation variance (SNU).
    pub v_a: f64,
    /// Reconciliation efficiency.
    pub beta: f64,
    /// Intrinsic excess noise at the channel input (SNU).
    pub xi_base: f64,
    pub eta_det: f64,
    /// Electronic noise (SNU).
    pub v_el: f64,
    pub detection: Detection,
    /// Symbol rate (symbols/s).
    pub f_sym: f64,
    /// Receiver optical bandwidth (GHz).
    pub b_q_ghz: f64,
    /// Quantum channel optical frequency (THz).
    pub nu_q_thz: f64,
}

impl Default for CvQkdParams {
    /// Artifact defaults: heterodyne, ideal trusted detector.
    fn default() -> Self {
        CvQkdParams {
            v_a: 4.0,
            beta: 0.95,
            xi_base: 0.01,
            eta_det: 1.0,
            v_el: 0.0,
            detection: Detection::Heterodyne,
            f_sym: 100e6,
            b_q_ghz: 12.5,
            nu_q_thz: 193.6,
        }
    }
}

impl CvQkdParams {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::invalid(format!("CV-QKD parameter out of range: {what}")))
            }
        };
        check(self.v_a > 0.0 && self.v_a.is_finite(), "v_a > 0")?;
        check(self.beta > 0.0 && self.beta <= 1.0, "0 < beta <= 1")?;
        check(self.xi_base >= 0.0 && self.xi_base.is_finite(), "xi_base >= 0")?;
        check(self.eta_det > 0.0 && self.eta_det <= 1.0, "0 < eta_det <= 1")?;
        check(self.v_el >= 0.0 && self.v_el.is_finite(), "v_el >= 0")?;
        check(self.f_sym > 0.0 && self.f_sym.is_finite(), "f_sym > 0")?;
        check(self.b_q_ghz > 0.0 && self.b_q_ghz.is_finite(), "b_q > 0")?;
        check(self.nu_q_thz > 0.0 && self.nu_q_thz.is_finite(), "nu_q > 0")?;
        Ok(())
    }

    /// Detection-added noise referred to Bob's input.
    pub fn chi_det(&self) -> f64 {
        let eta = self.eta_det;
        match self.detection {
            Detection::Homodyne => (1.0 - eta + self.v_el) / eta,
            Detection::Heterodyne => (2.0 - eta + 2.0 * self.v_el) / eta,
        }
    }
}

/// Symplectic eigenvalues entering the Holevo bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticSpectrum {
    /// Eigenvalues of the Alice–Bob state before detection.
    pub ab: [f64; 2],
    /// Eigenvalues of the state conditioned on Bob's measurement; the third is always 1.
    pub conditional: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KeyRate {
    pub i_ab: f64,
    pub chi_be: f64,
    pub bits_per_symbol: f64,
    pub bits_per_second: f64,
}

/// Roots of x² − s·x + p = 0, returned as square roots (largest first).
/// The small root is taken from the product to avoid cancellation.
fn sqrt_roots(s: f64, p: f64) -> (f64, f64) {
    let disc = (s * s - 4.0 * p).max(0.0);
    let big = 0.5 * (s + disc.sqrt());
    let small = if big > 0.0 { p / big } else { 0.0 };
    (big.sqrt(), small.max(0.0).sqrt())
}

fn check_channel(t: f64, xi: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        if t == 0.0 {
            return Err(Error::Singular("transmittance is zero".into()));
        }
        return Err(Error::invalid(format!("transmittance {t} not in (0, 1]")));
    }
    if !(xi >= 0.0 && xi.is_finite()) {
        return Err(Error::invalid(format!("excess noise {xi} must be finite and >= 0")));
    }
    Ok(())
}

/// Closed-form symplectic eigenvalues for transmittance `t` and input-referred excess noise `xi`.
pub fn symplectic_eigenvalues(params: &CvQkdParams, t: f64, xi: f64) -> Result<SymplecticSpectrum> {
    check_channel(t, xi)?;
    let v = params.v_a + 1.0;
    let chi_line = 1.0 / t - 1.0 + xi;
    let chi_det = params.chi_det();
    let chi_tot = chi_line + chi_det / t;

    let a = v * v * (1.0 - 2.0 * t) + 2.0 * t + t * t * (v + chi_line).powi(2);
    let b = (t * (v * chi_line + 1.0)).powi(2);
    let sqrt_b = b.sqrt();
    let (l1, l2) = sqrt_roots(a, b);

    let denom = t * (v + chi_tot);
    let (c, d) = match params.detection {
        Detection::Homodyne => {
            let c = (a * chi_det + v * sqrt_b + t * (v + chi_line)) / denom;
            let d = sqrt_b * (v + sqrt_b * chi_det) / denom;
            (c, d)
        }
        Detection::Heterodyne => {
            let c = (a * chi_det * chi_det
                + b
                + 1.0
                + 2.0 * chi_det * (v * sqrt_b + t * (v + chi_line))
                + 2.0 * t * (v * v - 1.0))
                / (denom * denom);
            let d = ((v + sqrt_b * chi_det) / denom).powi(2);
            (c, d)
        }
    };
    let (l3, l4) = sqrt_roots(c, d);
    let out = SymplecticSpectrum {
        ab: [l1, l2],
        conditional: [l3, l4, 1.0],
    };
    if out.ab.iter().chain(out.conditional.iter()).all(|x| x.is_finite()) {
        Ok(out)
    } else {
        Err(Error::NumericFailure(format!(
            "non-finite symplectic eigenvalue at T={t}, xi={xi}: {out:?}"
        )))
    }
}

/// Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue `nu`.
pub fn entropy_of_mode(nu: f64) -> f64 {
    let x = ((nu - 1.0) / 2.0).max(0.0);
    if x == 0.0 {
        return 0.0;
    }
    (x + 1.0) * (x + 1.0).log2() - x * x.log2()
}

pub fn mutual_information(params: &CvQkdParams, t: f64, xi: f64) -> Result<f64> {
    check_channel(t, xi)?;
    let v = params.v_a + 1.0;
    let chi_tot = 1.0 / t - 1.0 + xi + params.chi_det() / t;
    let snr_term = ((v + chi_tot) / (1.0 + chi_tot)).log2();
    Ok(match params.detection {
        Detection::Homodyne => 0.5 * snr_term,
        Detection::Heterodyne => snr_term,
    })
}

/// Holevo information between Bob's data and the eavesdropper, in bits/symbol.
pub fn holevo_bound(params: &CvQkdParams, t: f64, xi: f64) -> Result<f64> {
    let s = symplectic_eigenvalues(params, t, xi)?;
    let before: f64 = s.ab.iter().map(|&l| entropy_of_mode(l)).sum();
    let after: f64 = s.conditional.iter().map(|&l| entropy_of_mode(l)).sum();
    Ok(before - after)
}

/// GG02 asymptotic key rate, clamped at zero.
pub fn skr_gg02(params: &CvQkdParams, t: f64, xi_total: f64) -> Result<KeyRate> {
    params.validate()?;
    let i_ab = mutual_information(params, t, xi_total)?;
    let chi_be = holevo_bound(params, t, xi_total)?;
    let bits_per_symbol = (params.beta * i_ab - chi_be).max(0.0);
    let rate = KeyRate {
        i_ab,
        chi_be,
        bits_per_symbol,
        bits_per_second: params.f_sym * bits_per_symbol,
    };
    if rate.i_ab.is_finite() && rate.chi_be.is_finite() && rate.bits_per_second.is_finite() {
        Ok(rate)
    } else {
        Err(Error::NumericFailure(format!(
            "non-finite key rate at T={t}, xi={xi_total}: {rate:?}"
        )))
    }
}
