//! Tabulated spontaneous Raman scattering coefficient spectrum.
//!
//! Table file format, one record per line:
//!
//! ```text
//! # comment (everything after '#' on any line is ignored)
//! <detuning_ghz> <rho_per_km_per_ghz>
//! ```
//!
//! Fields are separated by ASCII whitespace. Blank lines are skipped. The
//! detuning is pump minus probe frequency in GHz (positive on the Stokes
//! side). Detunings must be strictly increasing, coefficients finite and
//! non-negative, and the table must span at least ±15 THz.

use crate::error::{Error, Result};

/// Minimum one-sided span a table must cover, in GHz.
pub const MIN_HALF_SPAN_GHZ: f64 = 15_000.0;

/// Table shipped with the crate; see the header of the file for how it was generated.
pub const DEFAULT_TABLE: &str = include_str!("../../data/raman_default.txt");

#[derive(Clone, Debug, PartialEq)]
pub struct RamanSpectrum {
    detuning_ghz: Vec<f64>,
    rho: Vec<f64>,
}

impl RamanSpectrum {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::invalid("Raman table needs at least two points"));
        }
        for (i, &(d, r)) in points.iter().enumerate() {
            if !d.is_finite() || !r.is_finite() {
                return Err(Error::invalid(format!("Raman table point {i} is not finite")));
            }
            if r < 0.0 {
                return Err(Error::invalid(format!(
                    "Raman coefficient at {d} GHz is negative ({r})"
                )));
            }
            if i > 0 && d <= points[i - 1].0 {
                return Err(Error::invalid(format!(
                    "Raman table detunings not strictly increasing at {d} GHz"
                )));
            }
        }
        let (detuning_ghz, rho): (Vec<_>, Vec<_>) = points.into_iter().unzip();
        let spectrum = RamanSpectrum { detuning_ghz, rho };
        let (lo, hi) = spectrum.span_ghz();
        if lo > -MIN_HALF_SPAN_GHZ || hi < MIN_HALF_SPAN_GHZ {
            return Err(Error::invalid(format!(
                "Raman table spans [{lo}, {hi}] GHz, needs at least ±{MIN_HALF_SPAN_GHZ} GHz"
            )));
        }
        Ok(spectrum)
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let mut fields = Vec::new();
            let mut pos = 0;
            for tok in content.split_ascii_whitespace() {
                // column of the token, 1-based
                let col = content[pos..].find(tok).map(|o| o + pos).unwrap_or(pos);
                pos = col + tok.len();
                fields.push((col + 1, tok));
            }
            match fields.as_slice() {
                [] => continue,
                [(c1, d), (c2, r)] => {
                    let parse = |col: usize, tok: &str| {
                        tok.parse::<f64>().map_err(|_| Error::Parse {
                            source_name: source_name.to_string(),
                            line: line_no,
                            column: col,
                            message: format!("expected a number, found '{tok}'"),
                        })
                    };
                    points.push((parse(*c1, d)?, parse(*c2, r)?));
                }
                other => {
                    let col = other.get(2).map(|f| f.0).unwrap_or(other[0].0);
                    return Err(Error::Parse {
                        source_name: source_name.to_string(),
                        line: line_no,
                        column: col,
                        message: format!("expected 2 fields 'detuning_ghz rho', found {}", other.len()),
                    });
                }
            }
        }
        RamanSpectrum::new(points)
    }

    pub fn default_table() -> Self {
        RamanSpectrum::parse(DEFAULT_TABLE, "raman_default.txt").expect("shipped Raman table is valid")
    }

    pub fn span_ghz(&self) -> (f64, f64) {
        (self.detuning_ghz[0], *self.detuning_ghz.last().unwrap())
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.detuning_ghz.iter().copied().zip(self.rho.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    /// Piecewise-linear lookup at `detuning_ghz`; no extrapolation.
    pub fn at_detuning(&self, detuning_ghz: f64) -> Result<f64> {
        let (lo, hi) = self.span_ghz();
        if !(detuning_ghz >= lo && detuning_ghz <= hi) {
            return Err(Error::OutOfRange {
                detuning_ghz,
                min_ghz: lo,
                max_ghz: hi,
            });
        }
        // first knot strictly greater than the query
        let upper = self.detuning_ghz.partition_point(|&d| d <= detuning_ghz);
        if upper == 0 {
            return Ok(self.rho[0]);
        }
        let i = upper - 1;
        if self.detuning_ghz[i] == detuning_ghz || i + 1 == self.len() {
            return Ok(self.rho[i]);
        }
        let (d0, d1) = (self.detuning_ghz[i], self.detuning_ghz[i + 1]);
        let (r0, r1) = (self.rho[i], self.rho[i + 1]);
        let w = (detuning_ghz - d0) / (d1 - d0);
        Ok(r0 + w * (r1 - r0))
    }
}

/// Raman coefficient for light scattered from a pump at `pump_freq_thz` into a
/// probe at `probe_freq_thz`, in 1/(km·GHz).
pub fn raman_coefficient(spectrum: &RamanSpectrum, pump_freq_thz: f64, probe_freq_thz: f64) -> Result<f64> {
    spectrum.at_detuning((pump_freq_thz - probe_freq_thz) * 1e3)
}
