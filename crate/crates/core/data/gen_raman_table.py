#!/usr/bin/env python3
"""Generate the default spontaneous Raman coefficient table.

The table is a smooth model of the silica Raman response, not measured
data: an odd sum of Gaussian bands (main peak near 13.2 THz, shoulder near
14.7 THz, broad low-frequency bands) with a quadratic low-frequency onset,
multiplied by the Bose-Einstein occupation factor (n+1 on the Stokes side,
n on the anti-Stokes side) at 300 K. Output is scaled so the Stokes peak
equals PEAK_RHO in 1/(km GHz).

Usage: python3 gen_raman_table.py > raman_default.txt
"""

import math

PEAK_RHO = float(__import__("os").environ.get("PEAK_RHO", "2.0e-10")) # 1/(km GHz) at the Stokes maximum
TEMP_K = 300.0
ONSET_THZ = 3.0
STEP_GHZ = 100
HALF_SPAN_GHZ = 18_000
# (centre THz, width THz, weight)
BANDS = [(13.2, 1.6, 1.0), (14.7, 0.9, 0.45), (10.0, 2.5, 0.45), (6.0, 2.5, 0.25), (17.5, 1.0, 0.08)]

H = 6.62607015e-34
KB = 1.380649e-23


def gain(nu_thz):
    s = sum(a * (math.exp(-((nu_thz - c) ** 2) / (2 * w * w)) - math.exp(-((nu_thz + c) ** 2) / (2 * w * w)))
            for c, w, a in BANDS)
    return s * nu_thz ** 2 / (nu_thz ** 2 + ONSET_THZ ** 2)


def occupation(nu_thz):
    return 1.0 / math.expm1(H * nu_thz * 1e12 / (KB * TEMP_K))


def raw(d_ghz):
    if d_ghz == 0:
        return 0.0
    nu = abs(d_ghz) / 1e3
    n = occupation(nu)
    return gain(nu) * (n + 1.0 if d_ghz > 0 else n)


def main():
    grid = range(-HALF_SPAN_GHZ, HALF_SPAN_GHZ + 1, STEP_GHZ)
    scale = PEAK_RHO / max(raw(d) for d in grid)
    print("# Spontaneous Raman scattering coefficient, silica fiber, 300 K")
    print("# Synthetic model table generated by gen_raman_table.py (not measured data).")
    print(f"# Stokes peak {PEAK_RHO:.3e} /(km GHz); step {STEP_GHZ} GHz; span +/-{HALF_SPAN_GHZ} GHz")
    print("# columns: detuning_ghz (pump - probe) rho_per_km_per_ghz")
    for d in grid:
        print(f"{d} {max(raw(d) * scale, 0.0):.6e}")


if __name__ == "__main__":
    main()
