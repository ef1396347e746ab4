#!/usr/bin/env python3
"""Frozen drift values for the valid netlist corpus.

Each circuit is re-entered here by hand (no parsing) and its velocity field
q' = I(p), p' = -Phi_C'(q) - V_D(q, p) + e(t) is evaluated in 50-digit
arithmetic. Writes <name>.expect.json next to each .net file.
"""
import json
import pathlib

import mpmath as mp

mp.mp.dps = 50
HERE = pathlib.Path(__file__).resolve().parent.parent / "corpus"

POINTS = [(0.0, 0.0, 0.0), (0.3, 1.0, 1.0), (1.7, -0.8, 0.45), (2.5, 0.25, -1.3)]


def poly(cs):
    return lambda x: sum(mp.mpf(c) * x**k for k, c in enumerate(cs))


def linear_current(l0):
    return lambda p: p / mp.mpf(l0)


def series(v_r=None, m=None):
    def v(q, i):
        out = mp.mpf(0)
        if v_r:
            out += v_r(i)
        if m:
            out += m(q) * i
        return out
    return v


def parallel(v_r, m):
    def v(q, i):
        a, b = v_r(i), m(q) * i
        if a == 0 or b == 0 or a + b == 0:
            return mp.mpf(0)
        return a * b / (a + b)
    return v


def const(x):
    return lambda _: mp.mpf(x)


def sine(amp, omega, phase):
    return lambda t: mp.mpf(amp) * mp.sin(mp.mpf(omega) * t + mp.mpf(phase))


ZERO = const(0)

# Ohmic voltage of a resistor with incremental resistance R(I): int_0^I R.
def ohmic(cs):
    return lambda i: sum(mp.mpf(c) * i**(k + 1) / (k + 1) for k, c in enumerate(cs))


def nonlinear_current(l_coeffs):
    flux = ohmic(l_coeffs)   # K'(I) = int_0^I L
    return lambda p: mp.findroot(lambda i: flux(i) - p, mp.mpf(p) / (1 + abs(mp.mpf(p))))


CIRCUITS = {
    "v01_rlcm_constants": (linear_current(1), lambda q: q / 1, series(ohmic([0.2]), const(0.3)), ZERO),
    "v02_lc": (linear_current(2), lambda q: q / mp.mpf("0.5"), series(), ZERO),
    "v03_constant_drive": (linear_current(1), lambda q: q, series(ohmic([0.5])), const(1.5)),
    "v04_sinusoid_drive": (linear_current(1.5), lambda q: q / 2, series(m=const(0.1)), sine(2, 3, 0.5)),
    "v05_poly_resistor": (linear_current(1), lambda q: q, series(ohmic([0.2, 0, 0.6])), ZERO),
    "v06_poly_memristor": (linear_current(1), lambda q: q, series(m=poly([0.3, 0, 0.2])), ZERO),
    "v07_potential_derivative": (linear_current(1), poly([0, 1, 0, 0.1]), series(ohmic([0.1])), ZERO),
    "v08_parallel": (linear_current(1), lambda q: q, parallel(ohmic([0.4]), const(0.6)), ZERO),
    "v09_two_resistors": (linear_current(1), lambda q: q, series(ohmic([mp.mpf("0.1") + mp.mpf("0.2")])), ZERO),
    "v10_comments": (linear_current(0.8), lambda q: q / mp.mpf("1.25"), series(ohmic([0.25])), ZERO),
    "v11_nonlinear_inductor": (nonlinear_current([1, 0, 1]), lambda q: q, series(ohmic([0.2])), ZERO),
    "v12_shuffled_order": (linear_current(0.5), lambda q: q / 3, series(m=const(0.25)), const(-0.5)),
    "v13_zero_drive": (linear_current(1), lambda q: q, series(ohmic([0.2])), ZERO),
}


def main():
    for name, (current, cap_force, v_d, drive) in CIRCUITS.items():
        rows = []
        for t, q, p in POINTS:
            t, q, p = mp.mpf(t), mp.mpf(q), mp.mpf(p)
            i = current(p)
            rows.append({"t": float(t), "q": float(q), "p": float(p),
                         "dq": float(i), "dp": float(-cap_force(q) - v_d(q, i) + drive(t))})
        (HERE / f"{name}.expect.json").write_text(json.dumps({"valid": True, "drift": rows}, indent=2) + "\n")


if __name__ == "__main__":
    main()
