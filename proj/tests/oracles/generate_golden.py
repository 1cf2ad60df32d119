#!/usr/bin/env python3
"""Independent arbitrary-precision oracles for the frozen golden values.

Run from the repository root:  python3 tests/oracles/generate_golden.py
Writes tests/data/golden.json and tests/data/erfc_lattice.csv.
"""
import json
import pathlib
import random

import mpmath as mp

mp.mp.dps = 30
OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def coherent_psi(a, y):
    a = mp.mpc(a)
    return mp.power(mp.pi, -0.25) * mp.exp(-y * y / 2 - abs(a) ** 2 / 2 + mp.sqrt(2) * a * y - a * a / 2)


def cat_components(a):
    return [mp.mpc(a) * mp.expjpi(mp.mpf(2) * j / 3) for j in range(3)]


def cat_norm(a):
    comps = cat_components(a)
    raw = lambda y: abs(sum(coherent_psi(c, y) for c in comps)) ** 2
    return 1 / mp.sqrt(mp.quad(raw, [-mp.inf, 0, mp.inf]))


def cat_psi(a, y, norm):
    return norm * sum(coherent_psi(c, y) for c in cat_components(a))


def fresnel_tomogram(psi, mu, nu, x):
    mu, nu, x = mp.mpf(mu), mp.mpf(nu), mp.mpf(x)
    f = lambda y: psi(y) * mp.exp(1j * mu / (2 * nu) * y * y - 1j * x / nu * y)
    val = mp.quad(f, mp.linspace(-12, 12, 25))
    return abs(val) ** 2 / (2 * mp.pi * abs(nu))


def tail_quadrature(y, yp, mu_max):
    nu = mp.mpf(y) - yp
    s = mp.mpf(y) + yp
    phi0 = lambda m: mp.exp(-(m * m + nu * nu) / 4)
    plus = mp.quad(lambda m: phi0(m) * mp.exp(1j * m * s / 2), [mu_max, mp.inf])
    minus = mp.quad(lambda m: phi0(m) * mp.exp(-1j * m * s / 2), [mu_max, mp.inf])
    return (plus + minus) / (2 * mp.pi)


def main():
    a = mp.mpc(1, 0.5)
    norm = cat_norm(a)
    psi = lambda y: cat_psi(a, y, norm)
    tom = fresnel_tomogram(psi, 0.8, 1.2, 1.0)
    rho = psi(mp.mpf(1.5)) * mp.conj(psi(mp.mpf(1.0)))
    tail = tail_quadrature(1.0, -1.0, 6)
    coh_overlap = abs(mp.quad(lambda y: coherent_psi(0, y) * mp.conj(coherent_psi(1, y)),
                              [-mp.inf, 0, mp.inf])) ** 2
    q = mp.exp(-2 * mp.pi * mp.mpf(0.5) / (mp.mpf(16) / 160))
    disc = q / (1 - q) / mp.pi
    trunc = mp.exp(-3) / (2 * mp.pi)
    est_160 = mp.mpf(64) / (mp.pi ** 2 * 500)
    trunc_8 = mp.exp(-4) / (2 * mp.pi)

    golden = {
        "ccs_tomogram_a1+0.5i_mu0.8_nu1.2_x1": float(tom),
        "ccs_norm_abs": float(norm),
        "ccs_rho_1.5_1.0": [float(rho.real), float(rho.imag)],
        "tail_1_-1_6": [float(tail.real), float(tail.imag)],
        "coherent_overlap_0_1": float(coh_overlap),
        "hermite_3_1.5": float(mp.hermite(3, 1.5)),
        "laguerre_2_1": float(mp.laguerre(2, 0, 1)),
        "truncation_C1_tau0.5_mu6": float(trunc),
        "discretization_M1_tau0.5_N160_mu8": float(disc),
        "estimation_mu6_n500": float(mp.mpf(36) / (mp.pi ** 2 * 500)),
        "total_C1_tau0.5_mu8_N160_n500": float(3 * (trunc_8 ** 2 + disc ** 2 + est_160)),
        "optimal_bandwidth_0.5_500_1_alpha2_2": float(mp.sqrt((1 - mp.mpf(0.25)) / (2 * 500 * mp.mpf(0.25)))),
    }
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "golden.json").write_text(json.dumps(golden, indent=2) + "\n")

    rng = random.Random(7)
    rows = ["re,im,erfc_re,erfc_im"]
    for _ in range(1000):
        r = 20 * mp.sqrt(rng.random())
        th = 2 * mp.pi * rng.random()
        z = mp.mpc(float(r * mp.cos(th)), float(r * mp.sin(th)))
        w = mp.erfc(z)
        rows.append(",".join(mp.nstr(v, 17) for v in (z.real, z.imag, w.real, w.imag)))
    (OUT / "erfc_lattice.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
