#!/usr/bin/env python3
"""Builds the chiralqed_py extension, imports it, and exercises the main
surface: transparency of a mirror pair, the single-atom critical power,
low-power reflected statistics, and the classical scattering matrix."""

import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]


def build_and_import():
    subprocess.run(["cargo", "build", "-p", "chiralqed-py"], cwd=ROOT, check=True)
    built = ROOT / "target" / "debug" / "libchiralqed_py.so"
    if not built.exists():
        built = ROOT / "target" / "debug" / "libchiralqed_py.dylib"
    stage = pathlib.Path(tempfile.mkdtemp(prefix="chiralqed_py_"))
    shutil.copy(built, stage / "chiralqed_py.so")
    sys.path.insert(0, str(stage))
    import chiralqed_py

    return chiralqed_py


def approx(actual, expected, tol=1e-8, label=""):
    dev = abs(actual - expected)
    assert dev < tol, f"{label}: {actual} != {expected} (off by {dev})"


def main():
    cq = build_and_import()

    # Mirror pair at phase pi: full transparency with a pure steady state.
    k1 = complex(math.sqrt(1.2))
    k2 = complex(math.sqrt(0.8))
    chain = cq.Chain([
        (1.0, 0.0, k1, k2, 0.0),
        (-1.0, 0.0, k1, k2, math.pi),
    ])
    assert chain.n_atoms() == 2 and chain.dim() == 4
    assert chain.energy_conservation_deviation() < 1e-12
    assert len(chain.k_matrix()) == 2 and len(chain.decay_matrix()) == 2

    stats = cq.steady(chain, complex(1.0))
    approx(stats.T, 1.0, label="T")
    approx(stats.R, 0.0, label="R")
    approx(stats.t, -1.0, label="t")
    approx(stats.purity, 1.0, label="purity")
    approx(stats.leakage, 0.0, label="leakage")
    assert stats.path == "direct" and stats.residual < 1e-9

    rho = cq.steady_density(chain, complex(1.0))
    approx(sum(rho[i][i] for i in range(4)), 1.0, label="trace")

    pops = cq.steady_populations(chain, complex(1.0))
    approx(pops.p_e + pops.p_s + pops.p_a + pops.p_g, 1.0, label="pops")
    assert pops.p_s > 0.2 and pops.p_a < 1e-10, "phase pi should fill |s> only"

    # Lossless linear response is unitary on each input column.
    s = cq.scattering_matrix(chain)
    approx(abs(s[0][0]) ** 2 + abs(s[1][0]) ** 2, 1.0, label="unitarity fwd")
    approx(abs(s[0][1]) ** 2 + abs(s[1][1]) ** 2, 1.0, label="unitarity bwd")

    # Undriven chain returns zeroed powers and undefined correlations.
    idle = cq.steady(chain, complex(0.0))
    assert idle.T == 0.0 and idle.g2_T is None

    # Single atom at its critical power: coherent dip, T = 1/3, g2 = 21.
    ka = complex(math.sqrt(1.4))
    kb = complex(math.sqrt(0.6))
    p_crit = cq.critical_power(0.0, 0.05, ka, kb)
    approx(p_crit, 0.13125, 1e-12, label="p_crit")
    assert cq.critical_power(0.5, 0.05, ka, kb) is None

    atom = cq.Chain([(0.0, 0.05, ka, kb, 0.0)])
    st = cq.steady(atom, complex(math.sqrt(p_crit)))
    approx(abs(st.t), 0.0, 1e-10, label="dip")
    approx(st.T, 1.0 / 3.0, label="T at p*")
    approx(st.g2_T, 21.0, 1e-6, label="g2_T")

    t, _ = cq.single_atom_amplitudes(0.0, 0.05, ka, kb, p_crit)
    approx(abs(t), 0.0, 1e-12, label="oracle dip")
    big_t, big_r, i_inc, leak = cq.single_atom_powers(0.0, 0.05, ka, kb, p_crit)
    approx(st.T, big_t, label="T vs oracle")
    approx(st.R, big_r, label="R vs oracle")
    approx(st.I_inc_T / p_crit, i_inc, label="I_inc_T vs oracle")
    approx(st.leakage, leak, label="leakage vs oracle")
    approx(cq.single_atom_g2_transmitted(0.0, 0.05, ka, kb, p_crit), 21.0, 1e-6,
           label="oracle g2_T")

    # Low-power reflected statistics of a lossless pair at phase pi/2.
    kc = complex(math.sqrt(1.6))
    kd = complex(math.sqrt(0.4))
    pair = cq.Chain([
        (0.5, 0.0, kc, kd, 0.0),
        (-0.5, 0.0, kc, kd, math.pi / 2.0),
    ])
    weak = cq.steady(pair, complex(math.sqrt(1e-3)))
    approx(weak.g2_R, cq.two_atom_lowpower_g2_reflected(0.5, kc, kd), 5e-3,
           label="g2_R vs oracle")
    approx(weak.R, cq.two_atom_lowpower_reflectivity(0.5, kc, kd), 1e-2,
           label="R vs oracle")

    # Classical crossed-coupling transmission matches the scattering matrix.
    cross = cq.Chain([
        (0.0, 0.0, kc, kd, 0.0),
        (1.0, 0.0, kd, kc, math.pi),
    ])
    s = cq.scattering_matrix(cross)
    approx(abs(s[1][0]) ** 2,
           cq.classical_two_atom_transmission(0.0, 1.0, kc, kd, math.pi),
           label="classical T")

    # Invalid chains surface as ValueError.
    try:
        cq.Chain([(0.0, -1.0, k1, k2, 0.0)])
    except ValueError:
        pass
    else:
        raise AssertionError("negative gamma must be rejected")

    print("smoke test ok")


if __name__ == "__main__":
    main()
