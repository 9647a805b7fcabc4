"""Bundled scenario configurations.

Each preset is a complete CLI configuration dict. Slit indices in configs
are 1-based at this boundary; lengths are micrometers and times nanoseconds.
"""

from __future__ import annotations

import copy

_SIM1_FIG5A = {
    "analysis": "lgi-sweep",
    "sweep": {
        "axis": "ds",
        "values": {"start": 1.0, "stop": 1000.0, "step": 1.0},
        "scenario": {
            "sigma0": 130.0, "beta1": 15.0, "beta2": 30.0,
            "dx": 7.0, "ds": 1.0, "t01": 0.2, "t12": 0.1,
        },
    },
}

def _sigma_sweep(dx: float, t: float) -> dict:
    return {
        "analysis": "lgi-sweep",
        "sweep": {
            "axis": "sigma0",
            "values": {"start": 10.0, "stop": 800.0, "step": 10.0},
            "scenario": {
                "sigma0": 10.0, "beta1": 5.0, "beta2": 10.0,
                "dx": dx, "ds": 1.0, "t01": t, "t12": t,
            },
        },
    }

_SIM2_SETUP = {
    "sigma0": 200.0,
    "planes": [
        {"slit_centers": [-100.0, 100.0], "beta": 25.0},
        {"slit_centers": [140.0], "beta": 35.0},
        {"slit_centers": [143.0], "beta": 45.0},
    ],
    "times": [0.5, 0.2, 0.1],
}

_SIM2_FIG7 = {
    "analysis": "qpi-search",
    "setup": _SIM2_SETUP,
    "search": {
        "x21": {"start": 0.0, "stop": 500.0, "step": 1.0},
        "x31": {"start": -600.0, "stop": 800.0, "step": 1.0},
    },
}

# Violation-peak layout of the dx=11, 0.1 ns sigma0 sweep.
_SIM1_PEAK_SETUP = {
    "sigma0": 30.0,
    "planes": [
        {"slit_centers": [-9.0, 46.0, 101.0], "beta": 5.0},
        {"slit_centers": [-330.0, 0.0, 330.0], "beta": 30.0},
    ],
    "times": [0.1, 0.1],
}

PRESETS: dict[str, dict] = {
    "sim1_fig5a": _SIM1_FIG5A,
    "sim1_sigma_dx7_t01": _sigma_sweep(7.0, 0.1),
    "sim1_sigma_dx7_t02": _sigma_sweep(7.0, 0.2),
    "sim1_sigma_dx11_t01": _sigma_sweep(11.0, 0.1),
    "sim2_fig7": _SIM2_FIG7,
    "sim1_coherence": {
        "analysis": "coherence",
        "setup": _SIM1_PEAK_SETUP,
        "coherence": {"kind": "lgi"},
    },
    "sim2_coherence": {
        "analysis": "coherence",
        "setup": _SIM2_SETUP,
        "coherence": {"kind": "qpi", "x21": 140.0, "x31": 143.0},
    },
}


def preset(name: str) -> dict:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return copy.deepcopy(PRESETS[name])
