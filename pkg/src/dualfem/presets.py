"""Named run configurations reproducing each reported experiment.

Configurations are plain JSON-serializable dicts; :mod:`dualfem.cli`
validates and executes them.  Initial conditions and dual boundary traces
are selected from small named families rather than arbitrary code, which
keeps configs declarative and diffable.
"""

from __future__ import annotations

import copy

PRESETS: dict[str, dict] = {
    "heat-steady": {
        "problem": "heat",
        "k": 1.0, "L": 1.0, "T": 1.1, "nx": 100, "nt": 110,
        "T_keep": 1.0,
        "right_mode": "dirichlet_theta",
        "theta_left": 1.0, "theta_right": 4.0,
        "initial": {"type": "linear", "slope": 3.0, "intercept": 1.0},
        "dual_bc": {"type": "zero"},
        "reference": {"type": "steady"},
        "metrics": ["pct"],
    },
    "heat-steady-gauge": {
        "problem": "heat",
        "k": 1.0, "L": 1.0, "T": 1.1, "nx": 100, "nt": 110,
        "T_keep": 1.0,
        "right_mode": "dirichlet_theta",
        "theta_left": 1.0, "theta_right": 4.0,
        "initial": {"type": "linear", "slope": 3.0, "intercept": 1.0},
        "dual_bc": {"type": "steady_family"},
        "reference": {"type": "steady"},
        "metrics": ["pct"],
    },
    "heat-transient": {
        "problem": "heat",
        "k": 0.2, "L": 1.0, "T": 1.1, "nx": 100, "nt": 110,
        "T_keep": 1.0,
        "right_mode": "neumann_pi",
        "theta_left": 1.0, "pi_right": 0.0,
        "initial": {"type": "sine_plus_one"},
        "dual_bc": {"type": "zero"},
        "reference": {"type": "transient"},
        "metrics": ["pct"],
    },
    "heat-jump": {
        "problem": "heat",
        "k": 0.1, "L": 1.0, "T": 0.25, "nx": 200, "nt": 50,
        "T_keep": None,
        "right_mode": "dirichlet_theta",
        "theta_left": 10.0, "theta_right": 10.0,
        "initial": {"type": "jump", "beta": 10.0},
        "dual_bc": {"type": "zero"},
        "reference": {"type": "fourier_discontinuous", "n_terms": 100000},
        "metrics": ["pct"],
    },
    "heat-smoothed-jump-beta10": {
        "problem": "heat",
        "k": 0.1, "L": 1.0, "T": 0.125, "nx": 200, "nt": 25,
        "T_keep": None,
        "right_mode": "dirichlet_theta",
        "theta_left": 10.0, "theta_right": 10.0,
        "initial": {"type": "smoothed_jump", "beta": 10.0, "eps": 0.01},
        "dual_bc": {"type": "zero"},
        "reference": {"type": "fourier_smoothed", "n_terms": 100000},
        "metrics": ["pct", "err1", "err2"],
    },
    "heat-smoothed-jump-beta0": {
        "problem": "heat",
        "k": 0.1, "L": 1.0, "T": 0.25, "nx": 200, "nt": 50,
        "T_keep": None,
        "right_mode": "dirichlet_theta",
        "theta_left": 0.0, "theta_right": 0.0,
        "initial": {"type": "smoothed_jump", "beta": 0.0, "eps": 0.01},
        "dual_bc": {"type": "zero"},
        "reference": {"type": "fourier_smoothed", "n_terms": 100000},
        "metrics": ["err1", "err2"],
    },
    "transport-step": {
        "problem": "transport",
        "c": 0.25, "L": 2.0, "T_total": 5.0,
        "T_stage": 0.55, "T_keep": 0.5,
        "nx": 200, "nt": 55,
        "u_left": 2.0,
        "initial": {"type": "step", "x_jump": 0.2, "lo": 2.0, "hi": 4.0},
        "metrics": ["pct", "jump_track"],
    },
    "euler-free": {
        "problem": "euler",
        "I": [1.0, 2.0, 3.0], "omega0": [1.0, 0.0, 3.0], "nu": 0.0,
        "T_total": 3.0, "T_stage": 0.5, "ne_per_stage": 20, "N_c": 5,
        "reference": "elliptic",
    },
    "euler-free-convergence": {
        "problem": "euler",
        "I": [1.0, 2.0, 3.0], "omega0": [1.0, 0.0, 3.0], "nu": 0.0,
        "T_total": 3.0, "T_stage": 0.5, "ne_per_stage": 20, "N_c": 5,
        "reference": "elliptic",
        "refinements": [20, 40, 80],
    },
    "euler-damped": {
        "problem": "euler",
        "I": [1.0, 2.0, 5.0], "omega0": [5.0, 3.0, 0.0], "nu": 0.4,
        "T_total": 5.0, "T_stage": 0.3, "ne_per_stage": 20, "N_c": 5,
        "reference": "rk45",
    },
    "algebraic-demo": {
        "problem": "algebraic-demo",
        "n_cases": 100, "rows": 4, "cols": 6, "seed": 20240501,
    },
}


def get_preset(name: str) -> dict:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; see list-presets")
    cfg = copy.deepcopy(PRESETS[name])
    cfg["preset"] = name
    return cfg


def list_presets() -> list[str]:
    return sorted(PRESETS)
