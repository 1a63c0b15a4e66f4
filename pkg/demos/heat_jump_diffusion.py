"""Diffusion of a near-discontinuous temperature profile.

A slope-2 sawtooth with a steep smoothing ramp of half-width 0.01 at
x = 1/2 diffuses under conductivity k = 0.1.  The reference is a sine
series with coefficients integrated in closed form.  Refining the mesh
from 200 x 25 to 400 x 50 reduces the time-series rms error measure err2.
"""

import copy

from dualfem.cli import run_heat
from dualfem.presets import get_preset


def main():
    coarse = get_preset("heat-smoothed-jump-beta10")
    fine = copy.deepcopy(coarse)
    fine["nx"], fine["nt"] = 400, 50
    for label, cfg in (("200 x 25", coarse), ("400 x 50", fine)):
        summary, _, _ = run_heat(cfg)
        print(f"mesh {label}:  max err1 = {summary['max_err1_retained']:.4f} %"
              f"   max err2 = {summary['max_err2_retained']:.4f} %")
    print("the rms measure err2 decreases under refinement even though the")
    print("initial data is only marginally resolved by the coarse mesh")


if __name__ == "__main__":
    main()
