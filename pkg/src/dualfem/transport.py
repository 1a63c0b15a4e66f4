"""Dual formulation of the 1-D linear transport equation with time slicing.

A single scalar dual field lambda is solved per stage on a space-time mesh;
the primal field is recovered as u = d_t lambda + c d_x lambda at Gauss
points and projected.  Long-time runs chain stages: each stage keeps only an
initial sub-interval and feeds its last retained row to the next stage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError, SolverError
from .fem import (BlockLinearSystem, assemble_uniform, boundary_load,
                  eval_shapes_quad, gauss_rule, solve_system)
from .heat import gradient_tables
from .mesh import BOTTOM, LEFT, RIGHT, TOP, SpaceTimeMesh, build_space_time_mesh
from .projection import l2_project

_ZERO = lambda s: np.zeros_like(np.asarray(s, dtype=float))


@dataclass
class TransportProblem:
    c: float
    L: float
    T_total: float
    u0: Callable             # initial datum, may be discontinuous
    u_left: Callable         # inflow datum u(0, t)
    lambda_top: Callable = _ZERO
    lambda_right: Callable = _ZERO

    def __post_init__(self):
        if self.c <= 0:
            raise InvalidArgumentError(f"wave speed must be positive, got c={self.c}")


@dataclass(frozen=True)
class StagePlan:
    """Per-stage length, retained length, and the derived stage count."""

    T_stage: float
    T_keep: float
    n_stages: int

    @classmethod
    def cover(cls, T_stage: float, T_keep: float, T_total: float) -> "StagePlan":
        if not 0 < T_keep < T_stage:
            raise InvalidArgumentError(
                f"need 0 < T_keep < T_stage, got {T_keep}, {T_stage}")
        n = int(np.ceil(T_total / T_keep - 1e-12))
        return cls(T_stage=float(T_stage), T_keep=float(T_keep), n_stages=n)


@dataclass
class StitchedField:
    """Retained primal field rows over global time."""

    x: np.ndarray          # (nx+1,)
    t: np.ndarray          # (n_rows,) global times, increasing
    u: np.ndarray          # (n_rows, nx+1) nodal values
    lambda_stages: list    # per-stage nodal dual fields (diagnostics)


def transport_local_matrix(mesh: SpaceTimeMesh, c: float) -> np.ndarray:
    """Negative Gram matrix of the characteristic derivatives d_t N + c d_x N."""
    rule = gauss_rule(2)
    coords = mesh.nodes[mesh.elements[0]]
    wdet = 0.25 * mesh.hx * mesh.ht
    K = np.zeros((4, 4))
    for pt in rule.points:
        se = eval_shapes_quad(coords, pt)
        d = se.grad_t + c * se.grad_x
        K -= wdet * np.outer(d, d)
    return K


def assemble_transport(problem: TransportProblem, mesh: SpaceTimeMesh,
                       u0=None) -> BlockLinearSystem:
    """Assemble K lambda = R for one stage.

    The inflow boundary term carries the wave speed factor so that the
    natural boundary condition enforces u(0, t) = u_left(t); see the notes
    in the package README on this point.
    """
    if not np.isclose(mesh.L, problem.L):
        raise InvalidArgumentError(
            f"mesh length {mesh.L} does not match problem length {problem.L}")
    u0 = problem.u0 if u0 is None else u0
    system = assemble_uniform(mesh, transport_local_matrix(mesh, problem.c), n_fields=1)
    system.rhs += problem.c * boundary_load(
        mesh, LEFT, lambda t: np.asarray(problem.u_left(t), dtype=float))
    system.rhs += boundary_load(mesh, BOTTOM, u0)

    t_coords = mesh.t_coords()
    x_coords = mesh.x_coords()
    system.constrain(0, mesh.boundary_nodes(TOP),
                     np.asarray(problem.lambda_top(x_coords), dtype=float))
    system.constrain(0, mesh.boundary_nodes(RIGHT),
                     np.asarray(problem.lambda_right(t_coords), dtype=float))
    return system


def dtp_transport(mesh: SpaceTimeMesh, lam: np.ndarray, c: float) -> np.ndarray:
    """u = d_t lambda + c d_x lambda at the Gauss points, shape (n_elems, 4)."""
    _, gx, gt = gradient_tables(mesh)
    le = lam[mesh.elements]
    return le @ gt.T + c * (le @ gx.T)


def solve_transport_stage(problem: TransportProblem, mesh: SpaceTimeMesh,
                          initial_u=None, pinned_nodal=None):
    """Solve one stage; returns (lambda nodal, projected u nodal grid).

    ``initial_u`` overrides the problem's initial datum: either a callable
    of x or the nodal values of the previous stage's retained top row.  The
    callable enters the weak initial term; projection pins ``pinned_nodal``
    at the bottom nodes when given (jump nodes carry the average value).
    """
    if initial_u is None:
        u0_call = problem.u0
        u0_nodal = np.asarray(problem.u0(mesh.x_coords()), dtype=float)
    elif callable(initial_u):
        u0_call = initial_u
        u0_nodal = np.asarray(initial_u(mesh.x_coords()), dtype=float)
    else:
        u0_nodal = np.asarray(initial_u, dtype=float)
        x = mesh.x_coords()
        u0_call = lambda s: np.interp(s, x, u0_nodal)
    if pinned_nodal is not None:
        u0_nodal = np.asarray(pinned_nodal, dtype=float)

    system = assemble_transport(problem, mesh, u0=u0_call)
    lam = solve_system(system)
    u_q = dtp_transport(mesh, lam, problem.c)

    pinned = {}
    t = mesh.t_coords()
    for node, val in zip(mesh.boundary_nodes(BOTTOM), u0_nodal):
        pinned[int(node)] = float(val)
    for node, tv in zip(mesh.boundary_nodes(LEFT), t):
        pinned[int(node)] = float(problem.u_left(tv))
    u = l2_project(mesh, u_q, pinned).reshape(mesh.nt + 1, mesh.nx + 1)
    return lam, u


def initial_nodal_values(problem: TransportProblem, x: np.ndarray,
                         jump_x: float | None = None,
                         jump_avg: float | None = None) -> np.ndarray:
    """Nodal initial data; a node coinciding with a jump takes the average."""
    vals = np.asarray(problem.u0(x), dtype=float)
    if jump_x is not None and jump_avg is not None:
        hit = np.isclose(x, jump_x, rtol=0, atol=1e-12)
        vals[hit] = jump_avg
    return vals


def run_time_sliced(problem: TransportProblem, plan: StagePlan,
                    nx: int, nt: int,
                    jump_x: float | None = None,
                    jump_avg: float | None = None) -> StitchedField:
    """Chain stage solves and stitch retained rows into a global field."""
    mesh = build_space_time_mesh(problem.L, plan.T_stage, nx, nt)
    t_rows = mesh.t_coords()
    keep_rows = int(np.sum(t_rows <= plan.T_keep + 1e-12)) - 1   # retained element rows
    if keep_rows < 1:
        raise InvalidArgumentError("T_keep shorter than one element row")

    x = mesh.x_coords()
    u_init = initial_nodal_values(problem, x, jump_x, jump_avg)

    rows_t = [np.array([0.0])]
    rows_u = [u_init[None, :].copy()]
    lambdas = []
    t_offset = 0.0
    for s in range(plan.n_stages):
        try:
            if s == 0:
                # exact (possibly discontinuous) datum enters the weak term;
                # projection pins the jump-averaged nodal values
                lam, u = solve_transport_stage(problem, mesh, initial_u=None,
                                               pinned_nodal=u_init)
            else:
                lam, u = solve_transport_stage(problem, mesh, initial_u=u_init)
        except SolverError as exc:
            raise SolverError(f"stage {s + 1} failed: {exc}") from exc
        lambdas.append(lam)
        rows_t.append(t_offset + t_rows[1:keep_rows + 1])
        rows_u.append(u[1:keep_rows + 1])
        u_init = u[keep_rows].copy()
        t_offset += t_rows[keep_rows]
    return StitchedField(x=x, t=np.concatenate(rows_t),
                         u=np.vstack(rows_u), lambda_stages=lambdas)


def track_jump(field: StitchedField, x_jump: Callable,
               lo: float = 2.0, hi: float = 4.0,
               window_elems: int = 10):
    """Overshoot/undershoot around a moving jump locus.

    For each retained time level: h_t = max(0, max u - hi) and
    h_b = max(0, lo - min u), over a window of +/- ``window_elems``
    elements around x_jump(t).
    """
    h = field.x[1] - field.x[0]
    ht = np.zeros_like(field.t)
    hb = np.zeros_like(field.t)
    for i, t in enumerate(field.t):
        xj = x_jump(t)
        mask = np.abs(field.x - xj) <= window_elems * h + 1e-12
        if not np.any(mask):
            continue
        vals = field.u[i, mask]
        ht[i] = max(0.0, vals.max() - hi)
        hb[i] = max(0.0, lo - vals.min())
    return ht, hb
