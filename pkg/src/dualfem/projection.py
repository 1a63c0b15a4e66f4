"""L2 projection of Gauss-point samples onto the C0 nodal basis.

The mass-matrix right-hand side is integrated with the same 2x2 (or
2-point) rule that produced the samples; known primal data is pinned at
nodes and moved to the right-hand side.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError
from .fem import (assemble_uniform, eval_shapes_quad, gauss_rule, solve_system)
from .mesh import SpaceTimeMesh, TimeMesh


def quad_points_2d(mesh: SpaceTimeMesh) -> np.ndarray:
    """Physical (x, t) coordinates of the 2x2 Gauss points, shape (n_elems, 4, 2)."""
    rule = gauss_rule(2)
    out = np.empty((mesh.n_elements, 4, 2))
    corners = mesh.nodes[mesh.elements]          # (ne, 4, 2)
    for q, pt in enumerate(rule.points):
        from .fem import shape_values_quad
        N = shape_values_quad(*pt)
        out[:, q, :] = np.einsum("a,eai->ei", N, corners)
    return out


def quad_points_1d(mesh: TimeMesh) -> np.ndarray:
    """Gauss point times, shape (ne, 2)."""
    rule = gauss_rule(1)
    t0 = mesh.nodes[:-1]
    return t0[:, None] + 0.5 * (1 + rule.points)[None, :] * mesh.h


def mass_local_2d(hx: float, ht: float) -> np.ndarray:
    """Exact 4x4 mass matrix of a hx-by-ht bilinear element."""
    m1 = np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0
    return np.kron(ht * m1, hx * m1)[_KRON_PERM][:, _KRON_PERM]


# local node order (xi, eta): kron above yields (eta-major, xi) ordering
# (0,0),(0,1),(1,0),(1,1) -> CCW order 0,1,3,2
_KRON_PERM = np.array([0, 1, 3, 2])


def l2_project(mesh: SpaceTimeMesh, samples: np.ndarray, pinned: dict | None = None,
               ) -> np.ndarray:
    """Project element Gauss-point samples (n_elems, 4) onto nodal values.

    ``pinned`` maps node id -> known value; those values are exact in the
    output and eliminated from the solve.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (mesh.n_elements, 4):
        raise InvalidArgumentError(
            f"samples shape {samples.shape}, expected {(mesh.n_elements, 4)}")

    system = assemble_uniform(mesh, mass_local_2d(mesh.hx, mesh.ht), n_fields=1)

    rule = gauss_rule(2)
    coords = mesh.nodes[mesh.elements[0]]
    wdet = 0.25 * mesh.hx * mesh.ht
    Nq = np.stack([eval_shapes_quad(coords, pt).values for pt in rule.points])  # (4q, 4a)
    # rhs_A = sum_e sum_q w detJ N^A(q) u(q)
    contrib = wdet * samples @ Nq                # (ne, 4a)
    np.add.at(system.rhs, mesh.elements.ravel(), contrib.ravel())

    if pinned:
        for node, val in pinned.items():
            system.constrain(0, node, val)
    return solve_system(system)


def l2_project_time(mesh: TimeMesh, samples: np.ndarray, pinned: dict | None = None,
                    ) -> np.ndarray:
    """1-D analogue of :func:`l2_project` for stage time meshes.

    ``samples`` has shape (ne, 2) or (n_comp, ne, 2); projection is applied
    per component.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 3:
        return np.stack([l2_project_time(mesh, s, None if pinned is None
                                         else {n: v[i] for n, v in pinned.items()})
                         for i, s in enumerate(samples)])
    if samples.shape != (mesh.ne, 2):
        raise InvalidArgumentError(
            f"samples shape {samples.shape}, expected {(mesh.ne, 2)}")

    h = mesh.h
    m1 = h * np.array([[2.0, 1.0], [1.0, 2.0]]) / 6.0
    n = mesh.n_nodes
    M = np.zeros((n, n))
    rhs = np.zeros(n)
    rule = gauss_rule(1)
    Nq = np.stack([[0.5 * (1 - xi), 0.5 * (1 + xi)] for xi in rule.points])  # (2q, 2a)
    contrib = 0.5 * h * samples @ Nq
    for e in range(mesh.ne):
        M[e:e + 2, e:e + 2] += m1
        rhs[e:e + 2] += contrib[e]

    pinned = pinned or {}
    free = np.array([i for i in range(n) if i not in pinned], dtype=int)
    out = np.empty(n)
    rhs_free = rhs[free]
    if pinned:
        cid = np.array(sorted(pinned), dtype=int)
        cval = np.array([pinned[i] for i in cid])
        out[cid] = cval
        rhs_free = rhs_free - M[np.ix_(free, cid)] @ cval
    out[free] = np.linalg.solve(M[np.ix_(free, free)], rhs_free)
    return out
