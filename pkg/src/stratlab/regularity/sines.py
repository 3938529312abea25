"""Sines of angles between real vectors and subspaces, and planar spirals."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..algebra import ctx


class DegenerateInput(ValueError):
    pass


_RANK_TOL = 1e-12


def _orthonormal(basis) -> np.ndarray:
    """Columns of an orthonormal basis for the span of the given vectors."""
    B = np.atleast_2d(np.asarray(basis, dtype=float))
    if B.ndim != 2:
        raise DegenerateInput("basis must be a list of vectors")
    B = B.T  # vectors as columns
    sv = np.linalg.svd(B, compute_uv=False)
    if sv.size == 0 or sv[-1] <= _RANK_TOL * max(sv[0], 1.0):
        raise DegenerateInput("basis vectors are linearly dependent")
    q, _ = np.linalg.qr(B)
    return q


def sine_vector_subspace(v, T) -> float:
    """``||pi_{T-perp}(v)|| / ||v||``."""
    v = np.asarray(v, dtype=float)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise DegenerateInput("zero vector")
    q = _orthonormal(T)
    resid = v - q @ (q.T @ v)
    return float(min(1.0, np.linalg.norm(resid) / nv))


def sine_subspace_subspace(S, T) -> float:
    """Sine of the largest principal angle: sup over unit ``s`` in ``S`` of its distance to ``T``."""
    qs, qt = _orthonormal(S), _orthonormal(T)
    m = qs - qt @ (qt.T @ qs)
    return float(min(1.0, np.linalg.norm(m, 2)))


def sin_angle(u, v) -> float:
    """Sine of the angle between two lines."""
    return sine_vector_subspace(u, [v])


def log_spiral(beta) -> Callable:
    """Polar radius ``r(t) = exp(t / tan beta)``."""
    k = 1 / ctx.tan(ctx.mpf(beta))
    return lambda t: ctx.exp(k * t)


def root_spiral() -> Callable:
    """Polar radius ``r(t) = exp(-sqrt t)``; spirals into the origin as ``t -> oo``."""
    return lambda t: ctx.exp(-ctx.sqrt(t))


def circle(radius=1) -> Callable:
    return lambda t: ctx.mpf(radius)


def spiral_angle(radius: Callable, t) -> float:
    """Sine of the angle between the secant to the origin and the tangent line
    of the planar curve ``t -> r(t) (cos t, sin t)``."""
    t = ctx.mpf(t)
    r = radius(t)
    dr = ctx.diff(radius, t)
    if r == 0:
        raise DegenerateInput("curve passes through the origin")
    c, s = ctx.cos(t), ctx.sin(t)
    px, py = r * c, r * s
    tx, ty = dr * c - r * s, dr * s + r * c
    tn = ctx.sqrt(tx**2 + ty**2)
    if tn == 0:
        raise DegenerateInput("zero tangent")
    return float(abs(px * ty - py * tx) / (ctx.sqrt(px**2 + py**2) * tn))


def realify(z: Sequence[complex]) -> np.ndarray:
    """``C^n -> R^{2n}``, ``(z_k) -> (Re z_1, Im z_1, ...)``."""
    out = []
    for w in z:
        w = complex(w)
        out.extend((w.real, w.imag))
    return np.array(out)


def complex_tangent_basis(grad: Sequence[complex]) -> list[np.ndarray]:
    """Real basis of the realified kernel of ``dF = sum grad_k dz_k``."""
    g = [complex(c) for c in grad]
    n = len(g)
    pivot = max(range(n), key=lambda k: abs(g[k]))
    if g[pivot] == 0:
        raise DegenerateInput("zero gradient")
    basis = []
    for k in range(n):
        if k == pivot:
            continue
        for unit in (1, 1j):
            v = [0j] * n
            v[k] = unit
            v[pivot] = -unit * g[k] / g[pivot]
            basis.append(realify(v))
    return basis


def realified_secant_sine(secant: Sequence[complex], grad: Sequence[complex]) -> float:
    """Real sine between a complex secant vector and the tangent space of
    ``F = 0`` with gradient ``grad`` at the foot of the secant."""
    return sine_vector_subspace(realify(secant), complex_tangent_basis(grad))


def spiral_table(radius: Callable, ts) -> list[tuple[float, float]]:
    return [(float(t), spiral_angle(radius, t)) for t in ts]
