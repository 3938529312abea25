"""Numeric shell probes of real surfaces ``h(x, y, t) = 0``.

The surface is intersected with the sphere of a given radius in the ambient
space.  Every coordinate plane ``c = v`` (for ``v`` on a fixed linear-plus-
logarithmic lattice) cuts the sphere in a circle; sign changes of ``h`` around
that circle are bracketed on a lattice of angles refined near the axes and
polished with Brent's method.  The (a)- and (b^pi)-ratios are then maximized
over the collected surface points.  Nothing is random, so results depend only
on the inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from ..algebra import MultiPoly


class ProbeError(ValueError):
    pass


def compile_real(p: MultiPoly, vars: Sequence[str]):
    """Float evaluator ``f(*coords)`` for a real polynomial; works on numpy arrays."""
    if not p.is_real():
        raise ProbeError("probe needs a real polynomial")
    idx = [p.vars.index(v) for v in vars]
    terms = []
    for e, c in p.terms.items():
        if any(e[i] for i in range(len(e)) if i not in idx):
            raise ProbeError("polynomial involves variables outside the probe coordinates")
        terms.append((float(c.re), [e[i] for i in idx]))

    def f(*xs):
        total = 0.0
        for c, ex in terms:
            term = c
            for x, k in zip(xs, ex):
                if k:
                    term = term * x**k
            total = total + term
        return total

    return f


@dataclass(frozen=True)
class ProbeResult:
    radius: float
    max_a: float
    max_bpi: float
    argmax_a: tuple
    argmax_bpi: tuple
    points: int


def _slice_values(resolution: int, decades: int) -> np.ndarray:
    lin = np.linspace(0.0, 1.0, resolution, endpoint=False)
    log = np.logspace(-decades, 0.0, resolution, endpoint=False)
    g = np.unique(np.concatenate([lin, log]))
    return np.concatenate([-g[::-1], g[g > 0]])


def _angles(resolution: int, decades: int) -> np.ndarray:
    base = np.linspace(0.0, 2 * np.pi, 4 * resolution, endpoint=False)
    offs = (np.pi / 4) * np.logspace(-decades, 0.0, resolution, endpoint=False)
    axes = np.arange(4) * (np.pi / 2)
    near = (axes[:, None] + np.concatenate([-offs, offs])[None, :]).ravel()
    return np.unique(np.mod(np.concatenate([base, near, axes]), 2 * np.pi))


def _argbest(values: list[float], points: list[tuple]) -> tuple[float, tuple]:
    best = max(values)
    cands = sorted(p for v, p in zip(values, points) if v == best)
    return best, cands[0]


def shell_points(h: MultiPoly, coords: Sequence[str], radius: float, resolution: int = 64, decades: int = 8) -> list[tuple]:
    """Points of ``h = 0`` on the sphere ``||coords|| = radius``."""
    if len(coords) != 3:
        raise ProbeError("shell probes are implemented for three real coordinates")
    if radius <= 0:
        raise ProbeError("radius must be positive")
    if resolution < 32:
        raise ProbeError("resolution must be at least 32")
    f = compile_real(h, coords)
    phis = _angles(resolution, decades)
    cos, sin = np.cos(phis), np.sin(phis)
    found = set()
    for k in range(3):
        others = [j for j in range(3) if j != k]
        for v in radius * _slice_values(resolution, decades):
            rho = np.sqrt(max(radius * radius - v * v, 0.0))
            if rho == 0:
                continue

            def point(phi, v=v, rho=rho):
                p = [0.0, 0.0, 0.0]
                p[k] = v
                p[others[0]] = rho * np.cos(phi)
                p[others[1]] = rho * np.sin(phi)
                return p

            args = [None, None, None]
            args[k] = np.full_like(phis, v)
            args[others[0]] = rho * cos
            args[others[1]] = rho * sin
            vals = f(*args)
            sgn = np.sign(vals)
            for i in range(len(phis)):
                j = (i + 1) % len(phis)
                a, b = phis[i], phis[j] if j else phis[j] + 2 * np.pi
                if sgn[i] == 0:
                    found.add(tuple(float(c) for c in point(a)))
                elif sgn[i] * sgn[j] < 0:
                    root = brentq(lambda phi: f(*point(phi)), a, b, xtol=1e-15 * max(1.0, b), rtol=1e-14, maxiter=200)
                    found.add(tuple(float(c) for c in point(root)))
    return sorted(found)


def probe_ring_max(
    h: MultiPoly, x_vars: Sequence[str], t_var: str, radius: float, resolution: int = 64, decades: int = 8
) -> ProbeResult:
    """Maxima of ``|h_t| / ||grad_x h||`` and ``|<x, grad_x h>| / (||x|| ||grad_x h||)``
    over the surface points on the shell of the given radius."""
    coords = list(x_vars) + [t_var]
    pts = shell_points(h, coords, radius, resolution, decades)
    if not pts:
        raise ProbeError(f"no surface points found on the shell of radius {radius}")
    grads = [compile_real(h.differentiate(v), coords) for v in x_vars]
    ht = compile_real(h.differentiate(t_var), coords)
    P = np.array(pts)
    cols = [P[:, i] for i in range(3)]
    G = np.array([g(*cols) for g in grads])
    X = P[:, : len(x_vars)].T
    ng = np.linalg.norm(G, axis=0)
    nx = np.linalg.norm(X, axis=0)
    ok = (ng > 0) & (nx > 0)
    if not ok.any():
        raise ProbeError("only singular surface points on the shell")
    ra = np.abs(ht(*cols)) / np.where(ok, ng, 1.0)
    rb = np.abs((X * G).sum(axis=0)) / np.where(ok, ng * nx, 1.0)
    keep = [tuple(p) for p, o in zip(pts, ok) if o]
    ra, rb = [float(x) for x in ra[ok]], [float(x) for x in rb[ok]]
    ma, pa = _argbest(ra, keep)
    mb, pb = _argbest(rb, keep)
    return ProbeResult(float(radius), ma, mb, pa, pb, len(keep))
