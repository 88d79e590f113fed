"""Closure and Shilov boundary of M_alpha.

Everything is decided in the model surface M_(1,1,1), whose graph is
f(z, w) = (z + w - zw) / (z + w - 1).  Other members are carried there by
the automorphisms of :mod:`tridisc.variety`, which extend to the closed
tridisc and preserve both the torus and the open disc coordinatewise.
"""

from __future__ import annotations

import enum

import numpy as np

from .variety import (
    SAMPLE_DENOM_MIN,
    AlphaTriple,
    build_biholo,
    defining_residual,
    graph_z3,
    triangle_check,
)
from .cxcore import guard
from .errors import DomainError, SamplerStarvation

MODEL = AlphaTriple(1.0, 1.0, 1.0)
DEFAULT_TOL = 1e-8
TRANSPORT_FACTOR = 10.0
AMBIGUITY_FACTOR = 10.0


class BoundaryClass(str, enum.Enum):
    INTERIOR = "interior"
    SHILOV = "shilov"
    BOUNDARY_NON_SHILOV = "boundary-non-shilov"
    OUTSIDE = "outside-closure"
    AMBIGUOUS = "ambiguous"


def closure_margin(z, w):
    """(1 - |z|^2 |w|^2) - 2 Re z (1 - |w|^2) - 2 Re w (1 - |z|^2); >= 0 iff |f(z, w)| <= 1."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    az, aw = np.abs(z) ** 2, np.abs(w) ** 2
    return (1 - az * aw) - 2 * z.real * (1 - aw) - 2 * w.real * (1 - az)


def closure_condition(z, w, tol=0.0):
    """Denominator-free test that (z, w, f(z, w)) lies in the closure of M_(1,1,1)."""
    out = closure_margin(z, w) >= -tol
    return bool(out) if np.ndim(out) == 0 else out


def model_graph(z, w):
    return graph_z3(MODEL, z, w)


def xi_disc(z, zeta2):
    """The analytic disc z -> (z, zeta2, (z + zeta2 - z zeta2) / (z + zeta2 - 1))."""
    z = np.asarray(z, dtype=complex)
    zeta2 = complex(zeta2)
    den = guard(z + zeta2 - 1, "xi denominator")
    third = (z + zeta2 - z * zeta2) / den
    out = np.stack(np.broadcast_arrays(z, np.full_like(z, zeta2), third), axis=-1)
    return out


def _classify_model(p, tol, res_tol):
    mods = np.abs(p)
    if np.any(mods > 1 + tol):
        return BoundaryClass.OUTSIDE
    res = abs(defining_residual(MODEL, p))
    if res >= AMBIGUITY_FACTOR * res_tol:
        return BoundaryClass.OUTSIDE
    if res >= res_tol:
        return BoundaryClass.AMBIGUOUS
    inside = mods < 1 - tol
    if inside.all():
        return BoundaryClass.INTERIOR
    if not inside.any():
        return BoundaryClass.SHILOV
    i = int(np.argmax(inside))
    j = int(np.argmin(inside))
    if closure_condition(p[i], p[j], tol):
        return BoundaryClass.BOUNDARY_NON_SHILOV
    return BoundaryClass.OUTSIDE


def classify_point(alpha: AlphaTriple, p, tol=DEFAULT_TOL) -> BoundaryClass:
    """Classify a point of the closed tridisc relative to closure(M_alpha)."""
    if not triangle_check(alpha):
        raise DomainError("alpha violates the triangle inequality")
    p = np.array(p, dtype=complex)
    if p.shape != (3,):
        raise DomainError("expected a single point of C^3")
    mods = np.abs(p)
    if np.any(mods > 1 + tol):
        return BoundaryClass.OUTSIDE
    # snap near-unimodular coordinates onto the circle so automorphisms apply
    on = np.abs(mods - 1) <= tol
    p[on] = p[on] / mods[on]
    a = alpha.normalized().as_array()
    if np.allclose(a, 1.0, atol=1e-14):
        return _classify_model(p, tol, tol)
    phi = build_biholo(alpha, MODEL)
    return _classify_model(phi(p), tol, TRANSPORT_FACTOR * tol)


def sample_shilov(alpha: AlphaTriple, n: int, seed: int, max_draws=None):
    """n points of closure(M_alpha) on the three-torus, via the graph over the two-torus."""
    if not triangle_check(alpha):
        raise DomainError("alpha violates the triangle inequality")
    if n < 0:
        raise DomainError("sample count must be nonnegative")
    alpha = alpha.normalized()
    k = int(np.argmax(alpha.moduli))
    free = [j for j in range(3) if j != k]
    model = alpha.permuted(free + [k])
    a, b, _ = model.graph_params()
    rng = np.random.default_rng(seed)
    max_draws = max_draws or 1000 * n + 10000
    out = np.empty((0, 3), dtype=complex)
    drawn = 0
    while len(out) < n:
        if drawn >= max_draws:
            raise SamplerStarvation(f"only {len(out)} of {n} torus samples accepted after {drawn} draws")
        m = min(max(256, 2 * (n - len(out))), max_draws - drawn)
        drawn += m
        u = np.exp(2j * np.pi * rng.random(m))
        v = np.exp(2j * np.pi * rng.random(m))
        ok = np.abs(b.conjugate() * u + a.conjugate() * v - 1.0) > SAMPLE_DENOM_MIN
        u, v = u[ok], v[ok]
        w = graph_z3(model, u, v)
        pts = np.empty((len(u), 3), dtype=complex)
        pts[:, free[0]] = u
        pts[:, free[1]] = v
        pts[:, k] = w
        good = (np.abs(np.abs(w) - 1) < 1e-10) & (np.abs(defining_residual(alpha, pts)) < 1e-10)
        out = np.concatenate([out, pts[good]])
    return out[:n]
