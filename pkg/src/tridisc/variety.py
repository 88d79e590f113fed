"""The surfaces M_alpha of the tridisc and the automorphisms between them.

M_alpha is cut out of the tridisc by

    alpha1 z1 + alpha2 z2 + alpha3 z3
        = conj(alpha1) z2 z3 + conj(alpha2) z1 z3 + conj(alpha3) z1 z2.

Any two members whose moduli satisfy the strict triangle inequality are
related by an automorphism of the tridisc.  ``build_biholo`` constructs one
explicitly: a coordinate rotation to positive coefficients, then a triple of
real Möbius maps that moves M_(1,1,1) onto M_(x1,x2,1), solved for by a
damped Newton iteration.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .cxcore import (
    DEFAULT_TOL,
    SINGULAR_TOL,
    DiscAutomorphism,
    guard,
)
from .errors import ConvergenceError, DomainError, SamplerStarvation

log = logging.getLogger(__name__)

SAMPLE_RADIUS = 0.97
SAMPLE_DENOM_MIN = 1e-3


@dataclass(frozen=True)
class AlphaTriple:
    alpha1: complex
    alpha2: complex
    alpha3: complex

    def __post_init__(self):
        vals = [complex(v) for v in (self.alpha1, self.alpha2, self.alpha3)]
        if all(v == 0 for v in vals):
            raise DomainError("alpha must be a nonzero triple")
        for name, v in zip(("alpha1", "alpha2", "alpha3"), vals):
            object.__setattr__(self, name, v)

    @classmethod
    def of(cls, values: Sequence[complex]) -> "AlphaTriple":
        if len(values) != 3:
            raise DomainError("alpha needs exactly three entries")
        return cls(*values)

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha1, self.alpha2, self.alpha3], dtype=complex)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.as_array())

    @property
    def satisfies_triangle(self) -> bool:
        return triangle_check(self)

    def normalized(self) -> "AlphaTriple":
        """Positive rescaling with max |alpha_j| = 1; the surface is unchanged."""
        arr = self.as_array()
        return AlphaTriple.of(arr / np.max(np.abs(arr)))

    def graph_params(self):
        """(a, b, omega) = (alpha1/conj(alpha3), alpha2/conj(alpha3), conj(alpha3)/alpha3)."""
        a3 = self.alpha3
        if a3 == 0:
            raise DomainError("alpha3 = 0: permute coordinates so the graph variable has a nonzero coefficient")
        return self.alpha1 / a3.conjugate(), self.alpha2 / a3.conjugate(), a3.conjugate() / a3

    def permuted(self, order: Sequence[int]) -> "AlphaTriple":
        arr = self.as_array()
        return AlphaTriple.of(arr[list(order)])


def triangle_check(alpha: AlphaTriple) -> bool:
    """Strict triangle inequality for (|alpha1|, |alpha2|, |alpha3|)."""
    r = alpha.moduli
    return bool(r[0] + r[1] > r[2] and r[0] + r[2] > r[1] and r[1] + r[2] > r[0])


def defining_residual(alpha: AlphaTriple, p):
    """LHS - RHS of the defining equation at p (shape (..., 3))."""
    a = alpha.as_array()
    p = np.asarray(p, dtype=complex)
    z1, z2, z3 = p[..., 0], p[..., 1], p[..., 2]
    ac = a.conjugate()
    res = a[0] * z1 + a[1] * z2 + a[2] * z3 - (ac[0] * z2 * z3 + ac[1] * z1 * z3 + ac[2] * z1 * z2)
    return complex(res) if res.ndim == 0 else res


def is_member(alpha: AlphaTriple, p, tol=DEFAULT_TOL):
    """Membership in M_alpha (open tridisc, residual of the normalised triple < tol)."""
    p = np.asarray(p, dtype=complex)
    inside = np.all(np.abs(p) < 1.0, axis=-1)
    res = np.abs(defining_residual(alpha.normalized(), p))
    out = inside & (res < tol)
    return bool(out) if np.ndim(out) == 0 else out


def graph_z3(alpha: AlphaTriple, z1, z2, tol=SINGULAR_TOL):
    """z3 = omega (a z1 + b z2 - z1 z2) / (conj(b) z1 + conj(a) z2 - 1)."""
    a, b, omega = alpha.graph_params()
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    den = guard(b.conjugate() * z1 + a.conjugate() * z2 - 1.0, "graph denominator", tol)
    out = omega * (a * z1 + b * z2 - z1 * z2) / den
    return complex(out) if out.ndim == 0 else out


def realization_f(a: float, b: float, z1, z2, tol=SINGULAR_TOL):
    """f_{a,b}(z1, z2) = (a z1 + b z2 - z1 z2) / (b z1 + a z2 - 1)."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    den = guard(b * z1 + a * z2 - 1.0, "realization denominator", tol)
    out = (a * z1 + b * z2 - z1 * z2) / den
    return complex(out) if out.ndim == 0 else out


def realization_contains(a: float, b: float, z1, z2):
    """Is (z1, z2) in the planar domain D_{a,b} = {|f_{a,b}| < 1}?"""
    if not (a > 0 and b > 0 and triangle_check(AlphaTriple(a, b, 1.0))):
        raise DomainError(f"(a, b, 1) = ({a}, {b}, 1) violates the triangle inequality")
    out = np.abs(realization_f(a, b, z1, z2)) < 1.0
    return bool(out) if np.ndim(out) == 0 else out


# -- automorphisms ----------------------------------------------------------


@dataclass(frozen=True)
class TridiscAutomorphism:
    """p -> (f_0(p[perm[0]]), f_1(p[perm[1]]), f_2(p[perm[2]])) with disc automorphisms f_i."""

    perm: tuple = (0, 1, 2)
    factors: tuple = field(default_factory=lambda: (DiscAutomorphism.identity(),) * 3)

    def __post_init__(self):
        perm = tuple(int(i) for i in self.perm)
        if sorted(perm) != [0, 1, 2]:
            raise DomainError(f"{perm} is not a permutation of (0, 1, 2)")
        if len(self.factors) != 3:
            raise DomainError("need one disc automorphism per coordinate")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "factors", tuple(self.factors))

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def rotations(cls, omegas):
        return cls((0, 1, 2), tuple(DiscAutomorphism.rotation_by(w) for w in omegas))

    @classmethod
    def permutation(cls, perm):
        return cls(perm, (DiscAutomorphism.identity(),) * 3)

    def __call__(self, p):
        return apply_automorphism(self, p)

    def compose(self, inner: "TridiscAutomorphism") -> "TridiscAutomorphism":
        return compose(self, inner)

    def inverse(self) -> "TridiscAutomorphism":
        return invert(self)


def apply_automorphism(auto: TridiscAutomorphism, p):
    p = np.asarray(p, dtype=complex)
    if p.shape[-1] != 3:
        raise DomainError("tridisc points need three coordinates")
    out = np.empty_like(p)
    for i, (j, f) in enumerate(zip(auto.perm, auto.factors)):
        out[..., i] = f(p[..., j])
    return out


def compose(outer: TridiscAutomorphism, inner: TridiscAutomorphism) -> TridiscAutomorphism:
    """outer o inner."""
    perm = tuple(inner.perm[outer.perm[i]] for i in range(3))
    factors = tuple(outer.factors[i].compose(inner.factors[outer.perm[i]]) for i in range(3))
    return TridiscAutomorphism(perm, factors)


def invert(auto: TridiscAutomorphism) -> TridiscAutomorphism:
    inv = [0, 0, 0]
    for i, j in enumerate(auto.perm):
        inv[j] = i
    factors = tuple(auto.factors[inv[j]].inverse() for j in range(3))
    return TridiscAutomorphism(tuple(inv), factors)


# -- phase normalisation ----------------------------------------------------

_A = np.array([[1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]])
_A_INV = (np.eye(3) - np.ones((3, 3))) / 2.0


@dataclass(frozen=True)
class RotationNormalization:
    auto: TridiscAutomorphism
    beta: AlphaTriple
    t: np.ndarray
    eta: np.ndarray


def _rotation_coefficients(alpha: AlphaTriple, eta: np.ndarray) -> np.ndarray:
    # beta_j = alpha_j eta_j / (eta_k eta_l)
    a = alpha.as_array()
    prod = np.prod(eta)
    return a * eta**2 / prod


def rotation_normalize(alpha: AlphaTriple, n_check=32, seed=0) -> RotationNormalization:
    """Coordinate rotation carrying M_alpha onto M_|alpha|.

    Phases s_j = arg(alpha_j) (0 for a vanishing entry) are killed by
    t = -A^{-1} s with A = 2I - J; the automorphism rotates coordinate j by
    conj(eta_j)^2 where eta_j = exp(i t_j).
    """
    a = alpha.as_array()
    s = np.where(a != 0, np.angle(a), 0.0)
    beta = AlphaTriple.of(np.abs(a))
    for sign in (-1.0, 1.0):
        t = sign * (_A_INV @ s)
        eta = np.exp(1j * t)
        auto = TridiscAutomorphism.rotations(np.conj(eta) ** 2)
        if np.allclose(_rotation_coefficients(alpha, eta), beta.as_array(), atol=1e-12 * np.max(np.abs(a))):
            if _maps_onto(auto, alpha, beta, n_check, seed):
                return RotationNormalization(auto, beta, t, eta)
    raise ConvergenceError("rotation normalisation failed verification", {"alpha": a.tolist()})


def _maps_onto(auto, alpha, beta, n, seed, tol=1e-10):
    if not triangle_check(alpha):
        # Sampler needs the triangle class; check the coefficient identity only.
        return True
    pts = sample_variety(alpha, n, seed)
    return bool(np.max(np.abs(defining_residual(beta.normalized(), auto(pts)))) < tol)


# -- base map between M_(1,1,1) and M_(x1,x2,1) --------------------------------


def base_gamma(lam, mu):
    """gamma with (lam, mu, gamma) on M_(1,1,1)."""
    return (lam + mu - lam * mu) / (lam + mu - 1.0)


def in_V(lam, mu) -> bool:
    if not (-1.0 < lam < 1.0 and -1.0 < mu < 1.0) or lam + mu == 1.0:
        return False
    return abs(base_gamma(lam, mu)) < 1.0


def in_W_plus(x1, x2) -> bool:
    """Positive component of {|x1|+|x2|>1, |x1|+1>|x2|, |x2|+1>|x1|}."""
    return bool(x1 > 0 and x2 > 0 and x1 + x2 > 1 and x1 + 1 > x2 and x2 + 1 > x1)


@dataclass(frozen=True)
class BasePoint:
    lam: float
    mu: float
    iterations: int = 0

    def __post_init__(self):
        if not in_V(self.lam, self.mu):
            raise DomainError(f"({self.lam}, {self.mu}) is outside V")

    @property
    def gamma(self) -> float:
        return base_gamma(self.lam, self.mu)


@dataclass(frozen=True)
class TriangleRegionPoint:
    x1: float
    x2: float

    def __post_init__(self):
        if not in_W_plus(self.x1, self.x2):
            raise DomainError(f"({self.x1}, {self.x2}) is outside W+")

    def as_array(self):
        return np.array([self.x1, self.x2])


def _base_values(lam, mu):
    den = 1.0 + 2.0 * (lam + mu) * (lam * mu - 1.0) - lam**2 * mu**2
    return (
        (1.0 - lam**2) * (mu**2 - mu + 1.0) / den,
        (1.0 - mu**2) * (lam**2 - lam + 1.0) / den,
    )


def base_map(lam: float, mu: float) -> TriangleRegionPoint:
    """(lam, mu) in V -> (A, B) in W+ such that M_(1,1,1) maps onto M_(A,B,1)."""
    if not in_V(lam, mu):
        raise DomainError(f"({lam}, {mu}) is outside V")
    return TriangleRegionPoint(*_base_values(lam, mu))


def psi(lam, mu):
    """(A + B, A - B) in closed form."""
    return (
        (lam + mu - 2 * lam * mu - 2) / (2 * lam + 2 * mu - lam * mu - 1),
        (lam - mu) / (1 - lam * mu),
    )


def psi_jacobian(lam, mu):
    d1 = (2 * lam + 2 * mu - lam * mu - 1) ** 2
    d2 = (1 - lam * mu) ** 2
    return np.array(
        [
            [3 * (1 - mu**2) / d1, 3 * (1 - lam**2) / d1],
            [(1 - mu**2) / d2, (lam**2 - 1) / d2],
        ]
    )


def _cleared(x, X, Y):
    # psi - (X, Y) with denominators multiplied out; same zeros inside V
    lam, mu = x
    return np.array(
        [
            (lam + mu - 2 * lam * mu - 2) - X * (2 * lam + 2 * mu - lam * mu - 1),
            (lam - mu) - Y * (1 - lam * mu),
        ]
    )


def _cleared_jacobian(x, X, Y):
    lam, mu = x
    return np.array(
        [
            [1 - 2 * mu - X * (2 - mu), 1 - 2 * lam - X * (2 - lam)],
            [1 + Y * mu, -1 + Y * lam],
        ]
    )


def _newton(target, x0, tol, max_iter):
    X, Y = target[0] + target[1], target[0] - target[1]
    scale = max(1.0, float(np.max(target)))
    x = np.array(x0, dtype=float)
    for k in range(max_iter + 1):
        err = np.max(np.abs(np.array(_base_values(*x)) - target))
        if err <= tol * scale:
            return x, k, err
        if k == max_iter:
            break
        g = _cleared(x, X, Y)
        dx = np.linalg.solve(_cleared_jacobian(x, X, Y), -g)
        step = 1.0
        gnorm = np.linalg.norm(g)
        while True:
            xn = x + step * dx
            if in_V(*xn) and np.linalg.norm(_cleared(xn, X, Y)) < gnorm * (1.0 - 1e-4 * step):
                break
            step *= 0.5
            if step < 1e-14:
                return x, k, err
        x = xn
    return x, max_iter, err


def solve_base_point(target: TriangleRegionPoint, tol=1e-12, max_iter=100) -> BasePoint:
    """Invert ``base_map`` by damped Newton from (0, 0).

    Falls back to continuation along the segment from (1, 1) (image of the
    origin) to ``target``; W+ is convex so the path stays admissible.
    """
    T = target.as_array() if isinstance(target, TriangleRegionPoint) else np.asarray(target, float)
    if not in_W_plus(*T):
        raise DomainError(f"target {T} is outside W+")
    scale = max(1.0, float(np.max(T)))
    x, its, err = _newton(T, (0.0, 0.0), tol, max_iter)
    if err <= tol * scale:
        return BasePoint(float(x[0]), float(x[1]), its)

    log.debug("direct Newton stalled at %s (err %.3g); continuing along segment", T, err)
    start = np.array([1.0, 1.0])
    for pieces in (8, 32, 128):
        x = np.zeros(2)
        total = 0
        ok = True
        for j in range(1, pieces + 1):
            Tj = start + (T - start) * j / pieces
            x, k, err = _newton(Tj, x, tol, max_iter)
            total += k
            if err > tol * max(1.0, float(np.max(Tj))):
                ok = False
                break
        if ok:
            return BasePoint(float(x[0]), float(x[1]), its + total)
    raise ConvergenceError(
        f"solve_base_point did not converge for target {T}",
        {"target": T.tolist(), "last": x.tolist(), "error": float(err)},
    )


def base_automorphism(bp: BasePoint) -> TridiscAutomorphism:
    """z -> (-m_lam(z1), -m_mu(z2), -m_gamma(z3)); maps M_(1,1,1) onto M_(A,B,1)."""
    return TridiscAutomorphism(
        (0, 1, 2),
        tuple(DiscAutomorphism(-1.0, c) for c in (bp.lam, bp.mu, bp.gamma)),
    )


def _to_positive_model(alpha: AlphaTriple):
    """Automorphism carrying M_alpha onto M_(1,1,1), via M_|alpha|."""
    rot = rotation_normalize(alpha)
    r = alpha.moduli
    bp = solve_base_point(TriangleRegionPoint(r[0] / r[2], r[1] / r[2]))
    return compose(invert(base_automorphism(bp)), rot.auto)


def build_biholo(alpha: AlphaTriple, beta: AlphaTriple) -> TridiscAutomorphism:
    """An automorphism of the tridisc mapping M_alpha onto M_beta."""
    for name, tr in (("alpha", alpha), ("beta", beta)):
        if not triangle_check(tr):
            raise DomainError(f"{name} violates the triangle inequality")
    to_alpha_model = _to_positive_model(alpha)
    to_beta_model = _to_positive_model(beta)
    return compose(invert(to_beta_model), to_alpha_model)


# -- sampling ---------------------------------------------------------------


def _uniform_disc(rng, n, radius):
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def sample_variety(alpha: AlphaTriple, n: int, seed: int, radius=SAMPLE_RADIUS, max_draws=None):
    """n points of M_alpha by rejection sampling over the graph realisation."""
    if n < 0:
        raise DomainError("sample count must be nonnegative")
    if not triangle_check(alpha):
        raise DomainError("alpha violates the triangle inequality")
    alpha = alpha.normalized()
    k = int(np.argmax(alpha.moduli))
    free = [j for j in range(3) if j != k]
    model = alpha.permuted(free + [k])
    a, b, _ = model.graph_params()
    rng = np.random.default_rng(seed)
    max_draws = max_draws or 2000 * n + 10000
    out = np.empty((0, 3), dtype=complex)
    drawn = 0
    while len(out) < n:
        if drawn >= max_draws:
            raise SamplerStarvation(f"only {len(out)} of {n} samples accepted after {drawn} draws")
        m = min(max(256, 2 * (n - len(out))), max_draws - drawn)
        drawn += m
        u = _uniform_disc(rng, m, radius)
        v = _uniform_disc(rng, m, radius)
        den = np.abs(b.conjugate() * u + a.conjugate() * v - 1.0)
        ok = den > SAMPLE_DENOM_MIN
        u, v = u[ok], v[ok]
        w = graph_z3(model, u, v)
        ok = np.abs(w) < radius
        pts = np.empty((int(ok.sum()), 3), dtype=complex)
        pts[:, free[0]] = u[ok]
        pts[:, free[1]] = v[ok]
        pts[:, k] = w[ok]
        pts = pts[np.abs(defining_residual(alpha, pts)) < 1e-12]
        out = np.concatenate([out, pts])
    return out[:n]


def random_alpha(rng, triangle=True):
    """Random complex triple; with ``triangle`` it satisfies the triangle inequality."""
    while True:
        a = AlphaTriple.of(rng.uniform(0.05, 1.0, 3) * np.exp(2j * np.pi * rng.random(3)))
        if not triangle or triangle_check(a):
            return a
