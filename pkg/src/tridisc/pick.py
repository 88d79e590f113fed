"""Extremal three-point Pick data on the tridisc.

A non-degenerate extremal problem is encoded by three non-collinear disc
points a1, a2, a3 (the nodal disc lam -> (lam m_{a_j}(lam))_j passes
through the nodes) and a point gamma inside their triangle (the targets
are lam m_gamma(lam)).  Two nested magic functions F1, F2 interpolate the
data; the set where they agree is a quadratic in z3 whose discriminant
vanishes identically, and its double root is the graph of M_alpha for the
alpha recovered from the nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import polyalg
from .cxcore import (
    SINGULAR_TOL,
    DiscAutomorphism,
    MagicParams,
    caratheodory_tridisc,
    disc_point,
    guard,
    hyperbolic_distance,
    magic,
    mobius,
    nodal_coordinate,
)
from .errors import DegenerateDataError, DomainError, SingularityError
from .polyalg import MultiPoly
from .variety import AlphaTriple

COLLINEAR_TOL = 1e-12


def _signed_area2(a1, a2, a3):
    return ((a2 - a1) * np.conj(a3 - a1)).imag


def barycentric(a1, a2, a3, g):
    """Real barycentric weights (w1, w2, w3) of g in the triangle a1 a2 a3."""
    m = np.array([[(a1 - a3).real, (a2 - a3).real], [(a1 - a3).imag, (a2 - a3).imag]])
    if abs(np.linalg.det(m)) < COLLINEAR_TOL:
        raise DegenerateDataError("nodes are collinear")
    w1, w2 = np.linalg.solve(m, [(g - a3).real, (g - a3).imag])
    return np.array([w1, w2, 1.0 - w1 - w2])


@dataclass(frozen=True)
class NodalData:
    a1: complex
    a2: complex
    a3: complex
    gamma: complex

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "gamma"):
            object.__setattr__(self, name, disc_point(getattr(self, name), name))
        a = self.nodes
        if min(abs(a[0] - a[1]), abs(a[0] - a[2]), abs(a[1] - a[2])) == 0:
            raise DegenerateDataError("nodes must be pairwise distinct")
        if abs(_signed_area2(*a)) <= COLLINEAR_TOL:
            raise DegenerateDataError("nodes are collinear")
        w = self.weights
        if not np.all((w > 0) & (w < 1)):
            raise DomainError(f"gamma is not strictly inside the triangle (weights {w})")

    @classmethod
    def from_weights(cls, a1, a2, a3, weights):
        w = np.asarray(weights, dtype=float)
        return cls(a1, a2, a3, complex(w[0] * a1 + w[1] * a2 + w[2] * a3))

    @property
    def nodes(self):
        return (self.a1, self.a2, self.a3)

    @property
    def weights(self):
        return barycentric(self.a1, self.a2, self.a3, self.gamma)


def random_nodal_data(rng, radius=0.8, margin=0.05, wmin=0.1, wmax=0.9) -> NodalData:
    """Nodes with modulus <= radius, |Im((a2-a1) conj(a3-a1))| >= margin, weights in [wmin, wmax]."""
    while True:
        a = radius * np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        if abs(_signed_area2(*a)) >= margin:
            break
    while True:
        w = rng.uniform(wmin, wmax, 3)
        w /= w.sum()
        if np.all((w >= wmin) & (w <= wmax)):
            return NodalData.from_weights(*a, w)


@dataclass(frozen=True)
class PickProblem:
    nodes: np.ndarray  # shape (3, 3): three points of the tridisc
    targets: np.ndarray  # shape (3,)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=complex)
        targets = np.asarray(self.targets, dtype=complex)
        if nodes.shape != (3, 3) or targets.shape != (3,):
            raise DomainError("a three-point problem needs 3 nodes in C^3 and 3 targets")
        if np.any(np.abs(nodes) >= 1) or np.any(np.abs(targets) >= 1):
            raise DomainError("nodes and targets must lie in the open (poly)disc")
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if np.all(nodes[i] == nodes[j]):
                raise DomainError("nodes must be pairwise distinct")
            if targets[i] == targets[j]:
                raise DomainError("targets must be pairwise distinct")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "targets", targets)

    @classmethod
    def from_nodal(cls, nd: NodalData, lams):
        lams = np.asarray(lams, dtype=complex)
        return cls(nodal_point(nd, 1.0, lams), lams * mobius(nd.gamma, lams))


def nodal_point(nd: NodalData, t, lam):
    """(lam m_{t a1}(lam), lam m_{t a2}(lam), lam m_{t a3}(lam)); shape (..., 3)."""
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    lam = np.asarray(lam, dtype=complex)
    return np.stack([nodal_coordinate(t * a, lam) for a in nd.nodes], axis=-1)


def nondegenerate(p: PickProblem, tol=1e-10) -> bool:
    """No two-point subproblem is extremal: rho(targets) < c(nodes) for every pair."""
    for i, j in ((0, 1), (0, 2), (1, 2)):
        lhs = hyperbolic_distance(p.targets[i], p.targets[j])
        rhs = caratheodory_tridisc(p.nodes[i], p.nodes[j])
        if not lhs < rhs - tol:
            return False
    return True


# -- the two interpolants ---------------------------------------------------

# variant -> (inner pair, outer coordinate), 0-based
NESTINGS = {"F1": ((0, 1), 2), "F2": ((0, 2), 1)}


@dataclass(frozen=True)
class InterpolantSpec:
    """F = Phi_{t,omega}(Phi_{s,nu}(z_i, z_j), z_k) for the variant's nesting."""

    variant: str
    s: float
    t: float
    nu: complex
    omega: complex

    def __post_init__(self):
        if self.variant not in NESTINGS:
            raise DomainError(f"unknown variant {self.variant!r}")
        for name in ("s", "t"):
            v = float(getattr(self, name))
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name}={v} must lie in (0, 1)")
            object.__setattr__(self, name, v)

    @property
    def nesting(self):
        return NESTINGS[self.variant]

    @property
    def inner(self) -> MagicParams:
        return MagicParams(self.s, self.nu)

    @property
    def outer(self) -> MagicParams:
        return MagicParams(self.t, self.omega)


def barycentric_split(nd: NodalData, apex: int):
    """(s, t) with gamma = t (s a_i + (1-s) a_j) + (1-t) a_apex.

    ``apex`` is 3 for F1 (i, j = 1, 2) and 2 for F2 (i, j = 1, 3); indices
    are 1-based like the coordinates.
    """
    pairs = {3: (0, 1), 2: (0, 2), 1: (1, 2)}
    if apex not in pairs:
        raise DomainError("apex must be 1, 2 or 3")
    w = nd.weights
    i, j = pairs[apex]
    t = w[i] + w[j]
    s = w[i] / t
    return float(s), float(t)


def _unimodular_ratio(d):
    if abs(d) < COLLINEAR_TOL:
        raise DegenerateDataError("coincident points in interpolant construction")
    return np.conj(d) / d


def build_interpolant(nd: NodalData, variant: str = "F1") -> InterpolantSpec:
    if variant not in NESTINGS:
        raise DomainError(f"unknown variant {variant!r}")
    a1, a2, a3 = nd.nodes
    if variant == "F1":
        s, t = barycentric_split(nd, 3)
        b = s * a1 + (1 - s) * a2
        nu = _unimodular_ratio(a2 - a1)
        omega = _unimodular_ratio(a3 - b)
    else:
        s, t = barycentric_split(nd, 2)
        b = s * a1 + (1 - s) * a3
        nu = _unimodular_ratio(a3 - a1)
        omega = _unimodular_ratio(a2 - b)
    return InterpolantSpec(variant, s, t, complex(nu), complex(omega))


def eval_interpolant(spec: InterpolantSpec, p, tol=SINGULAR_TOL):
    """Nested evaluation; p has shape (..., 3)."""
    p = np.asarray(p, dtype=complex)
    (i, j), k = spec.nesting
    inner = magic(spec.inner, p[..., i], p[..., j], tol)
    out = magic(spec.outer, inner, p[..., k], tol)
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class TrilinearCoeffs:
    """F = (A z1 + B z2 + C z3 + D z1z2 + E z1z3 + F z2z3 + top z1z2z3)
           / (1 + top (conj(F) z1 + conj(E) z2 + conj(D) z3 + C z1z2 + B z1z3 + A z2z3))."""

    A: complex
    B: complex
    C: complex
    D: complex
    E: complex
    F: complex
    top: complex

    def __post_init__(self):
        for k in ("A", "B", "C", "D", "E", "F", "top"):
            object.__setattr__(self, k, complex(getattr(self, k)))

    def as_dict(self):
        return {k: getattr(self, k) for k in ("A", "B", "C", "D", "E", "F", "top")}


def trilinear_coeffs(spec: InterpolantSpec) -> TrilinearCoeffs:
    s, t, nu, om = spec.s, spec.t, spec.nu, spec.omega
    # coefficients in the nesting's own variables (x1, x2 inner; x3 outer)
    cx1 = t * s
    cx2 = t * (1 - s)
    cx3 = 1 - t
    cx12 = nu * t
    cx13 = om * s + nu * (1 - s) * (1 - t)
    cx23 = nu * s * (1 - t) + om * (1 - s)
    if spec.variant == "F1":
        return TrilinearCoeffs(cx1, cx2, cx3, cx12, cx13, cx23, om * nu)
    # F2: (x1, x2, x3) = (z1, z3, z2)
    return TrilinearCoeffs(cx1, cx3, cx2, cx13, cx12, cx23, om * nu)


def eval_trilinear(c: TrilinearCoeffs, p, tol=SINGULAR_TOL):
    p = np.asarray(p, dtype=complex)
    z1, z2, z3 = p[..., 0], p[..., 1], p[..., 2]
    num = c.A * z1 + c.B * z2 + c.C * z3 + c.D * z1 * z2 + c.E * z1 * z3 + c.F * z2 * z3 + c.top * z1 * z2 * z3
    den = 1 + c.top * (
        np.conj(c.F) * z1 + np.conj(c.E) * z2 + np.conj(c.D) * z3 + c.C * z1 * z2 + c.B * z1 * z3 + c.A * z2 * z3
    )
    out = num / guard(den, "trilinear denominator", tol)
    return complex(out) if np.ndim(out) == 0 else out


# -- agreement set ------------------------------------------------------------


@dataclass(frozen=True)
class UniquenessQuadratic:
    """q2 z3^2 + q1 z3 + q0 with q_i polynomials in (z1, z2)."""

    q2: MultiPoly
    q1: MultiPoly
    q0: MultiPoly

    def __call__(self, z1, z2, z3):
        return self.q2(z1, z2) * z3**2 + self.q1(z1, z2) * z3 + self.q0(z1, z2)


def uniqueness_quadratic(c1: TrilinearCoeffs, c2: TrilinearCoeffs) -> UniquenessQuadratic:
    return UniquenessQuadratic(*polyalg.quadratic_coefficients(c1, c2))


def discriminant(q: UniquenessQuadratic) -> MultiPoly:
    return q.q1 * q.q1 - 4 * (q.q2 * q.q0)


def double_root_z3(q: UniquenessQuadratic, z1, z2, tol=SINGULAR_TOL):
    """-q1 / (2 q2), or -q0 / q1 where q2 degenerates.

    Points where q2 and q1 both vanish are singular: a scalar call raises,
    an array call returns NaN there so callers can drop them.
    """
    a = np.asarray(q.q2(z1, z2))
    b = np.asarray(q.q1(z1, z2))
    c = np.asarray(q.q0(z1, z2))
    quad = np.abs(a) >= tol
    lin = ~quad & (np.abs(b) >= tol)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(quad, -b / (2 * np.where(quad, a, 1)), np.where(lin, -c / np.where(lin, b, 1), np.nan))
    if out.ndim == 0:
        if np.isnan(out):
            raise SingularityError("quadratic degenerates completely at this point")
        return complex(out)
    return out


# -- recovering M_alpha from the nodes -----------------------------------------


def nodal_graph_params(a1, a2, a3):
    """(omega, a, b) with lam m_{a3}(lam) = omega (a z1 + b z2 - z1 z2)/(conj(b) z1 + conj(a) z2 - 1)."""
    d = np.conj(a2 - a1)
    if abs(d) < COLLINEAR_TOL:
        raise DegenerateDataError("a1 = a2")
    omega = d / (a2 - a1)
    return complex(omega), complex((a3 - a2) / d), complex((a1 - a3) / d)


def variety_from_nodes(a1, a2, a3) -> AlphaTriple:
    """The alpha (max |alpha_j| = 1) whose surface contains every nodal disc lam m_{t a_j}(lam)."""
    omega, a, b = nodal_graph_params(a1, a2, a3)
    eta = np.sqrt(omega)
    alpha3 = np.conj(eta)
    return AlphaTriple(a * eta, b * eta, alpha3).normalized()


def recover_lambda(z1, z2, a1, a2, tol=SINGULAR_TOL):
    """(lam t, lam^2) from z_i = lam m_{t a_i}(lam)."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    den = guard(a1 - a2 + np.conj(a1) * z1 - np.conj(a2) * z2, "recovery denominator", tol)
    lt = (z1 - z2) / den
    lsq = (a2 * z1 - a1 * z2 + (np.conj(a2) - np.conj(a1)) * z1 * z2) / den
    if lt.ndim == 0:
        return complex(lt), complex(lsq)
    return lt, lsq


@dataclass(frozen=True)
class DiscNormalization:
    """psi_j(B_{a_j}(reparam(lam))) = lam m_{b_j}(lam) with b = (0, b2 > 0, b3)."""

    reparam: DiscAutomorphism
    coord_maps: tuple
    b2: float
    b3: complex

    @property
    def b(self):
        return (0j, complex(self.b2), self.b3)


def _critical_point(a):
    # zero of (lam m_a(lam))' inside the disc: conj(a) lam^2 - 2 lam + a = 0
    if a == 0:
        return 0j
    return (1 - np.sqrt(1 - abs(a) ** 2)) / np.conj(a)


def _other_zero(a, p):
    # B_a(x) = B_a(p) has roots p and q with p + q = a + B_a(p) conj(a)
    c = nodal_coordinate(a, p)
    return a + c * np.conj(a) - p


def normalize_disc(a1, a2, a3) -> DiscNormalization:
    """Automorphisms bringing the nodal disc to (-lam^2, lam m_{b2}(lam), lam m_{b3}(lam)), b2 > 0."""
    a = [disc_point(x, f"a{i + 1}") for i, x in enumerate((a1, a2, a3))]
    if len({a[0], a[1], a[2]}) < 3:
        raise DegenerateDataError("nodes must be pairwise distinct")
    p = complex(_critical_point(a[0]))
    m_p = DiscAutomorphism(1.0, p)  # lam -> m_p(lam)

    psis, ds = [], []
    for j, aj in enumerate(a):
        c = complex(nodal_coordinate(aj, p))
        psi = DiscAutomorphism(1.0, c)  # w -> m_c(w)
        d = 0j if j == 0 else complex(mobius(p, _other_zero(aj, p)))
        # h(lam) = m_c(B_j(m_p(lam))) = kappa lam m_d(lam)
        lam0 = 0.5 if d == 0 else -0.5 * d / abs(d)
        kappa = psi(nodal_coordinate(aj, m_p(lam0))) / (lam0 * mobius(d, lam0))
        psis.append(DiscAutomorphism.rotation_by(np.conj(kappa) / abs(kappa)).compose(psi))
        ds.append(d)

    if abs(ds[1]) < 1e-14:
        raise DegenerateDataError("second coordinate degenerates to -lam^2; b2 > 0 is impossible")
    xi = ds[1] / abs(ds[1])
    reparam = m_p.compose(DiscAutomorphism.rotation_by(xi))
    comp = DiscAutomorphism.rotation_by(np.conj(xi) ** 2)
    coord_maps = tuple(comp.compose(psi) for psi in psis)
    return DiscNormalization(reparam, coord_maps, float(abs(ds[1])), complex(np.conj(xi) * ds[2]))


def apply_disc_normalization(norm: DiscNormalization, nodes, lam):
    """Left side psi_j(B_{a_j}(reparam(lam))) as an array (..., 3)."""
    lam = np.asarray(lam, dtype=complex)
    mu = norm.reparam(lam)
    return np.stack([f(nodal_coordinate(aj, mu)) for f, aj in zip(norm.coord_maps, nodes)], axis=-1)
