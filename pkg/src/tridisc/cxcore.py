"""Complex-disc primitives.

Möbius maps, the bidisc magic functions, degree-2 Blaschke factors and the
hyperbolic / Carathéodory distances used for non-degeneracy checks.

Scalar parameters (centres, rotations) are plain Python numbers; the
evaluated variable may be a scalar or a numpy array, so the same functions
drive both single-point evaluation and vectorised verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError

DEFAULT_TOL = 1e-10
SINGULAR_TOL = 1e-12
_EDGE = 1e-12  # slack for "closed disc" checks


def disc_point(z, name="z"):
    """Return ``complex(z)`` after checking it lies in the open unit disc."""
    z = complex(z)
    if not abs(z) < 1.0:
        raise DomainError(f"{name}={z!r} is not in the open unit disc")
    return z


def torus_point(z, name="z", tol=1e-8):
    """Normalise a (nearly) unimodular number onto the circle."""
    z = complex(z)
    r = abs(z)
    if abs(r - 1.0) > tol:
        raise DomainError(f"{name}={z!r} is not unimodular (|{name}|={r})")
    return z / r


def _check_closed(z, name="z"):
    if np.any(np.abs(z) > 1.0 + _EDGE):
        raise DomainError(f"{name} must lie in the closed unit disc")


def guard(den, what="denominator", tol=SINGULAR_TOL):
    """Raise :class:`SingularityError` if any entry of ``den`` is below ``tol``."""
    if np.any(np.abs(den) < tol):
        raise SingularityError(f"{what} vanishes (|{what}| < {tol:g})")
    return den


def mobius(a, z):
    """The involutive disc automorphism m_a(z) = (a - z) / (1 - conj(a) z)."""
    a = complex(a)
    if not abs(a) < 1.0:
        raise DomainError(f"Möbius centre a={a!r} must satisfy |a| < 1")
    z = np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)
    _check_closed(z)
    return (a - z) / (1.0 - a.conjugate() * z)


@dataclass(frozen=True)
class MagicParams:
    """Parameters (a, eta) of the magic function Phi_{a,eta} on the bidisc."""

    a: float
    eta: complex

    def __post_init__(self):
        a = float(self.a)
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"magic weight a={a} must lie in [0, 1]")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "eta", torus_point(self.eta, "eta"))


def magic(p: MagicParams, x, y, tol=SINGULAR_TOL):
    """Phi_{a,eta}(x, y) = (a x + (1-a) y + eta x y) / (1 + eta (1-a) x + eta a y)."""
    a, eta = p.a, p.eta
    x = np.asarray(x, dtype=complex) if np.ndim(x) else complex(x)
    y = np.asarray(y, dtype=complex) if np.ndim(y) else complex(y)
    num = a * x + (1.0 - a) * y + eta * x * y
    den = guard(1.0 + eta * (1.0 - a) * x + eta * a * y, "magic denominator", tol)
    return num / den


def nodal_coordinate(a, lam):
    """Degree-2 Blaschke product B_a(lam) = lam * m_a(lam), zeros at 0 and a."""
    lam = np.asarray(lam, dtype=complex) if np.ndim(lam) else complex(lam)
    return lam * mobius(a, lam)


def pseudo_hyperbolic(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.abs(z - w) / np.abs(1.0 - np.conj(z) * w)


def hyperbolic_distance(z, w):
    """rho(z, w) = artanh |(z - w) / (1 - conj(z) w)| on the open disc."""
    if np.any(np.abs(z) >= 1.0) or np.any(np.abs(w) >= 1.0):
        raise DomainError("hyperbolic distance needs points of the open disc")
    d = np.arctanh(pseudo_hyperbolic(z, w))
    return float(d) if np.ndim(d) == 0 else d


def caratheodory_tridisc(z, w):
    """Carathéodory distance on the tridisc: max of coordinatewise rho."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if z.shape[-1] != 3 or w.shape[-1] != 3:
        raise DomainError("tridisc points need three coordinates")
    d = np.max(hyperbolic_distance(z, w), axis=-1)
    return float(d) if np.ndim(d) == 0 else d


def winding_number(values):
    """Winding number about 0 of a closed sampled curve (last point joins first)."""
    v = np.asarray(values, dtype=complex)
    steps = np.angle(np.roll(v, -1) / v)
    return int(round(steps.sum() / (2 * np.pi)))


@dataclass(frozen=True)
class DiscAutomorphism:
    """The disc automorphism z -> rotation * m_center(z).

    The identity is ``DiscAutomorphism(-1, 0)`` because m_0(z) = -z.
    """

    rotation: complex = -1.0
    center: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rotation", torus_point(self.rotation, "rotation"))
        object.__setattr__(self, "center", disc_point(self.center, "center"))

    @classmethod
    def identity(cls):
        return cls(-1.0, 0.0)

    @classmethod
    def rotation_by(cls, omega):
        """z -> omega * z."""
        return cls(-complex(omega), 0.0)

    @classmethod
    def from_matrix(cls, m):
        # (p z + q) / (r z + s) == rotation * (center - z) / (1 - conj(center) z)
        (p, q), (_, s) = m
        rot = -p / s
        center = -q / p
        return cls(rot / abs(rot), center)

    def matrix(self):
        w, c = self.rotation, self.center
        return np.array([[-w, w * c], [-c.conjugate(), 1.0]], dtype=complex)

    def __call__(self, z):
        return self.rotation * mobius(self.center, z)

    def compose(self, inner: "DiscAutomorphism") -> "DiscAutomorphism":
        """Return self o inner."""
        return DiscAutomorphism.from_matrix(self.matrix() @ inner.matrix())

    def inverse(self) -> "DiscAutomorphism":
        (p, q), (r, s) = self.matrix()
        return DiscAutomorphism.from_matrix(np.array([[s, -q], [-r, p]]))
