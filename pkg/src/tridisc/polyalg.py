"""Sparse multivariate polynomials with complex coefficients.

Exponent bookkeeping is exact; coefficients are floating point, so "zero"
always means "small relative to a reference scale".  This is enough to
expand the difference of two interpolants and certify that the
discriminant of the resulting quadratic vanishes identically.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, Tuple

import numpy as np

from .errors import DomainError

PRUNE_REL = 1e-15

Exponent = Tuple[int, ...]


class MultiPoly:
    """Polynomial in ``nvars`` variables z1..zn stored as {exponent tuple: coefficient}.

    ``scale`` records the coefficient magnitude of the operands that produced
    the polynomial (its own largest coefficient for a fresh one).  Pruning
    and zero tests are relative to it, so cancellation down to rounding
    noise is recognized as zero.
    """

    __slots__ = ("nvars", "terms", "scale")
    __array_ufunc__ = None  # make numpy scalars defer to the reflected operators

    def __init__(self, nvars: int, terms: Dict[Exponent, complex] | None = None, scale: float | None = None):
        if not 1 <= nvars <= 3:
            raise DomainError("MultiPoly supports one to three variables")
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars or min(e) < 0:
                raise DomainError(f"bad exponent {e} for {nvars} variables")
            c = complex(c)
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        own = max((abs(c) for c in clean.values()), default=0.0)
        ref = own if scale is None else max(float(scale), own)
        cut = PRUNE_REL * ref
        self.terms = {e: c for e, c in clean.items() if abs(c) > cut}
        self.scale = ref

    # constructors
    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def constant(cls, c, nvars):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, i, nvars):
        """z_{i+1} (0-based index)."""
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1.0})

    @classmethod
    def from_terms(cls, nvars, items: Iterable[Tuple[Exponent, complex]]):
        return cls(nvars, dict(items))

    # inspection
    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.sorted_terms())))

    def is_zero(self):
        return not self.terms

    def degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def max_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def coeff(self, e):
        return self.terms.get(tuple(e), 0j)

    def sorted_terms(self):
        """Graded lexicographic order, highest term first."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    # arithmetic
    def _lift(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise DomainError(f"arity mismatch: {self.nvars} vs {other.nvars}")
            return other
        return MultiPoly.constant(other, self.nvars)

    def __add__(self, other):
        return poly_add(self, self._lift(other))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()}, scale=self.scale)

    def __sub__(self, other):
        return poly_add(self, -self._lift(other))

    def __rsub__(self, other):
        return poly_add(self._lift(other), -self)

    def __mul__(self, other):
        return poly_mul(self, self._lift(other))

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise DomainError("only nonnegative integer powers")
        out = MultiPoly.constant(1.0, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, *point):
        return poly_eval(self, point)

    def conj_coeffs(self):
        return MultiPoly(self.nvars, {e: c.conjugate() for e, c in self.terms.items()}, scale=self.scale)

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {len(self)} terms)"

    def __str__(self):
        return to_text(self)


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.nvars != q.nvars:
        raise DomainError(f"arity mismatch: {p.nvars} vs {q.nvars}")
    out = dict(p.terms)
    for e, c in q.terms.items():
        out[e] = out.get(e, 0) + c
    return MultiPoly(p.nvars, out, scale=max(p.scale, q.scale))


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.nvars != q.nvars:
        raise DomainError(f"arity mismatch: {p.nvars} vs {q.nvars}")
    out: Dict[Exponent, complex] = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return MultiPoly(p.nvars, out, scale=p.scale * q.scale)


def poly_eval(p: MultiPoly, point):
    """Direct term sum; ``point`` entries may be scalars or broadcastable arrays."""
    if len(point) != p.nvars:
        raise DomainError(f"expected {p.nvars} coordinates, got {len(point)}")
    point = [np.asarray(x, dtype=complex) for x in point]
    total = np.zeros(np.broadcast(*point).shape, dtype=complex)
    for e, c in p.terms.items():
        term = c
        for x, k in zip(point, e):
            if k:
                term = term * x**k
        total = total + term
    return complex(total) if total.ndim == 0 else total


def _reference(p: MultiPoly, scale):
    if scale:
        return scale
    return p.scale if p.scale > 0 else 1.0


def is_zero_poly(p: MultiPoly, tol: float, scale: float | None = None) -> bool:
    """Every |coefficient| < tol * scale.

    The scale defaults to the magnitude of the operands ``p`` was computed
    from, or 1 for the zero polynomial built from nothing.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    ref = _reference(p, scale)
    return all(abs(c) < tol * ref for c in p.terms.values())


def grid_is_zero(p: MultiPoly, tol: float, scale: float | None = None, radius=0.9) -> bool:
    """Evaluation test on a (d+1)^n tensor grid of distinct points.

    A polynomial of degree d vanishing on such a grid is zero, so a small
    maximum there certifies (numerically) the identity without looking at
    coefficients.
    """
    d = max(p.degree(), 0)
    nodes = radius * np.exp(2j * np.pi * (np.arange(d + 1) + 0.5) / (d + 1)) * np.linspace(0.6, 1.0, d + 1)
    grids = np.meshgrid(*([nodes] * p.nvars), indexing="ij")
    vals = poly_eval(p, grids)
    ref = _reference(p, scale)
    return bool(np.max(np.abs(vals), initial=0.0) < tol * ref)


# -- text form ---------------------------------------------------------------

_TERM = re.compile(r"\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)((?:\s+z\d+\^\d+)*)")


def to_text(p: MultiPoly) -> str:
    """One term per line, ``(re,im) z1^i z2^j z3^k``, graded-lex highest first."""
    if p.is_zero():
        return "0"
    lines = []
    for e, c in p.sorted_terms():
        mons = " ".join(f"z{i + 1}^{k}" for i, k in enumerate(e))
        lines.append(f"({c.real!r},{c.imag!r}) {mons}")
    return "\n".join(lines)


def from_text(text: str, nvars: int) -> MultiPoly:
    text = text.strip()
    if text == "0":
        return MultiPoly.zero(nvars)
    terms = {}
    for line in text.splitlines():
        m = _TERM.fullmatch(line.strip())
        if not m:
            raise DomainError(f"cannot parse term {line!r}")
        c = complex(float(m.group(1)), float(m.group(2)))
        e = [0] * nvars
        for tok in m.group(3).split():
            var, k = tok[1:].split("^")
            e[int(var) - 1] = int(k)
        terms[tuple(e)] = c
    return MultiPoly(nvars, terms)


# -- interpolant difference --------------------------------------------------


def coefficient_polys(c):
    """The z3-linear splitting of numerator and denominator of a trilinear interpolant.

    Numerator = alpha * z3 + delta, denominator = beta * z3 + gamma with
    alpha, beta, gamma, delta polynomials in (z1, z2).  ``c`` carries
    A..F and ``top`` (the z1 z2 z3 coefficient).
    """
    A, B, C, D, E, F, w = _scalars(c)
    z1 = MultiPoly.variable(0, 2)
    z2 = MultiPoly.variable(1, 2)
    alpha = C + E * z1 + F * z2 + w * z1 * z2
    beta = w * (D.conjugate() + B * z1 + A * z2)
    gamma = 1.0 + w * (F.conjugate() * z1 + E.conjugate() * z2 + C * z1 * z2)
    delta = A * z1 + B * z2 + D * z1 * z2
    return alpha, beta, gamma, delta


def _scalars(c):
    # plain complex: numpy scalars would turn MultiPoly products into object arrays
    return tuple(complex(getattr(c, k)) for k in ("A", "B", "C", "D", "E", "F", "top"))


def quadratic_coefficients(c1, c2):
    """(q2, q1, q0) with F1 - F2 = 0  <=>  q2 z3^2 + q1 z3 + q0 = 0 off the poles."""
    a, b, g, d = coefficient_polys(c1)
    a_, b_, g_, d_ = coefficient_polys(c2)
    q2 = a * b_ - a_ * b
    q1 = a * g_ - a_ * g + b_ * d - b * d_
    q0 = g_ * d - g * d_
    return q2, q1, q0


def discriminant_poly(c1, c2) -> MultiPoly:
    """q1^2 - 4 q2 q0 as a polynomial in (z1, z2); total degree <= 8."""
    q2, q1, q0 = quadratic_coefficients(c1, c2)
    return q1 * q1 - 4 * (q2 * q0)


def trilinear_numerator(c) -> MultiPoly:
    A, B, C, D, E, F, w = _scalars(c)
    z = [MultiPoly.variable(i, 3) for i in range(3)]
    return (
        A * z[0] + B * z[1] + C * z[2]
        + D * z[0] * z[1] + E * z[0] * z[2] + F * z[1] * z[2]
        + w * z[0] * z[1] * z[2]
    )


def trilinear_denominator(c) -> MultiPoly:
    A, B, C, D, E, F, w = _scalars(c)
    z = [MultiPoly.variable(i, 3) for i in range(3)]
    inner = (
        F.conjugate() * z[0] + E.conjugate() * z[1] + D.conjugate() * z[2]
        + C * z[0] * z[1] + B * z[0] * z[2] + A * z[1] * z[2]
    )
    return 1.0 + w * inner
