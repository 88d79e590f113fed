"""Deterministic verification suite over all module invariants.

Each check draws from its own ``numpy`` generator seeded by
``(seed, check index)`` so results do not depend on which other checks
run, and reports the worst residual it saw against its tolerance.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Dict, List, Optional

import numpy as np

from . import boundary, cxcore, pick, polyalg, variety
from .errors import DomainError, TridiscError
from .polyalg import MultiPoly

PASS, FAIL, AMBIGUOUS = "pass", "fail", "ambiguous"
COEFF_NAMES = ("A", "B", "C", "D", "E", "F")


@dataclass
class CheckResult:
    name: str
    status: str
    worst_residual: float
    samples: int
    seed: int
    tolerance: float
    wall_time: Optional[float] = None
    detail: str = ""


@dataclass
class VerificationReport:
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def totals(self) -> Dict[str, int]:
        out = {PASS: 0, FAIL: 0, AMBIGUOUS: 0, "checks": len(self.checks)}
        for c in self.checks:
            out[c.status] += 1
        out["samples"] = sum(c.samples for c in self.checks)
        return out

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.status == PASS for c in self.checks)

    def to_dict(self, timings=True):
        checks = []
        for c in sorted(self.checks, key=lambda c: c.name):
            d = asdict(c)
            if not timings:
                d.pop("wall_time")
            checks.append(d)
        return {"seed": self.seed, "checks": checks, "totals": self.totals, "ok": self.ok}

    @classmethod
    def from_dict(cls, d):
        return cls(d["seed"], [CheckResult(**c) for c in d["checks"]])

    def to_json(self, timings=True):
        return json.dumps(self.to_dict(timings), sort_keys=True, indent=2)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int
    count: int = 100  # base sample count; individual checks scale it
    tol_scale: float = 1.0  # multiplies every check's own tolerance
    mutate: Optional[str] = None  # e.g. "E" or "E'": flip the sign of that coefficient
    only: Optional[tuple] = None

    def __post_init__(self):
        if self.count <= 0:
            raise DomainError("sample count must be positive")
        if self.mutate is not None and self.mutate.rstrip("'") not in COEFF_NAMES:
            raise DomainError(f"cannot mutate unknown coefficient {self.mutate!r}")


CHECKS: Dict[str, Callable] = {}


def check(name):
    def deco(fn):
        CHECKS[name] = fn
        return fn

    return deco


def _rng(seed, name):
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def _disc(rng, n, r):
    return r * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


def mutate_coeffs(c1, c2, which: Optional[str]):
    """Flip the sign of one coefficient: ``"E"`` hits F1, ``"E'"`` hits F2."""
    if not which:
        return c1, c2
    name = which.rstrip("'")
    if which.endswith("'"):
        return c1, replace(c2, **{name: -getattr(c2, name)})
    return replace(c1, **{name: -getattr(c1, name)}), c2


def interpolant_pair(nd, mutate=None):
    c1 = pick.trilinear_coeffs(pick.build_interpolant(nd, "F1"))
    c2 = pick.trilinear_coeffs(pick.build_interpolant(nd, "F2"))
    return mutate_coeffs(c1, c2, mutate)


def discriminant_ratio(c1, c2):
    """max |coeff of q1^2 - 4 q2 q0| / max |coeff of q1^2|."""
    q = pick.uniqueness_quadratic(c1, c2)
    disc = pick.discriminant(q)
    scale = (q.q1 * q.q1).max_coeff()
    return disc.max_coeff() / scale, disc, scale


# -- cxcore ---------------------------------------------------------------------


@check("cxcore.mobius_involution")
def _(rng, n, tol):
    worst = 0.0
    for a in _disc(rng, max(n // 10, 1), 0.95):
        z = _disc(rng, 10, 1.0)
        worst = max(worst, np.max(np.abs(cxcore.mobius(a, cxcore.mobius(a, z)) - z)))
    return worst, n, 1e-12


@check("cxcore.magic_inner")
def _(rng, n, tol):
    x = np.exp(2j * np.pi * rng.random(n))
    y = np.exp(2j * np.pi * rng.random(n))
    worst = 0.0
    used = 0
    for a, eta, xi, yi in zip(rng.random(n), np.exp(2j * np.pi * rng.random(n)), x, y):
        p = cxcore.MagicParams(a, eta)
        if abs(1 + eta * (1 - a) * xi + eta * a * yi) < 1e-3:
            continue
        worst = max(worst, abs(abs(cxcore.magic(p, xi, yi)) - 1))
        used += 1
    return worst, used, 1e-12


@check("cxcore.magic_interior_bound")
def _(rng, n, tol):
    worst = 0.0
    for a, eta in zip(rng.random(n), np.exp(2j * np.pi * rng.random(n))):
        v = cxcore.magic(cxcore.MagicParams(a, eta), _disc(rng, 20, 0.95), _disc(rng, 20, 0.95))
        worst = max(worst, np.max(np.abs(v)))
    # reported residual: how far the max modulus sits above 1 (negative is good)
    return worst - 1.0, n, 0.0


@check("cxcore.nodal_winding")
def _(rng, n, tol):
    bad = 0
    for a in _disc(rng, max(n // 10, 1), 0.9):
        r = (abs(a) + 1) / 2
        curve = cxcore.nodal_coordinate(a, r * np.exp(2j * np.pi * np.arange(512) / 512))
        bad += cxcore.winding_number(curve) != 2
    return float(bad), max(n // 10, 1), 0.5


# -- variety -------------------------------------------------------------------


@check("variety.graph_consistency")
def _(rng, n, tol):
    worst = 0.0
    for _ in range(max(n // 20, 1)):
        alpha = variety.random_alpha(rng, triangle=False).normalized()
        z1, z2 = _disc(rng, 20, 0.95), _disc(rng, 20, 0.95)
        a, b, _ = alpha.graph_params()
        ok = np.abs(b.conjugate() * z1 + a.conjugate() * z2 - 1) > 1e-3
        z3 = variety.graph_z3(alpha, z1[ok], z2[ok])
        pts = np.stack([z1[ok], z2[ok], z3], -1)
        scale = np.maximum(1.0, np.abs(z3))
        worst = max(worst, np.max(np.abs(variety.defining_residual(alpha, pts)) / scale, initial=0.0))
    return worst, n, 1e-12


@check("variety.region_correspondence")
def _(rng, n, tol):
    g = np.linspace(0.01, 3.0, max(int(np.sqrt(n * 10)), 10))
    bad = 0
    for x1 in g:
        for x2 in g:
            bad += variety.triangle_check(variety.AlphaTriple(x1, x2, 1.0)) != variety.in_W_plus(x1, x2)
    return float(bad), len(g) ** 2, 0.5


@check("variety.jacobian")
def _(rng, n, tol):
    worst_fd, min_det = 0.0, np.inf
    h = 1e-6
    k = 0
    while k < n:
        lam, mu = rng.uniform(-0.99, 0.99, 2)
        if not variety.in_V(lam, mu) or not variety.in_V(lam + h, mu + h) or not variety.in_V(lam - h, mu - h):
            continue
        J = variety.psi_jacobian(lam, mu)
        fd = np.empty((2, 2))
        for j, (dl, dm) in enumerate(((h, 0), (0, h))):
            fd[:, j] = (np.array(variety.psi(lam + dl, mu + dm)) - np.array(variety.psi(lam - dl, mu - dm))) / (2 * h)
        worst_fd = max(worst_fd, np.max(np.abs(fd - J) / np.maximum(1.0, np.abs(J))))
        min_det = min(min_det, abs(np.linalg.det(J)))
        k += 1
    if min_det <= 0:
        worst_fd = np.inf
    return worst_fd, n, 1e-6


@check("variety.base_roundtrip")
def _(rng, n, tol):
    worst = 0.0
    for _ in range(n):
        s = 1 + rng.random() * 9
        d = rng.uniform(-0.98, 0.98)
        T = variety.TriangleRegionPoint((s + d) / 2, (s - d) / 2)
        bp = variety.solve_base_point(T)
        worst = max(worst, np.max(np.abs(variety.base_map(bp.lam, bp.mu).as_array() - T.as_array())))
    return worst, n, 1e-10


@check("variety.biholo_transport")
def _(rng, n, tol):
    worst = 0.0
    pairs = max(n // 20, 1)
    for i in range(pairs):
        a, b = variety.random_alpha(rng), variety.random_alpha(rng)
        phi = variety.build_biholo(a, b)
        pts = variety.sample_variety(a, 50, int(rng.integers(2**31)))
        img = phi(pts)
        back = phi.inverse()(img)
        worst = max(
            worst,
            np.max(np.abs(variety.defining_residual(b.normalized(), img))),
            np.max(np.abs(back - pts)),
        )
    return worst, pairs * 50, 1e-9


@check("variety.rotation_normalization")
def _(rng, n, tol):
    worst = 0.0
    k = max(n // 10, 1)
    for _ in range(k):
        a = variety.random_alpha(rng)
        rn = variety.rotation_normalize(a)
        pts = variety.sample_variety(a, 20, int(rng.integers(2**31)))
        worst = max(worst, np.max(np.abs(variety.defining_residual(rn.beta.normalized(), rn.auto(pts)))))
    return worst, k * 20, 1e-10


# -- pick ------------------------------------------------------------------------


@check("pick.interpolation_identity")
def _(rng, n, tol):
    worst = 0.0
    inst = max(n // 50, 1)
    T = np.linspace(0.0, 1.0, 20)
    L = 0.95 * np.sqrt(np.linspace(0.01, 1, 20)) * np.exp(2j * np.pi * np.linspace(0, 1, 20, endpoint=False))
    for _ in range(inst):
        nd = pick.random_nodal_data(rng)
        for variant in ("F1", "F2"):
            spec = pick.build_interpolant(nd, variant)
            for t in T:
                got = pick.eval_interpolant(spec, pick.nodal_point(nd, t, L))
                worst = max(worst, np.max(np.abs(got - L * cxcore.mobius(t * nd.gamma, L))))
    return worst, inst * 800, 1e-11


@check("pick.coefficient_equivalence")
def _(rng, n, tol):
    worst = 0.0
    inst = max(n // 10, 1)
    for _ in range(inst):
        nd = pick.random_nodal_data(rng)
        p = np.stack([_disc(rng, 50, 0.95) for _ in range(3)], -1)
        for variant in ("F1", "F2"):
            spec = pick.build_interpolant(nd, variant)
            c = pick.trilinear_coeffs(spec)
            worst = max(worst, np.max(np.abs(pick.eval_interpolant(spec, p) - pick.eval_trilinear(c, p))))
    return worst, inst * 100, 1e-12


@check("pick.self_inversive")
def _(rng, n, tol):
    worst = 0.0
    inst = max(n // 10, 1)
    for _ in range(inst):
        nd = pick.random_nodal_data(rng)
        for variant in ("F1", "F2"):
            c = pick.trilinear_coeffs(pick.build_interpolant(nd, variant))
            num = polyalg.trilinear_numerator(c)
            den = polyalg.trilinear_denominator(c)
            # den coefficient of z_i equals top * conj(num coefficient of the complementary pair)
            for lin, pair in (((1, 0, 0), (0, 1, 1)), ((0, 1, 0), (1, 0, 1)), ((0, 0, 1), (1, 1, 0))):
                worst = max(worst, abs(den.coeff(lin) - c.top * np.conj(num.coeff(pair))))
            worst = max(worst, abs(abs(c.top) - 1))
    return worst, inst * 2, 1e-14


@check("pick.discriminant_vanishing")
def _(rng, n, tol, mutate=None):
    worst = 0.0
    for _ in range(n):
        ratio, _, _ = discriminant_ratio(*interpolant_pair(pick.random_nodal_data(rng), mutate))
        worst = max(worst, ratio)
    return worst, n, 1e-9


@check("pick.uniqueness_variety")
def _(rng, n, tol):
    worst = 0.0
    inst = max(n // 5, 1)
    for _ in range(inst):
        nd = pick.random_nodal_data(rng)
        q = pick.uniqueness_quadratic(*interpolant_pair(nd))
        alpha = pick.variety_from_nodes(*nd.nodes)
        pts = variety.sample_variety(alpha, 50, int(rng.integers(2**31)))
        z3 = pick.double_root_z3(q, pts[:, 0], pts[:, 1])
        worst = max(worst, np.nanmax(np.abs(z3 - pts[:, 2])))
    return worst, inst * 50, 1e-9


@check("pick.surface_containment")
def _(rng, n, tol):
    worst = 0.0
    inst = max(n // 20, 1)
    L = 0.95 * np.sqrt(np.linspace(0.01, 1, 20)) * np.exp(2j * np.pi * np.linspace(0, 1, 20, endpoint=False))
    for _ in range(inst):
        nd = pick.random_nodal_data(rng)
        alpha = pick.variety_from_nodes(*nd.nodes)
        for t in np.linspace(0.0, 1.0, 20):
            worst = max(worst, np.max(np.abs(variety.defining_residual(alpha, pick.nodal_point(nd, t, L)))))
    return worst, inst * 400, 1e-11


@check("pick.normal_form")
def _(rng, n, tol):
    worst = 0.0
    inst = max(n // 2, 1)
    for _ in range(inst):
        nd = pick.random_nodal_data(rng)
        nf = pick.normalize_disc(*nd.nodes)
        lam = _disc(rng, 20, 0.95)
        lhs = pick.apply_disc_normalization(nf, nd.nodes, lam)
        rhs = np.stack([lam * cxcore.mobius(b, lam) for b in nf.b], -1)
        worst = max(worst, np.max(np.abs(lhs - rhs)))
        if not nf.b2 > 0:
            worst = np.inf
    return worst, inst * 20, 1e-10


# -- polyalg ---------------------------------------------------------------------


def random_poly(rng, nvars=2, terms=6, deg=3):
    items = {}
    for _ in range(terms):
        e = tuple(int(k) for k in rng.integers(0, deg + 1, nvars))
        items[e] = complex(*rng.normal(size=2))
    return MultiPoly(nvars, items)


def _term_diff(p, q):
    keys = set(p.terms) | set(q.terms)
    return max((abs(p.coeff(k) - q.coeff(k)) for k in keys), default=0.0)


@check("polyalg.ring_laws")
def _(rng, n, tol):
    worst = 0.0
    for _ in range(n):
        p, q, r = (random_poly(rng) for _ in range(3))
        worst = max(
            worst,
            _term_diff((p * q) * r, p * (q * r)),
            _term_diff(p * q, q * p),
            _term_diff((p + q) + r, p + (q + r)),
            _term_diff(p + q, q + p),
            _term_diff(p * (q + r), p * q + p * r),
        )
    return worst, n, 1e-13


@check("polyalg.eval_homomorphism")
def _(rng, n, tol):
    worst = 0.0
    for _ in range(n):
        p, q = random_poly(rng), random_poly(rng)
        x = _disc(rng, 2, 1.0)
        for got, want in (((p * q)(*x), p(*x) * q(*x)), ((p + q)(*x), p(*x) + q(*x))):
            worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    return worst, n, 1e-12


@check("polyalg.discriminant_consistency")
def _(rng, n, tol, mutate=None):
    disagreements = 0
    inst = max(n // 10, 1)
    for _ in range(inst):
        c1, c2 = interpolant_pair(pick.random_nodal_data(rng), mutate)
        disc = polyalg.discriminant_poly(c1, c2)
        scale = (pick.uniqueness_quadratic(c1, c2).q1 ** 2).max_coeff()
        symbolic = polyalg.is_zero_poly(disc, 1e-9, scale)
        grid = polyalg.grid_is_zero(disc, 1e-9, scale)
        disagreements += symbolic != grid
    return float(disagreements), inst, 0.5


# -- boundary ---------------------------------------------------------------------


@check("boundary.closure_equivalence")
def _(rng, n, tol):
    m = n * 1000
    z, w = _disc(rng, m, 1.0), _disc(rng, m, 1.0)
    den = np.abs(z + w - 1)
    keep = den > 1e-6
    z, w = z[keep], w[keep]
    f = np.abs((z + w - z * w) / (z + w - 1))
    cond = boundary.closure_condition(z, w)
    # points within rounding of the boundary are not informative
    clear = np.abs(f - 1) > 1e-9
    bad = np.count_nonzero((cond != (f <= 1)) & clear)
    return float(bad), int(keep.sum()), 0.5


@check("boundary.torus_closure")
def _(rng, n, tol):
    m = n * 100
    z1, z2 = np.exp(2j * np.pi * rng.random(m)), np.exp(2j * np.pi * rng.random(m))
    keep = np.abs(z1 + z2 - 1) > 1e-3
    z3 = boundary.model_graph(z1[keep], z2[keep])
    return float(np.max(np.abs(np.abs(z3) - 1))), int(keep.sum()), 1e-12


@check("boundary.circle_slice")
def _(rng, n, tol):
    ws = np.exp(2j * np.pi * (np.arange(n) + 0.5) / n)
    zs = _disc(rng, 400, 0.999)
    bad = 0
    for w in ws:
        holds = boundary.closure_condition(zs, w)
        predicted = w.real <= 0.5
        # the criterion is independent of z: either all z satisfy it or none do
        if predicted and not np.all(holds) or not predicted and np.any(holds):
            bad += 1
    return float(bad), n, 0.5


MUTATION_AWARE = {"pick.discriminant_vanishing", "polyalg.discriminant_consistency"}


def run_check(name, config: SuiteConfig) -> CheckResult:
    fn = CHECKS[name]
    rng = _rng(config.seed, name)
    t0 = time.perf_counter()
    try:
        if name in MUTATION_AWARE:
            worst, samples, tol = fn(rng, config.count, None, mutate=config.mutate)
        else:
            worst, samples, tol = fn(rng, config.count, None)
        tol = tol * config.tol_scale
        status = PASS if worst <= tol and np.isfinite(worst) else FAIL
        detail = ""
    except TridiscError as exc:
        worst, samples, tol, status, detail = float("inf"), 0, 0.0, FAIL, f"{type(exc).__name__}: {exc}"
    return CheckResult(
        name=name,
        status=status,
        worst_residual=float(worst),
        samples=int(samples),
        seed=config.seed,
        tolerance=float(tol),
        wall_time=time.perf_counter() - t0,
        detail=detail,
    )


def verify_suite(config: SuiteConfig) -> VerificationReport:
    names = sorted(config.only) if config.only else sorted(CHECKS)
    unknown = set(names) - set(CHECKS)
    if unknown:
        raise DomainError(f"unknown checks: {sorted(unknown)}")
    return VerificationReport(config.seed, [run_check(name, config) for name in names])
