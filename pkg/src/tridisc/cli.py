"""Command-line front end.

Complex numbers travel as ``[re, im]`` pairs (plain JSON numbers are
accepted as reals).  Any JSON-valued option may be given as ``-`` to read
it from standard input.  Exit codes: 0 success/true, 1 failed/false,
2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib import resources
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import boundary, pick, polyalg, variety, verify
from .cxcore import DiscAutomorphism
from .errors import ConvergenceError, DomainError, SamplerStarvation, SingularityError, TridiscError

EXIT_OK, EXIT_FALSE, EXIT_INVALID = 0, 1, 2
RANDOMIZED = {"sample", "sample-shilov", "verify-all", "verify-discriminant"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")

    def exit(self, status=0, message=None):
        # only reached for --help
        if message:
            sys.stderr.write(message)
        raise SystemExit(status)


# -- encoding ----------------------------------------------------------------


def encode(obj):
    """Recursively turn complex numbers into [re, im] and numpy values into JSON values."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_real(obj.real), _real(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _real(obj)
    if isinstance(obj, DiscAutomorphism):
        return {"rotation": encode(complex(obj.rotation)), "center": encode(complex(obj.center))}
    if isinstance(obj, variety.TridiscAutomorphism):
        return {"perm": list(obj.perm), "factors": [encode(f) for f in obj.factors]}
    if isinstance(obj, variety.AlphaTriple):
        return encode(obj.as_array())
    return obj


def _real(x):
    x = float(x)
    if not math.isfinite(x):
        return None
    return x + 0.0  # normalize -0.0


def dumps(obj) -> str:
    return json.dumps(encode(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re1", "im1", "re2", "im2", "re3", "im3"])
    for p in np.asarray(points, dtype=complex).reshape(-1, 3):
        w.writerow([repr(_real(v)) for z in p for v in (z.real, z.imag)])
    return buf.getvalue()


def load_schema(command: str) -> dict:
    """The JSON schema shipped for a subcommand's standard output."""
    ref = resources.files("tridisc") / "schemas" / f"{command}.json"
    return json.loads(ref.read_text())


# -- decoding ----------------------------------------------------------------


class _Inputs:
    def __init__(self, stdin):
        self._stdin = stdin
        self._cache = None

    def load(self, text, what):
        if text is None:
            raise UsageError(f"missing {what}")
        if text == "-":
            if self._cache is None:
                self._cache = self._stdin.read()
            text = self._cache
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON for {what}: {exc.msg}") from None


def to_complex(v, what="value"):
    if isinstance(v, bool):
        raise UsageError(f"{what}: expected a number or [re, im]")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise UsageError(f"{what}: expected a number or [re, im], got {json.dumps(v)}")


def to_complex_list(v, n, what):
    if not isinstance(v, list) or (n is not None and len(v) != n):
        size = "a list" if n is None else f"{n} entries"
        raise UsageError(f"{what}: expected {size}")
    return [to_complex(x, f"{what}[{i}]") for i, x in enumerate(v)]


def to_points(v, what):
    """One point [z1, z2, z3] or a list of them -> array (k, 3)."""
    if not isinstance(v, list) or not v:
        raise UsageError(f"{what}: expected a point or a list of points")
    if isinstance(v[0], list) and len(v[0]) == 3:
        return np.array([to_complex_list(p, 3, f"{what}[{i}]") for i, p in enumerate(v)], dtype=complex)
    return np.array([to_complex_list(v, 3, what)], dtype=complex)


# -- subcommands ---------------------------------------------------------------


def _alpha(inp, args, name="alpha"):
    return variety.AlphaTriple.of(to_complex_list(inp.load(getattr(args, name), name), 3, name))


def _nodal(inp, args):
    a = to_complex_list(inp.load(args.nodes, "nodes"), 3, "nodes")
    g = to_complex(inp.load(args.gamma, "gamma"), "gamma")
    return pick.NodalData(*a, g)


def _tol(args, default):
    return default if args.tol is None else args.tol


def cmd_check_alpha(inp, args):
    ok = variety.triangle_check(_alpha(inp, args))
    return {"triangle": ok}, ok


def cmd_membership(inp, args):
    alpha = _alpha(inp, args)
    pts = to_points(inp.load(args.point, "point"), "point")
    tol = _tol(args, variety.DEFAULT_TOL)
    res = np.abs(variety.defining_residual(alpha.normalized(), pts))
    member = [bool(np.all(np.abs(p) < 1) and r < tol) for p, r in zip(pts, res)]
    return {"member": member, "residual": res, "tol": tol}, all(member)


def cmd_graph(inp, args):
    alpha = _alpha(inp, args)
    z1 = to_complex(inp.load(args.z1, "z1"), "z1")
    z2 = to_complex(inp.load(args.z2, "z2"), "z2")
    z3 = complex(variety.graph_z3(alpha, z1, z2, tol=_tol(args, variety.SINGULAR_TOL)))
    return {"z3": z3, "in_tridisc": abs(z1) < 1 and abs(z2) < 1 and abs(z3) < 1}, True


def cmd_biholo(inp, args):
    alpha, beta = _alpha(inp, args), _alpha(inp, args, "beta")
    phi = variety.build_biholo(alpha, beta)
    out = {"automorphism": phi}
    if args.points is not None:
        pts = to_points(inp.load(args.points, "points"), "points")
        img = phi(pts)
        out["images"] = img
        out["residual"] = float(np.max(np.abs(variety.defining_residual(beta.normalized(), img))))
    return out, True


def cmd_normalize_alpha(inp, args):
    rn = variety.rotation_normalize(_alpha(inp, args))
    return {"beta": rn.beta, "t": rn.t, "eta": rn.eta, "automorphism": rn.auto}, True


def _spec_dict(spec):
    return {
        "s": spec.s,
        "t": spec.t,
        "nu": complex(spec.nu),
        "omega": complex(spec.omega),
        "coefficients": pick.trilinear_coeffs(spec).as_dict(),
    }


def cmd_interpolants(inp, args):
    nd = _nodal(inp, args)
    return {v: _spec_dict(pick.build_interpolant(nd, v)) for v in ("F1", "F2")}, True


def cmd_verify_discriminant(inp, args):
    nd = _nodal(inp, args)
    tol = _tol(args, 1e-9)
    c1, c2 = verify.interpolant_pair(nd, args.mutate)
    ratio, disc, scale = verify.discriminant_ratio(c1, c2)
    rng = np.random.default_rng(args.seed)
    z = 0.95 * np.sqrt(rng.random((2, 64))) * np.exp(2j * np.pi * rng.random((2, 64)))
    sampled = float(np.max(np.abs(disc(z[0], z[1])))) / scale
    ok = ratio < tol and sampled < tol
    out = {
        "max_coefficient": ratio,
        "sampled_max": sampled,
        "terms": len(disc),
        "tol": tol,
        "pass": ok,
    }
    if args.show_poly:
        out["discriminant"] = polyalg.to_text(disc)
    return out, ok


def cmd_uniqueness_z3(inp, args):
    nd = _nodal(inp, args)
    z1 = to_complex(inp.load(args.z1, "z1"), "z1")
    z2 = to_complex(inp.load(args.z2, "z2"), "z2")
    q = pick.uniqueness_quadratic(*verify.interpolant_pair(nd))
    z3 = complex(pick.double_root_z3(q, z1, z2, tol=_tol(args, pick.SINGULAR_TOL)))
    return {"z3": z3}, True


def cmd_normalize_disc(inp, args):
    a = to_complex_list(inp.load(args.nodes, "nodes"), 3, "nodes")
    nf = pick.normalize_disc(*a)
    return {"b": list(nf.b), "b2": nf.b2, "reparam": nf.reparam, "coordinate_maps": list(nf.coord_maps)}, True


def cmd_nondegenerate(inp, args):
    nodes = to_points(inp.load(args.nodes, "nodes"), "nodes")
    targets = to_complex_list(inp.load(args.targets, "targets"), 3, "targets")
    ok = pick.nondegenerate(pick.PickProblem(nodes, np.array(targets)), tol=_tol(args, 1e-10))
    return {"nondegenerate": ok}, ok


def cmd_shilov_classify(inp, args):
    alpha = _alpha(inp, args)
    pts = to_points(inp.load(args.point, "point"), "point")
    tol = _tol(args, boundary.DEFAULT_TOL)
    classes = [boundary.classify_point(alpha, p, tol).value for p in pts]
    return {"class": classes}, True


def _emit_samples(pts, args):
    if args.format == "csv":
        return to_csv(pts)
    return {"points": pts, "count": len(pts)}


def cmd_sample(inp, args):
    return _emit_samples(variety.sample_variety(_alpha(inp, args), args.n, args.seed), args), True


def cmd_sample_shilov(inp, args):
    return _emit_samples(boundary.sample_shilov(_alpha(inp, args), args.n, args.seed), args), True


def cmd_verify_all(inp, args):
    if args.count <= 0:
        report = verify.VerificationReport(args.seed)
        raise _EarlyExit(dumps(report.to_dict(args.timings)), "sample count must be positive", EXIT_INVALID)
    cfg = verify.SuiteConfig(
        seed=args.seed,
        count=args.count,
        tol_scale=args.tol_scale,
        mutate=args.mutate,
        only=tuple(args.check) if args.check else None,
    )
    report = verify.verify_suite(cfg)
    return report.to_dict(args.timings), report.ok


class _EarlyExit(Exception):
    def __init__(self, out, err, code):
        super().__init__(err)
        self.out, self.err, self.code = out, err, code


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="numerical tolerance")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")

    p = _Parser(prog="tridisc", description="Varieties in the tridisc and 3-point Pick interpolation.")
    p.add_argument("--tol", type=float, default=None, help="numerical tolerance")
    p.add_argument("--seed", type=int, default=None, help="random seed")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("check-alpha", cmd_check_alpha, "triangle inequality for alpha")
    sp.add_argument("alpha", help="JSON [a1, a2, a3]")

    sp = add("membership", cmd_membership, "is a point on M_alpha")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--point", required=True, help="one point [z1, z2, z3] or a list of points")

    sp = add("graph", cmd_graph, "z3 over (z1, z2) on M_alpha")
    for name in ("--alpha", "--z1", "--z2"):
        sp.add_argument(name, required=True)

    sp = add("biholo", cmd_biholo, "automorphism of the tridisc carrying M_alpha onto M_beta")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--beta", required=True)
    sp.add_argument("--points", help="optional points of M_alpha to map")

    sp = add("normalize-alpha", cmd_normalize_alpha, "rotate alpha to its moduli")
    sp.add_argument("--alpha", required=True)

    def nodal(sp):
        sp.add_argument("--nodes", required=True, help="JSON [a1, a2, a3]")
        sp.add_argument("--gamma", required=True)

    nodal(add("interpolants", cmd_interpolants, "both interpolants and their trilinear coefficients"))

    sp = add("verify-discriminant", cmd_verify_discriminant, "check the discriminant vanishes identically")
    nodal(sp)
    sp.add_argument("--mutate", help="flip the sign of one coefficient, e.g. E or E' (negative control)")
    sp.add_argument("--show-poly", action="store_true", help="include the expanded discriminant")

    sp = add("uniqueness-z3", cmd_uniqueness_z3, "double root z3 of the uniqueness quadratic")
    nodal(sp)
    sp.add_argument("--z1", required=True)
    sp.add_argument("--z2", required=True)

    sp = add("normalize-disc", cmd_normalize_disc, "normal form of the nodal disc")
    sp.add_argument("--nodes", required=True)

    sp = add("nondegenerate", cmd_nondegenerate, "no two-point subproblem is extremal")
    sp.add_argument("--nodes", required=True, help="three points of the tridisc")
    sp.add_argument("--targets", required=True)

    sp = add("shilov-classify", cmd_shilov_classify, "classify points against the closure of M_alpha")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--point", required=True)

    for name, fn, help_ in (
        ("sample", cmd_sample, "sample points of M_alpha"),
        ("sample-shilov", cmd_sample_shilov, "sample the Shilov boundary of M_alpha"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("--alpha", required=True)
        sp.add_argument("-n", type=int, required=True)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = add("verify-all", cmd_verify_all, "run the verification suite")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--tol-scale", type=float, default=1.0)
    sp.add_argument("--mutate", help="flip the sign of one interpolant coefficient")
    sp.add_argument("--check", action="append", help="run only this check (repeatable)")
    sp.add_argument("--timings", action="store_true", help="include wall times (output no longer byte-stable)")
    return p


def run_command(argv: Sequence[str], stdin=None) -> Tuple[int, str, str]:
    """Run one invocation; returns (exit code, stdout text, stderr text)."""
    stdin = stdin if stdin is not None else sys.stdin
    try:
        args = build_parser().parse_args(list(argv))
        if args.command in RANDOMIZED and args.seed is None:
            raise UsageError(f"{args.command} requires --seed")
        if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
            raise UsageError("-n must be nonnegative")
        result, ok = args.func(_Inputs(stdin), args)
    except _EarlyExit as exc:
        return exc.code, exc.out, f"error: {exc.err}\n"
    except (UsageError, DomainError, SingularityError) as exc:
        return EXIT_INVALID, "", f"error: {exc}\n"
    except (ConvergenceError, SamplerStarvation) as exc:
        return EXIT_FALSE, "", f"failed: {exc}\n"
    except TridiscError as exc:
        return EXIT_INVALID, "", f"error: {exc}\n"
    out = result if isinstance(result, str) else dumps(result)
    return (EXIT_OK if ok else EXIT_FALSE), out, ""


def main(argv: Optional[List[str]] = None) -> int:
    code, out, err = run_command(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
