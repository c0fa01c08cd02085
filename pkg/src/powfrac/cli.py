"""Command-line front end.

Every command prints one JSON document (or CSV) to stdout.  With ``--out DIR``
the reports are written there instead, together with ``manifest.json``
recording the arguments and the sha256 of each output so that
``powfrac replay DIR/manifest.json`` can check the run is reproducible.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .analyze import (
    DEFAULT_WARMUP,
    assign_eta,
    cluster_limit_points,
    difference_structure,
    find_vector_collision,
    pure_period_mod,
    pv_verify,
    tagged,
    verify_contraction,
)
from .errors import BadInput, InternalInconsistency, NoCollision, PowfracError
from .field import FieldElement, trace_sequence
from .orbit import OrbitConfig, iterate, smallness_check, write_csv
from .poly_algebra import Classification, IntPolynomial, classify, length
from .salem import build_context, density_scan, kronecker_search, near_integer_check

# A Salem density run at least this long counts as evidence of an interval of limit points.
DENSITY_EVIDENCE = Fraction(1, 4)


@dataclass
class RunManifest:
    command: str
    argv: list
    polynomial: Optional[str]
    xi: Optional[str]
    L: int
    horizons: list
    precisions: dict
    version: str = __version__
    outputs: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "argv": self.argv,
            "polynomial": self.polynomial,
            "xi": self.xi,
            "L": self.L,
            "horizons": self.horizons,
            "precisions": self.precisions,
            "tool_version": self.version,
            "outputs": self.outputs,
        }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_atomic(path: str, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path) or ".", prefix=".tmp-")
    with os.fdopen(fd, "w", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _number(args):
    return classify(IntPolynomial.parse(args.poly), cap=args.precision_cap)


def _xi(a, args) -> FieldElement:
    xi = FieldElement.parse(a, args.xi)
    if args.L != 1:
        xi = FieldElement.from_coords(a, [c / args.L for c in xi.coords()])
    return xi


def _cfg(args, N=None) -> OrbitConfig:
    return OrbitConfig(N or args.N, resolution=args.resolution, precision_cap=args.precision_cap)


def _alpha_json(a, bits=64) -> dict:
    lo, hi = a.enclosure(bits)
    return {"lo": tagged(Fraction(lo, 2**bits), bits), "hi": tagged(Fraction(hi, 2**bits), bits)}


# ---------------------------------------------------------------------------
# commands: each returns {filename: text}
# ---------------------------------------------------------------------------

def cmd_classify(args) -> dict:
    p = IntPolynomial.parse(args.poly)
    a = classify(p, cap=args.precision_cap)
    rep = {
        "polynomial": str(p),
        "class": a.classification.value,
        "degree": p.degree,
        "length": length(p),
        "irreducibility": a.irreducibility.value,
        "irreducibility_note": a.irreducibility_note,
        "counts": {"inside": a.counts.inside, "on": a.counts.on, "outside": a.counts.outside},
        "alpha": _alpha_json(a),
    }
    return {"classify.json": dumps(rep)}


def cmd_orbit(args) -> dict:
    a = _number(args)
    samples = iterate(_xi(a, args), a, _cfg(args))
    if args.format == "csv":
        return {"orbit.csv": write_csv(samples)}
    rows = [{"n": s.n, "x": s.x, "y": tagged(s.y, s.resolution), "bits_used": s.bits_used, "exact": s.exact}
            for s in samples]
    return {"orbit.json": dumps({"xi": str(_xi(a, args)), "resolution": args.resolution, "samples": rows})}


def _limits(a, xi, args, N=None, warmup=None):
    samples = iterate(xi, a, _cfg(args, N))
    return samples, cluster_limit_points(samples, Fraction(args.epsilon), warmup or args.warmup)


def cmd_limits(args) -> dict:
    a = _number(args)
    xi = _xi(a, args)
    _, rep = _limits(a, xi, args)
    out = rep.to_json()
    out["pv_verify"] = pv_verify(rep, xi.L, Fraction(args.epsilon)) if a.classification is Classification.PV else None
    return {"limits.json": dumps(out)}


def cmd_period(args) -> dict:
    if args.recurrence:
        A = [int(x) for x in args.recurrence.split(",")]
        init = [int(x) for x in args.init.split(",")] if args.init else []
        rep = pure_period_mod(A, init, args.L)
    else:
        if not args.poly:
            raise BadInput("give a polynomial or --recurrence")
        a = _number(args)
        xi = _xi(a, args)
        c = a.minpoly.coeffs
        d = a.degree
        rep = pure_period_mod([c[k] for k in range(d - 1, -1, -1)], trace_sequence(xi, d), xi.L)
    return {"period.json": dumps(rep.to_json())}


def _salem_report(a, xi, args, samples=None):
    ctx = build_context(a, xi, max(128, 2 * args.resolution))
    need = ctx.q * args.N
    if samples is None or max(s.n for s in samples) < need:
        samples = iterate(xi, a, _cfg(args, need))
    near = near_integer_check(ctx, samples, horizon=args.N)
    dens = density_scan(ctx, samples, args.bins, horizon=args.N)
    return ctx, near, dens


def cmd_salem(args) -> dict:
    a = _number(args)
    xi = _xi(a, args)
    ctx, near, dens = _salem_report(a, xi, args)
    if args.format == "csv":
        return {"density.csv": dens.histogram_csv()}
    rep = {"context": ctx.to_json(), "near_integer": near.to_json(), "density": dens.to_json(args.resolution)}
    return {"salem.json": dumps(rep), "density.csv": dens.histogram_csv()}


def cmd_kronecker(args) -> dict:
    a = _number(args)
    ctx = build_context(a, _xi(a, args), max(128, 2 * args.resolution))
    targets = [float(t) for t in args.targets.split(",")] if args.targets else [1.0] * ctx.m
    n = kronecker_search(ctx.phis, targets, args.tol, args.n_max, ctx.U_vals, ctx.V_vals, ctx.q)
    rep = {"n": n, "n_max": args.n_max, "m": ctx.m, "targets": [str(t) for t in targets], "tol": str(args.tol)}
    return {"kronecker.json": dumps(rep)}


def cmd_theorem_check(args) -> dict:
    """Cluster at N and 2N, then run the branch that fits the classification.

    The warmup is at least N/4 so slowly decaying transients (conjugates
    close to the unit circle) do not pose as limit points.
    """
    a = _number(args)
    xi = _xi(a, args)
    eps = Fraction(args.epsilon)
    warmup = max(args.warmup, args.N // 4)
    big, rep2 = _limits(a, xi, args, 2 * args.N, warmup)
    samples = [s for s in big if s.n <= args.N]
    rep = cluster_limit_points(samples, eps, warmup)
    out = {
        "class": a.classification.value,
        "xi": str(xi),
        "limits": rep.to_json(),
        "counts": {str(args.N): rep.count, str(2 * args.N): rep2.count},
    }
    files = {}
    growing = rep2.count > rep.count
    if a.classification is Classification.PV:
        ok = pv_verify(rep, xi.L, eps)
        out["pv_verify"] = ok
        out["smallness"] = _smallness(samples, a, warmup)
        verdict = "finite-limit-set-consistent" if ok and not growing else "inconclusive"
    else:
        out["collision"] = _collision_chain(a, xi, rep, eps, args, warmup)
        density = None
        if a.classification is Classification.SALEM:
            ctx, near, dens = _salem_report(a, xi, args, big)
            out["salem"] = {"context": ctx.to_json(), "near_integer": near.to_json(), "density": dens.to_json(args.resolution)}
            files["density.csv"] = dens.histogram_csv()
            density = dens.length
        if growing or (density is not None and density >= DENSITY_EVIDENCE):
            verdict = "infinite-limit-set-evidence"
        else:
            verdict = "inconclusive"
    out["verdict"] = verdict
    return {"theorem_check.json": dumps(out), **files}


def _smallness(samples, a, warmup):
    rep = smallness_check([s for s in samples if s.n >= warmup], a.minpoly)
    return {"holds": rep.holds, "first_violation": rep.first_violation,
            "sup_norm": tagged(rep.sup_norm, 64), "threshold": tagged(rep.threshold, 64)}


def _collision_chain(a, xi, rep, eps, args, warmup):
    """Differences, eta windows, collision and contraction, or the reason it stopped."""
    bits = rep.resolution
    out = {"difference_structure": difference_structure(rep, a.minpoly.leading).to_json(bits)}
    try:
        etas = assign_eta(rep)
        m, r = find_vector_collision([e for _, e in etas], a.degree, etas[0][0])
        out["collision"] = {"m": m, "r": r}
        out["contraction"] = verify_contraction(
            xi, a, xi.L, m, r, eps, warmup + 100, start=warmup,
            resolution=args.resolution, precision_cap=args.precision_cap,
        ).to_json(bits)
    except NoCollision as exc:
        out["collision"] = {"error": str(exc), "needed_horizon": exc.needed_horizon}
    except PowfracError as exc:
        if isinstance(exc, InternalInconsistency):
            raise
        out["collision"] = {"error": f"{type(exc).__name__}: {exc}"}
    return out


COMMANDS = {
    "classify": cmd_classify,
    "orbit": cmd_orbit,
    "limits": cmd_limits,
    "period": cmd_period,
    "salem": cmd_salem,
    "kronecker": cmd_kronecker,
    "theorem-check": cmd_theorem_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="powfrac", description="Fractional parts of xi * alpha^n.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, poly=True, N=200):
        if poly:
            p.add_argument("poly", nargs="?" if p.prog.endswith("period") else None,
                           help="polynomial, e.g. 'z^2-z-1' or '[-1,-1,1]'")
        p.add_argument("--xi", default="1", help="seed: p/q, decimal, or (e0,e1,...)/L")
        p.add_argument("--L", type=int, default=1, help="extra denominator for xi (the modulus for period)")
        p.add_argument("--N", type=int, default=N, help="horizon")
        p.add_argument("--epsilon", default="0.01")
        p.add_argument("--resolution", type=int, default=64)
        p.add_argument("--precision-cap", type=int, default=None)
        p.add_argument("--warmup", type=int, default=DEFAULT_WARMUP)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None, metavar="DIR")

    common(sub.add_parser("classify"))
    common(sub.add_parser("orbit"))
    common(sub.add_parser("limits"))
    p = sub.add_parser("period")
    common(p)
    p.add_argument("--recurrence", help="A_{d-1},...,A_0 of b_{k+d} + A_{d-1} b_{k+d-1} + ... + A_0 b_k = 0")
    p.add_argument("--init", help="b_1,...,b_d")
    p = sub.add_parser("salem")
    common(p, N=2000)
    p.add_argument("--bins", type=int, default=50)
    p = sub.add_parser("kronecker")
    common(p)
    p.add_argument("--targets", help="comma-separated theta_j in [-1, 1] (default all 1)")
    p.add_argument("--tol", type=float, default=0.15)
    p.add_argument("--n-max", type=int, default=10**6)
    p = sub.add_parser("theorem-check")
    common(p)
    p.add_argument("--bins", type=int, default=50)
    p = sub.add_parser("replay")
    p.add_argument("manifest")
    return parser


def _manifest(args, argv, files) -> RunManifest:
    return RunManifest(
        command=args.command,
        argv=list(argv),
        polynomial=getattr(args, "poly", None),
        xi=args.xi,
        L=args.L,
        horizons=[args.N] + ([2 * args.N] if args.command == "theorem-check" else []),
        precisions={"resolution": args.resolution, "precision_cap": args.precision_cap},
        outputs={name: _sha(text) for name, text in sorted(files.items())},
    )


def run(argv) -> tuple[dict, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args), args


def replay(path: str) -> int:
    with open(path) as fh:
        manifest = json.load(fh)
    files, _ = run(manifest["argv"])
    got = {name: _sha(text) for name, text in files.items()}
    same = got == manifest["outputs"]
    print(dumps({"manifest": path, "identical": same, "outputs": got}), end="")
    return 0 if same else 4


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        if argv[:1] == ["replay"]:
            args = build_parser().parse_args(argv)
            return replay(args.manifest)
        files, args = run(argv)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            for name, text in files.items():
                _write_atomic(os.path.join(args.out, name), text)
            _write_atomic(os.path.join(args.out, "manifest.json"), dumps(_manifest(args, argv, files).to_json()))
        else:
            primary = next(iter(files))
            sys.stdout.write(files[primary])
        return 0
    except PowfracError as exc:
        sys.stderr.write(dumps({"error": type(exc).__name__, "module": _provenance(exc), "message": str(exc)}))
        return exc.exit_code


def _provenance(exc) -> str:
    tb = exc.__traceback__
    name = "powfrac"
    while tb is not None:
        mod = tb.tb_frame.f_globals.get("__name__", "")
        if mod.startswith("powfrac"):
            name = mod
        tb = tb.tb_next
    return name


if __name__ == "__main__":
    sys.exit(main())
