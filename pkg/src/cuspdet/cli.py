"""Command line interface: ``cuspdet <command> [options]``.

Exit codes: 0 success, 1 usage error, 2 invalid spec or unreadable input,
3 numerical failure, 4 a ``compare`` cell failed its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bessel, detz, regfit, spectral, trace
from .defaults import TOLERANCES, defaults_table
from .operator import NumericalError, OperatorSpec
from .potential import SpecError
from .quadrature import QuadratureError

EXIT_USAGE, EXIT_SCHEMA, EXIT_NUMERICAL, EXIT_CHECK = 1, 2, 3, 4
COMMANDS = ("bessel", "fit", "trace", "detz", "eigs", "weyl", "compare")

log = logging.getLogger("cuspdet")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    spec_path: str | None = None
    output: str = "json"
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    log_level: str = "WARNING"
    args: argparse.Namespace | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    p = _Parser(prog="cuspdet", description="Zeta-regularised determinants of "
                "cusp-type Sturm-Liouville operators on a half line.")
    p.add_argument("--show-defaults", action="store_true",
                   help="print the table of numerical defaults and exit")
    p.add_argument("--log-level", default=None,
                   help="logging level (default from CUSPDET_LOG or WARNING)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help=f"override a tolerance ({', '.join(TOLERANCES)})")
    p.add_argument("--out", default=None, help="write output here instead of stdout")
    sub = p.add_subparsers(dest="command")

    b = sub.add_parser("bessel", help="I, K and derivatives at one point")
    b.add_argument("--order", type=float, required=True)
    b.add_argument("--x", type=float, required=True)
    b.add_argument("--regime", default="auto", choices=("auto",) + bessel.REGIMES)
    b.add_argument("--kind", default="all",
                   choices=("all", "i", "k", "iprime", "kprime", "product"))
    b.add_argument("--scaled", action="store_true")

    f = sub.add_parser("fit", help="fit an expansion to CSV samples (x,f)")
    f.add_argument("--data", required=True, help="CSV file with columns x,f")
    f.add_argument("--basis", required=True,
                   help="terms alpha:k separated by commas, e.g. '0:1,0:0,-1:0'")

    t = sub.add_parser("trace", help="resolvent trace on a z grid")
    t.add_argument("--spec", required=True)
    t.add_argument("--z-grid", default=None, help="lo:hi:n (geometric)")
    t.add_argument("--fit", action="store_true", help="also fit the expansion (JSON)")

    d = sub.add_parser("detz", help="zeta-regularised determinant")
    d.add_argument("--spec", required=True)
    d.add_argument("--method", default="wronskian", choices=("wronskian", "trace", "both"))
    d.add_argument("--nu", type=float, default=None)

    e = sub.add_parser("eigs", help="finite-difference eigenvalues (CSV)")
    e.add_argument("--spec", required=True)
    e.add_argument("--count", type=int, default=10)
    e.add_argument("--R", type=float, default=None)
    e.add_argument("--n", type=int, default=spectral.DEFAULT_N)

    w = sub.add_parser("weyl", help="eigenvalue counting function vs Weyl law (CSV)")
    w.add_argument("--spec", required=True)
    w.add_argument("--lambda-max", type=float, default=1e4)
    w.add_argument("--n", type=int, default=spectral.DEFAULT_N)

    c = sub.add_parser("compare", help="Wronskian vs trace-integral matrix (CSV)")
    c.add_argument("--quick", action="store_true",
                   help="only mu=1, a=1 (six cells per potential)")
    return p


def _tolerances(items):
    out = dict(TOLERANCES)
    for it in items:
        if "=" not in it:
            raise UsageError(f"--tol expects NAME=VALUE, got {it!r}")
        k, v = it.split("=", 1)
        if k not in TOLERANCES:
            raise UsageError(f"unknown tolerance {k!r}; known: {', '.join(TOLERANCES)}")
        try:
            out[k] = float(v)
        except ValueError:
            raise UsageError(f"tolerance {k} needs a number") from None
    return out


def load_spec(path) -> OperatorSpec:
    """Read and validate a JSON spec; tabulated ``csv`` paths are relative to it."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SpecError(f"cannot read spec {path}: {e}") from None
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"spec is not valid JSON: {e}") from None
    pot = d.get("potential") if isinstance(d, dict) else None
    if isinstance(pot, dict) and "csv" in pot:
        p = Path(pot["csv"])
        if not p.is_absolute():
            pot["csv"] = str(path.parent / p)
        if not Path(pot["csv"]).exists():
            raise SpecError(f"potential table {pot['csv']} not found")
    return OperatorSpec.from_dict(d)


def _json(obj):
    def default(o):
        if isinstance(o, (np.floating, np.integer)):
            return o.item()
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, tuple):
            return list(o)
        return str(o)

    def clean(o):
        if isinstance(o, float) and not math.isfinite(o):
            return None if math.isnan(o) else ("inf" if o > 0 else "-inf")
        if isinstance(o, dict):
            return {k: clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return o

    return json.dumps(clean(obj), indent=2, sort_keys=True, default=default) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _z_grid(text, spec):
    if text is None:
        return trace.default_z_grid(spec)
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError("--z-grid expects lo:hi:n") from None
    if not (0 <= lo < hi and n >= 2):
        raise UsageError("--z-grid needs 0 <= lo < hi and n >= 2")
    return np.geomspace(lo, hi, n) if lo > 0 else np.linspace(lo, hi, n)


def _parse_basis(text):
    try:
        terms = [(float(t.split(":")[0]), int(t.split(":")[1])) for t in text.split(",")]
    except (ValueError, IndexError):
        raise UsageError("--basis expects alpha:k pairs separated by commas") from None
    return regfit.ExpansionBasis.of(terms)


# ---------------------------------------------------------------------------
# commands


def cmd_bessel(cfg):
    a = cfg.args
    kw = {"scaled": a.scaled, "regime": a.regime}
    ev = bessel.bessel_eval(a.order, a.x, regime=a.regime)
    out = {"order": a.order, "x": a.x, "scaled": a.scaled, "regime": ev.regime,
           "est_rel_err": ev.est_rel_err}
    fns = {"i": ("I", bessel.bessel_i), "k": ("K", bessel.bessel_k),
           "iprime": ("I_prime", bessel.bessel_i_prime),
           "kprime": ("K_prime", bessel.bessel_k_prime)}
    kinds = list(fns) if a.kind == "all" else [a.kind]
    for kind in kinds:
        if kind == "product":
            out["IK"] = float(bessel.bessel_ik_product(a.order, a.x, regime=a.regime))
            continue
        name, fn = fns[kind]
        v = fn(a.order, a.x, **kw)
        if isinstance(v, bessel.ScaledValue):
            out[name] = {"mantissa": v.mantissa, "exponent": v.exponent}
        else:
            out[name] = float(v)
    return _json(out), 0


def cmd_fit(cfg):
    a = cfg.args
    try:
        arr = np.loadtxt(a.data, delimiter=",", ndmin=2, comments="#")
    except (OSError, ValueError) as e:
        raise SpecError(f"cannot read samples {a.data}: {e}") from None
    if arr.shape[1] < 2:
        raise SpecError("sample file needs two columns x,f")
    m = regfit.fit_expansion(arr[:, 0], arr[:, 1], _parse_basis(a.basis))
    out = {"terms": [list(t) for t in m.basis.terms], "coefficients": m.coeffs.tolist(),
           "stderr": m.stderr.tolist(), "condition_number": m.condition_number,
           "residual_rms": m.residual_rms, "fit_window": list(m.fit_window)}
    try:
        out["lim"] = regfit.reg_lim(m)
    except ValueError:
        out["lim"] = None
    return _json(out), 0


def cmd_trace(cfg):
    spec = load_spec(cfg.spec_path)
    zs = _z_grid(cfg.args.z_grid, spec)
    tr = trace.resolvent_traces(spec, zs)
    if not cfg.args.fit:
        return _csv(["z", "trace"], zip(zs, tr)), 0
    fit = trace.fit_trace_expansion(spec, zs)
    model = fit.extra
    out = {"spec": spec.to_dict(), "z": zs, "trace": tr,
           "fit": {"b0": fit.b0, "a0": fit.a0, "a1": fit.a1,
                   "terms": [list(t) for t in model.basis.terms],
                   "coefficients": model.coeffs, "stderr": model.stderr,
                   "condition_number": model.condition_number,
                   "fit_window": list(model.fit_window)}}
    return _json(out), 0


def cmd_detz(cfg):
    a = cfg.args
    spec = load_spec(cfg.spec_path)
    if a.nu is not None:
        spec = spec.with_nu(a.nu)
    qt = cfg.tolerances["det_quad_tol"]
    if a.method == "wronskian":
        return _json(detz.detz_wronskian(spec).to_dict()), 0
    if a.method == "trace":
        return _json(detz.detz_trace_integral(spec, quad_tol=qt).to_dict()), 0
    w = detz.detz_wronskian(spec)
    t = detz.detz_trace_integral(spec, quad_tol=qt)
    rel = abs(math.expm1(t.log_value - w.log_value))
    out = {"value": w.value, "log_value": w.log_value, "method": "both",
           "wronskian": w.to_dict(), "trace": t.to_dict(),
           "diagnostics": {"relative_difference": rel,
                           "agree": rel < cfg.tolerances["compare_tol"]}}
    return _json(out), 0


def cmd_eigs(cfg):
    a = cfg.args
    spec = load_spec(cfg.spec_path)
    if a.count < 1 or a.n < 4:
        raise UsageError("--count must be >= 1 and --n >= 4")
    try:
        d = spectral.fd_eigenvalues(spec, a.R, a.n, a.count, full_output=True)
    except spectral.GuardError as e:
        raise NumericalError(str(e)) from None
    return _csv(["index", "lambda", "tolerance"],
                ((i + 1, lam, tol) for i, (lam, tol) in enumerate(zip(d.eigs, d.tol)))), 0


def cmd_weyl(cfg):
    a = cfg.args
    spec = load_spec(cfg.spec_path)
    w = spectral.weyl_check(spec, a.lambda_max, n=a.n)
    return _csv(["lambda", "N", "weyl_leading", "weyl_refined"],
                zip(w.lam, w.counts, w.leading, w.refined)), 0


def cmd_compare(cfg):
    kw = {"mus": (1.0,), "as_": (1.0,)} if cfg.args.quick else {}
    rows = detz.compare_matrix(tol=cfg.tolerances["compare_tol"], **kw)
    header = ["mu", "a", "bc", "potential", "nu", "log_det_wronskian",
              "log_det_trace", "rel_diff", "constant", "pass"]
    text = _csv(header, ([r[h] for h in header] for r in rows))
    return text, 0 if all(r["pass"] for r in rows) else EXIT_CHECK


HANDLERS = {"bessel": cmd_bessel, "fit": cmd_fit, "trace": cmd_trace, "detz": cmd_detz,
            "eigs": cmd_eigs, "weyl": cmd_weyl, "compare": cmd_compare}


def run(cfg: RunConfig):
    """Execute one command; returns ``(text, exit_code)``."""
    np.random.seed(cfg.seed)
    return HANDLERS[cfg.command](cfg)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        level = (args.log_level or os.environ.get("CUSPDET_LOG") or "WARNING").upper()
        if not isinstance(logging.getLevelName(level), int):
            raise UsageError(f"unknown log level {level!r}")
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
        if args.show_defaults:
            _emit(_json(defaults_table()), args.out)
            return 0
        if args.command is None:
            raise UsageError("a command is required: " + ", ".join(COMMANDS))
        cfg = RunConfig(args.command, getattr(args, "spec", None),
                        tolerances=_tolerances(args.tol), seed=args.seed,
                        log_level=level, args=args)
        text, code = run(cfg)
    except UsageError as e:
        print(f"cuspdet: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecError, ValueError) as e:
        # SpecError is a ValueError; other ValueErrors come from bad inputs
        print(f"cuspdet: invalid input: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except (NumericalError, regfit.FitError, QuadratureError, ArithmeticError) as e:
        print(f"cuspdet: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    _emit(text, args.out)
    return code


def _emit(text, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    sys.exit(main())
