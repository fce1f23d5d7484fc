"""Command-line front end.

Exit codes: 0 realizable / pass, 1 not realizable / fail, 2 invalid input,
3 matrix violates symmetry, nonnegativity or zero trace.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import eig, oracle, region
from .config import DEFAULT, Tolerances
from .construct import construct, dumps
from .errors import DomainError, InvalidSpectrum, NotRealizable, Sniep5Error
from .region import theorem2_check, theorem3_check
from .spectrum import normalize, validate_and_sort

EXIT_OK = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_MATRIX = 3


class InputError(Exception):
    pass


def _tol(args) -> Tolerances:
    tol = DEFAULT
    if getattr(args, "tol_geom", None) is not None:
        tol = replace(tol, tol_geom=args.tol_geom)
    if getattr(args, "tol_sum", None) is not None:
        tol = replace(tol, tol_sum=args.tol_sum)
    return tol


def _eigenvalues(args) -> list[float]:
    if getattr(args, "input", None):
        try:
            obj = json.loads(Path(args.input).read_text(encoding="utf-8"))
            vals = obj["eigenvalues"] if isinstance(obj, dict) else obj
            return [float(v) for v in vals]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read spectrum from {args.input}: {exc}") from exc
    if len(args.eigenvalues) != 5:
        raise InputError(f"expected 5 eigenvalues, got {len(args.eigenvalues)}")
    try:
        return [float(v) for v in args.eigenvalues]
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _err(msg: str) -> None:
    sys.stderr.write(f"error: {msg}\n")


def run_check(args) -> int:
    tol = _tol(args)
    s = validate_and_sort(_eigenvalues(args), tol)
    if s.is_zero:
        result = {"realizable": True, "region_test": None, "power_sum_test": None, "agree": True, "note": "zero spectrum"}
    else:
        try:
            n = normalize(s, tol)
        except NotRealizable as exc:
            result = {"realizable": False, "failed_condition": exc.failed_condition, "agree": True}
        else:
            v2 = theorem2_check(n.point, tol)
            v3 = theorem3_check(n, tol)
            result = {
                "realizable": v2.realizable and v3.realizable,
                "normalized": n.to_dict(),
                "region_test": v2.to_dict(),
                "power_sum_test": v3.to_dict(),
                "agree": v2.realizable == v3.realizable,
            }
            if not result["realizable"]:
                result["failed_condition"] = v3.failed_condition or v2.failed_condition
    if args.json:
        _emit(dumps(result), None)
    else:
        if result["realizable"]:
            print("realizable")
        else:
            print(f"not realizable: {_pretty(result.get('failed_condition'))}")
        for key in ("region_test", "power_sum_test"):
            if result.get(key):
                v = result[key]
                extra = f" ({v['failed_condition']})" if v["failed_condition"] else ""
                print(f"  {key}: {'yes' if v['realizable'] else 'no'}, region {v['region']}{extra}")
        print(f"  criteria agree: {'yes' if result['agree'] else 'NO'}")
    return EXIT_OK if result["realizable"] else EXIT_NO


def _pretty(cond: str | None) -> str:
    if cond is None:
        return "unknown"
    negated = {
        "lambda2 + lambda5 <= 0": "λ2+λ5 > 0",
        "s3 >= 0": "s3 < 0",
        "|lambda5| <= lambda1": "|λ5| > λ1",
    }
    for k, v in negated.items():
        cond = cond.replace(k, v)
    return cond


def run_construct(args) -> int:
    tol = _tol(args)
    vals = _eigenvalues(args)
    s = validate_and_sort(vals, tol)
    try:
        cert = construct(s, tol, method=args.method)
    except NotRealizable as exc:
        _emit(dumps({"realizable": False, "failed_condition": exc.failed_condition}), args.output)
        return EXIT_NO
    _emit(cert.to_json(), args.output)
    return EXIT_OK


def read_matrix(path: str) -> tuple[np.ndarray, list[float] | None]:
    """Parse a JSON ``{"matrix": ...}`` (or certificate) file or 5 whitespace-separated rows."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(str(exc)) from exc
    target = None
    stripped = text.lstrip()
    try:
        if stripped.startswith("{") or stripped.startswith("["):
            obj = json.loads(text)
            if isinstance(obj, dict):
                rows = obj["matrix"]
                target = obj.get("target")
            else:
                rows = obj
        else:
            rows = [line.split() for line in text.splitlines() if line.strip()]
        m = np.array([[float(v) for v in row] for row in rows], dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed matrix file: {exc}") from exc
    if m.shape != (5, 5) or not np.all(np.isfinite(m)):
        raise InputError(f"expected a finite 5x5 matrix, got shape {m.shape}")
    return m, ([float(v) for v in target] if target is not None else None)


def run_verify(args) -> int:
    tol = _tol(args)
    m, target = read_matrix(args.matrix)
    if args.eigenvalues:
        target = _eigenvalues(args)
    if target is None:
        raise InputError("no target eigenvalues given and the file carries none")
    s = validate_and_sort(target, tol)
    problems = []
    if not np.array_equal(m, m.T):
        problems.append("not symmetric")
    if np.any(m < -tol.tol_entry):
        problems.append("negative entry")
    scale = max(1.0, float(np.max(np.abs(m))))
    if abs(float(np.trace(m))) > 5 * tol.tol_entry * scale:
        problems.append("nonzero trace")
    if problems:
        _err("matrix property violation: " + ", ".join(problems))
        return EXIT_MATRIX
    residual = eig.verify(m, s.values)
    ok = residual <= tol.tol_eig * max(1.0, abs(s.values[0]))
    print(dumps({"residual": residual, "ok": ok}, indent=None))
    return EXIT_OK if ok else EXIT_NO


def run_boundary(args) -> int:
    tol = _tol(args)
    if not (region.D_MIN <= args.d <= 0.0):
        raise InputError(f"d={args.d} outside [-3/4, 0]")
    if args.samples < 2:
        raise InputError("samples must be >= 2")
    pts = region.boundary_polyline(args.d, args.samples, tol)
    if args.format == "csv":
        _emit(region.polyline_to_csv(pts), args.output)
    else:
        doc = region.polyline_to_json(args.d, pts, region.vertices(args.d, tol))
        _emit(dumps(doc), args.output)
    return EXIT_OK


def run_sample(args) -> int:
    if args.trials < 1:
        raise InputError("trials must be >= 1")
    rep = oracle.mc_necessity(args.trials, args.seed, workers=args.workers)
    _emit(dumps(rep.to_dict()), args.output)
    return EXIT_OK if rep.passed else EXIT_NO


def run_scan(args) -> int:
    try:
        if args.lemma == 1:
            if args.k is None:
                raise InputError("--k is required with --lemma 1")
            rep = oracle.grid_scan_lemma1(args.d, args.k, args.resolution)
        elif args.lemma == 2:
            rep = oracle.grid_scan_lemma2(args.d, args.resolution)
        else:
            rep = oracle.scan_equivalence_grid(args.resolution, args.d_count)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    _emit(dumps(rep.to_dict()), args.output)
    return EXIT_OK if rep.passed else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sniep5", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def spectrum_args(sp, required=True):
        sp.add_argument("eigenvalues", nargs="*", help="five eigenvalues, any order")
        sp.add_argument("--input", help='JSON file {"eigenvalues": [...]}')
        sp.add_argument("--tol-geom", type=float, default=None)
        sp.add_argument("--tol-sum", type=float, default=None)

    sp = sub.add_parser("check", help="decide realizability with both criteria")
    spectrum_args(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=run_check)

    sp = sub.add_parser("construct", help="build and certify a realizing matrix")
    spectrum_args(sp)
    sp.add_argument("--method", choices=["Suleimanova", "LoewySplit", "ExplicitA", "ExplicitB"])
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=run_construct)

    sp = sub.add_parser("verify", help="recompute the spectrum of a 5x5 matrix file")
    sp.add_argument("matrix")
    spectrum_args(sp)
    sp.set_defaults(func=run_verify)

    sp = sub.add_parser("boundary", help="emit the region boundary for one d")
    sp.add_argument("d", type=float)
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--format", choices=["csv", "json"], default="json")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=run_boundary)

    sp = sub.add_parser("sample", help="Monte Carlo necessity check on random matrices")
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=run_sample)

    sp = sub.add_parser("scan", help="grid scans: power-sum extrema (--lemma 1), s3 sign law (--lemma 2) or criterion agreement")
    sp.add_argument("--lemma", type=int, choices=[1, 2], default=None)
    sp.add_argument("--equivalence", action="store_true")
    sp.add_argument("--d", type=float, default=0.0)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--resolution", type=int, default=200)
    sp.add_argument("--d-count", type=int, default=60)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=run_scan)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "scan" and args.lemma is None and not args.equivalence:
        _err("scan needs --lemma 1|2 or --equivalence")
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, InvalidSpectrum, DomainError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
    except Sniep5Error as exc:
        _err(f"internal check failed: {exc}")
        return EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
