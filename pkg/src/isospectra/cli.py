"""Command-line front end.

    isospectra rigidity MATRIX [--mode exact|numeric|both]
    isospectra floquet --periods 5 --search
    isospectra floquet --periods 3,2 --check V.json W.json
    isospectra floquet --periods 2,2 --bands 8 [--potential V.json]
    isospectra lambda-table --n 4
    isospectra selftest

Exit codes: 0 when every requested check passed, 1 on failure or
disagreement between independent routes, 2 on bad input, 3 when the
verdict is inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import checks, coinvariant, floquet, minors, solver
from .polycore import GroebnerConfig, to_rational

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

log = logging.getLogger("isospectra")


@dataclass
class Report:
    command: str
    inputs: dict
    verdict: str
    certificates: list = field(default_factory=list)
    timing_ms: float = 0.0
    seed: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, default=_jsonable)


def _jsonable(x):
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    return str(x)


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def parse_matrix(text: str, fmt: str | None = None) -> minors.RationalMatrix:
    """JSON (a list of rows, or {"matrix": rows}; entries are integers or
    "p/q" strings) or CSV with decimal literals."""
    stripped = text.strip()
    fmt = fmt or ("json" if stripped[:1] in "[{" else "csv")
    try:
        if fmt == "json":
            data = json.loads(stripped)
            rows = data["matrix"] if isinstance(data, dict) else data
            for row in rows:
                for x in row:
                    if isinstance(x, dict) or isinstance(x, bool):
                        raise InputError("complex or non-numeric entries are not supported")
        else:
            rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO(stripped)) if r]
        return minors.RationalMatrix.from_rows(rows)
    except InputError:
        raise
    except (ValueError, TypeError, KeyError, json.JSONDecodeError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse matrix: {exc}") from exc


def load_matrix(path: str) -> minors.RationalMatrix:
    p = Path(path)
    fmt = {".json": "json", ".csv": "csv"}.get(p.suffix.lower())
    return parse_matrix(p.read_text(), fmt)


def load_potential(path: str) -> floquet.Potential:
    try:
        return floquet.Potential.from_json(Path(path).read_text())
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse potential {path}: {exc}") from exc


def _subsets_1based(subsets):
    return [[i + 1 for i in s] for s in subsets]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_rigidity(A: minors.RationalMatrix, mode: str, seed: int, tol: float | None = None,
                 threads: int = 1, budget: int | None = None) -> tuple[Report, int]:
    certs = []
    sym = minors.has_symmetrized_principal_minors(A)
    minor_cert = {"kind": "minor-witness", "symmetrized": sym.symmetrized}
    if not sym:
        minor_cert.update(k=sym.k, subsets=_subsets_1based(sym.subsets), values=[str(v) for v in sym.values])
    certs.append(minor_cert)
    expected = "rigid" if sym else "witness"
    verdicts = {"minors": expected}
    if mode in ("exact", "both"):
        cert = solver.certify_rigid(A, GroebnerConfig(max_reductions=budget or 20_000))
        certs.append({"kind": "groebner", "status": cert.status, "quotient_dimension": cert.quotient_dimension,
                      "groebner_size": cert.groebner_size})
        verdicts["exact"] = {"rigid": "rigid", "not-rigid": "witness"}.get(cert.status, "inconclusive")
    if mode in ("numeric", "both"):
        cfg = solver.SolveConfig(seed=seed, workers=threads, **({"residual_tol": tol} if tol else {}))
        w = solver.find_nonzero_witness(A, cfg)
        if w is None:
            certs.append({"kind": "numeric-search", "found": False, "restarts": cfg.restarts_for(A.n)})
            verdicts["numeric"] = "rigid" if sym else "inconclusive"
        else:
            certs.append({"kind": "numeric-search", "found": True, "witness": w.to_json(), "restarts": w.restarts})
            verdicts["numeric"] = "witness"
    inputs = {"n": A.n, "matrix": A.to_strings(), "mode": mode}
    values = set(verdicts.values())
    if "inconclusive" in values:
        others = values - {"inconclusive"}
        if len(others) > 1:
            return Report("rigidity", inputs, "inconclusive", certs + [{"kind": "disagreement", "verdicts": verdicts}], seed=seed), EXIT_FAIL
        return Report("rigidity", inputs, "inconclusive", certs, seed=seed), EXIT_INCONCLUSIVE
    if len(values) > 1:
        certs.append({"kind": "disagreement", "verdicts": verdicts,
                      "diagnostic": "independent routes disagree; this indicates a bug"})
        return Report("rigidity", inputs, expected, certs, seed=seed), EXIT_FAIL
    return Report("rigidity", inputs, expected, certs, seed=seed), EXIT_OK


def cmd_floquet_search(Q: floquet.Periods, seed: int, tol: float | None = None, threads: int = 1,
                       budget: int | None = None) -> tuple[Report, int]:
    cfg = solver.SolveConfig(seed=seed, workers=threads)
    r = floquet.find_isospectral_potential(Q, cfg, GroebnerConfig(max_reductions=budget or 200_000))
    tol = tol or 1e-8
    certs = [dict(r.certificate, kind="pipeline", reduced_periods=list(r.reduced_periods))]
    code = EXIT_OK
    if r.verdict == "witness":
        certs.append({"kind": "potential", "potential": r.potential.to_json(), "residual": r.residual,
                      "torus_deviation": r.deviation})
        if r.residual > tol or (r.deviation is not None and r.deviation > tol):
            code = EXIT_FAIL
    elif r.verdict == "inconclusive":
        certs.append({"kind": "note", "text": r.note or "budget exhausted"})
        code = EXIT_INCONCLUSIVE
    return Report("floquet", {"periods": list(Q.q), "action": "search"}, r.verdict, certs, seed=seed), code


def cmd_floquet_check(Q: floquet.Periods, V: floquet.Potential, W: floquet.Potential, seed: int,
                      tol: float | None = None) -> tuple[Report, int]:
    if V.periods != Q or W.periods != Q:
        raise InputError(f"potentials must both have periods {Q}")
    tol = tol or 1e-8
    exact = V.exact and W.exact and Q.total <= floquet.EXACT_CAP
    mode = "exact" if exact else "numeric"
    same = floquet.floquet_isospectral(V, W, mode, tol, seed=seed)
    certs = [{"kind": "dispersion-comparison", "mode": mode, "tol": tol}]
    if not exact:
        certs[0]["torus_deviation"] = floquet.torus_deviation(V, W, seed=seed)
    verdict = "isospectral" if same else "not-isospectral"
    return Report("floquet", {"periods": list(Q.q), "action": "check"}, verdict, certs, seed=seed), EXIT_OK


def band_csv(samples) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    if samples:
        d, q = len(samples[0][0]), len(samples[0][1])
        w.writerow([f"z{i + 1}_{p}" for i in range(d) for p in ("re", "im")]
                   + [f"lambda{i + 1}_{p}" for i in range(q) for p in ("re", "im")])
    for z, ev in samples:
        w.writerow([f"{x:.12g}" for c in z for x in (c.real, c.imag)]
                   + [f"{x:.12g}" for c in ev for x in (c.real, c.imag)])
    return buf.getvalue()


def cmd_lambda_table(n: int) -> tuple[str, bool]:
    if not 1 <= n <= 6:
        raise InputError("--n must be between 1 and 6")
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["n", "m", "k", "j", "closed_form", "trace", "equal", "recursion"])
    ok = True
    for row in coinvariant.lambda_rows(n, with_trace=True):
        _, m, k, j, closed, tr = row
        equal = closed == tr
        rec = ""
        if j >= 1:
            rec = str(closed + coinvariant.lambda_closed_form(n, m, k - 1, j - 1) == 0).lower()
            ok &= rec == "true"
        ok &= equal
        w.writerow([n, m, k, j, str(closed), str(tr), str(equal).lower(), rec])
    return buf.getvalue(), ok


def desk_checks(seed: int = 0) -> list[checks.CheckResult]:
    inst = checks.rigidity_instances((2, 3), random_count=6, constructed_count=6, seed=seed)
    return [
        checks.criterion_1(inst),
        checks.criterion_2(inst, solver.SolveConfig(seed=seed)),
        checks.criterion_3(),
        checks.criterion_4(exhaustive_n=4, n5_samples=3, identity_n=8, seed=seed),
        checks.criterion_5(dim_n=4, artin_n=6),
        checks.criterion_6(),
        checks.criterion_7(qs=(4, 5), points=8, cfg=solver.SolveConfig(seed=seed)),
        checks.criterion_8(qs=(4,)),
        checks.criterion_9(pairs=3, points=4, seed=seed),
        checks.criterion_10(seconds=60, include_generic=False),
    ]


def cmd_selftest(seed: int) -> tuple[Report, int, list[str]]:
    results = desk_checks(seed)
    certs = [{"criterion": r.criterion, "name": r.name, "status": r.status, "detail": r.detail,
              "seconds": round(r.seconds, 3)} for r in results]
    ok = all(r.passed for r in results)
    report = Report("selftest", {"scale": "desk"}, "pass" if ok else "fail", certs, seed=seed)
    return report, (EXIT_OK if ok else EXIT_FAIL), [r.line() for r in results]


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="residual / deviation tolerance")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $ISOSPECTRA_SEED or 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads for numeric searches")
    common.add_argument("--budget", type=int, default=None, help="cap on Groebner pair reductions")
    common.add_argument("--out", default=None, help="also write the JSON report to this path")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="isospectra", parents=[common],
                                description="Isospectral diagonal shifts and Floquet isospectrality.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rigidity", parents=[common], help="decide whether a matrix admits an isospectral diagonal shift")
    r.add_argument("matrix", help="matrix file (JSON rows with 'p/q' strings, or CSV)")
    r.add_argument("--mode", choices=("exact", "numeric", "both"), default="both")

    f = sub.add_parser("floquet", parents=[common], help="periodic Schrodinger operators")
    f.add_argument("--periods", required=True, help="comma-separated periods, e.g. 3,2")
    g = f.add_mutually_exclusive_group(required=True)
    g.add_argument("--search", action="store_true", help="look for a nonzero potential isospectral to 0")
    g.add_argument("--check", nargs=2, metavar=("V.json", "W.json"), help="compare two potentials")
    g.add_argument("--bands", type=int, metavar="GRID", help="sample the band spectrum on a GRID^d torus grid")
    f.add_argument("--potential", default=None, help="potential JSON for --bands (default: zero)")

    lt = sub.add_parser("lambda-table", parents=[common], help="closed-form and trace lambda coefficients as CSV")
    lt.add_argument("--n", type=int, required=True)

    sub.add_parser("selftest", parents=[common], help="desk-scale run of every verification check")
    return p


def _emit(report: Report, out: str | None, stdout: bool = True) -> None:
    text = report.to_json()
    if out:
        Path(out).write_text(text + "\n")
    if stdout:
        print(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    seed = args.seed if args.seed is not None else solver.seed_from_env(0)
    start = time.monotonic()
    try:
        if args.command == "rigidity":
            report, code = cmd_rigidity(load_matrix(args.matrix), args.mode, seed, args.tol, args.threads, args.budget)
        elif args.command == "floquet":
            try:
                Q = floquet.Periods.parse(args.periods)
            except ValueError as exc:
                raise InputError(f"bad --periods: {exc}") from exc
            if args.search:
                report, code = cmd_floquet_search(Q, seed, args.tol, args.threads, args.budget)
            elif args.check:
                V, W = (load_potential(x) for x in args.check)
                report, code = cmd_floquet_check(Q, V, W, seed, args.tol)
            else:
                V = load_potential(args.potential) if args.potential else None
                samples = floquet.band_spectrum_sample(Q, V, args.bands)
                sys.stdout.write(band_csv(samples))
                report = Report("floquet", {"periods": list(Q.q), "action": "bands", "grid": args.bands},
                                "sampled", [{"kind": "band-sample", "points": len(samples)}], seed=seed)
                report.timing_ms = round(1000 * (time.monotonic() - start), 3)
                if args.out:
                    _emit(report, args.out, stdout=False)
                return EXIT_OK
        elif args.command == "lambda-table":
            text, ok = cmd_lambda_table(args.n)
            sys.stdout.write(text)
            report = Report("lambda-table", {"n": args.n}, "pass" if ok else "fail", seed=seed)
            report.timing_ms = round(1000 * (time.monotonic() - start), 3)
            if args.out:
                _emit(report, args.out, stdout=False)
            return EXIT_OK if ok else EXIT_FAIL
        else:
            report, code, lines = cmd_selftest(seed)
            for line in lines:
                print(line, file=sys.stderr)
    except InputError as exc:
        print(f"isospectra: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, floquet.ResourceLimitError) as exc:
        print(f"isospectra: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    report.timing_ms = round(1000 * (time.monotonic() - start), 3)
    _emit(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
