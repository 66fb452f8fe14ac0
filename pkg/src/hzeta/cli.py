"""Command-line front end: run verification suites and print JSON reports.

Exit status: 0 when every check passes, 1 on a mathematical failure, 2 on a
usage error, 3 when an enumeration budget or iteration cap was hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import elliptic, gm, strata
from .characters import verify_eq7_local
from .arith import primes_up_to
from .certificate import Certificate
from .errors import DomainError, HZetaError, ResourceLimitError

log = logging.getLogger("hzeta")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
STATUS_EXIT = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "resource-limit": EXIT_RESOURCE}
THREADS_ENV = "ZH_THREADS"


@dataclass
class VerificationReport:
    task: str
    params: dict[str, Any]
    status: str = "pass"
    details: list[dict[str, Any]] = field(default_factory=list)
    elapsed_ms: float = 0.0
    info: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "task": self.task,
            "params": self.params,
            "status": self.status,
            "details": self.details,
            "elapsed_ms": self.elapsed_ms,
            "info": self.info,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "VerificationReport":
        missing = {"task", "params", "status", "details"} - set(data)
        if missing:
            raise DomainError(f"not a verification report, missing {sorted(missing)}")
        return cls(data["task"], data["params"], data["status"], data["details"],
                   data.get("elapsed_ms", 0.0), data.get("info", []))


def build_report(task: str, params: dict, certificates: list[Certificate], *, compact: bool = False,
                 resource_error: ResourceLimitError | None = None) -> VerificationReport:
    # canonical order, so parallel runs emit the same report as serial ones
    certificates = sorted(certificates, key=lambda c: (c.equation, json.dumps(c.to_dict()["params"], sort_keys=True)))
    report = VerificationReport(task, params)
    for cert in certificates:
        cert_params = cert.to_dict()["params"]
        if compact:
            checks = [c.to_dict() for c in cert.checks]
            tolerances = [c["tolerance"] for c in checks if c["tolerance"] is not None]
            report.details.append({
                "equation": cert.equation,
                "inputs": cert_params,
                "expected": [c["expected"] for c in checks],
                "actual": [c["actual"] for c in checks],
                "exact": not tolerances,
                "tolerance": max(tolerances) if tolerances else None,
                "passed": cert.passed,
            })
        else:
            for check in cert.checks:
                record = check.to_dict()
                report.details.append({
                    "equation": cert.equation,
                    "inputs": {**cert_params, **record.pop("case")},
                    **record,
                })
        report.info.append({"equation": cert.equation, "params": cert_params,
                            "passed": cert.passed, **cert.to_dict()["info"]})
    if resource_error is not None:
        report.status = "resource-limit"
        report.details.append({"equation": None, "inputs": {}, "error": str(resource_error),
                               "expected": None, "actual": None, "exact": True, "passed": False})
    elif not all(d["passed"] for d in report.details):
        report.status = "fail"
    return report


def render_text(report: VerificationReport) -> str:
    lines = [f"{report.task}: {report.status.upper()} ({report.elapsed_ms:.0f} ms)"]
    if report.params:
        lines.append("  params: " + ", ".join(f"{k}={v}" for k, v in report.params.items()))
    passed = sum(1 for d in report.details if d.get("passed"))
    lines.append(f"  checks: {passed}/{len(report.details)} passed")
    for d in report.details:
        mark = "ok  " if d.get("passed") else "FAIL"
        if "error" in d:
            lines.append(f"  {mark} {d['error']}")
            continue
        how = "exact" if d.get("exact") else f"tol={d.get('tolerance')}"
        lines.append(f"  {mark} [{d['equation']}] {_fmt(d['inputs'])}: "
                     f"expected={_fmt(d['expected'])} actual={_fmt(d['actual'])} ({how})")
    return "\n".join(lines)


def _fmt(value) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}={_fmt(v)}" for k, v in value.items()) + "}"
    return json.dumps(value) if not isinstance(value, str) else value


# -- tasks -----------------------------------------------------------------------------------------
# Each task is a (function name, kwargs) pair run by a stateless worker.

_TASKS: dict[str, Callable[..., Certificate]] = {
    "gm_partition": gm.verify_gm_local_partition,
    "eq25": gm.verify_eq25_local,
    "eq8": gm.verify_eq8_global,
    "eq7": verify_eq7_local,
    "eq4": lambda a, b, p, nu: elliptic.verify_eq4_local(elliptic.Curve(a, b), p, nu),
    "eq13": lambda a, b, p, degree: elliptic.verify_eq13_local(elliptic.Curve(a, b), p, degree),
    "eq27-29": lambda spec, p, d: strata.verify_stratification(_load_spec(spec), p, d),
    "eq30": lambda spec, j, p, cell: strata.verify_eq30_local(_load_spec(spec), j, p, cell),
}


def _load_spec(spec):
    return strata.OpenSubschemeSpec.load(spec) if isinstance(spec, str) else spec


def _run_task(task: tuple[str, dict]) -> Certificate:
    name, kwargs = task
    return _TASKS[name](**kwargs)


def worker_count(requested: int | None) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"{THREADS_ENV}={env!r} is not an integer") from None
        if value < 1:
            raise DomainError(f"{THREADS_ENV} must be >= 1")
        return value
    return max(1, requested or 1)


def run_tasks(tasks: list[tuple[str, dict]], threads: int) -> list[Certificate]:
    log.info("running %d tasks on %d worker(s)", len(tasks), threads)
    if threads <= 1 or len(tasks) <= 1:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * threads))))


def gm_local_tasks(args) -> list[tuple[str, dict]]:
    p, D = args.prime, args.max_degree
    return [("gm_partition", {"p": p, "D": D}), ("eq25", {"p": p, "D": D, "n_max": p**D - 1})]


def gm_global_tasks(args):
    return [("eq8", {"s": args.s, "n_max": args.n_max, "P": args.prime_bound})]


def chars_tasks(args):
    return [("eq7", {"n": n, "p": p})
            for n in range(1, args.n_max + 1) for p in primes_up_to(args.prime_bound) if n % p]


def _curve_tasks(a: int, b: int, primes, eq4_budget: int, eq13_primes, eq13_degree: int):
    curve = elliptic.Curve(a, b)
    tasks = []
    for p in primes:
        if not curve.is_good(p):
            continue
        nu = 1
        while p**nu <= eq4_budget:
            tasks.append(("eq4", {"a": a, "b": b, "p": p, "nu": nu}))
            nu += 1
    for p in eq13_primes:
        if curve.is_good(p):
            tasks.append(("eq13", {"a": a, "b": b, "p": p, "degree": eq13_degree}))
    return tasks


def elliptic_local_tasks(args):
    curve = elliptic.Curve(args.a, args.b)
    if not curve.is_good(args.prime):
        raise DomainError(f"p={args.prime} is a bad prime for {curve}")
    tasks = [("eq4", {"a": args.a, "b": args.b, "p": args.prime, "nu": nu})
             for nu in range(1, args.max_degree + 1)]
    tasks.append(("eq13", {"a": args.a, "b": args.b, "p": args.prime, "degree": args.max_degree}))
    return tasks


def read_curve_corpus(path) -> list[tuple[int, int]]:
    curves = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            a, b = (int(x) for x in parts)
        except ValueError:
            raise DomainError(f"{path}:{lineno}: expected two integers 'a b', got {line!r}") from None
        curves.append((a, b))
    return curves


def elliptic_corpus_tasks(args):
    tasks = []
    for a, b in read_curve_corpus(args.file):
        tasks += _curve_tasks(a, b, primes_up_to(args.prime_bound), elliptic.ENUMERATION_BUDGET,
                              primes_up_to(args.eq13_prime_bound), args.eq13_degree)
    # field by field, so each field model is built once rather than once per curve
    tasks.sort(key=lambda t: (t[0], t[1]["p"], t[1].get("nu", 0)))
    return tasks


def strata_tasks(args):
    U = strata.OpenSubschemeSpec.load(args.spec)
    spec = str(Path(args.spec).resolve())
    tasks = [("eq27-29", {"spec": spec, "p": args.prime, "d": args.degree})]
    for cell, jt in strata.torus_strata(U, args.prime, args.degree):
        tasks.append(("eq30", {"spec": spec, "j": jt.j, "p": args.prime, "cell": cell}))
    return tasks


# -- argument parsing ---------------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json", help="stdout format")
    common.add_argument("--output", type=Path, help="also write the JSON report here")
    common.add_argument("--threads", type=_positive, default=1,
                        help=f"worker processes (the {THREADS_ENV} environment variable overrides)")
    common.add_argument("--compact", action="store_true", help="one detail record per certificate")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="hzeta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gm_p = sub.add_parser("gm", help="G_m: cyclotomic splitting checks")
    gm_sub = gm_p.add_subparsers(dest="action", required=True)
    p = gm_sub.add_parser("local", parents=[common], help="closed-point partition and local factor product")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-degree", type=int, required=True)
    p.set_defaults(task="gm-local", build=gm_local_tasks)
    p = gm_sub.add_parser("global", parents=[common], help="zeta(s-1)/zeta(s) as a product of L-functions")
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--n-max", type=_positive, required=True)
    p.add_argument("--prime-bound", type=int, required=True)
    p.set_defaults(task="gm-global", build=gm_global_tasks)

    ch = sub.add_parser("chars", help="Dirichlet characters")
    ch_sub = ch.add_subparsers(dest="action", required=True)
    p = ch_sub.add_parser("eq7", parents=[common], help="prod over characters of (1 - chi(p) T)")
    p.add_argument("--n-max", type=_positive, required=True)
    p.add_argument("--prime-bound", type=int, required=True)
    p.set_defaults(task="chars-eq7", build=chars_tasks)

    el = sub.add_parser("elliptic", help="elliptic curves y^2 = x^3 + ax + b")
    el_sub = el.add_subparsers(dest="action", required=True)
    p = el_sub.add_parser("local", parents=[common], help="one curve at one prime")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--max-degree", type=_positive, required=True)
    p.set_defaults(task="elliptic-local", build=elliptic_local_tasks)
    p = el_sub.add_parser("corpus", parents=[common], help="every curve of a corpus file")
    p.add_argument("--file", type=Path, required=True)
    p.add_argument("--prime-bound", type=int, default=50)
    p.add_argument("--eq13-prime-bound", type=int, default=20)
    p.add_argument("--eq13-degree", type=int, default=3)
    p.set_defaults(task="elliptic-corpus", build=elliptic_corpus_tasks)

    st = sub.add_parser("strata", help="open subschemes of P^N")
    st_sub = st.add_subparsers(dest="action", required=True)
    p = st_sub.add_parser("verify", parents=[common], help="cells, order tuples and diagonal orbits")
    p.add_argument("--spec", type=Path, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--degree", type=_positive, required=True)
    p.set_defaults(task="strata-verify", build=strata_tasks)

    rp = sub.add_parser("report", help="render saved JSON reports")
    rp.add_argument("--format", choices=("json", "text"), default="text")
    rp.add_argument("--input", type=Path, nargs="*", help="report files (default: standard input)")
    rp.set_defaults(task="report")
    return parser


def _task_params(args) -> dict[str, Any]:
    skip = {"command", "action", "task", "build", "format", "output", "threads", "compact", "verbose"}
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k not in skip}


def _emit(report: VerificationReport, fmt: str, output: Path | None = None) -> None:
    data = report.to_dict()
    if output is not None:
        output.write_text(json.dumps(data, indent=2) + "\n")
    print(json.dumps(data, indent=2) if fmt == "json" else render_text(report))


def _report_command(args) -> int:
    try:
        if args.input:
            raw = [path.read_text() for path in args.input]
        else:
            raw = [sys.stdin.read()]
        reports = [VerificationReport.from_dict(json.loads(text)) for text in raw]
    except (OSError, json.JSONDecodeError, DomainError) as exc:
        log.error("cannot read report: %s", exc)
        return EXIT_USAGE
    for report in reports:
        print(json.dumps(report.to_dict(), indent=2) if args.format == "json" else render_text(report))
    return max(STATUS_EXIT.get(r.status, EXIT_FAIL) for r in reports)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.task == "report":
        return _report_command(args)
    params = _task_params(args)
    start = time.perf_counter()
    certificates: list[Certificate] = []
    resource_error = None
    try:
        threads = worker_count(args.threads)
        tasks = args.build(args)
        certificates = run_tasks(tasks, threads)
    except ResourceLimitError as exc:
        log.error("resource limit: %s", exc)
        resource_error = exc
    except (DomainError, OSError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_USAGE
    except HZetaError as exc:
        # an invariant broke mid-verification: report it as a failure record
        log.error("verification failed: %s", exc)
        failure = Certificate("error", params)
        failure.add({"error": type(exc).__name__, "message": str(exc)}, None, None, passed=False)
        certificates = [failure]
    report = build_report(args.task, params, certificates, compact=args.compact,
                          resource_error=resource_error)
    report.elapsed_ms = round((time.perf_counter() - start) * 1000, 3)
    log.info("%s: %s in %.0f ms", args.task, report.status, report.elapsed_ms)
    _emit(report, args.format, args.output)
    return STATUS_EXIT[report.status]


if __name__ == "__main__":
    sys.exit(main())
