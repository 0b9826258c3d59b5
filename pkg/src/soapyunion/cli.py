"""Command-line front end: solve, reduce, decode, verify, ruler, check-gadgets, bench.

Every command except ``ruler`` and ``bench`` prints one JSON report on
stdout; a one-line human summary goes to stderr. Exit status is 0 on
success, 1 on a failed verification or guard refusal, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .core import Instance, evaluate
from .formats import (
    ParseError,
    parse_certificate,
    parse_graph,
    parse_instance,
    render_certificate,
    render_instance,
    shifts_from_file,
    shifts_to_file,
)
from .reductions import (
    MUTATIONS,
    check_gadget_lemmas,
    decode_cover,
    encode_vc,
    is_vertex_cover,
    mutate_gadget,
    ruler,
)
from .solvers import (
    DEFAULT_GUARD_LIMIT,
    GuardLimitError,
    CertificateError,
    certificate_for,
    solve_exact,
    solve_greedy,
    solve_oracle,
    verify_certificate,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunReport:
    command: str
    input_digest: str
    method: str | None = None
    value: int | None = None
    shifts: dict[str, int] | None = None
    explored: int | None = None
    wall_time_s: float | None = None
    optimal: bool | None = None
    cover: list | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {k: v for k, v in asdict(self).items() if k != "extra" and v is not None}
        payload.update(self.extra)
        return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def solution_report(command: str, text: str, instance: Instance, result, elapsed: float) -> RunReport:
    # the reported value must be reproducible from the reported shifts
    value = evaluate(instance, result.shifts).value
    if value != result.value:
        raise AssertionError(f"solver reported {result.value} but shifts evaluate to {value}")
    return RunReport(
        command=command,
        input_digest=digest(text),
        method=result.method,
        value=value,
        shifts=shifts_to_file(result.shifts),
        explored=result.explored,
        wall_time_s=round(elapsed, 6),
        optimal=result.optimal,
    )


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _emit(report: RunReport, output: str | None = None) -> None:
    line = report.to_json()
    if output:
        Path(output).write_text(line + "\n", encoding="utf-8")
    print(line)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def run_solver(instance: Instance, algo: str, threads: int, guard_limit: int, radius: int | None):
    if algo == "exact":
        return solve_exact(instance, guard_limit=guard_limit, threads=threads)
    if algo == "oracle":
        return solve_oracle(instance, radius=radius, guard_limit=guard_limit)
    return solve_greedy(instance)


def cmd_solve(args) -> int:
    text = _read(args.input)
    instance = parse_instance(text)
    start = time.perf_counter()
    result = run_solver(instance, args.algo, args.threads, args.guard_limit, args.radius)
    report = solution_report("solve", text, instance, result, time.perf_counter() - start)
    if args.cert_out:
        Path(args.cert_out).write_text(render_certificate(certificate_for(result)), encoding="utf-8")
    _emit(report, args.output)
    _say(f"{result.method}: value {result.value} ({result.explored} candidates, optimal={result.optimal})")
    return EXIT_OK


def cmd_reduce(args) -> int:
    text = _read(args.input)
    graph = parse_graph(text)
    ri = encode_vc(graph, args.k)
    rendered = render_instance(ri.instance)
    extra = {
        "n": ri.n,
        "s": ri.s,
        "k": ri.k,
        "root_size": ri.root_size,
        "threshold": ri.threshold,
        "trivially_yes": ri.trivially_yes,
        "ruler": list(ri.ruler.elements),
        "orientation": {label: list(yz) for label, yz in ri.orientation.items()},
    }
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
        extra["instance_file"] = args.output
    else:
        extra["instance"] = rendered
    _emit(RunReport("reduce", digest(text), extra=extra))
    _say(f"reduced {ri.n} vertices / {len(graph.edges)} edges to {len(ri.instance)} sets, threshold {ri.threshold}")
    return EXIT_OK


def _load_shifts(path: str) -> dict:
    data = json.loads(_read(path))
    if isinstance(data, dict) and isinstance(data.get("shifts"), dict):
        data = data["shifts"]
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object of shifts or a solve report")
    return data


def cmd_decode(args) -> int:
    text = _read(args.input)
    graph = parse_graph(text)
    ri = encode_vc(graph, args.k)
    shifts = shifts_from_file(_load_shifts(args.shifts), ri.instance.labels)
    value = evaluate(ri.instance, shifts).value
    cover = sorted(decode_cover(ri, shifts))
    ok = is_vertex_cover(graph, cover)
    report = RunReport(
        "decode",
        digest(text),
        value=value,
        shifts=shifts_to_file(shifts),
        cover=cover,
        extra={"cover_size": len(cover), "is_cover": ok, "excess": value - ri.root_size},
    )
    _emit(report, args.output)
    _say(f"decoded cover of size {len(cover)}: {cover}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    text = _read(args.input)
    instance = parse_instance(text)
    cert = parse_certificate(_read(args.cert))
    if args.k is not None:
        cert = type(cert)(cert.tree, args.k)
    ok = verify_certificate(instance, cert)
    report = RunReport("verify", digest(text), extra={"verified": ok, "budget": cert.budget})
    _emit(report, args.output)
    _say(f"certificate {'accepted' if ok else 'rejected'} for budget {cert.budget}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ruler(args) -> int:
    if args.n < 1:
        _say("ruler size must be positive")
        return EXIT_USAGE
    print(" ".join(map(str, ruler(args.n).elements)))
    return EXIT_OK


def cmd_check_gadgets(args) -> int:
    text = _read(args.input)
    ri = encode_vc(parse_graph(text), args.k)
    if args.mutate:
        ri = mutate_gadget(ri, args.mutate)
    report = check_gadget_lemmas(ri)
    extra = {
        "passed": report.ok,
        "mutation": args.mutate,
        "checks": [{"name": e.name, "ok": e.ok, "detail": e.detail} for e in report.entries],
    }
    _emit(RunReport("check-gadgets", digest(text), extra=extra), args.output)
    _say(f"{len(report.entries) - len(report.failures)}/{len(report.entries)} gadget checks passed")
    return EXIT_OK if report.ok else EXIT_FAIL


def random_instance(rng: random.Random, max_labels: int = 4, hi: int = 10, max_size: int = 4) -> Instance:
    k = rng.randint(2, max_labels)
    return Instance.from_sets(
        (f"x{i}", rng.sample(range(hi + 1), rng.randint(1, max_size))) for i in range(k)
    )


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["instance", "method", "value", "explored", "milliseconds"])
    below = mismatched = equal = 0
    for i in range(args.count):
        instance = random_instance(rng, args.max_labels)
        values = {}
        for algo in ("exact", "oracle", "greedy"):
            start = time.perf_counter()
            result = run_solver(instance, algo, args.threads, args.guard_limit, None)
            ms = (time.perf_counter() - start) * 1000
            values[algo] = result.value
            writer.writerow([f"rand{i:04d}", algo, result.value, result.explored, f"{ms:.3f}"])
        mismatched += values["exact"] != values["oracle"]
        below += values["greedy"] < values["exact"]
        equal += values["greedy"] == values["exact"]
    if args.output:
        Path(args.output).write_text(buf.getvalue(), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    rate = equal / args.count if args.count else 1.0
    _say(f"greedy optimal on {equal}/{args.count} ({rate:.0%}); exact/oracle mismatches: {mismatched}")
    if rate < 0.5:
        _say("warning: greedy matched the optimum on fewer than half of the instances")
    return EXIT_FAIL if below or mismatched else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soapyunion", description="Minimum soapy union toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    threads = os.cpu_count() or 1

    def common(p, input_help):
        p.add_argument("-i", "--input", required=True, help=input_help)
        p.add_argument("-o", "--output", help="also write the report to this file")

    p = sub.add_parser("solve", help="solve an instance")
    common(p, "instance file ('-' for stdin)")
    p.add_argument("--algo", choices=("exact", "oracle", "greedy"), default="exact")
    p.add_argument("--threads", type=int, default=threads)
    p.add_argument("--guard-limit", type=int, default=DEFAULT_GUARD_LIMIT)
    p.add_argument("--radius", type=int, help="oracle box radius")
    p.add_argument("--cert-out", help="write the exact solver's certificate here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="encode a vertex-cover instance")
    p.add_argument("-i", "--input", required=True, help="graph file")
    p.add_argument("-k", type=int, default=0, help="vertex-cover budget")
    p.add_argument("-o", "--output", help="write the instance file here")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("decode", help="read a vertex cover off a solution of a reduced instance")
    common(p, "graph file the instance was reduced from")
    p.add_argument("-k", type=int, default=0)
    p.add_argument("--shifts", required=True, help="solve report or JSON object of shifts")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="check a certificate")
    common(p, "instance file")
    p.add_argument("--cert", required=True)
    p.add_argument("-k", type=int, help="override the certificate budget")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ruler", help="print the gadget ruler R_n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_ruler)

    p = sub.add_parser("check-gadgets", help="recheck the reduction gadgets for a graph")
    common(p, "graph file")
    p.add_argument("-k", type=int, default=0)
    p.add_argument("--mutate", choices=MUTATIONS)
    p.set_defaults(func=cmd_check_gadgets)

    p = sub.add_parser("bench", help="compare solvers on random instances (CSV)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-labels", type=int, default=4)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--guard-limit", type=int, default=DEFAULT_GUARD_LIMIT)
    p.add_argument("-o", "--output", help="CSV output file")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, CertificateError, json.JSONDecodeError, OSError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except GuardLimitError as exc:
        _say(f"refused: {exc}")
        return EXIT_FAIL
    except ValueError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
