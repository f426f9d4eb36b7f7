"""Command-line interface: classify charts, inspect focal data, build and verify corpora."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Iterable

from .chart import PlaneChart, Sampling, eval_frame, parse_chart, validate_chart
from .classifier import TEN_CLASSES, ClassLabel, ClassReport, classify
from .errors import DegenerateSpanAtBase, FocalError, ZeroPencil
from .exact import Q, format_q
from .focal import (
    EmptyLocus,
    LineLocus,
    PointLocus,
    characteristic_forms,
    developable_directions,
    focal_conic,
    focal_locus_for_direction,
    pencil_configuration,
)
from .generators import GENERATED_CLASSES, GenSpec, chart_file_text, generate

EXIT_OK, EXIT_ERROR, EXIT_OUT_OF_SCOPE, EXIT_MISMATCH = 0, 1, 2, 3


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def _load(path) -> PlaneChart:
    return parse_chart(Path(path).read_text(encoding="utf-8"))


def _sampling(args) -> Sampling:
    return Sampling(seed=args.seed, samples=args.samples, budget=args.budget)


def _parallel_map(fn: Callable, items: Iterable, jobs: int) -> list:
    """Map preserving input order, in worker processes when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- classify -------------------------------------------------------------------


def _fmt_value(v) -> str:
    if isinstance(v, list):
        return "(" + " : ".join(str(x) for x in v) + ")"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_fmt_value(x)}" for k, x in v.items())
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def format_report_text(report: ClassReport) -> str:
    d = report.directions
    if d is None:
        dirs = "-"
    elif d["kind"] == "finite":
        dirs = f"finite, gcd degree {d['gcd_degree']}, {'double' if d['double'] else 'simple'}"
        if "root" in d:
            dirs += f", root {_fmt_value(d['root'])}"
    else:
        dirs = d["kind"]
    dims = ", ".join(f"{k}={v}" for k, v in report.dims.items() if v is not None) or "-"
    rows = [
        ("label", report.label.value),
        ("conic rank", "-" if report.conic_rank is None else str(report.conic_rank)),
        ("directions", dirs),
        ("dims", dims),
        ("certificate", _fmt_value(report.certificate) or "-"),
        ("samples", " ".join(f"({format_q(u)}, {format_q(v)})" for u, v in report.samples) or "-"),
        ("seed", str(report.seed)),
        ("resamples", str(report.resamples)),
    ]
    return "\n".join(f"{k:<12} {v}" for k, v in rows)


def cmd_classify(args) -> int:
    try:
        report = classify(_load(args.file), _sampling(args))
    except (OSError, FocalError, ValueError) as exc:
        return _fail(f"{args.file}: {exc}")
    print(report.dumps() if args.json else format_report_text(report))
    return EXIT_OK if report.label.in_scope else EXIT_OUT_OF_SCOPE


# -- conic ----------------------------------------------------------------------


def _parse_base(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected u0,v0 but got {text!r}")
    return Q(parts[0].strip()), Q(parts[1].strip())


def _locus_json(locus) -> dict:
    if isinstance(locus, PointLocus):
        return {"type": "point", "coords": [format_q(x) for x in locus.coords]}
    if isinstance(locus, LineLocus):
        return {"type": "line", "form": [format_q(x) for x in locus.form]}
    if isinstance(locus, EmptyLocus):
        return {"type": "empty"}
    return {"type": "plane"}


def conic_snapshot(chart: PlaneChart, base) -> dict:
    frame = eval_frame(chart, base)
    forms = characteristic_forms(frame)
    conic = focal_conic(forms)
    dirs = developable_directions(forms)
    if dirs.kind == "all":
        probe = [(1, 0), (0, 1), (1, 1)]
    else:
        probe = list(dirs.rational_roots)
    loci = [
        {"direction": [format_q(Q(x)) for x in d], "locus": _locus_json(focal_locus_for_direction(forms, d))}
        for d in probe
    ]
    try:
        pc = pencil_configuration(forms)
        pencils = {"kind": pc.kind}
        if pc.A is not None:
            pencils.update(
                A=[[format_q(x) for x in row] for row in pc.A], disc=format_q(pc.disc), eigen=pc.eigen
            )
    except ZeroPencil:
        pencils = None
    out = {
        "base": [format_q(x) for x in frame.base],
        "matrix": [[format_q(x) for x in row] for row in conic.matrix],
        "rank": conic.rank,
        "directions": {
            "kind": dirs.kind,
            "gcd": None if dirs.gcd is None else str(dirs.gcd),
            "roots": [[format_q(x) for x in r] for r in dirs.rational_roots],
        },
        "loci": loci,
        "pencils": pencils,
    }
    if dirs.kind == "finite" and len(dirs.rational_roots) < dirs.distinct_roots:
        out["directions"]["irrational_roots"] = True
    return out


def _conic_text(s: dict) -> str:
    lines = [f"base         ({', '.join(s['base'])})", "matrix"]
    width = max(len(x) for row in s["matrix"] for x in row)
    lines += ["  [" + "  ".join(x.rjust(width) for x in row) + "]" for row in s["matrix"]]
    lines.append(f"rank         {s['rank']}")
    d = s["directions"]
    roots = " ".join(f"({r[0]}:{r[1]})" for r in d["roots"])
    lines.append(f"directions   {d['kind']}" + (f"  gcd {d['gcd']}" if d["gcd"] else "") + (f"  {roots}" if roots else ""))
    for item in s["loci"]:
        loc = item["locus"]
        body = loc["type"]
        if "coords" in loc:
            body += " (" + " : ".join(loc["coords"]) + ")"
        if "form" in loc:
            body += " " + _linear_form(loc["form"]) + " = 0"
        lines.append(f"  ({item['direction'][0]}:{item['direction'][1]})  {body}")
    p = s["pencils"]
    if p is None:
        lines.append("pencils      zero pencil")
    else:
        extra = f"  eigen {p['eigen']}  disc {p['disc']}" if "eigen" in p else ""
        lines.append(f"pencils      {p['kind']}{extra}")
    return "\n".join(lines)


def _linear_form(coeffs) -> str:
    out = ""
    for c, name in zip(coeffs, "abc"):
        q = Q(c)
        if not q:
            continue
        mag = "" if abs(q) == 1 else f"{format_q(abs(q))}*"
        sign = ("-" if q < 0 else "") if not out else (" - " if q < 0 else " + ")
        out += f"{sign}{mag}{name}"
    return out


def cmd_conic(args) -> int:
    try:
        chart = _load(args.file)
        base = _parse_base(args.at)
        snapshot = conic_snapshot(chart, base)
    except DegenerateSpanAtBase:
        return _fail(f"the spanning points are dependent at {args.at}; choose another base point")
    except (OSError, FocalError, ValueError, ZeroDivisionError) as exc:
        return _fail(f"{args.file}: {exc}")
    print(json.dumps(snapshot, indent=2) if args.json else _conic_text(snapshot))
    return EXIT_OK


# -- corpus / verify ------------------------------------------------------------


def _corpus_job(item):
    label, seed, out = item
    path = Path(out) / f"{label.value.lower()}-{seed:04d}.chart"
    try:
        g = generate(GenSpec(label, seed))
    except FocalError as exc:
        return path.name, f"{type(exc).__name__}: {exc}"
    path.write_text(chart_file_text(g, seed), encoding="utf-8")
    return path.name, None


def _corpus_labels(name: str) -> list[ClassLabel]:
    if name.lower() == "all":
        return list(TEN_CLASSES)
    label = ClassLabel.parse(name)
    if label not in GENERATED_CLASSES:
        raise ValueError(f"no generator for {label.value}")
    return [label]


def cmd_corpus(args) -> int:
    try:
        labels = _corpus_labels(args.cls)
    except ValueError as exc:
        return _fail(str(exc))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    items = [(label, args.seed + i, str(out)) for label in labels for i in range(args.count)]
    failed = 0
    for name, err in _parallel_map(_corpus_job, items, args.jobs):
        if err:
            failed += 1
            print(f"FAILED {name}: {err}")
    print(f"wrote {len(items) - failed} chart files to {out}")
    return EXIT_ERROR if failed else EXIT_OK


def _verify_job(item):
    path, seed, samples, budget = item
    try:
        chart = _load(path)
        if not chart.expected:
            return "error", "no expect: line", None
        expected = ClassLabel.parse(chart.expected)
        report = classify(chart, Sampling(seed=seed, samples=samples, budget=budget))
    except (OSError, FocalError, ValueError) as exc:
        return "error", f"{type(exc).__name__}: {exc}", None
    if report.label != expected:
        return "mismatch", f"expected {expected.value}, got {report.label.value}", report.to_json()
    return "ok", report.label.value, report.to_json()


def cmd_verify(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        return _fail(f"{root} is not a directory")
    paths = sorted(root.glob("*.chart"))
    items = [(str(p), args.seed, args.samples, args.budget) for p in paths]
    results = _parallel_map(_verify_job, items, args.jobs)
    good = sum(status == "ok" for status, _, _ in results)
    if args.json:
        entries = [
            {"file": p.name, "status": status, "detail": detail, "report": report}
            for p, (status, detail, report) in zip(paths, results)
        ]
        print(json.dumps({"matched": good, "total": len(paths), "files": entries}, indent=2))
    else:
        for p, (status, detail, _) in zip(paths, results):
            if status != "ok":
                print(f"{status.upper():<8} {p.name}  {detail}")
            elif args.verbose:
                print(f"ok       {p.name}  {detail}")
        print(f"{good}/{len(paths)} match")
    return EXIT_OK if good == len(paths) else EXIT_MISMATCH


# -- validate -------------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        chart = _load(args.file)
        result = validate_chart(chart, _sampling(args), strict=False)
    except (OSError, FocalError, ValueError) as exc:
        return _fail(f"{args.file}: {exc}")
    status = "ok" if result.ok else "degenerate"
    print(f"{status}: realization dimension {result.realization_dim}, {result.resamples} resamples")
    return EXIT_OK if result.ok else EXIT_OUT_OF_SCOPE


# -- entry point ----------------------------------------------------------------


def _add_sampling(p):
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--samples", type=_positive, default=5, help="generic sample points (default 5)")
    p.add_argument("--budget", type=int, default=12, help="resample budget (default 12)")


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="focalcong", description="Focal loci and classification of plane congruences in P^4"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a chart file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true", help="print the JSON report")
    _add_sampling(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("conic", help="focal conic and developable directions at a base point")
    p.add_argument("file")
    p.add_argument("--at", required=True, metavar="U0,V0", help="base point, e.g. 1,1/2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_conic)

    p = sub.add_parser("corpus", help="generate chart files of a class")
    p.add_argument("--class", dest="cls", required=True, help="class label, or 'all'")
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--seed", type=int, default=0, help="first generator seed")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=_positive, default=1)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("verify", help="re-classify every chart in a directory against its expect: line")
    p.add_argument("dir")
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--json", action="store_true", help="print every report as JSON")
    _add_sampling(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("validate", help="check a chart is a nondegenerate congruence")
    p.add_argument("file")
    _add_sampling(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
