"""``strat-lab`` command line.

Exit codes: 0 when every assertion passes, 1 when one fails, 2 for usage or
input errors.  Reports and CSV traces go to ``--out`` (default: the
``STRATLAB_OUT`` environment variable, else ``./strat-lab-out``).  Only the
``#`` header lines of a file carry timestamps, so bodies are byte-identical
across runs with the same inputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .algebra import ExactComplex, PolynomialSyntaxError, is_quasihomogeneous, milnor_orlik, parse_polynomial, set_precision, settings
from .corpus import CorpusError, FamilyRecord, load_corpus, spiral_beta
from .curvehunt import enumerate_failure_curves
from .regularity import Pairing, ProbeError, analyze_arc, format_row, log_spiral, probe_ring_max, root_spiral, spiral_angle
from .series import DEFAULT_TRUNC, RefinementError, parse_arc, refine_onto_hypersurface

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    version: str = __version__
    wall_time: float = 0.0
    items: list = field(default_factory=list)  # (key, value) pairs, in output order

    def header(self, args) -> list[str]:
        return [
            f"# strat-lab {self.version} {self.command}",
            f"# started {datetime.now(timezone.utc).isoformat(timespec='seconds')}",
            f"# inputs sha256 {self.inputs_digest}",
            f"# digits {settings.digits} zero-threshold {settings.zero_threshold:g} trunc {args.trunc}",
            f"# wall time {self.wall_time:.3f} s",
        ]


def _digest(args, extra: str = "") -> str:
    h = hashlib.sha256()
    for k in sorted(vars(args)):
        if k not in ("func", "out"):
            h.update(f"{k}={getattr(args, k)!r};".encode())
    h.update(extra.encode())
    return h.hexdigest()


def _outdir(args) -> Path:
    p = Path(args.out or os.environ.get("STRATLAB_OUT") or "strat-lab-out")
    p.mkdir(parents=True, exist_ok=True)
    return p


def _write(path: Path, header: list[str], body: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(header) + "\n")
        fh.write(body)


def _csv(rows: list[list[str]], head: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(head)
    w.writerows(rows)
    return buf.getvalue()


def _family(args, fid: str) -> FamilyRecord:
    try:
        corpus = load_corpus(args.corpus)
    except CorpusError as exc:
        raise UsageError(str(exc)) from exc
    if fid not in corpus:
        raise UsageError(f"unknown family {fid!r}; known: {', '.join(sorted(corpus))}")
    return corpus[fid]


def _finish(args, report: RunReport, t0: float, name: str, files: dict[str, str]) -> None:
    report.wall_time = time.perf_counter() - t0
    out = _outdir(args)
    header = report.header(args)
    body = "".join(f"{k}: {v}\n" for k, v in report.items)
    _write(out / f"report_{name}.txt", header, body)
    for fname, content in sorted(files.items()):
        _write(out / fname, header, content)


# --- commands -----------------------------------------------------------------------


def cmd_milnor(args) -> int:
    t0 = time.perf_counter()
    rec = _family(args, args.family)
    if rec.kind != "hypersurface":
        raise UsageError(f"{rec.id} is not a hypersurface family")
    w = is_quasihomogeneous(rec.polynomial, rec.param)
    if w is None:
        print(f"{rec.id}: not quasihomogeneous", file=sys.stderr)
        return EXIT_USAGE
    mu = milnor_orlik(w)
    print(f"{rec.id}: weights {w}  mu = {mu}")
    report = RunReport("milnor", _digest(args, rec.poly_text), items=[("family", rec.id), ("weights", str(w)), ("mu", mu)])
    status = EXIT_OK
    if rec.mu is not None and rec.mu != mu:
        print(f"expected mu = {rec.mu}", file=sys.stderr)
        report.items.append(("expected", rec.mu))
        status = EXIT_FAIL
    _finish(args, report, t0, f"milnor_{rec.id}", {})
    return status


def _cplx(c) -> str:
    v = complex(c.value if hasattr(c, "value") else c)
    return f"{v.real:.15g}{v.imag:+.15g}i"


def cmd_find_curves(args) -> int:
    t0 = time.perf_counter()
    rec = _family(args, args.family)
    if rec.shape is None:
        print(f"{rec.id}: not of shape x^p + t*x*y^q + y^r*z + z^k", file=sys.stderr)
        return EXIT_USAGE
    curves = enumerate_failure_curves(rec.shape)
    s = rec.shape
    print(f"{rec.id}: {len(curves)} curves, pattern {curves[0].pattern}, a^{s.root_degree} = {s.root_rhs}")
    print(f"{'k':>3}  {'a (polar)':<34} {'a':<40} {'residual':>9}")
    rows = []
    for c in curves:
        print(f"{c.index:>3}  {c.root.describe():<34} {_cplx(c.a):<40} {c.root_residual:9.1e}")
        rows.append([
            str(c.index), rec.id, str(c.pattern), c.root.modulus_text,
            str(c.root.arg_over_pi) if c.root.arg_over_pi is not None else "",
            _cplx(c.a), _cplx(c.b), _cplx(c.c), f"{c.root_residual:.3e}", f"{c.leading_residual:.3e}",
        ])
    report = RunReport("find-curves", _digest(args, rec.poly_text), items=[("family", rec.id), ("curves", len(curves))])
    head = ["index", "family", "pattern", "modulus", "arg_over_pi", "a", "b", "c", "root_residual", "leading_residual"]
    _finish(args, report, t0, f"curves_{rec.id}", {f"curves_{rec.id}.csv": _csv(rows, head)})
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from . import checks

    t0 = time.perf_counter()
    if args.suite != "all" and args.suite not in checks.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(checks.SUITES + ('all',))}")
    results = checks.run_suite(args.suite)
    files = {}
    for r in results:
        print(r.line())
        for fname, rows in r.traces.items():
            head = ["s", "ratio_a", "ratio_delta_bilinear", "ratio_delta_hermitian"] if fname.startswith("trace") else (
                ["radius", "max_a", "max_bpi"] if fname.startswith("probe") else ["t", "sine"]
            )
            files[fname] = _csv(rows, head)
    report = RunReport("verify-paper", _digest(args), items=[(f"AC{r.criterion}", ("PASS " if r.passed else "FAIL ") + r.detail) for r in results])
    _finish(args, report, t0, f"verify_{args.suite}", files)
    failed = [r for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(f"AC{r.criterion}" for r in failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _constants(rec: FamilyRecord, specs: list[str]) -> dict:
    """``name=value`` bindings; ``name=root:k`` picks root k of the family's root condition."""
    out = {}
    for spec in specs or []:
        if "=" not in spec:
            raise UsageError(f"constant {spec!r} must look like name=value")
        name, val = (x.strip() for x in spec.split("=", 1))
        if val.startswith("root:"):
            if rec.shape is None:
                raise UsageError("root constants need a family with a shape")
            k = int(val[5:])
            curves = enumerate_failure_curves(rec.shape)
            if not 0 <= k < len(curves):
                raise UsageError(f"root index {k} out of range 0..{len(curves) - 1}")
            out[name] = curves[k].a
        else:
            try:
                p = parse_polynomial(val, [])
            except PolynomialSyntaxError as exc:
                raise UsageError(f"constant {name}: {exc}") from exc
            out[name] = p.terms.get((), ExactComplex(0))
    return out


def cmd_check_arc(args) -> int:
    t0 = time.perf_counter()
    rec = _family(args, args.family)
    if rec.kind != "hypersurface":
        raise UsageError(f"{rec.id} is not a hypersurface family")
    F = rec.polynomial
    consts = _constants(rec, args.const)
    try:
        text = Path(args.arc_file).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read arc file: {exc}") from exc
    lines = [(n, ln) for n, ln in enumerate(text.splitlines(), 1) if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise UsageError("arc file holds no arc")
    pairings = list(Pairing) if args.pairing == "both" else [Pairing(args.pairing)]
    samples = args.samples.split(",")
    report = RunReport("check-arc", _digest(args, rec.poly_text + text))
    files = {}
    for n, line in lines:
        try:
            arc = parse_arc(line, consts, trunc=args.trunc)
        except PolynomialSyntaxError as exc:
            print(f"{args.arc_file}:{n}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except (ValueError, KeyError) as exc:
            print(f"{args.arc_file}:{n}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        missing = [v for v in rec.all_vars if v not in arc]
        if missing:
            print(f"{args.arc_file}:{n}: arc does not bind {', '.join(missing)}", file=sys.stderr)
            return EXIT_USAGE
        if args.refine:
            try:
                arc = refine_onto_hypersurface(F, arc, args.refine, args.target_order)
            except RefinementError as exc:
                print(f"{args.arc_file}:{n}: refinement failed: {type(exc).__name__}: {exc}", file=sys.stderr)
                return EXIT_FAIL
        rep = analyze_arc(F, arc, rec.vars, rec.param, s_samples=samples, guard_order=args.guard_order)
        summ = rep.summary()
        print(f"arc {n}: {rep.label}")
        print(f"  (a): {summ['verdict_a']}")
        for p in pairings:
            print(f"  (b^pi) {p.value}: {summ['verdict_bpi_' + p.value]}")
        print(f"  secant {summ['secant']}  normal {summ['normal']}")
        if "lemma2" in summ:
            print(f"  valuations: {summ['lemma2']}")
        for note in rep.notes:
            print(f"  note: {note}")
        report.items.append((f"arc {n}", line.strip()))
        report.items.extend((f"arc {n} {k}", v) for k, v in summ.items() if not (k.startswith("verdict_bpi_") and Pairing(k[12:]) not in pairings))
        files[f"trace_{rec.id}_arc{n}.csv"] = _csv([format_row(r) for r in rep.rows], ["s", "ratio_a", "ratio_delta_bilinear", "ratio_delta_hermitian"])
    _finish(args, report, t0, f"check_{rec.id}", files)
    return EXIT_OK


def cmd_probe(args) -> int:
    t0 = time.perf_counter()
    rec = _family(args, args.family)
    report = RunReport("probe", _digest(args, rec.poly_text))
    if rec.kind == "spiral":
        ts = [float(v) for v in args.samples.split(",")] if args.samples else rec.floats("samples")
        radius = log_spiral(spiral_beta(rec)) if rec.extra.get("spiral") == "log" else root_spiral()
        rows = []
        print(f"{'t':>10}  sine")
        for t in ts:
            v = spiral_angle(radius, t)
            print(f"{t:>10g}  {v:.15f}")
            rows.append([f"{t:g}", f"{v:.15g}"])
        report.items.append(("family", rec.id))
        _finish(args, report, t0, f"probe_{rec.id}", {f"probe_{rec.id}.csv": _csv(rows, ["t", "sine"])})
        return EXIT_OK
    if not rec.real:
        print(f"{rec.id}: probes are real-geometry only", file=sys.stderr)
        return EXIT_USAGE
    radii = [float(r) for r in args.radius.split(",")] if args.radius else rec.floats("radii", [1e-1, 1e-2, 1e-3])
    rows = []
    print(f"{'radius':>8}  {'max_a':>14}  {'max_bpi':>14}  points")
    for r in radii:
        try:
            res = probe_ring_max(rec.polynomial, rec.vars, rec.param, r, args.resolution)
        except ProbeError as exc:
            print(f"{rec.id}: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"{r:>8.0e}  {res.max_a:14.9f}  {res.max_bpi:14.9f}  {res.points}")
        rows.append([f"{r:.0e}", f"{res.max_a:.12g}", f"{res.max_bpi:.12g}", str(res.points)])
    report.items.append(("family", rec.id))
    _finish(args, report, t0, f"probe_{rec.id}", {f"probe_{rec.id}.csv": _csv(rows, ["radius", "max_a", "max_bpi", "points"])})
    return EXIT_OK


# --- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="strat-lab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"strat-lab {__version__}")
    ap.add_argument("--digits", type=int, default=34, help="working precision of the approximate engine")
    ap.add_argument("--trunc", type=int, default=DEFAULT_TRUNC, help="truncation order of arc series")
    ap.add_argument("--zero-threshold", type=float, default=1e-10, help="relative zero threshold")
    ap.add_argument("--out", default=None, help="output directory (default $STRATLAB_OUT or ./strat-lab-out)")
    ap.add_argument("--corpus", default=None, help="family corpus file (default: bundled)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("milnor", help="weights and Milnor number of a quasihomogeneous family")
    p.add_argument("family")
    p.set_defaults(func=cmd_milnor)

    p = sub.add_parser("find-curves", help="enumerate the failure curves of a shaped family")
    p.add_argument("family")
    p.set_defaults(func=cmd_find_curves)

    p = sub.add_parser("verify-paper", help="run a check suite")
    p.add_argument("--suite", default="all")
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("check-arc", help="limits and verdicts along arcs read from a file")
    p.add_argument("family")
    p.add_argument("arc_file")
    p.add_argument("--const", action="append", metavar="NAME=VALUE", help="bind a constant; VALUE may be root:K")
    p.add_argument("--refine", metavar="VAR", help="lift the arc onto F = 0 by solving for VAR")
    p.add_argument("--target-order", type=int, default=130)
    p.add_argument("--guard-order", type=int, default=120)
    p.add_argument("--pairing", choices=["both", "bilinear", "hermitian"], default="both")
    p.add_argument("--samples", default="1e-1,1e-2,1e-3,1e-4,1e-5,1e-6")
    p.set_defaults(func=cmd_check_arc)

    p = sub.add_parser("probe", help="shell maxima for real families, sine tables for spirals")
    p.add_argument("family")
    p.add_argument("--radius", help="comma-separated radii")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--samples", help="comma-separated parameters (spirals)")
    p.set_defaults(func=cmd_probe)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        set_precision(args.digits, args.zero_threshold)
        return args.func(args)
    except UsageError as exc:
        print(f"strat-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"strat-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
