"""Command-line front end.

Exit codes: 0 success, 1 negative analysis result (framework inconsistent),
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, HistoriesError
from .examples import griffiths_frameworks, spin1_family
from .fileformat import (
    FrameworkFileError,
    load_framework,
    parse_projector,
    parse_vector,
)
from .hilbert import projector_from_vector
from .histories import check_consistency, probability_tree
from .render import fmt_num, fmt_prob, render_tree
from .retrodiction import classify_pair, cross_framework_report, find_certain_retrodictions
from .search import SearchConfig, run_search

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
SHARED_EVENT = (1, 0)


class UsageError(Exception):
    pass


def _consistency_line(report) -> str:
    verdict = "consistent" if report.consistent else "NOT consistent"
    line = (
        f"consistency: {verdict} (medium decoherence), max |D_off| = "
        f"{report.max_offdiag:.3e}, tol = {report.tol:g}"
    )
    if report.worst_pair:
        line += f", worst pair {report.worst_pair[0]} / {report.worst_pair[1]}"
    return line


def _retrodiction_lines(fw, rets) -> list[str]:
    if not rets:
        return ["certain retrodictions: none"]
    out = ["certain retrodictions:"]
    for r in rets:
        given = fw.projector(r.given).label or str(r.given)
        out.append(f"  given {given} -> {r.inferred_label or r.inferred}  (P = {fmt_prob(r.probability)})")
    return out


def _framework_block(fw, title: str) -> tuple[list[str], dict]:
    report = check_consistency(fw)
    tree = probability_tree(fw)
    rets = find_certain_retrodictions(fw)
    lines = [f"== {title} ==", _consistency_line(report), render_tree(tree, fw)]
    lines += _retrodiction_lines(fw, rets)
    data = {
        "label": fw.label,
        "consistency": report.as_dict(),
        "tree": tree.as_dict(),
        "certain_retrodictions": [r.as_dict() for r in rets],
    }
    return lines, data


def _pair_lines(report, fws) -> list[str]:
    given = fws[0].projector(report.given).label
    out = [f"classification of properties retrodicted from {given}:"]
    for a, b, c in report.pairs:
        out.append(
            f"  {a.framework_label}:{a.inferred_label} vs {b.framework_label}:{b.inferred_label}"
            f" -> {c.kind.display}"
        )
        out.append(
            f"    |Q_A Q_B|_F = {fmt_num(c.overlap_norm)}, squared overlap = "
            f"{fmt_prob(c.overlap_norm ** 2)}, |[Q_A, Q_B]|_F = {fmt_num(c.commutator_norm)}"
        )
    return out


def cmd_griffiths(args) -> int:
    s_i, s_f = griffiths_frameworks()
    lines = ["spin 1/2: |i> = |s_z=+1/2>, |f> = |s_x=+1/2>", ""]
    blocks = []
    for fw, title in ((s_i, "S_i: intermediate state = initial state"),
                      (s_f, "S_f: intermediate state = final state")):
        bl, data = _framework_block(fw, title)
        lines += bl + [""]
        blocks.append(data)
    report = cross_framework_report([s_i, s_f], SHARED_EVENT)
    lines += _pair_lines(report, [s_i, s_f])
    if args.json:
        print(json.dumps({"frameworks": blocks, "retrodiction_report": report.as_dict()}, indent=2))
    else:
        print("\n".join(lines))
    return EXIT_OK


def cmd_spin1(args) -> int:
    try:
        s_plus, s_minus, params = spin1_family(args.nz2, args.root, args.azimuth)
    except DomainError as exc:
        print(f"error: --nz2 must lie in the open interval (0, 1/9): {exc}", file=sys.stderr)
        return EXIT_USAGE
    lines = [
        "spin 1: |i> = |s_z=0>, |f> = |s_n=0>, |m+-> = |s_m=+-1>",
        f"n = ({fmt_num(params.n.x)}, {fmt_num(params.n.y)}, {fmt_num(params.n.z)})",
        f"m = ({fmt_num(params.m.x)}, {fmt_num(params.m.y)}, {fmt_num(params.m.z)})",
        f"root = {params.root}, b^2 = {fmt_num(params.b_sq)}",
        f"a = {fmt_num(params.a)}",
        f"b = {fmt_num(params.b)}",
        f"alpha = {fmt_num(params.alpha)}",
        f"beta = {fmt_num(params.beta)}",
        f"gamma = {fmt_num(params.gamma)}",
        "",
    ]
    blocks = []
    for fw, title in ((s_plus, "S_+: intermediate |s_m=+1>"), (s_minus, "S_-: intermediate |s_m=-1>")):
        bl, data = _framework_block(fw, title)
        lines += bl + [""]
        blocks.append(data)
    report = cross_framework_report([s_plus, s_minus], SHARED_EVENT)
    lines += _pair_lines(report, [s_plus, s_minus])
    if args.json:
        print(json.dumps(
            {"params": params.as_dict(), "frameworks": blocks, "retrodiction_report": report.as_dict()},
            indent=2,
        ))
    else:
        print("\n".join(lines))
    return EXIT_OK


def _load(path):
    try:
        return load_framework(path)
    except FrameworkFileError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_check(args) -> int:
    fw = _load(args.path)
    report = check_consistency(fw, args.tol, weak=args.weak)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(_consistency_line(report))
        print(f"weak decoherence: {'yes' if report.weak else 'no'}, "
              f"max |Re D_off| = {report.max_real_offdiag:.3e}")
    return EXIT_OK if report.consistent else EXIT_NEGATIVE


def cmd_tree(args) -> int:
    fw = _load(args.path)
    report = check_consistency(fw, args.tol)
    if not report.consistent:
        print(_consistency_line(report))
        print("probabilities are not defined for an inconsistent framework")
        return EXIT_NEGATIVE
    tree = probability_tree(fw, args.tol)
    if args.json:
        print(json.dumps(tree.as_dict(), indent=2))
    else:
        print(render_tree(tree, fw))
    return EXIT_OK


def _projector_arg(text: str, dim=None):
    """Inline JSON or a file: a generating vector or a projector object."""
    p = Path(text)
    raw = p.read_text() if p.is_file() else text
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse projector {text!r}: {exc}") from exc
    try:
        if isinstance(data, list):
            return projector_from_vector(parse_vector(data, "generating_vector"))
        n = dim
        if n is None:
            if "generating_vector" in data:
                n = len(data["generating_vector"])
            else:
                n = len(data.get("matrix", []))
        return parse_projector(data, n, "projector")
    except HistoriesError as exc:
        raise UsageError(str(exc)) from exc


def cmd_classify(args) -> int:
    qa = _projector_arg(args.a)
    qb = _projector_arg(args.b)
    if qa.dim != qb.dim:
        raise UsageError(f"projectors have dimensions {qa.dim} and {qb.dim}")
    c = classify_pair(qa, qb, args.tol)
    if args.json:
        print(json.dumps(c.as_dict(), indent=2))
    else:
        print(c.kind.display)
        print(f"|Q_A - Q_B|_F = {fmt_num(c.difference_norm)}")
        print(f"|Q_A Q_B|_F = {fmt_num(c.overlap_norm)}")
        print(f"|[Q_A, Q_B]|_F = {fmt_num(c.commutator_norm)}")
        print(f"|Q_A + Q_B - 1|_F = {fmt_num(c.completeness_norm)}")
    return EXIT_OK


def _fmt_vec(v) -> str:
    return "[" + ", ".join(f"{c.real:.6g}{c.imag:+.6g}j" for c in np.asarray(v)) + "]"


def cmd_search(args) -> int:
    cfg = SearchConfig(args.dim, args.trials, args.seed, args.min_final_prob)
    summary = run_search(cfg)
    if args.json:
        print(summary.to_json())
        return EXIT_OK
    d = summary.as_dict()
    print(f"dim: {cfg.dim}")
    print(f"trials: {cfg.trials}")
    print(f"seed: {cfg.seed}")
    print(f"found: {summary.found}")
    print("rejected: " + ", ".join(f"{k}={v}" for k, v in d["rejected_by_reason"].items()))
    inst = summary.first_instance
    if inst is not None:
        print(f"first instance (trial {inst.trial_index}):")
        for name in ("i", "m_a", "m_b", "f"):
            print(f"  {name} = {_fmt_vec(getattr(inst, name))}")
        print(f"  P(final) = {fmt_num(inst.final_probability)}")
        for lab, rep, p in zip(("S_A", "S_B"), inst.reports, inst.retrodiction_probabilities):
            print(f"  {lab}: max |D_off| = {rep.max_offdiag:.3e}, P(m | f) = {fmt_num(p)}")
        print(f"  <m_a|m_b> = {abs(np.vdot(inst.m_a, inst.m_b)):.3e}")
        print(f"  classification: {inst.classification.kind.display}")
    return EXIT_OK


def _dim_arg(text: str) -> int:
    d = int(text)
    if not 2 <= d <= 16:
        raise argparse.ArgumentTypeError("dim must be in [2, 16]")
    return d


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _seed(text: str) -> int:
    n = int(text)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be a non-negative 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conhist",
        description="Consistent histories: decoherence checks, probability trees, retrodictions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("griffiths", help="spin-1/2 frameworks S_i and S_f")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_griffiths)

    p = sub.add_parser("spin1", help="spin-1 frameworks S_+ and S_-")
    p.add_argument("--nz2", type=float, default=0.05, help="n_z^2, in (0, 1/9)")
    p.add_argument("--root", choices=("minus", "plus"), default="minus")
    p.add_argument("--azimuth", type=float, default=0.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spin1)

    p = sub.add_parser("check", help="consistency check of a framework file")
    p.add_argument("path")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--weak", action="store_true", help="use weak (real-part) decoherence")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("tree", help="probability tree of a framework file")
    p.add_argument("path")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("classify", help="classify two propositions")
    p.add_argument("a", help="generating vector or projector object (inline JSON or file)")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("search", help="random search for contradictory retrodictions")
    p.add_argument("--dim", type=_dim_arg, default=3)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--min-final-prob", type=float, default=1e-6)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
