"""Plain-text rendering of probability trees and reports."""

from __future__ import annotations

from fractions import Fraction

from .histories import HistoryFramework, ProbabilityTree

FRACTION_TOL = 1e-12
MAX_DENOMINATOR = 16


def fmt_prob(x) -> str:
    """Short form of a probability: simple fractions where exact, else 10 digits."""
    if x is None:
        return "undefined"
    x = float(x)
    frac = Fraction(x).limit_denominator(MAX_DENOMINATOR)
    if abs(x - float(frac)) <= FRACTION_TOL:
        return str(frac)
    return f"{x:.10g}"


def fmt_num(x: float) -> str:
    return f"{x:.10g}"


def render_tree(tree: ProbabilityTree, fw: HistoryFramework) -> str:
    """Fan diagram, one line per branch.

    The conditional probability sits on the edge in brackets and the
    marginal probability of the partial history follows the property label.
    """
    lines = [f"|i>  [{tree.label}]" if tree.label else "|i>"]

    def walk(prefix, indent):
        kids = tree.children(prefix)
        for j, child in enumerate(kids):
            last = j == len(kids) - 1
            step = len(child) - 1
            proj = fw.steps[step][child[-1]]
            name = proj.label or f"P{step + 1}_{child[-1] + 1}"
            lines.append(
                f"{indent}{'`' if last else '+'}--[{fmt_prob(tree.conditional[child])}]-- "
                f"{name}  (p={fmt_prob(tree.probability[child])})"
            )
            if len(child) < len(tree.branch_counts):
                walk(child, indent + ("    " if last else "|   "))

    walk((), "")
    return "\n".join(lines)
