"""Certain retrodictions and the classification of retrodicted propositions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import numkernel as nk
from .errors import DimError, FrameworkError, SharedEventMismatchError
from .hilbert import Projector
from .histories import (
    CONSISTENCY_TOL,
    PROB_EPS,
    HistoryFramework,
    _joint,
    _require_consistent,
)

CERTAINTY_TOL = 1e-9
CLASSIFY_TOL = 1e-9
SHARED_TOL = 1e-10


class PairKind(enum.Enum):
    IDENTICAL = "identical"
    COMPATIBLE = "compatible"
    INCOMPATIBLE = "incompatible"
    CONTRADICTORY = "contradictory"
    EXHAUSTIVELY_CONTRADICTORY = "exhaustively contradictory"

    @property
    def display(self) -> str:
        return _DISPLAY[self]


_DISPLAY = {
    PairKind.IDENTICAL: "IDENTICAL",
    PairKind.COMPATIBLE: "COMPATIBLE (commuting)",
    PairKind.INCOMPATIBLE: "INCOMPATIBLE (non-orthogonal)",
    PairKind.CONTRADICTORY: "CONTRADICTORY (orthogonal)",
    PairKind.EXHAUSTIVELY_CONTRADICTORY: "EXHAUSTIVELY CONTRADICTORY (orthogonal, complementary)",
}


@dataclass(frozen=True)
class CertainRetrodiction:
    framework_label: str
    given: tuple
    inferred: tuple
    probability: float
    inferred_label: str = ""

    def as_dict(self) -> dict:
        return {
            "framework": self.framework_label,
            "given": list(self.given),
            "inferred": list(self.inferred),
            "inferred_label": self.inferred_label,
            "probability": self.probability,
        }


@dataclass(frozen=True)
class PairClassification:
    kind: PairKind
    overlap_norm: float
    commutator_norm: float
    difference_norm: float
    completeness_norm: float

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "display": self.kind.display,
            "overlap_norm": self.overlap_norm,
            "commutator_norm": self.commutator_norm,
            "difference_norm": self.difference_norm,
            "completeness_norm": self.completeness_norm,
        }


def find_certain_retrodictions(
    fw: HistoryFramework,
    tol_certain: float = CERTAINTY_TOL,
    tol: float = CONSISTENCY_TOL,
) -> list[CertainRetrodiction]:
    """List every earlier event implied with certainty by a final-step event.

    Final-step events with probability below ``PROB_EPS`` are skipped since
    nothing can be inferred from them.
    """
    dm = _require_consistent(fw, tol, False)
    last = fw.n_steps - 1
    found = []
    for gb in range(len(fw.steps[last])):
        given = (last, gb)
        p_given = _joint(dm, [given])
        if p_given < PROB_EPS:
            continue
        for step in range(last):
            for b in range(len(fw.steps[step])):
                p = _joint(dm, [given, (step, b)]) / p_given
                if p >= 1.0 - tol_certain:
                    found.append(
                        CertainRetrodiction(fw.label, given, (step, b), p, fw.steps[step][b].label)
                    )
    return found


def _matrix(q) -> np.ndarray:
    return q.matrix if isinstance(q, Projector) else nk.as_matrix(q)


def classify_pair(qa, qb, tol: float = CLASSIFY_TOL) -> PairClassification:
    """Classify two propositions by the algebra of their projectors.

    Identical if ``|A - B|_F <= tol``.  Otherwise contradictory if
    ``|AB|_F <= tol`` (exhaustively so when also ``|A + B - 1|_F <= tol``),
    compatible if ``|[A, B]|_F <= tol``, and incompatible in every other case.
    """
    a, b = _matrix(qa), _matrix(qb)
    if a.shape != b.shape:
        raise DimError(f"projectors of shapes {a.shape} and {b.shape}")
    diff = float(np.linalg.norm(a - b))
    # symmetric in A, B: |AB|_F == |BA|_F for Hermitian A, B
    overlap = float(np.linalg.norm(a @ b))
    comm = float(np.linalg.norm(a @ b - b @ a))
    completeness = float(np.linalg.norm(a + b - np.eye(a.shape[0])))
    if diff <= tol:
        kind = PairKind.IDENTICAL
    elif overlap <= tol:
        kind = PairKind.EXHAUSTIVELY_CONTRADICTORY if completeness <= tol else PairKind.CONTRADICTORY
    elif comm <= tol:
        kind = PairKind.COMPATIBLE
    else:
        kind = PairKind.INCOMPATIBLE
    return PairClassification(kind, overlap, comm, diff, completeness)


@dataclass(frozen=True)
class RetrodictionReport:
    """Certain retrodictions at one shared event, across several frameworks.

    ``pairs`` holds ``(first, second, classification)`` for every pair of
    retrodictions taken from two different frameworks.
    """

    given: tuple
    retrodictions: list = field(default_factory=list)
    pairs: list = field(default_factory=list)

    def kinds(self) -> list[PairKind]:
        return [c.kind for _, _, c in self.pairs]

    def as_dict(self) -> dict:
        return {
            "given": list(self.given),
            "retrodictions": [[r.as_dict() for r in rs] for rs in self.retrodictions],
            "pairs": [
                {"first": a.as_dict(), "second": b.as_dict(), "classification": c.as_dict()}
                for a, b, c in self.pairs
            ],
        }


def cross_framework_report(
    fws: list[HistoryFramework],
    shared_given: tuple,
    tol_certain: float = CERTAINTY_TOL,
    tol: float = CONSISTENCY_TOL,
) -> RetrodictionReport:
    """Collect the certain retrodictions from ``shared_given`` and classify them pairwise.

    All frameworks must start from the same ray and share the projector at the
    conditioning event; otherwise ``SharedEventMismatchError`` is raised.
    """
    if not fws:
        raise SharedEventMismatchError("no frameworks given")
    ref = fws[0]
    try:
        given = ref.validate_event(shared_given)
    except FrameworkError as exc:
        raise SharedEventMismatchError(str(exc)) from exc
    ref_p = ref.projector(given).matrix
    for fw in fws[1:]:
        if fw.dim != ref.dim:
            raise SharedEventMismatchError(f"{fw.label!r} has dimension {fw.dim}, expected {ref.dim}")
        if abs(nk.inner(ref.initial.v, fw.initial.v)) < 1.0 - SHARED_TOL:
            raise SharedEventMismatchError(f"{fw.label!r} starts from a different initial state")
        try:
            fw.validate_event(given)
        except FrameworkError as exc:
            raise SharedEventMismatchError(str(exc)) from exc
        if np.linalg.norm(fw.projector(given).matrix - ref_p) > SHARED_TOL:
            raise SharedEventMismatchError(
                f"{fw.label!r} has a different projector at event {given}"
            )

    per_fw = []
    for fw in fws:
        rs = [r for r in find_certain_retrodictions(fw, tol_certain, tol) if r.given == given]
        per_fw.append(rs)
    pairs = []
    for j in range(len(fws)):
        for k in range(j + 1, len(fws)):
            for ra in per_fw[j]:
                for rb in per_fw[k]:
                    c = classify_pair(fws[j].projector(ra.inferred), fws[k].projector(rb.inferred))
                    pairs.append((ra, rb, c))
    return RetrodictionReport(given, per_fw, pairs)

