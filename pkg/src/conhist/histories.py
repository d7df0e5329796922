"""History frameworks, the decoherence matrix and conditional probability trees.

Steps and branches are indexed from zero: ``(0, 0)`` is the first projector
of the first decomposition after the initial time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import numkernel as nk
from .errors import (
    DimError,
    FrameworkError,
    InconsistencyError,
    SizeError,
    UndefinedConditional,
)
from .hilbert import Decomposition, StateVector

MAX_PATHS = 4096
CONSISTENCY_TOL = 1e-10
PROB_EPS = 1e-12

Event = tuple  # (step, branch)


@dataclass(frozen=True, eq=False)
class HistoryFramework:
    """Initial state plus an ordered list of projective decompositions.

    ``evolutions[k]`` is the unitary applied just before ``steps[k]``; when
    omitted every interval is free evolution (identity).
    """

    initial: StateVector
    steps: tuple[Decomposition, ...]
    evolutions: Optional[tuple[np.ndarray, ...]] = None
    label: str = ""

    def __post_init__(self):
        init = self.initial
        if not isinstance(init, StateVector):
            init = StateVector(init, "i")
        object.__setattr__(self, "initial", init.normalized())
        steps = tuple(self.steps)
        if not steps:
            raise FrameworkError(f"framework {self.label!r} has no steps")
        d = init.dim
        for k, dec in enumerate(steps):
            if dec.dim != d:
                raise DimError(f"step {k} has dimension {dec.dim}, initial state has {d}")
        object.__setattr__(self, "steps", steps)
        if self.evolutions is not None:
            evs = tuple(nk.as_matrix(u) for u in self.evolutions)
            if len(evs) != len(steps):
                raise FrameworkError(f"{len(evs)} evolutions given for {len(steps)} steps")
            for k, u in enumerate(evs):
                if u.shape != (d, d):
                    raise DimError(f"evolution {k} has shape {u.shape}")
                if not nk.is_unitary(u, 1e-10):
                    raise FrameworkError(f"evolution {k} is not unitary")
            object.__setattr__(self, "evolutions", evs)

    @property
    def dim(self) -> int:
        return self.initial.dim

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def branch_counts(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.steps)

    def paths(self) -> list[tuple[int, ...]]:
        """All histories in lexicographic order."""
        return list(itertools.product(*(range(n) for n in self.branch_counts())))

    def projector(self, event: Event):
        step, branch = event
        return self.steps[step][branch]

    def validate_path(self, path: Sequence[int]) -> tuple[int, ...]:
        path = tuple(int(c) for c in path)
        if len(path) != self.n_steps:
            raise FrameworkError(f"path {path} has wrong length for {self.n_steps} steps")
        for k, (c, n) in enumerate(zip(path, self.branch_counts())):
            if not 0 <= c < n:
                raise FrameworkError(f"branch {c} out of range at step {k}")
        return path

    def validate_event(self, event: Event) -> tuple[int, int]:
        step, branch = (int(e) for e in event)
        if not 0 <= step < self.n_steps or not 0 <= branch < len(self.steps[step]):
            raise FrameworkError(f"event {(step, branch)} does not exist in {self.label!r}")
        return step, branch


def two_time_framework(initial, middle, final, label: str = "", labels=None) -> HistoryFramework:
    """Framework with decompositions ``{P_m, 1-P_m}`` then ``{P_f, 1-P_f}``.

    ``middle`` and ``final`` are generating vectors (any nonzero scale).
    """
    labels = labels or (("P1_1", "P1_2"), ("P2_1", "P2_2"))
    if not isinstance(initial, StateVector):
        initial = StateVector(initial, "i")
    steps = (
        Decomposition.from_vector(middle, labels[0], "t1"),
        Decomposition.from_vector(final, labels[1], "t2"),
    )
    return HistoryFramework(initial, steps, label=label)


def chain_vector(fw: HistoryFramework, path: Sequence[int]) -> np.ndarray:
    """``P_n U_n ... P_1 U_1 |i>`` for the branches chosen by ``path``."""
    path = fw.validate_path(path)
    v = fw.initial.v.copy()
    for k, choice in enumerate(path):
        if fw.evolutions is not None:
            v = fw.evolutions[k] @ v
        v = fw.steps[k][choice].matrix @ v
    return v


@dataclass(frozen=True, eq=False)
class DecoherenceMatrix:
    """``D[a, b] = <chain(b)|chain(a)>`` over the enumerated ``paths``."""

    entries: np.ndarray
    paths: list

    def index(self, path) -> int:
        return self.paths.index(tuple(path))

    def probabilities(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    def off_diagonal(self) -> np.ndarray:
        off = self.entries.copy()
        np.fill_diagonal(off, 0.0)
        return off


def decoherence_matrix(fw: HistoryFramework) -> DecoherenceMatrix:
    paths = fw.paths()
    if len(paths) > MAX_PATHS:
        raise SizeError(f"{len(paths)} histories exceed the limit of {MAX_PATHS}")
    chains = np.array([chain_vector(fw, p) for p in paths])
    return DecoherenceMatrix(chains @ chains.conj().T, paths)


@dataclass(frozen=True)
class ConsistencyReport:
    """Verdict of the decoherence test.

    ``consistent`` is the medium-decoherence verdict unless the check was run
    with ``weak=True``; both verdicts are always available.
    """

    consistent: bool
    max_offdiag: float
    worst_pair: Optional[tuple]
    max_real_offdiag: float
    medium: bool
    weak: bool
    tol: float

    def as_dict(self) -> dict:
        return {
            "consistent": self.consistent,
            "max_offdiag": self.max_offdiag,
            "worst_pair": [list(p) for p in self.worst_pair] if self.worst_pair else None,
            "max_real_offdiag": self.max_real_offdiag,
            "medium_decoherence": self.medium,
            "weak_decoherence": self.weak,
            "tol": self.tol,
        }


def check_consistency(
    fw: HistoryFramework, tol: float = CONSISTENCY_TOL, weak: bool = False
) -> ConsistencyReport:
    """Test whether the decoherence matrix is diagonal.

    ``fw`` may also be an already computed ``DecoherenceMatrix``.
    Off-diagonal magnitudes are compared against ``tol * max(1, |D|_F)``.
    With ``weak=True`` only the real parts have to vanish.
    """
    dm = decoherence_matrix(fw) if not isinstance(fw, DecoherenceMatrix) else fw
    off = dm.off_diagonal()
    threshold = tol * max(1.0, float(np.linalg.norm(dm.entries)))
    mags = np.abs(off)
    worst = None
    max_off = float(mags.max()) if mags.size else 0.0
    if max_off > 0.0:
        a, b = np.unravel_index(int(np.argmax(mags)), mags.shape)
        worst = (dm.paths[a], dm.paths[b])
    max_re = float(np.abs(off.real).max()) if mags.size else 0.0
    medium = max_off <= threshold
    weak_ok = max_re <= threshold
    return ConsistencyReport(
        consistent=weak_ok if weak else medium,
        max_offdiag=max_off,
        worst_pair=worst if not medium else None,
        max_real_offdiag=max_re,
        medium=medium,
        weak=weak_ok,
        tol=tol,
    )


def _require_consistent(fw, tol, weak) -> DecoherenceMatrix:
    dm = decoherence_matrix(fw)
    report = check_consistency(dm, tol, weak)
    if not report.consistent:
        raise InconsistencyError(
            f"framework {fw.label!r} does not decohere: max off-diagonal "
            f"{report.max_offdiag:.3e} between histories {report.worst_pair}"
        )
    return dm


@dataclass(frozen=True)
class ProbabilityTree:
    """Marginal and conditional probabilities for every history prefix.

    ``probability[prefix]`` is the probability of the partial history
    ``prefix`` (a tuple of branch indices, ``()`` being the root).
    ``conditional[prefix]`` is that probability divided by the probability of
    the parent prefix, or ``None`` where the parent has probability below
    ``PROB_EPS``.
    """

    label: str
    branch_counts: tuple
    probability: dict = field(repr=False)
    conditional: dict = field(repr=False)

    def children(self, prefix=()) -> list[tuple]:
        prefix = tuple(prefix)
        n = self.branch_counts[len(prefix)]
        return [prefix + (b,) for b in range(n)]

    def level(self, prefix=()) -> tuple:
        """Conditional probabilities of the branches just below ``prefix``."""
        return tuple(self.conditional[c] for c in self.children(prefix))

    def iter_nodes(self):
        """Depth-first walk yielding ``(prefix, probability, conditional)``."""

        def walk(prefix):
            if len(prefix) == len(self.branch_counts):
                return
            for c in self.children(prefix):
                yield c, self.probability[c], self.conditional[c]
                yield from walk(c)

        yield from walk(())

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "nodes": [
                {"path": list(p), "probability": pr, "conditional": cond}
                for p, pr, cond in self.iter_nodes()
            ],
        }


def probability_tree(
    fw: HistoryFramework, tol: float = CONSISTENCY_TOL, weak: bool = False
) -> ProbabilityTree:
    dm = _require_consistent(fw, tol, weak)
    diag = dm.probabilities()
    prob: dict = {(): float(diag.sum())}
    for path, p in zip(dm.paths, diag):
        for k in range(1, len(path) + 1):
            prob[path[:k]] = prob.get(path[:k], 0.0) + float(p)
    cond: dict = {}
    for prefix, p in prob.items():
        if not prefix:
            continue
        parent = prob[prefix[:-1]]
        cond[prefix] = p / parent if parent >= PROB_EPS else None
    return ProbabilityTree(fw.label, fw.branch_counts(), prob, cond)


def event_probability(fw: HistoryFramework, events, tol: float = CONSISTENCY_TOL) -> float:
    """Probability that every ``(step, branch)`` in ``events`` occurs."""
    dm = _require_consistent(fw, tol, False)
    return _joint(dm, [fw.validate_event(e) for e in events])


def _joint(dm: DecoherenceMatrix, events) -> float:
    diag = dm.probabilities()
    total = 0.0
    for path, p in zip(dm.paths, diag):
        if all(path[s] == b for s, b in events):
            total += float(p)
    return total


def conditional_probability(
    fw: HistoryFramework, given: Event, target: Event, tol: float = CONSISTENCY_TOL
) -> float:
    """``P(target | given)`` by marginalising history probabilities.

    Works in either time direction, so it covers retrodiction (target earlier
    than the conditioning event) as well as prediction.

    Raises
    ------
    InconsistencyError
        If the framework fails the medium-decoherence test.
    UndefinedConditional
        If ``P(given) < PROB_EPS``.
    """
    given, target = fw.validate_event(given), fw.validate_event(target)
    dm = _require_consistent(fw, tol, False)
    p_given = _joint(dm, [given])
    if p_given < PROB_EPS:
        raise UndefinedConditional(
            f"P{given} = {p_given:.3e} in {fw.label!r}; conditional is undefined"
        )
    return _joint(dm, [given, target]) / p_given
