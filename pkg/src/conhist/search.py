"""Randomised search for contradictory certain retrodictions.

Each trial draws an initial ket ``i`` and an orthogonal pair ``m_A``,
``m_B``, then picks the final ket ``f`` orthogonal to

    w = <m|m> i - <m|i> m        (for m = m_A and m = m_B)

which is exactly the two-time decoherence condition
``<f|i><m|m> = <f|m><m|i>`` for both intermediate choices.  A surviving
candidate is rebuilt as two frameworks and verified from scratch.

In C^2 the two ``w`` vectors are orthogonal and nonzero, so no ``f`` exists;
the scan there is an empirical check only.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import numkernel as nk
from .hilbert import projector_from_vector
from .histories import ConsistencyReport, check_consistency, two_time_framework
from .retrodiction import (
    CERTAINTY_TOL,
    PairClassification,
    PairKind,
    classify_pair,
    find_certain_retrodictions,
)

REASONS = (
    "zero-branch",
    "empty-complement",
    "low-final-probability",
    "inconsistent",
    "not-certain",
    "not-contradictory",
)


@dataclass(frozen=True)
class SearchConfig:
    dim: int = 3
    trials: int = 1000
    seed: int = 0
    min_final_prob: float = 1e-6
    tol: float = 1e-10

    def __post_init__(self):
        if not 2 <= self.dim <= nk.MAX_DIM:
            raise ValueError(f"dim must be in [2, {nk.MAX_DIM}], got {self.dim}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a non-negative 64-bit integer")


@dataclass(frozen=True)
class Rejection:
    reason: str
    trial_index: Optional[int] = None


@dataclass(frozen=True, eq=False)
class FoundInstance:
    i: np.ndarray
    f: np.ndarray
    m_a: np.ndarray
    m_b: np.ndarray
    reports: tuple[ConsistencyReport, ConsistencyReport]
    classification: PairClassification
    retrodiction_probabilities: tuple[float, float]
    final_probability: float
    trial_index: Optional[int] = None

    def as_dict(self) -> dict:
        def vec(v):
            return [[float(c.real), float(c.imag)] for c in v]

        return {
            "trial_index": self.trial_index,
            "i": vec(self.i),
            "f": vec(self.f),
            "m_a": vec(self.m_a),
            "m_b": vec(self.m_b),
            "final_probability": self.final_probability,
            "retrodiction_probabilities": list(self.retrodiction_probabilities),
            "consistency": [r.as_dict() for r in self.reports],
            "classification": self.classification.as_dict(),
        }


def _random_ket(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex Gaussian entries; ``shape`` may be an int or a tuple."""
    shape = (shape,) if isinstance(shape, int) else tuple(shape)
    z = rng.standard_normal((2,) + shape)
    return z[0] + 1j * z[1]


def _ray_overlap(u, v) -> float:
    """``|<u|v>|^2 / (<u|u><v|v>)``."""
    return abs(np.vdot(u, v)) ** 2 / (np.vdot(u, u).real * np.vdot(v, v).real)


def decoherence_witness(i, m) -> np.ndarray:
    """Vector ``w`` with ``<f|w> = <f|i><m|m> - <f|m><m|i>`` for every ``f``."""
    return np.vdot(m, m) * i - np.vdot(m, i) * m


def verify_candidate(
    i, m_a, m_b, f, cfg: SearchConfig, trial_index: Optional[int] = None
) -> Union[FoundInstance, Rejection]:
    """Build both frameworks for a candidate and run the full check pipeline."""
    i, m_a, m_b, f = (nk.as_vector(v) for v in (i, m_a, m_b, f))
    if min(_ray_overlap(m_a, i), _ray_overlap(m_b, i)) < cfg.min_final_prob:
        return Rejection("zero-branch", trial_index)
    p_final = _ray_overlap(f, i)
    if p_final < cfg.min_final_prob:
        return Rejection("low-final-probability", trial_index)
    fw_a = two_time_framework(i, m_a, f, "S_A")
    fw_b = two_time_framework(i, m_b, f, "S_B")
    reports = (check_consistency(fw_a, cfg.tol), check_consistency(fw_b, cfg.tol))
    if not all(r.consistent for r in reports):
        return Rejection("inconsistent", trial_index)
    probs = []
    for fw in (fw_a, fw_b):
        hits = [
            r for r in find_certain_retrodictions(fw, CERTAINTY_TOL, cfg.tol)
            if r.given == (1, 0) and r.inferred == (0, 0)
        ]
        if not hits:
            return Rejection("not-certain", trial_index)
        probs.append(hits[0].probability)
    cls = classify_pair(projector_from_vector(m_a), projector_from_vector(m_b))
    if cls.kind is not PairKind.CONTRADICTORY:
        return Rejection("not-contradictory", trial_index)
    return FoundInstance(i, f, m_a, m_b, reports, cls, tuple(probs), p_final, trial_index)


def trial_rng(cfg: SearchConfig, trial_index: int) -> np.random.Generator:
    """Independent stream per trial, so trial order never affects results."""
    return np.random.default_rng([cfg.seed, trial_index])


def complete_candidate(
    i, m_a, m_b, cfg: SearchConfig, rng: np.random.Generator, trial_index: Optional[int] = None
) -> Union[FoundInstance, Rejection]:
    """Choose ``f`` for given ``i, m_a, m_b`` so both frameworks decohere, then verify."""
    i, m_a, m_b = (nk.as_vector(v) for v in (i, m_a, m_b))
    if min(_ray_overlap(m_a, i), _ray_overlap(m_b, i)) < cfg.min_final_prob:
        return Rejection("zero-branch", trial_index)
    comp = nk.orthogonal_complement(
        [decoherence_witness(i, m_a), decoherence_witness(i, m_b)], cfg.dim
    )
    if not comp:
        return Rejection("empty-complement", trial_index)
    coeffs = _random_ket(rng, len(comp))
    f = sum(c * v for c, v in zip(coeffs, comp))
    return verify_candidate(i, m_a, m_b, f, cfg, trial_index)


def sample_instance(cfg: SearchConfig, trial_index: int) -> Union[FoundInstance, Rejection]:
    rng = trial_rng(cfg, trial_index)
    i, m_a, g = _random_ket(rng, (3, cfg.dim))
    m_b = g - (np.vdot(m_a, g) / np.vdot(m_a, m_a)) * m_a
    return complete_candidate(i, m_a, m_b, cfg, rng, trial_index)


@dataclass
class SearchSummary:
    config: SearchConfig
    found: int = 0
    rejected_by_reason: dict = field(default_factory=dict)
    first_instance: Optional[FoundInstance] = None

    def as_dict(self) -> dict:
        return {
            "dim": self.config.dim,
            "trials": self.config.trials,
            "seed": self.config.seed,
            "min_final_prob": self.config.min_final_prob,
            "tol": self.config.tol,
            "found": self.found,
            "rejected_by_reason": {r: self.rejected_by_reason.get(r, 0) for r in REASONS},
            "first_instance": self.first_instance.as_dict() if self.first_instance else None,
        }

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def run_search(cfg: SearchConfig) -> SearchSummary:
    summary = SearchSummary(cfg)
    rejected: Counter = Counter()
    for t in range(cfg.trials):
        out = sample_instance(cfg, t)
        if isinstance(out, Rejection):
            rejected[out.reason] += 1
            continue
        summary.found += 1
        if summary.first_instance is None:
            summary.first_instance = out
    summary.rejected_by_reason = dict(rejected)
    return summary
