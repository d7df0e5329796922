import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conhist import numkernel as nk
from conhist.errors import DimError, InconsistencyError, SharedEventMismatchError
from conhist.examples import griffiths_frameworks, spin1_family
from conhist.hilbert import Projector, complement, projector_from_vector
from conhist.histories import two_time_framework
from conhist.retrodiction import (
    PairKind,
    classify_pair,
    cross_framework_report,
    find_certain_retrodictions,
)

from conftest import random_ket


def pairs_of(rets):
    return {(r.given, r.inferred) for r in rets}


def test_certain_retrodictions_griffiths():
    s_i, s_f = griffiths_frameworks()
    assert ((1, 0), (0, 0)) in pairs_of(find_certain_retrodictions(s_i))
    assert ((1, 0), (0, 0)) in pairs_of(find_certain_retrodictions(s_f))


def test_certain_retrodictions_spin1():
    s_plus, s_minus, _ = spin1_family(0.05)
    for fw in (s_plus, s_minus):
        rets = find_certain_retrodictions(fw)
        assert pairs_of(rets) == {((1, 0), (0, 0))}
        assert rets[0].probability == pytest.approx(1.0, abs=1e-9)


def test_certain_retrodictions_requires_consistency():
    fw = two_time_framework([1, 0], [math.cos(0.4), math.sin(0.4)], [1, 1])
    with pytest.raises(InconsistencyError):
        find_certain_retrodictions(fw)


def test_classify_examples():
    a = projector_from_vector([1, 0])
    b = projector_from_vector([1, 1])
    assert classify_pair(a, b).kind is PairKind.INCOMPATIBLE
    s_plus, s_minus, _ = spin1_family(0.05)
    c = classify_pair(s_plus.projector((0, 0)), s_minus.projector((0, 0)))
    assert c.kind is PairKind.CONTRADICTORY
    assert a.rank + b.rank < 3


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_classify_complement_is_exhaustive(rng, d):
    p = projector_from_vector(random_ket(rng, d))
    assert classify_pair(p, complement(p)).kind is PairKind.EXHAUSTIVELY_CONTRADICTORY


def test_classify_identical_and_compatible():
    p = Projector(np.diag([1.0, 1.0, 0.0]))
    q = Projector(np.diag([1.0, 0.0, 0.0]))
    assert classify_pair(p, p).kind is PairKind.IDENTICAL
    assert classify_pair(p, q).kind is PairKind.COMPATIBLE


def test_classify_dimension_mismatch():
    with pytest.raises(DimError):
        classify_pair(projector_from_vector([1, 0]), projector_from_vector([1, 0, 0]))


def test_griffiths_pair_squared_overlap_is_half():
    c = classify_pair(projector_from_vector([1, 0]), projector_from_vector([1, 1]))
    assert c.overlap_norm**2 == pytest.approx(0.5, abs=1e-12)


def _random_projector(rng, d, k):
    q, _ = np.linalg.qr(rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k)))
    return Projector(q @ q.conj().T)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 5), data=st.data())
def test_classification_symmetric(seed, d, data):
    rng = np.random.default_rng(seed)
    ka = data.draw(st.integers(1, d))
    kb = data.draw(st.integers(1, d))
    a, b = _random_projector(rng, d, ka), _random_projector(rng, d, kb)
    assert classify_pair(a, b).kind == classify_pair(b, a).kind


def test_contradictory_means_orthogonal_ranges(rng):
    for d in (3, 4, 6):
        q, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
        a = projector_from_vector(q[:, 0])
        b = Projector(q[:, 1:3] @ q[:, 1:3].conj().T)
        c = classify_pair(a, b)
        expected = PairKind.EXHAUSTIVELY_CONTRADICTORY if d == 3 else PairKind.CONTRADICTORY
        assert c.kind is expected
        for _ in range(10):
            u = random_ket(rng, d)
            u /= nk.norm(u)
            assert np.linalg.norm(a.matrix @ b.matrix @ u) <= 1e-9


@pytest.mark.parametrize("d", [2, 3, 4])
def test_rank_one_incompatibility_criterion(rng, d):
    for _ in range(30):
        va, vb = random_ket(rng, d), random_ket(rng, d)
        if rng.uniform() < 0.3:
            vb = vb - nk.inner(va, vb) / nk.inner(va, va) * va
        ov = abs(nk.inner(va, vb)) ** 2 / (nk.inner(va, va).real * nk.inner(vb, vb).real)
        c = classify_pair(projector_from_vector(va), projector_from_vector(vb))
        incompatible = 1e-9 < ov < 1 - 1e-9
        assert (c.kind is PairKind.INCOMPATIBLE) == incompatible
        # for rank-1 projectors |Q_A Q_B|_F^2 is the squared ray overlap
        assert c.overlap_norm**2 == pytest.approx(ov, abs=1e-12)


def test_cross_framework_report_examples():
    s_i, s_f = griffiths_frameworks()
    assert cross_framework_report([s_i, s_f], (1, 0)).kinds() == [PairKind.INCOMPATIBLE]
    assert cross_framework_report([s_i, s_i], (1, 0)).kinds() == [PairKind.IDENTICAL]
    s_plus, s_minus, _ = spin1_family(0.05)
    rep = cross_framework_report([s_plus, s_minus], (1, 0))
    assert rep.kinds() == [PairKind.CONTRADICTORY]
    assert [len(r) for r in rep.retrodictions] == [1, 1]


def test_cross_framework_report_mismatch():
    s_i, _ = griffiths_frameworks()
    other_initial = two_time_framework([0, 1], [1, 0], [1, 1])
    with pytest.raises(SharedEventMismatchError):
        cross_framework_report([s_i, other_initial], (1, 0))
    other_final = two_time_framework([1, 0], [1, 0], [1, -1])
    with pytest.raises(SharedEventMismatchError):
        cross_framework_report([s_i, other_final], (1, 0))
    with pytest.raises(SharedEventMismatchError):
        cross_framework_report([s_i, s_i], (2, 0))
    s_plus, _, _ = spin1_family(0.05)
    with pytest.raises(SharedEventMismatchError):
        cross_framework_report([s_i, s_plus], (1, 0))


def test_initial_state_compared_up_to_phase():
    s_i, _ = griffiths_frameworks()
    phased = two_time_framework([1j, 0], [1, 0], [1, 1])
    assert cross_framework_report([s_i, phased], (1, 0)).kinds() == [PairKind.IDENTICAL]
