import math

import numpy as np
import pytest

from conhist import numkernel as nk
from conhist.errors import (
    FrameworkError,
    InconsistencyError,
    SizeError,
    UndefinedConditional,
)
from conhist.examples import griffiths_frameworks, spin1_family
from conhist.hilbert import Decomposition, StateVector, projector_from_vector
from conhist.histories import (
    HistoryFramework,
    chain_vector,
    check_consistency,
    conditional_probability,
    decoherence_matrix,
    event_probability,
    probability_tree,
    two_time_framework,
)

from conftest import random_ket

Z_UP = np.array([1.0, 0.0])
X_UP = np.array([1.0, 1.0]) / math.sqrt(2)


def tilted_framework():
    """|i>=|z+>, |f>=|x+>, middle property along the 45 degree axis in the xz plane."""
    th = math.pi / 4
    m = np.array([math.cos(th / 2), math.sin(th / 2)])
    return two_time_framework(Z_UP, m, X_UP, "tilted")


def overlap_residual(i, m, f):
    return nk.inner(f, i) * nk.inner(m, m) - nk.inner(f, m) * nk.inner(m, i)


def test_chain_vector_examples():
    s_i, _ = griffiths_frameworks()
    for b in (0, 1):
        np.testing.assert_allclose(chain_vector(s_i, (1, b)), 0, atol=1e-15)
    single = HistoryFramework(StateVector(Z_UP), (Decomposition.from_vector(Z_UP),))
    np.testing.assert_allclose(chain_vector(single, (0,)), Z_UP)
    s_plus, _, _ = spin1_family(0.05)
    np.testing.assert_allclose(chain_vector(s_plus, (1, 0)), 0, atol=1e-10)


def test_chain_vector_validates_path():
    s_i, _ = griffiths_frameworks()
    with pytest.raises(FrameworkError):
        chain_vector(s_i, (0,))
    with pytest.raises(FrameworkError):
        chain_vector(s_i, (0, 2))


def test_griffiths_decoherence_matrices_diagonal():
    for fw in griffiths_frameworks():
        dm = decoherence_matrix(fw)
        assert np.abs(dm.off_diagonal()).max() < 1e-12


def test_tilted_middle_state_does_not_decohere():
    dm = decoherence_matrix(tilted_framework())
    assert np.abs(dm.off_diagonal()).max() > 0.01


def test_decoherence_matrix_hermitian_unit_trace(rng):
    for d in (2, 3, 4):
        fw = HistoryFramework(
            StateVector(random_ket(rng, d)),
            tuple(Decomposition.from_vector(random_ket(rng, d)) for _ in range(3)),
        )
        dm = decoherence_matrix(fw)
        np.testing.assert_allclose(dm.entries, dm.entries.conj().T, atol=1e-15)
        assert np.trace(dm.entries).real == pytest.approx(1.0, abs=1e-10)
        assert dm.probabilities().min() >= -1e-12


def test_decoherence_entry_convention():
    fw = tilted_framework()
    dm = decoherence_matrix(fw)
    a, b = dm.index((0, 0)), dm.index((1, 0))
    expected = nk.inner(chain_vector(fw, (1, 0)), chain_vector(fw, (0, 0)))
    assert dm.entries[a, b] == pytest.approx(expected, abs=1e-15)


def test_size_guard():
    dec = Decomposition.from_vector(Z_UP)
    fw = HistoryFramework(StateVector(Z_UP), (dec,) * 13)
    with pytest.raises(SizeError):
        decoherence_matrix(fw)


def test_check_consistency_examples():
    s_plus, s_minus, _ = spin1_family(0.05, "minus")
    assert check_consistency(s_plus).consistent
    assert check_consistency(s_minus).consistent
    report = check_consistency(tilted_framework())
    assert not report.consistent
    assert report.worst_pair is not None
    assert report.max_offdiag > 0.01


def test_single_step_always_consistent(rng):
    for d in (2, 3, 5):
        fw = HistoryFramework(StateVector(random_ket(rng, d)), (Decomposition.from_vector(random_ket(rng, d)),))
        assert check_consistency(fw).consistent


def test_weak_but_not_medium_consistency():
    # off-diagonal term is -2i sin(theta) times a positive factor: purely imaginary
    f = np.array([1, 1j]) / math.sqrt(2)
    fw = two_time_framework(Z_UP, X_UP, f)
    report = check_consistency(fw)
    assert not report.consistent and report.weak and not report.medium
    assert report.max_real_offdiag < 1e-15
    assert check_consistency(fw, weak=True).consistent


@pytest.mark.parametrize("d", [2, 3, 4])
def test_consistency_matches_two_time_condition(rng, d):
    for _ in range(20):
        i, m = random_ket(rng, d), random_ket(rng, d)
        f = random_ket(rng, d)
        fw = two_time_framework(i, m, f)
        scale = nk.norm(i) * nk.norm(m) ** 2 * nk.norm(f)
        assert check_consistency(fw).consistent == (abs(overlap_residual(i, m, f)) <= 1e-10 * scale)
        # force the condition by taking f orthogonal to <m|m> i - <m|i> m
        w = nk.inner(m, m) * i - nk.inner(m, i) * m
        comp = nk.orthogonal_complement([w], d)
        f = sum(rng.standard_normal() * c for c in comp)
        fw = two_time_framework(i, m, f)
        assert abs(overlap_residual(i, m, f)) <= 1e-10 * nk.norm(i) * nk.norm(m) ** 2 * nk.norm(f)
        assert check_consistency(fw).consistent


def test_probability_tree_griffiths():
    s_i, s_f = griffiths_frameworks()
    t = probability_tree(s_i)
    np.testing.assert_allclose(t.level(), (1, 0), atol=1e-12)
    np.testing.assert_allclose(t.level((0,)), (0.5, 0.5), atol=1e-12)
    assert t.level((1,)) == (None, None)
    t = probability_tree(s_f)
    np.testing.assert_allclose(t.level(), (0.5, 0.5), atol=1e-12)
    np.testing.assert_allclose(t.level((0,)), (1, 0), atol=1e-12)
    np.testing.assert_allclose(t.level((1,)), (0, 1), atol=1e-12)


def test_probability_tree_spin1():
    s_plus, _, p = spin1_family(0.05)
    t = probability_tree(s_plus)
    alpha = (1 - p.b**2 * 0.05) / 2
    gamma = 0.05 / alpha
    np.testing.assert_allclose(t.level(), (alpha, 1 - alpha), atol=1e-10)
    np.testing.assert_allclose(t.level((0,)), (gamma, 1 - gamma), atol=1e-10)
    np.testing.assert_allclose(t.level((1,)), (0, 1), atol=1e-10)


def test_tree_products_reproduce_diagonal(rng):
    fws = list(griffiths_frameworks()) + list(spin1_family(0.03, "plus", 0.7)[:2])
    for fw in fws:
        t = probability_tree(fw)
        dm = decoherence_matrix(fw)
        for path, p in zip(dm.paths, dm.probabilities()):
            prod = 1.0
            for k in range(1, len(path) + 1):
                c = t.conditional[path[:k]]
                prod *= 0.0 if c is None else c
            assert prod == pytest.approx(p, abs=1e-10)
        for prefix, pr, _ in [((), 1.0, None)] + list(t.iter_nodes()):
            if len(prefix) < fw.n_steps and pr > 1e-12:
                assert sum(t.level(prefix)) == pytest.approx(1.0, abs=1e-10)
            assert -1e-12 <= pr <= 1 + 1e-12


def test_probability_tree_rejects_inconsistent():
    with pytest.raises(InconsistencyError):
        probability_tree(tilted_framework())


def test_conditional_probability_retrodiction():
    s_i, s_f = griffiths_frameworks()
    assert conditional_probability(s_i, (1, 0), (0, 0)) == pytest.approx(1.0, abs=1e-12)
    assert conditional_probability(s_f, (1, 0), (0, 0)) == pytest.approx(1.0, abs=1e-12)
    s_plus, _, p = spin1_family(0.05)
    # alpha*gamma / (alpha*gamma + 0)
    assert conditional_probability(s_plus, (1, 0), (0, 0)) == pytest.approx(1.0, abs=1e-10)


def test_conditional_probability_prediction():
    s_plus, _, p = spin1_family(0.05)
    assert conditional_probability(s_plus, (0, 0), (1, 0)) == pytest.approx(p.gamma, abs=1e-10)
    assert event_probability(s_plus, [(1, 0)]) == pytest.approx(p.beta, abs=1e-12)


def test_conditional_probability_undefined():
    s_i, _ = griffiths_frameworks()
    with pytest.raises(UndefinedConditional):
        conditional_probability(s_i, (0, 1), (1, 0))
    with pytest.raises(InconsistencyError):
        conditional_probability(tilted_framework(), (1, 0), (0, 0))


def test_evolutions_match_heisenberg_picture(rng):
    d = 3
    u1, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    u2, _ = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    i, m, f = (random_ket(rng, d) for _ in range(3))
    dec1 = Decomposition.from_vector(m)
    dec2 = Decomposition.from_vector(f)
    fw = HistoryFramework(StateVector(i), (dec1, dec2), (u1, u2))
    # absorb U1 into the state and U2 into the last projectors
    heis = HistoryFramework(
        StateVector(u1 @ i),
        (dec1, Decomposition.from_vector(u2.conj().T @ f)),
    )
    np.testing.assert_allclose(
        decoherence_matrix(fw).entries, decoherence_matrix(heis).entries, atol=1e-12
    )


def test_framework_validation(rng):
    dec = Decomposition.from_vector(Z_UP)
    with pytest.raises(FrameworkError):
        HistoryFramework(StateVector(Z_UP), ())
    with pytest.raises(FrameworkError):
        HistoryFramework(StateVector(Z_UP), (dec,), (np.array([[1, 1], [0, 1]]),))
    with pytest.raises(FrameworkError):
        HistoryFramework(StateVector(Z_UP), (dec,), (np.eye(2), np.eye(2)))
    with pytest.raises(ValueError):
        HistoryFramework(StateVector([1, 0, 0]), (dec,))


def test_initial_state_normalised():
    fw = two_time_framework([3, 4j], Z_UP, X_UP)
    assert fw.initial.norm() == pytest.approx(1.0, abs=1e-15)
