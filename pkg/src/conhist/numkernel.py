"""Small dense complex linear algebra.

Vectors and matrices are plain ``numpy`` complex arrays.  Everything here is
meant for dimensions up to about 16, so clarity wins over speed: the
Hermitian eigensolver is a cyclic Jacobi iteration and the orthogonal
complement is built by Gram-Schmidt.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import ConvergenceError, DimError, HermiticityError, NonFiniteError

DEFAULT_TOL = 1e-12
MAX_DIM = 16
MAX_SWEEPS = 60


def as_vector(u) -> np.ndarray:
    """Return ``u`` as a 1-d complex array, rejecting empty or non-finite input."""
    v = np.asarray(u, dtype=complex)
    if v.ndim != 1 or v.size == 0:
        raise DimError(f"expected a non-empty 1-d vector, got shape {v.shape}")
    if not _all_finite(v):
        raise NonFiniteError("vector has non-finite entries")
    return v


def _all_finite(a: np.ndarray) -> bool:
    # a finite sum is the cheap common case; fall back to the full check only
    # when it could be overflow rather than a NaN/Inf entry
    with np.errstate(over="ignore", invalid="ignore"):
        s = complex(a.sum())
    if math.isfinite(s.real) and math.isfinite(s.imag):
        return True
    return bool(np.isfinite(a).all())


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise DimError(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    if not _all_finite(m):
        raise NonFiniteError("matrix has non-finite entries")
    return m


def inner(u, v) -> complex:
    """Inner product ``<u|v>``, conjugate-linear in the first argument."""
    u, v = as_vector(u), as_vector(v)
    if u.shape != v.shape:
        raise DimError(f"dimension mismatch: {u.size} vs {v.size}")
    return complex(np.vdot(u, v))


def norm(u) -> float:
    return float(np.sqrt(inner(u, u).real))


def outer(u, v) -> np.ndarray:
    """``|u><v|`` as a matrix, ``result[j, k] = u[j] * conj(v[k])``."""
    u, v = as_vector(u), as_vector(v)
    return np.outer(u, v.conj())


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def is_hermitian(a, tol: float = DEFAULT_TOL) -> bool:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= tol


def is_unitary(u, tol: float = 1e-10) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    eye = np.eye(u.shape[0])
    return float(np.max(np.abs(u.conj().T @ u - eye))) <= tol


def fix_phase(v, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rotate ``v`` so its first component of magnitude > ``tol`` is real positive."""
    v = as_vector(v)
    for c in v:
        if abs(c) > tol:
            return v * (abs(c) / c)
    return v.copy()


def _jacobi_pair(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """2x2 unitary that annihilates ``a[p, q]`` of the Hermitian ``a``."""
    c = a[p, q]
    r = abs(c)
    phase = c / r
    theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
        if theta < 0:
            t = -t
    cs = 1.0 / math.sqrt(t * t + 1.0)
    sn = t * cs
    # diag(1, conj(phase)) makes the block real symmetric, then a real rotation
    return np.array([[cs, sn], [-sn * np.conj(phase), cs * np.conj(phase)]])


def hermitian_eigen(h, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    h : array_like
        Square matrix, Hermitian to within ``tol`` (max-abs entry of
        ``h - h^dagger``).
    tol : float
        Hermiticity tolerance, also the magnitude threshold used by the
        eigenvector phase convention.

    Returns
    -------
    eigenvalues : ndarray
        Real eigenvalues in ascending order.
    eigenvectors : ndarray
        Orthonormal eigenvectors as columns, each rotated so that its first
        component of magnitude above ``tol`` is real and positive.

    Raises
    ------
    HermiticityError
        If ``h`` is not square or not Hermitian within ``tol``.
    ConvergenceError
        If the off-diagonal mass has not vanished after ``MAX_SWEEPS`` sweeps.
    """
    a = as_matrix(h)
    n = a.shape[0]
    if a.shape[1] != n:
        raise HermiticityError(f"matrix is not square: {a.shape}")
    if not is_hermitian(a, tol):
        raise HermiticityError(
            f"matrix is not Hermitian within {tol:g} "
            f"(max |H - H^dagger| = {np.max(np.abs(a - a.conj().T)):.3e})"
        )
    a = 0.5 * (a + a.conj().T)
    q = np.eye(n, dtype=complex)
    scale = float(np.linalg.norm(a))
    if scale > 0.0:
        negligible = 1e-17 * scale
        offdiag = ~np.eye(n, dtype=bool)
        for _ in range(MAX_SWEEPS):
            if not np.any(np.abs(a[offdiag]) > negligible):
                break
            for p in range(n - 1):
                for r in range(p + 1, n):
                    if abs(a[p, r]) <= negligible:
                        # below rounding of the largest entries; dropping it
                        # perturbs eigenpairs by O(eps * |H|)
                        a[p, r] = a[r, p] = 0.0
                        continue
                    g = _jacobi_pair(a, p, r)
                    idx = [p, r]
                    a[:, idx] = a[:, idx] @ g
                    a[idx, :] = g.conj().T @ a[idx, :]
                    a[p, r] = a[r, p] = 0.0
                    q[:, idx] = q[:, idx] @ g
        else:
            raise ConvergenceError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")

    values = np.real(np.diag(a)).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = q[:, order]
    for k in range(n):
        vectors[:, k] = fix_phase(vectors[:, k], tol)
    return values, vectors


def _vnorm(v: np.ndarray) -> float:
    return math.sqrt(np.vdot(v, v).real)


def _gram_schmidt_step(basis: list[np.ndarray], v: np.ndarray) -> np.ndarray:
    # two passes keep the result orthogonal to machine precision
    for _ in range(2):
        for b in basis:
            v = v - np.vdot(b, v) * b
    return v


def span_basis(vs: Iterable, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of ``span(vs)``.

    A vector is dropped when its residual after projection is at most
    ``tol`` times the largest input norm.
    """
    vs = [as_vector(v) for v in vs]
    if not vs:
        return []
    threshold = tol * max(_vnorm(v) for v in vs)
    basis: list[np.ndarray] = []
    for v in vs:
        if v.shape != vs[0].shape:
            raise DimError("vectors of different dimensions")
        w = _gram_schmidt_step(basis, v)
        nw = _vnorm(w)
        if nw > threshold and nw > 0.0:
            basis.append(w / nw)
    return basis


def orthogonal_complement(vs: Sequence, dim: int, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the subspace of ``C^dim`` orthogonal to ``span(vs)``.

    The complement is completed from the standard basis, always taking the
    candidate with the largest residual next, so the output is deterministic.
    An empty list means ``vs`` spans the whole space.
    """
    for v in vs:
        if as_vector(v).size != dim:
            raise DimError(f"vector of dimension {len(v)} in C^{dim}")
    basis = span_basis(vs, tol)
    start = len(basis)
    while len(basis) < dim:
        best, best_norm = None, -1.0
        for k in range(dim):
            e = np.zeros(dim, dtype=complex)
            e[k] = 1.0
            w = _gram_schmidt_step(basis, e)
            nw = _vnorm(w)
            if nw > best_norm:
                best, best_norm = w, nw
        basis.append(best / best_norm)
    return [fix_phase(b, tol) for b in basis[start:]]
