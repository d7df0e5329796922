"""States, projectors, projective decompositions and spin operators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import numkernel as nk
from .errors import (
    DecompositionError,
    DegenerateStateError,
    DimError,
    FormulaDomainError,
    ProjectorError,
    UnitVectorError,
)

ZERO_STATE_TOL = 1e-12
PROJECTOR_HERMITIAN_TOL = 1e-12
PROJECTOR_IDEMPOTENT_TOL = 1e-10
DECOMPOSITION_TOL = 1e-10
UNIT_VECTOR_TOL = 1e-9
FORMULA_SINGULAR_TOL = 1e-8

SQRT2 = math.sqrt(2.0)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """A ket, not necessarily normalised.

    Closed-form spin-1 kets are deliberately left with their raw scale, since
    their norms and overlaps are meaningful quantities on their own.
    """

    v: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = nk.as_vector(self.v)
        if not np.any(v != 0):
            raise DegenerateStateError(f"state {self.label!r} is the zero vector")
        object.__setattr__(self, "v", _frozen(v))

    @property
    def dim(self) -> int:
        return self.v.size

    def norm(self) -> float:
        return nk.norm(self.v)

    def normalized(self) -> StateVector:
        return StateVector(self.v / self.norm(), self.label)

    def __len__(self):
        return self.v.size


@dataclass(frozen=True, eq=False)
class Projector:
    """Orthogonal projector (Hermitian idempotent) representing a property."""

    matrix: np.ndarray
    label: str = ""
    rank: int = field(init=False)

    def __post_init__(self):
        p = nk.as_matrix(self.matrix)
        if p.shape[0] != p.shape[1]:
            raise ProjectorError(f"projector {self.label!r} is not square: {p.shape}")
        if not nk.is_hermitian(p, PROJECTOR_HERMITIAN_TOL):
            raise ProjectorError(f"projector {self.label!r} is not Hermitian")
        idem = float(np.linalg.norm(p @ p - p))
        if idem > PROJECTOR_IDEMPOTENT_TOL:
            raise ProjectorError(
                f"projector {self.label!r} is not idempotent (|P^2 - P|_F = {idem:.3e})"
            )
        object.__setattr__(self, "matrix", _frozen(p))
        object.__setattr__(self, "rank", int(round(np.trace(p).real)))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expectation(self, psi) -> float:
        """Born probability ``<psi|P|psi> / <psi|psi>``."""
        psi = nk.as_vector(psi)
        return (nk.inner(psi, self.matrix @ psi) / nk.inner(psi, psi)).real


def projector_from_vector(s, label: str | None = None) -> Projector:
    """Rank-1 projector ``|s><s| / <s|s>`` onto the ray of ``s``."""
    if isinstance(s, StateVector):
        label = s.label if label is None else label
        v = s.v
    else:
        v = nk.as_vector(s)
    n = nk.norm(v)
    if n <= ZERO_STATE_TOL:
        raise DegenerateStateError(f"cannot project onto a vector of norm {n:.3e}")
    u = v / n
    return Projector(nk.outer(u, u), label or "")


def complement(p: Projector, label: str | None = None) -> Projector:
    if label is None:
        label = f"1-{p.label}" if p.label else ""
    return Projector(np.eye(p.dim) - p.matrix, label)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Mutually orthogonal projectors that sum to the identity."""

    projectors: tuple[Projector, ...]
    label: str = ""

    def __post_init__(self):
        ps = tuple(self.projectors)
        if not ps:
            raise DecompositionError(f"decomposition {self.label!r} has no projectors")
        d = ps[0].dim
        if any(p.dim != d for p in ps):
            raise DimError(f"decomposition {self.label!r} mixes dimensions")
        total = sum(p.matrix for p in ps)
        resid = float(np.linalg.norm(total - np.eye(d)))
        if resid > DECOMPOSITION_TOL:
            raise DecompositionError(
                f"decomposition {self.label!r}: projectors do not sum to the identity "
                f"(|sum P - 1|_F = {resid:.3e})"
            )
        for j in range(len(ps)):
            for k in range(j + 1, len(ps)):
                overlap = float(np.linalg.norm(ps[j].matrix @ ps[k].matrix))
                if overlap > DECOMPOSITION_TOL:
                    raise DecompositionError(
                        f"decomposition {self.label!r}: projectors {j} and {k} "
                        f"are not orthogonal (|P_j P_k|_F = {overlap:.3e})"
                    )
        object.__setattr__(self, "projectors", ps)

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    def __len__(self):
        return len(self.projectors)

    def __getitem__(self, k) -> Projector:
        return self.projectors[k]

    @classmethod
    def from_vector(cls, s, labels: tuple[str, str] = ("", ""), label: str = ""):
        """Two-outcome decomposition ``{P_s, 1 - P_s}``."""
        p = projector_from_vector(s, labels[0])
        return cls((p, complement(p, labels[1])), label)


@dataclass(frozen=True)
class UnitVector3:
    """Direction in physical space."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        vals = (self.x, self.y, self.z)
        if not all(math.isfinite(c) for c in vals):
            raise UnitVectorError(f"non-finite direction {vals}")
        err = abs(self.x**2 + self.y**2 + self.z**2 - 1.0)
        if err > UNIT_VECTOR_TOL:
            raise UnitVectorError(f"|n|^2 - 1 = {err:.3e} for {vals}")
        for name, c in zip("xyz", vals):
            object.__setattr__(self, name, float(c))

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> UnitVector3:
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0.0:
            raise UnitVectorError("zero vector has no direction")
        return cls(x / r, y / r, z / r)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> UnitVector3:
        return cls(
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )

    def __iter__(self):
        return iter((self.x, self.y, self.z))


_HALF = (
    np.array([[0, 1], [1, 0]], dtype=complex) / 2,
    np.array([[0, -1j], [1j, 0]], dtype=complex) / 2,
    np.array([[1, 0], [0, -1]], dtype=complex) / 2,
)
_ONE = (
    np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / SQRT2,
    np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / SQRT2,
    np.diag([1.0, 0.0, -1.0]).astype(complex),
)


def spin_operator(direction: UnitVector3, spin: float) -> np.ndarray:
    """``S . n`` in the ``S_z`` eigenbasis ordered from highest to lowest ``m``.

    ``spin`` is 0.5 or 1.
    """
    if spin == 0.5:
        gens = _HALF
    elif spin == 1:
        gens = _ONE
    else:
        raise ValueError(f"only spin 1/2 and spin 1 are supported, got {spin!r}")
    return direction.x * gens[0] + direction.y * gens[1] + direction.z * gens[2]


def spin1_eigenstate_closed_form(n: UnitVector3, m_value: int) -> StateVector:
    """Unnormalised spin-1 eigenvector of ``S . n`` with middle component 1.

    For ``m_value = 0``::

        ( -(n_x - i n_y) / (sqrt2 n_z),  1,  (n_x + i n_y) / (sqrt2 n_z) )

    and for ``m_value = +-1``::

        ( +-(n_x - i n_y) / (sqrt2 (1 -+ n_z)),  1,  +-(n_x + i n_y) / (sqrt2 (1 +- n_z)) )

    Raises FormulaDomainError where a denominator is within 1e-8 of zero.
    """
    minus = complex(n.x, -n.y)
    plus = complex(n.x, n.y)
    if m_value == 0:
        if abs(n.z) <= FORMULA_SINGULAR_TOL:
            raise FormulaDomainError(f"m=0 closed form is singular at n_z = {n.z:g}")
        v = [-minus / (SQRT2 * n.z), 1.0, plus / (SQRT2 * n.z)]
        label = "s_n=0"
    elif m_value in (1, -1):
        if abs(1.0 - n.z) <= FORMULA_SINGULAR_TOL or abs(1.0 + n.z) <= FORMULA_SINGULAR_TOL:
            raise FormulaDomainError(f"m=+-1 closed form is singular at n_z = {n.z:g}")
        sg = float(m_value)
        v = [sg * minus / (SQRT2 * (1.0 - sg * n.z)), 1.0, sg * plus / (SQRT2 * (1.0 + sg * n.z))]
        label = f"s_n={m_value:+d}"
    else:
        raise ValueError(f"spin-1 m_value must be -1, 0 or +1, got {m_value!r}")
    return StateVector(np.array(v, dtype=complex), label)


def spin1_eigenstate(n: UnitVector3, m_value: int) -> StateVector:
    """Normalised eigenstate of ``S . n`` for spin 1, valid for every direction.

    Uses the closed form where it is defined and the Jacobi eigensolver
    elsewhere; the phase follows ``numkernel.fix_phase`` either way.
    """
    if m_value not in (-1, 0, 1):
        raise ValueError(f"spin-1 m_value must be -1, 0 or +1, got {m_value!r}")
    try:
        v = spin1_eigenstate_closed_form(n, m_value).v
    except FormulaDomainError:
        _, vecs = nk.hermitian_eigen(spin_operator(n, 1))
        v = vecs[:, m_value + 1]
    v = nk.fix_phase(v / nk.norm(v))
    return StateVector(v, f"s_n={m_value:+d}" if m_value else "s_n=0")


def spin_half_eigenstate(n: UnitVector3, sign: int) -> StateVector:
    """Normalised eigenstate of ``S . n`` for spin 1/2 with eigenvalue ``sign/2``."""
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    _, vecs = nk.hermitian_eigen(spin_operator(n, 0.5))
    return StateVector(vecs[:, 0 if sign < 0 else 1], "s_n=+1/2" if sign > 0 else "s_n=-1/2")
