"""The two worked spin examples.

* Spin 1/2: initial state ``|s_z=+1/2>``, final property ``|s_x=+1/2>``, and
  the two ways of choosing the intermediate property that make the set
  consistent (``S_i``: intermediate = initial, ``S_f``: intermediate = final).
* Spin 1: initial state ``|s_z=0>``, final property ``|s_n=0>`` and
  intermediate property ``|s_m=+1>`` or ``|s_m=-1>``, with ``m`` tied to ``n``
  through two positive parameters ``a`` and ``b``::

      m = (a n_x, a n_y, -b n_z)
      a^2 = (1 - b^2 n_z^2) / (1 - n_z^2)
      n_z^2 = (b^2 - 1) / (b^2 (b^2 + 3))

  The last relation has two admissible ``b^2`` for every ``0 < n_z^2 < 1/9``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, UndefinedConditional
from .hilbert import (
    StateVector,
    UnitVector3,
    spin1_eigenstate,
    spin1_eigenstate_closed_form,
    spin_half_eigenstate,
)
from .histories import (
    HistoryFramework,
    conditional_probability,
    event_probability,
    two_time_framework,
)

NZ_SQ_MAX = 1.0 / 9.0
EXCLUDED_SURROGATE_NZ = 1e-8

LABELS = (("P1_1", "P1_2"), ("P2_1", "P2_2"))


def griffiths_frameworks() -> tuple[HistoryFramework, HistoryFramework]:
    """Spin-1/2 frameworks ``S_i`` and ``S_f``."""
    z_up = spin_half_eigenstate(UnitVector3(0.0, 0.0, 1.0), +1)
    x_up = spin_half_eigenstate(UnitVector3(1.0, 0.0, 0.0), +1)
    s_i = two_time_framework(z_up, z_up, x_up, "S_i", LABELS)
    s_f = two_time_framework(z_up, x_up, x_up, "S_f", LABELS)
    return s_i, s_f


@dataclass(frozen=True)
class BRoots:
    b_sq_minus: float
    b_sq_plus: float
    nz_sq: float

    def residuals(self) -> tuple[float, float]:
        """Back-substitution errors ``(b^2-1)/(b^2(b^2+3)) - n_z^2`` for both roots."""
        return tuple(
            nz_sq_from_b_sq(r) - self.nz_sq for r in (self.b_sq_minus, self.b_sq_plus)
        )

    def select(self, root: str) -> float:
        if root == "minus":
            return self.b_sq_minus
        if root == "plus":
            return self.b_sq_plus
        raise ValueError(f"root must be 'minus' or 'plus', got {root!r}")


def nz_sq_from_b_sq(b_sq: float) -> float:
    return (b_sq - 1.0) / (b_sq * (b_sq + 3.0))


def solve_b_squared(nz_sq: float) -> BRoots:
    """Both solutions ``b^2`` of ``n_z^2 b^4 + (3 n_z^2 - 1) b^2 + 1 = 0``.

    The larger root comes from the quadratic formula and the smaller one from
    the product of roots ``1/n_z^2``, which avoids cancellation as
    ``n_z^2 -> 0``.

    Raises
    ------
    DomainError
        Unless ``0 < nz_sq < 1/9``.  At ``1/9`` the two roots merge into the
        double root ``b^2 = 3``.
    """
    x = float(nz_sq)
    if not math.isfinite(x):
        raise DomainError(f"n_z^2 must be finite, got {nz_sq!r}")
    if x == NZ_SQ_MAX:
        raise DomainError(
            "n_z^2 = 1/9 is a double root (b^2 = 3 twice); two distinct roots "
            "need n_z^2 in the open interval (0, 1/9)"
        )
    if not 0.0 < x < NZ_SQ_MAX:
        raise DomainError(f"n_z^2 = {x!r} is outside the admissible interval (0, 1/9)")
    s = math.sqrt((9.0 * x - 1.0) * (x - 1.0))
    big = ((1.0 - 3.0 * x) + s) / (2.0 * x)
    small = 2.0 / ((1.0 - 3.0 * x) + s)
    return BRoots(small, big, x)


@dataclass(frozen=True)
class Spin1FamilyParams:
    n: UnitVector3
    m: UnitVector3
    a: float
    b: float
    alpha: float
    beta: float
    gamma: float
    nz_sq: float
    b_sq: float
    root: str
    azimuth: float

    def as_dict(self) -> dict:
        d = asdict(self)
        d["n"] = list(self.n)
        d["m"] = list(self.m)
        return d


def spin1_params(nz_sq: float, root: str = "minus", azimuth: float = 0.0) -> Spin1FamilyParams:
    roots = solve_b_squared(nz_sq)
    b_sq = roots.select(root)
    b = math.sqrt(b_sq)
    nz = math.sqrt(nz_sq)
    n_perp = math.sqrt(1.0 - nz_sq)
    n = UnitVector3(n_perp * math.cos(azimuth), n_perp * math.sin(azimuth), nz)
    # 1 - b^2 n_z^2 == 4 / (b^2 + 3) on the solution curve; this form stays
    # accurate on the large-b branch where b n_z -> 1
    one_minus = 4.0 / (b_sq + 3.0)
    a = math.sqrt(one_minus / (1.0 - nz_sq))
    m = UnitVector3(a * n.x, a * n.y, -b * nz)
    alpha = one_minus / 2.0
    beta = nz_sq
    return Spin1FamilyParams(
        n=n, m=m, a=a, b=b, alpha=alpha, beta=beta, gamma=beta / alpha,
        nz_sq=float(nz_sq), b_sq=b_sq, root=root, azimuth=float(azimuth),
    )


def spin1_states(params: Spin1FamilyParams, closed_form: bool = True):
    """``(|i>, |f>, |m+>, |m->)`` for a family member.

    With ``closed_form`` the kets are the raw unnormalised column vectors,
    otherwise normalised eigensolver output.
    """
    initial = StateVector(np.array([0.0, 1.0, 0.0]), "s_z=0")
    eig = spin1_eigenstate_closed_form if closed_form else spin1_eigenstate
    f = eig(params.n, 0)
    m_plus = eig(params.m, +1)
    m_minus = eig(params.m, -1)
    return initial, f, m_plus, m_minus


def spin1_family(
    nz_sq: float, root: str = "minus", azimuth: float = 0.0, closed_form: bool = True
) -> tuple[HistoryFramework, HistoryFramework, Spin1FamilyParams]:
    """Spin-1 frameworks ``S_+`` and ``S_-`` and their parameters.

    ``n_z`` is taken as ``+sqrt(nz_sq)`` and ``azimuth`` fixes the direction
    of ``(n_x, n_y)``.  By default the vectors come from the closed-form
    eigenvector expressions; ``closed_form=False`` builds them with the
    eigensolver instead, which also works at the singular limits.
    """
    params = spin1_params(nz_sq, root, azimuth)
    initial, f, m_plus, m_minus = spin1_states(params, closed_form)
    s_plus = two_time_framework(initial, m_plus, f, "S_+", LABELS)
    s_minus = two_time_framework(initial, m_minus, f, "S_-", LABELS)
    return s_plus, s_minus, params


@dataclass(frozen=True)
class ExcludedChoice:
    name: str
    nz: float
    b_sq: float
    m_z: float
    p_final: float
    conditional_defined: bool

    def as_dict(self) -> dict:
        return asdict(self)


def excluded_choices_report(surrogate_nz: float = EXCLUDED_SURROGATE_NZ) -> list[ExcludedChoice]:
    """Show why the limits ``n_z = 0, m_z = 0`` and ``n_z = 0, m_z = -1`` are left out.

    Both are approached with ``n_z = surrogate_nz`` on the two roots.  The final
    property then has probability ``n_z^2``, so conditioning on it is
    undefined.  An interior member (``n_z^2 = 0.05``) is listed for contrast.
    """
    cases = [
        ("n_z=0, m_z=0 (b=1)", surrogate_nz**2, "minus"),
        ("n_z=0, m_z=-1 (b->inf, b n_z->1)", surrogate_nz**2, "plus"),
        ("interior n_z^2=0.05", 0.05, "minus"),
    ]
    out = []
    for name, nz_sq, root in cases:
        s_plus, _, params = spin1_family(nz_sq, root, closed_form=False)
        p_final = event_probability(s_plus, [(1, 0)])
        try:
            conditional_probability(s_plus, (1, 0), (0, 0))
            defined = True
        except UndefinedConditional:
            defined = False
        out.append(ExcludedChoice(name, params.n.z, params.b_sq, params.m.z, p_final, defined))
    return out
