"""Closed-form incidence numerology for degree-d, genus-g curves in P^r.

All functions are pure integer arithmetic.  Reports carry every intermediate
quantity so JSON consumers never recompute them.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

from .errors import InvalidInput


class Failing(str, Enum):
    RHO = "rho"                  # rho(d, g, r) < 0: no nondegenerate maps at all
    DIMENSION = "dimension"      # (r+1)d - rg + r - rn < 0
    TWISTED = "twisted"          # d - rg - 1 < 0 (hyperplane variant)


class TwistVerdict(str, Enum):
    SATISFIES = "satisfies"
    FAILS = "fails"
    OUT_OF_SCOPE = "out_of_theorem_scope"


def _check(d, g, r, n=0, k=0):
    for name, v in (("d", d), ("g", g), ("r", r), ("n", n), ("k", k)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise InvalidInput(f"{name} must be an integer, got {v!r}")
    if d < 1 or r < 1:
        raise InvalidInput(f"need d >= 1 and r >= 1, got d={d}, r={r}")
    if g < 0 or n < 0 or k < 0:
        raise InvalidInput(f"need g, n, k >= 0, got g={g}, n={n}, k={k}")


def rho(d: int, g: int, r: int) -> int:
    """Brill-Noether number (r+1)d - rg - r(r+1)."""
    _check(d, g, r)
    return (r + 1) * d - r * g - r * (r + 1)


def chi_tangent(d: int, g: int, r: int) -> int:
    """Euler characteristic of f^*T_{P^r}: (r+1)d - rg + r."""
    _check(d, g, r)
    return (r + 1) * d - r * g + r


def chi_twisted(d: int, g: int, r: int) -> int:
    """Euler characteristic of f^*T_{P^r}(-1): d - rg + r."""
    _check(d, g, r)
    return d - r * g + r


def chi_twist(d: int, g: int, r: int, t: int) -> int:
    """Euler characteristic of f^*T_{P^r}(t) for any integer twist t."""
    _check(d, g, r)
    return chi_tangent(d, g, r) + t * r * d


def aut_dim(r: int) -> int:
    return r * r + 2 * r


def hyperplane_moduli_dim(d: int, g: int, r: int) -> int:
    """Dimension r(d + 1 - g) of maps sending p_1 + ... + p_d into a fixed hyperplane."""
    _check(d, g, r)
    return r * (d + 1 - g)


@dataclass(frozen=True)
class FeasibilityReport:
    d: int
    g: int
    r: int
    n: int
    rho: int
    chi_tangent: int
    chi_twisted: int
    max_n: int
    dimension_slack: int
    twisted_slack: int | None
    hyperplane: bool
    feasible: bool
    failing_condition: Failing | None

    def to_dict(self) -> dict:
        out = asdict(self)
        out["failing_condition"] = self.failing_condition.value if self.failing_condition else None
        return out


def _report(d, g, r, n, hyperplane) -> FeasibilityReport:
    bn = rho(d, g, r)
    chi = chi_tangent(d, g, r)
    slack = chi - r * n
    twisted_slack = d - r * g - 1 if hyperplane else None
    if bn < 0:
        failing = Failing.RHO
    elif slack < 0:
        failing = Failing.DIMENSION
    elif hyperplane and twisted_slack < 0:
        failing = Failing.TWISTED
    else:
        failing = None
    return FeasibilityReport(
        d=d, g=g, r=r, n=n, rho=bn, chi_tangent=chi, chi_twisted=chi_twisted(d, g, r),
        max_n=chi // r, dimension_slack=slack, twisted_slack=twisted_slack,
        hyperplane=hyperplane, feasible=failing is None, failing_condition=failing,
    )


def feasibility_unconstrained(d: int, g: int, r: int, n: int = 0) -> FeasibilityReport:
    """Existence of a nondegenerate degree-d map from a general n-pointed genus-g curve
    through n general points of P^r."""
    _check(d, g, r, n)
    return _report(d, g, r, n, hyperplane=False)


def feasibility_hyperplane(d: int, g: int, r: int, n: int) -> FeasibilityReport:
    """As :func:`feasibility_unconstrained`, with the first d targets on a hyperplane."""
    _check(d, g, r, n)
    if n < d:
        raise InvalidInput(f"hyperplane variant needs n >= d, got n={n} < d={d}")
    return _report(d, g, r, n, hyperplane=True)


def twist_classification(d: int, g: int, r: int, k: int) -> TwistVerdict:
    """Whether f^*T_{P^r}(-k) satisfies interpolation for a general map.

    Outside rho >= 0 there is no general nondegenerate map to speak of, so the
    answer is ``OUT_OF_SCOPE``.
    """
    _check(d, g, r, k=k)
    if rho(d, g, r) < 0:
        return TwistVerdict.OUT_OF_SCOPE
    if k == 0:
        return TwistVerdict.SATISFIES
    if k == 1:
        return TwistVerdict.SATISFIES if d - r * g - 1 >= 0 else TwistVerdict.FAILS
    if k == 2:
        if (g, r) == (0, 1) or (d, g, r) == (2, 0, 2):
            return TwistVerdict.SATISFIES
        return TwistVerdict.FAILS
    return TwistVerdict.FAILS
