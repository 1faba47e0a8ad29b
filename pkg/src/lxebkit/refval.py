"""Reference LXEB values, anticoncentration scores, and related invariants.

Every model is available through the general two-copy pipeline (swap
table -> block-projector overlaps -> outcome average) and, where one
exists, through its closed form; the two routes agree exactly on the
rational path and to double precision on the floating path.  Exact
(Fraction) evaluation is used up to ``EXACT_N_LIMIT`` photons; beyond
that the log-gamma floating path is mandatory, since individual terms
contain factorial-sized factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lgamma, log

from . import schur, swapexp
from .numkit import factorial, log_pochhammer, pochhammer
from .states import ProductState

__all__ = [
    "RefReport",
    "EXACT_N_LIMIT",
    "outcome_count",
    "lxe_ref_general",
    "lxe_ref_bs",
    "lxe_ref_bs_lossy",
    "lxe_ref_sbs",
    "lxe_ref_gbs_uniform",
    "ac_score",
    "ac_bs",
    "ac_sbs",
    "ac_gbs",
    "ac_bs_bound",
    "ac_bs_envelope",
    "ac_sbs_bounds",
    "ac_gbs_bounds",
    "ac_asymptote",
    "hunter_jones_ratio",
    "certification_bound",
]

# Above this photon number the exact rational path is refused: closed-form
# terms carry factorial-sized integers and only the Thm-1 float grid needs
# the large-n regime.
EXACT_N_LIMIT = 40


def outcome_count(m: int, n: int) -> int:
    """|S_{m,n}|, the number of n-photon outcome patterns on m modes."""
    return comb(m + n - 1, n)


@dataclass(frozen=True)
class RefReport:
    """One reference value with its anticoncentration score.

    ``value_exact`` is populated on the rational path and always agrees
    with ``value_float`` to 1e-12 relative.  ``ac_score`` is
    |S_{m,n}| * value (times |S_{d,n}| more for the scattershot model).
    """

    model: str
    m: int
    n: int
    value_float: float
    ac_score: float
    method: str
    value_exact: Fraction | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value_exact is not None:
            approx = float(self.value_exact)
            if abs(approx - self.value_float) > 1e-12 * max(abs(approx), 1e-300):
                raise ValueError(
                    f"exact/float disagreement: {approx} vs {self.value_float}"
                )

    def as_dict(self) -> dict:
        out = {
            "model": self.model,
            "m": self.m,
            "n": self.n,
            **self.params,
            "value_exact": None if self.value_exact is None else str(self.value_exact),
            "value_float": self.value_float,
            "ac_score": self.ac_score,
            "method": self.method,
        }
        return out


def _ac_multiplier(model: str, m: int, n: int, params: dict) -> int:
    mult = outcome_count(m, n)
    if model == "sbs":
        mult *= outcome_count(params["d"], n)
    return mult


def _report(model, m, n, value, method, params=None) -> RefReport:
    params = dict(params or {})
    exact = value if isinstance(value, Fraction) else None
    vf = float(value)
    ac = _ac_multiplier(model, m, n, params) * vf
    return RefReport(model, m, n, vf, ac, method, exact, params)


def _assemble(swaps, m: int, n: int):
    """|S_{m,n}| sum_r Tr[P_2r rho^{x2}] Tr[P_2r D_{m,n}] / Tr P_2r.

    Exact when the swap table is exact; zero-dimension blocks (m = 1
    degeneracy) are skipped, their overlaps vanish identically.
    """
    values = swaps.values if hasattr(swaps, "values") else tuple(swaps)
    ctab = schur.c_table(n)
    total = Fraction(0)
    for r in range(n // 2 + 1):
        dim = schur.dim_irrep(m, n, 2 * r)
        if dim == 0:
            continue
        state_part = sum(cq * vq for cq, vq in zip(ctab[2 * r], values))
        total = total + state_part * schur.trace_P_uniform(m, n, r) / dim
    return outcome_count(m, n) * total


def lxe_ref_general(rho: ProductState, n: int, exact: bool = False) -> RefReport:
    """Reference value for an arbitrary mode-product input state.

    The exact path needs Fock-diagonal rational modes; the floating path
    works for any product state via the truncated-polynomial algorithm.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    m = rho.m
    if n == 0:
        value = Fraction(1) if exact else 1.0
        return _report("product", m, n, value, "general-pipeline")
    table = swapexp.swap_table_exact(rho, n) if exact else swapexp.swap_table(rho, n)
    value = _assemble(table, m, n)
    return _report("product", m, n, value, "general-pipeline")


def _require_exact_range(n: int, exact: bool):
    if exact and n > EXACT_N_LIMIT:
        raise ValueError(f"exact path is limited to n <= {EXACT_N_LIMIT}, got n={n}")


def _lxe_bs_exact(m: int, n: int) -> Fraction:
    total = Fraction(0)
    for r in range(n // 2 + 1):
        total += (
            Fraction(2 * n - 4 * r + 1, 2 * n - 2 * r + 1)
            * Fraction(comb(2 * r, r), 16**r)
            / (
                comb(2 * n - 2 * r, n - r)
                * pochhammer(Fraction(m, 2), r)
                * pochhammer(Fraction(m + 1, 2), n - r)
            )
        )
    return 2**n * factorial(n) * total


def _lxe_bs_float(m: int, n: int) -> float:
    prefix = n * log(2.0) + lgamma(n + 1)
    total = 0.0
    for r in range(n // 2 + 1):
        lg = (
            prefix
            + log(2 * n - 4 * r + 1)
            - log(2 * n - 2 * r + 1)
            + lgamma(2 * r + 1)
            - 2 * lgamma(r + 1)
            - 4 * r * log(2.0)
            - (lgamma(2 * n - 2 * r + 1) - 2 * lgamma(n - r + 1))
            - log_pochhammer(m / 2, r)
            - log_pochhammer((m + 1) / 2, n - r)
        )
        total += math.exp(lg)
    return total


def lxe_ref_bs(m: int, n: int, exact: bool = True) -> RefReport:
    """Closed-form reference value for collision-free Fock-state sampling."""
    if not (m >= n >= 1):
        raise ValueError(f"need m >= n >= 1, got m={m}, n={n}")
    _require_exact_range(n, exact)
    value = _lxe_bs_exact(m, n) if exact else _lxe_bs_float(m, n)
    return _report("bs", m, n, value, "closed-form")


def lxe_ref_bs_lossy(m: int, n: int, ell: int) -> RefReport:
    """Reference value of uniformly lossy Fock-state sampling, postselected
    on ell surviving photons; exact rationals.

    Assembled on the ell-particle two-copy space from the eta-independent
    exchange expectations 1/C(n,q) of the lossy input; reduces exactly to
    the lossless closed form at ell = n.
    """
    if not (0 <= ell <= n <= m):
        raise ValueError(f"need 0 <= ell <= n <= m, got m={m}, n={n}, ell={ell}")
    _require_exact_range(n, True)
    if ell == 0:
        return _report("bs-lossy", m, n, Fraction(1), "closed-form", {"ell": ell})
    swaps = tuple(Fraction(1, comb(n, q)) for q in range(ell + 1))
    value = _assemble(swaps, m, ell)
    return _report("bs-lossy", m, n, value, "closed-form", {"ell": ell})


def _lxe_sbs_closed(m: int, n: int, d: int) -> Fraction:
    total = Fraction(0)
    for r in range(n // 2 + 1):
        total += (
            Fraction(2 * n - 4 * r + 1, 2 * n - 2 * r + 1)
            * Fraction(comb(2 * r, r), 16**r)
            / comb(2 * n - 2 * r, n - r)
            * pochhammer(Fraction(d, 2), n - r)
            * pochhammer(Fraction(d - 1, 2), r)
            / (pochhammer(Fraction(m, 2), r) * pochhammer(Fraction(m + 1, 2), n - r))
        )
    return Fraction(2 ** (2 * n), comb(d + n - 1, n) ** 2) * total


def lxe_sbs_assembly(m: int, n: int, d: int) -> Fraction:
    """Scattershot reference via the two-outcome-average route:
    (|S_{m,n}|/|S_{d,n}|) sum_r Tr[P_2r D_{m,n}] Tr[P_2r D_{d,n}] / Tr P_2r."""
    total = Fraction(0)
    for r in range(n // 2 + 1):
        dim = schur.dim_irrep(m, n, 2 * r)
        if dim == 0:
            continue
        total += (
            schur.trace_P_uniform(m, n, r) * schur.trace_P_uniform(d, n, r) / dim
        )
    return Fraction(outcome_count(m, n), outcome_count(d, n)) * total


def lxe_ref_sbs(m: int, n: int, d: int) -> RefReport:
    """Closed-form scattershot reference value (d heralded sources), exact."""
    if not (1 <= d <= m) or n < 1:
        raise ValueError(f"need 1 <= d <= m and n >= 1, got m={m}, n={n}, d={d}")
    _require_exact_range(n, True)
    value = _lxe_sbs_closed(m, n, d)
    return _report("sbs", m, n, value, "closed-form", {"d": d})


def _lxe_gbs_closed(m: int, N: int, d: int) -> Fraction:
    total = Fraction(0)
    for j in range(N + 1):
        total += (
            Fraction(4 * N - 4 * j + 1, 4 * N - 2 * j + 1)
            * comb(2 * j, j)
            * comb(2 * N - 2 * j, N - j) ** 2
            * pochhammer(Fraction(d - 1, 2), j)
            * pochhammer(Fraction(d, 2) + N, N - j)
            / (
                comb(4 * N - 2 * j, 2 * N - j)
                * pochhammer(Fraction(d, 2), N)
                * pochhammer(Fraction(m, 2), j)
                * pochhammer(Fraction(m + 1, 2), 2 * N - j)
            )
        )
    return factorial(N) ** 2 * total


def gbs_projector_overlap(N: int, d: int, j: int) -> Fraction:
    """Tr[P_{2j} rho^{x2}] for the normalized 2N-photon restriction of d
    uniformly squeezed modes (r-independent), exact."""
    return (
        Fraction(2 ** (2 * j + 1) * factorial(N) ** 2, factorial(j))
        * comb(2 * N - 2 * j, N - j) ** 2
        * Fraction(factorial(2 * N - j + 1) * (4 * N - 4 * j + 1), factorial(4 * N - 2 * j + 2))
        * pochhammer(Fraction(d - 1, 2), j)
        * pochhammer(Fraction(d, 2) + N, N - j)
        / pochhammer(Fraction(d, 2), N)
    )


def lxe_ref_gbs_uniform(m: int, N: int, d: int) -> RefReport:
    """Closed-form reference for d uniformly squeezed modes at n = 2N photons."""
    if not (1 <= d <= m) or N < 0:
        raise ValueError(f"need 1 <= d <= m and N >= 0, got m={m}, N={N}, d={d}")
    n = 2 * N
    _require_exact_range(n, True)
    value = Fraction(1) if N == 0 else _lxe_gbs_closed(m, N, d)
    return _report("gbs-uniform", m, n, value, "closed-form", {"d": d, "pairs": N})


def ac_score(report: RefReport) -> float:
    """Anticoncentration score of a reference report."""
    return report.ac_score


def ac_bs(m: int, n: int, exact: bool | None = None) -> Fraction | float:
    """AC(m, n) = |S_{m,n}| * reference value, collision-free input.

    Exact Fractions for n <= EXACT_N_LIMIT unless ``exact=False``; the
    log-gamma path otherwise.
    """
    if exact is None:
        exact = n <= EXACT_N_LIMIT
    report = lxe_ref_bs(m, n, exact=exact)
    if exact:
        return outcome_count(m, n) * report.value_exact
    return report.ac_score


def ac_sbs(m: int, n: int, d: int) -> Fraction:
    """AC_SBS(m, n, d) = |S_{m,n}| |S_{d,n}| * scattershot reference."""
    report = lxe_ref_sbs(m, n, d)
    return outcome_count(m, n) * outcome_count(d, n) * report.value_exact


def ac_gbs(m: int, n: int, d: int) -> Fraction:
    """AC_GBS(m, n, d) = |S_{m,n}| * squeezed-input reference (n = 2N even).

    Defined through the general route; the d = 1 closed form
    n! C(n+m-1, n) / ((m+1)/2)_n is reported only as a diagnostic
    (see ``ac_gbs_single_source_diag``).
    """
    if n % 2:
        raise ValueError(f"squeezed-vacuum inputs populate even sectors only, got n={n}")
    report = lxe_ref_gbs_uniform(m, n // 2, d)
    return outcome_count(m, n) * report.value_exact


def ac_gbs_single_source_diag(m: int, n: int) -> Fraction:
    """Closed-form diagnostic for the single-squeezed-source score."""
    return factorial(n) * comb(n + m - 1, n) / pochhammer(Fraction(m + 1, 2), n)


def ac_bs_bound(m: int, n: int) -> float:
    """Proven uniform bound 19.1 (m/n + 1) on AC(m, n)."""
    return 19.1 * (m / n + 1)


def ac_bs_envelope(m: int, n: int) -> float:
    """Empirical envelope 1 + 1.285 m/n (+0.15 slack applied by callers)."""
    return 1.0 + 1.285 * (m / n)


def ac_sbs_bounds(m: int, n: int) -> tuple[float, float]:
    """Explicit lower/upper brackets for AC_SBS(m, n, m), valid for
    m >= 3, n >= 12."""
    if m < 3 or n < 12:
        raise ValueError(f"bracket valid for m >= 3, n >= 12, got m={m}, n={n}")
    lower = math.sqrt(2) * n * (m - 1) / (24 * math.sqrt((3 * m + 2 * n) * (2 * m + 3 * n)))
    upper = 3 * (m - 1) / 4 * math.sqrt(2 * math.pi / (m - 2)) + 3 * (m - 1) * math.sqrt(n / m)
    return lower, upper


def ac_gbs_bounds(m: int, n: int) -> tuple[float, float]:
    """Explicit lower/upper brackets for AC_GBS(m, n, m), valid for m >= 2."""
    if m < 2:
        raise ValueError(f"bracket valid for m >= 2, got m={m}")
    lower = math.sqrt(math.pi * n / 2) * (m - 1) / math.sqrt(m * (m + n - 1))
    upper = math.sqrt(math.pi * (n + 2) * (m + n) / (2 * (m - 1)))
    return lower, upper


def ac_asymptote(alpha: float) -> float:
    """Limit of AC(m_n, n) when m_n / n -> alpha."""
    if alpha < 0:
        raise ValueError(f"need alpha >= 0, got {alpha}")
    return 1.0 + alpha


def hunter_jones_ratio(n: int) -> Fraction:
    """A_n = E|per(U)|^4 / (E|per(U)|^2)^2 for U Haar of size n, exact.

    Assembled as |S_{n,n}|^2 sum_k Tr[P_k |n0><n0|^{x2}]^2 / Tr P_k at
    m = n (odd blocks vanish on the pure two-copy state); the limit is 2.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    total = Fraction(0)
    for r in range(n // 2 + 1):
        dim = schur.dim_irrep(n, n, 2 * r)
        if dim == 0:
            continue
        overlap = schur.trace_P_collisionfree(n, r)
        total += overlap * overlap / dim
    return outcome_count(n, n) ** 2 * total


def certification_bound(
    outcomes: float, ac: float, epsilon: float, delta: float
) -> tuple[float, bool]:
    """Sample-complexity lower bound for an epsilon-certification test.

    Returns (bound, bracket_ok) where the bound is in multiples of the
    universal constant c2 (left unspecified by the theory):

        c2 delta^{1/4} |E|^{1/4} / (eps^2 sqrt(AC))
           * (1 - 2 eps - AC / sqrt(delta |E|))^{3/2}.

    When the bracket is nonpositive the bound degenerates and (0, False)
    is returned.
    """
    if outcomes <= 0 or ac <= 0:
        raise ValueError("outcome count and AC score must be positive")
    if not 0 < epsilon < 0.5:
        raise ValueError(f"need 0 < epsilon < 1/2, got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"need 0 < delta < 1, got {delta}")
    bracket = 1 - 2 * epsilon - ac / math.sqrt(delta * outcomes)
    if bracket <= 0:
        return 0.0, False
    bound = (
        (delta * outcomes) ** 0.25 / (epsilon**2 * math.sqrt(ac)) * bracket**1.5
    )
    return bound, True
