"""Projector machinery on two copies of the bosonic n-particle space.

The two-copy space splits into two-row irreducible blocks indexed by
k = 0..n.  Everything here is built from the exact coefficients c_{k,q}
that expand the block projectors P_k over the particle-exchange (swap)
operators S_q, plus closed-form traces of those operators against the
uniform outcome average D_{m,n} and against Fock states.  A dense matrix
oracle constructs S_q and P_k explicitly on small Fock spaces so every
closed form can be checked against brute force.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod

import numpy as np

from .errors import FeasibilityError
from .numkit import factorial, pochhammer

__all__ = [
    "OccPattern",
    "patterns",
    "pattern_count",
    "c_coeff",
    "c_table",
    "dim_irrep",
    "trace_S_uniform",
    "trace_P_uniform",
    "trace_S_fock",
    "trace_P_collisionfree",
    "TwoCopyOperator",
    "build_swap_matrix",
    "build_projector_matrix",
    "second_moment_outcome",
]

OccPattern = tuple[int, ...]

# Dense two-copy matrices live on |S_{m,n}|^2-dimensional spaces; keep the
# brute-force oracle at desk scale.
MATRIX_GUARD = 10**4


def pattern_count(m: int, n: int) -> int:
    """|S_{m,n}| = C(m+n-1, n), the number of occupation patterns."""
    return comb(m + n - 1, n)


@functools.lru_cache(maxsize=None)
def patterns(m: int, n: int) -> tuple[OccPattern, ...]:
    """All occupation vectors of n particles in m modes, colexicographic."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return ((n,),)
    out = []
    for last in range(n + 1):
        out.extend(head + (last,) for head in patterns(m - 1, n - last))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def c_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """The full (k, q) table of projector-expansion coefficients, exact.

    c_{k,q} expands P_k = sum_q c_{k,q} S_q on two copies of the
    n-particle symmetric space.  Computed once per n and cached
    immutably.
    """
    table = []
    for k in range(n + 1):
        pre = Fraction(2 * n - 2 * k + 1, 2 * n - k + 1) * comb(n, k)
        row = []
        for q in range(n + 1):
            acc = Fraction(0)
            for l in range(max(0, k - q), min(k, n - q) + 1):
                acc += Fraction(
                    (-1) ** (k - l) * comb(k, l) * comb(n - k, l + q - k),
                    comb(2 * n - k, n - l),
                )
            row.append(pre * comb(n, q) * acc)
        table.append(tuple(row))
    return tuple(table)


def c_coeff(n: int, k: int, q: int) -> Fraction:
    """Coefficient of S_q in the expansion of the block projector P_k."""
    if not (0 <= k <= n and 0 <= q <= n):
        raise ValueError(f"need 0 <= k, q <= n, got n={n}, k={k}, q={q}")
    return c_table(n)[k][q]


def dim_irrep(m: int, n: int, k: int) -> Fraction:
    """Tr P_k: dimension of the two-row block (2n-k, k) over m modes.

    The m = 1 space is one-dimensional, so only the k = 0 block survives
    (degenerate convention; the general formula is ill-defined there).
    """
    if m < 1 or not 0 <= k <= n:
        raise ValueError(f"need m >= 1 and 0 <= k <= n, got m={m}, n={n}, k={k}")
    if m == 1:
        return Fraction(1 if k == 0 else 0)
    return Fraction(2 * n - 2 * k + 1, 2 * n - k + 1) * comb(2 * n + m - k - 1, m - 1) * comb(
        m - 2 + k, m - 2
    )


def trace_S_uniform(m: int, n: int, q: int) -> Fraction:
    """Tr[S_q D_{m,n}]: mean purity of the q-particle reduction of a
    uniformly random n-particle Fock state on m modes, exact."""
    if m < 1 or not 0 <= q <= n:
        raise ValueError(f"need m >= 1 and 0 <= q <= n, got m={m}, n={n}, q={q}")
    a = Fraction(m + 1, 2)
    return pochhammer(a, n) / (comb(n, q) * pochhammer(a, q) * pochhammer(a, n - q))


def trace_P_uniform(m: int, n: int, r: int) -> Fraction:
    """Tr[P_{2r} D_{m,n}], exact."""
    if m < 1 or not 0 <= 2 * r <= n:
        raise ValueError(f"need m >= 1 and 0 <= 2r <= n, got m={m}, n={n}, r={r}")
    a = Fraction(m + 1, 2)
    return (
        Fraction(2 * n - 4 * r + 1, 2 * n - 2 * r + 1)
        * comb(n - r, r)
        * pochhammer(m + n, n - 2 * r)
        * pochhammer(Fraction(m - 1, 2), r)
        / (comb(2 * n - 2 * r, n) * pochhammer(a, n - r))
    )


def trace_S_fock(pattern, q: int) -> Fraction:
    """Tr[S_q |n><n|^{x2}]: purity of the q-particle reduction of the
    Fock state with the given occupation pattern, exact enumeration."""
    pattern = tuple(int(c) for c in pattern)
    n = sum(pattern)
    if not 0 <= q <= n:
        raise ValueError(f"need 0 <= q <= {n}, got {q}")
    total = 0

    def rec(i: int, left: int, weight: int):
        nonlocal total
        if i == len(pattern):
            if left == 0:
                total += weight
            return
        if left > sum(pattern[i:]):
            return
        for qi in range(min(left, pattern[i]) + 1):
            rec(i + 1, left - qi, weight * comb(pattern[i], qi) ** 2)

    rec(0, q, 1)
    return Fraction(total, comb(n, q) ** 2)


def trace_P_collisionfree(n: int, r: int) -> Fraction:
    """Tr[P_{2r} |n0><n0|^{x2}] for the collision-free Fock input, exact."""
    if not 0 <= 2 * r <= n:
        raise ValueError(f"need 0 <= 2r <= n, got n={n}, r={r}")
    return (
        Fraction(2 ** (n - 2 * r))
        * Fraction(2 * n - 4 * r + 1, 2 * n - 2 * r + 1)
        * Fraction(comb(n, r), comb(2 * n - 2 * r, n - r))
    )


@dataclass(frozen=True)
class TwoCopyOperator:
    """Dense operator on two copies of the n-particle space over m modes.

    ``entries[i*dim + j, k*dim + l]`` is the matrix element between
    |basis[k]> x |basis[l]> and |basis[i]> x |basis[j]> where ``basis``
    enumerates S_{m,n} colexicographically.
    """

    m: int
    n: int
    basis: tuple[OccPattern, ...]
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.basis)

    def expectation(self, rho: np.ndarray, sigma: np.ndarray | None = None) -> complex:
        """Tr[A (rho x sigma)] for single-copy matrices rho, sigma."""
        if sigma is None:
            sigma = rho
        two_copy = np.kron(rho, sigma)
        return complex(np.tensordot(self.entries, two_copy.T, axes=2))

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


def _check_matrix_guard(m: int, n: int) -> None:
    dim = pattern_count(m, n)
    if dim * dim > MATRIX_GUARD:
        raise FeasibilityError(
            f"two-copy dimension {dim}^2 exceeds the matrix-oracle guard {MATRIX_GUARD}"
        )


def _subpatterns(pattern: OccPattern, q: int):
    """All occupation vectors v <= pattern (elementwise) with |v| = q."""
    if not pattern:
        if q == 0:
            yield ()
        return
    head, rest = pattern[0], pattern[1:]
    for v0 in range(min(head, q) + 1):
        for tail in _subpatterns(rest, q - v0):
            yield (v0,) + tail


def build_swap_matrix(m: int, n: int, q: int) -> TwoCopyOperator:
    """Dense matrix of the q-particle exchange operator S_q.

    Column (|n>, |mm>) maps to rows (|n - qv + rv>, |mm - rv + qv>) with
    weight sqrt[(n-qv+rv)! (mm-rv+qv)! / (n! mm!)] C(n,qv) C(mm,rv) / C(n,q)^2,
    summed over all qv <= n, rv <= mm with |qv| = |rv| = q.
    """
    if not 0 <= q <= n:
        raise ValueError(f"need 0 <= q <= n, got q={q}, n={n}")
    _check_matrix_guard(m, n)
    basis = patterns(m, n)
    index = {p: i for i, p in enumerate(basis)}
    dim = len(basis)
    mat = np.zeros((dim * dim, dim * dim), dtype=complex)
    norm = comb(n, q) ** 2
    fact = [float(factorial(c)) for c in range(n + 1)]

    for col_a, pa in enumerate(basis):
        wa = prod(fact[c] for c in pa)
        for col_b, pb in enumerate(basis):
            wb = prod(fact[c] for c in pb)
            col = col_a * dim + col_b
            for qv in _subpatterns(pa, q):
                cq = prod(comb(na, qa) for na, qa in zip(pa, qv))
                for rv in _subpatterns(pb, q):
                    cr = prod(comb(nb, rb) for nb, rb in zip(pb, rv))
                    ra = tuple(na - qa + rb for na, qa, rb in zip(pa, qv, rv))
                    rb_ = tuple(nb - rb + qa for nb, rb, qa in zip(pb, rv, qv))
                    wra = prod(fact[c] for c in ra)
                    wrb = prod(fact[c] for c in rb_)
                    amp = (wra * wrb / (wa * wb)) ** 0.5 * cq * cr / norm
                    mat[index[ra] * dim + index[rb_], col] += amp
    return TwoCopyOperator(m, n, basis, mat)


def build_projector_matrix(m: int, n: int, k: int) -> TwoCopyOperator:
    """Dense matrix of the block projector P_k = sum_q c_{k,q} S_q."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    _check_matrix_guard(m, n)
    coeffs = c_table(n)[k]
    acc = None
    basis = None
    for q in range(n + 1):
        sq = build_swap_matrix(m, n, q)
        basis = sq.basis
        term = float(coeffs[q]) * sq.entries
        acc = term if acc is None else acc + term
    return TwoCopyOperator(m, n, basis, acc)


def _swap_values(swaps, n: int):
    values = getattr(swaps, "values", swaps)
    swaps_n = getattr(swaps, "n", len(values) - 1)
    if swaps_n != n or len(values) != n + 1:
        raise ValueError(f"swap table covers n={swaps_n}, outcome has n={n}")
    return values


def second_moment_outcome(swaps, m: int, outcome) -> Fraction | float:
    """Haar second moment E_U[p_{rho,U}(outcome)^2] of one outcome
    probability, assembled from a table of swap expectations of rho.

    Exact (Fraction) when the table is exact, float otherwise.
    """
    outcome = tuple(int(c) for c in outcome)
    n = sum(outcome)
    values = _swap_values(swaps, n)
    ctab = c_table(n)
    fock = [trace_S_fock(outcome, q) for q in range(n + 1)]
    total = Fraction(0)
    for r in range(n // 2 + 1):
        dim = dim_irrep(m, n, 2 * r)
        if dim == 0:
            continue
        row = ctab[2 * r]
        state_part = sum(cq * vq for cq, vq in zip(row, values))
        outcome_part = sum(cq * fq for cq, fq in zip(row, fock))
        total = total + state_part * outcome_part / dim
    return total
