"""Exact and floating combinatorial primitives.

Exact arithmetic is carried by :class:`fractions.Fraction` (arbitrary
precision, always in lowest terms, positive denominator), which is the
backbone for every closed-form value in this package.  Half-integer
arguments such as (m+1)/2 are ordinary Fractions with denominator 1 or 2;
:func:`half_int` builds and validates them.

The floating path works in log space (sums of ``log_gamma``) so that
factorial-sized terms never overflow a double.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational

__all__ = [
    "pochhammer",
    "binomial",
    "multinomial",
    "factorial",
    "half_int",
    "log_gamma",
    "log_factorial",
    "log_binomial",
    "log_pochhammer",
    "IdentityCheck",
    "identity_oracles",
]


def factorial(n: int) -> int:
    """n! as an exact integer."""
    return math.factorial(n)


def half_int(twice_value: int) -> Fraction:
    """The half-integer ``twice_value / 2`` as an exact Fraction.

    Round-trips with denominator 1 or 2 by construction.
    """
    return Fraction(int(twice_value), 2)


def pochhammer(a, b: int) -> Fraction:
    """Rising factorial (a)_b = a (a+1) ... (a+b-1), exact.

    Returns 1 for b = 0.  ``a`` may be any rational (int, Fraction).
    """
    if b < 0:
        raise ValueError(f"pochhammer needs b >= 0, got {b}")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(b):
        out *= a + i
    return out


def binomial(n, k: int) -> Fraction:
    """Generalized binomial coefficient C(n, k), exact.

    Conventions: C(n, k) = 0 for k < 0, and for integer n >= 0 also when
    k > n.  For negative or rational upper argument the Pochhammer form
    C(n, k) = (n-k+1)_k / k! is used, so e.g. C(-1, 0) = 1.
    """
    if k < 0:
        return Fraction(0)
    if isinstance(n, int):
        return Fraction(comb(n, k)) if n >= 0 else pochhammer(n - k + 1, k) / factorial(k)
    return pochhammer(Fraction(n) - k + 1, k) / factorial(k)


def multinomial(counts) -> int:
    """Multinomial coefficient (sum counts)! / prod counts!."""
    total = 0
    out = 1
    for c in counts:
        total += c
        out *= comb(total, c)
    return out


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Relative error <= 1e-13 for x >= 1 (delegates to ``math.lgamma``).
    """
    if x <= 0:
        raise ValueError(f"log_gamma needs x > 0, got {x}")
    return math.lgamma(x)


def log_factorial(n: int) -> float:
    return math.lgamma(n + 1)


def log_binomial(n: float, k: float) -> float:
    """log C(n, k) for real n >= k >= 0."""
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_pochhammer(a: float, b: float) -> float:
    """log (a)_b = lgamma(a+b) - lgamma(a) for a > 0, a+b > 0."""
    return math.lgamma(a + b) - math.lgamma(a)


@dataclass
class IdentityCheck:
    """Outcome of one identity verification."""

    name: str
    passed: bool
    cases: int
    skipped: int = 0
    first_counterexample: str | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "skipped": self.skipped,
            "first_counterexample": self.first_counterexample,
        }


def _chu_vandermonde_sides(a: Fraction, b: Fraction, n: int):
    lhs = Fraction(0)
    for j in range(n + 1):
        den = pochhammer(a, j)
        if den == 0:
            return None
        lhs += pochhammer(Fraction(-n), j) * pochhammer(b, j) / (den * factorial(j))
    den = pochhammer(a, n)
    if den == 0:
        return None
    rhs = pochhammer(a - b, n) / den
    return lhs, rhs


def _pfaff_saalschutz_sides(a: Fraction, b: Fraction, c: Fraction, n: int):
    lhs = Fraction(0)
    for j in range(n + 1):
        den = pochhammer(c, j) * pochhammer(1 + a + b - c - n, j)
        if den == 0:
            return None
        lhs += (
            pochhammer(Fraction(-n), j)
            * pochhammer(a, j)
            * pochhammer(b, j)
            / (den * factorial(j))
        )
    den = pochhammer(c, n) * pochhammer(c - a - b, n)
    if den == 0:
        return None
    rhs = pochhammer(c - a, n) * pochhammer(c - b, n) / den
    return lhs, rhs


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-12, 12), rng.choice([1, 2, 3, 4]))


def identity_oracles(n_max: int, trials: int = 25, seed: int = 2024) -> list[IdentityCheck]:
    """Verify the combinatorial identities backing the closed forms.

    The two terminating hypergeometric summations (Chu-Vandermonde and
    Pfaff-Saalschutz) are checked in exact rationals for randomized
    rational parameters and every order N <= n_max; instances whose
    denominator Pochhammer vanishes are skipped and counted.  The Gamma
    duplication formula is checked numerically at sampled points.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rng = random.Random(seed)
    checks = []

    cases = skipped = 0
    counterexample = None
    for _ in range(trials):
        a, b = _random_rational(rng), _random_rational(rng)
        for n in range(n_max + 1):
            sides = _chu_vandermonde_sides(a, b, n)
            if sides is None:
                skipped += 1
                continue
            cases += 1
            if sides[0] != sides[1] and counterexample is None:
                counterexample = f"a={a}, b={b}, N={n}: {sides[0]} != {sides[1]}"
    checks.append(
        IdentityCheck("chu-vandermonde", counterexample is None, cases, skipped, counterexample)
    )

    cases = skipped = 0
    counterexample = None
    for _ in range(trials):
        a, b, c = (_random_rational(rng) for _ in range(3))
        for n in range(n_max + 1):
            sides = _pfaff_saalschutz_sides(a, b, c, n)
            if sides is None:
                skipped += 1
                continue
            cases += 1
            if sides[0] != sides[1] and counterexample is None:
                counterexample = f"A={a}, B={b}, C={c}, N={n}: {sides[0]} != {sides[1]}"
    checks.append(
        IdentityCheck("pfaff-saalschutz", counterexample is None, cases, skipped, counterexample)
    )

    cases = 0
    counterexample = None
    for _ in range(trials):
        z = rng.uniform(0.25, 40.0)
        cases += 1
        lhs = log_gamma(z) + log_gamma(z + 0.5)
        rhs = (1 - 2 * z) * math.log(2) + 0.5 * math.log(math.pi) + log_gamma(2 * z)
        if abs(lhs - rhs) > 1e-12 * max(1.0, abs(rhs)) and counterexample is None:
            counterexample = f"z={z}: {lhs} vs {rhs}"
    checks.append(IdentityCheck("legendre-duplication", counterexample is None, cases, 0, counterexample))

    return checks


def is_exact(x) -> bool:
    """True when x participates in exact (rational) arithmetic."""
    return isinstance(x, Rational)
