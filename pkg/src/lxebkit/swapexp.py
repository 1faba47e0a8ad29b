"""Swap expectations for product states via truncated polynomial arithmetic.

The expectation of the q-particle exchange operator on two copies of the
normalized n-particle component of a mode-product state reduces to one
coefficient of a product of per-mode polynomials: a 4-variable polynomial
K(t, u, v, w) per mode with coefficients

    K[j, k, l, mu] = L(j, l, mu) L(k, mu, l),
    L(x, y, z)     = <x+y| sigma |x+z> sqrt(C(x+y, x) C(x+z, x)),

multiplied across modes in the quotient ring that discards every monomial
with t- or u-degree above n-q or v-/w-degree above q; the answer is the
coefficient of t^{n-q} u^{n-q} v^q w^q divided by C(n,q)^2 and the squared
n-sector norm.  For Fock-diagonal states with rational entries the square
roots cancel, v and w only ever appear as (vw)^l, and the whole pipeline
collapses to exact rational arithmetic in three variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .states import ModeState, ProductState

__all__ = [
    "TruncPoly",
    "SwapTable",
    "ZeroNormError",
    "poly_mul",
    "poly_pow",
    "product_coefficient",
    "n_particle_norm",
    "n_particle_norm_exact",
    "swap_expectation",
    "swap_expectation_exact",
    "swap_table",
    "swap_table_exact",
    "renyi2",
    "avg_purity_volume_exponent",
]

ZERO_NORM_FLOOR = 1e-300


class ZeroNormError(ValueError):
    """The requested particle sector carries no weight."""


@dataclass(frozen=True)
class TruncPoly:
    """Dense multivariate polynomial truncated at per-variable degree caps.

    ``coeffs[e1, ..., ek]`` is the coefficient of x1^e1 ... xk^ek; the
    array shape is ``tuple(b + 1 for b in bounds)``.  Multiplication
    discards monomials exceeding any bound.
    """

    bounds: tuple[int, ...]
    coeffs: np.ndarray

    def __post_init__(self):
        bounds = tuple(int(b) for b in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        shape = tuple(b + 1 for b in bounds)
        if self.coeffs.shape != shape:
            raise ValueError(f"coefficient array must have shape {shape}")

    @classmethod
    def zeros(cls, bounds, exact: bool = False) -> "TruncPoly":
        shape = tuple(b + 1 for b in bounds)
        if exact:
            coeffs = np.empty(shape, dtype=object)
            coeffs[...] = Fraction(0)
        else:
            coeffs = np.zeros(shape, dtype=complex)
        return cls(tuple(bounds), coeffs)

    @classmethod
    def one(cls, bounds, exact: bool = False) -> "TruncPoly":
        poly = cls.zeros(bounds, exact)
        poly.coeffs[(0,) * len(poly.bounds)] = Fraction(1) if exact else 1.0
        return poly

    @property
    def is_exact(self) -> bool:
        return self.coeffs.dtype == object

    def coefficient(self, exponents):
        exponents = tuple(int(e) for e in exponents)
        if any(not 0 <= e <= b for e, b in zip(exponents, self.bounds)):
            raise ValueError(f"exponents {exponents} outside bounds {self.bounds}")
        return self.coeffs[exponents]


def _mul_naive(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    out = TruncPoly.zeros(a.bounds, exact=a.is_exact)
    for idx_b in np.ndindex(b.coeffs.shape):
        cb = b.coeffs[idx_b]
        if not cb:
            continue
        window = tuple(
            slice(0, bound + 1 - e) for bound, e in zip(a.bounds, idx_b)
        )
        target = tuple(
            slice(e, bound + 1) for bound, e in zip(a.bounds, idx_b)
        )
        out.coeffs[target] += a.coeffs[window] * cb
    return out


def _mul_fft(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    full = tuple(2 * bound + 1 for bound in a.bounds)
    axes = tuple(range(len(full)))
    fa = np.fft.fftn(a.coeffs, s=full, axes=axes)
    fb = np.fft.fftn(b.coeffs, s=full, axes=axes)
    conv = np.fft.ifftn(fa * fb, axes=axes)
    window = tuple(slice(0, bound + 1) for bound in a.bounds)
    return TruncPoly(a.bounds, np.ascontiguousarray(conv[window]))


def poly_mul(a: TruncPoly, b: TruncPoly) -> TruncPoly:
    """Truncated product of two polynomials with identical bounds.

    Floating polynomials go through an FFT convolution; exact (Fraction)
    polynomials use the naive sliding product.
    """
    if a.bounds != b.bounds:
        raise ValueError(f"bounds mismatch: {a.bounds} vs {b.bounds}")
    if a.is_exact != b.is_exact:
        raise ValueError("cannot mix exact and floating polynomials")
    if a.is_exact or a.coeffs.size <= 64:
        return _mul_naive(a, b)
    return _mul_fft(a, b)


def poly_pow(base: TruncPoly, exponent: int) -> TruncPoly:
    """base**exponent in the truncated ring by square-and-multiply."""
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    result = TruncPoly.one(base.bounds, exact=base.is_exact)
    acc = base
    e = exponent
    while e > 0:
        if e & 1:
            result = poly_mul(result, acc)
        e >>= 1
        if e:
            acc = poly_mul(acc, acc)
    return result


def product_coefficient(polys, target) -> complex | Fraction:
    """Coefficient of x^target in the truncated product of the factors.

    When all factors are the same object the product is formed by binary
    exponentiation (log-many ring multiplications).
    """
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one factor")
    first = polys[0]
    if all(p is first for p in polys[1:]):
        return poly_pow(first, len(polys)).coefficient(target)
    acc = first
    for p in polys[1:]:
        acc = poly_mul(acc, p)
    return acc.coefficient(target)


@dataclass(frozen=True)
class SwapTable:
    """Exchange-operator expectations Tr[S_q rho_(n)^{x2}] for q = 0..n."""

    n: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.n + 1:
            raise ValueError(f"need {self.n + 1} values, got {len(self.values)}")
        v0 = self.values[0]
        if abs(float(v0) - 1.0) > 1e-10:
            raise ValueError(f"values[0] must be 1 (normalized restriction), got {v0}")
        for q, v in enumerate(self.values):
            fv = float(v)
            if not -1e-10 <= fv <= 1 + 1e-10:
                raise ValueError(f"values[{q}]={fv} outside [0, 1]")

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)


def _diag_poly_1d(mode: ModeState, n: int):
    return [complex(mode.elements[k, k]).real for k in range(n + 1)]


def n_particle_norm(rho: ProductState, n: int) -> float:
    """Tr[rho|_n]: weight of the n-particle sector of a product state."""
    if rho.cutoff < n:
        raise ValueError(f"cutoff {rho.cutoff} < requested sector {n}")
    acc = np.zeros(n + 1)
    acc[0] = 1.0
    for mode in rho.modes:
        diag = _diag_poly_1d(mode, n)
        acc = np.convolve(acc, diag)[: n + 1]
    return float(acc[n])


def n_particle_norm_exact(rho: ProductState, n: int) -> Fraction:
    """Exact n-sector weight; requires every mode to carry an exact diagonal."""
    if rho.cutoff < n:
        raise ValueError(f"cutoff {rho.cutoff} < requested sector {n}")
    acc = [Fraction(0)] * (n + 1)
    acc[0] = Fraction(1)
    for mode in rho.modes:
        if mode.exact_diagonal is None:
            raise ValueError("exact norm needs Fock-diagonal rational modes")
        diag = mode.exact_diagonal
        new = [Fraction(0)] * (n + 1)
        for i, a in enumerate(acc):
            if a == 0:
                continue
            for j in range(min(n - i, mode.cutoff) + 1):
                if diag[j]:
                    new[i + j] += a * diag[j]
        acc = new
    return acc[n]


def _mode_poly(mode: ModeState, n: int, q: int) -> TruncPoly:
    """The 4-variable K polynomial of one mode, floating path."""
    nq = n - q
    el = mode.elements
    nc = mode.cutoff
    L = np.zeros((nq + 1, q + 1, q + 1), dtype=complex)
    for x in range(nq + 1):
        for y in range(q + 1):
            if x + y > nc:
                continue
            for z in range(q + 1):
                if x + z > nc:
                    continue
                L[x, y, z] = el[x + y, x + z] * math.sqrt(comb(x + y, x) * comb(x + z, x))
    coeffs = np.einsum("jlm,kml->jklm", L, L)
    return TruncPoly((nq, nq, q, q), coeffs)


def swap_expectation(rho: ProductState, n: int, q: int, norm: float | None = None) -> float:
    """Tr[S_q rho_(n)^{x2}] for the normalized n-particle restriction."""
    if not 0 <= q <= n:
        raise ValueError(f"need 0 <= q <= n, got q={q}, n={n}")
    if norm is None:
        norm = n_particle_norm(rho, n)
    if norm < ZERO_NORM_FLOOR:
        raise ZeroNormError(f"n={n} sector unpopulated (norm={norm})")
    cache: dict[int, TruncPoly] = {}
    polys = []
    for mode in rho.modes:
        if id(mode) not in cache:
            cache[id(mode)] = _mode_poly(mode, n, q)
        polys.append(cache[id(mode)])
    coeff = product_coefficient(polys, (n - q, n - q, q, q))
    return float(coeff.real) / (comb(n, q) ** 2 * norm**2)


def _mode_poly_exact(mode: ModeState, n: int, q: int) -> TruncPoly:
    """Collapsed 3-variable (t, u, vw) polynomial for exact diagonal modes."""
    nq = n - q
    diag = mode.exact_diagonal
    nc = mode.cutoff
    poly = TruncPoly.zeros((nq, nq, q), exact=True)
    for l in range(q + 1):
        row = [
            diag[x + l] * comb(x + l, x) if x + l <= nc else Fraction(0)
            for x in range(nq + 1)
        ]
        for j, rj in enumerate(row):
            if rj == 0:
                continue
            for k, rk in enumerate(row):
                if rk:
                    poly.coeffs[j, k, l] += rj * rk
    return poly


def swap_expectation_exact(
    rho: ProductState, n: int, q: int, norm: Fraction | None = None
) -> Fraction:
    """Exact Tr[S_q rho_(n)^{x2}] for Fock-diagonal rational product states.

    Square roots cancel only for diagonal states, so this path refuses
    anything else.
    """
    if not 0 <= q <= n:
        raise ValueError(f"need 0 <= q <= n, got q={q}, n={n}")
    if not rho.is_exact:
        raise ValueError("exact swap expectations need Fock-diagonal rational modes")
    if norm is None:
        norm = n_particle_norm_exact(rho, n)
    if norm == 0:
        raise ZeroNormError(f"n={n} sector unpopulated")
    polys = [_mode_poly_exact(mode, n, q) for mode in rho.modes]
    coeff = product_coefficient(polys, (n - q, n - q, q))
    return Fraction(coeff) / (comb(n, q) ** 2 * norm**2)


def swap_table(rho: ProductState, n: int) -> SwapTable:
    """Exchange expectations for every q = 0..n (floating path)."""
    norm = n_particle_norm(rho, n)
    if norm < ZERO_NORM_FLOOR:
        raise ZeroNormError(f"n={n} sector unpopulated (norm={norm})")
    values = tuple(swap_expectation(rho, n, q, norm=norm) for q in range(n + 1))
    return SwapTable(n, values)


def swap_table_exact(rho: ProductState, n: int) -> SwapTable:
    """Exact exchange expectations for Fock-diagonal rational states."""
    norm = n_particle_norm_exact(rho, n)
    if norm == 0:
        raise ZeroNormError(f"n={n} sector unpopulated")
    values = tuple(swap_expectation_exact(rho, n, q, norm=norm) for q in range(n + 1))
    return SwapTable(n, values)


def renyi2(rho: ProductState, n: int, q: int) -> float:
    """Renyi-2 entropy -log Tr[S_q rho_(n)^{x2}] of the q-particle reduction."""
    value = swap_expectation(rho, n, q)
    return -math.log(value)


def avg_purity_volume_exponent(alpha: float, beta: float) -> float:
    """Leading linear-in-n exponent of the average-entropy lower bound.

    Psi(alpha, beta) = h(beta) - (1+alpha) [h((beta + alpha/2)/(1+alpha))
    - h(alpha/(2(1+alpha)))] with h the natural-log binary entropy;
    positive Psi certifies a volume law for typical Fock states.
    """
    if alpha <= 0:
        raise ValueError(f"need alpha > 0, got {alpha}")
    if not 0 < beta < 1:
        raise ValueError(f"need 0 < beta < 1, got {beta}")

    def h(x: float) -> float:
        if x <= 0 or x >= 1:
            return 0.0
        return -x * math.log(x) - (1 - x) * math.log(1 - x)

    return h(beta) - (1 + alpha) * (
        h((beta + alpha / 2) / (1 + alpha)) - h(alpha / (2 * (1 + alpha)))
    )
