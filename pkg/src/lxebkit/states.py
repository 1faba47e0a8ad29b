"""Single-mode states and product states in the Fock basis.

A :class:`ModeState` holds the matrix elements <k|sigma|l> up to a photon
cutoff as a dense complex array.  Builders cover Fock, squeezed-vacuum and
coherent states plus the uniform loss channel; arbitrary matrices enter
through the JSON schema.  States whose matrix is diagonal with exact
rational entries additionally carry that diagonal as Fractions, which is
what feeds the exact-arithmetic reference-value path.

Squeezing convention: amplitudes follow the standard half-factor
convention, exp(r/2 ((a^dag)^2 - a^2)) |0>, i.e. a squeezing parameter r
here corresponds to 2r in the convention that omits the 1/2.  Every
reference value computed downstream is provably r-independent after
n-particle restriction, so observables do not depend on this choice.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational

import numpy as np

__all__ = [
    "ModeState",
    "ProductState",
    "StateSpecError",
    "fock_mode",
    "vacuum_mode",
    "squeezed_mode",
    "coherent_mode",
    "matrix_mode",
    "random_mode",
    "apply_uniform_loss",
    "parse_state_spec",
    "restrict_to_sector",
]

HERMITICITY_TOL = 1e-12


class StateSpecError(ValueError):
    """Raised when a state document violates the schema."""


@dataclass(frozen=True)
class ModeState:
    """Density-matrix elements of one optical mode up to a photon cutoff.

    ``elements[k, l] = <k|sigma|l>`` for 0 <= k, l <= cutoff.  When the
    state is diagonal with exact rational entries, ``exact_diagonal``
    carries them as Fractions (None otherwise).
    """

    cutoff: int
    elements: np.ndarray
    exact_diagonal: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=complex)
        if el.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError(f"elements must be {self.cutoff + 1}x{self.cutoff + 1}")
        if np.max(np.abs(el - el.conj().T)) > HERMITICITY_TOL:
            raise ValueError("mode state is not Hermitian")
        if el.trace().real > 1 + 1e-12:
            raise ValueError("mode state has trace > 1")
        el.setflags(write=False)
        object.__setattr__(self, "elements", el)

    @property
    def is_exact(self) -> bool:
        return self.exact_diagonal is not None

    def trace(self) -> float:
        return float(self.elements.trace().real)


@dataclass(frozen=True)
class ProductState:
    """Ordered product of single-mode states with a common cutoff."""

    modes: tuple[ModeState, ...]

    def __post_init__(self):
        if not self.modes:
            raise ValueError("product state needs at least one mode")
        cutoffs = {mode.cutoff for mode in self.modes}
        if len(cutoffs) != 1:
            raise ValueError(f"all cutoffs must agree, got {sorted(cutoffs)}")
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def m(self) -> int:
        return len(self.modes)

    @property
    def cutoff(self) -> int:
        return self.modes[0].cutoff

    @property
    def is_exact(self) -> bool:
        return all(mode.is_exact for mode in self.modes)


def _diag_state(diag_exact, cutoff: int) -> ModeState:
    el = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    diag = tuple(Fraction(d) for d in diag_exact)
    for k, d in enumerate(diag):
        el[k, k] = float(d)
    return ModeState(cutoff, el, diag)


def fock_mode(n_i: int, cutoff: int) -> ModeState:
    """Photon-number state |n_i><n_i|."""
    if not 0 <= n_i <= cutoff:
        raise ValueError(f"need 0 <= n_i <= cutoff, got n_i={n_i}, cutoff={cutoff}")
    diag = [Fraction(0)] * (cutoff + 1)
    diag[n_i] = Fraction(1)
    return _diag_state(diag, cutoff)


def vacuum_mode(cutoff: int) -> ModeState:
    return fock_mode(0, cutoff)


def squeezed_mode(r: float, cutoff: int) -> ModeState:
    """Squeezed vacuum with even-photon amplitudes
    a_{2k} = sech(r)^{1/2} tanh(r)^k sqrt((2k)!) / (2^k k!)."""
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    amp = np.zeros(cutoff + 1)
    t = math.tanh(r)
    for k in range(0, cutoff // 2 + 1):
        amp[2 * k] = (
            math.sqrt(1.0 / math.cosh(r))
            * t**k
            * math.sqrt(math.factorial(2 * k))
            / (2**k * math.factorial(k))
        )
    el = np.outer(amp, amp).astype(complex)
    return ModeState(cutoff, el)


def coherent_mode(alpha: complex, cutoff: int) -> ModeState:
    """Coherent state, elements e^{-|a|^2} a^k conj(a)^l / sqrt(k! l!)."""
    alpha = complex(alpha)
    amp = np.array(
        [alpha**k / math.sqrt(math.factorial(k)) for k in range(cutoff + 1)],
        dtype=complex,
    )
    el = math.exp(-abs(alpha) ** 2) * np.outer(amp, amp.conj())
    return ModeState(cutoff, el)


def matrix_mode(elements, cutoff: int | None = None) -> ModeState:
    """User-supplied density-matrix elements (validated for Hermiticity)."""
    el = np.asarray(elements, dtype=complex)
    if el.ndim != 2 or el.shape[0] != el.shape[1]:
        raise ValueError("matrix elements must be square")
    if cutoff is None:
        cutoff = el.shape[0] - 1
    if el.shape[0] != cutoff + 1:
        padded = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        k = min(el.shape[0], cutoff + 1)
        padded[:k, :k] = el[:k, :k]
        el = padded
    return ModeState(cutoff, el)


def apply_uniform_loss(state: ModeState, eta) -> ModeState:
    """Pure-loss channel with transmissivity eta in the Fock basis.

    elements'[k, l] = sum_j sqrt(C(k+j,j) C(l+j,j)) eta^{(k+l)/2} (1-eta)^j
                      elements[k+j, l+j], truncated at the cutoff.
    Exact diagonals propagate when eta is rational.
    """
    eta_f = float(eta)
    if not 0 <= eta_f <= 1:
        raise ValueError(f"transmissivity must be in [0, 1], got {eta}")
    nc = state.cutoff
    out = np.zeros((nc + 1, nc + 1), dtype=complex)
    for k in range(nc + 1):
        for l in range(nc + 1):
            acc = 0j
            for j in range(nc + 1 - max(k, l)):
                acc += (
                    math.sqrt(comb(k + j, j) * comb(l + j, j))
                    * eta_f ** ((k + l) / 2)
                    * (1 - eta_f) ** j
                    * state.elements[k + j, l + j]
                )
            out[k, l] = acc
    exact = None
    if state.exact_diagonal is not None and isinstance(eta, Rational) and not isinstance(eta, float):
        eta_q = Fraction(eta)
        exact = tuple(
            sum(
                (comb(k + j, j) * eta_q**k * (1 - eta_q) ** j * state.exact_diagonal[k + j]
                 for j in range(nc + 1 - k)),
                Fraction(0),
            )
            for k in range(nc + 1)
        )
        for k, d in enumerate(exact):
            out[k, k] = float(d)
    return ModeState(nc, out, exact)


def random_mode(cutoff: int, rng: np.random.Generator) -> ModeState:
    """Random full-rank mixed state (normalized Wishart), for oracle runs."""
    size = cutoff + 1
    a = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    sigma = a @ a.conj().T
    sigma /= sigma.trace().real
    return ModeState(cutoff, sigma)


def restrict_to_sector(rho: ProductState, n: int, normalize: bool = True) -> np.ndarray:
    """Dense matrix of the n-particle component over the colex Fock basis.

    Entry (i, j) is the product over modes of <basis[i][a]|sigma_a|basis[j][a]>;
    with ``normalize`` the matrix is scaled to unit trace.
    """
    from .schur import patterns

    basis = patterns(rho.m, n)
    dim = len(basis)
    mat = np.ones((dim, dim), dtype=complex)
    for a, mode in enumerate(rho.modes):
        occ = np.array([p[a] for p in basis])
        mat *= mode.elements[np.ix_(occ, occ)]
    if normalize:
        tr = mat.trace().real
        if tr < 1e-300:
            raise ValueError(f"n={n} sector unpopulated (trace={tr})")
        mat = mat / tr
    return mat


_MODE_KINDS = {"vacuum", "fock", "squeezed", "coherent", "matrix"}


def _require(cond: bool, path: str, msg: str):
    if not cond:
        raise StateSpecError(f"{path}: {msg}")


def _parse_complex(entry, path: str) -> complex:
    _require(
        isinstance(entry, list) and len(entry) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in entry),
        path,
        "complex numbers are [re, im] pairs",
    )
    return complex(entry[0], entry[1])


def _parse_mode(spec, cutoff: int, path: str) -> ModeState:
    _require(isinstance(spec, dict), path, "mode spec must be an object")
    kind = spec.get("kind")
    _require(kind in _MODE_KINDS, f"{path}.kind", f"unknown kind {kind!r}")
    known = {"kind", "loss_eta"}
    if kind == "vacuum":
        mode = vacuum_mode(cutoff)
    elif kind == "fock":
        known.add("n")
        n = spec.get("n")
        _require(isinstance(n, int) and not isinstance(n, bool) and n >= 0, f"{path}.n", "need an integer >= 0")
        _require(n <= cutoff, f"{path}.n", f"exceeds cutoff {cutoff}")
        mode = fock_mode(n, cutoff)
    elif kind == "squeezed":
        known.add("r")
        r = spec.get("r")
        _require(isinstance(r, (int, float)) and not isinstance(r, bool) and r >= 0, f"{path}.r", "need a number >= 0")
        mode = squeezed_mode(float(r), cutoff)
    elif kind == "coherent":
        known.update({"re", "im"})
        re, im = spec.get("re"), spec.get("im")
        for name, v in (("re", re), ("im", im)):
            _require(isinstance(v, (int, float)) and not isinstance(v, bool), f"{path}.{name}", "need a number")
        mode = coherent_mode(complex(re, im), cutoff)
    else:  # matrix
        known.add("elements")
        rows = spec.get("elements")
        _require(isinstance(rows, list) and rows, f"{path}.elements", "need a nonempty array of rows")
        size = len(rows)
        parsed = np.zeros((size, size), dtype=complex)
        for i, row in enumerate(rows):
            _require(isinstance(row, list) and len(row) == size, f"{path}.elements[{i}]", f"need {size} entries")
            for j, entry in enumerate(row):
                parsed[i, j] = _parse_complex(entry, f"{path}.elements[{i}][{j}]")
        try:
            mode = matrix_mode(parsed, cutoff)
        except ValueError as exc:
            raise StateSpecError(f"{path}.elements: {exc}") from None
    extra = set(spec) - known
    _require(not extra, path, f"unknown keys {sorted(extra)}")
    if "loss_eta" in spec:
        eta = spec["loss_eta"]
        _require(isinstance(eta, (int, float)) and not isinstance(eta, bool) and 0 <= eta <= 1,
                 f"{path}.loss_eta", "need a number in [0, 1]")
        mode = apply_uniform_loss(mode, float(eta))
    return mode


def parse_state_spec(document: str, default_cutoff: int | None = None) -> ProductState:
    """Build a ProductState from its JSON description.

    Schema: ``{"cutoff": int, "modes": [ModeSpec, ...]}`` with ModeSpec one
    of the vacuum/fock/squeezed/coherent/matrix kinds; an optional
    per-mode ``loss_eta`` is applied after construction.  ``cutoff`` may
    be omitted when ``default_cutoff`` (normally the particle number of
    interest) is given.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise StateSpecError(f"$: invalid JSON ({exc})") from None
    _require(isinstance(doc, dict), "$", "top level must be an object")
    extra = set(doc) - {"cutoff", "modes"}
    _require(not extra, "$", f"unknown keys {sorted(extra)}")
    cutoff = doc.get("cutoff", default_cutoff)
    _require(cutoff is not None, "$.cutoff", "missing and no default available")
    _require(isinstance(cutoff, int) and not isinstance(cutoff, bool) and cutoff >= 0,
             "$.cutoff", "need an integer >= 0")
    modes = doc.get("modes")
    _require(isinstance(modes, list) and modes, "$.modes", "need a nonempty array")
    return ProductState(tuple(
        _parse_mode(spec, cutoff, f"$.modes[{i}]") for i, spec in enumerate(modes)
    ))
