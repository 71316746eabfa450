"""Multiqubit states as functions of commuting nilpotent variables.

An n-qubit amplitude vector becomes a polynomial in eta generators: the basis
ket with 1s at qubit positions S maps to the monomial over {eta_i : i in S}.
Entanglement across a 1|1 cut is read off the Wronskian-style determinant of
the function and its derivatives; factorization across arbitrary cuts is
decided independently by a rank test on the reshaped coefficient matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .algebra import Multivector, Universe, body, derive, mul, soul
from .errors import SectorError, ShapeError, SplitError

FACTOR_TOLERANCE = 1e-9
_VERIFY_TOLERANCE = 1e-10


class EtaState:
    """State of ``n`` qubits stored as a multivector over eta generators e1..en."""

    __slots__ = ("_f",)

    def __init__(self, f: Multivector):
        if f.universe.odd_mask:
            raise SectorError("qubit states live over even-nilpotent generators only")
        self._f = f

    @property
    def f(self) -> Multivector:
        return self._f

    @property
    def n(self) -> int:
        return self._f.universe.size

    def amplitudes(self) -> list[complex]:
        return to_amplitudes(self)

    def __eq__(self, other) -> bool:
        return isinstance(other, EtaState) and self._f == other._f

    __hash__ = None

    def isclose(self, other: "EtaState", tol: float | None = None) -> bool:
        return self._f.isclose(other._f, tol)

    def __repr__(self) -> str:
        return f"EtaState(n={self.n}, {self._f!r})"


@dataclass(frozen=True)
class WronskianResult:
    """Pairwise Wronskian: a scalar for two qubits, an eta-function beyond."""

    value: Multivector
    pair: tuple[int, int]

    @property
    def scalar(self) -> complex:
        if not soul(self.value).is_zero:
            raise ShapeError("Wronskian value carries eta terms; no scalar form")
        return body(self.value)


def from_amplitudes(amps: Sequence[complex], n: int | None = None,
                    tol: float | None = None) -> EtaState:
    """Build a state from amplitudes in binary basis order |0..0> .. |1..1>.

    Bit ``i-1`` of the flat index corresponds to qubit ``i`` (the leftmost
    character of the ket literal), so index 1 is |10...0>.
    """
    amps = list(amps)
    if n is None:
        n = max(len(amps) - 1, 0).bit_length()
    if len(amps) != 1 << n:
        raise ShapeError(f"expected {1 << n} amplitudes for {n} qubits, got {len(amps)}")
    u = Universe.etas(n) if tol is None else Universe.etas(n, tol=tol)
    return EtaState(Multivector(u, {mask: amps[mask] for mask in range(1 << n)}))


def to_amplitudes(state: EtaState) -> list[complex]:
    """Inverse of :func:`from_amplitudes`; exact round-trip."""
    f = state.f
    return [f._terms.get(mask, 0j) for mask in range(1 << state.n)]


def scalar_product(f: EtaState, g: EtaState) -> complex:
    """Hermitian pairing sum(conj(F_I) * G_I) over all monomials."""
    if f.n != g.n:
        raise ShapeError(f"states have different qubit counts: {f.n} vs {g.n}")
    ga = g.f._terms
    return sum(c.conjugate() * ga.get(m, 0j) for m, c in f.f._terms.items())


def wronskian(f: EtaState, i: int, j: int) -> WronskianResult:
    """F * d_i d_j F - (d_i F) * (d_j F) for qubit indices i != j (1-based)."""
    n = f.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"qubit index out of range for n={n}: ({i}, {j})")
    if i == j:
        raise ValueError("Wronskian needs two distinct qubit indices")
    gi = f.f.universe.generators[i - 1].name
    gj = f.f.universe.generators[j - 1].name
    di = derive(f.f, gi)
    dj = derive(f.f, gj)
    dij = derive(di, gj)
    value = mul(f.f, dij) - mul(di, dj)
    return WronskianResult(value=value, pair=(i, j))


def two_tangle(f: EtaState) -> float:
    """Entanglement of a two-qubit state: 4 |w_12|^2, in [0, 1] when normalized.

    Equals the squared concurrence; vanishes exactly on product states.
    """
    if f.n != 2:
        raise ShapeError(f"two_tangle is defined for 2 qubits, got n={f.n}")
    w = wronskian(f, 1, 2).scalar
    return 4.0 * abs(w) ** 2


def _split_blocks(n: int, split: Iterable[int]) -> tuple[list[int], list[int]]:
    left = sorted(set(split))
    if any(not 1 <= i <= n for i in left):
        raise SplitError(f"split indices must lie in 1..{n}: {left}")
    if not left or len(left) == n:
        raise SplitError("split must be a nontrivial bipartition")
    right = [i for i in range(1, n + 1) if i not in set(left)]
    return left, right


def _coefficient_matrix(state: EtaState, left: list[int], right: list[int]) -> np.ndarray:
    amps = to_amplitudes(state)
    rows, cols = 1 << len(left), 1 << len(right)
    m = np.empty((rows, cols), dtype=complex)
    for r in range(rows):
        base = 0
        for pos, qi in enumerate(left):
            if r >> pos & 1:
                base |= 1 << (qi - 1)
        for c in range(cols):
            mask = base
            for pos, qi in enumerate(right):
                if c >> pos & 1:
                    mask |= 1 << (qi - 1)
            m[r, c] = amps[mask]
    return m


def is_factorable(f: EtaState, split: Iterable[int], tol: float = FACTOR_TOLERANCE) -> bool:
    """True when the state is a product across the given bipartition.

    ``split`` lists the qubit indices of the left block.  For two qubits the
    vanishing of the Wronskian decides; general cuts use the rank-1 test on
    the reshaped coefficient matrix.
    """
    left, right = _split_blocks(f.n, split)
    if f.n == 2:
        return abs(wronskian(f, 1, 2).scalar) < tol
    s = np.linalg.svd(_coefficient_matrix(f, left, right), compute_uv=False)
    return s[1] <= tol * max(1.0, s[0])


def factor(f: EtaState, split: Iterable[int],
           tol: float = FACTOR_TOLERANCE) -> tuple[EtaState, EtaState] | None:
    """Split a product state into factors over the two blocks, or return None.

    Both factors live over the full generator universe (supported on their
    block), so multiplying them back reproduces the input.  The first nonzero
    coefficient of the left factor is made real positive.
    """
    left, right = _split_blocks(f.n, split)
    m = _coefficient_matrix(f, left, right)
    u_mat, s, vh = np.linalg.svd(m)
    if len(s) > 1 and s[1] > tol * max(1.0, s[0]):
        return None
    scale = np.sqrt(s[0])
    g_amp = scale * u_mat[:, 0]
    gt_amp = scale * vh[0, :]
    nz = np.flatnonzero(np.abs(g_amp) > tol)
    if nz.size:
        phase = g_amp[nz[0]] / abs(g_amp[nz[0]])
        g_amp = g_amp / phase
        gt_amp = gt_amp * phase
    universe = f.f.universe
    g = EtaState(Multivector(universe, _block_terms(g_amp, left)))
    gt = EtaState(Multivector(universe, _block_terms(gt_amp, right)))
    if not mul(g.f, gt.f).isclose(f.f, _VERIFY_TOLERANCE):
        return None
    return g, gt


def _block_terms(amp: np.ndarray, block: list[int]) -> dict[int, complex]:
    terms: dict[int, complex] = {}
    for r, c in enumerate(amp):
        mask = 0
        for pos, qi in enumerate(block):
            if r >> pos & 1:
                mask |= 1 << (qi - 1)
        terms[mask] = complex(c)
    return terms
