"""Squbit states: balanced boson/fermion sectors over auxiliary Clifford pairs.

Coefficients are plain complex numbers keyed by strictly increasing index
tuples over the auxiliary generators; even-length tuples sit in the bosonic
sector, odd-length tuples in the fermionic one.  The double-bracket norm is a
positive sum of squares, and the package computes it both from that closed sum
and by actually carrying out the Berezin integral in the graded algebra.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import itertools

from .algebra import (
    Multivector,
    Parity,
    Universe,
    berezin,
    body,
    exp_nilpotent,
    mul,
    soul,
)
from .errors import RangeError, ShapeError
from .superqubit import SuperQubitState

MAX_THETA = 12  # keeps 2^N coefficient enumeration exact and cheap

IndexTuple = tuple[int, ...]


class SqubitState:
    """Complex coefficient family over index tuples, split into B/F sectors."""

    __slots__ = ("_n", "_coeffs")

    def __init__(self, n_theta: int, coeffs: Mapping[IndexTuple, complex]):
        if n_theta < 1:
            raise RangeError(f"need at least one auxiliary pair, got N={n_theta}")
        if n_theta > MAX_THETA:
            raise RangeError(f"N={n_theta} exceeds the supported maximum {MAX_THETA}")
        clean: dict[IndexTuple, complex] = {}
        for idx, c in coeffs.items():
            idx = tuple(idx)
            if list(idx) != sorted(set(idx)):
                raise ShapeError(f"index tuple {idx} is not strictly increasing")
            if idx and not (1 <= idx[0] and idx[-1] <= n_theta):
                raise IndexError(f"index tuple {idx} out of range 1..{n_theta}")
            c = complex(c)
            if c != 0:
                clean[idx] = c
        self._n = n_theta
        self._coeffs = clean

    @property
    def n_theta(self) -> int:
        return self._n

    def coeff(self, idx: Sequence[int]) -> complex:
        return self._coeffs.get(tuple(idx), 0j)

    def coeffs(self) -> list[tuple[IndexTuple, complex]]:
        return sorted(self._coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __eq__(self, other) -> bool:
        return (isinstance(other, SqubitState) and self._n == other._n
                and self._coeffs == other._coeffs)

    __hash__ = None

    def isclose(self, other: "SqubitState", tol: float = 1e-12) -> bool:
        if not isinstance(other, SqubitState) or self._n != other._n:
            return False
        keys = set(self._coeffs) | set(other._coeffs)
        return all(abs(self.coeff(k) - other.coeff(k)) <= tol for k in keys)

    def __repr__(self) -> str:
        parts = [f"{idx or '()'}: {c}" for idx, c in self.coeffs()]
        return f"SqubitState(N={self._n}, {{{', '.join(parts)}}})"

    def to_json(self) -> dict:
        return {
            "type": "squbit",
            "N": self._n,
            "coeffs": [
                {"idx": list(idx), "re": c.real, "im": c.imag}
                for idx, c in self.coeffs()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SqubitState":
        if data.get("type") != "squbit":
            raise ShapeError(f"not a squbit record: type={data.get('type')!r}")
        coeffs = {tuple(t["idx"]): complex(t["re"], t["im"]) for t in data["coeffs"]}
        return cls(int(data["N"]), coeffs)


def bracket_norm(psi: SqubitState) -> float:
    """Double-bracket norm as the closed sum of squared coefficient magnitudes."""
    return sum(abs(c) ** 2 for _, c in psi.coeffs())


def bracket_norm_berezin(psi: SqubitState) -> float:
    """Double-bracket norm computed by explicit Berezin integration.

    Builds the 2N-generator algebra, forms exp(sum theta_bar theta) times the
    bra-ket contraction, and integrates against the pairwise measure.  Agrees
    with :func:`bracket_norm` on every state; kept as an independent route.
    """
    n = psi.n_theta
    u = Universe.xi_pairs(n, prefix="t")
    theta = [u.gen(f"t{i}") for i in range(1, n + 1)]
    theta_bar = [u.gen(f"tb{i}") for i in range(1, n + 1)]

    contraction = u.zero()
    for idx, c in psi.coeffs():
        ket = u.one()
        for i in idx:
            ket = mul(ket, theta[i - 1])
        bra = u.one()
        for i in reversed(idx):
            bra = mul(bra, theta_bar[i - 1])
        contraction = contraction + abs(c) ** 2 * mul(bra, ket)

    pair_sum = u.zero()
    for i in range(n):
        pair_sum = pair_sum + mul(theta_bar[i], theta[i])
    integrand = mul(exp_nilpotent(pair_sum), contraction)

    measure_order: list[str] = []
    for i in range(1, n + 1):
        measure_order.extend((f"tb{i}", f"t{i}"))
    result = berezin(integrand, measure_order)
    if not soul(result).is_zero:
        raise ShapeError("norm integrand left unintegrated generators")
    return body(result).real


def apply_theta(psi: SqubitState, i: int) -> SqubitState:
    """Creation operator on the index tuples, with the fermionic sign."""
    _check_index(psi, i)
    out: dict[IndexTuple, complex] = {}
    for idx, c in psi.coeffs():
        if i in idx:
            continue
        below = sum(1 for j in idx if j < i)
        new = tuple(sorted(idx + (i,)))
        out[new] = out.get(new, 0j) + (-c if below & 1 else c)
    return SqubitState(psi.n_theta, out)


def apply_thetabar(psi: SqubitState, i: int) -> SqubitState:
    """Annihilation operator, the Clifford dual of :func:`apply_theta`."""
    _check_index(psi, i)
    out: dict[IndexTuple, complex] = {}
    for idx, c in psi.coeffs():
        if i not in idx:
            continue
        below = sum(1 for j in idx if j < i)
        new = tuple(j for j in idx if j != i)
        out[new] = out.get(new, 0j) + (-c if below & 1 else c)
    return SqubitState(psi.n_theta, out)


def _check_index(psi: SqubitState, i: int) -> None:
    if not 1 <= i <= psi.n_theta:
        raise IndexError(f"generator index {i} out of range 1..{psi.n_theta}")


def sector_dimensions(n: int) -> tuple[int, int]:
    """(bosonic, fermionic) basis counts for N auxiliary pairs: both 2^(N-1)."""
    if n < 1:
        raise RangeError(f"sector dimensions need N >= 1, got {n}")
    half = 1 << (n - 1)
    return (half, half)


def enumerate_sector_tuples(n: int) -> tuple[list[IndexTuple], list[IndexTuple]]:
    """All (bosonic, fermionic) index tuples for N pairs, by subset parity."""
    if n < 1:
        raise RangeError(f"sector enumeration needs N >= 1, got {n}")
    bosonic: list[IndexTuple] = []
    fermionic: list[IndexTuple] = []
    for k in range(n + 1):
        target = bosonic if k % 2 == 0 else fermionic
        target.extend(itertools.combinations(range(1, n + 1), k))
    return bosonic, fermionic


def embed_superqubit(psi: SuperQubitState) -> SqubitState:
    """Rewrite a superqubit with plain-complex even amplitudes as a squbit.

    The two even amplitudes land on the bosonic tuples () and (1, 2); the odd
    amplitude, required to be a multiple of a single odd generator, lands on
    the fermionic tuple (1,).  Two auxiliary pairs are the minimum giving two
    bosonic slots.  The resulting norm is the all-positive sum of squares.
    """
    for name, amp in (("psi0", psi.psi0), ("psi1", psi.psi1)):
        if not soul(amp).is_zero:
            raise ShapeError(f"{name} must be a plain complex amplitude")
    odd = psi.psi_dot
    if odd.is_zero:
        f_coeff = 0j
    else:
        terms = odd.terms()
        if len(terms) != 1 or terms[0][0].bit_count() != 1 or odd.parity is not Parity.ODD:
            raise ShapeError("odd amplitude must be a multiple of a single odd generator")
        f_coeff = terms[0][1]
    return SqubitState(2, {
        (): body(psi.psi0),
        (1, 2): body(psi.psi1),
        (1,): f_coeff,
    })
