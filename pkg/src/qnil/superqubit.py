"""Three-level graded extension of a qubit and its pairwise entanglement measure.

A one-superqubit state has two even amplitudes (for the |0> and |1> levels)
and one odd amplitude (for the extra |.> level).  Two-superqubit states form a
3x3 parity-blocked supermatrix.  The Berezinian of that matrix needs an
invertible odd-odd corner and so fails on product states; the supertrace-based
superdeterminant below is total, vanishes on every product state, and feeds
the super two-tangle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .algebra import (
    Multivector,
    Parity,
    Universe,
    body,
    invert,
    mul,
    power,
    sharp,
)
from .errors import NotInvertibleError, ParityError, UniverseError

BULLET = "."
LABELS = ("0", "1", BULLET)

#: Entry keys of the two-superqubit JSON schema, row-major.
ENTRY_KEYS = tuple(x + y for x in LABELS for y in LABELS)


def _check_parity(mv: Multivector, want: Parity, what: str) -> None:
    if not mv.has_parity(want):
        raise ParityError(f"{what} must be {want.name.lower()} (or zero)")


class SuperQubitState:
    """One superqubit: even amplitudes ``psi0``, ``psi1`` and odd amplitude ``psi_dot``."""

    __slots__ = ("psi0", "psi1", "psi_dot")

    def __init__(self, psi0: Multivector, psi1: Multivector, psi_dot: Multivector):
        if not (psi0.universe == psi1.universe == psi_dot.universe):
            raise UniverseError("superqubit amplitudes must share one universe")
        _check_parity(psi0, Parity.EVEN, "psi0")
        _check_parity(psi1, Parity.EVEN, "psi1")
        _check_parity(psi_dot, Parity.ODD, "psi_dot")
        self.psi0 = psi0
        self.psi1 = psi1
        self.psi_dot = psi_dot

    @property
    def universe(self) -> Universe:
        return self.psi0.universe

    def components(self) -> tuple[Multivector, Multivector, Multivector]:
        return (self.psi0, self.psi1, self.psi_dot)

    def __repr__(self) -> str:
        return f"SuperQubitState({self.psi0!r}, {self.psi1!r}, {self.psi_dot!r})"


def q_scalar_product(psi: SuperQubitState, phi: SuperQubitState) -> Multivector:
    """Graded pairing: psi0^# phi0 + psi1^# phi1 - psi_dot^# phi_dot."""
    if psi.universe != phi.universe:
        raise UniverseError("states must share one universe")
    even = mul(sharp(psi.psi0), phi.psi0) + mul(sharp(psi.psi1), phi.psi1)
    return even - mul(sharp(psi.psi_dot), phi.psi_dot)


def q_scalar_square(psi: SuperQubitState) -> Multivector:
    """Scalar square of a superqubit; generally carries a nilpotent soul."""
    return q_scalar_product(psi, psi)


def normalize_superqubit(psi: SuperQubitState) -> SuperQubitState:
    """Rescale so the scalar square has unit body.

    The even amplitudes pick up the correction factor
    ``(1 + (1/2) N^-1 psi_dot^# psi_dot)`` on top of the overall ``N^-1/2``
    with ``N = psi0^# psi0 + psi1^# psi1``; the result has scalar square
    exactly 1 whenever ``(psi_dot^# psi_dot)^2 = 0``.
    """
    n_even = mul(sharp(psi.psi0), psi.psi0) + mul(sharp(psi.psi1), psi.psi1)
    if abs(body(n_even)) <= psi.universe.tol:
        raise NotInvertibleError("even amplitudes have vanishing norm body")
    b_odd = mul(sharp(psi.psi_dot), psi.psi_dot)
    correction = psi.universe.one() + 0.5 * mul(invert(n_even), b_odd)
    scale = power(n_even, -0.5)
    even_factor = mul(scale, correction)
    return SuperQubitState(
        mul(even_factor, psi.psi0),
        mul(even_factor, psi.psi1),
        mul(scale, psi.psi_dot),
    )


_EXPECTED_BLOCK_PARITY = {
    (x, y): Parity.ODD if (x == BULLET) != (y == BULLET) else Parity.EVEN
    for x in LABELS
    for y in LABELS
}


class TwoSuperQubitState:
    """Two-superqubit supermatrix: 3x3 multivector entries indexed by {0, 1, .}.

    Corner blocks are even, the mixed (even-odd) blocks are odd; zero entries
    are allowed anywhere.
    """

    __slots__ = ("_m",)

    def __init__(self, entries: Sequence[Sequence[Multivector]]):
        m = tuple(tuple(row) for row in entries)
        if len(m) != 3 or any(len(row) != 3 for row in m):
            raise ParityError("expected a 3x3 entry array")
        u = m[0][0].universe
        for row in m:
            for mv in row:
                if mv.universe != u:
                    raise UniverseError("supermatrix entries must share one universe")
        for a, x in enumerate(LABELS):
            for b, y in enumerate(LABELS):
                _check_parity(m[a][b], _EXPECTED_BLOCK_PARITY[(x, y)], f"entry {x}{y}")
        self._m = m

    @classmethod
    def from_entries(cls, entries: Mapping[str, Multivector],
                     universe: Universe | None = None) -> "TwoSuperQubitState":
        """Build from a sparse {"00": mv, ..., "..": mv} mapping."""
        unknown = set(entries) - set(ENTRY_KEYS)
        if unknown:
            raise ParityError(f"unknown entry keys: {sorted(unknown)}")
        if universe is None:
            if not entries:
                raise UniverseError("cannot infer a universe from an empty entry map")
            universe = next(iter(entries.values())).universe
        zero = universe.zero()
        grid = [[entries.get(x + y, zero) for y in LABELS] for x in LABELS]
        return cls(grid)

    @property
    def universe(self) -> Universe:
        return self._m[0][0].universe

    def entry(self, x: str, y: str) -> Multivector:
        return self._m[LABELS.index(x)][LABELS.index(y)]

    def at(self, key: str) -> Multivector:
        return self.entry(key[0], key[1])

    def rows(self) -> tuple[tuple[Multivector, ...], ...]:
        return self._m

    def to_json(self) -> dict:
        return {
            "type": "superqubit2",
            "entries": {x + y: self.entry(x, y).to_json() for x in LABELS for y in LABELS},
        }

    @classmethod
    def from_json(cls, data: Mapping, tol: float | None = None) -> "TwoSuperQubitState":
        if data.get("type") != "superqubit2":
            raise ParityError(f"not a two-superqubit record: type={data.get('type')!r}")
        kwargs = {} if tol is None else {"tol": tol}
        entries = {k: Multivector.from_json(v, **kwargs) for k, v in data["entries"].items()}
        return cls.from_entries(entries)

    def __repr__(self) -> str:
        cells = ", ".join(f"{x}{y}: {self.entry(x, y)!r}" for x in LABELS for y in LABELS
                          if not self.entry(x, y).is_zero)
        return f"TwoSuperQubitState({cells or '0'})"


def tensor(a: SuperQubitState, b: SuperQubitState) -> TwoSuperQubitState:
    """Graded tensor product of two one-superqubit states.

    Moving the second factor's odd basis ket past an odd first-factor
    amplitude contributes the Koszul minus sign.
    """
    if a.universe != b.universe:
        raise UniverseError("states must share one universe")
    a_comp = a.components()
    b_comp = b.components()
    grid = []
    for x, ax in enumerate(a_comp):
        odd_coeff = ax.parity is Parity.ODD
        row = []
        for y, by in enumerate(b_comp):
            entry = mul(ax, by)
            if odd_coeff and LABELS[y] == BULLET:
                entry = -entry
            row.append(entry)
        grid.append(row)
    return TwoSuperQubitState(grid)


@dataclass(frozen=True)
class OspMetric:
    """Invariant metric used by the supertrace form of the superdeterminant.

    Antisymmetric unit on the even 2x2 block, a single unit on the odd block;
    the mixed blocks vanish.
    """

    rows: tuple[tuple[complex, ...], ...] = (
        (0.0, 1.0, 0.0),
        (-1.0, 0.0, 0.0),
        (0.0, 0.0, 1.0),
    )

    def __post_init__(self):
        r = self.rows
        if len(r) != 3 or any(len(row) != 3 for row in r):
            raise ParityError("metric must be 3x3")
        if any(r[a][2] != 0 or r[2][a] != 0 for a in range(2)):
            raise ParityError("metric even-odd blocks must vanish")
        even_det = r[0][0] * r[1][1] - r[0][1] * r[1][0]
        if even_det == 0 or r[2][2] == 0:
            raise ParityError("metric must be invertible")


def supertranspose(m: Sequence[Sequence[Multivector]]) -> list[list[Multivector]]:
    """Block supertranspose [[A, B], [C, D]] -> [[A^T, C^T], [-B^T, D]]."""
    out = [[None] * 3 for _ in range(3)]
    for j in range(2):
        for k in range(2):
            out[j][k] = m[k][j]
    for j in range(2):
        out[j][2] = m[2][j]
        out[2][j] = -m[j][2]
    out[2][2] = m[2][2]
    return out


def _mat_mul_metric(m: Sequence[Sequence[Multivector]], e: OspMetric) -> list[list[Multivector]]:
    return [[sum((m[x][z] * e.rows[z][y] for z in range(3)), start=m[x][0].universe.zero())
             for y in range(3)] for x in range(3)]


def _metric_mul_mat(e: OspMetric, m: Sequence[Sequence[Multivector]]) -> list[list[Multivector]]:
    return [[sum((m[z][y] * e.rows[x][z] for z in range(3)), start=m[0][y].universe.zero())
             for y in range(3)] for x in range(3)]


def sdet_closed(s: TwoSuperQubitState) -> Multivector:
    """Closed polynomial form of the superdeterminant; total on all states."""
    m = s.rows()
    even_part = (
        mul(m[0][0], m[1][1]) - mul(m[0][1], m[1][0])
        + mul(m[0][2], m[1][2]) + mul(m[2][0], m[2][1])
    )
    return even_part - 0.5 * mul(m[2][2], m[2][2])


def sdet_via_str(s: TwoSuperQubitState, metric: OspMetric | None = None) -> Multivector:
    """Supertrace form (1/2) str((psi E)^ST E psi); agrees with :func:`sdet_closed`."""
    e = metric if metric is not None else OspMetric()
    m = s.rows()
    left = supertranspose(_mat_mul_metric(m, e))
    right = _metric_mul_mat(e, m)
    diag = []
    for x in range(3):
        acc = s.universe.zero()
        for z in range(3):
            acc = acc + mul(left[x][z], right[z][x])
        diag.append(acc)
    return 0.5 * (diag[0] + diag[1] - diag[2])


def berezinian(s: TwoSuperQubitState) -> Multivector:
    """det(psi_jk - psi_j. psi_..^-1 psi_.k) * psi_..^-1.

    Requires an invertible odd-odd corner; raises
    :class:`~qnil.errors.NotInvertibleError` when its body vanishes, which is
    exactly what happens on product states with odd amplitudes.
    """
    m = s.rows()
    inv_corner = invert(m[2][2])
    reduced = [[m[j][k] - mul(mul(m[j][2], inv_corner), m[2][k]) for k in range(2)]
               for j in range(2)]
    det = mul(reduced[0][0], reduced[1][1]) - mul(reduced[0][1], reduced[1][0])
    return mul(det, inv_corner)


def super_two_tangle(s: TwoSuperQubitState) -> Multivector:
    """4 * sdet * sdet^#; a nonnegative real for plain-complex states."""
    sd = sdet_closed(s)
    return 4.0 * mul(sd, sharp(sd))
