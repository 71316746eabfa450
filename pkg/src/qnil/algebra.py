"""Sparse arithmetic in a unital algebra of first-order nilpotent generators.

A :class:`Universe` declares a finite ordered list of generators of two kinds:
commuting nilpotents (``eta``, even) and anticommuting Grassmann generators
(``xi``, odd) that come in conjugate pairs.  Every generator squares to zero;
odd generators mutually anticommute while even ones are central.

A :class:`Multivector` is a sparse map from canonically ordered monomials
(bitmasks over the generator list) to complex coefficients.  All operations
are pure; multivectors are immutable values.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    BodyError,
    NotInvertibleError,
    ParityError,
    SectorError,
    UniverseError,
)

DEFAULT_TOLERANCE = 1e-12


class GeneratorParity(str, Enum):
    EVEN_NILPOTENT = "even-nilpotent"
    ODD = "odd"


class Parity(Enum):
    EVEN = 0
    ODD = 1
    INHOMOGENEOUS = 2


@dataclass(frozen=True)
class Generator:
    """One declared generator: a name, a sector, and an optional conjugate partner.

    ``pair`` links the two members of a (xi, xibar) conjugate pair by name.
    Within a pair, the generator declared first plays the unbarred role.
    """

    name: str
    parity: GeneratorParity
    pair: str | None = None

    @property
    def is_odd(self) -> bool:
        return self.parity is GeneratorParity.ODD


class Universe:
    """Immutable ordered list of generators, shared by all elements built over it.

    Two universes are interoperable when they declare the same generators in
    the same order; the pruning tolerance does not take part in equality.
    """

    __slots__ = ("_gens", "_index", "_odd_mask", "tol", "_hash")

    def __init__(self, generators: Sequence[Generator], tol: float = DEFAULT_TOLERANCE):
        gens = tuple(generators)
        index: dict[str, int] = {}
        odd_mask = 0
        for i, g in enumerate(gens):
            if g.name in index:
                raise UniverseError(f"duplicate generator name {g.name!r}")
            index[g.name] = i
            if g.is_odd:
                odd_mask |= 1 << i
        for g in gens:
            if g.pair is not None:
                if not g.is_odd:
                    raise UniverseError(f"even generator {g.name!r} cannot be paired")
                partner = gens[index.get(g.pair, -1)] if g.pair in index else None
                if partner is None or partner.pair != g.name or partner.name == g.name:
                    raise UniverseError(f"generator {g.name!r} has an inconsistent pair link")
        self._gens = gens
        self._index = index
        self._odd_mask = odd_mask
        self.tol = tol
        self._hash = hash(gens)

    # -- constructors ------------------------------------------------------

    @classmethod
    def etas(cls, n: int, prefix: str = "e", tol: float = DEFAULT_TOLERANCE) -> "Universe":
        """Universe of ``n`` commuting nilpotents named e1..en."""
        gens = [Generator(f"{prefix}{i}", GeneratorParity.EVEN_NILPOTENT) for i in range(1, n + 1)]
        return cls(gens, tol=tol)

    @classmethod
    def xi_pairs(cls, n: int, prefix: str = "x", tol: float = DEFAULT_TOLERANCE) -> "Universe":
        """Universe of ``n`` anticommuting conjugate pairs named x1/xb1..xn/xbn."""
        gens: list[Generator] = []
        for i in range(1, n + 1):
            gens.append(Generator(f"{prefix}{i}", GeneratorParity.ODD, pair=f"{prefix}b{i}"))
            gens.append(Generator(f"{prefix}b{i}", GeneratorParity.ODD, pair=f"{prefix}{i}"))
        return cls(gens, tol=tol)

    @classmethod
    def mixed(cls, n_eta: int, n_pairs: int, tol: float = DEFAULT_TOLERANCE) -> "Universe":
        """Universe holding ``n_eta`` etas followed by ``n_pairs`` conjugate pairs."""
        gens = list(cls.etas(n_eta).generators) + list(cls.xi_pairs(n_pairs).generators)
        return cls(gens, tol=tol)

    # -- introspection -----------------------------------------------------

    @property
    def generators(self) -> tuple[Generator, ...]:
        return self._gens

    @property
    def size(self) -> int:
        return len(self._gens)

    @property
    def odd_mask(self) -> int:
        return self._odd_mask

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UniverseError(f"unknown generator {name!r}") from None

    def generator(self, name: str) -> Generator:
        return self._gens[self.index(name)]

    def names(self, mask: int) -> tuple[str, ...]:
        return tuple(self._gens[i].name for i in _bits(mask))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Universe) and self._gens == other._gens

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Universe({', '.join(g.name for g in self._gens)})"

    # -- element factories -------------------------------------------------

    def zero(self) -> "Multivector":
        return Multivector(self, {})

    def one(self) -> "Multivector":
        return Multivector(self, {0: 1.0 + 0j})

    def scalar(self, c: complex) -> "Multivector":
        return Multivector(self, {0: complex(c)})

    def gen(self, name: str) -> "Multivector":
        return Multivector(self, {1 << self.index(name): 1.0 + 0j})

    def monomial(self, names: Iterable[str], coeff: complex = 1.0) -> "Multivector":
        """Product of named generators in the written order (with the sign it implies)."""
        out = self.scalar(coeff)
        for name in names:
            out = mul(out, self.gen(name))
        return out

    # -- serialization -----------------------------------------------------

    def to_json(self) -> list[dict]:
        out = []
        for g in self._gens:
            entry: dict = {"name": g.name, "parity": g.parity.value}
            if g.pair is not None:
                entry["pair"] = g.pair
            out.append(entry)
        return out

    @classmethod
    def from_json(cls, data: Sequence[Mapping], tol: float = DEFAULT_TOLERANCE) -> "Universe":
        gens = [
            Generator(d["name"], GeneratorParity(d["parity"]), d.get("pair"))
            for d in data
        ]
        return cls(gens, tol=tol)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _merge_parity(odd_a: int, odd_b: int) -> int:
    # parity of odd-odd transpositions needed to merge two ascending monomials
    parity = 0
    b = odd_b
    while b:
        low = b & -b
        parity ^= (odd_a >> low.bit_length()).bit_count() & 1
        b ^= low
    return parity


ScalarLike = Union[int, float, complex]


class Multivector:
    """Immutable sparse element: map from generator-subset bitmasks to coefficients.

    Coefficients with magnitude below the universe tolerance are pruned on
    construction, so the zero element always has an empty term map.
    """

    __slots__ = ("_universe", "_terms")

    def __init__(self, universe: Universe, terms: Mapping[int, complex]):
        tol = universe.tol
        self._universe = universe
        self._terms = {m: complex(c) for m, c in terms.items() if abs(c) >= tol}

    # -- basic structure ---------------------------------------------------

    @property
    def universe(self) -> Universe:
        return self._universe

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> list[tuple[int, complex]]:
        """Term list sorted by monomial mask."""
        return sorted(self._terms.items())

    def coeff(self, names: Iterable[str] = ()) -> complex:
        mask = 0
        for name in names:
            mask |= 1 << self._universe.index(name)
        return self._terms.get(mask, 0j)

    @property
    def parity(self) -> Parity:
        om = self._universe.odd_mask
        seen = {(m & om).bit_count() & 1 for m in self._terms}
        if len(seen) > 1:
            return Parity.INHOMOGENEOUS
        if not seen or seen == {0}:
            return Parity.EVEN
        return Parity.ODD

    def has_parity(self, parity: Parity) -> bool:
        """True when homogeneous of the given parity; the zero element matches any."""
        return self.is_zero or self.parity is parity

    # -- arithmetic --------------------------------------------------------

    def _coerced(self, other) -> "Multivector | None":
        if isinstance(other, Multivector):
            return other
        if isinstance(other, numbers.Complex):
            return self._universe.scalar(other)
        return None

    def __add__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        _require_same_universe(self, rhs)
        acc = dict(self._terms)
        for m, c in rhs._terms.items():
            acc[m] = acc.get(m, 0j) + c
        return Multivector(self._universe, acc)

    __radd__ = __add__

    def __sub__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __neg__(self):
        return Multivector(self._universe, {m: -c for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return mul(self, other)
        if isinstance(other, numbers.Complex):
            return Multivector(self._universe, {m: c * other for m, c in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Complex):
            return Multivector(self._universe, {m: other * c for m, c in self._terms.items()})
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, numbers.Complex):
            return self * (1.0 / other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = self._universe.one()
        for _ in range(k):
            out = mul(out, self)
        return out

    def __eq__(self, other) -> bool:
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return self._universe == rhs._universe and self._terms == rhs._terms

    __hash__ = None  # mutable-looking float payload; not hashable

    def isclose(self, other, tol: float | None = None) -> bool:
        rhs = self._coerced(other)
        if rhs is None or self._universe != rhs._universe:
            return False
        tol = self._universe.tol if tol is None else tol
        keys = set(self._terms) | set(rhs._terms)
        return all(abs(self._terms.get(k, 0j) - rhs._terms.get(k, 0j)) <= tol for k in keys)

    def max_coeff_diff(self, other: "Multivector") -> float:
        _require_same_universe(self, other)
        keys = set(self._terms) | set(other._terms)
        return max((abs(self._terms.get(k, 0j) - other._terms.get(k, 0j)) for k in keys), default=0.0)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.terms():
            names = "*".join(self._universe.names(m))
            parts.append(f"({c})" if not names else f"({c})*{names}")
        return " + ".join(parts)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "universe": self._universe.to_json(),
            "terms": [
                {"gens": list(self._universe.names(m)), "re": c.real, "im": c.imag}
                for m, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping, tol: float = DEFAULT_TOLERANCE) -> "Multivector":
        u = Universe.from_json(data["universe"], tol=tol)
        terms: dict[int, complex] = {}
        for t in data["terms"]:
            idx = [u.index(name) for name in t["gens"]]
            if idx != sorted(idx) or len(set(idx)) != len(idx):
                raise UniverseError(f"monomial {t['gens']!r} is not canonically ordered")
            mask = 0
            for i in idx:
                mask |= 1 << i
            terms[mask] = terms.get(mask, 0j) + complex(t["re"], t["im"])
        return cls(u, terms)


def _require_same_universe(a: Multivector, b: Multivector) -> Universe:
    if a.universe != b.universe:
        raise UniverseError("operands belong to different universes")
    return a.universe


# -- core operations -------------------------------------------------------


def mul(a: Multivector, b: Multivector) -> Multivector:
    """Graded product: generators square to zero, odd generators anticommute."""
    u = _require_same_universe(a, b)
    om = u.odd_mask
    acc: dict[int, complex] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            if ma & mb:
                continue
            c = ca * cb
            if _merge_parity(ma & om, mb & om):
                c = -c
            key = ma | mb
            acc[key] = acc.get(key, 0j) + c
    return Multivector(u, acc)


def body(a: Multivector) -> complex:
    """Numeric part: the coefficient of the empty monomial."""
    return a._terms.get(0, 0j)


def soul(a: Multivector) -> Multivector:
    """Nilpotent remainder: the element with its numeric part removed."""
    return Multivector(a.universe, {m: c for m, c in a._terms.items() if m})


def star(a: Multivector) -> Multivector:
    """Antilinear involution of the even-nilpotent sector; fixes every eta."""
    om = a.universe.odd_mask
    for m in a._terms:
        if m & om:
            raise SectorError("star is defined on the even-nilpotent sector only")
    return Multivector(a.universe, {m: c.conjugate() for m, c in a._terms.items()})


def sharp(a: Multivector) -> Multivector:
    """Graded antilinear conjugation.

    Acts on generators as xi -> xibar, xibar -> -xi, eta -> eta and reverses
    products with the Koszul sign: (ab)^# = (-1)^{|a||b|} b^# a^#.  Applying it
    twice gives +q on even and -q on odd homogeneous elements.
    """
    if a.parity is Parity.INHOMOGENEOUS:
        raise ParityError("sharp requires a homogeneous element")
    u = a.universe
    om = u.odd_mask
    gens = u.generators
    out: dict[int, complex] = {}
    for mask, c in a._terms.items():
        odd_idx = [i for i in _bits(mask & om)]
        k = len(odd_idx)
        sign = -1 if (k * (k - 1) // 2) & 1 else 1
        mapped: list[int] = []
        for i in reversed(odd_idx):
            g = gens[i]
            if g.pair is None:
                raise SectorError(f"odd generator {g.name!r} has no conjugate partner")
            j = u.index(g.pair)
            if j < i:  # barred member of the pair maps back with a minus
                sign = -sign
            mapped.append(j)
        # sort the mapped (all-odd) sequence, tracking transposition parity
        for p in range(1, len(mapped)):
            q = p
            while q > 0 and mapped[q - 1] > mapped[q]:
                mapped[q - 1], mapped[q] = mapped[q], mapped[q - 1]
                sign = -sign
                q -= 1
        new_mask = mask & ~om
        for j in mapped:
            new_mask |= 1 << j
        out[new_mask] = out.get(new_mask, 0j) + sign * c.conjugate()
    return Multivector(u, out)


def derive(a: Multivector, g: Generator | str) -> Multivector:
    """Left derivative with respect to one generator.

    Kills terms not containing the generator; on the rest, moves it to the
    front (anticommutation sign for odd generators) and strips it.
    """
    u = a.universe
    name = g.name if isinstance(g, Generator) else g
    i = u.index(name)
    bit = 1 << i
    odd = u.generators[i].is_odd
    om = u.odd_mask
    out: dict[int, complex] = {}
    for mask, c in a._terms.items():
        if not mask & bit:
            continue
        if odd and (mask & om & (bit - 1)).bit_count() & 1:
            c = -c
        out[mask ^ bit] = out.get(mask ^ bit, 0j) + c
    return Multivector(u, out)


def berezin(a: Multivector, gens: Sequence[Generator | str]) -> Multivector:
    """Iterated Berezin integral over the listed odd generators.

    The first listed generator is integrated first (innermost); each single
    integral acts as the left derivative, so the result extracts the top
    monomial in the listed generators.
    """
    u = a.universe
    for g in gens:
        name = g.name if isinstance(g, Generator) else g
        if not u.generator(name).is_odd:
            raise SectorError(f"Berezin integration requires odd generators, got {name!r}")
    out = a
    for g in gens:
        out = derive(out, g)
    return out


def exp_nilpotent(a: Multivector) -> Multivector:
    """Exponential of a purely nilpotent element (finite power series)."""
    u = a.universe
    if abs(body(a)) > u.tol:
        raise BodyError("exp_nilpotent requires a bodyless element; split off the scalar first")
    acc = u.one()
    term = u.one()
    for k in range(1, u.size + 1):
        term = mul(term, a) / k
        if term.is_zero:
            break
        acc = acc + term
    return acc


def invert(a: Multivector) -> Multivector:
    """Multiplicative inverse, defined exactly when the body is nonzero.

    Finite Neumann series on the soul: (b + s)^-1 = b^-1 * sum_k (-s/b)^k.
    """
    u = a.universe
    b = body(a)
    if abs(b) <= u.tol:
        raise NotInvertibleError("element has vanishing body and is not invertible")
    q = soul(a) * (-1.0 / b)
    acc = u.one()
    term = u.one()
    for _ in range(u.size):
        term = mul(term, q)
        if term.is_zero:
            break
        acc = acc + term
    return acc * (1.0 / b)


def power(a: Multivector, alpha: float) -> Multivector:
    """Fractional power of an element with nonzero body (principal branch).

    Binomial series on the soul; terminates by nilpotency.  ``power(a, -1)``
    agrees with :func:`invert` and ``power(a, 0.5)`` squares back to ``a``.
    """
    u = a.universe
    b = body(a)
    if abs(b) <= u.tol:
        raise NotInvertibleError("fractional powers require a nonzero body")
    q = soul(a) * (1.0 / b)
    acc = u.one()
    term = u.one()
    coef = 1.0
    for k in range(1, u.size + 1):
        coef *= (alpha - (k - 1)) / k
        term = mul(term, q)
        if term.is_zero or coef == 0.0:
            break
        acc = acc + term * coef
    return acc * (b ** alpha)
