"""
Permutations on finite sets of integer labels.

Composition is "right factor first": ``p * q`` (or ``compose(p, q)``) is the
map ``x -> p(q(x))``. Every formula in the package (diagonal ``s * pi**-1``,
face permutation ``alpha * beta``) is read under this one convention.

Labels absent from one factor of a product count as its fixed points.

Cycle form is canonical: each cycle starts at its minimum label and cycles
are sorted by that minimum. Fixed points may be omitted when parsing and are
always printed.

    >>> p = Permutation.parse("(1 2)")
    >>> q = Permutation.parse("(2 3)")
    >>> str(p * q)
    '(1 2 3)'
    >>> str(Permutation.from_images(range(1, 9), [1, 6, 7, 8, 3, 4, 5, 2]))
    '(1)(2 6 4 8)(3 7 5)'
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ParseError

__all__ = [
    "CycleType",
    "Permutation",
    "compose",
    "conjugate",
    "cycle_type",
    "cycles",
    "inverse",
    "is_fixed_point_free_involution",
    "is_single_cycle",
    "is_transitive",
    "orbits",
    "parity",
]


class CycleType(tuple):
    """Non-increasing tuple of positive integers (an integer partition).

    Accepts any iterable of parts, or the text forms ``"3 1 1"`` and
    ``"1^2 3^1"``::

        >>> CycleType("1^2 3")
        CycleType(3, 1, 1)
        >>> CycleType([1, 3, 4]).n, CycleType([1, 3, 4]).length
        (8, 3)
    """

    def __new__(cls, parts=()):
        if isinstance(parts, str):
            parts = _parse_partition_text(parts)
        parts = [int(x) for x in parts]
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, sorted(parts, reverse=True))

    @property
    def n(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicities(self) -> Dict[int, int]:
        """Map part size ``i`` to ``a_i``, the number of parts equal to ``i``."""
        return dict(Counter(self))

    def exponent_form(self) -> str:
        """``1^{a_1} 2^{a_2} ...`` with zero exponents dropped."""
        m = self.multiplicities()
        return " ".join(f"{i}^{m[i]}" for i in sorted(m))

    def __repr__(self):
        return "CycleType(" + ", ".join(map(str, self)) + ")"

    def __str__(self):
        return " ".join(map(str, self))


def _parse_partition_text(text: str) -> List[int]:
    parts = []
    for tok in text.replace(",", " ").split():
        if "^" in tok:
            base, _, exp = tok.partition("^")
            try:
                b, e = int(base), int(exp)
            except ValueError:
                raise ValueError(f"bad partition token {tok!r}") from None
            if e < 0:
                raise ValueError(f"negative exponent in {tok!r}")
            parts.extend([b] * e)
        else:
            try:
                parts.append(int(tok))
            except ValueError:
                raise ValueError(f"bad partition token {tok!r}") from None
    return parts


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """Immutable bijection of a finite set of integer labels onto itself."""

    __slots__ = ("_map", "_hash")

    def __init__(self, mapping: Dict[int, int]):
        m = {int(k): int(v) for k, v in dict(mapping).items()}
        if set(m.values()) != set(m):
            raise ValueError("mapping is not a bijection of its ground set")
        self._map = m
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, ground: Iterable[int]) -> "Permutation":
        return cls({x: x for x in ground})

    @classmethod
    def from_cycles(cls, cycles_: Iterable[Sequence[int]], ground: Optional[Iterable[int]] = None) -> "Permutation":
        m: Dict[int, int] = {}
        for cyc in cycles_:
            cyc = list(cyc)
            for i, x in enumerate(cyc):
                if x in m:
                    raise ValueError(f"label {x} appears twice")
                m[x] = cyc[(i + 1) % len(cyc)]
        if ground is not None:
            ground = set(ground)
            extra = set(m) - ground
            if extra:
                raise ValueError(f"labels {sorted(extra)} are outside the ground set")
            for x in ground:
                m.setdefault(x, x)
        return cls(m)

    @classmethod
    def from_images(cls, domain: Iterable[int], images: Iterable[int]) -> "Permutation":
        """Two-line form: ``domain[i] -> images[i]``."""
        domain, images = list(domain), list(images)
        if len(domain) != len(images):
            raise ValueError("two-line form rows have different lengths")
        if len(set(domain)) != len(domain):
            raise ValueError("repeated label in the top row")
        return cls(dict(zip(domain, images)))

    @classmethod
    def parse(cls, text: str, ground: Optional[Iterable[int]] = None) -> "Permutation":
        """Parse cycle notation such as ``"(1 2)(3 6)(4 7)(5 8)"``."""
        stripped = _CYCLE_RE.sub("", text)
        if stripped.strip():
            raise ParseError(f"unexpected text outside cycles: {stripped.strip()!r}")
        cycs = []
        for body in _CYCLE_RE.findall(text):
            try:
                cyc = [int(t) for t in body.replace(",", " ").split()]
            except ValueError:
                raise ParseError(f"non-integer label in cycle ({body})") from None
            if cyc:
                cycs.append(cyc)
        try:
            return cls.from_cycles(cycs, ground)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    # -- basic protocol ---------------------------------------------------

    @property
    def ground(self) -> frozenset:
        return frozenset(self._map)

    def __len__(self):
        return len(self._map)

    def __call__(self, x: int) -> int:
        return self._map[x]

    def items(self):
        return self._map.items()

    def as_dict(self) -> Dict[int, int]:
        return dict(self._map)

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._map == other._map

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        m, o = self._map, other._map
        if m.keys() != o.keys():
            # labels missing from one factor are its fixed points
            return Permutation({x: m.get(o.get(x, x), o.get(x, x)) for x in m.keys() | o.keys()})
        return Permutation({x: m[y] for x, y in o.items()})

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self._map)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        return Permutation({v: k for k, v in self._map.items()})

    # -- cycle structure --------------------------------------------------

    def cycles(self) -> List[Tuple[int, ...]]:
        seen = set()
        out = []
        for start in sorted(self._map):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self._map[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self._map[x]
            out.append(tuple(cyc))
        return out

    def cycle_of(self, x: int) -> Tuple[int, ...]:
        """The cycle through ``x``, starting at ``x``."""
        cyc = [x]
        y = self._map[x]
        while y != x:
            cyc.append(y)
            y = self._map[y]
        return tuple(cyc)

    def num_cycles(self) -> int:
        return len(self.cycles())

    def cycle_type(self) -> CycleType:
        return CycleType(len(c) for c in self.cycles())

    def is_even(self) -> bool:
        return (len(self._map) - self.num_cycles()) % 2 == 0

    def parity(self) -> str:
        return "even" if self.is_even() else "odd"

    def is_identity(self) -> bool:
        return all(k == v for k, v in self._map.items())

    def is_single_cycle(self) -> bool:
        return len(self._map) > 0 and self.num_cycles() == 1

    def is_fixed_point_free_involution(self) -> bool:
        m = self._map
        return all(m[x] != x and m[m[x]] == x for x in m)

    def restrict(self, subset: Iterable[int]) -> "Permutation":
        """First-return map on ``subset``: ``x -> p^k(x)`` for the least ``k > 0`` landing in ``subset``."""
        subset = set(subset)
        if not subset <= self._map.keys():
            raise ValueError("subset is not contained in the ground set")
        m = self._map
        out = {}
        for x in subset:
            y = m[x]
            while y not in subset:
                y = m[y]
            out[x] = y
        return Permutation(out)

    def conjugate_by(self, a: "Permutation") -> "Permutation":
        """``a * self * a**-1``, i.e. relabel every ``x`` as ``a(x)``."""
        if a._map.keys() != self._map.keys():
            raise ValueError("cannot conjugate by a permutation on a different ground set")
        am = a._map
        return Permutation({am[x]: am[y] for x, y in self._map.items()})

    def __str__(self):
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles())

    def __repr__(self):
        return f"Permutation.parse({str(self)!r})"


# Functional aliases; the methods above do the work.

def compose(p: Permutation, q: Permutation) -> Permutation:
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def cycles(p: Permutation) -> List[Tuple[int, ...]]:
    return p.cycles()


def cycle_type(p: Permutation) -> CycleType:
    return p.cycle_type()


def parity(p: Permutation) -> str:
    return p.parity()


def is_single_cycle(p: Permutation) -> bool:
    return p.is_single_cycle()


def is_fixed_point_free_involution(p: Permutation) -> bool:
    return p.is_fixed_point_free_involution()


def conjugate(a: Permutation, p: Permutation) -> Permutation:
    """``a p a^-1``."""
    return p.conjugate_by(a)


def orbits(*perms: Permutation) -> List[frozenset]:
    """Orbits of the group generated by ``perms`` (all on one ground set)."""
    if not perms:
        return []
    ground = perms[0].ground
    for p in perms[1:]:
        if p.ground != ground:
            raise ValueError("generators live on different ground sets")
    seen = set()
    out = []
    for start in sorted(ground):
        if start in seen:
            continue
        orb = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for p in perms:
                y = p(x)
                if y not in orb:
                    orb.add(y)
                    stack.append(y)
        seen |= orb
        out.append(frozenset(orb))
    return out


def is_transitive(*perms: Permutation) -> bool:
    return len(orbits(*perms)) <= 1
