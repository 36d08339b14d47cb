"""
Plane permutations ``(s, pi)`` and their k-face generalisation.

A plane permutation pairs a single cycle ``s = (s_0 s_1 ... s_{n-1})`` with an
arbitrary permutation ``pi`` of the same labels. Its diagonal is
``D = s * pi**-1``; in the two-row picture

    s_0      s_1      ...  s_{n-1}
    pi(s_0)  pi(s_1)  ...  pi(s_{n-1})

``D`` sends each bottom entry to the top entry one column to the right
(cyclically). ``s`` is stored starting at its minimum label, so ``s_0`` is 1
whenever 1 is a label.

Rearrangements ``chi_h`` permute the columns ``1..n-1`` while keeping every
diagonal pair, so the diagonal never changes. A *transpose* swaps two adjacent
column blocks and changes the number of ``pi``-cycles by -2, 0 or +2,
according to one of six configurations (:class:`TransposeCase`).
"""

from __future__ import annotations

import enum
from typing import List, Sequence, Tuple

from .errors import DisconnectedError, InvariantError, ParseError
from .perm import Permutation, is_transitive

__all__ = [
    "KCycPlanePermutation",
    "PlanePermutation",
    "TransposeCase",
    "apply_sequence",
    "classify_transpose",
    "diagonal",
    "equivalent",
    "format_two_line",
    "genus",
    "inverse_transpose_indices",
    "parse_two_line",
    "transpose",
    "transpose_sequence",
]


class KCycPlanePermutation:
    """Pair ``(s, pi)`` where ``s`` has ``k >= 1`` cycles.

    An embedding with ``k`` faces is the k-cyc plane permutation
    ``(gamma, beta)`` whose diagonal is the edge involution ``alpha``.
    """

    __slots__ = ("s", "pi")

    def __init__(self, s: Permutation, pi: Permutation):
        if s.ground != pi.ground:
            raise ValueError("s and pi must share a ground set")
        if len(s) == 0:
            raise ValueError("empty plane permutation")
        self.s = s
        self.pi = pi

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def k(self) -> int:
        return self.s.num_cycles()

    @property
    def ground(self) -> frozenset:
        return self.s.ground

    def diagonal(self) -> Permutation:
        return self.s * self.pi.inverse()

    def blocks(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """One two-row block per cycle of ``s``: ``(top, bottom)`` with ``bottom[i] = pi(top[i])``."""
        return [(c, tuple(self.pi(x) for x in c)) for c in self.s.cycles()]

    def genus(self) -> int:
        return genus(self)

    def __eq__(self, other):
        if not isinstance(other, KCycPlanePermutation):
            return NotImplemented
        return self.s == other.s and self.pi == other.pi

    def __hash__(self):
        return hash((self.s, self.pi))

    def __repr__(self):
        return f"{type(self).__name__}(s={str(self.s)!r}, pi={str(self.pi)!r})"


class PlanePermutation(KCycPlanePermutation):
    """Plane permutation: ``s`` is a single cycle on the whole ground set."""

    __slots__ = ("sequence",)

    def __init__(self, s: Permutation, pi: Permutation):
        super().__init__(s, pi)
        if not s.is_single_cycle():
            raise ValueError("s must be a single cycle")
        self.sequence: Tuple[int, ...] = s.cycle_of(min(s.ground))

    @classmethod
    def from_two_line(cls, top: Sequence[int], bottom: Sequence[int]) -> "PlanePermutation":
        """``top`` lists ``s`` in cycle order; ``pi(top[i]) = bottom[i]``."""
        top = list(top)
        if len(set(top)) != len(top):
            raise ValueError("repeated label in s")
        s = Permutation.from_cycles([top])
        pi = Permutation.from_images(top, bottom)
        return cls(s, pi)

    def two_line(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return self.sequence, tuple(self.pi(x) for x in self.sequence)


# -- operations ---------------------------------------------------------------


def diagonal(pp: KCycPlanePermutation) -> Permutation:
    return pp.diagonal()


def apply_sequence(pp: PlanePermutation, h: Sequence[int]) -> PlanePermutation:
    """``chi_h``: reorder columns ``1..n-1`` by ``h``, keeping the diagonal.

    ``s^h = (s_0, s_{h_1}, ..., s_{h_{n-1}})`` and ``pi^h = D**-1 * s^h``.
    ``h`` must be a permutation of ``1..n-1``.
    """
    n = pp.n
    h = list(h)
    if sorted(h) != list(range(1, n)):
        raise ValueError(f"h must be a permutation of 1..{n - 1}, got {h}")
    seq = pp.sequence
    new_seq = [seq[0]] + [seq[t] for t in h]
    s_h = Permutation.from_cycles([new_seq])
    pi_h = pp.diagonal().inverse() * s_h
    return PlanePermutation(s_h, pi_h)


def transpose_sequence(n: int, i: int, j: int, l: int) -> List[int]:
    """The sequence ``h = (i, j, j+1, l)``: columns ``[i..j]`` and ``[j+1..l]`` swapped."""
    _check_transpose_indices(n, i, j, l)
    return (list(range(1, i)) + list(range(j + 1, l + 1)) + list(range(i, j + 1))
            + list(range(l + 1, n)))


def _check_transpose_indices(n, i, j, l):
    if not (0 < i <= j < l < n):
        raise ValueError(f"need 0 < i <= j < l < n, got i={i}, j={j}, l={l}, n={n}")


def transpose(pp: PlanePermutation, i: int, j: int, l: int) -> PlanePermutation:
    return apply_sequence(pp, transpose_sequence(pp.n, i, j, l))


def inverse_transpose_indices(i: int, j: int, l: int) -> Tuple[int, int, int]:
    """Indices of the transpose undoing ``(i, j, j+1, l)``."""
    return i, i + l - j - 1, l


class TransposeCase(enum.IntEnum):
    """Configuration of ``a = s_{i-1}``, ``b = s_j``, ``c = s_l`` among the ``pi``-cycles."""

    CASE1 = 1  # three distinct cycles
    CASE2 = 2  # one cycle, order (a .. c .. b ..)
    CASE3 = 3  # one cycle, order (a .. b .. c ..)
    CASE4 = 4  # (a .. b ..)(c ..)
    CASE5 = 5  # (a ..)(b .. c ..)
    CASE6 = 6  # (a .. c ..)(b ..)

    @property
    def delta_cycles(self) -> int:
        return {1: -2, 2: 2}.get(int(self), 0)


def classify_points(pi: Permutation, a: int, b: int, c: int) -> TransposeCase:
    """Six-way classification of three distinct labels against the cycles of ``pi``."""
    cyc_a = pi.cycle_of(a)
    in_a = set(cyc_a)
    b_in, c_in = b in in_a, c in in_a
    if b_in and c_in:
        return TransposeCase.CASE3 if cyc_a.index(b) < cyc_a.index(c) else TransposeCase.CASE2
    if b_in:
        return TransposeCase.CASE4
    if c_in:
        return TransposeCase.CASE6
    if c in pi.cycle_of(b):
        return TransposeCase.CASE5
    return TransposeCase.CASE1


def classify_transpose(pp: PlanePermutation, i: int, j: int, l: int) -> TransposeCase:
    _check_transpose_indices(pp.n, i, j, l)
    seq = pp.sequence
    return classify_points(pp.pi, seq[i - 1], seq[j], seq[l])


def equivalent(pp1: PlanePermutation, pp2: PlanePermutation) -> bool:
    """Is there ``alpha`` with ``alpha(1) = 1`` conjugating ``pp2`` onto ``pp1``?

    Aligning the two ``s`` cycles at 1 forces ``alpha``; only ``pi`` is left to check.
    """
    if 1 not in pp1.ground or 1 not in pp2.ground:
        raise ValueError("equivalence is rooted at label 1, which is absent")
    if pp1.ground != pp2.ground:
        return False
    alpha = Permutation(dict(zip(pp2.sequence, pp1.sequence)))
    return pp2.pi.conjugate_by(alpha) == pp1.pi


def genus(pp: KCycPlanePermutation) -> int:
    """Genus from ``l(s) + l(pi) + l(D) - n = 2 - 2g``."""
    if not is_transitive(pp.s, pp.pi):
        raise DisconnectedError("s and pi do not act transitively")
    chi = pp.s.num_cycles() + pp.pi.num_cycles() + pp.diagonal().num_cycles() - pp.n
    two_g = 2 - chi
    if two_g < 0 or two_g % 2:
        raise InvariantError(f"Euler characteristic {chi} gives a non-integral or negative genus")
    return two_g // 2


# -- text format ------------------------------------------------------------------


def parse_two_line(text: str) -> PlanePermutation:
    """Parse ``s: a0 a1 ...`` / ``pi: b0 b1 ...`` (``pi(a_i) = b_i``); ``#`` starts a comment."""
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in ("s", "pi"):
            raise ParseError("expected 's:' or 'pi:' row", lineno, 1)
        if key in rows:
            raise ParseError(f"duplicate '{key}:' row", lineno, 1)
        vals = []
        col = raw.index(":") + 2
        for tok in rest.split():
            try:
                vals.append(int(tok))
            except ValueError:
                raise ParseError(f"non-integer label {tok!r}", lineno, raw.index(tok, col - 1) + 1) from None
        rows[key] = (lineno, vals)
    if "s" not in rows or "pi" not in rows:
        raise ParseError("two-line format needs both 's:' and 'pi:' rows")
    (ls, top), (lp, bottom) = rows["s"], rows["pi"]
    if len(top) != len(bottom):
        raise ParseError(f"rows have {len(top)} and {len(bottom)} entries", lp)
    if len(set(top)) != len(top):
        raise ParseError("repeated label in 's:' row", ls)
    if sorted(top) != sorted(bottom):
        raise ParseError("'pi:' row is not a rearrangement of the 's:' row", lp)
    return PlanePermutation.from_two_line(top, bottom)


def format_two_line(pp: PlanePermutation) -> str:
    top, bottom = pp.two_line()
    return "s: " + " ".join(map(str, top)) + "\npi: " + " ".join(map(str, bottom)) + "\n"
