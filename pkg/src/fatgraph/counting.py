"""
Exact counts of one-face factorizations.

Two normalizations appear and must not be confused:

* **fixed diagonal** -- ``f_count(eta, lam, n)`` is the number of plane
  permutations ``(s, pi)`` with a *fixed* diagonal ``D`` of type ``lam`` and
  ``pi`` of type ``eta``; ``p_count(k, lam, n)`` sums these over
  ``l(eta) = k``. These are the quantities that count vertex
  re-embeddings, and the closed form :func:`p1_closed_form` evaluates
  ``p_count(1, lam, n)``.
* **fixed long cycle** -- ``long_f(eta, lam)`` counts permutations ``pi`` of
  type ``eta`` with ``(1 2 ... n) * pi**-1`` of type ``lam``. The split/merge
  recurrences are exact in this normalization.

Both count the same set of triples ``(s, pi, D)``, divided by the size of the
fixed conjugacy class, so

    f_count(eta, lam, n) = long_f(eta, lam) * (n-1)! / |C_lam|.

Recurrence conventions (pinned against the brute-force oracles for all
``n <= 7``): the sum over ``mu`` split from ``eta`` runs over *distinct*
partitions ``mu``, each weighted by ``kappa(mu, eta)``, the number of ways to
choose ``l(mu) - l(eta) + 1`` blocks of ``mu`` -- equal parts counted as
distinguishable -- whose merge gives ``eta``. Base cases of the recurrences
(``n + 1 - l(eta) - l(lam) = 0``, the planar case) come from the
closed form for planar factorizations of a long cycle,
:func:`planar_long_count`; the oracle can be swapped in to cross-check.

All counts are Python integers; probabilities and bounds are ``Fraction``.
"""

from __future__ import annotations

import itertools
import math
import threading
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

from .errors import BudgetExceeded
from .perm import CycleType, Permutation

Partition = CycleType

ORACLE_LIMIT = 9

__all__ = [
    "ORACLE_LIMIT",
    "CountTable",
    "Partition",
    "brute_force_f",
    "brute_force_long_f",
    "brute_force_long_p",
    "brute_force_p",
    "class_size",
    "even_cycle_factorizations",
    "f_count",
    "kappa",
    "long_f",
    "long_p",
    "max_k",
    "p1_closed_form",
    "p_count",
    "partitions",
    "planar_long_count",
    "r_v_reversed_closed_form",
    "splits",
    "zagier_bounds",
]


# -- partition combinatorics ---------------------------------------------------


def partitions(n: int, max_part: Optional[int] = None) -> Iterator[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + tuple(rest))


def class_size(lam) -> int:
    """Number of permutations of cycle type ``lam``: ``n! / z_lam``."""
    lam = Partition(lam)
    z = 1
    for part, mult in lam.multiplicities().items():
        z *= part ** mult * math.factorial(mult)
    return math.factorial(lam.n) // z


def _partitions_exact(b: int, parts: int, max_part: int) -> Iterator[Tuple[int, ...]]:
    if parts == 0:
        if b == 0:
            yield ()
        return
    for first in range(min(b - parts + 1, max_part), 0, -1):
        for rest in _partitions_exact(b - first, parts - 1, first):
            yield (first,) + rest


def kappa(mu, eta) -> int:
    """Ways to merge ``l(mu) - l(eta) + 1`` labeled blocks of ``mu`` into one and obtain ``eta``."""
    mu, eta = Partition(mu), Partition(eta)
    if mu.n != eta.n:
        raise ValueError(f"size mismatch: |mu| = {mu.n}, |eta| = {eta.n}")
    take = mu.length - eta.length + 1
    if take < 2:
        return 0
    mult = sorted(mu.multiplicities().items())
    target = Counter(eta)
    total = 0

    def walk(idx, left, chosen, weight):
        nonlocal total
        if left == 0:
            rest = Counter(mu)
            rest.subtract(chosen)
            rest[sum(size * c for size, c in chosen.items())] += 1
            if +rest == target:
                total += weight
            return
        if idx == len(mult):
            return
        size, m = mult[idx]
        for c in range(min(m, left), -1, -1):
            if c:
                chosen[size] = c
            walk(idx + 1, left - c, chosen, weight * math.comb(m, c))
            chosen.pop(size, None)

    walk(0, take, {}, 1)
    return total


def splits(eta, parts: int) -> List[Tuple[Partition, int]]:
    """Distinct ``mu`` obtained by splitting one block of ``eta`` into ``parts`` pieces.

    Each ``mu`` comes paired with ``kappa(mu, eta)``, the weight it carries
    in the recurrences.

        >>> splits((5,), 3)
        [(CycleType(3, 1, 1), 1), (CycleType(2, 2, 1), 1)]
    """
    if parts < 3 or parts % 2 == 0:
        raise ValueError(f"parts must be odd and >= 3, got {parts}")
    eta = Partition(eta)
    seen = []
    for size in sorted(set(eta), reverse=True):
        rest = list(eta)
        rest.remove(size)
        for piece in _partitions_exact(size, parts, size):
            mu = Partition(rest + list(piece))
            if mu not in seen:
                seen.append(mu)
    return [(mu, kappa(mu, eta)) for mu in sorted(seen, reverse=True)]


# -- brute-force oracles ---------------------------------------------------------


def _check_oracle(n: int, limit: Optional[int]):
    limit = ORACLE_LIMIT if limit is None else limit
    if n > limit:
        raise BudgetExceeded(f"brute-force oracle refuses n = {n} (limit {limit})")


def _cycle_type_list(perm) -> Tuple[int, ...]:
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            c = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                c += 1
            out.append(c)
    out.sort(reverse=True)
    return tuple(out)


def _canonical_of_type(lam: Partition) -> List[int]:
    """0-based permutation with consecutive cycles of the sizes in ``lam``."""
    perm = [0] * lam.n
    base = 0
    for part in lam:
        for t in range(part):
            perm[base + t] = base + (t + 1) % part
        base += part
    return perm


def _long_chunk(args) -> Counter:
    n, first = args
    # s = (0 1 ... n-1); D(pi(x)) = s(x)
    counts = Counter()
    rest = [x for x in range(n) if x != first]
    d = [0] * n
    for tail in itertools.permutations(rest):
        pi = (first,) + tail
        for x in range(n):
            d[pi[x]] = (x + 1) % n
        counts[(_cycle_type_list(pi), _cycle_type_list(d))] += 1
    return counts


_LONG_TABLES: Dict[int, Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int]] = {}
_LONG_LOCK = threading.Lock()


def _long_table(n: int, jobs: int = 1):
    """Joint (type of pi, type of diagonal) counts over all of ``S_n``; cached per ``n``."""
    table = _LONG_TABLES.get(n)
    if table is None:
        chunks = [(n, first) for first in range(n)]
        total = Counter()
        if jobs > 1 and n >= 7:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                for part in ex.map(_long_chunk, chunks):
                    total.update(part)
        else:
            for ch in chunks:
                total.update(_long_chunk(ch))
        table = dict(total)
        with _LONG_LOCK:
            table = _LONG_TABLES.setdefault(n, table)
    return table


def brute_force_long_f(eta, lam, n: Optional[int] = None, limit: Optional[int] = None, jobs: int = 1) -> int:
    """``#{pi of type eta : (1 2 ... n) * pi**-1 has type lam}`` by enumerating all of ``S_n``."""
    eta, lam = Partition(eta), Partition(lam)
    n = _size(n, eta, lam)
    _check_oracle(n, limit)
    return _long_table(n, jobs).get((tuple(eta), tuple(lam)), 0)


def brute_force_long_p(k: int, lam, n: Optional[int] = None, limit: Optional[int] = None, jobs: int = 1) -> int:
    lam = Partition(lam)
    n = _size(n, lam)
    _check_oracle(n, limit)
    return sum(v for (e, l), v in _long_table(n, jobs).items() if l == tuple(lam) and len(e) == k)


@lru_cache(maxsize=None)
def _fixed_diagonal_table(lam: Partition) -> Dict[Tuple[int, ...], int]:
    # U_D for the canonical D of type lam: every n-cycle s, pi = D**-1 * s.
    n = lam.n
    d = _canonical_of_type(lam)
    d_inv = [0] * n
    for x, y in enumerate(d):
        d_inv[y] = x
    counts = Counter()
    s = [0] * n
    for tail in itertools.permutations(range(1, n)):
        prev = 0
        for x in tail:
            s[prev] = x
            prev = x
        s[prev] = 0
        pi = [d_inv[s[x]] for x in range(n)]
        counts[_cycle_type_list(pi)] += 1
    return dict(counts)


def brute_force_f(eta, lam, n: Optional[int] = None, limit: Optional[int] = None) -> int:
    """``|U_lam^eta|`` by direct enumeration of all ``(s, pi)`` with a fixed diagonal of type ``lam``."""
    eta, lam = Partition(eta), Partition(lam)
    n = _size(n, eta, lam)
    _check_oracle(n, limit)
    return _fixed_diagonal_table(lam).get(tuple(eta), 0)


def brute_force_p(k: int, lam, n: Optional[int] = None, limit: Optional[int] = None) -> int:
    lam = Partition(lam)
    n = _size(n, lam)
    _check_oracle(n, limit)
    return sum(v for e, v in _fixed_diagonal_table(lam).items() if len(e) == k)


def _size(n, *parts) -> int:
    sizes = {p.n for p in parts}
    if n is not None:
        sizes.add(n)
    if len(sizes) != 1:
        raise ValueError(f"size mismatch among partitions / n: {sorted(sizes)}")
    return sizes.pop()


# -- recurrences ----------------------------------------------------------------------


def planar_long_count(eta, lam) -> int:
    """``long_f(eta, lam)`` when ``l(eta) + l(lam) = n + 1``:

    ``n (l(eta) - 1)! (l(lam) - 1)! / (|Aut eta| |Aut lam|)``, where
    ``|Aut|`` is the product of factorials of the part multiplicities.
    """
    eta, lam = Partition(eta), Partition(lam)
    n = _size(None, eta, lam)
    if eta.length + lam.length != n + 1:
        raise ValueError("not a planar pair of types")

    def aut(p):
        return math.prod(math.factorial(m) for m in p.multiplicities().values())

    val, rem = divmod(n * math.factorial(eta.length - 1) * math.factorial(lam.length - 1), aut(eta) * aut(lam))
    if rem:
        raise ArithmeticError(f"planar count for {eta}, {lam} is not integral")
    return val


class CountTable:
    """Memo for the long-cycle recurrences.

    ``oracle_bases=True`` takes the planar base cases from enumeration
    instead of :func:`planar_long_count` (limited to ``n <= limit``).
    Entries never change once written and a racing recomputation writes the
    same value, so concurrent readers need no lock.
    """

    def __init__(self, oracle_bases: bool = False, limit: Optional[int] = None, jobs: int = 1):
        self.oracle_bases = oracle_bases
        self.limit = limit
        self.jobs = jobs
        self._f: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], int] = {}
        self._p: Dict[Tuple[int, Tuple[int, ...]], int] = {}

    def _base_f(self, eta: Partition, lam: Partition) -> int:
        if self.oracle_bases:
            _check_oracle(eta.n, self.limit)
            return _long_table(eta.n, self.jobs).get((tuple(eta), tuple(lam)), 0)
        return planar_long_count(eta, lam)

    def _base_p(self, k: int, lam: Partition) -> int:
        n = lam.n
        if self.oracle_bases:
            _check_oracle(n, self.limit)
            return sum(v for (e, l), v in _long_table(n, self.jobs).items() if l == tuple(lam) and len(e) == k)
        return sum(planar_long_count(eta, lam) for eta in partitions(n) if eta.length == k)

    def long_f(self, eta: Partition, lam: Partition) -> int:
        key = (tuple(eta), tuple(lam))
        hit = self._f.get(key)
        if hit is not None:
            return hit
        n = eta.n
        denom = n + 1 - eta.length - lam.length
        if denom < 0 or denom % 2:
            val = 0
        elif denom == 0:
            val = self._base_f(eta, lam)
        else:
            total = 0
            for i in range(1, (n - eta.length) // 2 + 1):
                for mu, kap in splits(eta, 2 * i + 1):
                    total += kap * self.long_f(mu, lam)
            for i in range(1, (n - lam.length) // 2 + 1):
                for mu, kap in splits(lam, 2 * i + 1):
                    total += kap * self.long_f(mu, eta)
            val, rem = divmod(total, denom)
            if rem:
                raise ArithmeticError(f"recurrence for f_{eta},{lam} is not integral")
        self._f[key] = val
        return val

    def long_p(self, k: int, lam: Partition) -> int:
        key = (k, tuple(lam))
        hit = self._p.get(key)
        if hit is not None:
            return hit
        n = lam.n
        denom = n + 1 - k - lam.length
        if k < 1 or k > n or denom < 0 or denom % 2:
            val = 0
        elif denom == 0:
            val = self._base_p(k, lam)
        else:
            total = 0
            for i in range(1, (n - k) // 2 + 1):
                total += math.comb(k + 2 * i, k - 1) * self.long_p(k + 2 * i, lam)
            for i in range(1, (n - lam.length) // 2 + 1):
                for mu, kap in splits(lam, 2 * i + 1):
                    total += kap * self.long_p(k, mu)
            val, rem = divmod(total, denom)
            if rem:
                raise ArithmeticError(f"recurrence for p_{k}^{lam} is not integral")
        self._p[key] = val
        return val


_DEFAULT_TABLE = CountTable()


def long_f(eta, lam, table: Optional[CountTable] = None) -> int:
    """Factorizations of ``(1 2 ... n)`` as (type ``lam``) x (type ``eta``)**-1, by recurrence."""
    eta, lam = Partition(eta), Partition(lam)
    _size(None, eta, lam)
    return (table or _DEFAULT_TABLE).long_f(eta, lam)


def long_p(k: int, lam, table: Optional[CountTable] = None) -> int:
    lam = Partition(lam)
    return (table or _DEFAULT_TABLE).long_p(k, lam)


def _to_fixed_diagonal(value: int, lam: Partition) -> int:
    num = value * math.factorial(lam.n - 1)
    q, r = divmod(num, class_size(lam))
    if r:
        raise ArithmeticError(f"normalization to fixed diagonal of type {lam} is not integral")
    return q


def f_count(eta, lam, n: Optional[int] = None, table: Optional[CountTable] = None) -> int:
    """``f_{eta,lam}(n)``: plane permutations with ``pi`` of type ``eta`` and a fixed diagonal of type ``lam``."""
    eta, lam = Partition(eta), Partition(lam)
    _size(n, eta, lam)
    return _to_fixed_diagonal(long_f(eta, lam, table), lam)


def p_count(k: int, lam, n: Optional[int] = None, table: Optional[CountTable] = None) -> int:
    """``p_k^lam(n)``: plane permutations with a fixed diagonal of type ``lam`` whose ``pi`` has ``k`` cycles."""
    lam = Partition(lam)
    n = _size(n, lam)
    if k < 1 or k > max_k(lam, n):
        return 0
    return _to_fixed_diagonal(long_p(k, lam, table), lam)


def max_k(lam, n: Optional[int] = None) -> int:
    """Largest ``k`` with ``p_k^lam(n) != 0``: ``n + 1 - l(lam)``."""
    lam = Partition(lam)
    n = _size(n, lam)
    return n + 1 - lam.length


# -- closed forms and bounds ---------------------------------------------------------------


def _gbinom(x: int, r: int) -> int:
    """Binomial coefficient via the falling factorial, valid for negative ``x``."""
    if r < 0:
        return 0
    num = 1
    for t in range(r):
        num *= x - t
    return num // math.factorial(r)


def p1_closed_form(lam, k: Optional[int] = None) -> int:
    """Two-n-cycle factorizations of a fixed permutation of type ``lam``, by the alternating character sum.

    >>> p1_closed_form((5,)), p1_closed_form((3, 1)), p1_closed_form((1, 1, 1))
    (8, 3, 2)
    """
    lam = Partition(lam)
    k = _size(k, lam)
    a = lam.multiplicities()
    total = Fraction(0)
    for i in range(k):
        inner = 0
        sizes = [1] + sorted(j for j in a if 2 <= j <= i)
        for sol in _weighted_solutions(sizes, i):
            term = _gbinom(a.get(1, 0) - 1, sol.get(1, 0))
            for j, r in sol.items():
                if j != 1:
                    term *= math.comb(a[j], r)
            sign = sum(r for j, r in sol.items() if j % 2 == 0) % 2
            inner += -term if sign else term
        total += Fraction(math.factorial(i) * math.factorial(k - 1 - i), k) * inner
    if total.denominator != 1:
        raise ArithmeticError(f"closed form for {lam} is not integral: {total}")
    return int(total)


def _weighted_solutions(sizes: List[int], target: int) -> Iterator[Dict[int, int]]:
    """Non-negative ``r_j`` (``j`` in ``sizes``) with ``sum j * r_j = target``; unlisted ``r_j`` are 0."""
    if not sizes:
        if target == 0:
            yield {}
        return
    j, rest = sizes[0], sizes[1:]
    for r in range(target // j + 1):
        for sol in _weighted_solutions(rest, target - j * r):
            if r:
                sol = dict(sol)
                sol[j] = r
            yield sol


def zagier_bounds(k: int, a1: int) -> Tuple[Fraction, Fraction]:
    """``2(k-1)!/(k-a1+2) <= p_1^lam(k) <= 2(k-1)!/(k-a1+19/29)`` for ``lam`` with ``a1`` fixed points."""
    if k < 1:
        raise ValueError("k must be positive")
    top = 2 * math.factorial(k - 1)
    return Fraction(top, k - a1 + 2), Fraction(top) / (k - a1 + Fraction(19, 29))


def r_v_reversed_closed_form(d: int) -> int:
    """One-face rearrangements of a degree-``d`` vertex whose rotation runs against its face order."""
    if d < 1:
        raise ValueError("degree must be positive")
    base = Fraction(2 * math.factorial(d - 1), d + 1)
    if d % 2:
        val = base
    elif d % 4 == 0:
        val = base * (1 - Fraction(1, math.comb(d, d // 2)))
    else:
        val = base * (1 + Fraction(1, math.comb(d, d // 2)))
    if val.denominator != 1:
        raise ArithmeticError(f"closed form for d = {d} is not integral")
    return int(val)


def even_cycle_factorizations(w: Permutation, limit: Optional[int] = None) -> int:
    """Ordered pairs ``(c1, c2)`` of full cycles with ``w = c1 * c2``.

    Odd ``w`` has none (the product of two n-cycles is even); that returns 0
    rather than raising.
    """
    labels = sorted(w.ground)
    n = len(labels)
    _check_oracle(n, limit)
    if not w.is_even():
        return 0
    idx = {x: i for i, x in enumerate(labels)}
    wl = [idx[w(x)] for x in labels]
    count = 0
    c2_inv = [0] * n
    for tail in itertools.permutations(range(1, n)):
        prev = 0
        for x in tail:
            c2_inv[x] = prev
            prev = x
        c2_inv[0] = prev
        # c1 = w * c2**-1 must be one n-cycle
        x, steps = 0, 0
        while True:
            x = wl[c2_inv[x]]
            steps += 1
            if x == 0:
                break
        if steps == n:
            count += 1
    return count
