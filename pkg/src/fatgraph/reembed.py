"""
Genus change under re-embedding (rearranging the half edges around vertices).

Rotating the half edges of ``v`` by a new cyclic order ``theta`` leaves every
face away from ``v`` intact; the faces through ``v`` become the cycles of
``D_v * theta``, where ``D_v`` is the diagonal of the local plane
permutation (see :func:`fatgraph.maps.vertex_local`). With ``q`` faces at
``v`` before, a change of genus by ``dg`` means ``q - 2*dg`` faces after, so

    R_v(dg) = p_count(q - 2*dg, lam(D_v), deg(v)).

The sign is fixed by Euler's formula (more faces, lower genus) and checked
against :func:`genus_distribution_bruteforce`, which re-traces every face of
every rearranged embedding and shares no code with the counting path.

Distributions count cyclic orders, so they total ``(deg(v) - 1)!``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .counting import f_count, p_count, zagier_bounds
from .errors import BudgetExceeded, InvariantError
from .maps import Embedding, VertexRef, facial_disjoint, reembed_vertex, vertex_local
from .perm import CycleType, Permutation
from .planeperm import TransposeCase, classify_points

__all__ = [
    "DEFAULT_ROTATION_BUDGET",
    "CertificateReport",
    "GenusDistribution",
    "GuidedMove",
    "RangeEstimate",
    "VertexCertificate",
    "check_locally_maximal",
    "check_min_genus_condition",
    "count_delta",
    "count_distribution",
    "count_eta",
    "delta_range",
    "dsh_count",
    "enumerate_reembeddings",
    "estimate_range",
    "estimate_range_covers",
    "exists_alternative",
    "genus_distribution_bruteforce",
    "guided_move",
    "le_count",
    "le_count_vertices",
    "prob_bounds",
    "prob_preserve",
]

DEFAULT_ROTATION_BUDGET = math.factorial(9)


@dataclass(frozen=True)
class GenusDistribution:
    vertex: str
    histogram: Dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.histogram.values())

    def __getitem__(self, dg: int) -> int:
        return self.histogram.get(dg, 0)

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "total": str(self.total),
            "histogram": {str(k): str(v) for k, v in sorted(self.histogram.items())},
        }


# -- brute force -----------------------------------------------------------------


def _check_budget(degree: int, budget: Optional[int]):
    orders = math.factorial(degree - 1)
    if budget is not None and orders > budget:
        raise BudgetExceeded(
            f"{orders} cyclic orders at a degree-{degree} vertex exceed the budget of {budget}; "
            "use the counting formula instead")


def _index_arrays(E: Embedding):
    labels = sorted(E.half_edges)
    idx = {x: i for i, x in enumerate(labels)}
    alpha = [idx[E.alpha(x)] for x in labels]
    beta = [idx[E.beta(x)] for x in labels]
    return labels, idx, alpha, beta


def _count_cycles(alpha: List[int], beta: List[int]) -> int:
    n = len(alpha)
    seen = bytearray(n)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        x = start
        while not seen[x]:
            seen[x] = 1
            x = alpha[beta[x]]
    return count


def _face_counts_chunk(args) -> List[Tuple[Tuple[int, ...], int]]:
    alpha, beta, rot, second = args
    beta = list(beta)
    anchor = rot[0]
    rest = [x for x in rot[1:] if x != second]
    out = []
    for tail in itertools.permutations(rest):
        order = (anchor, second) + tail
        for i, x in enumerate(order):
            beta[x] = order[(i + 1) % len(order)]
        out.append((order, _count_cycles(alpha, beta)))
    return out


def _rotation_results(E: Embedding, v: VertexRef, jobs: int, budget: Optional[int]):
    name = E.vertex_name(v)
    rot = E.vertices[name]
    _check_budget(len(rot), budget)
    labels, idx, alpha, beta = _index_arrays(E)
    irot = sorted(idx[x] for x in rot)
    f0 = E.num_faces
    if len(irot) == 1:
        return name, labels, [((irot[0],), f0)], f0
    chunks = [(alpha, beta, irot, second) for second in irot[1:]]
    if jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_face_counts_chunk, chunks))
    else:
        parts = [_face_counts_chunk(c) for c in chunks]
    return name, labels, [r for part in parts for r in part], f0


def enumerate_reembeddings(E: Embedding, v: VertexRef, jobs: int = 1,
                           budget: Optional[int] = DEFAULT_ROTATION_BUDGET) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Every cyclic order ``theta`` at ``v`` with the genus change it causes.

    Orders start at the minimum half edge and come in lexicographic order.
    """
    _, labels, results, f0 = _rotation_results(E, v, jobs, budget)
    for order, faces_after in results:
        diff = f0 - faces_after
        if diff % 2:
            raise InvariantError("face count changed by an odd amount")
        yield tuple(labels[i] for i in order), diff // 2


def genus_distribution_bruteforce(E: Embedding, v: VertexRef, jobs: int = 1,
                                  budget: Optional[int] = DEFAULT_ROTATION_BUDGET) -> GenusDistribution:
    """Histogram of genus changes over all ``(deg(v) - 1)!`` rotations at ``v``, by direct face tracing."""
    E.genus  # refuse disconnected input up front
    name = E.vertex_name(v)
    hist = Counter(dg for _, dg in enumerate_reembeddings(E, v, jobs, budget))
    return GenusDistribution(name, dict(sorted(hist.items())))


# -- counting formulas ------------------------------------------------------------------


def count_delta(E: Embedding, v: VertexRef, dg: int) -> int:
    """``R_v(dg)``: rotations at ``v`` changing the genus by ``dg``."""
    loc = vertex_local(E, v)
    return p_count(loc.q - 2 * dg, loc.lam, loc.degree)


def count_distribution(E: Embedding, v: VertexRef) -> GenusDistribution:
    """:func:`count_delta` for every attainable ``dg`` (zero entries dropped)."""
    loc = vertex_local(E, v)
    hist = {}
    lo = -((loc.degree - loc.q) // 2)
    hi = (loc.q - 1) // 2
    for dg in range(lo, hi + 1):
        c = p_count(loc.q - 2 * dg, loc.lam, loc.degree)
        if c:
            hist[dg] = c
    return GenusDistribution(loc.vertex, hist)


def count_eta(E: Embedding, v: VertexRef, eta) -> int:
    """``R_v(eta)``: rotations at ``v`` after which its face-incidence partition is ``eta``."""
    loc = vertex_local(E, v)
    eta = CycleType(eta)
    if eta.n != loc.degree:
        raise ValueError(f"|eta| = {eta.n} but deg(v) = {loc.degree}")
    return f_count(eta, loc.lam, loc.degree)


def prob_preserve(E: Embedding, v: VertexRef) -> Fraction:
    """Probability that a uniformly random rotation at ``v`` keeps the genus."""
    loc = vertex_local(E, v)
    return Fraction(count_delta(E, v, 0), math.factorial(loc.degree - 1))


def prob_bounds(E: Embedding, v: VertexRef) -> Tuple[Fraction, Fraction]:
    """``2/(deg - a1 + 2) <= prob <= 2/(deg - a1 + 19/29)``, ``a1`` = fixed points of ``D_v``.

    Meaningful for one-face embeddings.
    """
    loc = vertex_local(E, v)
    a1 = loc.lam.multiplicities().get(1, 0)
    lo, hi = zagier_bounds(loc.degree, a1)
    scale = math.factorial(loc.degree - 1)
    return lo / scale, hi / scale


def exists_alternative(E: Embedding, v: VertexRef) -> bool:
    """Does a second rotation at ``v`` keep the genus? Always true at degree >= 4 in one-face maps."""
    return count_delta(E, v, 0) >= 2


def delta_range(E: Embedding, v: VertexRef) -> Tuple[int, int]:
    """Every genus change in ``[lo, hi]`` is reachable by re-embedding ``v`` alone."""
    loc = vertex_local(E, v)
    lo = -((loc.degree + 1 - loc.lam.length - loc.q) // 2)
    hi = (loc.q - 1) // 2
    return lo, hi


# -- range estimates -------------------------------------------------------------------


@dataclass(frozen=True)
class RangeEstimate:
    """``g + t1 >= g_min`` and ``g + t2 <= g_max`` for the graph of the embedding."""

    genus: int
    t1: int
    t2: int
    per_vertex: Dict[str, Tuple[int, int]]
    mode: str = "single-vertex"
    lower_set: Tuple[str, ...] = ()
    upper_set: Tuple[str, ...] = ()

    @property
    def interval(self) -> Tuple[int, int]:
        return self.genus + self.t1, self.genus + self.t2

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "interval": list(self.interval),
            "lower_set": list(self.lower_set),
            "mode": self.mode,
            "per_vertex": {k: list(v) for k, v in self.per_vertex.items()},
            "t1": self.t1,
            "t2": self.t2,
            "upper_set": list(self.upper_set),
        }


def estimate_range(E: Embedding) -> RangeEstimate:
    g = E.genus
    per = {name: delta_range(E, name) for name in E.vertices}
    lo_v = min(per, key=lambda k: per[k][0])
    hi_v = max(per, key=lambda k: per[k][1])
    return RangeEstimate(g, per[lo_v][0], per[hi_v][1], per, "single-vertex", (lo_v,), (hi_v,))


def _best_independent(names: List[str], weight: Dict[str, int], clash, exact: bool) -> Tuple[int, Tuple[str, ...]]:
    """Maximum-weight set of pairwise non-clashing vertices (exact search or greedy)."""
    cand = sorted((x for x in names if weight[x] > 0), key=lambda x: (-weight[x], names.index(x)))
    if not exact:
        chosen: List[str] = []
        for x in cand:
            if all(not clash(x, y) for y in chosen):
                chosen.append(x)
        return sum(weight[x] for x in chosen), tuple(sorted(chosen, key=names.index))

    best = [0, ()]
    suffix = [0] * (len(cand) + 1)
    for i in range(len(cand) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weight[cand[i]]

    def search(i, chosen, total):
        if total > best[0]:
            best[0], best[1] = total, tuple(chosen)
        if i == len(cand) or total + suffix[i] <= best[0]:
            return
        x = cand[i]
        if all(not clash(x, y) for y in chosen):
            chosen.append(x)
            search(i + 1, chosen, total + weight[x])
            chosen.pop()
        search(i + 1, chosen, total)

    search(0, [], 0)
    return best[0], tuple(sorted(best[1], key=names.index))


def estimate_range_covers(E: Embedding, exact_limit: int = 12) -> RangeEstimate:
    """Sum per-vertex ranges over a mutually facially disjoint vertex set, optimised at each end.

    Exact when the embedding has at most ``exact_limit`` vertices, greedy otherwise;
    ``mode`` records which. Single vertices are always admissible, so this is
    never weaker than :func:`estimate_range`.
    """
    g = E.genus
    names = list(E.vertices)
    per = {name: delta_range(E, name) for name in names}
    memo: Dict[Tuple[str, str], bool] = {}

    def clash(a, b):
        key = (a, b) if a < b else (b, a)
        if key not in memo:
            memo[key] = not facial_disjoint(E, a, b)
        return memo[key]

    exact = len(names) <= exact_limit
    down, lower_set = _best_independent(names, {k: -v[0] for k, v in per.items()}, clash, exact)
    up, upper_set = _best_independent(names, {k: v[1] for k, v in per.items()}, clash, exact)
    return RangeEstimate(g, -down, up, per, "exact" if exact else "greedy", lower_set, upper_set)


# -- certificates ----------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexCertificate:
    vertex: str
    degree: int
    q: int
    diagonal_cycles: int
    holds: bool


@dataclass(frozen=True)
class CertificateReport:
    """Per-vertex check of a *necessary* condition; passing does not certify optimality."""

    kind: str
    condition: str
    entries: List[VertexCertificate] = field(default_factory=list)

    @property
    def violations(self) -> List[str]:
        return [c.vertex for c in self.entries if not c.holds]

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "kind": self.kind,
            "note": "necessary, not sufficient",
            "passed": self.passed,
            "vertices": {
                c.vertex: {"degree": c.degree, "diagonal_cycles": c.diagonal_cycles,
                           "faces": c.q, "holds": c.holds}
                for c in self.entries
            },
            "violations": self.violations,
        }


def check_min_genus_condition(E: Embedding) -> CertificateReport:
    """Flag vertices with ``l(lam(D_v)) + q_v != deg(v) + 1``; a minimum-genus embedding has none."""
    out = []
    for name in E.vertices:
        loc = vertex_local(E, name)
        holds = loc.lam.length + loc.q == loc.degree + 1
        out.append(VertexCertificate(name, loc.degree, loc.q, loc.lam.length, holds))
    return CertificateReport("min", "l(lambda(D_v)) + q_v = deg(v) + 1", out)


def check_locally_maximal(E: Embedding) -> CertificateReport:
    """Flag vertices on three or more faces; each flag means re-embedding it can raise the genus."""
    out = []
    for name in E.vertices:
        loc = vertex_local(E, name)
        out.append(VertexCertificate(name, loc.degree, loc.q, loc.lam.length, loc.q <= 2))
    return CertificateReport("max", "q_v <= 2", out)


# -- several vertices at once ------------------------------------------------------------------


def _combined_local(E: Embedding, vertices: Sequence[VertexRef]):
    if not vertices:
        raise ValueError("at least one vertex is required")
    names = [E.vertex_name(v) for v in vertices]
    if len(set(names)) != len(names):
        raise ValueError("vertices must be distinct")
    rots = [E.vertices[n] for n in names]
    support = [h for r in rots for h in r]
    s = E.face_permutation.restrict(support)
    pi = Permutation.from_cycles(rots)
    return rots, support, s, pi, s * pi.inverse()


def dsh_count(E: Embedding, vertices: Sequence[VertexRef], budget: Optional[int] = DEFAULT_ROTATION_BUDGET) -> int:
    """Simultaneous rotations at ``vertices`` keeping one face.

    Counts factorizations ``D = gamma * sigma`` of the combined local diagonal
    with ``gamma`` one cycle and ``sigma`` one cycle on each vertex's half edges.
    """
    rots, support, _, _, d = _combined_local(E, vertices)
    total = math.prod(math.factorial(len(r) - 1) for r in rots)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} simultaneous rotations exceed the budget of {budget}")
    labels = sorted(support)
    idx = {x: i for i, x in enumerate(labels)}
    dl = [idx[d(x)] for x in labels]
    n = len(labels)
    choices = [[(r[0],) + rest for rest in itertools.permutations(sorted(r[1:]))] for r in rots]
    sigma_inv = [0] * n
    count = 0
    for combo in itertools.product(*choices):
        for order in combo:
            for i, x in enumerate(order):
                sigma_inv[idx[order[(i + 1) % len(order)]]] = idx[x]
        x, steps = 0, 0
        while True:
            x = dl[sigma_inv[x]]
            steps += 1
            if x == 0:
                break
        if steps == n:
            count += 1
    return count


def le_count(E: Embedding, vertices: Sequence[VertexRef], mu) -> int:
    """Re-wirings of ``vertices`` (incidences and rotations) keeping one face and degree partition ``mu``."""
    _, support, _, _, d = _combined_local(E, vertices)
    return f_count(CycleType(mu), d.cycle_type(), len(support))


def le_count_vertices(E: Embedding, vertices: Sequence[VertexRef]) -> int:
    """Re-wirings of ``vertices`` keeping one face and the number of vertices."""
    _, support, _, _, d = _combined_local(E, vertices)
    return p_count(len(vertices), d.cycle_type(), len(support))


# -- guided moves ---------------------------------------------------------------------------------


_PREDICTION = {
    TransposeCase.CASE3: 0,
    TransposeCase.CASE4: 0,
    TransposeCase.CASE1: 1,
    TransposeCase.CASE2: -1,
}


@dataclass(frozen=True)
class GuidedMove:
    embedding: Embedding
    theta: Tuple[int, ...]
    face_case: TransposeCase
    predicted: Optional[int]
    observed: int

    @property
    def classified(self) -> bool:
        return self.predicted is not None


def guided_move(E: Embedding, v: VertexRef, triple: Tuple[int, int, int]) -> GuidedMove:
    """Swap the two arcs between ``a, b, c`` in the rotation ``(a X b Y c Z) -> (a Y c X b Z)``.

    The prediction depends on how ``a, b, c`` sit on the faces: one face in
    order ``(a..b..c)`` or faces ``(a..b)(c..)`` keep the genus, three
    distinct faces raise it by one, one face in order ``(a..c..b)`` lowers
    it by one. The other two-face patterns are applied and measured only
    (``predicted`` is ``None``).
    """
    a, b, c = triple
    rot = E.rotation(v)
    if len({a, b, c}) != 3 or not {a, b, c} <= set(rot):
        raise ValueError("the triple must be three distinct half edges of the vertex")
    k = rot.index(a)
    cyc = rot[k:] + rot[:k]
    ib, ic = cyc.index(b), cyc.index(c)
    if not ib < ic:
        raise ValueError("the triple must appear in rotation order a, b, c")
    x_arc, y_arc, z_arc = cyc[1:ib], cyc[ib + 1:ic], cyc[ic + 1:]
    theta = (a,) + y_arc + (c,) + x_arc + (b,) + z_arc
    case = classify_points(E.face_permutation, a, b, c)
    new = reembed_vertex(E, v, theta)
    observed = new.genus - E.genus
    predicted = _PREDICTION.get(case)
    if predicted is not None and predicted != observed:
        raise InvariantError(f"guided move predicted dg = {predicted}, observed {observed}")
    return GuidedMove(new, theta, case, predicted, observed)
