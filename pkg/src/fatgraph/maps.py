"""
Rotation-system embeddings (fatgraphs).

An :class:`Embedding` is a pair of permutations on the half edges: ``alpha``
pairs the two ends of each edge, ``beta`` lists the half edges around each
vertex counterclockwise. Faces are the cycles of ``gamma = alpha * beta``
(``x -> alpha(beta(x))``); this orientation is the one for which the
two-row example

    s:  1 2 3 4 5 6 7 8
    pi: 1 6 7 8 3 4 5 2

is a one-face map with ``gamma = s`` and ``alpha`` equal to its diagonal.

Vertices are identified by name. Names are attached to the minimum half edge
of the vertex, which a re-embedding never changes.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import BudgetExceeded, DisconnectedError, InvariantError, ParseError
from .perm import CycleType, Permutation, is_transitive
from .planeperm import KCycPlanePermutation, PlanePermutation, parse_two_line

__all__ = [
    "DEFAULT_EMBEDDING_BUDGET",
    "DiagonalBlock",
    "Embedding",
    "Graph",
    "VertexLocal",
    "all_embeddings",
    "bouquet",
    "complete_bipartite_graph",
    "complete_graph",
    "diagonal_blocks",
    "dual",
    "embedding_report",
    "emit_rot",
    "f_incidence",
    "facial_disjoint",
    "faces",
    "genus",
    "graph_from_spec",
    "load_embedding",
    "num_embeddings",
    "parse_rot",
    "random_embedding",
    "reassemble_faces",
    "reembed_vertex",
    "unicellular_maps",
    "vertex_local",
]

DEFAULT_EMBEDDING_BUDGET = math.factorial(9)

VertexRef = Union[str, int]


class Embedding:
    """Immutable orientable embedding given by ``alpha`` (edges) and ``beta`` (rotations)."""

    def __init__(self, alpha: Permutation, beta: Permutation,
                 vertex_names: Optional[Union[Mapping[int, str], Sequence[str]]] = None):
        if alpha.ground != beta.ground:
            raise ValueError("alpha and beta must act on the same half edges")
        if not alpha.is_fixed_point_free_involution():
            raise ValueError("alpha must be a fixed-point-free involution")
        self.alpha = alpha
        self.beta = beta
        cycles = beta.cycles()
        if vertex_names is None:
            names = {c[0]: f"v{i}" for i, c in enumerate(cycles, 1)}
        elif isinstance(vertex_names, Mapping):
            names = {}
            for c in cycles:
                if c[0] not in vertex_names:
                    raise ValueError(f"no name for the vertex at half edge {c[0]}")
                names[c[0]] = str(vertex_names[c[0]])
        else:
            vertex_names = list(vertex_names)
            if len(vertex_names) != len(cycles):
                raise ValueError("one name per vertex is required")
            names = {c[0]: str(nm) for c, nm in zip(cycles, vertex_names)}
        if len(set(names.values())) != len(names):
            raise ValueError("vertex names must be distinct")
        self._names = names

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rotations(cls, rotations: Mapping[str, Sequence[int]], edges: Iterable[Tuple[int, int]]) -> "Embedding":
        alpha = Permutation.from_cycles([tuple(e) for e in edges])
        beta = Permutation.from_cycles([tuple(r) for r in rotations.values()])
        names = {min(r): name for name, r in rotations.items()}
        return cls(alpha, beta, names)

    @classmethod
    def from_plane_permutation(cls, pp: KCycPlanePermutation) -> "Embedding":
        """``(s, pi)`` with an edge involution as diagonal: faces ``s``, rotations ``pi``."""
        alpha = pp.diagonal()
        if not alpha.is_fixed_point_free_involution():
            raise ValueError("diagonal is not a fixed-point-free involution; not a map")
        return cls(alpha, pp.pi)

    # -- structure ------------------------------------------------------------

    @property
    def half_edges(self) -> frozenset:
        return self.alpha.ground

    @property
    def num_half_edges(self) -> int:
        return len(self.alpha)

    @property
    def num_edges(self) -> int:
        return len(self.alpha) // 2

    @cached_property
    def vertices(self) -> Dict[str, Tuple[int, ...]]:
        """Vertex name -> rotation (starting at the minimum half edge), in half-edge order."""
        return {self._names[c[0]]: c for c in self.beta.cycles()}

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def _vertex_of(self) -> Dict[int, str]:
        return {h: name for name, rot in self.vertices.items() for h in rot}

    def vertex_name(self, v: VertexRef) -> str:
        """Resolve a vertex given by name or by any of its half edges."""
        if isinstance(v, str):
            if v not in self.vertices:
                raise KeyError(f"unknown vertex {v!r}")
            return v
        try:
            return self._vertex_of[int(v)]
        except (KeyError, ValueError, TypeError):
            raise KeyError(f"unknown vertex or half edge {v!r}") from None

    def rotation(self, v: VertexRef) -> Tuple[int, ...]:
        return self.vertices[self.vertex_name(v)]

    def degree(self, v: VertexRef) -> int:
        return len(self.rotation(v))

    @cached_property
    def face_permutation(self) -> Permutation:
        return self.alpha * self.beta

    @cached_property
    def faces(self) -> List[Tuple[int, ...]]:
        return self.face_permutation.cycles()

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    def is_connected(self) -> bool:
        return is_transitive(self.alpha, self.beta)

    @cached_property
    def genus(self) -> int:
        if not self.is_connected():
            raise DisconnectedError("genus is undefined for a disconnected embedding")
        two_g = 2 - self.num_vertices + self.num_edges - self.num_faces
        if two_g < 0 or two_g % 2:
            raise InvariantError(f"V - E + F = {2 - two_g} gives a non-integral genus")
        return two_g // 2

    def to_kcyc(self) -> KCycPlanePermutation:
        return KCycPlanePermutation(self.face_permutation, self.beta)

    def with_rotation(self, v: VertexRef, theta) -> "Embedding":
        return reembed_vertex(self, v, theta)

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta and self._names == other._names

    def __hash__(self):
        return hash((self.alpha, self.beta))

    def __repr__(self):
        return f"Embedding(alpha={str(self.alpha)!r}, beta={str(self.beta)!r})"


# -- graphs ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Multigraph (loops allowed). Edge ``k`` owns half edges ``2k+1`` (at ``u``) and ``2k+2`` (at ``v``)."""

    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]

    def __post_init__(self):
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("duplicate vertex name")
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge ({u}, {v}) uses an unknown vertex")
        lonely = known - {x for e in self.edges for x in e}
        if lonely:
            raise ValueError(f"isolated vertices cannot be embedded: {sorted(lonely)}")

    def half_edges_at(self) -> Dict[str, List[int]]:
        out: Dict[str, List[int]] = {v: [] for v in self.vertices}
        for k, (u, v) in enumerate(self.edges):
            out[u].append(2 * k + 1)
            out[v].append(2 * k + 2)
        return out

    def alpha(self) -> Permutation:
        return Permutation.from_cycles([(2 * k + 1, 2 * k + 2) for k in range(len(self.edges))])

    @property
    def betti_number(self) -> int:
        return len(self.edges) - len(self.vertices) + 1


def complete_graph(n: int) -> Graph:
    names = tuple(f"{i}" for i in range(1, n + 1))
    return Graph(names, tuple(itertools.combinations(names, 2)))


def complete_bipartite_graph(m: int, n: int) -> Graph:
    left = tuple(f"a{i}" for i in range(1, m + 1))
    right = tuple(f"b{i}" for i in range(1, n + 1))
    return Graph(left + right, tuple((u, v) for u in left for v in right))


def bouquet(k: int) -> Graph:
    return Graph(("o",), tuple(("o", "o") for _ in range(k)))


def underlying_graph(E: Embedding) -> Graph:
    """The graph of ``E`` with half edges renumbered edge by edge."""
    owner = E._vertex_of
    edges = []
    for a, b in E.alpha.cycles():
        edges.append((owner[a], owner[b]))
    return Graph(tuple(E.vertices), tuple(edges))


def graph_from_spec(spec: str) -> Graph:
    """``K4``, ``K3,3``, ``B2`` (bouquet of 2 loops), or ``u-v,v-w,...`` edge lists."""
    spec = spec.strip()
    if spec[:1] in ("K", "k") and "," in spec:
        m, n = spec[1:].split(",")
        return complete_bipartite_graph(int(m), int(n))
    if spec[:1] in ("K", "k") and spec[1:].isdigit():
        return complete_graph(int(spec[1:]))
    if spec[:1] in ("B", "b") and spec[1:].isdigit():
        return bouquet(int(spec[1:]))
    if "-" in spec:
        edges = []
        names: List[str] = []
        for tok in spec.split(","):
            u, sep, v = tok.strip().partition("-")
            if not sep or not u or not v:
                raise ValueError(f"bad edge {tok!r} in graph spec")
            for x in (u, v):
                if x not in names:
                    names.append(x)
            edges.append((u, v))
        return Graph(tuple(names), tuple(edges))
    raise ValueError(f"unrecognised graph spec {spec!r}")


def num_embeddings(graph: Graph) -> int:
    return math.prod(math.factorial(len(hs) - 1) for hs in graph.half_edges_at().values())


def random_embedding(graph: Union[Graph, Embedding], seed) -> Embedding:
    """Uniform rotation system: the minimum half edge anchors each vertex, the rest are shuffled.

    Deterministic for a given ``seed``.
    """
    if isinstance(graph, Embedding):
        graph = underlying_graph(graph)
    rng = random.Random(seed)
    rotations = {}
    for name, hs in graph.half_edges_at().items():
        rest = hs[1:]
        rng.shuffle(rest)
        rotations[name] = [hs[0]] + rest
    return _from_graph_rotations(graph, rotations)


def _from_graph_rotations(graph: Graph, rotations: Mapping[str, Sequence[int]]) -> Embedding:
    beta = Permutation.from_cycles(rotations.values())
    names = {min(r): name for name, r in rotations.items()}
    return Embedding(graph.alpha(), beta, names)


def all_embeddings(graph: Union[Graph, Embedding], budget: Optional[int] = DEFAULT_EMBEDDING_BUDGET) -> Iterator[Embedding]:
    """Every rotation system exactly once.

    Order: lexicographic in the tuple of rotations (vertices in graph order,
    each rotation anchored at its minimum half edge), last vertex fastest.
    """
    if isinstance(graph, Embedding):
        graph = underlying_graph(graph)
    total = num_embeddings(graph)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} rotation systems exceed the budget of {budget}")
    at = graph.half_edges_at()
    names = list(at)
    choices = [[(hs[0],) + rest for rest in itertools.permutations(hs[1:])] for hs in at.values()]
    for combo in itertools.product(*choices):
        yield _from_graph_rotations(graph, dict(zip(names, combo)))


def unicellular_maps(m: int) -> Iterator[Embedding]:
    """Every one-face map on half edges ``1..2m`` with ``alpha = (1 2)(3 4)...``."""
    alpha = Permutation.from_cycles([(2 * k + 1, 2 * k + 2) for k in range(m)])
    n = 2 * m
    a = [0] * (n + 1)
    for k in range(m):
        a[2 * k + 1], a[2 * k + 2] = 2 * k + 2, 2 * k + 1
    for images in itertools.permutations(range(1, n + 1)):
        # gamma(x) = alpha(beta(x)) must be a single n-cycle
        x, steps = 1, 0
        while True:
            x = a[images[x - 1]]
            steps += 1
            if x == 1:
                break
        if steps == n:
            yield Embedding(alpha, Permutation(dict(zip(range(1, n + 1), images))))


# -- faces, genus, dual --------------------------------------------------------------


def faces(E: Embedding) -> List[Tuple[int, ...]]:
    return E.faces


def genus(E: Embedding) -> int:
    return E.genus


def dual(E: Embedding) -> Embedding:
    """Poincare dual ``(alpha, gamma)``: faces become vertices (named ``f1, f2, ...``)."""
    gamma = E.face_permutation
    return Embedding(E.alpha, gamma, [f"f{i}" for i in range(1, gamma.num_cycles() + 1)])


# -- vertex-local structure ------------------------------------------------------------


@dataclass(frozen=True)
class VertexLocal:
    """The q-face plane permutation ``(s_v, pi_v)`` induced at a vertex."""

    vertex: str
    rotation: Tuple[int, ...]
    s_v: Permutation
    pi_v: Permutation
    diagonal: Permutation

    @property
    def degree(self) -> int:
        return len(self.rotation)

    @property
    def q(self) -> int:
        return self.s_v.num_cycles()

    @property
    def lam(self) -> CycleType:
        """Cycle type of the local diagonal."""
        return self.diagonal.cycle_type()

    @property
    def f_incidence(self) -> CycleType:
        return self.s_v.cycle_type()

    def as_plane_permutation(self) -> KCycPlanePermutation:
        if self.q == 1:
            return PlanePermutation(self.s_v, self.pi_v)
        return KCycPlanePermutation(self.s_v, self.pi_v)


def vertex_local(E: Embedding, v: VertexRef) -> VertexLocal:
    name = E.vertex_name(v)
    rot = E.vertices[name]
    s_v = E.face_permutation.restrict(rot)
    pi_v = Permutation.from_cycles([rot])
    return VertexLocal(name, rot, s_v, pi_v, s_v * pi_v.inverse())


def f_incidence(E: Embedding, v: VertexRef) -> CycleType:
    """Partition of ``deg(v)``: one part per incident face, the number of ``v``'s half edges on it."""
    return vertex_local(E, v).f_incidence


def _rotation_from(theta, support: Iterable[int]) -> Tuple[int, ...]:
    support = set(support)
    if isinstance(theta, Permutation):
        if theta.ground != support or not theta.is_single_cycle():
            raise ValueError("theta must be a single cycle on exactly the half edges of the vertex")
        return theta.cycle_of(min(support))
    seq = tuple(int(x) for x in theta)
    if len(seq) != len(support) or set(seq) != support:
        raise ValueError("theta must list every half edge of the vertex exactly once")
    return seq


def reembed_vertex(E: Embedding, v: VertexRef, theta) -> Embedding:
    """Replace the rotation at ``v`` by ``theta`` (a cyclic sequence or a single-cycle Permutation)."""
    name = E.vertex_name(v)
    old = E.vertices[name]
    new = _rotation_from(theta, old)
    m = E.beta.as_dict()
    for i, x in enumerate(new):
        m[x] = new[(i + 1) % len(new)]
    return Embedding(E.alpha, Permutation(m), E._names)


@dataclass(frozen=True)
class DiagonalBlock:
    """Face segment cut out by the half edges of a vertex.

    ``corner`` is the half edge of the vertex the segment follows;
    ``lower_left = beta(corner)``, ``upper_right = s_v(corner)`` and
    ``contents`` are the half edges strictly between ``corner`` and
    ``upper_right`` along the face.
    """

    corner: int
    lower_left: int
    upper_right: int
    contents: Tuple[int, ...]


def diagonal_blocks(E: Embedding, v: VertexRef) -> List[DiagonalBlock]:
    rot = E.rotation(v)
    hv = set(rot)
    gamma = E.face_permutation
    out = []
    for x in rot:
        seg = []
        y = gamma(x)
        while y not in hv:
            seg.append(y)
            y = gamma(y)
        out.append(DiagonalBlock(x, E.beta(x), y, tuple(seg)))
    return out


def reassemble_faces(E: Embedding, v: VertexRef, theta) -> List[Tuple[int, ...]]:
    """Faces after re-embedding ``v`` by ``theta``, obtained by re-chaining diagonal blocks.

    Independent of face tracing: the block entered through the lower-left
    corner ``theta(x)`` is the one whose corner ``y`` has ``beta(y) = theta(x)``.
    """
    rot = E.rotation(v)
    new = _rotation_from(theta, rot)
    theta_map = {x: new[(i + 1) % len(new)] for i, x in enumerate(new)}
    blocks = {b.lower_left: b for b in diagonal_blocks(E, v)}
    hv = set(rot)
    touched = set(hv)
    for b in blocks.values():
        touched.update(b.contents)
    out = [f for f in E.faces if not touched.intersection(f)]
    done = set()
    for start in rot:
        if start in done:
            continue
        face = []
        x = start
        while True:
            done.add(x)
            face.append(x)
            b = blocks[theta_map[x]]
            face.extend(b.contents)
            x = b.upper_right
            if x == start:
                break
        i = face.index(min(face))
        out.append(tuple(face[i:] + face[:i]))
    out.sort()
    return out


def incident_faces(E: Embedding, v: VertexRef) -> List[Tuple[int, ...]]:
    hv = set(E.rotation(v))
    return [f for f in E.faces if hv.intersection(f)]


def facial_disjoint(E: Embedding, u: VertexRef, v: VertexRef) -> bool:
    """No shared face, or one shared face on which one vertex sits inside a single diagonal block of the other."""
    u, v = E.vertex_name(u), E.vertex_name(v)
    if u == v:
        raise ValueError("facial disjointness needs two distinct vertices")
    fu = {f for f in incident_faces(E, u)}
    common = [f for f in incident_faces(E, v) if f in fu]
    if not common:
        return True
    if len(common) > 1:
        return False
    f0 = set(common[0])
    for a, b in ((u, v), (v, u)):
        on_face = f0.intersection(E.rotation(a))
        for blk in diagonal_blocks(E, b):
            if on_face <= set(blk.contents):
                return True
    return False


# -- file formats ---------------------------------------------------------------------------


def parse_rot(text: str) -> Embedding:
    """Parse the line-oriented ``.rot`` format (see :func:`emit_rot`)."""
    declared = None
    edges: List[Tuple[int, int]] = []
    rotations: Dict[str, List[int]] = {}
    edge_seen: Dict[int, int] = {}
    vert_seen: Dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        keyword, _, rest = line.strip().partition(" ")
        col_rest = indent + len(keyword) + 2

        def ints(chunk, col0):
            vals = []
            pos = 0
            for tok in chunk.split():
                pos = chunk.index(tok, pos)
                try:
                    vals.append((int(tok), col0 + pos))
                except ValueError:
                    raise ParseError(f"expected a half-edge label, got {tok!r}", lineno, col0 + pos) from None
                pos += len(tok)
            return vals

        if keyword == "halfedges":
            if declared is not None:
                raise ParseError("duplicate 'halfedges' line", lineno, indent + 1)
            vals = ints(rest, col_rest)
            if len(vals) != 1:
                raise ParseError("'halfedges' takes exactly one number", lineno, col_rest)
            declared = vals[0][0]
            if declared <= 0 or declared % 2:
                raise ParseError(f"half-edge count must be positive and even, got {declared}", lineno, vals[0][1])
        elif keyword == "edge":
            vals = ints(rest, col_rest)
            if len(vals) != 2:
                raise ParseError("'edge' takes exactly two half edges", lineno, col_rest)
            for h, col in vals:
                if h in edge_seen:
                    raise ParseError(f"half edge {h} already used by the edge on line {edge_seen[h]}", lineno, col)
                edge_seen[h] = lineno
            if vals[0][0] == vals[1][0]:
                raise ParseError("an edge needs two distinct half edges", lineno, vals[1][1])
            edges.append((vals[0][0], vals[1][0]))
        elif keyword == "vertex":
            name, sep, body = rest.partition(":")
            name = name.strip()
            if not sep or not name or " " in name:
                raise ParseError("expected 'vertex <name>: h1 h2 ...'", lineno, col_rest)
            if name in rotations:
                raise ParseError(f"duplicate vertex name {name!r}", lineno, col_rest)
            body_col = col_rest + rest.index(":") + 1
            vals = ints(body, body_col)
            if not vals:
                raise ParseError(f"vertex {name!r} has no half edges", lineno, body_col)
            for h, col in vals:
                if h in vert_seen:
                    raise ParseError(f"half edge {h} already placed at a vertex on line {vert_seen[h]}", lineno, col)
                vert_seen[h] = lineno
            rotations[name] = [h for h, _ in vals]
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, indent + 1)
    if declared is None:
        raise ParseError("missing 'halfedges <2m>' line")
    expected = set(range(1, declared + 1))
    for what, seen in (("edge", edge_seen), ("vertex", vert_seen)):
        extra = sorted(set(seen) - expected)
        if extra:
            h = extra[0]
            raise ParseError(f"half edge {h} is outside 1..{declared}", seen[h])
        missing = sorted(expected - set(seen))
        if missing:
            raise ParseError(f"half edge(s) {missing} missing from the {what} lines")
    return Embedding.from_rotations(rotations, edges)


def emit_rot(E: Embedding) -> str:
    """Canonical ``.rot`` text: edges by smaller half edge, vertices by minimum half edge."""
    lines = [f"halfedges {E.num_half_edges}"]
    for a, b in E.alpha.cycles():
        lines.append(f"edge {a} {b}")
    for name, rot in E.vertices.items():
        lines.append(f"vertex {name}: " + " ".join(map(str, rot)))
    return "\n".join(lines) + "\n"


def load_embedding(text: str) -> Embedding:
    """Read either ``.rot`` text or the two-line plane-permutation format."""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            if line.startswith(("s:", "pi:")):
                pp = parse_two_line(text)
                try:
                    return Embedding.from_plane_permutation(pp)
                except ValueError as exc:
                    raise ParseError(str(exc)) from None
            break
    return parse_rot(text)


def embedding_report(E: Embedding) -> dict:
    return {
        "faces": [list(f) for f in E.faces],
        "genus": E.genus,
        "num_edges": E.num_edges,
        "num_faces": E.num_faces,
        "num_vertices": E.num_vertices,
        "vertices": {name: list(rot) for name, rot in E.vertices.items()},
    }
