"""Saturated chains, flips across 2-faces, and the move graph of an interval."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Iterator

from bipposet import graphs
from bipposet.skeleton import (
    Check,
    PreconditionError,
    SkeletonPoset,
    is_permutahedron_poset,
)

Chain = tuple[str, ...]
Edge = tuple[str, str]

DEFAULT_MAX_CHAINS = 50_000


class ChainCapExceeded(RuntimeError):
    def __init__(self, cap: int) -> None:
        super().__init__(f"more than {cap} maximal chains")
        self.cap = cap


class StaleMoveError(ValueError):
    pass


class ChainMismatchError(ValueError):
    pass


class NonRevisitingViolation(AssertionError):
    """A flip left the interval; only possible when non-revisiting fails."""


@dataclass(frozen=True)
class Move:
    start: int
    end: int
    face: frozenset[str]
    path: Chain
    replacement: Chain

    @property
    def size(self) -> int:
        return len(self.face)


@dataclass(frozen=True)
class FaceBoundary:
    source: str
    sink: str
    paths: tuple[Chain, Chain]


def face_boundary(P: SkeletonPoset, F: frozenset[str]) -> FaceBoundary:
    """The two monotone boundary paths of a 2-face, ordered by their second vertex."""

    def compute() -> FaceBoundary:
        Q = P.polytope
        if Q is None or P.cost is None or Q.face_dim(F) != 2:
            raise PreconditionError(f"{sorted(F)} is not a 2-face")
        src, snk = Q.face_source_sink(P.cost, F)
        starts = sorted(b for b in P.upper_covers(src) if b in F)
        if len(starts) != 2:
            raise PreconditionError(f"source of {sorted(F)} has {len(starts)} out-edges in the face")
        paths = []
        for b in starts:
            path = [src, b]
            while path[-1] != snk:
                nxt = [c for c in P.upper_covers(path[-1]) if c in F]
                if len(nxt) != 1:
                    raise PreconditionError(f"{sorted(F)} is not a polygon under the orientation")
                path.append(nxt[0])
            paths.append(tuple(path))
        if len(paths[0]) + len(paths[1]) - 2 != len(F):
            raise PreconditionError(f"boundary paths of {sorted(F)} do not cover the polygon")
        return FaceBoundary(src, snk, (paths[0], paths[1]))

    return P.memo(("face-boundary", F), compute)


def two_face(P: SkeletonPoset, x: str, a: str, b: str) -> frozenset[str] | None:
    """Smallest face through ``x, a, b`` if it is 2-dimensional."""

    def compute() -> frozenset[str] | None:
        Q = P.polytope
        if Q is None:
            raise PreconditionError("moves need the backing polytope")
        F = Q.smallest_face((x, a, b))
        return F if Q.face_dim(F) == 2 else None

    return P.memo(("two-face", frozenset((x, a, b))), compute)


def maximal_chains(P: SkeletonPoset, u: str, v: str, max_chains: int | None = DEFAULT_MAX_CHAINS) -> list[Chain]:
    """All saturated chains from ``u`` to ``v``, in lexicographic order of labels."""
    mask = P.interval_mask(u, v)
    iv = P.index[v]
    out: list[Chain] = []
    path = [P.index[u]]

    def walk() -> None:
        x = path[-1]
        if x == iv:
            out.append(tuple(P.labels[i] for i in path))
            if max_chains is not None and len(out) > max_chains:
                raise ChainCapExceeded(max_chains)
            return
        for y in P.succ[x]:
            if mask >> y & 1:
                path.append(y)
                walk()
                path.pop()

    walk()
    return out


def is_chain(P: SkeletonPoset, chain: Chain) -> bool:
    return all(b in P.upper_covers(a) for a, b in zip(chain, chain[1:]))


def chain_edges(chain: Chain) -> list[Edge]:
    return list(zip(chain, chain[1:]))


def _face_entries(P: SkeletonPoset, chain: Chain) -> Iterator[tuple[int, frozenset[str], Chain, Chain, bool]]:
    for i in range(len(chain) - 1):
        x, nxt = chain[i], chain[i + 1]
        for y in P.upper_covers(x):
            if y == nxt:
                continue
            F = two_face(P, x, nxt, y)
            if F is None:
                continue
            fb = face_boundary(P, F)
            if fb.source != x:
                continue
            ours, other = fb.paths if fb.paths[0][1] == nxt else fb.paths[::-1]
            complete = chain[i:i + len(ours)] == ours
            yield i, F, ours, other, complete


def detect_moves(P: SkeletonPoset, chain: Chain) -> list[Move]:
    """Flips available to ``chain``: it must run through one whole boundary
    path of a 2-face, from the face's source to its sink."""
    u, v = chain[0], chain[-1]
    span = P.interval_mask(u, v)
    found: dict[tuple[int, frozenset[str]], Move] = {}
    for i, F, ours, other, complete in _face_entries(P, chain):
        if not complete:
            continue
        if any(not span >> P.index[z] & 1 for z in other):
            raise NonRevisitingViolation(f"flipping across {sorted(F)} leaves [{u}, {v}]")
        found.setdefault((i, F), Move(i, i + len(ours) - 1, F, ours, other))
    return sorted(found.values(), key=lambda m: (m.start, sorted(m.face)))


def partial_face_entries(P: SkeletonPoset, chain: Chain) -> list[tuple[int, list[str]]]:
    """Diagnostic: 2-faces the chain enters at the source but leaves before the sink."""
    seen = set()
    out = []
    for i, F, _, _, complete in _face_entries(P, chain):
        if not complete and (i, F) not in seen:
            seen.add((i, F))
            out.append((i, sorted(F)))
    return out


def apply_move(chain: Chain, m: Move) -> Chain:
    if chain[m.start:m.end + 1] != m.path:
        raise StaleMoveError(f"move across {sorted(m.face)} does not apply to {chain}")
    return chain[:m.start] + m.replacement + chain[m.end + 1:]


def classify_2face(P: SkeletonPoset, F: frozenset[str]) -> int:
    Q = P.polytope
    if Q is None or Q.face_dim(F) != 2:
        raise PreconditionError(f"{sorted(F)} is not a 2-face")
    return len(F)


def move_label(P: SkeletonPoset, m: Move) -> str:
    k = classify_2face(P, m.face)
    if is_permutahedron_poset(P):
        if k == 4:
            return "commutation"
        if k == 6:
            return "braid"
    return f"polygon({k})"


class MoveGraph:
    def __init__(self, nodes: list[Chain], edges: dict[tuple[int, int], int]) -> None:
        self.nodes = nodes
        self.index = {c: i for i, c in enumerate(nodes)}
        self.edges = edges  # (i, j) with i < j -> polygon size
        self.adj: list[set[int]] = [set() for _ in nodes]
        for i, j in edges:
            self.adj[i].add(j)
            self.adj[j].add(i)

    def __len__(self) -> int:
        return len(self.nodes)

    def is_connected(self) -> bool:
        return graphs.is_connected(self.adj)

    def vertex_connectivity(self) -> int:
        return graphs.vertex_connectivity(self.adj)

    def polygon_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.edges.values()).items()))

    def to_json(self) -> dict[str, Any]:
        return {
            "nodes": [list(c) for c in self.nodes],
            "edges": [[i, j, k] for (i, j), k in sorted(self.edges.items())],
        }

    def to_dot(self, name: str = "moves") -> str:
        lines = [f"graph {name} {{"]
        for i, c in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{"-".join(c)}"];')
        for (i, j), k in sorted(self.edges.items()):
            lines.append(f'  n{i} -- n{j} [label="{k}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def vertex_connectivity(G: MoveGraph) -> int:
    return G.vertex_connectivity()


def move_graph(P: SkeletonPoset, u: str, v: str, max_chains: int | None = DEFAULT_MAX_CHAINS) -> MoveGraph:
    nodes = maximal_chains(P, u, v, max_chains)
    index = {c: i for i, c in enumerate(nodes)}
    edges: dict[tuple[int, int], int] = {}
    for i, c in enumerate(nodes):
        for m in detect_moves(P, c):
            j = index[apply_move(c, m)]
            edges[(min(i, j), max(i, j))] = m.size
    return MoveGraph(nodes, edges)


def _lexmin_chain(P: SkeletonPoset, a: str, b: str) -> Chain:
    db = P.down[P.index[b]]
    path = [a]
    while path[-1] != b:
        path.append(next(y for y in P.upper_covers(path[-1]) if db >> P.index[y] & 1))
    return tuple(path)


def _branch(g1: Chain, g2: Chain) -> tuple[int, int, int]:
    """Positions (in g1, in g2) of the lowest shared vertex where the chains
    part ways, and the position in g1 of the next shared vertex."""
    pos2 = {x: k for k, x in enumerate(g2)}
    for i, x in enumerate(g1[:-1]):
        j = pos2.get(x)
        if j is not None and g2[j + 1] != g1[i + 1]:
            nxt = next(k for k in range(i + 1, len(g1)) if g1[k] in pos2)
            return i, j, nxt
    raise ValueError("chains do not branch")


def star_path(P: SkeletonPoset, g1: Chain, g2: Chain) -> list[Chain]:
    """A walk in the move graph from ``g1`` to ``g2`` through chains that keep
    every vertex the two share.

    At the lowest branching vertex ``x`` the two divergent edges span a
    2-face ``F``.  Both chains are rerouted through ``sink(F)`` along a common
    upper part ``p`` which follows ``g1`` from the next shared vertex on
    (and from ``sink(F)`` on when ``g1`` already passes through it); the walk
    is the recursive walk to the rerouted ``g1``, the flip across ``F``, and
    the recursive walk from the rerouted ``g2``.  Where ``p`` is not forced,
    the lexicographically least option is used.
    """
    g1, g2 = tuple(g1), tuple(g2)
    if g1[0] != g2[0] or g1[-1] != g2[-1]:
        raise ChainMismatchError("chains belong to different intervals")
    if g1 == g2:
        return [g1]
    i, j, k = _branch(g1, g2)
    x, a1, a2 = g1[i], g1[i + 1], g2[j + 1]
    xp = g1[k]
    F = two_face(P, x, a1, a2)
    if F is None:
        raise PreconditionError(f"edges {x}->{a1} and {x}->{a2} span no 2-face")
    fb = face_boundary(P, F)
    if fb.source != x:
        raise PreconditionError(f"{x} is not the source of the face {sorted(F)}")
    sink = fb.sink
    if not P.leq(sink, xp):
        raise PreconditionError(f"sink {sink} of {sorted(F)} is not below {xp}")
    if sink in g1:
        p = g1[g1.index(sink):]
    else:
        p = _lexmin_chain(P, sink, xp) + g1[k + 1:]
    side1, side2 = fb.paths if fb.paths[0][1] == a1 else fb.paths[::-1]
    g1F = g1[:i + 1] + side1[1:-1] + p
    g2F = g2[:j + 1] + side2[1:-1] + p
    return star_path(P, g1, g1F) + star_path(P, g2F, g2)


def is_move_walk(P: SkeletonPoset, walk: list[Chain]) -> bool:
    """Every consecutive pair in ``walk`` differs by one detectable flip."""
    for a, b in zip(walk, walk[1:]):
        if not any(apply_move(a, m) == b for m in detect_moves(P, a)):
            return False
    return True


def lowest_new_edge(gamma: Chain, other: Chain) -> Edge | None:
    """Lowest edge of ``other`` that ``gamma`` does not use."""
    mine = set(chain_edges(gamma))
    return next((e for e in chain_edges(other) if e not in mine), None)


def reconstruct_sequence(P: SkeletonPoset, gamma: Chain, e2: Edge) -> list[Any]:
    """Recover ``[eps_0, F_1, eps_1, ..., F_r, eps_r]`` from ``gamma`` and ``e2``.

    Walking down: the face ``F_i`` is the 2-face through ``eps_i`` and the
    edge of ``gamma`` entering its lower vertex; ``eps_{i-1}`` is the edge
    out of ``src(F_i)`` in ``F_i`` that ``gamma`` does not take.  The walk
    stops when an edge starting at ``gamma[0]`` is reached.
    """
    pos = {x: k for k, x in enumerate(gamma)}
    if e2[0] not in pos:
        raise PreconditionError(f"lower vertex of {e2} is not on the chain")
    seq: list[Any] = [tuple(e2)]
    eps = tuple(e2)
    for _ in range(len(gamma)):
        if eps[0] == gamma[0]:
            return seq[::-1]
        k = pos[eps[0]]
        F = two_face(P, gamma[k - 1], eps[0], eps[1])
        if F is None:
            raise PreconditionError(f"no 2-face through {gamma[k - 1]}->{eps[0]} and {eps}")
        src = face_boundary(P, F).source
        if src not in pos:
            raise PreconditionError(f"source {src} of {sorted(F)} is off the chain")
        taken = gamma[pos[src] + 1]
        others = [y for y in P.upper_covers(src) if y in F and y != taken]
        if len(others) != 1:
            raise PreconditionError(f"cannot identify the departing edge in {sorted(F)}")
        eps = (src, others[0])
        seq.append(F)
        seq.append(eps)
    raise PreconditionError("reconstruction did not reach the bottom of the chain")


def check_lower_first(P: SkeletonPoset, g1: Chain, g2: Chain) -> Check:
    """The walk keeps ``g1`` above the next shared vertex fixed until the part
    below it agrees with ``g2``."""
    g1, g2 = tuple(g1), tuple(g2)
    if g1 == g2:
        return Check(True)
    _, _, k = _branch(g1, g2)
    xp = g1[k]
    walk = star_path(P, g1, g2)
    target = g2[:g2.index(xp) + 1]
    for step, c in enumerate(walk):
        if xp not in c:
            return Check(False, {"g1": g1, "g2": g2, "step": step, "lost": xp})
        cut = c.index(xp)
        if c[cut:] != g1[k:]:
            return Check(False, {"g1": g1, "g2": g2, "step": step, "chain": c})
        if c[:cut + 1] == target:
            return Check(True)
    return Check(False, {"g1": g1, "g2": g2, "reason": "lower part never matched"})


def _sequence_is_valid(P: SkeletonPoset, gamma: Chain, seq: list[Any]) -> bool:
    pos = {x: k for k, x in enumerate(gamma)}
    eps = seq[0::2]
    faces = seq[1::2]
    if any(e[0] not in pos for e in eps):
        return False
    for i, F in enumerate(faces):
        lo, hi = eps[i], eps[i + 1]
        if not (set(lo) <= F and set(hi) <= F):
            return False
        if pos[lo[0]] >= pos[hi[0]]:
            return False
        if not set(gamma[pos[lo[0]]:pos[hi[0]] + 1]) <= F:
            return False
    return True


def check_reconstruction(P: SkeletonPoset, gamma: Chain, gamma1: Chain) -> Check:
    """Along ``gamma * gamma1`` each chain's lowest new edge determines
    ``gamma1``'s lowest edge via the backward face sequence."""
    gamma, gamma1 = tuple(gamma), tuple(gamma1)
    e1 = (gamma1[0], gamma1[1])
    for c in star_path(P, gamma, gamma1):
        if c == gamma:
            continue
        e2 = lowest_new_edge(gamma, c)
        assert e2 is not None
        seq = reconstruct_sequence(P, gamma, e2)
        if seq[0] != e1 or not _sequence_is_valid(P, gamma, seq):
            return Check(False, {"gamma": gamma, "gamma1": gamma1, "node": c, "e2": e2,
                                 "eps0": seq[0]})
    return Check(True)


def check_vertex_disjoint(P: SkeletonPoset, gamma: Chain, g1: Chain, g2: Chain) -> Check:
    """Walks from ``gamma`` towards chains with different first edges meet only at ``gamma``."""
    a = set(star_path(P, gamma, g1))
    b = set(star_path(P, gamma, g2))
    shared = a & b
    if shared != {tuple(gamma)}:
        return Check(False, {"gamma": gamma, "g1": g1, "g2": g2,
                             "shared": sorted(shared - {tuple(gamma)})})
    return Check(True)


def check_star_path(P: SkeletonPoset, g1: Chain, g2: Chain) -> Check:
    """The star walk is a genuine move walk from ``g1`` to ``g2`` that keeps
    every vertex the two chains share."""
    walk = star_path(P, g1, g2)
    if walk[0] != tuple(g1) or walk[-1] != tuple(g2):
        return Check(False, {"g1": g1, "g2": g2, "reason": "wrong endpoints"})
    if not is_move_walk(P, walk):
        return Check(False, {"g1": g1, "g2": g2, "reason": "not a move walk"})
    common = set(g1) & set(g2)
    for c in walk:
        if not common <= set(c):
            return Check(False, {"g1": g1, "g2": g2, "chain": c, "lost": sorted(common - set(c))})
    return Check(True)


@dataclass
class LemmaTally:
    checked: dict[str, int]
    violations: list[dict[str, Any]]

    @property
    def ok(self) -> bool:
        return not self.violations


def lemma_sweep(P: SkeletonPoset, u: str, v: str, max_chains: int | None = DEFAULT_MAX_CHAINS) -> LemmaTally:
    """Run every chain-walk check on all applicable chain pairs and triples of ``[u, v]``."""
    chains = maximal_chains(P, u, v, max_chains)
    tally = LemmaTally({"star_path": 0, "lower_first": 0, "reconstruction": 0, "vertex_disjoint": 0}, [])

    def run(name: str, check: Check) -> None:
        tally.checked[name] += 1
        if not check:
            tally.violations.append({"check": name, "u": u, "v": v, "witness": check.witness})

    for g1 in chains:
        for g2 in chains:
            if g1 == g2:
                continue
            run("star_path", check_star_path(P, g1, g2))
            run("lower_first", check_lower_first(P, g1, g2))
            if g1[1] != g2[1]:
                run("reconstruction", check_reconstruction(P, g1, g2))
    if len(P.atoms(u, v)) >= 3:
        for g in chains:
            for g1 in chains:
                for g2 in chains:
                    if len({g[1], g1[1], g2[1]}) == 3:
                        run("vertex_disjoint", check_vertex_disjoint(P, g, g1, g2))
    return tally
