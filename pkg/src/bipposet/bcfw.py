"""BCFW bridge decompositions read off maximal chains of ``P_w``.

Conventions (pinned by the trip-permutation round trip in the tests):

* boundary vertices ``b1 .. bn`` sit counterclockwise on the disk; rotation
  lists give neighbours in counterclockwise order;
* a chain step ``z -> z * (i j)`` contributes a bridge between boundary
  vertices ``i`` and ``j``; bridges are read bottom to top and each new one is
  placed innermost, so the graph is built by inserting them top to bottom,
  each nearest the boundary, and the trip permutation is ``t_1 * ... * t_k``;
* a bridge runs along whichever boundary arc between its feet encloses no
  strand that leaves the arc; the white end sits at the start of that arc in
  counterclockwise order, the black end at its finish;
* trips turn maximally right at black and maximally left at white vertices,
  and the trip permutation sends ``i`` to the boundary vertex where the trip
  from ``i`` ends.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from bipposet.moves import DEFAULT_MAX_CHAINS, Chain, move_graph
from bipposet.skeleton import PreconditionError, SkeletonPoset, build_bip_poset
from bipposet.symgroup import (
    Permutation,
    Transposition,
    cover_transposition,
    identity,
    is_grassmannian,
    length,
    support,
    swap_positions,
)

WHITE = "white"
BLACK = "black"


class ChainError(ValueError):
    pass


class NonPlanarBridgeError(AssertionError):
    pass


class TraversalError(ValueError):
    pass


class NotGrassmannianError(PreconditionError):
    pass


@dataclass(frozen=True)
class BridgeSequence:
    w: Permutation
    bridges: tuple[Transposition, ...]

    def __post_init__(self) -> None:
        z = identity(self.w.n)
        for k, t in enumerate(self.bridges, start=1):
            z = swap_positions(z, t.i, t.j)
            if length(z) != k:
                raise ChainError(f"prefix {k} of the bridge sequence is not reduced")
        if z != self.w:
            raise ChainError(f"bridges multiply to {z}, not {self.w}")

    def to_json(self) -> list[list[int]]:
        return [t.to_list() for t in self.bridges]


def bridge_sequence(P: SkeletonPoset, chain: Chain) -> BridgeSequence:
    if P.perms is None or P.w is None:
        raise PreconditionError("bridge sequences need a Bruhat interval poset")
    if chain[0] != P.bottom or chain[-1] != P.top:
        raise ChainError("bridge sequences come from maximal chains of [e, w]")
    bridges = []
    for a, b in zip(chain, chain[1:]):
        t = cover_transposition(P.perms[a], P.perms[b])
        if t is None:
            raise ChainError(f"{a} -> {b} is not a Bruhat cover")
        bridges.append(t)
    return BridgeSequence(P.w, tuple(bridges))


def _b(i: int) -> str:
    return f"b{i}"


@dataclass
class PlabicGraph:
    n: int
    colors: dict[str, str] = field(default_factory=dict)
    rotation: dict[str, list[str]] = field(default_factory=dict)
    _next_id: int = 0

    @classmethod
    def lollipops(cls, n: int, colors: Sequence[str] | None = None) -> PlabicGraph:
        g = cls(n)
        for i in range(1, n + 1):
            leaf = g._new_vertex(colors[i - 1] if colors else WHITE)
            g.rotation[_b(i)] = [leaf]
            g.rotation[leaf] = [_b(i)]
        return g

    def _new_vertex(self, color: str) -> str:
        name = f"v{self._next_id}"
        self._next_id += 1
        self.colors[name] = color
        return name

    def boundary(self) -> list[str]:
        return [_b(i) for i in range(1, self.n + 1)]

    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.rotation.values()) // 2

    def _component_boundary(self, start: int) -> set[int]:
        seen = {_b(start)}
        stack = [_b(start)]
        hits = set()
        while stack:
            x = stack.pop()
            if x.startswith("b"):
                hits.add(int(x[1:]))
            for y in self.rotation[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return hits

    def _arc_is_free(self, arc: list[int]) -> bool:
        inside = set(arc)
        return all(self._component_boundary(k) <= inside for k in arc)

    def add_bridge(self, i: int, j: int) -> None:
        if not 1 <= i < j <= self.n:
            raise ValueError(f"bad bridge ({i}, {j})")
        inner = list(range(i + 1, j))
        outer = list(range(j + 1, self.n + 1)) + list(range(1, i))
        if self._arc_is_free(inner):
            start, finish = i, j
        elif self._arc_is_free(outer):
            start, finish = j, i
        else:
            raise NonPlanarBridgeError(f"bridge ({i}, {j}) would cross a strand")
        white = self._new_vertex(WHITE)
        black = self._new_vertex(BLACK)
        x = self._splice(start, white)
        y = self._splice(finish, black)
        # bridge leaves the white foot towards the arc and reaches the black foot from it
        self.rotation[white] = [black, x, _b(start)]
        self.rotation[black] = [y, white, _b(finish)]
        if not self.is_planar():
            raise NonPlanarBridgeError(f"bridge ({i}, {j}) broke planarity")

    def _splice(self, k: int, new: str) -> str:
        bk = _b(k)
        (inner,) = self.rotation[bk]
        nb = self.rotation[inner]
        nb[nb.index(bk)] = new
        self.rotation[bk] = [new]
        return inner

    def is_planar(self) -> bool:
        """Genus-zero test of the rotation system closed off by a hub outside the disk."""
        rot = {v: list(nb) for v, nb in self.rotation.items()}
        hub = "hub"
        rot[hub] = [_b(i) for i in range(self.n, 0, -1)]
        for i in range(1, self.n + 1):
            rot[_b(i)] = rot[_b(i)] + [hub]
        darts = {(a, b) for a, nb in rot.items() for b in nb}
        faces = 0
        while darts:
            start = darts.pop()
            a, b = start
            while True:
                nb = rot[b]
                c = nb[(nb.index(a) - 1) % len(nb)]
                a, b = b, c
                if (a, b) == start:
                    break
                darts.discard((a, b))
            faces += 1
        V = len(rot)
        E = sum(len(nb) for nb in rot.values()) // 2
        return V - E + faces == 2

    def validate(self) -> None:
        for i in range(1, self.n + 1):
            if len(self.rotation[_b(i)]) > 1:
                raise TraversalError(f"boundary vertex {i} has degree > 1")
        for v, nb in self.rotation.items():
            for y in nb:
                if v not in self.rotation[y]:
                    raise TraversalError(f"edge {v}--{y} is not symmetric")
        if not self.is_planar():
            raise TraversalError("rotation system is not planar")

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "boundary": self.boundary(),
            "vertices": {
                v: {"color": self.colors.get(v, "boundary"), "rotation": list(nb)}
                for v, nb in sorted(self.rotation.items())
            },
        }


@dataclass(frozen=True)
class TripPermutation:
    perm: Permutation
    decorations: dict[int, str]


def trip_permutation(G: PlabicGraph) -> TripPermutation:
    """Follow the rules of the road from each boundary vertex."""
    limit = 2 * G.num_edges() + 2
    image = []
    decorations: dict[int, str] = {}
    for i in range(1, G.n + 1):
        prev, cur = _b(i), G.rotation[_b(i)][0]
        steps = 0
        while not cur.startswith("b"):
            nb = G.rotation[cur]
            if len(nb) == 1:
                nxt = nb[0]
            else:
                k = nb.index(prev)
                nxt = nb[(k + 1) % len(nb)] if G.colors[cur] == BLACK else nb[(k - 1) % len(nb)]
            prev, cur = cur, nxt
            steps += 1
            if steps > limit:
                raise TraversalError(f"trip from {i} does not return to the boundary")
        j = int(cur[1:])
        image.append(j)
        leaf = G.rotation[_b(i)][0]
        if j == i and len(G.rotation[leaf]) == 1:
            decorations[i] = "clockwise" if G.colors[leaf] == WHITE else "counterclockwise"
    return TripPermutation(Permutation(tuple(image)), decorations)


def plabic_from_bridges(b: BridgeSequence, lollipop_colors: Sequence[str] | None = None) -> PlabicGraph:
    G = PlabicGraph.lollipops(b.w.n, lollipop_colors)
    for t in reversed(b.bridges):
        G.add_bridge(t.i, t.j)
    return G


@dataclass
class BcfwReport:
    w: str
    a: int
    atoms: int
    chains: int
    connected: bool
    kappa: int | None
    roundtrip_failures: list[dict[str, Any]]
    polygon_sizes: dict[int, int]
    bridge_sequences: list[list[list[int]]]

    @property
    def kappa_ok(self) -> bool:
        return self.kappa is None or self.kappa >= self.a - 1

    @property
    def ok(self) -> bool:
        return (
            self.a == self.atoms
            and self.connected
            and self.kappa_ok
            and not self.roundtrip_failures
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "w": self.w,
            "a": self.a,
            "atoms": self.atoms,
            "chains": self.chains,
            "connected": self.connected,
            "kappa": self.kappa,
            "kappa_ok": self.kappa_ok,
            "roundtrip_failures": self.roundtrip_failures,
            "polygon_sizes": {str(k): v for k, v in self.polygon_sizes.items()},
            "bridge_sequences": self.bridge_sequences,
            "ok": self.ok,
        }


def verify_corollary_bcfw(
    w: Permutation,
    max_chains: int | None = DEFAULT_MAX_CHAINS,
    P: SkeletonPoset | None = None,
) -> BcfwReport:
    """Move graph of all bridge decompositions of a Grassmannian ``w``."""
    if not is_grassmannian(w):
        raise NotGrassmannianError(f"{w} is not Grassmannian")
    if P is None:
        P = build_bip_poset(w)
    a = len(support(w))
    atoms = len(P.atoms(P.bottom, P.top))
    G = move_graph(P, P.bottom, P.top, max_chains)
    kappa = None
    if a >= 2 and len(G) >= 2:
        kappa = G.vertex_connectivity()
    failures = []
    sequences = []
    for chain in G.nodes:
        seq = bridge_sequence(P, chain)
        sequences.append(seq.to_json())
        try:
            trip = trip_permutation(plabic_from_bridges(seq)).perm
        except (NonPlanarBridgeError, TraversalError) as exc:
            failures.append({"chain": list(chain), "error": str(exc)})
            continue
        if trip != w:
            failures.append({"chain": list(chain), "trip": str(trip)})
    return BcfwReport(
        w=str(w),
        a=a,
        atoms=atoms,
        chains=len(G),
        connected=G.is_connected(),
        kappa=kappa,
        roundtrip_failures=failures,
        polygon_sizes=G.polygon_histogram(),
        bridge_sequences=sequences,
    )
