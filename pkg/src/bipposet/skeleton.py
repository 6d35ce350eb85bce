"""1-skeleton posets of polytopes oriented by a cost vector.

Elements are stored in a linear extension of the order and the order relation
is kept as two bitsets per element (its up-set and down-set).  All lattice
operations are read off those bitsets.
"""

from __future__ import annotations

import heapq
import itertools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Sequence

from bipposet.exactgeom import RationalPolytope, bruhat_interval_polytope
from bipposet.symgroup import Permutation, length, longest


class NotALatticeError(ValueError):
    def __init__(self, x: str, y: str, kind: str) -> None:
        super().__init__(f"{x} and {y} have no unique {kind}")
        self.pair = (x, y)


class IntervalError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    """Outcome of a verification; ``witness`` pins down the first failure."""

    ok: bool
    witness: dict[str, Any] | None = None

    def __bool__(self) -> bool:
        return self.ok


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _subsets(items: Sequence[str], min_size: int = 0) -> Iterator[tuple[str, ...]]:
    for k in range(min_size, len(items) + 1):
        yield from itertools.combinations(items, k)


class SkeletonPoset:
    """Transitive closure of an acyclic orientation of a graph.

    ``edges`` are the oriented edges (low, high).  When a polytope and cost
    vector are attached, the geometric checks (directional simplicity,
    pseudojoins, face criteria) become available.
    """

    def __init__(
        self,
        labels: Iterable[str],
        edges: Iterable[tuple[str, str]],
        *,
        polytope: RationalPolytope | None = None,
        cost: Sequence[Fraction] | None = None,
        perms: dict[str, Permutation] | None = None,
        w: Permutation | None = None,
    ) -> None:
        given = [str(x) for x in labels]
        pos = {lab: i for i, lab in enumerate(given)}
        if len(pos) != len(given):
            raise ValueError("labels must be unique")
        edge_list = sorted({(str(a), str(b)) for a, b in edges}, key=lambda e: (pos[e[0]], pos[e[1]]))
        out: dict[str, list[str]] = {lab: [] for lab in given}
        indeg = {lab: 0 for lab in given}
        for a, b in edge_list:
            out[a].append(b)
            indeg[b] += 1

        def priority(lab: str) -> tuple:
            if polytope is not None and cost is not None:
                return (polytope.inner(cost, lab), pos[lab])
            return (pos[lab],)

        heap = [(priority(lab), lab) for lab in given if indeg[lab] == 0]
        heapq.heapify(heap)
        remaining = dict(indeg)
        order: list[str] = []
        while heap:
            _, lab = heapq.heappop(heap)
            order.append(lab)
            for b in out[lab]:
                remaining[b] -= 1
                if remaining[b] == 0:
                    heapq.heappush(heap, (priority(b), b))
        if len(order) != len(given):
            raise OrientationError("orientation has a directed cycle")

        self.labels: tuple[str, ...] = tuple(order)
        self.index: dict[str, int] = {lab: i for i, lab in enumerate(order)}
        self.polytope = polytope
        self.cost = tuple(Fraction(c) for c in cost) if cost is not None else None
        self.perms = perms
        self.w = w
        n = len(order)
        self.succ: list[list[int]] = [[] for _ in range(n)]
        self.pred: list[list[int]] = [[] for _ in range(n)]
        for a, b in edge_list:
            ia, ib = self.index[a], self.index[b]
            self.succ[ia].append(ib)
            self.pred[ib].append(ia)
        for lst in itertools.chain(self.succ, self.pred):
            lst.sort(key=lambda i: self.labels[i])
        self.edges: tuple[tuple[str, str], ...] = tuple(
            (self.labels[a], self.labels[b]) for a in range(n) for b in self.succ[a]
        )

        self.up: list[int] = [0] * n
        for i in reversed(range(n)):
            m = 1 << i
            for j in self.succ[i]:
                m |= self.up[j]
            self.up[i] = m
        self.down: list[int] = [0] * n
        for i in range(n):
            m = 1 << i
            for j in self.pred[i]:
                m |= self.down[j]
            self.down[i] = m

        sources = [i for i in range(n) if not self.pred[i]]
        sinks = [i for i in range(n) if not self.succ[i]]
        if len(sources) != 1 or len(sinks) != 1:
            raise OrientationError(
                f"expected a unique source and sink, got {len(sources)} and {len(sinks)}"
            )
        self.bottom: str = self.labels[sources[0]]
        self.top: str = self.labels[sinks[0]]
        self._lock = threading.Lock()
        self._mobius: dict[int, dict[int, int]] = {}
        self._memo: dict[Any, Any] = {}

    def __len__(self) -> int:
        return len(self.labels)

    def memo(self, key: Any, compute: Callable[[], Any]) -> Any:
        """Cache derived data on the poset (thread-safe, first writer wins)."""
        with self._lock:
            if key in self._memo:
                return self._memo[key]
        value = compute()
        with self._lock:
            return self._memo.setdefault(key, value)

    def __contains__(self, label: str) -> bool:
        return label in self.index

    def _i(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise KeyError(f"unknown element {label!r}") from None

    def labels_of(self, mask: int) -> list[str]:
        return [self.labels[i] for i in iter_bits(mask)]

    def mask_of(self, labels: Iterable[str]) -> int:
        m = 0
        for lab in labels:
            m |= 1 << self._i(lab)
        return m

    def leq(self, x: str, y: str) -> bool:
        return bool(self.up[self._i(x)] >> self._i(y) & 1)

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.leq(x, y)

    def upper_covers(self, x: str) -> list[str]:
        return [self.labels[j] for j in self.succ[self._i(x)]]

    def lower_covers(self, x: str) -> list[str]:
        return [self.labels[j] for j in self.pred[self._i(x)]]

    def _require_leq(self, u: str, v: str) -> None:
        if not self.leq(u, v):
            raise IntervalError(f"{u} is not below {v}")

    def interval_mask(self, u: str, v: str) -> int:
        self._require_leq(u, v)
        return self.up[self._i(u)] & self.down[self._i(v)]

    def interval(self, u: str, v: str) -> list[str]:
        """Closed interval ``[u, v]`` in linear-extension order."""
        return self.labels_of(self.interval_mask(u, v))

    def intervals(self) -> Iterator[tuple[str, str]]:
        for i in range(len(self.labels)):
            for j in iter_bits(self.up[i]):
                yield self.labels[i], self.labels[j]

    def atoms(self, u: str, v: str) -> list[str]:
        self._require_leq(u, v)
        dv = self.down[self._i(v)]
        return [self.labels[j] for j in self.succ[self._i(u)] if dv >> j & 1]

    def join(self, x: str, y: str) -> str:
        common = self.up[self._i(x)] & self.up[self._i(y)]
        if common:
            low = (common & -common).bit_length() - 1
            if common & ~self.up[low] == 0:
                return self.labels[low]
        raise NotALatticeError(x, y, "join")

    def meet(self, x: str, y: str) -> str:
        common = self.down[self._i(x)] & self.down[self._i(y)]
        if common:
            high = common.bit_length() - 1
            if common & ~self.down[high] == 0:
                return self.labels[high]
        raise NotALatticeError(x, y, "meet")

    def join_all(self, items: Iterable[str], empty: str | None = None) -> str:
        """Join of ``items``; the empty join is ``empty`` (default: bottom)."""
        result = None
        for x in items:
            result = x if result is None else self.join(result, x)
        if result is None:
            return self.bottom if empty is None else empty
        return result

    def mobius(self, u: str, v: str) -> int:
        self._require_leq(u, v)
        iu = self._i(u)
        with self._lock:
            table = self._mobius.get(iu)
        if table is None:
            table = {}
            upset = self.up[iu]
            for z in iter_bits(upset):
                if z == iu:
                    table[z] = 1
                    continue
                below = self.down[z] & upset & ~(1 << z)
                table[z] = -sum(table[y] for y in iter_bits(below))
            with self._lock:
                self._mobius[iu] = table
        return table[self._i(v)]

    def to_json(self, tables: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "elements": list(self.labels),
            "hasse": [list(e) for e in self.edges],
            "bottom": self.bottom,
            "top": self.top,
        }
        if tables:
            labs = self.labels
            out["join"] = [[self.join(x, y) for y in labs] for x in labs]
            out["meet"] = [[self.meet(x, y) for y in labs] for x in labs]
        return out


def rho(n: int) -> tuple[Fraction, ...]:
    """The cost vector ``(n, n-1, ..., 1)``."""
    return tuple(Fraction(k) for k in range(n, 0, -1))


def build_generic_poset(
    polytope: RationalPolytope,
    cost: Sequence[Fraction | int],
    *,
    perms: dict[str, Permutation] | None = None,
    w: Permutation | None = None,
) -> SkeletonPoset:
    c = tuple(Fraction(x) for x in cost)
    edges = polytope.orient(c)
    return SkeletonPoset(polytope.labels, edges, polytope=polytope, cost=c, perms=perms, w=w)


def build_bip_poset(w: Permutation) -> SkeletonPoset:
    """``P_w``: the skeleton of ``Q_w`` oriented by ``rho``."""
    q = bruhat_interval_polytope(w)
    perms = {lab: Permutation.parse(lab) for lab in q.labels}
    return build_generic_poset(q, rho(w.n), perms=perms, w=w)


def is_permutahedron_poset(P: SkeletonPoset) -> bool:
    return P.w is not None and P.w == longest(P.w.n)


def check_edge_lengths(P: SkeletonPoset) -> Check:
    """Every oriented edge of ``P_w`` raises Coxeter length by exactly one."""
    if P.perms is None:
        raise PreconditionError("edge-length check needs permutation labels")
    bad = [
        [a, b]
        for a, b in P.edges
        if length(P.perms[b]) != length(P.perms[a]) + 1
    ]
    if bad:
        return Check(False, {"edges": bad})
    return Check(True)


def check_hasse_property(P: SkeletonPoset) -> Check:
    """No oriented edge is implied by a longer directed path."""
    for i, outs in enumerate(P.succ):
        for b in outs:
            for c in outs:
                if c != b and P.up[c] >> b & 1:
                    return Check(False, {"edge": [P.labels[i], P.labels[b]], "via": P.labels[c]})
    return Check(True)


def check_lattice(P: SkeletonPoset) -> Check:
    labs = P.labels
    for x, y in itertools.combinations(labs, 2):
        for op in (P.join, P.meet):
            try:
                op(x, y)
            except NotALatticeError:
                return Check(False, {"pair": [x, y], "operation": op.__name__})
    return Check(True)


@dataclass
class DirectionalReport:
    ok: bool
    vertex: str | None = None
    edges: tuple[str, ...] | None = None
    reason: str = ""
    faces: dict[tuple[str, frozenset[str]], frozenset[str]] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _require_geometry(P: SkeletonPoset) -> RationalPolytope:
    if P.polytope is None or P.cost is None:
        raise PreconditionError("this check needs the backing polytope and cost vector")
    return P.polytope


def check_directionally_simple(P: SkeletonPoset) -> DirectionalReport:
    """Every set ``E`` of out-edges at ``v`` spans a distinct ``|E|``-face.

    The faces ``F_E`` found on the way are returned in the report; at a
    directionally simple skeleton they are all faces of the polytope.
    """
    Q = _require_geometry(P)
    faces: dict[tuple[str, frozenset[str]], frozenset[str]] = {}
    for v in P.labels:
        outs = P.upper_covers(v)
        seen: dict[frozenset[str], tuple[str, ...]] = {}
        for E in _subsets(outs):
            F = Q.smallest_face((v, *E))
            dim = Q.face_dim(F)
            if dim != len(E):
                return DirectionalReport(False, v, E, f"face spanned has dimension {dim}", faces)
            inside = tuple(b for b in outs if b in F)
            if set(inside) != set(E):
                return DirectionalReport(
                    False, v, E, f"face also contains out-edges to {sorted(set(inside) - set(E))}", faces
                )
            if F in seen:
                return DirectionalReport(False, v, E, f"same face as {seen[F]}", faces)
            seen[F] = E
            faces[(v, frozenset(E))] = F
    return DirectionalReport(True, faces=faces)


def pseudojoin(P: SkeletonPoset, u: str, S: Iterable[str]) -> str:
    """Sink of the smallest face containing ``u`` and the upper covers ``S``."""
    Q = _require_geometry(P)
    S = list(S)
    covers = set(P.upper_covers(u))
    stray = [s for s in S if s not in covers]
    if stray:
        raise PreconditionError(f"{stray} do not cover {u}")
    F = Q.smallest_face([u, *S])
    assert P.cost is not None
    return Q.face_source_sink(P.cost, F)[1]


def check_join_equals_pseudojoin(P: SkeletonPoset) -> Check:
    for u in P.labels:
        for S in _subsets(P.upper_covers(u), 1):
            j = P.join_all(S)
            pj = pseudojoin(P, u, S)
            if j != pj:
                return Check(False, {"u": u, "S": list(S), "join": j, "pseudojoin": pj})
    return Check(True)


def check_distinct_joins(P: SkeletonPoset, u: str, v: str) -> Check:
    """``S -> join(S)`` is injective on subsets of the atoms of ``[u, v]``."""
    A = P.atoms(u, v)
    seen: dict[str, tuple[str, ...]] = {}
    for S in _subsets(A):
        j = P.join_all(S, empty=u)
        if j in seen:
            return Check(False, {"u": u, "v": v, "S": list(seen[j]), "T": list(S), "join": j})
        seen[j] = S
    return Check(True)


def check_atom_map(P: SkeletonPoset, u: str, v: str) -> Check:
    """``z -> {a in atoms : a <= z}`` is order preserving and onto all atom subsets."""
    A = P.atoms(u, v)
    elems = P.interval(u, v)
    image = {z: frozenset(a for a in A if P.leq(a, z)) for z in elems}
    for x in elems:
        for y in elems:
            if P.leq(x, y) and not image[x] <= image[y]:
                return Check(False, {"u": u, "v": v, "x": x, "y": y})
    hit = set(image.values())
    if len(hit) != 2 ** len(A):
        missing = [list(S) for S in _subsets(A) if frozenset(S) not in hit]
        return Check(False, {"u": u, "v": v, "missing": missing})
    return Check(True)


def check_nonrevisiting(P: SkeletonPoset, F: Iterable[str], *, trusted: bool = False) -> Check:
    """For ``x <= y`` in the face ``F`` the whole interval ``[x, y]`` lies in ``F``."""
    F = frozenset(F)
    if not trusted:
        Q = _require_geometry(P)
        if not Q.is_face(F):
            raise PreconditionError(f"{sorted(F)} is not a face")
    fmask = P.mask_of(F)
    for i in iter_bits(fmask):
        for j in iter_bits(P.up[i] & fmask):
            stray = P.up[i] & P.down[j] & ~fmask
            if stray:
                return Check(
                    False,
                    {"face": sorted(F), "x": P.labels[i], "y": P.labels[j], "outside": P.labels_of(stray)},
                )
    return Check(True)


def is_face_interval(P: SkeletonPoset, u: str, v: str) -> bool:
    """Lattice face criterion: ``v`` is the join of the atoms of ``[u, v]``."""
    return P.join_all(P.atoms(u, v), empty=u) == v
