"""V-polytopes over the rationals with LP-backed face oracles.

Nothing here enumerates the face lattice.  Two LP questions answer
everything:

* a segment ``ab`` is an edge iff its midpoint has no convex representation
  putting positive weight on a vertex other than ``a`` and ``b``;
* the smallest face containing a vertex set ``S`` consists of the vertices
  that receive positive weight in some convex representation of the
  barycentre of ``S``.
"""

from __future__ import annotations

import itertools
import math
import threading
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from bipposet.exactgeom.lp import OPTIMAL, solve_standard
from bipposet.symgroup import Permutation, bruhat_interval, identity, vertex_vector


class UnknownLabelError(KeyError):
    pass


class NotAVertexError(ValueError):
    pass


class GenericityError(ValueError):
    """The cost vector is orthogonal to an edge."""

    def __init__(self, edge: tuple[str, str]) -> None:
        super().__init__(f"cost vector is orthogonal to edge {edge[0]}--{edge[1]}")
        self.edge = edge


class FacialOrientationError(ValueError):
    pass


class UndefinedDimensionError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def parse_cost(text: str) -> tuple[Fraction, ...]:
    """``"1,2,4"`` or ``"1/2,3"`` -> exact cost vector."""
    return tuple(parse_rational(p) for p in text.split(",") if p.strip())


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Rank of the difference vectors ``p_i - p_0`` (exact elimination)."""
    if not points:
        raise UndefinedDimensionError("the empty set has no affine dimension")
    base = points[0]
    rows = [[Fraction(a) - Fraction(b) for a, b in zip(p, base)] for p in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / pv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


class RationalPolytope:
    """Convex hull of labelled rational points, all of which must be vertices.

    ``candidate_pairs`` restricts which vertex pairs are LP-tested for
    adjacency; every other pair is declared non-adjacent without a test.
    """

    def __init__(
        self,
        vertices: Iterable[tuple[str, Sequence[Fraction | int]]],
        *,
        candidate_pairs: Iterable[tuple[str, str]] | None = None,
        check_vertices: bool = True,
    ) -> None:
        labels: list[str] = []
        points: list[tuple[Fraction, ...]] = []
        for label, point in vertices:
            labels.append(str(label))
            points.append(tuple(Fraction(x) for x in point))
        if not labels:
            raise ValueError("a polytope needs at least one vertex")
        if len(set(labels)) != len(labels):
            raise ValueError("vertex labels must be unique")
        dims = {len(p) for p in points}
        if len(dims) != 1:
            raise ValueError("all vertices must live in the same ambient space")
        self.labels: tuple[str, ...] = tuple(labels)
        self.points: tuple[tuple[Fraction, ...], ...] = tuple(points)
        self.d: int = dims.pop()
        self.index: dict[str, int] = {lab: i for i, lab in enumerate(labels)}

        # columns of the LP matrix: integer coordinates after a common scaling
        scale = 1
        for p in points:
            for x in p:
                scale = scale * x.denominator // math.gcd(scale, x.denominator)
        self._int_points = [tuple(int(x * scale) for x in p) for p in points]

        self._lock = threading.RLock()
        self._face_cache: dict[frozenset[int], frozenset[int]] = {}
        self._edges: tuple[tuple[str, str], ...] | None = None
        if candidate_pairs is None:
            self._candidates = None
        else:
            self._candidates = {
                frozenset((self._idx(a), self._idx(b))) for a, b in candidate_pairs
            }
        if check_vertices:
            for i, lab in enumerate(self.labels):
                if self._closure({i}) != {i}:
                    raise NotAVertexError(f"{lab} is not a vertex of the convex hull")

    @classmethod
    def from_file(cls, path: str | Path) -> RationalPolytope:
        """Read ``label: p/q p/q ...`` lines; blank lines and ``#`` comments skipped."""
        verts = []
        for raw in Path(path).read_text().splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            label, _, coords = line.partition(":")
            if not _:
                raise ValueError(f"missing ':' in vertex line {raw!r}")
            verts.append((label.strip(), [parse_rational(c) for c in coords.split()]))
        return cls(verts)

    def __len__(self) -> int:
        return len(self.labels)

    def _idx(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise UnknownLabelError(label) from None

    def point(self, label: str) -> tuple[Fraction, ...]:
        return self.points[self._idx(label)]

    def _max_outside(self, target_weights: dict[int, int], known: set[int]) -> tuple[bool, set[int]]:
        """Represent the weighted barycentre; maximise weight off ``known``.

        Returns ``(positive, support)`` where ``positive`` tells whether weight
        outside ``known`` is achievable and ``support`` is the support of an
        optimal representation.
        """
        total = sum(target_weights.values())
        npts = len(self._int_points)
        A = [[total * p[k] for p in self._int_points] for k in range(self.d)]
        b = [sum(w * self._int_points[i][k] for i, w in target_weights.items()) for k in range(self.d)]
        A.append([1] * npts)
        b.append(1)
        c = [0 if i in known else -1 for i in range(npts)]
        res = solve_standard(A, b, c)
        if res.status != OPTIMAL:
            raise AssertionError("barycentre of vertices must be representable")
        assert res.point is not None
        support = {i for i, x in enumerate(res.point) if x > 0}
        return res.value != 0, support

    def _closure(self, idx: set[int]) -> frozenset[int]:
        key = frozenset(idx)
        with self._lock:
            hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        weights = {i: 1 for i in key}
        known = set(key)
        while True:
            positive, support = self._max_outside(weights, known)
            if not positive:
                break
            known |= support
        face = frozenset(known)
        with self._lock:
            self._face_cache[key] = face
            self._face_cache.setdefault(face, face)
        return face

    def is_adjacent(self, a: str, b: str) -> bool:
        ia, ib = self._idx(a), self._idx(b)
        if ia == ib:
            raise ValueError("adjacency needs two distinct vertices")
        if self._candidates is not None and frozenset((ia, ib)) not in self._candidates:
            return False
        positive, _ = self._max_outside({ia: 1, ib: 1}, {ia, ib})
        return not positive

    def edges(self) -> tuple[tuple[str, str], ...]:
        """All edges as label pairs, in vertex-list order."""
        with self._lock:
            if self._edges is not None:
                return self._edges
        if self._candidates is None:
            pairs = itertools.combinations(range(len(self.labels)), 2)
        else:
            pairs = sorted(tuple(sorted(p)) for p in self._candidates)
        found = []
        for i, j in pairs:
            if self.is_adjacent(self.labels[i], self.labels[j]):
                found.append((self.labels[i], self.labels[j]))
        with self._lock:
            self._edges = tuple(found)
        return self._edges

    def smallest_face(self, labels: Iterable[str]) -> frozenset[str]:
        idx = {self._idx(lab) for lab in labels}
        if not idx:
            raise ValueError("smallest_face needs a nonempty vertex set")
        return frozenset(self.labels[i] for i in self._closure(idx))

    def face_dim(self, face: Iterable[str]) -> int:
        pts = [self.point(lab) for lab in sorted(face, key=self._idx)]
        return affine_rank(pts)

    def dim(self) -> int:
        return affine_rank(self.points)

    def is_face(self, labels: Iterable[str]) -> bool:
        idx = {self._idx(lab) for lab in labels}
        if not idx:
            raise ValueError("is_face needs a nonempty vertex set")
        with self._lock:
            hit = self._face_cache.get(frozenset(idx))
        if hit is not None:
            return hit == idx
        # closed iff no representation of the barycentre leaves the set
        positive, _ = self._max_outside({i: 1 for i in idx}, idx)
        return not positive

    def inner(self, c: Sequence[Fraction], label: str) -> Fraction:
        return sum((Fraction(ci) * x for ci, x in zip(c, self.point(label))), Fraction(0))

    def orient(self, c: Sequence[Fraction | int]) -> list[tuple[str, str]]:
        """Edges directed towards increasing ``c``-value."""
        cost = tuple(Fraction(x) for x in c)
        if len(cost) != self.d:
            raise ValueError(f"cost vector has length {len(cost)}, polytope lives in R^{self.d}")
        out = []
        for a, b in self.edges():
            va, vb = self.inner(cost, a), self.inner(cost, b)
            if va == vb:
                raise GenericityError((a, b))
            out.append((a, b) if va < vb else (b, a))
        return out

    def face_source_sink(self, c: Sequence[Fraction | int], face: Iterable[str]) -> tuple[str, str]:
        """Unique source and sink of the orientation restricted to ``face``.

        The local sources/sinks are read off the face's own edge graph, so
        this fails loudly if the orientation is not facial on ``face``.
        """
        cost = tuple(Fraction(x) for x in c)
        verts = sorted(set(face), key=self._idx)
        if len(verts) == 1:
            return verts[0], verts[0]
        members = set(verts)
        has_out = set()
        has_in = set()
        for a, b in self.edges():
            if a in members and b in members:
                va, vb = self.inner(cost, a), self.inner(cost, b)
                if va == vb:
                    raise GenericityError((a, b))
                lo, hi = (a, b) if va < vb else (b, a)
                has_out.add(lo)
                has_in.add(hi)
        sources = [v for v in verts if v not in has_in]
        sinks = [v for v in verts if v not in has_out]
        if len(sources) != 1 or len(sinks) != 1:
            raise FacialOrientationError(
                f"face {sorted(verts)} has sources {sources} and sinks {sinks}"
            )
        return sources[0], sinks[0]

    def to_lines(self) -> list[str]:
        return [f"{lab}: " + " ".join(str(x) for x in p) for lab, p in zip(self.labels, self.points)]


def bruhat_interval_polytope(
    w: Permutation, u: Permutation | None = None, *, check_vertices: bool = False
) -> RationalPolytope:
    """``Q_{u,w}``: vertices labelled by one-line strings, ordered by (length, label).

    Only pairs related by a single transposition are adjacency candidates,
    because the edges of these polytopes are parallel to ``e_i - e_j``.
    """
    if u is None:
        u = identity(w.n)
    perms = sorted(bruhat_interval(u, w), key=lambda z: (z.length(), z.oneline))
    verts = [(str(z), vertex_vector(z)) for z in perms]
    pairs = []
    for x, y in itertools.combinations(perms, 2):
        if sum(1 for a, b in zip(x.oneline, y.oneline) if a != b) == 2:
            pairs.append((str(x), str(y)))
    return RationalPolytope(verts, candidate_pairs=pairs, check_vertices=check_vertices)
