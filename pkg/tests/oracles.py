"""Brute-force reference implementations used only by the tests."""

from __future__ import annotations

import itertools
from functools import lru_cache

import networkx as nx
import numpy as np
from scipy.spatial import ConvexHull


def perm_mul(u: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(u[t[k] - 1] for k in range(len(t)))


def simple(i: int, n: int) -> tuple[int, ...]:
    p = list(range(1, n + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def inversions(w: tuple[int, ...]) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(w)), 2) if w[i] > w[j])


@lru_cache(maxsize=None)
def words_by_search(w: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    """All words of length ``inv(w)`` in simple reflections that multiply to ``w``."""
    n = len(w)
    k = inversions(w)
    e = tuple(range(1, n + 1))
    out = set()
    for word in itertools.product(range(1, n), repeat=k):
        z = e
        for i in word:
            z = perm_mul(z, simple(i, n))
        if z == w:
            out.add(word)
    return frozenset(out)


def bruhat_by_subwords(u: tuple[int, ...], w: tuple[int, ...]) -> bool:
    """Subword property: ``u <= w`` iff some subword of a reduced word of ``w`` gives ``u``."""
    n = len(w)
    word = min(words_by_search(w))
    e = tuple(range(1, n + 1))
    for mask in itertools.product((0, 1), repeat=len(word)):
        z = e
        for keep, i in zip(mask, word):
            if keep:
                z = perm_mul(z, simple(i, n))
        if z == u:
            return True
    return False


def affine_coords(points: list[tuple]) -> np.ndarray:
    X = np.array([[float(x) for x in p] for p in points])
    X = X - X.mean(axis=0)
    _, s, vt = np.linalg.svd(X)
    r = int((s > 1e-9).sum())
    return X @ vt[:r].T


def hull_facets(points: list[tuple]) -> list[frozenset[int]]:
    """Vertex index sets of the facets, via floating-point Qhull in the affine span."""
    Y = affine_coords(points)
    if Y.shape[1] == 1:
        lo, hi = int(Y[:, 0].argmin()), int(Y[:, 0].argmax())
        return [frozenset([lo]), frozenset([hi])]
    hull = ConvexHull(Y)
    facets = set()
    for eq in hull.equations:
        on = frozenset(i for i in range(len(Y)) if abs(Y[i] @ eq[:-1] + eq[-1]) < 1e-7)
        facets.add(on)
    return sorted(facets, key=sorted)


def smallest_face_by_facets(points: list[tuple], S: set[int]) -> frozenset[int]:
    facets = hull_facets(points)
    face = frozenset(range(len(points)))
    for F in facets:
        if S <= F:
            face &= F
    return face


def edges_by_facets(points: list[tuple]) -> set[frozenset[int]]:
    return {
        frozenset((a, b))
        for a, b in itertools.combinations(range(len(points)), 2)
        if smallest_face_by_facets(points, {a, b}) == {a, b}
    }


def mobius_naive(leq, elems: list, u, v) -> int:
    if u == v:
        return 1
    return -sum(mobius_naive(leq, elems, u, z) for z in elems if leq(u, z) and leq(z, v) and z != v)


def join_naive(leq, elems: list, x, y):
    ub = [z for z in elems if leq(x, z) and leq(y, z)]
    least = [z for z in ub if all(leq(z, t) for t in ub)]
    return least[0] if len(least) == 1 else None


def chains_by_networkx(edges, u, v) -> set[tuple]:
    G = nx.DiGraph(list(edges))
    if u == v:
        return {(u,)}
    return {tuple(p) for p in nx.all_simple_paths(G, u, v)}


def kappa_by_networkx(adj: list[set[int]]) -> int:
    G = nx.Graph()
    G.add_nodes_from(range(len(adj)))
    G.add_edges_from((i, j) for i, nb in enumerate(adj) for j in nb)
    return nx.node_connectivity(G)


def betti_over_q(faces: list[list[tuple]]) -> list[int]:
    """Reduced rational Betti numbers from signed boundary matrices, indexed from degree -1."""
    dims = [1] + [len(level) for level in faces]
    ranks = [0] * (len(dims) + 1)
    if faces and faces[0]:
        ranks[1] = 1
    for d in range(1, len(faces)):
        index = {c: i for i, c in enumerate(faces[d - 1])}
        M = np.zeros((len(faces[d - 1]), len(faces[d])))
        for j, c in enumerate(faces[d]):
            for k in range(len(c)):
                M[index[c[:k] + c[k + 1:]], j] = (-1) ** k
        ranks[d + 1] = int(np.linalg.matrix_rank(M)) if M.size else 0
    return [dims[k] - ranks[k] - ranks[k + 1] for k in range(len(dims))]
