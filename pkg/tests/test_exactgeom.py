import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipposet.exactgeom import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    Constraint,
    DimensionMismatchError,
    FacialOrientationError,
    GenericityError,
    NotAVertexError,
    RationalPolytope,
    UndefinedDimensionError,
    UnknownLabelError,
    bruhat_interval_polytope,
    lp_solve,
    parse_cost,
    parse_rational,
)
from bipposet.symgroup import Permutation, all_permutations, length
from oracles import edges_by_facets, smallest_face_by_facets

Q3412_EDGES = {
    ("1234", "2134"), ("2134", "2314"), ("2314", "3214"), ("3214", "3412"),
    ("1234", "1324"), ("1324", "3124"), ("3124", "3142"), ("3142", "3412"),
    ("3124", "3214"), ("1324", "1342"), ("1342", "3142"), ("1342", "1432"),
    ("1432", "3412"), ("1234", "1243"), ("1243", "1423"), ("1423", "1432"),
    ("2134", "2143"), ("2143", "2413"), ("2413", "3412"), ("2314", "2413"),
    ("1243", "2143"), ("1423", "2413"),
}


def bip(w: str) -> RationalPolytope:
    return bruhat_interval_polytope(Permutation.parse(w))


def F(x) -> Fraction:
    return Fraction(x)


# --- linear programming ---------------------------------------------------

def test_lp_examples():
    r = lp_solve([1], [Constraint([1], ">=", 0), Constraint([1], "<=", 1)])
    assert r.status == OPTIMAL and r.value == 1 and r.point == (1,)
    assert lp_solve([1], [Constraint([1], "<=", -1), Constraint([1], ">=", 0)]).status == INFEASIBLE
    assert lp_solve([1], [Constraint([1], ">=", 0)]).status == UNBOUNDED


def test_lp_exact_fractions():
    # max x + y s.t. 3x + y <= 1, x + 3y <= 1 -> x = y = 1/4
    r = lp_solve([1, 1], [Constraint([3, 1], "<=", 1), Constraint([1, 3], "<=", 1)], nonneg=True)
    assert r.value == Fraction(1, 2)
    assert r.point == (Fraction(1, 4), Fraction(1, 4))


def test_lp_equalities_and_minimise():
    r = lp_solve([1, 2], [Constraint([1, 1], "==", 3)], maximize=False, nonneg=True)
    assert r.value == 3 and r.point == (3, 0)


def test_lp_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        lp_solve([1, 1], [Constraint([1], "<=", 1)])


def brute_force_lp(c, rows):
    """Optimum of max c.x over a bounded 2-d region by checking all vertex candidates."""
    best = None
    for (a1, b1), (a2, b2) in itertools.combinations(rows, 2):
        det = a1[0] * a2[1] - a1[1] * a2[0]
        if det == 0:
            continue
        x = (b1 * a2[1] - b2 * a1[1]) / det
        y = (a1[0] * b2 - a2[0] * b1) / det
        if all(a[0] * x + a[1] * y <= b for a, b in rows):
            val = c[0] * x + c[1] * y
            best = val if best is None else max(best, val)
    return best


small = st.integers(-5, 5)


@settings(max_examples=150, deadline=None)
@given(
    st.tuples(small, small),
    st.lists(st.tuples(st.tuples(small, small), small), min_size=0, max_size=4),
)
def test_lp_matches_vertex_enumeration(c, extra):
    box = [((1, 0), 6), ((-1, 0), 6), ((0, 1), 6), ((0, -1), 6)]
    rows = [((F(a[0]), F(a[1])), F(b)) for a, b in box + extra]
    r = lp_solve(list(c), [Constraint(list(a), "<=", b) for a, b in rows])
    expected = brute_force_lp([F(c[0]), F(c[1])], rows)
    if expected is None:
        assert r.status == INFEASIBLE
    else:
        assert r.status == OPTIMAL
        assert r.value == expected
        x, y = r.point
        assert all(a[0] * x + a[1] * y <= b for a, b in rows)


# --- polytope oracles -------------------------------------------------------

def test_parse_helpers():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_cost("1,2/3,-4") == (1, Fraction(2, 3), -4)


def test_vertex_file(data_dir):
    Q = RationalPolytope.from_file(data_dir / "cube.txt")
    assert len(Q) == 8 and Q.d == 3 and Q.dim() == 3
    assert len(Q.edges()) == 12


def test_interior_point_rejected():
    with pytest.raises(NotAVertexError):
        RationalPolytope([("a", (0, 0)), ("b", (2, 0)), ("c", (0, 2)), ("m", (F("1/2"), F("1/2")))])


def test_unknown_label():
    Q = bip("321")
    with pytest.raises(UnknownLabelError):
        Q.is_adjacent("123", "999")


def test_q3412_edges():
    Q = bip("3412")
    assert len(Q) == 14 and Q.dim() == 3
    assert {tuple(sorted(e)) for e in Q.edges()} == {tuple(sorted(e)) for e in Q3412_EDGES}


def test_adjacency_examples():
    Q = bip("3412")
    assert Q.is_adjacent("1234", "2134")
    assert not Q.is_adjacent("1234", "2143")
    seg = RationalPolytope([("p", (0,)), ("q", (1,))])
    assert seg.is_adjacent("p", "q")


def test_adjacency_symmetric_and_min_degree():
    Q = bip("3412")
    d = Q.dim()
    for a, b in itertools.permutations(Q.labels, 2):
        assert Q.is_adjacent(a, b) == Q.is_adjacent(b, a)
    for a in Q.labels:
        assert sum(Q.is_adjacent(a, b) for b in Q.labels if b != a) >= d


@pytest.mark.parametrize("w", [str(w) for w in all_permutations(4) if length(w) >= 2])
def test_edges_match_qhull(w):
    Q = bruhat_interval_polytope(Permutation.parse(w), check_vertices=True)
    unpruned = RationalPolytope(list(zip(Q.labels, Q.points)))
    oracle = {frozenset(Q.labels[i] for i in e) for e in edges_by_facets(list(Q.points))}
    assert {frozenset(e) for e in Q.edges()} == oracle
    assert {frozenset(e) for e in unpruned.edges()} == oracle


def test_generic_edges_match_qhull(data_dir):
    pyramid = RationalPolytope.from_file(data_dir / "square_pyramid.txt")
    oracle = {frozenset(pyramid.labels[i] for i in e) for e in edges_by_facets(list(pyramid.points))}
    assert {frozenset(e) for e in pyramid.edges()} == oracle


def test_smallest_face_hexagon():
    Q = bip("321")
    assert Q.smallest_face({"123"}) == {"123"}
    assert Q.smallest_face({"123", "213"}) == {"123", "213"}
    assert Q.smallest_face({"123", "321"}) == set(Q.labels)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, 13), min_size=1, max_size=4))
def test_smallest_face_matches_facets_and_is_closure(idx):
    Q = bip("3412")
    S = {Q.labels[i] for i in idx}
    face = Q.smallest_face(S)
    oracle = smallest_face_by_facets(list(Q.points), set(idx))
    assert face == {Q.labels[i] for i in oracle}
    assert S <= face
    assert Q.smallest_face(face) == face
    bigger = set(S) | {Q.labels[0]}
    assert face <= Q.smallest_face(bigger)


def test_face_dim_examples():
    Q = bip("3412")
    assert Q.face_dim({"1234"}) == 0
    assert Q.face_dim({"1234", "2134"}) == 1
    assert Q.face_dim(Q.labels) == 3
    with pytest.raises(UndefinedDimensionError):
        Q.face_dim(set())


def test_is_face_examples():
    assert not bip("321").is_face({"123", "213", "231"})
    Q = bip("3412")
    assert Q.is_face(Q.labels)
    assert Q.is_face({"1234", "2134"})


def test_orient_examples():
    Q = bip("3412")
    rho = (4, 3, 2, 1)
    assert ("1234", "2134") in Q.orient(rho)
    seg = RationalPolytope([("0", (0,)), ("1", (1,))])
    assert seg.orient((1,)) == [("0", "1")]


def test_square_is_not_generic_for_vertical_cost():
    sq = RationalPolytope([("a", (0, 0)), ("b", (1, 0)), ("c", (0, 1)), ("d", (1, 1))])
    with pytest.raises(GenericityError) as err:
        sq.orient((0, 1))
    assert set(err.value.edge) in ({"a", "b"}, {"c", "d"})


def test_orientation_is_acyclic():
    Q = bip("3412")
    edges = Q.orient((4, 3, 2, 1))
    rank = {lab: sum(c * x for c, x in zip((4, 3, 2, 1), Q.point(lab))) for lab in Q.labels}
    assert all(rank[a] < rank[b] for a, b in edges)


def test_face_source_sink_examples():
    Q = bip("3412")
    rho = (4, 3, 2, 1)
    assert Q.face_source_sink(rho, Q.labels) == ("1234", "3412")
    assert Q.face_source_sink(rho, {"1342"}) == ("1342", "1342")
    assert Q.face_source_sink(rho, {"1234", "2134"}) == ("1234", "2134")


def test_face_source_sink_rejects_two_sources():
    Q = bip("321")
    with pytest.raises(FacialOrientationError):
        Q.face_source_sink((3, 2, 1), {"123", "231"})


@pytest.mark.parametrize("w", ["4321", "3412", "2413", "45312", "35142", "52341"])
def test_bip_edges_are_covers_along_root_directions(w):
    Q = bip(w)
    for a, b in Q.edges():
        diff = [x - y for x, y in zip(Q.point(a), Q.point(b))]
        nz = [x for x in diff if x != 0]
        assert len(nz) == 2 and nz[0] == -nz[1]
        assert abs(length(Permutation.parse(a)) - length(Permutation.parse(b))) == 1
