import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bipposet.skeleton import IntervalError, is_face_interval
from bipposet.symgroup import all_permutations
from bipposet.topology import (
    ComplexTooLargeError,
    betti_mod2,
    classify_interval,
    order_complex,
    reduced_euler,
    sphere_pattern,
)
from conftest import bip
from oracles import betti_over_q

S4 = [str(w) for w in all_permutations(4)]


def test_hexagon_full_interval_is_zero_sphere():
    C = order_complex(bip("321"), "123", "321")
    assert len(C.vertices) == 4
    assert C.f_vector == (4, 2)
    v = classify_interval(bip("321"), "123", "321")
    assert v.face and v.sphere_dim == 0
    assert v.betti == [0, 1, 0]
    assert v.mobius == 1 and v.ok


def test_non_face_interval_is_contractible():
    v = classify_interval(bip("321"), "123", "231")
    assert not v.face and v.predicted == "contractible"
    assert v.mobius == 0 and v.betti == [0, 0] and v.ok


def test_cover_interval_gives_empty_complex():
    C = order_complex(bip("321"), "123", "213")
    assert C.f_vector == () and betti_mod2(C) == [1]
    v = classify_interval(bip("321"), "123", "213")
    assert v.sphere_dim == -1 and v.mobius == -1 and v.ok


def test_q3412_full_interval_is_two_sphere():
    v = classify_interval(bip("3412"), "1234", "3412")
    assert v.atoms == 3 and v.mobius == -1
    assert v.face and v.betti == [0, 0, 1, 0]


def test_degenerate_interval_rejected():
    with pytest.raises(IntervalError):
        order_complex(bip("321"), "213", "213")
    with pytest.raises(IntervalError):
        order_complex(bip("321"), "213", "132")


def test_face_cap():
    P = bip("4321")
    C = order_complex(P, "1234", "4321", max_faces=10)
    assert C.faces is None and C.num_faces > 10
    with pytest.raises(ComplexTooLargeError):
        betti_mod2(C)
    v = classify_interval(P, "1234", "4321", max_faces=10)
    assert v.betti is None and v.ok
    assert v.to_json()["evidence"] == "euler-only"


def test_sphere_pattern():
    assert sphere_pattern(-1) == [1]
    assert sphere_pattern(0) == [0, 1]
    assert sphere_pattern(1, 4) == [0, 0, 1, 0]


@pytest.mark.parametrize("w", ["3412", "4231", "4321", "2413", "3421"])
def test_betti_matches_rational_homology(w):
    P = bip(w)
    for u, v in P.intervals():
        if u == v:
            continue
        C = order_complex(P, u, v)
        assert betti_mod2(C) == betti_over_q([list(level) for level in C.faces])


@pytest.mark.parametrize("w", ["3412", "4231", "2413"])
def test_mobius_is_reduced_euler_characteristic(w):
    P = bip(w)
    for u, v in P.intervals():
        if u != v:
            assert reduced_euler(order_complex(P, u, v)) == P.mobius(u, v)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(S4), st.data())
def test_euler_poincare(w, data):
    P = bip(w)
    pairs = [(u, v) for u, v in P.intervals() if u != v]
    if not pairs:
        return
    u, v = data.draw(st.sampled_from(pairs))
    C = order_complex(P, u, v)
    betti = betti_mod2(C)
    alternating = sum((-1) ** (k - 1) * b for k, b in enumerate(betti))
    assert alternating == reduced_euler(C)
    assert len(C.vertices) == C.f_vector[0] if C.f_vector else not C.vertices


@pytest.mark.parametrize("w", S4)
def test_face_intervals_are_spheres_others_contractible(w):
    P = bip(w)
    for u, v in P.intervals():
        if u == v:
            continue
        verdict = classify_interval(P, u, v)
        assert verdict.ok, verdict.to_json()
        assert verdict.face == is_face_interval(P, u, v)
