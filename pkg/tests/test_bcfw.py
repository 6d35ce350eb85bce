import itertools

import pytest

from bipposet.bcfw import (
    BLACK,
    WHITE,
    BridgeSequence,
    ChainError,
    NonPlanarBridgeError,
    NotGrassmannianError,
    PlabicGraph,
    TraversalError,
    bridge_sequence,
    plabic_from_bridges,
    trip_permutation,
    verify_corollary_bcfw,
)
from bipposet.moves import maximal_chains
from bipposet.symgroup import Permutation, Transposition, all_permutations, identity, is_grassmannian, support
from conftest import bip

T = Transposition


def crossing(bridges) -> bool:
    """Two bridges whose feet interleave around the circle."""
    return any(
        a.i < b.i < a.j < b.j or b.i < a.i < b.j < a.j
        for a, b in itertools.combinations(bridges, 2)
    )


def test_bridge_sequence_of_hexagon_chain():
    seq = bridge_sequence(bip("321"), ("123", "213", "231", "321"))
    assert seq.bridges == (T(1, 2), T(2, 3), T(1, 2))
    assert seq.to_json() == [[1, 2], [2, 3], [1, 2]]


def test_trivial_chain_has_no_bridges():
    seq = bridge_sequence(bip("123"), ("123",))
    assert seq.bridges == ()


def test_bridge_sequence_rejects_bad_chains():
    P = bip("321")
    with pytest.raises(ChainError):
        bridge_sequence(P, ("123", "213", "231"))
    with pytest.raises(ChainError):
        BridgeSequence(Permutation.parse("321"), (T(1, 2), T(1, 2)))


def test_single_bridge():
    G = plabic_from_bridges(BridgeSequence(Permutation.parse("21"), (T(1, 2),)))
    G.validate()
    assert trip_permutation(G).perm == Permutation.parse("21")
    colors = sorted(G.colors[v] for v in G.colors if len(G.rotation[v]) == 3)
    assert colors == [BLACK, WHITE]


def test_empty_sequence_gives_decorated_identity():
    G = plabic_from_bridges(BridgeSequence(identity(3), ()))
    trip = trip_permutation(G)
    assert trip.perm == identity(3)
    assert trip.decorations == {1: "clockwise", 2: "clockwise", 3: "clockwise"}
    black = trip_permutation(PlabicGraph.lollipops(2, [BLACK, WHITE])).decorations
    assert black == {1: "counterclockwise", 2: "clockwise"}


def test_forced_crossing_is_detected():
    G = PlabicGraph.lollipops(4)
    G.add_bridge(1, 3)
    with pytest.raises(NonPlanarBridgeError):
        G.add_bridge(2, 4)


def test_planarity_of_fresh_graphs():
    G = PlabicGraph.lollipops(5)
    assert G.is_planar()
    G.add_bridge(2, 4)
    G.add_bridge(1, 5)
    G.add_bridge(2, 3)
    G.validate()


def test_validate_catches_broken_symmetry():
    G = PlabicGraph.lollipops(2)
    G.add_bridge(1, 2)
    leaf = G.rotation["b1"][0]
    G.rotation[leaf] = [x for x in G.rotation[leaf] if x != "b1"] + ["b2"]
    with pytest.raises(TraversalError):
        G.validate()


def test_not_grassmannian():
    with pytest.raises(NotGrassmannianError):
        verify_corollary_bcfw(Permutation.parse("321"))


def test_2413_bridges():
    P = bip("2413")
    chains = maximal_chains(P, P.bottom, P.top)
    assert len(chains) == 6
    for c in chains:
        seq = bridge_sequence(P, c)
        assert len(seq.bridges) == 3
        # (i j) lies in the parabolic subgroup on s_i .. s_{j-1}
        assert {k for t in seq.bridges for k in range(t.i, t.j)} == support(P.w) == {1, 2, 3}


def test_2413_roundtrip_fails_exactly_on_crossing_chains():
    w = Permutation.parse("2413")
    report = verify_corollary_bcfw(w)
    assert report.a == report.atoms == 3
    assert report.connected
    failed = {tuple(f["chain"]) for f in report.roundtrip_failures}
    assert len(failed) == 2
    P = bip("2413")
    for c in maximal_chains(P, P.bottom, P.top):
        seq = bridge_sequence(P, c)
        if c in failed:
            assert crossing(seq.bridges)
            with pytest.raises(NonPlanarBridgeError):
                plabic_from_bridges(seq)
        else:
            assert trip_permutation(plabic_from_bridges(seq)).perm == w


@pytest.mark.parametrize("n", [3, 4, 5])
def test_built_graphs_always_realise_w(n):
    # a decomposition either fails loudly or yields a planar graph with trip w
    for w in all_permutations(n):
        if not is_grassmannian(w):
            continue
        P = bip(str(w))
        for c in maximal_chains(P, P.bottom, P.top):
            seq = bridge_sequence(P, c)
            try:
                G = plabic_from_bridges(seq)
            except NonPlanarBridgeError:
                assert n == 5 or crossing(seq.bridges)
                continue
            G.validate()
            assert trip_permutation(G).perm == w


def test_blocked_without_crossing():
    # nested bridges sharing a foot block the arc even though no pair interleaves
    seq = BridgeSequence(Permutation.parse("24513"), (T(2, 3), T(1, 3), T(3, 4), T(2, 3), T(3, 5)))
    assert not crossing(seq.bridges)
    with pytest.raises(NonPlanarBridgeError):
        plabic_from_bridges(seq)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_atoms_match_support_and_graph_connected(n):
    for w in all_permutations(n):
        if not is_grassmannian(w):
            continue
        r = verify_corollary_bcfw(w)
        assert r.a == r.atoms == len(support(w))
        assert r.connected and r.kappa_ok


def test_failure_counts():
    def tally(n):
        bad = total = 0
        for w in all_permutations(n):
            if is_grassmannian(w):
                r = verify_corollary_bcfw(w)
                bad += len(r.roundtrip_failures)
                total += r.chains
        return bad, total

    assert tally(4) == (2, 40)
    assert tally(5) == (62, 469)


def test_failing_permutations():
    def failing(n):
        return sorted(str(w) for w in all_permutations(n)
                      if is_grassmannian(w) and verify_corollary_bcfw(w).roundtrip_failures)

    assert failing(3) == []
    assert failing(4) == ["2413"]
    assert failing(5) == ["13524", "23514", "24135", "24513", "25134", "35124"]


def test_report_json():
    out = verify_corollary_bcfw(Permutation.parse("1342")).to_json()
    assert out["ok"] and out["a"] == 2 and out["kappa"] == 1
    assert out["polygon_sizes"] == {"4": 1}
