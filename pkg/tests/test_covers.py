import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confsup import fixtures
from confsup.core.cohomology import CohomologyClass, cohomology, cup, unit_class
from confsup.core.complexes import CellMap, build_complex
from confsup.covers import (
    CoverError,
    CoveringMap,
    Span,
    identity_cover,
    identity_map,
    pullback_cochain,
    span_of_map,
    simplicial_cover,
    transfer_cochain,
    verify_naturality,
    verify_projection_formula,
    verify_transfer_chain_map,
    verify_transfer_degree,
)


def test_fixture_covers_have_expected_degrees(cover_table):
    degrees = {name: p.degree for name, p in cover_table.items()}
    assert degrees == {
        "identity-circle": 1, "circle-double": 2, "circle-triple": 3, "circle-trivial-double": 2,
        "sphere-RP2": 2, "interval-trivial-double": 2, "identity-interval": 1,
    }


@pytest.mark.parametrize("name", sorted(fixtures.covers()))
def test_transfer_identities(cover_table, name):
    p = cover_table[name]
    assert verify_transfer_degree(p)
    assert verify_transfer_chain_map(p, trials=30, seed=1)
    assert verify_projection_formula(p)


def test_transfer_of_unit_on_connected_double_cover(cover_table):
    p = cover_table["circle-double"]
    assert transfer_cochain(p, unit_class(p.total)) == 2 * unit_class(p.base)


def test_transfer_is_additive_over_sheets(cover_table):
    p = cover_table["circle-trivial-double"]
    gens = cohomology(p.total, 1)
    assert len(gens) == 2
    a, b = gens
    # the total space is two circles; transfer of each sheet's generator is a generator
    ta, tb = transfer_cochain(p, a), transfer_cochain(p, b)
    assert transfer_cochain(p, a + b) == ta + tb
    assert ta.coordinates() in ((1,), (-1,)) and tb.coordinates() in ((1,), (-1,))


def test_projection_formula_example_circle(cover_table):
    p = cover_table["circle-double"]
    (a,) = cohomology(p.base, 1)
    one = unit_class(p.total)
    assert transfer_cochain(p, cup(pullback_cochain(p, a), one)) == cup(a, transfer_cochain(p, one))
    assert cup(a, transfer_cochain(p, one)) == 2 * a


def test_cover_rejects_uneven_fibers():
    base = fixtures.interval(1)
    total = build_complex([[0, 1], [2, 3], [4]])
    with pytest.raises(CoverError):
        simplicial_cover(total, base, lambda v: v % 2 if v < 4 else 0)


def test_cover_rejects_non_cellular_assignment():
    base = fixtures.circle(3)
    with pytest.raises(CoverError):
        # vertices fixed but edges permuted: does not commute with the boundary
        CoveringMap(base, base, [[0, 1, 2], [1, 2, 0]])


@given(st.integers(0, 2**16))
@settings(max_examples=20, deadline=None)
def test_transfer_commutes_with_coboundary_random(seed):
    p = fixtures.covers()["sphere-RP2"]
    assert verify_transfer_chain_map(p, trials=5, seed=seed)


def _deck(shift):
    def h(v):
        a, w = v
        return ((w + shift) % 3, (w + shift) % 6)
    return h


def test_naturality_identity_square(cover_table):
    p = cover_table["circle-double"]
    f = Span(p, identity_map(p.total))
    g = identity_map(p.base)
    h = identity_map(p.total)
    rep = verify_naturality(g, h, f, f)
    assert rep and rep.details["precondition"]


def test_naturality_under_deck_transformation(cover_table):
    p = cover_table["circle-double"]
    f = Span(p, identity_map(p.total))
    h = CellMap.simplicial(p.total, p.total, _deck(3))
    g = identity_map(p.base)
    rep = verify_naturality(g, h, f, f)
    assert rep and rep.details["precondition"] and rep.checked == 2


def test_naturality_precondition_failure_is_reported(cover_table):
    p = cover_table["circle-double"]
    f = Span(p, identity_map(p.total))
    h = CellMap.simplicial(p.total, p.total, _deck(1))
    g = identity_map(p.base)
    rep = verify_naturality(g, h, f, f)
    assert not rep and rep.details["precondition"] is False


def test_span_of_map_pulls_back_like_the_map():
    C6 = build_complex([[i, (i + 1) % 6] for i in range(6)])
    C3 = fixtures.circle(3)
    f = CellMap.simplicial(C6, C3, lambda v: v % 3)
    s = span_of_map(f)
    (a,) = cohomology(C3, 1)
    direct = CohomologyClass(C6, 1, f.pullback(1, a.values))
    assert s.pullback(a) == direct
    assert identity_cover(C3).degree == 1
