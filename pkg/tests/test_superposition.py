import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confsup import fixtures
from confsup.config_models import ConfigSpaces
from confsup.core.complexes import CellMap, ComplexError
from confsup.covers import Span, identity_map, verify_naturality
from confsup.formal_sums import FormalSum, LabelledConfig, X0
from confsup.superposition import (
    INFINITY,
    forget_colors,
    restricted_cross,
    separate_colors,
    sup,
    sup_table,
    sup_via_product,
    superpose_points,
    unit,
    verify_divided_powers,
    verify_mu_factorization,
    verify_phi_factorization,
    verify_ring_axioms,
    verify_unit_laws,
)


@pytest.fixture(scope="module")
def disk1():
    return ConfigSpaces(fixtures.disk(), subdiv=1, max_dim=2)


@pytest.fixture(scope="module")
def interval2():
    return ConfigSpaces(fixtures.interval(), subdiv=2, max_dim=2)


def test_sup_of_units_on_two_points(disk1, interval2):
    for sp in (disk1, interval2):
        assert sup(sp, 1, 1, unit(sp, 1), unit(sp, 1)) == 2 * unit(sp, 2)


def test_unit_of_empty_configuration(disk1):
    a = disk1.unordered(2).cohomology(1).generators()[0]
    assert sup(disk1, 2, 0, a, unit(disk1, 0)) == a
    assert sup(disk1, 0, 2, unit(disk1, 0), a) == a


def test_interval_units_on_three_points(interval2):
    assert sup(interval2, 2, 1, unit(interval2, 2), unit(interval2, 1)) == 3 * unit(interval2, 3)


@pytest.mark.parametrize("n, m", [(1, 1), (1, 2), (2, 1), (2, 0)])
def test_direct_restriction_agrees_with_product_route(disk1, n, m):
    for a in disk1.unordered(n).cohomology(0).generators() + disk1.unordered(n).cohomology(1).generators():
        for b in disk1.unordered(m).cohomology(0).generators():
            assert sup(disk1, n, m, a, b) == sup_via_product(disk1, n, m, a, b)
            assert sup(disk1, m, n, b, a) == sup_via_product(disk1, m, n, b, a)


def test_restricted_cross_is_a_cocycle(disk1):
    a = disk1.unordered(2).cohomology(1).generators()[0]
    x = restricted_cross(disk1, 2, 1, a, unit(disk1, 1))
    assert x.is_cocycle()


def test_mismatched_classes_are_rejected(disk1, interval2):
    with pytest.raises(ComplexError):
        sup(disk1, 1, 1, unit(interval2, 1), unit(disk1, 1))


def test_divided_powers(disk1, interval2):
    assert verify_divided_powers(disk1, 4, release=False)
    assert verify_divided_powers(interval2, 4, release=False)


def test_table_degree_zero_row_is_binomial(interval2):
    table = sup_table(interval2, 3)
    for (la, lb), coords in table.entries.items():
        n, m = la[0], lb[0]
        assert coords == (comb(n + m, n),)


def test_table_rows_carry_shifted_degrees(disk1):
    table = sup_table(disk1, 2, l=2)
    rows = table.rows()
    assert rows[0] == ((0, 0, 0), (0, 0, 0), 0, (1,))
    for la, lb, deg, _ in rows:
        assert deg == la[1] + lb[1] + 4 * (la[0] + lb[0])


def test_ring_axioms(disk1, interval2):
    for sp in (disk1, interval2):
        table = sup_table(sp, 3)
        rep = verify_ring_axioms(table)
        assert rep, rep.line()
        assert rep.details["associativity"] > 0 and rep.details["commutativity"] > 0
        assert verify_unit_laws(table)


def test_degree_one_product_sign(disk1):
    # sup(1_1, x) for the H^1 generator x of C_2 is a generator of H^1(C_3)
    x = disk1.unordered(2).cohomology(1).generators()[0]
    y = sup(disk1, 1, 2, unit(disk1, 1), x)
    assert y.coordinates() in ((1,), (-1,))
    assert sup(disk1, 2, 1, x, unit(disk1, 1)) == y


def test_swap_square_naturality(disk1):
    """SP(swap) o f_{n,m} == f_{m,n} on cells, hence on cohomology."""
    n, m = 1, 2
    f1 = Span(disk1.cover(n, m), disk1.inclusion(n, m))
    f2 = Span(disk1.cover(m, n), disk1.inclusion(m, n))
    P, Q = disk1.product(n, m), disk1.product(m, n)

    def swap(key):
        a, b = key
        da, db = P.factor_dims(key)
        return (b, a), (-1) ** (da * db)

    h = CellMap.from_keys(P, Q, swap)
    g = identity_map(disk1.unordered(n + m))
    rep = verify_naturality(g, h, f1, f2, max_degree=1)
    assert rep and rep.details["precondition"]


def test_phi_factorization_examples():
    assert verify_phi_factorization(4)
    assert verify_phi_factorization(2, labels=(None,))


def test_superpose_points_examples():
    assert superpose_points({"a"}, {"b"}) == frozenset("ab")
    assert superpose_points({"a"}, {"a"}) is INFINITY
    assert superpose_points(INFINITY, {"b"}) is INFINITY
    assert superpose_points({"b"}, INFINITY) is INFINITY


def test_mu_factorization_counts():
    rep = verify_mu_factorization(range(3), 1, 1)
    assert rep and rep.details["finite_pairs_to_infinity"] == 3
    assert rep.checked == 16  # 9 finite pairs plus those involving infinity


def test_mu_with_empty_side_is_identity():
    for t in itertools.combinations(range(4), 2):
        assert superpose_points(frozenset(), t) == frozenset(t)
    assert verify_mu_factorization(range(4), 0, 2)


@given(st.integers(0, 6).flatmap(lambda g: st.tuples(st.just(g), st.integers(0, g), st.integers(0, g))))
@settings(max_examples=40, deadline=None)
def test_mu_factorization_property(gnm):
    g, n, m = gnm
    assert verify_mu_factorization(range(g), n, m)


def test_colour_separation_round_trip():
    c = separate_colors({1, 2}, {3})
    assert forget_colors(c) == frozenset({1, 2, 3})
    assert separate_colors({1}, {1}) is INFINITY


def test_degenerate_configurations_drop_out_of_phi():
    xi = LabelledConfig(frozenset({1, 2}), ((1, X0),))
    from confsup.formal_sums import phi_component
    assert phi_component(2, 1, 1, xi) == FormalSum()
