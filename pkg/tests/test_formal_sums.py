import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confsup.formal_sums import (
    BASEPOINT,
    EMPTY,
    X0,
    FormalSum,
    LabelledConfig,
    MalformedCover,
    all_configs,
    color_forget_presentation,
    colorings,
    cover_inverse,
    diag,
    multimap,
    phi,
    phi_component,
    psi,
    psi_component,
    scan,
    sum_add,
    triangle,
    verify_component_reassembly,
    verify_components,
    verify_psi_sigma_identity,
)

xi = LabelledConfig.of


def test_sum_add_examples():
    assert sum_add(EMPTY, EMPTY) == EMPTY
    assert sum_add(FormalSum({"x": 1}), FormalSum({"x": 2})) == FormalSum({"x": 3})
    assert sum_add(FormalSum({BASEPOINT: 1}), FormalSum({"y": 1})) == FormalSum({"y": 1})


def test_negative_multiplicities_rejected():
    with pytest.raises(ValueError):
        FormalSum({"x": -1})
    with pytest.raises(ValueError):
        -1 * FormalSum({"x": 1})


@given(*[st.dictionaries(st.sampled_from("abcd"), st.integers(0, 3)) for _ in range(3)])
def test_monoid_laws(a, b, c):
    A, B, C = FormalSum(a), FormalSum(b), FormalSum(c)
    assert (A + B) + C == A + (B + C)
    assert A + B == B + A
    assert A + EMPTY == A


def test_scan_examples():
    assert scan(xi()) == EMPTY
    assert scan(xi(1)) == FormalSum({xi(1): 1})
    assert scan(xi(1, 2)) == FormalSum({xi(1): 1, xi(2): 1, xi(1, 2): 1})


def test_scan_absorbs_degenerate_subconfigurations():
    c = LabelledConfig(frozenset({1, 2}), ((2, X0),))
    # every subset containing 2 is degenerate
    assert scan(c) == FormalSum({xi(1): 1})


def test_diag_examples():
    assert diag(xi(1)) == (xi(1), xi(1))
    assert diag(xi()) is BASEPOINT
    assert diag(xi(1, 2)) == (xi(1, 2), xi(1, 2))


def test_phi_examples():
    assert phi(xi(1)) == EMPTY
    assert phi(xi(1, 2)) == FormalSum({(xi(1), xi(2)): 1, (xi(2), xi(1)): 1})
    assert len(phi(xi(1, 2, 3))) == 6


def test_psi_examples():
    assert psi(xi(1)) == FormalSum({(xi(1), xi(1)): 1})
    assert len(psi(xi(1, 2))) == 7
    assert psi(xi()) == EMPTY


def _brute_force_pairs(points, disjoint):
    pts = sorted(points)
    subs = [frozenset(c) for r in range(1, len(pts) + 1) for c in itertools.combinations(pts, r)]
    out = set()
    for A, B in itertools.product(subs, subs):
        if A | B != set(pts):
            continue
        if disjoint and A & B:
            continue
        out.add((A, B))
    return out


@pytest.mark.parametrize("k", range(0, 7))
def test_term_counts_against_enumeration(k):
    c = LabelledConfig(frozenset(range(1, k + 1)))
    ph = {(a.points, b.points) for a, b in phi(c)}
    ps = {(a.points, b.points) for a, b in psi(c)}
    assert ph == _brute_force_pairs(c.points, True)
    assert ps == _brute_force_pairs(c.points, False)
    assert len(ph) == (2 ** k - 2 if k else 0)
    # ordered pairs of nonempty subsets covering I
    assert len(ps) == (3 ** k - 2 if k else 0)


def test_component_examples():
    assert phi_component(2, 1, 1, xi(1, 2)) == FormalSum({(xi(1), xi(2)): 1, (xi(2), xi(1)): 1})
    assert phi_component(3, 1, 1, xi(1, 2, 3)) == EMPTY
    assert len(phi_component(4, 2, 2, xi(1, 2, 3, 4))) == 6
    assert psi_component(2, 1, 1, xi(1, 2)) == phi_component(2, 1, 1, xi(1, 2))
    assert psi_component(3, 1, 1, xi(1, 2, 3)) == EMPTY
    assert psi_component(2, 2, 1, xi(1, 2)) == FormalSum({(xi(1, 2), xi(1)): 1, (xi(1, 2), xi(2)): 1})


def test_component_size_mismatch_raises():
    with pytest.raises(ValueError):
        phi_component(3, 1, 2, xi(1, 2))


def test_triangle_examples():
    f = multimap(lambda a: FormalSum({"x": 2}) if a == "a" else EMPTY)
    g = multimap(lambda c: FormalSum({"y": 1, "z": 1}))
    assert triangle(f, g)(("a", "c")) == FormalSum({("x", "y"): 2, ("x", "z"): 2})
    assert triangle(f, g)(("b", "c")) == EMPTY
    one = multimap(lambda a: FormalSum({"x": 1}))
    assert triangle(one, one)(("a", "c")) == FormalSum({("x", "x"): 1})


def test_cover_inverse_examples():
    ident = cover_inverse({"x": "x", "y": "y"})
    assert ident("x") == FormalSum({"x": 1}) and ident.degree == 1
    two = cover_inverse({"x1": "x", "x2": "x"})
    assert two("x") == FormalSum({"x1": 1, "x2": 1})
    with pytest.raises(MalformedCover):
        cover_inverse({"x1": "x", "x2": "x", "y1": "y"})
    with pytest.raises(MalformedCover):
        cover_inverse({"x1": "x"}, degree=2)


def test_colour_forgetting_inverse_on_two_points():
    configs = [xi("a", "b")]
    inv = cover_inverse(color_forget_presentation(configs, 1, 1), 2, base=configs)
    terms = {(c.blocks[0].points, c.blocks[1].points) for c in inv(xi("a", "b"))}
    assert terms == {(frozenset("a"), frozenset("b")), (frozenset("b"), frozenset("a"))}


@given(st.integers(1, 4), st.integers(0, 4))
def test_cover_inverse_then_forward_is_degree_times_identity(k, n):
    n = min(n, k)
    configs = [c for c in all_configs(k) if len(c) == k]
    forward = color_forget_presentation(configs, n, k - n)
    inv = cover_inverse(forward)
    for c in configs:
        assert inv(c).map(lambda t: forward[t]) == FormalSum({c: len(colorings(c, (n, k - n)))})
    assert inv.check_span()


def test_psi_sigma_identity_suite():
    assert verify_psi_sigma_identity(0)
    assert verify_psi_sigma_identity(4)
    assert verify_psi_sigma_identity(3, labels=(None, "a", X0))


def test_psi_sigma_on_two_points_is_all_pairs_of_subsets():
    c = xi(1, 2)
    lhs = scan(c).bind(psi)
    rhs = triangle(multimap(scan), multimap(scan))(diag(c))
    subs = [xi(1), xi(2), xi(1, 2)]
    assert lhs == rhs == FormalSum({(a, b): 1 for a in subs for b in subs})
    assert lhs.size() == 9


def test_component_suites():
    assert verify_components(6)
    assert verify_component_reassembly(5)


def test_multimap_sends_basepoint_to_empty():
    m = multimap(scan)
    assert m(xi()) == EMPTY
    assert m(LabelledConfig(frozenset({1}), marked=frozenset({1}))) == EMPTY
