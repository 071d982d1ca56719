import pytest

from confsup import fixtures
from confsup.core.cohomology import CohomologyClass, cohomology, unit_class
from confsup.core.complexes import build_complex
from confsup.covers import identity_cover
from confsup.thom import (
    BundleError,
    BundlePair,
    cube,
    pullback_bundle,
    thom_class,
    thom_class_unique,
    thom_iso,
    trivial_bundle,
    verify_lemma42_square,
    verify_pulled_thom_class,
    verify_thom_isomorphism,
)


def point():
    return build_complex([[0]], name="point")


def test_rank_one_bundle_over_a_point_is_the_interval_pair():
    b = trivial_bundle(point())
    u = thom_class(b)
    assert u.is_cocycle()
    assert b.pair.cohomology(1).n_generators == 1
    assert u.coordinates() in ((1,), (-1,))
    assert thom_class_unique(b)


@pytest.mark.parametrize("base", [fixtures.circle(3), fixtures.interval(2), fixtures.disk()])
@pytest.mark.parametrize("rank", [1, 2])
def test_trivial_bundles_are_certified(base, rank):
    b = trivial_bundle(base, rank)
    assert b.check_fibers()
    assert thom_class_unique(b)
    assert verify_thom_isomorphism(b)


def test_cube_has_relative_top_class():
    F = cube(2)
    assert F.f_vector == [4, 5, 2]
    assert F.betti_numbers() == [1, 0, 0]


def test_thom_iso_of_unit_is_thom_class():
    b = trivial_bundle(fixtures.circle(3))
    assert thom_iso(b, unit_class(b.base)) == thom_class(b)


def test_thom_iso_of_zero_is_zero():
    b = trivial_bundle(fixtures.circle(3))
    zero = b.base.cohomology(1).zero()
    assert thom_iso(b, zero).is_zero()


def test_thom_iso_of_circle_generator_generates_degree_two():
    b = trivial_bundle(fixtures.circle(3))
    (a,) = cohomology(b.base, 1)
    image = thom_iso(b, a)
    assert image.degree == 2
    assert b.pair.cohomology(2).rank == 1
    assert image.coordinates() in ((1,), (-1,))


def test_pulled_back_thom_class_is_a_thom_class(cover_table):
    p = cover_table["circle-double"]
    b = trivial_bundle(p.base)
    bc = pullback_bundle(b, p)
    assert verify_pulled_thom_class(bc)
    assert bc.bundle.check_fibers()
    assert bc.cover.degree == 2


@pytest.mark.parametrize("name", ["identity-circle", "circle-double", "circle-triple", "circle-trivial-double",
                                  "identity-interval", "interval-trivial-double"])
def test_thom_transfer_square(cover_table, name):
    p = cover_table[name]
    rep = verify_lemma42_square(trivial_bundle(p.base), p)
    assert rep and rep.checked >= 1


def test_square_on_unit_gives_degree_times_thom_class(cover_table):
    p = cover_table["circle-double"]
    b = trivial_bundle(p.base)
    lhs = thom_iso(b, 2 * unit_class(p.base))
    assert lhs == 2 * thom_class(b)


def test_identity_cover_square_reduces_to_thom_iso():
    C = fixtures.circle(3)
    assert verify_lemma42_square(trivial_bundle(C), identity_cover(C))


def test_bad_orientation_has_no_thom_class():
    b = trivial_bundle(fixtures.interval(1))
    # flip the orientation over one vertex only
    flipped = dict(b.fiber_cycles)
    v = sorted(flipped)[0]
    flipped[v] = {s: -c for s, c in flipped[v].items()}
    bad = BundlePair(b.base, b.disk, b.sphere, b.projection, 1, flipped, fiber=b.fiber)
    assert not bad.check_fibers()
    with pytest.raises(BundleError):
        thom_class(bad)


def test_sphere_must_be_subcomplex():
    b = trivial_bundle(point())
    with pytest.raises(BundleError):
        BundlePair(b.base, b.sphere, b.disk, b.projection, 1, b.fiber_cycles)


def test_broken_cocycle_is_detected():
    b = trivial_bundle(fixtures.circle(3))
    u = thom_class(b)
    broken = CohomologyClass(b.pair, 1, [x + (i == 0) for i, x in enumerate(u.values)])
    assert not broken.is_cocycle() or broken != u
